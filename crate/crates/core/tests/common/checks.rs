use std::cell::Cell;
use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use acc2omp::diag::Code;
use acc2omp::directive::{
    parse_acc, parse_omp, scan_directives, AccDirective, AccKind, Dialect, OmpDirective, SourceUnit,
};
use acc2omp::lab::{generate_variant, jacobi_solve, peak_flops, JacobiParams, PeakSpec, Variant};
use acc2omp::mapping::{map_directive, ConstructStack, Finding, KernelsPolicy, MappingConfig};
use acc2omp::rewrite::{emit_acc, emit_omp, translate_unit, verify_pair, PositionStatus, RewritePlan};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use super::fixtures::{self, golden_config, variant_unit};
use super::oracle::{dense_laplace, max_abs_diff, unit_top_edge};
use super::{ensure, gen, runner};

pub type Check = Result<String, String>;

// Golden pair

pub fn golden_pair() -> Check {
    let acc = variant_unit(Variant::AccData);
    let omp = variant_unit(Variant::OmpData);
    let report = verify_pair(&acc, &omp, &golden_config()).map_err(|d| format!("diagnostics: {d:?}"))?;
    ensure(report.positions.len() == 6, || {
        format!("{} positions, expected 6", report.positions.len())
    })?;
    ensure(report.is_match(), || format!("not a match:\n{report}"))?;

    // The translated text itself must pair with the reference, too.
    let out = translate_unit(&acc, &golden_config())
        .output
        .ok_or("translation withheld")?;
    let translated = SourceUnit::from_text("translated.f90", &out, None).unwrap();
    let again = verify_pair(&translated, &omp, &MappingConfig::default()).map_err(|d| format!("{d:?}"))?;
    ensure(again.is_match() && again.positions.len() == 6, || {
        format!("translated file:\n{again}")
    })?;
    Ok("6 positions, 0 mismatches".into())
}

pub fn golden_pair_without_schedule() -> Check {
    let acc = variant_unit(Variant::AccData);
    let omp = variant_unit(Variant::OmpData);
    let report = verify_pair(&acc, &omp, &MappingConfig::default()).map_err(|d| format!("{d:?}"))?;
    ensure(report.mismatches() == 2, || {
        format!("{} mismatches, expected 2:\n{report}", report.mismatches())
    })?;
    for p in report.positions.iter().filter(|p| !p.is_match()) {
        let expected = PositionStatus::Mismatch {
            kind_differs: false,
            only_translated: vec![],
            only_reference: vec!["schedule(static,1)".into()],
        };
        ensure(p.status == expected, || format!("position {}: {:?}", p.index, p.status))?;
    }
    Ok("2 mismatches, both the reference-only schedule(static,1)".into())
}

// Mapping table

/// (OpenACC directives in order, expected OpenMP for the last one).
pub struct Row {
    pub acc: &'static [&'static str],
    pub omp: &'static str,
}

const fn row(acc: &'static [&'static str], omp: &'static str) -> Row {
    Row { acc, omp }
}

pub const TABLE: &[Row] = &[
    row(&["parallel"], "target teams"),
    row(
        &["parallel loop gang worker vector"],
        "target teams distribute parallel do simd",
    ),
    row(&["parallel loop"], "target teams distribute parallel do simd"),
    row(&["data"], "target data"),
    row(&["loop gang"], "teams distribute"),
    row(&["loop worker"], "parallel simd"),
    row(&["loop vector"], "parallel simd"),
    row(&["data create(a)"], "target data map(alloc:a)"),
    row(&["data copy(a)"], "target data map(tofrom:a)"),
    row(&["data copyin(a)"], "target data map(to:a)"),
    row(&["data copyout(a)"], "target data map(from:a)"),
    row(&["data copyin(f) copyout(f_k)"], "target data map(to:f) map(from:f_k)"),
    row(&["parallel num_gangs(80)"], "target teams num_teams(80)"),
    row(&["parallel num_workers(8)"], "target teams num_threads(8)"),
    row(
        &["parallel loop reduction(max:max_err)"],
        "target teams distribute parallel do simd reduction(max:max_err)",
    ),
    row(
        &["parallel loop collapse(2)"],
        "target teams distribute parallel do simd collapse(2)",
    ),
    row(
        &["parallel loop private(i,j)"],
        "target teams distribute parallel do simd private(i,j)",
    ),
    row(&["parallel firstprivate(n)"], "target teams firstprivate(n)"),
    row(&["parallel", "end parallel"], "end target teams"),
    row(
        &["parallel loop", "end parallel"],
        "end target teams distribute parallel do simd",
    ),
    row(&["data", "end data"], "end target data"),
];

fn map_sequence(payloads: &[&str], config: &MappingConfig) -> Result<(Option<OmpDirective>, Vec<Finding>), String> {
    let mut stack = ConstructStack::new();
    let mut last = None;
    for (n, p) in payloads.iter().enumerate() {
        let d = parse_acc(p, Dialect::FortranFree).map_err(|e| format!("`{p}`: {e}"))?;
        last = Some(map_directive(&d, &mut stack, config, Dialect::FortranFree, n + 1));
    }
    last.ok_or_else(|| "empty row".into())
}

pub fn table_conformance() -> Check {
    let config = MappingConfig::default();
    for r in TABLE {
        let (out, findings) = map_sequence(r.acc, &config)?;
        let expected = parse_omp(r.omp, Dialect::FortranFree).map_err(|e| format!("`{}`: {e}", r.omp))?;
        ensure(out.as_ref() == Some(&expected), || {
            format!("{:?} gave {out:?}, expected `{}`", r.acc, r.omp)
        })?;
        ensure(findings.iter().all(|f| !f.is_error()), || {
            format!("{:?}: {findings:?}", r.acc)
        })?;
    }

    let (out, findings) = map_sequence(&["kernels"], &config)?;
    let codes: Vec<Code> = findings.iter().map(|f| f.code).collect();
    ensure(out.is_none() && codes == [Code::E101], || {
        format!("kernels: {out:?} {codes:?}")
    })?;

    let (out, findings) = map_sequence(&["parallel loop vector_length(128)"], &config)?;
    let codes: Vec<Code> = findings.iter().map(|f| f.code).collect();
    let expected = parse_omp("target teams distribute parallel do simd", Dialect::FortranFree).unwrap();
    ensure(out == Some(expected) && codes == [Code::W102], || {
        format!("vector_length: {out:?} {codes:?}")
    })?;

    Ok(format!(
        "{} mapped rows exact, kernels -> E101, vector_length -> W102",
        TABLE.len()
    ))
}

// Peak FLOPS

pub fn peak_flops_value() -> Check {
    let v = peak_flops(&PeakSpec::new(1.38e9, 5120, 1.0f64).unwrap()).map_err(|e| e.to_string())?;
    ensure(v == 7.0656e12, || format!("got {v:e}"))?;
    let rel = (v - 7.065e12).abs() / 7.065e12;
    ensure(rel <= 1e-4, || format!("relative difference {rel:e} from 7.065e12"))?;
    Ok(format!("{v:.4e} FLOPS, {:.4}% from 7.065e12", rel * 100.0))
}

pub fn peak_flops_homogeneity(cases: u32) -> Check {
    let spec = (1.0e6..5.0e9f64, 1u64..100_000, 0.25..64.0f64, 1.0e-3..1.0e3f64);
    runner(cases)
        .run(&spec, |(clock, cores, fpc, k)| {
            let base = peak_flops(&PeakSpec::new(clock, cores, fpc).unwrap()).unwrap();
            let scaled = peak_flops(&PeakSpec::new(k * clock, cores, fpc).unwrap()).unwrap();
            let rel = (scaled - k * base).abs() / (k * base);
            prop_assert!(
                rel <= 4.0 * f64::EPSILON,
                "k={k} clock={clock} cores={cores} fpc={fpc}: rel {rel:e}"
            );
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("{cases} random specs"))
}

// Numerical oracle

pub struct OracleRun {
    pub nx: usize,
    pub ny: usize,
    pub error: f64,
}

/// Jacobi against the direct solve on one grid, with the maximum principle and
/// residual bound checked on the converged field.
pub fn oracle_case(nx: usize, ny: usize, tolerance: f64) -> Result<OracleRun, String> {
    let p = JacobiParams::new(nx, ny, tolerance, 1_000_000).unwrap();
    let field = jacobi_solve(&p).unwrap();
    ensure(field.converged(tolerance), || format!("{nx}x{ny} did not converge"))?;

    let exact = dense_laplace(nx, ny, unit_top_edge(ny));
    let error = max_abs_diff(field.values(), &exact);

    let (lo, hi) = (0.0, 1.0);
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let v = field.get(i, j);
            ensure((lo..=hi).contains(&v), || {
                format!("{nx}x{ny}: ({i},{j}) = {v} outside [{lo}, {hi}]")
            })?;
        }
    }
    let residual = field.residual();
    ensure(residual <= 2.0 * tolerance, || {
        format!("{nx}x{ny}: residual {residual:e}")
    })?;
    Ok(OracleRun { nx, ny, error })
}

pub fn oracle_sweep() -> Check {
    let mut worst = OracleRun {
        nx: 0,
        ny: 0,
        error: 0.0,
    };
    for nx in 4..=16 {
        for ny in 4..=16 {
            let run = oracle_case(nx, ny, 1e-10)?;
            ensure(run.error <= 1e-8, || {
                format!("{nx}x{ny}: max-norm error {:e}", run.error)
            })?;
            if run.error > worst.error {
                worst = run;
            }
        }
    }
    Ok(format!(
        "169 grids, worst {:.2e} at {}x{}",
        worst.error, worst.nx, worst.ny
    ))
}

// Property suites

fn file_name(dialect: Dialect) -> &'static str {
    match dialect {
        Dialect::FortranFree => "x.f90",
        Dialect::C => "x.c",
    }
}

/// Scans emitted lines back into one logical directive payload.
fn rescan(lines: &[String], dialect: Dialect, width: usize) -> Result<String, TestCaseError> {
    for l in lines {
        prop_assert!(l.chars().count() <= width, "`{l}` exceeds {width} columns");
    }
    let text = format!("{}\n", lines.join("\n"));
    let unit = SourceUnit::from_text(file_name(dialect), &text, None).unwrap();
    let found = scan_directives(&unit).map_err(|d| TestCaseError::fail(format!("{d:?}")))?;
    prop_assert_eq!(found.len(), 1);
    prop_assert_eq!(found[0].line_span, lines.len());
    Ok(found[0].payload.clone())
}

const WIDTHS: [usize; 3] = [40, 80, 132];

fn indent_for(width: usize) -> &'static str {
    if width >= 80 {
        "      "
    } else {
        ""
    }
}

pub fn emit_round_trip(cases: u32) -> Check {
    let multi_line = Cell::new(0usize);
    for dialect in [Dialect::FortranFree, Dialect::C] {
        runner(cases)
            .run(&gen::omp_directive(dialect), |d| {
                for w in WIDTHS {
                    let lines =
                        emit_omp(&d, dialect, indent_for(w), w).map_err(|e| TestCaseError::fail(e.to_string()))?;
                    multi_line.set(multi_line.get() + usize::from(lines.len() > 1));
                    let payload = rescan(&lines, dialect, w)?;
                    let back =
                        parse_omp(&payload, dialect).map_err(|e| TestCaseError::fail(format!("`{payload}`: {e}")))?;
                    prop_assert_eq!(&back, &d);
                }
                Ok(())
            })
            .map_err(|e| format!("OpenMP {dialect}: {e}"))?;
        runner(cases)
            .run(&gen::acc_directive(dialect), |d: AccDirective| {
                for w in WIDTHS {
                    let lines =
                        emit_acc(&d, dialect, indent_for(w), w).map_err(|e| TestCaseError::fail(e.to_string()))?;
                    let payload = rescan(&lines, dialect, w)?;
                    let back =
                        parse_acc(&payload, dialect).map_err(|e| TestCaseError::fail(format!("`{payload}`: {e}")))?;
                    prop_assert_eq!(&back, &d);
                }
                Ok(())
            })
            .map_err(|e| format!("OpenACC {dialect}: {e}"))?;
    }
    Ok(format!(
        "{} ASTs x 3 widths, {} wrapped emissions",
        4 * cases,
        multi_line.get()
    ))
}

/// Reinserts the original directive lines into the translated output.
fn restore(plan: &RewritePlan) -> Result<Vec<String>, String> {
    let output = plan.output_lines();
    let mut restored = Vec::with_capacity(plan.unit.lines.len());
    let mut cursor = 0;
    let mut consumed = 0;
    for edit in &plan.edits {
        let start = edit.directive.line_range().start;
        let copied = start - consumed;
        restored.extend_from_slice(&output[cursor..cursor + copied]);
        cursor += copied;
        let emitted = &output[cursor..cursor + edit.replacement.len()];
        ensure(emitted == edit.replacement.as_slice(), || {
            format!("edit at line {start} misplaced")
        })?;
        cursor += edit.replacement.len();
        restored.extend(edit.directive.raw.iter().cloned());
        consumed = start + edit.directive.line_span;
    }
    restored.extend_from_slice(&output[cursor..]);
    Ok(restored)
}

pub fn corpus_idempotence_and_bytes() -> Check {
    let mut translated = 0;
    let mut texts: Vec<(String, String)> = Variant::ALL
        .into_iter()
        .map(|v| (v.file_name().to_owned(), fixtures::variant_text(v)))
        .collect();
    texts.extend(fixtures::hand_fixtures().into_iter().map(|(n, t)| (n.to_owned(), t)));

    let configs = [
        MappingConfig::default(),
        golden_config(),
        MappingConfig {
            kernels_policy: KernelsPolicy::TargetTeams,
            ..golden_config()
        },
    ];
    for (name, text) in &texts {
        let unit = SourceUnit::from_text(name.as_str(), text, None).unwrap();
        ensure(unit.to_text() == *text, || format!("{name}: unit does not round-trip"))?;
        for config in &configs {
            let plan = RewritePlan::build(&unit, config);
            ensure(!plan.diagnostics.iter().any(|d| d.code == Code::E103), || {
                format!("{name}: unbalanced stack")
            })?;

            let restored = restore(&plan)?;
            ensure(restored == unit.lines, || {
                format!("{name}: restoring originals does not reproduce the input")
            })?;

            let t = translate_unit(&unit, config);
            let Some(out) = t.output else { continue };
            let once = SourceUnit::from_text(name.as_str(), &out, Some(unit.dialect)).unwrap();
            let twice = translate_unit(&once, config);
            ensure(twice.output.as_deref() == Some(out.as_str()), || {
                format!("{name}: second pass changed the text")
            })?;
            ensure(twice.diagnostics.is_empty(), || {
                format!("{name}: second pass reported {:?}", twice.diagnostics)
            })?;
            ensure(
                !out.lines().any(|l| l.contains("$acc") || l.contains("pragma acc")),
                || format!("{name}: OpenACC left in output"),
            )?;
            translated += 1;
        }
    }
    Ok(format!(
        "{} files x {} configs, {translated} translations idempotent",
        texts.len(),
        configs.len()
    ))
}

fn end_opener(kind: AccKind) -> Option<&'static str> {
    match kind {
        AccKind::EndParallel => Some("parallel"),
        AccKind::EndKernels => Some("kernels"),
        AccKind::EndData => Some("data"),
        _ => None,
    }
}

/// Every directive maps to output or an error, and every clause is kept,
/// absorbed into the construct, or named by a diagnostic.
pub fn mapping_totality(cases: u32) -> Check {
    let counted = Cell::new(0usize);
    for dialect in [Dialect::FortranFree, Dialect::C] {
        let strategy = (gen::acc_directive(dialect), gen::mapping_config(), any::<bool>());
        runner(cases)
            .run(&strategy, |(d, config, open_first)| {
                let mut stack = ConstructStack::new();
                if let (Some(opener), true) = (end_opener(d.kind), open_first) {
                    let o = parse_acc(opener, dialect).unwrap();
                    map_directive(&o, &mut stack, &config, dialect, 1);
                }
                let (out, findings) = map_directive(&d, &mut stack, &config, dialect, 2);
                let errors = findings.iter().filter(|f| f.is_error()).count();
                let Some(omp) = out else {
                    prop_assert!(errors > 0, "{d:?} dropped without an error");
                    return Ok(());
                };
                prop_assert_eq!(errors, 0);

                let absorbed = d
                    .clauses
                    .iter()
                    .filter(|c| matches!(c.name.as_str(), "gang" | "worker" | "vector"))
                    .count();
                let dropped = findings.iter().filter(|f| f.code == Code::W102).count();
                let injected = omp.clauses.iter().filter(|c| c.name == "schedule").count();
                prop_assert_eq!(
                    omp.clauses.len(),
                    d.clauses.len() - absorbed - dropped + injected,
                    "{:?} -> {:?}",
                    d,
                    omp
                );
                if injected > 0 {
                    prop_assert!(findings.iter().any(|f| f.code == Code::I201));
                }
                counted.set(counted.get() + 1);
                Ok(())
            })
            .map_err(|e| format!("{dialect}: {e}"))?;
    }
    Ok(format!(
        "{} directives, {} mapped with clause bookkeeping",
        2 * cases,
        counted.get()
    ))
}

/// Mapping the same directive from the same state twice agrees.
pub fn mapping_determinism(cases: u32) -> Check {
    let strategy = (gen::acc_directive(Dialect::FortranFree), gen::mapping_config());
    runner(cases)
        .run(&strategy, |(d, config)| {
            let a = map_directive(&d, &mut ConstructStack::new(), &config, Dialect::FortranFree, 1);
            let b = map_directive(&d, &mut ConstructStack::new(), &config, Dialect::FortranFree, 1);
            prop_assert_eq!(a, b);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("{cases} directives"))
}

// CLI contract

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_acc2omp"))
}

pub fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

const DIAG_KEYS: [&str; 6] = ["code", "excerpt", "file", "line", "message", "severity"];

/// Parses `--diag=json` output and checks the object schema.
pub fn json_diagnostics(stderr: &[u8]) -> Result<Vec<serde_json::Value>, String> {
    let text = String::from_utf8_lossy(stderr);
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| format!("not JSON ({e}): {text}"))?;
    let items = value.as_array().ok_or_else(|| format!("not an array: {text}"))?.clone();
    for item in &items {
        let obj = item.as_object().ok_or("diagnostic is not an object")?;
        let keys: BTreeSet<&str> = obj.keys().map(String::as_str).collect();
        ensure(keys == BTreeSet::from(DIAG_KEYS), || format!("keys {keys:?}"))?;
        ensure(obj["line"].is_u64() && obj["line"].as_u64() > Some(0), || {
            "line is not a positive integer".into()
        })?;
        let severity = obj["severity"].as_str().unwrap_or("");
        ensure(["error", "warning", "info"].contains(&severity), || {
            format!("severity `{severity}`")
        })?;
        let code = obj["code"].as_str().unwrap_or("");
        ensure(Code::ALL.iter().any(|c| c.as_str() == code), || {
            format!("unknown code `{code}`")
        })?;
        ensure(
            obj["file"].is_string() && obj["message"].is_string() && obj["excerpt"].is_string(),
            || "file, message and excerpt must be strings".into(),
        )?;
    }
    Ok(items)
}

fn codes_of(items: &[serde_json::Value]) -> Vec<String> {
    items.iter().map(|i| i["code"].as_str().unwrap().to_owned()).collect()
}

fn expect_exit(o: &Output, expected: i32, what: &str) -> Result<(), String> {
    ensure(code(o) == expected, || {
        format!(
            "{what}: exit {} (expected {expected}); stderr: {}",
            code(o),
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

pub fn cli_contract() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = tmp.path();
    let mut checked = 0;

    // Fixture matrix: exit code, schema, codes and sibling output agree with the library.
    let mut files: Vec<(String, String)> = Variant::ALL
        .into_iter()
        .map(|v| (v.file_name().to_owned(), fixtures::variant_text(v)))
        .collect();
    files.extend(fixtures::hand_fixtures().into_iter().map(|(n, t)| (n.to_owned(), t)));
    for (name, text) in &files {
        fs::write(dir.join(name), text).unwrap();
    }
    let expected_exit = |name: &str| match name {
        "kernels_demo.f90" | "broken.f90" => 1,
        _ => 0,
    };
    for (name, text) in &files {
        let o = run(dir, &["translate", name, "--diag=json"]);
        expect_exit(&o, expected_exit(name), name)?;
        let items = json_diagnostics(&o.stderr).map_err(|e| format!("{name}: {e}"))?;
        let lib = translate_unit(
            &SourceUnit::from_text(name.as_str(), text, None).unwrap(),
            &MappingConfig::default(),
        );
        let lib_codes: Vec<String> = lib.diagnostics.iter().map(|d| d.code.as_str().to_owned()).collect();
        ensure(codes_of(&items) == lib_codes, || {
            format!("{name}: {:?} vs library {lib_codes:?}", codes_of(&items))
        })?;
        let lines: Vec<u64> = items.iter().map(|i| i["line"].as_u64().unwrap()).collect();
        ensure(lines.windows(2).all(|w| w[0] <= w[1]), || {
            format!("{name}: diagnostics out of source order")
        })?;

        let sibling = dir.join(acc2omp::cli::sibling_path(Path::new(name)));
        match lib.output {
            Some(out) => {
                let written = fs::read_to_string(&sibling).map_err(|e| format!("{name}: {e}"))?;
                ensure(written == out, || {
                    format!("{name}: sibling differs from library output")
                })?;
            }
            None => ensure(!sibling.exists(), || format!("{name}: partial output written"))?,
        }
        checked += 1;
    }

    let o = run(dir, &["translate", "kernels_demo.f90", "--diag=json"]);
    let items = json_diagnostics(&o.stderr)?;
    ensure(codes_of(&items) == ["E101"] && items[0]["line"] == 4, || {
        format!("kernels_demo: {items:?}")
    })?;

    // Golden pair through the binary.
    let o = run(dir, &["translate", "laplace_acc.f90", "--inject-schedule=static,1"]);
    expect_exit(&o, 0, "golden translate")?;
    expect_exit(
        &run(dir, &["verify", "laplace_acc.omp.f90", "laplace_omp.f90"]),
        0,
        "verify translated",
    )?;
    expect_exit(
        &run(
            dir,
            &[
                "verify",
                "laplace_acc.f90",
                "laplace_omp.f90",
                "--inject-schedule=static,1",
            ],
        ),
        0,
        "verify",
    )?;
    let o = run(dir, &["verify", "laplace_acc.f90", "laplace_omp.f90", "--diag=json"]);
    expect_exit(&o, 1, "verify without schedule")?;
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).map_err(|e| format!("verify JSON: {e}"))?;
    let positions = report["positions"].as_array().ok_or("verify JSON lacks positions")?;
    let mismatched = positions.iter().filter(|p| p["status"] != "match").count();
    ensure(positions.len() == 6 && mismatched == 2, || {
        format!("verify JSON: {report}")
    })?;

    // Warnings fail only under --fail-on-warning, and then nothing is written.
    let strict_dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    fs::write(strict_dir.path().join("vl.f90"), fixtures::VECTOR_LENGTH_DEMO).unwrap();
    let o = run(
        strict_dir.path(),
        &["translate", "vl.f90", "--fail-on-warning", "--diag=json"],
    );
    expect_exit(&o, 1, "fail-on-warning")?;
    ensure(codes_of(&json_diagnostics(&o.stderr)?) == ["W102"], || {
        "fail-on-warning codes".into()
    })?;
    ensure(!strict_dir.path().join("vl.omp.f90").exists(), || {
        "fail-on-warning wrote output".into()
    })?;
    let o = run(
        strict_dir.path(),
        &["translate", "vl.f90", "--keep-vector-length-error"],
    );
    expect_exit(&o, 1, "keep-vector-length-error")?;
    expect_exit(
        &run(strict_dir.path(), &["translate", "vl.f90"]),
        0,
        "vector_length default",
    )?;
    expect_exit(
        &run(dir, &["translate", "kernels_demo.f90", "--kernels=target-teams"]),
        0,
        "kernels fallback",
    )?;

    // All or nothing per unit in a batch.
    let batch = tempfile::tempdir().map_err(|e| e.to_string())?;
    fs::write(batch.path().join("broken.f90"), fixtures::BROKEN_MID_FILE).unwrap();
    fs::write(batch.path().join("saxpy.c"), fixtures::SAXPY_C).unwrap();
    let o = run(batch.path(), &["translate", "broken.f90", "saxpy.c", "--diag=json"]);
    expect_exit(&o, 1, "batch")?;
    ensure(codes_of(&json_diagnostics(&o.stderr)?) == ["E002"], || {
        "batch codes".into()
    })?;
    ensure(!batch.path().join("broken.omp.f90").exists(), || {
        "broken unit written".into()
    })?;
    ensure(batch.path().join("saxpy.omp.c").exists(), || {
        "good unit not written".into()
    })?;

    // In place keeps a backup; a failing unit is left alone.
    let o = run(
        batch.path(),
        &["translate", "saxpy.c", "broken.f90", "--output=in-place"],
    );
    expect_exit(&o, 1, "in-place")?;
    let backup = fs::read_to_string(batch.path().join("saxpy.c.bak")).map_err(|e| e.to_string())?;
    ensure(backup == fixtures::SAXPY_C, || "backup differs from original".into())?;
    let rewritten = fs::read_to_string(batch.path().join("saxpy.c")).unwrap();
    ensure(
        rewritten.contains("#pragma omp target teams distribute parallel for simd"),
        || rewritten.clone(),
    )?;
    ensure(
        fs::read_to_string(batch.path().join("broken.f90")).unwrap() == fixtures::BROKEN_MID_FILE,
        || "failing unit modified in place".into(),
    )?;
    ensure(!batch.path().join("broken.f90.bak").exists(), || {
        "backup of failing unit".into()
    })?;

    // Stdout mode and an empty JSON array on success.
    let o = run(dir, &["translate", "continued.f90", "--output=stdout", "--diag=json"]);
    expect_exit(&o, 0, "stdout")?;
    let lib = translate_unit(
        &SourceUnit::from_text("continued.f90", fixtures::CONTINUED, None).unwrap(),
        &MappingConfig::default(),
    );
    ensure(
        Some(String::from_utf8_lossy(&o.stdout).into_owned()) == lib.output,
        || "stdout differs".into(),
    )?;
    ensure(json_diagnostics(&o.stderr)?.is_empty(), || "expected []".into())?;

    // Usage and I/O errors.
    for (args, what) in [
        (&["translate", "missing.f90"][..], "missing input"),
        (&["translate"][..], "no input"),
        (&["translate", "continued.f90", "--kernels=loose"][..], "bad policy"),
        (
            &["translate", "continued.f90", "--inject-schedule=static"][..],
            "bad schedule",
        ),
        (
            &["translate", "continued.f90", "saxpy.c", "--output=stdout"][..],
            "stdout with two inputs",
        ),
        (&["translate", "continued.f90", "missing.f90"][..], "one missing input"),
        (&["frobnicate"][..], "unknown subcommand"),
        (
            &["flops", "--clock-ghz", "0", "--cores", "1", "--flop-per-cycle", "1"][..],
            "zero clock",
        ),
    ] {
        expect_exit(&run(dir, args), 2, what)?;
    }
    fs::write(dir.join("notes.txt"), "!$acc parallel\n!$acc end parallel\n").unwrap();
    expect_exit(&run(dir, &["translate", "notes.txt"]), 2, "unknown extension")?;
    expect_exit(
        &run(dir, &["translate", "notes.txt", "--dialect=fortran", "--output=stdout"]),
        0,
        "dialect override",
    )?;
    expect_exit(&run(dir, &["--help"]), 0, "help")?;

    // Corpus and flops subcommands.
    let o = run(
        dir,
        &[
            "corpus",
            "--variant",
            "acc-data",
            "--nx",
            "64",
            "--ny",
            "32",
            "--out",
            "gen.f90",
        ],
    );
    expect_exit(&o, 0, "corpus")?;
    let expected = generate_variant(Variant::AccData, &JacobiParams::new(64, 32, 1e-3, 10_000).unwrap());
    ensure(fs::read_to_string(dir.join("gen.f90")).unwrap() == expected, || {
        "corpus output differs".into()
    })?;
    let o = run(
        dir,
        &[
            "flops",
            "--clock-ghz",
            "1.38",
            "--cores",
            "5120",
            "--flop-per-cycle",
            "1",
        ],
    );
    expect_exit(&o, 0, "flops")?;
    let stdout = String::from_utf8_lossy(&o.stdout);
    ensure(
        stdout.contains("7.065600e12") && stdout.contains("7.0656 TFLOPS"),
        || stdout.to_string(),
    )?;

    Ok(format!(
        "{checked} fixtures in the matrix, exit codes 0/1/2 and JSON schema hold"
    ))
}
