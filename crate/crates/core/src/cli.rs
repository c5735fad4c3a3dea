//! Command-line front end.
//!
//! Exit codes: 0 success, 1 translation or verification failure (any error
//! diagnostic, or any warning under `--fail-on-warning`), 2 usage or I/O
//! error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::diag::{self, Diagnostic};
use crate::directive::{Dialect, SourceUnit};
use crate::lab::{generate_variant, peak_flops, JacobiParams, PeakSpec, Variant};
use crate::mapping::{KernelsPolicy, MappingConfig, ScheduleInjection};
use crate::rewrite::{translate_unit, verify_pair, Translation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "acc2omp",
    version,
    about = "Translate OpenACC directives to OpenMP target offload"
)]
pub struct CliInvocation {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rewrite OpenACC directives as OpenMP.
    Translate(TranslateArgs),
    /// Check that an OpenACC file translates to the directives of an OpenMP file.
    Verify(VerifyArgs),
    /// Generate a Laplace mini-application variant.
    Corpus(CorpusArgs),
    /// Theoretical peak FLOPS: clock x cores x FLOP/cycle.
    Flops(FlopsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Stdout,
    /// `<name>.omp.<ext>` next to the input.
    Sibling,
    /// Overwrite the input, keeping `<file>.bak`.
    InPlace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiagFormat {
    Human,
    Json,
}

#[derive(Debug, Args)]
pub struct MappingArgs {
    #[arg(long, value_name = "strict|target-teams", default_value = "strict", value_parser = |s: &str| s.parse::<KernelsPolicy>())]
    pub kernels: KernelsPolicy,
    /// Append `schedule(kind,chunk)` to combined loop constructs.
    #[arg(long, value_name = "kind,chunk", value_parser = |s: &str| s.parse::<ScheduleInjection>())]
    pub inject_schedule: Option<ScheduleInjection>,
    /// Treat `vector_length` as an error instead of dropping it.
    #[arg(long)]
    pub keep_vector_length_error: bool,
    /// Exit 1 and write nothing when any warning is reported.
    #[arg(long)]
    pub fail_on_warning: bool,
}

impl MappingArgs {
    pub fn config(&self) -> MappingConfig {
        MappingConfig {
            kernels_policy: self.kernels,
            inject_schedule: self.inject_schedule.clone(),
            drop_vector_length: !self.keep_vector_length_error,
            fail_on_warning: self.fail_on_warning,
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Host language; inferred from the extension when omitted.
    #[arg(long, value_name = "fortran|c", value_parser = |s: &str| s.parse::<Dialect>())]
    pub dialect: Option<Dialect>,
    #[arg(long, value_enum, default_value = "human")]
    pub diag: DiagFormat,
}

#[derive(Debug, Args)]
pub struct TranslateArgs {
    /// Source files (.f90/.f95/.f03/.f08 or .c/.h).
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "sibling")]
    pub output: OutputMode,
    #[command(flatten)]
    pub mapping: MappingArgs,
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// OpenACC source.
    pub acc: PathBuf,
    /// Hand-written OpenMP counterpart.
    pub omp: PathBuf,
    #[command(flatten)]
    pub mapping: MappingArgs,
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// serial, acc-no-data, acc-data, omp-no-data or omp-data.
    #[arg(long, value_parser = |s: &str| s.parse::<Variant>())]
    pub variant: Variant,
    #[arg(long, default_value_t = 8192)]
    pub nx: usize,
    #[arg(long, default_value_t = 8192)]
    pub ny: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FlopsArgs {
    #[arg(long)]
    pub clock_ghz: f64,
    #[arg(long)]
    pub cores: u64,
    #[arg(long)]
    pub flop_per_cycle: f64,
}

/// Runs with the process's standard streams.
pub fn run(inv: CliInvocation) -> i32 {
    run_with(inv, &mut io::stdout().lock(), &mut io::stderr().lock())
}

pub fn run_with(inv: CliInvocation, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match inv.command {
        Command::Translate(args) => translate(&args, out, err),
        Command::Verify(args) => verify(&args, out, err),
        Command::Corpus(args) => corpus(&args, out, err),
        Command::Flops(args) => flops(&args, out, err),
    }
}

fn report(diags: &[Diagnostic], format: DiagFormat, err: &mut dyn Write) {
    match format {
        DiagFormat::Human => {
            for d in diags {
                let _ = writeln!(err, "{d}");
            }
        }
        DiagFormat::Json => {
            let json = serde_json::to_string_pretty(diags).expect("diagnostics serialize");
            let _ = writeln!(err, "{json}");
        }
    }
}

fn usage(err: &mut dyn Write, message: impl std::fmt::Display) -> i32 {
    let _ = writeln!(err, "error: {message}");
    EXIT_USAGE
}

fn failed(diags: &[Diagnostic], config: &MappingConfig) -> bool {
    diag::has_errors(diags) || (config.fail_on_warning && diag::has_warnings(diags))
}

/// `dir/name.ext` becomes `dir/name.omp.ext`.
pub fn sibling_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.omp.{}", ext.to_string_lossy()),
        None => format!("{stem}.omp"),
    };
    path.with_file_name(name)
}

fn backup_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".bak");
    path.with_file_name(name)
}

/// Writes through a temporary file so a failed write never leaves a
/// truncated target behind.
fn write_whole(path: &Path, text: &str) -> io::Result<()> {
    let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
    tmp_name.push(".acc2omp-tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

fn translate(args: &TranslateArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if args.output == OutputMode::Stdout && args.inputs.len() != 1 {
        return usage(err, "--output=stdout takes exactly one input file");
    }
    let mut units = Vec::with_capacity(args.inputs.len());
    for path in &args.inputs {
        match SourceUnit::read(path, args.input.dialect) {
            Ok(u) => units.push(u),
            Err(e) => return usage(err, e),
        }
    }

    let config = args.mapping.config();
    let results: Vec<Translation> = units.par_iter().map(|u| translate_unit(u, &config)).collect();

    let mut io_failed = false;
    let mut all_diags = Vec::new();
    for (unit, result) in units.iter().zip(results) {
        if let Some(text) = &result.output {
            let written = match args.output {
                OutputMode::Stdout => out.write_all(text.as_bytes()),
                OutputMode::Sibling => write_whole(&sibling_path(&unit.path), text),
                OutputMode::InPlace => {
                    fs::copy(&unit.path, backup_path(&unit.path)).and_then(|_| write_whole(&unit.path, text))
                }
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {}: {e}", unit.path.display());
                io_failed = true;
            }
        }
        all_diags.extend(result.diagnostics);
    }
    report(&all_diags, args.input.diag, err);

    if io_failed {
        EXIT_USAGE
    } else if failed(&all_diags, &config) {
        EXIT_FAILURE
    } else {
        EXIT_OK
    }
}

fn verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let read = |p: &Path| SourceUnit::read(p, args.input.dialect);
    let (acc, omp) = match (read(&args.acc), read(&args.omp)) {
        (Ok(a), Ok(o)) => (a, o),
        (Err(e), _) | (_, Err(e)) => return usage(err, e),
    };
    let config = args.mapping.config();
    match verify_pair(&acc, &omp, &config) {
        Ok(rep) => {
            let _ = match args.input.diag {
                DiagFormat::Human => writeln!(out, "{rep}"),
                DiagFormat::Json => {
                    writeln!(
                        out,
                        "{}",
                        serde_json::to_string_pretty(&rep).expect("report serializes")
                    )
                }
            };
            report(&[], args.input.diag, err);
            if rep.is_match() {
                EXIT_OK
            } else {
                EXIT_FAILURE
            }
        }
        Err(diags) => {
            report(&diags, args.input.diag, err);
            EXIT_FAILURE
        }
    }
}

fn corpus(args: &CorpusArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let params = match JacobiParams::new(args.nx, args.ny, args.tolerance, args.max_iter) {
        Ok(p) => p,
        Err(e) => return usage(err, e),
    };
    let text = generate_variant(args.variant, &params);
    let written = match &args.out {
        Some(path) => write_whole(path, &text),
        None => out.write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => usage(err, e),
    }
}

fn flops(args: &FlopsArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let spec = match PeakSpec::new(args.clock_ghz * 1e9, args.cores, args.flop_per_cycle) {
        Ok(s) => s,
        Err(e) => return usage(err, e),
    };
    let value = match peak_flops(&spec) {
        Ok(v) => v,
        Err(e) => return usage(err, e),
    };
    let _ = writeln!(out, "{value:.6e} FLOPS ({:.4} TFLOPS)", value / 1e12);
    EXIT_OK
}
