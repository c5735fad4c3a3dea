//! Payload parsers for OpenACC and OpenMP directives.

use thiserror::Error;

use super::ast::{
    AccDirective, AccKind, ArgShape, Clause, ClauseArgs, MapKind, OmpDirective, OmpKind, ReductionOp, LOOP_WORD,
};
use super::source::Dialect;
use crate::diag::Code;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message}")]
pub struct ParseError {
    pub code: Code,
    pub message: String,
}

impl ParseError {
    fn new(code: Code, message: impl Into<String>) -> Self {
        ParseError {
            code,
            message: message.into(),
        }
    }
}

/// Error codes of one directive family.
#[derive(Clone, Copy)]
struct Codes {
    construct: Code,
    clause: Code,
    malformed: Code,
}

const ACC: Codes = Codes {
    construct: Code::E002,
    clause: Code::E003,
    malformed: Code::E004,
};
const OMP: Codes = Codes {
    construct: Code::E005,
    clause: Code::E006,
    malformed: Code::E007,
};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

fn is_word_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn skip_separators(&mut self) {
        let rest = self.rest();
        let trimmed = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ',');
        self.pos += rest.len() - trimmed.len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.rest().is_empty()
    }

    /// Next identifier and whether it is followed by `(`. Does not consume.
    fn peek_word(&mut self) -> Option<(&'a str, bool)> {
        self.skip_ws();
        let rest = self.rest();
        if !rest.starts_with(is_word_start) {
            return None;
        }
        let len = rest.find(|c: char| !is_word_char(c)).unwrap_or(rest.len());
        let called = rest[len..].trim_start().starts_with('(');
        Some((&rest[..len], called))
    }

    fn bump(&mut self, len: usize) {
        self.pos += len;
    }

    /// Consumes a bare keyword (case-insensitive) if it is next.
    fn eat_keyword(&mut self, keyword: &str) -> bool {
        match self.peek_word() {
            Some((w, false)) if w.eq_ignore_ascii_case(keyword) => {
                self.bump(w.len());
                true
            }
            _ => false,
        }
    }

    /// Consumes a parenthesized group and returns its inner text.
    fn group(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        debug_assert!(rest.starts_with('('));
        let mut depth = 0usize;
        for (i, c) in rest.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        self.bump(i + 1);
                        return Some(&rest[1..i]);
                    }
                }
                _ => {}
            }
        }
        None
    }
}

/// Splits on `sep` outside parentheses and brackets.
fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ if c == sep && depth == 0 => {
                parts.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

fn find_top(text: &str, needle: char) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ if c == needle && depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

/// A variable reference: identifier (with `%` component access) followed by
/// optional balanced subscripts. Whitespace is removed.
fn parse_var(raw: &str) -> Option<String> {
    let var: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
    let mut chars = var.char_indices().peekable();
    match chars.next() {
        Some((_, c)) if is_word_start(c) => {}
        _ => return None,
    }
    let mut name_end = var.len();
    while let Some(&(i, c)) = chars.peek() {
        if is_word_char(c) || c == '%' {
            chars.next();
        } else {
            name_end = i;
            break;
        }
    }
    let mut depth = 0i32;
    for c in var[name_end..].chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            _ if depth == 0 => return None,
            _ => {}
        }
    }
    (depth == 0 && !var.ends_with('%')).then_some(var)
}

fn parse_var_list(text: &str, codes: Codes, clause: &str) -> Result<Vec<String>, ParseError> {
    split_top(text, ',')
        .into_iter()
        .map(|part| {
            parse_var(part).ok_or_else(|| {
                ParseError::new(
                    codes.malformed,
                    format!("`{clause}`: `{}` is not a variable reference", part.trim()),
                )
            })
        })
        .collect()
}

fn parse_args(name: &str, shape: ArgShape, text: Option<&str>, codes: Codes) -> Result<Option<ClauseArgs>, ParseError> {
    let malformed = |msg: String| ParseError::new(codes.malformed, msg);
    let text = match (shape, text) {
        (ArgShape::None, None) => return Ok(None),
        (ArgShape::None, Some(_)) => return Err(malformed(format!("`{name}` takes no arguments"))),
        (_, None) => return Err(malformed(format!("`{name}` requires arguments"))),
        (_, Some(t)) if t.trim().is_empty() => return Err(malformed(format!("`{name}` has an empty argument list"))),
        (_, Some(t)) => t,
    };

    let args = match shape {
        ArgShape::None => unreachable!(),
        ArgShape::VarList => ClauseArgs::VarList(parse_var_list(text, codes, name)?),
        ArgShape::Expr => ClauseArgs::IntExpr(text.trim().to_owned()),
        ArgShape::Reduction => {
            let colon =
                find_top(text, ':').ok_or_else(|| malformed(format!("`{name}` expects `operator:variables`")))?;
            let op_text = text[..colon].trim();
            let op = op_text
                .parse::<ReductionOp>()
                .map_err(|_| malformed(format!("unknown reduction operator `{op_text}`")))?;
            let vars = parse_var_list(&text[colon + 1..], codes, name)?;
            ClauseArgs::Reduction { op, vars }
        }
        ArgShape::Map => {
            let (kind, list) = match find_top(text, ':') {
                Some(colon) => {
                    let kind_text = text[..colon].trim();
                    let kind = kind_text
                        .parse::<MapKind>()
                        .map_err(|_| malformed(format!("unknown map type `{kind_text}`")))?;
                    (kind, &text[colon + 1..])
                }
                None => (MapKind::ToFrom, text),
            };
            ClauseArgs::MapList {
                kind,
                vars: parse_var_list(list, codes, name)?,
            }
        }
        ArgShape::Schedule => {
            let parts = split_top(text, ',');
            let kind = parts[0].trim();
            if !kind.starts_with(is_word_start) || !kind.chars().all(is_word_char) {
                return Err(malformed(format!("bad schedule kind `{kind}`")));
            }
            let chunk = match parts.as_slice() {
                [_] => None,
                [_, chunk] if !chunk.trim().is_empty() => Some(chunk.trim().to_owned()),
                _ => return Err(malformed("`schedule` expects `kind[,chunk]`".to_owned())),
            };
            ClauseArgs::Schedule {
                kind: kind.to_ascii_lowercase(),
                chunk,
            }
        }
    };
    Ok(Some(args))
}

fn parse_clauses(
    cur: &mut Cursor<'_>,
    codes: Codes,
    construct: &str,
    allowed: &[&str],
    shape_of: fn(&str) -> Option<ArgShape>,
) -> Result<Vec<Clause>, ParseError> {
    let mut clauses = Vec::new();
    loop {
        cur.skip_separators();
        if cur.at_end() {
            return Ok(clauses);
        }
        let Some((word, called)) = cur.peek_word() else {
            let bad: String = cur.rest().chars().take(12).collect();
            return Err(ParseError::new(codes.malformed, format!("unexpected `{bad}`")));
        };
        cur.bump(word.len());
        let name = word.to_ascii_lowercase();
        let shape = match shape_of(&name) {
            Some(shape) if allowed.contains(&name.as_str()) => shape,
            Some(_) => {
                return Err(ParseError::new(
                    codes.clause,
                    format!("clause `{name}` is not allowed on `{construct}`"),
                ))
            }
            None => return Err(ParseError::new(codes.clause, format!("unknown clause `{name}`"))),
        };
        let text =
            if called {
                Some(cur.group().ok_or_else(|| {
                    ParseError::new(codes.malformed, format!("unterminated argument list for `{name}`"))
                })?)
            } else {
                None
            };
        clauses.push(Clause {
            name: name.clone(),
            args: parse_args(&name, shape, text, codes)?,
        });
    }
}

/// Parses the payload of an OpenACC directive.
pub fn parse_acc(payload: &str, dialect: Dialect) -> Result<AccDirective, ParseError> {
    let mut cur = Cursor::new(payload);
    let unknown = |what: &str| ParseError::new(ACC.construct, format!("unknown OpenACC construct `{what}`"));

    let Some((first, _)) = cur.peek_word() else {
        return Err(unknown(payload.trim()));
    };
    cur.bump(first.len());
    let kind = match first.to_ascii_lowercase().as_str() {
        "parallel" if cur.eat_keyword("loop") => AccKind::ParallelLoop,
        "parallel" => AccKind::Parallel,
        "kernels" if cur.eat_keyword("loop") => AccKind::KernelsLoop,
        "kernels" => AccKind::Kernels,
        "loop" => AccKind::Loop,
        "data" => AccKind::Data,
        "end" => {
            let second = cur.peek_word().map(|(w, _)| w).unwrap_or("");
            cur.bump(second.len());
            match second.to_ascii_lowercase().as_str() {
                "parallel" => {
                    cur.eat_keyword("loop");
                    AccKind::EndParallel
                }
                "kernels" => {
                    cur.eat_keyword("loop");
                    AccKind::EndKernels
                }
                "data" => AccKind::EndData,
                _ => return Err(unknown(&format!("end {second}"))),
            }
        }
        other => return Err(unknown(other)),
    };
    if !kind.valid_in(dialect) {
        return Err(ParseError::new(
            Code::E002,
            "`end` directives are not used in C; regions are block-scoped",
        ));
    }
    let construct = kind.keywords().join(" ");
    let clauses = parse_clauses(&mut cur, ACC, &construct, kind.allowed_clauses(), AccKind::clause_shape)?;
    Ok(AccDirective { kind, clauses })
}

const OMP_CONSTRUCT_WORDS: &[&str] = &[
    "end",
    "target",
    "teams",
    "distribute",
    "parallel",
    "do",
    "for",
    "simd",
    "data",
];

/// Parses the payload of an OpenMP directive.
pub fn parse_omp(payload: &str, dialect: Dialect) -> Result<OmpDirective, ParseError> {
    let mut cur = Cursor::new(payload);
    let mut words = Vec::new();
    while let Some((w, false)) = cur.peek_word() {
        let lower = w.to_ascii_lowercase();
        if !OMP_CONSTRUCT_WORDS.contains(&lower.as_str()) {
            break;
        }
        cur.bump(w.len());
        words.push(lower);
    }

    let matches = |kind: OmpKind, loop_word: &str| {
        let pattern = kind.keyword_pattern();
        pattern.len() == words.len()
            && pattern
                .iter()
                .zip(&words)
                .all(|(p, w)| if *p == LOOP_WORD { w == loop_word } else { p == w })
    };
    let (own, other) = match dialect {
        Dialect::FortranFree => ("do", "for"),
        Dialect::C => ("for", "do"),
    };
    let kind = match OmpKind::ALL.into_iter().find(|k| matches(*k, own)) {
        Some(k) => k,
        None if OmpKind::ALL.into_iter().any(|k| matches(k, other)) => {
            return Err(ParseError::new(
                Code::E005,
                format!("`{other}` is the wrong loop keyword for {dialect}; expected `{own}`"),
            ))
        }
        None => {
            let shown = if words.is_empty() {
                payload.trim().to_owned()
            } else {
                words.join(" ")
            };
            return Err(ParseError::new(
                OMP.construct,
                format!("unknown OpenMP construct `{shown}`"),
            ));
        }
    };
    if !kind.valid_in(dialect) {
        return Err(ParseError::new(
            Code::E005,
            "`end` directives are not used in C; regions are block-scoped",
        ));
    }
    let construct = words.join(" ");
    let clauses = parse_clauses(&mut cur, OMP, &construct, kind.allowed_clauses(), OmpKind::clause_shape)?;
    Ok(OmpDirective { kind, clauses })
}
