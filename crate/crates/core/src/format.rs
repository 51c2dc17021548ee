//! Text formats for constraint files.
//!
//! ```text
//! # comment
//! constraint F 2
//!   2 1
//!   1 1
//! use EQ XOR
//! ```
//!
//! A `constraint NAME ARITY` header is followed by `2^ARITY` weights, each a
//! decimal (`1.5`) or a fraction (`3/2`), spread over any number of lines.
//! `use` lists builtin relations to include by name.

use crate::constraint::{builtin, ConstraintTable, MAX_ARITY};
use crate::error::{Error, Result};
use crate::library::Library;
use crate::rational::{self, Weight};

/// Logical lines: `(line number, tokens)` with comments and blanks removed.
pub(crate) fn tokenize(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = content.split_whitespace().collect();
            (!toks.is_empty()).then_some((i + 1, toks))
        })
        .collect()
}

/// Parses a `constraint` block starting at `lines[at]`; returns the table and
/// the index of the first line after the block.
pub(crate) fn parse_block(lines: &[(usize, Vec<&str>)], at: usize) -> Result<(ConstraintTable, usize)> {
    let (line, toks) = &lines[at];
    if toks.len() < 3 {
        return Err(Error::parse(*line, "expected `constraint NAME ARITY`"));
    }
    let name = toks[1];
    if builtin::NAMES.contains(&name) {
        return Err(Error::parse(*line, format!("`{name}` is a reserved builtin name")));
    }
    if !name.chars().all(|c| c.is_ascii_alphanumeric() || "_-~'.".contains(c)) {
        return Err(Error::parse(*line, format!("invalid constraint name `{name}`")));
    }
    let arity: usize = toks[2]
        .parse()
        .map_err(|_| Error::parse(*line, format!("bad arity `{}`", toks[2])))?;
    if arity > MAX_ARITY {
        return Err(Error::parse(
            *line,
            format!("arity {arity} exceeds the maximum of {MAX_ARITY}"),
        ));
    }
    let need = 1usize << arity;
    let mut weights: Vec<Weight> = Vec::with_capacity(need);
    let push = |weights: &mut Vec<Weight>, tok: &str, line: usize| -> Result<()> {
        let w = rational::parse_weight(tok)
            .ok_or_else(|| Error::parse(line, format!("bad weight `{tok}`")))?;
        if w < Weight::from_integer(0.into()) {
            return Err(Error::parse(line, format!("negative weight `{tok}`")));
        }
        weights.push(w);
        Ok(())
    };
    for tok in &toks[3..] {
        push(&mut weights, tok, *line)?;
    }
    let mut next = at + 1;
    while weights.len() < need {
        let Some((l, ts)) = lines.get(next) else {
            return Err(Error::parse(
                *line,
                format!("constraint `{name}` needs {need} weights, found {}", weights.len()),
            ));
        };
        if ts[0].chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
            return Err(Error::parse(
                *l,
                format!("constraint `{name}` needs {need} weights, found {}", weights.len()),
            ));
        }
        for tok in ts {
            push(&mut weights, tok, *l)?;
        }
        next += 1;
    }
    if weights.len() > need {
        return Err(Error::parse(
            *line,
            format!("constraint `{name}` has more than {need} weights"),
        ));
    }
    let table = ConstraintTable::new(arity, weights)
        .map_err(|e| Error::parse(*line, e.to_string()))?
        .named(name);
    Ok((table, next))
}

/// Constraints listed in a file, in order, including `use`d builtins.
pub fn parse_constraint_file(text: &str) -> Result<Vec<ConstraintTable>> {
    let lines = tokenize(text);
    let mut out: Vec<ConstraintTable> = Vec::new();
    let mut lib = Library::new();
    let mut i = 0;
    while i < lines.len() {
        let (line, toks) = &lines[i];
        match toks[0] {
            "constraint" => {
                let (t, next) = parse_block(&lines, i)?;
                lib.insert(t.clone())
                    .map_err(|e| Error::parse(*line, e.to_string()))?;
                out.push(t);
                i = next;
            }
            "use" => {
                for name in &toks[1..] {
                    let t = builtin::by_name(name)
                        .ok_or_else(|| Error::parse(*line, format!("unknown builtin `{name}`")))?;
                    out.push(t);
                }
                i += 1;
            }
            other => return Err(Error::parse(*line, format!("unexpected `{other}`"))),
        }
    }
    Ok(out)
}

/// Renders one table as a `constraint` block (builtins as a `use` line).
pub fn render_constraint(t: &ConstraintTable) -> String {
    let name = t.name().unwrap_or("F");
    if builtin::NAMES.contains(&name) && builtin::by_name(name).as_ref() == Some(t) {
        return format!("use {name}\n");
    }
    let mut s = format!("constraint {name} {}\n", t.arity());
    let row = if t.arity() >= 2 { 4 } else { t.len() };
    for chunk in t.weights().chunks(row) {
        let ws: Vec<String> = chunk.iter().map(rational::format_weight).collect();
        s.push_str("  ");
        s.push_str(&ws.join(" "));
        s.push('\n');
    }
    s
}

pub fn render_constraints<'a>(tables: impl IntoIterator<Item = &'a ConstraintTable>) -> String {
    tables.into_iter().map(render_constraint).collect()
}
