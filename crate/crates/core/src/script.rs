//! Construction scripts: linear derivations of a constraint from named
//! sources by the seven max-construction operations.

use std::fmt;

use num_traits::One;

use crate::constraint::ConstraintTable;
use crate::error::{Error, Result};
use crate::library::Library;
use crate::rational::{self, Weight};

/// One operation. Positions are zero-based; `Expand` takes the number of
/// variables that precede the new one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Permute(usize, usize),
    Pin(usize, bool),
    Link(usize, usize),
    Expand(usize),
    Multiply(String),
    MaximizeOut(usize),
    Scale(Weight),
}

impl Step {
    pub fn apply(&self, table: &ConstraintTable, lib: &Library) -> Result<ConstraintTable> {
        match self {
            Step::Permute(i, j) => table.permute(*i, *j),
            Step::Pin(i, c) => table.pin(*i, *c),
            Step::Link(i, j) => table.link(*i, *j),
            Step::Expand(p) => table.expand(*p),
            Step::Multiply(name) => {
                let other = lib
                    .get(name)
                    .ok_or_else(|| Error::arg(format!("unknown constraint `{name}`")))?;
                table.multiply(&other)
            }
            Step::MaximizeOut(d) => table.maximize_out(*d),
            Step::Scale(l) => table.scale(l),
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Permute(i, j) => write!(f, "perm {} {}", i + 1, j + 1),
            Step::Pin(i, c) => write!(f, "pin {} {}", i + 1, *c as u8),
            Step::Link(i, j) => write!(f, "link {} {}", i + 1, j + 1),
            Step::Expand(p) => write!(f, "expand {p}"),
            Step::Multiply(n) => write!(f, "mul {n}"),
            Step::MaximizeOut(d) => write!(f, "maxout {d}"),
            Step::Scale(l) => write!(f, "scale {}", rational::format_weight(l)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionScript {
    pub source: String,
    pub steps: Vec<Step>,
}

impl ConstructionScript {
    pub fn new(source: impl Into<String>) -> Self {
        ConstructionScript {
            source: source.into(),
            steps: Vec::new(),
        }
    }

    pub fn then(mut self, step: Step) -> Self {
        self.steps.push(step);
        self
    }

    /// Product of every `scale` factor.
    pub fn accumulated_scale(&self) -> Weight {
        self.steps
            .iter()
            .filter_map(|s| match s {
                Step::Scale(l) => Some(l.clone()),
                _ => None,
            })
            .fold(Weight::one(), |a, b| a * b)
    }

    /// Names of every constraint the script reads.
    pub fn sources(&self) -> Vec<&str> {
        let mut out = vec![self.source.as_str()];
        for s in &self.steps {
            if let Step::Multiply(n) = s {
                if !out.contains(&n.as_str()) {
                    out.push(n);
                }
            }
        }
        out
    }

    pub fn replay(&self, lib: &Library) -> Result<ConstraintTable> {
        let mut t = lib
            .get(&self.source)
            .ok_or_else(|| Error::arg(format!("unknown constraint `{}`", self.source)))?;
        for s in &self.steps {
            t = s.apply(&t, lib)?;
        }
        Ok(t)
    }

    /// Replays and compares against `target`, reporting the first differing point.
    pub fn verify(&self, lib: &Library, target: &ConstraintTable) -> Result<()> {
        let got = self.replay(lib)?;
        if got.arity() != target.arity() {
            return Err(Error::Replay(format!(
                "script yields arity {}, target has arity {}",
                got.arity(),
                target.arity()
            )));
        }
        if let Some(idx) = (0..got.len()).find(|&i| got.at(i) != target.at(i)) {
            return Err(Error::Replay(format!(
                "at input {}: script gives {}, target has {}",
                crate::constraint::Assignment::from_index(got.arity(), idx as u64),
                rational::format_weight(got.at(idx)),
                rational::format_weight(target.at(idx))
            )));
        }
        Ok(())
    }

    /// Parses `from NAME` followed by one step per line. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut script: Option<ConstructionScript> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let toks: Vec<&str> = content.split_whitespace().collect();
            let num = |i: usize| -> Result<usize> {
                toks.get(i)
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| Error::parse(line, format!("expected a number in `{content}`")))
            };
            let pos = |i: usize| -> Result<usize> {
                let v = num(i)?;
                v.checked_sub(1)
                    .ok_or_else(|| Error::parse(line, "positions are 1-based"))
            };
            let arity_ok = |n: usize| -> Result<()> {
                if toks.len() != n {
                    return Err(Error::parse(line, format!("wrong number of fields in `{content}`")));
                }
                Ok(())
            };
            if toks[0] == "from" {
                arity_ok(2)?;
                if script.is_some() {
                    return Err(Error::parse(line, "duplicate `from`"));
                }
                script = Some(ConstructionScript::new(toks[1]));
                continue;
            }
            let s = script
                .as_mut()
                .ok_or_else(|| Error::parse(line, "script must start with `from NAME`"))?;
            let step = match toks[0] {
                "perm" => {
                    arity_ok(3)?;
                    Step::Permute(pos(1)?, pos(2)?)
                }
                "pin" => {
                    arity_ok(3)?;
                    let c = match toks[2] {
                        "0" => false,
                        "1" => true,
                        other => return Err(Error::parse(line, format!("bad bit `{other}`"))),
                    };
                    Step::Pin(pos(1)?, c)
                }
                "link" => {
                    arity_ok(3)?;
                    Step::Link(pos(1)?, pos(2)?)
                }
                "expand" => {
                    arity_ok(2)?;
                    Step::Expand(num(1)?)
                }
                "mul" => {
                    arity_ok(2)?;
                    Step::Multiply(toks[1].to_string())
                }
                "maxout" => {
                    arity_ok(2)?;
                    Step::MaximizeOut(num(1)?)
                }
                "scale" => {
                    arity_ok(2)?;
                    let l = rational::parse_weight(toks[1])
                        .ok_or_else(|| Error::parse(line, format!("bad scale `{}`", toks[1])))?;
                    Step::Scale(l)
                }
                other => return Err(Error::parse(line, format!("unknown step `{other}`"))),
            };
            s.steps.push(step);
        }
        script.ok_or_else(|| Error::parse(1, "empty script"))
    }
}

impl fmt::Display for ConstructionScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "from {}", self.source)?;
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
