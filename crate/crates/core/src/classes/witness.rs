use std::collections::HashSet;

use super::{classify_constraint, FitConfig, Memberships};
use crate::constraint::ConstraintTable;
use crate::error::{Error, Result};
use crate::script::{ConstructionScript, Step};

/// Labelings grow as `4^arity`; larger constraints are refused.
pub const MAX_WITNESS_ARITY: usize = 10;

#[derive(Clone, Debug)]
pub struct Witness {
    pub script: ConstructionScript,
    /// Scaled so that the first weight is 1 whenever it is nonzero.
    pub table: ConstraintTable,
    pub memberships: Memberships,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Label {
    Pin(bool),
    A,
    B,
}

/// Every distinct binary constraint reachable from `f` by pinning, linking and
/// permuting, each with a script that derives it and its class memberships.
pub fn binary_witness_search(f: &ConstraintTable) -> Result<Vec<Witness>> {
    let k = f.arity();
    if k < 2 {
        return Err(Error::arg("witness search needs arity at least 2"));
    }
    if k > MAX_WITNESS_ARITY {
        return Err(Error::ArityTooLarge(k));
    }
    let source = f.name().unwrap_or("F").to_string();
    let mut seen: HashSet<ConstraintTable> = HashSet::new();
    let mut out = Vec::new();
    let cfg = FitConfig::default();
    for code in 0usize..1 << (2 * k) {
        let labels: Vec<Label> = (0..k)
            .map(|p| match code >> (2 * (k - 1 - p)) & 3 {
                0 => Label::Pin(false),
                1 => Label::Pin(true),
                2 => Label::A,
                _ => Label::B,
            })
            .collect();
        if !labels.contains(&Label::A) || !labels.contains(&Label::B) {
            continue;
        }
        let weights = (0..4usize)
            .map(|ab| {
                let (a, b) = (ab & 2 != 0, ab & 1 != 0);
                let idx = labels.iter().fold(0usize, |acc, l| {
                    let v = match l {
                        Label::Pin(c) => *c,
                        Label::A => a,
                        Label::B => b,
                    };
                    (acc << 1) | v as usize
                });
                f.at(idx).clone()
            })
            .collect();
        let table = ConstraintTable::new(2, weights)?.normalized();
        if !seen.insert(table.clone()) {
            continue;
        }
        let script = script_for(&source, &labels);
        let memberships = classify_constraint(&table, &cfg).memberships;
        out.push(Witness {
            script,
            table,
            memberships,
        });
    }
    Ok(out)
}

fn script_for(source: &str, labels: &[Label]) -> ConstructionScript {
    let mut s = ConstructionScript::new(source);
    for (p, l) in labels.iter().enumerate().rev() {
        if let Label::Pin(c) = l {
            s.steps.push(Step::Pin(p, *c));
        }
    }
    let rest: Vec<Label> = labels
        .iter()
        .copied()
        .filter(|l| !matches!(l, Label::Pin(_)))
        .collect();
    let first_a = rest.iter().position(|&l| l == Label::A).unwrap();
    let first_b = rest.iter().position(|&l| l == Label::B).unwrap();
    for (p, &l) in rest.iter().enumerate().rev() {
        let target = if l == Label::A { first_a } else { first_b };
        if p != target {
            s.steps.push(Step::Link(p, target));
        }
    }
    if first_b < first_a {
        s.steps.push(Step::Permute(0, 1));
    }
    s
}
