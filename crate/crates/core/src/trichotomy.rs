//! Three-way classification of a constraint set when unary constraints are
//! available for free.
//!
//! * every constraint in ED (or every one in AF): solvable exactly in
//!   polynomial time by [`crate::solve::solve_tractable`];
//! * otherwise, every constraint in IM_opt: at least as hard as the
//!   bipartite independent set problem, and reducible to the flow problem;
//! * otherwise: at least as hard as the independent set problem.

use std::fmt;

use rayon::prelude::*;

use crate::classes::{classify_constraint, ConstraintClasses, FitConfig};
use crate::constraint::ConstraintTable;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    PoAf,
    PoEd,
    IntermediateImOpt,
    IsHard,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::PoAf => "PO_AF",
            Category::PoEd => "PO_ED",
            Category::IntermediateImOpt => "INTERMEDIATE_IMOPT",
            Category::IsHard => "IS_HARD",
        }
    }

    pub fn is_po(self) -> bool {
        matches!(self, Category::PoAf | Category::PoEd)
    }

    /// 0 for the polynomial-time categories, 1 for the intermediate one, 2 for IS-hard.
    pub fn rank(self) -> u8 {
        match self {
            Category::PoAf | Category::PoEd => 0,
            Category::IntermediateImOpt => 1,
            Category::IsHard => 2,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassName {
    Ed,
    Af,
    ImOpt,
}

impl fmt::Display for ClassName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassName::Ed => "ED",
            ClassName::Af => "AF",
            ClassName::ImOpt => "IM_opt",
        })
    }
}

/// A constraint that fails membership in `class`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub class: ClassName,
    pub constraint: String,
    pub position: usize,
}

#[derive(Clone, Debug)]
pub struct ClassEntry {
    pub name: String,
    pub table: ConstraintTable,
    pub classes: ConstraintClasses,
}

#[derive(Clone, Debug)]
pub struct ClassReport {
    pub per_constraint: Vec<ClassEntry>,
    pub category: Category,
    pub witnesses: Vec<Violation>,
}

pub fn classify_set(set: &[ConstraintTable]) -> Result<ClassReport> {
    classify_set_with(set, &FitConfig::default())
}

pub fn classify_set_with(set: &[ConstraintTable], cfg: &FitConfig) -> Result<ClassReport> {
    if set.is_empty() {
        return Err(Error::arg("cannot classify an empty constraint set"));
    }
    let per_constraint: Vec<ClassEntry> = set
        .par_iter()
        .enumerate()
        .map(|(i, t)| ClassEntry {
            name: t.name().map_or_else(|| format!("F{}", i + 1), str::to_string),
            table: t.clone(),
            classes: classify_constraint(t, cfg),
        })
        .collect();
    let first_failing = |class: ClassName| {
        per_constraint.iter().enumerate().find_map(|(i, e)| {
            let m = &e.classes.memberships;
            let ok = match class {
                ClassName::Ed => m.ed,
                ClassName::Af => m.af,
                ClassName::ImOpt => m.imopt,
            };
            (!ok).then(|| Violation {
                class,
                constraint: e.name.clone(),
                position: i,
            })
        })
    };
    let not_ed = first_failing(ClassName::Ed);
    let not_af = first_failing(ClassName::Af);
    let not_im = first_failing(ClassName::ImOpt);
    let (category, witnesses) = match (not_ed, not_af) {
        (None, _) => (Category::PoEd, Vec::new()),
        (Some(_), None) => (Category::PoAf, Vec::new()),
        (Some(e), Some(a)) => match not_im {
            None => (Category::IntermediateImOpt, vec![e, a]),
            Some(i) => (Category::IsHard, vec![e, a, i]),
        },
    };
    Ok(ClassReport {
        per_constraint,
        category,
        witnesses,
    })
}

impl ClassReport {
    /// True when every witness really fails the class it is listed under.
    pub fn witnesses_recheck(&self, cfg: &FitConfig) -> bool {
        self.witnesses.iter().all(|v| {
            let t = &self.per_constraint[v.position].table;
            let m = classify_constraint(t, cfg).memberships;
            match v.class {
                ClassName::Ed => !m.ed,
                ClassName::Af => !m.af,
                ClassName::ImOpt => !m.imopt,
            }
        })
    }
}

/// A short narrative of the branch taken.
pub fn explain(report: &ClassReport) -> String {
    let names: Vec<&str> = report.per_constraint.iter().map(|e| e.name.as_str()).collect();
    let set = names.join(", ");
    let violator = |class: ClassName| {
        report
            .witnesses
            .iter()
            .find(|v| v.class == class)
            .map(|v| v.constraint.clone())
            .unwrap_or_default()
    };
    match report.category {
        Category::PoEd => format!(
            "Every constraint of {{{set}}} is a product of unary factors, EQ and XOR (class ED). \
             The problem with free unary constraints is in PO: the parity-component solver \
             (solve --method tractable) returns an exact optimum in polynomial time."
        ),
        Category::PoAf => format!(
            "Every constraint of {{{set}}} lies in AF. The problem with free unary constraints is \
             in PO: the parity-component solver (solve --method tractable) returns an exact \
             optimum in polynomial time."
        ),
        Category::IntermediateImOpt => format!(
            "The set {{{set}}} is not contained in ED (`{}` is not) nor in AF (`{}` is not), but \
             every constraint lies in IM_opt. The problem lies between PO and the IS-hard \
             problems: MAX-PROD-BIS APT-reduces to it, and it APT-reduces to MAX-PROD-FLOW \
             (reduce csp2flow).",
            violator(ClassName::Ed),
            violator(ClassName::Af)
        ),
        Category::IsHard => format!(
            "The set {{{set}}} is contained in none of ED, AF and IM_opt; `{}` is not in IM_opt. \
             MAX-PROD-IS APT-reduces into this problem, so no polynomial-time approximation \
             scheme is expected.",
            violator(ClassName::ImOpt)
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::builtin::*;

    fn tb(w: &[i64]) -> ConstraintTable {
        ConstraintTable::from_ints(w).unwrap()
    }

    #[test]
    fn examples() {
        let c = |s: &[ConstraintTable]| classify_set(s).unwrap().category;
        assert_eq!(c(&[eq(), xor(), delta0()]), Category::PoEd);
        let half = ConstraintTable::from_strs(&["1", "1", "1/2", "1"]).unwrap();
        assert_eq!(c(&[implies(), half]), Category::IntermediateImOpt);
        assert_eq!(c(&[or()]), Category::IsHard);
        assert_eq!(c(&[xor(), implies()]), Category::IsHard);
        assert!(classify_set(&[]).is_err());
    }

    #[test]
    fn witnesses_are_real() {
        let r = classify_set(&[eq(), implies(), or()]).unwrap();
        assert_eq!(r.category, Category::IsHard);
        assert!(r.witnesses_recheck(&FitConfig::default()));
        assert_eq!(r.witnesses.last().unwrap().constraint, "OR");
    }

    #[test]
    fn explanations() {
        let r = classify_set(&[eq(), xor()]).unwrap();
        assert!(explain(&r).contains("PO"));
        let r = classify_set(&[implies()]).unwrap();
        let e = explain(&r);
        assert!(e.contains("MAX-PROD-BIS") && e.contains("MAX-PROD-FLOW"));
        let r = classify_set(&[eq(), tb(&[0, 1, 1, 1]).named("G")]).unwrap();
        assert!(explain(&r).contains("`G`"));
    }
}
