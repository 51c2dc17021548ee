//! Class membership with certificates.
//!
//! | class      | meaning                                                        |
//! |------------|----------------------------------------------------------------|
//! | NZ         | every weight is positive                                       |
//! | DG         | product of unary factors on distinct variables                 |
//! | ED         | product of unary factors, `EQ` and `XOR`                       |
//! | AF         | DG times binary affine relations all sharing one pivot         |
//! | IM_opt     | product of unary factors and `(1,1,λ,1)` with `0 ≤ λ < 1`      |
//!
//! Every positive answer carries a certificate that re-expands to a full
//! table (see [`Certificate::rebuild`]). The all-zero constraint is placed in
//! ED, AF and IM_opt through a `(0, 0)` unary factor.

mod degenerate;
mod expansion;
mod imopt;
mod parity;
mod simplex;
pub mod support;
mod witness;

use std::fmt;

use num_traits::{One, ToPrimitive, Zero};

pub use degenerate::{is_degenerate, DegenerateCertificate};
pub use expansion::{log_expansion, LogExpansion};
pub use imopt::{is_imopt, is_imopt_with, ImOptCertificate};
pub use parity::{is_af, is_ed, AfCertificate, BinaryRelation, EdCertificate};
pub use support::{has_affine_support, has_imp_support, Parity};
pub use witness::{binary_witness_search, Witness, MAX_WITNESS_ARITY};

use crate::constraint::ConstraintTable;
use crate::rational::Weight;

/// `(u(0), u(1))`.
pub type UnaryFactor = (Weight, Weight);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitConfig {
    /// Relative tolerance for numerically fitted certificates.
    pub tolerance: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig { tolerance: 1e-9 }
    }
}

pub(crate) fn fold_constant(factors: &mut [UnaryFactor], constant: &mut Weight) {
    if let Some((a, b)) = factors.first_mut() {
        *a *= &*constant;
        *b *= &*constant;
        *constant = Weight::one();
    }
}

/// Exact agreement on zeros, relative agreement elsewhere.
pub fn rel_close(a: &Weight, b: &Weight, tol: f64) -> bool {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => true,
        (false, false) => {
            if a == b {
                return true;
            }
            (a / b).to_f64().is_some_and(|r| (r - 1.0).abs() <= tol)
        }
        _ => false,
    }
}

pub trait Certificate {
    fn arity(&self) -> usize;

    /// Value of the certified product at a lexicographic table index.
    fn value_at(&self, idx: usize) -> Weight;

    fn rebuild(&self) -> ConstraintTable {
        let k = self.arity();
        ConstraintTable::new(k, (0..1usize << k).map(|i| self.value_at(i)).collect())
            .expect("certificates hold nonnegative weights")
    }

    /// Zeros must match exactly; nonzero entries within `tol` relative error.
    fn reproduces(&self, f: &ConstraintTable, tol: f64) -> bool {
        f.arity() == self.arity()
            && (0..f.len()).all(|i| rel_close(&self.value_at(i), f.at(i), tol))
    }

    /// True when the rebuild equals `f` exactly.
    fn is_exact_for(&self, f: &ConstraintTable) -> bool {
        f.arity() == self.arity() && (0..f.len()).all(|i| &self.value_at(i) == f.at(i))
    }
}

pub fn is_nonzero(f: &ConstraintTable) -> bool {
    f.weights().iter().all(|w| !w.is_zero())
}

/// Which classes and support predicates a constraint satisfies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Memberships {
    pub nonzero: bool,
    pub degenerate: bool,
    pub ed: bool,
    pub af: bool,
    pub imopt: bool,
    pub affine_support: bool,
    pub imp_support: bool,
}

impl Memberships {
    pub fn labels(&self) -> Vec<&'static str> {
        [
            (self.nonzero, "NZ"),
            (self.degenerate, "DG"),
            (self.ed, "ED"),
            (self.af, "AF"),
            (self.imopt, "IM_opt"),
            (self.affine_support, "affine_support"),
            (self.imp_support, "imp_support"),
        ]
        .into_iter()
        .filter_map(|(b, l)| b.then_some(l))
        .collect()
    }
}

impl fmt::Display for Memberships {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.labels();
        if l.is_empty() {
            f.write_str("{}")
        } else {
            write!(f, "{{{}}}", l.join(", "))
        }
    }
}

/// Every decider's verdict for one constraint, with certificates.
#[derive(Clone, Debug)]
pub struct ConstraintClasses {
    pub memberships: Memberships,
    pub degenerate: Option<DegenerateCertificate>,
    pub ed: Option<EdCertificate>,
    pub af: Option<AfCertificate>,
    pub imopt: Option<ImOptCertificate>,
}

pub fn classify_constraint(f: &ConstraintTable, cfg: &FitConfig) -> ConstraintClasses {
    let degenerate = is_degenerate(f);
    let ed = is_ed(f);
    let af = is_af(f);
    let imopt = is_imopt_with(f, cfg);
    ConstraintClasses {
        memberships: Memberships {
            nonzero: is_nonzero(f),
            degenerate: degenerate.is_some(),
            ed: ed.is_some(),
            af: af.is_some(),
            imopt: imopt.is_some(),
            affine_support: has_affine_support(f),
            imp_support: has_imp_support(f),
        },
        degenerate,
        ed,
        af,
        imopt,
    }
}
