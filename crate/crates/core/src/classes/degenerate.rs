use num_traits::{One, Zero};

use super::{fold_constant, Certificate, UnaryFactor};
use crate::constraint::{bit, ConstraintTable};
use crate::rational::Weight;

/// `f(x) = constant · ∏ᵢ uᵢ(xᵢ)`. The constant is folded into the first
/// factor whenever the arity is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerateCertificate {
    pub arity: usize,
    pub unary_factors: Vec<UnaryFactor>,
    pub constant: Weight,
}

impl Certificate for DegenerateCertificate {
    fn arity(&self) -> usize {
        self.arity
    }

    fn value_at(&self, idx: usize) -> Weight {
        let mut v = self.constant.clone();
        for (p, (u0, u1)) in self.unary_factors.iter().enumerate() {
            v *= if bit(idx, self.arity, p) { u1 } else { u0 };
        }
        v
    }
}

/// Splits the table into its `x₁ = 0` and `x₁ = 1` halves, requires them to be
/// proportional, and recurses on the nonzero half.
pub fn is_degenerate(f: &ConstraintTable) -> Option<DegenerateCertificate> {
    let mut table: Vec<Weight> = f.weights().to_vec();
    let mut factors = Vec::with_capacity(f.arity());
    while table.len() > 1 {
        let half = table.len() / 2;
        let (lo, hi) = table.split_at(half);
        let (factor, rest) = match lo.iter().position(|w| !w.is_zero()) {
            Some(j) => {
                let c = &hi[j] / &lo[j];
                if lo.iter().zip(hi).any(|(l, h)| &(l * &c) != h) {
                    return None;
                }
                ((Weight::one(), c), lo.to_vec())
            }
            None => ((Weight::zero(), Weight::one()), hi.to_vec()),
        };
        factors.push(factor);
        table = rest;
    }
    let mut constant = table[0].clone();
    fold_constant(&mut factors, &mut constant);
    Some(DegenerateCertificate {
        arity: f.arity(),
        unary_factors: factors,
        constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::builtin::*;
    use crate::rational::{int, ratio};

    #[test]
    fn rank_one_example() {
        let f = ConstraintTable::from_ints(&[2, 4, 3, 6]).unwrap();
        let c = is_degenerate(&f).unwrap();
        assert_eq!(c.unary_factors, vec![(int(2), int(3)), (int(1), int(2))]);
        assert_eq!(c.rebuild(), f);
    }

    #[test]
    fn non_degenerate() {
        assert!(is_degenerate(&eq()).is_none());
        assert!(is_degenerate(&or()).is_none());
        assert!(is_degenerate(&ConstraintTable::from_ints(&[2, 1, 1, 1]).unwrap()).is_none());
    }

    #[test]
    fn unary_and_constant() {
        let u = ConstraintTable::unary(ratio(1, 3), int(5));
        let c = is_degenerate(&u).unwrap();
        assert_eq!(c.unary_factors, vec![(ratio(1, 3), int(5))]);
        let k = ConstraintTable::new(0, vec![int(9)]).unwrap();
        assert_eq!(is_degenerate(&k).unwrap().constant, int(9));
    }

    #[test]
    fn zero_halves() {
        for w in [&[0, 0, 3, 6][..], &[0, 0, 0, 0], &[0, 5, 0, 0], &[1, 0, 0, 0, 0, 0, 0, 0]] {
            let f = ConstraintTable::from_ints(w).unwrap();
            let c = is_degenerate(&f).unwrap();
            assert_eq!(c.rebuild(), f);
        }
        assert!(is_degenerate(&ConstraintTable::from_ints(&[0, 1, 1, 0, 0, 0, 0, 0]).unwrap()).is_none());
    }
}
