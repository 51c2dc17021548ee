use crate::constraint::ConstraintTable;
use crate::error::{Error, Result};
use crate::rational;

/// Multilinear expansion of `log₂ f` on a full-support constraint:
/// `log₂ f(x) = Σ_S c_S ∏_{i∈S} x_i`.
///
/// Coefficients are indexed like table entries: subset `S` sits at the index
/// whose set bits are the positions in `S`. For a binary `f = (x, y, z, w)`
/// the pair coefficient is `log₂(xw / yz)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogExpansion {
    pub arity: usize,
    pub coefficients: Vec<f64>,
}

pub fn log_expansion(f: &ConstraintTable) -> Result<LogExpansion> {
    let mut c: Vec<f64> = f
        .weights()
        .iter()
        .map(|w| {
            rational::log2(w).ok_or_else(|| {
                Error::Domain("log expansion needs every weight to be nonzero".into())
            })
        })
        .collect::<Result<_>>()?;
    let n = c.len();
    let mut h = 1;
    while h < n {
        for idx in 0..n {
            if idx & h != 0 {
                c[idx] -= c[idx ^ h];
            }
        }
        h <<= 1;
    }
    Ok(LogExpansion {
        arity: f.arity(),
        coefficients: c,
    })
}

impl LogExpansion {
    /// Value of the expansion at table index `idx` (zeta transform).
    pub fn evaluate(&self, idx: usize) -> f64 {
        (0..self.coefficients.len())
            .filter(|&s| s & !idx == 0)
            .map(|s| self.coefficients[s])
            .sum()
    }

    /// Largest `|S|` with `|c_S| > tol`.
    pub fn degree(&self, tol: f64) -> usize {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() > tol)
            .map(|(s, _)| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of the pair `{i, j}` (zero-based positions).
    pub fn pair(&self, i: usize, j: usize) -> f64 {
        let k = self.arity;
        self.coefficients[(1 << (k - 1 - i)) | (1 << (k - 1 - j))]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_example() {
        let e = log_expansion(&ConstraintTable::from_ints(&[2, 1, 1, 1]).unwrap()).unwrap();
        assert_eq!(e.coefficients, vec![1.0, -1.0, -1.0, 1.0]);
        assert_eq!(e.pair(0, 1), 1.0);
        let e = log_expansion(&ConstraintTable::from_ints(&[1, 2, 2, 1]).unwrap()).unwrap();
        assert_eq!(e.pair(0, 1), -2.0);
    }

    #[test]
    fn all_ones_and_degenerate() {
        let e = log_expansion(&ConstraintTable::from_ints(&[1; 8]).unwrap()).unwrap();
        assert!(e.coefficients.iter().all(|&c| c == 0.0));
        let e = log_expansion(&ConstraintTable::from_ints(&[2, 4, 3, 6]).unwrap()).unwrap();
        assert_eq!(e.degree(1e-12), 1);
    }

    #[test]
    fn reconstruction() {
        let f = ConstraintTable::from_ints(&[3, 1, 4, 1, 5, 9, 2, 6]).unwrap();
        let e = log_expansion(&f).unwrap();
        for idx in 0..8 {
            let want = rational::log2(f.at(idx)).unwrap();
            assert!((e.evaluate(idx) - want).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_weight_is_domain_error() {
        let r = log_expansion(&crate::constraint::builtin::nand());
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
