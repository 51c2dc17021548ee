//! Products of unary factors and `(1, 1, λ, 1)` factors with `0 ≤ λ < 1`.
//!
//! On the support, such a product has `log₂ f = a₀ + Σ a_l x_l − Σ q_rs x_r x_s`
//! rewritten with `q_rs ≥ 0` as pair factors; zeros come from pins and from
//! `λ = 0` pairs, which are implications. Full-support tables are decided
//! exactly from their multiplicative pair ratios. Partial supports go through
//! a small linear feasibility problem on `log₂ f`.

use num_traits::{One, Zero};

use super::simplex;
use super::support::{derive_implications, derive_pins, is_imp_definable};
use super::{fold_constant, Certificate, FitConfig, UnaryFactor};
use crate::constraint::{bit, ConstraintTable};
use crate::rational::{self, Weight};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImOptCertificate {
    pub arity: usize,
    pub unary_factors: Vec<UnaryFactor>,
    /// `(r, s, λ)`: the factor `(1, 1, λ, 1)` on `(x_r, x_s)`, i.e. `λ` when
    /// `x_r = 1` and `x_s = 0`.
    pub lambda_pairs: Vec<(usize, usize, Weight)>,
    pub constant: Weight,
}

impl Certificate for ImOptCertificate {
    fn arity(&self) -> usize {
        self.arity
    }

    fn value_at(&self, idx: usize) -> Weight {
        let k = self.arity;
        let mut v = self.constant.clone();
        for (p, (u0, u1)) in self.unary_factors.iter().enumerate() {
            v *= if bit(idx, k, p) { u1 } else { u0 };
        }
        for (r, s, l) in &self.lambda_pairs {
            if bit(idx, k, *r) && !bit(idx, k, *s) {
                v *= l;
            }
        }
        v
    }
}

pub fn is_imopt(f: &ConstraintTable) -> Option<ImOptCertificate> {
    is_imopt_with(f, &FitConfig::default())
}

pub fn is_imopt_with(f: &ConstraintTable, cfg: &FitConfig) -> Option<ImOptCertificate> {
    let k = f.arity();
    let s = f.support();
    if s.is_empty() {
        let mut u = vec![(Weight::one(), Weight::one()); k];
        let mut c = Weight::zero();
        fold_constant(&mut u, &mut c);
        return Some(ImOptCertificate {
            arity: k,
            unary_factors: u,
            lambda_pairs: Vec::new(),
            constant: c,
        });
    }
    if !is_imp_definable(&s) {
        return None;
    }
    if s.is_full() {
        return full_support(f);
    }
    partial_support(f, cfg)
}

/// Exact test on a full support: with `μ_rs = f(0) f(e_r + e_s) / (f(e_r) f(e_s))`
/// every `μ_rs ≥ 1` and `f(x) = f(0) ∏ (f(e_l)/f(0))^{x_l} ∏ μ_rs^{x_r x_s}`.
fn full_support(f: &ConstraintTable) -> Option<ImOptCertificate> {
    let k = f.arity();
    let unit = |p: usize| 1usize << (k - 1 - p);
    let c0 = f.at(0).clone();
    let ratio: Vec<Weight> = (0..k).map(|p| f.at(unit(p)) / &c0).collect();
    let mut mu = vec![vec![Weight::one(); k]; k];
    for r in 0..k {
        for s in r + 1..k {
            let m = (&c0 * f.at(unit(r) | unit(s))) / (f.at(unit(r)) * f.at(unit(s)));
            if m < Weight::one() {
                return None;
            }
            mu[r][s] = m.clone();
            mu[s][r] = m;
        }
    }
    // value(x) = value(x minus its last set position p) · ratio_p · ∏_{t set in rest} μ_tp
    let mut value: Vec<Weight> = Vec::with_capacity(1 << k);
    value.push(c0.clone());
    for idx in 1usize..1 << k {
        let low = idx.trailing_zeros() as usize;
        let p = k - 1 - low;
        let rest = idx & (idx - 1);
        let mut v = &value[rest] * &ratio[p];
        for (t, mu_t) in mu.iter().enumerate() {
            if t != p && rest & unit(t) != 0 {
                v *= &mu_t[p];
            }
        }
        if &v != f.at(idx) {
            return None;
        }
        value.push(v);
    }
    let mut unary: Vec<UnaryFactor> = ratio.iter().map(|r| (Weight::one(), r.clone())).collect();
    let mut pairs = Vec::new();
    for r in 0..k {
        for s in r + 1..k {
            if mu[r][s] > Weight::one() {
                // μ^{x_r x_s} = μ^{x_r} · (1/μ)^{x_r (1 - x_s)}
                unary[r].1 *= &mu[r][s];
                pairs.push((r, s, mu[r][s].recip()));
            }
        }
    }
    let mut constant = c0;
    fold_constant(&mut unary, &mut constant);
    Some(ImOptCertificate {
        arity: k,
        unary_factors: unary,
        lambda_pairs: pairs,
        constant,
    })
}

fn partial_support(f: &ConstraintTable, cfg: &FitConfig) -> Option<ImOptCertificate> {
    let k = f.arity();
    let s = f.support();
    let pins = derive_pins(&s);
    let imps = derive_implications(&s, &pins);
    let free: Vec<usize> = (0..k).filter(|&p| pins[p].is_none()).collect();
    // A pair with an implication in either direction has x_r x_s equal to a
    // single coordinate on the support, so its term folds into a linear one.
    let pairs: Vec<(usize, usize)> = free
        .iter()
        .flat_map(|&r| free.iter().filter(move |&&t| t > r).map(move |&t| (r, t)))
        .filter(|&(r, t)| !imps.contains(&(r, t)) && !imps.contains(&(t, r)))
        .collect();
    let nfeat = 1 + free.len() + pairs.len();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(s.len());
    let mut rhs: Vec<f64> = Vec::with_capacity(s.len());
    for idx in s.iter() {
        let b = |p| bit(idx, k, p) as u8 as f64;
        let mut row = Vec::with_capacity(nfeat);
        row.push(1.0);
        row.extend(free.iter().map(|&p| b(p)));
        row.extend(pairs.iter().map(|&(r, t)| b(r) * b(t)));
        rows.push(row);
        rhs.push(rational::log2(f.at(idx)).expect("support entries are nonzero"));
    }
    let scale = rhs.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = cfg.tolerance * scale;
    let basis = simplex::independent_rows(&rows, 1e-9);
    let a: Vec<Vec<f64>> = basis.iter().map(|&r| rows[r].clone()).collect();
    let b: Vec<f64> = basis.iter().map(|&r| rhs[r]).collect();
    let nonneg: Vec<bool> = (0..nfeat).map(|j| j > free.len()).collect();
    let z = simplex::feasible_point(&a, &b, &nonneg, tol * basis.len().max(1) as f64)?;
    for (row, want) in rows.iter().zip(&rhs) {
        let got: f64 = row.iter().zip(&z).map(|(x, y)| x * y).sum();
        if (got - want).abs() > tol {
            return None;
        }
    }
    let snap = |x: f64| rational::snap(x.exp2(), 1e-12);
    let mut linear: Vec<f64> = z[1..=free.len()].to_vec();
    let mut lambda_pairs = Vec::new();
    for (t, &(r, s2)) in pairs.iter().enumerate() {
        let q = z[1 + free.len() + t].max(0.0);
        if q > 1e-12 {
            let fi = free.iter().position(|&p| p == r).unwrap();
            linear[fi] += q;
            lambda_pairs.push((r, s2, snap(-q)?));
        }
    }
    for &(r, t) in &imps {
        lambda_pairs.push((r, t, Weight::zero()));
    }
    let mut unary: Vec<UnaryFactor> = vec![(Weight::one(), Weight::one()); k];
    for (p, pin) in pins.iter().enumerate() {
        match pin {
            Some(false) => unary[p].1 = Weight::zero(),
            Some(true) => unary[p].0 = Weight::zero(),
            None => {}
        }
    }
    for (fi, &p) in free.iter().enumerate() {
        unary[p].1 = snap(linear[fi])?;
    }
    let mut constant = snap(z[0])?;
    fold_constant(&mut unary, &mut constant);
    let cert = ImOptCertificate {
        arity: k,
        unary_factors: unary,
        lambda_pairs,
        constant,
    };
    cert.reproduces(f, cfg.tolerance).then_some(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::builtin::*;
    use crate::rational::{int, ratio};

    fn tb(w: &[i64]) -> ConstraintTable {
        ConstraintTable::from_ints(w).unwrap()
    }

    #[test]
    fn cross_ratio_example() {
        let f = tb(&[2, 1, 1, 1]);
        let c = is_imopt(&f).unwrap();
        assert_eq!(c.unary_factors, vec![(int(2), int(2)), (int(1), ratio(1, 2))]);
        assert_eq!(c.lambda_pairs, vec![(0, 1, ratio(1, 2))]);
        assert_eq!(c.rebuild(), f);
    }

    #[test]
    fn implies_is_a_zero_lambda() {
        let c = is_imopt(&implies()).unwrap();
        assert_eq!(c.lambda_pairs, vec![(0, 1, int(0))]);
        assert_eq!(c.rebuild(), implies());
    }

    #[test]
    fn rejections() {
        assert!(is_imopt(&tb(&[1, 2, 2, 1])).is_none());
        assert!(is_imopt(&xor()).is_none());
        assert!(is_imopt(&or()).is_none());
        assert!(is_imopt(&nand()).is_none());
    }

    #[test]
    fn members() {
        for w in [
            vec![1, 1, 0, 1],
            vec![1, 0, 0, 1],
            vec![1, 0],
            vec![0, 0, 0, 0],
            vec![2, 4, 3, 6],
            vec![4, 2, 1, 2],
        ] {
            let f = tb(&w);
            let c = is_imopt(&f).unwrap_or_else(|| panic!("{f}"));
            assert!(c.reproduces(&f, 1e-9), "{f}");
        }
    }

    #[test]
    fn ternary_partial_support() {
        // Implies(x1,x2) * (1,1,1/2,1)(x2,x3) * (1,2) on x3
        let mut w = vec![Weight::zero(); 8];
        for idx in 0..8usize {
            let (a, b, c) = (idx >> 2 & 1, idx >> 1 & 1, idx & 1);
            if a == 1 && b == 0 {
                continue;
            }
            let mut v = Weight::one();
            if b == 1 && c == 0 {
                v *= ratio(1, 2);
            }
            if c == 1 {
                v *= int(2);
            }
            w[idx] = v;
        }
        let f = ConstraintTable::new(3, w).unwrap();
        let c = is_imopt(&f).unwrap();
        assert_eq!(c.rebuild(), f);
        // forces a negative (x1, x3) interaction
        let mut g = f.weights().to_vec();
        g[0b011] = int(8);
        let g = ConstraintTable::new(3, g).unwrap();
        assert!(is_imopt(&g).is_none());
    }
}
