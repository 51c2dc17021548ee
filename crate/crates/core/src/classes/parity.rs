//! Constraints built from unary factors and parity relations: the ED class
//! (arbitrary equality/disequality links) and the AF class (a star of binary
//! affine relations around one pivot).
//!
//! Both deciders first establish that the support is cut out by pins and
//! parity links. On such a support every coordinate is a constant or a
//! component bit, possibly negated, so "log f is real-affine on the support"
//! is the same as "f is a product of one factor per component", and that is
//! checked exactly in rational arithmetic.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::support::{derive_parity_links, derive_pins, is_affine, solutions, Parity};
use super::{fold_constant, Certificate, UnaryFactor};
use crate::constraint::{bit, ConstraintTable, Support};
use crate::rational::Weight;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdCertificate {
    pub arity: usize,
    pub pins: BTreeMap<usize, bool>,
    pub parity_links: Vec<(usize, usize, Parity)>,
    pub unary_factors: Vec<UnaryFactor>,
    pub constant: Weight,
}

impl Certificate for EdCertificate {
    fn arity(&self) -> usize {
        self.arity
    }

    fn value_at(&self, idx: usize) -> Weight {
        let k = self.arity;
        let b = |p| bit(idx, k, p);
        if self.pins.iter().any(|(&p, &c)| b(p) != c) {
            return Weight::zero();
        }
        let links_ok = self.parity_links.iter().all(|&(i, j, par)| match par {
            Parity::Equal => b(i) == b(j),
            Parity::Unequal => b(i) != b(j),
        });
        if !links_ok {
            return Weight::zero();
        }
        unary_product(&self.unary_factors, &self.constant, idx, k)
    }
}

/// A binary affine relation on `(x_pivot, x_j)`, as a bit mask over
/// `{00, 01, 10, 11}` (bit `2a + b` set when `(a, b)` is a member).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BinaryRelation(pub u8);

impl BinaryRelation {
    pub const FULL: BinaryRelation = BinaryRelation(0b1111);
    pub const EQ: BinaryRelation = BinaryRelation(0b1001);
    pub const XOR: BinaryRelation = BinaryRelation(0b0110);

    pub fn contains(self, a: bool, b: bool) -> bool {
        self.0 >> (2 * a as u8 + b as u8) & 1 == 1
    }

    pub fn is_affine(self) -> bool {
        let s = Support::from_indices(2, (0..4).filter(|&i| self.0 >> i & 1 == 1));
        is_affine(&s)
    }
}

/// `f(x) = constant · ∏ uᵢ(xᵢ) · ∏_{j ≠ pivot} R_j(x_pivot, x_j)`.
///
/// Pins live in the unary factors, so every `R_j` is `FULL`, `EQ` or `XOR`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AfCertificate {
    pub arity: usize,
    pub pivot: usize,
    /// `(j, R_j)` for every `j ≠ pivot`.
    pub binary_relations: Vec<(usize, BinaryRelation)>,
    pub unary_factors: Vec<UnaryFactor>,
    pub constant: Weight,
}

impl Certificate for AfCertificate {
    fn arity(&self) -> usize {
        self.arity
    }

    fn value_at(&self, idx: usize) -> Weight {
        let k = self.arity;
        let xi = bit(idx, k, self.pivot);
        if self
            .binary_relations
            .iter()
            .any(|&(j, r)| !r.contains(xi, bit(idx, k, j)))
        {
            return Weight::zero();
        }
        unary_product(&self.unary_factors, &self.constant, idx, k)
    }
}

fn unary_product(factors: &[UnaryFactor], constant: &Weight, idx: usize, k: usize) -> Weight {
    let mut v = constant.clone();
    for (p, (u0, u1)) in factors.iter().enumerate() {
        v *= if bit(idx, k, p) { u1 } else { u0 };
        if v.is_zero() {
            break;
        }
    }
    v
}

/// A support cut out by pins and parity links, parametrized by one free bit
/// per parity component.
struct Parametrization {
    pins: Vec<Option<bool>>,
    links: Vec<(usize, usize, Parity)>,
    /// For unpinned positions: (component, flipped relative to the component bit).
    coord: Vec<Option<(usize, bool)>>,
    /// Smallest position in each component; its bit equals the component bit.
    reps: Vec<usize>,
}

impl Parametrization {
    fn of(s: &Support) -> Option<Self> {
        let k = s.arity();
        let pins = derive_pins(s);
        let links = derive_parity_links(s, &pins);
        if solutions(k, &pins, &links, &[]) != *s {
            return None;
        }
        let mut coord: Vec<Option<(usize, bool)>> = vec![None; k];
        let mut reps = Vec::new();
        for p in 0..k {
            if pins[p].is_some() || coord[p].is_some() {
                continue;
            }
            let c = reps.len();
            reps.push(p);
            coord[p] = Some((c, false));
            for &(i, j, par) in &links {
                if i == p {
                    coord[j] = Some((c, par == Parity::Unequal));
                }
            }
        }
        Some(Parametrization {
            pins,
            links,
            coord,
            reps,
        })
    }

    fn point(&self, y: usize) -> usize {
        let k = self.pins.len();
        let mut idx = 0;
        for p in 0..k {
            let b = match (self.pins[p], self.coord[p]) {
                (Some(c), _) => c,
                (None, Some((c, flip))) => (y >> c & 1 == 1) ^ flip,
                (None, None) => unreachable!("every unpinned position has a component"),
            };
            idx = (idx << 1) | b as usize;
        }
        idx
    }

    /// Exact per-component factorization of `f` over the support:
    /// `f(point(y)) = c · ∏_{t : y_t = 1} r_t`.
    fn factorize(&self, f: &ConstraintTable) -> Option<(Weight, Vec<Weight>)> {
        let m = self.reps.len();
        let c = f.at(self.point(0)).clone();
        if c.is_zero() {
            return None;
        }
        let ratios: Vec<Weight> = (0..m).map(|t| f.at(self.point(1 << t)) / &c).collect();
        let mut prod: Vec<Weight> = Vec::with_capacity(1 << m);
        prod.push(c.clone());
        for y in 1usize..1 << m {
            let low = y.trailing_zeros() as usize;
            let v = &prod[y & (y - 1)] * &ratios[low];
            if f.at(self.point(y)) != &v {
                return None;
            }
            prod.push(v);
        }
        Some((c, ratios))
    }

    /// Unary factors carrying the component ratios on representatives and the
    /// pins as zero entries.
    fn unary_factors(&self, ratios: &[Weight], with_pins: bool) -> Vec<UnaryFactor> {
        let k = self.pins.len();
        let mut u: Vec<UnaryFactor> = vec![(Weight::one(), Weight::one()); k];
        for (t, &r) in self.reps.iter().enumerate() {
            u[r].1 = ratios[t].clone();
        }
        if with_pins {
            for (p, pin) in self.pins.iter().enumerate() {
                match pin {
                    Some(false) => u[p].1 = Weight::zero(),
                    Some(true) => u[p].0 = Weight::zero(),
                    None => {}
                }
            }
        }
        u
    }
}

fn zero_factors(k: usize) -> (Vec<UnaryFactor>, Weight) {
    let mut u = vec![(Weight::one(), Weight::one()); k];
    let mut c = Weight::zero();
    fold_constant(&mut u, &mut c);
    (u, c)
}

pub fn is_ed(f: &ConstraintTable) -> Option<EdCertificate> {
    let k = f.arity();
    let s = f.support();
    if s.is_empty() {
        let (unary_factors, constant) = zero_factors(k);
        return Some(EdCertificate {
            arity: k,
            pins: BTreeMap::new(),
            parity_links: Vec::new(),
            unary_factors,
            constant,
        });
    }
    if !is_affine(&s) {
        return None;
    }
    let par = Parametrization::of(&s)?;
    let (mut constant, ratios) = par.factorize(f)?;
    let mut unary_factors = par.unary_factors(&ratios, false);
    fold_constant(&mut unary_factors, &mut constant);
    // Spanning links only: each non-representative tied to its representative.
    let parity_links = par
        .links
        .iter()
        .copied()
        .filter(|(i, _, _)| par.reps.contains(i))
        .collect();
    Some(EdCertificate {
        arity: k,
        pins: par
            .pins
            .iter()
            .enumerate()
            .filter_map(|(p, c)| c.map(|c| (p, c)))
            .collect(),
        parity_links,
        unary_factors,
        constant,
    })
}

/// Affine closure of a relation inside `{0,1}²`.
fn affine_closure2(mask: u8) -> u8 {
    let members: Vec<u8> = (0..4).filter(|&i| mask >> i & 1 == 1).collect();
    let mut out = mask;
    for &a in &members {
        for &b in &members {
            for &c in &members {
                out |= 1 << (a ^ b ^ c);
            }
        }
    }
    out
}

/// Pivot search: `R_f` must equal the set cut out by the single-coordinate
/// projections together with the affine closures of every `(pivot, j)`
/// projection, and the values must factor over the resulting support.
pub fn is_af(f: &ConstraintTable) -> Option<AfCertificate> {
    let k = f.arity();
    let s = f.support();
    if s.is_empty() || k == 0 {
        let (unary_factors, constant) = if s.is_empty() {
            zero_factors(k)
        } else {
            (Vec::new(), f.at(0).clone())
        };
        return Some(AfCertificate {
            arity: k,
            pivot: 0,
            binary_relations: (1..k).map(|j| (j, BinaryRelation::FULL)).collect(),
            unary_factors,
            constant,
        });
    }
    let singles: Vec<Support> = (0..k).map(|l| s.project(&[l])).collect();
    for pivot in 0..k {
        let closures: Vec<(usize, u8)> = (0..k)
            .filter(|&j| j != pivot)
            .map(|j| {
                let proj = s.project(&[pivot, j]);
                let mask = (0..4).filter(|&i| proj.contains(i)).fold(0u8, |m, i| m | 1 << i);
                (j, affine_closure2(mask))
            })
            .collect();
        let rebuilt = Support::from_indices(
            k,
            (0..1usize << k).filter(|&idx| {
                (0..k).all(|l| singles[l].contains(bit(idx, k, l) as usize))
                    && closures.iter().all(|&(j, m)| {
                        BinaryRelation(m).contains(bit(idx, k, pivot), bit(idx, k, j))
                    })
            }),
        );
        if rebuilt != s {
            continue;
        }
        let par = Parametrization::of(&s)?;
        let (mut constant, ratios) = par.factorize(f)?;
        let mut unary_factors = par.unary_factors(&ratios, true);
        fold_constant(&mut unary_factors, &mut constant);
        // Pins are carried by the unary factors; keep only the parity part.
        let binary_relations = closures
            .iter()
            .map(|&(j, m)| {
                let rel = match m {
                    0b1001 => BinaryRelation::EQ,
                    0b0110 => BinaryRelation::XOR,
                    _ => BinaryRelation::FULL,
                };
                (j, rel)
            })
            .collect();
        return Some(AfCertificate {
            arity: k,
            pivot,
            binary_relations,
            unary_factors,
            constant,
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::builtin::*;
    use crate::rational::int;

    fn tb(w: &[i64]) -> ConstraintTable {
        ConstraintTable::from_ints(w).unwrap()
    }

    #[test]
    fn ed_eq() {
        let c = is_ed(&eq()).unwrap();
        assert_eq!(c.parity_links, vec![(0, 1, Parity::Equal)]);
        assert!(c.pins.is_empty());
        assert_eq!(c.rebuild(), eq());
    }

    #[test]
    fn ed_chain_with_unary() {
        let f = tb(&[0, 1, 0, 0, 0, 0, 2, 0]);
        let c = is_ed(&f).unwrap();
        assert_eq!(c.parity_links.len(), 2);
        let nontrivial = c
            .unary_factors
            .iter()
            .filter(|(a, b)| a != b)
            .count();
        assert_eq!(nontrivial, 1);
        assert_eq!(c.rebuild(), f);
    }

    #[test]
    fn ed_rejections() {
        assert!(is_ed(&implies()).is_none());
        assert!(is_ed(&or()).is_none());
        assert!(is_ed(&tb(&[1, 2, 2, 1])).is_none());
        assert!(is_ed(&tb(&[2, 1, 1, 1])).is_none());
        // affine support {000,011,101,110} is not pins + pairwise parity
        assert!(is_ed(&tb(&[1, 0, 0, 1, 0, 1, 1, 0])).is_none());
    }

    #[test]
    fn ed_zero_and_degenerate() {
        let z = tb(&[0, 0, 0, 0]);
        assert_eq!(is_ed(&z).unwrap().rebuild(), z);
        let d = tb(&[2, 4, 3, 6]);
        assert_eq!(is_ed(&d).unwrap().rebuild(), d);
        let pinned = tb(&[0, 0, 3, 6]);
        assert_eq!(is_ed(&pinned).unwrap().rebuild(), pinned);
    }

    #[test]
    fn af_star() {
        let f = tb(&[1, 0, 0, 0, 0, 0, 0, 2]);
        let c = is_af(&f).unwrap();
        assert_eq!(c.pivot, 0);
        assert_eq!(c.rebuild(), f);
        assert!(is_af(&implies()).is_none());
        let d = tb(&[2, 4, 3, 6]);
        let c = is_af(&d).unwrap();
        assert!(c.binary_relations.iter().all(|&(_, r)| r == BinaryRelation::FULL));
    }

    #[test]
    fn af_needs_a_single_pivot() {
        // EQ(x1,x2) * EQ(x3,x4): ED but no pivot sees both links
        let mut w = vec![0i64; 16];
        for idx in [0b0000, 0b0011, 0b1100, 0b1111] {
            w[idx] = 1;
        }
        let f = tb(&w);
        assert!(is_ed(&f).is_some());
        assert!(is_af(&f).is_none());
        // pivot in the middle: EQ(x2,x1) * XOR(x2,x3)
        let g = tb(&[0, 1, 0, 0, 0, 0, 2, 0]);
        assert_eq!(is_af(&g).unwrap().rebuild(), g);
    }

    #[test]
    fn af_values_must_factor() {
        assert!(is_af(&tb(&[1, 2, 2, 1])).is_none());
        assert!(is_af(&tb(&[3, 0, 0, 0, 0, 0, 0, 2])).is_some());
        let c = is_af(&ConstraintTable::new(0, vec![int(4)]).unwrap()).unwrap();
        assert_eq!(c.constant, int(4));
    }

    #[test]
    fn closure2() {
        assert_eq!(affine_closure2(0b0111), 0b1111);
        assert_eq!(affine_closure2(0b1001), 0b1001);
        assert_eq!(affine_closure2(0), 0);
        assert!(BinaryRelation(0b0011).is_affine());
        assert!(!BinaryRelation(0b0111).is_affine());
    }
}
