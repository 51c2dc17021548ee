//! Structure of underlying relations: affine support, pins, parity links and
//! implications derived from a support, and the rebuild-and-compare tests.

use crate::constraint::{bit, ConstraintTable, Support};

/// True iff `R_f` is closed under XOR of any three members. The empty
/// relation counts as affine.
pub fn has_affine_support(f: &ConstraintTable) -> bool {
    is_affine(&f.support())
}

/// A nonempty set is an affine coset iff, after translating by one member,
/// its GF(2) span has exactly as many elements as the set.
pub fn is_affine(s: &Support) -> bool {
    let mut members = s.iter();
    let Some(a0) = members.next() else {
        return true;
    };
    let mut basis: Vec<usize> = Vec::new();
    for m in s.iter() {
        let mut v = m ^ a0;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    s.len() == 1 << basis.len()
}

/// Positions that are constant over the support.
pub fn derive_pins(s: &Support) -> Vec<Option<bool>> {
    let k = s.arity();
    let mut seen = vec![[false; 2]; k];
    for idx in s.iter() {
        for (p, sv) in seen.iter_mut().enumerate() {
            sv[bit(idx, k, p) as usize] = true;
        }
    }
    seen.iter()
        .map(|sv| match sv {
            [true, false] => Some(false),
            [false, true] => Some(true),
            _ => None,
        })
        .collect()
}

/// A relation between two unpinned positions that holds on the whole support.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Equal,
    Unequal,
}

/// Pairwise parity links `(i, j, parity)`, `i < j`, among unpinned positions.
pub fn derive_parity_links(s: &Support, pins: &[Option<bool>]) -> Vec<(usize, usize, Parity)> {
    let k = s.arity();
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if pins[i].is_some() || pins[j].is_some() {
                continue;
            }
            let (mut eq, mut ne) = (true, true);
            for idx in s.iter() {
                if bit(idx, k, i) == bit(idx, k, j) {
                    ne = false;
                } else {
                    eq = false;
                }
            }
            if eq {
                out.push((i, j, Parity::Equal));
            } else if ne {
                out.push((i, j, Parity::Unequal));
            }
        }
    }
    out
}

/// Implications `(i, j)` meaning `x_i → x_j`, among unpinned positions.
pub fn derive_implications(s: &Support, pins: &[Option<bool>]) -> Vec<(usize, usize)> {
    let k = s.arity();
    let mut out = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i == j || pins[i].is_some() || pins[j].is_some() {
                continue;
            }
            if !s.iter().any(|idx| bit(idx, k, i) && !bit(idx, k, j)) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Solution set of a system of pins, parity links and implications.
pub fn solutions(
    arity: usize,
    pins: &[Option<bool>],
    parities: &[(usize, usize, Parity)],
    implications: &[(usize, usize)],
) -> Support {
    let mut out = Support::empty(arity);
    for idx in 0..1usize << arity {
        let b = |p| bit(idx, arity, p);
        let ok = pins
            .iter()
            .enumerate()
            .all(|(p, pin)| pin.is_none_or(|c| b(p) == c))
            && parities.iter().all(|&(i, j, par)| match par {
                Parity::Equal => b(i) == b(j),
                Parity::Unequal => b(i) != b(j),
            })
            && implications.iter().all(|&(i, j)| !b(i) || b(j));
        if ok {
            out.insert(idx);
        }
    }
    out
}

/// True iff `R_f` is the solution set of pins and binary implications.
///
/// The empty conjunction is allowed (full support qualifies), and the empty
/// relation is accepted.
pub fn has_imp_support(f: &ConstraintTable) -> bool {
    is_imp_definable(&f.support())
}

pub fn is_imp_definable(s: &Support) -> bool {
    if s.is_empty() {
        return true;
    }
    let pins = derive_pins(s);
    let imps = derive_implications(s, &pins);
    solutions(s.arity(), &pins, &[], &imps) == *s
}

/// True iff the support is the solution set of pins and parity links.
pub fn is_parity_definable(s: &Support) -> bool {
    if s.is_empty() {
        return true;
    }
    let pins = derive_pins(s);
    let links = derive_parity_links(s, &pins);
    solutions(s.arity(), &pins, &links, &[]) == *s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::builtin::*;

    fn triple_xor_closed(s: &Support) -> bool {
        let m: Vec<usize> = s.iter().collect();
        m.iter()
            .all(|&a| m.iter().all(|&b| m.iter().all(|&c| s.contains(a ^ b ^ c))))
    }

    #[test]
    fn affine_examples() {
        assert!(has_affine_support(&xor()));
        assert!(!has_affine_support(&or()));
        assert!(!has_affine_support(&implies()));
        assert!(has_affine_support(&ConstraintTable::from_ints(&[0, 0]).unwrap()));
    }

    #[test]
    fn rank_test_matches_triple_xor_closure() {
        for k in 0..=4usize {
            let n = 1usize << k;
            // every relation for k <= 3, a strided sample at k = 4
            let step = if k == 4 { 37 } else { 1 };
            let mut code = 0u64;
            while code < 1u64 << n {
                let s = Support::from_indices(k, (0..n).filter(|&i| code >> i & 1 == 1));
                assert_eq!(is_affine(&s), triple_xor_closed(&s), "k={k} code={code:b}");
                code += step;
            }
        }
    }

    #[test]
    fn imp_examples() {
        assert!(has_imp_support(&implies()));
        assert!(!has_imp_support(&xor()));
        assert!(!has_imp_support(&nand()));
        assert!(!has_imp_support(&or()));
        assert!(has_imp_support(&eq()));
        assert!(has_imp_support(&ConstraintTable::from_ints(&[2, 1, 1, 1]).unwrap()));
    }

    #[test]
    fn imp_support_is_lattice_closed() {
        for code in 0u64..1 << 8 {
            let s = Support::from_indices(3, (0..8).filter(|&i| code >> i & 1 == 1));
            if is_imp_definable(&s) {
                for a in s.iter() {
                    for b in s.iter() {
                        assert!(s.contains(a & b) && s.contains(a | b));
                    }
                }
            }
        }
    }

    #[test]
    fn derived_structure() {
        let s = ConstraintTable::from_ints(&[0, 1, 0, 0, 0, 0, 2, 0]).unwrap().support();
        assert_eq!(derive_pins(&s), vec![None, None, None]);
        assert_eq!(
            derive_parity_links(&s, &[None, None, None]),
            vec![(0, 1, Parity::Equal), (0, 2, Parity::Unequal), (1, 2, Parity::Unequal)]
        );
        assert!(is_parity_definable(&s));
        assert!(!is_parity_definable(&or().support()));
    }
}
