//! Independent membership oracles for small tables whose nonzero weights are
//! powers of two. A table is given by `log₂` of each entry, `None` for zero.
//!
//! The oracles enumerate the combinatorial structures that can cut out a
//! support (pins with parity components, or pins with implications) and then
//! test the value condition exactly in integer arithmetic.

#![allow(dead_code)]

use std::collections::HashMap;

use num_rational::Ratio;

pub type LogTable = Vec<Option<i64>>;

fn bit(idx: usize, k: usize, p: usize) -> bool {
    (idx >> (k - 1 - p)) & 1 == 1
}

fn support(f: &LogTable) -> u32 {
    f.iter()
        .enumerate()
        .filter(|(_, v)| v.is_some())
        .fold(0, |m, (i, _)| m | 1 << i)
}

fn arity_of(f: &LogTable) -> usize {
    f.len().trailing_zeros() as usize
}

/// `log f(x) + (m-1) log f(0) = Σ_j log f(0 with bit j set to x_j)` on the
/// full cube `{0,1}^m`, for a positive function `g` given in log form.
fn rank_one(g: &[i64], m: usize) -> bool {
    (0..1usize << m).all(|x| {
        let rhs: i64 = (0..m).map(|j| g[x & (1 << (m - 1 - j))]).sum();
        g[x] + (m as i64 - 1) * g[0] == rhs
    })
}

/// Product of unary constraints: the support is a box and the values are
/// rank one on it.
pub fn degenerate(f: &LogTable) -> bool {
    let k = arity_of(f);
    let s = support(f);
    if s == 0 {
        return true;
    }
    let members: Vec<usize> = (0..f.len()).filter(|&i| s >> i & 1 == 1).collect();
    let proj: Vec<(bool, bool)> = (0..k)
        .map(|p| (members.iter().any(|&i| !bit(i, k, p)), members.iter().any(|&i| bit(i, k, p))))
        .collect();
    let box_size: usize = proj.iter().map(|&(a, b)| a as usize + b as usize).product();
    if box_size != members.len() {
        return false;
    }
    let b = members[0];
    let set = |x: usize, p: usize, c: bool| {
        let m = 1 << (k - 1 - p);
        if c {
            x | m
        } else {
            x & !m
        }
    };
    members.iter().all(|&x| {
        let lhs = f[x].unwrap() + (k as i64 - 1) * f[b].unwrap();
        let rhs: i64 = (0..k).map(|p| f[set(b, p, bit(x, k, p))].unwrap()).sum();
        lhs == rhs
    })
}

/// A position is pinned, or a member of a parity component with a parity
/// relative to the component bit.
#[derive(Clone, Copy, Debug)]
enum Label {
    Pin(bool),
    Comp(usize, bool),
}

fn parity_structures(k: usize) -> Vec<Vec<Label>> {
    fn go(k: usize, comps: usize, cur: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for l in [Label::Pin(false), Label::Pin(true)] {
            cur.push(l);
            go(k, comps, cur, out);
            cur.pop();
        }
        for c in 0..comps {
            for p in [false, true] {
                cur.push(Label::Comp(c, p));
                go(k, comps, cur, out);
                cur.pop();
            }
        }
        cur.push(Label::Comp(comps, false));
        go(k, comps + 1, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    go(k, 0, &mut Vec::new(), &mut out);
    out
}

/// Point of `{0,1}^k` for component bits `c` (bit `j` of `c`, MSB first).
fn parity_point(labels: &[Label], m: usize, c: usize) -> usize {
    labels.iter().fold(0, |acc, l| {
        let b = match *l {
            Label::Pin(v) => v,
            Label::Comp(j, p) => ((c >> (m - 1 - j)) & 1 == 1) ^ p,
        };
        (acc << 1) | b as usize
    })
}

pub struct EdOracle {
    /// Per arity: structures with their component count.
    structures: Vec<Vec<(Vec<Label>, usize)>>,
}

impl EdOracle {
    pub fn new(max_arity: usize) -> Self {
        let structures = (0..=max_arity)
            .map(|k| {
                parity_structures(k)
                    .into_iter()
                    .map(|l| {
                        let m = l
                            .iter()
                            .filter_map(|x| match x {
                                Label::Comp(j, _) => Some(j + 1),
                                _ => None,
                            })
                            .max()
                            .unwrap_or(0);
                        (l, m)
                    })
                    .collect()
            })
            .collect();
        EdOracle { structures }
    }

    /// Unary factors times EQ/XOR links: some pin/parity structure cuts out
    /// exactly the support and the values factor over its components.
    pub fn ed(&self, f: &LogTable) -> bool {
        let k = arity_of(f);
        let s = support(f);
        if s == 0 {
            return true;
        }
        self.structures[k].iter().any(|(labels, m)| {
            let points: Vec<usize> = (0..1usize << m).map(|c| parity_point(labels, *m, c)).collect();
            let sol = points.iter().fold(0u32, |acc, &p| acc | 1 << p);
            if sol != s {
                return false;
            }
            let g: Vec<i64> = points.iter().map(|&p| f[p].unwrap()).collect();
            rank_one(&g, *m)
        })
    }
}

type Q = Ratio<i64>;

/// For one support and one set of active pair terms: integer rows whose dot
/// products with the log values must vanish, and rows giving the (unique)
/// pair coefficients.
struct ActiveSet {
    consistency: Vec<Vec<i64>>,
    coefficients: Vec<Vec<i64>>,
}

fn integer_row(row: &[Q]) -> Vec<i64> {
    let l = row.iter().fold(1i64, |acc, q| num_integer_lcm(acc, *q.denom()));
    row.iter().map(|q| (q * Q::from_integer(l)).to_integer()).collect()
}

fn num_integer_lcm(a: i64, b: i64) -> i64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Reduced row echelon form of `[a | I]`; returns the reduced matrix, the
/// row transform, and the pivot column of each nonzero row.
fn rref(a: &[Vec<Q>]) -> (Vec<Vec<Q>>, Vec<Vec<Q>>, Vec<usize>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Q>> = a.to_vec();
    let mut e: Vec<Vec<Q>> = (0..rows)
        .map(|i| (0..rows).map(|j| Q::from_integer((i == j) as i64)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] != Q::from_integer(0)) else { continue };
        m.swap(r, p);
        e.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for x in e[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && m[i][c] != Q::from_integer(0) {
                let factor = m[i][c];
                for j in 0..cols {
                    let v = m[r][j];
                    m[i][j] -= factor * v;
                }
                for j in 0..rows {
                    let v = e[r][j];
                    e[i][j] -= factor * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (m, e, pivots)
}

pub struct ImOracle {
    /// Imp-definable supports, per arity.
    imp_supports: Vec<std::collections::HashSet<u32>>,
    /// Active sets per (arity, support), built lazily.
    cone: HashMap<(usize, u32), Vec<ActiveSet>>,
}

impl ImOracle {
    pub fn new(max_arity: usize) -> Self {
        let imp_supports = (0..=max_arity).map(imp_definable_supports).collect();
        ImOracle {
            imp_supports,
            cone: HashMap::new(),
        }
    }

    pub fn imp_support(&self, k: usize, s: u32) -> bool {
        s == 0 || self.imp_supports[k].contains(&s)
    }

    /// Unary factors times `(1, 1, λ, 1)` pair factors with `0 ≤ λ < 1`: the
    /// support is cut out by pins and implications, and on it
    /// `log f = a₀ + Σ aᵢxᵢ + Σ c_rs x_r(1 - x_s)` has a solution with all
    /// `c_rs ≤ 0`.
    pub fn imopt(&mut self, f: &LogTable) -> bool {
        let k = arity_of(f);
        let s = support(f);
        if s == 0 {
            return true;
        }
        if !self.imp_supports[k].contains(&s) {
            return false;
        }
        let members: Vec<usize> = (0..f.len()).filter(|&i| s >> i & 1 == 1).collect();
        let b: Vec<i64> = members.iter().map(|&i| f[i].unwrap()).collect();
        let sets = self.cone.entry((k, s)).or_insert_with(|| active_sets(k, &members));
        let dot = |row: &[i64]| row.iter().zip(&b).map(|(x, y)| x * y).sum::<i64>();
        sets.iter().any(|a| {
            a.consistency.iter().all(|r| dot(r) == 0) && a.coefficients.iter().all(|r| dot(r) <= 0)
        })
    }
}

fn imp_definable_supports(k: usize) -> std::collections::HashSet<u32> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|r| (0..k).filter(move |&s| s != r).map(move |s| (r, s))).collect();
    let mut out = std::collections::HashSet::new();
    for pins in 0..3usize.pow(k as u32) {
        let pin: Vec<u8> = (0..k).map(|p| (pins / 3usize.pow(p as u32) % 3) as u8).collect();
        for imp in 0..1u32 << pairs.len() {
            let sol = (0..1usize << k)
                .filter(|&x| {
                    (0..k).all(|p| pin[p] == 2 || bit(x, k, p) == (pin[p] == 1))
                        && pairs
                            .iter()
                            .enumerate()
                            .all(|(i, &(r, s))| imp >> i & 1 == 0 || !bit(x, k, r) || bit(x, k, s))
                })
                .fold(0u32, |acc, x| acc | 1 << x);
            if sol != 0 {
                out.insert(sol);
            }
        }
    }
    out
}

/// Every active set `P` of pair terms for which the system restricted to
/// `(a, c_P)` determines `c_P` uniquely. A feasible point with minimal
/// active set is of this form, so feasibility is equivalent to one of these
/// systems being consistent with a nonpositive solution.
fn active_sets(k: usize, members: &[usize]) -> Vec<ActiveSet> {
    let term = |x: usize, r: usize, s: usize| bit(x, k, r) && !bit(x, k, s);
    let relevant: Vec<(usize, usize)> = (0..k)
        .flat_map(|r| (0..k).filter(move |&s| s != r).map(move |s| (r, s)))
        .filter(|&(r, s)| members.iter().any(|&x| term(x, r, s)))
        .collect();
    let one = Q::from_integer(1);
    let zero = Q::from_integer(0);
    let mut out = Vec::new();
    for mask in 0..1u32 << relevant.len() {
        let active: Vec<(usize, usize)> =
            relevant.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        // Columns: pair terms first, then a₀ and the aᵢ.
        let a: Vec<Vec<Q>> = members
            .iter()
            .map(|&x| {
                let mut row: Vec<Q> = active.iter().map(|&(r, s)| if term(x, r, s) { one } else { zero }).collect();
                row.push(one);
                row.extend((0..k).map(|p| if bit(x, k, p) { one } else { zero }));
                row
            })
            .collect();
        let (m, e, pivots) = rref(&a);
        let nc = active.len();
        // Each pair column must be a pivot, and no free column may feed a
        // pair pivot row.
        if (0..nc).any(|c| !pivots.contains(&c)) {
            continue;
        }
        let cols = nc + 1 + k;
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        if (0..nc).any(|r| free.iter().any(|&c| m[r][c] != zero)) {
            continue;
        }
        out.push(ActiveSet {
            consistency: (pivots.len()..members.len()).map(|r| integer_row(&e[r])).collect(),
            coefficients: (0..nc).map(|r| integer_row(&e[r])).collect(),
        });
    }
    out
}
