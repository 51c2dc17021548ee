//! Solvers: the exhaustive oracle, the parity-component solver for ED/AF
//! instances, approximation schemes and the ratio check.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classes::{is_af, is_ed, AfCertificate, BinaryRelation, Certificate, EdCertificate, Parity};
use crate::constraint::Assignment;
use crate::error::{Error, Result};
use crate::instance::CspInstance;
use crate::rational::{self, Weight};

/// Default variable cap for exhaustive search.
pub const DEFAULT_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    BruteForce,
    ParityComponents,
    External,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::BruteForce => "brute_force",
            Method::ParityComponents => "parity_components",
            Method::External => "external",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub optimum: Weight,
    /// `log₂` of the optimum; `None` exactly when the optimum is zero.
    pub log2: Option<f64>,
    pub argmax: Assignment,
    pub method: Method,
}

impl SolveResult {
    pub fn new(optimum: Weight, argmax: Assignment, method: Method) -> Self {
        let log2 = rational::log2(&optimum);
        SolveResult {
            optimum,
            log2,
            argmax,
            method,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.optimum.is_zero()
    }
}

/// Exhaustive search settings.
#[derive(Clone, Copy, Debug)]
pub struct BruteForce {
    pub cap: usize,
    /// Worker count; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for BruteForce {
    fn default() -> Self {
        BruteForce {
            cap: DEFAULT_CAP,
            threads: None,
        }
    }
}

impl BruteForce {
    pub fn with_cap(cap: usize) -> Self {
        BruteForce {
            cap,
            ..Default::default()
        }
    }

    pub fn solve(&self, inst: &CspInstance) -> Result<SolveResult> {
        let tables: Vec<&[Weight]> = inst.constraints().iter().map(|c| c.weights()).collect();
        let apps = inst.applications();
        let (opt, idx) = self.maximize(inst.num_vars(), |sigma| {
            let mut v = Weight::one();
            for a in apps {
                let w = &tables[a.constraint][inst.local_index(a, sigma)];
                if w.is_zero() {
                    return Weight::zero();
                }
                v *= w;
            }
            v
        })?;
        Ok(SolveResult::new(opt, Assignment::from_index(inst.num_vars(), idx), Method::BruteForce))
    }

    /// Maximum of `value` over `0..2^n` and the smallest index attaining it.
    pub fn maximize<F>(&self, n: usize, value: F) -> Result<(Weight, u64)>
    where
        F: Fn(u64) -> Weight + Sync,
    {
        if n > self.cap || n >= 64 {
            return Err(Error::CapExceeded { n, cap: self.cap });
        }
        let run = || scan(n, &value);
        match self.threads {
            None => Ok(run()),
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::arg(format!("thread pool: {e}")))
                .map(|pool| pool.install(run)),
        }
    }
}

fn scan<F: Fn(u64) -> Weight + Sync>(n: usize, value: &F) -> (Weight, u64) {
    let total = 1u64 << n;
    let chunk = (total / 256).max(1 << 8).min(total);
    let chunks = total.div_ceil(chunk);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk;
            let hi = (lo + chunk).min(total);
            let mut best = (value(lo), lo);
            for s in lo + 1..hi {
                let v = value(s);
                if v > best.0 {
                    best = (v, s);
                }
            }
            best
        })
        .reduce_with(better)
        .expect("at least one chunk")
}

/// Larger value wins; ties go to the smaller index. Associative and commutative.
fn better(a: (Weight, u64), b: (Weight, u64)) -> (Weight, u64) {
    match a.0.cmp(&b.0) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

/// Exhaustive search with the default cap.
pub fn brute_force(inst: &CspInstance) -> Result<SolveResult> {
    BruteForce::default().solve(inst)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TractableCertificate {
    Ed(EdCertificate),
    Af(AfCertificate),
}

impl TractableCertificate {
    fn is_exact_for(&self, f: &crate::ConstraintTable) -> bool {
        match self {
            TractableCertificate::Ed(c) => c.is_exact_for(f),
            TractableCertificate::Af(c) => c.is_exact_for(f),
        }
    }
}

/// One certificate slot per constraint of the instance, ED preferred.
pub fn certify_tractable(inst: &CspInstance) -> Vec<Option<TractableCertificate>> {
    inst.constraints()
        .iter()
        .map(|f| {
            is_ed(f)
                .map(TractableCertificate::Ed)
                .or_else(|| is_af(f).map(TractableCertificate::Af))
        })
        .collect()
}

/// Union-find over variables plus a constant-zero node, tracking parity to
/// the root.
struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
    contradiction: bool,
}

impl ParityUnionFind {
    fn new(nodes: usize) -> Self {
        ParityUnionFind {
            parent: (0..nodes).collect(),
            parity: vec![false; nodes],
            contradiction: false,
        }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, pp) = self.find(p);
        self.parent[x] = root;
        self.parity[x] ^= pp;
        (root, self.parity[x])
    }

    /// Records `x_a ⊕ x_b = odd`.
    fn union(&mut self, a: usize, b: usize, odd: bool) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            if pa ^ pb != odd {
                self.contradiction = true;
            }
            return;
        }
        // Keep the smaller node as root so that roots are component minima.
        let (root, child) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[child] = root;
        self.parity[child] = pa ^ pb ^ odd;
    }
}

/// Polynomial-time exact solver for instances whose applied constraints all
/// carry ED or AF certificates (`certs[i]` belongs to constraint `i`).
pub fn solve_tractable(inst: &CspInstance, certs: &[Option<TractableCertificate>]) -> Result<SolveResult> {
    let n = inst.num_vars();
    let zero_node = n;
    let mut uf = ParityUnionFind::new(n + 1);
    let mut unary: Vec<(Weight, Weight)> = vec![(Weight::one(), Weight::one()); n];
    let mut constant = Weight::one();

    for &ci in &inst.applied_constraints() {
        let table = &inst.constraints()[ci];
        let cert = certs.get(ci).and_then(Option::as_ref).ok_or_else(|| {
            Error::Certificate(format!(
                "constraint `{}` has no ED/AF certificate",
                table.name().unwrap_or("?")
            ))
        })?;
        if !cert.is_exact_for(table) {
            return Err(Error::Certificate(format!(
                "certificate does not reproduce constraint `{}`",
                table.name().unwrap_or("?")
            )));
        }
    }

    let pin = |uf: &mut ParityUnionFind, v: usize, c: bool| uf.union(v, zero_node, c);
    for app in inst.applications() {
        let cert = certs[app.constraint].as_ref().expect("checked above");
        let vars = &app.vars;
        let (factors, c) = match cert {
            TractableCertificate::Ed(ed) => {
                for (&p, &c) in &ed.pins {
                    pin(&mut uf, vars[p], c);
                }
                for &(i, j, par) in &ed.parity_links {
                    uf.union(vars[i], vars[j], par == Parity::Unequal);
                }
                (&ed.unary_factors, &ed.constant)
            }
            TractableCertificate::Af(af) => {
                let a = vars[af.pivot];
                for &(j, rel) in &af.binary_relations {
                    decompose_binary(&mut uf, zero_node, a, vars[j], rel);
                }
                (&af.unary_factors, &af.constant)
            }
        };
        constant *= c;
        for (p, (u0, u1)) in factors.iter().enumerate() {
            let slot = &mut unary[vars[p]];
            slot.0 *= u0;
            slot.1 *= u1;
        }
    }

    let zero = |n: usize| SolveResult::new(Weight::zero(), Assignment::zeros(n), Method::ParityComponents);
    if uf.contradiction || constant.is_zero() {
        return Ok(zero(n));
    }

    // Aggregate weight of each component for root bit 0 and 1.
    let mut agg: Vec<Option<(Weight, Weight)>> = vec![None; n + 1];
    let mut rel = vec![(0usize, false); n + 1];
    for v in 0..=n {
        rel[v] = uf.find(v);
    }
    for v in 0..n {
        let (r, p) = rel[v];
        let e = agg[r].get_or_insert_with(|| (Weight::one(), Weight::one()));
        let (u0, u1) = &unary[v];
        if p {
            e.0 *= u1;
            e.1 *= u0;
        } else {
            e.0 *= u0;
            e.1 *= u1;
        }
    }

    let (zero_root, zero_parity) = rel[zero_node];
    let mut root_bit = vec![false; n + 1];
    let mut optimum = constant;
    for r in 0..=n {
        let Some((w0, w1)) = &agg[r] else { continue };
        // x_zero = root ⊕ parity = 0 fixes the root of the pinned component.
        // Elsewhere the root is the smallest variable, so ties keep it at 0.
        let b = if r == zero_root { zero_parity } else { w1 > w0 };
        root_bit[r] = b;
        optimum *= if b { w1 } else { w0 };
    }
    if optimum.is_zero() {
        return Ok(zero(n));
    }
    let argmax = Assignment((0..n).map(|v| root_bit[rel[v].0] ^ rel[v].1).collect());
    let check = inst.measure(&argmax)?;
    if check != optimum {
        return Err(Error::Certificate(format!(
            "component optimum {} disagrees with measure {} at {argmax}",
            rational::format_weight(&optimum),
            rational::format_weight(&check)
        )));
    }
    Ok(SolveResult::new(optimum, argmax, Method::ParityComponents))
}

/// Pins, a parity link, nothing, or a contradiction, from a binary affine
/// relation on `(a, b)`.
fn decompose_binary(uf: &mut ParityUnionFind, zero_node: usize, a: usize, b: usize, rel: BinaryRelation) {
    let members: Vec<(bool, bool)> = [(false, false), (false, true), (true, false), (true, true)]
        .into_iter()
        .filter(|&(x, y)| rel.contains(x, y))
        .collect();
    match members.as_slice() {
        [] => uf.contradiction = true,
        [(x, y)] => {
            uf.union(a, zero_node, *x);
            uf.union(b, zero_node, *y);
        }
        [(x0, y0), (x1, y1)] => {
            if x0 == x1 {
                uf.union(a, zero_node, *x0);
            } else if y0 == y1 {
                uf.union(b, zero_node, *y0);
            } else {
                uf.union(a, b, x0 != y0);
            }
        }
        [_, _, _, _] => {}
        // Three-element relations are not affine and never appear in a
        // verified certificate.
        _ => uf.contradiction = true,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Exact,
    HillClimb { seed: u64, restarts: usize },
}

/// A `2^ε`-approximate assignment. `Exact` always meets the bound;
/// `HillClimb` is best effort.
pub fn approx_scheme(inst: &CspInstance, eps: &Weight, strategy: Strategy, cap: usize) -> Result<Assignment> {
    if *eps <= Weight::zero() || *eps >= Weight::one() {
        return Err(Error::Domain(format!(
            "epsilon must lie in (0, 1), got {}",
            rational::format_weight(eps)
        )));
    }
    match strategy {
        Strategy::Exact => Ok(BruteForce::with_cap(cap).solve(inst)?.argmax),
        Strategy::HillClimb { seed, restarts } => Ok(hill_climb(inst, seed, restarts)),
    }
}

/// Search key: fewer zero factors first, then a larger product of the
/// nonzero ones.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Key {
    zeros: usize,
    product: Weight,
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        other.zeros.cmp(&self.zeros).then_with(|| self.product.cmp(&other.product))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn key(inst: &CspInstance, bits: &[bool]) -> Key {
    let mut zeros = 0;
    let mut product = Weight::one();
    for a in inst.applications() {
        let idx = a.vars.iter().fold(0usize, |acc, &x| (acc << 1) | bits[x] as usize);
        let w = inst.constraints()[a.constraint].at(idx);
        if w.is_zero() {
            zeros += 1;
        } else {
            product *= w;
        }
    }
    Key { zeros, product }
}

fn hill_climb(inst: &CspInstance, seed: u64, restarts: usize) -> Assignment {
    let n = inst.num_vars();
    let starts: Vec<Vec<bool>> = if n < 63 && (restarts as u128) >= 1u128 << n {
        (0..1u64 << n).map(|i| Assignment::from_index(n, i).0).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..restarts.max(1)).map(|_| (0..n).map(|_| rng.gen()).collect()).collect()
    };
    let mut best: Option<(Key, Vec<bool>)> = None;
    for mut x in starts {
        let mut k = key(inst, &x);
        loop {
            let mut step: Option<(Key, usize)> = None;
            for v in 0..n {
                x[v] = !x[v];
                let kv = key(inst, &x);
                x[v] = !x[v];
                if kv > k && step.as_ref().is_none_or(|(s, _)| kv > *s) {
                    step = Some((kv, v));
                }
            }
            match step {
                Some((kv, v)) => {
                    x[v] = !x[v];
                    k = kv;
                }
                None => break,
            }
        }
        let replace = match &best {
            None => true,
            Some((bk, bx)) => k > *bk || (k == *bk && x < *bx),
        };
        if replace {
            best = Some((k, x));
        }
    }
    Assignment(best.map(|b| b.1).unwrap_or_default())
}

/// `1/α ≤ val/opt ≤ α`, with the rule that a zero optimum demands a zero
/// value. Evaluated exactly; `α` below 1 or NaN never passes.
pub fn check_ratio(opt: &Weight, val: &Weight, alpha: f64) -> bool {
    if opt.is_zero() || val.is_zero() {
        return opt.is_zero() && val.is_zero() && alpha >= 1.0;
    }
    if alpha.is_nan() || alpha < 1.0 {
        return false;
    }
    if alpha.is_infinite() {
        return true;
    }
    let a = rational::from_f64(alpha).expect("finite");
    let r = val / opt;
    r <= a && &r * &a >= Weight::one()
}
