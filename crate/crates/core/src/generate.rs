//! Seeded generators for instances, graphs and constraint pools. Equal
//! parameters and seeds always give identical output.

use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constraint::{bit, builtin, ConstraintTable};
use crate::error::{Error, Result};
use crate::graph::{GraphInstance, GraphKind};
use crate::instance::CspInstance;
use crate::rational::{ratio, Weight};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `applications` constraints drawn uniformly from `pool`, each on distinct
/// uniformly chosen variables (with repeats only when `num_vars` is smaller
/// than the arity).
pub fn random_instance(
    num_vars: usize,
    pool: &[ConstraintTable],
    applications: usize,
    seed: u64,
) -> Result<CspInstance> {
    if pool.is_empty() {
        return Err(Error::arg("constraint pool is empty"));
    }
    let mut rng = rng(seed);
    let mut inst = CspInstance::new(num_vars);
    let mut ids = Vec::with_capacity(pool.len());
    for (i, t) in pool.iter().enumerate() {
        let t = if t.name().is_some() || builtin::name_of(t).is_some() {
            t.clone()
        } else {
            t.clone().named(format!("P{}", i + 1))
        };
        ids.push(inst.add_constraint(t)?);
    }
    for _ in 0..applications {
        let c = ids[rng.gen_range(0..ids.len())];
        let k = inst.constraints()[c].arity();
        if num_vars == 0 && k > 0 {
            return Err(Error::arg("cannot apply a constraint to zero variables"));
        }
        let vars = if k <= num_vars {
            sample(&mut rng, num_vars, k).into_vec()
        } else {
            (0..k).map(|_| rng.gen_range(0..num_vars)).collect()
        };
        inst.apply(c, vars)?;
    }
    Ok(inst)
}

const VERTEX_WEIGHTS: [(i64, i64); 6] = [(1, 2), (1, 1), (2, 1), (3, 1), (5, 1), (3, 2)];
const FLOW_RATES: [(i64, i64); 4] = [(1, 1), (2, 1), (3, 1), (3, 2)];

fn pick(rng: &mut ChaCha8Rng, table: &[(i64, i64)]) -> Weight {
    let &(p, q) = table.choose(rng).expect("nonempty table");
    ratio(p, q)
}

/// A random graph on `n` vertices with each admissible pair joined with
/// probability `p`. BIS blocks are random; FLOW edges get a random direction
/// and rate.
pub fn random_graph(kind: GraphKind, n: usize, p: f64, seed: u64) -> Result<GraphInstance> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("edge probability {p} is outside [0, 1]")));
    }
    let mut rng = rng(seed);
    let weights: Vec<Weight> = (0..n).map(|_| pick(&mut rng, &VERTEX_WEIGHTS)).collect();
    let blocks: Vec<bool> = match kind {
        GraphKind::Bis => (0..n).map(|_| rng.gen()).collect(),
        _ => vec![],
    };
    let mut edges = Vec::new();
    let mut rates = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if kind == GraphKind::Bis && blocks[x] == blocks[y] {
                continue;
            }
            if !rng.gen_bool(p) {
                continue;
            }
            if kind == GraphKind::Flow {
                edges.push(if rng.gen() { (x, y) } else { (y, x) });
                rates.push(pick(&mut rng, &FLOW_RATES));
            } else {
                edges.push((x, y));
            }
        }
    }
    match kind {
        GraphKind::Is => GraphInstance::independent_set(weights, edges),
        GraphKind::Bis => GraphInstance::bipartite(weights, blocks, edges),
        GraphKind::Flow => GraphInstance::flow(
            weights,
            edges.into_iter().zip(rates).map(|((x, y), r)| (x, y, r)).collect(),
        ),
    }
}

/// The product form of MAX-CUT: `(1, 2, 2, 1)` on every edge, so the measure
/// of a cut is `2^(number of cut edges)`.
pub fn cut_to_prod(n: usize, edges: &[(usize, usize)]) -> Result<CspInstance> {
    let mut inst = CspInstance::new(n);
    let cut = inst.add_constraint(ConstraintTable::from_ints(&[1, 2, 2, 1])?.named("CUT"))?;
    for &(x, y) in edges {
        inst.apply(cut, vec![x, y])?;
    }
    Ok(inst)
}

/// Random edge list on `n` vertices with edge probability `p`.
pub fn random_edges(n: usize, p: f64, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = rng(seed);
    let mut edges = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                edges.push((x, y));
            }
        }
    }
    edges
}

const POW2: [i64; 5] = [-2, -1, 0, 1, 2];

fn pow2_weight(rng: &mut ChaCha8Rng) -> Weight {
    crate::rational::pow2(*POW2.choose(rng).expect("nonempty"))
}

/// A random ED constraint with power-of-two weights: each position is pinned,
/// starts a parity component, or joins an earlier one with a random parity.
pub fn random_ed_constraint(rng: &mut ChaCha8Rng, arity: usize) -> Result<ConstraintTable> {
    // Per position: None = pinned to the stored bit, Some((root, flip)).
    let mut shape: Vec<(Option<(usize, bool)>, bool)> = Vec::with_capacity(arity);
    for p in 0..arity {
        let roll = rng.gen_range(0..6);
        let entry = if roll == 0 {
            (None, rng.gen())
        } else if roll <= 2 || p == 0 {
            (Some((p, false)), false)
        } else {
            let earlier: Vec<usize> = (0..p).filter(|&q| matches!(shape[q].0, Some((r, _)) if r == q)).collect();
            match earlier.choose(rng) {
                Some(&r) => (Some((r, rng.gen())), false),
                None => (Some((p, false)), false),
            }
        };
        shape.push(entry);
    }
    let factors: Vec<(Weight, Weight)> = (0..arity).map(|_| (pow2_weight(rng), pow2_weight(rng))).collect();
    let constant = pow2_weight(rng);
    ConstraintTable::new(
        arity,
        (0..1usize << arity)
            .map(|idx| {
                let b = |p| bit(idx, arity, p);
                let ok = shape.iter().enumerate().all(|(p, &(link, c))| match link {
                    None => b(p) == c,
                    Some((r, flip)) => b(p) == b(r) ^ flip,
                });
                if !ok {
                    return Weight::zero();
                }
                factors
                    .iter()
                    .enumerate()
                    .fold(constant.clone(), |acc, (p, (u0, u1))| acc * if b(p) { u1 } else { u0 })
            })
            .collect(),
    )
}

/// Builtin parity relations plus `extra` random ED constraints of arity 1 to 3.
pub fn ed_pool(extra: usize, seed: u64) -> Result<Vec<ConstraintTable>> {
    let mut rng = rng(seed);
    let mut pool = vec![builtin::eq(), builtin::xor(), builtin::delta0(), builtin::delta1()];
    for i in 0..extra {
        let k = rng.gen_range(1..=3);
        pool.push(random_ed_constraint(&mut rng, k)?.named(format!("E{}", i + 1)));
    }
    Ok(pool)
}

const LAMBDAS: [(i64, i64); 4] = [(1, 2), (1, 3), (1, 4), (2, 3)];
const UNARY: [(i64, i64); 5] = [(1, 2), (1, 1), (2, 1), (3, 1), (1, 3)];

/// A random IM_opt constraint: unary factors times `(1, 1, λ, 1)` factors on
/// random ordered pairs. With `zeros` set, `λ = 0` pairs and pinned unary
/// factors also occur; otherwise every weight is positive.
pub fn random_imopt_constraint(rng: &mut ChaCha8Rng, arity: usize, zeros: bool) -> Result<ConstraintTable> {
    let factors: Vec<(Weight, Weight)> = (0..arity)
        .map(|_| {
            let (mut u0, mut u1) = (pick(rng, &UNARY), pick(rng, &UNARY));
            if zeros {
                match rng.gen_range(0..10) {
                    0 => u0 = Weight::zero(),
                    1 => u1 = Weight::zero(),
                    _ => {}
                }
            }
            (u0, u1)
        })
        .collect();
    let mut pairs = Vec::new();
    for r in 0..arity {
        for s in 0..arity {
            if r != s && rng.gen_bool(0.4) {
                let l = if zeros && rng.gen_bool(0.3) {
                    Weight::zero()
                } else {
                    pick(rng, &LAMBDAS)
                };
                pairs.push((r, s, l));
            }
        }
    }
    ConstraintTable::new(
        arity,
        (0..1usize << arity)
            .map(|idx| {
                let b = |p| bit(idx, arity, p);
                let mut v = Weight::one();
                for (p, (u0, u1)) in factors.iter().enumerate() {
                    v *= if b(p) { u1 } else { u0 };
                }
                for (r, s, l) in &pairs {
                    if b(*r) && !b(*s) {
                        v *= l;
                    }
                }
                v
            })
            .collect(),
    )
}

/// Random IM_opt instance: each application uses a fresh random IM_opt
/// constraint of arity 1 to 3.
pub fn random_imopt_instance(
    num_vars: usize,
    applications: usize,
    zeros: bool,
    seed: u64,
) -> Result<CspInstance> {
    if num_vars == 0 && applications > 0 {
        return Err(Error::arg("cannot apply a constraint to zero variables"));
    }
    let mut rng = rng(seed);
    let mut inst = CspInstance::new(num_vars);
    for i in 0..applications {
        let k = rng.gen_range(1..=3.min(num_vars.max(1)));
        let t = random_imopt_constraint(&mut rng, k, zeros)?.named(format!("M{}", i + 1));
        let vars = sample(&mut rng, num_vars, k).into_vec();
        inst.apply_table(t, vars)?;
    }
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{is_ed, is_imopt};
    use crate::rational::int;
    use crate::solve::brute_force;

    #[test]
    fn deterministic() {
        let pool = ed_pool(5, 3).unwrap();
        let a = random_instance(6, &pool, 10, 42).unwrap();
        let b = random_instance(6, &pool, 10, 42).unwrap();
        assert_eq!(a.render(), b.render());
        let g1 = random_graph(GraphKind::Flow, 6, 0.5, 7).unwrap();
        let g2 = random_graph(GraphKind::Flow, 6, 0.5, 7).unwrap();
        assert_eq!(g1.render(), g2.render());
    }

    #[test]
    fn empty_pool_and_zero_apps() {
        assert!(random_instance(3, &[], 1, 0).is_err());
        let inst = random_instance(3, &[builtin::eq()], 0, 0).unwrap();
        assert_eq!(brute_force(&inst).unwrap().optimum, int(1));
    }

    #[test]
    fn single_edge_cut() {
        let inst = cut_to_prod(2, &[(0, 1)]).unwrap();
        let r = brute_force(&inst).unwrap();
        assert_eq!(r.optimum, int(2));
        for s in ["01", "10"] {
            let a = crate::Assignment::parse(s).unwrap();
            assert_eq!(inst.measure(&a).unwrap(), r.optimum);
        }
    }

    #[test]
    fn pools_are_in_their_classes() {
        for t in ed_pool(40, 9).unwrap() {
            assert!(is_ed(&t).is_some(), "{t:?}");
        }
        let mut r = rng(5);
        for _ in 0..40 {
            let k = r.gen_range(1..=3);
            let t = random_imopt_constraint(&mut r, k, true).unwrap();
            assert!(is_imopt(&t).is_some(), "{t:?}");
        }
    }
}
