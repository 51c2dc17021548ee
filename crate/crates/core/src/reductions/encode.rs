//! Exact encodings between graph problems and CSP instances, and the
//! instance-level complement transform. Each comes with an explicit
//! assignment bijection under which measures are equal.

use std::collections::HashMap;

use num_traits::One;

use crate::constraint::{builtin, Assignment, ConstraintTable};
use crate::error::{Error, Result};
use crate::graph::{GraphInstance, GraphKind};
use crate::instance::CspInstance;
use crate::rational::Weight;

/// Adds `(a, b)` as a unary constraint, sharing one name per distinct table.
fn unary(inst: &mut CspInstance, seen: &mut HashMap<(Weight, Weight), usize>, a: &Weight, b: &Weight) -> Result<usize> {
    if let Some(&i) = seen.get(&(a.clone(), b.clone())) {
        return Ok(i);
    }
    let name = format!("U{}", seen.len() + 1);
    let i = inst.add_constraint(ConstraintTable::unary(a.clone(), b.clone()).named(name))?;
    seen.insert((a.clone(), b.clone()), i);
    Ok(i)
}

fn expect_kind(g: &GraphInstance, kind: GraphKind) -> Result<()> {
    if g.kind != kind {
        return Err(Error::arg(format!("expected a {kind} graph, got {}", g.kind)));
    }
    g.validate()
}

/// One NAND per edge and `(1, w_x)` on every vertex whose weight is not 1.
/// Vertex `x` is chosen exactly when `x_x = 1`.
pub fn is_to_csp(g: &GraphInstance) -> Result<CspInstance> {
    expect_kind(g, GraphKind::Is)?;
    let mut inst = CspInstance::new(g.num_vertices());
    let mut seen = HashMap::new();
    if !g.edges.is_empty() {
        let nand = inst.add_constraint(builtin::nand())?;
        for &(x, y) in &g.edges {
            inst.apply(nand, vec![x, y])?;
        }
    }
    for (v, w) in g.weights.iter().enumerate() {
        let u = unary(&mut inst, &mut seen, &Weight::one(), w)?;
        inst.apply(u, vec![v])?;
    }
    Ok(inst)
}

/// Name of the complemented constraint: builtins map to their images,
/// other names gain or lose a leading `~`.
pub fn complement_name(name: &str) -> String {
    match name {
        "NAND" => "OR".into(),
        "OR" => "NAND".into(),
        "D0" => "D1".into(),
        "D1" => "D0".into(),
        "EQ" | "XOR" => name.into(),
        _ => match name.strip_prefix('~') {
            Some(rest) => rest.into(),
            None => format!("~{name}"),
        },
    }
}

/// Flips every variable: each constraint `h` becomes `h(¬x)`, so the measure
/// of `¬σ` in the result is the measure of `σ` in `inst`.
pub fn complement_all(inst: &CspInstance) -> Result<CspInstance> {
    let mut out = CspInstance::new(inst.num_vars());
    let mut ids = Vec::with_capacity(inst.constraints().len());
    for t in inst.constraints() {
        let name = complement_name(t.name().unwrap_or("?"));
        ids.push(out.add_constraint(t.complement_all().named(name))?);
    }
    for a in inst.applications() {
        out.apply(ids[a.constraint], a.vars.clone())?;
    }
    Ok(out)
}

pub fn complement_assignment(sigma: &Assignment) -> Assignment {
    Assignment(sigma.0.iter().map(|b| !b).collect())
}

/// Complements the right block (block 1): every edge `(u, v)` with `u` on
/// the left becomes `IMPLIES(x_u, x_v)` where `x_v = 1` means `v` is not
/// chosen. Left vertices get `(1, w_u)`, right vertices `(w_v, 1)`.
pub fn bis_to_implies(g: &GraphInstance) -> Result<CspInstance> {
    expect_kind(g, GraphKind::Bis)?;
    let mut inst = CspInstance::new(g.num_vertices());
    let mut seen = HashMap::new();
    if !g.edges.is_empty() {
        let imp = inst.add_constraint(builtin::implies())?;
        for &(x, y) in &g.edges {
            let (u, v) = if g.blocks[x] { (y, x) } else { (x, y) };
            inst.apply(imp, vec![u, v])?;
        }
    }
    for (v, w) in g.weights.iter().enumerate() {
        let one = Weight::one();
        let u = if g.blocks[v] {
            unary(&mut inst, &mut seen, w, &one)?
        } else {
            unary(&mut inst, &mut seen, &one, w)?
        };
        inst.apply(u, vec![v])?;
    }
    Ok(inst)
}

/// Maps a vertex subset to the CSP assignment of [`bis_to_implies`] and
/// back (the map is an involution).
pub fn bis_assignment(g: &GraphInstance, sigma: &Assignment) -> Assignment {
    Assignment(sigma.0.iter().zip(&g.blocks).map(|(&b, &right)| b ^ right).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::solve::brute_force;

    fn triangle() -> GraphInstance {
        GraphInstance::independent_set(vec![int(2), int(3), int(5)], vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn all(n: usize) -> impl Iterator<Item = Assignment> {
        (0..1u64 << n).map(move |i| Assignment::from_index(n, i))
    }

    #[test]
    fn is_examples() {
        let inst = is_to_csp(&triangle()).unwrap();
        assert_eq!(inst.applications().len(), 6);
        assert_eq!(brute_force(&inst).unwrap().optimum, int(5));
        for s in all(3) {
            assert_eq!(inst.measure(&s).unwrap(), triangle().measure(&s).unwrap());
        }

        let edgeless = GraphInstance::independent_set(vec![int(3), ratio(1, 2), int(2)], vec![]).unwrap();
        assert_eq!(brute_force(&is_to_csp(&edgeless).unwrap()).unwrap().optimum, int(6));

        let single = GraphInstance::independent_set(vec![ratio(1, 2)], vec![]).unwrap();
        assert_eq!(brute_force(&is_to_csp(&single).unwrap()).unwrap().optimum, int(1));

        let bis = GraphInstance::bipartite(vec![int(1)], vec![false], vec![]).unwrap();
        assert!(is_to_csp(&bis).is_err());
    }

    #[test]
    fn complement_examples() {
        let inst = is_to_csp(&triangle()).unwrap();
        let c = complement_all(&inst).unwrap();
        assert!(c.constraint_index("OR").is_some());
        assert_eq!(brute_force(&c).unwrap().optimum, int(5));
        for s in all(3) {
            assert_eq!(c.measure(&complement_assignment(&s)).unwrap(), inst.measure(&s).unwrap());
        }
        assert_eq!(complement_all(&c).unwrap(), inst);
        let empty = CspInstance::new(0);
        assert_eq!(complement_all(&empty).unwrap(), empty);
    }

    #[test]
    fn complement_names_are_involutive() {
        for n in ["NAND", "OR", "D0", "D1", "EQ", "XOR", "IMPLIES", "F", "~G"] {
            assert_eq!(complement_name(&complement_name(n)), n);
        }
        let mut inst = CspInstance::new(2);
        inst.apply_table(builtin::implies(), vec![0, 1]).unwrap();
        let c = complement_all(&inst).unwrap();
        assert_eq!(c.constraints()[0].name(), Some("~IMPLIES"));
        assert_eq!(complement_all(&c).unwrap(), inst);
    }

    #[test]
    fn bis_examples() {
        let g = GraphInstance::bipartite(vec![int(3), int(5)], vec![false, true], vec![(0, 1)]).unwrap();
        let inst = bis_to_implies(&g).unwrap();
        assert_eq!(brute_force(&inst).unwrap().optimum, int(5));
        for s in all(2) {
            assert_eq!(inst.measure(&bis_assignment(&g, &s)).unwrap(), g.measure(&s).unwrap());
        }

        let empty = GraphInstance::bipartite(vec![int(3), ratio(1, 3)], vec![false, true], vec![]).unwrap();
        assert_eq!(brute_force(&bis_to_implies(&empty).unwrap()).unwrap().optimum, int(3));

        let path = GraphInstance::bipartite(vec![int(2), int(10), int(2)], vec![false, true, false], vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(brute_force(&bis_to_implies(&path).unwrap()).unwrap().optimum, int(10));
    }
}
