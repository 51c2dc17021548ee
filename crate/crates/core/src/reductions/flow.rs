//! IM_opt instances to MAX-PROD-FLOW.
//!
//! A pair factor `(1, 1, λ, 1)` on `(x_r, x_s)` equals `λ · (1/λ)^[x_s ≥ x_r]`,
//! so it becomes the edge `s → r` with rate `1/λ`; a positive unary factor
//! `(u₀, u₁)` becomes influx `u₁/u₀` times the constant `u₀`. Zero unary
//! entries and `λ = 0` pairs are first propagated as pins. Remaining `λ = 0`
//! pairs become edges whose rate outweighs every other factor combined, and
//! the FLOW optimum is always re-evaluated on the source instance.

use num_traits::{One, Zero};

use crate::classes::{Certificate, ImOptCertificate};
use crate::constraint::Assignment;
use crate::error::{Error, Result};
use crate::graph::{graph_brute_force, GraphInstance};
use crate::instance::CspInstance;
use crate::rational::{self, Weight};
use crate::solve::{BruteForce, Method, SolveResult};

#[derive(Clone, Debug, PartialEq)]
pub struct FlowReduction {
    pub num_vars: usize,
    /// `None` when the pins contradict each other; the optimum is then 0.
    pub graph: Option<GraphInstance>,
    /// Vertex `i` of the graph is variable `free_vars[i]`.
    pub free_vars: Vec<usize>,
    pub forced: Vec<Option<bool>>,
    /// Source measure = `constant` · FLOW measure on every pin-consistent
    /// assignment, when there are no surrogate edges.
    pub constant: Weight,
    pub surrogate_rate: Option<Weight>,
    pub surrogate_edges: usize,
}

impl FlowReduction {
    /// Source assignment for a FLOW assignment: free variables copied,
    /// forced variables at their pinned values.
    pub fn to_csp(&self, flow: &Assignment) -> Assignment {
        let mut out: Vec<bool> = self.forced.iter().map(|f| f.unwrap_or(false)).collect();
        for (i, &v) in self.free_vars.iter().enumerate() {
            out[v] = flow.0[i];
        }
        Assignment(out)
    }

    pub fn to_flow(&self, sigma: &Assignment) -> Assignment {
        Assignment(self.free_vars.iter().map(|&v| sigma.0[v]).collect())
    }

    /// True when `sigma` agrees with every forced variable.
    pub fn consistent(&self, sigma: &Assignment) -> bool {
        self.forced
            .iter()
            .zip(&sigma.0)
            .all(|(f, &b)| f.is_none_or(|c| c == b))
    }
}

fn force(forced: &mut [Option<bool>], v: usize, c: bool) -> Result<bool, ()> {
    match forced[v] {
        Some(d) if d == c => Ok(false),
        Some(_) => Err(()),
        None => {
            forced[v] = Some(c);
            Ok(true)
        }
    }
}

/// `certs[i]` certifies constraint `i` of the instance.
pub fn imopt_to_flow(inst: &CspInstance, certs: &[Option<ImOptCertificate>], tol: f64) -> Result<FlowReduction> {
    let n = inst.num_vars();
    for &ci in &inst.applied_constraints() {
        let t = &inst.constraints()[ci];
        let name = t.name().unwrap_or("?");
        let cert = certs
            .get(ci)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::Certificate(format!("constraint `{name}` has no IM_opt certificate")))?;
        if !cert.reproduces(t, tol) {
            return Err(Error::Certificate(format!("certificate does not reproduce constraint `{name}`")));
        }
        if cert.lambda_pairs.iter().any(|(_, _, l)| *l > Weight::one()) {
            return Err(Error::Certificate(format!("constraint `{name}` has a pair factor above 1")));
        }
    }

    let mut unary = vec![(Weight::one(), Weight::one()); n];
    let mut pairs: Vec<(usize, usize, Weight)> = Vec::new();
    let mut constant = Weight::one();
    for app in inst.applications() {
        let cert = certs[app.constraint].as_ref().expect("checked above");
        constant *= &cert.constant;
        for (p, (u0, u1)) in cert.unary_factors.iter().enumerate() {
            let u = &mut unary[app.vars[p]];
            u.0 *= u0;
            u.1 *= u1;
        }
        for (r, s, l) in &cert.lambda_pairs {
            let (r, s) = (app.vars[*r], app.vars[*s]);
            if r != s && !l.is_one() {
                pairs.push((r, s, l.clone()));
            }
        }
    }

    let contradiction = |forced| FlowReduction {
        num_vars: n,
        graph: None,
        free_vars: vec![],
        forced,
        constant: Weight::zero(),
        surrogate_rate: None,
        surrogate_edges: 0,
    };
    if constant.is_zero() {
        return Ok(contradiction(vec![None; n]));
    }

    let mut forced: Vec<Option<bool>> = vec![None; n];
    for (v, (u0, u1)) in unary.iter().enumerate() {
        let r = match (u0.is_zero(), u1.is_zero()) {
            (true, true) => Err(()),
            (true, false) => force(&mut forced, v, true),
            (false, true) => force(&mut forced, v, false),
            _ => Ok(false),
        };
        if r.is_err() {
            return Ok(contradiction(forced));
        }
    }
    loop {
        let mut changed = false;
        for (r, s, l) in &pairs {
            if !l.is_zero() {
                continue;
            }
            let step = match (forced[*r], forced[*s]) {
                (Some(true), _) => force(&mut forced, *s, true),
                (_, Some(false)) => force(&mut forced, *r, false),
                _ => Ok(false),
            };
            match step {
                Err(()) => return Ok(contradiction(forced)),
                Ok(c) => changed |= c,
            }
        }
        if !changed {
            break;
        }
    }

    // Fold factors touching forced variables into unaries and the constant.
    let free_vars: Vec<usize> = (0..n).filter(|&v| forced[v].is_none()).collect();
    let mut vertex = vec![usize::MAX; n];
    for (i, &v) in free_vars.iter().enumerate() {
        vertex[v] = i;
    }
    for (v, f) in forced.iter().enumerate() {
        if let Some(c) = f {
            constant *= if *c { &unary[v].1 } else { &unary[v].0 };
        }
    }
    let mut edges: Vec<(usize, usize, Option<Weight>)> = Vec::new();
    for (r, s, l) in pairs {
        match (forced[r], forced[s]) {
            (None, None) => {
                if l.is_zero() {
                    edges.push((vertex[s], vertex[r], None));
                } else {
                    edges.push((vertex[s], vertex[r], Some(l.recip())));
                    constant *= &l;
                }
            }
            (Some(true), None) => unary[s].0 *= &l,
            (None, Some(false)) => unary[r].1 *= &l,
            (Some(true), Some(false)) => constant *= &l,
            _ => {}
        }
    }
    if constant.is_zero() {
        return Ok(contradiction(forced));
    }

    let mut weights = Vec::with_capacity(free_vars.len());
    for &v in &free_vars {
        let (u0, u1) = &unary[v];
        constant *= u0;
        weights.push(u1 / u0);
    }
    let surrogate_edges = edges.iter().filter(|e| e.2.is_none()).count();
    let surrogate_rate = (surrogate_edges > 0).then(|| {
        let mut bound = Weight::from_integer(2.into());
        for (_, _, r) in &edges {
            if let Some(r) = r {
                bound *= r;
            }
        }
        for w in &weights {
            bound *= if *w >= Weight::one() { w.clone() } else { w.recip() };
        }
        bound + Weight::one()
    });
    let edges = edges
        .into_iter()
        .map(|(x, y, r)| (x, y, r.unwrap_or_else(|| surrogate_rate.clone().expect("surrogate edges present"))))
        .collect();
    Ok(FlowReduction {
        num_vars: n,
        graph: Some(GraphInstance::flow(weights, edges)?),
        free_vars,
        forced,
        constant,
        surrogate_rate,
        surrogate_edges,
    })
}

/// Solves the FLOW image exhaustively and re-evaluates its optimum on the
/// source instance.
pub fn solve_via_flow(inst: &CspInstance, red: &FlowReduction, bf: &BruteForce) -> Result<SolveResult> {
    let Some(g) = &red.graph else {
        return Ok(SolveResult::new(Weight::zero(), Assignment::zeros(red.num_vars), Method::External));
    };
    let flow = graph_brute_force(g, bf)?;
    let sigma = red.to_csp(&flow.argmax);
    let value = inst.measure(&sigma)?;
    Ok(SolveResult::new(value, sigma, Method::External))
}

impl FlowReduction {
    pub fn describe(&self) -> String {
        match &self.graph {
            None => "pins contradict: optimum 0\n".into(),
            Some(_) => format!(
                "constant {}\nsurrogate_edges {}\n",
                rational::format_weight(&self.constant),
                self.surrogate_edges
            ),
        }
    }
}
