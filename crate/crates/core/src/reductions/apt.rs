//! Composing a reduction with an approximation scheme for its target into a
//! scheme for its source, logging every oracle call.

use num_traits::{One, Zero};

use super::encode::{bis_assignment, bis_to_implies, complement_all, complement_assignment, is_to_csp};
use super::flow::{imopt_to_flow, FlowReduction};
use crate::classes::{is_imopt_with, FitConfig};
use crate::constraint::Assignment;
use crate::error::{Error, Result};
use crate::graph::{graph_brute_force, GraphInstance};
use crate::instance::CspInstance;
use crate::rational::{self, Weight};
use crate::solve::BruteForce;

/// An optimization problem instance over Boolean assignments.
pub trait Problem {
    fn size(&self) -> usize;
    fn measure(&self, sigma: &Assignment) -> Result<Weight>;
    fn render(&self) -> String;
}

impl Problem for CspInstance {
    fn size(&self) -> usize {
        self.num_vars()
    }

    fn measure(&self, sigma: &Assignment) -> Result<Weight> {
        CspInstance::measure(self, sigma)
    }

    fn render(&self) -> String {
        CspInstance::render(self)
    }
}

impl Problem for GraphInstance {
    fn size(&self) -> usize {
        self.num_vertices()
    }

    fn measure(&self, sigma: &Assignment) -> Result<Weight> {
        GraphInstance::measure(self, sigma)
    }

    fn render(&self) -> String {
        GraphInstance::render(self)
    }
}

/// An approximation scheme: returns a solution for `inst` meant to be within
/// a factor `2^delta` of optimal.
pub trait Scheme<P: Problem> {
    fn solve(&mut self, inst: &P, delta: &Weight) -> Result<Assignment>;
}

/// Exhaustive search, an exact scheme for any tolerance.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactCsp(pub BruteForce);

impl Scheme<CspInstance> for ExactCsp {
    fn solve(&mut self, inst: &CspInstance, _: &Weight) -> Result<Assignment> {
        Ok(self.0.solve(inst)?.argmax)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ExactGraph(pub BruteForce);

impl Scheme<GraphInstance> for ExactGraph {
    fn solve(&mut self, inst: &GraphInstance, _: &Weight) -> Result<Assignment> {
        Ok(graph_brute_force(inst, &self.0)?.argmax)
    }
}

/// The image of a source instance: either a target instance, or a source
/// solution found without any oracle call.
pub enum Reduced<T, S> {
    Instance(T, S),
    Solved(Assignment),
}

pub trait Reduction {
    type Source: Problem;
    type Target: Problem;
    /// Whatever the back map needs besides the target solution.
    type State;

    fn name(&self) -> &'static str;
    fn reduce(&self, source: &Self::Source) -> Result<Reduced<Self::Target, Self::State>>;
    fn back(&self, state: &Self::State, target_solution: &Assignment) -> Result<Assignment>;
}

pub struct IsToCsp;

impl Reduction for IsToCsp {
    type Source = GraphInstance;
    type Target = CspInstance;
    type State = ();

    fn name(&self) -> &'static str {
        "is2csp"
    }

    fn reduce(&self, g: &GraphInstance) -> Result<Reduced<CspInstance, ()>> {
        Ok(Reduced::Instance(is_to_csp(g)?, ()))
    }

    fn back(&self, _: &(), sol: &Assignment) -> Result<Assignment> {
        Ok(sol.clone())
    }
}

pub struct ComplementAll;

impl Reduction for ComplementAll {
    type Source = CspInstance;
    type Target = CspInstance;
    type State = ();

    fn name(&self) -> &'static str {
        "complement"
    }

    fn reduce(&self, inst: &CspInstance) -> Result<Reduced<CspInstance, ()>> {
        Ok(Reduced::Instance(complement_all(inst)?, ()))
    }

    fn back(&self, _: &(), sol: &Assignment) -> Result<Assignment> {
        Ok(complement_assignment(sol))
    }
}

pub struct BisToImplies;

impl Reduction for BisToImplies {
    type Source = GraphInstance;
    type Target = CspInstance;
    type State = GraphInstance;

    fn name(&self) -> &'static str {
        "bis2csp"
    }

    fn reduce(&self, g: &GraphInstance) -> Result<Reduced<CspInstance, GraphInstance>> {
        Ok(Reduced::Instance(bis_to_implies(g)?, g.clone()))
    }

    fn back(&self, g: &GraphInstance, sol: &Assignment) -> Result<Assignment> {
        Ok(bis_assignment(g, sol))
    }
}

/// Certificates are derived per constraint with the given fit settings.
#[derive(Clone, Copy, Debug, Default)]
pub struct ImOptToFlow(pub FitConfig);

impl Reduction for ImOptToFlow {
    type Source = CspInstance;
    type Target = GraphInstance;
    type State = FlowReduction;

    fn name(&self) -> &'static str {
        "csp2flow"
    }

    fn reduce(&self, inst: &CspInstance) -> Result<Reduced<GraphInstance, FlowReduction>> {
        let certs: Vec<_> = inst.constraints().iter().map(|f| is_imopt_with(f, &self.0)).collect();
        let red = imopt_to_flow(inst, &certs, self.0.tolerance)?;
        Ok(match red.graph.clone() {
            Some(g) => Reduced::Instance(g, red),
            None => Reduced::Solved(Assignment::zeros(inst.num_vars())),
        })
    }

    fn back(&self, red: &FlowReduction, sol: &Assignment) -> Result<Assignment> {
        Ok(red.to_csp(sol))
    }
}

/// Oracle calls made by a wrapped scheme: the rendered sub-instance and the
/// tolerance passed with it.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AptCallLog {
    pub calls: Vec<(String, Weight)>,
    pub epsilon: Option<Weight>,
}

impl AptCallLog {
    /// Largest `1/δ` over all calls.
    pub fn bound_report(&self) -> Option<Weight> {
        self.calls.iter().map(|(_, d)| d.recip()).max()
    }
}

pub struct AptScheme<R, S> {
    pub reduction: R,
    pub inner: S,
    pub log: AptCallLog,
}

/// A scheme for the reduction's source problem. A single oracle call gets
/// `δ = ε`.
pub fn apt_wrap<R, S>(reduction: R, inner: S) -> AptScheme<R, S>
where
    R: Reduction,
    S: Scheme<R::Target>,
{
    AptScheme {
        reduction,
        inner,
        log: AptCallLog::default(),
    }
}

impl<R, S> Scheme<R::Source> for AptScheme<R, S>
where
    R: Reduction,
    S: Scheme<R::Target>,
{
    fn solve(&mut self, inst: &R::Source, eps: &Weight) -> Result<Assignment> {
        if *eps <= Weight::zero() || *eps >= Weight::one() {
            return Err(Error::Domain(format!(
                "tolerance must lie in (0, 1), got {}",
                rational::format_weight(eps)
            )));
        }
        self.log.epsilon = Some(eps.clone());
        match self.reduction.reduce(inst)? {
            Reduced::Solved(sigma) => Ok(sigma),
            Reduced::Instance(target, state) => {
                let delta = eps.clone();
                self.log.calls.push((target.render(), delta.clone()));
                let sol = self.inner.solve(&target, &delta)?;
                self.reduction.back(&state, &sol)
            }
        }
    }
}
