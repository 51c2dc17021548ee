//! Reductions between problems: graph encodings, the complement transform,
//! IM_opt instances to FLOW, rewriting by construction scripts, and the
//! approximation-scheme wrapper.

mod apt;
mod encode;
mod flow;
mod rewrite;

pub use apt::{apt_wrap, AptCallLog, AptScheme, ExactCsp, ExactGraph, Problem, Reduced, Reduction, Scheme};
pub use apt::{BisToImplies, ComplementAll, ImOptToFlow, IsToCsp};
pub use encode::{bis_assignment, bis_to_implies, complement_all, complement_assignment, complement_name, is_to_csp};
pub use flow::{imopt_to_flow, solve_via_flow, FlowReduction};
pub use rewrite::{rewrite_by_construction, Rewrite};
