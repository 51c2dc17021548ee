//! Weighted graph problems with product measures: independent set (IS),
//! bipartite independent set (BIS) and flow design (FLOW).
//!
//! Text format (vertices are 1-based; unlisted weights default to 1):
//!
//! ```text
//! graph FLOW 2 1
//! w 1 3
//! edge 1 2 2
//! ```

use std::fmt::{self, Write as _};

use num_traits::{One, Zero};

use crate::constraint::Assignment;
use crate::error::{Error, Result};
use crate::format::tokenize;
use crate::rational::{self, Weight};
use crate::solve::{BruteForce, Method, SolveResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Is,
    Bis,
    Flow,
}

impl GraphKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Is => "IS",
            GraphKind::Bis => "BIS",
            GraphKind::Flow => "FLOW",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "IS" => Some(GraphKind::Is),
            "BIS" => Some(GraphKind::Bis),
            "FLOW" => Some(GraphKind::Flow),
            _ => None,
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInstance {
    pub kind: GraphKind,
    /// Vertex weights (influx rates for FLOW).
    pub weights: Vec<Weight>,
    /// Undirected for IS/BIS; `(x, y)` is the directed edge `x → y` for FLOW.
    pub edges: Vec<(usize, usize)>,
    /// Edge rates, FLOW only (empty otherwise).
    pub rates: Vec<Weight>,
    /// Block of each vertex, BIS only (empty otherwise).
    pub blocks: Vec<bool>,
}

impl GraphInstance {
    pub fn independent_set(weights: Vec<Weight>, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::checked(GraphKind::Is, weights, edges, vec![], vec![])
    }

    pub fn bipartite(weights: Vec<Weight>, blocks: Vec<bool>, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::checked(GraphKind::Bis, weights, edges, vec![], blocks)
    }

    pub fn flow(weights: Vec<Weight>, edges: Vec<(usize, usize, Weight)>) -> Result<Self> {
        let (edges, rates) = edges.into_iter().map(|(x, y, r)| ((x, y), r)).unzip();
        Self::checked(GraphKind::Flow, weights, edges, rates, vec![])
    }

    fn checked(
        kind: GraphKind,
        weights: Vec<Weight>,
        edges: Vec<(usize, usize)>,
        rates: Vec<Weight>,
        blocks: Vec<bool>,
    ) -> Result<Self> {
        let g = GraphInstance {
            kind,
            weights,
            edges,
            rates,
            blocks,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn num_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vertices();
        if let Some(w) = self.weights.iter().find(|w| **w < Weight::zero()) {
            return Err(Error::Domain(format!("negative vertex weight {}", rational::format_weight(w))));
        }
        for &(x, y) in &self.edges {
            if x >= n || y >= n {
                return Err(Error::Index {
                    index: x.max(y),
                    arity: n,
                });
            }
        }
        match self.kind {
            GraphKind::Flow => {
                if self.rates.len() != self.edges.len() {
                    return Err(Error::arg("every FLOW edge needs a rate"));
                }
                if let Some(r) = self.rates.iter().find(|r| **r < Weight::one()) {
                    return Err(Error::Domain(format!("flow rate {} is below 1", rational::format_weight(r))));
                }
            }
            _ if !self.rates.is_empty() => return Err(Error::arg("edge rates are only meaningful for FLOW")),
            _ => {}
        }
        match self.kind {
            GraphKind::Bis => {
                if self.blocks.len() != n {
                    return Err(Error::arg("every BIS vertex needs a block"));
                }
                if let Some(&(x, y)) = self.edges.iter().find(|&&(x, y)| self.blocks[x] == self.blocks[y]) {
                    return Err(Error::Domain(format!(
                        "edge {} {} lies inside one block",
                        x + 1,
                        y + 1
                    )));
                }
            }
            _ if !self.blocks.is_empty() => return Err(Error::arg("blocks are only meaningful for BIS")),
            _ => {}
        }
        Ok(())
    }

    /// IS/BIS: `∏_{x ∈ A} w_x` when `A = {x : σ(x) = 1}` is independent,
    /// else 0. FLOW: `∏_{σ(x) ≥ σ(y)} ρ_(x,y) · ∏_{σ(x) = 1} w_x`.
    pub fn measure(&self, sigma: &Assignment) -> Result<Weight> {
        let n = self.num_vertices();
        if sigma.len() != n {
            return Err(Error::Arity {
                expected: n,
                got: sigma.len(),
            });
        }
        Ok(self.measure_with(|v| sigma.0[v]))
    }

    fn measure_with(&self, on: impl Fn(usize) -> bool) -> Weight {
        let mut m = Weight::one();
        match self.kind {
            GraphKind::Is | GraphKind::Bis => {
                if self.edges.iter().any(|&(x, y)| on(x) && on(y)) {
                    return Weight::zero();
                }
            }
            GraphKind::Flow => {
                for (&(x, y), r) in self.edges.iter().zip(&self.rates) {
                    if on(x) >= on(y) {
                        m *= r;
                    }
                }
            }
        }
        for (v, w) in self.weights.iter().enumerate() {
            if on(v) {
                if w.is_zero() {
                    return Weight::zero();
                }
                m *= w;
            }
        }
        m
    }

    pub fn parse(text: &str) -> Result<Self> {
        let lines = tokenize(text);
        let (first, header) = lines.first().ok_or_else(|| Error::parse(1, "empty graph file"))?;
        let bad_header = || Error::parse(*first, "expected `graph <IS|BIS|FLOW> N M`");
        if header.len() != 4 || header[0] != "graph" {
            return Err(bad_header());
        }
        let kind = GraphKind::parse(header[1]).ok_or_else(bad_header)?;
        let n: usize = header[2].parse().map_err(|_| bad_header())?;
        let m: usize = header[3].parse().map_err(|_| bad_header())?;
        let mut weights = vec![Weight::one(); n];
        let mut edges = Vec::new();
        let mut rates = Vec::new();
        let mut blocks: Vec<Option<bool>> = vec![None; if kind == GraphKind::Bis { n } else { 0 }];
        for (line, toks) in &lines[1..] {
            let line = *line;
            let vertex = |t: &str| -> Result<usize> {
                t.parse::<usize>()
                    .ok()
                    .filter(|v| (1..=n).contains(v))
                    .map(|v| v - 1)
                    .ok_or_else(|| Error::parse(line, format!("bad vertex `{t}` (expected 1..{n})")))
            };
            let weight = |t: &str| -> Result<Weight> {
                rational::parse_weight(t)
                    .filter(|w| *w >= Weight::zero())
                    .ok_or_else(|| Error::parse(line, format!("bad weight `{t}`")))
            };
            match (toks[0], toks.len()) {
                ("w", 3) => weights[vertex(toks[1])?] = weight(toks[2])?,
                ("edge", 3) if kind != GraphKind::Flow => edges.push((vertex(toks[1])?, vertex(toks[2])?)),
                ("edge", 4) if kind == GraphKind::Flow => {
                    edges.push((vertex(toks[1])?, vertex(toks[2])?));
                    rates.push(weight(toks[3])?);
                }
                ("edge", _) => {
                    let want = if kind == GraphKind::Flow { "edge u v rate" } else { "edge u v" };
                    return Err(Error::parse(line, format!("expected `{want}`")));
                }
                ("block", 3) if kind == GraphKind::Bis => {
                    let b = match toks[2] {
                        "0" => false,
                        "1" => true,
                        t => return Err(Error::parse(line, format!("bad block `{t}`"))),
                    };
                    blocks[vertex(toks[1])?] = Some(b);
                }
                (other, _) => return Err(Error::parse(line, format!("unexpected `{other}`"))),
            }
        }
        let last = lines.last().map_or(1, |l| l.0);
        if edges.len() != m {
            return Err(Error::parse(last, format!("header declares {m} edges, found {}", edges.len())));
        }
        let blocks = blocks
            .into_iter()
            .enumerate()
            .map(|(v, b)| b.ok_or_else(|| Error::parse(last, format!("vertex {} has no block", v + 1))))
            .collect::<Result<Vec<_>>>()?;
        let g = GraphInstance {
            kind,
            weights,
            edges,
            rates,
            blocks,
        };
        g.validate().map_err(|e| Error::parse(last, e.to_string()))?;
        Ok(g)
    }

    pub fn render(&self) -> String {
        let mut s = format!("graph {} {} {}\n", self.kind, self.num_vertices(), self.edges.len());
        for (v, w) in self.weights.iter().enumerate() {
            if !w.is_one() {
                let _ = writeln!(s, "w {} {}", v + 1, rational::format_weight(w));
            }
        }
        for (v, b) in self.blocks.iter().enumerate() {
            let _ = writeln!(s, "block {} {}", v + 1, *b as u8);
        }
        for (i, (x, y)) in self.edges.iter().enumerate() {
            let _ = write!(s, "edge {} {}", x + 1, y + 1);
            if let Some(r) = self.rates.get(i) {
                let _ = write!(s, " {}", rational::format_weight(r));
            }
            s.push('\n');
        }
        s
    }
}

/// Exhaustive search over vertex subsets (or FLOW assignments).
pub fn graph_brute_force(g: &GraphInstance, bf: &BruteForce) -> Result<SolveResult> {
    let n = g.num_vertices();
    let (opt, idx) = bf.maximize(n, |s| g.measure_with(|v| (s >> (n - 1 - v)) & 1 == 1))?;
    Ok(SolveResult::new(opt, Assignment::from_index(n, idx), Method::BruteForce))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn triangle() -> GraphInstance {
        GraphInstance::independent_set(vec![int(2), int(3), int(5)], vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn flow_edge() -> GraphInstance {
        GraphInstance::flow(vec![int(3), int(1)], vec![(0, 1, int(2))]).unwrap()
    }

    #[test]
    fn measure_examples() {
        let m = |g: &GraphInstance, s: &str| g.measure(&Assignment::parse(s).unwrap()).unwrap();
        assert_eq!(m(&flow_edge(), "10"), int(6));
        assert_eq!(m(&flow_edge(), "11"), int(6));
        assert_eq!(m(&flow_edge(), "01"), int(1));
        assert_eq!(m(&triangle(), "001"), int(5));
        assert_eq!(m(&triangle(), "110"), int(0));
        assert_eq!(m(&triangle(), "000"), int(1));
    }

    #[test]
    fn brute_force_examples() {
        let bf = BruteForce::default();
        assert_eq!(graph_brute_force(&triangle(), &bf).unwrap().optimum, int(5));
        let r = graph_brute_force(&flow_edge(), &bf).unwrap();
        assert_eq!((r.optimum, r.argmax.to_string()), (int(6), "10".into()));
        let empty = GraphInstance::independent_set(vec![], vec![]).unwrap();
        assert_eq!(graph_brute_force(&empty, &bf).unwrap().optimum, int(1));
    }

    #[test]
    fn validation() {
        assert!(GraphInstance::flow(vec![int(1), int(1)], vec![(0, 1, crate::rational::ratio(1, 2))]).is_err());
        assert!(GraphInstance::bipartite(vec![int(1), int(1)], vec![false, false], vec![(0, 1)]).is_err());
        assert!(GraphInstance::independent_set(vec![int(-1)], vec![]).is_err());
    }

    #[test]
    fn text_roundtrip() {
        for g in [
            triangle(),
            flow_edge(),
            GraphInstance::bipartite(vec![int(3), int(5)], vec![false, true], vec![(0, 1)]).unwrap(),
        ] {
            assert_eq!(GraphInstance::parse(&g.render()).unwrap(), g);
        }
    }

    #[test]
    fn parse_errors() {
        let e = |t: &str| GraphInstance::parse(t).unwrap_err();
        assert!(matches!(e("graph IS 2 1\nedge 1 3"), Error::Parse { line: 2, .. }));
        assert!(matches!(e("graph IS 2 2\nedge 1 2"), Error::Parse { .. }));
        assert!(matches!(e("graph FLOW 2 1\nedge 1 2"), Error::Parse { line: 2, .. }));
        assert!(matches!(e("graph BIS 2 0\nblock 1 0"), Error::Parse { .. }));
        assert!(matches!(e("graph XX 2 0"), Error::Parse { line: 1, .. }));
    }
}
