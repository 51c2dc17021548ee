//! Seeded property suites: class inclusions, solver equivalences and
//! reduction identities, each checked against exhaustive enumeration.

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::classes::{classify_constraint, is_imopt, Certificate, FitConfig};
use crate::constraint::{builtin, Assignment, ConstraintTable};
use crate::generate::{ed_pool, random_graph, random_imopt_instance, random_instance, rng};
use crate::graph::{graph_brute_force, GraphKind};
use crate::instance::CspInstance;
use crate::library::Library;
use crate::rational::{int, ratio, Weight};
use crate::reductions::{
    apt_wrap, bis_assignment, bis_to_implies, complement_all, complement_assignment, imopt_to_flow, is_to_csp,
    rewrite_by_construction, solve_via_flow, BisToImplies, ExactCsp, Scheme,
};
use crate::script::{ConstructionScript, Step};
use crate::solve::{brute_force, certify_tractable, check_ratio, solve_tractable, BruteForce};

pub const SUITES: [&str; 4] = ["classes", "solver", "reductions", "conventions"];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub passed: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.into(),
            ..Default::default()
        }
    }

    fn record(&mut self, label: impl FnOnce() -> String, ok: bool) {
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(label());
        }
    }

    pub fn failed(&self) -> usize {
        self.failures.len()
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} passed, {} failed", self.name, self.passed, self.failed())
    }
}

/// Runs one suite by name, or every suite for `"all"`. `cases` scales the
/// number of random cases per property.
pub fn run(suite: &str, seed: u64, cases: usize) -> Option<Vec<SuiteReport>> {
    let one = |name: &str| -> Option<SuiteReport> {
        Some(match name {
            "classes" => classes(seed, cases),
            "solver" => solver(seed, cases),
            "reductions" => reductions(seed, cases),
            "conventions" => conventions(seed, cases),
            _ => return None,
        })
    };
    if suite == "all" {
        SUITES.iter().map(|s| one(s)).collect()
    } else {
        one(suite).map(|r| vec![r])
    }
}

const SMALL_WEIGHTS: [(i64, i64); 6] = [(0, 1), (1, 2), (1, 1), (2, 1), (3, 1), (2, 3)];

fn random_table(r: &mut ChaCha8Rng, arity: usize) -> ConstraintTable {
    let ws = (0..1usize << arity)
        .map(|_| {
            let (p, q) = SMALL_WEIGHTS[r.gen_range(0..SMALL_WEIGHTS.len())];
            ratio(p, q)
        })
        .collect();
    ConstraintTable::new(arity, ws).expect("valid table")
}

fn all_assignments(n: usize) -> impl Iterator<Item = Assignment> {
    (0..1u64 << n).map(move |i| Assignment::from_index(n, i))
}

fn classes(seed: u64, cases: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("classes");
    let mut r = rng(seed);
    let cfg = FitConfig::default();
    for _ in 0..cases * 20 {
        let k = r.gen_range(1..=3);
        let f = random_table(&mut r, k);
        let c = classify_constraint(&f, &cfg);
        let m = c.memberships;
        let w = || format!("{:?}", f.weights().iter().map(|w| w.to_string()).collect::<Vec<_>>());
        rep.record(|| format!("DG not within ED and IM_opt: {}", w()), !m.degenerate || (m.ed && m.imopt));
        rep.record(|| format!("AF not within ED: {}", w()), !m.af || m.ed);
        rep.record(|| format!("ED without affine support: {}", w()), !m.ed || m.affine_support);
        rep.record(|| format!("IM_opt without imp support: {}", w()), !m.imopt || m.imp_support);
        rep.record(|| format!("nonzero ED but not DG: {}", w()), !(m.ed && m.nonzero) || m.degenerate);
        let rebuilds = c.degenerate.as_ref().is_none_or(|x| x.is_exact_for(&f))
            && c.ed.as_ref().is_none_or(|x| x.is_exact_for(&f))
            && c.af.as_ref().is_none_or(|x| x.is_exact_for(&f))
            && c.imopt.as_ref().is_none_or(|x| x.reproduces(&f, cfg.tolerance));
        rep.record(|| format!("certificate does not rebuild: {}", w()), rebuilds);
    }
    for _ in 0..cases * 20 {
        let q: [Weight; 4] = std::array::from_fn(|_| ratio(r.gen_range(1..=20), r.gen_range(1..=20)));
        let (lhs, rhs) = (&q[0] * &q[3], &q[1] * &q[2]);
        let f = ConstraintTable::from_weights(q.to_vec()).expect("positive");
        let got = is_imopt(&f).is_some();
        rep.record(|| format!("binary IM_opt criterion fails on {q:?}"), got == (lhs >= rhs));
    }
    rep
}

fn solver(seed: u64, cases: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("solver");
    let mut r = rng(seed ^ 0x5eed);
    let pool = ed_pool(12, seed).expect("pool");
    for i in 0..cases * 4 {
        let n = r.gen_range(1..=10);
        let inst = random_instance(n, &pool, r.gen_range(0..=14), r.gen()).expect("instance");
        let slow = brute_force(&inst).expect("within cap");
        let fast = solve_tractable(&inst, &certify_tractable(&inst));
        let ok = fast.as_ref().is_ok_and(|f| {
            f.optimum == slow.optimum && inst.measure(&f.argmax).is_ok_and(|m| m == f.optimum)
        });
        rep.record(|| format!("tractable vs brute force, instance {i}"), ok);
        rep.record(
            || format!("log2 flag, instance {i}"),
            slow.log2.is_none() == slow.optimum.is_zero(),
        );
        let zero_iff_all_zero =
            slow.optimum.is_zero() == all_assignments(n).all(|s| inst.measure(&s).is_ok_and(|m| m.is_zero()));
        rep.record(|| format!("zero optimum semantics, instance {i}"), zero_iff_all_zero);

        // Scale one application's constraint.
        if let Some(first) = inst.applications().first().cloned() {
            let lambda = ratio(r.gen_range(1..=5), r.gen_range(1..=5));
            let mut scaled = CspInstance::new(n);
            let table = inst.constraints()[first.constraint].scale(&lambda).expect("positive");
            scaled.apply_table(table.named("SCALED"), first.vars.clone()).expect("valid");
            for a in &inst.applications()[1..] {
                scaled.apply_table(inst.constraints()[a.constraint].clone(), a.vars.clone()).expect("valid");
            }
            let s = brute_force(&scaled).expect("within cap");
            rep.record(|| format!("scale multiplies the optimum, instance {i}"), s.optimum == &slow.optimum * &lambda);
            let same_argmax = all_assignments(n).all(|a| {
                let x = inst.measure(&a).expect("length") == slow.optimum;
                let y = scaled.measure(&a).expect("length") == s.optimum;
                x == y
            });
            rep.record(|| format!("scale keeps the maximizers, instance {i}"), same_argmax);
        }

        // Order independence.
        let mut shuffled = CspInstance::new(n);
        let mut apps = inst.applications().to_vec();
        apps.reverse();
        for a in apps {
            shuffled.apply_table(inst.constraints()[a.constraint].clone(), a.vars).expect("valid");
        }
        let same = all_assignments(n).all(|a| inst.measure(&a) == shuffled.measure(&a));
        rep.record(|| format!("measure order independence, instance {i}"), same);
    }
    rep
}

fn reductions(seed: u64, cases: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("reductions");
    let mut r = rng(seed ^ 0x4ed);
    let bf = BruteForce::default();
    for i in 0..cases * 2 {
        let n = r.gen_range(0..=9);
        let g = random_graph(GraphKind::Is, n, r.gen_range(0.1..0.7), r.gen()).expect("graph");
        let csp = is_to_csp(&g).expect("IS");
        let comp = complement_all(&csp).expect("complement");
        let pointwise = all_assignments(n).all(|s| {
            let m = g.measure(&s).expect("length");
            csp.measure(&s).expect("length") == m && comp.measure(&complement_assignment(&s)).expect("length") == m
        });
        rep.record(|| format!("IS encodings preserve measures, graph {i}"), pointwise);
        let agree = graph_brute_force(&g, &bf).expect("cap").optimum == brute_force(&csp).expect("cap").optimum;
        rep.record(|| format!("IS optimum equals CSP optimum, graph {i}"), agree);

        let g = random_graph(GraphKind::Bis, n, r.gen_range(0.1..0.7), r.gen()).expect("graph");
        let csp = bis_to_implies(&g).expect("BIS");
        let pointwise = all_assignments(n)
            .all(|s| g.measure(&s).expect("length") == csp.measure(&bis_assignment(&g, &s)).expect("length"));
        rep.record(|| format!("BIS encoding preserves measures, graph {i}"), pointwise);
        let eps = ratio(1, 8);
        let mut scheme = apt_wrap(BisToImplies, ExactCsp::default());
        let exact = scheme.solve(&g, &eps).is_ok_and(|s| {
            g.measure(&s).expect("length") == graph_brute_force(&g, &bf).expect("cap").optimum
        });
        rep.record(|| format!("wrapped exact scheme is exact, graph {i}"), exact);
    }
    for i in 0..cases * 2 {
        let n = r.gen_range(1..=8);
        let zeros = i % 2 == 1;
        let inst = random_imopt_instance(n, r.gen_range(1..=8), zeros, r.gen()).expect("instance");
        let certs: Vec<_> = inst.constraints().iter().map(is_imopt).collect();
        let ok = imopt_to_flow(&inst, &certs, 1e-9).is_ok_and(|red| {
            let via = solve_via_flow(&inst, &red, &bf).expect("cap");
            let exact = via.optimum == brute_force(&inst).expect("cap").optimum;
            let identity = zeros
                || all_assignments(n).all(|s| {
                    let g = red.graph.as_ref().expect("no pins without zeros");
                    inst.measure(&s).expect("length") == g.measure(&red.to_flow(&s)).expect("length") * &red.constant
                });
            exact && identity
        });
        rep.record(|| format!("FLOW reduction, instance {i}"), ok);
    }
    let scripts = [
        (builtin::xor(), ConstructionScript::new("OR").then(Step::Multiply("NAND".into()))),
        (builtin::delta1(), ConstructionScript::new("OR").then(Step::Link(0, 1))),
        (
            builtin::eq().scale(&int(3)).expect("positive").named("EQ3"),
            ConstructionScript::new("EQ").then(Step::Scale(int(3))),
        ),
    ];
    for (f, script) in &scripts {
        let pool = vec![f.clone(), builtin::implies(), ConstraintTable::unary(int(1), int(2)).named("U2")];
        for i in 0..cases {
            let inst = random_instance(r.gen_range(1..=6), &pool, r.gen_range(1..=6), r.gen()).expect("instance");
            let name = f.name().expect("named");
            if inst.constraint_index(name).is_none() {
                continue;
            }
            let ok = rewrite_by_construction(&inst, name, script, &Library::new()).is_ok_and(|rw| {
                let orig = brute_force(&inst).expect("cap");
                let new = brute_force(&rw.instance).expect("cap");
                rw.lift(&new.optimum) == orig.optimum
                    && inst.measure(&rw.back_map(&new.argmax)).expect("length") == orig.optimum
            });
            rep.record(|| format!("rewrite of {name}, instance {i}"), ok);
        }
    }
    rep
}

fn conventions(seed: u64, cases: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("conventions");
    rep.record(
        || "empty instance measures 1".into(),
        CspInstance::new(2).measure(&Assignment::zeros(2)).is_ok_and(|m| m.is_one()),
    );
    rep.record(
        || "empty graph optimum is 1".into(),
        random_graph(GraphKind::Is, 0, 0.5, seed)
            .and_then(|g| graph_brute_force(&g, &BruteForce::default()))
            .is_ok_and(|r| r.optimum.is_one()),
    );
    rep.record(|| "zero-ratio rule".into(), check_ratio(&int(0), &int(0), 2.0) && !check_ratio(&int(0), &int(1), 2.0));
    let pool = vec![builtin::xor(), builtin::or(), ConstraintTable::unary(int(1), int(2)).named("U")];
    let mut r = rng(seed ^ 0xc0);
    for i in 0..cases {
        let inst = random_instance(10, &pool, 8, r.gen()).expect("instance");
        let one = BruteForce { cap: 24, threads: Some(1) }.solve(&inst);
        let eight = BruteForce { cap: 24, threads: Some(8) }.solve(&inst);
        rep.record(|| format!("8-way determinism, instance {i}"), one.is_ok() && one == eight);
        let twice = complement_all(&inst).and_then(|c| complement_all(&c));
        rep.record(|| format!("complement involution, instance {i}"), twice.is_ok_and(|t| t == inst));
    }
    rep
}
