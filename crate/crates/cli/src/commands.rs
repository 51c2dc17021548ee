//! Subcommand implementations. Each returns the text to print.

use std::fs;

use anyhow::{anyhow, Context};
use maxprod::check;
use maxprod::classes::{binary_witness_search, FitConfig, MAX_WITNESS_ARITY};
use maxprod::format::parse_constraint_file;
use maxprod::generate::{cut_to_prod, ed_pool, random_edges, random_graph, random_imopt_instance, random_instance};
use maxprod::graph::{graph_brute_force, GraphInstance, GraphKind};
use maxprod::instance::CspInstance;
use maxprod::rational::{format_weight, parse_weight};
use maxprod::reductions::{
    bis_to_implies, complement_all, imopt_to_flow, is_to_csp, rewrite_by_construction, solve_via_flow,
};
use maxprod::solve::{approx_scheme, certify_tractable, solve_tractable, BruteForce, SolveResult, Strategy};
use maxprod::trichotomy::{classify_set_with, explain, ClassName};
use maxprod::{builtin, Assignment, ConstraintTable, ConstructionScript, Library};

use crate::render::{self, Out};
use crate::{Cli, Command, Failure, GenKind, ReductionKind, RunConfig, SolveMethod};

type Res = Result<String, Failure>;

pub fn run(cli: &Cli) -> Res {
    let cfg = &cli.config;
    if cfg.tolerance.is_nan() || cfg.tolerance <= 0.0 {
        return Err(anyhow!("--tol must be positive").into());
    }
    match &cli.command {
        Command::Classify { file, witnesses } => classify(cfg, file, *witnesses),
        Command::Solve {
            file,
            method,
            eps,
            restarts,
            fallback,
        } => solve(cfg, file, *method, eps, *restarts, *fallback),
        Command::Reduce {
            reduction,
            file,
            script,
            target,
            lib,
            out,
        } => reduce(cfg, *reduction, file, script.as_deref(), target.as_deref(), lib.as_deref(), out.as_deref()),
        Command::Rewrite {
            file,
            script,
            target,
            lib,
            out,
        } => reduce(cfg, ReductionKind::Rewrite, file, Some(script), Some(target), lib.as_deref(), out.as_deref()),
        Command::Gen { kind, n, m, p, zeros } => gen(cfg, *kind, *n, *m, *p, *zeros),
        Command::Eval { file, assignment } => eval(cfg, file, assignment),
        Command::Check { suite, cases } => check(cfg, suite, *cases),
    }
}

fn read(path: &str) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read `{path}`"))
}

fn with_file<T>(path: &str, r: maxprod::Result<T>) -> anyhow::Result<T> {
    r.map_err(|e| anyhow!("{path}: {e}"))
}

fn is_instance(text: &str) -> bool {
    text.lines().any(|l| l.split('#').next().unwrap_or("").split_whitespace().next() == Some("vars"))
}

fn is_graph(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("graph"))
}

fn load_instance(path: &str) -> anyhow::Result<CspInstance> {
    with_file(path, CspInstance::parse(&read(path)?))
}

fn load_graph(path: &str) -> anyhow::Result<GraphInstance> {
    with_file(path, GraphInstance::parse(&read(path)?))
}

fn fit(cfg: &RunConfig) -> FitConfig {
    FitConfig {
        tolerance: cfg.tolerance,
    }
}

fn classify(cfg: &RunConfig, path: &str, witnesses: bool) -> Res {
    let text = read(path)?;
    let set: Vec<ConstraintTable> = if is_instance(&text) {
        let inst = with_file(path, CspInstance::parse(&text))?;
        inst.applied_constraints().iter().map(|&i| inst.constraints()[i].clone()).collect()
    } else {
        with_file(path, parse_constraint_file(&text))?
    };
    if set.is_empty() {
        return Err(anyhow!("{path}: no constraints to classify").into());
    }
    let report = classify_set_with(&set, &fit(cfg))?;
    let mut out = Out::new(cfg.machine);
    for (i, e) in report.per_constraint.iter().enumerate() {
        let c = &e.classes;
        let labels = c.memberships.labels();
        if out.machine {
            let key = |k: &str| format!("constraint.{}.{k}", i + 1);
            out.kv(&key("name"), &e.name);
            out.kv(&key("arity"), e.table.arity());
            out.kv(&key("classes"), if labels.is_empty() { "none".into() } else { labels.join(",") });
            out.kv(&key("dg"), c.degenerate.as_ref().map_or("none".into(), render::degenerate));
            out.kv(&key("ed"), c.ed.as_ref().map_or("none".into(), render::ed));
            out.kv(&key("af"), c.af.as_ref().map_or("none".into(), render::af));
            out.kv(&key("imopt"), c.imopt.as_ref().map_or("none".into(), render::imopt));
        } else {
            out.text(format!("constraint {} (arity {}): {}", e.name, e.table.arity(), c.memberships));
            if let Some(x) = &c.degenerate {
                out.text(format!("  DG certificate: {}", render::degenerate(x)));
            }
            if let Some(x) = &c.ed {
                out.text(format!("  ED certificate: {}", render::ed(x)));
            }
            if let Some(x) = &c.af {
                out.text(format!("  AF certificate: {}", render::af(x)));
            }
            if let Some(x) = &c.imopt {
                out.text(format!("  IM_opt certificate: {}", render::imopt(x)));
            }
        }
    }
    for w in &report.witnesses {
        if out.machine {
            out.kv(&format!("witness.{}", w.class), &w.constraint);
        } else {
            out.text(format!("witness: {} is not in {}", w.constraint, w.class));
        }
    }
    if witnesses {
        for w in report.witnesses.iter().filter(|w| w.class != ClassName::Af) {
            let t = &report.per_constraint[w.position].table;
            if t.arity() > MAX_WITNESS_ARITY {
                out.text(format!("  (arity {} too large for a binary witness search)", t.arity()));
                continue;
            }
            let found = binary_witness_search(t)?;
            let outside = found.iter().filter(|b| match w.class {
                ClassName::Ed => !b.memberships.ed,
                ClassName::Af => !b.memberships.af,
                ClassName::ImOpt => !b.memberships.imopt,
            });
            for (j, b) in outside.take(3).enumerate() {
                let weights: Vec<String> = b.table.weights().iter().map(format_weight).collect();
                let steps: Vec<String> = b.script.steps.iter().map(|s| s.to_string()).collect();
                let line = format!("({}) via [{}]", weights.join(","), steps.join("; "));
                if out.machine {
                    out.kv(&format!("binary_witness.{}.{}", w.class, j + 1), line);
                } else {
                    out.text(format!("  binary witness outside {}: {line}", w.class));
                }
            }
        }
    }
    if out.machine {
        out.kv("category", report.category);
    } else {
        out.text(format!("category: {}", report.category));
        out.text(explain(&report));
    }
    Ok(out.finish())
}

fn solve(cfg: &RunConfig, path: &str, method: SolveMethod, eps: &str, restarts: usize, fallback: bool) -> Res {
    let text = read(path)?;
    let bf = BruteForce::with_cap(cfg.max_n);
    let mut out = Out::new(cfg.machine);
    if is_graph(&text) {
        if !matches!(method, SolveMethod::Auto | SolveMethod::Brute) {
            return Err(anyhow!("graph instances are solved by exhaustive search only (--method auto or brute)").into());
        }
        let g = with_file(path, GraphInstance::parse(&text))?;
        let result = graph_brute_force(&g, &bf)?;
        render::value(&mut out, "optimum", &result.optimum);
        out.kv("argmax", &result.argmax);
        out.kv("method", result.method);
        return Ok(out.finish());
    }
    let inst = with_file(path, CspInstance::parse(&text))?;
    let tractable = |inst: &CspInstance| -> anyhow::Result<Option<SolveResult>> {
        let certs = certify_tractable(inst);
        match solve_tractable(inst, &certs) {
            Ok(r) => Ok(Some(r)),
            Err(maxprod::Error::Certificate(_)) if fallback => Ok(None),
            Err(e) => Err(e.into()),
        }
    };
    let result = match method {
        SolveMethod::Brute => bf.solve(&inst)?,
        SolveMethod::Tractable => match tractable(&inst)? {
            Some(r) => r,
            None => bf.solve(&inst)?,
        },
        SolveMethod::Auto => {
            let set: Vec<ConstraintTable> =
                inst.applied_constraints().iter().map(|&i| inst.constraints()[i].clone()).collect();
            let po = !set.is_empty() && classify_set_with(&set, &fit(cfg))?.category.is_po();
            if po || set.is_empty() {
                solve_tractable(&inst, &certify_tractable(&inst))?
            } else {
                bf.solve(&inst)?
            }
        }
        SolveMethod::Flow => {
            let certs: Vec<_> = inst
                .constraints()
                .iter()
                .map(|f| maxprod::classes::is_imopt_with(f, &fit(cfg)))
                .collect();
            let red = imopt_to_flow(&inst, &certs, cfg.tolerance)?;
            solve_via_flow(&inst, &red, &bf)?
        }
        SolveMethod::Hill => {
            if cfg.exact_only {
                return Err(anyhow!("--method hill has no exactness guarantee and is refused under --exact").into());
            }
            let eps = parse_weight(eps).ok_or_else(|| anyhow!("bad --eps `{eps}`"))?;
            let sigma = approx_scheme(
                &inst,
                &eps,
                Strategy::HillClimb {
                    seed: cfg.seed,
                    restarts,
                },
                cfg.max_n,
            )?;
            let v = inst.measure(&sigma)?;
            render::value(&mut out, "value", &v);
            out.kv("argmax", &sigma);
            out.kv("method", "hill_climb");
            out.kv("guarantee", "none");
            return Ok(out.finish());
        }
    };
    render::value(&mut out, "optimum", &result.optimum);
    out.kv("argmax", &result.argmax);
    out.kv("method", result.method);
    Ok(out.finish())
}

#[allow(clippy::too_many_arguments)]
fn reduce(
    cfg: &RunConfig,
    kind: ReductionKind,
    path: &str,
    script: Option<&str>,
    target: Option<&str>,
    lib: Option<&str>,
    dest: Option<&str>,
) -> Res {
    let mut out = Out::new(cfg.machine);
    let name = match kind {
        ReductionKind::Is2csp => "is2csp",
        ReductionKind::Complement => "complement",
        ReductionKind::Bis2csp => "bis2csp",
        ReductionKind::Csp2flow => "csp2flow",
        ReductionKind::Rewrite => "rewrite",
    };
    out.kv("reduction", name);
    let body = match kind {
        ReductionKind::Is2csp => is_to_csp(&load_graph(path)?)?.render(),
        ReductionKind::Complement => complement_all(&load_instance(path)?)?.render(),
        ReductionKind::Bis2csp => bis_to_implies(&load_graph(path)?)?.render(),
        ReductionKind::Csp2flow => {
            let inst = load_instance(path)?;
            let certs: Vec<_> = inst
                .constraints()
                .iter()
                .map(|f| maxprod::classes::is_imopt_with(f, &fit(cfg)))
                .collect();
            let red = imopt_to_flow(&inst, &certs, cfg.tolerance)?;
            let mut s = String::new();
            for (v, f) in red.forced.iter().enumerate() {
                if let Some(c) = f {
                    s.push_str(&format!("# forced x{} = {}\n", v + 1, *c as u8));
                }
            }
            match &red.graph {
                None => s.push_str("# pins contradict: the optimum is 0\n"),
                Some(g) => {
                    s.push_str(&format!("# constant {}\n", format_weight(&red.constant)));
                    for (i, v) in red.free_vars.iter().enumerate() {
                        s.push_str(&format!("# vertex {} is x{}\n", i + 1, v + 1));
                    }
                    if let Some(r) = &red.surrogate_rate {
                        s.push_str(&format!("# surrogate rate {} on {} edges\n", format_weight(r), red.surrogate_edges));
                    }
                    s.push_str(&g.render());
                }
            }
            out.kv("contradiction", red.graph.is_none());
            out.kv("constant", format_weight(&red.constant));
            s
        }
        ReductionKind::Rewrite => {
            let script_path = script.ok_or_else(|| anyhow!("rewrite needs --script"))?;
            let target = target.ok_or_else(|| anyhow!("rewrite needs --target"))?;
            let script = with_file(script_path, ConstructionScript::parse(&read(script_path)?))?;
            let mut library = Library::new();
            if let Some(l) = lib {
                for t in with_file(l, parse_constraint_file(&read(l)?))? {
                    if builtin::name_of(&t) != t.name() {
                        library.insert(t)?;
                    }
                }
            }
            let inst = load_instance(path)?;
            let rw = rewrite_by_construction(&inst, target, &script, &library)?;
            out.kv("occurrences", rw.occurrences);
            out.kv("accumulated_scale", format_weight(&rw.accumulated_scale));
            out.kv("original_vars", rw.original_vars);
            let mut s = format!(
                "# rewritten optimum times {}^{} equals the original optimum; variables 1..{} are the originals\n",
                format_weight(&rw.accumulated_scale),
                rw.occurrences,
                rw.original_vars
            );
            s.push_str(&rw.instance.render());
            s
        }
    };
    match dest {
        Some(d) => {
            fs::write(d, &body).with_context(|| format!("cannot write `{d}`"))?;
            out.kv("output", d);
            Ok(out.finish())
        }
        None => Ok(body),
    }
}

fn gen(cfg: &RunConfig, kind: GenKind, n: usize, m: usize, p: f64, zeros: bool) -> Res {
    let seed = cfg.seed;
    let text = match kind {
        GenKind::Is => random_graph(GraphKind::Is, n, p, seed)?.render(),
        GenKind::Bis => random_graph(GraphKind::Bis, n, p, seed)?.render(),
        GenKind::Flow => random_graph(GraphKind::Flow, n, p, seed)?.render(),
        GenKind::Cut => cut_to_prod(n, &random_edges(n, p, seed))?.render(),
        GenKind::Csp => {
            let mut pool = builtin::all();
            pool.push(ConstraintTable::from_ints(&[1, 2])?.named("U"));
            pool.push(ConstraintTable::from_ints(&[2, 1])?.named("V"));
            random_instance(n, &pool, m, seed)?.render()
        }
        GenKind::Ed => random_instance(n, &ed_pool(6, seed)?, m, seed)?.render(),
        GenKind::Imopt => random_imopt_instance(n, m, zeros, seed)?.render(),
    };
    Ok(text)
}

fn eval(cfg: &RunConfig, path: &str, assignment: &str) -> Res {
    let sigma = Assignment::parse(assignment).ok_or_else(|| anyhow!("bad assignment `{assignment}`"))?;
    let text = read(path)?;
    let v = if is_graph(&text) {
        with_file(path, GraphInstance::parse(&text))?.measure(&sigma)?
    } else {
        with_file(path, CspInstance::parse(&text))?.measure(&sigma)?
    };
    let mut out = Out::new(cfg.machine);
    render::value(&mut out, "value", &v);
    Ok(out.finish())
}

fn check(cfg: &RunConfig, suite: &str, cases: usize) -> Res {
    let reports = check::run(suite, cfg.seed, cases.max(1)).ok_or_else(|| {
        anyhow!("unknown suite `{suite}` (expected all or one of {})", check::SUITES.join(", "))
    })?;
    let mut out = Out::new(cfg.machine);
    let mut failed = 0;
    for r in &reports {
        failed += r.failed();
        if out.machine {
            out.kv(&format!("suite.{}.passed", r.name), r.passed);
            out.kv(&format!("suite.{}.failed", r.name), r.failed());
        } else {
            out.text(format!("{}: {} passed, {} failed", r.name, r.passed, r.failed()));
            for f in r.failures.iter().take(10) {
                out.text(format!("  FAIL {f}"));
            }
        }
    }
    out.kv("failed", failed);
    if failed == 0 {
        Ok(out.finish())
    } else {
        Err(Failure::Property(out.finish()))
    }
}
