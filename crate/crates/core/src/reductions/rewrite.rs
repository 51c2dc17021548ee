//! Rewriting an instance through a construction script: every application
//! of the scripted constraint is replaced by the script's source
//! applications, with private auxiliary variables for pinned, expanded
//! away and maximized-out positions.

use num_traits::Zero;

use crate::constraint::{builtin, Assignment};
use crate::error::{Error, Result};
use crate::instance::CspInstance;
use crate::library::Library;
use crate::rational::Weight;
use crate::script::{ConstructionScript, Step};

/// Largest number of private variables one occurrence may carry for
/// forward completion.
const MAX_PRIVATE: usize = 20;

#[derive(Clone, Debug)]
pub struct Rewrite {
    pub instance: CspInstance,
    pub original_vars: usize,
    pub occurrences: usize,
    pub accumulated_scale: Weight,
    /// Per occurrence: its private variables and the applications it emitted.
    pub private: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Rewrite {
    /// Projects an assignment of the rewritten instance to the original variables.
    pub fn back_map(&self, sigma: &Assignment) -> Assignment {
        Assignment(sigma.0[..self.original_vars].to_vec())
    }

    /// Extends an original assignment, choosing each occurrence's private
    /// variables to maximize that occurrence's factors (ties: smallest bits).
    pub fn complete(&self, sigma: &Assignment) -> Result<Assignment> {
        if sigma.len() != self.original_vars {
            return Err(Error::Arity {
                expected: self.original_vars,
                got: sigma.len(),
            });
        }
        let mut bits = sigma.0.clone();
        bits.resize(self.instance.num_vars(), false);
        let apps = self.instance.applications();
        for (aux, emitted) in &self.private {
            if aux.len() > MAX_PRIVATE {
                return Err(Error::CapExceeded {
                    n: aux.len(),
                    cap: MAX_PRIVATE,
                });
            }
            let mut best: Option<(Weight, u64)> = None;
            for t in 0..1u64 << aux.len() {
                for (p, &v) in aux.iter().enumerate() {
                    bits[v] = (t >> (aux.len() - 1 - p)) & 1 == 1;
                }
                let mut val = Weight::from_integer(1.into());
                for &a in emitted {
                    let app = &apps[a];
                    let idx = app.vars.iter().fold(0usize, |acc, &x| (acc << 1) | bits[x] as usize);
                    val *= self.instance.constraints()[app.constraint].at(idx);
                }
                if best.as_ref().is_none_or(|(b, _)| val > *b) {
                    best = Some((val, t));
                }
            }
            let t = best.map_or(0, |b| b.1);
            for (p, &v) in aux.iter().enumerate() {
                bits[v] = (t >> (aux.len() - 1 - p)) & 1 == 1;
            }
        }
        Ok(Assignment(bits))
    }
}

/// The script replayed on slots instead of tables: each factor is a source
/// name applied to slots; `positions` are the slots of the current arguments.
struct Symbolic {
    slots: usize,
    factors: Vec<(String, Vec<usize>)>,
    positions: Vec<usize>,
}

impl Symbolic {
    fn new(source: &str, arity: usize) -> Self {
        Symbolic {
            slots: arity,
            factors: vec![(source.to_string(), (0..arity).collect())],
            positions: (0..arity).collect(),
        }
    }

    fn fresh(&mut self) -> usize {
        self.slots += 1;
        self.slots - 1
    }

    fn step(&mut self, step: &Step) {
        match step {
            Step::Permute(i, j) => self.positions.swap(*i, *j),
            Step::Pin(i, c) => {
                let s = self.positions.remove(*i);
                let pin = if *c { "D1" } else { "D0" };
                self.factors.push((pin.into(), vec![s]));
            }
            Step::Link(i, j) => {
                let (a, b) = (self.positions[*i], self.positions[*j]);
                self.positions.remove(*i);
                for (_, slots) in &mut self.factors {
                    for s in slots.iter_mut().filter(|s| **s == a) {
                        *s = b;
                    }
                }
            }
            Step::Expand(p) => {
                let s = self.fresh();
                self.positions.insert(*p, s);
            }
            Step::Multiply(name) => self.factors.push((name.clone(), self.positions.clone())),
            Step::MaximizeOut(d) => {
                let keep = self.positions.len() - d;
                self.positions.truncate(keep);
            }
            Step::Scale(_) => {}
        }
    }
}

/// Replaces every application of constraint `f` by the constituents of
/// `script`. Sources resolve in `lib`, then in the instance, then among the
/// builtins. The optimum relation is
/// `m*(rewritten) · accumulated_scale^occurrences = m*(inst)`.
pub fn rewrite_by_construction(
    inst: &CspInstance,
    f: &str,
    script: &ConstructionScript,
    lib: &Library,
) -> Result<Rewrite> {
    let fi = inst
        .constraint_index(f)
        .ok_or_else(|| Error::arg(format!("constraint `{f}` is not in the instance")))?;
    let target = &inst.constraints()[fi];

    let mut full = lib.clone();
    for t in inst.constraints() {
        let name = t.name().unwrap_or_default();
        if builtin::by_name(name).is_none() && full.get(name).is_none() {
            full.insert(t.clone())?;
        }
    }
    script.verify(&full, target)?;

    let source_arity = full.get(&script.source).expect("verified").arity();
    let mut sym = Symbolic::new(&script.source, source_arity);
    for s in &script.steps {
        sym.step(s);
    }

    let mut out = CspInstance::new(inst.num_vars());
    let mut private = Vec::new();
    for app in inst.applications() {
        if app.constraint != fi {
            out.apply_table(inst.constraints()[app.constraint].clone(), app.vars.clone())?;
            continue;
        }
        let mut var_of = vec![usize::MAX; sym.slots];
        for (p, &s) in sym.positions.iter().enumerate() {
            var_of[s] = app.vars[p];
        }
        let mut aux = Vec::new();
        for (_, slots) in &sym.factors {
            for &s in slots {
                if var_of[s] == usize::MAX {
                    var_of[s] = out.add_vars(1);
                    aux.push(var_of[s]);
                }
            }
        }
        let mut emitted = Vec::new();
        for (name, slots) in &sym.factors {
            let table = full.get(name).expect("verified").named(name.clone());
            emitted.push(out.applications().len());
            out.apply_table(table, slots.iter().map(|&s| var_of[s]).collect())?;
        }
        private.push((aux, emitted));
    }
    Ok(Rewrite {
        instance: out,
        original_vars: inst.num_vars(),
        occurrences: private.len(),
        accumulated_scale: script.accumulated_scale(),
        private,
    })
}

impl Rewrite {
    /// `m*(rewritten) · accumulated_scale^occurrences`.
    pub fn lift(&self, rewritten_value: &Weight) -> Weight {
        if rewritten_value.is_zero() {
            return Weight::zero();
        }
        let mut v = rewritten_value.clone();
        for _ in 0..self.occurrences {
            v *= &self.accumulated_scale;
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::{builtin::*, ConstraintTable};
    use crate::rational::int;
    use crate::solve::brute_force;

    fn check(inst: &CspInstance, f: &str, script: &ConstructionScript) -> Rewrite {
        let rw = rewrite_by_construction(inst, f, script, &Library::new()).unwrap();
        let orig = brute_force(inst).unwrap();
        let new = brute_force(&rw.instance).unwrap();
        assert_eq!(rw.lift(&new.optimum), orig.optimum);
        assert_eq!(inst.measure(&rw.back_map(&new.argmax)).unwrap(), orig.optimum);
        let completed = rw.complete(&orig.argmax).unwrap();
        assert_eq!(rw.lift(&rw.instance.measure(&completed).unwrap()), orig.optimum);
        rw
    }

    #[test]
    fn xor_from_or_and_nand() {
        let mut inst = CspInstance::new(3);
        inst.apply_table(xor(), vec![0, 1]).unwrap();
        inst.apply_table(xor(), vec![1, 2]).unwrap();
        inst.apply_table(ConstraintTable::unary(int(1), int(3)).named("U"), vec![2]).unwrap();
        let script = ConstructionScript::new("OR").then(Step::Multiply("NAND".into()));
        let rw = check(&inst, "XOR", &script);
        assert_eq!(rw.instance.applications().len(), 5);
        assert_eq!(rw.instance.num_vars(), 3);
    }

    #[test]
    fn scaled_eq() {
        let f = eq().scale(&int(3)).unwrap().named("F");
        let mut inst = CspInstance::new(2);
        inst.apply_table(f.clone(), vec![0, 1]).unwrap();
        inst.apply_table(f, vec![1, 0]).unwrap();
        let script = ConstructionScript::new("EQ").then(Step::Scale(int(3)));
        let rw = check(&inst, "F", &script);
        assert_eq!(brute_force(&rw.instance).unwrap().optimum, int(1));
        assert_eq!(brute_force(&inst).unwrap().optimum, int(9));
    }

    #[test]
    fn private_variables() {
        let f = implies().maximize_out(1).unwrap().named("ONE");
        let mut inst = CspInstance::new(2);
        inst.apply_table(f.clone(), vec![0]).unwrap();
        inst.apply_table(f, vec![1]).unwrap();
        let script = ConstructionScript::new("IMPLIES").then(Step::MaximizeOut(1));
        let rw = check(&inst, "ONE", &script);
        assert_eq!(rw.instance.num_vars(), 4);
        assert_eq!(rw.private.len(), 2);
    }

    #[test]
    fn pin_and_link() {
        let d1 = or().link(0, 1).unwrap().named("L");
        let mut inst = CspInstance::new(2);
        inst.apply_table(d1, vec![1]).unwrap();
        inst.apply_table(xor(), vec![0, 1]).unwrap();
        check(&inst, "L", &ConstructionScript::new("OR").then(Step::Link(0, 1)));

        let p = implies().pin(0, true).unwrap().named("P");
        let mut inst = CspInstance::new(1);
        inst.apply_table(p, vec![0]).unwrap();
        let rw = check(&inst, "P", &ConstructionScript::new("IMPLIES").then(Step::Pin(0, true)));
        assert_eq!(rw.private[0].0.len(), 1);
    }

    #[test]
    fn replay_mismatch_refused() {
        let mut inst = CspInstance::new(2);
        inst.apply_table(xor(), vec![0, 1]).unwrap();
        let script = ConstructionScript::new("OR");
        assert!(matches!(
            rewrite_by_construction(&inst, "XOR", &script, &Library::new()),
            Err(Error::Replay(_))
        ));
    }
}
