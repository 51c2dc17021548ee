//! Instances of the product-measured CSP and their measure.
//!
//! Text format (variable indices are 1-based):
//!
//! ```text
//! constraint U 1
//!   1 3
//! vars 3
//! apply EQ 1 2
//! apply XOR 2 3
//! apply U 1
//! ```

use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::constraint::{builtin, Assignment, ConstraintTable};
use crate::error::{Error, Result};
use crate::format::{self, parse_block, tokenize};
use crate::rational::Weight;

/// One factor of the product: a constraint applied to a tuple of variables.
/// Repeated variables are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Application {
    pub constraint: usize,
    pub vars: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CspInstance {
    num_vars: usize,
    constraints: Vec<ConstraintTable>,
    applications: Vec<Application>,
}

impl CspInstance {
    pub fn new(num_vars: usize) -> Self {
        CspInstance {
            num_vars,
            ..Default::default()
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[ConstraintTable] {
        &self.constraints
    }

    pub fn applications(&self) -> &[Application] {
        &self.applications
    }

    pub fn constraint_index(&self, name: &str) -> Option<usize> {
        self.constraints.iter().position(|c| c.name() == Some(name))
    }

    /// Adds a constraint (or finds an identical one with the same name) and
    /// returns its index. Unnamed tables get a generated name.
    pub fn add_constraint(&mut self, table: ConstraintTable) -> Result<usize> {
        let table = match table.name() {
            Some(_) => table,
            None => {
                let name = builtin::name_of(&table)
                    .map(str::to_string)
                    .unwrap_or_else(|| self.fresh_name("C"));
                table.named(name)
            }
        };
        let name = table.name().unwrap().to_string();
        if let Some(i) = self.constraint_index(&name) {
            if self.constraints[i] != table {
                return Err(Error::arg(format!(
                    "constraint `{name}` already defined with different weights"
                )));
            }
            return Ok(i);
        }
        if let Some(b) = builtin::by_name(&name) {
            if b != table {
                return Err(Error::arg(format!("`{name}` is a reserved builtin name")));
            }
        }
        self.constraints.push(table);
        Ok(self.constraints.len() - 1)
    }

    fn fresh_name(&self, prefix: &str) -> String {
        (self.constraints.len() + 1..)
            .map(|i| format!("{prefix}{i}"))
            .find(|n| self.constraint_index(n).is_none())
            .unwrap()
    }

    pub fn apply(&mut self, constraint: usize, vars: Vec<usize>) -> Result<()> {
        let t = self
            .constraints
            .get(constraint)
            .ok_or_else(|| Error::arg(format!("no constraint with index {constraint}")))?;
        if t.arity() != vars.len() {
            return Err(Error::Arity {
                expected: t.arity(),
                got: vars.len(),
            });
        }
        if let Some(&v) = vars.iter().find(|&&v| v >= self.num_vars) {
            return Err(Error::Index {
                index: v,
                arity: self.num_vars,
            });
        }
        self.applications.push(Application { constraint, vars });
        Ok(())
    }

    /// Adds `table` if needed and applies it.
    pub fn apply_table(&mut self, table: ConstraintTable, vars: Vec<usize>) -> Result<()> {
        let i = self.add_constraint(table)?;
        self.apply(i, vars)
    }

    /// Adds variables and returns the index of the first new one.
    pub fn add_vars(&mut self, count: usize) -> usize {
        self.num_vars += count;
        self.num_vars - count
    }

    /// Product of every applied constraint at `sigma`. The empty product is 1.
    pub fn measure(&self, sigma: &Assignment) -> Result<Weight> {
        if sigma.len() != self.num_vars {
            return Err(Error::Arity {
                expected: self.num_vars,
                got: sigma.len(),
            });
        }
        Ok(self.measure_bits(sigma.bits()))
    }

    pub(crate) fn measure_bits(&self, bits: &[bool]) -> Weight {
        let mut v = Weight::one();
        for app in &self.applications {
            let idx = app.vars.iter().fold(0usize, |acc, &x| (acc << 1) | bits[x] as usize);
            let w = self.constraints[app.constraint].at(idx);
            if w.is_zero() {
                return Weight::zero();
            }
            v *= w;
        }
        v
    }

    /// Lexicographic table index of each application at an assignment index.
    pub(crate) fn local_index(&self, app: &Application, sigma: u64) -> usize {
        let n = self.num_vars;
        app.vars
            .iter()
            .fold(0usize, |acc, &x| (acc << 1) | ((sigma >> (n - 1 - x)) & 1) as usize)
    }

    /// Constraints that occur in at least one application.
    pub fn applied_constraints(&self) -> Vec<usize> {
        let mut used: Vec<usize> = self.applications.iter().map(|a| a.constraint).collect();
        used.sort_unstable();
        used.dedup();
        used
    }

    pub fn parse(text: &str) -> Result<Self> {
        let lines = tokenize(text);
        let mut defined: Vec<ConstraintTable> = Vec::new();
        let mut inst: Option<CspInstance> = None;
        let mut i = 0;
        while i < lines.len() {
            let (line, toks) = &lines[i];
            let line = *line;
            match toks[0] {
                "constraint" => {
                    let (t, next) = parse_block(&lines, i)?;
                    if defined.iter().any(|d| d.name() == t.name()) {
                        return Err(Error::parse(line, format!("constraint `{}` defined twice", t.name().unwrap())));
                    }
                    defined.push(t);
                    i = next;
                    continue;
                }
                "vars" => {
                    if inst.is_some() {
                        return Err(Error::parse(line, "duplicate `vars` line"));
                    }
                    let n: usize = toks
                        .get(1)
                        .and_then(|t| t.parse().ok())
                        .filter(|_| toks.len() == 2)
                        .ok_or_else(|| Error::parse(line, "expected `vars N`"))?;
                    inst = Some(CspInstance::new(n));
                }
                "apply" => {
                    let inst = inst
                        .as_mut()
                        .ok_or_else(|| Error::parse(line, "`apply` before `vars`"))?;
                    let name = toks.get(1).ok_or_else(|| Error::parse(line, "expected `apply NAME i1 ... ik`"))?;
                    let table = defined
                        .iter()
                        .find(|d| d.name() == Some(name))
                        .cloned()
                        .or_else(|| builtin::by_name(name))
                        .ok_or_else(|| Error::parse(line, format!("unknown constraint `{name}`")))?;
                    let vars = toks[2..]
                        .iter()
                        .map(|t| {
                            t.parse::<usize>()
                                .ok()
                                .and_then(|v| v.checked_sub(1))
                                .ok_or_else(|| Error::parse(line, format!("bad variable `{t}` (indices are 1-based)")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    inst.apply_table(table, vars)
                        .map_err(|e| Error::parse(line, e.to_string()))?;
                }
                other => return Err(Error::parse(line, format!("unexpected `{other}`"))),
            }
            i += 1;
        }
        let mut inst = inst.ok_or_else(|| Error::parse(lines.last().map_or(1, |l| l.0), "missing `vars N`"))?;
        // Keep definitions that were never applied, so rewrites can refer to them.
        for d in defined {
            inst.add_constraint(d)?;
        }
        Ok(inst)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for t in &self.constraints {
            if builtin::name_of(t) != t.name() || t.name().is_none() {
                s.push_str(&format::render_constraint(t));
            }
        }
        let _ = writeln!(s, "vars {}", self.num_vars);
        for a in &self.applications {
            let _ = write!(s, "apply {}", self.constraints[a.constraint].name().unwrap_or("?"));
            for v in &a.vars {
                let _ = write!(s, " {}", v + 1);
            }
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::builtin::*;
    use crate::rational::int;

    pub(crate) fn ed_example() -> CspInstance {
        CspInstance::parse(
            "constraint U1 1\n1 3\nconstraint U3 1\n2 1\nvars 3\napply EQ 1 2\napply XOR 2 3\napply U1 1\napply U3 3\n",
        )
        .unwrap()
    }

    #[test]
    fn measure_examples() {
        let inst = ed_example();
        let m = |s: &str| inst.measure(&Assignment::parse(s).unwrap()).unwrap();
        assert_eq!(m("110"), int(6));
        assert_eq!(m("001"), int(1));
        assert_eq!(m("010"), int(0));
        assert_eq!(CspInstance::new(2).measure(&Assignment::zeros(2)).unwrap(), int(1));
        assert!(inst.measure(&Assignment::zeros(2)).is_err());
    }

    #[test]
    fn repeated_variables_substitute() {
        let mut inst = CspInstance::new(1);
        inst.apply_table(xor(), vec![0, 0]).unwrap();
        assert_eq!(inst.measure(&Assignment::zeros(1)).unwrap(), int(0));
    }

    #[test]
    fn text_roundtrip() {
        let inst = ed_example();
        assert_eq!(CspInstance::parse(&inst.render()).unwrap(), inst);
    }

    #[test]
    fn parse_errors() {
        let e = |t: &str| CspInstance::parse(t).unwrap_err();
        assert!(matches!(e("apply EQ 1 2"), Error::Parse { line: 1, .. }));
        assert!(matches!(e("vars 2\napply EQ 1 3"), Error::Parse { line: 2, .. }));
        assert!(matches!(e("vars 2\napply EQ 1"), Error::Parse { line: 2, .. }));
        assert!(matches!(e("vars 2\napply FOO 1"), Error::Parse { line: 2, .. }));
        assert!(matches!(e("vars 2\napply EQ 0 1"), Error::Parse { line: 2, .. }));
        assert!(matches!(e(""), Error::Parse { .. }));
    }

    #[test]
    fn builtin_dedup_and_conflicts() {
        let mut inst = CspInstance::new(2);
        let a = inst.add_constraint(or()).unwrap();
        let b = inst.add_constraint(ConstraintTable::from_ints(&[0, 1, 1, 1]).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(inst
            .add_constraint(ConstraintTable::from_ints(&[1, 1, 1, 1]).unwrap().named("OR"))
            .is_err());
    }
}
