//! Nonnegative-weighted Boolean constraints and their algebra.
//!
//! A constraint of arity `k` is stored as its `2^k` output values in
//! lexicographic input order, with `x₁` as the most significant bit: for
//! `k = 2` the table is `(f(00), f(01), f(10), f(11))`.
//!
//! Variable positions in this API are zero-based. The text formats
//! (constraint files, construction scripts) use one-based positions.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Weight};

pub const MAX_ARITY: usize = 16;

/// Bit of variable `pos` (zero-based) inside a lexicographic index.
#[inline]
pub fn bit(index: usize, arity: usize, pos: usize) -> bool {
    (index >> (arity - 1 - pos)) & 1 == 1
}

/// Lexicographic index of a bit string.
pub fn index_of(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Bit string of a lexicographic index.
pub fn bits_of(index: usize, arity: usize) -> Vec<bool> {
    (0..arity).map(|p| bit(index, arity, p)).collect()
}

#[derive(Clone, Debug)]
pub struct ConstraintTable {
    arity: usize,
    weights: Vec<Weight>,
    name: Option<String>,
}

/// Tables compare by arity and weights; the name is a label only.
impl PartialEq for ConstraintTable {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.weights == other.weights
    }
}

impl Eq for ConstraintTable {}

impl std::hash::Hash for ConstraintTable {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.arity.hash(state);
        self.weights.hash(state);
    }
}

impl ConstraintTable {
    pub fn new(arity: usize, weights: Vec<Weight>) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        if weights.len() != 1 << arity {
            return Err(Error::Arity {
                expected: 1 << arity,
                got: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::arg(format!("negative weight {w}")));
        }
        Ok(ConstraintTable {
            arity,
            weights,
            name: None,
        })
    }

    /// Builds a table from integer weights; arity is inferred from the length.
    pub fn from_ints(weights: &[i64]) -> Result<Self> {
        let arity = weights.len().trailing_zeros() as usize;
        Self::new(arity, weights.iter().map(|&w| rational::int(w)).collect())
    }

    /// Builds a table from weight literals such as `"1/2"` or `"0.25"`.
    pub fn from_strs(weights: &[&str]) -> Result<Self> {
        let ws = weights
            .iter()
            .map(|w| rational::parse_weight(w).ok_or_else(|| Error::arg(format!("bad weight `{w}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_weights(ws)
    }

    pub fn from_weights(weights: Vec<Weight>) -> Result<Self> {
        if !weights.len().is_power_of_two() {
            return Err(Error::arg(format!(
                "table length {} is not a power of two",
                weights.len()
            )));
        }
        let arity = weights.len().trailing_zeros() as usize;
        Self::new(arity, weights)
    }

    pub(crate) fn from_index_fn(arity: usize, f: impl Fn(usize) -> Weight) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        Ok(ConstraintTable {
            arity,
            weights: (0..1usize << arity).map(f).collect(),
            name: None,
        })
    }

    pub fn constant(arity: usize, w: Weight) -> Result<Self> {
        Self::from_index_fn(arity, |_| w.clone())
    }

    pub fn unary(w0: Weight, w1: Weight) -> Self {
        ConstraintTable {
            arity: 1,
            weights: vec![w0, w1],
            name: None,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_name(mut self, name: Option<String>) -> Self {
        self.name = name;
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn at(&self, index: usize) -> &Weight {
        &self.weights[index]
    }

    pub fn evaluate(&self, x: &[bool]) -> Result<&Weight> {
        if x.len() != self.arity {
            return Err(Error::Arity {
                expected: self.arity,
                got: x.len(),
            });
        }
        Ok(&self.weights[index_of(x)])
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.arity {
            return Err(Error::Index {
                index: i,
                arity: self.arity,
            });
        }
        Ok(())
    }

    /// Exchanges the columns of variables `i` and `j`.
    pub fn permute(&self, i: usize, j: usize) -> Result<Self> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::arg("permute needs two distinct positions"));
        }
        let k = self.arity;
        let (mi, mj) = (1 << (k - 1 - i), 1 << (k - 1 - j));
        Self::from_index_fn(k, |idx| {
            let (bi, bj) = (idx & mi != 0, idx & mj != 0);
            let mut src = idx & !(mi | mj);
            if bi {
                src |= mj;
            }
            if bj {
                src |= mi;
            }
            self.weights[src].clone()
        })
    }

    /// Fixes variable `i` to `c`, removing it.
    pub fn pin(&self, i: usize, c: bool) -> Result<Self> {
        self.check_index(i)?;
        let k = self.arity;
        Self::from_index_fn(k - 1, |idx| {
            self.weights[insert_bit(idx, k - 1, i, c)].clone()
        })
    }

    /// Identifies variable `i` with variable `j`, removing `i`.
    pub fn link(&self, i: usize, j: usize) -> Result<Self> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::arg("link needs two distinct positions"));
        }
        let k = self.arity;
        // Position of x_j among the remaining k-1 variables.
        let j_rest = if j > i { j - 1 } else { j };
        Self::from_index_fn(k - 1, |idx| {
            let c = bit(idx, k - 1, j_rest);
            self.weights[insert_bit(idx, k - 1, i, c)].clone()
        })
    }

    /// Inserts a free variable so that it becomes position `position`.
    pub fn expand(&self, position: usize) -> Result<Self> {
        if position > self.arity {
            return Err(Error::Index {
                index: position,
                arity: self.arity,
            });
        }
        let k = self.arity + 1;
        Self::from_index_fn(k, |idx| self.weights[remove_bit(idx, k, position)].clone())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::Arity {
                expected: self.arity,
                got: other.arity,
            });
        }
        Self::from_index_fn(self.arity, |idx| &self.weights[idx] * &other.weights[idx])
    }

    /// Maximizes over the last `d` variables.
    pub fn maximize_out(&self, d: usize) -> Result<Self> {
        if d > self.arity {
            return Err(Error::Index {
                index: d,
                arity: self.arity,
            });
        }
        Self::from_index_fn(self.arity - d, |idx| {
            let base = idx << d;
            (0..1usize << d)
                .map(|t| &self.weights[base | t])
                .max()
                .cloned()
                .unwrap_or_else(Weight::zero)
        })
    }

    pub fn scale(&self, lambda: &Weight) -> Result<Self> {
        if !lambda.is_positive() {
            return Err(Error::arg(format!("scale factor must be positive, got {lambda}")));
        }
        Self::from_index_fn(self.arity, |idx| &self.weights[idx] * lambda)
    }

    /// Flips the `i`-th argument.
    pub fn complement_variable(&self, i: usize) -> Result<Self> {
        self.check_index(i)?;
        let m = 1 << (self.arity - 1 - i);
        Self::from_index_fn(self.arity, |idx| self.weights[idx ^ m].clone())
    }

    /// Flips every argument.
    pub fn complement_all(&self) -> Self {
        let mask = (1usize << self.arity) - 1;
        let mut t = Self::from_index_fn(self.arity, |idx| self.weights[idx ^ mask].clone())
            .expect("arity already validated");
        t.name = self.name.clone();
        t
    }

    pub fn support(&self) -> Support {
        let mut s = Support::empty(self.arity);
        for (idx, w) in self.weights.iter().enumerate() {
            if !w.is_zero() {
                s.insert(idx);
            }
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(Zero::is_zero)
    }

    /// Divides by the first weight when it is nonzero.
    pub fn normalized(&self) -> Self {
        match self.weights.first() {
            Some(w) if !w.is_zero() && !w.is_one() => {
                let inv = w.recip();
                self.scale(&inv).expect("positive")
            }
            _ => self.clone().with_name(None),
        }
    }
}

/// Inserts bit `c` at position `pos` of a `k`-bit index, giving a `k+1`-bit index.
fn insert_bit(idx: usize, k: usize, pos: usize, c: bool) -> usize {
    let low_width = k - pos;
    let high = idx >> low_width;
    let low = idx & ((1 << low_width) - 1);
    (((high << 1) | c as usize) << low_width) | low
}

/// Removes position `pos` from a `k`-bit index.
fn remove_bit(idx: usize, k: usize, pos: usize) -> usize {
    let low_width = k - 1 - pos;
    let high = idx >> (low_width + 1);
    let low = idx & ((1 << low_width) - 1);
    (high << low_width) | low
}

impl fmt::Display for ConstraintTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", rational::format_weight(w))?;
        }
        write!(f, ")")
    }
}

/// The nonzero locus `R_f` of a constraint, as a bit set over `{0,1}^arity`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Support {
    arity: usize,
    words: Vec<u64>,
}

impl Support {
    pub fn empty(arity: usize) -> Self {
        Support {
            arity,
            words: vec![0; (1usize << arity).div_ceil(64)],
        }
    }

    pub fn full(arity: usize) -> Self {
        let mut s = Self::empty(arity);
        for i in 0..1usize << arity {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(arity: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(arity);
        for m in members {
            s.insert(m);
        }
        s
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        self.words[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn insert(&mut self, index: usize) {
        self.words[index / 64] |= 1 << (index % 64);
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == 1 << self.arity
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..1usize << self.arity).filter(move |&i| self.contains(i))
    }

    /// Projection onto a list of positions, as a support of arity `positions.len()`.
    pub fn project(&self, positions: &[usize]) -> Support {
        let m = positions.len();
        let mut out = Support::empty(m);
        for idx in self.iter() {
            let p = positions
                .iter()
                .fold(0, |acc, &pos| (acc << 1) | bit(idx, self.arity, pos) as usize);
            out.insert(p);
        }
        out
    }
}

/// A truth assignment to `x₁ … x_n`, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn zeros(n: usize) -> Self {
        Assignment(vec![false; n])
    }

    /// The assignment whose bit string has lexicographic index `index`.
    pub fn from_index(n: usize, index: u64) -> Self {
        Assignment((0..n).map(|p| (index >> (n - 1 - p)) & 1 == 1).collect())
    }

    pub fn index(&self) -> u64 {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Assignment)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// The predefined relations. Their names are reserved in constraint files.
pub mod builtin {
    use super::ConstraintTable;

    pub const NAMES: [&str; 7] = ["EQ", "XOR", "OR", "NAND", "IMPLIES", "D0", "D1"];

    fn t(name: &str, w: &[i64]) -> ConstraintTable {
        ConstraintTable::from_ints(w).expect("valid builtin").named(name)
    }

    pub fn eq() -> ConstraintTable {
        t("EQ", &[1, 0, 0, 1])
    }
    pub fn xor() -> ConstraintTable {
        t("XOR", &[0, 1, 1, 0])
    }
    pub fn or() -> ConstraintTable {
        t("OR", &[0, 1, 1, 1])
    }
    pub fn nand() -> ConstraintTable {
        t("NAND", &[1, 1, 1, 0])
    }
    pub fn implies() -> ConstraintTable {
        t("IMPLIES", &[1, 1, 0, 1])
    }
    /// `Δ₀ = (1,0)`.
    pub fn delta0() -> ConstraintTable {
        t("D0", &[1, 0])
    }
    /// `Δ₁ = (0,1)`.
    pub fn delta1() -> ConstraintTable {
        t("D1", &[0, 1])
    }

    pub fn by_name(name: &str) -> Option<ConstraintTable> {
        Some(match name {
            "EQ" => eq(),
            "XOR" => xor(),
            "OR" => or(),
            "NAND" => nand(),
            "IMPLIES" => implies(),
            "D0" => delta0(),
            "D1" => delta1(),
            _ => return None,
        })
    }

    pub fn all() -> Vec<ConstraintTable> {
        NAMES.iter().map(|n| by_name(n).unwrap()).collect()
    }

    /// Name of the builtin equal to `t`, if any.
    pub fn name_of(table: &ConstraintTable) -> Option<&'static str> {
        NAMES.iter().copied().find(|n| by_name(n).as_ref() == Some(table))
    }
}
