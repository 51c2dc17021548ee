//! Text and `key: value` rendering.

use maxprod::classes::{
    AfCertificate, BinaryRelation, DegenerateCertificate, EdCertificate, ImOptCertificate, Parity, UnaryFactor,
};
use maxprod::rational::{format_decimal, format_weight, log2};
use maxprod::Weight;
use num_traits::Zero;

/// Collects output lines; machine mode writes `key: value`, text mode
/// writes `key value` unless a line is given explicitly.
pub struct Out {
    pub machine: bool,
    lines: Vec<String>,
}

impl Out {
    pub fn new(machine: bool) -> Self {
        Out {
            machine,
            lines: Vec::new(),
        }
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let line = if self.machine {
            format!("{key}: {value}")
        } else {
            format!("{key} {value}")
        };
        self.lines.push(line);
    }

    /// A line that only appears in text mode.
    pub fn text(&mut self, line: impl Into<String>) {
        if !self.machine {
            self.lines.push(line.into());
        }
    }

    pub fn finish(self) -> String {
        let mut s = self.lines.join("\n");
        if !s.is_empty() {
            s.push('\n');
        }
        s
    }
}

/// `p/q (decimal)`, or `0 (ZERO)`.
pub fn weight_line(w: &Weight) -> String {
    if w.is_zero() {
        "0 (ZERO)".into()
    } else {
        format!("{} ({})", format_weight(w), format_decimal(w))
    }
}

pub fn log2_line(w: &Weight) -> String {
    match log2(w) {
        None => "ZERO".into(),
        Some(l) => format!("{l:.12}"),
    }
}

/// Writes a value as exact, decimal, log₂ and zero-flag keys.
pub fn value(out: &mut Out, key: &str, w: &Weight) {
    if out.machine {
        out.kv(key, format_weight(w));
        out.kv(&format!("{key}_decimal"), format_decimal(w));
        out.kv(&format!("{key}_log2"), log2_line(w));
        out.kv(&format!("{key}_zero"), w.is_zero());
    } else {
        out.kv(key, weight_line(w));
        out.kv("log2", log2_line(w));
    }
}

fn var(p: usize) -> String {
    format!("x{}", p + 1)
}

fn unaries(us: &[UnaryFactor]) -> String {
    us.iter()
        .enumerate()
        .map(|(p, (a, b))| format!("{}:({},{})", var(p), format_weight(a), format_weight(b)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn degenerate(c: &DegenerateCertificate) -> String {
    format!("unary {} constant {}", unaries(&c.unary_factors), format_weight(&c.constant))
}

pub fn ed(c: &EdCertificate) -> String {
    let pins: Vec<String> = c.pins.iter().map(|(&p, &b)| format!("{}={}", var(p), b as u8)).collect();
    let links: Vec<String> = c
        .parity_links
        .iter()
        .map(|&(i, j, par)| {
            let op = if par == Parity::Equal { "=" } else { "!=" };
            format!("{}{op}{}", var(i), var(j))
        })
        .collect();
    format!(
        "pins [{}] links [{}] unary {} constant {}",
        pins.join(" "),
        links.join(" "),
        unaries(&c.unary_factors),
        format_weight(&c.constant)
    )
}

fn relation(r: BinaryRelation) -> String {
    match r {
        BinaryRelation::FULL => "FULL".into(),
        BinaryRelation::EQ => "EQ".into(),
        BinaryRelation::XOR => "XOR".into(),
        BinaryRelation(m) => format!("{m:04b}"),
    }
}

pub fn af(c: &AfCertificate) -> String {
    let rels: Vec<String> = c
        .binary_relations
        .iter()
        .map(|&(j, r)| format!("{}:{}", var(j), relation(r)))
        .collect();
    format!(
        "pivot {} relations [{}] unary {} constant {}",
        var(c.pivot),
        rels.join(" "),
        unaries(&c.unary_factors),
        format_weight(&c.constant)
    )
}

pub fn imopt(c: &ImOptCertificate) -> String {
    let pairs: Vec<String> = c
        .lambda_pairs
        .iter()
        .map(|(r, s, l)| format!("({},{},{})", var(*r), var(*s), format_weight(l)))
        .collect();
    format!(
        "unary {} pairs [{}] constant {}",
        unaries(&c.unary_factors),
        pairs.join(" "),
        format_weight(&c.constant)
    )
}
