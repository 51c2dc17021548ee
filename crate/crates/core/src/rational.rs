//! Exact nonnegative weights.
//!
//! Every weight in a table, certificate or measure is a [`Weight`], an
//! arbitrary-precision rational. Floating point only appears in log-domain
//! summaries and in the fitting steps of the class deciders.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Weight = BigRational;

pub fn int(n: i64) -> Weight {
    Weight::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Weight {
    Weight::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `3/2`, `1.5`, `7`, or `2.5e-3` into an exact rational.
pub fn parse_weight(s: &str) -> Option<Weight> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Weight::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(at) => (&s[..at], s[at + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let numer: BigInt = format!("{whole}{frac}").parse().ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut w = if scale >= 0 {
        Weight::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Weight::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        w = -w;
    }
    Some(w)
}

/// Renders as `p` or `p/q` in lowest terms.
pub fn format_weight(w: &Weight) -> String {
    if w.is_integer() {
        w.numer().to_string()
    } else {
        format!("{}/{}", w.numer(), w.denom())
    }
}

/// Twelve significant digits, computed from the exact value.
pub fn format_decimal(w: &Weight) -> String {
    if w.is_zero() {
        return "0".to_string();
    }
    match w.to_f64() {
        Some(x) if x.is_finite() && x != 0.0 => {
            let s = format!("{x:.11e}");
            // `{:e}` output is valid input for f64 parsing; `{}` on the parsed
            // value trims trailing zeros where a plain form is short enough.
            let v: f64 = s.parse().unwrap_or(x);
            if (1e-6..1e15).contains(&v.abs()) {
                format!("{v}")
            } else {
                s
            }
        }
        _ => {
            let l = log2(w).unwrap_or(0.0);
            format!("2^{l:.6}")
        }
    }
}

fn log2_int(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_f64().unwrap_or(f64::NAN).log2();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().unwrap_or(f64::NAN).log2() + shift as f64
}

/// `log₂ w`, or `None` for zero. Handles values far outside the f64 range.
pub fn log2(w: &Weight) -> Option<f64> {
    if w.is_zero() {
        return None;
    }
    let n = w.numer().abs();
    Some(log2_int(&n) - log2_int(w.denom()))
}

/// Exact dyadic conversion of a finite f64.
pub fn from_f64(x: f64) -> Option<Weight> {
    Weight::from_float(x)
}

/// Best rational approximation of `x` with a bounded denominator, falling back
/// to the exact dyadic value when no small fraction is within `rel_tol`.
pub fn snap(x: f64, rel_tol: f64) -> Option<Weight> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(Weight::zero());
    }
    const MAX_DEN: i128 = 1 << 24;
    let target = x.abs();
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    let mut r = target;
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e18 {
            break;
        }
        let a = a as i128;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > MAX_DEN {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let approx = h1 as f64 / k1 as f64;
        if ((approx - target) / target).abs() <= rel_tol {
            let w = Weight::new(BigInt::from(h1), BigInt::from(k1));
            return Some(if x < 0.0 { -w } else { w });
        }
        let frac = r - r.floor();
        if frac == 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    from_f64(x)
}

/// `2^e` for a (possibly negative) integer exponent.
pub fn pow2(e: i64) -> Weight {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Weight::from_integer(p)
    } else {
        Weight::new(BigInt::one(), p)
    }
}

/// If `w` is an exact power of two, its exponent.
pub fn exact_log2(w: &Weight) -> Option<i64> {
    if !w.is_positive() {
        return None;
    }
    let is_pow2 = |n: &BigInt| n.is_positive() && (n & (n - BigInt::one())).is_zero();
    let (n, d) = (w.numer(), w.denom());
    if !is_pow2(n) || !is_pow2(d) {
        return None;
    }
    Some(n.bits() as i64 - d.bits() as i64)
}
