//! Exact rational arithmetic, sparse polynomials, Sturm chains and certified
//! real-root isolation.
//!
//! Every sign decision made anywhere in the crate goes through this module and
//! is evaluated without rounding.

mod multipoly;
mod roots;
mod sturm;
mod unipoly;

pub use multipoly::{MultiPoly, Var};
pub use roots::{
    decimal_cell, isolate_and_refine_root, isolate_roots, refine_root, Multiplicity, RootError, RootInterval,
};
pub use sturm::{sign_variations, sturm_chain, SturmChain};
pub use unipoly::UniPoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type ExactRational = BigRational;

/// `num / den` as an exact rational.
pub fn rat(num: i64, den: i64) -> ExactRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `10^-digits`.
pub fn pow10_neg(digits: u32) -> ExactRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits as usize))
}

/// Exact binary value of a finite float.
pub fn from_f64(x: f64) -> ExactRational {
    BigRational::from_float(x).expect("finite float")
}

/// Nearest float. Handles operands whose numerator and denominator both
/// overflow `f64` by shifting before dividing.
pub fn to_f64(q: &ExactRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() && (v != 0.0 || q.is_zero()) {
            return v;
        }
    }
    let n_bits = q.numer().bits() as i64;
    let d_bits = q.denom().bits() as i64;
    let shift = n_bits - d_bits - 60;
    let scaled = if shift > 0 {
        q / BigRational::from_integer(BigInt::one() << (shift as usize))
    } else {
        q * BigRational::from_integer(BigInt::one() << ((-shift) as usize))
    };
    let mantissa = scaled.to_f64().unwrap_or(0.0);
    mantissa * 2f64.powi(shift as i32)
}

/// Integer numerators of `qs` over their least common denominator.
pub(crate) fn over_common_denominator<'a>(
    qs: impl IntoIterator<Item = &'a ExactRational> + Clone,
) -> (Vec<BigInt>, BigInt) {
    use num_integer::Integer;
    let l = qs.clone().into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let nums = qs.into_iter().map(|q| q.numer() * (&l / q.denom())).collect();
    (nums, l)
}

/// `[b^0, b^1, ..., b^n]`.
pub(crate) fn powers(b: &BigInt, n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigInt::one());
    for i in 0..n {
        out.push(&out[i] * b);
    }
    out
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(q: &ExactRational) -> i8 {
    match q.cmp(&BigRational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Parses `"3"`, `"-0.0125"`, `"1/156250000"` or `"1e-7"` into an exact
/// rational (decimal input is read exactly, not through a float).
pub fn parse_rational(text: &str) -> Option<ExactRational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
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
    let all: String = format!("{whole}{frac}");
    let mut value = BigRational::from_integer(all.parse::<BigInt>().unwrap_or_default());
    let scale = exponent - frac.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

/// Closed rational interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInterval {
    pub lo: ExactRational,
    pub hi: ExactRational,
}

impl RationalInterval {
    pub fn new(lo: ExactRational, hi: ExactRational) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn width(&self) -> ExactRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> ExactRational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains(&self, q: &ExactRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.contains(&from_f64(x))
    }

    pub fn lo_f64(&self) -> f64 {
        to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        to_f64(&self.hi)
    }

    pub fn mid_f64(&self) -> f64 {
        to_f64(&self.midpoint())
    }

    /// Smallest interval covering both.
    pub fn hull(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.01"), Some(rat(1, 100)));
        assert_eq!(parse_rational("-14/100"), Some(rat(-7, 50)));
        assert_eq!(parse_rational("1e-7"), Some(rat(1, 10_000_000)));
        assert_eq!(parse_rational("2.5E2"), Some(int(250)));
        assert_eq!(parse_rational(".5"), Some(rat(1, 2)));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn float_conversion_survives_huge_operands() {
        let big = BigRational::new(
            num_traits::pow(BigInt::from(10), 400) * BigInt::from(3),
            num_traits::pow(BigInt::from(10), 400),
        );
        assert!((to_f64(&big) - 3.0).abs() < 1e-15);
        let tiny = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 200));
        assert!((to_f64(&tiny) / 1e-200 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hull_and_intersection() {
        let a = RationalInterval::new(rat(0, 1), rat(1, 2));
        let b = RationalInterval::new(rat(1, 4), rat(1, 1));
        assert!(a.intersects(&b));
        assert_eq!(a.hull(&b), RationalInterval::new(int(0), int(1)));
    }
}
