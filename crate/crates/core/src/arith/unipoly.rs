use super::{int, sign, ExactRational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense univariate polynomial with exact coefficients, lowest degree first.
///
/// Trailing zeros are always trimmed, so the zero polynomial has no
/// coefficients and every other polynomial has a nonzero leading coefficient.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<ExactRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<ExactRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: ExactRational) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: ExactRational, k: usize) -> Self {
        let mut coeffs = vec![ExactRational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `x - r`.
    pub fn linear_root(r: ExactRational) -> Self {
        Self::new(vec![-r, ExactRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ExactRational {
        self.coeffs.get(k).cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn leading(&self) -> Option<&ExactRational> {
        self.coeffs.last()
    }

    /// Lowest-order nonzero coefficient with its degree.
    pub fn lowest_term(&self) -> Option<(usize, &ExactRational)> {
        self.coeffs.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        let (num, den) = self.eval_parts(x);
        ExactRational::new(num, den)
    }

    /// `p(x)` as an unreduced fraction with positive denominator, by Horner's
    /// rule on integers: with `x = n/d`, `sum C_i n^i d^(D-i)` over `L d^D`.
    fn eval_parts(&self, x: &ExactRational) -> (BigInt, BigInt) {
        let Some(deg) = self.degree() else {
            return (BigInt::zero(), BigInt::one());
        };
        let (c, l) = super::over_common_denominator(&self.coeffs);
        let (n, d) = (x.numer(), x.denom());
        let mut acc = c[deg].clone();
        let mut dpow = BigInt::one();
        for ci in c[..deg].iter().rev() {
            dpow *= d;
            acc = acc * n + ci * &dpow;
        }
        (acc, l * dpow)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let coeffs: Vec<f64> = self.coeffs.iter().map(super::to_f64).collect();
        coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn sign_at(&self, x: &ExactRational) -> i8 {
        match self.eval_parts(x).0.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    /// Sign just to the right of `x`: the sign of the first nonzero Taylor
    /// coefficient at `x`.
    pub fn sign_right_of(&self, x: &ExactRational) -> i8 {
        let mut d = self.clone();
        while !d.is_zero() {
            let s = d.sign_at(x);
            if s != 0 {
                return s;
            }
            d = d.derivative();
        }
        0
    }

    /// Sign just to the left of `x`.
    pub fn sign_left_of(&self, x: &ExactRational) -> i8 {
        let mut d = self.clone();
        let mut flip = 1;
        while !d.is_zero() {
            let s = d.sign_at(x);
            if s != 0 {
                return s * flip;
            }
            d = d.derivative();
            flip = -flip;
        }
        0
    }

    /// Sign as `x -> 0+`, read off the lowest-order nonzero coefficient.
    pub fn sign_at_zero_plus(&self) -> i8 {
        self.lowest_term().map_or(0, |(_, c)| sign(c))
    }

    pub fn sign_at_pos_infinity(&self) -> i8 {
        self.leading().map_or(0, sign)
    }

    pub fn sign_at_neg_infinity(&self) -> i8 {
        match self.degree() {
            None => 0,
            Some(d) => self.sign_at_pos_infinity() * if d % 2 == 0 { 1 } else { -1 },
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `p(q(x))`.
    pub fn compose(&self, q: &UniPoly) -> Self {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &UniPoly::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = UniPoly::constant(ExactRational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let d_deg = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ExactRational::zero(); rem.len().saturating_sub(d_deg)];
        while rem.len() > d_deg {
            let top = rem.len() - 1;
            let factor = &rem[top] / &lead;
            let shift = top - d_deg;
            if !factor.is_zero() {
                for (i, c) in divisor.coeffs.iter().enumerate() {
                    rem[shift + i] -= &factor * c;
                }
                quot[shift] = factor;
            }
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        self.div_rem(divisor).1
    }

    /// Exact quotient when `x^k` divides `self`.
    pub fn divide_by_x_power(&self, k: usize) -> Option<UniPoly> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return None;
        }
        Some(UniPoly::new(self.coeffs.iter().skip(k).cloned().collect()))
    }

    /// Same roots, positive scalar multiple with unit-content integer
    /// coefficients. Keeps Sturm chains from growing needlessly.
    pub fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        use num_integer::Integer;
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * ExactRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        UniPoly::new(
            ints.into_iter()
                .map(|c| ExactRational::from_integer(c / &g))
                .collect(),
        )
    }

    /// Bound on the absolute value of every real root (Cauchy).
    pub fn root_bound(&self) -> ExactRational {
        let lead = self.leading().expect("nonzero polynomial").abs();
        let mut m = ExactRational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let r = c.abs() / &lead;
            if r > m {
                m = r;
            }
        }
        m + ExactRational::one()
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![ExactRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn trims_and_reports_degree() {
        let p = UniPoly::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(UniPoly::from_ints(&[0, 0]).is_zero());
        assert_eq!(UniPoly::zero().degree(), None);
    }

    #[test]
    fn division_identity() {
        let a = UniPoly::from_ints(&[-1, 0, 3, 5, 2]);
        let b = UniPoly::from_ints(&[1, 1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn one_sided_signs_at_a_double_root() {
        // (x - 1)^2 is positive on both sides of 1; (x - 1)^3 flips.
        let sq = UniPoly::linear_root(int(1)).pow(2);
        let cube = UniPoly::linear_root(int(1)).pow(3);
        assert_eq!(sq.sign_right_of(&int(1)), 1);
        assert_eq!(sq.sign_left_of(&int(1)), 1);
        assert_eq!(cube.sign_right_of(&int(1)), 1);
        assert_eq!(cube.sign_left_of(&int(1)), -1);
    }

    #[test]
    fn compose_and_reflect() {
        let p = UniPoly::from_ints(&[0, 0, 1]); // x^2
        let q = UniPoly::from_ints(&[1, 1]); // x + 1
        assert_eq!(p.compose(&q), UniPoly::from_ints(&[1, 2, 1]));
        assert_eq!(UniPoly::from_ints(&[1, 2, 3]).reflect(), UniPoly::from_ints(&[1, -2, 3]));
    }

    #[test]
    fn primitive_part_keeps_sign() {
        let p = UniPoly::new(vec![rat(-1, 2), rat(3, 4)]);
        assert_eq!(p.primitive(), UniPoly::from_ints(&[-2, 3]));
    }

    #[test]
    fn cauchy_bound_covers_roots() {
        let p = &UniPoly::linear_root(int(7)) * &UniPoly::linear_root(int(-3));
        assert!(p.root_bound() > int(7));
    }
}
