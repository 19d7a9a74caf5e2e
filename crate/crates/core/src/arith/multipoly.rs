use super::{int, ExactRational, UniPoly};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Name of a polynomial variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub char);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sparse bivariate polynomial over an ordered pair of named variables.
///
/// Terms are keyed by `(e0, e1)`, the exponents of `vars[0]` and `vars[1]`;
/// zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: [Var; 2],
    terms: BTreeMap<(u32, u32), ExactRational>,
}

impl MultiPoly {
    pub fn zero(vars: [Var; 2]) -> Self {
        Self { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: [Var; 2], c: ExactRational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term((0, 0), c);
        p
    }

    /// The polynomial consisting of variable `v` alone.
    pub fn var(vars: [Var; 2], v: Var) -> Self {
        let idx = Self::index_in(&vars, v).expect("variable belongs to the pair");
        let mut p = Self::zero(vars);
        p.add_term(if idx == 0 { (1, 0) } else { (0, 1) }, ExactRational::one());
        p
    }

    pub fn from_terms(
        vars: [Var; 2],
        terms: impl IntoIterator<Item = ((u32, u32), ExactRational)>,
    ) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Lifts a univariate polynomial in `v` into the pair `vars`.
    pub fn from_unipoly(vars: [Var; 2], v: Var, u: &UniPoly) -> Self {
        let idx = Self::index_in(&vars, v).expect("variable belongs to the pair");
        Self::from_terms(
            vars,
            u.coeffs().iter().enumerate().map(|(i, c)| {
                let e = i as u32;
                (if idx == 0 { (e, 0) } else { (0, e) }, c.clone())
            }),
        )
    }

    fn index_in(vars: &[Var; 2], v: Var) -> Option<usize> {
        vars.iter().position(|&w| w == v)
    }

    pub fn vars(&self) -> [Var; 2] {
        self.vars
    }

    pub fn index_of(&self, v: Var) -> Option<usize> {
        Self::index_in(&self.vars, v)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ExactRational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e0: u32, e1: u32) -> ExactRational {
        self.terms.get(&(e0, e1)).cloned().unwrap_or_else(ExactRational::zero)
    }

    fn add_term(&mut self, e: (u32, u32), c: ExactRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(ExactRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        let idx = self.index_of(v)?;
        self.terms.keys().map(|&(a, b)| if idx == 0 { a } else { b }).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, b)| a + b).max()
    }

    /// Smallest exponent of `v` over all terms.
    pub fn min_degree_in(&self, v: Var) -> Option<u32> {
        let idx = self.index_of(v)?;
        self.terms.keys().map(|&(a, b)| if idx == 0 { a } else { b }).min()
    }

    /// Exact value, summed over integers: with `x = n1/d1`, `y = n2/d2` each
    /// term becomes `C n1^a d1^(A-a) n2^b d2^(B-b)` over `L d1^A d2^B`.
    pub fn eval(&self, point: &[ExactRational; 2]) -> ExactRational {
        if self.terms.is_empty() {
            return ExactRational::zero();
        }
        let (c, l) = super::over_common_denominator(self.terms.values());
        let a_max = self.terms.keys().map(|e| e.0).max().unwrap_or(0) as usize;
        let b_max = self.terms.keys().map(|e| e.1).max().unwrap_or(0) as usize;
        let table = |q: &ExactRational, top: usize| {
            let (pn, pd) = (super::powers(q.numer(), top), super::powers(q.denom(), top));
            let row: Vec<BigInt> = (0..=top).map(|i| &pn[i] * &pd[top - i]).collect();
            (row, pd[top].clone())
        };
        let (xs, dx) = table(&point[0], a_max);
        let (ys, dy) = table(&point[1], b_max);
        let mut acc = BigInt::zero();
        for (&(a, b), ci) in self.terms.keys().zip(&c) {
            acc += ci * &xs[a as usize] * &ys[b as usize];
        }
        ExactRational::new(acc, l * dx * dy)
    }

    pub fn eval_f64(&self, point: [f64; 2]) -> f64 {
        self.terms
            .iter()
            .map(|(&(a, b), c)| {
                super::to_f64(c) * point[0].powi(a as i32) * point[1].powi(b as i32)
            })
            .sum()
    }

    /// Coefficient of `v^power`, as a univariate polynomial in the other
    /// variable.
    pub fn coeff_of(&self, v: Var, power: u32) -> UniPoly {
        let idx = self.index_of(v).expect("variable belongs to the pair");
        let mut out: Vec<ExactRational> = Vec::new();
        for (&(a, b), c) in &self.terms {
            let (mine, other) = if idx == 0 { (a, b) } else { (b, a) };
            if mine == power {
                if out.len() <= other as usize {
                    out.resize(other as usize + 1, ExactRational::zero());
                }
                out[other as usize] = c.clone();
            }
        }
        UniPoly::new(out)
    }

    /// All coefficients of powers of `v`, lowest first, each a polynomial in
    /// the other variable.
    pub fn coefficients_in(&self, v: Var) -> Vec<UniPoly> {
        match self.degree_in(v) {
            None => Vec::new(),
            Some(d) => (0..=d).map(|k| self.coeff_of(v, k)).collect(),
        }
    }

    /// Fix `v = value`, leaving a univariate polynomial in the other variable.
    pub fn restrict(&self, v: Var, value: &ExactRational) -> UniPoly {
        let mut acc = UniPoly::zero();
        let mut power = ExactRational::one();
        let d = self.degree_in(v).unwrap_or(0);
        for k in 0..=d {
            let row = self.coeff_of(v, k);
            if !row.is_zero() {
                acc = &acc + &row.scale(&power);
            }
            power *= value;
        }
        acc
    }

    /// Univariate view when only `v` occurs.
    pub fn to_unipoly(&self, v: Var) -> Option<UniPoly> {
        let idx = self.index_of(v)?;
        let other_free = self
            .terms
            .keys()
            .all(|&(a, b)| if idx == 0 { b == 0 } else { a == 0 });
        other_free.then(|| self.coeff_of(self.vars[1 - idx], 0))
    }

    pub fn partial(&self, v: Var) -> MultiPoly {
        let idx = self.index_of(v).expect("variable belongs to the pair");
        let mut out = MultiPoly::zero(self.vars);
        for (&(a, b), c) in &self.terms {
            let e = if idx == 0 { a } else { b };
            if e == 0 {
                continue;
            }
            let key = if idx == 0 { (a - 1, b) } else { (a, b - 1) };
            out.add_term(key, c * int(e as i64));
        }
        out
    }

    /// Relabels the variables without touching the terms.
    pub fn relabel(&self, vars: [Var; 2]) -> MultiPoly {
        MultiPoly { vars, terms: self.terms.clone() }
    }

    pub fn scale(&self, c: &ExactRational) -> MultiPoly {
        MultiPoly::from_terms(self.vars, self.terms.iter().map(|(e, a)| (*e, a * c)))
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::constant(self.vars, ExactRational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Replaces each variable of `self` by a polynomial. All bindings must
    /// live over the same target variable pair, which becomes the pair of the
    /// result.
    pub fn substitute(&self, bindings: &[(Var, MultiPoly)]) -> MultiPoly {
        let lookup = |v: Var| {
            bindings
                .iter()
                .find(|(w, _)| *w == v)
                .map(|(_, p)| p)
                .unwrap_or_else(|| panic!("no binding for variable {v}"))
        };
        let b0 = lookup(self.vars[0]);
        let b1 = lookup(self.vars[1]);
        assert_eq!(b0.vars, b1.vars, "bindings must share a variable pair");
        let target = b0.vars;

        let mut pow0: HashMap<u32, MultiPoly> = HashMap::new();
        let mut pow1: HashMap<u32, MultiPoly> = HashMap::new();
        let power = |cache: &mut HashMap<u32, MultiPoly>, base: &MultiPoly, e: u32| {
            cache.entry(e).or_insert_with(|| base.pow(e)).clone()
        };
        let mut out = MultiPoly::zero(target);
        for (&(a, b), c) in &self.terms {
            let term = &power(&mut pow0, b0, a) * &power(&mut pow1, b1, b);
            out = &out + &term.scale(c);
        }
        out
    }

    /// Exact quotient by `v^k` when every term carries at least that power.
    pub fn divide_by_var_power(&self, v: Var, k: u32) -> Option<MultiPoly> {
        let idx = self.index_of(v)?;
        let mut out = MultiPoly::zero(self.vars);
        for (&(a, b), c) in &self.terms {
            let key = if idx == 0 {
                (a.checked_sub(k)?, b)
            } else {
                (a, b.checked_sub(k)?)
            };
            out.add_term(key, c.clone());
        }
        Some(out)
    }

    /// Short human-readable digest: term count and up to `n` leading terms.
    pub fn summary(&self, n: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let shown: Vec<String> = self
            .terms
            .iter()
            .take(n)
            .map(|(&(a, b), c)| format!("({c})*{}^{a}*{}^{b}", self.vars[0], self.vars[1]))
            .collect();
        let more = self.terms.len().saturating_sub(n);
        if more > 0 {
            format!("{} + ... ({} terms)", shown.join(" + "), self.terms.len())
        } else {
            shown.join(" + ")
        }
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{},{}]({self})", self.vars[0], self.vars[1])
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b), c) in &self.terms {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mag = c.abs();
            let mut parts = Vec::new();
            if !mag.is_one() || (a == 0 && b == 0) {
                parts.push(format!("{mag}"));
            }
            for (v, e) in [(self.vars[0], a), (self.vars[1], b)] {
                match e {
                    0 => {}
                    1 => parts.push(format!("{v}")),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "variable pairs differ");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "variable pairs differ");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "variable pairs differ");
        let mut acc: BTreeMap<(u32, u32), ExactRational> = BTreeMap::new();
        for (&(a0, b0), c0) in &self.terms {
            for (&(a1, b1), c1) in &rhs.terms {
                *acc.entry((a0 + a1, b0 + b1)).or_insert_with(ExactRational::zero) += c0 * c1;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MultiPoly { vars: self.vars, terms: acc }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::from_terms(self.vars, self.terms.iter().map(|(e, c)| (*e, -c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    const H: Var = Var('h');
    const T: Var = Var('t');

    fn ht() -> [Var; 2] {
        [H, T]
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let a = MultiPoly::var(ht(), H);
        let d = &a - &a;
        assert!(d.is_zero());
        assert_eq!(d.term_count(), 0);
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let c = MultiPoly::constant(ht(), rat(3, 7));
        assert!(c.partial(H).is_zero());
    }

    #[test]
    fn identity_substitution_is_a_no_op() {
        let vars = [Var('x'), Var('y')];
        let x = MultiPoly::var(vars, Var('x'));
        let y = MultiPoly::var(vars, Var('y'));
        let f = &(&x.pow(3) * &y) - &y.pow(2).scale(&rat(5, 2));
        let g = f.substitute(&[(Var('x'), x), (Var('y'), y)]);
        assert_eq!(f, g);
    }

    #[test]
    fn restrict_matches_eval() {
        let h = MultiPoly::var(ht(), H);
        let t = MultiPoly::var(ht(), T);
        let p = &(&h.pow(2) * &t) + &t.pow(3).scale(&int(-4));
        let at = rat(2, 3);
        let u = p.restrict(H, &at);
        assert_eq!(u.eval(&rat(5, 1)), p.eval(&[at.clone(), rat(5, 1)]));
        assert_eq!(p.coeff_of(H, 2), UniPoly::from_ints(&[0, 1]));
        assert_eq!(p.degree_in(T), Some(3));
    }

    #[test]
    fn division_by_variable_power() {
        let h = MultiPoly::var(ht(), H);
        let t = MultiPoly::var(ht(), T);
        let p = &h.pow(3) * &(&t + &h);
        assert_eq!(p.divide_by_var_power(H, 3), Some(&t + &h));
        assert_eq!(p.divide_by_var_power(H, 4), None);
    }
}
