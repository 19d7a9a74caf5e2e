//! Stampfli's subnormal completion of three weights.
//!
//! Everything is kept in squared weights so the recursion stays rational.

use std::sync::RwLock;

use num_traits::Zero;
use thiserror::Error;

use crate::arith::{
    int, isolate_and_refine_root, pow10_neg, ExactRational, RationalInterval, RootInterval, UniPoly,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletionError {
    #[error("squared weights must satisfy 0 < a0 < a1 < a2, got ({a0}, {a1}, {a2})")]
    DegenerateTriple { a0: String, a1: String, a2: String },
}

/// `(Psi0, Psi1)` for the squared triple `(a0, a1, a2)`, so that the
/// completion continues with `a_{n+1} = Psi1 + Psi0 / a_n`.
pub fn psi_constants(
    a0: &ExactRational,
    a1: &ExactRational,
    a2: &ExactRational,
) -> Result<(ExactRational, ExactRational), CompletionError> {
    if !(ExactRational::zero() < *a0 && a0 < a1 && a1 < a2) {
        return Err(CompletionError::DegenerateTriple {
            a0: a0.to_string(),
            a1: a1.to_string(),
            a2: a2.to_string(),
        });
    }
    let gap = a1 - a0;
    let psi0 = -(a0 * a1 * (a2 - a1)) / &gap;
    let psi1 = a1 * (a2 - a0) / &gap;
    Ok((psi0, psi1))
}

/// Squared weights of `1, (1, sqrt(x), sqrt(y))^`: the prefix `[1, 1, x, y]`
/// followed by the completion of the triple `(1, x, y)`.
#[derive(Debug)]
pub struct WeightSequence {
    prefix_sq: Vec<ExactRational>,
    psi0: ExactRational,
    psi1: ExactRational,
    memo: RwLock<Vec<ExactRational>>,
}

impl Clone for WeightSequence {
    fn clone(&self) -> Self {
        Self {
            prefix_sq: self.prefix_sq.clone(),
            psi0: self.psi0.clone(),
            psi1: self.psi1.clone(),
            memo: RwLock::new(self.memo.read().expect("memo lock").clone()),
        }
    }
}

impl WeightSequence {
    pub fn new(x: ExactRational, y: ExactRational) -> Result<Self, CompletionError> {
        let (psi0, psi1) = psi_constants(&int(1), &x, &y)?;
        let prefix_sq = vec![int(1), int(1), x, y];
        Ok(Self { memo: RwLock::new(prefix_sq.clone()), prefix_sq, psi0, psi1 })
    }

    /// `x = 1 + h`, `y = 1 + h + k`.
    pub fn from_hk(h: &ExactRational, k: &ExactRational) -> Result<Self, CompletionError> {
        let x = int(1) + h;
        let y = &x + k;
        Self::new(x, y)
    }

    pub fn prefix_sq(&self) -> &[ExactRational] {
        &self.prefix_sq
    }

    pub fn psi0(&self) -> &ExactRational {
        &self.psi0
    }

    pub fn psi1(&self) -> &ExactRational {
        &self.psi1
    }

    /// Squared weight `n`.
    pub fn weight_sq(&self, n: usize) -> ExactRational {
        if let Some(v) = self.memo.read().expect("memo lock").get(n) {
            return v.clone();
        }
        let mut memo = self.memo.write().expect("memo lock");
        while memo.len() <= n {
            let last = memo.last().expect("prefix is nonempty");
            let next = &self.psi1 + &self.psi0 / last;
            memo.push(next);
        }
        memo[n].clone()
    }

    /// Squared weights `0..n`.
    pub fn first(&self, n: usize) -> Vec<ExactRational> {
        if n > 0 {
            self.weight_sq(n - 1);
        }
        self.memo.read().expect("memo lock")[..n].to_vec()
    }

    /// Bracket of width at most `1e-12` around the limit of the squared
    /// weights, the larger root of `L^2 - Psi1 L - Psi0`.
    pub fn limit_sq(&self) -> RationalInterval {
        let q = UniPoly::new(vec![-self.psi0.clone(), -self.psi1.clone(), int(1)]);
        // q(a2) <= 0 < q(Psi1): the larger root lies in [a2, Psi1].
        let a2 = self.prefix_sq[3].clone();
        let bracket = RootInterval::new(a2, self.psi1.clone());
        let r = isolate_and_refine_root(&q, &bracket, &pow10_neg(12)).expect("completion limit is bracketed");
        RationalInterval::new(r.lo, r.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_rational, rat, to_f64};
    use rand::{Rng, SeedableRng};

    #[test]
    fn psi_for_one_two_three() {
        let (p0, p1) = psi_constants(&int(1), &int(2), &int(3)).unwrap();
        assert_eq!(p0, int(-2));
        assert_eq!(p1, int(4));
    }

    #[test]
    fn flat_triple_is_rejected() {
        assert!(matches!(
            psi_constants(&int(1), &int(1), &int(2)),
            Err(CompletionError::DegenerateTriple { .. })
        ));
        assert!(psi_constants(&int(0), &int(1), &int(2)).is_err());
        assert!(WeightSequence::new(int(2), int(2)).is_err());
    }

    #[test]
    fn random_triples_continue_upwards() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let h = rat(rng.gen_range(1..200), 1000);
            let k = rat(rng.gen_range(1..200), 1000);
            let x = int(1) + &h;
            let y = &x + &k;
            let (p0, p1) = psi_constants(&int(1), &x, &y).unwrap();
            assert!(p0 < int(0) && p1 > int(0));
            assert!(&p1 + &p0 / &y >= y);
        }
    }

    #[test]
    fn first_generated_term() {
        let w = WeightSequence::new(int(2), int(3)).unwrap();
        assert_eq!(w.weight_sq(0), int(1));
        assert_eq!(w.weight_sq(3), int(3));
        assert_eq!(w.weight_sq(4), rat(10, 3));
        // y = Psi1 + Psi0 / x also holds, so the prefix is itself on the orbit.
        assert_eq!(w.psi1() + w.psi0() / int(2), int(3));
    }

    #[test]
    fn limit_of_one_two_three() {
        let w = WeightSequence::new(int(2), int(3)).unwrap();
        let l = w.limit_sq();
        assert!(l.width() <= pow10_neg(12));
        assert!(l.contains_f64(2.0 + 2f64.sqrt()) || (l.mid_f64() - (2.0 + 2f64.sqrt())).abs() < 1e-12);
        for n in 2..60 {
            assert!(w.weight_sq(n) < l.hi);
        }
    }

    #[test]
    fn monotone_and_bounded() {
        let w = WeightSequence::new(parse_rational("1.21").unwrap(), parse_rational("1.44").unwrap()).unwrap();
        let seq = w.first(51);
        for n in 2..50 {
            assert!(seq[n + 1] > seq[n], "not increasing at {n}");
        }
        for n in 4..49 {
            let d0 = &seq[n + 1] - &seq[n];
            let d1 = &seq[n + 2] - &seq[n + 1];
            assert!(d1 < d0, "increments do not contract at {n}");
        }
        assert!(w.weight_sq(100) < w.limit_sq().hi);
    }

    #[test]
    fn near_flat_limit_approaches_a2() {
        let mut last = f64::INFINITY;
        for e in [4u32, 6, 8] {
            let eps = pow10_neg(e);
            let a2 = int(1) + &eps * int(2);
            let w = WeightSequence::new(int(1) + &eps, a2.clone()).unwrap();
            let gap = to_f64(&(w.limit_sq().midpoint() - &a2));
            assert!(gap > 0.0 && gap < 2.0 * to_f64(&eps).sqrt(), "gap {gap} at eps 1e-{e}");
            assert!(gap < last);
            last = gap;
        }
    }
}
