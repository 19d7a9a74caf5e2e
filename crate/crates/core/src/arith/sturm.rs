use super::{sign, ExactRational, UniPoly};

/// Number of strict sign changes in a coefficient list, zeros skipped.
pub fn sign_variations(coeffs: &[ExactRational]) -> usize {
    count_changes(coeffs.iter().map(sign))
}

fn count_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Sturm chain `p, p', -rem(p, p'), ...`. Each member is replaced by its
/// primitive part, a positive multiple, so sign patterns are unchanged.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<UniPoly>,
}

pub fn sturm_chain(p: &UniPoly) -> SturmChain {
    assert!(!p.is_zero(), "Sturm chain of the zero polynomial");
    let mut chain = vec![p.primitive()];
    let d = p.derivative();
    if !d.is_zero() {
        chain.push(d.primitive());
    }
    while chain.len() >= 2 {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push((-&r).primitive());
    }
    SturmChain { chain }
}

impl SturmChain {
    pub fn polys(&self) -> &[UniPoly] {
        &self.chain
    }

    fn variations(&self, signs: impl Fn(&UniPoly) -> i8) -> usize {
        count_changes(self.chain.iter().map(signs))
    }

    pub fn variations_at(&self, x: &ExactRational) -> usize {
        self.variations(|p| p.sign_at(x))
    }

    /// Distinct real roots in the open interval `(a, b)`.
    pub fn count_open(&self, a: &ExactRational, b: &ExactRational) -> usize {
        assert!(a < b);
        let va = self.variations(|p| p.sign_right_of(a));
        let vb = self.variations(|p| p.sign_left_of(b));
        va.saturating_sub(vb)
    }

    /// Distinct real roots in `(a, +inf)`.
    pub fn count_above(&self, a: &ExactRational) -> usize {
        let va = self.variations(|p| p.sign_right_of(a));
        let vinf = self.variations(UniPoly::sign_at_pos_infinity);
        va.saturating_sub(vinf)
    }

    /// Distinct roots in `(0, +inf)`; the sign at `0+` is that of the
    /// lowest-order nonzero coefficient.
    pub fn count_positive(&self) -> usize {
        let v0 = self.variations(UniPoly::sign_at_zero_plus);
        let vinf = self.variations(UniPoly::sign_at_pos_infinity);
        v0.saturating_sub(vinf)
    }

    /// Distinct roots in `(-inf, 0)`.
    pub fn count_negative(&self) -> usize {
        let vneg = self.variations(UniPoly::sign_at_neg_infinity);
        let v0 = self.variations(|p| p.sign_left_of(&ExactRational::from_integer(0.into())));
        vneg.saturating_sub(v0)
    }

    /// All distinct real roots.
    pub fn count_real(&self) -> usize {
        let vneg = self.variations(UniPoly::sign_at_neg_infinity);
        let vinf = self.variations(UniPoly::sign_at_pos_infinity);
        vneg.saturating_sub(vinf)
    }
}

impl UniPoly {
    /// Distinct roots on `(0, +inf)` by Sturm's theorem.
    pub fn sturm_positive_root_count(&self) -> usize {
        sturm_chain(self).count_positive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn variations_skip_zeros() {
        let c: Vec<ExactRational> = [1, 0, -2, 0, 0, 3, 4].iter().map(|&v| int(v)).collect();
        assert_eq!(sign_variations(&c), 2);
        assert_eq!(sign_variations(&[]), 0);
        let pos: Vec<_> = (1..6).map(int).collect();
        assert_eq!(sign_variations(&pos), 0);
    }

    #[test]
    fn reference_sign_pattern_changes_twice() {
        let pattern = [-1, -1, 1, 1, 1, 1, 1, -1, -1, -1];
        let c: Vec<_> = pattern.iter().map(|&v| int(v)).collect();
        assert_eq!(sign_variations(&c), 2);
    }

    #[test]
    fn no_real_roots_for_sum_of_squares() {
        let p = UniPoly::from_ints(&[1, 0, 1]);
        let ch = sturm_chain(&p);
        assert_eq!(ch.count_positive(), 0);
        assert_eq!(ch.count_real(), 0);
    }

    #[test]
    fn counts_on_open_intervals() {
        // (x - 1)(x - 2)(x + 3)
        let p = &(&UniPoly::linear_root(int(1)) * &UniPoly::linear_root(int(2)))
            * &UniPoly::linear_root(int(-3));
        let ch = sturm_chain(&p);
        assert_eq!(ch.count_positive(), 2);
        assert_eq!(ch.count_negative(), 1);
        assert_eq!(ch.count_open(&int(0), &int(2)), 1);
        assert_eq!(ch.count_open(&int(1), &int(2)), 0);
        assert_eq!(ch.count_open(&rat(1, 2), &rat(5, 2)), 2);
        assert_eq!(ch.count_above(&int(1)), 1);
    }

    #[test]
    fn repeated_roots_count_once() {
        let p = &UniPoly::linear_root(int(1)).pow(2) * &UniPoly::linear_root(int(4));
        assert_eq!(sturm_chain(&p).count_positive(), 2);
    }
}
