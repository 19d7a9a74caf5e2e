use serde::Serialize;

use super::{h_bound, Curve, RegionError};
use crate::arith::{
    decimal_cell, int, isolate_roots, pow10_neg, refine_root, sign, sign_variations, sturm_chain, ExactRational,
    Multiplicity, RootInterval, UniPoly,
};
use crate::polys::{H, K};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SliceKind {
    Empty,
    Double,
    Pair,
}

/// Positive roots of `p` along a vertical or horizontal line.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    pub kind: SliceKind,
    pub roots: Vec<RootInterval>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `xi_6(h) < 0`.
    BelowEpsilon6,
    /// `xi_6(h) = 0`.
    AtEpsilon6,
    /// `xi_6(h) > 0`.
    AboveEpsilon6,
}

/// Signs of the coefficients of `p(h, .)` at a fixed `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct DescartesProfile {
    pub h: ExactRational,
    /// Sign of `-xi_i(h)` for `i = 0..9`.
    pub signs: Vec<i8>,
    pub variations: usize,
    pub regime: Regime,
}

/// The positive root of `xi_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonRoot {
    pub index: usize,
    pub positive_roots: usize,
    /// Bracket of the positive root when there is exactly one.
    pub root: Option<RootInterval>,
    /// `xi_i` has no root on `(0, 14/100]`.
    pub above_h_bound: bool,
}

fn slice_of(q: &UniPoly, tol: &ExactRational) -> Slice {
    let bound = q.root_bound();
    if sturm_chain(q).count_positive() == 0 {
        return Slice { kind: SliceKind::Empty, roots: Vec::new() };
    }
    let roots: Vec<RootInterval> =
        isolate_roots(q, &int(0), &(bound + int(1))).iter().map(|r| refine_root(q, r, tol)).collect();
    let kind = match roots.as_slice() {
        [] => SliceKind::Empty,
        [r] if r.multiplicity_hint == Multiplicity::Even => SliceKind::Double,
        [_] => SliceKind::Double,
        _ => SliceKind::Pair,
    };
    Slice { kind, roots }
}

impl Curve {
    /// `{k > 0 : p(h, k) = 0}`, isolated and refined to `1e-12`.
    pub fn k_interval(&self, h: &ExactRational) -> Result<Slice, RegionError> {
        self.k_interval_tol(h, &pow10_neg(12))
    }

    pub fn k_interval_tol(&self, h: &ExactRational, tol: &ExactRational) -> Result<Slice, RegionError> {
        if *h <= int(0) {
            return Err(RegionError::NonPositiveParameter);
        }
        Ok(slice_of(&self.p.restrict(H, h), tol))
    }

    /// `{h > 0 : p(h, k) = 0}`, isolated and refined to `1e-12`.
    pub fn h_interval(&self, k: &ExactRational) -> Result<Slice, RegionError> {
        self.h_interval_tol(k, &pow10_neg(12))
    }

    pub fn h_interval_tol(&self, k: &ExactRational, tol: &ExactRational) -> Result<Slice, RegionError> {
        if *k <= int(0) {
            return Err(RegionError::NonPositiveParameter);
        }
        Ok(slice_of(&self.p.restrict(K, k), tol))
    }

    /// `xi_i(h)`, read off the derived `p` as minus the coefficient of `k^i`.
    pub fn xi(&self, i: usize) -> UniPoly {
        -&self.p.coeff_of(K, i as u32)
    }

    pub fn descartes_profile(&self, h: &ExactRational) -> Result<DescartesProfile, RegionError> {
        if *h <= int(0) || *h >= h_bound() {
            return Err(RegionError::OutOfRange { h: crate::arith::to_f64(h) });
        }
        let coeffs = self.p.restrict(H, h);
        let values: Vec<ExactRational> = (0..10).map(|i| coeffs.coeff(i)).collect();
        let regime = match sign(&self.xi(6).eval(h)) {
            -1 => Regime::BelowEpsilon6,
            0 => Regime::AtEpsilon6,
            _ => Regime::AboveEpsilon6,
        };
        Ok(DescartesProfile {
            h: h.clone(),
            signs: values.iter().map(sign).collect(),
            variations: sign_variations(&values),
            regime,
        })
    }

    /// The positive root of `xi_i` as a certified decimal cell of width
    /// `10^-digits`.
    pub fn epsilon_cell(&self, i: usize, digits: u32) -> Option<RootInterval> {
        let xi = self.xi(i);
        let found = isolate_roots(&xi, &int(0), &(xi.root_bound() + int(1)));
        match found.as_slice() {
            [only] => decimal_cell(&xi, only, digits),
            _ => None,
        }
    }

    /// Positive roots of `xi_2 .. xi_6`, each refined to `tol`.
    pub fn epsilon_roots(&self, tol: &ExactRational) -> Vec<EpsilonRoot> {
        (2..=6)
            .map(|i| {
                let xi = self.xi(i);
                let chain = sturm_chain(&xi);
                let positive_roots = chain.count_positive();
                let b = h_bound();
                let above_h_bound = chain.count_open(&int(0), &b) == 0 && xi.sign_at(&b) != 0;
                let root = (positive_roots == 1).then(|| {
                    let found = isolate_roots(&xi, &int(0), &(xi.root_bound() + int(1)));
                    refine_root(&xi, &found[0], tol)
                });
                EpsilonRoot { index: i, positive_roots, root, above_h_bound }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::region::reference::{BETA1, BETA2, EPSILON6};

    #[test]
    fn slice_at_one_hundredth() {
        let c = Curve::builtin();
        let s = c.k_interval(&rat(1, 100)).unwrap();
        assert_eq!(s.kind, SliceKind::Pair);
        assert!((s.roots[0].mid_f64() / BETA1 - 1.0).abs() < 1e-8);
        assert!((s.roots[1].mid_f64() / BETA2 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn two_sign_changes_past_epsilon5() {
        let c = Curve::builtin();
        let p = c.descartes_profile(&rat(12, 100)).unwrap();
        assert_eq!(p.signs, [-1, -1, 1, 1, 1, -1, -1, -1, -1, -1]);
        assert_eq!(p.variations, 2);
    }

    #[test]
    fn slice_beyond_the_bound_is_empty() {
        let c = Curve::builtin();
        assert_eq!(c.k_interval(&rat(14, 100)).unwrap().kind, SliceKind::Empty);
    }

    #[test]
    fn profiles_on_both_sides_of_epsilon6() {
        let c = Curve::builtin();
        let lo = c.descartes_profile(&rat(1, 100)).unwrap();
        assert_eq!(lo.variations, 2);
        assert_eq!(lo.regime, Regime::BelowEpsilon6);
        let hi = c.descartes_profile(&rat(1, 10)).unwrap();
        assert_eq!(hi.variations, 2);
        assert_eq!(hi.regime, Regime::AboveEpsilon6);
        assert!(matches!(c.descartes_profile(&rat(15, 100)), Err(RegionError::OutOfRange { .. })));
    }

    #[test]
    fn xi_and_epsilon_roots() {
        let c = Curve::builtin();
        assert_eq!(c.xi(9), UniPoly::from_ints(&[1, 3, 3, 1]));
        let eps = c.epsilon_roots(&pow10_neg(7));
        for e in &eps {
            assert_eq!(e.positive_roots, 1, "xi_{}", e.index);
        }
        // xi_2..xi_4 keep their root beyond 14/100; xi_5 does not (its root
        // is near 0.0968), and neither does xi_6.
        let above: Vec<bool> = eps.iter().map(|e| e.above_h_bound).collect();
        assert_eq!(above, [true, true, true, false, false]);
        let r5 = eps[3].root.as_ref().unwrap();
        assert!((r5.mid_f64() - 0.0968140277).abs() < 1e-7);
        let r6 = eps[4].root.as_ref().unwrap();
        assert!(r6.width() <= pow10_neg(7));
        assert!((r6.mid_f64() - EPSILON6).abs() < 1e-7);
        let cell = c.epsilon_cell(6, 7).unwrap();
        assert!(cell.width() <= pow10_neg(7));
        assert!(cell.contains_f64(EPSILON6));
    }
}
