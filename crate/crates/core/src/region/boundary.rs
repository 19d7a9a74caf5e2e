use num_traits::Zero;
use rayon::prelude::*;

use super::{h_bound, Curve, RegionError};
use crate::arith::{
    from_f64, int, parse_rational, pow10_neg, sturm_chain, to_f64, ExactRational, RationalInterval,
};
use crate::polys::T;

/// One traced point of the boundary curve.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySample {
    pub t: ExactRational,
    /// Certified bracket of the boundary `h` on the ray `k = t h`.
    pub h: RationalInterval,
    /// `t * h`, bracket endpoint by endpoint.
    pub k: RationalInterval,
    /// `dk/dh = S / Q` at the bracket midpoint.
    pub slope: f64,
    pub curvature: f64,
}

impl BoundarySample {
    pub fn t_f64(&self) -> f64 {
        to_f64(&self.t)
    }

    pub fn h_mid(&self) -> f64 {
        self.h.mid_f64()
    }

    pub fn k_mid(&self) -> f64 {
        self.k.mid_f64()
    }
}

/// `n` log-spaced positive rationals from `t_min` to `t_max`, each rounded
/// to twelve significant digits so that printed grids read back exactly.
pub fn log_grid(t_min: f64, t_max: f64, n: usize) -> Vec<ExactRational> {
    assert!(t_min > 0.0 && t_max >= t_min && n > 0);
    let (a, b) = (t_min.ln(), t_max.ln());
    (0..n)
        .map(|i| {
            let u = if n == 1 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 };
            let v = if i == 0 { t_min } else if i + 1 == n { t_max } else { u.exp() };
            parse_rational(&format!("{v:.11e}")).expect("formatted float parses")
        })
        .collect()
}

impl Curve {
    /// Bracket of the unique positive root of `rho(., t)`, with
    /// `width <= tol * hi` (so also `width <= tol`).
    pub fn boundary_h(&self, t: &ExactRational, tol: &ExactRational) -> Result<RationalInterval, RegionError> {
        if *t <= int(0) {
            return Err(RegionError::NonPositiveParameter);
        }
        let q = self.rho_in_h(t);
        let mut hi = h_bound();
        let mut lo = &hi / int(2);
        loop {
            match q.sign_at(&lo) {
                0 => return Ok(RationalInterval::new(lo.clone(), lo)),
                1 => break,
                _ => {
                    hi = lo.clone();
                    lo = &lo / int(2);
                }
            }
        }
        while &hi - &lo > tol * &hi {
            let m = (&lo + &hi) / int(2);
            match q.sign_at(&m) {
                0 => return Ok(RationalInterval::new(m.clone(), m)),
                1 => lo = m,
                _ => hi = m,
            }
        }
        Ok(RationalInterval::new(lo, hi))
    }

    /// `S / Q` at `(h, t)`.
    pub fn slope_at(&self, h: &ExactRational, t: &ExactRational) -> f64 {
        let pt = [h.clone(), t.clone()];
        let q = self.q.eval(&pt);
        let s = self.s.eval(&pt);
        if q.is_zero() {
            return if s.is_zero() { f64::NAN } else { f64::INFINITY.copysign(to_f64(&s)) };
        }
        to_f64(&(s / q))
    }

    /// `2 (t + 1) |P| / (Q^2 + S^2)^(3/2)` at `(h, t)`.
    pub fn curvature_at(&self, h: &ExactRational, t: &ExactRational) -> f64 {
        let pt = [h.clone(), t.clone()];
        let q = self.q.eval(&pt);
        let s = self.s.eval(&pt);
        let num = (t + int(1)) * int(2) * self.curv_p.eval(&pt);
        let norm2 = &q * &q + &s * &s;
        if norm2.is_zero() {
            return f64::NAN;
        }
        let ratio = to_f64(&(num / &norm2)).abs();
        ratio / to_f64(&norm2).sqrt()
    }

    pub fn sample(&self, t: &ExactRational, tol: &ExactRational) -> Result<BoundarySample, RegionError> {
        let h = self.boundary_h(t, tol)?;
        let mid = h.midpoint();
        let k = RationalInterval::new(t * &h.lo, t * &h.hi);
        Ok(BoundarySample {
            t: t.clone(),
            slope: self.slope_at(&mid, t),
            curvature: self.curvature_at(&mid, t),
            h,
            k,
        })
    }

    /// Samples of the boundary, one per grid value, in grid order.
    pub fn trace(&self, t_grid: &[ExactRational], tol: &ExactRational) -> Result<Vec<BoundarySample>, RegionError> {
        t_grid.par_iter().map(|t| self.sample(t, tol)).collect()
    }

    /// Default trace: 512 log-spaced `t` in `[1e-4, 1e4]`, tolerance `1e-12`.
    pub fn default_trace(&self) -> Vec<BoundarySample> {
        self.trace(&log_grid(1e-4, 1e4, 512), &pow10_neg(12)).expect("grid is positive")
    }

    /// Curvature at a traced sample; rejects samples whose bracket contains a
    /// zero of `Q(., t)`.
    pub fn curvature(&self, sample: &BoundarySample) -> Result<f64, RegionError> {
        let q = self.q.restrict(T, &sample.t);
        let lo = &sample.h.lo;
        let hi = &sample.h.hi;
        let bad = if q.is_zero() {
            true
        } else {
            let touches = q.sign_at(lo) == 0 || q.sign_at(hi) == 0;
            touches || (lo < hi && sturm_chain(&q).count_open(lo, hi) > 0)
        };
        if bad {
            return Err(RegionError::DegenerateTangent { t: sample.t_f64() });
        }
        Ok(self.curvature_at(&sample.h.midpoint(), &sample.t))
    }

    /// `S / Q` at a traced sample.
    pub fn tangent_slope(&self, sample: &BoundarySample) -> f64 {
        self.slope_at(&sample.h.midpoint(), &sample.t)
    }

    /// Curvature from second differences of the boundary parametrised by
    /// `u = ln t`, with step `du`.
    pub fn curvature_finite_difference(&self, t: f64, du: f64) -> Result<f64, RegionError> {
        let tol = pow10_neg(18);
        let point = |u: f64| -> Result<(f64, f64), RegionError> {
            let tq = from_f64(t * u.exp());
            let h = self.boundary_h(&tq, &tol)?.midpoint();
            Ok((to_f64(&h), to_f64(&(&h * &tq))))
        };
        let (h0, k0) = point(-du)?;
        let (h1, k1) = point(0.0)?;
        let (h2, k2) = point(du)?;
        let (dh, dk) = ((h2 - h0) / (2.0 * du), (k2 - k0) / (2.0 * du));
        let (ddh, ddk) = ((h2 - 2.0 * h1 + h0) / (du * du), (k2 - 2.0 * k1 + k0) / (du * du));
        Ok((dh * ddk - dk * ddh).abs() / (dh * dh + dk * dk).powf(1.5))
    }

    /// `rho` restricted to the ray `k = t h`, as a polynomial in `h`.
    pub fn ray_polynomial(&self, t: &ExactRational) -> crate::arith::UniPoly {
        self.rho.restrict(T, t)
    }

    /// Distinct positive roots of `rho(., t)`.
    pub fn ray_root_count(&self, t: &ExactRational) -> usize {
        sturm_chain(&self.ray_polynomial(t)).count_positive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::region::reference::{BETA1, SEGMENT_H};

    #[test]
    fn grid_endpoints_are_exact() {
        let g = log_grid(1e-4, 1e4, 9);
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], pow10_neg(4));
        assert_eq!(g[4], int(1));
        assert_eq!(g[8], int(10000));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn boundary_on_the_lower_segment_ray() {
        let c = Curve::builtin();
        let t = from_f64(BETA1 / SEGMENT_H);
        let h = c.boundary_h(&t, &pow10_neg(12)).unwrap();
        assert!((h.mid_f64() - SEGMENT_H).abs() < 1e-8, "{}", h.mid_f64());
        assert!(h.width() <= pow10_neg(12));
    }

    #[test]
    fn curve_returns_to_the_origin() {
        let c = Curve::builtin();
        let tol = pow10_neg(12);
        assert!(c.boundary_h(&int(1_000_000), &tol).unwrap().hi < pow10_neg(3));
        assert!(c.boundary_h(&pow10_neg(6), &tol).unwrap().hi < pow10_neg(2));
        assert_eq!(c.boundary_h(&int(0), &tol), Err(RegionError::NonPositiveParameter));
    }

    #[test]
    fn bracket_splits_inside_from_outside() {
        let c = Curve::builtin();
        let t = rat(3, 2);
        let h = c.boundary_h(&t, &pow10_neg(10)).unwrap();
        let inside = c.classify(&h.lo, &(&t * &h.lo)).unwrap();
        let outside = c.classify(&h.hi, &(&t * &h.hi)).unwrap();
        assert_eq!(inside.p_sign, 1);
        assert_eq!(outside.p_sign, -1);
    }
}
