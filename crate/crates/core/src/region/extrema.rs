use num_traits::Signed;
use serde::Serialize;

use super::{log_grid, Curve, RegionError};
use crate::arith::{
    from_f64, int, pow10_neg, sturm_chain, to_f64, ExactRational, MultiPoly, RationalInterval, UniPoly, Var,
};
use crate::polys::{H, K, T};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExtremumKind {
    #[serde(rename = "h_M")]
    HMax,
    #[serde(rename = "k_M")]
    KMax,
}

impl ExtremumKind {
    pub fn label(self) -> &'static str {
        match self {
            ExtremumKind::HMax => "h_M",
            ExtremumKind::KMax => "k_M",
        }
    }
}

/// Value and parameter brackets produced by one method.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult {
    pub value: RationalInterval,
    pub t_star: RationalInterval,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extremum {
    pub kind: ExtremumKind,
    /// Hull of both methods.
    pub value: RationalInterval,
    pub t_star: RationalInterval,
    /// Grid maximum refined by golden-section search.
    pub scan: MethodResult,
    /// Newton solution of the stationarity system, boxed by exact face signs.
    pub system: MethodResult,
    /// Strict local maxima seen on the scan grid.
    pub grid_local_maxima: usize,
}

#[derive(Debug, Clone)]
pub struct ExtremaOptions {
    pub tol: ExactRational,
    pub grid: usize,
    pub t_min: f64,
    pub t_max: f64,
}

impl Default for ExtremaOptions {
    fn default() -> Self {
        Self { tol: pow10_neg(12), grid: 400, t_min: 1e-3, t_max: 1e3 }
    }
}

/// Sign of `q` on all of `[a, b]`, if it is constant and nonzero.
fn definite_sign(q: &UniPoly, a: &ExactRational, b: &ExactRational) -> Option<i8> {
    if q.is_zero() {
        return None;
    }
    let sa = q.sign_at(a);
    if sa == 0 || q.sign_at(b) != sa || sturm_chain(q).count_open(a, b) > 0 {
        return None;
    }
    Some(sa)
}

/// Miranda's condition on the box `v x t`: `f1` has opposite constant signs
/// on the two `v` faces and `f2` on the two `t` faces, so both vanish
/// together somewhere inside.
fn miranda(f1: &MultiPoly, f2: &MultiPoly, v: Var, vb: &RationalInterval, tb: &RationalInterval) -> bool {
    let face = |f: &MultiPoly, var: Var, at: &ExactRational, range: &RationalInterval| {
        definite_sign(&f.restrict(var, at), &range.lo, &range.hi)
    };
    let opposite = |a: Option<i8>, b: Option<i8>| matches!((a, b), (Some(x), Some(y)) if x == -y);
    opposite(face(f1, v, &vb.lo, tb), face(f1, v, &vb.hi, tb))
        && opposite(face(f2, T, &tb.lo, vb), face(f2, T, &tb.hi, vb))
}

/// `t^5 g(k / t, t)` over `(k, t)` for `g` of `h`-degree at most 5.
fn to_kt(g: &MultiPoly) -> MultiPoly {
    MultiPoly::from_terms(
        [K, T],
        g.terms().map(|(&(a, b), c)| ((a, b + 5 - a), c.clone())),
    )
}

impl Curve {
    fn stationary_poly(&self, kind: ExtremumKind) -> &MultiPoly {
        match kind {
            ExtremumKind::HMax => &self.q,
            ExtremumKind::KMax => &self.s,
        }
    }

    fn objective(&self, kind: ExtremumKind, t: f64) -> Result<f64, RegionError> {
        let tq = from_f64(t);
        let h = self.boundary_h(&tq, &pow10_neg(17))?.midpoint();
        Ok(match kind {
            ExtremumKind::HMax => to_f64(&h),
            ExtremumKind::KMax => to_f64(&(h * tq)),
        })
    }

    fn scan(&self, kind: ExtremumKind, opt: &ExtremaOptions) -> Result<(MethodResult, usize, f64), RegionError> {
        let grid: Vec<f64> = log_grid(opt.t_min, opt.t_max, opt.grid).iter().map(to_f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&t| self.objective(kind, t)).collect::<Result<_, _>>()?;
        let local_maxima = (1..vals.len() - 1).filter(|&i| vals[i] > vals[i - 1] && vals[i] > vals[i + 1]).count();
        let best = (0..vals.len()).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).expect("nonempty grid");
        let mut a = grid[best.saturating_sub(1)].ln();
        let mut b = grid[(best + 1).min(grid.len() - 1)].ln();
        let g = (5f64.sqrt() - 1.0) / 2.0;
        let f = |u: f64| self.objective(kind, u.exp());
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (f(c)?, f(d)?);
        while b - a > 1e-11 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = f(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = f(d)?;
            }
        }
        let t_best = ((a + b) / 2.0).exp();
        let tq = from_f64(t_best);
        let hb = self.boundary_h(&tq, &(&opt.tol / int(10)))?;
        let value = match kind {
            ExtremumKind::HMax => hb,
            ExtremumKind::KMax => RationalInterval::new(&hb.lo * &tq, &hb.hi * &tq),
        };
        let t_star = RationalInterval::new(from_f64(a.exp()), from_f64(b.exp()));
        Ok((MethodResult { value, t_star }, local_maxima, t_best))
    }

    fn newton(&self, kind: ExtremumKind, h0: f64, t0: f64) -> Result<(f64, f64), RegionError> {
        let g = self.stationary_poly(kind);
        let (gh, gt) = (g.partial(H), g.partial(T));
        let residual = |h: f64, t: f64| {
            let (a, b) = (self.rho.eval_f64([h, t]), g.eval_f64([h, t]));
            (a, b, a.hypot(b))
        };
        let (mut h, mut t) = (h0, t0);
        for _ in 0..100 {
            let (f1, f2, norm) = residual(h, t);
            if norm == 0.0 {
                break;
            }
            let (a, b) = (self.r.eval_f64([h, t]), self.q.eval_f64([h, t]));
            let (c, d) = (gh.eval_f64([h, t]), gt.eval_f64([h, t]));
            let det = a * d - b * c;
            if det == 0.0 || !det.is_finite() {
                return Err(RegionError::NoConvergence(format!("{} Jacobian singular", kind.label())));
            }
            let dh = (d * f1 - b * f2) / det;
            let dt = (a * f2 - c * f1) / det;
            let mut lambda = 1.0;
            loop {
                let (nh, nt) = (h - lambda * dh, t - lambda * dt);
                if nh > 0.0 && nt > 0.0 && residual(nh, nt).2 < norm {
                    h = nh;
                    t = nt;
                    break;
                }
                lambda /= 2.0;
                if lambda < 1e-6 {
                    return Ok((h, t));
                }
            }
            if (lambda * dh).abs() <= 1e-17 * h && (lambda * dt).abs() <= 1e-17 * t {
                break;
            }
        }
        Ok((h, t))
    }

    fn system(&self, kind: ExtremumKind, h0: f64, t0: f64, tol: &ExactRational) -> Result<MethodResult, RegionError> {
        let (h, t) = self.newton(kind, h0, t0)?;
        let (f1, f2, v, centre) = match kind {
            ExtremumKind::HMax => (self.rho.clone(), self.q.clone(), H, from_f64(h)),
            ExtremumKind::KMax => (to_kt(&self.rho), to_kt(&self.s), K, from_f64(h) * from_f64(t)),
        };
        let tc = from_f64(t);
        let dv = tol / int(4);
        let vb = RationalInterval::new(&centre - &dv, &centre + &dv);
        // The v faces want a thin box in t, the t faces a wide one; walk the
        // aspect ratio until both hold.
        let mut dt = to_f64(&dv) * 1e-2;
        while dt < 0.1 * t {
            let dtq = from_f64(dt);
            let tb = RationalInterval::new(&tc - &dtq, &tc + &dtq);
            if miranda(&f1, &f2, v, &vb, &tb) {
                return Ok(MethodResult { value: vb, t_star: tb });
            }
            dt *= 10f64.sqrt();
        }
        Err(RegionError::NoConvergence(format!("{} box could not be certified", kind.label())))
    }

    pub fn extremum(&self, kind: ExtremumKind, opt: &ExtremaOptions) -> Result<Extremum, RegionError> {
        let (scan, local_maxima, t_best) = self.scan(kind, opt)?;
        let h0 = self.boundary_h(&from_f64(t_best), &pow10_neg(17))?.mid_f64();
        let system = self.system(kind, h0, t_best, &opt.tol)?;
        let slack = &opt.tol * int(10);
        let gap = (scan.value.midpoint() - system.value.midpoint()).abs();
        let widened = RationalInterval::new(&scan.value.lo - &slack, &scan.value.hi + &slack);
        if gap > slack || !widened.intersects(&system.value) {
            return Err(RegionError::MethodDisagreement {
                kind: kind.label(),
                scan: (scan.value.lo_f64(), scan.value.hi_f64()),
                system: (system.value.lo_f64(), system.value.hi_f64()),
            });
        }
        Ok(Extremum {
            kind,
            value: scan.value.hull(&system.value),
            t_star: scan.t_star.hull(&system.t_star),
            scan,
            system,
            grid_local_maxima: local_maxima,
        })
    }

    /// `h_M = max h` over the region.
    pub fn extremal_h(&self, tol: &ExactRational) -> Result<Extremum, RegionError> {
        self.extremum(ExtremumKind::HMax, &ExtremaOptions { tol: tol.clone(), ..Default::default() })
    }

    /// `k_M = max k` over the region.
    pub fn extremal_k(&self, tol: &ExactRational) -> Result<Extremum, RegionError> {
        self.extremum(ExtremumKind::KMax, &ExtremaOptions { tol: tol.clone(), ..Default::default() })
    }

    /// Exact signs of the stationarity polynomial (`Q` for `h_M`, `S` for
    /// `k_M`) at the four corners of the system box. Both signs must occur.
    pub fn stationarity_straddles(&self, e: &Extremum) -> bool {
        let g = self.stationary_poly(e.kind);
        let mut signs = Vec::new();
        for v in [&e.system.value.lo, &e.system.value.hi] {
            for t in [&e.system.t_star.lo, &e.system.t_star.hi] {
                let h = match e.kind {
                    ExtremumKind::HMax => v.clone(),
                    ExtremumKind::KMax => v / t,
                };
                signs.push(crate::arith::sign(&g.eval(&[h, t.clone()])));
            }
        }
        signs.contains(&1) && signs.contains(&-1)
    }
}
