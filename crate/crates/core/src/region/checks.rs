use super::{log_grid, BoundarySample, Curve, Status};
use crate::arith::{int, pow10_neg, rat, ExactRational};
use crate::polys::{Certificate, CertificateStatus, Witness};

/// Slopes of the boundary at `t = 10^-n` and `t = 10^n`, `n = 2..=6`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentLimitReport {
    pub small_t: Vec<(f64, f64)>,
    pub large_t: Vec<(f64, f64)>,
    pub certificate: Certificate,
}

fn tail_powers(negative: bool) -> Vec<ExactRational> {
    (2..=6u32)
        .map(|n| if negative { pow10_neg(n) } else { int(10i64.pow(n)) })
        .collect()
}

/// The boundary is tangent to the `h` axis at small `t` and turns towards the
/// `k` axis at large `t`: slopes fall below `1e-2` and rise above `1e3`,
/// monotonically along each tail.
pub fn tangent_limit_check(curve: &Curve) -> TangentLimitReport {
    let tol = pow10_neg(15);
    let slopes = |ts: Vec<ExactRational>| -> Vec<(f64, f64)> {
        ts.iter()
            .map(|t| {
                let s = curve.sample(t, &tol).expect("positive t");
                (s.t_f64(), curve.tangent_slope(&s))
            })
            .collect()
    };
    let small_t = slopes(tail_powers(true));
    let large_t = slopes(tail_powers(false));
    let small_ok = small_t.windows(2).all(|w| w[1].1 < w[0].1) && small_t.last().is_some_and(|s| s.1 < 1e-2);
    let large_ok = large_t.windows(2).all(|w| w[1].1 > w[0].1) && large_t.last().is_some_and(|s| s.1 > 1e3);
    let name = "tangent-limits";
    let certificate = if small_ok && large_ok {
        Certificate {
            name: name.into(),
            status: CertificateStatus::Pass,
            witness: None,
            detail: format!("slope {:.3e} at t=1e-6, {:.3e} at t=1e6", small_t[4].1, large_t[4].1),
        }
    } else {
        Certificate {
            name: name.into(),
            status: CertificateStatus::Fail,
            witness: Some(Witness::Note(format!("small-t slopes {small_t:?}; large-t slopes {large_t:?}"))),
            detail: String::new(),
        }
    };
    TangentLimitReport { small_t, large_t, certificate }
}

/// `rho(., t)` has exactly one positive root on each of `rays` log-spaced
/// rays in `[1e-4, 1e4]`.
pub fn starlike_certificate(curve: &Curve, rays: usize) -> Certificate {
    let name = "starlike";
    for t in log_grid(1e-4, 1e4, rays) {
        let count = curve.ray_root_count(&t);
        if count != 1 {
            return Certificate {
                name: name.into(),
                status: CertificateStatus::Fail,
                witness: Some(Witness::Point {
                    coords: vec![('t', t)],
                    detail: format!("{count} positive roots of rho(., t)"),
                }),
                detail: String::new(),
            };
        }
    }
    Certificate {
        name: name.into(),
        status: CertificateStatus::Pass,
        witness: None,
        detail: format!("one positive root on each of {rays} rays"),
    }
}

/// The points `j/(n+1)` of the way from the origin to the inner end of the
/// bracket are all inside.
pub fn ray_stays_inside(curve: &Curve, sample: &BoundarySample, n: usize) -> bool {
    (1..=n).all(|j| {
        let h = &sample.h.lo * rat(j as i64, n as i64 + 1);
        let k = &h * &sample.t;
        curve.classify(&h, &k).map(|v| v.status == Status::Inside).unwrap_or(false)
    })
}
