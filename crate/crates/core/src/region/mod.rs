//! Membership, boundary tracing, extremal values, slices and curvature of the
//! region `p(h, k) >= 0`.

mod boundary;
mod checks;
mod extrema;
mod slices;

pub use boundary::{log_grid, BoundarySample};
pub use checks::{ray_stays_inside, starlike_certificate, tangent_limit_check, TangentLimitReport};
pub use extrema::{ExtremaOptions, Extremum, ExtremumKind, MethodResult};
pub use slices::{DescartesProfile, EpsilonRoot, Regime, Slice, SliceKind};

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{int, rat, sign, ExactRational, MultiPoly};
use crate::polys::{certify_c_negativity, certify_phi_negativity, Derivation, CoefficientTables, T};

/// Reference values for the segment `h = 1/100`, known to about ten digits.
pub mod reference {
    pub const SEGMENT_H: f64 = 0.01;
    pub const ALPHA1: f64 = 0.000787776068;
    pub const ALPHA2: f64 = 0.0422764016;
    pub const BETA1: f64 = 0.000786885627;
    pub const BETA2: f64 = 0.0402782805;
    pub const EPSILON6: f64 = 0.0584537;
}

/// Every boundary point has `h` below this.
pub fn h_bound() -> ExactRational {
    rat(14, 100)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error("coordinates must be nonnegative")]
    NegativeInput,
    #[error("parameter must be positive")]
    NonPositiveParameter,
    #[error("Q vanishes inside the bracket at t = {t}")]
    DegenerateTangent { t: f64 },
    #[error("{kind} methods disagree: scan {scan:?} vs system {system:?}")]
    MethodDisagreement { kind: &'static str, scan: (f64, f64), system: (f64, f64) },
    #[error("h = {h} outside (0, 14/100)")]
    OutOfRange { h: f64 },
    #[error("the curve polynomials are not certified: {0}")]
    Uncertified(String),
    #[error("{0}")]
    NoConvergence(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Inside,
    Boundary,
    Outside,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionVerdict {
    pub status: Status,
    /// Exact sign of `p(h, k)`.
    pub p_sign: i8,
    pub point: (ExactRational, ExactRational),
}

/// The polynomials describing the curve, built once from certified tables.
#[derive(Debug, Clone)]
pub struct Curve {
    /// `p(h, k)`.
    pub p: MultiPoly,
    /// `rho(h, t) = p(h, t h) / h^8`.
    pub rho: MultiPoly,
    /// `d rho / dt`.
    pub q: MultiPoly,
    /// `d rho / dh`.
    pub r: MultiPoly,
    /// `t Q - h R`.
    pub s: MultiPoly,
    /// Curvature numerator, `N = 2 (t + 1) P`.
    pub curv_p: MultiPoly,
}

impl Curve {
    /// Builds the curve after checking the sign facts that make boundary
    /// brackets valid: `phi_0 > 0`, `phi_1..phi_5 < 0`, `rho(14/100, .) < 0`.
    pub fn certified(tables: &CoefficientTables, d: &Derivation) -> Result<Curve, RegionError> {
        for c in [certify_phi_negativity(tables, d), certify_c_negativity(tables, d)] {
            if !c.passed() {
                let w = c.witness.map(|w| w.summary()).unwrap_or_default();
                return Err(RegionError::Uncertified(format!("{}: {w}", c.name)));
            }
        }
        let rho = d.rho.clone().ok_or_else(|| RegionError::Uncertified("h^8 does not divide p(h,th)".into()))?;
        let parts = d.partials.clone().expect("partials follow rho");
        Ok(Curve {
            p: d.p.clone(),
            rho,
            q: parts.q,
            r: parts.r,
            s: parts.s,
            curv_p: tables.p_poly(),
        })
    }

    pub fn builtin() -> &'static Curve {
        static CELL: OnceLock<Curve> = OnceLock::new();
        CELL.get_or_init(|| {
            Curve::certified(CoefficientTables::builtin(), Derivation::builtin()).expect("shipped tables certify")
        })
    }

    /// Exact-sign membership test.
    pub fn classify(&self, h: &ExactRational, k: &ExactRational) -> Result<RegionVerdict, RegionError> {
        if *h < int(0) || *k < int(0) {
            return Err(RegionError::NegativeInput);
        }
        let p_sign = sign(&self.p.eval(&[h.clone(), k.clone()]));
        let status = match p_sign {
            1 => Status::Inside,
            0 => Status::Boundary,
            _ => Status::Outside,
        };
        Ok(RegionVerdict { status, p_sign, point: (h.clone(), k.clone()) })
    }

    fn rho_in_h(&self, t: &ExactRational) -> crate::arith::UniPoly {
        self.rho.restrict(T, t)
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Inside => "inside",
            Status::Boundary => "boundary",
            Status::Outside => "outside",
        })
    }
}
