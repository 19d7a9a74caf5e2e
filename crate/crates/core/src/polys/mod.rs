//! The printed coefficient tables and the first-principles derivations that
//! check them.

mod certificates;
mod tables;

pub use certificates::{
    certify_c_negativity, certify_c_table, certify_eta_minimum, certify_f1f2, certify_p,
    certify_phi, certify_phi_negativity, certify_s, certify_shape, certify_xi, run_all, run_named,
    Certificate, CertificateStatus, Witness, CERTIFICATE_NAMES,
};
pub use tables::{parse_poly, Entry, CoefficientTables, TableError, H, K, T, X, Y};

use std::sync::OnceLock;

use crate::arith::{int, MultiPoly, UniPoly};

/// `f`, `p`, `rho` and the derived partials, rebuilt from the `zeta` table
/// alone.
#[derive(Debug, Clone)]
pub struct Derivation {
    /// `f(x, y) = sum zeta_i(x) y^i`.
    pub f: MultiPoly,
    /// `p(h, k) = f(1 + h, 1 + h + k)`.
    pub p: MultiPoly,
    /// `p(h, t h)` before division.
    pub p_th: MultiPoly,
    /// `p(h, t h) / h^8`, absent when the division is not exact.
    pub rho: Option<MultiPoly>,
    pub partials: Option<Partials>,
}

/// Partials of `rho` and the curvature numerator.
#[derive(Debug, Clone)]
pub struct Partials {
    /// `d rho / dt`.
    pub q: MultiPoly,
    /// `d rho / dh`.
    pub r: MultiPoly,
    /// `t Q - h R`.
    pub s: MultiPoly,
    /// `Q (S_h Q - S Q_h) - R (S_t Q - S Q_t)`.
    pub n: MultiPoly,
}

impl Derivation {
    pub fn from_zeta(zeta: &[UniPoly]) -> Derivation {
        let f = build_f(zeta);
        let hk = [H, K];
        let one = MultiPoly::constant(hk, int(1));
        let h = MultiPoly::var(hk, H);
        let k = MultiPoly::var(hk, K);
        let x_sub = &one + &h;
        let y_sub = &x_sub + &k;
        let p = f.substitute(&[(X, x_sub), (Y, y_sub)]);

        let ht = [H, T];
        let h2 = MultiPoly::var(ht, H);
        let th = &MultiPoly::var(ht, T) * &h2;
        let p_th = p.substitute(&[(H, h2), (K, th)]);
        let rho = p_th.divide_by_var_power(H, 8);
        let partials = rho.as_ref().map(Partials::of);
        Derivation { f, p, p_th, rho, partials }
    }

    /// Derivation from the shipped tables, computed once.
    pub fn builtin() -> &'static Derivation {
        static CELL: OnceLock<Derivation> = OnceLock::new();
        CELL.get_or_init(|| Derivation::from_zeta(&CoefficientTables::builtin().zeta))
    }
}

impl Partials {
    pub fn of(rho: &MultiPoly) -> Partials {
        let q = rho.partial(T);
        let r = rho.partial(H);
        let t = MultiPoly::var(rho.vars(), T);
        let h = MultiPoly::var(rho.vars(), H);
        let s = &(&t * &q) - &(&h * &r);
        let sh = s.partial(H);
        let st = s.partial(T);
        let qh = q.partial(H);
        let qt = q.partial(T);
        let first = &q * &(&(&sh * &q) - &(&s * &qh));
        let second = &r * &(&(&st * &q) - &(&s * &qt));
        let n = &first - &second;
        Partials { q, r, s, n }
    }
}

/// `f(x, y) = sum zeta_i(x) y^i` over `(x, y)`.
pub fn build_f(zeta: &[UniPoly]) -> MultiPoly {
    let xy = [X, Y];
    let mut out = MultiPoly::zero(xy);
    for (i, z) in zeta.iter().enumerate() {
        let term = &MultiPoly::from_unipoly(xy, X, z) * &MultiPoly::var(xy, Y).pow(i as u32);
        out = &out + &term;
    }
    out
}
