use std::fmt;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{Derivation, CoefficientTables, H, K, T, Y};
use crate::arith::{int, pow10_neg, rat, sturm_chain, ExactRational, MultiPoly, UniPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateStatus {
    Pass,
    Fail,
}

/// Evidence attached to a failed check.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Nonzero difference between the derived and the printed polynomial.
    Discrepancy(MultiPoly),
    /// A point where a claimed sign or bound breaks.
    Point { coords: Vec<(char, ExactRational)>, detail: String },
    Note(String),
}

impl Witness {
    pub fn summary(&self) -> String {
        match self {
            Witness::Discrepancy(p) => format!("discrepancy {}", p.summary(3)),
            Witness::Point { coords, detail } => {
                let at: Vec<String> = coords.iter().map(|(v, q)| format!("{v}={q}")).collect();
                format!("{detail} at ({})", at.join(", "))
            }
            Witness::Note(s) => s.clone(),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub name: String,
    pub status: CertificateStatus,
    pub witness: Option<Witness>,
    /// How a pass was obtained, e.g. which tier of a two-tier check.
    pub detail: String,
}

impl Certificate {
    fn pass(name: &str, detail: impl Into<String>) -> Self {
        Self { name: name.into(), status: CertificateStatus::Pass, witness: None, detail: detail.into() }
    }

    fn fail(name: &str, witness: Witness) -> Self {
        Self { name: name.into(), status: CertificateStatus::Fail, witness: Some(witness), detail: String::new() }
    }

    pub fn passed(&self) -> bool {
        self.status == CertificateStatus::Pass
    }
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Certificate", 4)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("status", &self.status)?;
        st.serialize_field("detail", &self.detail)?;
        st.serialize_field("witness", &self.witness.as_ref().map(Witness::summary))?;
        st.end()
    }
}

fn compare(name: &str, derived: &MultiPoly, printed: &MultiPoly, detail: &str) -> Certificate {
    let diff = derived - printed;
    if diff.is_zero() {
        Certificate::pass(name, detail)
    } else {
        Certificate::fail(name, Witness::Discrepancy(diff))
    }
}

fn need_rho<'a>(name: &str, d: &'a Derivation) -> Result<&'a MultiPoly, Certificate> {
    d.rho.as_ref().ok_or_else(|| {
        let low = MultiPoly::from_terms(
            d.p_th.vars(),
            d.p_th.terms().filter(|((a, _), _)| *a < 8).map(|(e, c)| (*e, c.clone())),
        );
        Certificate::fail(name, Witness::Discrepancy(low))
    })
}

/// `f(1 + h, 1 + h + k) = -sum xi_i(h) k^i`.
pub fn certify_xi(tables: &CoefficientTables, d: &Derivation) -> Certificate {
    compare("xi-table", &d.p, &tables.p_from_xi(), "exact")
}

/// `p(h, t h) = h^8 sum phi_i(t) h^i`, including the divisibility by `h^8`.
pub fn certify_phi(tables: &CoefficientTables, d: &Derivation) -> Certificate {
    let name = "phi-table";
    match need_rho(name, d) {
        Ok(rho) => compare(name, rho, &tables.rho_poly(), "exact; h^8 divides p(h,th)"),
        Err(c) => c,
    }
}

/// `t Q - h R = sum nu_j(t) h^j`.
pub fn certify_s(tables: &CoefficientTables, d: &Derivation) -> Certificate {
    let name = "s-table";
    if let Err(c) = need_rho(name, d) {
        return c;
    }
    let parts = d.partials.as_ref().expect("partials follow rho");
    compare(name, &parts.s, &tables.s_poly(), "exact")
}

/// `N = 2 (t + 1) sum mu_j(t) h^j`.
pub fn certify_p(tables: &CoefficientTables, d: &Derivation) -> Certificate {
    let name = "p-table";
    if let Err(c) = need_rho(name, d) {
        return c;
    }
    let parts = d.partials.as_ref().expect("partials follow rho");
    let vars = parts.n.vars();
    let factor = MultiPoly::from_terms(vars, [((0, 0), int(2)), ((0, 1), int(2))]);
    compare(name, &parts.n, &(&factor * &tables.p_poly()), "exact")
}

/// Numerator and denominator of `1 / (d/dh (dh/dt))` along the curve.
pub fn tangent_ratio(q: &MultiPoly, r: &MultiPoly) -> (MultiPoly, MultiPoly) {
    let r2 = r * r;
    let rq = r * q;
    let num = &r2 * q;
    let den = &(&(&(&r2 * &q.partial(T)) - &(&rq * &r.partial(T))) - &(&rq * &q.partial(H)))
        + &(&(q * q) * &r.partial(H));
    (num, den)
}

/// Tier (a): `F1(0,0) = 0`, `F2(0,0) = 32`. Tier (b): `F2 num(E) - F1 den(E)`
/// vanishes identically, or else `|F1/F2 - E| < 1e-8` on a fixed sample grid.
pub fn certify_f1f2(tables: &CoefficientTables, d: &Derivation) -> Certificate {
    let name = "f1-f2";
    let origin = [int(0), int(0)];
    let f1_0 = tables.f1.eval(&origin);
    let f2_0 = tables.f2.eval(&origin);
    if !f1_0.is_zero() || f2_0 != int(32) {
        return Certificate::fail(
            name,
            Witness::Point {
                coords: vec![('h', int(0)), ('t', int(0))],
                detail: format!("F1 = {f1_0}, F2 = {f2_0}"),
            },
        );
    }
    if let Err(c) = need_rho(name, d) {
        return c;
    }
    let parts = d.partials.as_ref().expect("partials follow rho");
    let (num, den) = tangent_ratio(&parts.q, &parts.r);
    let residual = &(&tables.f2 * &num) - &(&tables.f1 * &den);
    if residual.is_zero() {
        return Certificate::pass(name, "tier a exact; tier b exact identity");
    }
    let tol = pow10_neg(8);
    for i in 0..10 {
        for j in 0..10 {
            let point = [rat(2 * i + 1, 200), rat(2 * j + 1, 200)];
            let f2v = tables.f2.eval(&point);
            let dv = den.eval(&point);
            let bad = if f2v.is_zero() || dv.is_zero() {
                true
            } else {
                let gap = tables.f1.eval(&point) / f2v - num.eval(&point) / dv;
                gap.abs() >= tol
            };
            if bad {
                return Certificate::fail(
                    name,
                    Witness::Point {
                        coords: vec![('h', point[0].clone()), ('t', point[1].clone())],
                        detail: "|F1/F2 - E| >= 1e-8".into(),
                    },
                );
            }
        }
    }
    Certificate::pass(name, "tier a exact; tier b numeric at 1e-8 (identity residual nonzero)")
}

/// `156250000 rho(14/100, t) = sum c_k t^k`.
pub fn certify_c_table(tables: &CoefficientTables, d: &Derivation) -> Certificate {
    let name = "c-table";
    let rho = match need_rho(name, d) {
        Ok(r) => r,
        Err(c) => return c,
    };
    let derived = rho.restrict(H, &rat(14, 100)).scale(&int(156_250_000));
    let printed = UniPoly::new(tables.c.clone());
    let diff = &derived - &printed;
    if diff.is_zero() {
        Certificate::pass(name, "exact")
    } else {
        Certificate::fail(name, Witness::Discrepancy(MultiPoly::from_unipoly([H, T], T, &diff)))
    }
}

/// Sign on `(0, inf)` from a Sturm count of zero plus the sign at 1.
fn definite_sign(q: &UniPoly) -> Option<i8> {
    if q.is_zero() || sturm_chain(q).count_positive() != 0 {
        return None;
    }
    Some(q.sign_at(&int(1)))
}

/// `phi_1 .. phi_5 < 0` and `phi_0 > 0` on `(0, inf)`.
pub fn certify_phi_negativity(tables: &CoefficientTables, _d: &Derivation) -> Certificate {
    let name = "phi-negativity";
    for (i, phi) in tables.phi.iter().enumerate() {
        let want = if i == 0 { 1 } else { -1 };
        if definite_sign(phi) != Some(want) {
            let count = if phi.is_zero() { 0 } else { sturm_chain(phi).count_positive() };
            return Certificate::fail(
                name,
                Witness::Note(format!(
                    "phi[{i}]: {count} positive roots, value {} at t=1",
                    phi.eval(&int(1))
                )),
            );
        }
    }
    Certificate::pass(name, "Sturm count 0 and sign at t=1 for each phi")
}

/// `sum c_k t^k < 0` on `(0, inf)`, so `rho(14/100, t) < 0`.
pub fn certify_c_negativity(tables: &CoefficientTables, _d: &Derivation) -> Certificate {
    let name = "c-negativity";
    let q = UniPoly::new(tables.c.clone());
    match definite_sign(&q) {
        Some(-1) => Certificate::pass(name, "Sturm count 0, negative at t=1"),
        _ => Certificate::fail(
            name,
            Witness::Note(format!(
                "{} positive roots, value {} at t=1",
                if q.is_zero() { 0 } else { sturm_chain(&q).count_positive() },
                q.eval(&int(1))
            )),
        ),
    }
}

/// Floating-point check that `20 - 30t + 40t^5` stays positive, its minimum
/// on `t > 0` sitting at `t = (3/20)^(1/4)`.
pub fn certify_eta_minimum(_tables: &CoefficientTables, _d: &Derivation) -> Certificate {
    let name = "eta-minimum";
    let eta = |t: f64| 20.0 - 30.0 * t + 40.0 * t.powi(5);
    let t_star = (3.0f64 / 20.0).powf(0.25);
    let slope = -30.0 + 200.0 * t_star.powi(4);
    let scan_min = (1..=4000).map(|i| eta(i as f64 * 5e-4)).fold(f64::INFINITY, f64::min);
    let at_star = eta(t_star);
    if at_star > 0.0 && slope.abs() < 1e-9 && scan_min >= at_star - 1e-9 {
        Certificate::pass(name, format!("numeric: min {at_star:.6} at t={t_star:.6}"))
    } else {
        Certificate::fail(
            name,
            Witness::Point {
                coords: vec![('t', crate::arith::from_f64(t_star))],
                detail: format!("eta = {at_star}, scan min {scan_min}"),
            },
        )
    }
}

/// Degree bounds of the derived polynomials and `Q(0, t) = phi_0'(t)`.
pub fn certify_shape(tables: &CoefficientTables, d: &Derivation) -> Certificate {
    let name = "derivation-shape";
    let note = |s: String| Certificate::fail(name, Witness::Note(s));
    if d.f.degree_in(Y) != Some(9) {
        return note(format!("f has y-degree {:?}", d.f.degree_in(Y)));
    }
    match d.p.total_degree() {
        Some(deg) if deg <= 17 => {}
        other => return note(format!("p has total degree {other:?}")),
    }
    if d.p.degree_in(K) != Some(9) {
        return note(format!("p has k-degree {:?}", d.p.degree_in(K)));
    }
    let rho = match need_rho(name, d) {
        Ok(r) => r,
        Err(c) => return c,
    };
    if rho.degree_in(H) != Some(5) || rho.degree_in(T).is_none_or(|e| e > 9) {
        return note(format!("rho has degrees ({:?}, {:?})", rho.degree_in(H), rho.degree_in(T)));
    }
    let q0 = d.partials.as_ref().expect("partials follow rho").q.restrict(H, &int(0));
    let expected = UniPoly::from_ints(&[0, 8, 12, 20, 10, 6]);
    if q0 != tables.phi[0].derivative() || q0 != expected {
        let diff = &q0 - &expected;
        return Certificate::fail(name, Witness::Discrepancy(MultiPoly::from_unipoly([H, T], T, &diff)));
    }
    Certificate::pass(name, "degrees within bounds; Q(0,t) = phi0'(t)")
}

type CertFn = fn(&CoefficientTables, &Derivation) -> Certificate;

const ALL: [(&str, CertFn); 10] = [
    ("xi-table", certify_xi),
    ("phi-table", certify_phi),
    ("s-table", certify_s),
    ("p-table", certify_p),
    ("f1-f2", certify_f1f2),
    ("c-table", certify_c_table),
    ("phi-negativity", certify_phi_negativity),
    ("c-negativity", certify_c_negativity),
    ("eta-minimum", certify_eta_minimum),
    ("derivation-shape", certify_shape),
];

pub const CERTIFICATE_NAMES: [&str; 10] = [
    "xi-table",
    "phi-table",
    "s-table",
    "p-table",
    "f1-f2",
    "c-table",
    "phi-negativity",
    "c-negativity",
    "eta-minimum",
    "derivation-shape",
];

fn derivation_for(tables: &CoefficientTables) -> std::borrow::Cow<'static, Derivation> {
    if tables.zeta == CoefficientTables::builtin().zeta {
        std::borrow::Cow::Borrowed(Derivation::builtin())
    } else {
        std::borrow::Cow::Owned(Derivation::from_zeta(&tables.zeta))
    }
}

/// Runs every certificate, in a fixed order.
pub fn run_all(tables: &CoefficientTables) -> Vec<Certificate> {
    run_named(tables, &CERTIFICATE_NAMES).expect("known names")
}

/// Runs the named certificates in the given order. Unknown names are
/// returned as the error.
pub fn run_named(tables: &CoefficientTables, names: &[&str]) -> Result<Vec<Certificate>, String> {
    let mut picked = Vec::new();
    for n in names {
        let f = ALL.iter().find(|(m, _)| m == n).ok_or_else(|| n.to_string())?;
        picked.push(f.1);
    }
    let d = derivation_for(tables);
    Ok(picked.par_iter().map(|f| f(tables, &d)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_tables_pass_every_certificate() {
        let certs = run_all(CoefficientTables::builtin());
        assert_eq!(certs.len(), CERTIFICATE_NAMES.len());
        for c in &certs {
            assert!(c.passed(), "{} failed: {:?}", c.name, c.witness.as_ref().map(Witness::summary));
        }
        let f = certs.iter().find(|c| c.name == "f1-f2").unwrap();
        assert!(f.detail.contains("exact identity"));
    }

    #[test]
    fn names_line_up() {
        for (n, (m, _)) in CERTIFICATE_NAMES.iter().zip(ALL.iter()) {
            assert_eq!(n, m);
        }
        assert_eq!(run_named(CoefficientTables::builtin(), &["nope"]), Err("nope".into()));
    }

    #[test]
    fn derived_p_has_expected_extremes() {
        let d = Derivation::builtin();
        assert_eq!(d.p.coeff_of(K, 9), UniPoly::from_ints(&[-1, -3, -3, -1]));
        assert_eq!(d.f.coeff_of(Y, 0), UniPoly::monomial(int(1), 8));
        let rho = d.rho.as_ref().unwrap();
        assert_eq!(rho.coeff_of(H, 0).lowest_term().unwrap(), (2, &int(4)));
    }
}
