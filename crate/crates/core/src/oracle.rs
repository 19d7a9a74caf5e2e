//! Floating-point evidence for hyponormality of `T + s T^m` on finite
//! truncations of the completed weighted shift.
//!
//! The self-commutator of `A = T + s T^m` is banded with a main diagonal and
//! one band at distance `m - 1`. Its entries are assembled from the weight
//! increments `u_n - u_{n-1}` directly, so no entry is a difference of nearly
//! equal floats:
//!
//! ```text
//! d_n = du_n + s^2 * sum_{j<m} (u_i ... u_{i+m-2}) (du_i + ... + du_{i+m-1}),  i = n - j
//! c_n = s * sqrt(u_n ... u_{n+m-2}) * (du_n + ... + du_{n+m-1})
//! ```
//!
//! The band splits the `(N-m)`-square leading block into `m - 1` tridiagonal
//! chains. Each chain is rescaled by its diagonal (a congruence, so eigenvalue
//! signs are preserved) to unit diagonal with off-diagonal
//! `sqrt(c_n^2 / (d_n d_{n+m-1}))`, computed in logarithms. The verdict uses
//! the smallest eigenvalue of the rescaled chains.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{from_f64, to_f64, ExactRational};
use crate::completion::WeightSequence;
use crate::region::{BoundarySample, Curve, Status};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("weights must satisfy 1 < x < y (got h = {h}, k = {k})")]
    BadWeights { h: f64, k: f64 },
    #[error("power must be 2 or 3, got {0}")]
    BadPower(usize),
    #[error("dimension {dim} too small for power {power} (need at least power + 5)")]
    DimTooSmall { dim: usize, power: usize },
    #[error("s must be finite and nonnegative, got {0}")]
    BadShift(f64),
}

/// Violation threshold on the rescaled smallest eigenvalue.
pub const TOL_VIOLATION: f64 = 1e-8;

/// First `dim` weights of the shift and the logarithms needed to assemble the
/// self-commutator.
#[derive(Debug, Clone)]
pub struct TruncatedShift {
    pub dim: usize,
    pub power: usize,
    /// `sqrt(u_n)`, `n < dim`.
    pub weights: Vec<f64>,
    h: f64,
    k: f64,
    log_u: Vec<f64>,
    /// `ln(u_n - u_{n-1})`, with `u_{-1} = 0`; `-inf` where the increment is 0.
    log_du: Vec<f64>,
}

fn log_sum_exp(terms: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = terms.into_iter().filter(|x| *x > f64::NEG_INFINITY).collect();
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + v.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

impl TruncatedShift {
    fn check(dim: usize, power: usize) -> Result<(), OracleError> {
        if !(2..=3).contains(&power) {
            return Err(OracleError::BadPower(power));
        }
        if dim < power + 5 {
            return Err(OracleError::DimTooSmall { dim, power });
        }
        Ok(())
    }

    /// Shift for `x = 1 + h`, `y = 1 + h + k`.
    pub fn from_hk(h: f64, k: f64, power: usize, dim: usize) -> Result<Self, OracleError> {
        if !(h > 0.0 && k > 0.0 && h.is_finite() && k.is_finite()) {
            return Err(OracleError::BadWeights { h, k });
        }
        Self::check(dim, power)?;
        let w = WeightSequence::from_hk(&crate::arith::from_f64(h), &crate::arith::from_f64(k))
            .map_err(|_| OracleError::BadWeights { h, k })?;
        Ok(Self::from_sequence(&w, power, dim))
    }

    /// Shift for squared weights `1, 1, x, y, ...`.
    pub fn from_xy(x: f64, y: f64, power: usize, dim: usize) -> Result<Self, OracleError> {
        if !(x > 1.0 && y > x) {
            return Err(OracleError::BadWeights { h: x - 1.0, k: y - x });
        }
        Self::check(dim, power)?;
        let w = WeightSequence::new(crate::arith::from_f64(x), crate::arith::from_f64(y))
            .map_err(|_| OracleError::BadWeights { h: x - 1.0, k: y - x })?;
        Ok(Self::from_sequence(&w, power, dim))
    }

    /// Takes the prefix and `Psi0` exactly from `w`, then runs the increment
    /// recursion `du_{n+1} = -Psi0 du_n / (u_n u_{n-1})` in logarithms.
    pub fn from_sequence(w: &WeightSequence, power: usize, dim: usize) -> Self {
        let pre = w.prefix_sq();
        let h_exact: ExactRational = &pre[2] - &pre[1];
        let k_exact: ExactRational = &pre[3] - &pre[2];
        let (h, k) = (to_f64(&h_exact), to_f64(&k_exact));
        let log_minus_psi0 = to_f64(&-w.psi0().clone()).ln();
        let len = dim + power + 1;
        let mut log_du = vec![0.0, f64::NEG_INFINITY, h.ln(), k.ln()];
        let mut u = vec![1.0, 1.0, to_f64(&pre[2]), to_f64(&pre[3])];
        while u.len() < len {
            let n = u.len() - 1;
            let next = log_minus_psi0 + log_du[n] - u[n].ln() - u[n - 1].ln();
            log_du.push(next);
            u.push(u[n] + next.exp());
        }
        let log_u: Vec<f64> = u.iter().map(|v| v.ln()).collect();
        let weights = u[..dim].iter().map(|v| v.sqrt()).collect();
        Self { dim, power, weights, h, k, log_u, log_du }
    }

    pub fn point(&self) -> (f64, f64) {
        (self.h, self.k)
    }

    /// `ln(du_i + ... + du_{i+m-1})`.
    fn log_window(&self, i: usize) -> f64 {
        log_sum_exp((i..i + self.power).map(|q| self.log_du[q]))
    }

    /// `ln(u_i ... u_{i+m-2})`.
    fn log_prod(&self, i: usize) -> f64 {
        (i..i + self.power - 1).map(|q| self.log_u[q]).sum()
    }

    fn block(&self) -> usize {
        self.dim - self.power
    }

    /// `ln d_n` for `n < N - m`.
    fn log_diag(&self, log_s2: f64) -> Vec<f64> {
        (0..self.block())
            .map(|n| {
                let tail = log_sum_exp(
                    (0..self.power).filter(|&j| j <= n).map(|j| self.log_prod(n - j) + self.log_window(n - j)),
                );
                log_sum_exp([self.log_du[n], log_s2 + tail])
            })
            .collect()
    }

    /// Diagonal and band of the leading block, as plain floats.
    pub fn commutator_bands(&self, s: f64) -> (Vec<f64>, Vec<f64>) {
        let log_s2 = 2.0 * s.ln();
        let diag = self.log_diag(log_s2).iter().map(|v| v.exp()).collect();
        let band = (0..self.block() - (self.power - 1))
            .map(|n| s * (0.5 * self.log_prod(n) + self.log_window(n)).exp())
            .collect();
        (diag, band)
    }

    /// Dense leading block, for cross-checks.
    pub fn commutator_dense(&self, s: f64) -> Vec<Vec<f64>> {
        let (d, c) = self.commutator_bands(s);
        let n = d.len();
        let off = self.power - 1;
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = d[i];
        }
        for (i, v) in c.iter().enumerate() {
            m[i][i + off] = *v;
            m[i + off][i] = *v;
        }
        m
    }

    /// The chains of indices `r, r + m - 1, ...` of the leading block.
    fn chains(&self) -> Vec<Vec<usize>> {
        let off = self.power - 1;
        (0..off).map(|r| (r..self.block()).step_by(off).collect()).collect()
    }

    /// Smallest eigenvalue of the rescaled chains; same sign as the smallest
    /// eigenvalue of the commutator block.
    pub fn scaled_min_eig(&self, s: f64) -> f64 {
        if s == 0.0 {
            return self.raw_min_eig(0.0);
        }
        let log_s2 = 2.0 * s.ln();
        let log_d = self.log_diag(log_s2);
        let off = self.power - 1;
        self.chains()
            .iter()
            .map(|chain| {
                let gamma: Vec<f64> = chain
                    .windows(2)
                    .map(|w| {
                        let n = w[0];
                        let log_c2 = log_s2 + self.log_prod(n) + 2.0 * self.log_window(n);
                        (log_c2 - log_d[n] - log_d[n + off]).exp()
                    })
                    .collect();
                unit_chain_min_eig(&gamma)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest eigenvalue of the commutator block itself.
    pub fn raw_min_eig(&self, s: f64) -> f64 {
        if s == 0.0 {
            return (0..self.block()).map(|n| self.log_du[n].exp()).fold(f64::INFINITY, f64::min);
        }
        let (d, c) = self.commutator_bands(s);
        let off = self.power - 1;
        self.chains()
            .iter()
            .map(|chain| {
                let diag: Vec<f64> = chain.iter().map(|&n| d[n]).collect();
                let band: Vec<f64> = chain.windows(2).map(|w| c[w[0]] * c[w[0]]).collect();
                debug_assert!(chain.windows(2).all(|w| w[1] == w[0] + off));
                tridiagonal_min_eig(&diag, &band)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Eigenvalues below `x` of the symmetric tridiagonal matrix with diagonal
/// `diag` and squared off-diagonal `band2`, counted by negative LDL pivots.
fn count_below(diag: &[f64], band2: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        q = if i == 0 { d - x } else { d - x - band2[i - 1] / q };
        if q == 0.0 {
            q = -f64::EPSILON * (d.abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisect_min(diag: &[f64], band2: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(diag, band2, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn tridiagonal_min_eig(diag: &[f64], band2: &[f64]) -> f64 {
    if diag.is_empty() {
        return f64::INFINITY;
    }
    let radius = |i: usize| {
        let l = if i > 0 { band2[i - 1].sqrt() } else { 0.0 };
        let r = if i < band2.len() { band2[i].sqrt() } else { 0.0 };
        l + r
    };
    let lo = (0..diag.len()).map(|i| diag[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let hi = diag.iter().copied().fold(f64::INFINITY, f64::min);
    bisect_min(diag, band2, lo - f64::EPSILON * lo.abs().max(1.0), hi)
}

fn unit_chain_min_eig(gamma: &[f64]) -> f64 {
    let diag = vec![1.0; gamma.len() + 1];
    tridiagonal_min_eig(&diag, gamma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    NoViolationFound,
    ViolationAt(f64),
}

impl Verdict {
    pub fn is_violation(&self) -> bool {
        matches!(self, Verdict::ViolationAt(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub point: (f64, f64),
    pub power: usize,
    pub dim: usize,
    /// The scanned `s` values followed by any refinement probes.
    pub s_grid: Vec<f64>,
    /// Rescaled smallest eigenvalue at each `s`.
    pub min_eigs: Vec<f64>,
    pub verdict: Verdict,
}

impl OracleReport {
    pub fn worst_min_eig(&self) -> f64 {
        self.min_eigs.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone)]
pub struct OracleOptions {
    pub dim: usize,
    pub s_min: f64,
    pub s_max: f64,
    pub s_steps: usize,
    pub tol_violation: f64,
    /// Golden-section refinement in `ln s` around the three lowest grid
    /// values when the grid itself shows no violation.
    pub refine: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { dim: 40, s_min: 1e-3, s_max: 1e3, s_steps: 64, tol_violation: TOL_VIOLATION, refine: true }
    }
}

impl OracleOptions {
    pub fn s_grid(&self) -> Vec<f64> {
        let (a, b) = (self.s_min.ln(), self.s_max.ln());
        let n = self.s_steps;
        (0..n).map(|i| if n == 1 { self.s_min } else { (a + (b - a) * i as f64 / (n - 1) as f64).exp() }).collect()
    }
}

/// Smallest eigenvalue of the leading `(N - m)` block of the self-commutator
/// of `T + s T^m`, for the shift with `x = 1 + h`, `y = 1 + h + k`.
pub fn self_commutator_min_eig(h: f64, k: f64, s: f64, power: usize, dim: usize) -> Result<f64, OracleError> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(OracleError::BadShift(s));
    }
    Ok(TruncatedShift::from_hk(h, k, power, dim)?.raw_min_eig(s))
}

/// Rescaled counterpart of [`self_commutator_min_eig`].
pub fn scaled_min_eig(h: f64, k: f64, s: f64, power: usize, dim: usize) -> Result<f64, OracleError> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(OracleError::BadShift(s));
    }
    Ok(TruncatedShift::from_hk(h, k, power, dim)?.scaled_min_eig(s))
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize, probes: &mut Vec<(f64, f64)>) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    probes.push((c, fc));
    probes.push((d, fd));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
            probes.push((c, fc));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
            probes.push((d, fd));
        }
    }
}

/// Scans `s` over the grid and reports the first violation.
pub fn find_violation(shift: &TruncatedShift, opt: &OracleOptions) -> OracleReport {
    let grid = opt.s_grid();
    let mut s_grid = grid.clone();
    let mut min_eigs: Vec<f64> = grid.par_iter().map(|&s| shift.scaled_min_eig(s)).collect();
    let first = |s: &[f64], e: &[f64]| e.iter().position(|&v| v < -opt.tol_violation).map(|i| s[i]);
    let mut verdict = first(&s_grid, &min_eigs);
    if verdict.is_none() && opt.refine && grid.len() >= 3 {
        let mut order: Vec<usize> = (0..grid.len()).collect();
        order.sort_by(|&a, &b| min_eigs[a].total_cmp(&min_eigs[b]));
        let probes: Vec<Vec<(f64, f64)>> = order[..3]
            .par_iter()
            .map(|&i| {
                let lo = grid[i.saturating_sub(1)].ln();
                let hi = grid[(i + 1).min(grid.len() - 1)].ln();
                let mut p = Vec::new();
                golden_min(|u| shift.scaled_min_eig(u.exp()), lo, hi, 40, &mut p);
                p
            })
            .collect();
        for (u, v) in probes.into_iter().flatten() {
            s_grid.push(u.exp());
            min_eigs.push(v);
        }
        verdict = first(&s_grid[grid.len()..], &min_eigs[grid.len()..]);
    }
    OracleReport {
        point: shift.point(),
        power: shift.power,
        dim: shift.dim,
        s_grid,
        min_eigs,
        verdict: verdict.map_or(Verdict::NoViolationFound, Verdict::ViolationAt),
    }
}

/// [`find_violation`] for the point `(h, k)`.
pub fn find_violation_hk(h: f64, k: f64, power: usize, opt: &OracleOptions) -> Result<OracleReport, OracleError> {
    Ok(find_violation(&TruncatedShift::from_hk(h, k, power, opt.dim)?, opt))
}

/// Runs [`find_violation`] at each dimension in turn and stops at the first
/// violation. A violation in a leading block is a violation of the infinite
/// commutator, so a larger dimension can only add evidence.
pub fn find_violation_escalating(
    h: f64,
    k: f64,
    power: usize,
    dims: &[usize],
    opt: &OracleOptions,
) -> Result<OracleReport, OracleError> {
    let mut last = None;
    for &dim in dims {
        let r = find_violation_hk(h, k, power, &OracleOptions { dim, ..opt.clone() })?;
        if r.verdict.is_violation() {
            return Ok(r);
        }
        last = Some(r);
    }
    last.ok_or(OracleError::DimTooSmall { dim: 0, power })
}

/// Reports along the vertical segment at `h`, one per `k`.
pub fn segment_scan(h: f64, k_grid: &[f64], power: usize, opt: &OracleOptions) -> Result<Vec<OracleReport>, OracleError> {
    k_grid.par_iter().map(|&k| find_violation_hk(h, k, power, opt)).collect()
}

/// Euclidean distance from `(h, k)` to the traced boundary, drawn as a
/// polyline closed through the origin.
pub fn boundary_distance(trace: &[BoundarySample], h: f64, k: f64) -> f64 {
    let mut poly = vec![(0.0, 0.0)];
    poly.extend(trace.iter().map(|s| (s.h_mid(), s.k_mid())));
    poly.push((0.0, 0.0));
    poly.windows(2)
        .map(|w| {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            let (dx, dy) = (x1 - x0, y1 - y0);
            let len2 = dx * dx + dy * dy;
            let u = if len2 == 0.0 { 0.0 } else { (((h - x0) * dx + (k - y0) * dy) / len2).clamp(0.0, 1.0) };
            ((h - x0 - u * dx).powi(2) + (k - y0 - u * dy).powi(2)).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Random points of the box `[0, 0.15] x [0, 0.08]` with a given exact
/// classification and at least `depth` from the traced boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementSample {
    pub inside: Vec<(f64, f64)>,
    pub outside: Vec<(f64, f64)>,
}

/// Seed used by the acceptance run and the `report` command.
pub const AGREEMENT_SEED: u64 = 2024;

pub fn sample_agreement_points(
    curve: &Curve,
    trace: &[BoundarySample],
    per_side: usize,
    depth: f64,
    seed: u64,
) -> AgreementSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut inside, mut outside) = (Vec::new(), Vec::new());
    while inside.len() < per_side || outside.len() < per_side {
        let (h, k) = (rng.gen_range(0.0..0.15), rng.gen_range(0.0..0.08));
        let status = curve.classify(&from_f64(h), &from_f64(k)).expect("nonnegative point").status;
        let bucket = match status {
            Status::Inside if inside.len() < per_side => &mut inside,
            Status::Outside if outside.len() < per_side => &mut outside,
            _ => continue,
        };
        if boundary_distance(trace, h, k) >= depth {
            bucket.push((h, k));
        }
    }
    AgreementSample { inside, outside }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AgreementCounts {
    pub inside: usize,
    pub inside_quiet: usize,
    pub outside: usize,
    pub outside_caught: usize,
}

/// Oracle verdicts on an [`AgreementSample`] with power `m`.
pub fn agreement_counts(sample: &AgreementSample, power: usize, opt: &OracleOptions) -> AgreementCounts {
    let violates = |&(h, k): &(f64, f64)| {
        find_violation_hk(h, k, power, opt).map(|r| r.verdict.is_violation()).unwrap_or(false)
    };
    AgreementCounts {
        inside: sample.inside.len(),
        inside_quiet: sample.inside.par_iter().filter(|p| !violates(p)).count(),
        outside: sample.outside.len(),
        outside_caught: sample.outside.par_iter().filter(|p| violates(p)).count(),
    }
}
