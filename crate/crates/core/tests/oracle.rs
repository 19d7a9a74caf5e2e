use nalgebra::{Complex, DMatrix, SymmetricEigen};
use semicubic::arith::from_f64;
use semicubic::{Curve, Status};
use semicubic::oracle::{find_violation_hk, OracleOptions, TruncatedShift, Verdict};

fn shift_matrix(w: &[f64]) -> DMatrix<Complex<f64>> {
    let n = w.len();
    let mut t = DMatrix::from_element(n, n, Complex::new(0.0, 0.0));
    for i in 0..n - 1 {
        t[(i + 1, i)] = Complex::new(w[i], 0.0);
    }
    t
}

/// Smallest eigenvalue of the leading block of `[A*, A]`, `A = T + s T^m`, by
/// dense Hermitian diagonalisation.
fn dense_min_eig(sh: &TruncatedShift, s: Complex<f64>) -> f64 {
    let t = shift_matrix(&sh.weights);
    let a = &t + t.pow(sh.power as u32) * s;
    let c = a.adjoint() * &a - &a * a.adjoint();
    let b = sh.dim - sh.power;
    let block = c.view((0, 0), (b, b)).into_owned();
    SymmetricEigen::new(block).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

const POINTS: [(f64, f64); 5] = [(0.01, 0.01), (0.01, 0.05), (0.05, 0.02), (0.1, 0.005), (0.002, 0.0015)];

#[test]
fn banded_solver_matches_dense() {
    for (h, k) in POINTS {
        for m in [2, 3] {
            let sh = TruncatedShift::from_hk(h, k, m, 24).unwrap();
            for s in [0.01, 0.3, 1.0, 7.0] {
                let dense = dense_min_eig(&sh, Complex::new(s, 0.0));
                let banded = sh.raw_min_eig(s);
                assert!((dense - banded).abs() < 1e-10, "({h},{k}) m={m} s={s}: {dense} vs {banded}");
                assert_eq!(sh.scaled_min_eig(s) < 0.0, banded < 0.0 || dense < -1e-12 && banded < 0.0);
            }
        }
    }
}

#[test]
fn dense_bands_match_formula() {
    let sh = TruncatedShift::from_hk(0.03, 0.02, 3, 16).unwrap();
    let t = shift_matrix(&sh.weights);
    let s = 0.8;
    let a = &t + t.pow(3) * Complex::new(s, 0.0);
    let c = a.adjoint() * &a - &a * a.adjoint();
    let mine = sh.commutator_dense(s);
    for (i, row) in mine.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            assert!((c[(i, j)].re - v).abs() < 1e-12, "entry ({i},{j})");
        }
    }
}

#[test]
fn phase_invariance() {
    use std::f64::consts::PI;
    for (h, k) in POINTS {
        for m in [2, 3] {
            let sh = TruncatedShift::from_hk(h, k, m, 24).unwrap();
            for s in [0.05, 0.7, 4.0] {
                let base = dense_min_eig(&sh, Complex::new(s, 0.0));
                for theta in [PI / 4.0, PI / 2.0, PI] {
                    let rotated = dense_min_eig(&sh, Complex::from_polar(s, theta));
                    assert!((base - rotated).abs() < 1e-10, "({h},{k}) m={m} s={s} theta={theta}");
                }
            }
        }
    }
}

#[test]
fn violations_persist_at_larger_dimension() {
    let curve = Curve::builtin();
    for (h, k) in [(0.01, 0.05), (0.01, 0.06), (0.03, 0.1)] {
        let verdict = curve.classify(&from_f64(h), &from_f64(k)).unwrap();
        assert_eq!(verdict.status, Status::Outside);
        let mut seen = false;
        for dim in [40, 80, 160, 320] {
            let opt = OracleOptions { dim, ..Default::default() };
            let v = find_violation_hk(h, k, 3, &opt).unwrap().verdict.is_violation();
            assert!(v || !seen, "({h},{k}) lost its violation at N={dim}");
            seen |= v;
        }
        assert!(seen);
    }
}

#[test]
fn report_shape() {
    let opt = OracleOptions { refine: false, ..Default::default() };
    let r = find_violation_hk(0.01, 0.01, 3, &opt).unwrap();
    assert_eq!(r.s_grid.len(), 64);
    assert_eq!(r.min_eigs.len(), 64);
    assert!((r.s_grid[0] - 1e-3).abs() < 1e-15 && (r.s_grid[63] - 1e3).abs() < 1e-9);
    assert_eq!(r.verdict, Verdict::NoViolationFound);
    if let Verdict::ViolationAt(s) = find_violation_hk(0.01, 0.2, 3, &opt).unwrap().verdict {
        let i = r.s_grid.iter().position(|&g| g == s).unwrap();
        let again = find_violation_hk(0.01, 0.2, 3, &opt).unwrap();
        assert!(again.min_eigs[i] < -opt.tol_violation);
    } else {
        panic!("far outside point must violate");
    }
}
