use super::{int, sturm_chain, to_f64, ExactRational, SturmChain, UniPoly};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Multiplicity {
    Odd,
    Even,
    Unknown,
}

/// Rational bracket `[lo, hi]`, `lo < hi`, holding exactly one root of the
/// polynomial it was produced for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: ExactRational,
    pub hi: ExactRational,
    pub multiplicity_hint: Multiplicity,
}

impl RootInterval {
    pub fn new(lo: ExactRational, hi: ExactRational) -> Self {
        assert!(lo < hi, "empty root interval");
        Self { lo, hi, multiplicity_hint: Multiplicity::Unknown }
    }

    pub fn width(&self) -> ExactRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> ExactRational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn mid_f64(&self) -> f64 {
        to_f64(&self.midpoint())
    }

    pub fn lo_f64(&self) -> f64 {
        to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        to_f64(&self.hi)
    }

    pub fn contains(&self, x: &ExactRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.contains(&super::from_f64(x))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("no root in bracket [{lo}, {hi}]")]
    NoRootInBracket { lo: f64, hi: f64 },
    #[error("{count} roots in bracket [{lo}, {hi}] and no sign change")]
    MultipleRoots { count: usize, lo: f64, hi: f64 },
}

/// Isolates every distinct real root in the open interval `(lo, hi)` into
/// disjoint brackets, ordered left to right.
pub fn isolate_roots(q: &UniPoly, lo: &ExactRational, hi: &ExactRational) -> Vec<RootInterval> {
    let chain = sturm_chain(q);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        match chain.count_open(&a, &b) {
            0 => {}
            1 => out.push(bracket_from(q, a, b)),
            _ => {
                let m = split_point(q, &a, &b);
                stack.push((m.clone(), b));
                stack.push((a, m));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// A point strictly inside `(a, b)` where `q` does not vanish.
fn split_point(q: &UniPoly, a: &ExactRational, b: &ExactRational) -> ExactRational {
    let width = b - a;
    for (num, den) in [(1, 2), (3, 7), (4, 7), (2, 5), (3, 5), (5, 11), (6, 11)] {
        let m = a + &width * super::rat(num, den);
        if q.sign_at(&m) != 0 {
            return m;
        }
    }
    // q has finitely many roots, so some dyadic point nearby is clean.
    let mut k = 3i64;
    loop {
        let m = a + &width * super::rat(k, 2 * k + 1);
        if q.sign_at(&m) != 0 {
            return m;
        }
        k += 1;
    }
}

fn bracket_from(q: &UniPoly, lo: ExactRational, hi: ExactRational) -> RootInterval {
    let sl = q.sign_right_of(&lo);
    let sr = q.sign_left_of(&hi);
    let mut r = RootInterval::new(lo, hi);
    r.multiplicity_hint = if sl != sr { Multiplicity::Odd } else { Multiplicity::Even };
    r
}

/// Shrinks an isolating bracket to width at most `tol`.
///
/// Accepts a bracket with opposite exact endpoint signs, or one whose Sturm
/// count is exactly one.
pub fn isolate_and_refine_root(
    q: &UniPoly,
    bracket: &RootInterval,
    tol: &ExactRational,
) -> Result<RootInterval, RootError> {
    let sa = q.sign_at(&bracket.lo);
    let sb = q.sign_at(&bracket.hi);
    if sa * sb < 0 {
        return Ok(bisect_sign_change(q, bracket.lo.clone(), bracket.hi.clone(), sa, tol));
    }
    let chain = sturm_chain(q);
    let count = chain.count_open(&bracket.lo, &bracket.hi);
    if count == 1 {
        return Ok(bisect_sturm(q, &chain, bracket.lo.clone(), bracket.hi.clone(), tol));
    }
    let ends = usize::from(sa == 0) + usize::from(sb == 0);
    match count + ends {
        0 => Err(RootError::NoRootInBracket { lo: bracket.lo_f64(), hi: bracket.hi_f64() }),
        1 => {
            // The root is an endpoint: centre a small bracket on it.
            let x = if sa == 0 { bracket.lo.clone() } else { bracket.hi.clone() };
            let half = (tol / int(2)).min(bracket.width() / int(2));
            Ok(RootInterval::new(&x - &half, &x + &half))
        }
        n => Err(RootError::MultipleRoots { count: n, lo: bracket.lo_f64(), hi: bracket.hi_f64() }),
    }
}

/// Refines a bracket produced by [`isolate_roots`].
pub fn refine_root(q: &UniPoly, bracket: &RootInterval, tol: &ExactRational) -> RootInterval {
    isolate_and_refine_root(q, bracket, tol).expect("bracket isolates exactly one root")
}

/// The root rounded to `digits` decimals, returned as the cell
/// `[r - 10^-digits / 2, r + 10^-digits / 2]` once an exact sign change
/// certifies that the cell holds it. `None` if the root lies on a cell edge
/// or the root is not simple.
pub fn decimal_cell(q: &UniPoly, bracket: &RootInterval, digits: u32) -> Option<RootInterval> {
    let unit = super::pow10_neg(digits);
    let fine = refine_root(q, bracket, &(&unit / int(1000)));
    let scaled = fine.midpoint() / &unit;
    let rounded = (scaled + super::rat(1, 2)).floor() * &unit;
    let half = &unit / int(2);
    let cell = RootInterval::new(&rounded - &half, &rounded + &half);
    let (sa, sb) = (q.sign_at(&cell.lo), q.sign_at(&cell.hi));
    (sa * sb < 0 && sturm_chain(q).count_open(&cell.lo, &cell.hi) == 1).then(|| {
        let mut c = cell;
        c.multiplicity_hint = Multiplicity::Odd;
        c
    })
}

fn bisect_sign_change(
    q: &UniPoly,
    mut lo: ExactRational,
    mut hi: ExactRational,
    sign_lo: i8,
    tol: &ExactRational,
) -> RootInterval {
    while &(&hi - &lo) > tol {
        let m = (&lo + &hi) / int(2);
        let s = q.sign_at(&m);
        if s == 0 {
            let half = tol / int(4);
            let mut r = RootInterval::new(&m - &half, &m + &half);
            r.multiplicity_hint = Multiplicity::Odd;
            return r;
        }
        if s == sign_lo {
            lo = m;
        } else {
            hi = m;
        }
    }
    let mut r = RootInterval::new(lo, hi);
    r.multiplicity_hint = Multiplicity::Odd;
    r
}

fn bisect_sturm(
    q: &UniPoly,
    chain: &SturmChain,
    mut lo: ExactRational,
    mut hi: ExactRational,
    tol: &ExactRational,
) -> RootInterval {
    loop {
        let sl = q.sign_at(&lo);
        let sh = q.sign_at(&hi);
        if sl * sh < 0 {
            return bisect_sign_change(q, lo, hi, sl, tol);
        }
        if &(&hi - &lo) <= tol {
            return bracket_from(q, lo, hi);
        }
        let m = (&lo + &hi) / int(2);
        if q.sign_at(&m) == 0 {
            let half = (tol / int(4)).min((&hi - &lo) / int(4));
            let mut r = RootInterval::new(&m - &half, &m + &half);
            r.multiplicity_hint = Multiplicity::Unknown;
            return r;
        }
        if chain.count_open(&lo, &m) == 1 {
            hi = m;
        } else {
            lo = m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{pow10_neg, rat};

    #[test]
    fn refines_a_linear_root() {
        let q = UniPoly::linear_root(rat(1, 2));
        let tol = pow10_neg(9);
        let r = isolate_and_refine_root(&q, &RootInterval::new(int(0), int(1)), &tol).unwrap();
        assert!(r.width() <= tol);
        assert!(r.contains(&rat(1, 2)));
    }

    #[test]
    fn reports_missing_and_multiple_roots() {
        let q = UniPoly::from_ints(&[1, 0, 1]);
        let tol = pow10_neg(6);
        let err = isolate_and_refine_root(&q, &RootInterval::new(int(0), int(3)), &tol);
        assert!(matches!(err, Err(RootError::NoRootInBracket { .. })));

        // (x - 1)(x - 2) has equal signs at 0 and 3 and two roots between.
        let q = &UniPoly::linear_root(int(1)) * &UniPoly::linear_root(int(2));
        let err = isolate_and_refine_root(&q, &RootInterval::new(int(0), int(3)), &tol);
        assert!(matches!(err, Err(RootError::MultipleRoots { count: 2, .. })));
    }

    #[test]
    fn double_root_is_refined_by_sturm_counts() {
        let q = UniPoly::linear_root(rat(1, 3)).pow(2);
        let tol = pow10_neg(10);
        let r = isolate_and_refine_root(&q, &RootInterval::new(int(0), int(1)), &tol).unwrap();
        assert!(r.width() <= tol);
        assert!(r.contains(&rat(1, 3)));
        assert_eq!(r.multiplicity_hint, Multiplicity::Even);
    }

    #[test]
    fn isolates_all_roots_in_order() {
        let q = &(&UniPoly::linear_root(rat(1, 10)) * &UniPoly::linear_root(rat(1, 5)))
            * &UniPoly::linear_root(int(3));
        let roots = isolate_roots(&q, &int(0), &int(1));
        assert_eq!(roots.len(), 2);
        assert!(roots[0].hi <= roots[1].lo);
        assert!(roots.iter().all(|r| r.multiplicity_hint == Multiplicity::Odd));
    }
}
