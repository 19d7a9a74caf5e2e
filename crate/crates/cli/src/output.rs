//! Number formatting shared by every output format.

use semicubic::arith::{to_f64, ExactRational};
use serde_json::Value;

/// `x` with 12 significant digits, `%g` style: fixed notation for decimal
/// exponents in `[-5, 12)`, scientific otherwise; trailing zeros dropped.
pub fn g12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim(mant.to_string()), exp)
    }
}

fn trim(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0');
    t.strip_suffix('.').unwrap_or(t).to_string()
}

/// JSON number rounded to 12 significant digits; non-finite values become null.
pub fn num(x: f64) -> Value {
    g12(x).parse::<f64>().ok().filter(|v| v.is_finite()).map_or(Value::Null, Value::from)
}

pub fn q(x: &ExactRational) -> String {
    g12(to_f64(x))
}

pub fn qnum(x: &ExactRational) -> Value {
    num(to_f64(x))
}

/// `[lo, hi]` as a JSON pair with exact fractions alongside.
pub fn interval(lo: &ExactRational, hi: &ExactRational) -> Value {
    serde_json::json!({
        "lo": qnum(lo),
        "hi": qnum(hi),
        "lo_exact": lo.to_string(),
        "hi_exact": hi.to_string(),
    })
}

pub fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(g12(0.1 + 0.2), "0.3");
        assert_eq!(g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(g12(0.000786885627123456), "0.000786885627123");
        assert_eq!(g12(1.5e-6), "1.5e-6");
        assert_eq!(g12(123456789012345.0), "1.23456789012e14");
        assert_eq!(g12(-2.0), "-2");
        assert_eq!(g12(f64::NAN), "nan");
    }

    #[test]
    fn json_numbers_are_rounded() {
        assert_eq!(num(1.0 / 3.0).to_string(), "0.333333333333");
        assert_eq!(num(f64::INFINITY), Value::Null);
    }
}
