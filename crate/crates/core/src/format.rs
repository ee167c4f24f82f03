//! Fixed float formatting shared by CSV, DOT and JSON output.

use serde::Serializer;

/// Significant digits written for every float.
pub const SIGNIFICANT: usize = 12;

fn split_scientific(x: f64) -> (String, i32) {
    let s = format!("{:.*e}", SIGNIFICANT - 1, x);
    let (mantissa, exp) = s
        .split_once('e')
        .expect("scientific format has an exponent");
    (mantissa.to_string(), exp.parse().expect("integer exponent"))
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// C `%.12g`.
pub fn float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let (mantissa, exp) = split_scientific(x);
    if exp < -4 || exp >= SIGNIFICANT as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(&mantissa), exp.abs())
    } else {
        let decimals = (SIGNIFICANT as i32 - 1 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

/// `x` rounded to [`SIGNIFICANT`] digits.
pub fn round(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT - 1, x)
        .parse()
        .expect("round trip of a formatted float")
}

pub fn serialize_rounded<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round(*x))
}

pub fn serialize_rounded_option<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&round(*v)),
        None => s.serialize_none(),
    }
}
