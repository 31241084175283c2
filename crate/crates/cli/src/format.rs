/// Significant digits in human-readable output.
pub const SIGNIFICANT_DIGITS: usize = 16;

/// `x` to 16 significant digits, positional where reasonable. Values within
/// a few ulps of an integer print as that integer.
pub fn number(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let r = x.round();
    let x = if (x - r).abs() <= 4.0 * f64::EPSILON * r.abs() { r } else { x };
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exponent: i32 = sci.split_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if !(-5..(SIGNIFICANT_DIGITS as i32)).contains(&exponent) {
        return sci;
    }
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
    let s = format!("{x:.decimals$}");
    match s.split_once('.') {
        Some((int, frac)) if frac.bytes().all(|b| b == b'0') => {
            if int == "-0" {
                "0".into()
            } else {
                int.into()
            }
        }
        _ => s,
    }
}

/// Space-separated [`number`]s.
pub fn vector(xs: &[f64]) -> String {
    xs.iter().map(|&x| number(x)).collect::<Vec<_>>().join(" ")
}
