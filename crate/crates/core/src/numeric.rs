//! Exponential ratios that stay accurate as their argument goes to zero.

/// Below this magnitude the ratios are evaluated from their series.
const SERIES_CUTOFF: f64 = 1e-6;

/// `(e^x - 1) / x`, equal to 1 at `x = 0`.
pub fn expm1_ratio(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        1.0 + x / 2.0 + x * x / 6.0
    } else {
        x.exp_m1() / x
    }
}

/// Below this magnitude `(e^x - 1 - x) / x^2` is summed from its series; the direct
/// form loses about `eps / x^2` to cancellation.
const SUB_RATIO_SERIES_LIMIT: f64 = 0.5;
const SUB_RATIO_TERMS: usize = 20;

/// `(e^x - 1 - x) / x^2`, equal to 1/2 at `x = 0`.
pub fn expm1_sub_ratio(x: f64) -> f64 {
    if x.abs() < SUB_RATIO_SERIES_LIMIT {
        // sum of x^k / (k + 2)!
        let mut term = 0.5;
        let mut sum = 0.0;
        for k in 0..SUB_RATIO_TERMS {
            sum += term;
            term *= x / (k as f64 + 3.0);
        }
        sum
    } else {
        (x.exp_m1() - x) / (x * x)
    }
}

/// `-ln(1 - u) / u` for `u < 1`, equal to 1 at `u = 0`.
pub fn neg_ln1m_ratio(u: f64) -> f64 {
    if u.abs() < SERIES_CUTOFF {
        1.0 + u / 2.0 + u * u / 3.0
    } else {
        -(-u).ln_1p() / u
    }
}

/// `|a - b| / max(|a|, |b|, floor)`
pub fn rel_diff(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}

/// Formats `x` with `digits` significant digits in the style of C's `%g`: plain decimal
/// notation unless the exponent is below -4 or at least `digits`, trailing zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
