use sparsebox::IterationRecord;

/// printf-style `%{width}.{precision}e`: mantissa, `e`, sign, at least two
/// exponent digits.
pub fn sci(value: f64, width: usize, precision: usize) -> String {
    let body = if value.is_nan() {
        "NaN".to_string()
    } else if value.is_infinite() {
        if value > 0.0 { "Inf" } else { "-Inf" }.to_string()
    } else {
        let raw = format!("{value:.precision$e}");
        let (mantissa, exp) = raw.split_once('e').expect("exponent present");
        let exp: i32 = exp.parse().expect("integer exponent");
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    };
    format!("{body:>width$}")
}

pub fn header(last_column: &str) -> String {
    format!(
        "outer    inner     f(x)     h(x)     √ξ1      √ξ        ρ       Δ     ‖x‖     ‖s‖ {last_column:>7}"
    )
}

pub fn row(r: &IterationRecord<f64>) -> String {
    format!(
        "{:5} {:8} {} {} {} {} {} {} {} {} {}",
        r.outer,
        r.inner,
        sci(r.f, 8, 1),
        sci(r.h, 8, 1),
        sci(r.sqrt_xi1, 7, 1),
        sci(r.sqrt_xi, 7, 1),
        sci(r.rho, 8, 1),
        sci(r.delta, 7, 1),
        sci(r.norm_x, 7, 1),
        sci(r.norm_s, 7, 1),
        sci(r.curvature, 7, 1),
    )
}
