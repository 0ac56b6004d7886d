/// `printf("%.12e")`: twelve mantissa digits, signed exponent of at least two
/// digits.
pub fn c_exp(value: f64) -> String {
    if !value.is_finite() {
        return format!("{value}");
    }
    let rust = format!("{value:.12e}");
    let (mantissa, exponent) = rust.split_once('e').expect("exponent present");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let sign = if exponent < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exponent.abs())
}
