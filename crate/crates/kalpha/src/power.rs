//! Real powers with negative bases admitted only for integer exponents.

/// `base^p` extended to negative bases when `p` is (numerically) an integer.
///
/// Fractional powers of a negative base have no real value; they come back as
/// `-inf`, which downstream radicand tests read as "outside the domain".
/// `0^p` follows the continuous extension: `0` for `p > 0`, `+inf` for `p < 0`.
pub(crate) fn real_power(base: f64, p: f64) -> f64 {
    if base > 0.0 {
        base.powf(p)
    } else if base == 0.0 {
        if p > 0.0 {
            0.0
        } else if p < 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    } else {
        let rounded = p.round();
        if (p - rounded).abs() < 1e-9 && rounded.abs() < 1e9 {
            let magnitude = (-base).powf(rounded);
            if (rounded as i64).rem_euclid(2) == 1 {
                -magnitude
            } else {
                magnitude
            }
        } else {
            f64::NEG_INFINITY
        }
    }
}
