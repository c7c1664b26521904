//! Gamma function for the 1s prefactor, Gamma(2 eps + 1) with eps in (0, 1].

use crate::error::{domain, Result};

// Lanczos approximation, g = 7, n = 9. Coefficients as published by
// P. Godfrey and used in GSL; relative error ~1e-15 on the positive axis.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const GUARD_MIN: f64 = 0.5;
const GUARD_MAX: f64 = 10.0;

/// Gamma(x) on the guard range [0.5, 10].
///
/// The rate formulas only need [1, 3]; anything outside the guard range is
/// rejected rather than extrapolated.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(GUARD_MIN..=GUARD_MAX).contains(&x) {
        return Err(domain("x", x, "gamma_fn is guarded to [0.5, 10]"));
    }
    Ok(lanczos_gamma(x))
}

/// Unchecked Lanczos sum, valid for x >= 0.5.
pub(crate) fn lanczos_gamma(x: f64) -> f64 {
    let x = x - 1.0;
    let mut sum = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * sum
}
