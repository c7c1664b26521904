//! Log-space formula kernels, generic over the working precision.
//!
//! Everything here returns natural logarithms of the rate factors so that a
//! caller can sum them and exponentiate once. The public f64 operations in
//! [`super::rate`] and the extended-precision checker in [`crate::refcheck`]
//! both evaluate through these functions.

use serde::{Deserialize, Serialize};

use crate::precision::{lit, Real};

/// Multiplicative perturbations of individual formula constants.
///
/// [`Perturbation::NONE`] leaves every formula untouched; the other values
/// exist for fault-injection runs of the equivalence check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    /// Scales the sqrt(3) in the exponent of Exp.
    pub sqrt3_in_exp: f64,
    /// Scales the leading 2 inside the bracket of Q.
    pub two_in_coulomb_bracket: f64,
    /// Scales the leading 4 inside the bracket of the direct 1s form.
    pub four_in_direct_bracket: f64,
    /// Scales C_lambda^2 in the factored form.
    pub c_lambda_sq: f64,
}

impl Perturbation {
    pub const NONE: Perturbation = Perturbation {
        sqrt3_in_exp: 1.0,
        two_in_coulomb_bracket: 1.0,
        four_in_direct_bracket: 1.0,
        c_lambda_sq: 1.0,
    };
}

impl Default for Perturbation {
    fn default() -> Self {
        Self::NONE
    }
}

fn scaled<T: Real>(value: T, scale: f64) -> T {
    if scale == 1.0 {
        value
    } else {
        value * T::from_f64(scale)
    }
}

/// xi^2 = 2(1 - eps^2) / (2 + eps^2 + eps sqrt(eps^2 + 8)).
///
/// Algebraically identical to 1 - eps(sqrt(eps^2 + 8) - eps)/2 but free of
/// the cancellation near eps = 1; `complement` is 1 - eps^2.
pub fn xi_sq<T: Real>(eps: &T, complement: &T) -> T {
    let eps_sq = eps.clone() * eps.clone();
    let denom = lit::<T>(2.0) + eps_sq.clone() + eps.clone() * (eps_sq + lit(8.0)).sqrt();
    lit::<T>(2.0) * complement.clone() / denom
}

pub fn xi<T: Real>(eps: &T, complement: &T) -> T {
    xi_sq(eps, complement).sqrt()
}

/// Tunneling exponent coefficient 2 sqrt(3) xi^3 / (1 + xi^2); ln Exp = -coefficient / f.
pub fn tunnel_coefficient<T: Real>(xi: &T, sqrt3_scale: f64) -> T {
    let sqrt3 = scaled(lit::<T>(3.0).sqrt(), sqrt3_scale);
    let xi_sq = xi.clone() * xi.clone();
    lit::<T>(2.0) * sqrt3 * xi_sq.clone() * xi.clone() / (lit::<T>(1.0) + xi_sq)
}

pub fn ln_exp_factor<T: Real>(xi: &T, f: &T, p: &Perturbation) -> T {
    -(tunnel_coefficient(xi, p.sqrt3_in_exp) / f.clone())
}

/// ln P with P = (1/xi) sqrt((1 - xi^2/3) / (3 + xi^2)) f.
pub fn ln_preexp<T: Real>(xi: &T, f: &T) -> T {
    let xi_sq = xi.clone() * xi.clone();
    let ratio = (lit::<T>(1.0) - xi_sq.clone() / lit(3.0)) / (lit::<T>(3.0) + xi_sq);
    lit::<T>(0.5) * ratio.ln() + f.clone().ln() - xi.ln()
}

/// Base of the Coulomb bracket, B = 2 xi^3 (3 - xi^2)^2 / (sqrt(3) (1 + xi^2)).
pub fn coulomb_base<T: Real>(xi: &T, two_scale: f64) -> T {
    let xi_sq = xi.clone() * xi.clone();
    let three_minus = lit::<T>(3.0) - xi_sq.clone();
    let numer = scaled(lit::<T>(2.0), two_scale)
        * xi_sq.clone()
        * xi.clone()
        * three_minus.clone()
        * three_minus;
    numer / (lit::<T>(3.0).sqrt() * (lit::<T>(1.0) + xi_sq))
}

/// 6 Z alpha arcsin(xi / sqrt 3); the argument stays inside (0, 1/sqrt 3).
pub fn coulomb_arcsin_term<T: Real>(xi: &T, zalpha: &T) -> T {
    lit::<T>(6.0) * zalpha.clone() * (xi.clone() / lit::<T>(3.0).sqrt()).asin()
}

/// ln Q = 2 eta ln(B / f) + 6 Z alpha arcsin(xi / sqrt 3).
pub fn ln_coulomb<T: Real>(xi: &T, f: &T, zalpha: &T, eta: &T, p: &Perturbation) -> T {
    let base = coulomb_base(xi, p.two_in_coulomb_bracket);
    lit::<T>(2.0) * eta.clone() * (base / f.clone()).ln() + coulomb_arcsin_term(xi, zalpha)
}

/// ln C_lambda^2 for the hydrogenic 1s1/2 state: (2 eps - 1) ln 2 - ln Gamma(2 eps + 1).
pub fn ln_c_lambda_sq_hydrogenic<T: Real>(eps: &T) -> T {
    let two_eps = lit::<T>(2.0) * eps.clone();
    (two_eps.clone() - lit(1.0)) * lit::<T>(2.0).ln() - (two_eps + lit(1.0)).ln_gamma()
}

/// Parameters of a bound state at a given working precision.
#[derive(Debug, Clone)]
pub struct StateParams<T> {
    pub zalpha: T,
    pub eps: T,
    /// 1 - eps^2
    pub complement: T,
    pub xi: T,
    pub eta: T,
    pub ln_c_lambda_sq: T,
}

impl<T: Real> StateParams<T> {
    /// Hydrogenic 1s1/2: eps = sqrt(1 - (Z alpha)^2), 1 - eps^2 = (Z alpha)^2 exactly.
    pub fn hydrogenic(zalpha: T) -> Self {
        let complement = zalpha.clone() * zalpha.clone();
        let eps = ((lit::<T>(1.0) - zalpha.clone()) * (lit::<T>(1.0) + zalpha.clone())).sqrt();
        let xi = xi(&eps, &complement);
        let eta = zalpha.clone() * eps.clone() / complement.sqrt();
        let ln_c_lambda_sq = ln_c_lambda_sq_hydrogenic(&eps);
        Self {
            zalpha,
            eps,
            complement,
            xi,
            eta,
            ln_c_lambda_sq,
        }
    }
}

/// ln w of the factored form, C_lambda^2 P Q Exp, in units of m_e c^2 / hbar.
pub fn ln_rate_factored<T: Real>(state: &StateParams<T>, f: &T, p: &Perturbation) -> T {
    let ln_c = scaled_ln(state.ln_c_lambda_sq.clone(), p.c_lambda_sq);
    ln_c + ln_preexp(&state.xi, f)
        + ln_coulomb(&state.xi, f, &state.zalpha, &state.eta, p)
        + ln_exp_factor(&state.xi, f, p)
}

fn scaled_ln<T: Real>(ln_value: T, scale: f64) -> T {
    if scale == 1.0 {
        ln_value
    } else {
        ln_value + T::from_f64(scale).ln()
    }
}

/// ln w of the direct 1s1/2 closed form:
///
/// w = f^(1-2eps) / (2 sqrt3 xi Gamma(2eps+1)) sqrt((3-xi^2)/(3+xi^2))
///     [4 xi^3 (3-xi^2)^2 / (sqrt3 (1+xi^2))]^(2eps)
///     exp(6 Z alpha arcsin(xi/sqrt3) - 2 sqrt3 xi^3 / (f (1+xi^2)))
///
/// The trailing bracket is read as the argument of an exponential; without
/// the exp the form neither factorizes nor vanishes as f -> 0.
pub fn ln_rate_direct<T: Real>(zalpha: &T, eps: &T, xi: &T, f: &T, four_scale: f64) -> T {
    let sqrt3 = lit::<T>(3.0).sqrt();
    let xi_sq = xi.clone() * xi.clone();
    let xi_cu = xi_sq.clone() * xi.clone();
    let two_eps = lit::<T>(2.0) * eps.clone();
    let three_minus = lit::<T>(3.0) - xi_sq.clone();
    let one_plus = lit::<T>(1.0) + xi_sq.clone();

    let power = (lit::<T>(1.0) - two_eps.clone()) * f.ln();
    let prefactor = -(lit::<T>(2.0) * sqrt3.clone() * xi.clone()).ln()
        - (two_eps.clone() + lit(1.0)).ln_gamma();
    let root = lit::<T>(0.5) * (three_minus.clone() / (lit::<T>(3.0) + xi_sq)).ln();
    let bracket =
        scaled(lit::<T>(4.0), four_scale) * xi_cu.clone() * three_minus.clone() * three_minus
            / (sqrt3.clone() * one_plus.clone());
    let bracket_term = two_eps * bracket.ln();
    let exponent = lit::<T>(6.0) * zalpha.clone() * (xi.clone() / sqrt3.clone()).asin()
        - lit::<T>(2.0) * sqrt3 * xi_cu / (f.clone() * one_plus);

    power + prefactor + root + bracket_term + exponent
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::Ext;

    /// xi in its usual nested-root form, for cross-checking the rearrangement.
    fn xi_typeset<T: Real>(eps: &T) -> T {
        let inner = (eps.clone() * eps.clone() + lit(8.0)).sqrt() - eps.clone();
        (lit::<T>(1.0) - lit::<T>(0.5) * eps.clone() * inner).sqrt()
    }

    #[test]
    fn rearranged_xi_matches_typeset_in_extended_precision() {
        for s in ["0.05", "0.3", "0.6", "0.8", "0.99", "0.999999"] {
            let eps = Ext::parse(s);
            let complement = Ext::from_i64(1) - eps.clone() * eps.clone();
            let a = xi(&eps, &complement);
            let b = xi_typeset(&eps);
            assert!((a - b).abs() < Ext::parse("1e-30"), "eps = {s}");
        }
    }

    #[test]
    fn typeset_xi_loses_digits_near_threshold() {
        // at eps = 1 - 1e-10 the typeset form keeps only a few digits in f64
        let gap = 1e-10;
        let eps = 1.0 - gap;
        let stable = xi(&eps, &(gap * (2.0 - gap)));
        let naive = xi_typeset(&eps);
        let exact = {
            let e = Ext::from_i64(1) - Ext::from_f64(gap);
            let c = Ext::from_f64(gap) * (Ext::from_i64(2) - Ext::from_f64(gap));
            xi(&e, &c).to_f64()
        };
        assert!((stable / exact - 1.0).abs() < 1e-15);
        assert!((naive / exact - 1.0).abs() > 1e-9);
    }

    #[test]
    fn direct_and_factored_agree_in_f64() {
        for &za in &[0.0073, 0.3, 0.67] {
            let s = StateParams::hydrogenic(za);
            for &f in &[1e-3, 0.05, 0.2] {
                let a = ln_rate_factored(&s, &f, &Perturbation::NONE);
                let b = ln_rate_direct(&s.zalpha, &s.eps, &s.xi, &f, 1.0);
                assert!((a - b).abs() < 1e-12, "za={za} f={f}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn coulomb_factor_collapses_at_unit_base() {
        let xi = 0.4_f64;
        let za = 0.5_f64;
        let base = coulomb_base(&xi, 1.0);
        let ln_q = ln_coulomb(&xi, &base, &za, &0.9, &Perturbation::NONE);
        assert!((ln_q - coulomb_arcsin_term(&xi, &za)).abs() < 1e-15);
    }
}
