//! f64 rate operations: the single factors, the factored rate with its full
//! breakdown, and the direct 1s1/2 closed form.

use serde::Serialize;

use super::flags::{Flag, Flags};
use super::kernel::{self, Perturbation, StateParams};
use super::types::{AuxXi, CouplingZAlpha, ReducedEnergy, ReducedField, StateSpec};
use crate::constants::RATE_UNIT_PER_SECOND;
use crate::error::{Error, Result};

/// Largest x with exp(x) finite in f64.
const MAX_LN: f64 = 709.782_712_893_384;

/// eps = sqrt(1 - (Z alpha)^2) of the hydrogenic 1s1/2 state.
pub fn epsilon_hydrogenic(zalpha: CouplingZAlpha) -> ReducedEnergy {
    let za = zalpha.value();
    ReducedEnergy::from_parts(((1.0 - za) * (1.0 + za)).sqrt(), za * za)
}

pub fn xi_of_epsilon(epsilon: ReducedEnergy) -> AuxXi {
    let xi = kernel::xi(&epsilon.value(), &epsilon.complement());
    AuxXi::new(xi).expect("xi of a valid reduced energy lies in [0, 1]")
}

/// eta = Z alpha eps / sqrt(1 - eps^2).
pub fn eta_of(zalpha: CouplingZAlpha, epsilon: ReducedEnergy) -> Result<f64> {
    if epsilon.complement() <= 0.0 {
        return Err(Error::NonrelativisticEndpoint("eta"));
    }
    Ok(zalpha.value() * epsilon.value() / epsilon.complement().sqrt())
}

/// C_lambda^2 = 2^(2 eps - 1) / Gamma(2 eps + 1) for the hydrogenic 1s1/2 state.
pub fn c_lambda_sq_hydrogenic(zalpha: CouplingZAlpha) -> f64 {
    let eps = epsilon_hydrogenic(zalpha).value();
    kernel::ln_c_lambda_sq_hydrogenic(&eps).exp()
}

/// Magnitude of the tunneling exponent, 2 sqrt(3) xi^3 / ((1 + xi^2) f).
pub fn tunnel_exponent(xi: AuxXi, f: ReducedField) -> f64 {
    kernel::tunnel_coefficient(&xi.value(), 1.0) / f.value()
}

/// Exp = exp(-2 sqrt(3) xi^3 / ((1 + xi^2) f)). Underflows to 0 for very weak fields.
pub fn exp_factor(xi: AuxXi, f: ReducedField) -> f64 {
    kernel::ln_exp_factor(&xi.value(), &f.value(), &Perturbation::NONE).exp()
}

/// P = (1/xi) sqrt((1 - xi^2/3) / (3 + xi^2)) f.
pub fn preexp_factor(xi: AuxXi, f: ReducedField) -> Result<f64> {
    let x = xi.value();
    if x == 0.0 {
        return Err(Error::NonrelativisticEndpoint("P"));
    }
    let x_sq = x * x;
    Ok(((1.0 - x_sq / 3.0) / (3.0 + x_sq)).sqrt() / x * f.value())
}

/// Q = [B / f]^(2 eta) exp(6 Z alpha arcsin(xi / sqrt 3)), evaluated in log space.
///
/// `zalpha` is taken as a plain non-negative number because custom states
/// may imply Z alpha = 0 (eta = 0).
pub fn coulomb_factor(xi: AuxXi, f: ReducedField, zalpha: f64, eta: f64) -> Result<f64> {
    if xi.value() == 0.0 {
        return Err(Error::NonrelativisticEndpoint("Q"));
    }
    if !(zalpha >= 0.0 && zalpha.is_finite()) {
        return Err(crate::error::domain(
            "zalpha",
            zalpha,
            "must be non-negative",
        ));
    }
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(crate::error::domain("eta", eta, "must be non-negative"));
    }
    let ln_q = kernel::ln_coulomb(&xi.value(), &f.value(), &zalpha, &eta, &Perturbation::NONE);
    if ln_q > MAX_LN {
        return Err(Error::Overflow {
            what: "Q",
            exponent: ln_q,
        });
    }
    Ok(ln_q.exp())
}

/// Multiply a rate in m_e c^2 / hbar units by the unit in s^-1.
pub fn to_si(w_reduced: f64) -> f64 {
    debug_assert!(w_reduced >= 0.0 || w_reduced.is_nan());
    w_reduced * RATE_UNIT_PER_SECOND
}

/// Full parameter set of a state in f64.
pub(crate) fn resolve(state: &StateSpec) -> StateParams<f64> {
    match state {
        StateSpec::Hydrogenic { zalpha } => StateParams::hydrogenic(zalpha.value()),
        StateSpec::Custom(custom) => {
            let eps = custom.epsilon();
            StateParams {
                zalpha: custom.implied_zalpha(),
                eps: eps.value(),
                complement: eps.complement(),
                xi: kernel::xi(&eps.value(), &eps.complement()),
                eta: custom.eta(),
                ln_c_lambda_sq: custom.c_lambda_sq().ln(),
            }
        }
    }
}

/// Factored rate with every intermediate factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateBreakdown {
    pub zalpha: f64,
    pub epsilon: f64,
    pub eta: f64,
    pub f: f64,
    pub xi: AuxXi,
    pub tunnel_exponent: f64,
    pub exp_factor: f64,
    pub preexp: f64,
    pub coulomb: f64,
    pub c_lambda_sq: f64,
    /// ln of the rate; finite even when `w_reduced` under- or overflows.
    pub ln_w_reduced: f64,
    /// Rate in units of m_e c^2 / hbar.
    pub w_reduced: f64,
    /// Rate in s^-1, always `to_si(w_reduced)`.
    pub w_si: f64,
    pub flags: Flags,
}

impl RateBreakdown {
    /// C_lambda^2 P Q Exp recomputed from the reported factors.
    pub fn factor_product(&self) -> f64 {
        self.c_lambda_sq * self.preexp * self.coulomb * self.exp_factor
    }
}

/// w = (m_e c^2 / hbar) C_lambda^2 P Q Exp for a hydrogenic or custom state.
pub fn rate_factored(state: &StateSpec, f: ReducedField) -> Result<RateBreakdown> {
    let params = resolve(state);
    let xi = AuxXi::new(params.xi)?;
    let fv = f.value();
    let none = Perturbation::NONE;

    let preexp = preexp_factor(xi, f)?;
    let ln_c = params.ln_c_lambda_sq;
    let ln_p = kernel::ln_preexp(&params.xi, &fv);
    let ln_q = kernel::ln_coulomb(&params.xi, &fv, &params.zalpha, &params.eta, &none);
    let ln_e = kernel::ln_exp_factor(&params.xi, &fv, &none);
    let ln_w = ln_c + ln_p + ln_q + ln_e;

    let c_lambda_sq = match state {
        StateSpec::Custom(custom) => custom.c_lambda_sq(),
        StateSpec::Hydrogenic { .. } => ln_c.exp(),
    };
    let coulomb = ln_q.exp();
    let exp_factor = ln_e.exp();

    let exponent = -ln_e;
    let mut flags = Flags::regime(exponent, fv);
    let factors = [c_lambda_sq, preexp, coulomb, exp_factor];
    let w_reduced = if factors.iter().all(|v| v.is_finite() && *v > 0.0) {
        factors.iter().product()
    } else {
        ln_w.exp()
    };
    if factors.contains(&0.0) || w_reduced == 0.0 {
        flags.insert(Flag::Underflow);
    }
    if factors.iter().any(|v| v.is_infinite()) || w_reduced.is_infinite() {
        flags.insert(Flag::Overflow);
    }

    Ok(RateBreakdown {
        zalpha: params.zalpha,
        epsilon: params.eps,
        eta: params.eta,
        f: fv,
        xi,
        tunnel_exponent: exponent,
        exp_factor,
        preexp,
        coulomb,
        c_lambda_sq,
        ln_w_reduced: ln_w,
        w_reduced,
        w_si: to_si(w_reduced),
        flags,
    })
}

/// ln w of the direct 1s1/2 closed form, in units of m_e c^2 / hbar.
pub fn ln_rate_direct_1s(zalpha: CouplingZAlpha, f: ReducedField) -> f64 {
    let p = StateParams::hydrogenic(zalpha.value());
    kernel::ln_rate_direct(&p.zalpha, &p.eps, &p.xi, &f.value(), 1.0)
}

/// Direct 1s1/2 closed form, evaluated in log space and exponentiated once.
/// Underflow to 0 is allowed; overflow is an error.
pub fn rate_direct_1s(zalpha: CouplingZAlpha, f: ReducedField) -> Result<f64> {
    let ln_w = ln_rate_direct_1s(zalpha, f);
    if ln_w > MAX_LN {
        return Err(Error::Overflow {
            what: "w",
            exponent: ln_w,
        });
    }
    Ok(ln_w.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn za(v: f64) -> CouplingZAlpha {
        CouplingZAlpha::new(v).unwrap()
    }

    fn field(v: f64) -> ReducedField {
        ReducedField::new(v).unwrap()
    }

    fn xi(v: f64) -> AuxXi {
        AuxXi::new(v).unwrap()
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_hydrogenic(za(0.6)).value(), 0.8);
        let small = epsilon_hydrogenic(za(1e-7)).value();
        assert!(small < 1.0 && 1.0 - small < 1e-14);
        // 1 - 5e-19 rounds to 1 in double; the complement keeps the gap
        let tiny = epsilon_hydrogenic(za(1e-9));
        assert_eq!(tiny.value(), 1.0);
        assert_relative_eq!(tiny.complement(), 1e-18, max_relative = 1e-15);
        // 40-digit reference 0.99997337396823435787...
        let eps = epsilon_hydrogenic(za(1.0 / 137.035999)).value();
        assert_relative_eq!(eps, 0.999_973_373_968_234_4, max_relative = 1e-15);
    }

    #[test]
    fn xi_endpoints() {
        assert_eq!(xi_of_epsilon(ReducedEnergy::new(1.0).unwrap()).value(), 0.0);
        let near_zero = xi_of_epsilon(ReducedEnergy::new(1e-300).unwrap()).value();
        assert!((near_zero - 1.0).abs() <= 1e-15);
        // reference 0.55909754275255259951...
        let x = xi_of_epsilon(ReducedEnergy::new(0.6).unwrap()).value();
        assert_relative_eq!(x, 0.559_097_542_752_552_6, max_relative = 1e-15);
    }

    #[test]
    fn eta_examples() {
        let e = ReducedEnergy::new(0.8).unwrap();
        assert_relative_eq!(eta_of(za(0.6), e).unwrap(), 0.8, max_relative = 1e-15);
        // 0.27 / sqrt(0.19) = 0.61942248145051676795...
        let e = ReducedEnergy::new(0.9).unwrap();
        assert_relative_eq!(
            eta_of(za(0.3), e).unwrap(),
            0.619_422_481_450_516_8,
            max_relative = 1e-14
        );
        assert_eq!(
            eta_of(za(0.3), ReducedEnergy::new(1.0).unwrap()),
            Err(Error::NonrelativisticEndpoint("eta"))
        );
    }

    #[test]
    fn c_lambda_sq_limits() {
        assert_relative_eq!(c_lambda_sq_hydrogenic(za(1e-8)), 1.0, max_relative = 1e-13);
        let expected = 2f64.powf(0.6) / crate::ion::gamma::gamma_fn(2.6).unwrap();
        assert_relative_eq!(
            c_lambda_sq_hydrogenic(za(0.6)),
            expected,
            max_relative = 1e-14
        );
        for z in 1..=137u32 {
            let c = c_lambda_sq_hydrogenic(CouplingZAlpha::from_charge(z).unwrap());
            assert!(c > 0.0 && c.is_finite());
        }
    }

    #[test]
    fn exp_factor_examples() {
        assert_eq!(exp_factor(xi(0.0), field(1e-6)), 1.0);
        let e = exp_factor(xi(0.5), field(1e12));
        assert!(e < 1.0 && e > 1.0 - 1e-12);
        // Z alpha = 0.67: coefficient 0.24131513748851026244...
        let x = xi_of_epsilon(epsilon_hydrogenic(za(0.67)));
        assert_relative_eq!(x.value(), 0.436_043_623_637_454_96, max_relative = 1e-14);
        assert_relative_eq!(
            exp_factor(x, field(0.1)).ln(),
            -2.413_151_374_885_102_6,
            max_relative = 1e-14
        );
        assert_eq!(exp_factor(x, field(1e-12)), 0.0);
    }

    #[test]
    fn preexp_examples() {
        let x = xi(0.559_10);
        let p1 = preexp_factor(x, field(0.05)).unwrap();
        let p2 = preexp_factor(x, field(0.1)).unwrap();
        assert_eq!(p2, 2.0 * p1);
        // the alternative form sqrt((3 - xi^2) / (3 (3 + xi^2)))
        let alt = 0.05 / 0.559_10
            * ((3.0 - 0.559_10f64.powi(2)) / (3.0 * (3.0 + 0.559_10f64.powi(2)))).sqrt();
        assert_relative_eq!(p1, alt, max_relative = 1e-15);
        let end = preexp_factor(xi(1.0), field(0.3)).unwrap();
        assert_relative_eq!(end, 0.3 * (1.0f64 / 6.0).sqrt(), max_relative = 1e-15);
        assert_eq!(
            preexp_factor(xi(0.0), field(0.1)),
            Err(Error::NonrelativisticEndpoint("P"))
        );
    }

    #[test]
    fn coulomb_examples() {
        let x = xi(0.4);
        let base = kernel::coulomb_base(&0.4, 1.0);
        let q = coulomb_factor(x, field(base), 0.5, 0.9).unwrap();
        let expected = (6.0 * 0.5 * (0.4 / 3f64.sqrt()).asin()).exp();
        assert_relative_eq!(q, expected, max_relative = 1e-14);
        assert_eq!(coulomb_factor(x, field(0.01), 0.0, 0.0).unwrap(), 1.0);

        let x = xi_of_epsilon(epsilon_hydrogenic(za(0.67)));
        let q = coulomb_factor(x, field(0.01), 0.67, 0.742_361_098_118_698_6).unwrap();
        assert!(q > 1.0);

        let err = coulomb_factor(x, field(1e-300), 0.67, 100.0).unwrap_err();
        assert!(matches!(err, Error::Overflow { what: "Q", .. }));
    }

    #[test]
    fn to_si_is_linear() {
        assert_eq!(to_si(0.0), 0.0);
        assert_relative_eq!(to_si(1.0), 7.763_441e20, max_relative = 1e-7);
        assert_eq!(to_si(2.0 * 0.37), 2.0 * to_si(0.37));
    }

    #[test]
    fn breakdown_is_self_consistent() {
        let state = StateSpec::hydrogenic(0.67).unwrap();
        let b = rate_factored(&state, field(0.05)).unwrap();
        assert_eq!(b.w_reduced, b.factor_product());
        assert_eq!(b.w_si, to_si(b.w_reduced));
        assert_relative_eq!(b.w_reduced.ln(), b.ln_w_reduced, max_relative = 1e-14);
        assert!(b.flags.is_empty());
    }

    #[test]
    fn factored_matches_direct() {
        let direct = rate_direct_1s(za(0.67), field(0.05)).unwrap();
        let b = rate_factored(&StateSpec::hydrogenic(0.67).unwrap(), field(0.05)).unwrap();
        assert_relative_eq!(direct, b.w_reduced, max_relative = 1e-10);
    }

    #[test]
    fn zero_field_limit_vanishes() {
        let state = StateSpec::hydrogenic(0.3).unwrap();
        let mut last = f64::INFINITY;
        for f in [1e-2, 1e-3, 1e-4, 1e-6] {
            let b = rate_factored(&state, field(f)).unwrap();
            assert!(b.ln_w_reduced < last);
            last = b.ln_w_reduced;
        }
        let b = rate_factored(&state, field(1e-12)).unwrap();
        assert_eq!(b.w_reduced, 0.0);
        assert!(b.flags.contains(Flag::Underflow));
        assert!(b.ln_w_reduced.is_finite() && b.ln_w_reduced < -1e9);
    }

    #[test]
    fn custom_state_is_linear_in_c_lambda_sq() {
        let base = StateSpec::custom(0.85, 0.7, 0.6).unwrap();
        let doubled = StateSpec::custom(0.85, 1.4, 0.6).unwrap();
        let a = rate_factored(&base, field(0.05)).unwrap();
        let b = rate_factored(&doubled, field(0.05)).unwrap();
        assert_eq!(b.w_reduced, 2.0 * a.w_reduced);
        assert_eq!(
            (a.xi, a.exp_factor, a.preexp, a.coulomb),
            (b.xi, b.exp_factor, b.preexp, b.coulomb)
        );
    }

    #[test]
    fn strong_and_weak_flags() {
        let state = StateSpec::hydrogenic(0.0073).unwrap();
        let b = rate_factored(&state, field(0.5)).unwrap();
        assert!(b.flags.contains(Flag::WeakSuppression));
        assert!(b.flags.contains(Flag::StrongField));
    }

    #[test]
    fn direct_form_hydrogen_exponent() {
        // xi = 0.0042131782998862217620, exponent 12.953359961872447883
        let z = za(1.0 / 137.036);
        let x = xi_of_epsilon(epsilon_hydrogenic(z));
        assert_relative_eq!(x.value(), 0.004_213_178_299_886_222, max_relative = 1e-13);
        assert_relative_eq!(
            tunnel_exponent(x, field(2e-8)),
            12.953_359_961_872_448,
            max_relative = 1e-13
        );
        let ln = ln_rate_direct_1s(z, field(2e-8));
        assert!(ln.is_finite());
        assert_eq!(rate_direct_1s(z, field(2e-8)).unwrap(), ln.exp());
    }
}
