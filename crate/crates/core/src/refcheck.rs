//! Equivalence and limit checks for the rate formulas.
//!
//! [`compare_forms`] evaluates the direct 1s1/2 form and the factored form on
//! a grid of (Z alpha, f) points, in `f64` or in 128-bit arithmetic, and
//! reports the relative deviation of the two rates computed from the
//! difference of their logarithms. [`Perturbation`] lets a caller detune one
//! formula constant to confirm the comparison notices.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::ion::kernel::{self, Perturbation, StateParams};
use crate::ion::rate::{rate_factored, resolve};
use crate::ion::{ReducedEnergy, ReducedField, StateSpec};
use crate::precision::{Ext, Precision, Real};

/// The frozen comparison grid shipped in `fixtures/standard_grid.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardGrid {
    pub version: String,
    pub zalpha: Vec<f64>,
    pub f: Vec<f64>,
}

pub fn standard_grid() -> &'static StandardGrid {
    static GRID: OnceLock<StandardGrid> = OnceLock::new();
    GRID.get_or_init(|| {
        serde_json::from_str(include_str!("../fixtures/standard_grid.json"))
            .expect("bundled standard grid is valid JSON")
    })
}

/// Which constant a fault-injection run detunes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// sqrt(3) in the exponent of Exp.
    Sqrt3,
    /// The 2 inside the bracket of Q.
    QTwo,
    /// The 4 inside the bracket of the direct form.
    DirectFour,
    /// C_lambda^2.
    Clambda,
}

impl Fault {
    pub const ALL: [Fault; 4] = [Fault::Sqrt3, Fault::QTwo, Fault::DirectFour, Fault::Clambda];

    /// Perturbation that scales this constant by `scale`.
    pub fn perturbation(self, scale: f64) -> Perturbation {
        let mut p = Perturbation::NONE;
        match self {
            Fault::Sqrt3 => p.sqrt3_in_exp = scale,
            Fault::QTwo => p.two_in_coulomb_bracket = scale,
            Fault::DirectFour => p.four_in_direct_bracket = scale,
            Fault::Clambda => p.c_lambda_sq = scale,
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointDeviation {
    pub zalpha: f64,
    pub f: f64,
    pub ln_w_direct: f64,
    pub ln_w_factored: f64,
    /// |w_direct / w_factored - 1|
    pub rel_dev: f64,
}

/// A grid point where one of the forms failed to produce a finite logarithm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointFailure {
    pub zalpha: f64,
    pub f: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationReport {
    pub precision: Precision,
    pub perturbation: Perturbation,
    /// Grid points in (Z alpha, f) row-major order.
    pub points: Vec<PointDeviation>,
    pub failures: Vec<PointFailure>,
    pub max_dev: f64,
    pub worst_point: (f64, f64),
}

impl DeviationReport {
    pub fn grid(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| (p.zalpha, p.f)).collect()
    }

    pub fn rel_dev(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.rel_dev).collect()
    }

    /// True if no point failed and `max_dev` is within the precision's tolerance.
    pub fn passes(&self) -> bool {
        self.failures.is_empty() && self.max_dev <= self.precision.equivalence_tolerance()
    }
}

pub fn compare_forms(
    zalpha_grid: &[f64],
    f_grid: &[f64],
    precision: Precision,
) -> Result<DeviationReport> {
    compare_forms_with(zalpha_grid, f_grid, precision, &Perturbation::NONE)
}

/// [`compare_forms`] with detuned constants.
pub fn compare_forms_with(
    zalpha_grid: &[f64],
    f_grid: &[f64],
    precision: Precision,
    perturbation: &Perturbation,
) -> Result<DeviationReport> {
    if zalpha_grid.is_empty() || f_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    for &za in zalpha_grid {
        crate::ion::CouplingZAlpha::new(za)?;
    }
    for &f in f_grid {
        ReducedField::new(f)?;
    }

    let grid: Vec<(f64, f64)> = zalpha_grid
        .iter()
        .flat_map(|&za| f_grid.iter().map(move |&f| (za, f)))
        .collect();

    let outcomes: Vec<std::result::Result<PointDeviation, PointFailure>> = grid
        .par_iter()
        .map(|&(za, f)| match precision {
            Precision::Double => compare_point::<f64>(za, f, perturbation),
            Precision::Extended => compare_point::<Ext>(za, f, perturbation),
        })
        .collect();

    let mut points = Vec::with_capacity(outcomes.len());
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(p) => points.push(p),
            Err(e) => failures.push(e),
        }
    }

    let (max_dev, worst_point) = points.iter().fold((0.0, grid[0]), |(max, at), p| {
        if p.rel_dev > max {
            (p.rel_dev, (p.zalpha, p.f))
        } else {
            (max, at)
        }
    });

    Ok(DeviationReport {
        precision,
        perturbation: *perturbation,
        points,
        failures,
        max_dev,
        worst_point,
    })
}

fn compare_point<T: Real>(
    za: f64,
    f: f64,
    p: &Perturbation,
) -> std::result::Result<PointDeviation, PointFailure> {
    let state = StateParams::hydrogenic(T::from_f64(za));
    let f_t = T::from_f64(f);
    let ln_fact = kernel::ln_rate_factored(&state, &f_t, p);
    let ln_direct = kernel::ln_rate_direct(
        &state.zalpha,
        &state.eps,
        &state.xi,
        &f_t,
        p.four_in_direct_bracket,
    );
    if !ln_fact.is_finite() || !ln_direct.is_finite() {
        return Err(PointFailure {
            zalpha: za,
            f,
            reason: format!("non-finite log rate (direct {ln_direct:?}, factored {ln_fact:?})"),
        });
    }
    let diff = ln_direct.clone() - ln_fact.clone();
    let rel_dev = diff.exp_m1().to_f64().abs();
    Ok(PointDeviation {
        zalpha: za,
        f,
        ln_w_direct: ln_direct.to_f64(),
        ln_w_factored: ln_fact.to_f64(),
        rel_dev,
    })
}

/// One entry of the nonrelativistic-limit table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitResidual {
    /// 1 - eps
    pub delta: f64,
    /// [2 sqrt3 xi^3 / (1 + xi^2)] / [(2/3)(2 delta)^(3/2)]
    pub ratio: f64,
    pub residual: f64,
}

/// Default gap sequence 1e-2, 1e-3, ..., 1e-8.
pub fn default_delta_sequence() -> Vec<f64> {
    (2..=8).map(|k| 10f64.powi(-k)).collect()
}

/// Ratio of the relativistic exponent coefficient to its nonrelativistic
/// limit (2/3)(2 delta)^(3/2) at eps = 1 - delta.
pub fn limit_ratio<T: Real>(delta: &T) -> T {
    let one = T::from_f64(1.0);
    let two = T::from_f64(2.0);
    let eps = one - delta.clone();
    let complement = delta.clone() * (two.clone() - delta.clone());
    let xi = kernel::xi(&eps, &complement);
    let relativistic = kernel::tunnel_coefficient(&xi, 1.0);
    let two_delta = two * delta.clone();
    let nonrel = T::from_f64(2.0) / T::from_f64(3.0) * two_delta.clone() * two_delta.sqrt();
    relativistic / nonrel
}

/// Largest gap accepted by [`nonrel_limit_residual`].
pub const MAX_DELTA: f64 = 0.5;

pub fn nonrel_limit_residual(delta_seq: &[f64]) -> Result<Vec<LimitResidual>> {
    if delta_seq.is_empty() {
        return Err(Error::EmptyGrid);
    }
    delta_seq
        .iter()
        .map(|&delta| {
            if !(delta > 0.0 && delta <= MAX_DELTA) {
                return Err(domain("delta", delta, "1 - epsilon must lie in (0, 0.5]"));
            }
            // validates the gap the same way a caller-built energy would be
            ReducedEnergy::from_gap(delta)?;
            let ratio = limit_ratio(&delta);
            Ok(LimitResidual {
                delta,
                ratio,
                residual: (ratio - 1.0).abs(),
            })
        })
        .collect()
}

/// True if residuals strictly decrease along the table.
pub fn residuals_monotone(table: &[LimitResidual]) -> bool {
    table.windows(2).all(|w| w[1].residual < w[0].residual)
}

/// Residual threshold checked at delta = 1e-4.
pub const LIMIT_PROBE_DELTA: f64 = 1e-4;
pub const LIMIT_PROBE_TOLERANCE: f64 = 1e-3;

/// Pass condition of a limit table: monotone residuals and, if the table
/// contains delta = 1e-4, a residual there of at most 1e-3.
pub fn limits_pass(table: &[LimitResidual]) -> bool {
    residuals_monotone(table)
        && table
            .iter()
            .filter(|r| r.delta == LIMIT_PROBE_DELTA)
            .all(|r| r.residual <= LIMIT_PROBE_TOLERANCE)
}

/// Finite-difference and analytic values of d(ln w)/d(1/f).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogSlope {
    pub numeric: f64,
    pub analytic: f64,
    pub residual: f64,
}

pub const MAX_SLOPE_STEP: f64 = 0.1;
pub const MIN_SLOPE_STEP: f64 = 1e-12;

/// Central difference of ln w in u = 1/f with relative step `step`, against
/// the analytic slope -2 sqrt3 xi^3/(1 + xi^2) + (2 eta - 1) f assembled from
/// the factored form (Exp, and the f^(1 - 2 eta) from P and the Q bracket).
pub fn log_slope(state: &StateSpec, f: ReducedField, step: f64) -> Result<LogSlope> {
    if step.is_nan() || step > MAX_SLOPE_STEP {
        return Err(Error::InvalidStep {
            step,
            reason: "relative step must not exceed 0.1",
        });
    }
    if step < MIN_SLOPE_STEP {
        return Err(Error::InvalidStep {
            step,
            reason: "relative step is below the 1e-12 precision floor",
        });
    }
    let u = 1.0 / f.value();
    let u_hi = u * (1.0 + step);
    let u_lo = u * (1.0 - step);
    let ln_hi = rate_factored(state, ReducedField::new(1.0 / u_hi)?)?.ln_w_reduced;
    let ln_lo = rate_factored(state, ReducedField::new(1.0 / u_lo)?)?.ln_w_reduced;
    let numeric = (ln_hi - ln_lo) / (u_hi - u_lo);

    let params = resolve(state);
    let analytic =
        -kernel::tunnel_coefficient(&params.xi, 1.0) + (2.0 * params.eta - 1.0) * f.value();
    Ok(LogSlope {
        numeric,
        analytic,
        residual: (numeric / analytic - 1.0).abs(),
    })
}

pub fn log_slope_residual(state: &StateSpec, f: ReducedField, step: f64) -> Result<f64> {
    Ok(log_slope(state, f, step)?.residual)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_fixture_shape() {
        let g = standard_grid();
        assert_eq!(g.zalpha.len(), 8);
        assert_eq!(g.f.len(), 5);
        assert_eq!(g.version, "standard-grid/1");
    }

    #[test]
    fn empty_grid_is_rejected() {
        assert_eq!(
            compare_forms(&[], &[0.1], Precision::Double).unwrap_err(),
            Error::EmptyGrid
        );
        assert_eq!(
            compare_forms(&[0.1], &[], Precision::Extended).unwrap_err(),
            Error::EmptyGrid
        );
        assert!(compare_forms(&[1.2], &[0.1], Precision::Double).is_err());
        assert!(compare_forms(&[0.2], &[-0.1], Precision::Double).is_err());
    }

    #[test]
    fn single_point_shrinks_with_precision() {
        let d = compare_forms(&[0.6], &[0.05], Precision::Double).unwrap();
        let e = compare_forms(&[0.6], &[0.05], Precision::Extended).unwrap();
        assert!(d.max_dev <= 1e-10);
        assert!(e.max_dev <= 1e-25);
        assert!(e.max_dev <= d.max_dev);
        assert_eq!(e.grid(), vec![(0.6, 0.05)]);
    }

    #[test]
    fn doubled_c_lambda_is_detected() {
        let grid = standard_grid();
        let r = compare_forms_with(
            &grid.zalpha,
            &grid.f,
            Precision::Double,
            &Fault::Clambda.perturbation(2.0),
        )
        .unwrap();
        assert!(
            (r.max_dev - 0.5).abs() < 1e-9,
            "w_direct / (2 w) - 1 = -1/2"
        );
        assert!(!r.passes());
    }

    #[test]
    fn worst_point_is_consistent() {
        let grid = standard_grid();
        let r = compare_forms(&grid.zalpha, &grid.f, Precision::Double).unwrap();
        let max = r.rel_dev().into_iter().fold(0.0, f64::max);
        assert_eq!(max, r.max_dev);
        let at = r.points.iter().find(|p| p.rel_dev == max).unwrap();
        assert_eq!((at.zalpha, at.f), r.worst_point);
        assert!(r.rel_dev().iter().all(|d| d.is_finite() && *d >= 0.0));
    }

    #[test]
    fn limit_residuals_first_order() {
        let table = nonrel_limit_residual(&default_delta_sequence()).unwrap();
        assert!(residuals_monotone(&table));
        for w in table.windows(2) {
            if w[0].delta <= 1e-3 {
                let shrink = w[1].residual / w[0].residual;
                assert!((0.05..=0.15).contains(&shrink), "shrink {shrink}");
            }
        }
        assert!(limits_pass(&table));
    }

    #[test]
    fn limit_far_point_and_domain() {
        let far = nonrel_limit_residual(&[0.5]).unwrap();
        assert!(far[0].ratio.is_finite());
        assert!(far[0].residual > 1e-2);
        assert!(nonrel_limit_residual(&[-1.0]).is_err());
        assert!(nonrel_limit_residual(&[0.0]).is_err());
        assert!(nonrel_limit_residual(&[0.6]).is_err());
        assert!(nonrel_limit_residual(&[]).is_err());
    }

    #[test]
    fn limit_residual_matches_extended_oracle() {
        for d in default_delta_sequence() {
            let fast = nonrel_limit_residual(&[d]).unwrap()[0].residual;
            let exact = (limit_ratio(&Ext::from_f64(d)) - Ext::from_i64(1))
                .abs()
                .to_f64();
            assert!(
                (fast / exact - 1.0).abs() < 1e-6,
                "delta {d}: {fast} vs {exact}"
            );
        }
    }

    #[test]
    fn slope_step_guards() {
        let s = StateSpec::hydrogenic(0.3).unwrap();
        let f = ReducedField::new(0.05).unwrap();
        assert!(log_slope(&s, f, 0.2).is_err());
        assert!(log_slope(&s, f, 1e-13).is_err());
        assert!(log_slope(&s, f, f64::NAN).is_err());
        assert!(log_slope(&s, f, 1e-4).is_ok());
    }

    #[test]
    fn slope_for_uncharged_custom_state() {
        // eta = 0: only the Exp slope and the linear-in-f term of P remain
        let s = StateSpec::custom(0.8, 1.0, 0.0).unwrap();
        let f = ReducedField::new(0.05).unwrap();
        let slope = log_slope(&s, f, 1e-4).unwrap();
        let xi = kernel::xi(&0.8, &0.36);
        let expected = -kernel::tunnel_coefficient(&xi, 1.0) - 0.05;
        assert!((slope.analytic - expected).abs() < 1e-15);
        assert!(slope.residual < 1e-6);
    }

    #[test]
    fn slope_error_is_second_order() {
        let s = StateSpec::hydrogenic(0.3).unwrap();
        let f = ReducedField::new(0.05).unwrap();
        let r1 = log_slope_residual(&s, f, 1e-3).unwrap();
        let r2 = log_slope_residual(&s, f, 2e-3).unwrap();
        let ratio = r2 / r1;
        assert!((3.6..=4.4).contains(&ratio), "ratio {ratio}");
    }
}
