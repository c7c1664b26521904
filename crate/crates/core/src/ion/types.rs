use serde::Serialize;

use crate::constants::{FINE_STRUCTURE, SCHWINGER_FIELD};
use crate::error::{domain, Result};

/// Coulomb coupling Z alpha of the nucleus, strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct CouplingZAlpha(f64);

impl CouplingZAlpha {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(domain(
                "zalpha",
                value,
                "Z alpha must lie in (0, 1); Z alpha >= 1 makes epsilon imaginary",
            ))
        }
    }

    /// Z alpha for nuclear charge `z` with the CODATA fine-structure constant.
    pub fn from_charge(z: u32) -> Result<Self> {
        Self::new(f64::from(z) * FINE_STRUCTURE)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Reduced energy eps = E0 / (m_e c^2) in (0, 1].
///
/// Alongside eps it stores `1 - eps^2`, computed without cancellation from
/// whatever the caller knows exactly (eps itself, the gap `1 - eps`, or Z alpha
/// for hydrogenic states). Every near-threshold formula reads the complement
/// rather than re-deriving it from a rounded eps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedEnergy {
    epsilon: f64,
    complement: f64,
}

impl ReducedEnergy {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(domain(
                "epsilon",
                epsilon,
                "reduced energy must lie in (0, 1]",
            ));
        }
        Ok(Self {
            epsilon,
            complement: (1.0 - epsilon) * (1.0 + epsilon),
        })
    }

    /// eps = 1 - gap, for gaps in (0, 1).
    pub fn from_gap(gap: f64) -> Result<Self> {
        if !(gap > 0.0 && gap < 1.0) {
            return Err(domain("delta", gap, "1 - epsilon must lie in (0, 1)"));
        }
        Ok(Self {
            epsilon: 1.0 - gap,
            complement: gap * (2.0 - gap),
        })
    }

    pub(crate) fn from_parts(epsilon: f64, complement: f64) -> Self {
        Self {
            epsilon,
            complement,
        }
    }

    pub fn value(self) -> f64 {
        self.epsilon
    }

    /// `1 - eps^2`.
    pub fn complement(self) -> f64 {
        self.complement
    }
}

/// Auxiliary variable xi in [0, 1]; xi = 0 exactly at eps = 1.
///
/// xi reaches 1 only in the limit eps -> 0, but rounds to 1.0 once eps drops
/// below ~1e-16, so the closed upper end is admitted.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct AuxXi(f64);

impl AuxXi {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(domain("xi", value, "xi must lie in [0, 1]"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Field strength in units of the Schwinger field.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct ReducedField(f64);

impl ReducedField {
    pub fn new(f: f64) -> Result<Self> {
        if f > 0.0 && f.is_finite() {
            Ok(Self(f))
        } else {
            Err(domain("f", f, "reduced field must be positive and finite"))
        }
    }

    /// From a field strength in V/m.
    pub fn from_volts_per_metre(field: f64) -> Result<Self> {
        Self::new(field / SCHWINGER_FIELD)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn volts_per_metre(self) -> f64 {
        self.0 * SCHWINGER_FIELD
    }
}

/// Externally supplied bound-state parameters for a general (many-electron) ion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CustomState {
    epsilon: ReducedEnergy,
    c_lambda_sq: f64,
    eta: f64,
}

impl CustomState {
    pub fn new(epsilon: f64, c_lambda_sq: f64, eta: f64) -> Result<Self> {
        let epsilon = ReducedEnergy::new(epsilon)?;
        if epsilon.value() >= 1.0 {
            return Err(domain(
                "epsilon",
                epsilon.value(),
                "a custom state needs epsilon < 1 (epsilon = 1 is zero binding)",
            ));
        }
        if !(c_lambda_sq > 0.0 && c_lambda_sq.is_finite()) {
            return Err(domain(
                "clambda2",
                c_lambda_sq,
                "C_lambda^2 must be positive",
            ));
        }
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(domain("eta", eta, "eta must be non-negative"));
        }
        Ok(Self {
            epsilon,
            c_lambda_sq,
            eta,
        })
    }

    pub fn epsilon(&self) -> ReducedEnergy {
        self.epsilon
    }

    pub fn c_lambda_sq(&self) -> f64 {
        self.c_lambda_sq
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// The Z alpha implied by eta = Z alpha eps / sqrt(1 - eps^2). It feeds the
    /// arcsin term of the Coulomb factor.
    pub fn implied_zalpha(&self) -> f64 {
        self.eta * self.epsilon.complement().sqrt() / self.epsilon.value()
    }
}

/// Initial bound state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    /// 1s1/2 ground state of a hydrogen-like ion.
    Hydrogenic {
        zalpha: CouplingZAlpha,
    },
    Custom(CustomState),
}

impl StateSpec {
    pub fn hydrogenic(zalpha: f64) -> Result<Self> {
        Ok(StateSpec::Hydrogenic {
            zalpha: CouplingZAlpha::new(zalpha)?,
        })
    }

    pub fn from_charge(z: u32) -> Result<Self> {
        Ok(StateSpec::Hydrogenic {
            zalpha: CouplingZAlpha::from_charge(z)?,
        })
    }

    pub fn custom(epsilon: f64, c_lambda_sq: f64, eta: f64) -> Result<Self> {
        Ok(StateSpec::Custom(CustomState::new(
            epsilon,
            c_lambda_sq,
            eta,
        )?))
    }
}
