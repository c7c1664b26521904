//! Frozen physical constants (CODATA 2018) and derived conversion factors.
//!
//! Output documents embed [`CONSTANTS_VERSION`]; bump it whenever a value
//! below changes so golden files cannot drift silently.

pub const CONSTANTS_VERSION: &str = "codata-2018/1";

/// Electron mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Reduced Planck constant, J s (exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge, C (exact).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Fine-structure constant.
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;
/// 1/alpha, the denominator used for the default Z alpha = Z / 137.035999.
pub const INVERSE_FINE_STRUCTURE: f64 = 137.035_999_084;

/// m_e c^2 / hbar in s^-1: the rate unit of the reduced formulas.
pub const RATE_UNIT_PER_SECOND: f64 = 7.763_440_711_050_11e20;

/// Schwinger field m_e^2 c^3 / (e hbar) in V/m.
pub const SCHWINGER_FIELD: f64 = 1.323_285_474_948_166e18;

/// Charged pion to electron mass ratio (m_pi = 139.57039 MeV, m_e = 0.51099895 MeV).
pub const PION_ELECTRON_MASS_RATIO: f64 = 273.132_44;
