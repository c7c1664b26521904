//! Closed-form kernels for the relativistic tunneling rate in a constant
//! crossed field, and the special functions they need.

pub mod flags;
pub mod gamma;
pub mod kernel;
pub mod rate;
pub mod types;

pub use flags::{Flag, Flags};
pub use gamma::gamma_fn;
pub use kernel::Perturbation;
pub use rate::{
    c_lambda_sq_hydrogenic, coulomb_factor, epsilon_hydrogenic, eta_of, exp_factor,
    ln_rate_direct_1s, preexp_factor, rate_direct_1s, rate_factored, to_si, tunnel_exponent,
    xi_of_epsilon, RateBreakdown,
};
pub use types::{AuxXi, CouplingZAlpha, CustomState, ReducedEnergy, ReducedField, StateSpec};
