//! Relativistic tunnel ionization of atomic ions in a constant crossed
//! electromagnetic field.
//!
//! The rate is available in two algebraically equivalent forms: the factored
//! form `w = (m_e c^2 / hbar) C_lambda^2 P Q Exp` for hydrogenic or general
//! ions ([`ion::rate_factored`]), and the direct 1s1/2 closed form
//! ([`ion::rate_direct_1s`]). [`refcheck`] certifies their equivalence in
//! 128-bit arithmetic, [`sweep`] tabulates rates over charge and field, and
//! [`cli`] is the command-line front end.

pub mod cli;
pub mod constants;
pub mod error;
pub mod ion;
pub mod precision;
pub mod refcheck;
pub mod sweep;

pub use error::{Error, Result};
