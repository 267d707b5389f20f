//! Unit conversion constants. Internal energy unit is GHz.

/// GHz per cm^-1.
pub const GHZ_PER_CM: f64 = 29.9792458;
/// Bohr magneton over Planck constant, GHz per Tesla.
pub const MU_B_GHZ_PER_T: f64 = 13.9962449;
/// Boltzmann constant over Planck constant, GHz per Kelvin.
pub const KB_GHZ_PER_K: f64 = 20.8366122;
/// k_B / mu_B in Tesla per Kelvin; exchange constants in K convert to mean fields in T.
pub const KB_OVER_MUB_T_PER_K: f64 = KB_GHZ_PER_K / MU_B_GHZ_PER_T;
