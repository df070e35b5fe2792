//! Tree-level gravitational scattering of two Dirac particles of unequal
//! mass.
//!
//! The crate evaluates the invariant matrix element, its spin average (by an
//! explicit spinor sum and by the closed trace formula), the differential
//! cross-section in the rest frame of the heavier particle, and the
//! heavy-scatterer, Rutherford and ultra-relativistic limits.
//!
//! Numerical code is generic over the scalar type through [`Real`]
//! (`f32` or `f64`); the aliases below fix it to `f64`.

// Negated comparisons are how NaN inputs get rejected; index loops mirror the
// tensor notation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod amplitude;
pub mod cli;
pub mod cross_section;
pub mod dirac;
pub mod error;
pub mod fourvector;
pub mod kinematics;
pub mod quadrature;
pub mod scalar;
pub mod selftest;

pub use amplitude::{
    interaction_strength, lepton_tensor, matrix_element, perturbativity_indicator,
    spin_averaged_msq_bruteforce, spin_averaged_msq_trace, Coupling, SpinConfig,
};
pub use cross_section::{
    dsigma_energy_form, dsigma_energy_form_state, dsigma_recoil_form, integrate_solid_angle,
    integrated_cross_section, integrated_cross_section_converged, mott_like_limit,
    rutherford_limit, ultrarelativistic_limit, AngularGrid, CrossSection, Integral, Provenance,
    Spacing,
};
pub use dirac::{DiracMatrix, GammaBasis, Representation, Spin, Spinor};
pub use error::{Error, Result};
pub use fourvector::{minkowski_dot, FourVector};
pub use kinematics::{
    build_state, energy_loss, lorentz_boost, mandelstam_t, scattered_energy, solve_recoil, Beta,
    Boost, KinematicState, Momenta, Recoil,
};
pub use scalar::Real;
pub use selftest::{run_selftest, SelfTestReport};

pub type FourVector64 = FourVector<f64>;
pub type DiracMatrix64 = DiracMatrix<f64>;
pub type Spinor64 = Spinor<f64>;
pub type KinematicState64 = KinematicState<f64>;
pub type Momenta64 = Momenta<f64>;
pub type Coupling64 = Coupling<f64>;
pub type CrossSection64 = CrossSection<f64>;
pub type AngularGrid64 = AngularGrid<f64>;

/// Conversion factor from GeV^-2 to millibarn.
pub const GEV2_TO_MILLIBARN: f64 = 0.3894;
