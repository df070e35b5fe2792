use thiserror::Error;

/// Errors raised by kinematic construction and amplitude evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Lorentz index {0} out of range 0..=3")]
    IndexOutOfRange(usize),

    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),

    #[error("energy component must be positive, got {0}")]
    NonPositiveEnergy(f64),

    #[error("momentum is off-shell: p^2 = {square}, expected m^2 = {mass_squared}")]
    OffShell { square: f64, mass_squared: f64 },

    #[error("non-physical input: {0}")]
    NonPhysical(String),

    #[error("no elastic solution with m <= E' <= E for E = {energy}, m = {light_mass}, M = {heavy_mass}, theta = {theta}")]
    NoPhysicalRoot {
        energy: f64,
        light_mass: f64,
        heavy_mass: f64,
        theta: f64,
    },

    #[error("forward singularity: momentum transfer vanishes")]
    ForwardSingularity,

    #[error("boost velocity {0} is not subluminal")]
    Superluminal(f64),

    #[error("arithmetic fault: {0}")]
    ArithmeticFault(String),

    #[error("invalid angular grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
