//! Differential cross-sections in the rest frame of the heavy particle.
//!
//! Two exact forms are provided: one built from the spin-averaged squared
//! amplitude and the recoil Jacobian, and one written purely in terms of the
//! incoming and outgoing light-particle energies. They are algebraically
//! identical and each is used to check the other. The three closed-form
//! limits (heavy scatterer, its non-relativistic Rutherford form, and the
//! ultra-relativistic projectile) are evaluated directly.
//!
//! All values are `d sigma / d Omega'` in GeV^-2.

use crate::amplitude::{spin_averaged_msq_trace, Coupling};
use crate::error::{Error, Result};
use crate::kinematics::{build_state, validate_theta, Beta, KinematicState, Momenta};
use crate::quadrature::composite_simpson;
use crate::scalar::Real;

/// Which formula produced a cross-section value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    FullRecoil,
    EnergyForm,
    MottLike,
    Rutherford,
    UltraRelativistic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSection<T> {
    pub value: T,
    pub provenance: Provenance,
}

impl<T> CrossSection<T> {
    fn new(value: T, provenance: Provenance) -> Self {
        Self { value, provenance }
    }
}

/// Node placement for angular integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    #[default]
    UniformTheta,
    UniformCosTheta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularGrid<T> {
    theta_min: T,
    theta_max: T,
    n_points: usize,
    spacing: Spacing,
}

impl<T: Real> AngularGrid<T> {
    pub fn new(theta_min: T, theta_max: T, n_points: usize, spacing: Spacing) -> Result<Self> {
        if theta_min == T::zero() {
            return Err(Error::InvalidGrid(
                "theta_min = 0: the forward cross-section is not integrable".into(),
            ));
        }
        validate_theta(theta_min).map_err(|e| Error::InvalidGrid(e.to_string()))?;
        validate_theta(theta_max).map_err(|e| Error::InvalidGrid(e.to_string()))?;
        if !(theta_min < theta_max) {
            return Err(Error::InvalidGrid(format!(
                "theta_min = {} must be below theta_max = {}",
                theta_min, theta_max
            )));
        }
        if n_points < 2 {
            return Err(Error::InvalidGrid(format!("n_points = {} < 2", n_points)));
        }
        Ok(Self {
            theta_min,
            theta_max,
            n_points,
            spacing,
        })
    }

    pub fn theta_min(&self) -> T {
        self.theta_min
    }

    pub fn theta_max(&self) -> T {
        self.theta_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    /// Same range and spacing with a different node count.
    pub fn with_points(&self, n_points: usize) -> Result<Self> {
        Self::new(self.theta_min, self.theta_max, n_points, self.spacing)
    }

    /// Step in the integration variable (theta or cos theta).
    fn step(&self) -> T {
        let intervals = T::from_usize(self.n_points - 1).unwrap();
        match self.spacing {
            Spacing::UniformTheta => (self.theta_max - self.theta_min) / intervals,
            Spacing::UniformCosTheta => (self.theta_min.cos() - self.theta_max.cos()) / intervals,
        }
    }

    /// Node angles in ascending order; the end points are exact.
    pub fn nodes(&self) -> Vec<T> {
        let last = self.n_points - 1;
        let h = self.step();
        (0..self.n_points)
            .map(|k| {
                if k == 0 {
                    return self.theta_min;
                }
                if k == last {
                    return self.theta_max;
                }
                let k = T::from_usize(k).unwrap();
                match self.spacing {
                    Spacing::UniformTheta => self.theta_min + h * k,
                    Spacing::UniformCosTheta => (self.theta_min.cos() - h * k).acos(),
                }
            })
            .collect()
    }
}

/// Incoming flux factor `m M / sqrt((p_i.q_i)^2 - m^2 M^2)`.
pub fn flux_factor<T: Real>(momenta: &Momenta<T>) -> T {
    let m = momenta.light_mass;
    let big_m = momenta.heavy_mass;
    let pq = momenta.light_in.dot(&momenta.heavy_in);
    m * big_m / ((pq - m * big_m) * (pq + m * big_m)).sqrt()
}

fn four_pi_squared<T: Real>() -> T {
    let four_pi = T::lit(4.0) * T::PI();
    four_pi * four_pi
}

/// Cross-section from the spin-averaged squared amplitude:
/// `(1/(2 pi)^2) (|p'|/|p|) m^2 M / (M + E - (|p|/|p'|) E' cos theta) * |M|^2`.
pub fn dsigma_recoil_form<T: Real>(
    state: &KinematicState<T>,
    coupling: &Coupling<T>,
) -> Result<CrossSection<T>> {
    validate_theta(state.theta)?;
    let m = state.light_mass();
    let big_m = state.heavy_mass();
    let p = state.momentum();
    let p_out = state.scattered_momentum();
    if !(p_out > T::zero()) {
        return Err(Error::ArithmeticFault("outgoing momentum vanishes".into()));
    }
    let recoil = big_m + state.energy - p / p_out * state.scattered_energy * state.theta.cos();
    if !(recoil > T::zero()) {
        return Err(Error::ArithmeticFault(format!(
            "recoil denominator {} is not positive",
            recoil
        )));
    }
    let msq = spin_averaged_msq_trace(&state.momenta, coupling)?;
    let two_pi = T::lit(2.0) * T::PI();
    let value = p_out / p * m * m * big_m / recoil * msq / (two_pi * two_pi);
    Ok(CrossSection::new(value, Provenance::FullRecoil))
}

/// Energy form evaluated from `E`, the energy loss `omega = E - E'` and the
/// outgoing kinetic energy `x = E' - m`:
///
/// `(E'^2-m^2)^{3/2} / (E^2-m^2)^{1/2} * m^2 / (E E' - m^2 (1 + E/M - E'/M))
///  * (g l_P)^4 / (4 pi)^2 * M^2 (E+E')^2 / 4
///  * 1/(2 m^2 (E-E')^2) * { E^2/M^2 + E'^2/M^2 - (1 + m^2/M^2)(E/M - E'/M) }`
///
/// `omega` and `x` are redundant (`omega + x = E - m`) but each is needed at
/// full relative precision: `omega` near forward scattering, `x` when the
/// projectile is nearly stopped.
pub fn dsigma_energy_form_parts<T: Real>(
    energy: T,
    energy_loss: T,
    scattered_kinetic: T,
    light_mass: T,
    heavy_mass: T,
    coupling: &Coupling<T>,
) -> Result<CrossSection<T>> {
    let (e, omega, x, m, big_m) = (
        energy,
        energy_loss,
        scattered_kinetic,
        light_mass,
        heavy_mass,
    );
    if !(m > T::zero()) {
        return Err(Error::NonPositiveMass(m.as_f64()));
    }
    if !(big_m > T::zero()) {
        return Err(Error::NonPositiveMass(big_m.as_f64()));
    }
    if omega == T::zero() {
        return Err(Error::ForwardSingularity);
    }
    if !(e > m) || omega < T::zero() || x < T::zero() {
        return Err(Error::NonPhysical(format!(
            "energies E = {}, E' = {} inconsistent with elastic scattering at m = {}",
            e,
            e - omega,
            m
        )));
    }
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let e_prime = e - omega;
    let m2 = m * m;
    let p2 = (e - m) * (e + m);
    let p_out2 = x * (x + two * m);
    // E E' - m^2 (1 + E/M - E'/M); for m <= M it is a sum of non-negative
    // terms when written through x.
    let recoil = if m <= big_m {
        m * (e - m) * (big_m - m) / big_m + x * (e + m2 / big_m)
    } else {
        p2 - omega * (e + m2 / big_m)
    };
    if !(recoil > T::zero()) {
        return Err(Error::ArithmeticFault(format!(
            "recoil denominator {} is not positive",
            recoil
        )));
    }

    let kinematic = p_out2 * p_out2.sqrt() / p2.sqrt() * m2 / recoil;
    let g4 = coupling.strength() * coupling.strength();
    let strength = g4 / four_pi_squared() * big_m * big_m * (e + e_prime) * (e + e_prime) / four;
    let y = e / big_m;
    let y_prime = e_prime / big_m;
    let bracket = y * y + y_prime * y_prime - (T::one() + m2 / (big_m * big_m)) * (omega / big_m);
    let value = kinematic * strength * bracket / (two * m2 * omega * omega);
    Ok(CrossSection::new(value, Provenance::EnergyForm))
}

/// Energy form from `E` and `E'` as separate inputs.
///
/// When `E'` comes from a solved state prefer [`dsigma_energy_form_state`],
/// which uses the cancellation-free energy loss.
pub fn dsigma_energy_form<T: Real>(
    energy: T,
    scattered_energy: T,
    theta: T,
    light_mass: T,
    heavy_mass: T,
    coupling: &Coupling<T>,
) -> Result<CrossSection<T>> {
    validate_theta(theta)?;
    if scattered_energy == energy {
        return Err(Error::ForwardSingularity);
    }
    dsigma_energy_form_parts(
        energy,
        energy - scattered_energy,
        scattered_energy - light_mass,
        light_mass,
        heavy_mass,
        coupling,
    )
}

pub fn dsigma_energy_form_state<T: Real>(
    state: &KinematicState<T>,
    coupling: &Coupling<T>,
) -> Result<CrossSection<T>> {
    validate_theta(state.theta)?;
    dsigma_energy_form_parts(
        state.energy,
        state.energy_loss,
        state.scattered_kinetic,
        state.light_mass(),
        state.heavy_mass(),
        coupling,
    )
}

fn half_angle_sin2<T: Real>(theta: T) -> T {
    let s = (theta / T::lit(2.0)).sin();
    s * s
}

fn positive_mass<T: Real>(mass: T) -> Result<()> {
    if mass > T::zero() && mass.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveMass(mass.as_f64()))
    }
}

/// Heavy-scatterer limit:
/// `g^4/(4 pi)^2 G^2 M^2 (1 - beta^2 sin^2(theta/2)) / (4 beta^4 sin^4(theta/2))`.
///
/// `beta = 1` is accepted; the value then vanishes at `theta = pi`.
pub fn mott_like_limit<T: Real>(
    beta: T,
    theta: T,
    heavy_mass: T,
    coupling: &Coupling<T>,
) -> Result<CrossSection<T>> {
    validate_theta(theta)?;
    positive_mass(heavy_mass)?;
    let b = Beta::new(beta)?.value();
    let s2 = half_angle_sin2(theta);
    let b2 = b * b;
    let g = coupling.newton_g();
    let g4 = coupling.g_squared() * coupling.g_squared();
    let numerator = (T::one() - b2 * s2).max(T::zero());
    let value = g4 / four_pi_squared() * g * g * heavy_mass * heavy_mass * numerator
        / (T::lit(4.0) * b2 * b2 * s2 * s2);
    Ok(CrossSection::new(value, Provenance::MottLike))
}

/// Newtonian Rutherford form `G^2 M^2 / (4 v^4 sin^4(theta/2))`.
pub fn rutherford_limit<T: Real>(
    velocity: T,
    theta: T,
    heavy_mass: T,
    newton_g: T,
) -> Result<CrossSection<T>> {
    validate_theta(theta)?;
    positive_mass(heavy_mass)?;
    let v = Beta::new(velocity)?.value();
    if !(newton_g > T::zero()) {
        return Err(Error::NonPhysical(format!(
            "G = {} must be positive",
            newton_g
        )));
    }
    let s2 = half_angle_sin2(theta);
    let v2 = v * v;
    let value = newton_g * newton_g * heavy_mass * heavy_mass / (T::lit(4.0) * v2 * v2 * s2 * s2);
    Ok(CrossSection::new(value, Provenance::Rutherford))
}

/// Massless-projectile limit in terms of `E` and `theta`.
pub fn ultrarelativistic_limit<T: Real>(
    energy: T,
    theta: T,
    heavy_mass: T,
    coupling: &Coupling<T>,
) -> Result<CrossSection<T>> {
    validate_theta(theta)?;
    positive_mass(heavy_mass)?;
    if !(energy > T::zero()) {
        return Err(Error::NonPositiveEnergy(energy.as_f64()));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let s2 = half_angle_sin2(theta);
    let c2 = (theta / two).cos().powi(2);
    let x = energy / heavy_mass;
    let recoil = one + two * x * s2;
    let g4 = coupling.strength() * coupling.strength();
    let value = g4 / four_pi_squared() * heavy_mass * heavy_mass / (T::lit(4.0) * s2 * s2)
        * (one + x * s2).powi(2)
        / recoil.powi(3)
        * (c2 + two * x * x * s2 * s2 / recoil);
    Ok(CrossSection::new(value, Provenance::UltraRelativistic))
}

/// `2 pi * integral dtheta sin(theta) f(theta)` over the grid, by composite
/// Simpson in theta or in cos(theta). Nodes are visited in ascending order.
pub fn integrate_solid_angle<T: Real, F>(grid: &AngularGrid<T>, mut f: F) -> Result<T>
where
    F: FnMut(T) -> Result<T>,
{
    let nodes = grid.nodes();
    let mut integrand = Vec::with_capacity(nodes.len());
    for theta in nodes {
        let value = f(theta)?;
        integrand.push(match grid.spacing {
            Spacing::UniformTheta => value * theta.sin(),
            Spacing::UniformCosTheta => value,
        });
    }
    let two_pi = T::lit(2.0) * T::PI();
    Ok(two_pi * composite_simpson(&integrand, grid.step()))
}

/// Angular integral of the energy form over the grid.
pub fn integrated_cross_section<T: Real>(
    energy: T,
    light_mass: T,
    heavy_mass: T,
    grid: &AngularGrid<T>,
    coupling: &Coupling<T>,
) -> Result<T> {
    integrate_solid_angle(grid, |theta| {
        let state = build_state(energy, light_mass, heavy_mass, theta, T::zero())?;
        Ok(dsigma_energy_form_state(&state, coupling)?.value)
    })
}

/// An integral together with the change seen on the last grid doubling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub error_estimate: T,
    pub n_points: usize,
}

/// Integrates the energy form, doubling the number of intervals until two
/// successive estimates agree to `rel_tol` or `max_points` is exceeded.
pub fn integrated_cross_section_converged<T: Real>(
    energy: T,
    light_mass: T,
    heavy_mass: T,
    grid: &AngularGrid<T>,
    coupling: &Coupling<T>,
    rel_tol: T,
    max_points: usize,
) -> Result<Integral<T>> {
    let mut grid = *grid;
    let mut previous = integrated_cross_section(energy, light_mass, heavy_mass, &grid, coupling)?;
    loop {
        let n = 2 * grid.n_points() - 1;
        if n > max_points {
            return Err(Error::NonPhysical(format!(
                "angular integral not converged to {} within {} nodes",
                rel_tol, max_points
            )));
        }
        grid = grid.with_points(n)?;
        let value = integrated_cross_section(energy, light_mass, heavy_mass, &grid, coupling)?;
        let error_estimate = (value - previous).abs();
        if error_estimate <= rel_tol * value.abs() {
            return Ok(Integral {
                value,
                error_estimate,
                n_points: n,
            });
        }
        previous = value;
    }
}
