//! Elastic 2 -> 2 kinematics in the rest frame of the heavy particle.
//!
//! The light particle (mass `m`, energy `E`) moves along +z and scatters off
//! the heavy particle (mass `M`) at rest. Energy conservation fixes the
//! outgoing light energy `E'` as a function of the polar angle; it is solved
//! in closed form for both the energy loss `omega = E - E'` and the outgoing
//! kinetic energy `E' - m`, so neither suffers cancellation when `E'` sits
//! close to `E` (heavy scatterer) or to `m` (slow projectile).

use crate::error::{Error, Result};
use crate::fourvector::FourVector;
use crate::scalar::Real;

/// Four external momenta of the process together with the two masses.
///
/// `transfer` is `light_out - light_in`, carried separately so that it can be
/// built without cancellation; for momenta assembled by [`Momenta::new`] it is
/// the plain difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Momenta<T> {
    pub light_in: FourVector<T>,
    pub light_out: FourVector<T>,
    pub heavy_in: FourVector<T>,
    pub heavy_out: FourVector<T>,
    pub transfer: FourVector<T>,
    pub light_mass: T,
    pub heavy_mass: T,
}

impl<T: Real> Momenta<T> {
    pub fn new(
        light_in: FourVector<T>,
        light_out: FourVector<T>,
        heavy_in: FourVector<T>,
        heavy_out: FourVector<T>,
        light_mass: T,
        heavy_mass: T,
    ) -> Self {
        Self {
            light_in,
            light_out,
            heavy_in,
            heavy_out,
            transfer: light_out - light_in,
            light_mass,
            heavy_mass,
        }
    }

    /// Mandelstam `t = (p_f - p_i)^2`.
    pub fn t(&self) -> T {
        self.transfer.square()
    }

    /// Swaps the roles of the two particles.
    pub fn exchanged(&self) -> Self {
        Self {
            light_in: self.heavy_in,
            light_out: self.heavy_out,
            heavy_in: self.light_in,
            heavy_out: self.light_out,
            transfer: -self.transfer,
            light_mass: self.heavy_mass,
            heavy_mass: self.light_mass,
        }
    }

    /// Applies the same pure boost to every momentum.
    pub fn boosted(&self, velocity: [T; 3]) -> Result<Self> {
        let boost = Boost::new(velocity)?;
        Ok(Self {
            light_in: boost.apply(&self.light_in),
            light_out: boost.apply(&self.light_out),
            heavy_in: boost.apply(&self.heavy_in),
            heavy_out: boost.apply(&self.heavy_out),
            transfer: boost.apply(&self.transfer),
            light_mass: self.light_mass,
            heavy_mass: self.heavy_mass,
        })
    }

    /// `p_i + q_i - p_f - q_f`; zero up to rounding for a physical process.
    pub fn conservation_residual(&self) -> FourVector<T> {
        self.light_in + self.heavy_in - self.light_out - self.heavy_out
    }
}

/// Pure Lorentz boost with velocity `v` (|v| < 1), mapping a momentum to the
/// frame moving with velocity `v`.
#[derive(Debug, Clone, Copy)]
pub struct Boost<T> {
    velocity: [T; 3],
    gamma: T,
    // (gamma - 1) / v^2, written as gamma^2 / (gamma + 1) to stay finite at v = 0.
    longitudinal: T,
}

impl<T: Real> Boost<T> {
    pub fn new(velocity: [T; 3]) -> Result<Self> {
        let v2 = velocity.iter().fold(T::zero(), |acc, v| acc + *v * *v);
        let speed = v2.sqrt();
        let limit = T::one() - T::lit(1e-9);
        if !(speed < limit) {
            return Err(Error::Superluminal(speed.as_f64()));
        }
        let gamma = T::one() / ((T::one() - speed) * (T::one() + speed)).sqrt();
        Ok(Self {
            velocity,
            gamma,
            longitudinal: gamma * gamma / (gamma + T::one()),
        })
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn apply(&self, p: &FourVector<T>) -> FourVector<T> {
        let [vx, vy, vz] = self.velocity;
        let [px, py, pz] = p.spatial();
        let v_dot_p = vx * px + vy * py + vz * pz;
        let t = self.gamma * (p.t() - v_dot_p);
        let coef = self.longitudinal * v_dot_p - self.gamma * p.t();
        FourVector::new(t, px + coef * vx, py + coef * vy, pz + coef * vz)
    }
}

/// Speed `|p|/E` of the incoming light particle.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Beta<T>(T);

impl<T: Real> Beta<T> {
    /// Accepts `0 < beta <= 1`; `beta = 1` is the massless endpoint used by
    /// the closed-form limits.
    pub fn new(value: T) -> Result<Self> {
        if value > T::zero() && value <= T::one() {
            Ok(Self(value))
        } else {
            Err(Error::NonPhysical(format!(
                "beta = {} outside (0, 1]",
                value
            )))
        }
    }

    pub fn from_energy(energy: T, mass: T) -> Result<Self> {
        validate_masses(energy, mass, T::one())?;
        let p = ((energy - mass) * (energy + mass)).sqrt();
        Self::new(p / energy)
    }

    pub fn value(self) -> T {
        self.0
    }
}

/// A fully solved on-shell configuration in the heavy-particle rest frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicState<T> {
    pub energy: T,
    pub scattered_energy: T,
    /// `E - E'`, computed without cancellation.
    pub energy_loss: T,
    /// `E' - m`, computed without cancellation.
    pub scattered_kinetic: T,
    pub theta: T,
    pub phi: T,
    pub momenta: Momenta<T>,
}

impl<T: Real> KinematicState<T> {
    pub fn light_mass(&self) -> T {
        self.momenta.light_mass
    }

    pub fn heavy_mass(&self) -> T {
        self.momenta.heavy_mass
    }

    /// Incoming three-momentum magnitude `|p|`.
    pub fn momentum(&self) -> T {
        self.momenta.light_in[3]
    }

    /// Outgoing three-momentum magnitude `|p'|`.
    pub fn scattered_momentum(&self) -> T {
        self.momenta.light_out.spatial_norm()
    }

    pub fn beta(&self) -> Result<Beta<T>> {
        Beta::from_energy(self.energy, self.light_mass())
    }
}

fn validate_masses<T: Real>(energy: T, light_mass: T, heavy_mass: T) -> Result<()> {
    if !(light_mass > T::zero()) {
        return Err(Error::NonPositiveMass(light_mass.as_f64()));
    }
    if !(heavy_mass > T::zero()) {
        return Err(Error::NonPositiveMass(heavy_mass.as_f64()));
    }
    if !(energy > light_mass) || !energy.is_finite() {
        return Err(Error::NonPhysical(format!(
            "energy {} must exceed the mass {}",
            energy, light_mass
        )));
    }
    Ok(())
}

pub(crate) fn validate_theta<T: Real>(theta: T) -> Result<()> {
    if theta == T::zero() {
        return Err(Error::ForwardSingularity);
    }
    let pi = T::PI() * (T::one() + T::epsilon() * T::lit(4.0));
    if !(theta > T::zero() && theta <= pi) {
        return Err(Error::NonPhysical(format!(
            "theta = {} outside (0, pi]",
            theta
        )));
    }
    Ok(())
}

/// Solution of the elastic energy-conservation condition at fixed angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recoil<T> {
    /// `omega = E - E'`.
    pub energy_loss: T,
    /// `E' - m`, the outgoing kinetic energy.
    pub scattered_kinetic: T,
}

impl<T: Real> Recoil<T> {
    /// `|p'|^2 = (E' - m)(E' + m)`.
    pub fn scattered_momentum_sq(&self, light_mass: T) -> T {
        let x = self.scattered_kinetic;
        x * (x + T::lit(2.0) * light_mass)
    }
}

/// Solves energy conservation for the outgoing light-particle energy.
///
/// Squaring the conservation condition gives a quadratic in `E'`; its
/// discriminant reduces to `cos^2(theta) |p|^4 (M^2 - m^2 sin^2(theta))`.
/// The root continuous with `E' -> E` as `theta -> 0` is taken. Both
/// `E - E'` and `E' - m` are returned, each from its own rearrangement of
/// the quadratic chosen to avoid subtractive cancellation, so the first
/// stays accurate near forward scattering and the second when the
/// projectile is nearly stopped. The root is then checked against the
/// unsquared relation. When `m >= M`, angles beyond `asin(M/m)` have no
/// solution and yield [`Error::NoPhysicalRoot`].
pub fn solve_recoil<T: Real>(
    energy: T,
    light_mass: T,
    heavy_mass: T,
    theta: T,
) -> Result<Recoil<T>> {
    validate_masses(energy, light_mass, heavy_mass)?;
    validate_theta(theta)?;
    let (e, m, big_m) = (energy, light_mass, heavy_mass);
    let no_root = || Error::NoPhysicalRoot {
        energy: e.as_f64(),
        light_mass: m.as_f64(),
        heavy_mass: big_m.as_f64(),
        theta: theta.as_f64(),
    };
    let two = T::lit(2.0);

    let kinetic = e - m;
    let p2 = kinetic * (e + m);
    let (sin, cos) = theta.sin_cos();
    let sin2 = sin * sin;
    let radicand = big_m * big_m - m * m * sin2;
    if radicand < T::zero() {
        return Err(no_root());
    }
    let root = radicand.sqrt();
    // (M + E)^2 - |p|^2 cos^2(theta)
    let quad = big_m * big_m + two * big_m * e + m * m + p2 * sin2;

    // omega = |p|^2 (M + E sin^2 - cos R) / quad
    let linear = big_m + e * sin2;
    let omega = if cos >= T::zero() {
        p2 * sin2 / (linear + cos * root)
    } else {
        p2 * (linear - cos * root) / quad
    };

    // x = E' - m solves quad x^2 - 2 b x + c = 0 with
    // b = (M + E)(M - m)(E - m) + |p|^2 cos^2 m, c = ((M - m)(E - m))^2;
    // the physical root is (b + cos |p|^2 R) / quad.
    let mass_gap = (big_m - m) * kinetic;
    let b = (big_m + e) * mass_gap + p2 * cos * cos * m;
    let signed = cos * p2 * root;
    let x = if (b >= T::zero()) == (signed >= T::zero()) {
        (b + signed) / quad
    } else {
        mass_gap * mass_gap / (b - signed)
    };

    let slack = T::consistency_tolerance();
    if !omega.is_finite() || !x.is_finite() || omega < T::zero() || x < T::zero() {
        return Err(no_root());
    }
    // Both rearrangements must describe the same root.
    if (omega + x - kinetic).abs() > slack * kinetic {
        return Err(no_root());
    }
    let recoil = Recoil {
        energy_loss: omega,
        scattered_kinetic: x,
    };

    // A projectile brought to rest (p' = 0, possible only for m >= M) has
    // no direction and does not describe scattering into theta.
    let p_out2 = recoil.scattered_momentum_sq(m);
    if p_out2 <= slack * p2 {
        return Err(no_root());
    }
    // Unsquared relation: |p|^2 - omega (M + E) = |p| |p'| cos(theta).
    let p = p2.sqrt();
    let p_out = p_out2.sqrt();
    let lhs = p2 - omega * (big_m + e);
    let rhs = p * p_out * cos;
    let scale = p2 + omega * (big_m + e) + rhs.abs();
    if (lhs - rhs).abs() > T::epsilon().sqrt() * T::lit(10.0) * scale {
        return Err(no_root());
    }
    Ok(recoil)
}

/// Energy lost by the light particle, `E - E'`, at scattering angle `theta`.
pub fn energy_loss<T: Real>(energy: T, light_mass: T, heavy_mass: T, theta: T) -> Result<T> {
    solve_recoil(energy, light_mass, heavy_mass, theta).map(|r| r.energy_loss)
}

/// Outgoing light-particle energy `E'` at scattering angle `theta`.
pub fn scattered_energy<T: Real>(energy: T, light_mass: T, heavy_mass: T, theta: T) -> Result<T> {
    energy_loss(energy, light_mass, heavy_mass, theta).map(|omega| energy - omega)
}

/// Builds the on-shell configuration: `p_i` along +z, `p_f` at polar angle
/// `theta` and azimuth `phi`, `q_i = (M, 0)` and `q_f` from conservation.
pub fn build_state<T: Real>(
    energy: T,
    light_mass: T,
    heavy_mass: T,
    theta: T,
    phi: T,
) -> Result<KinematicState<T>> {
    if !phi.is_finite() {
        return Err(Error::NonPhysical(format!("phi = {} is not finite", phi)));
    }
    let recoil = solve_recoil(energy, light_mass, heavy_mass, theta)?;
    let (e, m, big_m) = (energy, light_mass, heavy_mass);
    let omega = recoil.energy_loss;
    let e_prime = e - omega;
    let p = ((e - m) * (e + m)).sqrt();
    let p_out = recoil.scattered_momentum_sq(m).sqrt();

    let (sin, cos) = theta.sin_cos();
    let (sin_phi, cos_phi) = phi.sin_cos();
    let half_sin = (theta / T::lit(2.0)).sin();

    let light_in = FourVector::new(e, T::zero(), T::zero(), p);
    let light_out = FourVector::new(
        e_prime,
        p_out * sin * cos_phi,
        p_out * sin * sin_phi,
        p_out * cos,
    );

    // p' cos(theta) - p = (p' - p) - 2 p' sin^2(theta/2), with
    // p' - p = -omega (E + E') / (p + p').
    let dp = -omega * (e + e_prime) / (p + p_out);
    let kz = dp - T::lit(2.0) * p_out * half_sin * half_sin;
    let transfer = FourVector::new(-omega, light_out[1], light_out[2], kz);

    let heavy_in = FourVector::new(big_m, T::zero(), T::zero(), T::zero());
    let heavy_out = heavy_in - transfer;

    Ok(KinematicState {
        energy: e,
        scattered_energy: e_prime,
        energy_loss: omega,
        scattered_kinetic: recoil.scattered_kinetic,
        theta,
        phi,
        momenta: Momenta {
            light_in,
            light_out,
            heavy_in,
            heavy_out,
            transfer,
            light_mass: m,
            heavy_mass: big_m,
        },
    })
}

/// Mandelstam `t = (p_f - p_i)^2`; strictly negative for `theta > 0`.
pub fn mandelstam_t<T: Real>(state: &KinematicState<T>) -> T {
    state.momenta.t()
}

/// Boosts all four external momenta by the same pure boost.
pub fn lorentz_boost<T: Real>(state: &KinematicState<T>, velocity: [T; 3]) -> Result<Momenta<T>> {
    state.momenta.boosted(velocity)
}
