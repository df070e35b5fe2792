//! Tree-level gravitational matrix element and its spin average.
//!
//! The matrix element is the product of the two vector currents, a
//! momentum-dependent coupling `(g l_P)^2 (p_i + p_f).(q_i + q_f) / 4` and
//! the propagator `1/t`. The spin average is available two ways: an explicit
//! sum of `|M|^2` over all sixteen spin assignments, and the closed form
//! obtained from the trace of the energy projectors. The first serves as the
//! reference for the second.

use num_complex::Complex;

use crate::dirac::{contract, GammaBasis, Representation, Spin, Spinor};
use crate::error::{Error, Result};
use crate::fourvector::{metric, FourVector};
use crate::kinematics::{KinematicState, Momenta};
use crate::scalar::Real;

/// Interaction strength above which leading order is not trusted.
pub const PERTURBATIVE_THRESHOLD: f64 = 0.1;

/// Newton constant and dimensionless gauge coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling<T> {
    newton_g: T,
    g_squared: T,
}

impl<T: Real> Coupling<T> {
    /// Coupling with `g^2 = 4 pi`, the value that reproduces Newtonian
    /// Rutherford scattering.
    pub fn new(newton_g: T) -> Result<Self> {
        Self::with_g_squared(newton_g, T::lit(4.0) * T::PI())
    }

    pub fn with_g_squared(newton_g: T, g_squared: T) -> Result<Self> {
        if !(newton_g > T::zero()) || !newton_g.is_finite() {
            return Err(Error::NonPhysical(format!(
                "G = {} must be positive",
                newton_g
            )));
        }
        if !(g_squared > T::zero()) || !g_squared.is_finite() {
            return Err(Error::NonPhysical(format!(
                "g^2 = {} must be positive",
                g_squared
            )));
        }
        Ok(Self {
            newton_g,
            g_squared,
        })
    }

    pub fn newton_g(&self) -> T {
        self.newton_g
    }

    pub fn g_squared(&self) -> T {
        self.g_squared
    }

    /// Planck length `sqrt(G)` in GeV^-1.
    pub fn planck_length(&self) -> T {
        self.newton_g.sqrt()
    }

    /// `(g l_P)^2 = g^2 G`.
    pub fn strength(&self) -> T {
        self.g_squared * self.newton_g
    }
}

/// Spin labels of the four external fermions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    pub light_in: Spin,
    pub light_out: Spin,
    pub heavy_in: Spin,
    pub heavy_out: Spin,
}

impl SpinConfig {
    pub const ALL_UP: SpinConfig = SpinConfig {
        light_in: Spin::Up,
        light_out: Spin::Up,
        heavy_in: Spin::Up,
        heavy_out: Spin::Up,
    };

    /// All sixteen assignments.
    pub fn all() -> impl Iterator<Item = SpinConfig> {
        Spin::ALL.into_iter().flat_map(|li| {
            Spin::ALL.into_iter().flat_map(move |lo| {
                Spin::ALL.into_iter().flat_map(move |hi| {
                    Spin::ALL.into_iter().map(move |ho| SpinConfig {
                        light_in: li,
                        light_out: lo,
                        heavy_in: hi,
                        heavy_out: ho,
                    })
                })
            })
        })
    }

    pub fn exchanged(self) -> Self {
        Self {
            light_in: self.heavy_in,
            light_out: self.heavy_out,
            heavy_in: self.light_in,
            heavy_out: self.light_out,
        }
    }
}

/// The matrix element split into its three factors:
/// `M = -coupling * currents / t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixElementFactors<T> {
    /// `(ubar_f gamma^mu u_i)(Ubar_f gamma_mu U_i)`.
    pub currents: Complex<T>,
    /// `(g l_P)^2 (p_i + p_f).(q_i + q_f) / 4`.
    pub coupling: T,
    /// Mandelstam `t`.
    pub t: T,
}

impl<T: Real> MatrixElementFactors<T> {
    pub fn value(&self) -> Complex<T> {
        -self.currents * (self.coupling / self.t)
    }
}

fn nonzero_t<T: Real>(momenta: &Momenta<T>) -> Result<T> {
    let t = momenta.t();
    if t == T::zero() || !t.is_finite() {
        return Err(Error::ForwardSingularity);
    }
    Ok(t)
}

/// `(g l_P)^2 (p_i + p_f).(q_i + q_f) / 4`.
pub fn interaction_strength<T: Real>(momenta: &Momenta<T>, coupling: &Coupling<T>) -> T {
    let light = momenta.light_in + momenta.light_out;
    let heavy = momenta.heavy_in + momenta.heavy_out;
    coupling.strength() * light.dot(&heavy) / T::lit(4.0)
}

/// Factorized matrix element for one spin assignment in a given
/// representation.
pub fn matrix_element_factors<T: Real>(
    basis: &GammaBasis<T>,
    momenta: &Momenta<T>,
    spins: SpinConfig,
    coupling: &Coupling<T>,
) -> Result<MatrixElementFactors<T>> {
    let t = nonzero_t(momenta)?;
    let (m, big_m) = (momenta.light_mass, momenta.heavy_mass);
    let u_i = basis.spinor(&momenta.light_in, m, spins.light_in)?;
    let u_f = basis.spinor(&momenta.light_out, m, spins.light_out)?;
    let big_u_i = basis.spinor(&momenta.heavy_in, big_m, spins.heavy_in)?;
    let big_u_f = basis.spinor(&momenta.heavy_out, big_m, spins.heavy_out)?;
    let light = basis.current(&u_f, &u_i);
    let heavy = basis.current(&big_u_f, &big_u_i);
    Ok(MatrixElementFactors {
        currents: contract(&light, &heavy),
        coupling: interaction_strength(momenta, coupling),
        t,
    })
}

/// Invariant matrix element for one spin assignment (Dirac representation).
pub fn matrix_element<T: Real>(
    momenta: &Momenta<T>,
    spins: SpinConfig,
    coupling: &Coupling<T>,
) -> Result<Complex<T>> {
    let basis = GammaBasis::new(Representation::Dirac);
    matrix_element_factors(&basis, momenta, spins, coupling).map(|f| f.value())
}

/// Spin-summed light-particle tensor
/// `(p_i^mu p_f^nu + p_i^nu p_f^mu - (p_i.p_f - m^2) eta^{mu nu}) / m^2`.
pub fn lepton_tensor<T: Real>(p_i: &FourVector<T>, p_f: &FourVector<T>, mass: T) -> [[T; 4]; 4] {
    let m2 = mass * mass;
    let off_shell = p_i.dot(p_f) - m2;
    let mut out = [[T::zero(); 4]; 4];
    for (mu, row) in out.iter_mut().enumerate() {
        for (nu, slot) in row.iter_mut().enumerate() {
            let mut value = p_i[mu] * p_f[nu] + p_i[nu] * p_f[mu];
            if mu == nu {
                value = value - off_shell * metric::<T>(mu);
            }
            *slot = value / m2;
        }
    }
    out
}

fn currents_for_all_spins<T: Real>(
    basis: &GammaBasis<T>,
    p_in: &FourVector<T>,
    p_out: &FourVector<T>,
    mass: T,
) -> Result<[[[Complex<T>; 4]; 2]; 2]> {
    let spinors = |p: &FourVector<T>| -> Result<[Spinor<T>; 2]> {
        Ok([
            basis.spinor(p, mass, Spin::Up)?,
            basis.spinor(p, mass, Spin::Down)?,
        ])
    };
    let ins = spinors(p_in)?;
    let outs = spinors(p_out)?;
    let mut out = [[[Complex::new(T::zero(), T::zero()); 4]; 2]; 2];
    for (a, u_in) in ins.iter().enumerate() {
        for (b, u_out) in outs.iter().enumerate() {
            out[a][b] = basis.current(u_out, u_in);
        }
    }
    Ok(out)
}

/// `(1/4) sum_spins |M|^2` by explicit enumeration, in the given
/// representation.
pub fn spin_averaged_msq_bruteforce_in<T: Real>(
    representation: Representation,
    momenta: &Momenta<T>,
    coupling: &Coupling<T>,
) -> Result<T> {
    let t = nonzero_t(momenta)?;
    let basis = GammaBasis::new(representation);
    let light = currents_for_all_spins(
        &basis,
        &momenta.light_in,
        &momenta.light_out,
        momenta.light_mass,
    )?;
    let heavy = currents_for_all_spins(
        &basis,
        &momenta.heavy_in,
        &momenta.heavy_out,
        momenta.heavy_mass,
    )?;
    let scale = interaction_strength(momenta, coupling) / t;
    let mut sum = T::zero();
    for lj in light.iter().flatten() {
        for hj in heavy.iter().flatten() {
            sum = sum + (contract(lj, hj) * scale).norm_sqr();
        }
    }
    Ok(sum / T::lit(4.0))
}

/// `(1/4) sum_spins |M|^2` by explicit enumeration (Dirac representation).
pub fn spin_averaged_msq_bruteforce<T: Real>(
    momenta: &Momenta<T>,
    coupling: &Coupling<T>,
) -> Result<T> {
    spin_averaged_msq_bruteforce_in(Representation::Dirac, momenta, coupling)
}

/// Closed-form spin average built from Minkowski products:
///
/// `(g l_P)^4 ((p_i+p_f).(q_i+q_f))^2 / 16 / (2 m^2 M^2 t^2) *
///  { p_i.q_i p_f.q_f + p_i.q_f p_f.q_i - m^2 q_i.q_f - M^2 p_i.p_f + 2 m^2 M^2 }`
pub fn spin_averaged_msq_trace<T: Real>(momenta: &Momenta<T>, coupling: &Coupling<T>) -> Result<T> {
    let t = nonzero_t(momenta)?;
    let (p_i, p_f) = (&momenta.light_in, &momenta.light_out);
    let (q_i, q_f) = (&momenta.heavy_in, &momenta.heavy_out);
    let m2 = momenta.light_mass * momenta.light_mass;
    let big_m2 = momenta.heavy_mass * momenta.heavy_mass;
    let two = T::lit(2.0);

    let sum_dot = (*p_i + *p_f).dot(&(*q_i + *q_f));
    let g4 = coupling.strength() * coupling.strength();
    let prefactor = g4 * sum_dot * sum_dot / T::lit(16.0) / (two * m2 * big_m2 * t * t);
    let bracket = p_i.dot(q_i) * p_f.dot(q_f) + p_i.dot(q_f) * p_f.dot(q_i)
        - m2 * q_i.dot(q_f)
        - big_m2 * p_i.dot(p_f)
        + two * m2 * big_m2;
    Ok(prefactor * bracket)
}

/// Dimensionless interaction strength `(g l_P)^2 M (E + E') / 2` and whether
/// it is small enough for leading order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbativity<T> {
    pub value: T,
    pub perturbative: bool,
}

pub fn perturbativity<T: Real>(
    heavy_mass: T,
    energy: T,
    scattered_energy: T,
    coupling: &Coupling<T>,
) -> Perturbativity<T> {
    let value = coupling.strength() * heavy_mass * (energy + scattered_energy) / T::lit(2.0);
    Perturbativity {
        value,
        perturbative: value < T::lit(PERTURBATIVE_THRESHOLD),
    }
}

pub fn perturbativity_indicator<T: Real>(
    state: &KinematicState<T>,
    coupling: &Coupling<T>,
) -> Perturbativity<T> {
    perturbativity(
        state.heavy_mass(),
        state.energy,
        state.scattered_energy,
        coupling,
    )
}
