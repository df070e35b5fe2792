//! Gamma matrices, positive-energy Dirac spinors and bilinears.
//!
//! Spinors are normalized to `ubar u = 1`, so the spin sum is the energy
//! projector `(pslash + m) / 2m`. Two representations are available: the
//! Dirac (standard) representation used by default, and the chiral one,
//! which exists to check that spin-summed quantities do not depend on the
//! choice.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fourvector::{metric, FourVector};
use crate::scalar::Real;

/// A 4x4 complex matrix acting on Dirac spinors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracMatrix<T> {
    entries: [[Complex<T>; 4]; 4],
}

/// A four-component column spinor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor<T> {
    entries: [Complex<T>; 4],
}

/// A row spinor, typically the Dirac adjoint `u^dagger gamma^0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjointSpinor<T> {
    entries: [Complex<T>; 4],
}

/// Spin projection along the rest-frame z axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const ALL: [Spin; 2] = [Spin::Up, Spin::Down];

    fn two_spinor<T: Real>(self) -> [Complex<T>; 2] {
        match self {
            Spin::Up => [
                Complex::new(T::one(), T::zero()),
                Complex::new(T::zero(), T::zero()),
            ],
            Spin::Down => [
                Complex::new(T::zero(), T::zero()),
                Complex::new(T::one(), T::zero()),
            ],
        }
    }
}

/// Matrix representation of the Clifford algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Representation {
    #[default]
    Dirac,
    Chiral,
}

#[inline]
fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: Real> DiracMatrix<T> {
    pub fn from_entries(entries: [[Complex<T>; 4]; 4]) -> Self {
        Self { entries }
    }

    pub fn zero() -> Self {
        Self {
            entries: [[czero(); 4]; 4],
        }
    }

    pub fn identity() -> Self {
        Self::scalar(T::one())
    }

    /// `s` times the identity.
    pub fn scalar(s: T) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.entries[i][i] = c(s, T::zero());
        }
        m
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row][col]
    }

    pub fn entries(&self) -> &[[Complex<T>; 4]; 4] {
        &self.entries
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut out = *self;
        out.entries.iter_mut().flatten().for_each(|z| *z = *z * s);
        out
    }

    pub fn trace(&self) -> Complex<T> {
        (0..4).fold(czero(), |acc, i| acc + self.entries[i][i])
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> T {
        self.entries
            .iter()
            .flatten()
            .fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }

    pub fn apply(&self, u: &Spinor<T>) -> Spinor<T> {
        let mut out = [czero(); 4];
        for (i, row) in self.entries.iter().enumerate() {
            out[i] = row
                .iter()
                .zip(u.entries.iter())
                .fold(czero(), |acc, (a, b)| acc + *a * *b);
        }
        Spinor { entries: out }
    }

    /// `a b + b a`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }
}

impl<T: Real> Add for DiracMatrix<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.entries[i][j] = out.entries[i][j] + rhs.entries[i][j];
            }
        }
        out
    }
}

impl<T: Real> Sub for DiracMatrix<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.entries[i][j] = out.entries[i][j] - rhs.entries[i][j];
            }
        }
        out
    }
}

impl<T: Real> Mul for DiracMatrix<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.entries[i][j] = (0..4).fold(czero(), |acc, k| {
                    acc + self.entries[i][k] * rhs.entries[k][j]
                });
            }
        }
        out
    }
}

impl<T: Real> Mul<T> for DiracMatrix<T> {
    type Output = Self;

    fn mul(self, s: T) -> Self {
        self.scale(c(s, T::zero()))
    }
}

impl<T: Real> Spinor<T> {
    pub fn new(entries: [Complex<T>; 4]) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> [Complex<T>; 4] {
        self.entries
    }

    /// Euclidean norm `sqrt(u^dagger u)`.
    pub fn norm(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    /// Outer product `u vbar`.
    pub fn outer(&self, row: &AdjointSpinor<T>) -> DiracMatrix<T> {
        let mut m = DiracMatrix::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.entries[i][j] = self.entries[i] * row.entries[j];
            }
        }
        m
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.entries.iter_mut().zip(other.entries.iter()) {
            *a = *a - *b;
        }
        out
    }
}

impl<T: Real> AdjointSpinor<T> {
    pub fn new(entries: [Complex<T>; 4]) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> [Complex<T>; 4] {
        self.entries
    }

    /// Row-times-column product `vbar u`.
    pub fn dot(&self, u: &Spinor<T>) -> Complex<T> {
        self.entries
            .iter()
            .zip(u.entries.iter())
            .fold(czero(), |acc, (a, b)| acc + *a * *b)
    }

    /// `vbar M u` without forming the intermediate spinor twice.
    pub fn sandwich(&self, m: &DiracMatrix<T>, u: &Spinor<T>) -> Complex<T> {
        self.dot(&m.apply(u))
    }
}

/// Gamma matrices of one representation together with the spinor
/// construction consistent with it.
#[derive(Debug, Clone)]
pub struct GammaBasis<T> {
    representation: Representation,
    gammas: [DiracMatrix<T>; 4],
}

impl<T: Real> GammaBasis<T> {
    pub fn new(representation: Representation) -> Self {
        let o = T::one();
        let z = T::zero();
        let one = c(o, z);
        let zero = czero();
        let i = c(z, o);
        // Pauli matrices, indexed 1..=3 through sigma[k - 1].
        let sigma = [
            [[zero, one], [one, zero]],
            [[zero, -i], [i, zero]],
            [[one, zero], [zero, -one]],
        ];

        let mut gammas = [DiracMatrix::zero(); 4];
        match representation {
            Representation::Dirac => {
                // gamma^0 = diag(1, 1, -1, -1); gamma^k = [[0, sigma_k], [-sigma_k, 0]]
                for a in 0..2 {
                    gammas[0].entries[a][a] = one;
                    gammas[0].entries[a + 2][a + 2] = -one;
                }
            }
            Representation::Chiral => {
                // gamma^0 = [[0, 1], [1, 0]]; spatial blocks as in the Dirac case
                for a in 0..2 {
                    gammas[0].entries[a][a + 2] = one;
                    gammas[0].entries[a + 2][a] = one;
                }
            }
        }
        for k in 1..4 {
            let s = sigma[k - 1];
            for a in 0..2 {
                for b in 0..2 {
                    gammas[k].entries[a][b + 2] = s[a][b];
                    gammas[k].entries[a + 2][b] = -s[a][b];
                }
            }
        }

        Self {
            representation,
            gammas,
        }
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    /// `gamma^mu` for `mu` in `0..=3`.
    pub fn gamma(&self, mu: usize) -> Result<&DiracMatrix<T>> {
        self.gammas.get(mu).ok_or(Error::IndexOutOfRange(mu))
    }

    /// All four `gamma^mu`.
    pub fn gammas(&self) -> &[DiracMatrix<T>; 4] {
        &self.gammas
    }

    /// `gamma^mu p_mu`.
    pub fn slash(&self, p: &FourVector<T>) -> DiracMatrix<T> {
        let lowered = p.lowered();
        (0..4).fold(DiracMatrix::zero(), |acc, mu| {
            acc + self.gammas[mu] * lowered[mu]
        })
    }

    /// Positive-energy spinor `u(p, spin)` normalized to `ubar u = 1`.
    ///
    /// The spin label refers to the rest-frame z axis; the spinor is the
    /// rest-frame state boosted to `p`. The energy entering the spinor is
    /// reconstructed from the three-momentum so that the normalization
    /// holds to rounding regardless of how `p^0` was obtained.
    pub fn spinor(&self, p: &FourVector<T>, mass: T, spin: Spin) -> Result<Spinor<T>> {
        check_on_shell(p, mass)?;
        let [px, py, pz] = p.spatial();
        let energy = (mass * mass + px * px + py * py + pz * pz).sqrt();
        let e_plus_m = energy + mass;
        let chi = spin.two_spinor::<T>();
        // (sigma . p) chi
        let sp = [
            chi[0] * c(pz, T::zero()) + chi[1] * c(px, -py),
            chi[0] * c(px, py) - chi[1] * c(pz, T::zero()),
        ];

        let entries = match self.representation {
            Representation::Dirac => {
                let norm = (e_plus_m / (T::lit(2.0) * mass)).sqrt();
                let lower = norm / e_plus_m;
                [chi[0] * norm, chi[1] * norm, sp[0] * lower, sp[1] * lower]
            }
            Representation::Chiral => {
                // u = ((E + m - sigma.p) chi, (E + m + sigma.p) chi) / sqrt(4 m (E + m))
                let norm = T::one() / (T::lit(4.0) * mass * e_plus_m).sqrt();
                let em = c(e_plus_m, T::zero());
                [
                    (chi[0] * em - sp[0]) * norm,
                    (chi[1] * em - sp[1]) * norm,
                    (chi[0] * em + sp[0]) * norm,
                    (chi[1] * em + sp[1]) * norm,
                ]
            }
        };
        Ok(Spinor { entries })
    }

    /// Dirac adjoint `u^dagger gamma^0`.
    pub fn adjoint(&self, u: &Spinor<T>) -> AdjointSpinor<T> {
        let g0 = &self.gammas[0];
        let mut out = [czero(); 4];
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = (0..4).fold(czero(), |acc, k| {
                acc + u.entries[k].conj() * g0.entries[k][j]
            });
        }
        AdjointSpinor { entries: out }
    }

    /// Vector current `ubar_f gamma^mu u_i`, contravariant index.
    pub fn current(&self, u_f: &Spinor<T>, u_i: &Spinor<T>) -> [Complex<T>; 4] {
        let bar = self.adjoint(u_f);
        let mut j = [czero(); 4];
        for (mu, slot) in j.iter_mut().enumerate() {
            *slot = bar.sandwich(&self.gammas[mu], u_i);
        }
        j
    }

    /// Positive-energy projector `(pslash + m) / 2m`.
    pub fn projector(&self, p: &FourVector<T>, mass: T) -> Result<DiracMatrix<T>> {
        if !(mass > T::zero()) {
            return Err(Error::NonPositiveMass(mass.as_f64()));
        }
        let two_m = T::lit(2.0) * mass;
        Ok((self.slash(p) + DiracMatrix::scalar(mass)) * (T::one() / two_m))
    }

    /// Residual `|(pslash - m) u|`, used to verify the Dirac equation.
    pub fn dirac_residual(&self, p: &FourVector<T>, mass: T, u: &Spinor<T>) -> T {
        let lhs = self.slash(p).apply(u);
        lhs.sub(&DiracMatrix::scalar(mass).apply(u)).norm()
    }
}

fn check_on_shell<T: Real>(p: &FourVector<T>, mass: T) -> Result<()> {
    if !(mass > T::zero()) {
        return Err(Error::NonPositiveMass(mass.as_f64()));
    }
    if !(p.t() > T::zero()) {
        return Err(Error::NonPositiveEnergy(p.t().as_f64()));
    }
    // p^2 carries absolute rounding of order eps * (p^0)^2, so the check is
    // scaled by the larger of m^2 and (p^0)^2.
    let m2 = mass * mass;
    let scale = m2.max(p.t() * p.t());
    if !p.is_finite() || (p.square() - m2).abs() > T::consistency_tolerance() * scale {
        return Err(Error::OffShell {
            square: p.square().as_f64(),
            mass_squared: m2.as_f64(),
        });
    }
    Ok(())
}

/// Contracts two contravariant complex vectors with the metric.
pub fn contract<T: Real>(a: &[Complex<T>; 4], b: &[Complex<T>; 4]) -> Complex<T> {
    (0..4).fold(czero(), |acc, mu| acc + a[mu] * b[mu] * metric::<T>(mu))
}

/// `gamma^mu` in the Dirac representation.
pub fn gamma_matrix<T: Real>(mu: usize) -> Result<DiracMatrix<T>> {
    GammaBasis::new(Representation::Dirac).gamma(mu).copied()
}

/// Feynman slash `gamma^mu p_mu` in the Dirac representation.
pub fn feynman_slash<T: Real>(p: &FourVector<T>) -> DiracMatrix<T> {
    GammaBasis::new(Representation::Dirac).slash(p)
}

/// Positive-energy spinor in the Dirac representation.
pub fn dirac_spinor<T: Real>(p: &FourVector<T>, mass: T, spin: Spin) -> Result<Spinor<T>> {
    GammaBasis::new(Representation::Dirac).spinor(p, mass, spin)
}

/// Dirac adjoint in the Dirac representation.
pub fn adjoint_spinor<T: Real>(u: &Spinor<T>) -> AdjointSpinor<T> {
    GammaBasis::new(Representation::Dirac).adjoint(u)
}

/// `ubar_f gamma^mu u_i` in the Dirac representation.
pub fn bilinear_current<T: Real>(u_f: &Spinor<T>, u_i: &Spinor<T>) -> [Complex<T>; 4] {
    GammaBasis::new(Representation::Dirac).current(u_f, u_i)
}

/// `(pslash + m) / 2m` in the Dirac representation.
pub fn energy_projector<T: Real>(p: &FourVector<T>, mass: T) -> Result<DiracMatrix<T>> {
    GammaBasis::new(Representation::Dirac).projector(p, mass)
}

pub fn trace<T: Real>(m: &DiracMatrix<T>) -> Complex<T> {
    m.trace()
}
