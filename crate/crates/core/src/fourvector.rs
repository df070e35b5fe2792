//! Contravariant four-vectors with metric signature (+, -, -, -).

use std::ops::{Add, Index, Mul, Neg, Sub};

use crate::scalar::Real;

/// Diagonal of the Minkowski metric.
pub const METRIC_DIAGONAL: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Metric component `eta^{mu mu}` (equal to `eta_{mu mu}`).
#[inline]
pub fn metric<T: Real>(mu: usize) -> T {
    if mu == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// A contravariant four-vector `(t, x, y, z)`, components in GeV.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FourVector<T> {
    components: [T; 4],
}

impl<T: Real> FourVector<T> {
    pub fn new(t: T, x: T, y: T, z: T) -> Self {
        Self {
            components: [t, x, y, z],
        }
    }

    pub fn from_components(components: [T; 4]) -> Self {
        Self { components }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    /// Builds the on-shell momentum with the given three-momentum and mass.
    pub fn on_shell(mass: T, px: T, py: T, pz: T) -> Self {
        let energy = (mass * mass + px * px + py * py + pz * pz).sqrt();
        Self::new(energy, px, py, pz)
    }

    #[inline]
    pub fn components(&self) -> [T; 4] {
        self.components
    }

    #[inline]
    pub fn t(&self) -> T {
        self.components[0]
    }

    #[inline]
    pub fn spatial(&self) -> [T; 3] {
        [self.components[1], self.components[2], self.components[3]]
    }

    /// Euclidean norm of the spatial part.
    pub fn spatial_norm(&self) -> T {
        let [x, y, z] = self.spatial();
        (x * x + y * y + z * z).sqrt()
    }

    /// Minkowski product `a^0 b^0 - a.b`.
    #[inline]
    pub fn dot(&self, other: &Self) -> T {
        let a = &self.components;
        let b = &other.components;
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
    }

    #[inline]
    pub fn square(&self) -> T {
        self.dot(self)
    }

    /// Covariant components `p_mu = eta_{mu nu} p^nu`.
    pub fn lowered(&self) -> [T; 4] {
        let c = self.components;
        [c[0], -c[1], -c[2], -c[3]]
    }

    /// Inverse of [`FourVector::lowered`].
    pub fn raised(covariant: [T; 4]) -> Self {
        let c = covariant;
        Self::new(c[0], -c[1], -c[2], -c[3])
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.is_finite())
    }

    pub fn max_abs(&self) -> T {
        self.components
            .iter()
            .fold(T::zero(), |acc, c| acc.max(c.abs()))
    }
}

impl<T: Real> Index<usize> for FourVector<T> {
    type Output = T;

    fn index(&self, mu: usize) -> &T {
        &self.components[mu]
    }
}

impl<T: Real> Add for FourVector<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let (a, b) = (self.components, rhs.components);
        Self::new(a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])
    }
}

impl<T: Real> Sub for FourVector<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        let (a, b) = (self.components, rhs.components);
        Self::new(a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3])
    }
}

impl<T: Real> Neg for FourVector<T> {
    type Output = Self;

    fn neg(self) -> Self {
        let a = self.components;
        Self::new(-a[0], -a[1], -a[2], -a[3])
    }
}

impl<T: Real> Mul<T> for FourVector<T> {
    type Output = Self;

    fn mul(self, s: T) -> Self {
        let a = self.components;
        Self::new(a[0] * s, a[1] * s, a[2] * s, a[3] * s)
    }
}

/// Minkowski product of two four-vectors.
#[inline]
pub fn minkowski_dot<T: Real>(a: &FourVector<T>, b: &FourVector<T>) -> T {
    a.dot(b)
}
