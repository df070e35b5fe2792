//! Seeded invariant suites behind the `selftest` command.
//!
//! Every suite reports the largest deviation it saw over its sample together
//! with the tolerance it is held to. The report is a pure function of the
//! seed: no timings, no addresses, fixed iteration order.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::amplitude::{
    matrix_element, spin_averaged_msq_bruteforce, spin_averaged_msq_bruteforce_in,
    spin_averaged_msq_trace, Coupling, SpinConfig,
};
use crate::cross_section::{
    dsigma_energy_form_state, dsigma_recoil_form, integrate_solid_angle, mott_like_limit,
    rutherford_limit, ultrarelativistic_limit, AngularGrid, Spacing,
};
use crate::dirac::{DiracMatrix, GammaBasis, Representation, Spin};
use crate::error::Result;
use crate::fourvector::{metric, FourVector};
use crate::kinematics::{build_state, KinematicState};

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Number of random states drawn for the sampled suites.
pub const SAMPLE_SIZE: usize = 1000;

/// Outcome of one invariant suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.max_deviation.is_finite() && self.max_deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfTestReport {
    pub seed: u64,
    pub suites: Vec<SuiteOutcome>,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteOutcome::passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteOutcome> {
        self.suites.iter().find(|s| s.name == name)
    }
}

impl fmt::Display for SelfTestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "selftest seed {}", self.seed)?;
        for s in &self.suites {
            writeln!(
                f,
                "{:<26} samples {:>5}  max deviation {:.3e}  tolerance {:.1e}  {}",
                s.name,
                s.samples,
                s.max_deviation,
                s.tolerance,
                if s.passed() { "PASS" } else { "FAIL" }
            )?;
        }
        let passed = self.suites.iter().filter(|s| s.passed()).count();
        writeln!(
            f,
            "{}: {}/{} suites passed",
            if self.passed() { "PASS" } else { "FAIL" },
            passed,
            self.suites.len()
        )
    }
}

/// Draws a valid state with `m, M` log-uniform in [0.1, 100] GeV, `E/M`
/// log-uniform in [1e-4, 1e2] and `theta` uniform in [1e-3, pi]. Draws that
/// are not physical (`E <= m`, or an angle beyond the kinematic maximum when
/// `m > M`) are rejected and redrawn.
pub fn sample_state<R: Rng>(rng: &mut R) -> KinematicState<f64> {
    loop {
        let m = log_uniform(rng, 0.1, 100.0);
        let big_m = log_uniform(rng, 0.1, 100.0);
        let energy = big_m * log_uniform(rng, 1e-4, 1e2);
        let theta = rng.gen_range(1e-3..=PI);
        let phi = rng.gen_range(0.0..2.0 * PI);
        if let Ok(state) = build_state(energy, m, big_m, theta, phi) {
            return state;
        }
    }
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..=hi.ln())).exp()
}

/// Uniformly distributed direction scaled to `speed`.
pub fn random_velocity<R: Rng>(rng: &mut R, speed: f64) -> [f64; 3] {
    let cos = rng.gen_range(-1.0..=1.0_f64);
    let sin = (1.0 - cos * cos).sqrt();
    let phi = rng.gen_range(0.0..2.0 * PI);
    [
        speed * sin * phi.cos(),
        speed * sin * phi.sin(),
        speed * cos,
    ]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Folds per-sample results into a maximum; an error counts as an infinite
/// deviation so the suite fails.
fn max_over<I: IntoIterator<Item = Result<f64>>>(items: I) -> f64 {
    items
        .into_iter()
        .map(|r| r.unwrap_or(f64::INFINITY))
        .fold(0.0, |acc, d| if d.is_nan() { f64::NAN } else { acc.max(d) })
}

fn outcome(name: &'static str, samples: usize, max_deviation: f64, tolerance: f64) -> SuiteOutcome {
    SuiteOutcome {
        name,
        samples,
        max_deviation,
        tolerance,
    }
}

fn external_legs(state: &KinematicState<f64>) -> [(FourVector<f64>, f64); 4] {
    let p = &state.momenta;
    [
        (p.light_in, p.light_mass),
        (p.light_out, p.light_mass),
        (p.heavy_in, p.heavy_mass),
        (p.heavy_out, p.heavy_mass),
    ]
}

pub fn clifford_suite() -> SuiteOutcome {
    let mut worst = 0.0_f64;
    for rep in [Representation::Dirac, Representation::Chiral] {
        let basis = GammaBasis::<f64>::new(rep);
        for mu in 0..4 {
            for nu in 0..4 {
                let eta = if mu == nu {
                    2.0 * metric::<f64>(mu)
                } else {
                    0.0
                };
                let lhs = basis.gammas()[mu].anticommutator(&basis.gammas()[nu]);
                worst = worst.max(lhs.max_abs_diff(&DiracMatrix::scalar(eta)));
            }
        }
    }
    outcome("clifford", 32, worst, 1e-15)
}

pub fn completeness_suite(states: &[KinematicState<f64>]) -> SuiteOutcome {
    let basis = GammaBasis::<f64>::new(Representation::Dirac);
    let worst = max_over(states.iter().flat_map(external_legs).map(|(p, m)| {
        let mut sum = DiracMatrix::zero();
        for spin in Spin::ALL {
            let u = basis.spinor(&p, m, spin)?;
            sum = sum + u.outer(&basis.adjoint(&u));
        }
        let projector = basis.projector(&p, m)?;
        Ok(sum.max_abs_diff(&projector) / projector.max_abs())
    }));
    outcome("spinor completeness", 4 * states.len(), worst, 1e-12)
}

pub fn dirac_equation_suite(states: &[KinematicState<f64>]) -> SuiteOutcome {
    let basis = GammaBasis::<f64>::new(Representation::Dirac);
    let worst = max_over(states.iter().flat_map(external_legs).flat_map(|(p, m)| {
        let basis = &basis;
        Spin::ALL.into_iter().map(move |spin| {
            let u = basis.spinor(&p, m, spin)?;
            Ok(basis.dirac_residual(&p, m, &u) / ((p.t() + m) * u.norm()))
        })
    }));
    outcome("dirac equation", 8 * states.len(), worst, 1e-12)
}

/// `k.j` for both currents, relative to the size of the terms that cancel.
pub fn current_conservation_suite(states: &[KinematicState<f64>]) -> SuiteOutcome {
    let basis = GammaBasis::<f64>::new(Representation::Dirac);
    let worst = max_over(states.iter().flat_map(|state| {
        let p = state.momenta;
        let legs = [
            (p.light_in, p.light_out, p.light_mass),
            (p.heavy_in, p.heavy_out, p.heavy_mass),
        ];
        let basis = &basis;
        legs.into_iter().flat_map(move |(k_in, k_out, mass)| {
            SpinConfig::all()
                .filter(|s| s.heavy_in == Spin::Up && s.heavy_out == Spin::Up)
                .map(move |s| {
                    let u_i = basis.spinor(&k_in, mass, s.light_in)?;
                    let u_f = basis.spinor(&k_out, mass, s.light_out)?;
                    let j = basis.current(&u_f, &u_i);
                    let k = (k_out - k_in).components();
                    let mut divergence = num_complex::Complex::new(0.0, 0.0);
                    let mut scale = 0.0;
                    for mu in 0..4 {
                        divergence += j[mu] * (metric::<f64>(mu) * k[mu]);
                        scale += j[mu].norm() * (k_in[mu].abs() + k_out[mu].abs());
                    }
                    Ok(divergence.norm() / scale)
                })
        })
    }));
    outcome("current conservation", 8 * states.len(), worst, 1e-12)
}

pub fn trace_suite(states: &[KinematicState<f64>], coupling: &Coupling<f64>) -> SuiteOutcome {
    let worst = max_over(states.iter().map(|s| {
        let trace = spin_averaged_msq_trace(&s.momenta, coupling)?;
        let brute = spin_averaged_msq_bruteforce(&s.momenta, coupling)?;
        Ok(rel(brute, trace))
    }));
    outcome("trace vs spinor sum", states.len(), worst, 1e-10)
}

pub fn representation_suite(
    states: &[KinematicState<f64>],
    coupling: &Coupling<f64>,
) -> SuiteOutcome {
    let worst = max_over(states.iter().map(|s| {
        let dirac = spin_averaged_msq_bruteforce_in(Representation::Dirac, &s.momenta, coupling)?;
        let chiral = spin_averaged_msq_bruteforce_in(Representation::Chiral, &s.momenta, coupling)?;
        Ok(rel(chiral, dirac))
    }));
    outcome("representation change", states.len(), worst, 1e-12)
}

pub fn cross_section_forms_suite(
    states: &[KinematicState<f64>],
    coupling: &Coupling<f64>,
) -> SuiteOutcome {
    let worst = max_over(states.iter().map(|s| {
        let recoil = dsigma_recoil_form(s, coupling)?.value;
        let energy = dsigma_energy_form_state(s, coupling)?.value;
        Ok(rel(recoil, energy))
    }));
    outcome("recoil vs energy form", states.len(), worst, 1e-9)
}

pub fn boost_suite<R: Rng>(
    states: &[KinematicState<f64>],
    coupling: &Coupling<f64>,
    rng: &mut R,
) -> SuiteOutcome {
    let velocities: Vec<_> = states.iter().map(|_| random_velocity(rng, 0.9)).collect();
    let worst = max_over(states.iter().zip(&velocities).map(|(s, v)| {
        let boosted = s.momenta.boosted(*v)?;
        let rest = spin_averaged_msq_trace(&s.momenta, coupling)?;
        let moved_trace = spin_averaged_msq_trace(&boosted, coupling)?;
        let moved_brute = spin_averaged_msq_bruteforce(&boosted, coupling)?;
        Ok(rel(moved_trace, rest).max(rel(moved_brute, rest)))
    }));
    outcome("boost invariance", states.len(), worst, 1e-9)
}

pub fn exchange_suite(states: &[KinematicState<f64>], coupling: &Coupling<f64>) -> SuiteOutcome {
    let worst = max_over(states.iter().map(|s| {
        let swapped = s.momenta.exchanged();
        let mut diff = 0.0_f64;
        let mut size = 0.0_f64;
        for spins in SpinConfig::all() {
            let a = matrix_element(&s.momenta, spins, coupling)?;
            let b = matrix_element(&swapped, spins.exchanged(), coupling)?;
            diff = diff.max((a - b).norm());
            size = size.max(a.norm());
        }
        Ok(diff / size)
    }));
    outcome("exchange symmetry", states.len(), worst, 1e-12)
}

pub fn closure_suite(states: &[KinematicState<f64>]) -> SuiteOutcome {
    let worst = max_over(states.iter().map(|s| {
        let p = &s.momenta;
        let m2 = p.heavy_mass * p.heavy_mass;
        let shell = rel(p.heavy_out.square(), m2);
        let balance = p.conservation_residual().max_abs() / (s.energy + p.heavy_mass);
        Ok(shell.max(balance))
    }));
    outcome("kinematic closure", states.len(), worst, 1e-9)
}

const LIMIT_ANGLES: [f64; 5] = [
    PI / 12.0,
    PI / 6.0,
    PI / 2.0,
    2.0 * PI / 3.0,
    5.0 * PI / 6.0,
];

/// Energy form at total energy `E = x M` and projectile speed `beta`.
fn full_at(x: f64, beta: f64, theta: f64, big_m: f64, coupling: &Coupling<f64>) -> Result<f64> {
    let energy = x * big_m;
    let m = energy * ((1.0 - beta) * (1.0 + beta)).sqrt();
    let state = build_state(energy, m, big_m, theta, 0.0)?;
    Ok(dsigma_energy_form_state(&state, coupling)?.value)
}

/// Energy form approaches the heavy-scatterer form as `E/M -> 0`.
pub fn heavy_limit_suite(coupling: &Coupling<f64>) -> SuiteOutcome {
    let cases = [0.1, 0.5, 0.9]
        .into_iter()
        .flat_map(|b| LIMIT_ANGLES.map(|t| (b, t)));
    let worst = max_over(cases.map(|(beta, theta)| {
        let full = full_at(1e-6, beta, theta, 1.0, coupling)?;
        let mott = mott_like_limit(beta, theta, 1.0, coupling)?.value;
        Ok(rel(full, mott))
    }));
    outcome("limit: heavy scatterer", 15, worst, 1e-5)
}

/// Heavy-scatterer form approaches the Newtonian one as `beta -> 0`.
pub fn newtonian_limit_suite() -> SuiteOutcome {
    let coupling = Coupling::new(1.0).expect("G = 1 is valid");
    let worst = max_over(LIMIT_ANGLES.map(|theta| {
        let mott = mott_like_limit(1e-3, theta, 1.0, &coupling)?.value;
        let newton = rutherford_limit(1e-3, theta, 1.0, 1.0)?.value;
        Ok(rel(mott, newton))
    }));
    outcome("limit: newtonian", 5, worst, 1e-5)
}

/// Energy form approaches the massless-projectile form as `m/E -> 0`, which
/// in turn approaches the heavy-scatterer form at `beta = 1`.
pub fn ultrarelativistic_limit_suite(coupling: &Coupling<f64>) -> SuiteOutcome {
    let massless = LIMIT_ANGLES.map(|theta| {
        let energy = 0.5;
        let state = build_state(energy, 1e-5 * energy, 1.0, theta, 0.0)?;
        let full = dsigma_energy_form_state(&state, coupling)?.value;
        let ur = ultrarelativistic_limit(energy, theta, 1.0, coupling)?.value;
        Ok(rel(full, ur))
    });
    let heavy = LIMIT_ANGLES.map(|theta| {
        let ur = ultrarelativistic_limit(1e-5, theta, 1.0, coupling)?.value;
        let mott = mott_like_limit(1.0, theta, 1.0, coupling)?.value;
        Ok(rel(ur, mott))
    });
    let worst = max_over(massless.into_iter().chain(heavy));
    outcome("limit: ultra-relativistic", 10, worst, 1e-4)
}

/// Simpson integration of the Newtonian cross-section against its closed
/// antiderivative `(pi G^2 M^2 / v^4) (1/sin^2(a/2) - 1/sin^2(b/2))`.
pub fn quadrature_suite() -> SuiteOutcome {
    let (theta_min, theta_max, v) = (0.1_f64, PI, 0.01_f64);
    let exact = PI / v.powi(4)
        * (1.0 / (theta_min / 2.0_f64).sin().powi(2) - 1.0 / (theta_max / 2.0_f64).sin().powi(2));
    let integral =
        AngularGrid::new(theta_min, theta_max, 10_000, Spacing::UniformTheta).and_then(|grid| {
            integrate_solid_angle(&grid, |theta| {
                Ok(rutherford_limit(v, theta, 1.0, 1.0)?.value)
            })
        });
    let worst = max_over([integral.map(|value| rel(value, exact))]);
    outcome("angular quadrature", 10_000, worst, 1e-6)
}

/// Runs every suite with the given seed.
pub fn run_selftest(seed: u64) -> SelfTestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<_> = (0..SAMPLE_SIZE).map(|_| sample_state(&mut rng)).collect();
    let coupling = Coupling::new(1.0).expect("G = 1 is valid");
    let suites = vec![
        clifford_suite(),
        completeness_suite(&states),
        dirac_equation_suite(&states),
        current_conservation_suite(&states),
        trace_suite(&states, &coupling),
        representation_suite(&states, &coupling),
        cross_section_forms_suite(&states, &coupling),
        boost_suite(&states, &coupling, &mut rng),
        exchange_suite(&states, &coupling),
        closure_suite(&states),
        heavy_limit_suite(&coupling),
        newtonian_limit_suite(),
        ultrarelativistic_limit_suite(&coupling),
        quadrature_suite(),
    ];
    SelfTestReport { seed, suites }
}
