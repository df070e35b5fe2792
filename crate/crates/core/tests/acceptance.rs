//! Acceptance gate: one line per criterion, non-zero exit if any fails.
//!
//! Reference values are computed here from closed forms written out
//! independently of the library.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use gravscatter::amplitude::{
    matrix_element, spin_averaged_msq_bruteforce, spin_averaged_msq_trace, Coupling, SpinConfig,
};
use gravscatter::cross_section::{
    dsigma_energy_form_state, dsigma_recoil_form, integrated_cross_section, mott_like_limit,
    ultrarelativistic_limit, AngularGrid, Spacing,
};
use gravscatter::dirac::{GammaBasis, Representation, Spin};
use gravscatter::kinematics::build_state;
use gravscatter::selftest::{run_selftest, DEFAULT_SEED};
use gravscatter::KinematicState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_acce;

struct Verdict {
    id: u32,
    name: &'static str,
    measured: String,
    passed: bool,
    elapsed: Duration,
    budget: Option<Duration>,
}

impl Verdict {
    fn ok(&self) -> bool {
        self.passed && self.budget.is_none_or(|b| self.elapsed < b)
    }

    fn line(&self) -> String {
        let budget = match self.budget {
            Some(b) => format!(
                "{:.3}s of {:.0}s",
                self.elapsed.as_secs_f64(),
                b.as_secs_f64()
            ),
            None => format!("{:.3}s", self.elapsed.as_secs_f64()),
        };
        format!(
            "criterion {} {:<32} {}  {}  [{}]",
            self.id,
            self.name,
            if self.ok() { "PASS" } else { "FAIL" },
            self.measured,
            budget
        )
    }
}

fn timed<F: FnOnce() -> (String, bool)>(
    id: u32,
    name: &'static str,
    budget: Option<f64>,
    f: F,
) -> Verdict {
    let start = Instant::now();
    let (measured, passed) = f();
    Verdict {
        id,
        name,
        measured,
        passed,
        elapsed: start.elapsed(),
        budget: budget.map(Duration::from_secs_f64),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

/// m, M in [0.1, 100] GeV, E/M in [1e-4, 1e2], theta in [1e-3, pi]; draws
/// without an elastic solution are redrawn.
fn random_states(n: usize) -> Vec<KinematicState<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let m = log_uniform(&mut rng, 0.1, 100.0);
        let big_m = log_uniform(&mut rng, 0.1, 100.0);
        let e = big_m * log_uniform(&mut rng, 1e-4, 1e2);
        let theta = rng.gen_range(1e-3..=PI);
        let phi = rng.gen_range(0.0..2.0 * PI);
        if let Ok(s) = build_state(e, m, big_m, theta, phi) {
            out.push(s);
        }
    }
    out
}

/// State with total energy `x M` and projectile speed `beta`.
fn state_at(x: f64, beta: f64, theta: f64, big_m: f64) -> KinematicState<f64> {
    let e = x * big_m;
    let m = e * ((1.0 - beta) * (1.0 + beta)).sqrt();
    build_state(e, m, big_m, theta, 0.0).expect("valid heavy-target state")
}

/// `G^2 M^2 / (4 v^4 sin^4(theta/2))`.
fn newtonian(g: f64, big_m: f64, v: f64, theta: f64) -> f64 {
    let s = (theta / 2.0).sin();
    g * g * big_m * big_m / (4.0 * v.powi(4) * s.powi(4))
}

/// `G^2 M^2 (1 - beta^2 sin^2) / (4 beta^4 sin^4)` at g^2 = 4 pi.
fn heavy_scatterer(g: f64, big_m: f64, beta: f64, theta: f64) -> f64 {
    let s2 = (theta / 2.0).sin().powi(2);
    g * g * big_m * big_m * (1.0 - beta * beta * s2) / (4.0 * beta.powi(4) * s2 * s2)
}

/// Massless-projectile form at g^2 = 4 pi.
fn massless(g: f64, big_m: f64, e: f64, theta: f64) -> f64 {
    let s2 = (theta / 2.0).sin().powi(2);
    let c2 = 1.0 - s2;
    let x = e / big_m;
    let d = 1.0 + 2.0 * x * s2;
    g * g * big_m * big_m / (4.0 * s2 * s2) * (1.0 + x * s2).powi(2) / d.powi(3)
        * (c2 + 2.0 * x * x * s2 * s2 / d)
}

fn trace_formula(states: &[KinematicState<f64>], c: &Coupling<f64>) -> (String, bool) {
    let worst = states
        .iter()
        .map(|s| {
            let t = spin_averaged_msq_trace(&s.momenta, c).unwrap();
            let b = spin_averaged_msq_bruteforce(&s.momenta, c).unwrap();
            rel(b, t)
        })
        .fold(0.0, f64::max);
    (
        format!(
            "max rel dev {:.3e} (tol 1e-10, {} states)",
            worst,
            states.len()
        ),
        worst <= 1e-10,
    )
}

fn formula_equivalence(states: &[KinematicState<f64>], c: &Coupling<f64>) -> (String, bool) {
    let worst = states
        .iter()
        .map(|s| {
            let a = dsigma_recoil_form(s, c).unwrap().value;
            let b = dsigma_energy_form_state(s, c).unwrap().value;
            rel(a, b)
        })
        .fold(0.0, f64::max);
    (
        format!("max rel dev {:.3e} (tol 1e-9)", worst),
        worst <= 1e-9,
    )
}

fn rutherford_recovery() -> (String, bool) {
    let (g, big_m, beta) = (1.0, 2.0, 1e-2);
    let c = Coupling::new(g).unwrap();
    let worst = [PI / 6.0, PI / 2.0, 5.0 * PI / 6.0]
        .into_iter()
        .map(|theta| {
            let s = state_at(1e-5, beta, theta, big_m);
            let full = dsigma_energy_form_state(&s, &c).unwrap().value;
            rel(full, newtonian(g, big_m, beta, theta))
        })
        .fold(0.0, f64::max);
    (
        format!("max rel dev {:.3e} (tol 1e-3)", worst),
        worst <= 1e-3,
    )
}

fn mott_scaling() -> (String, bool) {
    let c = Coupling::new(1.0).unwrap();
    let ratios = [1e-2, 1e-3, 1e-4];
    let mut text = Vec::new();
    let mut ok = true;
    for theta in [PI / 6.0, PI / 2.0, 5.0 * PI / 6.0] {
        let dev: Vec<f64> = ratios
            .iter()
            .map(|&x| {
                let full = dsigma_energy_form_state(&state_at(x, 0.5, theta, 1.0), &c)
                    .unwrap()
                    .value;
                let mott = heavy_scatterer(1.0, 1.0, 0.5, theta);
                // the library form must agree with the independent one
                let lib = mott_like_limit(0.5, theta, 1.0, &c).unwrap().value;
                ok &= rel(lib, mott) <= 1e-13;
                (full / mott - 1.0).abs()
            })
            .collect();
        for w in dev.windows(2) {
            let per_decade = w[0] / w[1];
            ok &= (5.0..=20.0).contains(&per_decade);
            text.push(format!("{:.2}", per_decade));
        }
    }
    (
        format!(
            "deviation ratio per decade [{}] (want 10 within x2)",
            text.join(" ")
        ),
        ok,
    )
}

fn ultrarelativistic() -> (String, bool) {
    let c = Coupling::new(1.0).unwrap();
    let (e, big_m, theta) = (0.5, 1.0, PI / 2.0);
    let s = build_state(e, 1e-5 * e, big_m, theta, 0.0).unwrap();
    let full = dsigma_energy_form_state(&s, &c).unwrap().value;
    let reference = massless(1.0, big_m, e, theta);
    let lib = ultrarelativistic_limit(e, theta, big_m, &c).unwrap().value;
    let d1 = rel(full, reference);
    let chain = rel(
        massless(1.0, big_m, 1e-5 * big_m, theta),
        heavy_scatterer(1.0, big_m, 1.0, theta),
    );
    let chain_lib = rel(
        ultrarelativistic_limit(1e-5 * big_m, theta, big_m, &c)
            .unwrap()
            .value,
        mott_like_limit(1.0, theta, big_m, &c).unwrap().value,
    );
    let ok = d1 <= 1e-3 && chain <= 1e-4 && chain_lib <= 1e-4 && rel(lib, reference) <= 1e-13;
    (
        format!(
            "full vs massless {:.3e} (tol 1e-3); massless vs heavy at beta=1 {:.3e} (tol 1e-4)",
            d1,
            chain.max(chain_lib)
        ),
        ok,
    )
}

fn symmetry_and_conservation(states: &[KinematicState<f64>], c: &Coupling<f64>) -> (String, bool) {
    let basis = GammaBasis::<f64>::new(Representation::Dirac);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let (mut exchange, mut current, mut boost, mut closure) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for s in states {
        let p = &s.momenta;
        let swapped = p.exchanged();
        let mut diff = 0.0_f64;
        let mut size = 0.0_f64;
        for spins in SpinConfig::all() {
            let a = matrix_element(p, spins, c).unwrap();
            let b = matrix_element(&swapped, spins.exchanged(), c).unwrap();
            diff = diff.max((a - b).norm());
            size = size.max(a.norm());
        }
        exchange = exchange.max(diff / size);

        for (k_in, k_out, mass) in [
            (p.light_in, p.light_out, p.light_mass),
            (p.heavy_in, p.heavy_out, p.heavy_mass),
        ] {
            for s_in in Spin::ALL {
                for s_out in Spin::ALL {
                    let u_i = basis.spinor(&k_in, mass, s_in).unwrap();
                    let u_f = basis.spinor(&k_out, mass, s_out).unwrap();
                    let j = basis.current(&u_f, &u_i);
                    let k = k_out - k_in;
                    let metric = [1.0, -1.0, -1.0, -1.0];
                    let mut div = num_complex::Complex::new(0.0, 0.0);
                    let mut scale = 0.0;
                    for mu in 0..4 {
                        div += j[mu] * (metric[mu] * k[mu]);
                        scale += j[mu].norm() * (k_in[mu].abs() + k_out[mu].abs());
                    }
                    current = current.max(div.norm() / scale);
                }
            }
        }

        let cos = rng.gen_range(-1.0..=1.0_f64);
        let sin = (1.0 - cos * cos).sqrt();
        let phi = rng.gen_range(0.0..2.0 * PI);
        let v = [0.9 * sin * phi.cos(), 0.9 * sin * phi.sin(), 0.9 * cos];
        let moved = p.boosted(v).unwrap();
        let rest = spin_averaged_msq_trace(p, c).unwrap();
        boost = boost
            .max(rel(spin_averaged_msq_trace(&moved, c).unwrap(), rest))
            .max(rel(spin_averaged_msq_bruteforce(&moved, c).unwrap(), rest));

        let m2 = p.heavy_mass * p.heavy_mass;
        closure = closure.max(rel(p.heavy_out.square(), m2));
    }
    let ok = exchange <= 1e-12 && current <= 1e-12 && boost <= 1e-9 && closure <= 1e-9;
    (
        format!(
            "exchange {:.2e}, current {:.2e}, boost(0.9) {:.2e}, closure {:.2e}",
            exchange, current, boost, closure
        ),
        ok,
    )
}

fn quadrature() -> (String, bool) {
    let c = Coupling::new(1.0).unwrap();
    let (x, beta, theta_min, big_m) = (1e-9_f64, 1e-4_f64, 0.1_f64, 1.0);
    let e = x * big_m;
    let m = e * ((1.0 - beta) * (1.0 + beta)).sqrt();
    // 2 pi int sin(t) / (4 v^4 sin^4(t/2)) dt = (pi / v^4) [1/sin^2(t/2)]
    let exact = PI / beta.powi(4)
        * (1.0 / (theta_min / 2.0).sin().powi(2) - 1.0 / (PI / 2.0).sin().powi(2));
    let grid = AngularGrid::new(theta_min, PI, 10_000, Spacing::UniformTheta).unwrap();
    let numeric = integrated_cross_section(e, m, big_m, &grid, &c).unwrap();
    let d = rel(numeric, exact);
    (
        format!("rel dev {:.3e} at n = 10^4 (tol 1e-6)", d),
        d <= 1e-6,
    )
}

fn determinism() -> (String, bool) {
    let bin = env!("CARGO_BIN_EXE_gravscatter");
    let runs: Vec<_> = (0..2)
        .map(|_| {
            Command::new(bin)
                .arg("selftest")
                .output()
                .expect("selftest runs")
        })
        .collect();
    let same = runs[0].stdout == runs[1].stdout;
    let exit_zero = runs.iter().all(|r| r.status.code() == Some(0));
    let in_process =
        run_selftest(DEFAULT_SEED).to_string() == run_selftest(DEFAULT_SEED).to_string();
    let in_process_matches =
        String::from_utf8_lossy(&runs[0].stdout) == run_selftest(DEFAULT_SEED).to_string();
    (
        format!(
            "reports identical: {}, exit codes {:?}",
            same && in_process && in_process_matches,
            runs.iter().map(|r| r.status.code()).collect::<Vec<_>>()
        ),
        same && exit_zero && in_process && in_process_matches,
    )
}

fn main() {
    let c = Coupling::new(1.0).unwrap();
    let states = random_states(1000);
    let verdicts = [
        timed(1, "trace formula vs spinor sum", Some(10.0), || {
            trace_formula(&states, &c)
        }),
        timed(2, "recoil form vs energy form", Some(5.0), || {
            formula_equivalence(&states, &c)
        }),
        timed(3, "newtonian recovery", Some(1.0), rutherford_recovery),
        timed(4, "heavy-scatterer scaling", Some(1.0), mott_scaling),
        timed(5, "massless-projectile limit", Some(1.0), ultrarelativistic),
        timed(6, "symmetry and conservation", Some(10.0), || {
            symmetry_and_conservation(&states, &c)
        }),
        timed(7, "angular quadrature oracle", Some(2.0), quadrature),
        timed(8, "selftest determinism", None, determinism),
    ];
    for v in &verdicts {
        println!("{}", v.line());
    }
    let failed = verdicts.iter().filter(|v| !v.ok()).count();
    println!(
        "acceptance: {}/{} criteria passed",
        verdicts.len() - failed,
        verdicts.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
