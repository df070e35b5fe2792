use gravscatter::dirac::{contract, DiracMatrix, GammaBasis, Representation, Spin};
use gravscatter::fourvector::metric;
use gravscatter::FourVector;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_on_shell(rng: &mut ChaCha8Rng) -> (FourVector<f64>, f64) {
    let m = rng.gen_range(0.1..10.0);
    let scale = m * 10f64.powf(rng.gen_range(-3.0..2.0));
    let p = [0; 3].map(|_| scale * rng.gen_range(-1.0..1.0));
    (FourVector::on_shell(m, p[0], p[1], p[2]), m)
}

fn random_vector(rng: &mut ChaCha8Rng) -> FourVector<f64> {
    FourVector::new(
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-3.0..3.0),
    )
}

#[test]
fn completeness_over_random_momenta() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for rep in [Representation::Dirac, Representation::Chiral] {
        let basis = GammaBasis::<f64>::new(rep);
        for _ in 0..500 {
            let (p, m) = random_on_shell(&mut rng);
            let mut sum = DiracMatrix::zero();
            for spin in Spin::ALL {
                let u = basis.spinor(&p, m, spin).unwrap();
                sum = sum + u.outer(&basis.adjoint(&u));
            }
            // independent of the library projector: (pslash + m) / 2m built by hand
            let mut expected = DiracMatrix::scalar(m);
            for mu in 0..4 {
                expected = expected + basis.gammas()[mu] * (metric::<f64>(mu) * p[mu]);
            }
            let expected = expected * (0.5 / m);
            let dev = sum.max_abs_diff(&expected) / expected.max_abs();
            assert!(dev <= 1e-12, "{:?} dev {}", rep, dev);
        }
    }
}

/// tr(a b c d) = 4 [(a.b)(c.d) - (a.c)(b.d) + (a.d)(b.c)]
#[test]
fn four_slash_trace_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let basis = GammaBasis::<f64>::new(Representation::Dirac);
    for _ in 0..500 {
        let [a, b, c, d] = [0; 4].map(|_| random_vector(&mut rng));
        let product = basis.slash(&a) * basis.slash(&b) * basis.slash(&c) * basis.slash(&d);
        let expected =
            4.0 * (a.dot(&b) * c.dot(&d) - a.dot(&c) * b.dot(&d) + a.dot(&d) * b.dot(&c));
        let tr = product.trace();
        let scale = 4.0 * a.max_abs() * b.max_abs() * c.max_abs() * d.max_abs();
        assert!((tr.re - expected).abs() <= 1e-13 * scale.max(1.0));
        assert!(tr.im.abs() <= 1e-13 * scale.max(1.0));
    }
}

#[test]
fn trace_of_odd_slash_products_vanishes() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let basis = GammaBasis::<f64>::new(Representation::Chiral);
    for _ in 0..100 {
        let [a, b, c] = [0; 3].map(|_| random_vector(&mut rng));
        let tr = (basis.slash(&a) * basis.slash(&b) * basis.slash(&c)).trace();
        assert!(tr.norm() <= 1e-13);
    }
}

/// |ubar_f gamma^mu u_i|^2 contracted with an arbitrary vector does not
/// depend on the representation once summed over spins.
#[test]
fn spin_summed_bilinears_are_representation_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let dirac = GammaBasis::<f64>::new(Representation::Dirac);
    let chiral = GammaBasis::<f64>::new(Representation::Chiral);
    for _ in 0..200 {
        let (p, m) = random_on_shell(&mut rng);
        let q = FourVector::on_shell(m, 0.3 * p[1], -p[3], 0.7 * p[2] + 0.1);
        let n = random_vector(&mut rng)
            .components()
            .map(|x| Complex::new(x, 0.0));
        let sum = |basis: &GammaBasis<f64>| {
            let mut total = 0.0;
            for s_i in Spin::ALL {
                for s_f in Spin::ALL {
                    let u_i = basis.spinor(&p, m, s_i).unwrap();
                    let u_f = basis.spinor(&q, m, s_f).unwrap();
                    total += contract(&basis.current(&u_f, &u_i), &n).norm_sqr();
                }
            }
            total
        };
        let (a, b) = (sum(&dirac), sum(&chiral));
        assert!((a - b).abs() <= 1e-11 * a.max(1e-300), "{} vs {}", a, b);
    }
}

#[test]
fn gordon_normalization_of_forward_current() {
    // ubar(p) gamma^mu u(p) = p^mu / m for ubar u = 1
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let basis = GammaBasis::<f64>::new(Representation::Dirac);
    for _ in 0..200 {
        let (p, m) = random_on_shell(&mut rng);
        for spin in Spin::ALL {
            let u = basis.spinor(&p, m, spin).unwrap();
            let j = basis.current(&u, &u);
            for mu in 0..4 {
                assert!((j[mu].re - p[mu] / m).abs() <= 1e-12 * p.t() / m);
                assert!(j[mu].im.abs() <= 1e-12 * p.t() / m);
            }
        }
    }
}

#[test]
fn single_precision_spinors() {
    let basis = GammaBasis::<f32>::new(Representation::Dirac);
    let p = FourVector::on_shell(1.0_f32, 0.2, -0.4, 1.1);
    let u = basis.spinor(&p, 1.0, Spin::Down).unwrap();
    assert!(basis.dirac_residual(&p, 1.0, &u) <= 1e-5);
    assert!((basis.adjoint(&u).dot(&u).re - 1.0).abs() <= 1e-5);
}
