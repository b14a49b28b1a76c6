mod common;

use common::*;
use gsor_core::linalg::{cholesky, BlockSystem, ComplexVector, CsrMatrix};
use gsor_core::problems::{build_problem, Example, ProblemSpec};
use gsor_core::solvers::{gsor_solve, gsor_sweep, mhss_solve, mhss_step, IterParams, MhssFactors};
use gsor_core::theory::{optimal_alpha, s_eigenvalues, spectral_radius};
use gsor_core::Error;
use nalgebra::{Complex, DMatrix, DVector};
use proptest::prelude::*;

fn random_system(seed: u64, n: usize) -> BlockSystem {
    let mut r = rng(seed);
    let w = random_spd(&mut r, n);
    let t = random_sym(&mut r, n);
    let (p, q) = (random_vec(&mut r, n), random_vec(&mut r, n));
    BlockSystem::new(w, t, p, q).unwrap()
}

fn zeros(n: usize) -> Vec<f64> {
    vec![0.0; n]
}

#[test]
fn gsor_at_optimal_alpha_matches_dense_block_solve() {
    for seed in 0..10 {
        let sys = random_system(100 + seed, 4);
        let rho = spectral_radius(&s_eigenvalues(sys.w(), sys.t()).unwrap());
        let alpha = optimal_alpha(rho).unwrap();
        let params = IterParams::new(alpha, 1e-12, 5000).unwrap();
        let sol = gsor_solve(&sys, params, &zeros(4), &zeros(4)).unwrap();
        assert!(sol.report.converged);
        let rhs = DVector::from_vec([sys.p(), sys.q()].concat());
        let oracle = block_dense(sys.w(), sys.t()).lu().solve(&rhs).unwrap();
        assert!(max_abs_diff(&[sol.x, sol.y].concat(), oracle.as_slice()) < 1e-6);
    }
}

#[test]
fn ex1_m16_iteration_count() {
    let p = build_problem(&ProblemSpec::new(Example::Ex1, 16)).unwrap();
    let sol = gsor_solve(&p.system, IterParams::with_alpha(0.550), &zeros(256), &zeros(256)).unwrap();
    assert!(sol.report.converged);
    assert!(sol.report.iterations.abs_diff(19) <= 2, "{}", sol.report.iterations);
}

#[test]
fn ex1_asymptotic_rate_matches_optimal_factor() {
    let p = build_problem(&ProblemSpec::new(Example::Ex1, 16)).unwrap();
    let rho = spectral_radius(&s_eigenvalues(p.system.w(), p.system.t()).unwrap());
    let alpha = optimal_alpha(rho).unwrap();
    let params = IterParams::new(alpha, 1e-13, 2000).unwrap();
    let sol = gsor_solve(&p.system, params, &zeros(256), &zeros(256)).unwrap();
    let h = &sol.report.residual_history;
    let tail = &h[h.len() - 6..];
    let log_mean = tail.windows(2).map(|w| (w[1] / w[0]).ln()).sum::<f64>() / 5.0;
    let rate = log_mean.exp();
    let target = 1.0 - alpha;
    assert!((rate - target).abs() <= 0.1 * target, "rate {rate} vs {target}");
}

#[test]
fn gsor_history_is_consistent_with_report() {
    let sys = random_system(7, 6);
    let sol = gsor_solve(&sys, IterParams::new(0.3, 1e-8, 400).unwrap(), &zeros(6), &zeros(6)).unwrap();
    let r = &sol.report;
    assert_eq!(r.residual_history.len(), r.iterations);
    assert_eq!(*r.residual_history.last().unwrap(), r.final_residual);
    assert_eq!(r.final_residual, sys.residual(&sol.x, &sol.y).unwrap());
    assert!(!r.converged || r.final_residual < 1e-8);
}

#[test]
fn non_spd_w_is_reported() {
    let w = CsrMatrix::from_diagonal(&[1.0, -1.0]);
    let sys = BlockSystem::new(w, CsrMatrix::identity(2), vec![1.0; 2], vec![1.0; 2]).unwrap();
    let err = gsor_solve(&sys, IterParams::with_alpha(0.5), &zeros(2), &zeros(2)).unwrap_err();
    assert!(matches!(err, Error::NotPositiveDefinite { .. }));
}

#[test]
fn mhss_reference_counts() {
    let p = build_problem(&ProblemSpec::new(Example::Ex1, 16)).unwrap();
    let (_, report) =
        mhss_solve(p.system.w(), p.system.t(), &p.b, IterParams::with_alpha(1.06), &ComplexVector::zeros(256)).unwrap();
    assert!(report.iterations.abs_diff(40) <= 2, "{}", report.iterations);

    let p = build_problem(&ProblemSpec::new(Example::Ex4, 32)).unwrap();
    let (u, report) =
        mhss_solve(p.system.w(), p.system.t(), &p.b, IterParams::with_alpha(0.09), &ComplexVector::zeros(1024))
            .unwrap();
    assert!(report.converged);
    assert!(report.iterations.abs_diff(36) <= 2, "{}", report.iterations);
    // b = (1 + i) A 1, so u → (1 + i) 1
    assert!(u.re.iter().chain(&u.im).all(|v| (v - 1.0).abs() < 1e-4));
}

#[test]
fn mhss_identity_instance_follows_hand_iteration() {
    let w = CsrMatrix::identity(2);
    let t = CsrMatrix::zeros(2, 2);
    let b = ComplexVector::new(vec![1.0, -2.0], vec![0.5, 3.0]).unwrap();
    let factors = MhssFactors::new(&w, &t, 1.0).unwrap();
    let mut u = ComplexVector::new(vec![4.0, 0.0], vec![-1.0, 2.0]).unwrap();
    for _ in 0..60 {
        let next = mhss_step(&factors, &w, &t, &b, &u).unwrap();
        // 2 u½ = u + b, then u' = (1 + i) u½ - i b
        let ub = complex_vec(&u.re, &u.im);
        let bb = complex_vec(&b.re, &b.im);
        let half = (&ub + &bb) * Complex::new(0.5, 0.0);
        let expect = half * Complex::new(1.0, 1.0) - bb * Complex::new(0.0, 1.0);
        let got = complex_vec(&next.re, &next.im);
        assert!((got - expect).norm() < 1e-14);
        u = next;
    }
    // fixed point u* = b
    assert!(max_abs_diff(&u.re, &b.re) < 1e-6 && max_abs_diff(&u.im, &b.im) < 1e-6);
    let fixed = mhss_step(&factors, &w, &t, &b, &b).unwrap();
    assert!(max_abs_diff(&fixed.re, &b.re) < 1e-14 && max_abs_diff(&fixed.im, &b.im) < 1e-14);
}

#[test]
fn mhss_step_matches_complex_arithmetic() {
    let mut r = rng(11);
    for n in 1..=10 {
        let w = random_spd(&mut r, n);
        let t = random_psd(&mut r, n, n.div_ceil(2));
        let b = ComplexVector::new(random_vec(&mut r, n), random_vec(&mut r, n)).unwrap();
        let u = ComplexVector::new(random_vec(&mut r, n), random_vec(&mut r, n)).unwrap();
        let alpha = 0.1 + r_unit(&mut r);
        let ours = mhss_step(&MhssFactors::new(&w, &t, alpha).unwrap(), &w, &t, &b, &u).unwrap();

        let c = |m: &DMatrix<f64>| m.map(|v| Complex::new(v, 0.0));
        let i = Complex::new(0.0, 1.0);
        let a = Complex::new(alpha, 0.0);
        let eye = DMatrix::<Complex<f64>>::identity(n, n);
        let (wc, tc) = (c(&to_na(&w)), c(&to_na(&t)));
        let (uc, bc) = (complex_vec(&u.re, &u.im), complex_vec(&b.re, &b.im));
        let half = (&eye * a + &wc).lu().solve(&((&eye * a - &tc * i) * uc + &bc)).unwrap();
        let next = (&eye * a + &tc).lu().solve(&((&eye * a + &wc * i) * half - bc * i)).unwrap();
        let got = complex_vec(&ours.re, &ours.im);
        assert!((got - &next).norm() <= 1e-13 * next.norm().max(1.0));
    }
}

fn r_unit(r: &mut rand_chacha::ChaCha8Rng) -> f64 {
    use rand::Rng;
    r.gen_range(0.0..1.0)
}

#[test]
fn mhss_rejects_indefinite_shift() {
    let w = CsrMatrix::identity(2);
    let t = CsrMatrix::from_diagonal(&[1.0, -2.0]);
    let b = ComplexVector::new(vec![1.0; 2], vec![1.0; 2]).unwrap();
    let err = mhss_solve(&w, &t, &b, IterParams::with_alpha(1.0), &ComplexVector::zeros(2)).unwrap_err();
    assert!(matches!(err, Error::NotPositiveDefinite { .. }));
    assert!(mhss_solve(&w, &t, &b, IterParams::with_alpha(3.0), &ComplexVector::zeros(2)).is_ok());
}

#[test]
fn convergence_interval_decides_small_instances() {
    for seed in 0..15 {
        let n = 2 + (seed as usize % 9);
        let sys = random_system(300 + seed, n);
        let rho = spectral_radius(&s_eigenvalues(sys.w(), sys.t()).unwrap());
        let bound = 2.0 / (1.0 + rho);

        let inside = IterParams::new(bound - 1e-3, 1e-300, 500).unwrap();
        let sol = gsor_solve(&sys, inside, &zeros(n), &zeros(n)).unwrap();
        let h = &sol.report.residual_history;
        assert!(h.last().unwrap() < &h[0], "seed {seed}: inside the interval did not decrease");

        let outside = IterParams::new(bound + 0.05, 1e-300, 500).unwrap();
        let sol = gsor_solve(&sys, outside, &zeros(n), &zeros(n)).unwrap();
        assert!(!sol.report.converged);
        assert!(sol.report.final_residual >= 1.0, "seed {seed}: outside the interval converged");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_solution_is_a_fixed_point(seed in 0u64..10_000, n in 1usize..9, frac in 0.05f64..0.95) {
        let sys = random_system(seed, n);
        let rho = spectral_radius(&s_eigenvalues(sys.w(), sys.t()).unwrap());
        let alpha = frac * 2.0 / (1.0 + rho);
        let (x, y) = complex_solve(sys.w(), sys.t(), sys.p(), sys.q());
        let f = cholesky(sys.w()).unwrap();
        let (xn, yn) = gsor_sweep(&sys, &f, alpha, &x, &y, sys.p(), sys.q()).unwrap();
        let scale = 1.0 + x.iter().chain(&y).fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(max_abs_diff(&xn, &x) <= 1e-12 * scale);
        prop_assert!(max_abs_diff(&yn, &y) <= 1e-12 * scale);
    }

    #[test]
    fn sweep_is_affine_in_the_iterate(seed in 0u64..10_000, alpha in 0.1f64..1.5) {
        // G(u + v) - G(u) equals the homogeneous sweep of v
        let n = 5;
        let sys = random_system(seed, n);
        let f = cholesky(sys.w()).unwrap();
        let mut r = rng(seed ^ 0xabc);
        let (ux, uy, vx, vy) = (random_vec(&mut r, n), random_vec(&mut r, n), random_vec(&mut r, n), random_vec(&mut r, n));
        let sx: Vec<f64> = ux.iter().zip(&vx).map(|(a, b)| a + b).collect();
        let sy: Vec<f64> = uy.iter().zip(&vy).map(|(a, b)| a + b).collect();
        let (a1, b1) = gsor_sweep(&sys, &f, alpha, &sx, &sy, sys.p(), sys.q()).unwrap();
        let (a2, b2) = gsor_sweep(&sys, &f, alpha, &ux, &uy, sys.p(), sys.q()).unwrap();
        let (a3, b3) = gsor_sweep(&sys, &f, alpha, &vx, &vy, &zeros(n), &zeros(n)).unwrap();
        let dx: Vec<f64> = a1.iter().zip(&a2).map(|(a, b)| a - b).collect();
        let dy: Vec<f64> = b1.iter().zip(&b2).map(|(a, b)| a - b).collect();
        prop_assert!(max_abs_diff(&dx, &a3) < 1e-10);
        prop_assert!(max_abs_diff(&dy, &b3) < 1e-10);
    }
}
