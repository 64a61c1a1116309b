//! End-to-end acceptance gate. Each test checks one headline result at its
//! stated tolerance and prints a single pass line; together they certify the
//! closed forms, the discretized-continuum oracle, the measurement-rate
//! analysis, and the reductions against one another.

use std::time::Instant;

use num_complex::Complex64;

use leedecay::poles::{find_pole, two_pole_closed};
use leedecay::reduction::effective_2x2;
use leedecay::selfenergy::sigma_first;
use leedecay::spectral::{FormFactor, LeeModel};
use leedecay::survival::{
    amplitude_oracle, amplitude_two_pole, arrowhead_levels, discretize_continuum, rabi_survival,
    ExactAmplitude,
};
use leedecay::zeno::{continuous_rate, effective_rate_pulsed, find_tau_star, free_width};

fn lor_model(lambda: f64, bandwidth: f64, omega_a: f64) -> LeeModel {
    LeeModel::new(omega_a, FormFactor::lorentzian(lambda, bandwidth).unwrap()).unwrap()
}

fn lin_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn criterion_01_two_pole_exactness() {
    let start = Instant::now();
    let m = lor_model(0.1, 1.0, 1.0);
    let p = two_pole_closed(0.1, 1.0, 1.0);
    let times = lin_grid(0.0, 50.0, 201);
    let oracle = amplitude_oracle(&m, 4000, &times).unwrap();
    let mut worst = 0.0_f64;
    for (&t, a) in times.iter().zip(&oracle.amplitude) {
        worst = worst.max((a - amplitude_two_pole(&p, t)).norm());
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(worst < 1e-5, "max |A_closed - A_oracle| = {worst}");
    assert!(elapsed < 30.0, "oracle run took {elapsed:.1} s");
    println!("criterion 1 (two-pole exactness, max dev {worst:.2e}, {elapsed:.1} s): PASS");
}

#[test]
fn criterion_02_golden_rule_convergence() {
    for &lambda in &[1e-2, 1e-3] {
        let m = lor_model(lambda, 1.0, 1.0);
        let gamma_pole = find_pole(&m).unwrap().width;
        let fgr = m.golden_rule().unwrap();
        let rel = (gamma_pole - fgr).abs() / gamma_pole;
        assert!(rel < 10.0 * lambda * lambda, "lambda={lambda}: rel {rel}");
    }
    println!("criterion 2 (golden rule convergence): PASS");
}

#[test]
fn criterion_03_zeno_quadratic_law() {
    let m = lor_model(0.1, 1.0, 1.0);
    let tz = m.zeno_time().unwrap();
    let t = 1e-3;
    let p_closed = amplitude_two_pole(&two_pole_closed(0.1, 1.0, 1.0), t).norm_sqr();
    let ratio_closed = (1.0 - p_closed) * tz * tz / (t * t);
    assert!((0.99..=1.01).contains(&ratio_closed), "closed form ratio {ratio_closed}");
    let oracle = amplitude_oracle(&m, 4000, &[t]).unwrap();
    let ratio_oracle = (1.0 - oracle.amplitude[0].norm_sqr()) * tz * tz / (t * t);
    assert!((0.99..=1.01).contains(&ratio_oracle), "oracle ratio {ratio_oracle}");
    println!("criterion 3 (Zeno quadratic law): PASS");
}

#[test]
fn criterion_04_zeno_time_vs_zeno_region() {
    // the quadratic approximation must already be breaking down at t = 2
    // even though the Zeno time is 10: the curvature scale and the duration
    // of the quadratic region are different quantities
    let m = lor_model(0.1, 1.0, 1.0);
    let tz = m.zeno_time().unwrap();
    let p = two_pole_closed(0.1, 1.0, 1.0);
    let dev = |t: f64| -> f64 {
        let prob = amplitude_two_pole(&p, t).norm_sqr();
        (prob - (1.0 - t * t / (tz * tz))).abs() / (t * t)
    };
    let early = dev(0.1);
    let late = dev(2.0);
    assert!(late > 10.0 * early, "deviation/t^2: {late:.3e} at t=2 vs {early:.3e} at t=0.1");
    println!("criterion 4 (Zeno time vs Zeno-region duration): PASS");
}

#[test]
fn criterion_05_flat_band_immunity() {
    let gamma = 0.01;
    let m = LeeModel::new(1.0, FormFactor::flat_band(gamma).unwrap()).unwrap();
    let exact = ExactAmplitude::for_model(&m, 200.0).unwrap();
    for &tau in &[0.01, 0.1, 1.0, 10.0, 100.0] {
        let g = effective_rate_pulsed(&exact, tau).unwrap();
        assert!((g - gamma).abs() / gamma < 1e-10, "pulsed tau={tau}: {g}");
    }
    for &strength in &[0.1, 1.0, 10.0, 100.0] {
        let c = continuous_rate(&m, strength).unwrap();
        assert!(
            (c.gamma_eff - gamma).abs() / gamma < 1e-10,
            "continuous strength={strength}: {}",
            c.gamma_eff
        );
    }
    println!("criterion 5 (flat-band immunity to measurement): PASS");
}

#[test]
fn criterion_06_transition_existence() {
    for &ratio in &[2.0, 4.0, 10.0] {
        let m = lor_model(0.1, 1.0, ratio);
        let gamma = free_width(&m).unwrap();
        let stars = find_tau_star(&m, 8.0 / gamma).unwrap();
        assert!(!stars.is_empty(), "no tau* at omega_a = {ratio}");
        let exact = ExactAmplitude::for_model(&m, 8.0 / gamma).unwrap();
        for &ts in &stars {
            let resid = (exact.probability(ts) - (-gamma * ts).exp()).abs();
            assert!(resid < 1e-8, "omega_a={ratio}, tau*={ts}: residual {resid:.3e}");
        }
    }
    let m = lor_model(0.1, 1.0, 0.0);
    let gamma = free_width(&m).unwrap();
    assert!(
        find_tau_star(&m, 1e3 / gamma).unwrap().is_empty(),
        "unexpected tau* on resonance"
    );
    println!("criterion 6 (transition existence and absence): PASS");
}

#[test]
fn criterion_07_jump_time_estimate() {
    let m = lor_model(0.1, 1.0, 10.0);
    let gamma = free_width(&m).unwrap();
    let tz = m.zeno_time().unwrap();
    let stars = find_tau_star(&m, 8.0 / gamma).unwrap();
    let estimate = gamma * tz * tz;
    let smallest = stars[0];
    let rel = (smallest - estimate).abs() / estimate;
    assert!(rel < 0.1, "smallest tau* {smallest} vs estimate {estimate} (rel {rel})");
    println!("criterion 7 (jump-time estimate): PASS");
}

#[test]
fn criterion_08_continuous_asymptote() {
    let m = lor_model(0.1, 1.0, 1.0);
    let tz = m.zeno_time().unwrap();
    let strength = 100.0;
    let c = continuous_rate(&m, strength).unwrap();
    let dev = (c.gamma_eff * tz * tz * strength / 4.0 - 1.0).abs();
    assert!(dev < 0.05, "deviation {dev}");
    println!("criterion 8 (continuous strong-measurement asymptote): PASS");
}

#[test]
fn criterion_09_rabi_limit() {
    // Dirac form factor: survival from the symbolic route must match the
    // two-level closed form 1 - (lambda^2/Omega^2) sin^2(Omega t) to 1e-12
    let lambda = 0.5;
    for &omega_a in &[0.0, 0.7, 2.0] {
        let m = LeeModel::new(omega_a, FormFactor::dirac(lambda, 0.0).unwrap()).unwrap();
        let exact = ExactAmplitude::for_model(&m, 40.0).unwrap();
        let omega = (lambda * lambda + 0.25 * omega_a * omega_a).sqrt();
        for i in 0..=400 {
            let t = 0.1 * i as f64;
            let p = exact.probability(t);
            let closed = 1.0 - (lambda * lambda / (omega * omega)) * (omega * t).sin().powi(2);
            assert!((p - closed).abs() < 1e-12, "omega_a={omega_a}, t={t}: {p} vs {closed}");
        }
    }
    // on resonance the oscillation is full; the two-level eigensplit is
    // 2*lambda, so the first exact zero sits at t = pi/(2 lambda). (A first
    // zero at pi/lambda would contradict the amplitude matched to 1e-12
    // just above; see the README's note on the resonance period.)
    let m = LeeModel::new(0.0, FormFactor::dirac(lambda, 0.0).unwrap()).unwrap();
    let exact = ExactAmplitude::for_model(&m, 40.0).unwrap();
    let t_zero = std::f64::consts::PI / (2.0 * lambda);
    assert_eq!(exact.probability(t_zero), 0.0, "survival must vanish exactly");
    for i in 1..100 {
        let t = t_zero * i as f64 / 100.0;
        assert!(exact.probability(t) > 0.0, "premature zero at t={t}");
    }
    let r = rabi_survival(lambda, 0.0, t_zero);
    assert!(r.probability.abs() < 1e-12);
    println!("criterion 9 (Rabi limit, full oscillation on resonance): PASS");
}

#[test]
fn criterion_10_asymptotic_renormalization() {
    let p = two_pole_closed(0.1, 1.0, 1.0);
    let gamma = p.width;
    let n = 60;
    let times: Vec<f64> = (0..n).map(|i| (5.0 + 5.0 * i as f64 / (n - 1) as f64) / gamma).collect();
    // least-squares line through (t, ln P)
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &t in &times {
        let y = amplitude_two_pole(&p, t).norm_sqr().ln();
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
    }
    let nf = n as f64;
    let slope = (nf * sxy - sx * sy) / (nf * sxx - sx * sx);
    let intercept = (sy - slope * sx) / nf;
    assert!(
        (slope + gamma).abs() / gamma < 1e-3,
        "slope {slope} vs -gamma {}",
        -gamma
    );
    assert!(
        (intercept - p.z.ln()).abs() < 1e-3,
        "intercept {intercept} vs ln Z {}",
        p.z.ln()
    );
    println!("criterion 10 (asymptotic renormalization Z): PASS");
}

/// e^{A} for a 2x2 complex matrix by scaling-and-squaring with a Taylor
/// series; an oracle independent of the spectral-projector closed form.
fn expm2(a: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let norm: f64 = a
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let s = norm.log2().ceil().max(0.0) as u32 + 1;
    let scale = (2.0_f64).powi(-(s as i32));
    let b = [
        [a[0][0] * scale, a[0][1] * scale],
        [a[1][0] * scale, a[1][1] * scale],
    ];
    let id = [
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ];
    let matmul = |x: &[[Complex64; 2]; 2], y: &[[Complex64; 2]; 2]| {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
            }
        }
        out
    };
    let mut result = id;
    let mut term = id;
    for k in 1..=24 {
        term = matmul(&term, &b);
        let inv_k = 1.0 / k as f64;
        for row in &mut term {
            for z in row.iter_mut() {
                *z *= inv_k;
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..s {
        result = matmul(&result, &result);
    }
    result
}

#[test]
fn criterion_11_matrix_equivalence() {
    let (lambda, bandwidth, omega_a) = (0.1, 1.0, 1.0);
    let m = effective_2x2(lambda, bandwidth, omega_a);
    let p = two_pole_closed(lambda, bandwidth, omega_a);

    // eigenvalues recomputed independently from trace and determinant
    let tr = Complex64::new(omega_a, -bandwidth);
    let det = Complex64::new(omega_a, 0.0) * m.diagonal - lambda * lambda;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let r1 = 0.5 * (tr + disc);
    let r2 = 0.5 * (tr - disc);
    let (r1, r2) = if (r1 - p.e1).norm() <= (r2 - p.e1).norm() { (r1, r2) } else { (r2, r1) };
    assert!((r1 - p.e1).norm() < 1e-12, "{r1} vs {}", p.e1);
    assert!((r2 - p.e2).norm() < 1e-12, "{r2} vs {}", p.e2);

    // (a,a) element of e^{-iMt} against the closed-form amplitude
    let i = Complex64::new(0.0, 1.0);
    let mat = [
        [Complex64::new(omega_a, 0.0), Complex64::new(lambda, 0.0)],
        [Complex64::new(lambda, 0.0), m.diagonal],
    ];
    for &t in lin_grid(0.0, 50.0, 101).iter() {
        let scaled = [
            [-i * mat[0][0] * t, -i * mat[0][1] * t],
            [-i * mat[1][0] * t, -i * mat[1][1] * t],
        ];
        let e = expm2(scaled);
        let a_closed = amplitude_two_pole(&p, t);
        assert!(
            (e[0][0] - a_closed).norm() < 1e-10,
            "t={t}: {} vs {a_closed}",
            e[0][0]
        );
        // cross-check against the projector form as well
        assert!((e[0][0] - m.survival_amplitude(t)).norm() < 1e-10);
    }
    println!("criterion 11 (2x2 matrix equivalence): PASS");
}

#[test]
fn criterion_12_property_suite_spot_checks() {
    // the full invariant suites live in the `properties` test target and the
    // CLI determinism check in the CLI crate's integration test; this spot
    // check re-asserts one representative of each family so the acceptance
    // gate is self-contained
    let ff = FormFactor::lorentzian(0.1, 1.0).unwrap();
    let e = Complex64::new(0.8, 1.3);
    let s = sigma_first(&ff, e).unwrap();
    assert!(s.value.im < 0.0, "Herglotz sign");
    assert!(
        (sigma_first(&ff, e.conj()).unwrap().value - s.value.conj()).norm() < 1e-12,
        "Schwarz reflection"
    );
    let h = 1e-5 * e.norm().max(1.0);
    let fd = (sigma_first(&ff, e + h).unwrap().value - sigma_first(&ff, e - h).unwrap().value)
        / (2.0 * h);
    assert!((s.derivative - fd).norm() / s.derivative.norm() < 1e-6, "derivative vs FD");

    let m = lor_model(0.1, 1.0, 1.0);
    let (energies, couplings) = discretize_continuum(&m, 800).unwrap();
    let total: f64 = arrowhead_levels(1.0, &energies, &couplings).iter().map(|l| l.1).sum();
    assert!((total - 1.0).abs() < 1e-10, "oracle completeness defect {:.3e}", total - 1.0);

    let exact = ExactAmplitude::for_model(&m, 1.0).unwrap();
    assert!((exact.probability(0.0) - 1.0).abs() < 1e-12, "normalization");
    println!("criterion 12 (property suite spot checks): PASS");
}
