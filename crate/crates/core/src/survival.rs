//! Survival amplitude A(t) = ⟨a|e^{−iHt}|a⟩ and probability P(t) = |A(t)|²
//! by several routes: the Lorentzian closed form, spectral inversion of the
//! resolvent through the cut, a brute-force discretized-continuum oracle,
//! short-time expansions, and the Rabi / strong-coupling limits.

use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec;
use crate::poles::{find_pole, two_pole_closed, TwoPoleParams};
use crate::quad;
use crate::selfenergy::sigma_on_cut_above;
use crate::spectral::{FormFactor, LeeModel};

const I: Complex64 = Complex64::new(0.0, 1.0);
const PI: f64 = std::f64::consts::PI;

/// Which route produced a survival series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    TwoPoleClosed,
    Spectral,
    Oracle,
    WeisskopfWigner,
    ShortTime,
    Rabi,
    StrongCoupling,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::TwoPoleClosed => "two-pole",
            Method::Spectral => "spectral",
            Method::Oracle => "oracle",
            Method::WeisskopfWigner => "ww",
            Method::ShortTime => "short-time",
            Method::Rabi => "rabi",
            Method::StrongCoupling => "strong-coupling",
        }
    }
}

/// Survival amplitude sampled on a time grid.
#[derive(Debug, Clone)]
pub struct SurvivalSeries {
    pub times: Vec<f64>,
    pub amplitude: Vec<Complex64>,
    pub method: Method,
}

impl SurvivalSeries {
    pub fn probability(&self) -> Vec<f64> {
        self.amplitude.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Rows `t,re_A,im_A,P,method` at full decimal precision.
    pub fn write_csv<W: Write>(&self, w: &mut W, with_header: bool) -> io::Result<()> {
        if with_header {
            writeln!(w, "t,re_A,im_A,P,method")?;
        }
        for (&t, a) in self.times.iter().zip(&self.amplitude) {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{}",
                t,
                a.re,
                a.im,
                a.norm_sqr(),
                self.method.label()
            )?;
        }
        Ok(())
    }
}

/// Closed-form survival amplitude of the Lorentzian model:
/// A(t) = (1−R) e^{−iE1 t} + R e^{−iE2 t}.
pub fn amplitude_two_pole(p: &TwoPoleParams, t: f64) -> Complex64 {
    let one_minus_r = 1.0 - p.residue_r;
    one_minus_r * (-I * p.e1 * t).exp() + p.residue_r * (-I * p.e2 * t).exp()
}

pub fn two_pole_series(p: &TwoPoleParams, times: &[f64]) -> SurvivalSeries {
    let amplitude = exec::map(times, |&t| amplitude_two_pole(p, t));
    SurvivalSeries { times: times.to_vec(), amplitude, method: Method::TwoPoleClosed }
}

// ---------------------------------------------------------------------------
// Spectral inversion
// ---------------------------------------------------------------------------

/// Spectral representation of the survival amplitude: the Bromwich contour
/// collapsed onto the cut gives A(t) = ∫ ρ(ω) e^{−iωt} dω with
/// ρ(ω) = −(1/π) Im G_a(ω + i0⁺), plus discrete real-pole terms when the
/// resolvent has poles outside the continuum (bound states).
///
/// The quadrature nodes are built once per model and reused for every time,
/// so repeated evaluation (measurement sweeps) is a dot product.
#[derive(Debug, Clone)]
pub struct SpectralAmplitude {
    nodes: Vec<f64>,
    /// ρ(ω_i) w_i, renormalized so the total spectral mass is exactly 1
    weights: Vec<f64>,
    /// (energy, weight) of discrete real poles, renormalized
    pub discrete_poles: Vec<(f64, f64)>,
    /// spectral mass before renormalization; deviation from 1 measures the
    /// truncation tail
    pub raw_mass: f64,
}

impl SpectralAmplitude {
    /// Build the quadrature for times up to `t_max`. Larger `t_max` forces
    /// finer panels so the oscillatory factor stays resolved.
    pub fn build(model: &LeeModel, t_max: f64) -> Result<Self> {
        match &model.form_factor {
            FormFactor::Dirac { coupling, location } => {
                // No cut: the whole amplitude is two discrete poles.
                let (ep, em, wp) = two_level_split(model.omega_a, *location, *coupling);
                Ok(SpectralAmplitude {
                    nodes: Vec::new(),
                    weights: Vec::new(),
                    discrete_poles: vec![(ep, wp), (em, 1.0 - wp)],
                    raw_mass: 1.0,
                })
            }
            ff => build_continuum(model, ff, t_max),
        }
    }

    pub fn amplitude(&self, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&w, &x) in self.weights.iter().zip(&self.nodes) {
            acc += w * (-I * x * t).exp();
        }
        for &(e, w) in &self.discrete_poles {
            acc += w * (-I * e * t).exp();
        }
        acc
    }

    pub fn series(&self, times: &[f64]) -> SurvivalSeries {
        let amplitude = exec::map(times, |&t| self.amplitude(t));
        SurvivalSeries { times: times.to_vec(), amplitude, method: Method::Spectral }
    }
}

fn rho_at(model: &LeeModel, omega: f64) -> f64 {
    let sigma = sigma_on_cut_above(&model.form_factor, omega).expect("cut density on continuum");
    let g = 1.0 / (omega - model.omega_a - sigma);
    (-g.im / PI).max(0.0)
}

fn build_continuum(model: &LeeModel, ff: &FormFactor, t_max: f64) -> Result<SpectralAmplitude> {
    let h_osc = (25.0 / t_max.max(1.0)).min(0.5);
    let (lo_support, hi_support) = ff.support();
    let finite_support = lo_support.is_finite();

    // Seed breakpoints so adaptivity cannot miss the resonance peak.
    let mut seeds = vec![0.0, model.omega_a];
    if let FormFactor::Lorentzian { bandwidth, .. } = ff {
        seeds.push(*bandwidth);
        seeds.push(-bandwidth);
    }
    if let Some((pos, width)) = resonance_estimate(model) {
        seeds.push(pos);
        let mut step = 0.5 * width.max(1e-300);
        for _ in 0..60 {
            seeds.push(pos - step);
            seeds.push(pos + step);
            step *= 2.0;
            if step > 1e9 {
                break;
            }
        }
    }

    let discrete_raw = if finite_support { bound_state_poles(model, lo_support, hi_support) } else { Vec::new() };
    let pole_mass: f64 = discrete_raw.iter().map(|p| p.1).sum();

    let mut window = 40.0 * (1.0 + model.omega_a.abs());
    let mut result: Option<(Vec<f64>, Vec<f64>, f64)> = None;
    let mut deficit = f64::INFINITY;
    for _ in 0..20 {
        let (lo, hi) = if finite_support {
            (lo_support, hi_support)
        } else {
            (model.omega_a.min(0.0) - window, model.omega_a.max(0.0) + window)
        };
        let (nodes, weights) = panel_quadrature(model, lo, hi, &seeds, h_osc);
        let mass: f64 = weights.iter().sum();
        deficit = (1.0 - mass - pole_mass).abs();
        result = Some((nodes, weights, mass));
        if finite_support || deficit < 1e-8 {
            break;
        }
        window *= 4.0;
    }
    let (nodes, mut weights, mass) = result.unwrap();
    if !finite_support && deficit > 1e-4 {
        return Err(Error::SpectralWindowTooSmall(deficit));
    }
    let total = mass + pole_mass;
    for w in &mut weights {
        *w /= total;
    }
    let discrete_poles: Vec<(f64, f64)> = discrete_raw.iter().map(|&(e, w)| (e, w / total)).collect();
    Ok(SpectralAmplitude { nodes, weights, discrete_poles, raw_mass: total })
}

/// Position and half-width of the resonance peak of ρ, from the dominant
/// pole when one exists.
fn resonance_estimate(model: &LeeModel) -> Option<(f64, f64)> {
    match &model.form_factor {
        FormFactor::Lorentzian { coupling, bandwidth } => {
            let p = two_pole_closed(*coupling, *bandwidth, model.omega_a);
            Some((p.e1.re, (0.5 * p.width).max(1e-12)))
        }
        FormFactor::FlatBand { rate } => Some((model.omega_a, 0.5 * rate)),
        FormFactor::Tabulated(_) => find_pole(model)
            .ok()
            .map(|p| (p.e_pole.re, (0.5 * p.width).max(1e-12))),
        FormFactor::Dirac { .. } => None,
    }
}

/// Real resolvent poles outside a finite support: E − ω_a − Σ(E) = 0 with
/// Σ real there. Scanned over one support-span on each side.
fn bound_state_poles(model: &LeeModel, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let span = (hi - lo).max(1.0);
    let f = |e: f64| {
        let sigma = sigma_on_cut_above(&model.form_factor, e).expect("real sigma outside support");
        e - model.omega_a - sigma.re
    };
    let mut out = Vec::new();
    for (a, b) in [(lo - span, lo - 1e-9 * span), (hi + 1e-9 * span, hi + span)] {
        let steps = 400;
        let mut prev_x = a;
        let mut prev_f = f(a);
        for k in 1..=steps {
            let x = a + (b - a) * k as f64 / steps as f64;
            let fx = f(x);
            if prev_f * fx < 0.0 {
                let (mut xa, mut xb) = (prev_x, x);
                let (mut fa, _) = (prev_f, fx);
                for _ in 0..200 {
                    let m = 0.5 * (xa + xb);
                    if m <= xa || m >= xb {
                        break;
                    }
                    let fm = f(m);
                    if fa * fm <= 0.0 {
                        xb = m;
                    } else {
                        xa = m;
                        fa = fm;
                    }
                }
                let e = 0.5 * (xa + xb);
                // weight = residue = 1/(1 − Σ'(E)), by central difference
                let h = 1e-7 * (1.0 + e.abs());
                let dsig = (sigma_on_cut_above(&model.form_factor, e + h).unwrap().re
                    - sigma_on_cut_above(&model.form_factor, e - h).unwrap().re)
                    / (2.0 * h);
                out.push((e, 1.0 / (1.0 - dsig)));
            }
            prev_x = x;
            prev_f = fx;
        }
    }
    out
}

/// Adaptive panel quadrature of ρ over [lo, hi]: panels are split until the
/// embedded GL15/GL31 mass estimates agree, then until wide panels carrying
/// mass respect the oscillation cap. Returns flattened GL31 nodes/weights.
fn panel_quadrature(
    model: &LeeModel,
    lo: f64,
    hi: f64,
    seeds: &[f64],
    h_osc: f64,
) -> (Vec<f64>, Vec<f64>) {
    let mut cuts: Vec<f64> = vec![lo, hi];
    for &s in seeds {
        if s > lo && s < hi {
            cuts.push(s);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();

    let width = hi - lo;
    let mut panels: Vec<(f64, f64)> = Vec::new();
    let mut stack: Vec<(f64, f64, usize)> = cuts.windows(2).map(|w| (w[0], w[1], 0)).collect();
    let (gx15, gw15) = quad::gauss_legendre(15);
    let (gx31, gw31) = quad::gauss_legendre(31);
    let mass_est = |a: f64, b: f64, xs: &[f64], ws: &[f64]| -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        xs.iter().zip(ws).map(|(&x, &w)| w * rho_at(model, c + h * x)).sum::<f64>() * h
    };
    while let Some((a, b, depth)) = stack.pop() {
        let m15 = mass_est(a, b, &gx15, &gw15);
        let m31 = mass_est(a, b, &gx31, &gw31);
        let tol = 1e-10 * ((b - a) / width).max(1e-6);
        let needs_mass_split = (m31 - m15).abs() > tol;
        let needs_osc_split = (b - a) > h_osc && m31.abs() > 1e-9;
        if (needs_mass_split || needs_osc_split) && depth < 60 {
            let m = 0.5 * (a + b);
            stack.push((a, m, depth + 1));
            stack.push((m, b, depth + 1));
        } else {
            panels.push((a, b));
        }
    }
    panels.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let evals: Vec<(Vec<f64>, Vec<f64>)> = exec::map(&panels, |&(a, b)| {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let nodes: Vec<f64> = gx31.iter().map(|&x| c + h * x).collect();
        let weights: Vec<f64> = nodes.iter().zip(&gw31).map(|(&x, &w)| w * h * rho_at(model, x)).collect();
        (nodes, weights)
    });
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (n, w) in evals {
        nodes.extend(n);
        weights.extend(w);
    }
    (nodes, weights)
}

/// Survival series by spectral inversion.
pub fn amplitude_spectral(model: &LeeModel, times: &[f64]) -> Result<SurvivalSeries> {
    let t_max = times.iter().cloned().fold(0.0_f64, f64::max);
    let spec = SpectralAmplitude::build(model, t_max)?;
    Ok(spec.series(times))
}

// ---------------------------------------------------------------------------
// Discretized-continuum oracle
// ---------------------------------------------------------------------------

/// Gauss-Legendre discretization of the continuum: energies ω_k and
/// couplings g(ω_k)√w_k of the (N+1)-level Hamiltonian that replaces the
/// continuum. The Lorentzian uses the tangent map ω = Λ tan θ, which makes
/// every discrete coupling equal and pins the truncation tail mass at 1e−8.
pub fn discretize_continuum(model: &LeeModel, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    match &model.form_factor {
        FormFactor::Dirac { coupling, location } => Ok((vec![*location], vec![*coupling])),
        FormFactor::Lorentzian { coupling, bandwidth } => {
            let tail = 1e-8;
            let theta_max = 0.5 * PI * (1.0 - tail);
            let (gx, gw) = quad::gauss_legendre(n);
            let mut omegas = Vec::with_capacity(n);
            let mut couplings = Vec::with_capacity(n);
            for (&x, &w) in gx.iter().zip(&gw) {
                let theta = theta_max * x;
                omegas.push(bandwidth * theta.tan());
                couplings.push(coupling * (theta_max * w / PI).sqrt());
            }
            Ok((omegas, couplings))
        }
        FormFactor::FlatBand { rate } => {
            // Window grows with √N so both the truncation error and the
            // level spacing improve as N increases.
            let window = (n as f64).sqrt() * rate.max(1.0);
            let (gx, gw) = quad::gauss_legendre(n);
            let mut omegas = Vec::with_capacity(n);
            let mut couplings = Vec::with_capacity(n);
            for (&x, &w) in gx.iter().zip(&gw) {
                omegas.push(model.omega_a + window * x);
                couplings.push((rate / (2.0 * PI) * window * w).sqrt());
            }
            Ok((omegas, couplings))
        }
        FormFactor::Tabulated(t) => {
            let (lo, hi) = (t.omega[0], *t.omega.last().unwrap());
            let (gx, gw) = quad::gauss_legendre(n);
            let mut omegas = Vec::with_capacity(n);
            let mut couplings = Vec::with_capacity(n);
            let c = 0.5 * (lo + hi);
            let h = 0.5 * (hi - lo);
            for (&x, &w) in gx.iter().zip(&gw) {
                let omega = c + h * x;
                omegas.push(omega);
                couplings.push((t.eval(omega) * h * w).sqrt());
            }
            Ok((omegas, couplings))
        }
    }
}

/// Exact eigensolution of the arrowhead matrix
/// [[ω_a, c_1, …, c_N], [c_1, ω_1], …]: eigenvalues are the roots of the
/// secular equation E − ω_a − Σ c_k²/(E − ω_k) = 0, one strictly between
/// consecutive continuum energies plus one outside each end, and
/// |⟨a|E⟩|² = 1/(1 + Σ c_k²/(E − ω_k)²). Each root is independent, so the
/// solve is data-parallel.
pub fn arrowhead_levels(omega_a: f64, energies: &[f64], couplings: &[f64]) -> Vec<(f64, f64)> {
    let pairs: Vec<(f64, f64)> = energies
        .iter()
        .zip(couplings)
        .filter(|&(_, &c)| c != 0.0)
        .map(|(&d, &c)| (d, c * c))
        .collect();
    let n = pairs.len();
    if n == 0 {
        return vec![(omega_a, 1.0)];
    }
    // Roots that hug a continuum energy sit at offsets far below the float
    // resolution of the energy itself, so everything is solved in the offset
    // tau = E - d_anchor relative to the nearest pole: the secular function
    // and the weights then stay accurate down to denormal offsets.
    let secular_at = |anchor: f64, tau: f64| -> f64 {
        let mut acc = (anchor - omega_a) + tau;
        for &(d, c2) in &pairs {
            acc -= c2 / ((anchor - d) + tau);
        }
        acc
    };
    let weight_at = |anchor: f64, tau: f64| -> f64 {
        let mut acc = 1.0;
        for &(d, c2) in &pairs {
            let r = (anchor - d) + tau;
            acc += c2 / (r * r);
        }
        1.0 / acc
    };
    // the secular function increases from -inf to +inf on each bracket, so
    // plain bisection in tau is safe; stop once the bracket collapses
    // relative to the offset magnitude
    let bisect = |anchor: f64, mut lo: f64, mut hi: f64| -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if secular_at(anchor, mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-16 * lo.abs().max(hi.abs()) {
                break;
            }
        }
        0.5 * (lo + hi)
    };
    let total_c2: f64 = pairs.iter().map(|p| p.1).sum();
    exec::map_range(n + 1, |i| {
        let (anchor, tau) = if i == 0 {
            // one root below the whole continuum, anchored at its bottom
            let d0 = pairs[0].0;
            let mut step = 1.0 + (omega_a - d0).abs() + total_c2;
            while secular_at(d0, -step) >= 0.0 {
                step *= 2.0;
            }
            (d0, bisect(d0, -step, 0.0))
        } else if i == n {
            // and one above the top
            let dn = pairs[n - 1].0;
            let mut step = 1.0 + (omega_a - dn).abs() + total_c2;
            while secular_at(dn, step) <= 0.0 {
                step *= 2.0;
            }
            (dn, bisect(dn, 0.0, step))
        } else {
            // interior root: anchor at whichever neighbor it hugs
            let d_l = pairs[i - 1].0;
            let d_r = pairs[i].0;
            let half = 0.5 * (d_r - d_l);
            if secular_at(d_l, half) >= 0.0 {
                (d_l, bisect(d_l, 0.0, half))
            } else {
                (d_r, bisect(d_r, -half, 0.0))
            }
        };
        (anchor + tau, weight_at(anchor, tau))
    })
}

/// Brute-force verification oracle: discretize the continuum with N modes,
/// diagonalize the resulting finite Hamiltonian exactly, and evolve
/// unitarily: A(t) = Σ_k |⟨a|k⟩|² e^{−iE_k t}.
pub fn amplitude_oracle(model: &LeeModel, n: usize, times: &[f64]) -> Result<SurvivalSeries> {
    if !matches!(model.form_factor, FormFactor::Dirac { .. }) && n < 100 {
        return Err(Error::OracleFailed(format!("mode count {n} below minimum 100")));
    }
    let (energies, couplings) = discretize_continuum(model, n)?;
    let levels = arrowhead_levels(model.omega_a, &energies, &couplings);
    let total: f64 = levels.iter().map(|l| l.1).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::OracleFailed(format!("completeness defect {:.3e}", total - 1.0)));
    }
    let amplitude = exec::map(times, |&t| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(e, w) in &levels {
            acc += w * (-I * e * t).exp();
        }
        acc
    });
    Ok(SurvivalSeries { times: times.to_vec(), amplitude, method: Method::Oracle })
}

// ---------------------------------------------------------------------------
// Short-time expansions and limits
// ---------------------------------------------------------------------------

/// The two effective poles η_{1,2} = ω_a/2 ± √((ω_a/2)² + 1/τ_Z²) that
/// govern the short-time behavior. η1 η2 = −1/τ_Z² and η1 + η2 = ω_a.
#[derive(Debug, Clone, Copy)]
pub struct ShortTimePoles {
    pub eta1: f64,
    pub eta2: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ShortTimeEval {
    /// 1 − t²/τ_Z²
    pub quadratic: f64,
    /// the two-effective-pole value, exact to O(t⁴) against the quadratic
    pub two_pole_effective: f64,
    pub poles: ShortTimePoles,
}

pub fn short_time(model: &LeeModel, t: f64) -> Result<ShortTimeEval> {
    let tz = model.zeno_time()?;
    let half = 0.5 * model.omega_a;
    let root = (half * half + 1.0 / (tz * tz)).sqrt();
    let (eta1, eta2) = (half + root, half - root);
    let quadratic = 1.0 - t * t / (tz * tz);
    let d = eta1 - eta2;
    let two_pole_effective =
        (eta1 * eta1 + eta2 * eta2 - 2.0 * eta1 * eta2 * (t * d).cos()) / (d * d);
    Ok(ShortTimeEval { quadratic, two_pole_effective, poles: ShortTimePoles { eta1, eta2 } })
}

/// Eigen-split of the two-level system [[ω_a, λ], [λ, ω₀]]: returns
/// (E₊, E₋, weight of E₊ in the initial state).
pub(crate) fn two_level_split(omega_a: f64, omega0: f64, coupling: f64) -> (f64, f64, f64) {
    let mean = 0.5 * (omega_a + omega0);
    let half_det = 0.5 * (omega_a - omega0);
    let omega = (coupling * coupling + half_det * half_det).sqrt();
    (mean + omega, mean - omega, 0.5 * (1.0 + half_det / omega))
}

#[derive(Debug, Clone, Copy)]
pub struct RabiEval {
    pub amplitude: Complex64,
    pub probability: f64,
    /// Ω = √(λ² + ω_a²/4); the survival oscillates at the eigenvalue
    /// splitting 2Ω
    pub rabi_frequency: f64,
}

/// Narrow-band (Rabi) limit: the continuum collapses to a single level at
/// ω = 0 and the survival never dips below 1 − λ²/Ω² for ω_a ≠ 0.
pub fn rabi_survival(coupling: f64, omega_a: f64, t: f64) -> RabiEval {
    let (ep, em, wp) = two_level_split(omega_a, 0.0, coupling);
    let amplitude = wp * (-I * ep * t).exp() + (1.0 - wp) * (-I * em * t).exp();
    let omega = (coupling * coupling + 0.25 * omega_a * omega_a).sqrt();
    let probability = 1.0 - (coupling * coupling / (omega * omega)) * (omega * t).sin().powi(2);
    RabiEval { amplitude, probability, rabi_frequency: omega }
}

/// Strong-coupling approximation, valid for λ ≫ Λ, ω_a: fast oscillations
/// of frequency λ inside an envelope decaying at Λ/2.
pub fn strong_coupling_amplitude(coupling: f64, bandwidth: f64, omega_a: f64, t: f64) -> Complex64 {
    let corr = Complex64::new(omega_a, bandwidth) / (4.0 * coupling);
    let envelope = (-I * 0.5 * omega_a * t - 0.5 * bandwidth * t).exp();
    envelope
        * ((0.5 + corr) * (-I * coupling * t).exp() + (0.5 - corr) * (I * coupling * t).exp())
}

// ---------------------------------------------------------------------------
// Best available exact amplitude
// ---------------------------------------------------------------------------

/// Exact survival amplitude by the cheapest exact route the model admits:
/// closed form for Lorentzian, pure exponential for the flat band, two-level
/// diagonalization for Dirac, spectral inversion otherwise.
#[derive(Debug, Clone)]
pub enum ExactAmplitude {
    TwoPole(TwoPoleParams),
    PureExponential { omega_a: f64, rate: f64 },
    TwoLevel { e_plus: f64, e_minus: f64, w_plus: f64 },
    Spectral(SpectralAmplitude),
}

impl ExactAmplitude {
    pub fn for_model(model: &LeeModel, t_max: f64) -> Result<Self> {
        Ok(match &model.form_factor {
            FormFactor::Lorentzian { coupling, bandwidth } => {
                ExactAmplitude::TwoPole(two_pole_closed(*coupling, *bandwidth, model.omega_a))
            }
            FormFactor::FlatBand { rate } => {
                ExactAmplitude::PureExponential { omega_a: model.omega_a, rate: *rate }
            }
            FormFactor::Dirac { coupling, location } => {
                let (ep, em, wp) = two_level_split(model.omega_a, *location, *coupling);
                ExactAmplitude::TwoLevel { e_plus: ep, e_minus: em, w_plus: wp }
            }
            FormFactor::Tabulated(_) => {
                ExactAmplitude::Spectral(SpectralAmplitude::build(model, t_max)?)
            }
        })
    }

    pub fn amplitude(&self, t: f64) -> Complex64 {
        match self {
            ExactAmplitude::TwoPole(p) => amplitude_two_pole(p, t),
            ExactAmplitude::PureExponential { omega_a, rate } => {
                (-I * omega_a * t - 0.5 * rate * t).exp()
            }
            ExactAmplitude::TwoLevel { e_plus, e_minus, w_plus } => {
                w_plus * (-I * e_plus * t).exp() + (1.0 - w_plus) * (-I * e_minus * t).exp()
            }
            ExactAmplitude::Spectral(s) => s.amplitude(t),
        }
    }

    pub fn probability(&self, t: f64) -> f64 {
        match self {
            // trigonometric form hits exact zeros at the Rabi nodes, where
            // |A|² would leave an O(eps²) residue
            ExactAmplitude::TwoLevel { e_plus, e_minus, w_plus } => {
                let s = (0.5 * (e_plus - e_minus) * t).sin();
                1.0 - 4.0 * w_plus * (1.0 - w_plus) * s * s
            }
            ExactAmplitude::PureExponential { rate, .. } => (-rate * t).exp(),
            _ => self.amplitude(t).norm_sqr(),
        }
    }
}
