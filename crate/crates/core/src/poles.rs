//! Resolvent evaluation, second-sheet pole location, residues and wave
//! function renormalization, the closed-form two-pole solution, and the
//! Weisskopf-Wigner single-pole reduction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec;
use crate::selfenergy::{sigma_first, sigma_second, Sheet, SheetedEnergy, SigmaEval};
use crate::spectral::LeeModel;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dominant decay pole of the resolvent on the second sheet.
#[derive(Debug, Clone, Copy)]
pub struct PoleData {
    pub e_pole: Complex64,
    /// Re E_pole − ω_a
    pub shift: f64,
    /// γ = −2 Im E_pole
    pub width: f64,
    /// 1 − R = 1 / (1 − Σ'_II(E_pole))
    pub residue: Complex64,
    /// Z = |residue|²
    pub z: f64,
}

/// G_a(E) = 1 / (E − ω_a − Σ(E)) with Σ taken on the requested sheet.
pub fn resolvent(model: &LeeModel, e: SheetedEnergy) -> Result<Complex64> {
    let sigma = match e.sheet {
        Sheet::First => sigma_first(&model.form_factor, e.energy)?,
        Sheet::Second => sigma_second(&model.form_factor, e.energy)?,
    };
    let d = e.energy - model.omega_a - sigma.value;
    if d.norm() < 1e-14 * e.energy.norm().max(1.0) {
        return Err(Error::AtPole);
    }
    Ok(1.0 / d)
}

/// Locate the dominant decay pole by Newton iteration on
/// f(E) = E − ω_a − Σ_II(E), seeded with one perturbative step.
pub fn find_pole(model: &LeeModel) -> Result<PoleData> {
    model.require_unstable()?;
    let eps = 1e-6;
    let seed = model.omega_a
        + sigma_second(&model.form_factor, Complex64::new(model.omega_a, -eps))?.value;
    // At omega_a = 0 a symmetric density maps the imaginary axis to itself,
    // so a strongly-coupled pair of off-axis poles would be invisible to a
    // purely imaginary Newton iteration; a tiny real offset breaks the tie
    // deterministically toward the Re E >= 0 member of the pair.
    let seed = seed + 1e-3 * (1.0 + model.omega_a.abs());
    newton_pole(model, seed)
}

fn newton_pole(model: &LeeModel, seed: Complex64) -> Result<PoleData> {
    let mut e = seed;
    let mut last_sigma: Option<SigmaEval> = None;
    for _ in 0..100 {
        let s = sigma_second(&model.form_factor, e)?;
        let f = e - model.omega_a - s.value;
        if f.norm() < 1e-12 * e.norm().max(1.0) {
            last_sigma = Some(s);
            break;
        }
        let fp = 1.0 - s.derivative;
        if fp.norm() < 1e-300 || !fp.is_finite() {
            return Err(Error::PoleNotFound);
        }
        e -= f / fp;
        if !e.is_finite() {
            return Err(Error::PoleNotFound);
        }
    }
    let s = last_sigma.ok_or(Error::PoleNotFound)?;
    if e.im > 1e-12 * e.norm().max(1.0) {
        return Err(Error::NotADecayPole);
    }
    let residue = 1.0 / (1.0 - s.derivative);
    Ok(PoleData {
        e_pole: e,
        shift: e.re - model.omega_a,
        width: -2.0 * e.im,
        residue,
        z: residue.norm_sqr(),
    })
}

/// Grid of Newton seeds over a rectangle in the lower half plane; converged
/// poles are deduplicated by proximity. Useful for secondary poles.
pub fn scan_poles(
    model: &LeeModel,
    re_range: (f64, f64),
    im_range: (f64, f64),
    steps: usize,
) -> Result<Vec<PoleData>> {
    let seeds: Vec<Complex64> = (0..steps)
        .flat_map(|i| {
            (0..steps).map(move |j| {
                Complex64::new(
                    re_range.0 + (re_range.1 - re_range.0) * (i as f64 + 0.5) / steps as f64,
                    im_range.0 + (im_range.1 - im_range.0) * (j as f64 + 0.5) / steps as f64,
                )
            })
        })
        .collect();
    let found = exec::map(&seeds, |&seed| newton_pole(model, seed).ok());
    let mut poles: Vec<PoleData> = Vec::new();
    for p in found.into_iter().flatten() {
        let scale = p.e_pole.norm().max(1.0);
        if !poles.iter().any(|q| (q.e_pole - p.e_pole).norm() < 1e-8 * scale) {
            poles.push(p);
        }
    }
    poles.sort_by(|a, b| b.e_pole.im.partial_cmp(&a.e_pole.im).unwrap());
    Ok(poles)
}

/// Closed-form solution of the Lorentzian (two-pole) model.
#[derive(Debug, Clone, Copy)]
pub struct TwoPoleParams {
    pub lambda: f64,
    pub bandwidth: f64,
    pub omega_a: f64,
    /// υ² = ω_a² + 4λ² − Λ² (may be negative)
    pub upsilon_sq: f64,
    /// dominant pole, Im E1 ≥ Im E2
    pub e1: Complex64,
    pub e2: Complex64,
    /// δω_a = Re E1 − ω_a
    pub shift: f64,
    /// γ = −2 Im E1
    pub width: f64,
    /// R, the subdominant-pole residue; 1−R is the dominant residue
    pub residue_r: Complex64,
    /// Z = |1 − R|²
    pub z: f64,
}

/// Both propagator poles of the Lorentzian model, from the quadratic
/// (E − ω_a)(E + iΛ) = λ². The trace identity E1 + E2 = ω_a − iΛ holds
/// exactly by construction.
pub fn two_pole_closed(lambda: f64, bandwidth: f64, omega_a: f64) -> TwoPoleParams {
    let upsilon_sq = omega_a * omega_a + 4.0 * lambda * lambda - bandwidth * bandwidth;
    let disc = Complex64::new(upsilon_sq, 2.0 * omega_a * bandwidth);
    let s = disc.sqrt();
    let sign = if omega_a < 0.0 { -1.0 } else { 1.0 };
    let trace = Complex64::new(omega_a, -bandwidth);
    let e1 = 0.5 * (trace + sign * s);
    let e2 = trace - e1;
    let one_minus_r = (e1 + I * bandwidth) / (e1 - e2);
    let residue_r = 1.0 - one_minus_r;
    TwoPoleParams {
        lambda,
        bandwidth,
        omega_a,
        upsilon_sq,
        e1,
        e2,
        shift: e1.re - omega_a,
        width: -2.0 * e1.im,
        residue_r,
        z: one_minus_r.norm_sqr(),
    }
}

/// Single-pole (Weisskopf-Wigner) reduction: keep only the dominant pole,
/// normalize the amplitude to 1 at t = 0 (the residue is dropped).
#[derive(Debug, Clone, Copy)]
pub struct WeisskopfWigner {
    pub pole: PoleData,
}

impl WeisskopfWigner {
    /// A_WW(t) = exp(−i E_pole t)
    pub fn amplitude(&self, t: f64) -> Complex64 {
        (-I * self.pole.e_pole * t).exp()
    }
}

pub fn weisskopf_wigner(model: &LeeModel) -> Result<WeisskopfWigner> {
    Ok(WeisskopfWigner { pole: find_pole(model)? })
}
