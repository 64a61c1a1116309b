//! Model reductions: collapse any admissible form factor to an effective
//! Lorentzian with the same short- and long-time scales, rewrite the decay
//! as a cascade through one auxiliary discrete level, and expose the
//! non-Hermitian 2×2 matrix whose eigenvalues are the two propagator poles.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poles::two_pole_closed;
use crate::selfenergy::sigma_first;
use crate::spectral::{FormFactor, LeeModel};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Effective Lorentzian parameters matched to a model: λ_eff reproduces the
/// Zeno time, b the on-shell density, Λ_eff the golden-rule width.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TwoPoleReduction {
    /// λ_eff = 1/τ_Z
    pub lambda_eff: f64,
    /// Λ_eff = 1/(b τ_Z²)
    #[serde(rename = "Lambda_eff")]
    pub big_lambda_eff: f64,
    /// b = π g²(ω_a)
    pub b: f64,
}

impl TwoPoleReduction {
    /// Self-energy of the effective model on the first sheet from above:
    /// Σ_eff(E) = λ_eff²/(E + iΛ_eff). Σ_eff(ω_a) = real shift − i b once the
    /// width is small, and E Σ_eff(E) → 1/τ_Z² at large E.
    pub fn sigma(&self, e: Complex64) -> Complex64 {
        self.lambda_eff * self.lambda_eff / (e + I * self.big_lambda_eff)
    }
}

/// Reduce a model to the effective two-pole (Lorentzian) form. The flat band
/// has no Zeno time and the Dirac measure no pointwise density, so neither
/// admits the reduction. A Lorentzian at ω_a = 0 is a fixed point.
pub fn two_pole_reduce(model: &LeeModel) -> Result<TwoPoleReduction> {
    match &model.form_factor {
        FormFactor::FlatBand { .. } => Err(Error::SecondMomentDivergent),
        FormFactor::Dirac { .. } => Err(Error::ReductionDegenerate),
        ff => {
            let tz = ff.zeno_time()?;
            let density = ff.eval_density(model.omega_a)?;
            if density <= 0.0 {
                return Err(Error::ReductionDegenerate);
            }
            let b = std::f64::consts::PI * density;
            Ok(TwoPoleReduction {
                lambda_eff: 1.0 / tz,
                big_lambda_eff: 1.0 / (b * tz * tz),
                b,
            })
        }
    }
}

/// The decay rewritten as a two-step cascade: the initial state couples with
/// strength 1/τ_Z to one auxiliary level at the mean continuum energy ω_b,
/// which in turn carries all remaining structure in its own self-energy
/// Σ_b(E) = E − ω_b − (1/τ_Z²)/Σ_a(E).
#[derive(Debug, Clone)]
pub struct CascadeModel {
    pub omega_b: f64,
    /// coupling 1/τ_Z between the initial state and the auxiliary level
    pub coupling: f64,
    model: LeeModel,
}

pub fn cascade(model: &LeeModel) -> Result<CascadeModel> {
    let tz = model.zeno_time()?;
    let omega_b = model.form_factor.first_moment()?;
    Ok(CascadeModel { omega_b, coupling: 1.0 / tz, model: model.clone() })
}

impl CascadeModel {
    /// Self-energy of the auxiliary level, defined so the cascade reproduces
    /// Σ_a exactly. E must lie off the real axis.
    pub fn sigma_b(&self, e: Complex64) -> Result<Complex64> {
        let sigma_a = match &self.model.form_factor {
            FormFactor::Dirac { coupling, location } => {
                let d = e - location;
                if d.norm() == 0.0 {
                    return Err(Error::AtPole);
                }
                coupling * coupling / d
            }
            ff => sigma_first(ff, e)?.value,
        };
        if sigma_a.norm() == 0.0 {
            return Err(Error::CascadeSingular);
        }
        Ok(e - self.omega_b - self.coupling * self.coupling / sigma_a)
    }

    /// Σ_a rebuilt from the cascade: (1/τ_Z²)/(E − ω_b − Σ_b(E)). Equals the
    /// original self-energy identically.
    pub fn rebuild_sigma_a(&self, e: Complex64) -> Result<Complex64> {
        let sb = self.sigma_b(e)?;
        let d = e - self.omega_b - sb;
        if d.norm() == 0.0 {
            return Err(Error::CascadeSingular);
        }
        Ok(self.coupling * self.coupling / d)
    }

    /// For the Lorentzian the auxiliary self-energy is the constant −iΛ, so
    /// the auxiliary level itself decays into a flat band: returns
    /// (g_b, γ_b) = (√(Λ/π), 2Λ). None for other form factors.
    pub fn auxiliary_flat_band(&self) -> Option<(f64, f64)> {
        match &self.model.form_factor {
            FormFactor::Lorentzian { bandwidth, .. } => {
                Some(((bandwidth / std::f64::consts::PI).sqrt(), 2.0 * bandwidth))
            }
            _ => None,
        }
    }

    pub fn summary(&self, sample_energies: &[Complex64]) -> Result<CascadeSummary> {
        let mut sigma_b_samples = Vec::with_capacity(sample_energies.len());
        for &e in sample_energies {
            let s = self.sigma_b(e)?;
            sigma_b_samples.push(SigmaSample { re_e: e.re, im_e: e.im, re_sigma: s.re, im_sigma: s.im });
        }
        Ok(CascadeSummary { omega_b: self.omega_b, coupling: self.coupling, sigma_b_samples })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SigmaSample {
    pub re_e: f64,
    pub im_e: f64,
    pub re_sigma: f64,
    pub im_sigma: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CascadeSummary {
    pub omega_b: f64,
    pub coupling: f64,
    pub sigma_b_samples: Vec<SigmaSample>,
}

/// The non-Hermitian matrix [[ω_a, λ], [λ, −iΛ]] whose two eigenvalues are
/// exactly the propagator poles of the Lorentzian model, and whose (1,1)
/// matrix exponential entry is the survival amplitude.
#[derive(Debug, Clone, Copy)]
pub struct EffectiveTwoByTwo {
    pub omega_a: f64,
    pub coupling: f64,
    /// lower-right entry, −iΛ
    pub diagonal: Complex64,
    pub e1: Complex64,
    pub e2: Complex64,
}

pub fn effective_2x2(lambda: f64, bandwidth: f64, omega_a: f64) -> EffectiveTwoByTwo {
    let p = two_pole_closed(lambda, bandwidth, omega_a);
    EffectiveTwoByTwo {
        omega_a,
        coupling: lambda,
        diagonal: -I * bandwidth,
        e1: p.e1,
        e2: p.e2,
    }
}

impl EffectiveTwoByTwo {
    /// [e^{−iMt}]_{11} by spectral projectors:
    /// (ω_a − E2) e^{−iE1 t}/(E1 − E2) + (ω_a − E1) e^{−iE2 t}/(E2 − E1).
    pub fn survival_amplitude(&self, t: f64) -> Complex64 {
        let d = self.e1 - self.e2;
        ((self.omega_a - self.e2) * (-I * self.e1 * t).exp()
            - (self.omega_a - self.e1) * (-I * self.e2 * t).exp())
            / d
    }
}

/// Weak-coupling diagnostic for the lower-right entry: with the pole data
/// (δω_a, γ) and the Zeno time, the entry should be close to
/// −i [γ/2 + (2/(τ_Z² γ)) / (1 + 4 δω_a²/γ²)], which tends to −iΛ as λ → 0.
pub fn diagnostic_diagonal_entry(model: &LeeModel) -> Result<Complex64> {
    let tz = model.zeno_time()?;
    let (shift, width) = match &model.form_factor {
        FormFactor::Lorentzian { coupling, bandwidth } => {
            let p = two_pole_closed(*coupling, *bandwidth, model.omega_a);
            (p.shift, p.width)
        }
        _ => {
            let p = crate::poles::find_pole(model)?;
            (p.shift, p.width)
        }
    };
    if width <= 0.0 {
        return Err(Error::NotADecayPole);
    }
    let lorentz = 1.0 / (1.0 + 4.0 * shift * shift / (width * width));
    Ok(-I * (0.5 * width + 2.0 / (tz * tz * width) * lorentz))
}
