//! Self-energy Σ_a(E) = ∫ g²(ω)/(E − ω) dω on the first sheet, its
//! continuation to the second sheet, derivatives, and the large-E asymptote.
//!
//! The second-sheet determination is the standard continuation fixed by the
//! cut discontinuity: Σ_II(E) = Σ_I(E) − 2πi g²(E) in the lower half plane,
//! with g² continued analytically. For the Lorentzian this reproduces the
//! closed form λ²/(E + iΛ) on both sides of the cut.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad;
use crate::spectral::{principal_value, FormFactor};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sheet {
    First,
    Second,
}

/// A complex energy tagged with the Riemann sheet it lives on.
#[derive(Debug, Clone, Copy)]
pub struct SheetedEnergy {
    pub energy: Complex64,
    pub sheet: Sheet,
}

impl SheetedEnergy {
    pub fn first(energy: Complex64) -> Self {
        SheetedEnergy { energy, sheet: Sheet::First }
    }
    pub fn second(energy: Complex64) -> Self {
        SheetedEnergy { energy, sheet: Sheet::Second }
    }
}

/// Self-energy value and its energy derivative at one point.
#[derive(Debug, Clone, Copy)]
pub struct SigmaEval {
    pub value: Complex64,
    pub derivative: Complex64,
    pub sheet: Sheet,
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// First-sheet self-energy. The energy must lie off the cut, or on the real
/// axis strictly outside the support of the density.
pub fn sigma_first(ff: &FormFactor, e: Complex64) -> Result<SigmaEval> {
    let eval = match ff {
        FormFactor::Lorentzian { coupling, bandwidth } => {
            if e.im == 0.0 {
                return Err(Error::OnCutAmbiguous);
            }
            let l2 = coupling * coupling;
            let pole = if e.im > 0.0 { I * bandwidth } else { -I * bandwidth };
            let d = e + pole;
            SigmaEval { value: l2 / d, derivative: -l2 / (d * d), sheet: Sheet::First }
        }
        FormFactor::FlatBand { rate } => {
            if e.im == 0.0 {
                return Err(Error::OnCutAmbiguous);
            }
            let half = Complex64::new(0.0, -0.5 * rate * e.im.signum());
            SigmaEval { value: half, derivative: Complex64::new(0.0, 0.0), sheet: Sheet::First }
        }
        FormFactor::Dirac { coupling, location } => {
            let d = e - location;
            if d.norm() == 0.0 {
                return Err(Error::AtPole);
            }
            let l2 = coupling * coupling;
            SigmaEval { value: l2 / d, derivative: -l2 / (d * d), sheet: Sheet::First }
        }
        FormFactor::Tabulated(t) => {
            let (lo, hi) = (t.omega[0], *t.omega.last().unwrap());
            if e.im == 0.0 && e.re >= lo && e.re <= hi {
                return Err(Error::OnCutAmbiguous);
            }
            let tol = 1e-13 * (1.0 + t.integral_total());
            let value = dispersion(t, e, lo, hi, tol, 1);
            let derivative = -dispersion(t, e, lo, hi, tol, 2);
            SigmaEval { value, derivative, sheet: Sheet::First }
        }
    };
    Ok(eval)
}

/// ∫ g²(ω)/(E−ω)^power dω over [lo, hi], split at Re E when it falls inside.
fn dispersion(
    t: &crate::spectral::TabulatedDensity,
    e: Complex64,
    lo: f64,
    hi: f64,
    tol: f64,
    power: i32,
) -> Complex64 {
    let f = |w: f64| Complex64::new(t.eval(w), 0.0) / (e - w).powi(power);
    if e.re > lo && e.re < hi {
        quad::integrate_complex(&f, lo, e.re, tol) + quad::integrate_complex(&f, e.re, hi, tol)
    } else {
        quad::integrate_complex(&f, lo, hi, tol)
    }
}

/// Boundary value Σ(ω + i0⁺) on the upper rim of the cut. For a tabulated
/// density this is the principal value minus iπ g²(ω).
pub fn sigma_on_cut_above(ff: &FormFactor, omega: f64) -> Result<Complex64> {
    match ff {
        FormFactor::Lorentzian { coupling, bandwidth } => {
            Ok(coupling * coupling / (omega + I * bandwidth))
        }
        FormFactor::FlatBand { rate } => Ok(Complex64::new(0.0, -0.5 * rate)),
        FormFactor::Dirac { .. } => Err(Error::NoBranchCut),
        FormFactor::Tabulated(t) => {
            let (lo, hi) = (t.omega[0], *t.omega.last().unwrap());
            if omega < lo || omega > hi {
                return Ok(Complex64::new(
                    quad::integrate_real(&|w| t.eval(w) / (omega - w), lo, hi, 1e-13),
                    0.0,
                ));
            }
            let re = principal_value(t, omega)?;
            Ok(Complex64::new(re, -std::f64::consts::PI * t.eval(omega)))
        }
    }
}

/// Second-sheet self-energy: the continuation of the first-sheet function
/// from above, through the cut. Coincides with Σ_I in the upper half plane;
/// in the lower half plane equals Σ_I(E) − 2πi g²(E). Real E on the cut is
/// taken as the limit from below, which matches Σ_I(ω + i0⁺).
pub fn sigma_second(ff: &FormFactor, e: Complex64) -> Result<SigmaEval> {
    if matches!(ff, FormFactor::Dirac { .. }) {
        return Err(Error::NoBranchCut);
    }
    if e.im > 0.0 {
        let s = sigma_first(ff, e)?;
        return Ok(SigmaEval { sheet: Sheet::Second, ..s });
    }
    let lower = if e.im < 0.0 {
        sigma_first(ff, e)?
    } else {
        // On the real axis: limit from below.
        match ff {
            FormFactor::Lorentzian { coupling, bandwidth } => {
                let l2 = coupling * coupling;
                let d = e - I * bandwidth;
                SigmaEval { value: l2 / d, derivative: -l2 / (d * d), sheet: Sheet::First }
            }
            FormFactor::FlatBand { rate } => SigmaEval {
                value: Complex64::new(0.0, 0.5 * rate),
                derivative: Complex64::new(0.0, 0.0),
                sheet: Sheet::First,
            },
            FormFactor::Tabulated(_) => {
                let above = sigma_on_cut_above(ff, e.re)?;
                SigmaEval { value: above.conj(), derivative: sigma_cut_derivative(ff, e.re)?, sheet: Sheet::First }
            }
            FormFactor::Dirac { .. } => unreachable!(),
        }
    };
    let g2 = ff.continued_density(e)?;
    let dg2 = ff.continued_density_derivative(e)?;
    let two_pi_i = 2.0 * std::f64::consts::PI * I;
    Ok(SigmaEval {
        value: lower.value - two_pi_i * g2,
        derivative: lower.derivative - two_pi_i * dg2,
        sheet: Sheet::Second,
    })
}

/// dΣ/dE on the lower rim of the cut for tabulated densities: the
/// finite-part derivative of the dispersion integral. Computed from small
/// symmetric offsets since the boundary value itself is smooth in ω here.
fn sigma_cut_derivative(ff: &FormFactor, omega: f64) -> Result<Complex64> {
    let h = 1e-6 * (1.0 + omega.abs());
    let a = sigma_on_cut_above(ff, omega + h)?.conj();
    let b = sigma_on_cut_above(ff, omega - h)?.conj();
    Ok((a - b) / (2.0 * h))
}

/// Large-energy asymptote of the self-energy.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoteEval {
    /// 1/(τ_Z² E)
    pub value: Complex64,
    /// |Σ(E) τ_Z² E − 1|
    pub relative_deviation: f64,
}

pub fn sigma_asymptote(ff: &FormFactor, e: Complex64) -> Result<AsymptoteEval> {
    let tz = ff.zeno_time()?;
    let tz2 = tz * tz;
    let value = 1.0 / (tz2 * e);
    let sigma = match ff {
        FormFactor::Dirac { coupling, location } => {
            let l2 = coupling * coupling;
            l2 / (e - location)
        }
        _ => sigma_first(ff, e)?.value,
    };
    let relative_deviation = (sigma * tz2 * e - 1.0).norm();
    Ok(AsymptoteEval { value, relative_deviation })
}
