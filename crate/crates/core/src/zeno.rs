//! Measurement-modified decay: pulsed measurements at interval τ give the
//! effective rate γ_eff(τ) = −log P(τ)/τ, to be compared with the
//! undisturbed width γ. Frequent pulses slow the decay (Zeno); an
//! intermediate window can accelerate it (anti-Zeno / Heraclitus); the two
//! regimes meet at the transition times τ* where γ_eff(τ*) = γ. Continuous
//! measurement of strength Γ shifts the pole of the dressed propagator
//! instead.

use num_complex::Complex64;
use serde::Serialize;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::exec;
use crate::poles::{find_pole, two_pole_closed};
use crate::selfenergy::{sigma_first, sigma_second};
use crate::spectral::{FormFactor, LeeModel};
use crate::survival::ExactAmplitude;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// measurement slows the decay (γ_eff < γ)
    Zeno,
    /// measurement leaves the free rate unchanged
    Natural,
    /// measurement accelerates the decay (γ_eff > γ), inverse Zeno
    Heraclitus,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Zeno => "zeno",
            Regime::Natural => "natural",
            Regime::Heraclitus => "heraclitus",
        }
    }
}

/// γ_eff(τ) = −log P(τ)/τ. Infinite when the survival vanishes exactly.
pub fn effective_rate_pulsed(exact: &ExactAmplitude, tau: f64) -> Result<f64> {
    let p = exact.probability(tau);
    if p <= 0.0 {
        return Err(Error::RateInfinite);
    }
    Ok(-p.ln() / tau)
}

#[derive(Debug, Clone, Copy)]
pub struct PulsedSurvival {
    /// P(τ)^n after n measurements
    pub probability: f64,
    /// the same number written as e^{−γ_eff n τ}
    pub exponential_form: f64,
    pub gamma_eff: f64,
}

/// Survival after n measurements spaced τ apart. Each measurement projects
/// back onto the initial state, so the probability is exactly P(τ)^n.
pub fn pulsed_survival(exact: &ExactAmplitude, tau: f64, n: u32) -> Result<PulsedSurvival> {
    let gamma_eff = effective_rate_pulsed(exact, tau)?;
    let p = exact.probability(tau);
    Ok(PulsedSurvival {
        probability: p.powi(n as i32),
        exponential_form: (-gamma_eff * tau * n as f64).exp(),
        gamma_eff,
    })
}

/// Classify the measurement interval against the free width γ. The dead band
/// ε = 1e−9 γ absorbs roundoff so the flat band reads neutral everywhere.
pub fn regime_classify(gamma_eff: f64, gamma: f64) -> Regime {
    let eps = 1e-9 * gamma;
    if gamma_eff < gamma - eps {
        Regime::Zeno
    } else if gamma_eff > gamma + eps {
        Regime::Heraclitus
    } else {
        Regime::Natural
    }
}

/// Free (unmeasured) decay width of the model, exact where a closed form
/// exists.
pub fn free_width(model: &LeeModel) -> Result<f64> {
    match &model.form_factor {
        FormFactor::Lorentzian { coupling, bandwidth } => {
            Ok(two_pole_closed(*coupling, *bandwidth, model.omega_a).width)
        }
        FormFactor::FlatBand { rate } => Ok(*rate),
        _ => Ok(find_pole(model)?.width),
    }
}

/// Characteristic frequency scale of the density, setting the shortest
/// measurement interval worth scanning.
fn bandwidth_scale(ff: &FormFactor) -> f64 {
    match ff {
        FormFactor::Lorentzian { bandwidth, .. } => *bandwidth,
        FormFactor::FlatBand { .. } | FormFactor::Dirac { .. } => 1.0,
        FormFactor::Tabulated(_) => {
            let (lo, hi) = ff.support();
            0.5 * (hi - lo)
        }
    }
}

/// Transition times τ* where γ_eff(τ) crosses γ: 400-point logarithmic scan
/// of τ over [1e−4/Λ, τ_max], each sign change refined by bisection well
/// past 1e−8 relative. Empty when the pulsed rate never reaches the free
/// width (pure Zeno behavior); crossings beyond τ_max are not extrapolated.
pub fn find_tau_star(model: &LeeModel, tau_max: f64) -> Result<Vec<f64>> {
    let gamma = free_width(model)?;
    if !(gamma > 0.0) {
        return Err(Error::NotADecayPole);
    }
    let tau_hi = tau_max;
    let tau_lo = (1e-4 / bandwidth_scale(&model.form_factor)).min(0.5 * tau_hi);
    let exact = ExactAmplitude::for_model(model, tau_hi)?;
    let h = |tau: f64| -> Result<f64> { Ok(effective_rate_pulsed(&exact, tau)? - gamma) };

    let n = 400;
    let taus: Vec<f64> = (0..=n)
        .map(|i| tau_lo * (tau_hi / tau_lo).powf(i as f64 / n as f64))
        .collect();
    let values = exec::map(&taus, |&tau| h(tau));
    let mut stars = Vec::new();
    for i in 0..n {
        let (ha, hb) = match (&values[i], &values[i + 1]) {
            (Ok(a), Ok(b)) => (*a, *b),
            _ => continue,
        };
        // a genuine crossing must leave the dead band on both sides, or
        // ln/exp roundoff in an exactly-exponential model fakes sign flips
        let eps = 1e-9 * gamma;
        if !((ha < -eps && hb > eps) || (ha > eps && hb < -eps)) {
            continue;
        }
        let (mut lo, mut hi) = (taus[i], taus[i + 1]);
        let mut hlo = ha;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let hm = h(mid)?;
            if hlo * hm <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
                hlo = hm;
            }
        }
        stars.push(0.5 * (lo + hi));
    }
    Ok(stars)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SufficientCondition {
    /// wave function renormalization Z = |1 − R|²
    pub z: f64,
    /// Z < 1 guarantees that γ_eff eventually exceeds γ, hence a τ* exists
    pub holds: bool,
    /// for the Lorentzian at weak coupling: ω_a² > Λ² predicts Z < 1
    pub weak_coupling_check: Option<bool>,
}

pub fn sufficient_condition(model: &LeeModel) -> Result<SufficientCondition> {
    let (z, weak) = match &model.form_factor {
        FormFactor::Lorentzian { coupling, bandwidth } => {
            let p = two_pole_closed(*coupling, *bandwidth, model.omega_a);
            (p.z, Some(model.omega_a * model.omega_a > bandwidth * bandwidth))
        }
        _ => (find_pole(model)?.z, None),
    };
    Ok(SufficientCondition { z, holds: z < 1.0, weak_coupling_check: weak })
}

/// Pole of the dressed propagator under continuous measurement of strength
/// Γ: E − ω_a − Σ(E + iΓ/2) = 0, with Σ the continuation from the upper half
/// plane. For Γ = 0 this is the free decay pole.
#[derive(Debug, Clone, Copy)]
pub struct ContinuousRate {
    pub e_pole: Complex64,
    /// γ_eff(Γ) = −2 Im E
    pub gamma_eff: f64,
    pub strength: f64,
}

fn sigma_continued(ff: &FormFactor, z: Complex64) -> Result<Complex64> {
    match ff {
        FormFactor::Dirac { .. } => Ok(sigma_first(ff, z)?.value),
        _ => {
            if z.im > 0.0 {
                Ok(sigma_first(ff, z)?.value)
            } else {
                Ok(sigma_second(ff, z)?.value)
            }
        }
    }
}

pub fn continuous_rate(model: &LeeModel, strength: f64) -> Result<ContinuousRate> {
    if !(strength >= 0.0 && strength.is_finite()) {
        return Err(Error::InvalidModel(format!(
            "measurement strength must be finite and >= 0, got {strength}"
        )));
    }
    if strength == 0.0 {
        let p = find_pole(model)?;
        return Ok(ContinuousRate { e_pole: p.e_pole, gamma_eff: p.width, strength });
    }
    let shift = Complex64::new(0.0, 0.5 * strength);
    let mut e = Complex64::new(model.omega_a, 0.0)
        + sigma_continued(&model.form_factor, Complex64::new(model.omega_a, 0.0) + shift)?;
    let mut converged = false;
    for _ in 0..200 {
        let s = sigma_continued(&model.form_factor, e + shift)?;
        let f = e - model.omega_a - s;
        if f.norm() < 1e-13 * e.norm().max(1.0) {
            converged = true;
            break;
        }
        let h = 1e-7 * e.norm().max(1.0);
        let ds = (sigma_continued(&model.form_factor, e + shift + h)?
            - sigma_continued(&model.form_factor, e + shift - h)?)
            / (2.0 * h);
        let fp = 1.0 - ds;
        if fp.norm() < 1e-300 {
            return Err(Error::PoleNotFound);
        }
        e -= f / fp;
        if !e.is_finite() {
            return Err(Error::PoleNotFound);
        }
    }
    if !converged {
        return Err(Error::PoleNotFound);
    }
    Ok(ContinuousRate { e_pole: e, gamma_eff: -2.0 * e.im, strength })
}

/// Strong-measurement asymptote γ_eff(Γ) → 4/(τ_Z² Γ).
pub fn continuous_asymptote(model: &LeeModel, strength: f64) -> Result<f64> {
    let tz = model.zeno_time()?;
    Ok(4.0 / (tz * tz * strength))
}

/// A sweep of the pulsed effective rate over measurement intervals, with
/// regime labels and summary data.
#[derive(Debug, Clone)]
pub struct ZenoReport {
    pub taus: Vec<f64>,
    pub gamma_eff: Vec<f64>,
    pub regimes: Vec<Regime>,
    pub summary: ZenoSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZenoSummary {
    pub gamma: f64,
    pub gamma_golden_rule: Option<f64>,
    #[serde(rename = "Z")]
    pub z: f64,
    pub tau_stars: Vec<f64>,
    pub condition_holds: bool,
}

pub fn zeno_report(model: &LeeModel, taus: &[f64]) -> Result<ZenoReport> {
    let t_max = taus.iter().cloned().fold(0.0_f64, f64::max);
    let exact = ExactAmplitude::for_model(model, t_max)?;
    let gamma = free_width(model)?;
    let rates = exec::map(taus, |&tau| effective_rate_pulsed(&exact, tau));
    let mut gamma_eff = Vec::with_capacity(taus.len());
    for r in rates {
        gamma_eff.push(r?);
    }
    let regimes: Vec<Regime> = gamma_eff.iter().map(|&g| regime_classify(g, gamma)).collect();
    let cond = sufficient_condition(model)?;
    let summary = ZenoSummary {
        gamma,
        gamma_golden_rule: model.golden_rule().ok(),
        z: cond.z,
        tau_stars: find_tau_star(model, t_max.max(8.0 / gamma))?,
        condition_holds: cond.holds,
    };
    Ok(ZenoReport { taus: taus.to_vec(), gamma_eff, regimes, summary })
}

impl ZenoReport {
    /// Rows `tau,gamma_eff,regime` at full decimal precision.
    pub fn write_csv<W: Write>(&self, w: &mut W, with_header: bool) -> io::Result<()> {
        if with_header {
            writeln!(w, "tau,gamma_eff,regime")?;
        }
        for ((&tau, &g), regime) in self.taus.iter().zip(&self.gamma_eff).zip(&self.regimes) {
            writeln!(w, "{:.16e},{:.16e},{}", tau, g, regime.label())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::FormFactor;

    fn lor_model(lambda: f64, bandwidth: f64, omega_a: f64) -> LeeModel {
        LeeModel::new(omega_a, FormFactor::lorentzian(lambda, bandwidth).unwrap()).unwrap()
    }

    #[test]
    fn quadratic_law_at_short_times() {
        let m = lor_model(0.1, 1.0, 1.0);
        let exact = ExactAmplitude::for_model(&m, 1.0).unwrap();
        let tz = m.zeno_time().unwrap();
        for tau in [1e-3, 1e-2] {
            let g = effective_rate_pulsed(&exact, tau).unwrap();
            let predicted = tau / (tz * tz);
            assert!((g - predicted).abs() / predicted < 1e-2, "tau={tau}: {g} vs {predicted}");
        }
    }

    #[test]
    fn flat_band_is_immune_to_measurement() {
        let m = LeeModel::new(1.0, FormFactor::flat_band(0.01).unwrap()).unwrap();
        let exact = ExactAmplitude::for_model(&m, 100.0).unwrap();
        for tau in [0.01, 0.1, 1.0, 10.0, 100.0] {
            let g = effective_rate_pulsed(&exact, tau).unwrap();
            assert!((g - 0.01).abs() < 1e-10, "tau={tau}: {g}");
            assert_eq!(regime_classify(g, 0.01), Regime::Natural);
        }
        assert!(find_tau_star(&m, 1e3).unwrap().is_empty());
    }

    #[test]
    fn rate_is_infinite_at_rabi_zero() {
        let m = LeeModel::new(0.0, FormFactor::dirac(0.5, 0.0).unwrap()).unwrap();
        let exact = ExactAmplitude::for_model(&m, 10.0).unwrap();
        let tau = std::f64::consts::PI / (2.0 * 0.5);
        assert!(matches!(effective_rate_pulsed(&exact, tau), Err(Error::RateInfinite)));
    }

    #[test]
    fn pulsed_survival_identity() {
        let m = lor_model(0.1, 1.0, 1.0);
        let exact = ExactAmplitude::for_model(&m, 10.0).unwrap();
        let ps = pulsed_survival(&exact, 0.5, 20).unwrap();
        assert!((ps.probability - ps.exponential_form).abs() < 1e-12 * ps.probability);
    }

    #[test]
    fn tau_star_exists_off_axis_and_satisfies_crossing() {
        for ratio in [2.0, 4.0, 10.0] {
            let m = lor_model(0.1, 1.0, ratio);
            let gamma = free_width(&m).unwrap();
            let stars = find_tau_star(&m, 8.0 / gamma).unwrap();
            assert!(!stars.is_empty(), "no tau* at omega_a/Lambda = {ratio}");
            let exact = ExactAmplitude::for_model(&m, 8.0 / gamma).unwrap();
            for &ts in &stars {
                let p = exact.probability(ts);
                assert!(
                    (p - (-gamma * ts).exp()).abs() < 1e-8,
                    "ratio {ratio}: residual {:.3e}",
                    (p - (-gamma * ts).exp()).abs()
                );
            }
        }
    }

    #[test]
    fn no_tau_star_on_resonance() {
        let m = lor_model(0.1, 1.0, 0.0);
        let gamma = free_width(&m).unwrap();
        assert!(find_tau_star(&m, 1e3 / gamma).unwrap().is_empty());
    }

    #[test]
    fn smallest_tau_star_matches_jump_estimate() {
        let m = lor_model(0.1, 1.0, 10.0);
        let gamma = free_width(&m).unwrap();
        let stars = find_tau_star(&m, 8.0 / gamma).unwrap();
        let tz = m.zeno_time().unwrap();
        let estimate = gamma * tz * tz;
        let smallest = stars[0];
        assert!(
            (smallest - estimate).abs() / estimate < 0.1,
            "tau* {smallest} vs estimate {estimate}"
        );
    }

    #[test]
    fn sufficient_condition_tracks_z() {
        let c = sufficient_condition(&lor_model(0.1, 1.0, 4.0)).unwrap();
        assert!(c.holds && c.z < 1.0);
        assert_eq!(c.weak_coupling_check, Some(true));
        let c = sufficient_condition(&lor_model(0.1, 1.0, 0.0)).unwrap();
        assert!(!c.holds, "z = {}", c.z);
        assert_eq!(c.weak_coupling_check, Some(false));
    }

    #[test]
    fn continuous_rate_matches_bandwidth_shift_identity() {
        // dressing the Lorentzian by iGamma/2 is the same two-pole problem
        // with the bandwidth enlarged by Gamma/2
        let m = lor_model(0.1, 1.0, 1.0);
        for strength in [0.1, 1.0, 10.0] {
            let c = continuous_rate(&m, strength).unwrap();
            let p = two_pole_closed(0.1, 1.0 + 0.5 * strength, 1.0);
            assert!((c.gamma_eff - p.width).abs() < 1e-10, "strength {strength}");
        }
    }

    #[test]
    fn continuous_rate_reaches_asymptote() {
        let m = lor_model(0.1, 1.0, 1.0);
        let c = continuous_rate(&m, 1000.0).unwrap();
        let a = continuous_asymptote(&m, 1000.0).unwrap();
        assert!((c.gamma_eff - a).abs() / a < 0.05, "{} vs {}", c.gamma_eff, a);
    }

    #[test]
    fn continuous_rate_at_zero_is_free_width() {
        let m = lor_model(0.1, 1.0, 1.0);
        let c = continuous_rate(&m, 0.0).unwrap();
        assert!((c.gamma_eff - free_width(&m).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn report_round_trip() {
        let m = lor_model(0.1, 1.0, 4.0);
        let taus: Vec<f64> = (1..=40).map(|i| 0.25 * i as f64).collect();
        let r = zeno_report(&m, &taus).unwrap();
        assert_eq!(r.gamma_eff.len(), taus.len());
        assert!(r.summary.condition_holds);
        assert!(!r.summary.tau_stars.is_empty());
        let mut buf = Vec::new();
        r.write_csv(&mut buf, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("tau,gamma_eff,regime\n"));
        let json = serde_json::to_string(&r.summary).unwrap();
        assert!(json.contains("tau_stars"));
    }
}
