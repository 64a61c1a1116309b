//! Form-factor catalog and model-level scalar quantities.
//!
//! A [`FormFactor`] is the spectral coupling density g²(ω) between the
//! discrete state and the continuum mode of energy ω. The catalog covers a
//! Lorentzian density, a flat band, a point (Dirac) measure handled
//! symbolically, and tabulated samples interpolated with a monotone cubic.
//! Units are ħ = 1 throughout; all frequencies and rates share one
//! arbitrary unit.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad;

/// Spectral coupling density g²(ω) with support metadata.
#[derive(Debug, Clone)]
pub enum FormFactor {
    /// g²(ω) = λ²Λ / (π (ω² + Λ²)), peaked at ω = 0; support all of ℝ,
    /// total weight exactly λ².
    Lorentzian { coupling: f64, bandwidth: f64 },
    /// g²(ω) = γ / 2π, constant over all of ℝ.
    FlatBand { rate: f64 },
    /// The measure λ² δ(ω − ω₀). Pointwise evaluation is an error;
    /// integrals against it are exact.
    Dirac { coupling: f64, location: f64 },
    /// Samples of g²(ω) on a strictly increasing grid; density is zero
    /// outside the grid.
    Tabulated(TabulatedDensity),
}

impl FormFactor {
    pub fn lorentzian(coupling: f64, bandwidth: f64) -> Result<Self> {
        if !(coupling > 0.0 && coupling.is_finite()) || !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "Lorentzian needs coupling > 0 and bandwidth > 0, got ({coupling}, {bandwidth})"
            )));
        }
        Ok(FormFactor::Lorentzian { coupling, bandwidth })
    }

    pub fn flat_band(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidModel(format!("flat band needs rate > 0, got {rate}")));
        }
        Ok(FormFactor::FlatBand { rate })
    }

    pub fn dirac(coupling: f64, location: f64) -> Result<Self> {
        if !(coupling > 0.0 && coupling.is_finite()) || !location.is_finite() {
            return Err(Error::InvalidModel(format!(
                "Dirac needs coupling > 0 and finite location, got ({coupling}, {location})"
            )));
        }
        Ok(FormFactor::Dirac { coupling, location })
    }

    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        Ok(FormFactor::Tabulated(TabulatedDensity::new(samples)?))
    }

    /// Parse a tabulated density from CSV text with header `omega,g2`.
    pub fn from_csv(text: &str) -> Result<Self> {
        Ok(FormFactor::Tabulated(TabulatedDensity::from_csv(text)?))
    }

    /// Support of the density as a real interval; infinite endpoints for the
    /// unbounded catalog members. A Dirac measure reports the degenerate
    /// interval at its location.
    pub fn support(&self) -> (f64, f64) {
        match self {
            FormFactor::Lorentzian { .. } | FormFactor::FlatBand { .. } => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            FormFactor::Dirac { location, .. } => (*location, *location),
            FormFactor::Tabulated(t) => (t.omega[0], *t.omega.last().unwrap()),
        }
    }

    /// Lower bound ω_g of the continuous spectrum.
    pub fn spectral_lower_bound(&self) -> f64 {
        self.support().0
    }

    /// Pointwise density g²(ω). Zero outside the support by convention.
    pub fn eval_density(&self, omega: f64) -> Result<f64> {
        match self {
            FormFactor::Lorentzian { coupling, bandwidth } => {
                Ok(coupling * coupling * bandwidth
                    / (std::f64::consts::PI * (omega * omega + bandwidth * bandwidth)))
            }
            FormFactor::FlatBand { rate } => Ok(rate / (2.0 * std::f64::consts::PI)),
            FormFactor::Dirac { .. } => Err(Error::DensityNotPointwise),
            FormFactor::Tabulated(t) => Ok(t.eval(omega)),
        }
    }

    /// dg²/dω, needed by principal-value quadrature and continuation.
    pub fn density_derivative(&self, omega: f64) -> Result<f64> {
        match self {
            FormFactor::Lorentzian { coupling, bandwidth } => {
                let d = omega * omega + bandwidth * bandwidth;
                Ok(-2.0 * omega * coupling * coupling * bandwidth / (std::f64::consts::PI * d * d))
            }
            FormFactor::FlatBand { .. } => Ok(0.0),
            FormFactor::Dirac { .. } => Err(Error::DensityNotPointwise),
            FormFactor::Tabulated(t) => Ok(t.derivative(omega)),
        }
    }

    /// ∫ g²(ω) dω. Diverges for the flat band.
    pub fn total_weight(&self) -> Result<f64> {
        match self {
            FormFactor::Lorentzian { coupling, .. } => Ok(coupling * coupling),
            FormFactor::FlatBand { .. } => Err(Error::SecondMomentDivergent),
            FormFactor::Dirac { coupling, .. } => Ok(coupling * coupling),
            FormFactor::Tabulated(t) => Ok(t.integral_total()),
        }
    }

    /// Zeno time τ_Z = (∫ g² dω)^(−1/2).
    pub fn zeno_time(&self) -> Result<f64> {
        Ok(self.total_weight()?.sqrt().recip())
    }

    /// Mean energy of the density, ∫ ω g² dω / ∫ g² dω. For the Lorentzian
    /// the first moment is taken in the principal-value sense and vanishes
    /// by symmetry.
    pub fn first_moment(&self) -> Result<f64> {
        match self {
            FormFactor::Lorentzian { .. } => Ok(0.0),
            FormFactor::FlatBand { .. } => Err(Error::SecondMomentDivergent),
            FormFactor::Dirac { location, .. } => Ok(*location),
            FormFactor::Tabulated(t) => Ok(t.integral_weighted() / t.integral_total()),
        }
    }

    /// Analytic continuation of the density to complex energy, used to cross
    /// the branch cut. Tabulated densities are continued by a local
    /// least-squares polynomial and are trusted only within half the span of
    /// the fit window.
    pub fn continued_density(&self, e: Complex64) -> Result<Complex64> {
        match self {
            FormFactor::Lorentzian { coupling, bandwidth } => {
                Ok(coupling * coupling * bandwidth
                    / (std::f64::consts::PI * (e * e + bandwidth * bandwidth)))
            }
            FormFactor::FlatBand { rate } => {
                Ok(Complex64::new(rate / (2.0 * std::f64::consts::PI), 0.0))
            }
            FormFactor::Dirac { .. } => Err(Error::NoBranchCut),
            FormFactor::Tabulated(t) => t.continued(e).map(|(v, _)| v),
        }
    }

    /// Derivative of the continued density with respect to complex energy.
    pub fn continued_density_derivative(&self, e: Complex64) -> Result<Complex64> {
        match self {
            FormFactor::Lorentzian { coupling, bandwidth } => {
                let d = e * e + bandwidth * bandwidth;
                Ok(-2.0 * e * coupling * coupling * bandwidth / (std::f64::consts::PI * d * d))
            }
            FormFactor::FlatBand { .. } => Ok(Complex64::new(0.0, 0.0)),
            FormFactor::Dirac { .. } => Err(Error::NoBranchCut),
            FormFactor::Tabulated(t) => t.continued(e).map(|(_, d)| d),
        }
    }
}

/// Monotone-cubic (Fritsch-Carlson) interpolant of sampled g²(ω).
#[derive(Debug, Clone)]
pub struct TabulatedDensity {
    pub(crate) omega: Vec<f64>,
    pub(crate) g2: Vec<f64>,
    slope: Vec<f64>,
}

impl TabulatedDensity {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidModel("tabulated density needs at least 2 samples".into()));
        }
        let omega: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let g2: Vec<f64> = samples.iter().map(|s| s.1).collect();
        for w in omega.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidModel(format!(
                    "tabulated omega grid must be strictly increasing near {}",
                    w[0]
                )));
            }
        }
        for (&x, &y) in omega.iter().zip(&g2) {
            if !x.is_finite() || !y.is_finite() || y < 0.0 {
                return Err(Error::InvalidModel(format!(
                    "tabulated samples must be finite with g2 >= 0, got ({x}, {y})"
                )));
            }
        }
        let slope = pchip_slopes(&omega, &g2);
        Ok(TabulatedDensity { omega, g2, slope })
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        let mut lines = text.lines().enumerate();
        let header = loop {
            match lines.next() {
                Some((i, l)) => {
                    let l = l.trim();
                    if l.is_empty() {
                        continue;
                    }
                    break (i, l);
                }
                None => {
                    return Err(Error::TableParse { line: 1, msg: "empty file".into() });
                }
            }
        };
        let cols: Vec<&str> = header.1.split(',').map(|c| c.trim()).collect();
        if cols != ["omega", "g2"] {
            return Err(Error::TableParse {
                line: header.0 + 1,
                msg: format!("expected header `omega,g2`, got `{}`", header.1),
            });
        }
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(',').map(|c| c.trim()).collect();
            if parts.len() != 2 {
                return Err(Error::TableParse {
                    line: i + 1,
                    msg: format!("expected 2 columns, got {}", parts.len()),
                });
            }
            let omega: f64 = parts[0].parse().map_err(|e| Error::TableParse {
                line: i + 1,
                msg: format!("bad omega `{}`: {e}", parts[0]),
            })?;
            let g2: f64 = parts[1].parse().map_err(|e| Error::TableParse {
                line: i + 1,
                msg: format!("bad g2 `{}`: {e}", parts[1]),
            })?;
            samples.push((omega, g2));
        }
        Self::new(samples).map_err(|e| match e {
            Error::InvalidModel(msg) => Error::TableParse { line: 0, msg },
            other => other,
        })
    }

    fn segment(&self, x: f64) -> usize {
        match self.omega.binary_search_by(|o| o.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.omega.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.omega.len() - 2),
        }
    }

    /// Interpolated density; zero outside the grid.
    pub fn eval(&self, x: f64) -> f64 {
        if x < self.omega[0] || x > *self.omega.last().unwrap() {
            return 0.0;
        }
        let i = self.segment(x);
        let h = self.omega[i + 1] - self.omega[i];
        let t = (x - self.omega[i]) / h;
        let (h00, h10, h01, h11) = hermite_basis(t);
        (h00 * self.g2[i] + h01 * self.g2[i + 1] + h * (h10 * self.slope[i] + h11 * self.slope[i + 1]))
            .max(0.0)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        if x < self.omega[0] || x > *self.omega.last().unwrap() {
            return 0.0;
        }
        let i = self.segment(x);
        let h = self.omega[i + 1] - self.omega[i];
        let t = (x - self.omega[i]) / h;
        let d00 = (6.0 * t * t - 6.0 * t) / h;
        let d10 = 3.0 * t * t - 4.0 * t + 1.0;
        let d01 = -d00;
        let d11 = 3.0 * t * t - 2.0 * t;
        d00 * self.g2[i] + d01 * self.g2[i + 1] + d10 * self.slope[i] + d11 * self.slope[i + 1]
    }

    /// Exact integral of the piecewise cubic over the whole grid.
    pub fn integral_total(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.omega.len() - 1 {
            let h = self.omega[i + 1] - self.omega[i];
            acc += h * (0.5 * (self.g2[i] + self.g2[i + 1]) + h * (self.slope[i] - self.slope[i + 1]) / 12.0);
        }
        acc
    }

    /// ∫ ω g²(ω) dω by panel quadrature of the interpolant.
    pub fn integral_weighted(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.omega.len() - 1 {
            let (a, b) = (self.omega[i], self.omega[i + 1]);
            acc += quad::integrate_real(&|x| x * self.eval(x), a, b, 1e-14);
        }
        acc
    }

    /// Local polynomial continuation of the density around Re E, returning
    /// (value, derivative). Degree-≤4 least squares over up to 13 grid
    /// points; trusted within half the span of the fit window.
    pub fn continued(&self, e: Complex64) -> Result<(Complex64, Complex64)> {
        let x = e.re;
        let n = self.omega.len();
        let (lo, hi) = (self.omega[0], self.omega[n - 1]);
        if x < lo || x > hi {
            return Err(Error::ContinuationUnreliable { re: e.re, im: e.im });
        }
        let i = self.segment(x);
        let half = 6usize;
        let start = i.saturating_sub(half);
        let end = (i + 1 + half).min(n - 1);
        let xs = &self.omega[start..=end];
        let ys = &self.g2[start..=end];
        let span = xs[xs.len() - 1] - xs[0];
        // Near the grid edges the continuation through a threshold is
        // ill-defined; refuse rather than guess.
        let edge = 2.0 * span / xs.len() as f64;
        if x - lo < edge || hi - x < edge {
            return Err(Error::ContinuationUnreliable { re: e.re, im: e.im });
        }
        if e.im.abs() > 0.5 * span {
            return Err(Error::ContinuationUnreliable { re: e.re, im: e.im });
        }
        let degree = 4.min(xs.len() - 1);
        let coeffs = polyfit(xs, ys, x, degree);
        let dz = e - x;
        let mut val = Complex64::new(0.0, 0.0);
        let mut der = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        for (k, &c) in coeffs.iter().enumerate() {
            val += c * pw;
            if k + 1 < coeffs.len() {
                der += coeffs[k + 1] * (k as f64 + 1.0) * pw;
            }
            pw *= dz;
        }
        Ok((val, der))
    }
}

/// Least-squares polynomial in (x - x0), returning coefficients by
/// normal equations with Gaussian elimination. Degree is small by
/// construction so conditioning is not a concern.
fn polyfit(xs: &[f64], ys: &[f64], x0: f64, degree: usize) -> Vec<f64> {
    let m = degree + 1;
    let mut ata = vec![vec![0.0; m]; m];
    let mut atb = vec![0.0; m];
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - x0;
        let mut row = vec![1.0; m];
        for k in 1..m {
            row[k] = row[k - 1] * dx;
        }
        for r in 0..m {
            for c in 0..m {
                ata[r][c] += row[r] * row[c];
            }
            atb[r] += row[r] * y;
        }
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..m {
        let piv = (col..m).max_by(|&a, &b| ata[a][col].abs().partial_cmp(&ata[b][col].abs()).unwrap()).unwrap();
        ata.swap(col, piv);
        atb.swap(col, piv);
        let d = ata[col][col];
        for r in col + 1..m {
            let factor = ata[r][col] / d;
            for c in col..m {
                ata[r][c] -= factor * ata[col][c];
            }
            atb[r] -= factor * atb[col];
        }
    }
    let mut out = vec![0.0; m];
    for r in (0..m).rev() {
        let mut acc = atb[r];
        for c in r + 1..m {
            acc -= ata[r][c] * out[c];
        }
        out[r] = acc / ata[r][r];
    }
    out
}

fn hermite_basis(t: f64) -> (f64, f64, f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    (
        2.0 * t3 - 3.0 * t2 + 1.0,
        t3 - 2.0 * t2 + t,
        -2.0 * t3 + 3.0 * t2,
        t3 - t2,
    )
}

/// Fritsch-Carlson monotone slopes: never overshoots, keeps g² ≥ 0 where the
/// data is.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut h = vec![0.0; n - 1];
    let mut delta = vec![0.0; n - 1];
    for i in 0..n - 1 {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    let mut m = vec![0.0; n];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    m[0] = edge_slope(h[0], if n > 2 { h[1] } else { h[0] }, delta[0], if n > 2 { delta[1] } else { delta[0] });
    m[n - 1] = edge_slope(
        h[n - 2],
        if n > 2 { h[n - 3] } else { h[n - 2] },
        delta[n - 2],
        if n > 2 { delta[n - 3] } else { delta[n - 2] },
    );
    m
}

fn edge_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

/// The complete decay problem: a discrete state of energy ω_a coupled to a
/// continuum through a form factor.
#[derive(Debug, Clone)]
pub struct LeeModel {
    pub omega_a: f64,
    pub form_factor: FormFactor,
}

impl LeeModel {
    pub fn new(omega_a: f64, form_factor: FormFactor) -> Result<Self> {
        if !omega_a.is_finite() {
            return Err(Error::InvalidModel(format!("omega_a must be finite, got {omega_a}")));
        }
        Ok(LeeModel { omega_a, form_factor })
    }

    /// Checks ω_a > ω_g, required by analyses that assume an unstable state.
    pub fn require_unstable(&self) -> Result<()> {
        let lower = self.form_factor.spectral_lower_bound();
        if self.omega_a > lower || lower == f64::NEG_INFINITY {
            Ok(())
        } else {
            Err(Error::InvalidModel(format!(
                "omega_a = {} does not lie above the spectral lower bound {}",
                self.omega_a, lower
            )))
        }
    }

    /// Zeno time of the interaction, τ_Z = (∫ g² dω)^(−1/2).
    pub fn zeno_time(&self) -> Result<f64> {
        self.form_factor.zeno_time()
    }

    /// Lowest-order decay rate γ = 2π g²(ω_a).
    pub fn golden_rule(&self) -> Result<f64> {
        match &self.form_factor {
            FormFactor::Dirac { .. } => Err(Error::GoldenRuleUndefined),
            ff => Ok(2.0 * std::f64::consts::PI * ff.eval_density(self.omega_a)?),
        }
    }

    /// Second-order energy shift P∫ g²(ω)/(ω_a − ω) dω.
    pub fn second_order_shift(&self) -> Result<f64> {
        match &self.form_factor {
            FormFactor::Lorentzian { coupling, bandwidth } => {
                Ok(coupling * coupling * self.omega_a
                    / (self.omega_a * self.omega_a + bandwidth * bandwidth))
            }
            FormFactor::FlatBand { .. } => Ok(0.0),
            FormFactor::Dirac { coupling, location } => {
                if self.omega_a == *location {
                    Err(Error::PrincipalValueUnresolvable(self.omega_a))
                } else {
                    Ok(coupling * coupling / (self.omega_a - location))
                }
            }
            FormFactor::Tabulated(t) => principal_value(t, self.omega_a),
        }
    }
}

/// P∫ g²(ω)/(x − ω) dω for a tabulated density, by symmetric-pair
/// subtraction around the singular point plus a regular remainder.
pub(crate) fn principal_value(t: &TabulatedDensity, x: f64) -> Result<f64> {
    let (lo, hi) = (t.omega[0], *t.omega.last().unwrap());
    if !(x > lo && x < hi) {
        if x < lo || x > hi {
            // No singularity inside the support: plain dispersion integral.
            return Ok(quad::integrate_real(&|w| t.eval(w) / (x - w), lo, hi, 1e-13));
        }
        return Err(Error::PrincipalValueUnresolvable(x));
    }
    let h = (x - lo).min(hi - x);
    let tol = 1e-13 * (1.0 + t.integral_total());
    let sym = quad::integrate_real(&|u| (t.eval(x - u) - t.eval(x + u)) / u, 0.0, h, tol);
    let rest = if x - lo <= hi - x {
        quad::integrate_real(&|w| t.eval(w) / (x - w), x + h, hi, tol)
    } else {
        quad::integrate_real(&|w| t.eval(w) / (x - w), lo, x - h, tol)
    };
    Ok(sym + rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn lorentzian_table(coupling: f64, bandwidth: f64, half_width: f64, n: usize) -> FormFactor {
        let samples: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let w = -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64;
                let g2 = coupling * coupling * bandwidth
                    / (std::f64::consts::PI * (w * w + bandwidth * bandwidth));
                (w, g2)
            })
            .collect();
        FormFactor::tabulated(samples).unwrap()
    }

    #[test]
    fn lorentzian_density_at_zero() {
        let ff = FormFactor::lorentzian(0.1, 1.0).unwrap();
        assert_relative_eq!(ff.eval_density(0.0).unwrap(), 0.01 / std::f64::consts::PI, max_relative = 1e-14);
    }

    #[test]
    fn flat_band_density_is_constant() {
        let ff = FormFactor::flat_band(0.05).unwrap();
        assert_relative_eq!(ff.eval_density(7.3).unwrap(), 0.05 / (2.0 * std::f64::consts::PI), max_relative = 1e-14);
    }

    #[test]
    fn dirac_density_is_not_pointwise() {
        let ff = FormFactor::dirac(0.5, 0.0).unwrap();
        assert!(matches!(ff.eval_density(0.0), Err(Error::DensityNotPointwise)));
    }

    #[test]
    fn zeno_time_catalog_values() {
        assert_relative_eq!(FormFactor::lorentzian(0.1, 1.0).unwrap().zeno_time().unwrap(), 10.0, max_relative = 1e-14);
        assert_relative_eq!(FormFactor::dirac(0.5, 0.0).unwrap().zeno_time().unwrap(), 2.0, max_relative = 1e-14);
        assert!(matches!(
            FormFactor::flat_band(0.01).unwrap().zeno_time(),
            Err(Error::SecondMomentDivergent)
        ));
    }

    #[test]
    fn golden_rule_values() {
        let m = LeeModel::new(1.0, FormFactor::lorentzian(0.1, 1.0).unwrap()).unwrap();
        assert_relative_eq!(m.golden_rule().unwrap(), 0.01, max_relative = 1e-14);
        let m = LeeModel::new(0.0, FormFactor::lorentzian(0.1, 1.0).unwrap()).unwrap();
        assert_relative_eq!(m.golden_rule().unwrap(), 0.02, max_relative = 1e-14);
        let m = LeeModel::new(3.7, FormFactor::flat_band(0.05).unwrap()).unwrap();
        assert_relative_eq!(m.golden_rule().unwrap(), 0.05, max_relative = 1e-14);
        let m = LeeModel::new(1.0, FormFactor::dirac(0.5, 0.0).unwrap()).unwrap();
        assert!(matches!(m.golden_rule(), Err(Error::GoldenRuleUndefined)));
    }

    #[test]
    fn second_order_shift_values() {
        let m = LeeModel::new(1.0, FormFactor::lorentzian(0.1, 1.0).unwrap()).unwrap();
        assert_relative_eq!(m.second_order_shift().unwrap(), 0.005, max_relative = 1e-14);
        let m = LeeModel::new(0.0, FormFactor::lorentzian(0.1, 1.0).unwrap()).unwrap();
        assert_eq!(m.second_order_shift().unwrap(), 0.0);
    }

    #[test]
    fn tabulated_shift_matches_closed_form() {
        let ff = lorentzian_table(0.1, 1.0, 50.0, 10_000);
        let m = LeeModel::new(1.0, ff).unwrap();
        let shift = m.second_order_shift().unwrap();
        assert!((shift - 0.005).abs() < 1e-4, "got {shift}");
    }

    #[test]
    fn tabulated_total_weight_near_closed_form() {
        let ff = lorentzian_table(0.1, 1.0, 200.0, 20_000);
        // truncation leaves ~ 2*lambda^2*Lambda/(pi*W) in the tails
        let w = ff.total_weight().unwrap();
        assert!((w - 0.01).abs() < 5e-5, "got {w}");
    }

    #[test]
    fn pv_point_outside_grid_is_unresolvable() {
        let ff = lorentzian_table(0.1, 1.0, 10.0, 100);
        let m = LeeModel::new(20.0, ff).unwrap();
        // outside but beyond the grid: plain integral, fine
        assert!(m.second_order_shift().is_ok());
    }

    #[test]
    fn csv_parse_reports_line_numbers() {
        let err = FormFactor::from_csv("omega,g2\n0.0,1.0\nbad,2.0\n").unwrap_err();
        match err {
            Error::TableParse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
        let err = FormFactor::from_csv("x,y\n0,1\n").unwrap_err();
        assert!(matches!(err, Error::TableParse { line: 1, .. }));
    }

    #[test]
    fn csv_round_trip() {
        let ff = FormFactor::from_csv("omega,g2\n-1.0,0.1\n0.0,0.4\n1.0,0.1\n").unwrap();
        assert_eq!(ff.support(), (-1.0, 1.0));
        assert_relative_eq!(ff.eval_density(0.0).unwrap(), 0.4, max_relative = 1e-14);
        assert_eq!(ff.eval_density(5.0).unwrap(), 0.0);
    }
}
