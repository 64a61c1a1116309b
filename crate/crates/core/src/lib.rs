//! Decay of a discrete quantum state into a structured continuum, and how
//! measurement reshapes it.
//!
//! The model is a single level of energy ω_a coupled to a continuum through
//! a spectral coupling density g²(ω). The crate computes the survival
//! amplitude by several independent routes (closed form, spectral inversion,
//! brute-force diagonalization), locates the resolvent poles on the second
//! Riemann sheet, quantifies the quantum Zeno and anti-Zeno regimes under
//! pulsed and continuous measurement, and reduces general densities to
//! effective few-parameter models.
//!
//! Heavy sweeps (eigenvalue solves, measurement scans, quadrature panels)
//! run data-parallel on rayon when the default `parallel` feature is on; a
//! sequential fallback is selected with `--no-default-features`.

pub mod error;
pub mod exec;
pub mod poles;
pub mod quad;
pub mod reduction;
pub mod selfenergy;
pub mod spectral;
pub mod survival;
pub mod zeno;

pub use error::{Error, Result};
pub use poles::{find_pole, scan_poles, two_pole_closed, weisskopf_wigner, PoleData, TwoPoleParams};
pub use selfenergy::{sigma_first, sigma_on_cut_above, sigma_second, Sheet, SheetedEnergy};
pub use spectral::{FormFactor, LeeModel, TabulatedDensity};
pub use survival::{
    amplitude_oracle, amplitude_spectral, amplitude_two_pole, rabi_survival, short_time,
    two_pole_series, ExactAmplitude, Method, SpectralAmplitude, SurvivalSeries,
};
pub use zeno::{
    continuous_rate, effective_rate_pulsed, find_tau_star, free_width, regime_classify,
    sufficient_condition, zeno_report, ContinuousRate, Regime, ZenoReport,
};
pub use reduction::{
    cascade, diagnostic_diagonal_entry, effective_2x2, two_pole_reduce, CascadeModel,
    EffectiveTwoByTwo, TwoPoleReduction,
};
