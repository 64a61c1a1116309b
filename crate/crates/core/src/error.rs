use thiserror::Error;

/// Error conditions surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("Dirac density is a point measure and has no pointwise value")]
    DensityNotPointwise,
    #[error("integral of the squared form factor diverges")]
    SecondMomentDivergent,
    #[error("golden rule undefined for a Dirac form factor")]
    GoldenRuleUndefined,
    #[error("principal value at {0} cannot be resolved from the available data")]
    PrincipalValueUnresolvable(f64),
    #[error("energy lies on the branch cut; specify a side or a sheet")]
    OnCutAmbiguous,
    #[error("form factor has a discrete spectrum and no branch cut")]
    NoBranchCut,
    #[error("analytic continuation unreliable at E = {re}{im:+}i")]
    ContinuationUnreliable { re: f64, im: f64 },
    #[error("resolvent evaluated at a pole")]
    AtPole,
    #[error("pole search did not converge")]
    PoleNotFound,
    #[error("converged to a pole in the upper half plane; not a decay pole")]
    NotADecayPole,
    #[error("continuum diagonalization failed: {0}")]
    OracleFailed(String),
    #[error("spectral window exhausted; residual tail mass {0:.3e}")]
    SpectralWindowTooSmall(f64),
    #[error("survival probability vanishes exactly; effective rate is infinite")]
    RateInfinite,
    #[error("two-pole reduction degenerate: no decay channel at omega_a")]
    ReductionDegenerate,
    #[error("cascade construction singular: Sigma_a vanishes at a sampled energy")]
    CascadeSingular,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("table parse error at line {line}: {msg}")]
    TableParse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
