use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("electron speed beta = {0} must lie in (0, 1)")]
    InvalidBeta(f64),
    #[error("refractive index {0} must be positive and finite")]
    InvalidIndex(f64),
    #[error("refractive index table: {0}")]
    InvalidTable(&'static str),
    #[error("photon energy {omega_ev} eV is outside the tabulated range [{min_ev}, {max_ev}] eV")]
    OutsideTable { omega_ev: f64, min_ev: f64, max_ev: f64 },
    #[error("photon energy must be positive and finite, got {0} eV")]
    InvalidEnergy(f64),
    #[error("no Cherenkov emission: n*beta = {n_beta} <= 1")]
    NoCherenkovEmission { n_beta: f64 },
    #[error("envelope widths must be positive and finite")]
    InvalidWidth,
    #[error("invalid vector input: {0}")]
    InvalidVector(&'static str),
    #[error("analytic overlap requires equal envelope widths")]
    UnequalCovariance,
    #[error("grid too coarse along axis {axis}: |q * spacing| = {q_spacing:.4} (limit {limit:.4})")]
    GridTooCoarse { axis: usize, q_spacing: f64, limit: f64 },
    #[error("grid truncates the density along axis {axis}")]
    GridTruncated { axis: usize },
    #[error("grid shape: {0}")]
    GridShape(&'static str),
    #[error("invalid quadrature rule: {0}")]
    InvalidRule(&'static str),
    #[error("invalid pair state: {0}")]
    InvalidPair(&'static str),
    #[error("phase angle must be finite, got {0}")]
    InvalidZeta(f64),
    #[error("modes {first} and {second} share a carrier wavevector")]
    DuplicateCarrier { first: usize, second: usize },
    #[error("many-body state has no terms")]
    EmptyState,
    #[error("state norm is {norm}, expected 1")]
    NotNormalized { norm: f64 },
    #[error("{n} particles exceed the enumeration bound of {max}")]
    TooManyParticles { n: usize, max: usize },
    #[error("spin assignment {0} appears more than once")]
    DuplicateAssignment(usize),
    #[error("spin assignment has {got} entries for {expected} modes")]
    AssignmentLength { got: usize, expected: usize },
    #[error("all modes of a many-body state must share one envelope")]
    MismatchedEnvelope,
    #[error("scan grid: {0}")]
    InvalidGrid(&'static str),
}
