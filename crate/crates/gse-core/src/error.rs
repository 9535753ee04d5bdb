use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GseError {
    /// Inputs that can never describe a physical device.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Collective coupling beyond the stability bound of the model in use.
    #[error("unstable parameters: g = {g}, omega_0 = {omega_0}, omega_c = {omega_c} ({bound})")]
    Unstable { g: f64, omega_0: f64, omega_c: f64, bound: &'static str },

    #[error("zero coupling: the polariton basis is undefined at g = 0 unless the decoupled limit is requested")]
    ZeroCoupling,

    #[error("degenerate energy denominator {0:e} in first-order dressing")]
    DegenerateDenominator(f64),

    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("doubly occupied sites (N2 = {0}) are not supported by the rate pipelines")]
    UnsupportedDoubleOccupancy(u64),

    #[error("P matrix is singular (|det P| = {0:e})")]
    SingularP(f64),

    #[error("photon cutoff not converged up to {cutoff} (last change {delta:e})")]
    CutoffNotConverged { cutoff: usize, delta: f64 },
}

pub type Result<T> = std::result::Result<T, GseError>;

impl GseError {
    /// True for errors caused by the physics (as opposed to malformed input).
    pub fn is_physics(&self) -> bool {
        !matches!(self, GseError::Config(_))
    }
}
