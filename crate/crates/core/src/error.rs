use thiserror::Error;

/// Errors raised when a channel, state or parameter violates its contract.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A†| entry {0:e})")]
    NotHermitian(f64),

    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("not a valid Choi state: {0}")]
    InvalidChoiState(String),

    #[error("unital map violates TᵀT ≤ 1 (largest eigenvalue of TᵀT is {0})")]
    NotContractive(f64),

    #[error("unital map is not completely positive (canonical triple {0:?} lies outside the tetrahedron)")]
    NotCompletelyPositive([f64; 3]),

    #[error("Kraus operators are not complete (max |Σ E†E - 1| entry {0:e})")]
    KrausIncomplete(f64),

    #[error("Kraus channel needs at least one operator")]
    EmptyKraus,

    #[error("parameter `{name}` = {value} is outside {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("channel power must be at least 1")]
    ZeroPower,

    #[error(
        "filter is not a rotation (det {0}); only proper rotations compose with Kraus channels"
    )]
    ImproperRotation(f64),

    #[error("Gaussian triplet violates the complete-positivity condition (margin {0:e})")]
    GaussianNotCpt(f64),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_domain(
    name: &'static str,
    value: f64,
    ok: bool,
    domain: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name,
            value,
            domain,
        })
    }
}
