use thiserror::Error;

/// Error type shared by all numerical routines of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("point too close to the equatorial sphere (|x4| = {0:.3e})")]
    EquatorSingular(f64),
    #[error("projective normalization impossible (|x0| = {0:.3e})")]
    ZeroHeight(f64),
    #[error("point not on the required slice: {0}")]
    NotOnSlice(String),
    #[error("matrix is not unimodular (|det - 1| = {0:.3e})")]
    NotUnimodular(f64),
    #[error("point ({0}, {1}) outside chart")]
    OutsideChart(f64, f64),
    #[error("lambda = 0 is not admitted for a flat family")]
    LambdaZero,
    #[error("path touches the singular locus at ({0}, {1})")]
    PathHitsSingularLocus(f64, f64),
    #[error("integration step too large, det drift {0:.3e}")]
    StepTooLarge(f64),
    #[error("map sample is singular at ({0}, {1})")]
    SingularSample(f64, f64),
    #[error("evaluation on the core loop x = 0 (x = {0:.3e})")]
    OnCoreLoop(f64),
    #[error("map is not immersive at node ({0}, {1})")]
    NotImmersive(usize, usize),
    #[error("pairing equation has no real solution at node ({0}, {1})")]
    PairingInfeasible(usize, usize),
    #[error("Hopf differential too close to zero (|omega| = {0:.3e})")]
    NearHopfZero(f64),
    #[error("map fails the transgressivity diagnostics: {0}")]
    NotTransgressive(String),
    #[error("omega is not an eigenvalue (|det Phi + omega^2| = {0:.3e})")]
    NotAnEigenvalue(f64),
    #[error("Hopf square root vanishes (|omega| = {0:.3e})")]
    HopfZero(f64),
    #[error("eigenline is null (|h(v,v)| = {0:.3e})")]
    NullEigenline(f64),
    #[error("iteration failed to converge: {0}")]
    NoConvergence(String),
    #[error("invalid domain: {0}")]
    BadDomain(String),
    #[error("radius {0} outside the solved profile domain ({1}, {2}]")]
    OutsideProfile(f64, f64, f64),
    #[error("contraction estimate {0:.3} exceeds 1/2; enlarge x0")]
    ContractionFailed(f64),
    #[error("quadrature failed: {0}")]
    QuadratureFail(String),
    #[error("result overflows f64; use the scaled evaluation mode")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, CoreError>;
