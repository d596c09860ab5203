//! Numerical laboratory for univalent-function geometry on the unit disk.
//!
//! The crate provides:
//!
//! - [`series`]: exact-on-truncations Taylor series arithmetic, Schwarzian and
//!   pre-Schwarzian derivatives, Möbius maps;
//! - [`schwarzian`]: the power-series ODE solver for `S(f) = Q` and the
//!   tangent dictionary between quadratic differentials and vector fields;
//! - [`diskquad`]: Gauss–Legendre quadrature on the disk for Euclidean,
//!   spherical and hyperbolic measures, plus regularized boundary limits;
//! - [`metrics`]: the Velling Hermitian form, Velling–Kirillov and
//!   Weil–Petersson norms, tangent-space dictionaries and the numeric
//!   second-variation oracle;
//! - [`transport`]: Möbius transport of quadratic differentials across the
//!   fiber and the averaging/telescoping identities;
//! - [`prebers`]: the pre-Schwarzian embedding, the Riccati map and its
//!   augmentation, weighted sup-norms and distortion checks.
//!
//! All values are immutable after construction and all operations are pure
//! functions; everything is safe to call concurrently. Grid reductions use a
//! deterministic pairwise tree, so results do not depend on thread count.

pub mod check;
pub mod diskquad;
pub mod metrics;
pub mod prebers;
pub mod schwarzian;
pub mod series;
pub mod transport;

use thiserror::Error;

/// Error type shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("division by a series whose constant term is below the machine threshold")]
    DivisionByZeroConstantTerm,
    #[error("series composition requires the inner constant term to be exactly zero")]
    InnerConstantTermNonzero,
    #[error("log requires a series with constant term 1")]
    LogOfNonUnitConstantTerm,
    #[error("first derivative vanishes at the origin")]
    VanishingFirstDerivative,
    #[error("Möbius denominator vanishes at the origin")]
    PoleAtOrigin,
    #[error("Möbius map is degenerate (determinant below machine threshold)")]
    DegenerateMobiusMap,
    #[error("quotient denominator drops below {threshold:.1e} at |z| = {radius:.3}, angle {angle:.3}: the truncated quotient is untrustworthy")]
    DenominatorVanishesOnGrid {
        radius: f64,
        angle: f64,
        threshold: f64,
    },
    #[error("invalid grid shape: need n_radial >= 2, n_angular >= 4, 0 < r_max <= 1")]
    InvalidGridShape,
    #[error("moment list too short: need {needed} moments, got {got}")]
    MomentListTooShort { needed: usize, got: usize },
    #[error("hyperbolic measure requires r_max strictly inside the unit disk")]
    BoundaryRadiusNotStrictlyInside,
    #[error("ratio sequence not convergent: last step {step:.3e} exceeds tolerance {tolerance:.3e}")]
    NonConvergentSequence { step: f64, tolerance: f64 },
    #[error("perturbation too large: coefficient univalence bound violated ({bound:.3e} > 1)")]
    PerturbationTooLarge { bound: f64 },
    #[error("coefficient index out of range: {index}")]
    IndexOutOfRange { index: usize },
    #[error("fiber base point must lie strictly inside the unit disk, got |w| = {modulus:.3}")]
    BasePointOutsideDisk { modulus: f64 },
}

impl Error {
    /// Module-qualified error code, stable across releases. Used by the CLI
    /// to report failures in machine-readable form.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZeroConstantTerm => "series_core/DivisionByZeroConstantTerm",
            Error::InnerConstantTermNonzero => "series_core/InnerConstantTermNonzero",
            Error::LogOfNonUnitConstantTerm => "series_core/LogOfNonUnitConstantTerm",
            Error::VanishingFirstDerivative => "series_core/VanishingFirstDerivative",
            Error::PoleAtOrigin => "series_core/PoleAtOrigin",
            Error::DegenerateMobiusMap => "series_core/DegenerateMobiusMap",
            Error::DenominatorVanishesOnGrid { .. } => "schwarzian/DenominatorVanishesOnGrid",
            Error::InvalidGridShape => "diskquad/InvalidGridShape",
            Error::MomentListTooShort { .. } => "diskquad/MomentListTooShort",
            Error::BoundaryRadiusNotStrictlyInside => "diskquad/BoundaryRadiusNotStrictlyInside",
            Error::NonConvergentSequence { .. } => "diskquad/NonConvergentSequence",
            Error::PerturbationTooLarge { .. } => "metrics/PerturbationTooLarge",
            Error::IndexOutOfRange { .. } => "transport/IndexOutOfRange",
            Error::BasePointOutsideDisk { .. } => "transport/BasePointOutsideDisk",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
