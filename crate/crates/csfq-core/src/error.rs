//! Crate-wide error type.
//!
//! Every fallible operation in this crate returns [`Error`]. Variants are split
//! by what the caller can do about them: domain violations mean the inputs were
//! bad, solver variants mean the numerics gave up, and the fit variants flag
//! degenerate data that no parameter estimate can rescue.

use alloc::string::String;
use core::fmt;

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Error type for all operations in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside its documented domain (non-positive length,
    /// `alpha` outside (0, 1), unordered sweep bounds, ...).
    Domain(String),
    /// Charge-basis cutoff below the supported minimum of 4.
    CutoffTooSmall { cutoff: u32 },
    /// The two-island capacitance matrix is singular or not positive definite.
    SingularCapacitanceMatrix,
    /// The eigensolver produced non-finite eigenvalues.
    EigenSolver { detail: String },
    /// An eigensolve failed while sweeping flux; carries the offending point.
    SweepPoint { flux_frac: f64, detail: String },
    /// The transition frequency changed by more than the allowed limit when the
    /// charge cutoff was raised from N to N+2, i.e. the basis is too small.
    BasisNotConverged {
        cutoff: u32,
        delta_ghz: f64,
        limit_ghz: f64,
    },
    /// Level index out of range for the requested computation.
    LevelIndex { index: usize, levels: usize },
    /// Fewer data points than the operation needs.
    TooFewPoints { needed: usize, got: usize },
    /// The trace's y values are constant (within numerical noise); no decay or
    /// oscillation can be extracted.
    ConstantSignal,
    /// The sampled window covers fewer than two oscillation periods, so the
    /// detuning cannot be identified.
    TooFewPeriods { periods: f64 },
    /// The resonance peak sits on the first or last sweep point; the line
    /// center cannot be trusted.
    PeakAtBoundary,
    /// The damped normal equations stayed singular even with heavy damping.
    SingularNormalMatrix,
    /// The fit hit its iteration cap without meeting any convergence test.
    FitDidNotConverge { iterations: u32 },
    /// The fit converged to parameter values that are not physically usable
    /// (e.g. a non-positive decay time).
    DegenerateFit(String),
    /// A trace of the wrong kind was handed to a kind-specific fit.
    WrongTraceKind {
        expected: &'static str,
        got: &'static str,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::CutoffTooSmall { cutoff } => {
                write!(f, "charge cutoff {cutoff} is below the minimum of 4")
            }
            Error::SingularCapacitanceMatrix => {
                write!(f, "capacitance matrix is singular or not positive definite")
            }
            Error::EigenSolver { detail } => write!(f, "eigensolver failure: {detail}"),
            Error::SweepPoint { flux_frac, detail } => {
                write!(f, "eigensolve failed at flux {flux_frac}: {detail}")
            }
            Error::BasisNotConverged {
                cutoff,
                delta_ghz,
                limit_ghz,
            } => write!(
                f,
                "charge basis not converged at cutoff {cutoff}: raising it by 2 moved \
                 omega01 by {delta_ghz:.3e} GHz (limit {limit_ghz:.1e} GHz)"
            ),
            Error::LevelIndex { index, levels } => {
                write!(
                    f,
                    "level index {index} out of range ({levels} levels computed)"
                )
            }
            Error::TooFewPoints { needed, got } => {
                write!(f, "need at least {needed} data points, got {got}")
            }
            Error::ConstantSignal => write!(f, "signal is constant; nothing to fit"),
            Error::TooFewPeriods { periods } => write!(
                f,
                "window covers only {periods:.2} oscillation periods; need at least 2"
            ),
            Error::PeakAtBoundary => {
                write!(f, "resonance peak sits on the sweep boundary")
            }
            Error::SingularNormalMatrix => {
                write!(f, "damped normal equations are singular")
            }
            Error::FitDidNotConverge { iterations } => {
                write!(f, "fit did not converge within {iterations} iterations")
            }
            Error::DegenerateFit(msg) => write!(f, "degenerate fit: {msg}"),
            Error::WrongTraceKind { expected, got } => {
                write!(f, "expected a {expected} trace, got {got}")
            }
        }
    }
}

impl core::error::Error for Error {}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn display_carries_diagnostics() {
        let e = Error::BasisNotConverged {
            cutoff: 6,
            delta_ghz: 2.5e-3,
            limit_ghz: 1e-3,
        };
        let msg = e.to_string();
        assert!(msg.contains("cutoff 6"));
        assert!(msg.contains("2.500e-3"));

        let e = Error::SweepPoint {
            flux_frac: 0.475,
            detail: "non-finite eigenvalue".to_string(),
        };
        assert!(e.to_string().contains("0.475"));
    }
}
