use std::fmt;

use thiserror::Error;

/// Which family of invariant a parameter violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Net good production or net rework output does not exceed demand.
    InfeasibleRates,
    FractionOutOfRange,
    NonpositiveRate,
    NegativeCost,
    /// Anything else: plant count, backlog mode of the aggregated model, non-finite input.
    InvalidValue,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::InfeasibleRates => "infeasible-rates",
            ViolationKind::FractionOutOfRange => "out-of-range fraction",
            ViolationKind::NonpositiveRate => "nonpositive rate",
            ViolationKind::NegativeCost => "negative cost",
            ViolationKind::InvalidValue => "invalid value",
        };
        f.write_str(s)
    }
}

/// One violated parameter invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: &'static str,
    pub kind: ViolationKind,
    /// The inequality that failed, with the offending values substituted.
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}): {}", self.field, self.kind, self.detail)
    }
}

/// Every invariant violation found in a parameter set.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

impl ValidationError {
    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid parameters: ")?;
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Validation(#[from] ValidationError),

    #[error("no interior optimum: {0}")]
    NoInteriorOptimum(String),

    #[error("negative period: {name} = {value}")]
    NegativePeriod { name: &'static str, value: f64 },

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("minimizer did not converge after {evaluations} evaluations")]
    MinimizerFailed { evaluations: usize },

    #[error("complete backlogging required (beta = 1), got beta = {0}")]
    NotCompleteBacklog(f64),

    #[error("time {t} outside cycle [0, {total}]")]
    TimeOutOfRange { t: f64, total: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("scenario: {0}")]
    Scenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
