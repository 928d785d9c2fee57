//! Error type shared by all modules.

/// Errors reported by the numeric core.
///
/// Domain violations name the offending function and parameter so CLI
/// diagnostics can be emitted as a single line.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument was NaN or infinite.
    #[error("{func}: {param} = {value} must be finite")]
    NonFinite {
        func: &'static str,
        param: &'static str,
        value: f64,
    },

    /// An argument was outside the stated domain.
    #[error("{func}: {param} = {value} violates {constraint}")]
    Domain {
        func: &'static str,
        param: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// Adaptive quadrature exhausted its evaluation budget before reaching
    /// the requested tolerance. Carries the best estimate found.
    #[error(
        "quadrature did not converge: error bound {error_bound:e} > tolerance {tolerance:e} \
         after {evaluations} evaluations (best estimate {estimate:e})"
    )]
    QuadratureDidNotConverge {
        estimate: f64,
        error_bound: f64,
        tolerance: f64,
        evaluations: u32,
    },

    /// A bracketing solver found no sign change over the supplied bracket.
    #[error("{func}: no sign change on bracket [{lo:e}, {hi:e}]; widen the bracket")]
    NoSignChange {
        func: &'static str,
        lo: f64,
        hi: f64,
    },

    /// The quantity being inverted is not monotonic over the bracket.
    #[error("{func}: non-monotonic over bracket [{lo:e}, {hi:e}]; narrow the bracket")]
    NonMonotonicBracket {
        func: &'static str,
        lo: f64,
        hi: f64,
    },

    /// An optimization objective evaluated to NaN or infinity.
    #[error("{func}: objective not finite at {at:e}")]
    ObjectiveNotFinite { func: &'static str, at: f64 },

    /// A requested optimization or estimate has no feasible configuration.
    #[error("{func}: infeasible: {what}")]
    Infeasible { func: &'static str, what: String },
}

/// Convenience alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn to_f64<T: num_traits::ToPrimitive>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
