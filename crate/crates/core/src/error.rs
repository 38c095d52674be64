use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A state variable was outside `[0, 1]` by more than the clamp tolerance.
    #[error("state x = {x} is outside [0, 1] (clamp tolerance {tol})")]
    Domain { x: f64, tol: f64 },

    /// An invalid parameter; `param` names the offending field.
    #[error("invalid {param}: {reason}")]
    Config { param: &'static str, reason: String },

    #[error("waveform is not piecewise-constant")]
    NotPiecewiseConstant,

    #[error("integration diverged at t = {t}: x = {x}")]
    Divergence { t: f64, x: f64 },

    #[error("record too short: need {needed} time units, have {available}")]
    Length { needed: f64, available: f64 },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
}

impl Error {
    pub(crate) fn config(param: &'static str, reason: impl Into<String>) -> Self {
        Error::Config {
            param,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad inputs rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Config { .. } | Error::Domain { .. } | Error::NotPiecewiseConstant
        )
    }
}
