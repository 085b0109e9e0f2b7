use thiserror::Error;

/// Errors raised by the physics and control routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter falls outside the domain of the operation.
    #[error("invalid `{name}` = {value}: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Matrix or array shapes do not agree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// `tan(ωk t)` is evaluated too close to one of its poles.
    #[error("extremum residual undefined near pole of tan at t = {t} (|cos| = {cos_abs:e})")]
    Pole { t: f64, cos_abs: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure(cond: bool, name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            reason,
        })
    }
}
