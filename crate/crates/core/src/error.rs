use thiserror::Error;

use crate::specfun::SpecFunError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A model parameter is outside its valid range; `name` is the field.
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error(transparent)]
    Kernel(#[from] SpecFunError),
    /// An iterative procedure ran out of budget.
    #[error("{operation} did not converge within {limit}")]
    NotConverged { operation: &'static str, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check(ok: bool, name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value, reason })
    }
}
