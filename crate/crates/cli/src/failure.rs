//! Exit codes: 0 success, 1 no applicable method, 2 invalid input, 3 failed
//! internal verification.

use std::fmt;

pub const INFEASIBLE: u8 = 1;
pub const INVALID: u8 = 2;
pub const INTERNAL: u8 = 3;

/// Failure raised by the CLI itself rather than the solver library.
#[derive(Debug)]
pub enum Failure {
    Infeasible(String),
    Internal(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Infeasible(m) => write!(f, "no applicable method: {m}"),
            Failure::Internal(m) => write!(f, "internal verification failed: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(f) = cause.downcast_ref::<Failure>() {
            return match f {
                Failure::Infeasible(_) => INFEASIBLE,
                Failure::Internal(_) => INTERNAL,
            };
        }
        if let Some(e) = cause.downcast_ref::<gibbscut::Error>() {
            if e.is_infeasible() {
                return INFEASIBLE;
            }
            if e.is_internal() {
                return INTERNAL;
            }
            return INVALID;
        }
    }
    INVALID
}
