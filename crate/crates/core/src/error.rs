use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { pos: usize, name: String },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("operands live in different rings")]
    RingMismatch,

    #[error("ambient rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("module has rank {rank}, but rank {required} is required")]
    RankDeficient { rank: usize, required: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("step budget of {0} reductions exceeded")]
    BudgetExceeded(u64),

    #[error("reduction test needs {count} products in degree {degree}, more than the cap of {cap}")]
    ProductCap { degree: usize, count: usize, cap: usize },

    #[error("generic rank certification failed after {0} attempts")]
    Certification(usize),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Parse-level failure, as opposed to a mathematical one.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Syntax { .. } | Error::UnknownVariable { .. })
    }

    /// Process exit status: 1 for malformed input, 2 for a failed mathematical
    /// precondition, 3 when a resource cap is hit.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. }
            | Error::UnknownVariable { .. }
            | Error::Input(_)
            | Error::OutOfRange { .. }
            | Error::RankMismatch { .. }
            | Error::RingMismatch => 1,
            Error::BudgetExceeded(_) | Error::ProductCap { .. } => 3,
            Error::Precondition(_) | Error::RankDeficient { .. } | Error::Certification(_) | Error::Internal(_) => 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Error::Input("x".into()).exit_code(), 1);
        assert_eq!(Error::RingMismatch.exit_code(), 1);
        assert_eq!(Error::precondition("free").exit_code(), 2);
        assert_eq!(Error::Internal("bug".into()).exit_code(), 2);
        assert_eq!(Error::BudgetExceeded(10).exit_code(), 3);
        assert_eq!(Error::ProductCap { degree: 8, count: 24310, cap: 20000 }.exit_code(), 3);
    }
}
