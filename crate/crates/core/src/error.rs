use thiserror::Error;

use crate::term::{Position, Term};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("`{symbol}` expects {expected} argument(s), found {found}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("unknown function symbol `{0}`")]
    UnknownSymbol(String),

    #[error("invalid symbol declaration: {0}")]
    InvalidSymbol(String),

    #[error("position {position} is not a position of {term}")]
    InvalidPosition { position: Position, term: Term },

    #[error("unknown rule label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate rule label `{0}`")]
    DuplicateLabel(String),

    #[error("invalid rule `{label}`: {reason}")]
    InvalidRule { label: String, reason: String },

    #[error("step ({position}, {label}) does not apply to {term}")]
    StepMismatch {
        position: Position,
        label: String,
        term: Term,
    },

    #[error("cannot compose `{proof}`: left side ends at {left_target} but right side starts at {right_source}")]
    Compose {
        proof: String,
        left_target: Box<Term>,
        right_source: Box<Term>,
    },

    #[error("identifier `{0}` is both a rule label and a function symbol")]
    AmbiguousIdent(String),

    #[error("strategy variable `{0}` is not bound by an enclosing `mu`")]
    UnboundSVar(String),

    #[error("{line}:{column}: {inner}")]
    Located {
        line: usize,
        column: usize,
        inner: Box<Error>,
    },

    #[error("fuel exhausted")]
    FuelExhausted,

    #[error("malformed derivation: {0}")]
    MalformedDerivation(String),
}

impl Error {
    /// Attaches a source location unless the error already carries one.
    pub fn at(self, line: usize, column: usize) -> Error {
        match self {
            e @ (Error::Parse { .. } | Error::Located { .. }) => e,
            e => Error::Located {
                line,
                column,
                inner: Box::new(e),
            },
        }
    }
}
