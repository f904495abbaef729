use std::fmt;

use thiserror::Error;

/// Failure categories shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    NotCongruent,
    DimensionMismatch,
    TooLarge,
    NotSymplectic,
    InvariantViolation,
    NotLinearModD,
    UnsupportedGate,
    NotAPauli,
    NotClifford,
    SyntaxError,
    UnboundVariable,
    LinearityViolation,
    TypeMismatch,
    NotSymplecticType,
    SymplecticConditionFailed,
    RankMismatch,
    IllFormedFrame,
    FormatError,
    FuelExhausted,
}

impl ErrorKind {
    pub fn code(self) -> &'static str {
        match self {
            ErrorKind::NotCongruent => "NotCongruent",
            ErrorKind::DimensionMismatch => "DimensionMismatch",
            ErrorKind::TooLarge => "TooLarge",
            ErrorKind::NotSymplectic => "NotSymplectic",
            ErrorKind::InvariantViolation => "InvariantViolation",
            ErrorKind::NotLinearModD => "NotLinearModD",
            ErrorKind::UnsupportedGate => "UnsupportedGate",
            ErrorKind::NotAPauli => "NotAPauli",
            ErrorKind::NotClifford => "NotClifford",
            ErrorKind::SyntaxError => "SyntaxError",
            ErrorKind::UnboundVariable => "UnboundVariable",
            ErrorKind::LinearityViolation => "LinearityViolation",
            ErrorKind::TypeMismatch => "TypeMismatch",
            ErrorKind::NotSymplecticType => "NotSymplecticType",
            ErrorKind::SymplecticConditionFailed => "SymplecticConditionFailed",
            ErrorKind::RankMismatch => "RankMismatch",
            ErrorKind::IllFormedFrame => "IllFormedFrame",
            ErrorKind::FormatError => "FormatError",
            ErrorKind::FuelExhausted => "FuelExhausted",
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind}: {message}")]
pub struct Error {
    pub kind: ErrorKind,
    pub message: String,
}

impl Error {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        Error { kind, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::new($crate::error::ErrorKind::$kind, format!($($arg)*)))
    };
}

macro_rules! err {
    ($kind:ident, $($arg:tt)*) => {
        $crate::error::Error::new($crate::error::ErrorKind::$kind, format!($($arg)*))
    };
}

pub(crate) use bail;
pub(crate) use err;
