//! Condensed encodings of n-qudit projective Cliffords over Z_d.
//!
//! The crate covers exact Pauli algebra ([`pauli`]), condensed encodings
//! (μ,ψ) with evaluation, composition and inversion ([`encoding`]),
//! symplectic lifts and Δ-encodings ([`symplectic`]), a dense-matrix oracle
//! ([`oracle`]), a small typed language whose programs denote projective
//! Cliffords ([`lang`]), and Pauli frames ([`frames`]).

pub mod arith;
pub mod encoding;
pub mod error;
pub mod frames;
pub mod lang;
pub mod oracle;
pub mod pauli;
pub mod symplectic;

pub use arith::{Dim, ExtVector, Layout, Matrix, Vector};
pub use encoding::CondensedEncoding;
pub use error::{Error, ErrorKind, Result};
pub use frames::Frame;
pub use lang::{Machine, Program};
pub use pauli::{CanonicalPauli, CondensedPauli, GeneralPauli};
pub use symplectic::{DeltaEncoding, PreDeltaEncoding};
