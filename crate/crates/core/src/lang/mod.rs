//! A small typed language whose closed terms denote Paulis and whose
//! one-variable terms denote projective Cliffords.
//!
//! Two layers: a linear calculus of Z_d-modules ([`CExpr`]) and a Pauli
//! layer ([`PExpr`]) with phases, the condensed product and pattern
//! matching on X/Z and on tensor components. Surface programs are parsed,
//! elaborated to the core syntax, typechecked with symplectic side
//! conditions, and evaluated by the β-rules with their phase corrections.

use std::cell::Cell;
use std::sync::atomic::{AtomicUsize, Ordering};

mod elab;
mod eval;
pub mod parse;
pub mod program;
mod psi;
pub mod syntax;
mod typing;
pub mod types;

pub use program::{Definition, Program};
pub use syntax::{CExpr, CValue, PExpr, PValue};
pub use types::{CType, QType};

use crate::error::{bail, Result};

/// Evaluation step bound; only a bug in the evaluator should reach it.
pub const DEFAULT_FUEL: u64 = 50_000_000;

/// Typechecker and evaluator over Z_d.
#[derive(Debug)]
pub struct Machine {
    d: u64,
    fuel: u64,
    check_preservation: bool,
    steps: Cell<u64>,
}

static FRESH: AtomicUsize = AtomicUsize::new(0);

/// A variable name the parser can never produce.
pub(crate) fn fresh() -> String {
    format!("%{}", FRESH.fetch_add(1, Ordering::Relaxed))
}

impl Machine {
    pub fn new(d: u64) -> Result<Self> {
        if d < 2 {
            bail!(DimensionMismatch, "qudit dimension must be at least 2, got {d}");
        }
        Ok(Machine { d, fuel: DEFAULT_FUEL, check_preservation: false, steps: Cell::new(0) })
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.fuel = fuel;
        self
    }

    /// Re-typecheck every closed intermediate term during evaluation.
    pub fn with_preservation_checks(mut self, on: bool) -> Self {
        self.check_preservation = on;
        self
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    fn tick(&self) -> Result<()> {
        let s = self.steps.get() + 1;
        if s > self.fuel {
            bail!(FuelExhausted, "evaluation exceeded {} steps", self.fuel);
        }
        self.steps.set(s);
        Ok(())
    }

    fn with_fresh_fuel<T>(&self, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let saved = self.steps.replace(0);
        let out = f();
        self.steps.set(saved);
        out
    }

    fn reduce(&self, x: i128) -> u64 {
        x.rem_euclid(self.d as i128) as u64
    }

    /// (d/2)·bit, or 0 for odd d.
    fn half(&self, bit: u64) -> u64 {
        if self.d.is_multiple_of(2) {
            (self.d / 2) * (bit % 2)
        } else {
            0
        }
    }
}
