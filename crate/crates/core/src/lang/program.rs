//! Parsed programs, compiled Cliffords, and their semantics as encodings.

use std::collections::BTreeSet;

use super::elab::Elaborator;
use super::parse::{parse_expr, parse_program, SDef};
use super::syntax::{vector_to_value, CExpr, CValue, PExpr, PValue};
use super::types::QType;
use super::Machine;
use crate::arith::{omega, Dim, Matrix, Vector};
use crate::encoding::CondensedEncoding;
use crate::error::{bail, Result};

/// A parsed source file.
#[derive(Clone, Debug)]
pub struct Program {
    dim: Option<u64>,
    defs: Vec<Definition>,
}

/// A surface definition, possibly with Pauli parameters.
#[derive(Clone, Debug)]
pub struct Definition {
    def: SDef,
}

/// A closed, typechecked definition: `var : input ⊢ body : output`.
#[derive(Clone, Debug)]
pub struct Clifford {
    pub name: String,
    pub input: QType,
    pub output: QType,
    pub var: String,
    pub body: PExpr,
}

impl Program {
    pub fn parse(src: &str) -> Result<Self> {
        let sp = parse_program(src)?;
        let mut seen = BTreeSet::new();
        for d in &sp.defs {
            if !seen.insert(d.name.clone()) {
                bail!(SyntaxError, "{}:1: clifford {} is defined twice", d.line, d.name);
            }
        }
        Ok(Program { dim: sp.dim, defs: sp.defs.into_iter().map(|def| Definition { def }).collect() })
    }

    /// The `dim d = N;` header, if present.
    pub fn dim(&self) -> Option<u64> {
        self.dim
    }

    pub fn definitions(&self) -> &[Definition] {
        &self.defs
    }

    pub fn get(&self, name: &str) -> Result<&Definition> {
        match self.defs.iter().find(|d| d.def.name == name) {
            Some(d) => Ok(d),
            None => bail!(UnboundVariable, "no clifford named {name}"),
        }
    }
}

impl Definition {
    pub fn name(&self) -> &str {
        &self.def.name
    }

    pub fn params(&self) -> &[(String, QType)] {
        &self.def.params
    }

    pub fn input(&self) -> &QType {
        &self.def.input
    }

    pub fn output(&self) -> &QType {
        &self.def.output
    }
}

impl Machine {
    /// Elaborate and typecheck a definition without parameters.
    pub fn compile(&self, def: &Definition) -> Result<Clifford> {
        self.instantiate(def, &[])
    }

    /// Elaborate and typecheck a definition at the given parameter values.
    pub fn instantiate(&self, def: &Definition, args: &[CValue]) -> Result<Clifford> {
        let args: Vec<CExpr> = args.iter().map(CValue::to_expr).collect();
        let el = Elaborator::new(self, &def.def, &args)?;
        let (var, body) = el.definition(&def.def)?;
        let got = self.typecheck_p_in(&var, &def.def.input, &body)?;
        if got != def.def.output {
            bail!(TypeMismatch, "{} is declared to return {} but returns {got}", def.def.name, def.def.output);
        }
        Ok(Clifford {
            name: def.def.name.clone(),
            input: def.def.input.clone(),
            output: def.def.output.clone(),
            var,
            body,
        })
    }

    /// Typecheck every definition; parameters are set to the identity.
    pub fn check_program(&self, prog: &Program) -> Result<Vec<Clifford>> {
        prog.defs
            .iter()
            .map(|d| {
                let zeros: Vec<CValue> = d.params().iter().map(|(_, t)| CValue::zero(&t.bar())).collect();
                self.instantiate(d, &zeros)
            })
            .collect()
    }

    /// Evaluate a closed surface expression at type `ty`.
    pub fn eval_surface(&self, src: &str, ty: &QType) -> Result<PValue> {
        let e = parse_expr(src)?;
        let def = SDef {
            name: "input".into(),
            params: Vec::new(),
            input: ty.clone(),
            output: ty.clone(),
            clauses: Vec::new(),
            line: 0,
        };
        let el = Elaborator::new(self, &def, &[])?;
        let core = el.expr(&e, ty, &Default::default(), &Default::default())?;
        let got = self.typecheck_p(&core)?;
        if got != *ty {
            bail!(TypeMismatch, "expression has type {got}, expected {ty}");
        }
        self.eval_p(&core)
    }

    /// f(⟨r⟩v) = ⟨r⟩ body{v/x}, evaluated.
    pub fn apply(&self, f: &Clifford, input: &PValue) -> Result<PValue> {
        let t = self.typecheck_c(&input.value.to_expr())?;
        if t != f.input.bar() {
            bail!(TypeMismatch, "{} expects {}, got a value of type {t}", f.name, f.input);
        }
        let out = self.eval_p(&f.body.subst(&f.var, &input.value.to_expr()))?;
        Ok(PValue::new(self.reduce(out.phase as i128 + input.phase as i128), out.value))
    }

    fn apply_vector(&self, f: &Clifford, v: &Vector) -> Result<(u64, Vector)> {
        let out = self.apply(f, &PValue::new(0, vector_to_value(&f.input, v)?))?;
        Ok((out.phase, super::syntax::value_to_vector(self.d, &out.value)?))
    }

    /// The condensed encoding (μ,ψ) denoted by `f`, read off the basis images.
    pub fn encoding_of(&self, f: &Clifford) -> Result<CondensedEncoding> {
        if f.input.rank() != f.output.rank() {
            bail!(RankMismatch, "{} maps {} qudits to {}", f.name, f.input.rank(), f.output.rank());
        }
        let dim = Dim::new(self.d, f.input.rank())?;
        let mut psi = Matrix::zeros(self.d, dim.len(), dim.len());
        let mut mu = Vec::with_capacity(dim.len());
        for k in 0..dim.len() {
            let (s, w) = self.apply_vector(f, &Vector::basis(dim, k))?;
            for (r, &x) in w.entries().iter().enumerate() {
                psi.set(r, k, x as i128);
            }
            mu.push(s as i64);
        }
        CondensedEncoding::new(dim, &mu, psi)
    }

    /// ψ̃⁻¹(q): qudit i carries [ω(ψ f(Z_i), q), ω(q, ψ f(X_i))].
    pub fn inverse_symplectic(&self, f: &Clifford, q: &Vector) -> Result<Vector> {
        let n = f.input.rank();
        if n != f.output.rank() {
            bail!(RankMismatch, "{} maps {} qudits to {}; it has no inverse", f.name, n, f.output.rank());
        }
        let dim = Dim::new(self.d, n)?;
        let mut xs = Vec::with_capacity(n);
        let mut zs = Vec::with_capacity(n);
        for i in 0..n {
            let (_, fx) = self.apply_vector(f, &Vector::basis(dim, i))?;
            let (_, fz) = self.apply_vector(f, &Vector::basis(dim, n + i))?;
            xs.push(omega(&fz, q)? as i64);
            zs.push(omega(q, &fx)? as i64);
        }
        Vector::from_xz(dim, &xs, &zs)
    }

    /// f⁻¹(⟨r⟩v) = ⟨r − s⟩ψ̃⁻¹(v), where f(ψ̃⁻¹ v) evaluates to ⟨s⟩v.
    pub fn apply_inverse(&self, f: &Clifford, input: &PValue) -> Result<PValue> {
        if f.input.rank() != f.output.rank() {
            bail!(RankMismatch, "{} maps {} qudits to {}; it has no inverse", f.name, f.input.rank(), f.output.rank());
        }
        let t = self.typecheck_c(&input.value.to_expr())?;
        if t != f.output.bar() {
            bail!(TypeMismatch, "the inverse of {} expects {}, got a value of type {t}", f.name, f.output);
        }
        let v = super::syntax::value_to_vector(self.d, &input.value)?;
        let pre = self.inverse_symplectic(f, &v)?;
        let (s, back) = self.apply_vector(f, &pre)?;
        if back != v {
            bail!(InvariantViolation, "{} does not map its computed preimage {pre} back to {v}", f.name);
        }
        let phase = self.reduce(input.phase as i128 - s as i128);
        Ok(PValue::new(phase, vector_to_value(&f.input, &pre)?))
    }
}
