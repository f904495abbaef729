//! Core abstract syntax after elaboration, values, and substitution.

use std::collections::BTreeSet;
use std::fmt;

use super::types::{CType, QType};
use crate::arith::{Dim, Vector};
use crate::error::{bail, Result};
use crate::pauli::CondensedPauli;

/// Expressions of the linear module calculus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CExpr {
    Var(String),
    Let(String, Box<CExpr>, Box<CExpr>),
    Zero(CType),
    Const(u64),
    /// a · a', with a : Unit.
    Scale(Box<CExpr>, Box<CExpr>),
    Add(Box<CExpr>, Box<CExpr>),
    Pair(Box<CExpr>, Box<CExpr>),
    Case(Box<CExpr>, String, Box<CExpr>, String, Box<CExpr>),
    Lam(String, CType, Box<CExpr>),
    App(Box<CExpr>, Box<CExpr>),
}

/// Expressions of the Pauli layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PExpr {
    Var(String),
    Let(String, Box<PExpr>, Box<PExpr>),
    Const(CExpr),
    Phase(CExpr, Box<PExpr>),
    Star(Box<PExpr>, Box<PExpr>),
    Pow(Box<PExpr>, u64),
    /// case e of X → e_x | Z → e_z
    CasePauli(Box<PExpr>, Box<PExpr>, Box<PExpr>),
    /// in_i e at the annotated tensor type.
    Inj(u8, Box<PExpr>, QType),
    CaseTensor(Box<PExpr>, String, Box<PExpr>, String, Box<PExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CValue {
    Scalar(u64),
    Pair(Box<CValue>, Box<CValue>),
    Lam(String, CType, Box<CExpr>),
}

/// Normal form ⟨r⟩v of a closed Pauli expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PValue {
    pub phase: u64,
    pub value: CValue,
}

pub(crate) fn bx<T>(t: T) -> Box<T> {
    Box::new(t)
}

impl CExpr {
    pub fn var(x: &str) -> CExpr {
        CExpr::Var(x.to_string())
    }

    pub fn scale(a: CExpr, b: CExpr) -> CExpr {
        CExpr::Scale(bx(a), bx(b))
    }

    pub fn add(a: CExpr, b: CExpr) -> CExpr {
        CExpr::Add(bx(a), bx(b))
    }

    pub fn pair(a: CExpr, b: CExpr) -> CExpr {
        CExpr::Pair(bx(a), bx(b))
    }

    pub fn app(f: CExpr, a: CExpr) -> CExpr {
        CExpr::App(bx(f), bx(a))
    }

    pub fn lam(x: &str, ty: CType, body: CExpr) -> CExpr {
        CExpr::Lam(x.to_string(), ty, bx(body))
    }

    pub fn case(a: CExpr, x1: &str, a1: CExpr, x2: &str, a2: CExpr) -> CExpr {
        CExpr::Case(bx(a), x1.to_string(), bx(a1), x2.to_string(), bx(a2))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            CExpr::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            CExpr::Let(x, a, b) => {
                a.collect_free(bound, out);
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            CExpr::Zero(_) | CExpr::Const(_) => {}
            CExpr::Scale(a, b) | CExpr::Add(a, b) | CExpr::Pair(a, b) | CExpr::App(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            CExpr::Case(a, x1, a1, x2, a2) => {
                a.collect_free(bound, out);
                bound.push(x1.clone());
                a1.collect_free(bound, out);
                bound.pop();
                bound.push(x2.clone());
                a2.collect_free(bound, out);
                bound.pop();
            }
            CExpr::Lam(x, _, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Replace free occurrences of `x` by the closed expression `v`.
    pub fn subst(&self, x: &str, v: &CExpr) -> CExpr {
        let go = |e: &CExpr| e.subst(x, v);
        match self {
            CExpr::Var(y) if y == x => v.clone(),
            CExpr::Var(_) | CExpr::Zero(_) | CExpr::Const(_) => self.clone(),
            CExpr::Let(y, a, b) => {
                let b = if y == x { (**b).clone() } else { go(b) };
                CExpr::Let(y.clone(), bx(go(a)), bx(b))
            }
            CExpr::Scale(a, b) => CExpr::scale(go(a), go(b)),
            CExpr::Add(a, b) => CExpr::add(go(a), go(b)),
            CExpr::Pair(a, b) => CExpr::pair(go(a), go(b)),
            CExpr::App(a, b) => CExpr::app(go(a), go(b)),
            CExpr::Case(a, x1, a1, x2, a2) => CExpr::Case(
                bx(go(a)),
                x1.clone(),
                bx(if x1 == x { (**a1).clone() } else { go(a1) }),
                x2.clone(),
                bx(if x2 == x { (**a2).clone() } else { go(a2) }),
            ),
            CExpr::Lam(y, t, body) => {
                CExpr::Lam(y.clone(), t.clone(), bx(if y == x { (**body).clone() } else { go(body) }))
            }
        }
    }

    /// Rename free `x` to the variable `y`, which must not be captured.
    pub(crate) fn rename(&self, x: &str, y: &str) -> CExpr {
        self.subst(x, &CExpr::var(y))
    }
}

impl PExpr {
    pub fn star(a: PExpr, b: PExpr) -> PExpr {
        PExpr::Star(bx(a), bx(b))
    }

    pub fn phase(a: CExpr, e: PExpr) -> PExpr {
        PExpr::Phase(a, bx(e))
    }

    pub fn inj(i: u8, e: PExpr, ty: QType) -> PExpr {
        PExpr::Inj(i, bx(e), ty)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            PExpr::Var(x) => BTreeSet::from([x.clone()]),
            PExpr::Let(x, e, body) => {
                let mut out = body.free_vars();
                out.remove(x);
                out.extend(e.free_vars());
                out
            }
            PExpr::Const(a) => a.free_vars(),
            PExpr::Phase(a, e) => {
                let mut out = a.free_vars();
                out.extend(e.free_vars());
                out
            }
            PExpr::Star(a, b) => {
                let mut out = a.free_vars();
                out.extend(b.free_vars());
                out
            }
            PExpr::Pow(e, _) | PExpr::Inj(_, e, _) => e.free_vars(),
            PExpr::CasePauli(e, ex, ez) => {
                let mut out = e.free_vars();
                out.extend(ex.free_vars());
                out.extend(ez.free_vars());
                out
            }
            PExpr::CaseTensor(e, x1, e1, x2, e2) => {
                let mut out = e.free_vars();
                let mut f1 = e1.free_vars();
                f1.remove(x1);
                let mut f2 = e2.free_vars();
                f2.remove(x2);
                out.extend(f1);
                out.extend(f2);
                out
            }
        }
    }

    /// Replace free occurrences of the Pauli variable `x` by the closed C-expression `v`.
    pub fn subst(&self, x: &str, v: &CExpr) -> PExpr {
        let go = |e: &PExpr| e.subst(x, v);
        match self {
            PExpr::Var(y) if y == x => PExpr::Const(v.clone()),
            PExpr::Var(_) => self.clone(),
            PExpr::Let(y, e, body) => {
                let body = if y == x { (**body).clone() } else { go(body) };
                PExpr::Let(y.clone(), bx(go(e)), bx(body))
            }
            PExpr::Const(a) => PExpr::Const(a.subst(x, v)),
            PExpr::Phase(a, e) => PExpr::Phase(a.subst(x, v), bx(go(e))),
            PExpr::Star(a, b) => PExpr::star(go(a), go(b)),
            PExpr::Pow(e, r) => PExpr::Pow(bx(go(e)), *r),
            PExpr::CasePauli(e, ex, ez) => PExpr::CasePauli(bx(go(e)), bx(go(ex)), bx(go(ez))),
            PExpr::Inj(i, e, t) => PExpr::Inj(*i, bx(go(e)), t.clone()),
            PExpr::CaseTensor(e, x1, e1, x2, e2) => PExpr::CaseTensor(
                bx(go(e)),
                x1.clone(),
                bx(if x1 == x { (**e1).clone() } else { go(e1) }),
                x2.clone(),
                bx(if x2 == x { (**e2).clone() } else { go(e2) }),
            ),
        }
    }
}

impl CValue {
    pub fn to_expr(&self) -> CExpr {
        match self {
            CValue::Scalar(r) => CExpr::Const(*r),
            CValue::Pair(a, b) => CExpr::pair(a.to_expr(), b.to_expr()),
            CValue::Lam(x, t, body) => CExpr::Lam(x.clone(), t.clone(), body.clone()),
        }
    }

    pub fn pair(a: CValue, b: CValue) -> CValue {
        CValue::Pair(bx(a), bx(b))
    }

    /// The zero value of a sum-of-units type.
    pub fn zero(ty: &CType) -> CValue {
        match ty {
            CType::Unit => CValue::Scalar(0),
            CType::Sum(a, b) => CValue::pair(CValue::zero(a), CValue::zero(b)),
            CType::Arrow(a, b) => CValue::Lam("%z".into(), (**a).clone(), bx(CExpr::Zero((**b).clone()))),
        }
    }

    pub fn as_scalar(&self) -> Result<u64> {
        match self {
            CValue::Scalar(r) => Ok(*r),
            _ => bail!(TypeMismatch, "expected a scalar, found {self}"),
        }
    }

    /// Scalar leaves in left-to-right order.
    pub fn leaves(&self) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        fn walk(v: &CValue, out: &mut Vec<u64>) -> Result<()> {
            match v {
                CValue::Scalar(r) => out.push(*r),
                CValue::Pair(a, b) => {
                    walk(a, out)?;
                    walk(b, out)?;
                }
                CValue::Lam(..) => bail!(TypeMismatch, "a function value has no Pauli reading"),
            }
            Ok(())
        }
        walk(self, &mut out)?;
        Ok(out)
    }
}

/// The value of type bar(Q) whose qudit i carries (x_i, z_i) from `v`.
pub fn vector_to_value(ty: &QType, v: &Vector) -> Result<CValue> {
    if ty.rank() != v.dim().n() {
        bail!(DimensionMismatch, "{ty} has {} qudits but the vector has {}", ty.rank(), v.dim().n());
    }
    fn build(ty: &QType, v: &Vector, next: &mut usize) -> CValue {
        match ty {
            QType::Pauli => {
                let i = *next;
                *next += 1;
                CValue::pair(CValue::Scalar(v.x(i)), CValue::Scalar(v.z(i)))
            }
            QType::Tensor(a, b) => {
                let l = build(a, v, next);
                CValue::pair(l, build(b, v, next))
            }
        }
    }
    Ok(build(ty, v, &mut 0))
}

/// Inverse of [`vector_to_value`].
pub fn value_to_vector(d: u64, v: &CValue) -> Result<Vector> {
    let leaves = v.leaves()?;
    if leaves.is_empty() || leaves.len() % 2 != 0 {
        bail!(TypeMismatch, "{v} is not a Pauli value");
    }
    let n = leaves.len() / 2;
    let xs: Vec<i64> = leaves.iter().step_by(2).map(|&x| x as i64).collect();
    let zs: Vec<i64> = leaves.iter().skip(1).step_by(2).map(|&x| x as i64).collect();
    Vector::from_xz(Dim::new(d, n)?, &xs, &zs)
}

impl PValue {
    pub fn new(phase: u64, value: CValue) -> Self {
        PValue { phase, value }
    }

    pub fn to_pauli(&self, d: u64) -> Result<CondensedPauli> {
        Ok(CondensedPauli::new(self.phase as i64, value_to_vector(d, &self.value)?))
    }

    pub fn from_pauli(ty: &QType, p: &CondensedPauli) -> Result<Self> {
        Ok(PValue { phase: p.t(), value: vector_to_value(ty, p.v())? })
    }
}

fn letter(x: u64, z: u64) -> Option<char> {
    match (x, z) {
        (0, 0) => Some('I'),
        (1, 0) => Some('X'),
        (0, 1) => Some('Z'),
        (1, 1) => Some('Y'),
        _ => None,
    }
}

impl fmt::Display for PValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase != 0 {
            write!(f, "<{}> ", self.phase)?;
        }
        let Ok(leaves) = self.value.leaves() else {
            return write!(f, "{}", self.value);
        };
        if leaves.len() % 2 != 0 {
            return write!(f, "{}", self.value);
        }
        let parts: Vec<String> = leaves
            .chunks(2)
            .map(|c| letter(c[0], c[1]).map_or_else(|| format!("[{},{}]", c[0], c[1]), String::from))
            .collect();
        write!(f, "{}", parts.join(" ** "))
    }
}

impl fmt::Display for CValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CValue::Scalar(r) => write!(f, "{r}"),
            CValue::Pair(a, b) => write!(f, "[{a},{b}]"),
            CValue::Lam(x, t, body) => write!(f, "\\{x}:{t}. {body}"),
        }
    }
}

impl fmt::Display for CExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CExpr::Var(x) => write!(f, "{x}"),
            CExpr::Let(x, a, b) => write!(f, "(let {x} = {a} in {b})"),
            CExpr::Zero(_) => write!(f, "0"),
            CExpr::Const(r) => write!(f, "{r}"),
            CExpr::Scale(a, b) => write!(f, "({a} . {b})"),
            CExpr::Add(a, b) => write!(f, "({a} + {b})"),
            CExpr::Pair(a, b) => write!(f, "[{a},{b}]"),
            CExpr::Case(a, x1, a1, x2, a2) => {
                write!(f, "(case {a} of inl {x1} -> {a1} | inr {x2} -> {a2})")
            }
            CExpr::Lam(x, t, body) => write!(f, "(\\{x}:{t}. {body})"),
            CExpr::App(a, b) => write!(f, "({a} {b})"),
        }
    }
}

impl fmt::Display for PExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PExpr::Var(x) => write!(f, "{x}"),
            PExpr::Let(x, e, body) => write!(f, "(let {x} = {e} in {body})"),
            PExpr::Const(a) => write!(f, "{a}"),
            PExpr::Phase(a, e) => write!(f, "<{a}> {e}"),
            PExpr::Star(a, b) => write!(f, "({a} *.* {b})"),
            PExpr::Pow(e, r) => write!(f, "({e} ^ {r})"),
            PExpr::CasePauli(e, ex, ez) => write!(f, "(case {e} of X -> {ex} | Z -> {ez})"),
            PExpr::Inj(i, e, _) => write!(f, "(in{i} {e})"),
            PExpr::CaseTensor(e, x1, e1, x2, e2) => {
                write!(f, "(case {e} of in1 {x1} -> {e1} | in2 {x2} -> {e2})")
            }
        }
    }
}
