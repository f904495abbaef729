//! Linear typechecking for both layers.
//!
//! Contexts are split by free variables. A context variable that occurs in
//! neither half can only be absorbed by a `0`, so each placement is tried.

use std::collections::BTreeMap;

use super::syntax::{CExpr, PExpr};
use super::types::{CType, QType};
use super::Machine;
use crate::error::{bail, Error, ErrorKind, Result};

pub(crate) type Ctx = BTreeMap<String, CType>;

/// Bound on unused variables whose placement is searched.
const MAX_UNUSED: usize = 8;

fn names(ctx: &Ctx) -> String {
    ctx.keys().cloned().collect::<Vec<_>>().join(", ")
}

fn bind(ctx: &Ctx, x: &str, ty: CType) -> Result<Ctx> {
    if ctx.contains_key(x) {
        bail!(LinearityViolation, "variable {x} is rebound while still linear in scope");
    }
    let mut out = ctx.clone();
    out.insert(x.to_string(), ty);
    Ok(out)
}

fn require_empty(ctx: &Ctx, what: &str) -> Result<()> {
    if !ctx.is_empty() {
        bail!(LinearityViolation, "unused linear variable(s) {} at {what}", names(ctx));
    }
    Ok(())
}

/// Try every split of `ctx` consistent with the free variables of the two
/// sides, returning the first one for which `check` succeeds.
fn split<T>(
    ctx: &Ctx,
    left_free: &std::collections::BTreeSet<String>,
    right_free: &std::collections::BTreeSet<String>,
    mut check: impl FnMut(&Ctx, &Ctx) -> Result<T>,
) -> Result<T> {
    let mut left = Ctx::new();
    let mut right = Ctx::new();
    let mut unused = Vec::new();
    for (x, t) in ctx {
        match (left_free.contains(x), right_free.contains(x)) {
            (true, true) => bail!(LinearityViolation, "linear variable {x} is used more than once"),
            (true, false) => {
                left.insert(x.clone(), t.clone());
            }
            (false, true) => {
                right.insert(x.clone(), t.clone());
            }
            (false, false) => unused.push((x.clone(), t.clone())),
        }
    }
    if unused.len() > MAX_UNUSED {
        bail!(LinearityViolation, "too many unused linear variables");
    }
    let mut first_err: Option<Error> = None;
    for mask in 0u32..(1 << unused.len()) {
        let (mut l, mut r) = (left.clone(), right.clone());
        for (k, (x, t)) in unused.iter().enumerate() {
            if mask & (1 << k) == 0 {
                l.insert(x.clone(), t.clone());
            } else {
                r.insert(x.clone(), t.clone());
            }
        }
        match check(&l, &r) {
            Ok(v) => return Ok(v),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.expect("at least one split is tried"))
}

fn expect_eq(found: &CType, want: &CType, what: &str) -> Result<()> {
    if found != want {
        bail!(TypeMismatch, "{what}: expected {want}, found {found}");
    }
    Ok(())
}

impl Machine {
    /// Type of a closed C-expression.
    pub fn typecheck_c(&self, a: &CExpr) -> Result<CType> {
        self.type_c(&Ctx::new(), a)
    }

    /// Type of `a` under the linear context `ctx`.
    pub fn typecheck_c_in(&self, ctx: &[(&str, CType)], a: &CExpr) -> Result<CType> {
        let mut c = Ctx::new();
        for (x, t) in ctx {
            c = bind(&c, x, t.clone())?;
        }
        self.type_c(&c, a)
    }

    pub(crate) fn type_c(&self, ctx: &Ctx, a: &CExpr) -> Result<CType> {
        match a {
            CExpr::Var(x) => match ctx.get(x) {
                None => bail!(UnboundVariable, "unbound variable {x}"),
                Some(t) if ctx.len() == 1 => Ok(t.clone()),
                Some(_) => {
                    let mut rest = ctx.clone();
                    rest.remove(x);
                    bail!(LinearityViolation, "unused linear variable(s) {} at {x}", names(&rest))
                }
            },
            CExpr::Zero(t) => Ok(t.clone()),
            CExpr::Const(_) => {
                require_empty(ctx, "a constant")?;
                Ok(CType::Unit)
            }
            CExpr::Let(x, e, body) => {
                let mut bf = body.free_vars();
                bf.remove(x);
                split(ctx, &e.free_vars(), &bf, |l, r| {
                    let t = self.type_c(l, e)?;
                    self.type_c(&bind(r, x, t)?, body)
                })
            }
            CExpr::Scale(s, e) => split(ctx, &s.free_vars(), &e.free_vars(), |l, r| {
                expect_eq(&self.type_c(l, s)?, &CType::Unit, "scalar of a scaling")?;
                self.type_c(r, e)
            }),
            CExpr::App(f, e) => split(ctx, &f.free_vars(), &e.free_vars(), |l, r| {
                let CType::Arrow(dom, cod) = self.type_c(l, f)? else {
                    bail!(TypeMismatch, "applying a non-function {f}");
                };
                expect_eq(&self.type_c(r, e)?, &dom, "function argument")?;
                Ok(*cod)
            }),
            CExpr::Add(p, q) => {
                let t = self.type_c(ctx, p)?;
                expect_eq(&self.type_c(ctx, q)?, &t, "right summand")?;
                Ok(t)
            }
            CExpr::Pair(p, q) => Ok(CType::sum(self.type_c(ctx, p)?, self.type_c(ctx, q)?)),
            CExpr::Lam(x, t, body) => {
                let cod = self.type_c(&bind(ctx, x, t.clone())?, body)?;
                Ok(CType::arrow(t.clone(), cod))
            }
            CExpr::Case(s, x1, a1, x2, a2) => {
                let mut bf = a1.free_vars();
                bf.remove(x1);
                let mut f2 = a2.free_vars();
                f2.remove(x2);
                bf.extend(f2);
                split(ctx, &s.free_vars(), &bf, |l, r| {
                    let CType::Sum(t1, t2) = self.type_c(l, s)? else {
                        bail!(TypeMismatch, "case on a non-sum {s}");
                    };
                    let b1 = self.type_c(&bind(r, x1, *t1)?, a1)?;
                    let b2 = self.type_c(&bind(r, x2, *t2)?, a2)?;
                    expect_eq(&b2, &b1, "case branches")?;
                    Ok(b1)
                })
            }
        }
    }

    /// Type of a closed Pauli expression.
    pub fn typecheck_p(&self, e: &PExpr) -> Result<QType> {
        self.type_p(None, e)
    }

    /// Type of `e` in the context `x : q`.
    pub fn typecheck_p_in(&self, x: &str, q: &QType, e: &PExpr) -> Result<QType> {
        self.type_p(Some((x, q)), e)
    }

    fn type_p(&self, theta: Option<(&str, &QType)>, e: &PExpr) -> Result<QType> {
        let closed = |what: &str| -> Result<()> {
            match theta {
                Some((x, _)) => bail!(LinearityViolation, "{what} must be closed, but {x} is in scope"),
                None => Ok(()),
            }
        };
        match e {
            PExpr::Var(x) => match theta {
                Some((y, q)) if y == x => Ok(q.clone()),
                Some((y, _)) => bail!(UnboundVariable, "unbound variable {x} (only {y} is in scope)"),
                None => bail!(UnboundVariable, "unbound variable {x}"),
            },
            PExpr::Let(x, e1, body) => {
                let q = self.type_p(theta, e1)?;
                self.type_p(Some((x, &q)), body)
            }
            PExpr::Const(a) => {
                closed("a constant")?;
                let t = self.typecheck_c(a)?;
                t.unbar()
            }
            PExpr::Phase(a, body) => {
                let ctx: Ctx = theta.map(|(x, q)| (x.to_string(), q.bar())).into_iter().collect();
                expect_eq(&self.type_c(&ctx, a)?, &CType::Unit, "phase")?;
                self.type_p(theta, body)
            }
            PExpr::Star(p, q) => {
                closed("an operand of the condensed product")?;
                let t = self.type_p(None, p)?;
                let u = self.type_p(None, q)?;
                if t != u {
                    bail!(TypeMismatch, "condensed product of {t} and {u}");
                }
                Ok(t)
            }
            PExpr::Pow(p, _) => {
                closed("the base of a power")?;
                self.type_p(None, p)
            }
            PExpr::Inj(i, p, ty) => {
                let QType::Tensor(q1, q2) = ty else {
                    bail!(TypeMismatch, "injection annotated with non-tensor {ty}");
                };
                let want = if *i == 1 { q1 } else { q2 };
                let got = self.type_p(theta, p)?;
                if got != **want {
                    bail!(TypeMismatch, "in{i} expects {want}, found {got}");
                }
                Ok(ty.clone())
            }
            PExpr::CasePauli(s, ex, ez) => {
                let t = self.type_p(theta, s)?;
                if t != QType::Pauli {
                    bail!(TypeMismatch, "X/Z case on {t}");
                }
                let qx = self.type_p(None, ex)?;
                let qz = self.type_p(None, ez)?;
                if qx != qz {
                    bail!(TypeMismatch, "X/Z branches have types {qx} and {qz}");
                }
                let w = self.omega_apply(&qz.bar(), self.psi_of(ez), self.psi_of(ex))?;
                let r = self.with_fresh_fuel(|| self.eval_c_in(&w))?.as_scalar()?;
                if r != 1 % self.d {
                    bail!(
                        SymplecticConditionFailed,
                        "omega(Z branch, X branch) = {r}, expected 1, for branches X -> {ex} and Z -> {ez}"
                    );
                }
                Ok(qx)
            }
            PExpr::CaseTensor(s, x1, e1, x2, e2) => {
                let QType::Tensor(q1, q2) = self.type_p(theta, s)? else {
                    bail!(TypeMismatch, "tensor case on a single Pauli");
                };
                let r1 = self.type_p(Some((x1, &q1)), e1)?;
                let r2 = self.type_p(Some((x2, &q2)), e2)?;
                if r1 != r2 {
                    bail!(TypeMismatch, "tensor case branches have types {r1} and {r2}");
                }
                self.check_commuting_branches(&q1, x1, e1, &q2, x2, e2, &r1)?;
                Ok(r1)
            }
        }
    }

    /// ω(ψ e1{b1/x1}, ψ e2{b2/x2}) = 0 on all basis vectors b1, b2.
    #[allow(clippy::too_many_arguments)]
    fn check_commuting_branches(
        &self,
        q1: &QType,
        x1: &str,
        e1: &PExpr,
        q2: &QType,
        x2: &str,
        e2: &PExpr,
        out: &QType,
    ) -> Result<()> {
        let p1 = self.psi_of(e1);
        let p2 = self.psi_of(e2);
        let basis = |q: &QType| -> Vec<CExpr> {
            let n = q.rank();
            (0..2 * n)
                .map(|k| {
                    let mut leaves = vec![0u64; 2 * n];
                    leaves[k] = 1;
                    leaf_value(q, &leaves).to_expr()
                })
                .collect()
        };
        for b1 in basis(q1) {
            let a1 = p1.subst(x1, &b1);
            for b2 in basis(q2) {
                let a2 = p2.subst(x2, &b2);
                let w = self.omega_apply(&out.bar(), a1.clone(), a2)?;
                let r = self.with_fresh_fuel(|| self.eval_c_in(&w))?.as_scalar()?;
                if r != 0 {
                    return Err(Error::new(
                        ErrorKind::SymplecticConditionFailed,
                        format!("branches do not commute: omega = {r} on basis pair {b1}, {b2}"),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The bar(Q) value with the given interlaced leaves.
pub(crate) fn leaf_value(q: &QType, leaves: &[u64]) -> super::CValue {
    use super::CValue;
    fn build(q: &QType, leaves: &[u64], next: &mut usize) -> CValue {
        match q {
            QType::Pauli => {
                let k = *next;
                *next += 2;
                CValue::pair(CValue::Scalar(leaves[k]), CValue::Scalar(leaves[k + 1]))
            }
            QType::Tensor(a, b) => {
                let l = build(a, leaves, next);
                CValue::pair(l, build(b, leaves, next))
            }
        }
    }
    build(q, leaves, &mut 0)
}
