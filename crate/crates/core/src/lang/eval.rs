//! Big-step evaluation following the β-rules of both layers.
//!
//! The phase corrections are computed here with plain integer arithmetic on
//! value leaves, independently of the `pauli` module, so the two can be
//! tested against each other.

use super::syntax::{CExpr, CValue, PExpr, PValue};
use super::types::{CType, QType};
use super::{fresh, Machine};
use crate::error::{bail, Result};

impl Machine {
    /// Normal form of a closed C-expression.
    pub fn eval_c(&self, a: &CExpr) -> Result<CValue> {
        self.with_fresh_fuel(|| self.eval_c_in(a))
    }

    /// Normal form ⟨r⟩v of a closed Pauli expression.
    pub fn eval_p(&self, e: &PExpr) -> Result<PValue> {
        self.with_fresh_fuel(|| self.eval_p_in(e))
    }

    pub(crate) fn eval_c_in(&self, a: &CExpr) -> Result<CValue> {
        self.tick()?;
        let before = if self.check_preservation { Some(self.preserved_c(a)?) } else { None };
        let v = self.step_c(a)?;
        if let Some(t) = before {
            let after = self.preserved_c(&v.to_expr())?;
            if after != t {
                bail!(InvariantViolation, "evaluation changed type {t} to {after} in {a}");
            }
        }
        Ok(v)
    }

    fn preserved_c(&self, a: &CExpr) -> Result<CType> {
        self.typecheck_c(a).map_err(|e| {
            crate::error::Error::new(
                crate::error::ErrorKind::InvariantViolation,
                format!("intermediate term {a} is ill-typed: {e}"),
            )
        })
    }

    fn step_c(&self, a: &CExpr) -> Result<CValue> {
        match a {
            CExpr::Var(x) => bail!(UnboundVariable, "unbound variable {x} during evaluation"),
            CExpr::Let(x, e, body) => {
                let v = self.eval_c_in(e)?;
                self.eval_c_in(&body.subst(x, &v.to_expr()))
            }
            CExpr::Zero(t) => Ok(CValue::zero(t)),
            CExpr::Const(r) => Ok(CValue::Scalar(r % self.d)),
            CExpr::Scale(s, e) => {
                let r = self.eval_c_in(s)?.as_scalar()?;
                let v = self.eval_c_in(e)?;
                self.scale_value(r, v)
            }
            CExpr::Add(p, q) => {
                let u = self.eval_c_in(p)?;
                let v = self.eval_c_in(q)?;
                self.add_values(u, v)
            }
            CExpr::Pair(p, q) => Ok(CValue::pair(self.eval_c_in(p)?, self.eval_c_in(q)?)),
            CExpr::Case(s, x1, a1, x2, a2) => match self.eval_c_in(s)? {
                CValue::Pair(v1, v2) => {
                    let sum = CExpr::add(a1.subst(x1, &v1.to_expr()), a2.subst(x2, &v2.to_expr()));
                    self.eval_c_in(&sum)
                }
                v => bail!(TypeMismatch, "case on non-pair value {v}"),
            },
            CExpr::Lam(x, t, body) => Ok(CValue::Lam(x.clone(), t.clone(), body.clone())),
            CExpr::App(f, e) => match self.eval_c_in(f)? {
                CValue::Lam(x, _, body) => {
                    let v = self.eval_c_in(e)?;
                    self.eval_c_in(&body.subst(&x, &v.to_expr()))
                }
                v => bail!(TypeMismatch, "applying non-function value {v}"),
            },
        }
    }

    fn scale_value(&self, r: u64, v: CValue) -> Result<CValue> {
        Ok(match v {
            CValue::Scalar(s) => CValue::Scalar(self.reduce(r as i128 * s as i128)),
            CValue::Pair(a, b) => CValue::pair(self.scale_value(r, *a)?, self.scale_value(r, *b)?),
            CValue::Lam(x, t, body) => CValue::Lam(x, t, Box::new(CExpr::scale(CExpr::Const(r), *body))),
        })
    }

    fn add_values(&self, u: CValue, v: CValue) -> Result<CValue> {
        Ok(match (u, v) {
            (CValue::Scalar(a), CValue::Scalar(b)) => CValue::Scalar(self.reduce(a as i128 + b as i128)),
            (CValue::Pair(a1, a2), CValue::Pair(b1, b2)) => {
                CValue::pair(self.add_values(*a1, *b1)?, self.add_values(*a2, *b2)?)
            }
            (CValue::Lam(x1, t, b1), CValue::Lam(x2, _, b2)) => {
                let x = fresh();
                CValue::Lam(x.clone(), t, Box::new(CExpr::add(b1.rename(&x1, &x), b2.rename(&x2, &x))))
            }
            (u, v) => bail!(TypeMismatch, "adding values of different shapes {u} and {v}"),
        })
    }

    pub(crate) fn eval_p_in(&self, e: &PExpr) -> Result<PValue> {
        self.tick()?;
        let before = if self.check_preservation {
            Some(self.typecheck_p(e).map_err(|err| {
                crate::error::Error::new(
                    crate::error::ErrorKind::InvariantViolation,
                    format!("intermediate term {e} is ill-typed: {err}"),
                )
            })?)
        } else {
            None
        };
        let v = self.step_p(e)?;
        if let Some(q) = before {
            let t = self.preserved_c(&v.value.to_expr())?;
            if t != q.bar() {
                bail!(InvariantViolation, "evaluation of {e} produced a value of type {t}, not {}", q.bar());
            }
        }
        Ok(v)
    }

    fn step_p(&self, e: &PExpr) -> Result<PValue> {
        match e {
            PExpr::Var(x) => bail!(UnboundVariable, "unbound variable {x} during evaluation"),
            PExpr::Let(x, e1, body) => {
                let v = self.eval_p_in(e1)?;
                let w = self.eval_p_in(&body.subst(x, &v.value.to_expr()))?;
                Ok(self.shift(w, v.phase))
            }
            PExpr::Const(a) => Ok(PValue::new(0, self.eval_c_in(a)?)),
            PExpr::Phase(a, body) => {
                let r = self.eval_c_in(a)?.as_scalar()?;
                let w = self.eval_p_in(body)?;
                Ok(self.shift(w, r))
            }
            PExpr::Star(p, q) => {
                let u = self.eval_p_in(p)?;
                let v = self.eval_p_in(q)?;
                self.star_values(&u, &v)
            }
            PExpr::Pow(p, r) => {
                let u = self.eval_p_in(p)?;
                self.pow_value(&u, r % self.d)
            }
            PExpr::Inj(i, p, ty) => {
                let QType::Tensor(q1, q2) = ty else {
                    bail!(TypeMismatch, "injection annotated with non-tensor {ty}");
                };
                let v = self.eval_p_in(p)?;
                let value = if *i == 1 {
                    CValue::pair(v.value, CValue::zero(&q2.bar()))
                } else {
                    CValue::pair(CValue::zero(&q1.bar()), v.value)
                };
                Ok(PValue::new(v.phase, value))
            }
            PExpr::CasePauli(s, ex, ez) => {
                let v = self.eval_p_in(s)?;
                let CValue::Pair(rx, rz) = &v.value else {
                    bail!(TypeMismatch, "X/Z case on non-pair value {}", v.value);
                };
                let (rx, rz) = (rx.as_scalar()?, rz.as_scalar()?);
                let pz = self.pow_value(&self.eval_p_in(ez)?, rz)?;
                let px = self.pow_value(&self.eval_p_in(ex)?, rx)?;
                let w = self.star_values(&pz, &px)?;
                let k = self.half(self.sgn(rx as u128 * rz as u128));
                Ok(self.shift(w, v.phase + k))
            }
            PExpr::CaseTensor(s, x1, e1, x2, e2) => {
                let v = self.eval_p_in(s)?;
                let CValue::Pair(v1, v2) = &v.value else {
                    bail!(TypeMismatch, "tensor case on non-pair value {}", v.value);
                };
                let w1 = self.eval_p_in(&e1.subst(x1, &v1.to_expr()))?;
                let w2 = self.eval_p_in(&e2.subst(x2, &v2.to_expr()))?;
                let w = self.star_values(&w1, &w2)?;
                Ok(self.shift(w, v.phase))
            }
        }
    }

    fn shift(&self, v: PValue, r: u64) -> PValue {
        PValue::new(self.reduce(v.phase as i128 + r as i128), v.value)
    }

    /// sgn of an integer read in Z_{2d}: 1 iff its residue is at least d.
    fn sgn(&self, x: u128) -> u64 {
        u64::from(x % (2 * self.d as u128) >= self.d as u128)
    }

    /// Vector sgn of leaves read in Z_{2d}, pairs taken as (x, z).
    fn sgn_leaves(&self, w: &[u128]) -> u64 {
        let dd = 2 * self.d as u128;
        let d = self.d as u128;
        w.chunks(2)
            .map(|c| {
                let (x, z) = (c[0] % dd, c[1] % dd);
                ((x % d) * u128::from(z >= d) + (z % d) * u128::from(x >= d)) as u64
            })
            .sum::<u64>()
            % 2
    }

    /// ⟨r1⟩v1 ⋆ ⟨r2⟩v2 = ⟨r1 + r2 + k⟩(v1 + v2).
    pub(crate) fn star_values(&self, u: &PValue, v: &PValue) -> Result<PValue> {
        let lu = u.value.leaves()?;
        let lv = v.value.leaves()?;
        if lu.len() != lv.len() {
            bail!(TypeMismatch, "condensed product of values {} and {}", u.value, v.value);
        }
        let dd = 2 * self.d as i128;
        let mut w: i128 = 0;
        for (a, b) in lu.chunks(2).zip(lv.chunks(2)) {
            w += a[1] as i128 * b[0] as i128 - b[1] as i128 * a[0] as i128;
        }
        let w = w.rem_euclid(dd) as u128;
        let sum: Vec<u128> = lu.iter().zip(&lv).map(|(&a, &b)| a as u128 + b as u128).collect();
        let k = self.half(self.sgn(w) + self.sgn_leaves(&sum));
        let value = self.add_values(u.value.clone(), v.value.clone())?;
        Ok(PValue::new(self.reduce(u.phase as i128 + v.phase as i128 + k as i128), value))
    }

    /// pow ⟨r⟩v r' = ⟨r'r + k⟩(r'·v).
    pub(crate) fn pow_value(&self, u: &PValue, r: u64) -> Result<PValue> {
        let leaves = u.value.leaves()?;
        let scaled: Vec<u128> = leaves.iter().map(|&a| a as u128 * r as u128).collect();
        let k = self.half(self.sgn_leaves(&scaled));
        let value = self.scale_value(r, u.value.clone())?;
        Ok(PValue::new(self.reduce(r as i128 * u.phase as i128 + k as i128), value))
    }
}
