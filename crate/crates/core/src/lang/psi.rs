//! The ψ-of projection and the symplectic-form programs ω_σ.

use super::syntax::{CExpr, PExpr};
use super::types::CType;
use super::{fresh, Machine};
use crate::error::{bail, Result};

impl Machine {
    /// The C-expression computing the symplectic part of `e`, phases dropped.
    pub fn psi_of(&self, e: &PExpr) -> CExpr {
        match e {
            PExpr::Var(x) => CExpr::Var(x.clone()),
            PExpr::Let(x, e1, e2) => CExpr::Let(x.clone(), Box::new(self.psi_of(e1)), Box::new(self.psi_of(e2))),
            PExpr::Const(a) => a.clone(),
            PExpr::Phase(_, e) => self.psi_of(e),
            PExpr::Star(a, b) => CExpr::add(self.psi_of(a), self.psi_of(b)),
            PExpr::Pow(e, r) => CExpr::scale(CExpr::Const(r % self.d), self.psi_of(e)),
            PExpr::CasePauli(e, ex, ez) => {
                let (x1, x2) = (fresh(), fresh());
                CExpr::case(
                    self.psi_of(e),
                    &x1,
                    CExpr::scale(CExpr::Var(x1.clone()), self.psi_of(ex)),
                    &x2,
                    CExpr::scale(CExpr::Var(x2.clone()), self.psi_of(ez)),
                )
            }
            PExpr::Inj(i, e, ty) => {
                let (left, right) = match ty {
                    super::QType::Tensor(a, b) => (a.bar(), b.bar()),
                    // ill-typed injection; the typechecker reports it
                    super::QType::Pauli => (CType::Unit, CType::Unit),
                };
                if *i == 1 {
                    CExpr::pair(self.psi_of(e), CExpr::Zero(right))
                } else {
                    CExpr::pair(CExpr::Zero(left), self.psi_of(e))
                }
            }
            PExpr::CaseTensor(e, x1, e1, x2, e2) => {
                CExpr::case(self.psi_of(e), x1, self.psi_of(e1), x2, self.psi_of(e2))
            }
        }
    }

    /// Closed ω_σ : σ ⊸ σ ⊸ Unit with ω[r_x,r_z][r_x',r_z'] = r_x' r_z − r_x r_z'.
    pub fn omega_type(&self, sigma: &CType) -> Result<CExpr> {
        if !sigma.is_symplectic() {
            bail!(NotSymplecticType, "{sigma} is not a symplectic type");
        }
        let CType::Sum(s1, s2) = sigma else { unreachable!() };
        let (x, y) = (fresh(), fresh());
        let (xl, xr, yl, yr) = (fresh(), fresh(), fresh(), fresh());
        let v = |n: &String| CExpr::Var(n.clone());
        let body = if **s1 == CType::Unit {
            let minus_one = CExpr::Const(self.d - 1);
            let left = CExpr::case(
                v(&y),
                &yl,
                CExpr::Zero(CType::Unit),
                &yr,
                CExpr::scale(CExpr::scale(minus_one, v(&xl)), v(&yr)),
            );
            let right = CExpr::case(
                v(&y),
                &yl,
                CExpr::scale(v(&xr), v(&yl)),
                &yr,
                CExpr::Zero(CType::Unit),
            );
            CExpr::case(v(&x), &xl, left, &xr, right)
        } else {
            let w1 = self.omega_type(s1)?;
            let w2 = self.omega_type(s2)?;
            let left = CExpr::case(
                v(&y),
                &yl,
                CExpr::app(CExpr::app(w1, v(&xl)), v(&yl)),
                &yr,
                CExpr::Zero(CType::Unit),
            );
            let right = CExpr::case(
                v(&y),
                &yl,
                CExpr::Zero(CType::Unit),
                &yr,
                CExpr::app(CExpr::app(w2, v(&xr)), v(&yr)),
            );
            CExpr::case(v(&x), &xl, left, &xr, right)
        };
        Ok(CExpr::lam(&x, sigma.clone(), CExpr::lam(&y, sigma.clone(), body)))
    }

    /// ω_σ a b as a C-expression.
    pub fn omega_apply(&self, sigma: &CType, a: CExpr, b: CExpr) -> Result<CExpr> {
        Ok(CExpr::app(CExpr::app(self.omega_type(sigma)?, a), b))
    }
}
