use std::fmt;

use crate::error::{bail, Result};

/// Types of the linear module calculus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CType {
    Unit,
    Sum(Box<CType>, Box<CType>),
    Arrow(Box<CType>, Box<CType>),
}

/// Pauli types: a single qudit or a tensor of two Pauli types.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QType {
    Pauli,
    Tensor(Box<QType>, Box<QType>),
}

impl CType {
    pub fn sum(a: CType, b: CType) -> CType {
        CType::Sum(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: CType, b: CType) -> CType {
        CType::Arrow(Box::new(a), Box::new(b))
    }

    /// Unit ⊕ Unit, or a sum of symplectic types.
    pub fn is_symplectic(&self) -> bool {
        match self {
            CType::Sum(a, b) if **a == CType::Unit && **b == CType::Unit => true,
            CType::Sum(a, b) => a.is_symplectic() && b.is_symplectic(),
            _ => false,
        }
    }

    /// Inverse of [`QType::bar`], defined on symplectic types.
    pub fn unbar(&self) -> Result<QType> {
        match self {
            CType::Sum(a, b) if **a == CType::Unit && **b == CType::Unit => Ok(QType::Pauli),
            CType::Sum(a, b) => Ok(QType::tensor(a.unbar()?, b.unbar()?)),
            _ => bail!(NotSymplecticType, "{self} is not a symplectic type"),
        }
    }

    /// Number of scalar leaves of a value of this type; arrows have none.
    pub fn rank(&self) -> usize {
        match self {
            CType::Unit => 1,
            CType::Sum(a, b) => a.rank() + b.rank(),
            CType::Arrow(..) => 0,
        }
    }
}

impl QType {
    pub fn tensor(a: QType, b: QType) -> QType {
        QType::Tensor(Box::new(a), Box::new(b))
    }

    /// Right-nested Pauli^n.
    pub fn power(n: usize) -> Result<QType> {
        if n == 0 {
            bail!(SyntaxError, "Pauli^0 is not a type");
        }
        let mut t = QType::Pauli;
        for _ in 1..n {
            t = QType::tensor(QType::Pauli, t);
        }
        Ok(t)
    }

    pub fn bar(&self) -> CType {
        match self {
            QType::Pauli => CType::sum(CType::Unit, CType::Unit),
            QType::Tensor(a, b) => CType::sum(a.bar(), b.bar()),
        }
    }

    /// Number of qudits.
    pub fn rank(&self) -> usize {
        match self {
            QType::Pauli => 1,
            QType::Tensor(a, b) => a.rank() + b.rank(),
        }
    }

    /// The in1/in2 choices reaching qudit `i` (0-based, left to right).
    pub fn leaf_path(&self, i: usize) -> Option<Vec<u8>> {
        match self {
            QType::Pauli => (i == 0).then(Vec::new),
            QType::Tensor(a, b) => {
                let ra = a.rank();
                if i < ra {
                    let mut p = a.leaf_path(i)?;
                    p.insert(0, 1);
                    Some(p)
                } else {
                    let mut p = b.leaf_path(i - ra)?;
                    p.insert(0, 2);
                    Some(p)
                }
            }
        }
    }
}

impl fmt::Display for CType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CType::Unit => write!(f, "Unit"),
            CType::Sum(a, b) => write!(f, "({a} + {b})"),
            CType::Arrow(a, b) => write!(f, "({a} -o {b})"),
        }
    }
}

impl fmt::Display for QType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QType::Pauli => write!(f, "Pauli"),
            QType::Tensor(a, b) => match **a {
                QType::Tensor(..) => write!(f, "({a}) ** {b}"),
                QType::Pauli => write!(f, "{a} ** {b}"),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bar_is_injective_on_pauli_types() {
        let q = QType::tensor(QType::power(3).unwrap(), QType::power(2).unwrap());
        assert_eq!(q.bar().unbar().unwrap(), q);
        assert!(q.bar().is_symplectic());
        assert!(!CType::Unit.is_symplectic());
        assert_eq!(q.rank(), 5);
        assert_eq!(q.leaf_path(3), Some(vec![2, 1]));
        assert_eq!(q.leaf_path(5), None);
    }
}
