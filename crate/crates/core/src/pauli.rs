//! The large Pauli group P'_{d,n}: canonical D-form, multiplication, the
//! condensed product ⋆, powers, and the sign projection f.

use std::fmt;

use crate::arith::{
    cast, eps_bracket, include, omega, omega_ext, s_sign, sgn_vec, Dim, ExtVector, Layout, Vector,
};
use crate::error::{bail, Result};

/// τ^w D_v, the unique normal form of a Pauli.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalPauli {
    w: u64,
    v: Vector,
}

/// τ^w Δ_v with v ∈ V'; many pairs denote the same operator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralPauli {
    w: u64,
    v: ExtVector,
}

/// ζ^t Δ_{v̲}, an element of Q_{d,n}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CondensedPauli {
    t: u64,
    v: Vector,
}

fn qp_ext(v: &ExtVector) -> i128 {
    (0..v.dim().n()).map(|i| v.x(i) as i128 * v.z(i) as i128).sum()
}

impl CanonicalPauli {
    pub fn new(w: i64, v: Vector) -> Self {
        let w = v.dim().mod_ext(w as i128);
        CanonicalPauli { w, v: v.to_layout(Layout::Separated) }
    }

    pub fn identity(dim: Dim) -> Self {
        CanonicalPauli { w: 0, v: Vector::zero(dim) }
    }

    pub fn w(&self) -> u64 {
        self.w
    }

    pub fn v(&self) -> &Vector {
        &self.v
    }

    pub fn dim(&self) -> Dim {
        self.v.dim()
    }

    /// Multiply by the central element τ^k.
    pub fn times_tau(&self, k: i64) -> Self {
        CanonicalPauli::new(self.w as i64 + k, self.v.clone())
    }
}

impl GeneralPauli {
    pub fn new(w: i64, v: ExtVector) -> Self {
        let w = v.dim().mod_ext(w as i128);
        GeneralPauli { w, v: v.to_layout(Layout::Separated) }
    }

    pub fn w(&self) -> u64 {
        self.w
    }

    pub fn v(&self) -> &ExtVector {
        &self.v
    }
}

impl From<&CondensedPauli> for GeneralPauli {
    fn from(p: &CondensedPauli) -> Self {
        GeneralPauli { w: 2 * p.t % p.dim().d_ext(), v: include(&p.v) }
    }
}

impl From<&CondensedPauli> for CanonicalPauli {
    fn from(p: &CondensedPauli) -> Self {
        canonicalize(&GeneralPauli::from(p))
    }
}

impl CondensedPauli {
    pub fn new(t: i64, v: Vector) -> Self {
        let t = v.dim().modd(t as i128);
        CondensedPauli { t, v: v.to_layout(Layout::Separated) }
    }

    pub fn identity(dim: Dim) -> Self {
        CondensedPauli { t: 0, v: Vector::zero(dim) }
    }

    /// X on qudit `i`.
    pub fn x(dim: Dim, i: usize) -> Self {
        CondensedPauli { t: 0, v: Vector::basis(dim, i) }
    }

    /// Z on qudit `i`.
    pub fn z(dim: Dim, i: usize) -> Self {
        CondensedPauli { t: 0, v: Vector::basis(dim, dim.n() + i) }
    }

    /// Δ_{(1,1)} on qudit `i`.
    pub fn y(dim: Dim, i: usize) -> Self {
        CondensedPauli { t: 0, v: Vector::basis(dim, i).add(&Vector::basis(dim, dim.n() + i)) }
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn v(&self) -> &Vector {
        &self.v
    }

    pub fn dim(&self) -> Dim {
        self.v.dim()
    }

    /// Multiply by the central element ζ^k.
    pub fn times_zeta(&self, k: i64) -> Self {
        CondensedPauli::new(self.t as i64 + k, self.v.clone())
    }

    /// The condensed form of a canonical Pauli, when its phase lies in Q_{d,n}.
    pub fn try_from_canonical(g: &CanonicalPauli) -> Option<CondensedPauli> {
        let dim = g.dim();
        let w = dim.mod_ext(g.w as i128 - qp_ext(&include(&g.v)));
        let t = if dim.is_even() {
            if !w.is_multiple_of(2) {
                return None;
            }
            w / 2
        } else {
            // d' = d is odd, so 2 is invertible
            dim.modd(w as i128 * ((dim.d() as i128 + 1) / 2))
        };
        Some(CondensedPauli { t, v: g.v.clone() })
    }
}

/// The unique canonical form of τ^w Δ_v, using Δ_v = τ^{q·p} D_{v̄}.
pub fn canonicalize(g: &GeneralPauli) -> CanonicalPauli {
    let dim = g.v.dim();
    let w = dim.mod_ext(g.w as i128 + qp_ext(&g.v));
    CanonicalPauli { w, v: cast(&g.v) }
}

/// Group law (w₁,v₁)(w₂,v₂) = (w₁+w₂+2(p₁·q₂), v₁+v₂).
pub fn mul(a: &CanonicalPauli, b: &CanonicalPauli) -> Result<CanonicalPauli> {
    if a.dim() != b.dim() {
        bail!(DimensionMismatch, "cannot multiply Paulis over {} and {}", a.dim(), b.dim());
    }
    let dim = a.dim();
    let cross: i128 = (0..dim.n()).map(|i| a.v.z(i) as i128 * b.v.x(i) as i128).sum();
    let cross = dim.modd(cross);
    let w = dim.mod_ext(a.w as i128 + b.w as i128 + 2 * cross as i128);
    Ok(CanonicalPauli { w, v: a.v.add(&b.v) })
}

/// Group inverse.
pub fn inverse(a: &CanonicalPauli) -> CanonicalPauli {
    // (τ^w D_v)^{-1} = τ^{-w} D_{-v} τ^{-2 p·q}, from D_v D_{-v} = ζ^{-p·q}
    let dim = a.dim();
    let pq: i128 = (0..dim.n()).map(|i| a.v.z(i) as i128 * a.v.x(i) as i128).sum();
    let w = dim.mod_ext(-(a.w as i128) + 2 * dim.modd(pq) as i128);
    CanonicalPauli { w, v: a.v.neg() }
}

/// Condensed product ζ^{t₁}Δ_u̲ ⋆ ζ^{t₂}Δ_v̲ = ζ^{t₁+t₂+(d/2)s(u,v)+(d/2)⟨ρ⟩} Δ_{underline(u+v)}.
pub fn cprod(a: &CondensedPauli, b: &CondensedPauli) -> Result<CondensedPauli> {
    if a.dim() != b.dim() {
        bail!(DimensionMismatch, "cannot multiply Paulis over {} and {}", a.dim(), b.dim());
    }
    let dim = a.dim();
    let s = s_sign(&a.v, &b.v)?;
    let sum = a.v.add(&b.v);
    let lifted = include(&a.v).add(&include(&b.v));
    let rho = eps_bracket(&lifted, &include(&sum))?;
    let t = dim.modd(a.t as i128 + b.t as i128 + dim.half_d(s ^ rho) as i128);
    Ok(CondensedPauli { t, v: sum })
}

/// (ζ^tΔ_v̲)^r = ζ^{tr+(d/2)sgn(r̲v̲)} Δ_{underline(rv)}.
pub fn power(a: &CondensedPauli, r: u64) -> CondensedPauli {
    let dim = a.dim();
    let r = r % dim.d();
    let scaled = include(&a.v).scale(r as i64);
    let k = sgn_vec(&scaled);
    let t = dim.modd(a.t as i128 * r as i128 + dim.half_d(k) as i128);
    CondensedPauli { t, v: cast(&scaled) }
}

/// Power by repeated ⋆; agrees with [`power`].
pub fn power_fold(a: &CondensedPauli, r: u64) -> CondensedPauli {
    let r = r % a.dim().d();
    (0..r).fold(CondensedPauli::identity(a.dim()), |acc, _| {
        cprod(&acc, a).expect("same dimension")
    })
}

/// f(τ^tΔ_v) = (−1)^{sgn(t)}Δ_v, returning the sign bit and v.
pub fn sign_project(g: &CanonicalPauli) -> (u8, Vector) {
    let dim = g.dim();
    let w = dim.mod_ext(g.w as i128 - qp_ext(&include(&g.v)));
    (dim.sgn(w), g.v.clone())
}

/// The commutator phase exponent: ab = ζ^{ω(v_a,v_b)} ba.
pub fn commutator(a: &CanonicalPauli, b: &CanonicalPauli) -> Result<u64> {
    omega(&a.v, &b.v)
}

/// Phase exponent of Δ_u Δ_v = τ^{ω'(u,v)} Δ_{u+v}.
pub fn delta_product_phase(u: &ExtVector, v: &ExtVector) -> Result<u64> {
    omega_ext(u, v)
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

fn write_vector_part(f: &mut fmt::Formatter<'_>, v: &Vector) -> fmt::Result {
    let n = v.dim().n();
    if n == 1 {
        if let Some(c) = letter(v.x(0), v.z(0)) {
            return write!(f, "{c}");
        }
    }
    let xs: Vec<String> = (0..n).map(|i| v.x(i).to_string()).collect();
    let zs: Vec<String> = (0..n).map(|i| v.z(i).to_string()).collect();
    write!(f, "X^[{}] Z^[{}]", xs.join(","), zs.join(","))
}

impl fmt::Display for CondensedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.t != 0 {
            write!(f, "<{}> ", self.t)?;
        }
        write_vector_part(f, &self.v)
    }
}

impl fmt::Display for CanonicalPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tau^{} D", self.w)?;
        write!(f, "{}", self.v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(d: u64) -> Dim {
        Dim::new(d, 1).unwrap()
    }

    fn canon(d: Dim, w: i64, x: i64, z: i64) -> CanonicalPauli {
        CanonicalPauli::new(w, Vector::new(d, &[x, z]).unwrap())
    }

    #[test]
    fn canonical_forms_of_y() {
        let d = dim(2);
        let y = GeneralPauli::new(0, ExtVector::new(d, &[1, 1]).unwrap());
        assert_eq!(canonicalize(&y), canon(d, 1, 1, 1));
        let y3 = GeneralPauli::new(0, ExtVector::new(d, &[3, 1]).unwrap());
        assert_eq!(canonicalize(&y3), canon(d, 3, 1, 1));
        let id = GeneralPauli::new(0, ExtVector::zero(d));
        assert_eq!(canonicalize(&id), CanonicalPauli::identity(d));
    }

    #[test]
    fn group_law_examples() {
        let d = dim(2);
        let (x, z, y) = (canon(d, 0, 1, 0), canon(d, 0, 0, 1), canon(d, 1, 1, 1));
        assert_eq!(mul(&z, &x).unwrap(), canon(d, 2, 1, 1));
        assert_eq!(mul(&x, &z).unwrap(), canon(d, 0, 1, 1));
        assert_eq!(mul(&y, &y).unwrap(), CanonicalPauli::identity(d));
    }

    #[test]
    fn condensed_product_examples() {
        let d = dim(2);
        let x = CondensedPauli::x(d, 0);
        let z = CondensedPauli::z(d, 0);
        let xz = cprod(&x, &z).unwrap();
        assert_eq!(xz, CondensedPauli::new(1, Vector::new(d, &[1, 1]).unwrap()));
        assert_eq!(xz.to_string(), "<1> Y");
        let i = CondensedPauli::identity(d);
        assert_eq!(cprod(&i, &x).unwrap(), x);
        assert_eq!(cprod(&x, &i).unwrap(), x);
    }

    #[test]
    fn power_examples() {
        let d4 = dim(4);
        let p = CondensedPauli::new(0, Vector::new(d4, &[2, 3]).unwrap());
        assert_eq!(power(&p, 3), CondensedPauli::new(2, Vector::new(d4, &[2, 1]).unwrap()));
        assert_eq!(power(&p, 1), p);
        assert_eq!(power(&p, 0), CondensedPauli::identity(d4));
        assert_eq!(power(&p, 3), power_fold(&p, 3));
    }

    #[test]
    fn sign_projection_examples() {
        let d = dim(2);
        let i_times = canon(d, 1, 0, 0);
        assert_eq!(sign_project(&i_times), (0, Vector::zero(d)));
        let minus = canon(d, 2, 0, 0);
        assert_eq!(sign_project(&minus), (1, Vector::zero(d)));
        let x = canon(d, 0, 1, 0);
        assert_eq!(sign_project(&x), (0, Vector::new(d, &[1, 0]).unwrap()));
    }

    #[test]
    fn rendering() {
        let d = Dim::new(3, 2).unwrap();
        let p = CondensedPauli::new(2, Vector::new(d, &[1, 0, 2, 1]).unwrap());
        assert_eq!(p.to_string(), "<2> X^[1,0] Z^[2,1]");
        assert_eq!(CondensedPauli::identity(dim(2)).to_string(), "I");
    }
}
