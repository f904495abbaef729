//! Condensed encodings (μ,ψ): a character μ given by its values on the
//! standard basis, and a symplectic ψ over Z_d. Every projective Clifford
//! has exactly one.

use std::fmt;

use rand::Rng;

use crate::arith::{checked_pow, eps_bracket, include, omega, omega_ext, Dim, ExtVector, Matrix, Vector};
use crate::error::{bail, err, Result};
use crate::pauli::{CanonicalPauli, CondensedPauli};

/// Guard for exhaustive enumeration of 2n×2n matrices.
pub const ENUMERATION_LIMIT: usize = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CondensedEncoding {
    dim: Dim,
    mu: Vec<u64>,
    psi: Matrix,
}

/// True iff ψ is 2n×2n over Z_d with ψᵀΩψ = Ω, and μ has 2n entries.
pub fn check_wellformed(dim: Dim, mu: &[i64], psi: &Matrix) -> bool {
    mu.len() == dim.len()
        && psi.rows() == dim.len()
        && psi.cols() == dim.len()
        && psi.modulus() == dim.d()
        && psi.preserves_omega()
}

impl CondensedEncoding {
    pub fn new(dim: Dim, mu: &[i64], psi: Matrix) -> Result<Self> {
        if mu.len() != dim.len() || psi.rows() != dim.len() || psi.cols() != dim.len() {
            bail!(DimensionMismatch, "encoding over {dim} needs 2n = {} basis values", dim.len());
        }
        if psi.modulus() != dim.d() {
            bail!(DimensionMismatch, "ψ is over Z_{}, expected Z_{}", psi.modulus(), dim.d());
        }
        if !psi.preserves_omega() {
            bail!(NotSymplectic, "ψ = {psi} does not preserve ω over Z_{}", dim.d());
        }
        let mu = mu.iter().map(|&m| dim.modd(m as i128)).collect();
        Ok(CondensedEncoding { dim, mu, psi })
    }

    pub(crate) fn from_parts(dim: Dim, mu: Vec<u64>, psi: Matrix) -> Self {
        debug_assert!(psi.preserves_omega());
        CondensedEncoding { dim, mu, psi }
    }

    pub fn identity(dim: Dim) -> Self {
        CondensedEncoding { dim, mu: vec![0; dim.len()], psi: Matrix::identity(dim.d(), dim.len()) }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// μ on the separated standard basis.
    pub fn mu(&self) -> &[u64] {
        &self.mu
    }

    pub fn psi(&self) -> &Matrix {
        &self.psi
    }

    /// μ extended linearly to all of V.
    pub fn mu_of(&self, v: &Vector) -> u64 {
        let s = v.to_layout(crate::Layout::Separated);
        let acc: u128 = s.entries().iter().zip(&self.mu).map(|(&a, &m)| a as u128 * m as u128).sum();
        (acc % self.dim.d() as u128) as u64
    }

    /// ψ applied to v.
    pub fn psi_of(&self, v: &Vector) -> Vector {
        self.psi.apply(v)
    }

    fn image(&self, k: usize) -> Vector {
        self.psi.apply(&Vector::basis(self.dim, k))
    }
}

impl fmt::Display for CondensedEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mu: Vec<String> = self.mu.iter().map(u64::to_string).collect();
        write!(f, "(mu=[{}]; psi={})", mu.join(","), self.psi)
    }
}

fn same_dim(a: Dim, b: Dim) -> Result<()> {
    if a != b {
        bail!(DimensionMismatch, "operands live in {a} and {b}");
    }
    Ok(())
}

/// The correction κ'(v) ∈ Z_{d'/d}.
///
/// γ(Δ_v) is expanded through the interlaced factorization
/// τ^{z·x} X_1^{x_1} Z_1^{z_1} ⋯ X_n^{x_n} Z_n^{z_n}; every ordered pair of
/// factor images contributes τ^{ω'}, including pairs on different qudits,
/// and the final subscript is renormalized with the sign bracket.
pub fn kappa(enc: &CondensedEncoding, v: &ExtVector) -> Result<u8> {
    same_dim(enc.dim, v.dim())?;
    let dim = enc.dim;
    if !dim.is_even() {
        return Ok(0);
    }
    let n = dim.n();
    let images: Vec<ExtVector> = (0..dim.len()).map(|k| include(&enc.image(k))).collect();
    let mut total: i128 = 0;
    let mut prefix = ExtVector::zero(dim);
    for i in 0..n {
        let (x, z) = (v.x(i), v.z(i));
        total += x as i128 * z as i128;
        for a in [images[i].scale(x as i64), images[n + i].scale(z as i64)] {
            total += omega_ext(&prefix, &a)? as i128;
            prefix = prefix.add(&a);
        }
    }
    let total = dim.mod_ext(total);
    if !total.is_multiple_of(dim.d()) {
        bail!(InvariantViolation, "κ phase sum {total} is not divisible by d = {}", dim.d());
    }
    let target = include(&enc.psi_of(&crate::arith::cast(v)));
    let bracket = eps_bracket(&prefix, &target)?;
    Ok(((total / dim.d()) as u8 + bracket) % 2)
}

/// κ(v) = κ'(include(v)).
pub fn kappa_v(enc: &CondensedEncoding, v: &Vector) -> Result<u8> {
    kappa(enc, &include(v))
}

/// γ(ζ^tΔ_v̲) = ζ^{t+μv+(d/2)κv} Δ_{underline(ψv)}.
pub fn evaluate(enc: &CondensedEncoding, p: &CondensedPauli) -> Result<CondensedPauli> {
    same_dim(enc.dim, p.dim())?;
    let k = kappa_v(enc, p.v())?;
    let t = enc.dim.modd(p.t() as i128 + enc.mu_of(p.v()) as i128 + enc.dim.half_d(k) as i128);
    Ok(CondensedPauli::new(t as i64, enc.psi_of(p.v())))
}

/// Evaluation on an arbitrary element τ^w D_v of the large Pauli group.
pub fn evaluate_canonical(enc: &CondensedEncoding, g: &CanonicalPauli) -> Result<CanonicalPauli> {
    same_dim(enc.dim, g.dim())?;
    let v = include(g.v());
    let qp: i128 = (0..v.dim().n()).map(|i| v.x(i) as i128 * v.z(i) as i128).sum();
    let image = evaluate(enc, &CondensedPauli::new(0, g.v().clone()))?;
    let shift = enc.dim.mod_ext(g.w() as i128 - qp);
    Ok(CanonicalPauli::from(&image).times_tau(shift as i64))
}

/// Encoding of γ₂∘γ₁.
pub fn compose(enc2: &CondensedEncoding, enc1: &CondensedEncoding) -> Result<CondensedEncoding> {
    same_dim(enc2.dim, enc1.dim)?;
    let dim = enc1.dim;
    let psi = enc2.psi.mul(&enc1.psi);
    let mut mu = Vec::with_capacity(dim.len());
    for k in 0..dim.len() {
        let image = enc1.image(k);
        let kap = kappa_v(enc2, &image)?;
        mu.push(dim.modd(enc1.mu[k] as i128 + enc2.mu_of(&image) as i128 + dim.half_d(kap) as i128));
    }
    Ok(CondensedEncoding::from_parts(dim, mu, psi))
}

/// ψ⁻¹(v) = [ω(ψZ_1,v)..ω(ψZ_n,v) ; ω(v,ψX_1)..ω(v,ψX_n)].
pub fn symplectic_inverse(enc: &CondensedEncoding, v: &Vector) -> Vector {
    let dim = enc.dim;
    let n = dim.n();
    let mut e = vec![0i64; dim.len()];
    for i in 0..n {
        e[i] = omega(&enc.image(n + i), v).expect("same dim") as i64;
        e[n + i] = omega(v, &enc.image(i)).expect("same dim") as i64;
    }
    Vector::new(dim, &e).expect("length 2n")
}

pub fn invert(enc: &CondensedEncoding) -> CondensedEncoding {
    let dim = enc.dim;
    let mut psi_inv = Matrix::zeros(dim.d(), dim.len(), dim.len());
    let mut mu = Vec::with_capacity(dim.len());
    for k in 0..dim.len() {
        let pre = symplectic_inverse(enc, &Vector::basis(dim, k));
        for (r, &x) in pre.entries().iter().enumerate() {
            psi_inv.set(r, k, x as i128);
        }
        let kap = kappa_v(enc, &pre).expect("same dim");
        mu.push(dim.modd(-(enc.mu_of(&pre) as i128) + dim.half_d(kap) as i128));
    }
    CondensedEncoding::from_parts(dim, mu, psi_inv)
}

/// The Pauli-conjugation subgroup: ψ = id and the given character.
pub fn embed_character(dim: Dim, mu: &[i64]) -> Result<CondensedEncoding> {
    CondensedEncoding::new(dim, mu, Matrix::identity(dim.d(), dim.len()))
}

/// Conjugation by P: Q ↦ ζ^{ω(P,Q)} Q.
pub fn pauli_to_clifford(p: &CondensedPauli) -> CondensedEncoding {
    let dim = p.dim();
    let mu: Vec<u64> = (0..dim.len())
        .map(|k| omega(p.v(), &Vector::basis(dim, k)).expect("same dim"))
        .collect();
    CondensedEncoding::from_parts(dim, mu, Matrix::identity(dim.d(), dim.len()))
}

/// The symplectic part π(μ,ψ) = ψ.
pub fn project_symplectic(enc: &CondensedEncoding) -> Matrix {
    enc.psi.clone()
}

/// Doubled D-encoding exponent r(v): γ(D_v) = ζ^{r(v)} D_{ψv}, returned as 2r ∈ Z_{d'}.
pub fn d_phase(enc: &CondensedEncoding, v: &Vector) -> Result<u64> {
    let image = evaluate_canonical(enc, &CanonicalPauli::new(0, v.clone()))?;
    Ok(image.w())
}

/// All symplectic 2n×2n matrices over Z_d, by exhaustive search.
pub fn symplectic_group(dim: Dim) -> Result<Vec<Matrix>> {
    let k = dim.len();
    let total = checked_pow(dim.d(), k * k)
        .filter(|&t| t <= ENUMERATION_LIMIT)
        .ok_or_else(|| err!(TooLarge, "d^(4n^2) exceeds {ENUMERATION_LIMIT} at {dim}"))?;
    let d = dim.d() as usize;
    let mut out = Vec::new();
    let mut entries = vec![0u64; k * k];
    for mut idx in 0..total {
        for slot in entries.iter_mut() {
            *slot = (idx % d) as u64;
            idx /= d;
        }
        let m = Matrix::from_raw(dim.d(), k, k, entries.clone());
        if m.preserves_omega() {
            out.push(m);
        }
    }
    Ok(out)
}

/// Every condensed encoding at `dim`, each exactly once.
pub fn enumerate_group(dim: Dim) -> Result<impl Iterator<Item = CondensedEncoding>> {
    let sp = symplectic_group(dim)?;
    Ok(sp.into_iter().flat_map(move |psi| {
        Vector::all(dim).map(move |mu| CondensedEncoding::from_parts(dim, mu.entries().to_vec(), psi.clone()))
    }))
}

/// A random encoding: random character and a random product of transvections.
pub fn random_encoding<R: Rng + ?Sized>(dim: Dim, rng: &mut R) -> CondensedEncoding {
    let psi = crate::symplectic::random_symplectic(dim, rng);
    let mu = (0..dim.len()).map(|_| rng.random_range(0..dim.d())).collect();
    CondensedEncoding::from_parts(dim, mu, psi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d21() -> Dim {
        Dim::new(2, 1).unwrap()
    }

    fn s_gate() -> CondensedEncoding {
        CondensedEncoding::new(d21(), &[0, 0], Matrix::from_rows(2, &[vec![1, 0], vec![1, 1]]).unwrap()).unwrap()
    }

    fn h_gate() -> CondensedEncoding {
        CondensedEncoding::new(d21(), &[0, 0], Matrix::from_rows(2, &[vec![0, 1], vec![1, 0]]).unwrap()).unwrap()
    }

    fn pauli(t: i64, x: i64, z: i64) -> CondensedPauli {
        CondensedPauli::new(t, Vector::new(d21(), &[x, z]).unwrap())
    }

    #[test]
    fn s_gate_data() {
        let s = s_gate();
        assert_eq!(evaluate(&s, &pauli(0, 1, 1)).unwrap(), pauli(1, 1, 0));
        assert_eq!(kappa_v(&s, &Vector::new(d21(), &[1, 1]).unwrap()).unwrap(), 1);
        let inv = invert(&s);
        assert_eq!(inv.mu(), &[1, 0]);
        assert_eq!(d_phase(&s, &Vector::new(d21(), &[1, 0]).unwrap()).unwrap(), 1);
        assert_eq!(d_phase(&s, &Vector::new(d21(), &[1, 1]).unwrap()).unwrap(), 1);
    }

    #[test]
    fn kappa_vanishes_on_basis_and_identity() {
        let s = s_gate();
        for k in 0..2 {
            assert_eq!(kappa(&s, &ExtVector::basis(d21(), k)).unwrap(), 0);
        }
        let id = CondensedEncoding::identity(Dim::new(4, 2).unwrap());
        for v in Vector::all(id.dim()) {
            assert_eq!(kappa_v(&id, &v).unwrap(), 0);
        }
        // off the representatives κ' picks up the sign of v itself
        let w = ExtVector::new(Dim::new(2, 1).unwrap(), &[3, 1]).unwrap();
        assert_eq!(kappa(&CondensedEncoding::identity(d21()), &w).unwrap(), crate::arith::sgn_vec(&w));
    }

    #[test]
    fn hadamard_and_compositions() {
        let h = h_gate();
        assert_eq!(evaluate(&h, &pauli(0, 1, 1)).unwrap(), pauli(1, 1, 1));
        assert_eq!(compose(&h, &h).unwrap(), CondensedEncoding::identity(d21()));
        let ss = compose(&s_gate(), &s_gate()).unwrap();
        assert_eq!(ss.mu(), &[1, 0]);
        assert_eq!(ss.psi(), &Matrix::identity(2, 2));
        assert_eq!(compose(&CondensedEncoding::identity(d21()), &h).unwrap(), h);
    }

    #[test]
    fn pauli_conjugation() {
        let x = pauli_to_clifford(&pauli(0, 1, 0));
        assert_eq!(evaluate(&x, &pauli(0, 0, 1)).unwrap(), pauli(1, 0, 1));
        assert_eq!(evaluate(&x, &pauli(0, 1, 0)).unwrap(), pauli(0, 1, 0));
        assert_eq!(pauli_to_clifford(&CondensedPauli::identity(d21())), CondensedEncoding::identity(d21()));
        let y = pauli_to_clifford(&pauli(0, 1, 1));
        assert_eq!(evaluate(&y, &pauli(0, 1, 0)).unwrap(), pauli(1, 1, 0));
        assert_eq!(evaluate(&y, &pauli(0, 0, 1)).unwrap(), pauli(1, 0, 1));
    }

    #[test]
    fn wellformedness() {
        let id = Matrix::identity(2, 2);
        assert!(check_wellformed(d21(), &[0, 0], &id));
        let collapsed = Matrix::from_rows(2, &[vec![1, 1], vec![0, 0]]).unwrap();
        assert!(!check_wellformed(d21(), &[0, 0], &collapsed));
        assert_eq!(
            CondensedEncoding::new(d21(), &[0, 0], collapsed).unwrap_err().kind,
            crate::ErrorKind::NotSymplectic
        );
    }

    #[test]
    fn group_sizes() {
        assert_eq!(enumerate_group(d21()).unwrap().count(), 24);
        assert_eq!(enumerate_group(Dim::new(3, 1).unwrap()).unwrap().count(), 216);
        assert_eq!(
            enumerate_group(Dim::new(3, 2).unwrap()).err().unwrap().kind,
            crate::ErrorKind::TooLarge
        );
    }

    #[test]
    fn rendering() {
        assert_eq!(s_gate().to_string(), "(mu=[0,0]; psi=[[1,0],[1,1]])");
    }
}
