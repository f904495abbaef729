//! Symplectic predicates, the lift Sp(Z_d) → Sp(Z_{d'}), and Δ-encodings.
//!
//! A Δ-encoding (λ,φ) sends Δ_v ↦ ζ^{λv}Δ_{φv} for v ∈ V'. Tables of λ are
//! stored doubled, as τ-exponents in Z_{d'}.

use rand::Rng;

use crate::arith::{cast, checked_pow, eps_bracket, include, omega, Dim, EpsVector, ExtVector, Matrix, Vector};
use crate::encoding::CondensedEncoding;
use crate::error::{bail, err, Result};
use crate::pauli::{canonicalize, CanonicalPauli, CondensedPauli, GeneralPauli};

/// Guard for exhaustive loops over V' (times the ε choices where relevant).
pub const TABLE_LIMIT: usize = 10_000_000;

/// MᵀΩM = Ω with the entries of `m` read modulo `modulus`.
pub fn is_symplectic(m: &Matrix, modulus: u64) -> bool {
    let entries = m.entries().iter().map(|&x| x % modulus).collect();
    Matrix::from_raw(modulus, m.rows(), m.cols(), entries).preserves_omega()
}

/// A lift Φ ∈ Sp(V',ω') with Φ ≡ ψ (mod d).
///
/// Writing Φ = Φ₀ + dE with Φ₀ the entrywise inclusion, Φ₀ᵀΩ'Φ₀ = Ω' + dA and
/// the requirement becomes A = EᵀΩΦ₀ + Φ₀ᵀΩE over F₂.
pub fn lift_symplectic(psi: &Matrix) -> Result<Matrix> {
    let k = psi.rows();
    if psi.cols() != k || !k.is_multiple_of(2) || !psi.preserves_omega() {
        bail!(NotSymplectic, "{psi} is not symplectic over Z_{}", psi.modulus());
    }
    let d = psi.modulus();
    if d % 2 == 1 {
        return Ok(psi.clone());
    }
    let dd = 2 * d;
    let phi0 = psi.include_mod(dd);
    let om = Matrix::omega(dd, k / 2);
    let defect = phi0.transpose().mul(&om).mul(&phi0).add(&om.scale(-1));
    let a: Vec<u8> = defect
        .entries()
        .iter()
        .map(|&x| {
            debug_assert_eq!(x % d, 0);
            ((x / d) % 2) as u8
        })
        .collect();

    // mod 2, Ω is symmetric and its signs vanish
    let om_phi = om.mul(&phi0).reduce_mod(2);
    let phit_om = phi0.transpose().mul(&om).reduce_mod(2);
    let vars = k * k;
    let mut system = BitSystem::new(vars);
    for i in 0..k {
        for j in 0..k {
            let mut row = vec![0u8; vars];
            for r in 0..k {
                // (EᵀΩΦ₀)_ij = Σ_r E_ri (ΩΦ₀)_rj
                row[r * k + i] ^= om_phi.get(r, j) as u8;
                // (Φ₀ᵀΩE)_ij = Σ_r (Φ₀ᵀΩ)_ir E_rj
                row[r * k + j] ^= phit_om.get(i, r) as u8;
            }
            system.push(&row, a[i * k + j]);
        }
    }
    let e = system
        .solve()
        .ok_or_else(|| err!(InvariantViolation, "lift system for {psi} has no solution"))?;
    let mut phi = phi0;
    for r in 0..k {
        for c in 0..k {
            if e[r * k + c] == 1 {
                phi.set(r, c, phi.get(r, c) as i128 + d as i128);
            }
        }
    }
    if !phi.preserves_omega() {
        bail!(InvariantViolation, "lift {phi} of {psi} is not symplectic over Z_{dd}");
    }
    Ok(phi)
}

/// Augmented linear system over F₂, packed into 64-bit words.
struct BitSystem {
    vars: usize,
    rows: Vec<Vec<u64>>,
}

impl BitSystem {
    fn new(vars: usize) -> Self {
        BitSystem { vars, rows: Vec::new() }
    }

    fn words(&self) -> usize {
        (self.vars + 1).div_ceil(64)
    }

    fn push(&mut self, coeffs: &[u8], rhs: u8) {
        let mut row = vec![0u64; self.words()];
        for (i, &c) in coeffs.iter().enumerate() {
            if c & 1 == 1 {
                row[i / 64] |= 1 << (i % 64);
            }
        }
        if rhs & 1 == 1 {
            row[self.vars / 64] |= 1 << (self.vars % 64);
        }
        self.rows.push(row);
    }

    fn bit(row: &[u64], i: usize) -> bool {
        row[i / 64] >> (i % 64) & 1 == 1
    }

    /// Gaussian elimination with the first available pivot; free variables are 0.
    fn solve(mut self) -> Option<Vec<u8>> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.vars {
            let Some(p) = (r..self.rows.len()).find(|&i| Self::bit(&self.rows[i], col)) else {
                continue;
            };
            self.rows.swap(r, p);
            let pivot = self.rows[r].clone();
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i != r && Self::bit(row, col) {
                    row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
                }
            }
            pivots.push(col);
            r += 1;
        }
        if self.rows[r..].iter().any(|row| Self::bit(row, self.vars)) {
            return None;
        }
        let mut x = vec![0u8; self.vars];
        for (i, &col) in pivots.iter().enumerate() {
            x[col] = Self::bit(&self.rows[i], self.vars) as u8;
        }
        Some(x)
    }
}

/// A symplectic Δ-encoding: λ on the basis of V' (values in Z_d) and φ ∈ Sp(V',ω').
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaEncoding {
    dim: Dim,
    lambda: Vec<u64>,
    phi: Matrix,
}

impl DeltaEncoding {
    pub fn new(dim: Dim, lambda: &[i64], phi: Matrix) -> Result<Self> {
        if lambda.len() != dim.len() || phi.rows() != dim.len() || phi.cols() != dim.len() {
            bail!(DimensionMismatch, "Δ-encoding over {dim} needs 2n = {} basis values", dim.len());
        }
        if phi.modulus() != dim.d_ext() || !phi.preserves_omega() {
            bail!(InvariantViolation, "φ = {phi} is not in Sp(Z_{}^{})", dim.d_ext(), dim.len());
        }
        let lambda = lambda.iter().map(|&l| dim.modd(l as i128)).collect();
        Ok(DeltaEncoding { dim, lambda, phi })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn lambda(&self) -> &[u64] {
        &self.lambda
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    /// λ extended linearly, in Z_d.
    pub fn lambda_of(&self, v: &ExtVector) -> u64 {
        let s = v.to_layout(crate::Layout::Separated);
        let acc: u128 = s.entries().iter().zip(&self.lambda).map(|(&a, &l)| a as u128 * l as u128).sum();
        (acc % self.dim.d() as u128) as u64
    }

    /// τ^wΔ_v ↦ τ^{w+2λv}Δ_{φv}.
    pub fn evaluate(&self, g: &GeneralPauli) -> GeneralPauli {
        let w = self.dim.mod_ext(g.w() as i128 + 2 * self.lambda_of(g.v()) as i128);
        GeneralPauli::new(w as i64, self.phi.apply_ext(g.v()))
    }

    /// The induced map on Q_{d,n}.
    pub fn evaluate_condensed(&self, p: &CondensedPauli) -> CondensedPauli {
        let image = canonicalize(&self.evaluate(&GeneralPauli::from(p)));
        CondensedPauli::try_from_canonical(&image).expect("symplectic Δ-encodings preserve Q")
    }
}

/// (μ,ψ) ↦ (λ,φ) with φ a lift of ψ and λb̲ = μb + (d/2)⟨ε⟩_{ψb̲,φb̲}.
pub fn delta_from_condensed(enc: &CondensedEncoding) -> DeltaEncoding {
    let dim = enc.dim();
    let phi = lift_symplectic(enc.psi()).expect("encodings hold symplectic ψ");
    let lambda = (0..dim.len())
        .map(|k| {
            let image = enc.psi_of(&Vector::basis(dim, k));
            let lifted = phi.apply_ext(&ExtVector::basis(dim, k));
            let bit = eps_bracket(&include(&image), &lifted).expect("φ lifts ψ");
            dim.modd(enc.mu()[k] as i128 + dim.half_d(bit) as i128)
        })
        .collect();
    DeltaEncoding { dim, lambda, phi }
}

/// (λ,φ) ↦ (μ,ψ) with ψ = cast φ and μb = λb̲ − (d/2)⟨ε⟩_{ψb̲,φb̲}.
pub fn condensed_from_delta(de: &DeltaEncoding) -> Result<CondensedEncoding> {
    let dim = de.dim;
    let psi = de.phi.reduce_mod(dim.d());
    let mut mu = Vec::with_capacity(dim.len());
    for k in 0..dim.len() {
        let lifted = de.phi.apply_ext(&ExtVector::basis(dim, k));
        let bit = eps_bracket(&include(&cast(&lifted)), &lifted)?;
        mu.push(dim.modd(de.lambda[k] as i128 - dim.half_d(bit) as i128) as i64);
    }
    CondensedEncoding::new(dim, &mu, psi).map_err(|e| err!(InvariantViolation, "{}", e.message))
}

/// A possibly non-linear relation Δ_v ~ τ^{λv}Δ_{φv}, tabulated over V'.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreDeltaEncoding {
    dim: Dim,
    lambda: Vec<u64>,
    phi: Vec<ExtVector>,
}

fn ext_table_size(dim: Dim) -> Result<usize> {
    dim.ext_space_size()
        .filter(|&s| s <= TABLE_LIMIT)
        .ok_or_else(|| err!(TooLarge, "V' at {dim} is too large to tabulate"))
}

impl PreDeltaEncoding {
    /// `lambda` holds doubled values in Z_{d'} and both tables are indexed by [`ExtVector::index`].
    pub fn new(dim: Dim, lambda: Vec<u64>, phi: Vec<ExtVector>) -> Result<Self> {
        let size = ext_table_size(dim)?;
        if lambda.len() != size || phi.len() != size || phi.iter().any(|w| w.dim() != dim) {
            bail!(DimensionMismatch, "pre-Δ tables over {dim} need {size} entries");
        }
        let lambda = lambda.into_iter().map(|l| l % dim.d_ext()).collect();
        Ok(PreDeltaEncoding { dim, lambda, phi })
    }

    /// Tabulate a linear φ with the given λ table.
    pub fn from_linear(dim: Dim, lambda: Vec<u64>, phi: &Matrix) -> Result<Self> {
        let size = ext_table_size(dim)?;
        let table = (0..size).map(|i| phi.apply_ext(&ExtVector::from_index(dim, i))).collect();
        Self::new(dim, lambda, table)
    }

    pub fn from_delta(de: &DeltaEncoding) -> Result<Self> {
        let size = ext_table_size(de.dim)?;
        let lambda = (0..size).map(|i| 2 * de.lambda_of(&ExtVector::from_index(de.dim, i))).collect();
        Self::from_linear(de.dim, lambda, &de.phi)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn lambda(&self) -> &[u64] {
        &self.lambda
    }

    pub fn phi(&self) -> &[ExtVector] {
        &self.phi
    }

    /// The canonical form of τ^{λv}Δ_{φv}.
    pub fn image(&self, v: &ExtVector) -> CanonicalPauli {
        let i = v.index();
        canonicalize(&GeneralPauli::new(self.lambda[i] as i64, self.phi[i].clone()))
    }

    /// Right-definite iff equal operators have equal images: since
    /// Δ_{v+dε} = (−1)^{⟨ε⟩_v}Δ_v, the image of v+dε must be that sign times the image of v.
    pub fn is_right_definite(&self) -> bool {
        let dim = self.dim;
        Vector::all(dim).all(|v| {
            let base = include(&v);
            let image = self.image(&base);
            EpsVector::all(dim).all(|eps| {
                let w = base.add(&eps.times_d());
                let sign = eps_bracket(&base, &w).expect("congruent by construction");
                self.image(&w) == image.times_tau((dim.d() * sign as u64) as i64)
            })
        })
    }

    /// Both tables denote the same relation on operators.
    pub fn same_relation(&self, other: &PreDeltaEncoding) -> bool {
        self.dim == other.dim
            && ExtVector::all(self.dim).all(|v| self.image(&v) == other.image(&v))
    }
}

/// Right-definiteness of Δ_v ↦ ζ^{λv}Δ_{φv} for a linear φ over Z_{d'}, by checking every pair.
pub fn check_right_definite(dim: Dim, lambda: &[u64], phi: &Matrix) -> Result<bool> {
    let size = ext_table_size(dim)?;
    if checked_pow(2, dim.len()).and_then(|e| e.checked_mul(size)).is_none_or(|t| t > TABLE_LIMIT) {
        bail!(TooLarge, "right-definiteness check at {dim} is too large");
    }
    Ok(PreDeltaEncoding::from_linear(dim, lambda.to_vec(), phi)?.is_right_definite())
}

/// The λ-free criterion ⟨ε⟩_v = ⟨φε⟩_{φv} for linear φ.
pub fn rd_condition(dim: Dim, phi: &Matrix) -> Result<bool> {
    ext_table_size(dim)?;
    Ok(ExtVector::all(dim).all(|v| {
        let fv = phi.apply_ext(&v);
        EpsVector::all(dim).all(|eps| {
            let w = v.add(&eps.times_d());
            let fw = phi.apply_ext(&w);
            match eps_bracket(&fv, &fw) {
                Ok(rhs) => eps_bracket(&v, &w).expect("congruent by construction") == rhs,
                Err(_) => false,
            }
        })
    }))
}

/// Extend λ₀ (doubled, indexed by [`Vector::index`]) to V' by
/// λ(v+dε) = λ₀v + (d/2)(⟨ε⟩_v + ⟨δ⟩_{φv}) where φ(v+dε) = φv + dδ.
pub fn extend_lambda(dim: Dim, lambda0: &[u64], phi: &[ExtVector]) -> Result<Vec<u64>> {
    let size = ext_table_size(dim)?;
    if phi.len() != size || Some(lambda0.len()) != dim.space_size() {
        bail!(DimensionMismatch, "tables do not match {dim}");
    }
    let mut out = Vec::with_capacity(size);
    for i in 0..size {
        let w = ExtVector::from_index(dim, i);
        let v = cast(&w);
        let base = include(&v);
        let eps = eps_bracket(&base, &w)?;
        let delta = eps_bracket(&phi[base.index()], &phi[i])?;
        let half = dim.d() * ((eps + delta) % 2) as u64;
        out.push(dim.mod_ext(lambda0[v.index()] as i128 + half as i128));
    }
    Ok(out)
}

/// Replace φ₀ by the linear map agreeing with it on the basis and absorb the
/// difference into λ, leaving the relation unchanged.
pub fn linearize(dim: Dim, lambda0: &[u64], phi0: &[ExtVector]) -> Result<(Vec<u64>, Matrix)> {
    let size = ext_table_size(dim)?;
    if phi0.len() != size || lambda0.len() != size {
        bail!(DimensionMismatch, "tables do not match {dim}");
    }
    let k = dim.len();
    let mut phi = Matrix::zeros(dim.d_ext(), k, k);
    for c in 0..k {
        let image = phi0[ExtVector::basis(dim, c).index()].to_layout(crate::Layout::Separated);
        for (r, &x) in image.entries().iter().enumerate() {
            phi.set(r, c, x as i128);
        }
    }
    let mut lambda = Vec::with_capacity(size);
    for i in 0..size {
        let v = ExtVector::from_index(dim, i);
        let linear = phi.apply_ext(&v);
        let bit = eps_bracket(&linear, &phi0[i])
            .map_err(|_| err!(NotLinearModD, "φ₀ reduced mod d is not linear at {v}"))?;
        lambda.push(dim.mod_ext(lambda0[i] as i128 + (dim.d() * bit as u64) as i128));
    }
    Ok((lambda, phi))
}

/// A random element of Sp(Z_d^{2n}): per-qudit Fourier maps interleaved with transvections v ↦ v + aω(u,v)u.
pub fn random_symplectic<R: Rng + ?Sized>(dim: Dim, rng: &mut R) -> Matrix {
    let k = dim.len();
    let mut m = Matrix::identity(dim.d(), k);
    for _ in 0..3 * k + 2 {
        let u = Vector::from_index(dim, rng.random_range(0..dim.space_size().unwrap_or(usize::MAX)));
        let a = rng.random_range(0..dim.d()) as i64;
        m = transvection(&u, a).mul(&m);
        if rng.random_bool(0.5) {
            m = fourier(dim, rng.random_range(0..dim.n())).mul(&m);
        }
    }
    m
}

/// The matrix of v ↦ v + aω(u,v)u.
pub fn transvection(u: &Vector, a: i64) -> Matrix {
    let dim = u.dim();
    let k = dim.len();
    let u = u.to_layout(crate::Layout::Separated);
    let mut m = Matrix::identity(dim.d(), k);
    for c in 0..k {
        let coeff = a as i128 * omega(&u, &Vector::basis(dim, c)).expect("same dim") as i128;
        for r in 0..k {
            m.set(r, c, m.get(r, c) as i128 + coeff * u.entries()[r] as i128);
        }
    }
    m
}

/// X_i ↦ Z_i, Z_i ↦ −X_i on qudit `i`, identity elsewhere.
pub fn fourier(dim: Dim, i: usize) -> Matrix {
    let n = dim.n();
    let mut m = Matrix::identity(dim.d(), 2 * n);
    m.set(i, i, 0);
    m.set(n + i, n + i, 0);
    m.set(n + i, i, 1);
    m.set(i, n + i, -1);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cnot_psi() -> Matrix {
        // separated order (x1,x2,z1,z2): X1 ↦ X1X2, X2 ↦ X2, Z1 ↦ Z1, Z2 ↦ Z1Z2
        Matrix::from_rows(2, &[
            vec![1, 0, 0, 0],
            vec![1, 1, 0, 0],
            vec![0, 0, 1, 1],
            vec![0, 0, 0, 1],
        ])
        .unwrap()
    }

    #[test]
    fn cnot_naive_lift_fails_and_solved_lift_passes() {
        let psi = cnot_psi();
        assert!(is_symplectic(&psi, 2));
        assert!(!is_symplectic(&psi.include_mod(4), 4));
        let phi = lift_symplectic(&psi).unwrap();
        assert!(is_symplectic(&phi, 4));
        assert_eq!(phi.reduce_mod(2), psi);
    }

    #[test]
    fn odd_and_identity_lifts_are_copies() {
        let f = fourier(Dim::new(3, 1).unwrap(), 0);
        assert_eq!(lift_symplectic(&f).unwrap(), f);
        let id = Matrix::identity(4, 4);
        assert_eq!(lift_symplectic(&id).unwrap(), Matrix::identity(8, 4));
    }

    #[test]
    fn lift_rejects_non_symplectic() {
        let bad = Matrix::from_rows(2, &[vec![1, 1], vec![0, 0]]).unwrap();
        assert_eq!(lift_symplectic(&bad).unwrap_err().kind, crate::ErrorKind::NotSymplectic);
    }

    #[test]
    fn fourier_delta_encoding() {
        let dim = Dim::new(2, 1).unwrap();
        let h = CondensedEncoding::new(dim, &[0, 0], Matrix::from_rows(2, &[vec![0, 1], vec![1, 0]]).unwrap()).unwrap();
        let de = delta_from_condensed(&h);
        assert_eq!(de.lambda(), &[0, 0]);
        assert!(is_symplectic(de.phi(), 4));
        assert_eq!(condensed_from_delta(&de).unwrap(), h);
    }

    #[test]
    fn identity_phi_is_right_definite_and_extends_to_zero() {
        let dim = Dim::new(2, 1).unwrap();
        let id = Matrix::identity(4, 2);
        assert!(check_right_definite(dim, &[0; 16], &id).unwrap());
        assert!(rd_condition(dim, &id).unwrap());
        let table: Vec<ExtVector> = ExtVector::all(dim).collect();
        assert_eq!(extend_lambda(dim, &[0; 4], &table).unwrap(), vec![0; 16]);
    }

    #[test]
    fn transvections_and_fourier_are_symplectic() {
        let dim = Dim::new(4, 2).unwrap();
        for i in (0..256).step_by(7) {
            assert!(transvection(&Vector::from_index(dim, i), 3).preserves_omega());
        }
        assert!(fourier(dim, 1).preserves_omega());
    }
}
