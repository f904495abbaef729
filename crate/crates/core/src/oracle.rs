//! Dense-matrix ground truth: Pauli and gate unitaries, Pauli extraction
//! from conjugation, and encoding verification. Qudit 1 is the most
//! significant tensor factor.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, DMatrix};

use crate::arith::{Dim, Vector};
use crate::encoding::{evaluate, CondensedEncoding};
use crate::error::{bail, err, Error, Result};
use crate::pauli::{CanonicalPauli, CondensedPauli};

pub type C64 = Complex<f64>;

/// Unitarity tolerance at construction.
pub const CONSTRUCTION_TOL: f64 = 1e-9;
/// Tolerance when matching a conjugated matrix against a Pauli.
pub const MATCH_TOL: f64 = 1e-6;
/// Largest supported Hilbert-space dimension d^n.
pub const MAX_SIZE: usize = 1 << 10;

#[derive(Clone, Debug)]
pub struct DenseUnitary {
    dim: Dim,
    m: DMatrix<C64>,
}

fn hilbert_size(dim: Dim) -> Result<usize> {
    crate::arith::checked_pow(dim.d(), dim.n())
        .filter(|&s| s <= MAX_SIZE)
        .ok_or_else(|| err!(TooLarge, "d^n exceeds {MAX_SIZE} at {dim}"))
}

fn max_norm(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// e^{2πi k/m}.
fn root(k: u64, m: u64) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)
}

/// Nearest k with e^{2πi k/m} ≈ z/|z|.
fn nearest_root(z: C64, m: u64) -> u64 {
    let turns = z.arg() / (2.0 * PI) * m as f64;
    (turns.round() as i64).rem_euclid(m as i64) as u64
}

/// τ^w; for odd d, τ = ζ^{(d+1)/2}.
fn tau(dim: Dim, w: u64) -> C64 {
    if dim.is_even() {
        root(w, dim.d_ext())
    } else {
        root(w * dim.d().div_ceil(2) % dim.d(), dim.d())
    }
}

/// Nearest w with τ^w ≈ z/|z|.
fn nearest_tau(dim: Dim, z: C64) -> u64 {
    if dim.is_even() {
        nearest_root(z, dim.d_ext())
    } else {
        // ζ^k = τ^{2k}
        2 * nearest_root(z, dim.d()) % dim.d()
    }
}

impl DenseUnitary {
    pub fn new(dim: Dim, m: DMatrix<C64>) -> Result<Self> {
        let size = hilbert_size(dim)?;
        if m.nrows() != size || m.ncols() != size {
            bail!(DimensionMismatch, "expected a {size}×{size} matrix for {dim}");
        }
        let defect = m.adjoint() * &m - DMatrix::identity(size, size);
        if max_norm(&defect) > CONSTRUCTION_TOL {
            bail!(InvariantViolation, "matrix is not unitary within {CONSTRUCTION_TOL}");
        }
        Ok(DenseUnitary { dim, m })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn mul(&self, other: &DenseUnitary) -> Result<DenseUnitary> {
        if self.dim != other.dim {
            bail!(DimensionMismatch, "unitaries act on {} and {}", self.dim, other.dim);
        }
        Ok(DenseUnitary { dim: self.dim, m: &self.m * &other.m })
    }

    pub fn adjoint(&self) -> DenseUnitary {
        DenseUnitary { dim: self.dim, m: self.m.adjoint() }
    }

    /// U P U†.
    pub fn conjugate(&self, p: &DenseUnitary) -> Result<DenseUnitary> {
        self.mul(p)?.mul(&self.adjoint())
    }

    /// ‖self − other‖_max.
    pub fn distance(&self, other: &DenseUnitary) -> f64 {
        max_norm(&(&self.m - &other.m))
    }
}

fn digits(dim: Dim, mut idx: usize) -> Vec<u64> {
    let d = dim.d() as usize;
    let mut out = vec![0; dim.n()];
    for slot in out.iter_mut().rev() {
        *slot = (idx % d) as u64;
        idx /= d;
    }
    out
}

fn from_digits(dim: Dim, r: &[u64]) -> usize {
    r.iter().fold(0usize, |acc, &x| acc * dim.d() as usize + x as usize)
}

/// τ^w X^q Z^p as a dense matrix: |r⟩ ↦ τ^w ζ^{p·r} |r+q⟩.
pub fn pauli_matrix(p: &CanonicalPauli) -> Result<DenseUnitary> {
    let dim = p.dim();
    let size = hilbert_size(dim)?;
    let (d, n) = (dim.d(), dim.n());
    let v = p.v();
    let mut m = DMatrix::zeros(size, size);
    for col in 0..size {
        let r = digits(dim, col);
        let target: Vec<u64> = (0..n).map(|i| (r[i] + v.x(i)) % d).collect();
        let pr: u64 = (0..n).map(|i| v.z(i) * r[i]).sum::<u64>() % d;
        let phase = tau(dim, p.w()) * root(pr, d);
        m[(from_digits(dim, &target), col)] = phase;
    }
    Ok(DenseUnitary { dim, m })
}

pub fn condensed_matrix(p: &CondensedPauli) -> Result<DenseUnitary> {
    pauli_matrix(&CanonicalPauli::from(p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gate {
    Fourier,
    S,
    Cnot,
    Hadamard,
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Gate> {
        match s.to_ascii_lowercase().as_str() {
            "fourier" | "f" => Ok(Gate::Fourier),
            "s" | "phase" => Ok(Gate::S),
            "cnot" | "cx" => Ok(Gate::Cnot),
            "hadamard" | "h" => Ok(Gate::Hadamard),
            _ => bail!(UnsupportedGate, "unknown gate {s:?}"),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gate::Fourier => "fourier",
            Gate::S => "s",
            Gate::Cnot => "cnot",
            Gate::Hadamard => "hadamard",
        })
    }
}

impl Gate {
    /// Number of qudits the gate acts on.
    pub fn arity(self) -> usize {
        if self == Gate::Cnot {
            2
        } else {
            1
        }
    }
}

/// The unitary of a named gate over qudit dimension `d`.
pub fn gate_matrix(gate: Gate, d: u64) -> Result<DenseUnitary> {
    if gate != Gate::Fourier && d != 2 {
        bail!(UnsupportedGate, "{gate} is only defined for qubits, not d = {d}");
    }
    let dim = Dim::new(d, gate.arity())?;
    let c = |re: f64, im: f64| C64::new(re, im);
    let m = match gate {
        Gate::Fourier => {
            let scale = 1.0 / (d as f64).sqrt();
            DMatrix::from_fn(d as usize, d as usize, |j, k| root((j * k) as u64 % d, d) * scale)
        }
        Gate::S => DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]),
        Gate::Hadamard => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            DMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)])
        }
        Gate::Cnot => DMatrix::from_fn(4, 4, |row, col| {
            let (a, b) = (col / 2, col % 2);
            if row == 2 * a + (a ^ b) {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        }),
    };
    DenseUnitary::new(dim, m)
}

/// Read U P U† back as a condensed Pauli: q from the support of column 0,
/// p from phase ratios along basis columns, and the overall phase snapped to
/// the nearest power of τ.
pub fn extract_pauli(u: &DenseUnitary, p: &CondensedPauli) -> Result<CondensedPauli> {
    if u.dim != p.dim() {
        bail!(DimensionMismatch, "unitary acts on {} but Pauli lives in {}", u.dim, p.dim());
    }
    let dim = u.dim;
    let image = u.conjugate(&condensed_matrix(p)?)?;
    let m = &image.m;
    let size = m.nrows();
    let support = |col: usize| -> Result<usize> {
        let row = (0..size).max_by(|&a, &b| m[(a, col)].norm().total_cmp(&m[(b, col)].norm())).unwrap();
        if (m[(row, col)].norm() - 1.0).abs() > MATCH_TOL {
            bail!(NotAPauli, "conjugate has no unit entry in column {col}");
        }
        Ok(row)
    };
    let n = dim.n();
    let row0 = support(0)?;
    let q = digits(dim, row0);
    let base = m[(row0, 0)];
    let mut p_part = vec![0i64; n];
    for (i, slot) in p_part.iter_mut().enumerate() {
        let mut r = vec![0u64; n];
        r[i] = 1;
        let col = from_digits(dim, &r);
        let row = support(col)?;
        *slot = nearest_root(m[(row, col)] / base, dim.d()) as i64;
    }
    let w = nearest_tau(dim, base);
    let qv: Vec<i64> = q.iter().map(|&x| x as i64).collect();
    let candidate = CanonicalPauli::new(w as i64, Vector::from_xz(dim, &qv, &p_part)?);
    let dist = image.distance(&pauli_matrix(&candidate)?);
    if dist > MATCH_TOL {
        bail!(NotAPauli, "conjugate is {dist:.2e} away from the nearest Pauli {candidate}");
    }
    CondensedPauli::try_from_canonical(&candidate)
        .ok_or_else(|| err!(NotAPauli, "conjugate {candidate} left the condensed group"))
}

/// Read (μ,ψ) off the conjugates of the basis Paulis.
pub fn encoding_from_unitary(u: &DenseUnitary) -> Result<CondensedEncoding> {
    let dim = u.dim;
    let k = dim.len();
    let mut mu = Vec::with_capacity(k);
    let mut psi = crate::arith::Matrix::zeros(dim.d(), k, k);
    for c in 0..k {
        let image = extract_pauli(u, &CondensedPauli::new(0, Vector::basis(dim, c)))
            .map_err(|e| err!(NotClifford, "{}", e.message))?;
        mu.push(image.t() as i64);
        for (r, &x) in image.v().to_layout(crate::Layout::Separated).entries().iter().enumerate() {
            psi.set(r, c, x as i128);
        }
    }
    CondensedEncoding::new(dim, &mu, psi).map_err(|e| err!(NotClifford, "{}", e.message))
}

/// Compare γ(Δ_v) against U Δ_v U† for every v ∈ V.
pub fn verify_encoding(enc: &CondensedEncoding, u: &DenseUnitary, tol: f64) -> Result<bool> {
    if enc.dim() != u.dim {
        bail!(DimensionMismatch, "encoding over {} but unitary over {}", enc.dim(), u.dim);
    }
    let dim = enc.dim();
    hilbert_size(dim)?;
    for v in Vector::all(dim) {
        let p = CondensedPauli::new(0, v);
        let expected = condensed_matrix(&evaluate(enc, &p)?)?;
        let actual = u.conjugate(&condensed_matrix(&p)?)?;
        if expected.distance(&actual) > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitaryJson {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

/// A unitary given as `{"re":[[..]],"im":[[..]]}`; n is read off the size.
pub fn read_unitary(src: &str, d: u64) -> Result<DenseUnitary> {
    let file: UnitaryJson = serde_json::from_str(src).map_err(|e| err!(FormatError, "{e}"))?;
    let size = file.re.len();
    if file.im.len() != size || file.re.iter().chain(&file.im).any(|row| row.len() != size) {
        bail!(FormatError, "re and im must be square matrices of the same size");
    }
    let mut n = 0;
    let mut s = 1usize;
    while s < size {
        s = s.saturating_mul(d as usize);
        n += 1;
    }
    if s != size || n == 0 {
        bail!(DimensionMismatch, "a {size}x{size} matrix is not an operator on qudits of dimension {d}");
    }
    let m = DMatrix::from_fn(size, size, |r, c| C64::new(file.re[r][c], file.im[r][c]));
    DenseUnitary::new(Dim::new(d, n)?, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &DMatrix<C64>, b: &DMatrix<C64>) -> bool {
        max_norm(&(a - b)) < 1e-12
    }

    #[test]
    fn qubit_paulis() {
        let dim = Dim::new(2, 1).unwrap();
        let x = condensed_matrix(&CondensedPauli::x(dim, 0)).unwrap();
        let c = |re, im| C64::new(re, im);
        assert!(close(x.matrix(), &DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])));
        let y = condensed_matrix(&CondensedPauli::y(dim, 0)).unwrap();
        assert!(close(y.matrix(), &DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])));
    }

    #[test]
    fn qutrit_z() {
        let dim = Dim::new(3, 1).unwrap();
        let z = condensed_matrix(&CondensedPauli::z(dim, 0)).unwrap();
        let expected = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![root(0, 3), root(1, 3), root(2, 3)]));
        assert!(close(z.matrix(), &expected));
    }

    #[test]
    fn extraction_examples() {
        let dim = Dim::new(2, 1).unwrap();
        let h = gate_matrix(Gate::Hadamard, 2).unwrap();
        assert_eq!(extract_pauli(&h, &CondensedPauli::x(dim, 0)).unwrap(), CondensedPauli::z(dim, 0));
        let s = gate_matrix(Gate::S, 2).unwrap();
        assert_eq!(extract_pauli(&s, &CondensedPauli::y(dim, 0)).unwrap(), CondensedPauli::x(dim, 0).times_zeta(1));
    }

    #[test]
    fn unsupported_gates() {
        assert_eq!(gate_matrix(Gate::S, 3).unwrap_err().kind, crate::ErrorKind::UnsupportedGate);
        assert_eq!("toffoli".parse::<Gate>().unwrap_err().kind, crate::ErrorKind::UnsupportedGate);
        assert!(gate_matrix(Gate::Fourier, 5).is_ok());
    }

    #[test]
    fn too_large() {
        let p = CanonicalPauli::identity(Dim::new(2, 11).unwrap());
        assert_eq!(pauli_matrix(&p).unwrap_err().kind, crate::ErrorKind::TooLarge);
    }

    #[test]
    fn unitary_json() {
        let h = read_unitary(r#"{"re":[[0.7071067811865476,0.7071067811865476],[0.7071067811865476,-0.7071067811865476]],"im":[[0,0],[0,0]]}"#, 2).unwrap();
        assert!(h.distance(&gate_matrix(Gate::Hadamard, 2).unwrap()) < 1e-12);
        assert_eq!(read_unitary(r#"{"re":[[1,0,0]],"im":[[0]]}"#, 2).unwrap_err().kind, crate::ErrorKind::FormatError);
        let three = r#"{"re":[[1,0,0],[0,1,0],[0,0,1]],"im":[[0,0,0],[0,0,0],[0,0,0]]}"#;
        assert_eq!(read_unitary(three, 2).unwrap_err().kind, crate::ErrorKind::DimensionMismatch);
        assert_eq!(read_unitary(three, 3).unwrap().dim(), Dim::new(3, 1).unwrap());
    }
}
