//! Exact arithmetic in Z_d and Z_{d'}, phase-space vectors, the symplectic
//! forms, and the sign gadget comparing two lifts of the same vector.
//!
//! Half-integer phases are stored doubled: a ζ-exponent `t` is the
//! τ-exponent `2t` in Z_{d'}.

use std::fmt;

use crate::error::{bail, Result};

/// Largest supported qudit dimension.
pub const MAX_D: u64 = 1 << 16;

/// Qudit dimension `d` and register width `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dim {
    d: u64,
    n: usize,
}

impl Dim {
    pub fn new(d: u64, n: usize) -> Result<Dim> {
        if d < 2 {
            bail!(DimensionMismatch, "qudit dimension must be at least 2, got {d}");
        }
        if d > MAX_D {
            bail!(TooLarge, "qudit dimension {d} exceeds {MAX_D}");
        }
        if n == 0 {
            bail!(DimensionMismatch, "register width must be at least 1");
        }
        Ok(Dim { d, n })
    }

    pub fn d(self) -> u64 {
        self.d
    }

    /// d' = 2d for even d, d otherwise.
    pub fn d_ext(self) -> u64 {
        if self.is_even() {
            2 * self.d
        } else {
            self.d
        }
    }

    pub fn n(self) -> usize {
        self.n
    }

    /// Length 2n of a phase-space vector.
    pub fn len(self) -> usize {
        2 * self.n
    }

    pub fn is_even(self) -> bool {
        self.d.is_multiple_of(2)
    }

    pub fn with_n(self, n: usize) -> Result<Dim> {
        Dim::new(self.d, n)
    }

    /// (d/2)·bit as an element of Z_d; zero for odd d.
    pub fn half_d(self, bit: u8) -> u64 {
        if self.is_even() && bit & 1 == 1 {
            self.d / 2
        } else {
            0
        }
    }

    /// Reduction Z_{d'} -> Z_d.
    pub fn cast(self, t: u64) -> u64 {
        t % self.d
    }

    /// The representative in [0,d) viewed in Z_{d'}.
    pub fn include(self, t: u64) -> u64 {
        t % self.d
    }

    /// 0 on [0,d), 1 on [d,d').
    pub fn sgn(self, t: u64) -> u8 {
        u8::from(t % self.d_ext() >= self.d)
    }

    pub fn modd(self, x: i128) -> u64 {
        reduce(x, self.d)
    }

    pub fn mod_ext(self, x: i128) -> u64 {
        reduce(x, self.d_ext())
    }

    /// Number of vectors in Z_d^{2n}, if it fits in usize.
    pub fn space_size(self) -> Option<usize> {
        checked_pow(self.d, self.len())
    }

    /// Number of vectors in Z_{d'}^{2n}, if it fits in usize.
    pub fn ext_space_size(self) -> Option<usize> {
        checked_pow(self.d_ext(), self.len())
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(d={}, n={})", self.d, self.n)
    }
}

pub(crate) fn checked_pow(base: u64, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(usize::try_from(base).ok()?)?;
    }
    Some(acc)
}

/// Canonical representative of `x` in [0, m).
pub fn reduce(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

/// Modular inverse of `a` mod `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| reduce(t0, m))
}

/// Entry order of a phase-space vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Layout {
    /// [x_1..x_n ; z_1..z_n]
    #[default]
    Separated,
    /// x_1 z_1 .. x_n z_n
    Interlaced,
}

impl Layout {
    fn slot(self, n: usize, i: usize, z: bool) -> usize {
        match self {
            Layout::Separated => i + if z { n } else { 0 },
            Layout::Interlaced => 2 * i + usize::from(z),
        }
    }
}

macro_rules! phase_vector {
    ($(#[$doc:meta])* $name:ident, $modulus:ident) => {
        $(#[$doc])*
        #[derive(Clone, Debug, PartialEq, Eq, Hash)]
        pub struct $name {
            dim: Dim,
            layout: Layout,
            e: Vec<u64>,
        }

        impl $name {
            /// Separated-layout vector from signed entries.
            pub fn new(dim: Dim, entries: &[i64]) -> Result<Self> {
                Self::with_layout(dim, Layout::Separated, entries)
            }

            pub fn with_layout(dim: Dim, layout: Layout, entries: &[i64]) -> Result<Self> {
                if entries.len() != dim.len() {
                    bail!(
                        DimensionMismatch,
                        "expected {} entries, got {}",
                        dim.len(),
                        entries.len()
                    );
                }
                let m = dim.$modulus();
                let e = entries.iter().map(|&x| reduce(x as i128, m)).collect();
                Ok($name { dim, layout, e })
            }

            pub(crate) fn from_raw(dim: Dim, layout: Layout, e: Vec<u64>) -> Self {
                debug_assert_eq!(e.len(), dim.len());
                let m = dim.$modulus();
                $name { dim, layout, e: e.into_iter().map(|x| x % m).collect() }
            }

            pub fn from_xz(dim: Dim, x: &[i64], z: &[i64]) -> Result<Self> {
                if x.len() != dim.n() || z.len() != dim.n() {
                    bail!(DimensionMismatch, "x and z parts must have length {}", dim.n());
                }
                let mut all = x.to_vec();
                all.extend_from_slice(z);
                Self::new(dim, &all)
            }

            pub fn zero(dim: Dim) -> Self {
                $name { dim, layout: Layout::Separated, e: vec![0; dim.len()] }
            }

            /// Standard basis vector `k` in separated order: k < n is X_k, k ≥ n is Z_{k-n}.
            pub fn basis(dim: Dim, k: usize) -> Self {
                let mut v = Self::zero(dim);
                v.e[k] = 1;
                v
            }

            pub fn dim(&self) -> Dim {
                self.dim
            }

            pub fn modulus(&self) -> u64 {
                self.dim.$modulus()
            }

            pub fn layout(&self) -> Layout {
                self.layout
            }

            pub fn entries(&self) -> &[u64] {
                &self.e
            }

            pub fn x(&self, i: usize) -> u64 {
                self.e[self.layout.slot(self.dim.n(), i, false)]
            }

            pub fn z(&self, i: usize) -> u64 {
                self.e[self.layout.slot(self.dim.n(), i, true)]
            }

            pub fn is_zero(&self) -> bool {
                self.e.iter().all(|&x| x == 0)
            }

            pub fn to_layout(&self, target: Layout) -> Self {
                if target == self.layout {
                    return self.clone();
                }
                let n = self.dim.n();
                let mut e = vec![0; self.dim.len()];
                for i in 0..n {
                    e[target.slot(n, i, false)] = self.x(i);
                    e[target.slot(n, i, true)] = self.z(i);
                }
                $name { dim: self.dim, layout: target, e }
            }

            fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> i128) -> Self {
                assert_eq!(self.dim, other.dim, "dimension mismatch");
                let other = other.to_layout(self.layout);
                let m = self.modulus();
                let e = self.e.iter().zip(&other.e).map(|(&a, &b)| reduce(f(a, b), m)).collect();
                $name { dim: self.dim, layout: self.layout, e }
            }

            pub fn add(&self, other: &Self) -> Self {
                self.zip(other, |a, b| a as i128 + b as i128)
            }

            pub fn sub(&self, other: &Self) -> Self {
                self.zip(other, |a, b| a as i128 - b as i128)
            }

            pub fn neg(&self) -> Self {
                self.scale(-1)
            }

            pub fn scale(&self, c: i64) -> Self {
                let m = self.modulus();
                let e = self.e.iter().map(|&a| reduce(a as i128 * c as i128, m)).collect();
                $name { dim: self.dim, layout: self.layout, e }
            }

            /// Mixed-radix index of the separated form, used for exhaustive tables.
            pub fn index(&self) -> usize {
                let s = self.to_layout(Layout::Separated);
                let m = self.modulus() as usize;
                s.e.iter().rev().fold(0usize, |acc, &x| acc * m + x as usize)
            }

            pub fn from_index(dim: Dim, mut idx: usize) -> Self {
                let m = dim.$modulus() as usize;
                let mut e = vec![0; dim.len()];
                for slot in e.iter_mut() {
                    *slot = (idx % m) as u64;
                    idx /= m;
                }
                $name { dim, layout: Layout::Separated, e }
            }

            /// Every vector of the space, in index order.
            pub fn all(dim: Dim) -> impl Iterator<Item = Self> {
                let total = checked_pow(dim.$modulus(), dim.len()).expect("space too large");
                (0..total).map(move |i| Self::from_index(dim, i))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "[")?;
                for (i, x) in self.e.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
        }
    };
}

phase_vector!(
    /// Element of V = Z_d^{2n}.
    Vector,
    d
);
phase_vector!(
    /// Element of V' = Z_{d'}^{2n}.
    ExtVector,
    d_ext
);

/// Element of Z_{d'/d}^{2n}; all zero when d is odd.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsVector {
    dim: Dim,
    e: Vec<u8>,
}

impl EpsVector {
    pub fn new(dim: Dim, bits: &[u8]) -> Result<Self> {
        if bits.len() != dim.len() {
            bail!(DimensionMismatch, "expected {} entries, got {}", dim.len(), bits.len());
        }
        let keep = u8::from(dim.is_even());
        Ok(EpsVector { dim, e: bits.iter().map(|b| b & keep).collect() })
    }

    pub fn entries(&self) -> &[u8] {
        &self.e
    }

    /// All ε in separated order; a single zero vector when d is odd.
    pub fn all(dim: Dim) -> impl Iterator<Item = EpsVector> {
        let count = if dim.is_even() { 1usize << dim.len() } else { 1 };
        (0..count).map(move |mask| EpsVector {
            dim,
            e: (0..dim.len()).map(|k| ((mask >> k) & 1) as u8).collect(),
        })
    }

    /// d·ε as an element of V'.
    pub fn times_d(&self) -> ExtVector {
        let d = self.dim.d();
        ExtVector::from_raw(self.dim, Layout::Separated, self.e.iter().map(|&b| b as u64 * d).collect())
    }

    pub fn as_ext(&self) -> ExtVector {
        ExtVector::from_raw(self.dim, Layout::Separated, self.e.iter().map(|&b| b as u64).collect())
    }
}

/// Entrywise reduction V' -> V (a homomorphism).
pub fn cast(v: &ExtVector) -> Vector {
    let d = v.dim().d();
    Vector::from_raw(v.dim(), v.layout(), v.entries().iter().map(|&x| x % d).collect())
}

/// Entrywise inclusion V -> V' of representatives in [0,d) (not a homomorphism).
pub fn include(v: &Vector) -> ExtVector {
    ExtVector::from_raw(v.dim(), v.layout(), v.entries().to_vec())
}

/// Permute entries into `target` layout.
pub fn relayout(v: &Vector, target: Layout) -> Vector {
    v.to_layout(target)
}

/// Scalar sign: 0 on [0,d), 1 on [d,d').
pub fn sgn(dim: Dim, t: u64) -> u8 {
    dim.sgn(t)
}

/// Vector sign, the bracket between `include(cast(v))` and `v`.
pub fn sgn_vec(v: &ExtVector) -> u8 {
    let base = include(&cast(v));
    eps_bracket(&base, v).expect("a vector is congruent to its own reduction")
}

fn check_pair(a_dim: Dim, b_dim: Dim, a_layout: Layout, b_layout: Layout) -> Result<()> {
    if a_dim != b_dim {
        bail!(DimensionMismatch, "vectors live in {a_dim} and {b_dim}");
    }
    if a_layout != b_layout {
        bail!(DimensionMismatch, "layouts differ: {a_layout:?} vs {b_layout:?}");
    }
    Ok(())
}

/// ⟨ε⟩_{v1,v2} for v2 = v1 + dε, i.e. q̄1·ε_p + p̄1·ε_q mod 2.
pub fn eps_bracket(v1: &ExtVector, v2: &ExtVector) -> Result<u8> {
    check_pair(v1.dim(), v2.dim(), v1.layout(), v2.layout())?;
    let dim = v1.dim();
    let d = dim.d();
    let diff = v2.sub(v1);
    if diff.entries().iter().any(|&x| x % d != 0) {
        bail!(NotCongruent, "{v1} and {v2} differ by a non-multiple of d={d}");
    }
    if !dim.is_even() {
        return Ok(0);
    }
    let mut acc = 0u64;
    for i in 0..dim.n() {
        let eq = diff.x(i) / d;
        let ep = diff.z(i) / d;
        acc += (v1.x(i) % d) * ep + (v1.z(i) % d) * eq;
    }
    Ok((acc % 2) as u8)
}

fn omega_raw(n: usize, m: u64, u: (&[u64], Layout), v: (&[u64], Layout)) -> u64 {
    let mut acc: i128 = 0;
    for i in 0..n {
        let (ux, uz) = (u.0[u.1.slot(n, i, false)], u.0[u.1.slot(n, i, true)]);
        let (vx, vz) = (v.0[v.1.slot(n, i, false)], v.0[v.1.slot(n, i, true)]);
        acc += uz as i128 * vx as i128 - vz as i128 * ux as i128;
    }
    reduce(acc, m)
}

/// ω(u,v) = p_u·q_v − p_v·q_u over Z_d.
pub fn omega(u: &Vector, v: &Vector) -> Result<u64> {
    check_pair(u.dim(), v.dim(), u.layout(), v.layout())?;
    Ok(omega_raw(u.dim().n(), u.dim().d(), (u.entries(), u.layout()), (v.entries(), v.layout())))
}

/// ω' over Z_{d'}.
pub fn omega_ext(u: &ExtVector, v: &ExtVector) -> Result<u64> {
    check_pair(u.dim(), v.dim(), u.layout(), v.layout())?;
    Ok(omega_raw(u.dim().n(), u.dim().d_ext(), (u.entries(), u.layout()), (v.entries(), v.layout())))
}

/// s(u,v) = (1/d)(ω'(u̲,v̲) − include(ω(u,v))).
pub fn s_sign(u: &Vector, v: &Vector) -> Result<u8> {
    let w = omega_ext(&include(u), &include(v))?;
    Ok(u.dim().sgn(w))
}

/// Dense matrix over Z_m, row-major. Columns of a phase-space map are images
/// of the separated standard basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    e: Vec<u64>,
}

impl Matrix {
    pub fn new(modulus: u64, rows: usize, cols: usize, entries: &[i64]) -> Result<Matrix> {
        if entries.len() != rows * cols {
            bail!(DimensionMismatch, "expected {} entries, got {}", rows * cols, entries.len());
        }
        let e = entries.iter().map(|&x| reduce(x as i128, modulus)).collect();
        Ok(Matrix { modulus, rows, cols, e })
    }

    /// Square matrix from rows of signed entries.
    pub fn from_rows(modulus: u64, rows: &[Vec<i64>]) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            bail!(DimensionMismatch, "ragged matrix rows");
        }
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Matrix::new(modulus, r, c, &flat)
    }

    pub(crate) fn from_raw(modulus: u64, rows: usize, cols: usize, e: Vec<u64>) -> Matrix {
        debug_assert_eq!(e.len(), rows * cols);
        Matrix { modulus, rows, cols, e: e.into_iter().map(|x| x % modulus).collect() }
    }

    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Matrix {
        Matrix { modulus, rows, cols, e: vec![0; rows * cols] }
    }

    pub fn identity(modulus: u64, k: usize) -> Matrix {
        let mut m = Matrix::zeros(modulus, k, k);
        for i in 0..k {
            m.e[i * k + i] = 1 % modulus;
        }
        m
    }

    /// Ω with ω(u,v) = uᵀΩv in separated layout: [[0,-I],[I,0]].
    pub fn omega(modulus: u64, n: usize) -> Matrix {
        let mut m = Matrix::zeros(modulus, 2 * n, 2 * n);
        for i in 0..n {
            m.set(i, n + i, modulus as i128 - 1);
            m.set(n + i, i, 1);
        }
        m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.e[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: i128) {
        self.e[r * self.cols + c] = reduce(x, self.modulus);
    }

    pub fn entries(&self) -> &[u64] {
        &self.e
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.e.chunks(self.cols).map(<[u64]>::to_vec).collect()
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.modulus, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.e[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        assert_eq!(self.modulus, other.modulus, "modulus mismatch");
        let m = self.modulus as u128;
        let mut out = Matrix::zeros(self.modulus, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc: u128 = 0;
                for k in 0..self.cols {
                    acc += self.get(r, k) as u128 * other.get(k, c) as u128;
                }
                out.e[r * other.cols + c] = (acc % m) as u64;
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols, self.modulus), (other.rows, other.cols, other.modulus));
        let e = self.e.iter().zip(&other.e).map(|(a, b)| (a + b) % self.modulus).collect();
        Matrix { e, ..*self }
    }

    pub fn scale(&self, c: i64) -> Matrix {
        let e = self.e.iter().map(|&a| reduce(a as i128 * c as i128, self.modulus)).collect();
        Matrix { e, ..*self }
    }

    /// Apply to a raw column of entries.
    pub fn apply_raw(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "shape mismatch");
        let m = self.modulus as u128;
        (0..self.rows)
            .map(|r| {
                let acc: u128 = (0..self.cols).map(|c| self.get(r, c) as u128 * v[c] as u128).sum();
                (acc % m) as u64
            })
            .collect()
    }

    /// Matrix–vector product over Z_d; the matrix modulus must be d.
    pub fn apply(&self, v: &Vector) -> Vector {
        assert_eq!(self.modulus, v.dim().d());
        let s = v.to_layout(Layout::Separated);
        Vector::from_raw(v.dim(), Layout::Separated, self.apply_raw(s.entries()))
    }

    /// Matrix–vector product over Z_{d'}; the matrix modulus must be d'.
    pub fn apply_ext(&self, v: &ExtVector) -> ExtVector {
        assert_eq!(self.modulus, v.dim().d_ext());
        let s = v.to_layout(Layout::Separated);
        ExtVector::from_raw(v.dim(), Layout::Separated, self.apply_raw(s.entries()))
    }

    /// Entrywise reduction to a smaller modulus dividing this one.
    pub fn reduce_mod(&self, modulus: u64) -> Matrix {
        Matrix::from_raw(modulus, self.rows, self.cols, self.e.clone())
    }

    /// Entrywise inclusion of representatives into a larger modulus.
    pub fn include_mod(&self, modulus: u64) -> Matrix {
        Matrix { modulus, rows: self.rows, cols: self.cols, e: self.e.clone() }
    }

    /// MᵀΩM = Ω over this matrix's modulus.
    pub fn preserves_omega(&self) -> bool {
        if self.rows != self.cols || !self.rows.is_multiple_of(2) {
            return false;
        }
        let om = Matrix::omega(self.modulus, self.rows / 2);
        self.transpose().mul(&om).mul(self) == om
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.to_rows().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(d: u64, n: usize) -> Dim {
        Dim::new(d, n).unwrap()
    }

    #[test]
    fn cast_and_include() {
        let d2 = dim(2, 1);
        assert_eq!(d2.cast(3), 1);
        assert_eq!(d2.include(1) + d2.include(1), 2);
        assert_eq!(d2.include((1 + 1) % 2), 0);
        let d3 = dim(3, 1);
        for t in 0..3 {
            assert_eq!(d3.cast(d3.include(t)), t);
            assert_eq!(d3.include(d3.cast(t)), t);
        }
    }

    #[test]
    fn scalar_sign() {
        assert_eq!(sgn(dim(2, 1), 3), 1);
        assert_eq!(sgn(dim(2, 1), 0), 0);
        assert_eq!(sgn(dim(3, 1), 2), 0);
    }

    #[test]
    fn bracket_examples() {
        let d = dim(2, 1);
        let y = ExtVector::new(d, &[1, 1]).unwrap();
        let y3 = ExtVector::new(d, &[3, 1]).unwrap();
        assert_eq!(eps_bracket(&y, &y).unwrap(), 0);
        assert_eq!(eps_bracket(&y, &y3).unwrap(), 1);
        let zero = ExtVector::zero(d);
        let twos = ExtVector::new(d, &[2, 2]).unwrap();
        assert_eq!(eps_bracket(&zero, &twos).unwrap(), 0);
        let bad = ExtVector::new(d, &[2, 1]).unwrap();
        assert_eq!(eps_bracket(&zero, &bad).unwrap_err().kind, crate::ErrorKind::NotCongruent);
    }

    #[test]
    fn omega_examples() {
        let d = dim(2, 1);
        let x = Vector::new(d, &[1, 0]).unwrap();
        let z = Vector::new(d, &[0, 1]).unwrap();
        assert_eq!(omega(&x, &z).unwrap(), 1);
        assert_eq!(omega(&x, &x).unwrap(), 0);
        assert_eq!(omega_ext(&include(&x), &include(&z)).unwrap(), 3);
        assert_eq!(s_sign(&x, &z).unwrap(), 1);
        assert_eq!(s_sign(&x, &x).unwrap(), 0);
        let other = Vector::zero(dim(2, 2));
        assert_eq!(omega(&x, &other).unwrap_err().kind, crate::ErrorKind::DimensionMismatch);
    }

    #[test]
    fn relayout_two_qudits() {
        let d = dim(5, 2);
        let v = Vector::new(d, &[1, 2, 3, 4]).unwrap();
        let w = relayout(&v, Layout::Interlaced);
        assert_eq!(w.entries(), &[1, 3, 2, 4]);
        assert_eq!(relayout(&w, Layout::Separated), v);
        let one = Vector::new(dim(5, 1), &[1, 2]).unwrap();
        assert_eq!(relayout(&one, Layout::Interlaced).entries(), one.entries());
    }

    #[test]
    fn matrix_omega_agrees_with_form() {
        let d = dim(4, 2);
        let om = Matrix::omega(4, 2);
        for u in Vector::all(d).step_by(7) {
            for v in Vector::all(d).step_by(11) {
                let uv = om.apply(&v);
                let dot: u64 = u.entries().iter().zip(uv.entries()).map(|(a, b)| a * b).sum::<u64>() % 4;
                assert_eq!(dot, omega(&u, &v).unwrap());
            }
        }
    }

    #[test]
    fn inverse_mod() {
        assert_eq!(inv_mod(3, 4), Some(3));
        assert_eq!(inv_mod(2, 4), None);
        assert_eq!(inv_mod(2, 5), Some(3));
    }
}
