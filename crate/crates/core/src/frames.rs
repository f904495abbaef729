//! Pauli frames: the table of images of each X_i and Z_i, and a JSON codec.
//!
//! One frame per line:
//! `{"d":2,"n_in":1,"n_out":1,"columns":[{"x":{"t":0,"v":[0,1]},"z":{"t":0,"v":[1,0]}}]}`
//! with `v` in separated [x;z] layout and `t` the condensed phase in Z_d.

use serde::{Deserialize, Serialize};

use crate::arith::{omega, Dim, Matrix, Vector};
use crate::encoding::{compose, invert, CondensedEncoding};
use crate::error::{bail, err, Result};
use crate::lang::program::Clifford;
use crate::lang::syntax::{value_to_vector, vector_to_value, PValue};
use crate::lang::Machine;
use crate::pauli::CondensedPauli;
use crate::Layout;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    d: u64,
    n_in: usize,
    n_out: usize,
    columns: Vec<(CondensedPauli, CondensedPauli)>,
}

impl Frame {
    /// Columns are (image of X_i, image of Z_i) over `n_out` qudits.
    pub fn new(d: u64, n_in: usize, n_out: usize, columns: Vec<(CondensedPauli, CondensedPauli)>) -> Result<Self> {
        let out = Dim::new(d, n_out)?;
        if columns.len() != n_in {
            bail!(DimensionMismatch, "a frame on {n_in} qudits needs {n_in} columns, got {}", columns.len());
        }
        for (px, pz) in &columns {
            if px.dim() != out || pz.dim() != out {
                bail!(DimensionMismatch, "frame entries must live in {out}");
            }
        }
        Ok(Frame { d, n_in, n_out, columns })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn columns(&self) -> &[(CondensedPauli, CondensedPauli)] {
        &self.columns
    }
}

/// ω(Pz_i, Px_i) = 1 on every column, and every cross pair commutes.
pub fn check_frame(f: &Frame) -> bool {
    let one = 1 % f.d;
    let w = |a: &CondensedPauli, b: &CondensedPauli| omega(a.v(), b.v()).expect("same dim");
    for (i, (xi, zi)) in f.columns.iter().enumerate() {
        if w(zi, xi) != one {
            return false;
        }
        for (xj, zj) in &f.columns[i + 1..] {
            if w(xi, xj) != 0 || w(zi, zj) != 0 || w(xi, zj) != 0 || w(zi, xj) != 0 {
                return false;
            }
        }
    }
    true
}

/// The basis-image table of an encoding.
pub fn frame_from_encoding(enc: &CondensedEncoding) -> Frame {
    let dim = enc.dim();
    let n = dim.n();
    let image = |k: usize| CondensedPauli::new(enc.mu()[k] as i64, enc.psi_of(&Vector::basis(dim, k)));
    let columns = (0..n).map(|i| (image(i), image(n + i))).collect();
    Frame { d: dim.d(), n_in: n, n_out: n, columns }
}

pub fn encoding_from_frame(f: &Frame) -> Result<CondensedEncoding> {
    if f.n_in != f.n_out {
        bail!(IllFormedFrame, "a frame from {} to {} qudits has no encoding", f.n_in, f.n_out);
    }
    if !check_frame(f) {
        bail!(IllFormedFrame, "frame columns violate the commutation constraints");
    }
    let dim = Dim::new(f.d, f.n_in)?;
    let n = dim.n();
    let mut psi = Matrix::zeros(f.d, dim.len(), dim.len());
    let mut mu = vec![0i64; dim.len()];
    for (i, (px, pz)) in f.columns.iter().enumerate() {
        for (k, p) in [(i, px), (n + i, pz)] {
            mu[k] = p.t() as i64;
            for (r, &x) in p.v().to_layout(Layout::Separated).entries().iter().enumerate() {
                psi.set(r, k, x as i128);
            }
        }
    }
    CondensedEncoding::new(dim, &mu, psi).map_err(|e| err!(IllFormedFrame, "{}", e.message))
}

/// Column i is the program evaluated on X_i and on Z_i.
pub fn compile_to_frame(m: &Machine, f: &Clifford) -> Result<Frame> {
    let d = m.d();
    let (n_in, n_out) = (f.input.rank(), f.output.rank());
    let dim = Dim::new(d, n_in)?;
    let out = Dim::new(d, n_out)?;
    let image = |k: usize| -> Result<CondensedPauli> {
        let v = m.apply(f, &PValue::new(0, vector_to_value(&f.input, &Vector::basis(dim, k))?))?;
        let w = value_to_vector(d, &v.value)?;
        if w.dim() != out {
            bail!(DimensionMismatch, "{} produced a value outside {out}", f.name);
        }
        Ok(CondensedPauli::new(v.phase as i64, w))
    };
    let columns = (0..n_in).map(|i| Ok((image(i)?, image(n_in + i)?))).collect::<Result<Vec<_>>>()?;
    let frame = Frame { d, n_in, n_out, columns };
    if !check_frame(&frame) {
        bail!(InvariantViolation, "{} compiled to an ill-formed frame", f.name);
    }
    Ok(frame)
}

/// The frame of a∘b.
pub fn compose_frames(a: &Frame, b: &Frame) -> Result<Frame> {
    if a.d != b.d || a.n_in != b.n_out {
        bail!(DimensionMismatch, "cannot compose a frame on {} qudits after one into {}", a.n_in, b.n_out);
    }
    Ok(frame_from_encoding(&compose(&encoding_from_frame(a)?, &encoding_from_frame(b)?)?))
}

pub fn invert_frame(f: &Frame) -> Result<Frame> {
    Ok(frame_from_encoding(&invert(&encoding_from_frame(f)?)))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PauliJson {
    t: u64,
    v: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColumnJson {
    x: PauliJson,
    z: PauliJson,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameJson {
    d: u64,
    n_in: usize,
    n_out: usize,
    columns: Vec<ColumnJson>,
}

fn to_json(p: &CondensedPauli) -> PauliJson {
    PauliJson { t: p.t(), v: p.v().to_layout(Layout::Separated).entries().to_vec() }
}

/// One line of JSON, newline-terminated.
pub fn write_frame(f: &Frame) -> String {
    let file = FrameJson {
        d: f.d,
        n_in: f.n_in,
        n_out: f.n_out,
        columns: f.columns.iter().map(|(x, z)| ColumnJson { x: to_json(x), z: to_json(z) }).collect(),
    };
    let mut s = serde_json::to_string(&file).expect("plain data serializes");
    s.push('\n');
    s
}

/// Parse and validate a frame.
pub fn read_frame(src: &str) -> Result<Frame> {
    let file: FrameJson = serde_json::from_str(src.trim_end()).map_err(|e| err!(FormatError, "{e}"))?;
    if file.d < 2 {
        bail!(FormatError, "d must be at least 2, got {}", file.d);
    }
    if file.n_out == 0 || file.columns.len() != file.n_in {
        bail!(FormatError, "expected {} columns over n_out = {} qudits, got {}", file.n_in, file.n_out, file.columns.len());
    }
    let dim = Dim::new(file.d, file.n_out)?;
    let pauli = |p: &PauliJson| -> Result<CondensedPauli> {
        if p.v.len() != dim.len() {
            bail!(FormatError, "vector of length {} in a frame over {} qudits", p.v.len(), file.n_out);
        }
        if p.t >= file.d || p.v.iter().any(|&x| x >= file.d) {
            bail!(FormatError, "entries must be reduced mod {}", file.d);
        }
        let v: Vec<i64> = p.v.iter().map(|&x| x as i64).collect();
        Ok(CondensedPauli::new(p.t as i64, Vector::new(dim, &v)?))
    };
    let columns = file.columns.iter().map(|c| Ok((pauli(&c.x)?, pauli(&c.z)?))).collect::<Result<Vec<_>>>()?;
    let frame = Frame { d: file.d, n_in: file.n_in, n_out: file.n_out, columns };
    if !check_frame(&frame) {
        bail!(IllFormedFrame, "frame columns violate the commutation constraints");
    }
    Ok(frame)
}

#[cfg(test)]
mod tests {
    use super::*;

    const H_JSON: &str = r#"{"d":2,"n_in":1,"n_out":1,"columns":[{"x":{"t":0,"v":[0,1]},"z":{"t":0,"v":[1,0]}}]}"#;

    #[test]
    fn documented_example_is_the_hadamard_frame() {
        let f = read_frame(H_JSON).unwrap();
        let dim = Dim::new(2, 1).unwrap();
        assert_eq!(f.columns()[0], (CondensedPauli::z(dim, 0), CondensedPauli::x(dim, 0)));
        assert_eq!(write_frame(&f), format!("{H_JSON}\n"));
    }

    #[test]
    fn truncated_and_ill_formed_input() {
        assert_eq!(read_frame(&H_JSON[..40]).unwrap_err().kind, crate::ErrorKind::FormatError);
        let same = r#"{"d":2,"n_in":1,"n_out":1,"columns":[{"x":{"t":0,"v":[1,0]},"z":{"t":0,"v":[1,0]}}]}"#;
        assert_eq!(read_frame(same).unwrap_err().kind, crate::ErrorKind::IllFormedFrame);
    }
}
