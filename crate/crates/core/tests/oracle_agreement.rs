//! Exact Pauli algebra and encodings checked against dense unitaries.

use nalgebra::DMatrix;
use qclif_core::arith::{include, omega};
use qclif_core::encoding::{compose, evaluate, invert, kappa_v, CondensedEncoding};
use qclif_core::oracle::{
    condensed_matrix, encoding_from_unitary, gate_matrix, pauli_matrix, verify_encoding, DenseUnitary, Gate, C64,
};
use qclif_core::pauli::{cprod, power};
use qclif_core::{CanonicalPauli, CondensedPauli, Dim, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn close(a: &DMatrix<C64>, b: &DMatrix<C64>) -> bool {
    (a - b).iter().all(|z| z.norm() < TOL)
}

fn tau_pow(dim: Dim, k: u64) -> C64 {
    let w = CanonicalPauli::identity(dim.with_n(1).unwrap()).times_tau(k as i64);
    pauli_matrix(&w).unwrap().matrix()[(0, 0)]
}

fn all_condensed(dim: Dim) -> Vec<CondensedPauli> {
    let mut out = Vec::new();
    for t in 0..dim.d() {
        for v in Vector::all(dim) {
            out.push(CondensedPauli::new(t as i64, v));
        }
    }
    out
}

#[test]
fn condensed_product_is_the_renormalized_matrix_product() {
    for d in 2..=4 {
        let dim = Dim::new(d, 1).unwrap();
        for a in all_condensed(dim) {
            for b in all_condensed(dim) {
                let star = condensed_matrix(&cprod(&a, &b).unwrap()).unwrap();
                let w = dim.mod_ext(-(omega(a.v(), b.v()).unwrap() as i128));
                let raw = condensed_matrix(&a).unwrap().matrix() * condensed_matrix(&b).unwrap().matrix();
                assert!(close(star.matrix(), &(raw * tau_pow(dim, w))), "d={d} {a} ⋆ {b}");
            }
        }
    }
}

#[test]
fn power_is_the_matrix_power() {
    for d in 2..=4 {
        let dim = Dim::new(d, 1).unwrap();
        for a in all_condensed(dim) {
            let m = condensed_matrix(&a).unwrap();
            let mut acc = DMatrix::identity(d as usize, d as usize);
            for r in 0..d {
                assert!(close(condensed_matrix(&power(&a, r)).unwrap().matrix(), &acc), "d={d} {a}^{r}");
                acc *= m.matrix();
            }
        }
    }
    let dim = Dim::new(4, 1).unwrap();
    let p = CondensedPauli::new(0, Vector::new(dim, &[2, 3]).unwrap());
    assert_eq!(power(&p, 3), CondensedPauli::new(2, Vector::new(dim, &[2, 1]).unwrap()));
}

fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

fn id(size: usize) -> DMatrix<C64> {
    DMatrix::identity(size, size)
}

/// |r⟩ ↦ τ^{r²}|r⟩, a Clifford phase gate valid for every d.
fn quadratic_phase(d: u64) -> DMatrix<C64> {
    let dim = Dim::new(d, 1).unwrap();
    DMatrix::from_fn(d as usize, d as usize, |i, j| {
        if i == j {
            tau_pow(dim, dim.mod_ext((i * i) as i128))
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// |a,b⟩ ↦ |a,a+b⟩.
fn sum_gate(d: u64) -> DMatrix<C64> {
    let d = d as usize;
    DMatrix::from_fn(d * d, d * d, |row, col| {
        let (a, b) = (col / d, col % d);
        if row == a * d + (a + b) % d {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Random two-qudit Clifford circuit drawn from Fourier, the quadratic phase,
/// SUM and Paulis on either qudit.
fn random_circuit(d: u64, rng: &mut ChaCha8Rng) -> DenseUnitary {
    let dim = Dim::new(d, 2).unwrap();
    let f = gate_matrix(Gate::Fourier, d).unwrap().matrix().clone();
    let p = quadratic_phase(d);
    let dd = d as usize;
    let mut u = id(dd * dd);
    for _ in 0..8 {
        let g = match rng.random_range(0..6) {
            0 => kron(&f, &id(dd)),
            1 => kron(&id(dd), &f),
            2 => kron(&p, &id(dd)),
            3 => kron(&id(dd), &p),
            4 => sum_gate(d),
            _ => {
                let v = Vector::from_index(dim, rng.random_range(0..dd.pow(4)));
                pauli_matrix(&CanonicalPauli::new(0, v)).unwrap().matrix().clone()
            }
        };
        u = g * u;
    }
    DenseUnitary::new(dim, u).unwrap()
}

#[test]
fn two_qudit_circuits_match_the_evaluation_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [2, 3, 4] {
        for _ in 0..20 {
            let u1 = random_circuit(d, &mut rng);
            let u2 = random_circuit(d, &mut rng);
            let e1 = encoding_from_unitary(&u1).unwrap();
            let e2 = encoding_from_unitary(&u2).unwrap();
            assert!(verify_encoding(&e1, &u1, TOL).unwrap());
            let product = u2.mul(&u1).unwrap();
            let composed = compose(&e2, &e1).unwrap();
            assert_eq!(composed, encoding_from_unitary(&product).unwrap());
            assert!(verify_encoding(&composed, &product, TOL).unwrap());
            assert_eq!(invert(&e1), encoding_from_unitary(&u1.adjoint()).unwrap());
        }
    }
}

/// κ' with only the within-qudit pair terms, for comparison.
fn kappa_within_qudit(enc: &CondensedEncoding, v: &Vector) -> u8 {
    let dim = enc.dim();
    let n = dim.n();
    let mut total: i128 = 0;
    let mut sum = qclif_core::ExtVector::zero(dim);
    for i in 0..n {
        let x = include(&enc.psi_of(&Vector::basis(dim, i))).scale(v.x(i) as i64);
        let z = include(&enc.psi_of(&Vector::basis(dim, n + i))).scale(v.z(i) as i64);
        total += (v.x(i) * v.z(i)) as i128 + qclif_core::arith::omega_ext(&x, &z).unwrap() as i128;
        sum = sum.add(&x).add(&z);
    }
    let target = include(&enc.psi_of(v));
    let total = dim.mod_ext(total);
    ((total / dim.d()) as u8 + qclif_core::arith::eps_bracket(&sum, &target).unwrap()) % 2
}

#[test]
fn cross_qudit_terms_matter_for_cnot() {
    let u = gate_matrix(Gate::Cnot, 2).unwrap();
    let enc = encoding_from_unitary(&u).unwrap();
    let dim = enc.dim();
    let x1z2 = Vector::from_xz(dim, &[1, 0], &[0, 1]).unwrap();
    let image = evaluate(&enc, &CondensedPauli::new(0, x1z2.clone())).unwrap();
    // CNOT (X⊗Z) CNOT† = −Y⊗Y
    assert_eq!(image, CondensedPauli::new(1, Vector::from_xz(dim, &[1, 1], &[1, 1]).unwrap()));
    assert_eq!(kappa_v(&enc, &x1z2).unwrap(), 1);
    assert_eq!(kappa_within_qudit(&enc, &x1z2), 0);
    assert!(verify_encoding(&enc, &u, TOL).unwrap());
}
