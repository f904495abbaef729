//! Acceptance run: one line per criterion.
//!
//! Criteria listed in `EXPECTED_FAILURES` are still executed in full and
//! still print `[FAIL]`; the process exits non-zero if any other criterion
//! fails or if an expected failure starts passing.

use std::collections::{HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use qclif_core::arith::{omega, s_sign};
use qclif_core::encoding::{
    compose, d_phase, enumerate_group, evaluate, evaluate_canonical, invert, kappa_v, random_encoding,
    symplectic_group, CondensedEncoding,
};
use qclif_core::frames::{compile_to_frame, frame_from_encoding};
use qclif_core::lang::syntax::{vector_to_value, CValue, PValue};
use qclif_core::lang::QType;
use qclif_core::oracle::{encoding_from_unitary, gate_matrix, verify_encoding, Gate};
use qclif_core::pauli::{cprod, mul};
use qclif_core::symplectic::{
    check_right_definite, condensed_from_delta, delta_from_condensed, is_symplectic, lift_symplectic,
    random_symplectic, rd_condition,
};
use qclif_core::{CanonicalPauli, CondensedPauli, Dim, Machine, Matrix, Program, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Oracle tolerance for dense-matrix comparisons.
const TOL: f64 = 1e-9;
/// Wall-clock budget for the exhaustive group check.
const GROUP_BUDGET_SECS: f64 = 10.0;
/// Pair budget above which the automorphism check samples instead.
const EXHAUSTIVE_PAIRS: usize = 1_000_000;
const SAMPLED_PAIRS: usize = 10_000;

/// Criteria whose stated identities do not hold; see the README.
const EXPECTED_FAILURES: &[u32] = &[8];

type Check = std::result::Result<(), String>;
type Criterion = (u32, &'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dim(d: u64, n: usize) -> Dim {
    Dim::new(d, n).unwrap()
}

fn v(d: u64, n: usize, e: &[i64]) -> Vector {
    Vector::new(dim(d, n), e).unwrap()
}

fn all_canonical(dim: Dim) -> Vec<CanonicalPauli> {
    (0..dim.d_ext()).flat_map(|w| Vector::all(dim).map(move |v| CanonicalPauli::new(w as i64, v))).collect()
}

fn all_condensed(dim: Dim) -> Vec<CondensedPauli> {
    (0..dim.d()).flat_map(|t| Vector::all(dim).map(move |v| CondensedPauli::new(t as i64, v))).collect()
}

fn gate(g: Gate, d: u64) -> CondensedEncoding {
    encoding_from_unitary(&gate_matrix(g, d).unwrap()).unwrap()
}

fn s_gate_data() -> Check {
    let s = gate(Gate::S, 2);
    let d21 = dim(2, 1);
    ensure(s.mu() == [0, 0] && s.psi() == &Matrix::from_rows(2, &[vec![1, 0], vec![1, 1]]).unwrap(), || {
        format!("S encodes as {s}")
    })?;
    let y = evaluate(&s, &CondensedPauli::y(d21, 0)).unwrap();
    ensure(y == CondensedPauli::x(d21, 0).times_zeta(1), || format!("S Y S^-1 = {y}"))?;
    let mu_inv = invert(&s).mu_of(&v(2, 1, &[1, 0]));
    ensure(mu_inv == 1, || format!("mu of S^-1 at (1,0) is {mu_inv}"))?;
    let k = kappa_v(&s, &v(2, 1, &[1, 1])).unwrap();
    ensure(k == 1, || format!("kappa_S(1,1) = {k}"))?;
    // r(v) is stored doubled, so r = 1/2 reads back as 1
    let r2 = d_phase(&s, &v(2, 1, &[1, 0])).unwrap();
    ensure(r2 == 1, || format!("2r(1,0) = {r2}"))
}

fn cnot_data() -> Check {
    let enc = gate(Gate::Cnot, 2);
    let psi = Matrix::from_rows(2, &[vec![1, 0, 0, 0], vec![1, 1, 0, 0], vec![0, 0, 1, 1], vec![0, 0, 0, 1]]).unwrap();
    ensure(enc.mu() == [0, 0, 0, 0] && enc.psi() == &psi, || format!("CNOT encodes as {enc}"))?;
    ensure(!is_symplectic(&psi.include_mod(4), 4), || "naive lift is symplectic over Z_4".into())?;
    let phi = lift_symplectic(&psi).map_err(|e| e.to_string())?;
    ensure(is_symplectic(&phi, 4) && phi.reduce_mod(2) == psi, || format!("bad lift {phi}"))
}

fn fourier_data() -> Check {
    let h = gate(Gate::Hadamard, 2);
    let y = CondensedPauli::y(dim(2, 1), 0);
    let hy = evaluate(&h, &y).unwrap();
    ensure(hy == y.times_zeta(1), || format!("H Y H^-1 = {hy}"))?;
    for d in 2..=5 {
        let f = gate(Gate::Fourier, d);
        let want = Matrix::from_rows(d, &[vec![0, -1], vec![1, 0]]).unwrap();
        ensure(f.mu() == [0, 0] && f.psi() == &want, || format!("F_{d} encodes as {f}"))?;
        ensure(verify_encoding(&f, &gate_matrix(Gate::Fourier, d).unwrap(), TOL).unwrap(), || {
            format!("F_{d} fails the dense check")
        })?;
    }
    Ok(())
}

fn group_structure() -> Check {
    let start = Instant::now();
    for (d, count) in [(2, 24), (3, 216)] {
        let all: Vec<CondensedEncoding> = enumerate_group(dim(d, 1)).unwrap().collect();
        ensure(all.len() == count, || format!("{} encodings at d = {d}, expected {count}", all.len()))?;
        let index: HashMap<&CondensedEncoding, usize> = all.iter().enumerate().map(|(i, e)| (e, i)).collect();
        ensure(index.len() == count, || format!("duplicates at d = {d}"))?;
        let mut table = vec![0usize; count * count];
        for (i, a) in all.iter().enumerate() {
            ensure(index.contains_key(&invert(a)), || format!("inverse of {a} missing"))?;
            for (j, b) in all.iter().enumerate() {
                let c = compose(a, b).unwrap();
                table[i * count + j] = *index.get(&c).ok_or_else(|| format!("{a} after {b} left the set"))?;
            }
        }
        for a in 0..count {
            for b in 0..count {
                let ab = table[a * count + b];
                for c in 0..count {
                    if table[ab * count + c] != table[a * count + table[b * count + c]] {
                        return Err(format!("compose is not associative at d = {d}"));
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < GROUP_BUDGET_SECS, || format!("took {secs:.1}s"))
}

fn automorphism_on(enc: &CondensedEncoding, paulis: &[CanonicalPauli], rng: &mut ChaCha8Rng) -> Check {
    let check = |p: &CanonicalPauli, q: &CanonicalPauli| -> Check {
        let lhs = evaluate_canonical(enc, &mul(p, q).unwrap()).unwrap();
        let rhs = mul(&evaluate_canonical(enc, p).unwrap(), &evaluate_canonical(enc, q).unwrap()).unwrap();
        ensure(lhs == rhs, || format!("{enc} breaks the product of {p} and {q}"))
    };
    if paulis.len() * paulis.len() <= EXHAUSTIVE_PAIRS {
        for p in paulis {
            for q in paulis {
                check(p, q)?;
            }
        }
    } else {
        for _ in 0..SAMPLED_PAIRS {
            check(&paulis[rng.random_range(0..paulis.len())], &paulis[rng.random_range(0..paulis.len())])?;
        }
    }
    Ok(())
}

fn automorphism() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let d21 = dim(2, 1);
    let paulis = all_canonical(d21);
    for enc in enumerate_group(d21).unwrap() {
        automorphism_on(&enc, &paulis, &mut rng)?;
    }
    let dims = [dim(3, 1), dim(4, 1), dim(2, 2)];
    let tables: Vec<Vec<CanonicalPauli>> = dims.iter().map(|&d| all_canonical(d)).collect();
    for _ in 0..200 {
        let k = rng.random_range(0..dims.len());
        let enc = random_encoding(dims[k], &mut rng);
        automorphism_on(&enc, &tables[k], &mut rng)?;
    }
    Ok(())
}

fn composition_and_inversion() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let dims = [dim(2, 1), dim(3, 1), dim(4, 1), dim(2, 2), dim(3, 2), dim(4, 2), dim(5, 2), dim(6, 2)];
    for _ in 0..500 {
        let dm = dims[rng.random_range(0..dims.len())];
        let (e1, e2) = (random_encoding(dm, &mut rng), random_encoding(dm, &mut rng));
        let p = CondensedPauli::new(
            rng.random_range(0..dm.d()) as i64,
            Vector::from_index(dm, rng.random_range(0..dm.space_size().unwrap())),
        );
        let lhs = evaluate(&compose(&e2, &e1).unwrap(), &p).unwrap();
        let rhs = evaluate(&e2, &evaluate(&e1, &p).unwrap()).unwrap();
        ensure(lhs == rhs, || format!("compose({e2}, {e1}) on {p}: {lhs} vs {rhs}"))?;
        let id = compose(&e1, &invert(&e1)).unwrap();
        ensure(id == CondensedEncoding::identity(dm), || format!("{e1} times its inverse is {id}"))?;
    }
    Ok(())
}

fn symplectic_lift() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [2, 4] {
        for n in [1, 2] {
            for _ in 0..100 {
                let psi = random_symplectic(dim(d, n), &mut rng);
                let phi = lift_symplectic(&psi).map_err(|e| e.to_string())?;
                let om = Matrix::omega(2 * d, n);
                ensure(phi.modulus() == 2 * d && phi.transpose().mul(&om).mul(&phi) == om, || {
                    format!("lift {phi} of {psi} is not symplectic")
                })?;
                ensure(phi.reduce_mod(d) == psi, || format!("lift {phi} does not reduce to {psi}"))?;
            }
        }
    }
    Ok(())
}

fn condensed_product() -> Check {
    let mut failures = Vec::new();

    // closure: ⋆ lands in Σ and Δ_u ⋆ Δ_v = τ^{-ω(u,v)} Δ_u Δ_v
    'closure: for d in 2..=4 {
        for n in 1..=2 {
            let ps = all_condensed(dim(d, n));
            for a in &ps {
                for b in &ps {
                    let c = cprod(a, b).unwrap();
                    let twist = omega(a.v(), b.v()).unwrap() as i64;
                    let want = mul(&a.into(), &b.into()).unwrap().times_tau(-twist);
                    if c.t() >= d || CanonicalPauli::from(&c) != want {
                        failures.push(format!("closure fails for {a} * {b} at d = {d}"));
                        break 'closure;
                    }
                }
            }
        }
    }

    // the printed non-associativity example at d = 4
    let d41 = dim(4, 1);
    let (x, y, z) = (CondensedPauli::x(d41, 0), CondensedPauli::y(d41, 0), CondensedPauli::z(d41, 0));
    let left = cprod(&cprod(&x, &y).unwrap(), &z).unwrap();
    let right = cprod(&x, &cprod(&y, &z).unwrap()).unwrap();
    let minus_zz = cprod(&z, &z).unwrap().times_zeta(2);
    let minus_xx = cprod(&x, &x).unwrap().times_zeta(2);
    if left != minus_zz || right != minus_xx || left == right {
        failures.push(format!(
            "(X*Y)*Z = {left}, -Z*Z = {minus_zz}, X*(Y*Z) = {right}, -X*X = {minus_xx} at d = 4"
        ));
    }

    // equivariance under every encoding
    'equi: for d in 2..=4 {
        let d1 = dim(d, 1);
        let ps = all_condensed(d1);
        for enc in enumerate_group(d1).unwrap() {
            for a in &ps {
                for b in &ps {
                    let lhs = evaluate(&enc, &cprod(a, b).unwrap()).unwrap();
                    let rhs = cprod(&evaluate(&enc, a).unwrap(), &evaluate(&enc, b).unwrap()).unwrap();
                    if lhs != rhs {
                        failures.push(format!("{enc} does not respect {a} * {b}"));
                        break 'equi;
                    }
                }
            }
        }
    }

    // s(u,v) = s(ψu,ψv) for symplectic ψ
    for d in [2, 4] {
        let d1 = dim(d, 1);
        let witness = symplectic_group(d1).unwrap().into_iter().find_map(|psi| {
            Vector::all(d1).flat_map(|u| Vector::all(d1).map(move |w| (u.clone(), w))).find_map(|(u, w)| {
                let (pu, pw) = (psi.apply(&u), psi.apply(&w));
                (s_sign(&u, &w).unwrap() != s_sign(&pu, &pw).unwrap()).then(|| format!("psi = {psi}, u = {u}, v = {w}"))
            })
        });
        if let Some(w) = witness {
            failures.push(format!("sign not preserved at d = {d}: {w}"));
        }
    }

    ensure(failures.is_empty(), || failures.join("; "))
}

fn delta_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let dims = [dim(2, 1), dim(3, 1), dim(4, 1), dim(2, 2), dim(3, 2), dim(4, 2)];
    for _ in 0..200 {
        let enc = random_encoding(dims[rng.random_range(0..dims.len())], &mut rng);
        let back = condensed_from_delta(&delta_from_condensed(&enc)).map_err(|e| e.to_string())?;
        ensure(back == enc, || format!("{enc} came back as {back}"))?;
    }
    let d21 = dim(2, 1);
    let lifts = symplectic_group(dim(4, 1)).unwrap();
    ensure(lifts.len() == 48, || format!("{} symplectic maps over Z_4", lifts.len()))?;
    for phi in &lifts {
        let zero = vec![0; d21.ext_space_size().unwrap()];
        ensure(rd_condition(d21, phi).unwrap() && check_right_definite(d21, &zero, phi).unwrap(), || {
            format!("{phi} is not right-definite")
        })?;
    }
    Ok(())
}

const PROGRAMS: &[(u64, &str, &str)] = &[
    (2, include_str!("../../cli/examples/h.qcl"), "hadamard"),
    (2, include_str!("../../cli/examples/s.qcl"), "phase"),
    (3, include_str!("../../cli/examples/fourier3.qcl"), "fourier"),
    (2, include_str!("../../cli/examples/cnot.qcl"), "cnot_2"),
    (2, include_str!("../../cli/examples/cnot.qcl"), "cz_2"),
    (2, include_str!("../../cli/examples/cnot.qcl"), "swap"),
    (2, include_str!("../../cli/examples/repx.qcl"), "repX"),
    (2, include_str!("../../cli/examples/paulis.qcl"), "identity"),
    (2, include_str!("../../cli/examples/paulis.qcl"), "pauliToClifford"),
];

fn compile(d: u64, src: &str, name: &str) -> std::result::Result<(Machine, qclif_core::lang::program::Clifford), String> {
    let m = Machine::new(d).unwrap();
    let prog = Program::parse(src).map_err(|e| e.to_string())?;
    let def = prog.get(name).map_err(|e| e.to_string())?;
    let args: Vec<CValue> = def
        .params()
        .iter()
        .map(|(_, ty)| m.eval_surface("X", ty).map(|p| p.value))
        .collect::<qclif_core::Result<_>>()
        .map_err(|e| e.to_string())?;
    let f = m.instantiate(def, &args).map_err(|e| format!("{name}: {e}"))?;
    Ok((m, f))
}

fn language_layer() -> Check {
    let ill = Program::parse(include_str!("../../cli/examples/ill_typed.qcl")).unwrap();
    let m2 = Machine::new(2).unwrap();
    ensure(m2.compile(ill.get("broken").unwrap()).is_err(), || "ill_typed was accepted".into())?;
    let (m, h) = compile(2, PROGRAMS[0].1, "hadamard")?;
    let out = m.apply(&h, &m.eval_surface("Y", &QType::Pauli).unwrap()).unwrap().to_string();
    ensure(out == "<1> Y", || format!("hadamard Y gave {out}"))?;
    let (m, c) = compile(2, PROGRAMS[3].1, "cnot_2")?;
    let out = m.apply(&c, &m.eval_surface("X ** Y", &c.input).unwrap()).unwrap().to_string();
    ensure(out == "Y ** Z", || format!("cnot_2 (X ** Y) gave {out}"))?;
    for &(d, src, name) in PROGRAMS {
        let (m, f) = compile(d, src, name)?;
        let enc = m.encoding_of(&f).map_err(|e| format!("{name}: {e}"))?;
        let dm = enc.dim();
        for k in 0..dm.len() {
            let b = Vector::basis(dm, k);
            let got = m.apply(&f, &PValue::new(0, vector_to_value(&f.input, &b).unwrap())).unwrap().to_pauli(d).unwrap();
            let want = evaluate(&enc, &CondensedPauli::new(0, b)).unwrap();
            ensure(got == want, || format!("{name} on basis {k}: {got} vs {want}"))?;
        }
        let frame = compile_to_frame(&m, &f).map_err(|e| e.to_string())?;
        ensure(frame == frame_from_encoding(&enc), || format!("{name} frame disagrees with its encoding"))?;
    }
    Ok(())
}

fn inverse_construction() -> Check {
    let (m, s) = compile(2, PROGRAMS[1].1, "phase")?;
    let out = m.apply_inverse(&s, &m.eval_surface("X", &QType::Pauli).unwrap()).unwrap().to_string();
    ensure(out == "<1> Y", || format!("phase^-1 X gave {out}"))?;
    for &(d, src, name) in PROGRAMS {
        let (m, f) = compile(d, src, name)?;
        let dm = Dim::new(d, f.input.rank()).unwrap();
        for p in all_condensed(dm) {
            let val = PValue::from_pauli(&f.input, &p).unwrap();
            let there = m.apply(&f, &val).unwrap();
            let back = m.apply_inverse(&f, &there).map_err(|e| format!("{name}: {e}"))?;
            ensure(back.to_pauli(d).unwrap() == p, || format!("{name}: f^-1(f({p})) = {back}"))?;
        }
    }
    Ok(())
}

fn oracle_cross_check() -> Check {
    let mut cases: Vec<(Gate, u64)> = vec![(Gate::Hadamard, 2), (Gate::S, 2), (Gate::Cnot, 2)];
    cases.extend((2..=5).map(|d| (Gate::Fourier, d)));
    for (g, d) in cases {
        let u = gate_matrix(g, d).unwrap();
        let enc = encoding_from_unitary(&u).map_err(|e| e.to_string())?;
        ensure(verify_encoding(&enc, &u, TOL).unwrap(), || format!("{g} at d = {d} fails"))?;
        let mut mu: Vec<i64> = enc.mu().iter().map(|&x| x as i64).collect();
        mu[0] += 1;
        let bad = CondensedEncoding::new(enc.dim(), &mu, enc.psi().clone()).unwrap();
        ensure(!verify_encoding(&bad, &u, TOL).unwrap(), || format!("corrupted {g} at d = {d} passes"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "S-gate data", s_gate_data),
        (2, "CNOT encoding and lift", cnot_data),
        (3, "Fourier and Hadamard", fourier_data),
        (4, "group order, closure, associativity", group_structure),
        (5, "evaluation is an automorphism", automorphism),
        (6, "composition and inversion", composition_and_inversion),
        (7, "symplectic lift", symplectic_lift),
        (8, "condensed product", condensed_product),
        (9, "delta-encoding round trips", delta_round_trip),
        (10, "language layer", language_layer),
        (11, "inverse construction", inverse_construction),
        (12, "oracle cross-check", oracle_cross_check),
    ];
    let expected: HashSet<u32> = EXPECTED_FAILURES.iter().copied().collect();
    let mut surprises = 0;
    for (id, name, f) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => {
                println!("[PASS] {id:>2} {name} ({secs:.2}s)");
                if expected.contains(&id) {
                    println!("       expected to fail; update EXPECTED_FAILURES");
                    surprises += 1;
                }
            }
            Err(why) => {
                let tag = if expected.contains(&id) { " (expected)" } else { "" };
                println!("[FAIL] {id:>2} {name}{tag} ({secs:.2}s): {why}");
                if !expected.contains(&id) {
                    surprises += 1;
                }
            }
        }
    }
    if surprises == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
