//! Dense reference computations for tests.
//!
//! Everything here is built from explicit Kronecker products and density matrices with
//! `nalgebra`, sharing no arithmetic with the matrix-free production paths.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::graph::{cut_value, Assignment, Graph};
use crate::pauli::{Axis, PauliString};
use crate::qrac::{Deformation, RelaxedHamiltonian, VertexPauliMap};
use crate::scalar::{to_f64, Real};
use crate::sim::Statevector;

pub const DENSE_ORACLE_MAX_QUBITS: usize = 10;
pub const CHANNEL_ORACLE_MAX_QUBITS: usize = 3;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_matrix(letter: Option<Axis>) -> DMatrix<Complex64> {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    match letter {
        None => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Some(Axis::X) => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Some(Axis::Y) => DMatrix::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
        Some(Axis::Z) => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// `P_{n−1} ⊗ … ⊗ P_0`, so qubit `q` is bit `q` of the row index.
pub fn dense_pauli(p: &PauliString) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for q in 0..p.num_qubits() {
        m = pauli_matrix(p.letter(q)).kronecker(&m);
    }
    m
}

pub fn dense_hamiltonian<T: Real>(h: &RelaxedHamiltonian<T>) -> Result<DMatrix<Complex64>> {
    let n = h.num_qubits();
    if n > DENSE_ORACLE_MAX_QUBITS {
        return Err(Error::SizeLimit(format!(
            "dense oracle limited to {DENSE_ORACLE_MAX_QUBITS} qubits"
        )));
    }
    let dim = 1usize << n;
    let mut m = DMatrix::<Complex64>::identity(dim, dim) * c(to_f64(h.constant()), 0.0);
    for t in h.terms() {
        m += dense_pauli(&t.pauli) * c(to_f64(t.coeff), 0.0);
    }
    Ok(m)
}

pub fn to_dvector<T: Real>(psi: &Statevector<T>) -> DVector<Complex64> {
    DVector::from_iterator(
        psi.dim(),
        psi.amplitudes()
            .iter()
            .map(|a| c(to_f64(a.re), to_f64(a.im))),
    )
}

/// `⟨ψ|M|ψ⟩` (real part).
pub fn dense_expectation(m: &DMatrix<Complex64>, psi: &DVector<Complex64>) -> f64 {
    psi.dotc(&(m * psi)).re
}

/// All eigenvalues ascending, from a full Hermitian eigendecomposition.
pub fn reference_spectrum<T: Real>(h: &RelaxedHamiltonian<T>) -> Result<Vec<f64>> {
    let eig = SymmetricEigen::new(dense_hamiltonian(h)?);
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Largest eigenvalue and a unit eigenvector.
pub fn reference_max_eigenpair<T: Real>(
    h: &RelaxedHamiltonian<T>,
) -> Result<(f64, DVector<Complex64>)> {
    let eig = SymmetricEigen::new(dense_hamiltonian(h)?);
    let (k, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| invalid("empty spectrum"))?;
    Ok((value, eig.eigenvectors.column(k).into_owned()))
}

/// `(I + b·σ)/2`.
pub fn bloch_density(b: [f64; 3]) -> DMatrix<Complex64> {
    let mut m = pauli_matrix(None);
    for (axis, &x) in Axis::ALL.iter().zip(&b) {
        m += pauli_matrix(Some(*axis)) * c(x, 0.0);
    }
    m * c(0.5, 0.0)
}

/// `(tr(Xρ), tr(Yρ), tr(Zρ))` of a one-qubit density.
pub fn bloch_of(rho: &DMatrix<Complex64>) -> [f64; 3] {
    Axis::ALL.map(|a| (pauli_matrix(Some(a)) * rho).trace().re)
}

/// `+` projectors of the rounding family, obtained by conjugating the reference state with
/// the family's Paulis.
pub fn basis_projectors(d: Deformation) -> Vec<DMatrix<Complex64>> {
    let r3 = 1.0 / 3f64.sqrt();
    let r2 = 1.0 / 2f64.sqrt();
    let (reference, conjugators): (_, Vec<Option<Axis>>) = match d {
        Deformation::Three => (
            [r3, r3, r3],
            vec![Some(Axis::X), Some(Axis::Y), Some(Axis::Z), None],
        ),
        Deformation::Two => ([r2, 0.0, r2], vec![None, Some(Axis::X)]),
        Deformation::One => ([0.0, 0.0, 1.0], vec![None]),
    };
    let mu = bloch_density(reference);
    conjugators
        .into_iter()
        .map(|p| {
            let pm = pauli_matrix(p);
            &pm * &mu * &pm
        })
        .collect()
}

fn kron_all(factors: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    // factors[q] acts on qubit q, the lowest bit
    factors
        .iter()
        .fold(DMatrix::from_element(1, 1, c(1.0, 0.0)), |acc, f| {
            f.kronecker(&acc)
        })
}

fn num_qubits_of(rho: &DMatrix<Complex64>) -> Result<usize> {
    let dim = rho.nrows();
    if dim != rho.ncols() || !dim.is_power_of_two() {
        return Err(invalid(
            "density must be square with power-of-two dimension",
        ));
    }
    let n = dim.trailing_zeros() as usize;
    if n > CHANNEL_ORACLE_MAX_QUBITS {
        return Err(Error::SizeLimit(format!(
            "channel oracle limited to {CHANNEL_ORACLE_MAX_QUBITS} qubits"
        )));
    }
    Ok(n)
}

/// Visits every (basis choice, outcome) branch with its probability and projector.
fn for_each_branch(
    n: usize,
    d: Deformation,
    rho: &DMatrix<Complex64>,
    mut visit: impl FnMut(&[usize], &[i8], f64, &DMatrix<Complex64>),
) {
    let plus = basis_projectors(d);
    let id = pauli_matrix(None);
    let k = plus.len();
    let choice_weight = 1.0 / (k.pow(n as u32) as f64);
    for choice in 0..k.pow(n as u32) {
        let bases: Vec<usize> = (0..n).map(|q| choice / k.pow(q as u32) % k).collect();
        for signs in 0..1usize << n {
            let outcomes: Vec<i8> = (0..n)
                .map(|q| if signs >> q & 1 == 0 { 1 } else { -1 })
                .collect();
            let factors: Vec<DMatrix<Complex64>> = (0..n)
                .map(|q| {
                    if outcomes[q] == 1 {
                        plus[bases[q]].clone()
                    } else {
                        &id - &plus[bases[q]]
                    }
                })
                .collect();
            let proj = kron_all(&factors);
            let p = (&proj * rho).trace().re;
            visit(&bases, &outcomes, choice_weight * p, &proj);
        }
    }
}

/// Average post-measurement state of the rounding channel applied to every qubit of `rho`.
pub fn exact_channel_average(
    rho: &DMatrix<Complex64>,
    d: Deformation,
) -> Result<DMatrix<Complex64>> {
    let n = num_qubits_of(rho)?;
    let dim = rho.nrows();
    let mut out = DMatrix::from_element(dim, dim, c(0.0, 0.0));
    for_each_branch(n, d, rho, |_, _, p, proj| out += proj * c(p, 0.0));
    Ok(out)
}

/// Exact mean cut of magic rounding on `psi`, enumerating every branch. Decoding reads each
/// variable's sign off the measured projector's Bloch vector.
pub fn exact_rounding_expectation<T: Real>(
    psi: &Statevector<T>,
    map: &VertexPauliMap,
    g: &Graph<T>,
) -> Result<f64> {
    let v = to_dvector(psi);
    let rho = &v * v.adjoint();
    let n = num_qubits_of(&rho)?;
    let d = map.deformation();
    let blochs: Vec<[f64; 3]> = basis_projectors(d).iter().map(bloch_of).collect();
    let mut total = 0.0;
    let mut failure = None;
    for_each_branch(n, d, &rho, |bases, outcomes, p, _| {
        let mut values = vec![1i8; map.num_vertices()];
        for q in 0..n {
            let b = blochs[bases[q]];
            for &vtx in map.qubit_vertices(q) {
                let component = b[map.slot(vtx).axis.index()];
                values[vtx] = outcomes[q] * if component > 0.0 { 1 } else { -1 };
            }
        }
        match Assignment::new(values).and_then(|m| cut_value(g, &m)) {
            Ok(cut) => total += p * to_f64(cut),
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// Random density on `n` qubits: a normalized mixture of `rank` random pure states.
pub fn random_density(n: usize, rank: usize, seed: u64) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    let mut rho = DMatrix::from_element(dim, dim, c(0.0, 0.0));
    for r in 0..rank.max(1) {
        let v = to_dvector(&Statevector::<f64>::random(
            n,
            seed.wrapping_mul(1_000_003).wrapping_add(r as u64),
        ));
        rho += &v * v.adjoint();
    }
    let tr = rho.trace();
    rho / tr
}
