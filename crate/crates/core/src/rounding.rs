//! Rounding relaxed states back to cuts.
//!
//! Magic rounding measures every qubit in a uniformly random basis from the deformation's
//! family and decodes the outcome into the qubit's variables. Pauli rounding reads each vertex
//! variable off the sign of its Pauli expectation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{cut_value, Assignment, Graph};
use crate::pauli::{self, Axis};
use crate::qrac::{relaxed_energy, Deformation, RelaxedHamiltonian, VertexPauliMap};
use crate::scalar::{lit, to_f64, Real};
use crate::sim::gates::{rotation_to_zero, Mat2};
use crate::sim::Statevector;

/// Default threshold below which a Pauli expectation counts as zero.
pub const PAULI_ZERO_TOL: f64 = 1e-9;

/// One measurement basis of a deformation's rounding family.
///
/// For `d = 3` indices 1–4 are the magic bases `μ_i = P_i·μ·P_i` with `P = (X, Y, Z, I)`. For
/// `d = 2` index 1 is `ξ` (Bloch `(1,0,1)/√2`) and index 2 is `X·ξ·X`. For `d = 1` the only
/// basis is Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MagicBasis {
    deformation: Deformation,
    index: u8,
}

impl MagicBasis {
    pub fn new(deformation: Deformation, index: u8) -> Result<Self> {
        if index == 0 || index as usize > Self::count(deformation) {
            return Err(invalid(format!(
                "basis index {index} out of range for d = {deformation}"
            )));
        }
        Ok(Self { deformation, index })
    }

    /// Number of bases drawn from uniformly.
    pub fn count(deformation: Deformation) -> usize {
        match deformation {
            Deformation::One => 1,
            Deformation::Two => 2,
            Deformation::Three => 4,
        }
    }

    pub fn index(&self) -> u8 {
        self.index
    }

    /// Pauli conjugating the reference state into this basis's `+` state.
    pub fn prefix(&self) -> Option<Axis> {
        match (self.deformation, self.index) {
            (Deformation::Three, 1) | (Deformation::Two, 2) => Some(Axis::X),
            (Deformation::Three, 2) => Some(Axis::Y),
            (Deformation::Three, 3) => Some(Axis::Z),
            _ => None,
        }
    }

    /// Bloch-vector signs of the `+` state along X, Y, Z. Outcome `s` decodes the variable on
    /// axis `a` to `s·signs[a]`.
    pub fn signs(&self) -> [i8; 3] {
        match (self.deformation, self.index) {
            (Deformation::Three, 1) => [1, -1, -1],
            (Deformation::Three, 2) => [-1, 1, -1],
            (Deformation::Three, 3) => [-1, -1, 1],
            (Deformation::Two, 2) => [1, 1, -1],
            _ => [1, 1, 1],
        }
    }

    /// Unit Bloch vector of the `+` state.
    pub fn bloch<T: Real>(&self) -> [T; 3] {
        let d = self.deformation;
        let scale = T::one() / lit::<T>(d.value() as f64).sqrt();
        let s = self.signs();
        let mut b = [T::zero(); 3];
        for &axis in d.axes() {
            b[axis.index()] = scale * lit(s[axis.index()] as f64);
        }
        b
    }

    /// Unitary taking the `+` state to `|0⟩` and the `−` state to `|1⟩`:
    /// `e^{−itX}·e^{−isZ}·P` with `P` the prefix.
    pub fn unitary<T: Real>(&self) -> Mat2<T> {
        let reference = MagicBasis {
            deformation: self.deformation,
            index: 1 + (self.deformation == Deformation::Three) as u8 * 3,
        };
        let base = match self.deformation {
            Deformation::One => Mat2::identity(),
            _ => rotation_to_zero(reference.bloch::<T>()),
        };
        match self.prefix() {
            Some(axis) => base * Mat2::pauli(axis),
            None => base,
        }
    }
}

/// `U_i` for the `d = 3` magic bases, `i ∈ {1, 2, 3, 4}`.
pub fn magic_basis_unitary<T: Real>(i: usize) -> Result<Mat2<T>> {
    let index = u8::try_from(i).map_err(|_| invalid(format!("basis index {i} out of range")))?;
    Ok(MagicBasis::new(Deformation::Three, index)?.unitary())
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundingSample<T> {
    pub assignment: Assignment,
    pub cut: T,
    /// Per qubit `(basis index, outcome)`; empty for Pauli rounding.
    pub basis_choices: Vec<(u8, i8)>,
}

fn check_dims<T: Real>(psi: &Statevector<T>, map: &VertexPauliMap, g: &Graph<T>) -> Result<()> {
    if psi.num_qubits() != map.num_qubits() {
        return Err(invalid(format!(
            "state on {} qubits, map on {}",
            psi.num_qubits(),
            map.num_qubits()
        )));
    }
    if g.num_vertices() != map.num_vertices() {
        return Err(invalid("graph and vertex map disagree on vertex count"));
    }
    Ok(())
}

/// RNG for sample `index` of a batch seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One magic-rounding draw. Qubits are measured in ascending order with collapse.
pub fn magic_round_once<T: Real, R: Rng + ?Sized>(
    psi: &Statevector<T>,
    map: &VertexPauliMap,
    g: &Graph<T>,
    rng: &mut R,
) -> Result<RoundingSample<T>> {
    check_dims(psi, map, g)?;
    let d = map.deformation();
    let count = MagicBasis::count(d);
    let mut state = psi.clone();
    let mut values = vec![1i8; map.num_vertices()];
    let mut choices = Vec::with_capacity(map.num_qubits());
    for q in 0..map.num_qubits() {
        let index = if count == 1 {
            1
        } else {
            rng.random_range(1..=count as u8)
        };
        let basis = MagicBasis {
            deformation: d,
            index,
        };
        state.apply_single_qubit_unchecked(q, &basis.unitary());
        let s = state.measure(q, rng);
        let signs = basis.signs();
        for &v in map.qubit_vertices(q) {
            values[v] = s * signs[map.slot(v).axis.index()];
        }
        choices.push((index, s));
    }
    let assignment = Assignment::new(values)?;
    let cut = cut_value(g, &assignment)?;
    Ok(RoundingSample {
        assignment,
        cut,
        basis_choices: choices,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MagicBatch<T> {
    /// Highest cut; the earliest sample wins ties.
    pub best: RoundingSample<T>,
    /// Cut of every sample, in sample order.
    pub cuts: Vec<T>,
}

/// `samples` independent draws, sample `i` using [`sample_rng`]`(seed, i)`.
pub fn magic_round_batch<T: Real>(
    psi: &Statevector<T>,
    map: &VertexPauliMap,
    g: &Graph<T>,
    samples: usize,
    seed: u64,
) -> Result<MagicBatch<T>> {
    if samples == 0 {
        return Err(invalid("magic rounding needs at least one sample"));
    }
    check_dims(psi, map, g)?;
    let draws: Vec<RoundingSample<T>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| magic_round_once(psi, map, g, &mut sample_rng(seed, i)))
        .collect::<Result<_>>()?;
    let cuts = draws.iter().map(|s| s.cut).collect();
    let best = draws
        .into_iter()
        .reduce(|best, s| if s.cut > best.cut { s } else { best })
        .expect("at least one sample");
    Ok(MagicBatch { best, cuts })
}

/// Mean cut of magic rounding without sampling: the rounding channel shrinks every weight-2
/// term by `1/d²`, so `E = c + (⟨H⟩ − c)/d²` with `c` the constant.
pub fn expected_rounded_energy<T: Real>(
    h: &RelaxedHamiltonian<T>,
    psi: &Statevector<T>,
    d: Deformation,
) -> Result<T> {
    let e = relaxed_energy(h, psi)?;
    let k = lit::<T>(d.value() as f64);
    Ok(h.constant() + (e - h.constant()) / (k * k))
}

/// `m_v = sign⟨P_v⟩`, with a fair coin when `|⟨P_v⟩| ≤ zero_tol`.
pub fn pauli_round<T: Real, R: Rng + ?Sized>(
    psi: &Statevector<T>,
    map: &VertexPauliMap,
    g: &Graph<T>,
    zero_tol: T,
    rng: &mut R,
) -> Result<RoundingSample<T>> {
    check_dims(psi, map, g)?;
    let values = (0..map.num_vertices())
        .map(|v| {
            let e = pauli::expectation(&map.vertex_pauli(v), psi)?;
            Ok(if e > zero_tol {
                1
            } else if e < -zero_tol {
                -1
            } else if rng.random::<bool>() {
                1
            } else {
                -1
            })
        })
        .collect::<Result<Vec<i8>>>()?;
    let assignment = Assignment::new(values)?;
    let cut = cut_value(g, &assignment)?;
    Ok(RoundingSample {
        assignment,
        cut,
        basis_choices: Vec::new(),
    })
}

/// `cut / optimal`.
pub fn approximation_ratio<T: Real>(cut: T, optimal: T) -> Result<T> {
    if !(optimal > T::zero()) {
        return Err(invalid("optimal cut must be positive"));
    }
    Ok(cut / optimal)
}

/// Serializable rounding summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundingReport {
    pub method: String,
    pub samples: usize,
    pub cuts: Vec<f64>,
    pub best_cut: f64,
    pub best_assignment: Vec<i8>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mean_gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub optimal_cut: Option<f64>,
}

impl RoundingReport {
    pub fn from_samples<T: Real>(
        method: &str,
        cuts: &[T],
        best: &RoundingSample<T>,
        optimal_cut: Option<f64>,
    ) -> Self {
        let cuts: Vec<f64> = cuts.iter().map(|&c| to_f64(c)).collect();
        let mean_gamma = optimal_cut
            .filter(|&o| o > 0.0)
            .map(|o| cuts.iter().sum::<f64>() / cuts.len() as f64 / o);
        Self {
            method: method.to_string(),
            samples: cuts.len(),
            best_cut: to_f64(best.cut),
            best_assignment: best.assignment.values().to_vec(),
            cuts,
            mean_gamma,
            optimal_cut,
        }
    }

    pub fn magic<T: Real>(batch: &MagicBatch<T>, optimal_cut: Option<f64>) -> Self {
        Self::from_samples("magic", &batch.cuts, &batch.best, optimal_cut)
    }

    pub fn pauli<T: Real>(sample: &RoundingSample<T>, optimal_cut: Option<f64>) -> Self {
        Self::from_samples("pauli", &[sample.cut], sample, optimal_cut)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
