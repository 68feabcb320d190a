use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::sim::gates::Mat2;
use crate::sim::statevector::{Statevector, MAX_SIM_QUBITS};

/// Hardware-efficient ansatz shape: `depth` layers of per-qubit `Rz·Ry·Rz` rotations with a
/// linear CZ chain between consecutive layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnsatzSpec {
    pub num_qubits: usize,
    pub depth: usize,
}

impl AnsatzSpec {
    pub fn new(num_qubits: usize, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(invalid("ansatz depth must be at least 1"));
        }
        if num_qubits == 0 || num_qubits > MAX_SIM_QUBITS {
            return Err(invalid(format!("ansatz width {num_qubits} out of range")));
        }
        Ok(Self { num_qubits, depth })
    }

    pub fn num_params(&self) -> usize {
        3 * self.num_qubits * self.depth
    }

    /// Offset of angle `k ∈ {0,1,2}` of `qubit` in `layer`.
    pub fn param_index(&self, layer: usize, qubit: usize, k: usize) -> usize {
        layer * 3 * self.num_qubits + qubit * 3 + k
    }
}

/// Runs the circuit on `|0…0⟩`. On each qubit the rotation is `Rz(θ₀)·Ry(θ₁)·Rz(θ₂)`, so `θ₂`
/// acts first.
pub fn prepare_ansatz<T: Real>(spec: &AnsatzSpec, params: &[T]) -> Result<Statevector<T>> {
    if params.len() != spec.num_params() {
        return Err(invalid(format!(
            "ansatz expects {} parameters, got {}",
            spec.num_params(),
            params.len()
        )));
    }
    let n = spec.num_qubits;
    let mut psi = Statevector::zero_state(n);
    for layer in 0..spec.depth {
        if layer > 0 {
            for q in 0..n.saturating_sub(1) {
                psi.apply_cz(q, q + 1)?;
            }
        }
        for q in 0..n {
            let theta = |k| params[spec.param_index(layer, q, k)];
            let u = Mat2::rz(theta(0)) * Mat2::ry(theta(1)) * Mat2::rz(theta(2));
            psi.apply_single_qubit_unchecked(q, &u);
        }
    }
    Ok(psi)
}
