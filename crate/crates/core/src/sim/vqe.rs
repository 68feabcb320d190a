use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::qrac::{energy_unchecked, RelaxedHamiltonian};
use crate::scalar::{lit, Real};
use crate::sim::ansatz::{prepare_ansatz, AnsatzSpec};
use crate::sim::spsa::{spsa_maximize, SpsaConfig, TracePoint};
use crate::sim::Statevector;

#[derive(Clone, Debug, PartialEq)]
pub struct VqeResult<T: Real> {
    pub state: Statevector<T>,
    pub energy: T,
    pub params: Vec<T>,
    pub trace: Vec<TracePoint>,
}

/// Initial angles uniform in `[−π, π]`, drawn from stream 1 of `seed` so they are independent
/// of the optimizer's perturbations.
pub fn initial_parameters<T: Real>(spec: &AnsatzSpec, seed: u64) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    (0..spec.num_params())
        .map(|_| lit(rng.random_range(-std::f64::consts::PI..=std::f64::consts::PI)))
        .collect()
}

/// Maximizes `⟨ψ(θ)|H|ψ(θ)⟩` over the ansatz from random initial angles.
pub fn vqe_relax<T: Real>(
    h: &RelaxedHamiltonian<T>,
    spec: &AnsatzSpec,
    config: &SpsaConfig,
) -> Result<VqeResult<T>> {
    vqe_relax_from(h, spec, config, &initial_parameters(spec, config.seed))
}

pub fn vqe_relax_from<T: Real>(
    h: &RelaxedHamiltonian<T>,
    spec: &AnsatzSpec,
    config: &SpsaConfig,
    initial: &[T],
) -> Result<VqeResult<T>> {
    if spec.num_qubits != h.num_qubits() {
        return Err(invalid(format!(
            "ansatz on {} qubits, Hamiltonian on {}",
            spec.num_qubits,
            h.num_qubits()
        )));
    }
    prepare_ansatz(spec, initial)?;
    let objective = |theta: &[T]| {
        let psi = prepare_ansatz(spec, theta).expect("parameter count checked");
        energy_unchecked(h, psi.amplitudes())
    };
    let res = spsa_maximize(objective, config, initial)?;
    let state = prepare_ansatz(spec, &res.params)?;
    Ok(VqeResult {
        energy: energy_unchecked(h, state.amplitudes()),
        state,
        params: res.params,
        trace: res.trace,
    })
}

/// One [`vqe_relax`] per seed, run in parallel; results follow `seeds` order.
pub fn vqe_multi_seed<T: Real>(
    h: &RelaxedHamiltonian<T>,
    spec: &AnsatzSpec,
    config: &SpsaConfig,
    seeds: &[u64],
) -> Vec<Result<VqeResult<T>>> {
    seeds
        .par_iter()
        .map(|&s| vqe_relax(h, spec, &config.with_seed(s)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ldf_coloring, Graph};
    use crate::qrac::{assign_paulis, build_hamiltonian, relaxed_energy, Deformation};

    fn edge_hamiltonian() -> RelaxedHamiltonian<f64> {
        let g = Graph::<f64>::unweighted(2, &[(0, 1)]).unwrap();
        let map = assign_paulis(&g, &ldf_coloring(&g), Deformation::Three).unwrap();
        build_hamiltonian(&g, &map).unwrap()
    }

    #[test]
    fn single_edge_reaches_top_energy() {
        let h = edge_hamiltonian();
        let spec = AnsatzSpec::new(2, 2).unwrap();
        let seeds: Vec<u64> = (0..10).collect();
        let hits = vqe_multi_seed(&h, &spec, &SpsaConfig::default(), &seeds)
            .into_iter()
            .filter(|r| (r.as_ref().unwrap().energy - 2.0).abs() < 0.05)
            .count();
        assert!(hits >= 8, "{hits}/10 seeds within 0.05 of 2");
    }

    #[test]
    fn zero_iterations_from_zero_is_vacuum_energy() {
        let h = edge_hamiltonian();
        let spec = AnsatzSpec::new(2, 1).unwrap();
        let cfg = SpsaConfig::default().with_iterations(0);
        let res = vqe_relax_from(&h, &spec, &cfg, &[0.0; 6]).unwrap();
        let vacuum = relaxed_energy(&h, &Statevector::zero_state(2)).unwrap();
        assert_eq!(res.energy, vacuum);
        assert_eq!(res.trace.len(), 1);
    }

    #[test]
    fn reported_energy_matches_state() {
        let h = edge_hamiltonian();
        let spec = AnsatzSpec::new(2, 1).unwrap();
        let res = vqe_relax(&h, &spec, &SpsaConfig::default().with_iterations(20)).unwrap();
        assert!((relaxed_energy(&h, &res.state).unwrap() - res.energy).abs() < 1e-12);
        assert!((res.energy - res.trace.last().unwrap().best_so_far).abs() < 1e-12);
    }

    #[test]
    fn width_mismatch_rejected() {
        let h = edge_hamiltonian();
        let spec = AnsatzSpec::new(3, 1).unwrap();
        assert!(vqe_relax(&h, &spec, &SpsaConfig::default()).is_err());
    }
}
