//! Classical shadows from random single-qubit Pauli measurements.
//!
//! Each shot measures every qubit in an independently uniform X, Y or Z basis. For a Pauli
//! string `P` the single-shot estimate is `∏_{q∈supp P} 3·o_q` when every support qubit was
//! measured in `P`'s letter and `0` otherwise; its mean is unbiased for `⟨P⟩`.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::pauli::{Axis, PauliString};
use crate::qrac::{RelaxedHamiltonian, VertexPauliMap};
use crate::rounding::sample_rng;
use crate::scalar::{lit, Real};
use crate::sim::gates::Mat2;
use crate::sim::Statevector;

/// Bases and ±1 outcomes of one shot, indexed by qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShadowShot {
    pub bases: Vec<Axis>,
    pub outcomes: Vec<i8>,
}

/// Rotation taking the `+1` eigenstate of `axis` to `|0⟩`: `H` for X, `H·S†` for Y.
pub fn basis_rotation<T: Real>(axis: Axis) -> Mat2<T> {
    match axis {
        Axis::X => Mat2::hadamard(),
        Axis::Y => Mat2::hadamard() * Mat2::s_dagger(),
        Axis::Z => Mat2::identity(),
    }
}

/// Measures each qubit in `bases[q]`, ascending, with collapse.
pub fn measure_in_bases<T: Real, R: Rng + ?Sized>(
    psi: &Statevector<T>,
    bases: &[Axis],
    rng: &mut R,
) -> Result<Vec<i8>> {
    if bases.len() != psi.num_qubits() {
        return Err(invalid(format!(
            "{} bases for {} qubits",
            bases.len(),
            psi.num_qubits()
        )));
    }
    let mut state = psi.clone();
    Ok(bases
        .iter()
        .enumerate()
        .map(|(q, &axis)| {
            if axis != Axis::Z {
                state.apply_single_qubit_unchecked(q, &basis_rotation(axis));
            }
            state.measure(q, rng)
        })
        .collect())
}

/// `shots` independent shots; shot `i` draws from [`sample_rng`]`(seed, i)`.
pub fn collect_shadows<T: Real>(
    psi: &Statevector<T>,
    shots: usize,
    seed: u64,
) -> Result<Vec<ShadowShot>> {
    if shots == 0 {
        return Err(invalid("need at least one shot"));
    }
    (0..shots as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let bases: Vec<Axis> = (0..psi.num_qubits())
                .map(|_| Axis::ALL[rng.random_range(0..3)])
                .collect();
            let outcomes = measure_in_bases(psi, &bases, &mut rng)?;
            Ok(ShadowShot { bases, outcomes })
        })
        .collect()
}

fn check_estimable(p: &PauliString) -> Result<()> {
    match p.weight() {
        0 => Err(invalid("identity needs no estimate")),
        1 | 2 => Ok(()),
        w => Err(Error::Unsupported(format!("Pauli weight {w} exceeds 2"))),
    }
}

/// Single-shot estimate of `⟨P⟩`; `|value| ≤ 3^weight`.
pub fn single_shot_estimate(shot: &ShadowShot, p: &PauliString) -> f64 {
    let mut value = 1.0;
    for (q, axis) in p.letters() {
        if shot.bases[q] != axis {
            return 0.0;
        }
        value *= 3.0 * shot.outcomes[q] as f64;
    }
    value
}

/// Mean single-shot estimate over `records`.
pub fn estimate_pauli<T: Real>(records: &[ShadowShot], p: &PauliString) -> Result<T> {
    check_estimable(p)?;
    if records.is_empty() {
        return Err(invalid("no shadow records"));
    }
    if records.iter().any(|s| s.bases.len() != p.num_qubits()) {
        return Err(invalid("records and Pauli act on different registers"));
    }
    let sum: f64 = records.iter().map(|s| single_shot_estimate(s, p)).sum();
    Ok(lit(sum / records.len() as f64))
}

/// `constant + Σ coeff·estimate_pauli(term)`.
pub fn estimate_hamiltonian<T: Real>(
    records: &[ShadowShot],
    h: &RelaxedHamiltonian<T>,
) -> Result<T> {
    let mut total = h.constant();
    for t in h.terms() {
        total += t.coeff * estimate_pauli::<T>(records, &t.pauli)?;
    }
    Ok(total)
}

/// Cut read from estimated edge parities: edge `e` counts as cut when its estimate is
/// negative. Exact whenever every estimate has the sign of `⟨O_e⟩` on an embedded state.
pub fn estimate_embedded_cut<T: Real>(
    records: &[ShadowShot],
    g: &Graph<T>,
    map: &VertexPauliMap,
) -> Result<T> {
    let mut cut = T::zero();
    for e in g.edges() {
        let (o, _) = crate::pauli::multiply(&map.vertex_pauli(e.u), &map.vertex_pauli(e.v))?;
        if estimate_pauli::<f64>(records, &o)? < 0.0 {
            cut += e.weight;
        }
    }
    Ok(cut)
}

/// Accuracy `ε`, failure probability `δ` and edge count for the shot-count bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleBudget {
    pub epsilon: f64,
    pub delta: f64,
    pub num_edges: usize,
}

impl SampleBudget {
    pub fn new(epsilon: f64, delta: f64, num_edges: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(invalid("epsilon must be positive"));
        }
        validate_delta_edges(delta, num_edges)?;
        Ok(Self {
            epsilon,
            delta,
            num_edges,
        })
    }

    fn log_term(&self) -> f64 {
        (2.0 * self.num_edges as f64 / self.delta).ln()
    }
}

fn validate_delta_edges(delta: f64, num_edges: usize) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta must lie in (0, 1)"));
    }
    if num_edges == 0 {
        return Err(invalid("need at least one edge"));
    }
    Ok(())
}

fn ceil_count(x: f64) -> u64 {
    x.ceil() as u64
}

/// Shots for relative error `ε` on `tr(Hρ)`: `⌈(2·3⁴/ε²)·ln(2|E|/δ)⌉`.
pub fn samples_multiplicative(b: &SampleBudget) -> u64 {
    ceil_count(2.0 * 81.0 / (b.epsilon * b.epsilon) * b.log_term())
}

/// Shots for additive error `ε` on `tr(Hρ)`: `⌈(3⁴/(2ε²))·|E|²·ln(2|E|/δ)⌉`.
pub fn samples_additive(b: &SampleBudget) -> u64 {
    let e = b.num_edges as f64;
    ceil_count(81.0 / (2.0 * b.epsilon * b.epsilon) * e * e * b.log_term())
}

/// Shots for reading every edge parity of an embedded state: `⌈2·3⁴·ln(2|E|/δ)⌉`.
pub fn samples_embedded(num_edges: usize, delta: f64) -> Result<u64> {
    validate_delta_edges(delta, num_edges)?;
    Ok(ceil_count(
        2.0 * 81.0 * (2.0 * num_edges as f64 / delta).ln(),
    ))
}

/// `shot,qubit,basis,outcome`, one row per measured qubit.
pub fn records_to_csv(records: &[ShadowShot]) -> String {
    let mut out = String::from("shot,qubit,basis,outcome\n");
    for (i, s) in records.iter().enumerate() {
        for (q, (axis, o)) in s.bases.iter().zip(&s.outcomes).enumerate() {
            let _ = writeln!(out, "{i},{q},{axis},{o}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ldf_coloring, Assignment};
    use crate::pauli::expectation;
    use crate::qrac::{assign_paulis, build_hamiltonian, embed_assignment, Deformation};

    #[test]
    fn forced_z_on_zero_state() {
        let psi = Statevector::<f64>::zero_state(1);
        let mut rng = sample_rng(0, 0);
        for _ in 0..50 {
            assert_eq!(
                measure_in_bases(&psi, &[Axis::Z], &mut rng).unwrap(),
                vec![1]
            );
        }
    }

    #[test]
    fn rotations_map_plus_eigenstates_to_zero() {
        for (axis, bloch) in [
            (Axis::X, [1.0, 0.0, 0.0]),
            (Axis::Y, [0.0, 1.0, 0.0]),
            (Axis::Z, [0.0, 0.0, 1.0]),
        ] {
            let mut psi = Statevector::<f64>::from_bloch(&[bloch]).unwrap();
            psi.apply_single_qubit(0, &basis_rotation(axis)).unwrap();
            assert!((psi.prob_zero(0) - 1.0).abs() < 1e-14, "{axis}");
        }
    }

    #[test]
    fn basis_frequencies_are_uniform() {
        let recs = collect_shadows(&Statevector::<f64>::zero_state(1), 3000, 4).unwrap();
        let z = recs.iter().filter(|s| s.bases[0] == Axis::Z).count() as f64 / 3000.0;
        assert!((z - 1.0 / 3.0).abs() < 0.03, "{z}");
        assert!(recs
            .iter()
            .filter(|s| s.bases[0] == Axis::Z)
            .all(|s| s.outcomes[0] == 1));
    }

    #[test]
    fn reproducible() {
        let psi = Statevector::<f64>::random(3, 1);
        assert_eq!(
            collect_shadows(&psi, 100, 9).unwrap(),
            collect_shadows(&psi, 100, 9).unwrap()
        );
        assert!(collect_shadows(&psi, 0, 9).is_err());
    }

    #[test]
    fn single_shot_values() {
        let shot = ShadowShot {
            bases: vec![Axis::Z, Axis::X],
            outcomes: vec![1, -1],
        };
        assert_eq!(single_shot_estimate(&shot, &"ZI".parse().unwrap()), 3.0);
        assert_eq!(single_shot_estimate(&shot, &"ZX".parse().unwrap()), -9.0);
        assert_eq!(single_shot_estimate(&shot, &"XX".parse().unwrap()), 0.0);
    }

    #[test]
    fn weight_limits() {
        let recs = collect_shadows(&Statevector::<f64>::zero_state(3), 10, 0).unwrap();
        assert!(matches!(
            estimate_pauli::<f64>(&recs, &"XYZ".parse().unwrap()),
            Err(Error::Unsupported(_))
        ));
        assert!(estimate_pauli::<f64>(&[], &"XI".parse::<PauliString>().unwrap()).is_err());
    }

    #[test]
    fn unbiased_on_two_qubits() {
        let psi = Statevector::<f64>::random(2, 21);
        let recs = collect_shadows(&psi, 100_000, 2).unwrap();
        for a in ["X", "Y", "Z"] {
            for b in ["X", "Y", "Z"] {
                let p: PauliString = format!("{a}{b}").parse().unwrap();
                let est = estimate_pauli::<f64>(&recs, &p).unwrap();
                let exact = expectation(&p, &psi).unwrap();
                assert!((est - exact).abs() < 0.05, "{p}: {est} vs {exact}");
            }
        }
    }

    #[test]
    fn embedded_cut_recovered() {
        let g = crate::problems::fixture::<f64>("PETERSEN").unwrap();
        let map = assign_paulis(&g, &ldf_coloring(&g), Deformation::Three).unwrap();
        let m = Assignment::from_bits(0b01_1010_0110, 10);
        let psi = embed_assignment::<f64>(&map, &m).unwrap().state;
        let s = samples_embedded(g.num_edges(), 0.05).unwrap() as usize;
        let recs = collect_shadows(&psi, s, 3).unwrap();
        let cut = crate::graph::cut_value(&g, &m).unwrap();
        assert_eq!(estimate_embedded_cut(&recs, &g, &map).unwrap(), cut);
        let h = build_hamiltonian(&g, &map).unwrap();
        assert!((estimate_hamiltonian(&recs, &h).unwrap() - cut).abs() < 3.0);
    }

    #[test]
    fn bounds_scale() {
        let b = SampleBudget::new(0.1, 0.01, 24).unwrap();
        assert_eq!(
            samples_multiplicative(&b),
            (16200.0 * 4800f64.ln()).ceil() as u64
        );
        let one = SampleBudget::new(0.5, 2.0 / std::f64::consts::E, 1).unwrap();
        assert_eq!(
            samples_multiplicative(&one),
            (162.0 / 0.25f64).ceil() as u64
        );
        assert_eq!(
            samples_additive(&SampleBudget::new(0.5, 0.1, 10).unwrap()),
            (81.0 / 0.5 * 100.0 * 200f64.ln()).ceil() as u64
        );
        assert_eq!(
            samples_embedded(24, 0.05).unwrap(),
            (162.0 * 960f64.ln()).ceil() as u64
        );
        // frozen from an independent evaluation of the closed forms
        assert_eq!(samples_multiplicative(&b), 137_318);
        assert_eq!(samples_embedded(24, 0.05).unwrap(), 1113);
        assert_eq!(
            samples_additive(&SampleBudget::new(0.5, 0.1, 10).unwrap()),
            85_833
        );
        assert!(SampleBudget::new(0.0, 0.1, 1).is_err());
        assert!(SampleBudget::new(0.1, 1.0, 1).is_err());
        assert!(samples_embedded(0, 0.1).is_err());
    }

    #[test]
    fn csv_rows() {
        let recs = vec![ShadowShot {
            bases: vec![Axis::X, Axis::Z],
            outcomes: vec![-1, 1],
        }];
        assert_eq!(
            records_to_csv(&recs),
            "shot,qubit,basis,outcome\n0,0,X,-1\n0,1,Z,1\n"
        );
    }
}
