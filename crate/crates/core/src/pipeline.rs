//! End-to-end flows: color → encode → relax → round, and the random-graph benchmark.

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{
    brute_force_maxcut, ldf_coloring, random_regular, Graph, BRUTE_FORCE_MAX_VERTICES,
};
use crate::problems::{fixture, fixture_reference_optimum};
use crate::qrac::{
    assign_paulis, build_hamiltonian, relaxed_energy, Deformation, RelaxedHamiltonian,
    VertexPauliMap,
};
use crate::rounding::{
    expected_rounded_energy, magic_round_batch, pauli_round, sample_rng, RoundingReport,
    PAULI_ZERO_TOL,
};
use crate::sim::eigen::EIGEN_MAX_QUBITS;
use crate::sim::{extremal_eigenstate, vqe_relax, AnsatzSpec, SpsaConfig, Statevector};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Residual tolerance for exact relaxation.
pub const EIGEN_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum GraphSource {
    Fixture(String),
    File(PathBuf),
    Inline { name: String, graph: Graph<f64> },
}

impl GraphSource {
    pub fn name(&self) -> String {
        match self {
            GraphSource::Fixture(n) => n.to_ascii_uppercase(),
            GraphSource::File(p) => p.display().to_string(),
            GraphSource::Inline { name, .. } => name.clone(),
        }
    }

    pub fn load(&self) -> Result<Graph<f64>> {
        match self {
            GraphSource::Fixture(n) => fixture(n),
            GraphSource::File(p) => Graph::read_edge_list(p),
            GraphSource::Inline { graph, .. } => Ok(graph.clone()),
        }
    }

    fn reference_optimum(&self) -> Option<f64> {
        match self {
            GraphSource::Fixture(n) => fixture_reference_optimum(n),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelaxMethod {
    Exact,
    Vqe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundingMethod {
    Magic,
    Pauli,
    Both,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub source: GraphSource,
    pub deformation: Deformation,
    pub method: RelaxMethod,
    pub rounding: RoundingMethod,
    pub samples: usize,
    pub seed: u64,
    pub depth: usize,
    pub iterations: usize,
}

impl PipelineConfig {
    pub fn new(source: GraphSource) -> Self {
        Self {
            source,
            deformation: Deformation::Three,
            method: RelaxMethod::Exact,
            rounding: RoundingMethod::Both,
            samples: 100,
            seed: 0,
            depth: 2,
            iterations: 500,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub name: String,
    pub vertices: usize,
    pub edges: usize,
    pub total_weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub version: String,
    pub seed: u64,
    pub graph: GraphSummary,
    pub deformation: usize,
    pub num_colors: usize,
    pub num_qubits: usize,
    pub method: RelaxMethod,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub iterations: Option<usize>,
    pub relaxed_energy: f64,
    pub expected_rounded_energy: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub optimal_cut: Option<f64>,
    /// `brute_force` or `reference`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub optimal_source: Option<String>,
    pub rounding: Vec<RoundingReport>,
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Graph, encoding and Hamiltonian for one deformation.
pub struct Encoded {
    pub graph: Graph<f64>,
    pub num_colors: usize,
    pub map: VertexPauliMap,
    pub hamiltonian: RelaxedHamiltonian<f64>,
}

pub fn encode_graph(graph: Graph<f64>, d: Deformation) -> Result<Encoded> {
    let coloring = ldf_coloring(&graph);
    let map = assign_paulis(&graph, &coloring, d)?;
    let hamiltonian = build_hamiltonian(&graph, &map)?;
    Ok(Encoded {
        num_colors: coloring.num_colors(),
        graph,
        map,
        hamiltonian,
    })
}

/// Independent seed for one pipeline stage.
pub fn stage_seed(seed: u64, stage: u64) -> u64 {
    seed ^ stage.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

const STAGE_VQE: u64 = 1;
const STAGE_MAGIC: u64 = 2;
const STAGE_PAULI: u64 = 3;

/// Optimum by brute force when small enough, else the fixture's reference value.
pub fn optimal_cut_for(
    source: &GraphSource,
    g: &Graph<f64>,
) -> Result<Option<(f64, &'static str)>> {
    if g.num_vertices() <= BRUTE_FORCE_MAX_VERTICES.min(24) {
        let (_, v) = brute_force_maxcut(g)?;
        return Ok(Some((v, "brute_force")));
    }
    Ok(source.reference_optimum().map(|v| (v, "reference")))
}

/// Relaxed state by exact eigensolve or VQE.
pub fn relax(
    enc: &Encoded,
    method: RelaxMethod,
    depth: usize,
    iterations: usize,
    seed: u64,
) -> Result<(Statevector<f64>, f64)> {
    let n = enc.hamiltonian.num_qubits();
    if n > EIGEN_MAX_QUBITS {
        return Err(Error::SizeLimit(format!(
            "{n} qubits exceeds the simulator limit of {EIGEN_MAX_QUBITS}"
        )));
    }
    match method {
        RelaxMethod::Exact => extremal_eigenstate(&enc.hamiltonian, EIGEN_TOL),
        RelaxMethod::Vqe => {
            let spec = AnsatzSpec::new(n, depth)?;
            let cfg = SpsaConfig::default()
                .with_iterations(iterations)
                .with_seed(stage_seed(seed, STAGE_VQE));
            let res = vqe_relax(&enc.hamiltonian, &spec, &cfg)?;
            Ok((res.state, res.energy))
        }
    }
}

pub fn run_pipeline(cfg: &PipelineConfig) -> Result<SolveReport> {
    if cfg.samples == 0 && cfg.rounding != RoundingMethod::Pauli {
        return Err(invalid("magic rounding needs at least one sample"));
    }
    let graph = cfg.source.load()?;
    let enc = encode_graph(graph, cfg.deformation)?;
    let optimal = optimal_cut_for(&cfg.source, &enc.graph)?;
    let (psi, _) = relax(&enc, cfg.method, cfg.depth, cfg.iterations, cfg.seed)?;
    let energy = relaxed_energy(&enc.hamiltonian, &psi)?;
    let expected = expected_rounded_energy(&enc.hamiltonian, &psi, cfg.deformation)?;
    let opt_value = optimal.map(|o| o.0);

    let mut rounding = Vec::new();
    if matches!(cfg.rounding, RoundingMethod::Magic | RoundingMethod::Both) {
        let batch = magic_round_batch(
            &psi,
            &enc.map,
            &enc.graph,
            cfg.samples,
            stage_seed(cfg.seed, STAGE_MAGIC),
        )?;
        rounding.push(RoundingReport::magic(&batch, opt_value));
    }
    if matches!(cfg.rounding, RoundingMethod::Pauli | RoundingMethod::Both) {
        let mut rng = sample_rng(stage_seed(cfg.seed, STAGE_PAULI), 0);
        let sample = pauli_round(&psi, &enc.map, &enc.graph, PAULI_ZERO_TOL, &mut rng)?;
        rounding.push(RoundingReport::pauli(&sample, opt_value));
    }
    let vqe = cfg.method == RelaxMethod::Vqe;
    Ok(SolveReport {
        version: VERSION.to_string(),
        seed: cfg.seed,
        graph: GraphSummary {
            name: cfg.source.name(),
            vertices: enc.graph.num_vertices(),
            edges: enc.graph.num_edges(),
            total_weight: enc.graph.total_weight(),
        },
        deformation: cfg.deformation.value(),
        num_colors: enc.num_colors,
        num_qubits: enc.map.num_qubits(),
        method: cfg.method,
        depth: vqe.then_some(cfg.depth),
        iterations: vqe.then_some(cfg.iterations),
        relaxed_energy: energy,
        expected_rounded_energy: expected,
        optimal_cut: opt_value,
        optimal_source: optimal.map(|o| o.1.to_string()),
        rounding,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkConfig {
    pub sizes: Vec<usize>,
    pub graphs_per_size: usize,
    pub samples: usize,
    pub deformation: Deformation,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub size: usize,
    pub graph_seed: u64,
    pub method: String,
    pub gamma: f64,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct BenchmarkOutcome {
    /// Sorted by size, then graph seed; magic rows precede the Pauli row of each graph.
    pub rows: Vec<BenchmarkRow>,
    /// Sizes skipped with the reason.
    pub skipped: Vec<(usize, String)>,
}

impl BenchmarkOutcome {
    /// Mean γ over rows of `method` at `size`; per-graph magic means are averaged so every
    /// graph counts once.
    pub fn ensemble_mean(&self, size: usize, method: &str) -> Option<f64> {
        let mut per_graph: Vec<(u64, f64, usize)> = Vec::new();
        for r in self
            .rows
            .iter()
            .filter(|r| r.size == size && r.method == method)
        {
            match per_graph.last_mut() {
                Some(last) if last.0 == r.graph_seed => {
                    last.1 += r.gamma;
                    last.2 += 1;
                }
                _ => per_graph.push((r.graph_seed, r.gamma, 1)),
            }
        }
        if per_graph.is_empty() {
            return None;
        }
        Some(per_graph.iter().map(|(_, s, k)| s / *k as f64).sum::<f64>() / per_graph.len() as f64)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("size,graph_seed,method,gamma\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", r.size, r.graph_seed, r.method, r.gamma);
        }
        out
    }
}

/// Seed of graph `index` within a benchmark seeded by `seed`.
pub fn benchmark_graph_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add(index as u64)
}

/// Per graph: exact top eigenstate, magic rounding (one row per sample), Pauli rounding (one
/// row), each as γ against the brute-force optimum.
pub fn run_benchmark(cfg: &BenchmarkConfig) -> Result<BenchmarkOutcome> {
    if cfg.samples == 0 || cfg.graphs_per_size == 0 {
        return Err(invalid("samples and graphs per size must be positive"));
    }
    if let Some(&bad) = cfg.sizes.iter().find(|&&n| n * 3 % 2 == 1 || n < 4) {
        return Err(invalid(format!("no 3-regular graph on {bad} vertices")));
    }
    let mut sizes = cfg.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let mut outcome = BenchmarkOutcome::default();
    for size in sizes {
        if size > BRUTE_FORCE_MAX_VERTICES {
            outcome.skipped.push((
                size,
                format!("{size} vertices exceeds the brute-force limit"),
            ));
            continue;
        }
        let per_graph: Vec<Result<Option<Vec<BenchmarkRow>>>> = (0..cfg.graphs_per_size)
            .into_par_iter()
            .map(|i| benchmark_one(size, benchmark_graph_seed(cfg.seed, i), cfg))
            .collect();
        let mut rows = Vec::new();
        for r in per_graph {
            match r? {
                Some(graph_rows) => rows.extend(graph_rows),
                None => {
                    outcome
                        .skipped
                        .push((size, "register exceeds the eigensolver limit".to_string()));
                    rows.clear();
                    break;
                }
            }
        }
        outcome.rows.extend(rows);
    }
    Ok(outcome)
}

fn benchmark_one(
    size: usize,
    graph_seed: u64,
    cfg: &BenchmarkConfig,
) -> Result<Option<Vec<BenchmarkRow>>> {
    let g = random_regular::<f64>(size, 3, graph_seed)?;
    let enc = encode_graph(g, cfg.deformation)?;
    if enc.map.num_qubits() > EIGEN_MAX_QUBITS {
        return Ok(None);
    }
    let (_, optimum) = brute_force_maxcut(&enc.graph)?;
    let (psi, _) = extremal_eigenstate(&enc.hamiltonian, EIGEN_TOL)?;
    let batch = magic_round_batch(
        &psi,
        &enc.map,
        &enc.graph,
        cfg.samples,
        stage_seed(graph_seed, STAGE_MAGIC),
    )?;
    let mut rng = sample_rng(stage_seed(graph_seed, STAGE_PAULI), 0);
    let pauli = pauli_round(&psi, &enc.map, &enc.graph, PAULI_ZERO_TOL, &mut rng)?;
    let row = |method: &str, cut: f64| BenchmarkRow {
        size,
        graph_seed,
        method: method.to_string(),
        gamma: cut / optimum,
    };
    let mut rows: Vec<BenchmarkRow> = batch.cuts.iter().map(|&c| row("magic", c)).collect();
    rows.push(row("pauli", pauli.cut));
    Ok(Some(rows))
}
