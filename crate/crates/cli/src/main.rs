use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qrao::pipeline::{
    encode_graph, relax, run_benchmark, run_pipeline, BenchmarkConfig, GraphSource, PipelineConfig,
    RelaxMethod, RoundingMethod, SolveReport,
};
use qrao::problems::{fixture, FIXTURE_NAMES};
use qrao::shadows::{collect_shadows, estimate_hamiltonian, records_to_csv};
use qrao::{graph::ldf_coloring, Deformation, Error};

#[derive(Parser)]
#[command(
    name = "qrao",
    version,
    about = "MaxCut through quantum relaxation and rounding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Color, encode, relax and round one graph.
    Solve(SolveArgs),
    /// Rounding quality over random 3-regular graphs.
    Benchmark(BenchmarkArgs),
    /// Largest-degree-first coloring of a graph.
    Color(GraphCommon),
    /// Relaxed Hamiltonian of a graph.
    Encode(EncodeArgs),
    /// Shadow records of the top relaxed eigenstate.
    Shadows(ShadowArgs),
    /// Bundled graphs.
    Fixtures(FixtureArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Vqe,
}

#[derive(Clone, Copy, ValueEnum)]
enum RoundingArg {
    Magic,
    Pauli,
    Both,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GraphCommon {
    /// Bundled graph name; see `fixtures`.
    #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
    fixture: Option<String>,
    /// Edge-list file.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: GraphCommon,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
    d: u8,
    #[arg(long, value_enum, default_value = "exact")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "both")]
    rounding: RoundingArg,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[arg(long, default_value_t = 500)]
    iterations: usize,
}

#[derive(Args)]
struct BenchmarkArgs {
    #[arg(long, value_delimiter = ',', default_value = "8,12,16")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    graphs: usize,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
    d: u8,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    common: GraphCommon,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
    d: u8,
}

#[derive(Args)]
struct ShadowArgs {
    #[command(flatten)]
    common: GraphCommon,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
    d: u8,
    #[arg(long, default_value_t = 1000)]
    shots: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct FixtureArgs {
    /// Print this fixture's edge list instead of the catalogue.
    #[arg(long)]
    dump: Option<String>,
    #[command(flatten)]
    output: Output,
}

fn deformation(d: u8) -> anyhow::Result<Deformation> {
    Ok(Deformation::try_from(usize::from(d))?)
}

impl GraphCommon {
    fn source(&self) -> GraphSource {
        match (&self.fixture, &self.graph) {
            (Some(name), _) => GraphSource::Fixture(name.clone()),
            (None, Some(path)) => GraphSource::File(path.clone()),
            (None, None) => unreachable!("clap requires one graph source"),
        }
    }
}

impl Output {
    fn format(&self, default: Format, allowed: &[Format]) -> anyhow::Result<Format> {
        let f = self.format.unwrap_or(default);
        if !allowed.contains(&f) {
            return Err(Error::InvalidArgument(
                "output format not supported by this command".into(),
            )
            .into());
        }
        Ok(f)
    }

    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(path) => {
                fs::write(path, text).with_context(|| format!("writing {}", path.display()))
            }
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn solve_csv(report: &SolveReport) -> String {
    let mut out = String::from("method,samples,best_cut,mean_cut,mean_gamma\n");
    for r in &report.rounding {
        let mean = r.cuts.iter().sum::<f64>() / r.cuts.len() as f64;
        let gamma = r.mean_gamma.map(|g| g.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.method, r.samples, r.best_cut, mean, gamma
        );
    }
    out
}

fn solve(args: &SolveArgs) -> anyhow::Result<()> {
    let format = args
        .common
        .output
        .format(Format::Json, &[Format::Json, Format::Csv])?;
    let mut cfg = PipelineConfig::new(args.common.source());
    cfg.deformation = deformation(args.d)?;
    cfg.method = match args.method {
        MethodArg::Exact => RelaxMethod::Exact,
        MethodArg::Vqe => RelaxMethod::Vqe,
    };
    cfg.rounding = match args.rounding {
        RoundingArg::Magic => RoundingMethod::Magic,
        RoundingArg::Pauli => RoundingMethod::Pauli,
        RoundingArg::Both => RoundingMethod::Both,
    };
    cfg.samples = args.samples;
    cfg.seed = args.seed;
    cfg.depth = args.depth;
    cfg.iterations = args.iterations;
    let report = run_pipeline(&cfg)?;
    let text = match format {
        Format::Csv => solve_csv(&report),
        _ => with_newline(report.to_json()),
    };
    args.common.output.emit(&text)
}

fn benchmark(args: &BenchmarkArgs) -> anyhow::Result<()> {
    let format = args
        .output
        .format(Format::Csv, &[Format::Json, Format::Csv])?;
    let outcome = run_benchmark(&BenchmarkConfig {
        sizes: args.sizes.clone(),
        graphs_per_size: args.graphs,
        samples: args.samples,
        deformation: deformation(args.d)?,
        seed: args.seed,
    })?;
    for (size, reason) in &outcome.skipped {
        eprintln!("warning: skipped size {size}: {reason}");
    }
    let text = match format {
        Format::Json => with_newline(serde_json::to_string_pretty(&json!({
            "version": qrao::pipeline::VERSION,
            "seed": args.seed,
            "deformation": args.d,
            "rows": outcome.rows,
            "skipped": outcome.skipped,
        }))?),
        _ => outcome.to_csv(),
    };
    args.output.emit(&text)
}

fn color(args: &GraphCommon) -> anyhow::Result<()> {
    let format = args
        .output
        .format(Format::Csv, &[Format::Json, Format::Csv])?;
    let g = args.source().load()?;
    let coloring = ldf_coloring(&g);
    let text = match format {
        Format::Json => with_newline(serde_json::to_string_pretty(&json!({
            "num_colors": coloring.num_colors(),
            "colors": coloring.colors(),
        }))?),
        _ => {
            let mut out = String::from("vertex,color\n");
            for (v, c) in coloring.colors().iter().enumerate() {
                let _ = writeln!(out, "{v},{c}");
            }
            out
        }
    };
    args.output.emit(&text)
}

fn encode(args: &EncodeArgs) -> anyhow::Result<()> {
    let format = args
        .common
        .output
        .format(Format::Text, &[Format::Json, Format::Text])?;
    let enc = encode_graph(args.common.source().load()?, deformation(args.d)?)?;
    let h = &enc.hamiltonian;
    let text = match format {
        Format::Json => {
            let terms: Vec<_> = h
                .terms()
                .iter()
                .map(|t| json!({ "coeff": t.coeff, "pauli": t.pauli.to_string() }))
                .collect();
            with_newline(serde_json::to_string_pretty(&json!({
                "num_colors": enc.num_colors,
                "num_qubits": h.num_qubits(),
                "constant": h.constant(),
                "terms": terms,
            }))?)
        }
        _ => h.to_text(),
    };
    args.common.output.emit(&text)
}

fn shadows(args: &ShadowArgs) -> anyhow::Result<()> {
    let format = args
        .common
        .output
        .format(Format::Csv, &[Format::Json, Format::Csv])?;
    let enc = encode_graph(args.common.source().load()?, deformation(args.d)?)?;
    let (psi, energy) = relax(&enc, RelaxMethod::Exact, 0, 0, args.seed)?;
    let records = collect_shadows(&psi, args.shots, args.seed)?;
    let text = match format {
        Format::Json => with_newline(serde_json::to_string_pretty(&json!({
            "version": qrao::pipeline::VERSION,
            "seed": args.seed,
            "shots": args.shots,
            "num_qubits": psi.num_qubits(),
            "relaxed_energy": energy,
            "estimated_energy": estimate_hamiltonian(&records, &enc.hamiltonian)?,
        }))?),
        _ => records_to_csv(&records),
    };
    args.common.output.emit(&text)
}

fn fixtures(args: &FixtureArgs) -> anyhow::Result<()> {
    if let Some(name) = &args.dump {
        return args.output.emit(&fixture::<f64>(name)?.to_edge_list());
    }
    let format = args
        .output
        .format(Format::Csv, &[Format::Json, Format::Csv])?;
    let mut rows = Vec::new();
    for name in FIXTURE_NAMES {
        let g = fixture::<f64>(name)?;
        rows.push((name, g.num_vertices(), g.num_edges(), g.total_weight()));
    }
    let text = match format {
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(n, v, e, w)| json!({ "name": n, "vertices": v, "edges": e, "total_weight": w }))
                .collect();
            with_newline(serde_json::to_string_pretty(&items)?)
        }
        _ => {
            let mut out = String::from("name,vertices,edges,total_weight\n");
            for (n, v, e, w) in rows {
                let _ = writeln!(out, "{n},{v},{e},{w}");
            }
            out
        }
    };
    args.output.emit(&text)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::SizeLimit(_)) => 3,
        Some(Error::Convergence { .. } | Error::Aborted { .. }) => 4,
        Some(Error::Internal(_)) => 1,
        Some(_) => 2,
        None => 1,
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Benchmark(a) => benchmark(a),
        Command::Color(a) => color(a),
        Command::Encode(a) => encode(a),
        Command::Shadows(a) => shadows(a),
        Command::Fixtures(a) => fixtures(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        let code = |e: Error| exit_code(&anyhow::Error::from(e));
        assert_eq!(
            code(Error::Parse {
                line: 3,
                message: "bad".into()
            }),
            2
        );
        assert_eq!(code(Error::NotFound("x".into())), 2);
        assert_eq!(code(Error::SizeLimit("x".into())), 3);
        assert_eq!(
            code(Error::Convergence {
                residual: 1.0,
                message: "x".into()
            }),
            4
        );
        assert_eq!(exit_code(&anyhow::anyhow!("other")), 1);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
