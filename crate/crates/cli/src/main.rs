use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sbm_gof::harness::{
    run_experiment, run_real_data, test_graph, to_json_pretty, write_run, ExperimentSpec, MembershipDesign,
    ModelKind, ModelSpec, Preset, PresetExperiment, PsiDist, RealDataOptions, RunOptions, SequentialSettings,
};
use sbm_gof::netgen::{read_edge_list, read_labels, write_edge_list, EdgeListOptions, Indexing};
use sbm_gof::select::{estimate_k, SelectOptions, ThresholdMode};
use sbm_gof::spectral::ClusteringOptions;
use sbm_gof::{Error, ErrorKind, Result, SeededRng};

#[derive(Parser)]
#[command(name = "sbm-gof", version, about = "Goodness-of-fit tests for stochastic block models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph from a block model and write it as an edge list.
    Gen(GenArgs),
    /// Test whether a graph fits a block model with K0 communities.
    Test(TestArgs),
    /// Estimate the number of communities by sequential testing.
    EstimateK(EstimateArgs),
    /// Run a simulation experiment.
    Simulate(SimulateArgs),
    /// Test the largest connected component of an observed network.
    RealData(RealDataArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Sbm,
    Dcbm,
    Mmbm,
}

#[derive(Clone, Copy, ValueEnum)]
enum MembershipArg {
    Random,
    Balanced,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Paper,
    Smoke,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    NullDist,
    Errors,
    SelectK,
}

#[derive(Clone, Copy, ValueEnum)]
enum Design {
    Sparsity,
    RandomB,
}

#[derive(Args)]
struct GraphInput {
    /// Edge list: one `i j` pair per line, `#` comments.
    edges: PathBuf,
    /// Label file: one label per line, or `id label` pairs.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Node ids start at 1.
    #[arg(long)]
    one_based: bool,
}

impl GraphInput {
    fn options(&self) -> EdgeListOptions {
        EdgeListOptions {
            indexing: if self.one_based { Indexing::One } else { Indexing::Zero },
            ..EdgeListOptions::default()
        }
    }
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output path (file for reports and graphs, directory for simulations).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the full JSON report to stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Generator configuration (JSON); flags below are ignored when given.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "sbm")]
    model: ModelArg,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "k")]
    k: Option<usize>,
    /// Sparsity level: 3r within, r between communities.
    #[arg(long)]
    r: Option<f64>,
    /// Block matrix rows separated by `;`, entries by `,`.
    #[arg(long = "b")]
    b: Option<String>,
    #[arg(long, value_enum, default_value = "random")]
    membership: MembershipArg,
    #[arg(long, default_value_t = 0.0)]
    psi_lo: f64,
    #[arg(long, default_value_t = 1.0)]
    psi_hi: f64,
    #[arg(long, default_value_t = 0.5)]
    dirichlet_alpha: f64,
    /// Also write the generating labels (one per line).
    #[arg(long)]
    labels_out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long)]
    k0: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Bootstrap correction with M replicates (50 when no value is given).
    #[arg(long, num_args = 0..=1, default_missing_value = "50")]
    bootstrap: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    input: GraphInput,
    /// Level of each stage (quantile threshold).
    #[arg(long, default_value_t = 1e-4)]
    alpha: f64,
    /// Growing threshold `c n^eps` given as `c,eps`.
    #[arg(long, value_name = "C,EPS")]
    power_law: Option<String>,
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long, num_args = 0..=1, default_missing_value = "50")]
    bootstrap: Option<usize>,
    /// Leading eigenvectors used for clustering at every stage.
    #[arg(long)]
    embedding_dim: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(value_enum)]
    experiment: Experiment,
    /// Experiment specification (JSON); overrides the preset.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "smoke")]
    preset: PresetArg,
    /// Design of the select-k experiment.
    #[arg(long, value_enum, default_value = "sparsity")]
    design: Design,
    /// Replicate count override.
    #[arg(long)]
    reps: Option<usize>,
    /// Bootstrap replicate override.
    #[arg(long, num_args = 0..=1, default_missing_value = "50")]
    bootstrap: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RealDataArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long, default_value_t = 2)]
    k0: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, num_args = 0..=1, default_missing_value = "50")]
    bootstrap: Option<usize>,
    /// Also run sequential estimation at this level.
    #[arg(long)]
    sequential_alpha: Option<f64>,
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long)]
    embedding_dim: Option<usize>,
    #[command(flatten)]
    common: Common,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_matrix(text: &str) -> Result<Vec<Vec<f64>>> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parameter(format!("bad block matrix entry `{v}`")))
                })
                .collect()
        })
        .collect()
}

fn emit<T: serde::Serialize>(value: &T, common: &Common, human: &str) -> Result<()> {
    let text = to_json_pretty(value)?;
    if let Some(path) = &common.out {
        write_text(path, &text)?;
    }
    if common.json {
        print!("{text}");
    } else {
        println!("{human}");
    }
    Ok(())
}

fn gen(args: &GenArgs) -> Result<()> {
    let mut spec: ModelSpec = match &args.config {
        Some(path) => serde_json::from_str(&read_text(path)?)?,
        None => ModelSpec {
            model: match args.model {
                ModelArg::Sbm => ModelKind::Sbm,
                ModelArg::Dcbm => ModelKind::Dcbm,
                ModelArg::Mmbm => ModelKind::Mmbm,
            },
            n: args.n.ok_or_else(|| Error::Parameter("--n is required without --config".into()))?,
            k: args.k.ok_or_else(|| Error::Parameter("--k is required without --config".into()))?,
            b: args.b.as_deref().map(parse_matrix).transpose()?,
            r: args.r,
            membership: match args.membership {
                MembershipArg::Random => MembershipDesign::Random,
                MembershipArg::Balanced => MembershipDesign::Balanced,
            },
            psi_dist: matches!(args.model, ModelArg::Dcbm).then_some(PsiDist::Uniform {
                lo: args.psi_lo,
                hi: args.psi_hi,
            }),
            alpha: matches!(args.model, ModelArg::Mmbm).then_some(args.dirichlet_alpha),
            seed: None,
        },
    };
    if args.seed.is_some() {
        spec.seed = args.seed;
    }
    let seed = spec.seed.unwrap_or(1);
    let sample = spec.sample(&SeededRng::new(seed))?;
    match &args.out {
        Some(path) => write_edge_list(path, &sample.graph)?,
        None => print!("{}", sbm_gof::netgen::format_edge_list(&sample.graph)),
    }
    if let Some(path) = &args.labels_out {
        let m = sample
            .membership
            .ok_or_else(|| Error::Parameter("the mixed-membership model has no hard labels".into()))?;
        let text: String = m.labels().iter().map(|l| format!("{l}\n")).collect();
        write_text(path, &text)?;
    }
    eprintln!(
        "generated {} nodes, {} edges (seed {seed})",
        sample.graph.n(),
        sample.graph.edge_count()
    );
    Ok(())
}

fn test(args: &TestArgs) -> Result<()> {
    let list = read_edge_list(&args.input.edges, args.input.options())?;
    let nodes: Vec<usize> = (0..list.graph.n()).collect();
    let labels = match &args.input.labels {
        Some(path) => Some(read_labels(path)?.membership_for(&list, &nodes)?),
        None => None,
    };
    let mut rng = SeededRng::new(args.common.seed);
    let res = test_graph(&list.graph, args.k0, labels.as_ref(), args.alpha, args.bootstrap, &mut rng)?;
    let human = format!(
        "K0={} statistic={} threshold={} reject={} p_bound={}",
        res.k0, res.statistic, res.threshold, res.reject, res.p_value_bound
    );
    emit(&res, &args.common, &human)
}

fn threshold_mode(alpha: f64, power_law: Option<&str>) -> Result<ThresholdMode> {
    match power_law {
        None => Ok(ThresholdMode::Quantile { alpha }),
        Some(text) => {
            let parts: Vec<&str> = text.split(',').collect();
            let [c, e] = parts.as_slice() else {
                return Err(Error::Parameter("--power-law expects `c,eps`".into()));
            };
            let parse = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parameter(format!("bad number `{v}` in --power-law")))
            };
            Ok(ThresholdMode::PowerLaw {
                c: parse(c)?,
                exponent: parse(e)?,
            })
        }
    }
}

fn estimate(args: &EstimateArgs) -> Result<()> {
    let list = read_edge_list(&args.input.edges, args.input.options())?;
    let opts = SelectOptions {
        mode: threshold_mode(args.alpha, args.power_law.as_deref())?,
        k_max: args.kmax,
        bootstrap: args.bootstrap,
        test: sbm_gof::gof::TestOptions {
            clustering: ClusteringOptions {
                embedding_dim: args.embedding_dim,
                ..ClusteringOptions::default()
            },
            ..Default::default()
        },
    };
    let res = estimate_k(&list.graph, &opts, &mut SeededRng::new(args.common.seed))?;
    let human = format!(
        "k_hat={} capped={} statistics={:?}",
        res.k_hat,
        res.capped,
        res.trace.iter().map(|s| s.statistic).collect::<Vec<_>>()
    );
    emit(&res, &args.common, &human)
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let mut spec = match &args.spec {
        Some(path) => ExperimentSpec::from_json(&read_text(path)?)?,
        None => {
            let which = match (args.experiment, args.design) {
                (Experiment::NullDist, _) => PresetExperiment::NullDist,
                (Experiment::Errors, _) => PresetExperiment::ErrorTable,
                (Experiment::SelectK, Design::Sparsity) => PresetExperiment::SelectKSparsity,
                (Experiment::SelectK, Design::RandomB) => PresetExperiment::SelectKRandomB,
            };
            let preset = match args.preset {
                PresetArg::Paper => Preset::Paper,
                PresetArg::Smoke => Preset::Smoke,
            };
            ExperimentSpec::preset(which, preset)
        }
    };
    let expected = match args.experiment {
        Experiment::NullDist => "null-dist",
        Experiment::Errors => "error-table",
        Experiment::SelectK => "select-k",
    };
    if spec.kind() != expected {
        return Err(Error::Parameter(format!(
            "spec describes a {} experiment, not {expected}",
            spec.kind()
        )));
    }
    if let Some(seed) = args.seed {
        spec.set_seed(seed);
    }
    if let Some(reps) = args.reps {
        if let Some(r) = spec.replicates_mut() {
            *r = reps;
        }
    }
    if let Some(m) = args.bootstrap {
        match &mut spec {
            ExperimentSpec::NullDist(s) => s.bootstrap = m,
            ExperimentSpec::ErrorTable(s) => s.bootstrap = m,
            ExperimentSpec::SelectK(s) => s.bootstrap = m,
            _ => {}
        }
    }
    spec.validate()?;
    let out = run_experiment(&spec, &RunOptions { threads: args.threads })?;
    write_run(&args.out, spec.kind(), spec.seed(), &spec, &out)?;
    if args.json {
        print!("{}", to_json_pretty(&out.summary)?);
    } else if let Some((_, table)) = out.files.iter().find(|(n, _)| n == "table.csv") {
        print!("{table}");
    } else {
        print!("{}", to_json_pretty(&out.summary)?);
    }
    Ok(())
}

fn real_data(args: &RealDataArgs) -> Result<()> {
    let opts = RealDataOptions {
        edges: args.input.edges.clone(),
        labels: args.input.labels.clone(),
        one_based: args.input.one_based,
        k0: args.k0,
        alpha: args.alpha,
        bootstrap: args.bootstrap,
        seed: args.common.seed,
        sequential: args.sequential_alpha.map(|alpha| SequentialSettings {
            threshold: ThresholdMode::Quantile { alpha },
            k_max: args.kmax,
            bootstrap: args.bootstrap,
            embedding_dim: args.embedding_dim,
        }),
    };
    let report = run_real_data(&opts)?;
    let mut human = format!(
        "component {} of {} nodes; K0={} statistic={} threshold={} reject={}",
        report.component_nodes,
        report.nodes,
        report.test.k0,
        report.test.statistic,
        report.test.threshold,
        report.test.reject
    );
    if let Some(p) = &report.sequential {
        human.push_str(&format!("\nsequential: k_hat={} group sizes {:?}", p.k_hat, p.group_sizes));
    }
    emit(&report, &args.common, &human)
}

fn exit_code(err: &Error) -> u8 {
    match err.kind() {
        ErrorKind::Parameter => 2,
        ErrorKind::Io => 3,
        ErrorKind::Numeric => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Test(a) => test(a),
        Command::EstimateK(a) => estimate(a),
        Command::Simulate(a) => simulate(a),
        Command::RealData(a) => real_data(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
