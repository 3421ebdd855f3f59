//! `nrg`: command-line front end for the Norros–Reittu toolkit.
//!
//! Exit codes: 0 success, 1 a bound was violated or is vacuous, 2 invalid
//! arguments or configuration, 3 the request was refused as too large.

mod output;
mod verify;

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nrg_core::bounds::{
    cluster_tail_upper, default_h_heavy_tail, default_h_light_tail, default_h_prime, diagnostics, egamma_upper,
    theorem1_bound, theorem1_threshold, theorem2_threshold, write_bound_table, BoundRow, EGammaBound, DEFAULT_DELTA,
};
use nrg_core::bp::{
    default_bp_cap, martingale_residual, run_marked_bp, run_walk, GammaConfig, MixedPoisson, OffspringLaw,
};
use nrg_core::dist::{build_weights, WeightSequence};
use nrg_core::explore::{components_union_find, explore_cluster, Adjacency};
use nrg_core::mc::{CfName, CfValue, SpecConfig};
use nrg_core::oracle::exact_component_laws;
use nrg_core::rng::RngContract;
use nrg_core::sampler::{sample_naive, GraphSample, PoissonCollapseSampler};

use output::{emit, CommandManifest};

pub enum Failure {
    Config(String),
    Refused(String),
    Violated(String),
    Runtime(String),
}

impl Failure {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Failure::Runtime(format!("{}: {e}", path.display()))
    }

    fn exit_code(&self) -> u8 {
        match self {
            Failure::Violated(_) => 1,
            Failure::Config(_) | Failure::Runtime(_) => 2,
            Failure::Refused(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Refused(m) | Failure::Violated(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<nrg_core::Error> for Failure {
    fn from(e: nrg_core::Error) -> Self {
        match e {
            nrg_core::Error::Refused(m) => Failure::Refused(m),
            nrg_core::Error::Io(e) => Failure::Runtime(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "nrg",
    version,
    about = "Simulate and check bounds for the critical Norros–Reittu random graph"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Weight distribution `1 - F(x) = min(1, c_F x^{-(τ-1)})`.
#[derive(clap::Args)]
struct SpecArgs {
    /// Power-law exponent τ > 3.
    #[arg(long)]
    tau: f64,
    /// Tail constant c_F, or `critical` for the value giving ν = 1.
    #[arg(long, default_value = "critical", value_parser = parse_cf)]
    c_f: CfValue,
}

impl SpecArgs {
    fn spec(&self) -> Result<nrg_core::dist::DistributionSpec, Failure> {
        Ok(SpecConfig::ParetoTail {
            tau: self.tau,
            c_f: self.c_f,
        }
        .build()?)
    }
}

/// Weights from a distribution (`--tau`, `--c-f`, `--n`) or from a weight CSV.
#[derive(clap::Args)]
struct WeightArgs {
    #[arg(long, required_unless_present = "weights_file", conflicts_with = "weights_file")]
    tau: Option<f64>,
    #[arg(long, default_value = "critical", value_parser = parse_cf)]
    c_f: CfValue,
    #[arg(long, required_unless_present = "weights_file")]
    n: Option<usize>,
    /// CSV with header `index,weight`, as written by `nrg weights`.
    #[arg(long)]
    weights_file: Option<PathBuf>,
}

impl WeightArgs {
    fn weights(&self) -> Result<WeightSequence, Failure> {
        match &self.weights_file {
            Some(p) => Ok(WeightSequence::read_csv(open(p)?)?),
            None => {
                let spec = SpecArgs {
                    tau: self.tau.unwrap(),
                    c_f: self.c_f,
                }
                .spec()?;
                Ok(build_weights(&spec, self.n.unwrap())?)
            }
        }
    }
}

fn parse_cf(s: &str) -> Result<CfValue, String> {
    if s == "critical" {
        return Ok(CfValue::Named(CfName::Critical));
    }
    s.parse::<f64>()
        .map(CfValue::Value)
        .map_err(|_| format!("expected a number or `critical`, got `{s}`"))
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Naive,
    Collapse,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Csv,
    Binary,
}

#[derive(Clone, Copy, ValueEnum)]
enum LawArg {
    MarkWeight,
    FreshMark,
}

#[derive(Subcommand)]
enum Command {
    /// Write the weight sequence w_1 >= ... >= w_n as CSV.
    Weights {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample one graph.
    Sample {
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long, value_enum, default_value = "collapse")]
        method: Method,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: GraphFormat,
        /// Permit the pairwise sampler above its size limit.
        #[arg(long)]
        allow_large: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Summarize the components of a graph file.
    Components {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: GraphFormat,
        /// Vertex count; required for CSV edge lists.
        #[arg(long)]
        n: Option<usize>,
        /// Component size counts as CSV.
        #[arg(long)]
        out: PathBuf,
        /// Also record the exploration trace started from this vertex.
        #[arg(long, requires = "trace_out")]
        trace_vertex: Option<usize>,
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Run the thinned marked branching process.
    Bp {
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        replicates: u64,
        /// Censoring cap on explored marks; default 10 n.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, value_enum, default_value = "mark-weight")]
        offspring_law: LawArg,
        /// One row per replicate.
        #[arg(long)]
        out: PathBuf,
        /// Step trace of replicate 0.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Run the dominating walk with its stopping time γ.
    Walk {
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        h_prime: u64,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        replicates: u64,
        /// Draw Υ_1 from a uniform mark instead of the size-biased one.
        #[arg(long)]
        uniform_first_step: bool,
        /// One row per replicate.
        #[arg(long)]
        out: PathBuf,
        /// Path S_0, S_1, ... of replicate 0.
        #[arg(long)]
        path_out: Option<PathBuf>,
    },
    /// Tabulate the analytic bounds.
    Bounds {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
        omega: Vec<f64>,
        /// δ in H = ⌊δ n^{1/(τ-1)}⌋ for τ < 4.
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
        #[arg(long)]
        h: Option<u64>,
        #[arg(long)]
        h_prime: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact laws of |C_max| and |C(V)| by enumeration (n <= 6).
    Oracle {
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long)]
        cmax_out: PathBuf,
        #[arg(long)]
        cluster_out: PathBuf,
    },
    /// Run the experiments in a JSON config and check every bound.
    Verify {
        config: PathBuf,
        /// Seed for experiments without one (overridden by the config's `seed`).
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, env = "NR_WORKERS")]
        workers: Option<usize>,
        /// Overrides the config's `output_dir`.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
}

fn open(p: &Path) -> Result<BufReader<File>, Failure> {
    File::open(p).map(BufReader::new).map_err(|e| Failure::io(p, e))
}

fn law(l: LawArg) -> OffspringLaw {
    match l {
        LawArg::MarkWeight => OffspringLaw::MarkWeight,
        LawArg::FreshMark => OffspringLaw::FreshMark,
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Weights { spec, n, out } => {
            let ws = build_weights(&spec.spec()?, n)?;
            let mut m = CommandManifest::new(None);
            m.record(&out, emit(&out, |b| ws.write_csv(b))?);
            m.write_next_to(&out)?;
        }
        Command::Sample {
            weights,
            method,
            seed,
            stream,
            format,
            allow_large,
            out,
        } => {
            let ws = weights.weights()?;
            let contract = RngContract::new(seed, stream);
            let g = match method {
                Method::Naive => sample_naive(&ws, contract, allow_large)?,
                Method::Collapse => PoissonCollapseSampler::new(&ws)?.sample(contract),
            };
            let mut m = CommandManifest::new(Some(seed));
            let digest = match format {
                GraphFormat::Csv => emit(&out, |b| g.write_edge_csv(b))?,
                GraphFormat::Binary => emit(&out, |b| g.write_binary(b))?,
            };
            m.record(&out, digest);
            m.write_next_to(&out)?;
            eprintln!(
                "{} vertices, {} edges, {} self-loop events discarded",
                g.n(),
                g.edge_count(),
                g.self_loops_discarded
            );
        }
        Command::Components {
            graph,
            format,
            n,
            out,
            trace_vertex,
            trace_out,
        } => {
            let g = match format {
                GraphFormat::Binary => GraphSample::read_binary(open(&graph)?)?,
                GraphFormat::Csv => {
                    let n = n.ok_or_else(|| Failure::Config("--n is required for CSV edge lists".into()))?;
                    GraphSample::read_edge_csv(open(&graph)?, n)?
                }
            };
            let summary = components_union_find(&g);
            let mut m = CommandManifest::new(None);
            m.record(&out, emit(&out, |b| summary.write_csv(b))?);
            if let (Some(v), Some(path)) = (trace_vertex, trace_out) {
                let trace = explore_cluster(&Adjacency::new(&g), v, true)?;
                m.record(&path, emit(&path, |b| trace.write_csv(b))?);
            }
            m.write_next_to(&out)?;
            eprintln!(
                "|C_max| = {}, {} components",
                summary.c_max(),
                summary.component_count()
            );
        }
        Command::Bp {
            weights,
            seed,
            replicates,
            cap,
            offspring_law,
            out,
            trace_out,
        } => {
            let ws = weights.weights()?;
            let src = MixedPoisson::new(&ws)?;
            let cap = cap.unwrap_or_else(|| default_bp_cap(ws.n()));
            if cap == 0 {
                return Err(Failure::Config("--cap must be positive".into()));
            }
            let traces: Vec<_> = (0..replicates)
                .map(|r| run_marked_bp(&src, &mut RngContract::new(seed, r).rng(), cap, law(offspring_law)))
                .collect();
            let mut m = CommandManifest::new(Some(seed));
            m.record(
                &out,
                emit(&out, |b| {
                    let mut wtr = csv::Writer::from_writer(b);
                    wtr.write_record(["replicate", "initial_mark", "t_star", "explored_marks", "censored"])?;
                    for (r, t) in traces.iter().enumerate() {
                        wtr.write_record([
                            r.to_string(),
                            t.initial_mark.to_string(),
                            t.t_star.map(|x| x.to_string()).unwrap_or_default(),
                            t.explored_marks.to_string(),
                            t.censored.to_string(),
                        ])?;
                    }
                    wtr.flush()?;
                    Ok(())
                })?,
            );
            if let (Some(path), Some(t)) = (trace_out, traces.first()) {
                m.record(&path, emit(&path, |b| t.write_csv(b))?);
            }
            m.write_next_to(&out)?;
        }
        Command::Walk {
            weights,
            h,
            h_prime,
            k,
            seed,
            replicates,
            uniform_first_step,
            out,
            path_out,
        } => {
            let ws = weights.weights()?;
            let src = MixedPoisson::new(&ws)?;
            let cfg = GammaConfig::new(h, h_prime, k)?;
            let record = path_out.is_some();
            let paths: Vec<_> = (0..replicates)
                .map(|r| {
                    let rec = record && r == 0;
                    run_walk(
                        &src,
                        &cfg,
                        &mut RngContract::new(seed, r).rng(),
                        !uniform_first_step,
                        rec,
                    )
                })
                .collect();
            let mut m = CommandManifest::new(Some(seed));
            m.record(
                &out,
                emit(&out, |b| {
                    let mut wtr = csv::Writer::from_writer(b);
                    wtr.write_record([
                        "replicate",
                        "gamma",
                        "s_gamma",
                        "positive_through_k",
                        "martingale_residual",
                    ])?;
                    for (r, p) in paths.iter().enumerate() {
                        wtr.write_record([
                            r.to_string(),
                            p.gamma.to_string(),
                            p.s_gamma.to_string(),
                            p.positive_through_k.to_string(),
                            martingale_residual(&ws, p).to_string(),
                        ])?;
                    }
                    wtr.flush()?;
                    Ok(())
                })?,
            );
            if let (Some(path), Some(p)) = (path_out, paths.first()) {
                m.record(&path, emit(&path, |b| p.write_csv(b))?);
            }
            m.write_next_to(&out)?;
        }
        Command::Bounds {
            spec,
            n,
            omega,
            delta,
            h,
            h_prime,
            out,
        } => {
            let rows = bound_rows(&spec, &n, &omega, delta, h, h_prime)?;
            let mut m = CommandManifest::new(None);
            m.record(&out, emit(&out, |b| write_bound_table(&rows, b))?);
            m.write_next_to(&out)?;
        }
        Command::Oracle {
            weights,
            cmax_out,
            cluster_out,
        } => {
            let ws = weights.weights()?;
            let (cmax, cluster) = exact_component_laws(&ws)?;
            let mut m = CommandManifest::new(None);
            m.record(&cmax_out, emit(&cmax_out, |b| cmax.write_csv(b))?);
            m.record(&cluster_out, emit(&cluster_out, |b| cluster.write_csv(b))?);
            m.write_next_to(&cmax_out)?;
        }
        Command::Verify {
            config,
            seed,
            workers,
            output_dir,
        } => verify::run(verify::VerifyArgs {
            config,
            seed,
            workers,
            output_dir,
        })?,
    }
    Ok(())
}

/// Largest-component bound (τ > 4), `E(γ)` bound and cluster-tail bound at
/// `k` equal to the largest-component threshold, for each `(n, ω)`.
fn bound_rows(
    spec_args: &SpecArgs,
    ns: &[usize],
    omegas: &[f64],
    delta: f64,
    h: Option<u64>,
    h_prime: Option<u64>,
) -> Result<Vec<BoundRow>, Failure> {
    let spec = spec_args.spec()?;
    let tau = spec_args.tau;
    if tau == 4.0 {
        return Err(Failure::Config("no bound is tabulated at tau = 4".into()));
    }
    let mut rows = Vec::new();
    for &n in ns {
        let ws = build_weights(&spec, n)?;
        for &omega in omegas {
            let (k, h) = if tau > 4.0 {
                (
                    theorem1_threshold(n, omega)?,
                    h.unwrap_or_else(|| default_h_light_tail(n, omega)),
                )
            } else {
                (
                    theorem2_threshold(n, tau, omega)?,
                    h.unwrap_or_else(|| default_h_heavy_tail(n, tau, delta)),
                )
            };
            let hp = h_prime.unwrap_or_else(|| default_h_prime(h));
            let cfg = GammaConfig::new(h, hp, k.max(1) as u64)?;
            let row = |bound: Option<f64>, source: &str| BoundRow {
                n,
                tau,
                omega,
                h,
                h_prime: hp,
                k: cfg.k,
                bound,
                source: source.into(),
            };
            if tau > 4.0 {
                rows.push(row(
                    Some(theorem1_bound(&spec, omega)?.leading),
                    "largest_component_leading",
                ));
            }
            let ds = diagnostics(&ws, &cfg)?;
            match egamma_upper(&ds) {
                EGammaBound::Bound(eg) => {
                    rows.push(row(Some(eg), "egamma"));
                    rows.push(row(Some(cluster_tail_upper(&ds, eg.max(1.0))?), "cluster_tail"));
                }
                EGammaBound::Vacuous => {
                    rows.push(row(None, "egamma"));
                    rows.push(row(None, "cluster_tail"));
                }
            }
        }
    }
    Ok(rows)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("nrg: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
