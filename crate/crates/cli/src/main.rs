//! `chromasphere` command-line tool.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 negative mathematical
//! result (no embedding, improper coloring, ...). Reports go to stdout or
//! `--out` as JSON with 17 significant digits per float.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use chromasphere::colorings::{
    borsuk_ulam_search, cap_area_report, cap_lune_coloring, n4_lower_bound, properness_sample,
    sweep_csv, table_report, tetrahedral_coloring, tetrahedral_threshold, ColoringError,
    RegionColoring, DEFAULT_BOUNDARY_MARGIN,
};
use chromasphere::embedding::{
    certify_vars, closed_form_gk, embed_graph, embed_graph_in_window, min_radius_search,
    rigidity_certificate, stability_probe_vars, EmbedError, EmbedOptions, EmbeddingVars,
    GkEmbedding, MinRadiusOptions, NewtonOptions, RigidityCertificate,
};
use chromasphere::sampling::with_threads;
use chromasphere::udgraph::{
    chromatic_number, gen_complete, gen_cycle, gen_groetzsch, gen_pendant_cycle, EmbeddedGraph,
    Graph, GraphError, DEFAULT_UNIT_TOL,
};

use output::{emit, to_json};

#[derive(Parser, Debug)]
#[command(
    name = "chromasphere",
    version,
    about = "Unit-distance graphs and colorings of spheres"
)]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Embed G_k in closed form, or any graph by multi-start least squares.
    Embed(EmbedArgs),
    /// Perturb the pendants of a G_k embedding and re-solve for the cycle.
    Perturb(PerturbArgs),
    /// Exact chromatic number of a graph.
    Chroma { graph: PathBuf },
    /// Smallest radius admitting a unit-distance embedding.
    Minradius(MinRadiusArgs),
    /// Checks on the region colorings.
    #[command(subcommand)]
    Color(ColorCommand),
    /// Antipodal search on the distance-to-color map.
    Bu(BuArgs),
    /// Verified and cited bounds on the chromatic number at one radius.
    Table {
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a generated graph as JSON.
    #[command(subcommand)]
    Graph(GraphCommand),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Obj,
}

#[derive(Args, Debug)]
struct EmbedArgs {
    /// Closed-form embedding of the pendant cycle G_k.
    #[arg(long, conflicts_with = "graph")]
    gk: Option<usize>,
    /// Star-polygon step for --gk (default k).
    #[arg(long, requires = "gk")]
    winding: Option<usize>,
    /// Graph JSON file to embed numerically.
    #[arg(long, required_unless_present = "gk")]
    graph: Option<PathBuf>,
    #[arg(long)]
    r: f64,
    /// Let the radius float in [r − w, r + w]; needed for rigid graphs.
    #[arg(long, requires = "graph")]
    r_window: Option<f64>,
    #[arg(long, default_value_t = 32)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Residual accepted as an embedding.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct PerturbArgs {
    /// Output of `embed --gk`, or an embedded pendant-cycle graph.
    embedding: PathBuf,
    #[arg(long)]
    eta: f64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Args, Debug)]
struct MinRadiusArgs {
    graph: PathBuf,
    #[arg(long)]
    r_lo: f64,
    #[arg(long)]
    r_hi: f64,
    #[arg(long, default_value_t = 200)]
    starts: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol_r: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Construction {
    Tetra,
    Caplune,
}

#[derive(Args, Debug)]
struct ColoringSource {
    #[arg(long, conflicts_with = "coloring", requires = "r")]
    construction: Option<Construction>,
    #[arg(long)]
    r: Option<f64>,
    /// Cap angular radius for the cap-lune construction.
    #[arg(long)]
    theta0: Option<f64>,
    /// Coloring JSON file.
    #[arg(long, required_unless_present = "construction")]
    coloring: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ColorCommand {
    /// Sample unit pairs and report monochromatic ones.
    Verify {
        #[command(flatten)]
        source: ColoringSource,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BOUNDARY_MARGIN)]
        margin: f64,
    },
    /// Area of the color-0 cap of the cap-lune coloring at r = 1/2 + ε.
    Area {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        theta0: Option<f64>,
        /// Also estimate the area from this many uniform samples.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Averaging lower bound on the order of a 4-chromatic unit-distance graph.
    Bound {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        theta0: Option<f64>,
    },
    /// CSV of cap area and bound against ε.
    Sweep {
        #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-3,1e-4")]
        epsilons: Vec<f64>,
    },
    /// Radius where the tetrahedral coloring stops being proper.
    Threshold {
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Write a construction as coloring JSON.
    Export {
        #[command(flatten)]
        source: ColoringSource,
    },
}

#[derive(Args, Debug)]
struct BuArgs {
    #[command(flatten)]
    source: ColoringSource,
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    colors: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    level: usize,
    #[arg(long, default_value_t = 1e-12)]
    refine_tol: f64,
    /// Exit 2 when the best gap exceeds this.
    #[arg(long, default_value_t = 1e-6)]
    gap_tol: f64,
}

#[derive(Subcommand, Debug)]
enum GraphCommand {
    Groetzsch,
    Cycle {
        #[arg(long)]
        m: usize,
    },
    Pendant {
        #[arg(long)]
        k: usize,
    },
    Complete {
        #[arg(long)]
        n: usize,
    },
}

enum Failure {
    Usage(String),
    Negative(String),
}

macro_rules! usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Usage(e.to_string())
            }
        }
    )*};
}

usage_from!(std::io::Error, EmbedError, ColoringError, GraphError);

type Outcome = Result<(), Failure>;

/// Report of `embed`.
#[derive(Serialize, Deserialize)]
struct EmbedReport {
    embedding: EmbeddedGraph,
    residual_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<GkEmbedding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<RigidityCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual_history: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EmbeddingInput {
    Report(EmbedReport),
    Plain(EmbeddedGraph),
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Usage(format!("cannot parse {}: {e}", path.display())))
}

fn write_report<T: Serialize>(value: &T, out: Option<&Path>) -> Outcome {
    emit(&to_json(value), out)?;
    Ok(())
}

fn load_coloring(src: &ColoringSource) -> Result<RegionColoring, Failure> {
    match (src.construction, &src.coloring) {
        (_, Some(path)) => parse(path),
        (Some(c), None) => {
            let r = src
                .r
                .ok_or_else(|| Failure::Usage("--r is required".into()))?;
            Ok(match c {
                Construction::Tetra => tetrahedral_coloring(r)?,
                Construction::Caplune => cap_lune_coloring(r, src.theta0, None)?,
            })
        }
        (None, None) => Err(Failure::Usage("give --construction or --coloring".into())),
    }
}

fn cmd_embed(a: &EmbedArgs, out: Option<&Path>) -> Outcome {
    let report = if let Some(k) = a.gk {
        let emb = match closed_form_gk(a.r, k, a.winding) {
            Ok(e) => e,
            Err(e @ EmbedError::InfeasibleWinding { .. })
            | Err(e @ EmbedError::RadiusOutOfRange { .. }) => {
                return Err(Failure::Negative(e.to_string()))
            }
            Err(e) => return Err(e.into()),
        };
        let cert = rigidity_certificate(&emb);
        let report = EmbedReport {
            embedding: emb.to_embedded(DEFAULT_UNIT_TOL)?,
            residual_norm: chromasphere::embedding::residual_norm(&emb.vars, a.r),
            closed_form: Some(emb),
            certificate: Some(cert),
            iterations: None,
            residual_history: None,
        };
        if !cert.certified {
            emit_embed(&report, a.format, out)?;
            return Err(Failure::Negative("embedding is not certified rigid".into()));
        }
        report
    } else {
        let path = a
            .graph
            .as_ref()
            .expect("clap requires --graph without --gk");
        let g: Graph = parse(path)?;
        let opts = EmbedOptions {
            starts: a.starts,
            seed: a.seed,
            tol: a.tol,
            ..EmbedOptions::default()
        };
        let solved = match a.r_window {
            Some(w) => embed_graph_in_window(&g, a.r - w, a.r + w, &opts),
            None => embed_graph(&g, a.r, &opts),
        };
        let rep = match solved {
            Ok(rep) => rep,
            Err(e @ EmbedError::NoEmbeddingFound { .. }) => {
                return Err(Failure::Negative(e.to_string()))
            }
            Err(e) => return Err(e.into()),
        };
        EmbedReport {
            embedding: rep.solution.embedding,
            residual_norm: rep.residual_norm,
            closed_form: None,
            certificate: None,
            iterations: Some(rep.iterations),
            residual_history: Some(rep.residual_history),
        }
    };
    emit_embed(&report, a.format, out)
}

fn emit_embed(report: &EmbedReport, format: Format, out: Option<&Path>) -> Outcome {
    match format {
        Format::Json => write_report(report, out),
        Format::Obj => Ok(emit(&report.embedding.to_obj(), out)?),
    }
}

fn cmd_perturb(a: &PerturbArgs, out: Option<&Path>) -> Outcome {
    let embedded = match parse::<EmbeddingInput>(&a.embedding)? {
        EmbeddingInput::Report(r) => r.embedding,
        EmbeddingInput::Plain(e) => e,
    };
    let vars = EmbeddingVars::from_embedded(&embedded)?;
    let r = embedded.radius();
    let cert = certify_vars(&vars, r);
    if !cert.certified {
        return Err(Failure::Negative(
            "input embedding has a singular Jacobian; not certified".into(),
        ));
    }
    let opts = NewtonOptions {
        tol: a.tol,
        ..NewtonOptions::default()
    };
    write_report(
        &stability_probe_vars(&vars, r, a.eta, a.trials, a.seed, opts),
        out,
    )
}

fn cmd_minradius(a: &MinRadiusArgs, out: Option<&Path>) -> Outcome {
    let g: Graph = parse(&a.graph)?;
    let mut opts = MinRadiusOptions::new(a.r_lo, a.r_hi);
    opts.tol_r = a.tol_r;
    opts.embed.starts = a.starts;
    opts.embed.seed = a.seed;
    match min_radius_search(&g, &opts) {
        Ok(rep) => write_report(&rep, out),
        Err(e @ EmbedError::NoFeasibleRadius { .. }) => Err(Failure::Negative(e.to_string())),
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct BoundReport {
    epsilon: f64,
    r: f64,
    n4_bound: f64,
}

fn cmd_color(c: &ColorCommand, out: Option<&Path>) -> Outcome {
    match c {
        ColorCommand::Verify {
            source,
            samples,
            seed,
            margin,
        } => {
            let coloring = load_coloring(source)?;
            let rep = properness_sample(&coloring, *samples, *seed, *margin);
            write_report(&rep, out)?;
            if rep.is_clean() {
                Ok(())
            } else {
                Err(Failure::Negative(format!(
                    "{} monochromatic unit pairs found",
                    rep.violations.len()
                )))
            }
        }
        ColorCommand::Area {
            epsilon,
            theta0,
            samples,
            seed,
        } => write_report(
            &cap_area_report(*epsilon, *theta0, samples.map(|n| (n, *seed)))?,
            out,
        ),
        ColorCommand::Bound { epsilon, theta0 } => write_report(
            &BoundReport {
                epsilon: *epsilon,
                r: 0.5 + epsilon,
                n4_bound: n4_lower_bound(0.5 + epsilon, *theta0)?,
            },
            out,
        ),
        ColorCommand::Sweep { epsilons } => Ok(emit(&sweep_csv(epsilons)?, out)?),
        ColorCommand::Threshold { tol } => write_report(&tetrahedral_threshold(*tol)?, out),
        ColorCommand::Export { source } => write_report(&load_coloring(source)?, out),
    }
}

fn cmd_bu(a: &BuArgs, out: Option<&Path>) -> Outcome {
    let [ca, cb] = a.colors[..] else {
        return Err(Failure::Usage(
            "--colors takes exactly two color ids".into(),
        ));
    };
    let coloring = load_coloring(&a.source)?;
    let rep = borsuk_ulam_search(&coloring, ca, cb, a.level, a.refine_tol)?;
    write_report(&rep, out)?;
    if rep.gap <= a.gap_tol {
        Ok(())
    } else {
        Err(Failure::Negative(format!(
            "best gap {:e} above {:e}",
            rep.gap, a.gap_tol
        )))
    }
}

fn run(cli: &Cli) -> Outcome {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Embed(a) => cmd_embed(a, out),
        Command::Perturb(a) => cmd_perturb(a, out),
        Command::Chroma { graph } => write_report(&chromatic_number(&parse(graph)?), out),
        Command::Minradius(a) => cmd_minradius(a, out),
        Command::Color(c) => cmd_color(c, out),
        Command::Bu(a) => cmd_bu(a, out),
        Command::Table { r, seed } => write_report(&table_report(*r, *seed)?, out),
        Command::Graph(g) => {
            let graph = match g {
                GraphCommand::Groetzsch => gen_groetzsch(),
                GraphCommand::Cycle { m } if *m >= 3 => gen_cycle(*m),
                GraphCommand::Pendant { k } if *k >= 1 => gen_pendant_cycle(*k),
                GraphCommand::Complete { n } if *n >= 1 => gen_complete(*n),
                _ => return Err(Failure::Usage("graph size out of range".into())),
            };
            write_report(&graph, out)
        }
    }
}

fn threads_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var("CHROMASPHERE_THREADS") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| {
                Failure::Usage(format!(
                    "CHROMASPHERE_THREADS={s} is not a positive integer"
                ))
            }),
        Err(_) => Ok(None),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = threads_from_env().and_then(|threads| with_threads(threads, || run(&cli)));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Negative(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
