use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use indgap_core::analytic::{decompose_f_u, grid_csv, grid_rows, FuPolys};
use indgap_core::certify::{certified_gap, CertifyConfig};
use indgap_core::families::{asymptotic_ratio, family_csv, FamilyKind, FamilySpec};
use indgap_core::graph::{parse_edge_list, parse_spec, Graph, GraphError};
use indgap_core::indpoly::independence_poly;
use indgap_core::num::{parse_rational, MIN_PRECISION};
use indgap_core::roots::{all_roots, beta_bracket};
use indgap_core::rug::Rational;
use indgap_core::verify::{run_suite, Suite, SuiteConfig};
use indgap_core::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_TOO_LARGE: u8 = 3;
const EXIT_DISCONNECTED: u8 = 4;
const EXIT_INVALID_CERT: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "indgap", version, about = "Independence polynomials, their smallest root, and certified zero-free gaps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug)]
struct Opts {
    /// Graph spec such as path:5, cycle:6, star:3, kbip:2x3, complete:4, gnp:10:0.3:seed7.
    #[arg(long, global = true)]
    graph: Option<String>,
    /// Edge-list file: header "n m", then one "u v" pair per line.
    #[arg(long, global = true)]
    file: Option<PathBuf>,
    /// Width of the β enclosure (rational or decimal).
    #[arg(long, global = true, default_value = "1e-12")]
    tol: String,
    /// Working precision in bits.
    #[arg(long, global = true, env = "INDGAP_PRECISION", default_value_t = 256)]
    precision: u32,
    /// Series order for the positivity checks.
    #[arg(long, global = true, default_value_t = 30)]
    order: usize,
    /// Number of θ grid points on [0, π].
    #[arg(long, global = true, default_value_t = 720)]
    grid: usize,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Size limit for exhaustive suites and family tables.
    #[arg(long, global = true)]
    nmax: Option<usize>,
    /// Worker threads for verify (0 = automatic).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the coefficients of I(G, z).
    Poly { spec: Option<String> },
    /// Emit a gap certificate; exit 5 if any internal check fails.
    Certify { spec: Option<String> },
    /// Run a property suite: positivity, majorant, gamma, soundness, families, combinatorics or all.
    Verify {
        suite: String,
        /// Number of random graphs added to the graph suites.
        #[arg(long, default_value_t = 200)]
        random: usize,
    },
    /// θ, |f_u(β e^{iθ})| and the majorant over the grid, as CSV.
    PlotData {
        spec: Option<String>,
        /// Pivot vertex (default: a center).
        #[arg(long)]
        pivot: Option<usize>,
    },
    /// Gap ratio table for a family: path, cycle or bipartite.
    Family { kind: String },
    /// Numeric roots of I(G, z) with residuals.
    Roots { spec: Option<String> },
}

/// Validated settings shared by the subcommands.
#[derive(Debug)]
struct RunConfig {
    tol: Rational,
    precision: u32,
    order: usize,
    grid: usize,
    out: Option<PathBuf>,
    format: Option<Format>,
    seed: u64,
    nmax: Option<usize>,
    jobs: usize,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Graph(GraphError::TooManyVertices(_)) => EXIT_TOO_LARGE,
            Error::Graph(GraphError::Disconnected) => EXIT_DISCONNECTED,
            Error::Graph(GraphError::Parse { .. })
            | Error::Graph(GraphError::InvalidParameter(_))
            | Error::Graph(GraphError::CycleTooSmall(_))
            | Error::Graph(GraphError::SelfLoop(_))
            | Error::Graph(GraphError::VertexOutOfRange { .. }) => EXIT_PARSE,
            _ => EXIT_FAILURE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Error::from(e).into()
    }
}

type Outcome = Result<u8, Failure>;

impl RunConfig {
    fn from_opts(o: &Opts) -> Result<Self, Failure> {
        let tol = parse_rational(&o.tol).ok_or_else(|| Failure::new(EXIT_PARSE, format!("cannot parse tolerance {:?}", o.tol)))?;
        if tol <= 0 {
            return Err(Failure::new(EXIT_PARSE, "tolerance must be positive"));
        }
        if o.precision < MIN_PRECISION {
            return Err(Failure::new(EXIT_PARSE, format!("precision must be at least {MIN_PRECISION} bits")));
        }
        if o.grid < 16 {
            return Err(Failure::new(EXIT_PARSE, "grid needs at least 16 points"));
        }
        Ok(RunConfig {
            tol,
            precision: o.precision,
            order: o.order,
            grid: o.grid,
            out: o.out.clone(),
            format: o.format,
            seed: o.seed,
            nmax: o.nmax,
            jobs: o.jobs,
        })
    }

    fn certify_config(&self) -> CertifyConfig {
        CertifyConfig { tol: self.tol.clone(), precision: self.precision, grid: self.grid, seed: self.seed, ..CertifyConfig::default() }
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(p) => fs::write(p, text).map_err(|e| Failure::new(EXIT_FAILURE, format!("{}: {e}", p.display()))),
            None => {
                let mut out = io::stdout().lock();
                out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))
            }
        }
    }

    fn emit_json(&self, v: &Value) -> Result<(), Failure> {
        let mut s = serde_json::to_string_pretty(v).map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))?;
        s.push('\n');
        self.emit(&s)
    }
}

fn load_graph(spec: Option<&str>, opts: &Opts) -> Result<Graph, Failure> {
    match (spec.or(opts.graph.as_deref()), &opts.file) {
        (Some(s), None) => Ok(parse_spec(s)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
            Ok(parse_edge_list(&text)?.with_label(path.display().to_string()))
        }
        (Some(_), Some(_)) => Err(Failure::new(EXIT_PARSE, "give either a graph spec or --file, not both")),
        (None, None) => Err(Failure::new(EXIT_PARSE, "no graph given (use a spec, --graph or --file)")),
    }
}

fn cmd_poly(g: &Graph, cfg: &RunConfig) -> Outcome {
    let p = independence_poly(g);
    let coeffs: Vec<Value> = p
        .coeffs()
        .iter()
        .map(|c| c.to_i64().map_or_else(|| Value::String(c.to_string()), Value::from))
        .collect();
    match cfg.format.unwrap_or(Format::Json) {
        Format::Text => cfg.emit(&format!("{p}\n"))?,
        Format::Csv => {
            let mut s = String::from("k,coefficient\n");
            for (k, c) in p.coeffs().iter().enumerate() {
                s.push_str(&format!("{k},{c}\n"));
            }
            cfg.emit(&s)?
        }
        Format::Json => cfg.emit_json(&json!({ "graph": g.describe(), "n": g.n(), "coeffs": coeffs }))?,
    }
    Ok(0)
}

fn cmd_certify(g: &Graph, cfg: &RunConfig) -> Outcome {
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let cert = certified_gap(g, &cfg.certify_config())?;
    match cfg.format.unwrap_or(Format::Json) {
        Format::Text => cfg.emit(&cert.to_text())?,
        _ => cfg.emit_json(&cert.to_json())?,
    }
    Ok(if cert.valid { 0 } else { EXIT_INVALID_CERT })
}

fn cmd_verify(suite: &str, random: usize, cfg: &RunConfig) -> Outcome {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse().map_err(|e: Error| Failure::new(EXIT_PARSE, e.to_string()))?]
    };
    let scfg = SuiteConfig {
        nmax: cfg.nmax,
        random,
        seed: cfg.seed,
        order: cfg.order,
        grid: cfg.grid,
        precision: cfg.precision,
        tol: cfg.tol.clone(),
        jobs: cfg.jobs,
        ..SuiteConfig::default()
    };
    let mut reports = Vec::new();
    for s in suites {
        reports.push(run_suite(s, &scfg)?);
    }
    let ok = reports.iter().all(|r| r.passed());
    match cfg.format.unwrap_or(Format::Text) {
        Format::Json => cfg.emit_json(&serde_json::to_value(&reports).map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))?)?,
        _ => cfg.emit(&reports.iter().map(|r| r.to_text()).collect::<String>())?,
    }
    Ok(if ok { 0 } else { EXIT_FAILURE })
}

fn cmd_plot_data(g: &Graph, pivot: Option<usize>, cfg: &RunConfig) -> Outcome {
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let u = match pivot {
        Some(u) => u,
        None => g.center()?,
    };
    let beta = beta_bracket(g, &cfg.tol)?;
    let b = beta.refine(&independence_poly(g), cfg.precision).to_f64();
    let fu = FuPolys::new(g, u)?;
    let m = decompose_f_u(g, u)?.majorant();
    let rows = grid_rows(&fu, &m, b, cfg.grid)?;
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Json => cfg.emit_json(&json!({
            "graph": g.describe(),
            "pivot": u,
            "beta": beta.to_json(),
            "rows": rows,
        }))?,
        _ => cfg.emit(&grid_csv(&rows))?,
    }
    Ok(0)
}

fn cmd_family(kind: &str, cfg: &RunConfig) -> Outcome {
    let kind = match kind {
        "path" => FamilyKind::Path,
        "cycle" => FamilyKind::Cycle,
        "bipartite" | "kbip" => FamilyKind::Bipartite,
        other => return Err(Failure::new(EXIT_PARSE, format!("unknown family {other:?}"))),
    };
    let start = if kind == FamilyKind::Cycle { 3 } else { 1 };
    let nmax = cfg.nmax.unwrap_or(30).max(start);
    let rows: Vec<_> = (start..=nmax)
        .map(|n| FamilySpec::new(kind, n).map(|s| asymptotic_ratio(&s, cfg.precision)))
        .collect::<Result<_, _>>()?;
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.spec.n,
                        "beta": r.beta.to_f64(),
                        "alpha_modulus": r.alpha_modulus.to_f64(),
                        "ratio": r.ratio.to_f64(),
                        "leading_term": r.leading_term.to_f64(),
                    })
                })
                .collect();
            cfg.emit_json(&Value::Array(v))?
        }
        _ => cfg.emit(&family_csv(&rows))?,
    }
    Ok(0)
}

fn cmd_roots(g: &Graph, cfg: &RunConfig) -> Outcome {
    let p = independence_poly(g);
    if p.degree().unwrap_or(0) == 0 {
        return Err(Failure::new(EXIT_FAILURE, "I(G, z) is constant; there are no roots"));
    }
    let rs = all_roots(&p, cfg.precision)?;
    cfg.emit_json(&rs.to_json())?;
    Ok(0)
}

fn run(cli: &Cli) -> Outcome {
    let cfg = RunConfig::from_opts(&cli.opts)?;
    match &cli.command {
        Command::Poly { spec } => cmd_poly(&load_graph(spec.as_deref(), &cli.opts)?, &cfg),
        Command::Certify { spec } => cmd_certify(&load_graph(spec.as_deref(), &cli.opts)?, &cfg),
        Command::Verify { suite, random } => cmd_verify(suite, *random, &cfg),
        Command::PlotData { spec, pivot } => cmd_plot_data(&load_graph(spec.as_deref(), &cli.opts)?, *pivot, &cfg),
        Command::Family { kind } => cmd_family(kind, &cfg),
        Command::Roots { spec } => cmd_roots(&load_graph(spec.as_deref(), &cli.opts)?, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("indgap: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(args: &[&str]) -> Opts {
        let mut v = vec!["indgap"];
        v.extend_from_slice(args);
        v.push("poly");
        Cli::try_parse_from(v).unwrap().opts
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        assert_eq!(RunConfig::from_opts(&opts(&["--tol", "0"])).unwrap_err().code, EXIT_PARSE);
        assert_eq!(RunConfig::from_opts(&opts(&["--tol=-1/3"])).unwrap_err().code, EXIT_PARSE);
        assert_eq!(RunConfig::from_opts(&opts(&["--tol", "1/1000"])).unwrap().tol, Rational::from((1, 1000)));
    }

    #[test]
    fn rejects_small_grid() {
        assert_eq!(RunConfig::from_opts(&opts(&["--grid", "8"])).unwrap_err().code, EXIT_PARSE);
    }

    #[test]
    fn graph_errors_map_to_exit_codes() {
        assert_eq!(Failure::from(GraphError::TooManyVertices(65)).code, EXIT_TOO_LARGE);
        assert_eq!(Failure::from(GraphError::Disconnected).code, EXIT_DISCONNECTED);
        assert_eq!(Failure::from(GraphError::Parse { line: 1, message: "x".into() }).code, EXIT_PARSE);
        assert_eq!(Failure::from(Error::BetaNotFound).code, EXIT_FAILURE);
    }
}
