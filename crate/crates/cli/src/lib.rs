//! Command-line front end for the `chipfire` library.
//!
//! [`run`] parses an argument list, dispatches to the library and returns the
//! report with its exit code: 0 for success or a true verdict, 1 for a false
//! verdict, 2 for usage and input errors.

mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use chipfire::criticality::{is_critical, is_critical_nonstability, CriticalCertificate, Witness, DEFAULT_BUDGET};
use chipfire::crosscheck::{cross_check, cross_check_random, CheckResult, CrossCheckOptions, Status};
use chipfire::oracle::{closure_critical, GraphGenSpec};
use chipfire::superstable::RowOrder;
use chipfire::{
    critical_rep, enumerate_critical, enumerate_superstable, equivalence_classes, is_superstable, parse_graph,
    parse_vector, sigma_min, stabilize, superstabilize, Configuration, Digraph, Error, Script,
};

pub use report::{Report, Value};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    /// Encoded report, newline terminated.
    pub report: String,
}

#[derive(Parser, Debug)]
#[command(name = "chipfire", version, about = "Chip-firing games on digraphs with a global sink")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Cap on the number of stable configurations an enumeration may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET as u64)]
    budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Recurrence,
    Nonstability,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Critical,
    Superstable,
    Classes,
}

#[derive(Args, Debug)]
struct GraphArg {
    /// Graph file.
    graph: PathBuf,
}

#[derive(Args, Debug)]
struct WithConfig {
    /// Graph file.
    graph: PathBuf,
    /// Configuration as comma-separated chip counts.
    #[arg(short = 'c', long = "config", allow_hyphen_values = true)]
    config: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a graph file.
    Validate(GraphArg),
    /// Reduced Laplacian and its determinant.
    Laplacian(GraphArg),
    /// Stabilize a configuration.
    Stabilize(WithConfig),
    /// Minimum G-strongly positive script.
    SigmaMin(GraphArg),
    /// Decide whether a stable configuration is critical.
    IsCritical {
        #[command(flatten)]
        input: WithConfig,
        #[arg(long, value_enum, default_value_t = MethodArg::Recurrence)]
        method: MethodArg,
        /// G-strongly positive script for the recurrence test; defaults to the minimum one.
        #[arg(long)]
        script: Option<String>,
    },
    /// Decide whether a non-negative configuration is super-stable.
    IsSuperstable(WithConfig),
    /// Critical configuration equivalent to the input.
    CriticalRep(WithConfig),
    /// Super-stable configuration equivalent to the input, with its trace.
    SuperstableRep(WithConfig),
    /// List critical or super-stable configurations, or the equivalence classes.
    Enumerate {
        #[command(flatten)]
        input: GraphArg,
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Decide linear equivalence of two configurations.
    Equivalent {
        graph: PathBuf,
        /// Exactly two configurations.
        #[arg(short = 'c', long = "config", allow_hyphen_values = true, num_args = 1, required = true)]
        configs: Vec<String>,
    },
    /// Cross-check the library against the oracles.
    Check {
        /// Graph file; omit with --random.
        graph: Option<PathBuf>,
        /// Check generated graphs instead of a file.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 200)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        first_seed: u64,
        #[arg(long, default_value_t = 5)]
        max_vertices: usize,
        #[arg(long, default_value_t = 3)]
        max_multiplicity: u64,
    },
}

enum Failure {
    Usage(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

type Outcome = std::result::Result<(i32, Report), Failure>;

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let exit_code = if e.use_stderr() { EXIT_ERROR } else { EXIT_TRUE };
            return CommandResult { exit_code, report: e.render().to_string() };
        }
    };
    let (exit_code, report) = match dispatch(&cli) {
        Ok(r) => r,
        Err(f) => {
            let message = match f {
                Failure::Usage(m) => m,
                Failure::Library(e) => e.to_string(),
            };
            let mut r = Report::new();
            r.push("error", message);
            (EXIT_ERROR, r)
        }
    };
    let report = match cli.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    CommandResult { exit_code, report }
}

fn load(path: &PathBuf) -> std::result::Result<Digraph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_graph(&text)?)
}

fn config(g: &Digraph, s: &str) -> std::result::Result<Configuration, Failure> {
    let v = parse_vector(s)?;
    if v.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: v.len() }.into());
    }
    Ok(Configuration::new(v))
}

fn verdict(b: bool) -> i32 {
    if b {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    }
}

fn labels(g: &Digraph, positions: &[usize]) -> Vec<i64> {
    positions.iter().map(|&p| g.label(p) as i64).collect()
}

fn vectors(cs: &[Configuration]) -> Vec<Vec<i64>> {
    cs.iter().map(|c| c.to_vec()).collect()
}

fn dispatch(cli: &Cli) -> Outcome {
    let budget = cli.budget as u128;
    match &cli.command {
        Command::Validate(a) => validate(&load(&a.graph)?),
        Command::Laplacian(a) => laplacian(&load(&a.graph)?),
        Command::Stabilize(a) => {
            let g = load(&a.graph)?;
            let r = stabilize(&g, &config(&g, &a.config)?)?;
            let mut rep = Report::new();
            rep.push("stable", r.stable.to_vec())
                .push("script", r.script.to_vec())
                .push("firings", r.script.iter().sum::<i64>());
            Ok((EXIT_TRUE, rep))
        }
        Command::SigmaMin(a) => sigma(&load(&a.graph)?),
        Command::IsCritical { input, method, script } => {
            let g = load(&input.graph)?;
            let c = config(&g, &input.config)?;
            critical(&g, &c, *method, script.as_deref(), budget)
        }
        Command::IsSuperstable(a) => {
            let g = load(&a.graph)?;
            let cert = is_superstable(&g, &config(&g, &a.config)?)?;
            let mut rep = Report::new();
            rep.push("superstable", cert.superstable);
            if let Some(s) = &cert.witness {
                rep.push("deductible", s.to_vec())
                    .push("remainder", cert.config.minus(&g.laplacian().apply(s)).to_vec());
            }
            Ok((verdict(cert.superstable), rep))
        }
        Command::CriticalRep(a) => {
            let g = load(&a.graph)?;
            let rep_config = critical_rep(&g, &config(&g, &a.config)?)?;
            let mut rep = Report::new();
            rep.push("rep", rep_config.to_vec());
            Ok((EXIT_TRUE, rep))
        }
        Command::SuperstableRep(a) => superstable(&load(&a.graph)?, &a.config),
        Command::Enumerate { input, kind } => enumerate(&load(&input.graph)?, *kind, budget),
        Command::Equivalent { graph, configs } => {
            let g = load(graph)?;
            if configs.len() != 2 {
                return Err(Failure::Usage(format!("equivalent needs two configurations, got {}", configs.len())));
            }
            let a = config(&g, &configs[0])?;
            let b = config(&g, &configs[1])?;
            let tau = chipfire::config::linear_equivalent(&g, &a, &b)?;
            let mut rep = Report::new();
            rep.push("equivalent", tau.is_some());
            if let Some(t) = &tau {
                rep.push("tau", t.clone());
            }
            Ok((verdict(tau.is_some()), rep))
        }
        Command::Check { graph, random, seeds, first_seed, max_vertices, max_multiplicity } => {
            let options = CrossCheckOptions { budget, ..CrossCheckOptions::default() };
            match (graph, random) {
                (Some(path), false) => check_one(&load(path)?, &options),
                (None, true) => {
                    if *max_vertices < 2 {
                        return Err(Failure::Usage("--max-vertices must be at least 2".into()));
                    }
                    let template = GraphGenSpec::new(*max_vertices, *max_multiplicity, 0);
                    let seeds: Vec<u64> = (*first_seed..first_seed + seeds).collect();
                    check_random(template, &seeds, &options)
                }
                _ => Err(Failure::Usage("check takes either a graph file or --random".into())),
            }
        }
    }
}

fn validate(g: &Digraph) -> Outcome {
    let scc = g.scc();
    let mut rep = Report::new();
    rep.push("valid", true)
        .push("vertices", g.vertex_count())
        .push("sink", g.sink_label())
        .push("edges", g.edges().len())
        .push("out_degree", g.out_degrees())
        .push("in_degree", (0..g.n()).map(|v| g.in_degree(v) as i64).collect::<Vec<_>>())
        .push("components", scc.components().iter().map(|c| labels(g, c)).collect::<Vec<_>>())
        .push("levels", scc.levels().iter().map(|&l| l as i64).collect::<Vec<_>>());
    Ok((EXIT_TRUE, rep))
}

fn laplacian(g: &Digraph) -> Outcome {
    let det = chipfire::linalg::determinant(&g.laplacian().to_matrix())?;
    let mut rep = Report::new();
    rep.push("laplacian", g.laplacian().rows()).push("det", det.to_string());
    Ok((EXIT_TRUE, rep))
}

fn sigma(g: &Digraph) -> Outcome {
    let r = sigma_min(g)?;
    let mut rep = Report::new();
    rep.push("sigma", r.sigma.to_vec()).push("sigma_delta", r.sigma_delta.clone());
    for (k, c) in r.per_component.iter().enumerate() {
        let key = format!("component_{}", k + 1);
        rep.push(key.clone(), labels(g, &c.vertices))
            .push(format!("{key}_level"), c.level)
            .push(format!("{key}_target"), c.target.clone())
            .push(format!("{key}_script"), c.script.to_vec());
    }
    Ok((EXIT_TRUE, rep))
}

fn critical(g: &Digraph, c: &Configuration, method: MethodArg, script: Option<&str>, budget: u128) -> Outcome {
    let cert: CriticalCertificate = match method {
        MethodArg::Recurrence => {
            let s = match script {
                Some(s) => Script::new(parse_vector(s)?)?,
                None => sigma_min(g)?.sigma,
            };
            is_critical(g, c, &s)?
        }
        MethodArg::Nonstability => is_critical_nonstability(g, c)?,
        MethodArg::Oracle => {
            if script.is_some() {
                return Err(Failure::Usage("--script only applies to --method recurrence".into()));
            }
            if !chipfire::config::is_stable(g, c)? {
                return Err(Error::NotStable.into());
            }
            let closure = closure_critical(g, budget)?;
            CriticalCertificate {
                config: c.clone(),
                method: chipfire::Method::ClosureOracle,
                critical: closure.contains(c),
                witness: Witness::Closure { size: closure.len() },
            }
        }
    };
    let mut rep = Report::new();
    rep.push("critical", cert.critical).push("method", cert.method.name());
    match &cert.witness {
        Witness::FiringScript(s) => {
            rep.push("script", s.to_vec()).push("fired", s.to_vec());
        }
        Witness::Stabilization { script, result } => {
            rep.push("script", script.to_vec())
                .push("fired", result.script.to_vec())
                .push("stabilized", result.stable.to_vec());
        }
        Witness::Exhausted { candidates } => {
            rep.push("candidates", *candidates);
        }
        Witness::StableNeighbor { tau, stable } => {
            rep.push("tau", tau.to_vec()).push("stable", stable.to_vec());
        }
        Witness::Closure { size } => {
            rep.push("closure_size", *size);
        }
    }
    Ok((verdict(cert.critical), rep))
}

fn superstable(g: &Digraph, s: &str) -> Outcome {
    let c = config(g, s)?;
    let run = superstabilize(g, &c, RowOrder::LowestNegative)?;
    let mut trace = vec![run.start.to_vec()];
    trace.extend(run.steps.iter().map(|s| s.after.to_vec()));
    let rows: Vec<i64> = run.steps.iter().map(|s| g.label(s.row) as i64).collect();
    let mut rep = Report::new();
    rep.push("stabilized", run.stabilized.to_vec())
        .push("start", run.start.to_vec())
        .push("rows", rows)
        .push("trace", trace);
    if !run.descents.is_empty() {
        rep.push("descent_scripts", run.descents.iter().map(|d| d.script.to_vec()).collect::<Vec<_>>())
            .push("descent_trace", run.descents.iter().map(|d| d.after.to_vec()).collect::<Vec<_>>());
    }
    rep.push("rep", run.result.to_vec());
    Ok((EXIT_TRUE, rep))
}

fn enumerate(g: &Digraph, kind: Kind, budget: u128) -> Outcome {
    let mut rep = Report::new();
    match kind {
        Kind::Critical | Kind::Superstable => {
            let (name, set) = if kind == Kind::Critical {
                ("critical", enumerate_critical(g, budget)?)
            } else {
                ("superstable", enumerate_superstable(g, budget)?)
            };
            rep.push("kind", name).push("count", set.len()).push("configs", vectors(&set));
        }
        Kind::Classes => {
            let classes = equivalence_classes(g, budget)?;
            rep.push("kind", "classes").push("count", classes.len());
            for (k, class) in classes.iter().enumerate() {
                let key = format!("class_{}", k + 1);
                rep.push(format!("{key}_critical"), class.critical.to_vec())
                    .push(format!("{key}_superstable"), class.superstable.to_vec())
                    .push(format!("{key}_members"), vectors(&class.members));
            }
        }
    }
    Ok((EXIT_TRUE, rep))
}

fn result_key(r: &CheckResult) -> String {
    format!("{}.{}", r.family.name(), r.name)
}

fn check_one(g: &Digraph, options: &CrossCheckOptions) -> Outcome {
    let results = cross_check(g, options)?;
    let mut rep = Report::new();
    let mut failures = 0u64;
    for r in &results {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => {
                failures += 1;
                "fail"
            }
            Status::Skipped => "skip",
        };
        let mut value = format!("{status} cases={}", r.cases);
        if !r.detail.is_empty() {
            value.push(' ');
            value.push_str(&r.detail);
        }
        rep.push(result_key(r), value);
    }
    rep.push("failures", failures);
    Ok((verdict(failures == 0), rep))
}

fn check_random(template: GraphGenSpec, seeds: &[u64], options: &CrossCheckOptions) -> Outcome {
    let reports = cross_check_random(template, seeds, options);
    // per check: (pass, skip, fail, first failure)
    let mut tally: Vec<(String, [u64; 3], Option<String>)> = Vec::new();
    let mut errors = Vec::new();
    for seed_report in &reports {
        let results = match &seed_report.results {
            Ok(r) => r,
            Err(e) => {
                errors.push(format!("seed {}: {e}", seed_report.seed));
                continue;
            }
        };
        for r in results {
            let key = result_key(r);
            let idx = match tally.iter().position(|(k, _, _)| *k == key) {
                Some(i) => i,
                None => {
                    tally.push((key, [0; 3], None));
                    tally.len() - 1
                }
            };
            let entry = &mut tally[idx];
            match r.status {
                Status::Pass => entry.1[0] += 1,
                Status::Skipped => entry.1[1] += 1,
                Status::Fail => {
                    entry.1[2] += 1;
                    entry.2.get_or_insert_with(|| format!("seed {}: {}", seed_report.seed, r.detail));
                }
            }
        }
    }
    let mut rep = Report::new();
    rep.push("graphs", seeds.len());
    let mut failures = errors.len() as u64;
    for (key, [pass, skip, fail], first) in &tally {
        failures += fail;
        let mut value = format!("pass={pass} skip={skip} fail={fail}");
        if let Some(f) = first {
            value.push_str(" first=");
            value.push_str(f);
        }
        rep.push(key.clone(), value);
    }
    if !errors.is_empty() {
        rep.push("errors", errors.join("; "));
    }
    rep.push("failures", failures);
    Ok((verdict(failures == 0), rep))
}
