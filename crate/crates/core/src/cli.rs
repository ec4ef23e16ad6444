//! The `smallcut` command line: `solve`, `verify`, `reduce`, `selftest`.
//!
//! Reports go to stdout and end with one `RESULT key=value ...` line. Wall
//! time goes to stderr so stdout stays byte-identical across runs.
//! Exit codes: 0 success, 1 invalid certificate or failed selftest, 2 usage,
//! input or unsupported-combination errors.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::colorcoding::{
    cached_universal_family, default_trials, derandomization_feasible, miss_probability,
    solve_colorcoding, ColorCodingError, Mode,
};
use crate::format::{
    parse_certificate, parse_graph, parse_instance, write_certificate, write_instance, ParseError,
};
use crate::fpt::{solve_by_t_with, Route, SolveOptions};
use crate::graph::Graph;
use crate::instance::{Instance, InstanceError, Variant, Verdict};
use crate::oracle::{brute_force_solve, verify_certificate, OracleError};
use crate::reductions::{reduce_to_vertex_cut, CliqueInstance, Reduction, ReductionError};
use crate::selftest::{run_selftest, SelftestConfig};

#[derive(Debug, Parser)]
#[command(
    name = "smallcut",
    version,
    about = "Find small vertex sets with small boundaries"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide an instance and print a certificate on YES.
    Solve(SolveArgs),
    /// Check a certificate file against an instance.
    Verify(VerifyArgs),
    /// Build a cutting instance from a clique instance.
    Reduce(ReduceArgs),
    /// Run the cross-solver equivalence sweep.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// vertex, vertex-terminal, edge-terminal or exact-k (overrides the file).
    #[arg(long)]
    variant: Option<Variant>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    terminal: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Auto,
    ImportantSeparators,
    Colorcoding,
    Bruteforce,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::ImportantSeparators => "important-separators",
            Algorithm::Colorcoding => "colorcoding",
            Algorithm::Bruteforce => "bruteforce",
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Graph or instance file.
    file: PathBuf,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value_t = Algorithm::Auto)]
    algorithm: Algorithm,
    /// Seed for randomized color coding.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random colorings; forces randomized color coding.
    #[arg(long)]
    trials: Option<u64>,
    /// Write the certificate here on YES.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    instance: PathBuf,
    certificate: PathBuf,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    /// Source graph file.
    graph: PathBuf,
    /// 2: vertex variant, 4: vertex-terminal, 5: edge-terminal (regular input).
    #[arg(long)]
    thm: u32,
    /// Clique size.
    #[arg(long)]
    k: usize,
    /// Size of the big vertex clique for selector 2 instead of n^3.
    #[arg(long)]
    hv_size: Option<usize>,
    /// Write the instance here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    #[arg(long, default_value_t = 200)]
    instances: usize,
    /// Sabotage the by-t solver; the sweep must fail.
    #[arg(long)]
    inject_fault: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("missing parameter --{0}")]
    MissingParameter(&'static str),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("unsupported combination: algorithm {algorithm} with variant {variant}")]
    Unsupported {
        algorithm: &'static str,
        variant: Variant,
    },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    ColorCoding(#[from] ColorCodingError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("unknown reduction selector {0} (expected 2, 4 or 5)")]
    UnknownSelector(u32),
    #[error("--hv-size only applies to selector 2")]
    PaddingNotApplicable,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_instance(path: &Path, args: &ParamArgs) -> Result<Instance, CliError> {
    let file = parse_instance(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    let p = file.params;
    let variant = args.variant.or(p.variant).unwrap_or(Variant::Vertex);
    let k = args.k.or(p.k).ok_or(CliError::MissingParameter("k"))?;
    let t = args.t.or(p.t).ok_or(CliError::MissingParameter("t"))?;
    let terminal = if variant.has_terminal() {
        args.terminal.or(p.terminal)
    } else {
        args.terminal
    };
    Ok(Instance::new(file.graph, variant, k, t, terminal)?)
}

/// Outcome of `solve`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub verdict: Verdict,
    pub algorithm: &'static str,
    /// Extra `key=value` pairs for the summary line (route, mode, bounds).
    pub details: Vec<(String, String)>,
    pub notes: Vec<String>,
    pub n: usize,
    pub m: usize,
    pub variant: Variant,
    pub k: usize,
    pub t: usize,
    pub terminal: Option<usize>,
    pub elapsed: Duration,
}

impl RunReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let terminal = self.terminal.map_or("-".to_string(), |s| s.to_string());
        let _ = writeln!(
            out,
            "instance: n={} m={} variant={} k={} t={} terminal={terminal}",
            self.n, self.m, self.variant, self.k, self.t
        );
        let _ = writeln!(out, "algorithm: {}", self.algorithm);
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        let _ = writeln!(out, "verdict: {}", self.verdict);
        if let Some(cert) = self.verdict.certificate() {
            let _ = writeln!(out, "X: {}", cert.x);
            let _ = writeln!(
                out,
                "boundary: {} (size {})",
                cert.boundary,
                cert.boundary.len()
            );
        }
        out.push_str(&self.summary_line());
        out.push('\n');
        out
    }

    /// `RESULT verdict=.. algorithm=.. ...` with `x` and `cut` only on YES.
    pub fn summary_line(&self) -> String {
        let terminal = self.terminal.map_or("-".to_string(), |s| s.to_string());
        let mut line = format!(
            "RESULT verdict={} algorithm={} variant={} n={} m={} k={} t={} terminal={terminal}",
            self.verdict, self.algorithm, self.variant, self.n, self.m, self.k, self.t
        );
        for (key, value) in &self.details {
            let _ = write!(line, " {key}={value}");
        }
        if let Some(cert) = self.verdict.certificate() {
            let ids: Vec<String> = cert.x.iter().map(|v| v.to_string()).collect();
            let _ = write!(
                line,
                " size={} cut={} x={}",
                cert.x.len(),
                cert.boundary.len(),
                ids.join(",")
            );
        }
        line
    }
}

fn route_name(route: Route) -> &'static str {
    match route {
        Route::EmptyGraph => "empty",
        Route::Trivial => "trivial",
        Route::ColorCoding => "colorcoding",
        Route::SmallSetSearch => "small-set-search",
        Route::Anchors => "anchors",
    }
}

fn solve_instance(
    inst: &Instance,
    algorithm: Algorithm,
    seed: u64,
    trials: Option<u64>,
) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let variant = inst.variant;
    let algorithm = match algorithm {
        Algorithm::Auto => match variant {
            Variant::Vertex => Algorithm::ImportantSeparators,
            Variant::VertexTerminal | Variant::EdgeTerminal => Algorithm::Colorcoding,
            Variant::ExactK => Algorithm::Bruteforce,
        },
        a => a,
    };
    let unsupported = || CliError::Unsupported {
        algorithm: algorithm.name(),
        variant,
    };
    let mut details = Vec::new();
    let mut notes = Vec::new();
    let verdict = match algorithm {
        Algorithm::ImportantSeparators => {
            if variant != Variant::Vertex {
                return Err(unsupported());
            }
            let (verdict, stats) =
                solve_by_t_with(&inst.graph, inst.k, inst.t, SolveOptions::default());
            details.push(("route".to_string(), route_name(stats.route).to_string()));
            verdict
        }
        Algorithm::Colorcoding => {
            if variant == Variant::ExactK {
                return Err(unsupported());
            }
            let (n, k, t) = (inst.graph.n(), inst.k, inst.t);
            let mode = match trials {
                Some(trials) => Mode::Randomized { seed, trials },
                None if derandomization_feasible(n, k, t) => Mode::Derandomized,
                None => {
                    notes.push(format!(
                        "universal family for n={n}, l={} too large to verify; fell back to randomized color coding",
                        (k + t).min(n)
                    ));
                    details.push(("fallback".to_string(), "randomized".to_string()));
                    Mode::Randomized {
                        seed,
                        trials: default_trials(k, t),
                    }
                }
            };
            match mode {
                Mode::Derandomized => {
                    details.push(("mode".to_string(), "derandomized".to_string()));
                    if n > 0 {
                        let family = cached_universal_family(n, (k + t).min(n))
                            .map_err(ColorCodingError::from)?;
                        details.push(("colorings".to_string(), family.len().to_string()));
                    }
                }
                Mode::Randomized { seed, trials } => {
                    details.push(("mode".to_string(), "randomized".to_string()));
                    details.push(("seed".to_string(), seed.to_string()));
                    details.push(("trials".to_string(), trials.to_string()));
                    details.push((
                        "error_bound".to_string(),
                        format!("{:.3e}", miss_probability(k, t, trials)),
                    ));
                }
            }
            solve_colorcoding(inst, mode)?
        }
        Algorithm::Bruteforce => brute_force_solve(inst)?,
        Algorithm::Auto => unreachable!("resolved above"),
    };
    Ok(RunReport {
        verdict,
        algorithm: algorithm.name(),
        details,
        notes,
        n: inst.graph.n(),
        m: inst.graph.m(),
        variant,
        k: inst.k,
        t: inst.t,
        terminal: inst.terminal,
        elapsed: start.elapsed(),
    })
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, CliError> {
    let inst = load_instance(&args.file, &args.params)?;
    let report = solve_instance(&inst, args.algorithm, args.seed, args.trials)?;
    if let (Some(path), Some(cert)) = (&args.out, report.verdict.certificate()) {
        write_file(path, &write_certificate(&cert.x))?;
    }
    let _ = out.write_all(report.render().as_bytes());
    let _ = writeln!(err, "time: {:.3}s", report.elapsed.as_secs_f64());
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let inst = load_instance(&args.instance, &args.params)?;
    let path = &args.certificate;
    let x = parse_certificate(&read(path)?).map_err(|source| CliError::Parse {
        path: path.clone(),
        source,
    })?;
    let n = inst.graph.n();
    let result = match x.last() {
        Some(v) if v >= n => Err(format!("vertex {v} out of range (n = {n})")),
        _ => verify_certificate(&inst, &inst.certificate_for(x)).map_err(|e| e.to_string()),
    };
    match result {
        Ok(()) => {
            let _ = writeln!(out, "valid");
            let _ = writeln!(out, "RESULT verify status=valid");
            Ok(0)
        }
        Err(reason) => {
            let _ = writeln!(out, "invalid: {reason}");
            let _ = writeln!(out, "RESULT verify status=invalid");
            Ok(1)
        }
    }
}

fn cmd_reduce(args: &ReduceArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let reduction =
        Reduction::from_selector(args.thm).ok_or(CliError::UnknownSelector(args.thm))?;
    let graph: Graph = parse_graph(&read(&args.graph)?).map_err(|source| CliError::Parse {
        path: args.graph.clone(),
        source,
    })?;
    let src = CliqueInstance::new(graph, args.k)?;
    let reduced = match (reduction, args.hv_size) {
        (Reduction::VertexCut, hv) => reduce_to_vertex_cut(&src, hv)?,
        (_, Some(_)) => return Err(CliError::PaddingNotApplicable),
        (r, None) => r.apply(&src)?,
    };
    let mut comments = vec![
        format!(
            "source: clique k={} n={} m={} selector={}",
            args.k,
            src.graph.n(),
            src.graph.m(),
            args.thm
        ),
        format!("faithful={}", reduced.faithful),
    ];
    comments.extend(reduced.vertex_map_lines());
    let text = write_instance(&reduced.instance, &comments);
    let inst = &reduced.instance;
    let summary = format!(
        "RESULT reduce selector={} n={} m={} variant={} k={} t={} faithful={}",
        args.thm,
        inst.graph.n(),
        inst.graph.m(),
        inst.variant,
        inst.k,
        inst.t,
        reduced.faithful
    );
    match &args.out {
        Some(path) => {
            write_file(path, &text)?;
            let _ = writeln!(out, "{summary}");
        }
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(0)
}

fn cmd_selftest(args: &SelftestArgs, out: &mut dyn Write) -> u8 {
    let cfg = SelftestConfig {
        seed: args.seed,
        n_max: args.n_max,
        instances: args.instances,
        inject_fault: args.inject_fault,
    };
    let report = run_selftest(&cfg);
    let _ = out.write_all(report.render().as_bytes());
    if report.passed() {
        0
    } else {
        1
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, out, err),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Reduce(a) => cmd_reduce(a, out),
        Command::Selftest(a) => Ok(cmd_selftest(a, out)),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Applies `SMALLCUT_THREADS` to the global worker pool.
pub fn init_threads() {
    if let Some(n) = std::env::var("SMALLCUT_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

pub fn main() -> ExitCode {
    init_threads();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (u8, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("smallcut").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn auto_dispatch() {
        let inst = |v, s| Instance::new(Graph::star(4), v, 2, 3, s).unwrap();
        let r = solve_instance(&inst(Variant::Vertex, None), Algorithm::Auto, 0, None).unwrap();
        assert_eq!(r.algorithm, "important-separators");
        let r = solve_instance(
            &inst(Variant::VertexTerminal, Some(0)),
            Algorithm::Auto,
            0,
            None,
        )
        .unwrap();
        assert_eq!(r.algorithm, "colorcoding");
        assert!(r.verdict.is_yes());
        assert!(r.summary_line().contains("mode=derandomized"));
        let r = solve_instance(&inst(Variant::ExactK, None), Algorithm::Auto, 0, None).unwrap();
        assert_eq!(r.algorithm, "bruteforce");
    }

    #[test]
    fn unsupported_combinations() {
        let exact = Instance::new(Graph::path(4), Variant::ExactK, 2, 1, None).unwrap();
        let e = solve_instance(&exact, Algorithm::Colorcoding, 0, None).unwrap_err();
        assert!(e.to_string().starts_with("unsupported combination"));
        let terminal = Instance::new(Graph::path(4), Variant::EdgeTerminal, 2, 1, Some(0)).unwrap();
        assert!(matches!(
            solve_instance(&terminal, Algorithm::ImportantSeparators, 0, None),
            Err(CliError::Unsupported { .. })
        ));
    }

    #[test]
    fn randomized_reports_error_bound() {
        let inst = Instance::new(Graph::star(4), Variant::VertexTerminal, 2, 3, Some(0)).unwrap();
        let r = solve_instance(&inst, Algorithm::Colorcoding, 3, Some(50)).unwrap();
        let line = r.summary_line();
        assert!(
            line.contains("mode=randomized seed=3 trials=50 error_bound="),
            "{line}"
        );
    }

    #[test]
    fn fallback_when_family_is_too_large() {
        let inst = Instance::new(Graph::path(60), Variant::VertexTerminal, 6, 6, Some(0)).unwrap();
        let r = solve_instance(&inst, Algorithm::Auto, 0, None).unwrap();
        assert!(r.summary_line().contains("fallback=randomized"));
        assert!(r.verdict.is_yes());
    }

    #[test]
    fn usage_errors() {
        let (code, _, err) = run_capture(&["solve"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
        let (code, _, err) = run_capture(&[
            "solve",
            "x.txt",
            "--variant",
            "bogus",
            "--k",
            "1",
            "--t",
            "1",
        ]);
        assert_eq!(code, 2);
        assert!(err.contains("bogus"), "{err}");
        let (code, _, err) = run_capture(&["reduce", "/nonexistent", "--thm", "3", "--k", "2"]);
        assert_eq!(code, 2);
        assert!(err.contains("selector 3"), "{err}");
    }
}
