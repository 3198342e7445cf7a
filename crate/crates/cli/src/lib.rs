//! The `accelflow` command-line driver, as a library for testing.
//!
//! [`run`] does all the work and returns the text to print together with
//! the exit status:
//!
//! | status | meaning |
//! |---|---|
//! | 0 | solved (and, with `--oracle`, no disagreement) |
//! | 2 | unreadable or malformed input, or a bad flag combination |
//! | 3 | the Kleene oracle disagrees with the solver |
//! | 4 | the solver failed (e.g. a value outgrew the arithmetic limit) |

use std::fmt::Display;
use std::path::{Path, PathBuf};

use accelflow::csys::{is_hidden, kleene_run, Form, KleeneConfig, Lattice, System, Valuation};
use accelflow::frontend::{gen_constraints, parse_program};
use accelflow::intsolve::Solver;
use accelflow::ParseError;
use accelflow::{BigInt, IntSystem, IvSystem};
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    SolveInt,
    SolveInterval,
    Analyze,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub input: PathBuf,
    pub format: Format,
    pub oracle: bool,
    /// Round cap of the oracle.
    pub max_iters: u64,
    pub trace: bool,
    /// Restricts `analyze` output to one program point.
    pub point: Option<String>,
}

impl RunConfig {
    pub fn new(command: Command, input: impl Into<PathBuf>) -> Self {
        RunConfig {
            command,
            input: input.into(),
            format: Format::Text,
            oracle: false,
            max_iters: 100_000,
            trace: false,
            point: None,
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DISAGREE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// What a run prints, and how it ends.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn fail(code: i32, message: impl Display) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Ics,
    Ivs,
    Wl,
}

fn kind_of(config: &RunConfig) -> Result<Kind, String> {
    let ext = config.input.extension().and_then(|e| e.to_str());
    let kind = match (config.command, ext) {
        (Command::SolveInt, Some("ics") | None) => Kind::Ics,
        (Command::SolveInterval, Some("ivs") | None) => Kind::Ivs,
        (Command::SolveInterval | Command::Analyze, Some("wl")) | (Command::Analyze, None) => Kind::Wl,
        (Command::SolveInt, _) => return Err("solve-int expects an .ics file".into()),
        (Command::SolveInterval, _) => return Err("solve-interval expects an .ivs or .wl file".into()),
        (Command::Analyze, _) => return Err("analyze expects a .wl file".into()),
    };
    if config.point.is_some() && config.command != Command::Analyze {
        return Err("--point only applies to analyze".into());
    }
    if config.max_iters == 0 {
        return Err("--max-iters must be at least 1".into());
    }
    Ok(kind)
}

fn diagnostic(path: &Path, e: &ParseError) -> String {
    format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.message)
}

/// Runs one command.
pub fn run(config: &RunConfig) -> Outcome {
    let kind = match kind_of(config) {
        Ok(k) => k,
        Err(msg) => return Outcome::fail(EXIT_INPUT, msg),
    };
    let source = match std::fs::read_to_string(&config.input) {
        Ok(s) => s,
        Err(e) => return Outcome::fail(EXIT_INPUT, format!("cannot read {}: {e}", config.input.display())),
    };
    let parse_failed = |e: ParseError| Outcome::fail(EXIT_INPUT, diagnostic(&config.input, &e));
    match kind {
        Kind::Ics => match accelflow::csys::ics::parse_ics::<BigInt>(&source) {
            Ok(p) => solve_int(config, &p),
            Err(e) => parse_failed(e),
        },
        Kind::Ivs => match accelflow::interval::parse_ivs::<BigInt>(&source) {
            Ok(p) => solve_iv(config, &p, None),
            Err(e) => parse_failed(e),
        },
        Kind::Wl => match parse_program(&source).and_then(|prog| gen_constraints::<BigInt>(&prog)) {
            Ok(g) => {
                let filter = match &config.point {
                    None => None,
                    Some(p) => match p.parse::<u32>() {
                        Ok(n) if g.cfg.points.contains(&n) => Some(n),
                        _ => return Outcome::fail(EXIT_INPUT, format!("no program point `{p}`")),
                    },
                };
                let points = PointView { filter, grouped: config.command == Command::Analyze };
                solve_iv(config, &g.system, Some(points))
            }
            Err(e) => parse_failed(e),
        },
    }
}

/// How to present the `x@P` variables of a generated system.
#[derive(Clone, Copy, Debug)]
struct PointView {
    filter: Option<u32>,
    grouped: bool,
}

fn split_point(name: &str) -> Option<(&str, u32)> {
    let (var, point) = name.rsplit_once('@')?;
    Some((var, point.parse().ok()?))
}

fn solve_int(config: &RunConfig, p: &IntSystem) -> Outcome {
    let mut solver = if config.trace { Solver::with_trace(p.names()) } else { Solver::new() };
    let result = solver.solve_integer(p);
    finish(config, p, solver, result.map_err(|e| e.to_string()), None)
}

fn solve_iv(config: &RunConfig, p: &IvSystem, view: Option<PointView>) -> Outcome {
    let mut solver = if config.trace { Solver::with_trace(&[]) } else { Solver::new() };
    let result = solver.solve_interval(p);
    finish(config, p, solver, result.map_err(|e| e.to_string()), view)
}

fn finish<F: Form>(
    config: &RunConfig,
    p: &System<F>,
    solver: Solver,
    result: Result<Valuation<F::Value>, String>,
    view: Option<PointView>,
) -> Outcome {
    let mut out = Outcome::default();
    for e in solver.events() {
        out.stderr.push_str(&format!("trace: {e}\n"));
    }
    let rho = match result {
        Ok(rho) => rho,
        Err(e) => {
            out.code = EXIT_INTERNAL;
            out.stderr.push_str(&format!("error: {e}\n"));
            return out;
        }
    };
    let shown: Vec<usize> = (0..p.var_count())
        .filter(|&i| !is_hidden(p.names()[i].as_str()))
        .filter(|&i| match (view.and_then(|v| v.filter), split_point(&p.names()[i])) {
            (Some(want), Some((_, at))) => at == want,
            _ => true,
        })
        .collect();
    out.stdout = match config.format {
        Format::Json => {
            let mut map = Map::new();
            for &i in &shown {
                map.insert(p.names()[i].clone(), Value::String(rho.values()[i].to_string()));
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("strings serialize");
            s.push('\n');
            s
        }
        Format::Text => render_text(p, &rho, &shown, view.is_some_and(|v| v.grouped)),
    };
    if config.oracle {
        let (line, agree) = oracle(config, p, &rho);
        match config.format {
            Format::Text => out.stdout.push_str(&line),
            Format::Json => out.stderr.push_str(&line),
        }
        if !agree {
            out.code = EXIT_DISAGREE;
        }
    }
    out
}

fn render_text<V: Lattice>(p: &System<impl Form<Value = V>>, rho: &Valuation<V>, shown: &[usize], grouped: bool) -> String {
    let mut s = String::new();
    if grouped {
        let mut current: Option<u32> = None;
        for &i in shown {
            let Some((var, point)) = split_point(&p.names()[i]) else { continue };
            if current != Some(point) {
                if current.is_some() {
                    s.push('\n');
                }
                s.push_str(&format!("{point}:"));
                current = Some(point);
            } else {
                s.push(',');
            }
            s.push_str(&format!(" {var} = {}", rho.values()[i]));
        }
        if current.is_some() {
            s.push('\n');
        }
    } else {
        for &i in shown {
            s.push_str(&format!("{} = {}\n", p.names()[i], rho.values()[i]));
        }
    }
    s
}

/// Compares with round-robin Kleene iteration; returns the report line and
/// whether there was no disagreement.
fn oracle<F: Form>(config: &RunConfig, p: &System<F>, rho: &Valuation<F::Value>) -> (String, bool) {
    let run = kleene_run(
        p,
        Valuation::bottom(p.var_count()),
        &KleeneConfig { max_rounds: config.max_iters, max_bits: Some(4096) },
    );
    let differing: Vec<usize> = (0..p.var_count())
        .filter(|&i| run.converged || run.stable[i])
        .filter(|&i| run.valuation.values()[i] != rho.values()[i])
        .collect();
    if let Some(&i) = differing.first() {
        let line = format!(
            "oracle: disagree on {}: solver {}, oracle {} ({} variables differ)\n",
            p.names()[i],
            rho.values()[i],
            run.valuation.values()[i],
            differing.len()
        );
        return (line, false);
    }
    if run.converged {
        (format!("oracle: agree ({} rounds)\n", run.rounds), true)
    } else {
        let stable = run.stable.iter().filter(|&&s| s).count();
        let line = format!(
            "oracle: inconclusive, no convergence after {} rounds; {stable} stable variables agree\n",
            run.rounds
        );
        (line, true)
    }
}
