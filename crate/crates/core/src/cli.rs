//! Command-line front end.
//!
//! [`run_from_args`] parses arguments, dispatches to the library and returns
//! the process exit code with the rendered report, so the binary stays thin
//! and tests can drive commands in process.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::capacity::{
    relaxed_sum_capacity_with, sum_capacity_d2_binary, sum_capacity_general, InnerOptions, Method,
    DEFAULT_INNER_MAX_ITERATIONS,
};
use crate::entropy::Base;
use crate::error::{Error, Result};
use crate::game::{
    build_game_mac, classical_winning_prob, correlation_bound, full_communication_winning_prob,
    NonlocalGame,
};
use crate::io::{parse_game_file, parse_mac_file, write_mac};
use crate::modulus::Modulus;
use crate::nosignalling::{max_ns_winning_prob, DEFAULT_NS_VARIABLE_CEILING};
use crate::optimize::{maximize_dense_curve, maximize_grid, OptimizationOutcome, Stop};
use crate::DEFAULT_EVAL_CEILING;

/// Environment variable overriding the evaluation-count refusal ceiling.
pub const EVAL_CEILING_VAR: &str = "MACAP_EVAL_CEILING";

#[derive(Debug, Parser)]
#[command(name = "macap", version, about = "Sum capacities of multiple access channels and nonlocal-game bounds")]
pub struct Cli {
    /// Target precision (nats).
    #[arg(long, global = true, default_value_t = 0.01)]
    pub eps: f64,
    /// Unit for reported information quantities.
    #[arg(long, global = true, value_enum, default_value_t = BaseArg::Bits)]
    pub base: BaseArg,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for grid and enumeration searches.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseArg {
    Bits,
    Nats,
}

impl From<BaseArg> for Base {
    fn from(b: BaseArg) -> Self {
        match b {
            BaseArg::Bits => Base::Bits,
            BaseArg::Nats => Base::Nats,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Interval search when a sender is binary, dense curve otherwise.
    Auto,
    Grid,
    DenseCurve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchArg {
    Grid,
    DenseCurve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Classical,
    Ns,
    FullComm,
}

/// Test functions for the `optimize` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NamedFunction {
    /// `sin(‖x‖₂)`.
    SinNorm,
    /// `-‖x‖₂³/6 + ‖x‖₂²/4 - ‖x‖₂/(6π)`.
    CubicNorm,
}

impl NamedFunction {
    pub fn eval(self, x: &[f64]) -> f64 {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        match self {
            NamedFunction::SinNorm => r.sin(),
            NamedFunction::CubicNorm => {
                -r.powi(3) / 6.0 + r * r / 4.0 - r / (6.0 * std::f64::consts::PI)
            }
        }
    }

    /// Linear modulus in the l1 norm, from a bound on the radial derivative.
    pub fn modulus(self) -> Modulus {
        match self {
            NamedFunction::SinNorm => Modulus::Linear(1.0),
            NamedFunction::CubicNorm => {
                Modulus::Linear(1.0 + 1.0 / (6.0 * std::f64::consts::PI))
            }
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sum capacity of a two-sender channel.
    SumCapacity {
        mac: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Stop the interval search after this many steps and report the
        /// certified upper bound.
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Capacity over arbitrary joint inputs (an upper bound on the sum capacity).
    RelaxedCapacity {
        mac: PathBuf,
        /// Iteration limit of the fixed-point solver.
        #[arg(long, default_value_t = DEFAULT_INNER_MAX_ITERATIONS)]
        inner_max_iter: usize,
    },
    /// Build the channel of a nonlocal game and write it as a channel file.
    GameMac {
        #[arg(long)]
        game: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sum-capacity bound for a game channel with correlation assistance.
    Bound {
        #[arg(long)]
        game: String,
        #[arg(long, conflicts_with_all = ["classical", "ns"])]
        omega: Option<f64>,
        #[arg(long, conflicts_with = "ns")]
        classical: bool,
        #[arg(long)]
        ns: bool,
    },
    /// Optimal winning probability under uniform questions.
    WinningProb {
        #[arg(long)]
        game: String,
        #[arg(long, value_enum)]
        model: Model,
    },
    /// Maximize a named test function over the simplex.
    Optimize {
        #[arg(long, value_enum)]
        function: NamedFunction,
        #[arg(long, value_enum, default_value_t = SearchArg::Grid)]
        method: SearchArg,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long)]
        max_iter: Option<usize>,
    },
}

/// Formats a number with 12 significant digits.
pub fn round12(v: f64) -> f64 {
    if v.is_finite() {
        format!("{v:.11e}").parse().unwrap_or(v)
    } else {
        v
    }
}

/// Ordered key/value report rendered as text or JSON.
#[derive(Debug, Default)]
pub struct Report(Vec<(String, Value)>);

impl Report {
    fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.0.push((key.to_string(), value.into()));
    }

    fn number(&mut self, key: &str, v: f64) {
        let value = serde_json::Number::from_f64(round12(v)).map_or(Value::Null, Value::Number);
        self.push(key, value);
    }

    fn vector(&mut self, key: &str, v: &[f64]) {
        let items = v
            .iter()
            .map(|x| serde_json::Number::from_f64(round12(*x)).map_or(Value::Null, Value::Number))
            .collect::<Vec<_>>();
        self.push(key, Value::Array(items));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let map: Map<String, Value> = self.0.iter().cloned().collect();
                let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("serializable");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut s = String::new();
                for (k, v) in &self.0 {
                    let shown = match v {
                        Value::String(t) => t.clone(),
                        other => other.to_string(),
                    };
                    let _ = writeln!(s, "{k}: {shown}");
                }
                s
            }
        }
    }
}

fn eval_ceiling() -> Result<u128> {
    match std::env::var(EVAL_CEILING_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::Validation(format!("{EVAL_CEILING_VAR} must be a positive integer, got '{v}'"))
        }),
        Err(_) => Ok(DEFAULT_EVAL_CEILING),
    }
}

fn require_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::Validation(format!("--eps must be positive, got {eps}")))
    }
}

fn load_game(spec: &str) -> Result<NonlocalGame> {
    parse_game_file(spec)
}

fn outcome_fields(report: &mut Report, outcome: &OptimizationOutcome) {
    report.number("value", outcome.best_value);
    report.number("upper_bound", outcome.upper_bound);
    report.vector("point", &outcome.best_point);
    report.push("iterations", outcome.iterations);
    report.push("converged", outcome.converged);
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let base = Base::from(cli.base);
    let mut report = Report::default();
    match &cli.command {
        Command::SumCapacity { mac, method, max_iter } => {
            let mac = parse_mac_file(mac)?;
            let (d1, d2) = mac.two_sender_sizes()?;
            let binary = d1 == 2 || d2 == 2;
            let result = match (method, max_iter) {
                (MethodArg::Auto, Some(k)) if binary => {
                    sum_capacity_d2_binary(&mac, Stop::MaxIterations(*k))?
                }
                (_, Some(_)) => {
                    return Err(Error::Validation(
                        "--max-iter needs the automatic method on a channel with a binary sender".into(),
                    ))
                }
                (MethodArg::Auto, None) if binary => {
                    require_eps(cli.eps)?;
                    sum_capacity_d2_binary(&mac, Stop::Precision(cli.eps))?
                }
                (m, None) => {
                    require_eps(cli.eps)?;
                    let method = if *m == MethodArg::Grid { Method::Grid } else { Method::DenseCurve };
                    sum_capacity_general(&mac, method, cli.eps, eval_ceiling()?)?
                }
            };
            report.push("command", "sum-capacity");
            report.push("method", result.method.name());
            report.push("base", base.name());
            report.number("value", base.from_nats(result.value));
            report.number("upper_bound", base.from_nats(result.upper_bound));
            match result.precision {
                Some(eps) => report.number("eps", eps),
                None => report.push("eps", Value::Null),
            }
            report.push("iterations", result.iterations);
            report.push("converged", result.converged);
            report.vector("input_1", result.inner_point.entries());
            report.vector("input_2", result.outer_point.entries());
        }
        Command::RelaxedCapacity { mac, inner_max_iter } => {
            require_eps(cli.eps)?;
            let mac = parse_mac_file(mac)?;
            let options = InnerOptions { max_iterations: *inner_max_iter, initial: None };
            let result = relaxed_sum_capacity_with(&mac, cli.eps, &options)?;
            report.push("command", "relaxed-capacity");
            report.push("base", base.name());
            report.number("value", base.from_nats(result.value));
            report.number("upper_bound", base.from_nats(result.upper_bound()));
            report.push("iterations", result.iterations);
            report.push("converged", result.gap <= cli.eps);
            report.vector("input", result.optimizer_p.entries());
        }
        Command::GameMac { game, output } => {
            let g = load_game(game)?;
            let mac = build_game_mac(&g)?;
            let text = write_mac(&mac);
            report.push("command", "game-mac");
            report.push("senders", mac.senders());
            report.push("input_sizes", mac.input_sizes().to_vec());
            report.push("dout", mac.dout());
            match output {
                Some(path) => {
                    std::fs::write(path, text).map_err(|e| Error::Io {
                        path: path.display().to_string(),
                        message: e.to_string(),
                    })?;
                    report.push("output", path.display().to_string());
                }
                None => report.push("mac", serde_json::from_str::<Value>(&text).expect("valid json")),
            }
        }
        Command::Bound { game, omega, classical, ns } => {
            let g = load_game(game)?;
            let (omega, source) = match (omega, classical, ns) {
                (Some(w), _, _) => (*w, "flag"),
                (None, true, _) => (classical_winning_prob(&g, eval_ceiling()?)?.omega, "classical"),
                (None, _, true) => (max_ns_winning_prob(&g, DEFAULT_NS_VARIABLE_CEILING)?.0, "ns"),
                _ => {
                    return Err(Error::Validation(
                        "give one of --omega, --classical or --ns".into(),
                    ))
                }
            };
            let bound = correlation_bound(g.d(), omega)?;
            report.push("command", "bound");
            report.push("base", base.name());
            report.push("d", g.d());
            report.number("omega", omega);
            report.push("omega_source", source);
            report.number("value", base.from_nats(bound));
            report.number("log_d", base.from_nats((g.d() as f64).ln()));
        }
        Command::WinningProb { game, model } => {
            let g = load_game(game)?;
            report.push("command", "winning-prob");
            match model {
                Model::Classical => {
                    let s = classical_winning_prob(&g, eval_ceiling()?)?;
                    report.push("model", "classical");
                    report.number("value", s.omega);
                    report.push("strategy", s.answers);
                }
                Model::Ns => {
                    let (value, _) = max_ns_winning_prob(&g, DEFAULT_NS_VARIABLE_CEILING)?;
                    report.push("model", "ns");
                    report.number("value", value);
                }
                Model::FullComm => {
                    report.push("model", "full-comm");
                    report.number("value", full_communication_winning_prob(&g));
                }
            }
        }
        Command::Optimize { function, method, dim, max_iter } => {
            require_eps(cli.eps)?;
            let beta = function.modulus();
            let f = *function;
            let outcome = match method {
                SearchArg::Grid => {
                    if max_iter.is_some() {
                        return Err(Error::Validation("--max-iter applies to the dense-curve method".into()));
                    }
                    maximize_grid(|x| f.eval(x), &beta, *dim, cli.eps)?
                }
                SearchArg::DenseCurve => {
                    maximize_dense_curve(|x| f.eval(x), &beta, *dim, cli.eps, *max_iter)?
                }
            };
            report.push("command", "optimize");
            report.push(
                "function",
                function.to_possible_value().expect("named").get_name().to_string(),
            );
            report.push("method", match method {
                SearchArg::Grid => "grid",
                SearchArg::DenseCurve => "dense_curve",
            });
            outcome_fields(&mut report, &outcome);
        }
    }
    Ok(report)
}

/// Runs one command line (including the program name) and returns the exit
/// code with everything that should be printed.
pub fn run_from_args<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    let started = Instant::now();
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Error::Validation(format!("cannot start {n} threads: {e}"))),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(mut report) => {
            report.number("wall_time_s", started.elapsed().as_secs_f64());
            (0, report.render(cli.format))
        }
        Err(e) => (e.exit_code(), format!("error: {e}\n")),
    }
}
