//! Command-line driver. Exit status: 0 unreachable (or no bad configuration
//! found), 1 reachable, 2 budget exhausted, 3 usage or input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use crate::counters::Resolution;
use crate::engine::{verify, Direction, Verdict, VerifyOptions};
use crate::error::{Error, Result};
use crate::frontend::models::bundled;
use crate::frontend::parser::parse_model;
use crate::frontend::report::RunReport;
use crate::oracle::{enumerate_denotation, explicit_reach};
use crate::system::ParameterizedSystem;
use crate::words::CountedWord;

pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cwverify", version, about = "Safety verification of parameterized systems with counted words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DirectionArg {
    Forward,
    Backward,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Direction {
        match d {
            DirectionArg::Forward => Direction::Forward,
            DirectionArg::Backward => Direction::Backward,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the refinement loop on a model.
    Verify {
        /// Model file, or the name of a bundled model.
        model: String,
        #[arg(long, value_enum, default_value = "backward")]
        direction: DirectionArg,
        /// Seconds allowed for each reachability check.
        #[arg(long, default_value_t = 1200.0)]
        budget: f64,
        #[arg(long)]
        max_refinements: Option<usize>,
        /// Initial resolution as `state:k` pairs separated by commas.
        #[arg(long)]
        rho: Option<String>,
        /// Print the trace of every refinement round.
        #[arg(long)]
        trace: bool,
        /// Write a JSON run report to this path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Explicit-state reachability for a fixed number of processes.
    Oracle {
        model: String,
        #[arg(long)]
        n: usize,
    },
    /// List the configurations of a counted word up to a length.
    Denote {
        model: String,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
}

fn load_model(spec: &str) -> Result<ParameterizedSystem> {
    let path = Path::new(spec);
    if path.exists() {
        return parse_model(&std::fs::read_to_string(path)?);
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
    match bundled(stem) {
        Some(text) => parse_model(text),
        None => Err(Error::Usage(format!("no model file or bundled model `{spec}`"))),
    }
}

fn parse_resolution(text: &str, sys: &ParameterizedSystem) -> Result<Resolution> {
    let mut rho = Resolution::zero(sys.width());
    for pair in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, k) = pair
            .rsplit_once(':')
            .ok_or_else(|| Error::Usage(format!("expected `state:k`, found `{pair}`")))?;
        let q = sys
            .alphabet
            .lookup(name.trim())
            .ok_or_else(|| Error::Usage(format!("unknown state `{name}`")))?;
        let k: u32 = k
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("bad threshold in `{pair}`")))?;
        rho.set(q, k);
    }
    Ok(rho)
}

/// Runs the command line with explicit output streams; returns the exit
/// status.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Verify {
            model,
            direction,
            budget,
            max_refinements,
            rho,
            trace,
            report,
        } => {
            let sys = load_model(&model)?;
            if !(budget.is_finite() && budget > 0.0) {
                return Err(Error::Usage("budget must be a positive number of seconds".into()));
            }
            let initial = rho.map(|r| parse_resolution(&r, &sys)).transpose()?;
            let options = VerifyOptions {
                direction: direction.into(),
                initial,
                budget: Duration::from_secs_f64(budget),
                max_refinements,
            };
            let result = verify(&sys, &options)?;
            for round in &result.rounds {
                writeln!(
                    out,
                    "round {:>3}  {:>9.3}s  {:>8} steps  {:>9} words  {}  rho = {}",
                    round.index,
                    round.stats.elapsed.as_secs_f64(),
                    round.stats.iterations,
                    round.stats.words,
                    round.outcome.symbol(),
                    round.resolution.display(&sys.alphabet)
                )?;
                if trace {
                    if let Some(t) = &round.trace {
                        write!(out, "{}", t.render(&sys))?;
                    }
                }
            }
            match &result.verdict {
                Verdict::Unreachable => writeln!(out, "verdict: unreachable (safe)")?,
                Verdict::Reachable(cex) => {
                    writeln!(out, "verdict: reachable")?;
                    for (i, c) in cex.run.iter().enumerate() {
                        if i > 0 {
                            writeln!(out, "  --{}-->", sys.transitions[cex.transitions[i - 1]].id)?;
                        }
                        writeln!(out, "  {}", c.display(&sys.alphabet))?;
                    }
                }
                Verdict::BudgetExhausted(_) => writeln!(out, "verdict: budget exhausted")?,
            }
            if let Some(path) = report {
                std::fs::write(path, RunReport::new(&sys, options.direction, &result).to_json())?;
            }
            Ok(result.verdict.exit_code())
        }
        Command::Oracle { model, n } => {
            let sys = load_model(&model)?;
            let reach = explicit_reach(&sys, n)?;
            writeln!(out, "n = {n}: {} reachable configurations", reach.reached.len())?;
            writeln!(out, "bad_hit = {}", reach.bad_hit)?;
            if let Some(run) = &reach.witness {
                for c in run {
                    writeln!(out, "  {}", c.display(&sys.alphabet))?;
                }
            }
            Ok(i32::from(reach.bad_hit))
        }
        Command::Denote { model, word, max_len } => {
            let sys = load_model(&model)?;
            let w = CountedWord::parse(&word, &sys.alphabet)?;
            for c in enumerate_denotation(&w, max_len)? {
                writeln!(out, "{}", c.display(&sys.alphabet))?;
            }
            Ok(0)
        }
    }
}
