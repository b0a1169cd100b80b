use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use stratabound::boundary::{self, VerificationReport};
use stratabound::modification::{full_modification, SmallModPair};
use stratabound::weyl::DEFAULT_BUDGET;
use stratabound::{minimal_abs, Error, NewtonPolygon};

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Boundary strata of central streams: minimal arrowed binary sequences,
/// full modifications, boundary sets and their verifications.
///
/// Polygons are written as segments `m,n` joined by `+`, e.g. `2,7+3,5`.
/// Exit codes: 0 ok, 1 usage or input error, 2 verification failure,
/// 3 oracle budget exceeded.
#[derive(Debug, Parser)]
#[command(name = "stratabound", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Emit arrow diagrams: one line of tokens, then `k -> k'` per arrow.
    #[arg(long, global = true)]
    ascii: bool,

    /// Cap on c! d! for the brute-force oracle.
    #[arg(long, global = true, env = "STRATABOUND_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u128,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the minimal ABS of a polygon.
    Abs { polygon: NewtonPolygon },
    /// Run the full modification by a pair.
    Modify {
        polygon: NewtonPolygon,
        /// The pair `0:r:i,1:q:j`.
        #[arg(long)]
        pair: SmallModPair,
        /// Print every stage of constructions A and B.
        #[arg(long)]
        trace: bool,
    },
    /// Print B(xi) with the pairs producing each type.
    Boundary {
        polygon: NewtonPolygon,
        /// Compute by brute force in the symmetric group instead.
        #[arg(long)]
        oracle: bool,
    },
    /// Print the Euclidean reduction of a polygon and its word.
    Phi { polygon: NewtonPolygon },
    /// Check one of the boundary-set bijections.
    Verify { kind: VerifyKind, polygon: NewtonPolygon },
    /// Compare B(xi) with the oracle for every polygon up to a height.
    Sweep {
        #[arg(long)]
        height: u32,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VerifyKind {
    DirectSum,
    Curtail,
    Dual,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ContextTooLarge { .. } => EXIT_BUDGET,
            Error::VerificationFailure { .. } => EXIT_VERIFICATION,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

fn json(out: &mut impl Write, value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure { code: EXIT_USAGE, message: e.to_string() })?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn report(cli: &Cli, out: &mut impl Write, rep: VerificationReport) -> Result<(), Failure> {
    if cli.json {
        json(out, &rep)?;
    } else {
        write!(out, "{}", rep.render_table())?;
    }
    rep.into_result()?;
    Ok(())
}

fn execute(cli: &Cli, out: &mut impl Write) -> Result<(), Failure> {
    match &cli.command {
        Command::Abs { polygon } => {
            let s = minimal_abs(polygon)?;
            if cli.json {
                json(out, &s)?;
            } else {
                write!(out, "{}", s.render_ascii())?;
            }
        }
        Command::Modify { polygon, pair, trace } => {
            let s = minimal_abs(polygon)?;
            let tr = full_modification(&s, *pair)?;
            if cli.json {
                json(out, &tr)?;
            } else if *trace {
                write!(out, "{}", tr.render_ascii())?;
            } else {
                match &tr.result {
                    Some(r) => write!(out, "{}", r.render_ascii())?,
                    None => writeln!(out, "no full modification")?,
                }
                if !cli.ascii {
                    let verdict = tr.verdict.map_or("-".to_string(), |v| v.to_string());
                    writeln!(out, "verdict {verdict}")?;
                }
            }
        }
        Command::Boundary { polygon, oracle } => {
            let set = if *oracle {
                boundary::boundary_set_oracle(polygon, cli.budget)?
            } else {
                boundary::boundary_set(polygon)?
            };
            if cli.json {
                json(out, &set)?;
            } else {
                write!(out, "{}", set.render_table())?;
            }
        }
        Command::Phi { polygon } => {
            let phi = polygon.phi()?;
            if cli.json {
                json(out, &phi)?;
            } else {
                writeln!(out, "{phi}")?;
            }
        }
        Command::Verify { kind, polygon } => {
            let rep = match kind {
                VerifyKind::DirectSum => boundary::verify_direct_sum(polygon)?,
                VerifyKind::Curtail => boundary::verify_curtailment(polygon)?,
                VerifyKind::Dual => boundary::verify_duality(polygon)?,
            };
            report(cli, out, rep)?;
        }
        Command::Sweep { height } => {
            let census = boundary::oracle_sweep(*height, cli.budget)?;
            if cli.json {
                json(out, &census)?;
            } else {
                writeln!(out, "{census}")?;
            }
            if !census.all_agree() {
                let first = census.disagreements().next().map(|e| e.polygon.to_string());
                return Err(Failure {
                    code: EXIT_VERIFICATION,
                    message: format!("oracle disagrees, first at {}", first.unwrap_or_default()),
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute(&cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = out.flush();
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
