use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use ebnoise::amendable::{self, FilterCandidate};
use ebnoise::channel::ChannelWire;
use ebnoise::gaussian::{self, Family, IsoChannel, IsoWire};
use ebnoise::measures::{self, NcResult, OptimizerConfig};
use ebnoise::sweep::{self, Axis, Figure, Fixed, SweepSettings, SweepSpec};
use ebnoise::verify;
use ebnoise::Channel;

#[derive(Debug, Parser)]
#[command(
    name = "ebnoise",
    version,
    about = "Noise-addition measures for qubit and Gaussian channels"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Print μ_c, n_c and the EBⁿ flags of one channel as JSON.
    Analyze {
        /// Channel JSON, a path to a JSON file, or `-` for stdin.
        channel: String,
        #[arg(long, default_value_t = measures::DEFAULT_CAP)]
        cap: u32,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Write one figure's grid as CSV.
    Sweep {
        figure: Figure,
        /// First axis as min:max:steps.
        #[arg(long)]
        x: Option<Axis>,
        /// Second axis as min:max:steps.
        #[arg(long)]
        y: Option<Axis>,
        /// Points per axis when the axes are not given.
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long)]
        lambda3: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        /// s1, s2, s3 or r2r1 (fig4).
        #[arg(long, value_parser = parse_filter)]
        filter: Option<FilterCandidate>,
        /// attenuation or amplification (fig5).
        #[arg(long, value_parser = parse_family)]
        family: Option<Family>,
        #[arg(long, default_value_t = measures::DEFAULT_CAP)]
        cap: u32,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        /// Output file; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the table of reference values; exits 1 if any fails.
    Verify,
    /// Search for a filter that raises n_c and print the AmendReport JSON.
    Amend {
        channel: String,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = measures::DEFAULT_CAP)]
        cap: u32,
    },
}

fn parse_filter(s: &str) -> Result<FilterCandidate, String> {
    match s {
        "s1" => Ok(FilterCandidate::Pauli(1)),
        "s2" => Ok(FilterCandidate::Pauli(2)),
        "s3" => Ok(FilterCandidate::Pauli(3)),
        "r2r1" => Ok(FilterCandidate::R2R1),
        _ => Err(format!("unknown filter `{s}` (s1, s2, s3, r2r1)")),
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s {
        "attenuation" => Ok(Family::Attenuation),
        "amplification" => Ok(Family::Amplification),
        _ => Err(format!("unknown family `{s}`")),
    }
}

/// Failure classes, one exit code each.
enum Fail {
    Verify,
    Parse(String),
    Invariant(String),
    Io(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Verify => 1,
            Fail::Parse(_) => 2,
            Fail::Invariant(_) => 3,
            Fail::Io(_) => 4,
        }
    }
}

impl From<ebnoise::Error> for Fail {
    fn from(e: ebnoise::Error) -> Self {
        match e {
            ebnoise::Error::InvalidSweep(m) => Fail::Parse(m),
            other => Fail::Invariant(other.to_string()),
        }
    }
}

fn read_input(arg: &str) -> Result<String, Fail> {
    let t = arg.trim_start();
    if t.starts_with('{') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Fail::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(arg).map_err(|e| Fail::Io(format!("{arg}: {e}")))
}

enum Input {
    Qubit(Channel),
    Gaussian(IsoChannel),
}

/// Syntax and schema problems are parse failures; a well-formed channel
/// that violates its constraints is an invariant failure.
fn parse_input(text: &str) -> Result<Input, Fail> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Fail::Parse(format!("invalid JSON: {e}")))?;
    if v.get("family").is_some() {
        let w: IsoWire = serde_json::from_value(v).map_err(|e| Fail::Parse(e.to_string()))?;
        return Ok(Input::Gaussian(IsoChannel::try_from(w)?));
    }
    let w: ChannelWire = serde_json::from_value(v).map_err(|e| Fail::Parse(e.to_string()))?;
    Ok(Input::Qubit(Channel::try_from(w)?))
}

#[derive(Serialize)]
struct GaussianReport {
    family: Family,
    k: f64,
    n0: f64,
    eb: bool,
    n_c: NcResult,
    cap: u32,
}

fn json_line<T: Serialize>(v: &T) -> Result<String, Fail> {
    serde_json::to_string(v)
        .map(|s| s + "\n")
        .map_err(|e| Fail::Invariant(e.to_string()))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Fail> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Fail::Io(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Fail::Io(format!("stdout: {e}"))),
    }
}

fn optimizer(tol: f64) -> Result<OptimizerConfig, Fail> {
    OptimizerConfig::with_tol(tol).map_err(|e| Fail::Parse(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Fail> {
    match cli.cmd {
        Cmd::Analyze { channel, cap, tol } => {
            if cap == 0 {
                return Err(Fail::Parse("--cap must be at least 1".into()));
            }
            let cfg = optimizer(tol)?;
            let text = match parse_input(&read_input(&channel)?)? {
                Input::Qubit(c) => {
                    if c.as_unital().is_some_and(|u| !u.is_completely_positive()) {
                        eprintln!("warning: unital map is not completely positive");
                    }
                    let report = measures::analyze(&c, cap, &cfg)?;
                    if let Some(s) = report
                        .restart_spread
                        .filter(|&s| s > measures::RESTART_SPREAD_WARN)
                    {
                        eprintln!("warning: restart minima differ by {s:e}; μ_c may be multimodal");
                    }
                    json_line(&report)?
                }
                Input::Gaussian(g) => json_line(&GaussianReport {
                    family: g.family(),
                    k: g.k(),
                    n0: g.n0(),
                    eb: gaussian::is_eb_iso(&g),
                    n_c: gaussian::n_c_iso(&g, cap)?,
                    cap,
                })?,
            };
            emit(&text, None)
        }
        Cmd::Sweep {
            figure,
            x,
            y,
            steps,
            lambda3,
            gamma,
            filter,
            family,
            cap,
            tol,
            budget,
            out,
        } => {
            if cap == 0 || budget == 0 {
                return Err(Fail::Parse("--cap and --budget must be at least 1".into()));
            }
            let axes = match (x, y) {
                (None, None) => None,
                (Some(x), None) => Some(vec![x]),
                (Some(x), Some(y)) => Some(vec![x, y]),
                (None, Some(_)) => return Err(Fail::Parse("--y needs --x".into())),
            };
            let fixed = Fixed {
                lambda3,
                gamma,
                filter,
                family,
            };
            let spec = SweepSpec::new(figure, axes, fixed, steps)?;
            let settings = SweepSettings {
                cap,
                budget,
                optimizer: optimizer(tol)?,
            };
            let table = sweep::run(&spec, &settings)?;
            emit(&table.to_csv(), out.as_ref())
        }
        Cmd::Verify => {
            let rows = verify::fixture_table()?;
            emit(&verify::render(&rows), None)?;
            if rows.iter().all(|r| r.pass) {
                Ok(())
            } else {
                Err(Fail::Verify)
            }
        }
        Cmd::Amend {
            channel,
            budget,
            seed,
            cap,
        } => {
            if cap == 0 || budget == 0 {
                return Err(Fail::Parse("--cap and --budget must be at least 1".into()));
            }
            match parse_input(&read_input(&channel)?)? {
                Input::Qubit(c) => {
                    let report = amendable::search_filter(&c, cap, budget, seed)?;
                    emit(&json_line(&report)?, None)
                }
                Input::Gaussian(_) => Err(Fail::Parse(
                    "amend takes a qubit channel (unital, gad or kraus)".into(),
                )),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Fail::Verify => eprintln!("error: verification failed"),
                Fail::Parse(m) | Fail::Invariant(m) | Fail::Io(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
