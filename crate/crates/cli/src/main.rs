use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vortinv_cli::config::key_help;
use vortinv_cli::{parse_config, run, CliError};

#[derive(Parser)]
#[command(name = "vortinv", version, about = "Forward, inverse, and verification runs for boundary-vorticity recovery")]
#[command(after_help = key_help())]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate with a constant boundary vorticity.
    Forward(Flags),
    /// Recover h(t) from the initial vorticity and the mean target L.
    Inverse(Flags),
    /// Check the energy balance, a priori bounds, decay, and elliptic constants.
    Verify(Flags),
    /// Measure the stability ratio over a perturbation ladder.
    Stability(Flags),
    /// Refinement study against the exact sine-mode solution.
    Convergence(Flags),
}

#[derive(Args)]
#[command(after_help = key_help())]
struct Flags {
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Nodes per axis [default: 65]
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    nx: Option<String>,
    #[arg(long)]
    ny: Option<String>,
    /// Domain length along x [default: 1]
    #[arg(long)]
    lx: Option<String>,
    /// Domain length along y [default: 1]
    #[arg(long)]
    ly: Option<String>,
    /// Time step [default: 0.001]
    #[arg(long)]
    dt: Option<String>,
    /// Final time [default: 0.1]
    #[arg(long)]
    tmax: Option<String>,
    /// Initial vorticity: taylor | constant:C | mode:M,N[,AMP] | random-stream:SEED,MODES | file:PATH [default: taylor]
    #[arg(long)]
    fixture: Option<String>,
    /// projection | landweber | lm [default: projection]
    #[arg(long)]
    method: Option<String>,
    /// Target mean vorticity or `auto` [default: auto]
    #[arg(long = "L")]
    target: Option<String>,
    /// Output directory [default: out]
    #[arg(long)]
    out: Option<String>,
    /// Seed for the elliptic probe [default: 0]
    #[arg(long)]
    seed: Option<String>,
    /// all | norms | every:M [default: norms]
    #[arg(long)]
    store: Option<String>,
    /// Any config key, as KEY=VALUE; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Flags {
    fn overrides(&self, command: &str) -> Result<Vec<(String, String)>, CliError> {
        let mut out = Vec::new();
        for s in &self.set {
            let (k, v) = s.split_once('=').ok_or_else(|| CliError::Syntax {
                line: 0,
                message: format!("--set expects KEY=VALUE, got `{s}`"),
            })?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        let named = [
            ("grid", &self.grid),
            ("nx", &self.nx),
            ("ny", &self.ny),
            ("lx", &self.lx),
            ("ly", &self.ly),
            ("dt", &self.dt),
            ("tmax", &self.tmax),
            ("fixture", &self.fixture),
            ("method", &self.method),
            ("L", &self.target),
            ("out", &self.out),
            ("seed", &self.seed),
            ("store", &self.store),
        ];
        for (k, v) in named {
            if let Some(v) = v {
                out.push((k.to_string(), v.clone()));
            }
        }
        out.push(("command".into(), command.into()));
        Ok(out)
    }
}

fn execute(cli: Cli) -> Result<String, CliError> {
    let (name, flags) = match &cli.command {
        Cmd::Forward(f) => ("forward", f),
        Cmd::Inverse(f) => ("inverse", f),
        Cmd::Verify(f) => ("verify", f),
        Cmd::Stability(f) => ("stability", f),
        Cmd::Convergence(f) => ("convergence", f),
    };
    let text = match &flags.config {
        None => String::new(),
        Some(p) => std::fs::read_to_string(p).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => CliError::MissingFile(p.clone()),
            _ => CliError::Io {
                context: format!("reading {}", p.display()),
                source: e,
            },
        })?,
    };
    let cfg = parse_config(&text, &flags.overrides(name)?)?;
    let summary = run(&cfg)?;
    Ok(serde_json::to_string(&summary).expect("summary serializes"))
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(line) => {
            // a closed pipe on stdout is not a failure of the run
            let _ = writeln!(std::io::stdout(), "{line}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
