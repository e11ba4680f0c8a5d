//! `nickpay`: drive the simulated payment world from the command line.
//!
//! Every command except `setup` and `demo` loads the world from `--state`,
//! applies one operation, saves, and reports. Exit codes are stable per
//! failure class; see the table in the repository README.

use clap::{Parser, Subcommand};
use nickpay_cli::scenario::{self as ops, AuditFault};
use nickpay_cli::{HarnessError, WorldState};
use nickpay_core::Nickname;
use serde::Serialize;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "nickpay", version, about = "Simulated auditable pseudonymous payments")]
struct Cli {
    /// World state file.
    #[arg(long, global = true, default_value = "nickpay-state.json")]
    state: PathBuf,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Create the world: issuer, supervisor, minting authority, ledger.
    Setup {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = ops::DEFAULT_LEDGER_ID)]
        ledger_id: String,
    },
    /// Enroll a user through the three-message join exchange.
    Join { user: String },
    /// Mint funds to a fresh nickname of the user.
    Mint { user: String, amount: u128 },
    /// Relayed pseudonymous transfer between two members.
    Transfer {
        from: String,
        to: String,
        amount: u128,
    },
    /// List the announcement events the user's trapdoor recognizes.
    Scan { user: String },
    /// Supervisor: reveal who owns a nickname, with proof.
    Open {
        #[command(flatten)]
        target: Target,
    },
    /// Open, then have an independent auditor verify the proof.
    Audit {
        #[command(flatten)]
        target: Target,
    },
    /// Run the fixed storyline on a fresh world, one JSON line per step.
    Demo {
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Inspect or move world state files.
    State {
        #[command(subcommand)]
        cmd: StateCmd,
    },
}

#[derive(clap::Args)]
#[group(required = true, multiple = false)]
struct Target {
    /// Announcement event sequence number.
    #[arg(long)]
    sequence: Option<u64>,
    /// Nickname, hex-encoded (96 bytes).
    #[arg(long)]
    nickname: Option<String>,
}

#[derive(Subcommand)]
enum StateCmd {
    /// Write the current world to PATH in canonical form.
    Export { path: PathBuf },
    /// Replace the current world with the one at PATH, after validation.
    Import { path: PathBuf },
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => {}
        Err(e) => {
            // Best effort: the exit code alone must carry the failure class
            // even if stdout is already gone.
            if cli.json {
                let _ = writeln!(
                    io::stdout(),
                    "{}",
                    serde_json::json!({ "error": e.to_string(), "code": e.exit_code() })
                );
            } else {
                eprintln!("error: {e}");
            }
            std::process::exit(e.exit_code() as i32);
        }
    }
}

/// Print one line, ending quietly if the consumer closed the pipe. State is
/// always saved before output, so an early exit here loses nothing.
fn print_line(s: &str) {
    let mut out = io::stdout().lock();
    let done = out
        .write_all(s.as_bytes())
        .and_then(|_| out.write_all(b"\n"))
        .and_then(|_| out.flush());
    if let Err(e) = done {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(2);
    }
}

fn load(path: &Path) -> Result<WorldState, HarnessError> {
    WorldState::load(path)
}

fn parse_nickname(hex_str: &str) -> Result<Nickname, HarnessError> {
    let raw = hex::decode(hex_str)
        .map_err(|e| HarnessError::State(format!("nickname is not hex: {e}")))?;
    Nickname::from_bytes(&raw)
        .map_err(|e| HarnessError::State(format!("nickname does not decode: {e}")))
}

fn emit<T: Serialize>(cli: &Cli, report: &T, text: String) {
    if cli.json {
        print_line(&serde_json::to_string(report).expect("report serializes"));
    } else {
        print_line(&text);
    }
}

fn run(cli: &Cli) -> Result<(), HarnessError> {
    match &cli.cmd {
        Cmd::Setup { seed, ledger_id } => {
            let mut world = if cli.state.exists() {
                load(&cli.state)?
            } else {
                WorldState::new(*seed)
            };
            let report = ops::run_setup(&mut world, ledger_id)?;
            world.save(&cli.state)?;
            emit(cli, &report, format!("world ready: ledger {}", report.ledger_id));
            Ok(())
        }
        Cmd::Join { user } => {
            let mut world = load(&cli.state)?;
            let report = ops::run_join(&mut world, user)?;
            world.save(&cli.state)?;
            emit(cli, &report, format!("{user} joined the group"));
            Ok(())
        }
        Cmd::Mint { user, amount } => {
            let mut world = load(&cli.state)?;
            let report = ops::run_mint(&mut world, user, *amount)?;
            world.save(&cli.state)?;
            emit(
                cli,
                &report,
                format!(
                    "minted {amount} to {user} at {} (event {})",
                    report.address, report.sequence
                ),
            );
            Ok(())
        }
        Cmd::Transfer { from, to, amount } => {
            let mut world = load(&cli.state)?;
            let report = ops::run_transfer(&mut world, from, to, *amount)?;
            world.save(&cli.state)?;
            emit(
                cli,
                &report,
                format!(
                    "{from} paid {amount} to {to}: {} -> {} via {} (event {})",
                    report.sender_address, report.recipient_address, report.relayer, report.sequence
                ),
            );
            Ok(())
        }
        Cmd::Scan { user } => {
            let mut world = load(&cli.state)?;
            let report = ops::run_scan(&mut world, user)?;
            world.save(&cli.state)?;
            let mut text = format!(
                "{user}: {} owned event(s), received {}, holding {} across {} account(s)",
                report.owned.len(),
                report.received_total,
                report.balance_total,
                report.account_count
            );
            for e in &report.owned {
                text.push_str(&format!("\n  event {} {:?} {} at {}", e.sequence, e.kind, e.amount, e.address));
            }
            emit(cli, &report, text);
            Ok(())
        }
        Cmd::Open { target } => {
            let mut world = load(&cli.state)?;
            let report = match (target.sequence, &target.nickname) {
                (Some(seq), _) => ops::run_open(&mut world, seq)?,
                (None, Some(hex_nk)) => {
                    let nk = parse_nickname(hex_nk)?;
                    ops::run_open_nickname(&mut world, &nk)?
                }
                (None, None) => unreachable!("clap enforces the target group"),
            };
            world.save(&cli.state)?;
            let text = match &report.found {
                Some(user) => format!("{} belongs to {user}", report.address),
                None => format!("{}: NOT_FOUND (no registered member matches)", report.address),
            };
            emit(cli, &report, text);
            Ok(())
        }
        Cmd::Audit { target } => {
            let mut world = load(&cli.state)?;
            let report = match (target.sequence, &target.nickname) {
                (Some(seq), _) => ops::run_audit(&mut world, seq)?,
                (None, Some(hex_nk)) => {
                    let nk = parse_nickname(hex_nk)?;
                    ops::run_audit_nickname(&mut world, &nk, AuditFault::None)?
                }
                (None, None) => unreachable!("clap enforces the target group"),
            };
            world.save(&cli.state)?;
            let text = match (&report.found, report.verdict) {
                (Some(user), Some(true)) => {
                    format!("{} belongs to {user}; proof verified", report.address)
                }
                (Some(user), _) => {
                    format!("{} claimed for {user}; PROOF REJECTED", report.address)
                }
                (None, _) => format!("{}: NOT_FOUND (nothing to audit)", report.address),
            };
            emit(cli, &report, text);
            Ok(())
        }
        Cmd::Demo { seed } => {
            let mut world = WorldState::new(*seed);
            let records = ops::run_script(&mut world, &ops::demo_script());
            let conserved = records.iter().all(|r| r.minted == r.balances);
            if !conserved {
                return Err(HarnessError::State("conservation violated in demo".into()));
            }
            world.save(&cli.state)?;
            for r in &records {
                print_line(&serde_json::to_string(r).expect("record serializes"));
            }
            Ok(())
        }
        Cmd::State { cmd } => match cmd {
            StateCmd::Export { path } => {
                let world = load(&cli.state)?;
                std::fs::write(path, world.to_canonical_json()).map_err(|e| {
                    HarnessError::State(format!("cannot write {}: {e}", path.display()))
                })?;
                emit(
                    cli,
                    &serde_json::json!({ "exported": path.display().to_string() }),
                    format!("exported world to {}", path.display()),
                );
                Ok(())
            }
            StateCmd::Import { path } => {
                let world = load(path)?;
                world.save(&cli.state)?;
                emit(
                    cli,
                    &serde_json::json!({ "imported": path.display().to_string() }),
                    format!("imported world from {}", path.display()),
                );
                Ok(())
            }
        },
    }
}
