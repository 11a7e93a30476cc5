use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use flagsplit::rootdata::Family;
use flagsplit::splitting::{self, Guards, RncOutcome};
use flagsplit::suite::{self, Check, Format, SuiteConfig};

const OUT_DIR_ENV: &str = "FLAGSPLIT_OUT_DIR";

#[derive(Parser)]
#[command(name = "flagsplit", version, about = "Exact checks of splitting sections on classical flag varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch of checks for one group.
    Verify {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: Option<usize>,
        /// Comma-separated odd primes.
        #[arg(long, value_delimiter = ',', default_value = "3")]
        p: Vec<u64>,
        /// Comma-separated subset of: weights, equivariance, orders,
        /// specializations, skew, rnc, splitcoeff, squarefree.
        #[arg(long)]
        checks: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        max_terms: Option<usize>,
        #[arg(long)]
        max_seconds: Option<f64>,
        /// Record wall-clock seconds per check (makes reports differ between runs).
        #[arg(long)]
        timings: bool,
    },
    /// Verify the shipped n = 5 certificate.
    #[command(name = "appendix-check")]
    GoldenCheck {
        #[arg(long, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for and print an RNC certificate for σ₋ on the big cell.
    Rnc {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn ext(format: Format) -> &'static str {
    match format {
        Format::Json => "json",
        Format::Text => "txt",
    }
}

fn emit(text: &str, out: Option<PathBuf>, default_name: &str) -> Result<(), String> {
    let path = out.or_else(|| std::env::var_os(OUT_DIR_ENV).map(|d| PathBuf::from(d).join(default_name)));
    match path {
        Some(p) => std::fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_checks(list: &str) -> Result<Vec<Check>, String> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::parse).collect()
}

fn run(cli: Cli) -> Result<u8, (u8, String)> {
    let config_err = |m: String| (2u8, m);
    let io_err = |m: String| (1u8, m);
    match cli.command {
        Command::Verify {
            family,
            n,
            r,
            p,
            checks,
            seed,
            format,
            out,
            max_terms,
            max_seconds,
            timings,
        } => {
            let mut cfg = SuiteConfig::new(family, n, r);
            cfg.primes = p;
            if let Some(list) = checks {
                cfg.checks = parse_checks(&list).map_err(config_err)?;
            }
            cfg.seed = seed;
            let defaults = Guards::default();
            cfg.guards = Guards {
                max_terms: max_terms.unwrap_or(defaults.max_terms),
                max_seconds: max_seconds.unwrap_or(defaults.max_seconds),
            };
            cfg.timings = timings;
            let cfg = cfg.validate().map_err(|e| config_err(e.to_string()))?;
            let report = suite::run_suite(&cfg);
            let name = match r {
                Some(r) => format!("{family}{n}-r{r}.{}", ext(format)),
                None => format!("{family}{n}.{}", ext(format)),
            };
            emit(&report.render(format), out, &name).map_err(io_err)?;
            Ok(report.exit_code() as u8)
        }
        Command::GoldenCheck { format, out } => {
            let a = suite::golden_chain_check().map_err(io_err)?;
            let text = match format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&a).unwrap()),
                Format::Text => format!(
                    "{} golden sl5 chain ({} steps, order {})\n{}",
                    if a.pass { "PASS" } else { "FAIL" },
                    a.length,
                    a.order.join(" "),
                    a.verify.failure.as_deref().map(|f| format!("{f}\n")).unwrap_or_default()
                ),
            };
            emit(&text, out, &format!("golden-chain.{}", ext(format))).map_err(io_err)?;
            Ok(if a.pass { 0 } else { 1 })
        }
        Command::Rnc { family, n, format, out } => {
            if family != Family::A {
                return Err(config_err("rnc certificates are emitted for --family sl only".into()));
            }
            if !(2..=12).contains(&n) {
                return Err(config_err(format!("n = {n} is outside 2..=12")));
            }
            let (outcome, f, vars) = suite::sl_certificate(n, Guards::default()).map_err(io_err)?;
            let (text, code) = match outcome {
                RncOutcome::Found(cert) => {
                    let ok = splitting::rnc_verify(&f, &cert, &vars).pass;
                    let text = match format {
                        Format::Json => format!("{}\n", serde_json::to_string_pretty(&cert.to_json(&vars)).unwrap()),
                        Format::Text => cert.to_text(&vars),
                    };
                    (text, if ok { 0 } else { 1 })
                }
                RncOutcome::Exhausted { states } => (
                    format!("{}\n", json!({ "found": false, "states_explored": states })),
                    1,
                ),
                RncOutcome::NotComputed(trip) => (format!("{}\n", json!({ "not_computed": trip })), 3),
            };
            emit(&text, out, &format!("rnc-sl{n}.{}", ext(format))).map_err(io_err)?;
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
