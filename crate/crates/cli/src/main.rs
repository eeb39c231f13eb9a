use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use ifttpin_cli::commands::{self, Format, Output, SimulateArgs};
use ifttpin_cli::service::{self, ServiceConfig};
use ifttpin_core::session::DEFAULT_CLICK_CAP;
use ifttpin_core::sim::{ButtonChoice, DEFAULT_SECONDS_PER_CLICK};
use ifttpin_core::Mode;

#[derive(Parser)]
#[command(
    name = "ifttpin",
    version,
    about = "Self-calibrating PIN entry: simulate, attack, score, serve"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run synthetic users through sessions and print a metrics report.
    Simulate {
        /// trad | roth | iftt
        #[arg(long, default_value = "iftt")]
        mode: Mode,
        /// lazy | uniform | subset-k (e.g. subset-3)
        #[arg(long, default_value = "lazy")]
        policy: ButtonChoice,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fixed PIN for every sample; random per sample otherwise.
        #[arg(long)]
        pin: Option<String>,
        /// Defaults to 4, or the length of --pin.
        #[arg(long)]
        pin_length: Option<usize>,
        /// Pad size; defaults to 10 (trad), 2 (roth), 9 (iftt).
        #[arg(long)]
        buttons: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SECONDS_PER_CLICK)]
        seconds_per_click: f64,
        /// Measured human decoding rate in digits/min; enables the SUTO score.
        #[arg(long)]
        decode_rate: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_CLICK_CAP)]
        click_cap: u32,
        /// table | json
        #[arg(long, default_value = "table")]
        format: Format,
        /// Write the transcript of sample 0 to this file.
        #[arg(long)]
        transcript_out: Option<PathBuf>,
    },
    /// Decode a recorded transcript as a full-view observer.
    Attack {
        transcript: PathBuf,
        /// table | json
        #[arg(long, default_value = "table")]
        format: Format,
    },
    /// Ratio of entering rate to decoding rate.
    Suto {
        /// Digits per minute a legitimate user enters.
        #[arg(long)]
        enter_rate: f64,
        /// Digits per minute an observer decodes.
        #[arg(long)]
        decode_rate: f64,
    },
    /// Serve the HTTP/JSON session API on localhost.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Seeds sessions created without an explicit seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Idle seconds before a session expires.
        #[arg(long, default_value_t = 1800)]
        ttl_secs: u64,
    },
}

fn emit(out: Output) -> ExitCode {
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate {
            mode,
            policy,
            samples,
            seed,
            pin,
            pin_length,
            buttons,
            seconds_per_click,
            decode_rate,
            click_cap,
            format,
            transcript_out,
        } => {
            let args = SimulateArgs {
                mode,
                policy,
                samples,
                seed,
                pin,
                pin_length,
                buttons,
                seconds_per_click,
                decode_rate,
                click_cap,
                format,
                transcript_out,
            };
            match commands::simulate(&args) {
                Ok(out) => emit(out),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Command::Attack { transcript, format } => emit(commands::attack(&transcript, format)),
        Command::Suto {
            enter_rate,
            decode_rate,
        } => emit(commands::suto(enter_rate, decode_rate)),
        Command::Serve {
            host,
            port,
            seed,
            ttl_secs,
        } => {
            let cfg = ServiceConfig {
                seed,
                ttl: Duration::from_secs(ttl_secs),
            };
            let rt = match tokio::runtime::Runtime::new() {
                Ok(rt) => rt,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            match rt.block_on(service::serve(&format!("{host}:{port}"), cfg)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
