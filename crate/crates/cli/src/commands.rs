//! Subcommand bodies. Each returns the text to print and the exit code so
//! they can be exercised without spawning the binary.

use std::path::Path;

use ifttpin_core::sim::{
    decode_transcript, parse_pin, run_benchmark, sample_session, BenchmarkConfig, ButtonChoice,
};
use ifttpin_core::stats::suto_score;
use ifttpin_core::{DigitDomain, Mode, Transcript};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (table|json)")),
        }
    }
}

pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String, code: i32) -> Self {
        Output {
            stdout,
            stderr: String::new(),
            code,
        }
    }

    fn error(msg: impl std::fmt::Display, code: i32) -> Self {
        Output {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimulateArgs {
    pub mode: Mode,
    pub policy: ButtonChoice,
    pub samples: usize,
    pub seed: u64,
    pub pin: Option<String>,
    pub pin_length: Option<usize>,
    pub buttons: Option<usize>,
    pub seconds_per_click: f64,
    pub decode_rate: Option<f64>,
    pub click_cap: u32,
    pub format: Format,
    pub transcript_out: Option<std::path::PathBuf>,
}

pub fn simulate(args: &SimulateArgs) -> anyhow::Result<Output> {
    let mut cfg = BenchmarkConfig::new(args.mode, args.samples, args.seed);
    cfg.choice = args.policy;
    if let Some(p) = &args.pin {
        let digits = parse_pin(p, DigitDomain::decimal())?;
        if let Some(len) = args.pin_length {
            anyhow::ensure!(
                len == digits.len(),
                "--pin-length {len} disagrees with --pin {p}"
            );
        }
        cfg.pin_length = digits.len();
        cfg.pin = Some(digits);
    } else if let Some(len) = args.pin_length {
        cfg.pin_length = len;
    }
    if let Some(b) = args.buttons {
        cfg.button_count = b;
    }
    cfg.seconds_per_click = args.seconds_per_click;
    cfg.decoding_rate = args.decode_rate;
    cfg.click_cap = args.click_cap;

    let report = run_benchmark(&cfg)?;
    if let Some(path) = &args.transcript_out {
        let (session, _) = sample_session(&cfg, 0)?;
        session.transcript().write(std::fs::File::create(path)?)?;
    }
    let stdout = match args.format {
        Format::Table => report.to_table(),
        Format::Json => report.to_json() + "\n",
    };
    let code = if report.aborted == 0 { 0 } else { 1 };
    Ok(Output::ok(stdout, code))
}

/// Decodes a transcript file. Exit 0 iff every position is a single digit,
/// 1 when some position is still ambiguous, 2 on unreadable input.
pub fn attack(path: &Path, format: Format) -> Output {
    let decoded = match Transcript::load(path).and_then(|t| decode_transcript(&t)) {
        Ok(d) => d,
        Err(e) => return Output::error(e, 2),
    };
    let code = if decoded.is_complete() { 0 } else { 1 };
    let stdout = match format {
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "positions": decoded.positions.iter().map(|s| s.iter().map(|d| d.0).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "pin": decoded.pin(),
        }))
        .expect("json")
            + "\n",
        Format::Table => {
            let mut out = String::new();
            for (i, set) in decoded.positions.iter().enumerate() {
                out += &format!("position {}: {}\n", i + 1, set);
            }
            match decoded.pin() {
                Some(pin) => out += &format!("pin: {pin}\n"),
                None => out += "pin: ambiguous\n",
            }
            out
        }
    };
    Output::ok(stdout, code)
}

pub fn suto(enter_rate: f64, decode_rate: f64) -> Output {
    match suto_score(enter_rate, decode_rate) {
        Ok(s) => Output::ok(
            format!(
                "{s:.2}
"
            ),
            0,
        ),
        Err(e) => Output::error(e, 2),
    }
}
