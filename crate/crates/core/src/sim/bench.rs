//! Batch simulation and the metrics report.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{Digit, DigitDomain};
use crate::error::{PinError, Result};
use crate::session::{Mode, Session, SessionConfig, Status, DEFAULT_CLICK_CAP, DEFAULT_PIN_LENGTH};
use crate::sim::decode::decode_transcript;
use crate::sim::policy::{random_mapping, ButtonChoice, UserPolicy};
use crate::sim::simulate::{default_buttons, simulate};
use crate::stats::{digits_per_minute, suto_score, Summary};

pub const DEFAULT_SECONDS_PER_CLICK: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub mode: Mode,
    pub choice: ButtonChoice,
    pub samples: usize,
    pub seed: u64,
    pub pin_length: usize,
    pub button_count: usize,
    /// Fixed PIN for every sample; a fresh random PIN per sample when absent.
    pub pin: Option<Vec<Digit>>,
    pub seconds_per_click: f64,
    /// Externally measured human decoding rate in digits/min.
    pub decoding_rate: Option<f64>,
    pub click_cap: u32,
}

impl BenchmarkConfig {
    pub fn new(mode: Mode, samples: usize, seed: u64) -> Self {
        BenchmarkConfig {
            mode,
            choice: ButtonChoice::Lazy,
            samples,
            seed,
            pin_length: DEFAULT_PIN_LENGTH,
            button_count: default_buttons(mode),
            pin: None,
            seconds_per_click: DEFAULT_SECONDS_PER_CLICK,
            decoding_rate: None,
            click_cap: DEFAULT_CLICK_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub mode: Mode,
    pub policy: String,
    pub sample_count: usize,
    pub completed: usize,
    pub aborted: usize,
    pub inconsistency_restarts: usize,
    pub clicks_per_digit: Summary<f64>,
    /// Mean presses at each PIN position over completed samples.
    pub mean_clicks_per_position: Vec<f64>,
    pub clicks_per_pin: Summary<f64>,
    pub seconds_per_click: f64,
    /// Digits per minute at the configured press cost.
    pub encoding_rate: f64,
    /// Events the recording attacker needed per digit.
    pub decoding_clicks_per_digit: Summary<f64>,
    /// Completed transcripts the attacker decoded exactly.
    pub decoded_exactly: usize,
    pub decoding_rate: Option<f64>,
    pub suto_score: Option<f64>,
}

struct SampleResult {
    completed: bool,
    restarts: usize,
    per_digit: Vec<u32>,
    decoded_clicks: Vec<u32>,
    decoded_exactly: bool,
}

fn sample_seed(seed: u64, i: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng.random()
}

/// The session behind sample `i` of a benchmark, with the PIN it entered.
pub fn sample_session(cfg: &BenchmarkConfig, i: usize) -> Result<(Session, Vec<Digit>)> {
    let seed = sample_seed(cfg.seed, i);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain = DigitDomain::decimal();
    let pin = match &cfg.pin {
        Some(p) => p.clone(),
        None => (0..cfg.pin_length)
            .map(|_| Digit(rng.random_range(0..domain.size() as u8)))
            .collect(),
    };
    let mapping = random_mapping(cfg.button_count, &mut rng);
    let policy = UserPolicy::new(mapping, cfg.choice, rng.random())?;
    let scfg = SessionConfig::new(cfg.mode, cfg.pin_length, cfg.button_count, rng.random())
        .with_click_cap(cfg.click_cap);
    Ok((simulate(&policy, scfg, &pin)?, pin))
}

fn run_sample(cfg: &BenchmarkConfig, i: usize) -> Result<SampleResult> {
    let (session, _) = sample_session(cfg, i)?;
    let completed = *session.status() == Status::Completed;
    let decoded = decode_transcript(&session.transcript())?;
    Ok(SampleResult {
        completed,
        restarts: session.incidents().len(),
        per_digit: session.clicks_per_digit().to_vec(),
        decoded_exactly: completed && decoded.pin() == session.pin(),
        decoded_clicks: decoded.clicks_per_position,
    })
}

pub fn run_benchmark(cfg: &BenchmarkConfig) -> Result<MetricsReport> {
    if cfg.samples == 0 {
        return Err(PinError::domain("at least one sample is required"));
    }
    if let Some(p) = &cfg.pin {
        if p.len() != cfg.pin_length {
            return Err(PinError::domain("fixed PIN length differs from pin_length"));
        }
    }
    let results = (0..cfg.samples)
        .into_par_iter()
        .map(|i| run_sample(cfg, i))
        .collect::<Result<Vec<_>>>()?;

    let completed: Vec<&SampleResult> = results.iter().filter(|r| r.completed).collect();
    let all_digits = || {
        completed
            .iter()
            .flat_map(|r| r.per_digit.iter().map(|&c| f64::from(c)))
    };
    let clicks_per_digit = Summary::from_samples(all_digits())
        .ok_or_else(|| PinError::domain("no sample completed"))?;
    let clicks_per_pin = Summary::from_samples(
        completed
            .iter()
            .map(|r| f64::from(r.per_digit.iter().sum::<u32>())),
    )
    .expect("non-empty");
    let mean_clicks_per_position = (0..cfg.pin_length)
        .map(|pos| {
            let sum: f64 = completed.iter().map(|r| f64::from(r.per_digit[pos])).sum();
            sum / completed.len() as f64
        })
        .collect();
    let decoding_clicks_per_digit = Summary::from_samples(
        completed
            .iter()
            .flat_map(|r| r.decoded_clicks.iter().map(|&c| f64::from(c))),
    )
    .expect("non-empty");
    let encoding_rate = digits_per_minute(clicks_per_digit.mean, cfg.seconds_per_click)?;
    let suto = match cfg.decoding_rate {
        Some(d) => Some(suto_score(encoding_rate, d)?),
        None => None,
    };
    Ok(MetricsReport {
        mode: cfg.mode,
        policy: cfg.choice.to_string(),
        sample_count: cfg.samples,
        completed: completed.len(),
        aborted: results.len() - completed.len(),
        inconsistency_restarts: results.iter().map(|r| r.restarts).sum(),
        clicks_per_digit,
        mean_clicks_per_position,
        clicks_per_pin,
        seconds_per_click: cfg.seconds_per_click,
        encoding_rate,
        decoding_clicks_per_digit,
        decoded_exactly: completed.iter().filter(|r| r.decoded_exactly).count(),
        decoding_rate: cfg.decoding_rate,
        suto_score: suto,
    })
}

impl MetricsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Two aligned columns, one metric per row.
    pub fn to_table(&self) -> String {
        let fmt_summary = |s: &Summary<f64>| {
            format!(
                "{:.3} (sd {:.3}, min {}, max {})",
                s.mean, s.sd, s.min, s.max
            )
        };
        let positions = self
            .mean_clicks_per_position
            .iter()
            .map(|m| format!("{m:.3}"))
            .collect::<Vec<_>>()
            .join(" ");
        let opt = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.2}"));
        let rows: Vec<(&str, String)> = vec![
            ("mode", self.mode.to_string()),
            ("policy", self.policy.clone()),
            ("samples", self.sample_count.to_string()),
            ("completed", self.completed.to_string()),
            ("aborted", self.aborted.to_string()),
            (
                "inconsistency restarts",
                self.inconsistency_restarts.to_string(),
            ),
            ("clicks/digit", fmt_summary(&self.clicks_per_digit)),
            ("clicks/position", positions),
            ("clicks/pin", fmt_summary(&self.clicks_per_pin)),
            ("seconds/click", format!("{:.2}", self.seconds_per_click)),
            (
                "encoding rate (digits/min)",
                format!("{:.2}", self.encoding_rate),
            ),
            (
                "attacker clicks/digit",
                fmt_summary(&self.decoding_clicks_per_digit),
            ),
            ("decoded exactly", self.decoded_exactly.to_string()),
            ("decoding rate (digits/min)", opt(self.decoding_rate)),
            ("SUTO score", opt(self.suto_score)),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trad_costs_one_click_per_digit() {
        let r = run_benchmark(&BenchmarkConfig::new(Mode::Trad, 50, 1)).unwrap();
        assert_eq!((r.clicks_per_digit.min, r.clicks_per_digit.max), (1.0, 1.0));
        assert_eq!(r.decoded_exactly, 50);
        assert_eq!(r.encoding_rate, 30.0);
    }

    #[test]
    fn suto_follows_rates() {
        let mut cfg = BenchmarkConfig::new(Mode::Roth, 20, 3);
        cfg.decoding_rate = Some(1.03);
        let r = run_benchmark(&cfg).unwrap();
        assert_eq!(r.suto_score, Some(r.encoding_rate / 1.03));
        assert!(r.to_table().contains("SUTO score"));
        assert!(r.to_json().contains("\"suto_score\""));
    }

    #[test]
    fn deterministic_across_runs() {
        let cfg = BenchmarkConfig::new(Mode::Iftt, 30, 99);
        assert_eq!(run_benchmark(&cfg).unwrap(), run_benchmark(&cfg).unwrap());
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(run_benchmark(&BenchmarkConfig::new(Mode::Trad, 0, 1)).is_err());
    }
}
