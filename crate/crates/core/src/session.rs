//! Multi-digit PIN entry across the three entry modes.
//!
//! A session owns the committed button colors, the hypotheses for the digit
//! in progress and the observer-visible event log. Colors committed while
//! resolving one digit carry over to the next, so later digits fall back to
//! direct set elimination on any button already calibrated.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::domain::{ButtonId, ButtonMapping, ClickEvent, Color, ColorPattern, Digit, DigitDomain};
use crate::error::{PinError, Result};
use crate::inference::{DashboardRow, DigitHypotheses};
use crate::planner::{self, PlannerConfig, PlannerMode};
use crate::transcript::{Outcome, Transcript, TranscriptEvent};

pub const DEFAULT_PIN_LENGTH: usize = 4;
pub const DEFAULT_CLICK_CAP: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Direct keypad, one press per digit.
    Trad,
    /// Two-set elimination with a known button mapping.
    Roth,
    /// Two-set elimination with a mapping inferred from consistency.
    Iftt,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Trad => "trad",
            Mode::Roth => "roth",
            Mode::Iftt => "iftt",
        })
    }
}

impl FromStr for Mode {
    type Err = PinError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "trad" => Ok(Mode::Trad),
            "roth" => Ok(Mode::Roth),
            "iftt" | "iftt-pin" => Ok(Mode::Iftt),
            other => Err(PinError::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SessionConfig {
    pub mode: Mode,
    pub pin_length: usize,
    /// Ignored for TRAD, whose keypad has one key per digit.
    pub button_count: usize,
    pub seed: u64,
    pub click_cap: u32,
    pub domain: DigitDomain,
}

impl SessionConfig {
    pub fn new(mode: Mode, pin_length: usize, button_count: usize, seed: u64) -> Self {
        SessionConfig {
            mode,
            pin_length,
            button_count,
            seed,
            click_cap: DEFAULT_CLICK_CAP,
            domain: DigitDomain::decimal(),
        }
    }

    pub fn with_click_cap(mut self, cap: u32) -> Self {
        self.click_cap = cap;
        self
    }

    pub fn with_domain(mut self, domain: DigitDomain) -> Self {
        self.domain = domain;
        self
    }

    /// Number of physical buttons on the pad for this mode.
    pub fn pad_size(&self) -> usize {
        match self.mode {
            Mode::Trad => self.domain.size(),
            _ => self.button_count,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbortReason {
    ClickCapExceeded,
    Cancelled,
}

impl fmt::Display for AbortReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AbortReason::ClickCapExceeded => "click_cap_exceeded",
            AbortReason::Cancelled => "cancelled",
        })
    }
}

impl FromStr for AbortReason {
    type Err = PinError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "click_cap_exceeded" => Ok(AbortReason::ClickCapExceeded),
            "cancelled" => Ok(AbortReason::Cancelled),
            other => Err(PinError::Parse(format!("unknown abort reason {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Active,
    Completed,
    Aborted(AbortReason),
}

/// A digit whose inference was restarted because no candidate stayed consistent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Incident {
    pub position: usize,
    pub click: u32,
}

/// What a single press did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PressOutcome {
    Pending,
    DigitResolved(Digit),
    DigitRestarted,
    Completed(Vec<Digit>),
    Aborted(AbortReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    cfg: SessionConfig,
    resolved: Vec<Digit>,
    inference: Option<DigitHypotheses>,
    mapping: Option<ButtonMapping>,
    pattern: Option<ColorPattern>,
    click_count: u32,
    digit_clicks: Vec<u32>,
    current_digit_clicks: u32,
    events: Vec<TranscriptEvent>,
    incidents: Vec<Incident>,
    status: Status,
}

impl Session {
    pub fn start(cfg: SessionConfig) -> Result<Self> {
        let mapping = match cfg.mode {
            Mode::Trad => None,
            Mode::Roth => {
                Self::check_pad(&cfg)?;
                // left/even buttons yellow, right/odd buttons gray
                let colors: Vec<Color> = (0..cfg.button_count)
                    .map(|i| {
                        if i % 2 == 0 {
                            Color::Yellow
                        } else {
                            Color::Gray
                        }
                    })
                    .collect();
                Some(ButtonMapping::total(&colors)?)
            }
            Mode::Iftt => {
                Self::check_pad(&cfg)?;
                Some(ButtonMapping::unknown(cfg.button_count)?)
            }
        };
        Self::start_inner(cfg, mapping)
    }

    /// An IFTT session whose pad is already partially or fully calibrated.
    pub fn start_calibrated(cfg: SessionConfig, mapping: ButtonMapping) -> Result<Self> {
        if cfg.mode != Mode::Iftt {
            return Err(PinError::domain(
                "pre-calibration applies to IFTT sessions only",
            ));
        }
        Self::check_pad(&cfg)?;
        if mapping.button_count() != cfg.button_count {
            return Err(PinError::domain("mapping size differs from button count"));
        }
        Self::start_inner(cfg, Some(mapping))
    }

    fn check_pad(cfg: &SessionConfig) -> Result<()> {
        if cfg.button_count < 2 {
            return Err(PinError::domain(format!(
                "{} needs at least two buttons, got {}",
                cfg.mode, cfg.button_count
            )));
        }
        Ok(())
    }

    fn start_inner(mut cfg: SessionConfig, mapping: Option<ButtonMapping>) -> Result<Self> {
        cfg.button_count = cfg.pad_size();
        if cfg.pin_length == 0 {
            return Err(PinError::domain("PIN length must be at least 1"));
        }
        if cfg.click_cap == 0 {
            return Err(PinError::domain("click cap must be at least 1"));
        }
        let inference = match &mapping {
            Some(m) => Some(DigitHypotheses::full(cfg.domain, m)?),
            None => None,
        };
        let mut s = Session {
            cfg,
            resolved: Vec::with_capacity(cfg.pin_length),
            inference,
            mapping,
            pattern: None,
            click_count: 0,
            digit_clicks: Vec::with_capacity(cfg.pin_length),
            current_digit_clicks: 0,
            events: Vec::new(),
            incidents: Vec::new(),
            status: Status::Active,
        };
        s.pattern = s.plan()?;
        Ok(s)
    }

    fn plan(&self) -> Result<Option<ColorPattern>> {
        let (Some(h), Some(m)) = (&self.inference, &self.mapping) else {
            return Ok(None);
        };
        let step = u64::from(self.click_count);
        let p = match self.cfg.mode {
            Mode::Roth => {
                planner::roth_schedule(self.cfg.domain, step, h.consistent_digits(), self.cfg.seed)?
            }
            _ => {
                let pc = PlannerConfig::new(PlannerMode::Iftt, self.cfg.seed);
                planner::next_pattern(&pc, h, m, step)?
            }
        };
        Ok(Some(p))
    }

    pub fn press(&mut self, button: ButtonId) -> Result<PressOutcome> {
        if self.status != Status::Active {
            return Err(PinError::SessionFinished);
        }
        if button.index() >= self.cfg.pad_size() {
            return Err(PinError::domain(format!(
                "button {button} outside pad of {} buttons",
                self.cfg.pad_size()
            )));
        }
        self.click_count += 1;
        self.current_digit_clicks += 1;

        let mut outcome = match self.cfg.mode {
            Mode::Trad => {
                self.events.push(TranscriptEvent::Digit { digit: button.0 });
                self.accept_digit(Digit(button.0))
            }
            _ => self.press_colored(button)?,
        };

        if self.status == Status::Active && self.click_count >= self.cfg.click_cap {
            self.status = Status::Aborted(AbortReason::ClickCapExceeded);
            self.pattern = None;
            outcome = PressOutcome::Aborted(AbortReason::ClickCapExceeded);
        }
        Ok(outcome)
    }

    fn press_colored(&mut self, button: ButtonId) -> Result<PressOutcome> {
        let pattern = self
            .pattern
            .expect("active colored session always has a pattern");
        let event = ClickEvent::new(button, pattern, self.click_count - 1);
        let mapping = self
            .mapping
            .as_ref()
            .expect("colored modes carry a mapping");
        let hyps = self
            .inference
            .as_mut()
            .expect("colored modes carry hypotheses");
        hyps.record_click(mapping, &event)?;
        self.events.push(TranscriptEvent::Click {
            pattern,
            button: button.0,
        });

        let outcome = match hyps.resolve() {
            Ok(None) => PressOutcome::Pending,
            Ok(Some(res)) => {
                let mapping = self
                    .mapping
                    .as_mut()
                    .expect("colored modes carry a mapping");
                for (b, c) in &res.implied {
                    mapping.commit(*b, *c)?;
                }
                self.accept_digit(res.digit)
            }
            Err(PinError::InconsistentUser) => {
                self.incidents.push(Incident {
                    position: self.resolved.len(),
                    click: self.click_count,
                });
                let mapping = self
                    .mapping
                    .as_ref()
                    .expect("colored modes carry a mapping");
                self.inference = Some(DigitHypotheses::full(self.cfg.domain, mapping)?);
                PressOutcome::DigitRestarted
            }
            Err(e) => return Err(e),
        };
        self.pattern = if self.status == Status::Active {
            self.plan()?
        } else {
            None
        };
        Ok(outcome)
    }

    fn accept_digit(&mut self, d: Digit) -> PressOutcome {
        self.resolved.push(d);
        self.digit_clicks.push(self.current_digit_clicks);
        self.current_digit_clicks = 0;
        if self.resolved.len() == self.cfg.pin_length {
            self.status = Status::Completed;
            self.inference = None;
            return PressOutcome::Completed(self.resolved.clone());
        }
        if let Some(m) = &self.mapping {
            self.inference = Some(
                DigitHypotheses::full(self.cfg.domain, m).expect("full domain is never empty"),
            );
        }
        PressOutcome::DigitResolved(d)
    }

    pub fn cancel(&mut self) -> Result<()> {
        if self.status != Status::Active {
            return Err(PinError::SessionFinished);
        }
        self.status = Status::Aborted(AbortReason::Cancelled);
        self.pattern = None;
        Ok(())
    }

    pub fn config(&self) -> &SessionConfig {
        &self.cfg
    }

    pub fn mode(&self) -> Mode {
        self.cfg.mode
    }

    pub fn status(&self) -> &Status {
        &self.status
    }

    pub fn is_active(&self) -> bool {
        self.status == Status::Active
    }

    pub fn resolved_digits(&self) -> &[Digit] {
        &self.resolved
    }

    /// The entered PIN once the session has completed.
    pub fn pin(&self) -> Option<String> {
        (self.status == Status::Completed).then(|| pin_string(&self.resolved))
    }

    pub fn current_pattern(&self) -> Option<ColorPattern> {
        self.pattern
    }

    pub fn mapping(&self) -> Option<&ButtonMapping> {
        self.mapping.as_ref()
    }

    pub fn hypotheses(&self) -> Option<&DigitHypotheses> {
        self.inference.as_ref()
    }

    pub fn dashboard(&self) -> Option<Vec<DashboardRow>> {
        self.inference.as_ref().map(DigitHypotheses::dashboard)
    }

    pub fn click_count(&self) -> u32 {
        self.click_count
    }

    /// Presses spent on each resolved position, restarts included.
    pub fn clicks_per_digit(&self) -> &[u32] {
        &self.digit_clicks
    }

    pub fn incidents(&self) -> &[Incident] {
        &self.incidents
    }

    pub fn events(&self) -> &[TranscriptEvent] {
        &self.events
    }

    pub fn transcript(&self) -> Transcript {
        let outcome = match &self.status {
            Status::Active => Outcome::Active,
            Status::Completed => Outcome::Completed {
                pin: pin_string(&self.resolved),
            },
            Status::Aborted(r) => Outcome::Aborted { reason: *r },
        };
        Transcript {
            mode: self.cfg.mode,
            seed: self.cfg.seed,
            button_count: self.cfg.pad_size(),
            pin_length: self.cfg.pin_length,
            events: self.events.clone(),
            outcome,
        }
    }
}

pub fn pin_string(digits: &[Digit]) -> String {
    digits.iter().map(|d| d.to_string()).collect()
}
