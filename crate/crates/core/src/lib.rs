//! Self-calibrating PIN entry.
//!
//! A user answers "what color is your digit?" with buttons whose colors only
//! they know. The engine keeps one interpretation hypothesis per digit and
//! discards every digit under which some button would have been used for
//! both colors; the last digit standing is the one being entered, and its
//! hypothesis reveals the user's button colors for the rest of the PIN.
//!
//! Modules, bottom-up: [`domain`] value types, [`inference`] per-digit
//! hypotheses, [`planner`] pattern choice, [`session`] multi-digit entry,
//! [`transcript`] the replayable event log, [`sim`] synthetic users, the
//! attacker and metrics, [`stats`] rate arithmetic.

pub mod domain;
pub mod error;
pub mod inference;
pub mod planner;
pub mod session;
pub mod sim;
pub mod stats;
pub mod transcript;

pub use domain::{
    ButtonId, ButtonMapping, ClickEvent, Color, ColorPattern, Digit, DigitDomain, DigitSet,
};
pub use error::{PinError, Result};
pub use inference::{DigitHypotheses, Resolution};
pub use planner::{next_pattern, roth_schedule, PlannerConfig, PlannerMode};
pub use session::{AbortReason, Mode, PressOutcome, Session, SessionConfig, Status};
pub use transcript::{Outcome, Transcript, TranscriptEvent};

/// Rates in digits per minute.
pub type Rate = f64;
/// Distribution summary used in reports.
pub type ClickSummary = stats::Summary<f64>;
/// Single-precision summary, for callers aggregating large sample sets.
pub type ClickSummary32 = stats::Summary<f32>;
