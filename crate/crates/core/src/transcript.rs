//! The observer-visible session record and its JSON file format.
//!
//! ```json
//! {"mode":"iftt","seed":7,"button_count":9,"pin_length":4,
//!  "events":[{"pattern":"YGGYYGYGGY","button":3}, ...],
//!  "outcome":{"status":"completed","pin":"1234"}}
//! ```
//!
//! TRAD events carry `{"digit": d}` instead. A transcript replays through a
//! fresh session with the same seed; every recorded pattern must match the
//! one the session shows at that point.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domain::{ButtonId, ColorPattern, DigitDomain};
use crate::error::{PinError, Result};
use crate::session::{AbortReason, Mode, Session, SessionConfig, DEFAULT_CLICK_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TranscriptEvent {
    Click { pattern: ColorPattern, button: u8 },
    Digit { digit: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    Completed {
        pin: String,
    },
    Aborted {
        reason: AbortReason,
    },
    /// Session still running when the transcript was taken.
    Active,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub mode: Mode,
    pub seed: u64,
    pub button_count: usize,
    pub pin_length: usize,
    pub events: Vec<TranscriptEvent>,
    pub outcome: Outcome,
}

impl Transcript {
    pub fn from_json(s: &str) -> Result<Self> {
        let t: Transcript = serde_json::from_str(s).map_err(|e| PinError::Parse(e.to_string()))?;
        t.validate()?;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serialization cannot fail")
    }

    pub fn read(mut r: impl Read) -> Result<Self> {
        let mut s = String::new();
        r.read_to_string(&mut s)
            .map_err(|e| PinError::Parse(e.to_string()))?;
        Self::from_json(&s)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let f = std::fs::File::open(path)
            .map_err(|e| PinError::Parse(format!("{}: {e}", path.display())))?;
        Self::read(f)
    }

    pub fn write(&self, mut w: impl Write) -> std::io::Result<()> {
        w.write_all(self.to_json().as_bytes())?;
        w.write_all(b"\n")
    }

    /// Digit domain implied by the pattern width (decimal when no patterns).
    pub fn domain(&self) -> Result<DigitDomain> {
        match self.events.iter().find_map(|e| match e {
            TranscriptEvent::Click { pattern, .. } => Some(pattern.domain()),
            TranscriptEvent::Digit { .. } => None,
        }) {
            Some(d) => Ok(d),
            None => Ok(DigitDomain::decimal()),
        }
    }

    /// Checks the structural rules that serde cannot express.
    pub fn validate(&self) -> Result<()> {
        if self.pin_length == 0 {
            return Err(PinError::Parse("pin_length must be at least 1".into()));
        }
        let domain = self.domain()?;
        for (i, e) in self.events.iter().enumerate() {
            match (self.mode, e) {
                (Mode::Trad, TranscriptEvent::Digit { digit }) => {
                    if !domain.contains(crate::domain::Digit(*digit)) {
                        return Err(PinError::Parse(format!(
                            "event {i}: digit {digit} out of range"
                        )));
                    }
                }
                (Mode::Roth | Mode::Iftt, TranscriptEvent::Click { pattern, button }) => {
                    if pattern.domain() != domain {
                        return Err(PinError::Parse(format!("event {i}: pattern width changes")));
                    }
                    if usize::from(*button) >= self.button_count {
                        return Err(PinError::Parse(format!(
                            "event {i}: button {button} outside pad of {}",
                            self.button_count
                        )));
                    }
                }
                _ => {
                    return Err(PinError::Parse(format!(
                        "event {i}: wrong event kind for mode {}",
                        self.mode
                    )))
                }
            }
        }
        if let Outcome::Completed { pin } = &self.outcome {
            if pin.chars().count() != self.pin_length || !pin.chars().all(|c| c.is_ascii_digit()) {
                return Err(PinError::Parse(format!("malformed completed pin {pin:?}")));
            }
        }
        Ok(())
    }

    pub fn session_config(&self, click_cap: u32) -> Result<SessionConfig> {
        Ok(
            SessionConfig::new(self.mode, self.pin_length, self.button_count, self.seed)
                .with_click_cap(click_cap)
                .with_domain(self.domain()?),
        )
    }

    /// Rebuilds the session by pressing every recorded button again.
    pub fn replay(&self) -> Result<Session> {
        self.replay_with_cap(DEFAULT_CLICK_CAP)
    }

    pub fn replay_with_cap(&self, click_cap: u32) -> Result<Session> {
        let mut s = Session::start(self.session_config(click_cap)?)?;
        for (i, e) in self.events.iter().enumerate() {
            let button = match e {
                TranscriptEvent::Digit { digit } => *digit,
                TranscriptEvent::Click { pattern, button } => {
                    if s.current_pattern() != Some(*pattern) {
                        return Err(PinError::Parse(format!(
                            "event {i}: recorded pattern {pattern} does not match replay"
                        )));
                    }
                    *button
                }
            };
            s.press(ButtonId(button))
                .map_err(|err| PinError::Parse(format!("event {i}: {err}")))?;
        }
        if let Outcome::Aborted {
            reason: AbortReason::Cancelled,
        } = self.outcome
        {
            s.cancel()?;
        }
        Ok(s)
    }

    /// A copy holding only the first `n` events.
    pub fn prefix(&self, n: usize) -> Transcript {
        Transcript {
            events: self.events[..n.min(self.events.len())].to_vec(),
            outcome: Outcome::Active,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_field_order_and_shape() {
        let t = Transcript {
            mode: Mode::Iftt,
            seed: 7,
            button_count: 9,
            pin_length: 1,
            events: vec![TranscriptEvent::Click {
                pattern: "YYYYYGGGGG".parse().unwrap(),
                button: 3,
            }],
            outcome: Outcome::Completed { pin: "4".into() },
        };
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(
            s,
            r#"{"mode":"iftt","seed":7,"button_count":9,"pin_length":1,"events":[{"pattern":"YYYYYGGGGG","button":3}],"outcome":{"status":"completed","pin":"4"}}"#
        );
    }

    #[test]
    fn trad_events_and_aborted_outcome() {
        let t = Transcript {
            mode: Mode::Trad,
            seed: 0,
            button_count: 10,
            pin_length: 4,
            events: vec![TranscriptEvent::Digit { digit: 2 }],
            outcome: Outcome::Aborted {
                reason: AbortReason::ClickCapExceeded,
            },
        };
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.contains(r#""events":[{"digit":2}]"#));
        assert!(s.contains(r#""outcome":{"status":"aborted","reason":"click_cap_exceeded"}"#));
        assert_eq!(Transcript::from_json(&s).unwrap(), t);
    }

    #[test]
    fn malformed_transcripts_rejected() {
        for bad in [
            "{",
            r#"{"mode":"x","seed":0,"button_count":9,"pin_length":4,"events":[],"outcome":{"status":"active"}}"#,
            r#"{"mode":"iftt","seed":0,"button_count":9,"pin_length":4,"events":[{"pattern":"YYYYYYGGGG","button":0}],"outcome":{"status":"active"}}"#,
            r#"{"mode":"iftt","seed":0,"button_count":9,"pin_length":4,"events":[{"pattern":"YYYYYGGGGG","button":9}],"outcome":{"status":"active"}}"#,
            r#"{"mode":"iftt","seed":0,"button_count":9,"pin_length":4,"events":[{"digit":1}],"outcome":{"status":"active"}}"#,
            r#"{"mode":"trad","seed":0,"button_count":10,"pin_length":2,"events":[],"outcome":{"status":"completed","pin":"123"}}"#,
        ] {
            assert!(
                matches!(Transcript::from_json(bad), Err(PinError::Parse(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn tampered_pattern_fails_replay() {
        let mut s = Session::start(SessionConfig::new(Mode::Iftt, 4, 9, 5)).unwrap();
        s.press(ButtonId(0)).unwrap();
        let mut t = s.transcript();
        if let TranscriptEvent::Click { pattern, .. } = &mut t.events[0] {
            let flipped: String = pattern
                .to_string()
                .chars()
                .map(|c| if c == 'Y' { 'G' } else { 'Y' })
                .collect();
            *pattern = flipped.parse().unwrap();
        }
        assert!(matches!(t.replay(), Err(PinError::Parse(_))));
    }
}
