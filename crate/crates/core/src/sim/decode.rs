//! The observer with a full recording of the session.
//!
//! TRAD presses are read off directly. ROTH presses are decoded by
//! intersecting the color set of the pressed (publicly colored) key. IFTT
//! presses are decoded by running the consistency inference over the
//! recorded patterns and carrying recovered button colors into later digits.

use serde::Serialize;

use crate::domain::{ButtonId, ButtonMapping, ClickEvent, Color, Digit, DigitSet};
use crate::error::{PinError, Result};
use crate::inference::DigitHypotheses;
use crate::session::Mode;
use crate::transcript::{Transcript, TranscriptEvent};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decoded {
    /// Remaining candidates per PIN position.
    #[serde(serialize_with = "ser_sets")]
    pub positions: Vec<DigitSet>,
    /// Events observed before each decoded position became a singleton.
    pub clicks_per_position: Vec<u32>,
}

fn ser_sets<S: serde::Serializer>(sets: &[DigitSet], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(sets.len()))?;
    for set in sets {
        seq.serialize_element(&set.iter().map(|d| d.0).collect::<Vec<_>>())?;
    }
    seq.end()
}

impl Decoded {
    pub fn is_complete(&self) -> bool {
        self.positions.iter().all(|p| p.len() == 1)
    }

    /// The PIN, when every position is a singleton.
    pub fn pin(&self) -> Option<String> {
        self.positions
            .iter()
            .map(|p| p.single().map(|d| d.to_string()))
            .collect()
    }
}

pub fn decode_transcript(t: &Transcript) -> Result<Decoded> {
    t.validate()?;
    let domain = t.domain()?;
    let full = DigitSet::full(domain);
    let mut positions = Vec::with_capacity(t.pin_length);
    let mut clicks = Vec::with_capacity(t.pin_length);
    let mut since_last = 0u32;

    let finish = |positions: &mut Vec<DigitSet>, clicks: &mut Vec<u32>, d: Digit, n: &mut u32| {
        positions.push([d].into_iter().collect());
        clicks.push(*n);
        *n = 0;
    };

    match t.mode {
        Mode::Trad => {
            for e in &t.events {
                let TranscriptEvent::Digit { digit } = e else {
                    return Err(PinError::Parse("TRAD transcript with colored event".into()));
                };
                if positions.len() == t.pin_length {
                    break;
                }
                since_last += 1;
                finish(&mut positions, &mut clicks, Digit(*digit), &mut since_last);
            }
        }
        Mode::Roth => {
            let mut candidates = full;
            for e in &t.events {
                let TranscriptEvent::Click { pattern, button } = e else {
                    return Err(PinError::Parse("ROTH transcript with digit event".into()));
                };
                if positions.len() == t.pin_length {
                    break;
                }
                since_last += 1;
                let color = if button % 2 == 0 {
                    Color::Yellow
                } else {
                    Color::Gray
                };
                candidates = candidates.intersection(pattern.digits_of(color));
                if let Some(d) = candidates.single() {
                    finish(&mut positions, &mut clicks, d, &mut since_last);
                    candidates = full;
                } else if candidates.is_empty() {
                    candidates = full;
                }
            }
            if positions.len() < t.pin_length {
                positions.push(candidates);
            }
        }
        Mode::Iftt => {
            let mut known = ButtonMapping::unknown(t.button_count)?;
            let mut h = DigitHypotheses::full(domain, &known)?;
            for (i, e) in t.events.iter().enumerate() {
                let TranscriptEvent::Click { pattern, button } = e else {
                    return Err(PinError::Parse("IFTT transcript with digit event".into()));
                };
                if positions.len() == t.pin_length {
                    break;
                }
                since_last += 1;
                h.record_click(
                    &known,
                    &ClickEvent::new(ButtonId(*button), *pattern, i as u32),
                )?;
                match h.resolve() {
                    Ok(None) => {}
                    Ok(Some(res)) => {
                        for (b, c) in res.implied {
                            known.commit(b, c)?;
                        }
                        finish(&mut positions, &mut clicks, res.digit, &mut since_last);
                        h = DigitHypotheses::full(domain, &known)?;
                    }
                    Err(PinError::InconsistentUser) => {
                        h = DigitHypotheses::full(domain, &known)?;
                    }
                    Err(e) => return Err(e),
                }
            }
            if positions.len() < t.pin_length {
                positions.push(h.consistent_digits());
            }
        }
    }
    while positions.len() < t.pin_length {
        positions.push(full);
    }
    Ok(Decoded {
        positions,
        clicks_per_position: clicks,
    })
}
