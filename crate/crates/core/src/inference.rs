//! Interpretation hypotheses for a single digit.
//!
//! For every candidate digit `d` we keep, per button `b`, the set of colors
//! the user would have meant with `b` if they were entering `d`. A digit whose
//! button was used for both colors is inconsistent and drops out; the digit is
//! identified once exactly one consistent candidate remains.

use serde::Serialize;

use crate::domain::{ButtonId, ButtonMapping, ClickEvent, Color, Digit, DigitDomain, DigitSet};
use crate::error::{PinError, Result};

/// Colors observed for one (digit, button) pair. Cardinality 0, 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ColorSet(u8);

impl ColorSet {
    fn bit(c: Color) -> u8 {
        match c {
            Color::Yellow => 1,
            Color::Gray => 2,
        }
    }

    pub fn insert(&mut self, c: Color) {
        self.0 |= Self::bit(c);
    }

    pub fn contains(self, c: Color) -> bool {
        self.0 & Self::bit(c) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// The color, if exactly one was observed.
    pub fn single(self) -> Option<Color> {
        match self.0 {
            1 => Some(Color::Yellow),
            2 => Some(Color::Gray),
            _ => None,
        }
    }

    pub fn colors(self) -> impl Iterator<Item = Color> {
        Color::ALL.into_iter().filter(move |c| self.contains(*c))
    }
}

/// Outcome of a successful resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub digit: Digit,
    /// Color implied for each button the user pressed while entering `digit`.
    pub implied: Vec<(ButtonId, Color)>,
}

/// Per-digit hypothesis histories for the digit currently being entered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitHypotheses {
    domain: DigitDomain,
    buttons: usize,
    candidates: DigitSet,
    ruled_out: DigitSet,
    // row-major: digit * buttons + button
    observed: Vec<ColorSet>,
    clicks: u32,
}

impl DigitHypotheses {
    pub fn new(domain: DigitDomain, candidates: DigitSet, known: &ButtonMapping) -> Result<Self> {
        if candidates.is_empty() {
            return Err(PinError::domain("candidate set is empty"));
        }
        if candidates.iter().any(|d| !domain.contains(d)) {
            return Err(PinError::domain("candidate outside the digit domain"));
        }
        let buttons = known.button_count();
        Ok(DigitHypotheses {
            domain,
            buttons,
            candidates,
            ruled_out: DigitSet::empty(),
            observed: vec![ColorSet::default(); domain.size() * buttons],
            clicks: 0,
        })
    }

    /// Fresh hypotheses over the whole domain.
    pub fn full(domain: DigitDomain, known: &ButtonMapping) -> Result<Self> {
        Self::new(domain, DigitSet::full(domain), known)
    }

    pub fn domain(&self) -> DigitDomain {
        self.domain
    }

    pub fn button_count(&self) -> usize {
        self.buttons
    }

    pub fn clicks(&self) -> u32 {
        self.clicks
    }

    /// The candidate set this inference started from.
    pub fn initial_candidates(&self) -> DigitSet {
        self.candidates
    }

    /// Candidates not removed by a press on a committed button.
    pub fn surviving(&self) -> DigitSet {
        DigitSet::from_bits(self.candidates.bits() & !self.ruled_out.bits())
    }

    pub fn observed(&self, d: Digit, b: ButtonId) -> ColorSet {
        self.observed[d.index() * self.buttons + b.index()]
    }

    /// The color `b` would carry if the user were entering `d`.
    pub fn implied_color(&self, d: Digit, b: ButtonId) -> Option<Color> {
        self.observed(d, b).single()
    }

    /// Buttons pressed at least once during this digit.
    pub fn used_buttons(&self) -> impl Iterator<Item = ButtonId> + '_ {
        (0..self.buttons as u8).map(ButtonId).filter(move |b| {
            self.candidates
                .iter()
                .any(|d| !self.observed(d, *b).is_empty())
        })
    }

    pub fn record_click(&mut self, known: &ButtonMapping, e: &ClickEvent) -> Result<()> {
        if known.button_count() != self.buttons {
            return Err(PinError::domain("mapping size differs from the hypotheses"));
        }
        known.check_button(e.button)?;
        if e.pattern.len() != self.domain.size() {
            return Err(PinError::domain(format!(
                "pattern covers {} digits, domain has {}",
                e.pattern.len(),
                self.domain.size()
            )));
        }
        if let Some(committed) = known.get(e.button) {
            let mismatched = e.pattern.digits_of(committed.other());
            self.ruled_out = DigitSet::from_bits(
                self.ruled_out.bits() | (mismatched.bits() & self.candidates.bits()),
            );
        }
        for d in self.surviving().iter() {
            let idx = d.index() * self.buttons + e.button.index();
            self.observed[idx].insert(e.pattern.color(d));
        }
        self.clicks += 1;
        Ok(())
    }

    pub fn is_consistent(&self, d: Digit) -> bool {
        self.surviving().contains(d) && {
            let row = &self.observed[d.index() * self.buttons..(d.index() + 1) * self.buttons];
            row.iter().all(|s| s.len() <= 1)
        }
    }

    pub fn consistent_digits(&self) -> DigitSet {
        self.surviving()
            .iter()
            .filter(|d| self.is_consistent(*d))
            .collect()
    }

    /// `Ok(Some(_))` once exactly one digit is consistent, `Ok(None)` while
    /// several remain, and `InconsistentUser` when none do.
    pub fn resolve(&self) -> Result<Option<Resolution>> {
        let consistent = self.consistent_digits();
        if consistent.is_empty() {
            return Err(PinError::InconsistentUser);
        }
        let Some(digit) = consistent.single() else {
            return Ok(None);
        };
        let implied = (0..self.buttons as u8)
            .map(ButtonId)
            .filter_map(|b| self.implied_color(digit, b).map(|c| (b, c)))
            .collect();
        Ok(Some(Resolution { digit, implied }))
    }

    /// Per-candidate view of the observations, for debugging displays.
    pub fn dashboard(&self) -> Vec<DashboardRow> {
        self.candidates
            .iter()
            .map(|d| DashboardRow {
                digit: d.0,
                consistent: self.is_consistent(d),
                buttons: (0..self.buttons as u8)
                    .map(|b| self.observed(d, ButtonId(b)).colors().collect())
                    .collect(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DashboardRow {
    pub digit: u8,
    pub consistent: bool,
    /// Observed colors per button index.
    pub buttons: Vec<Vec<Color>>,
}

/// Folds a click sequence into fresh hypotheses.
pub fn replay<'a>(
    domain: DigitDomain,
    candidates: DigitSet,
    known: &ButtonMapping,
    events: impl IntoIterator<Item = &'a ClickEvent>,
) -> Result<DigitHypotheses> {
    let mut h = DigitHypotheses::new(domain, candidates, known)?;
    for e in events {
        h.record_click(known, e)?;
    }
    Ok(h)
}
