//! Value types shared by every layer: colors, digits, buttons, patterns
//! and the user-chosen button mapping.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{PinError, Result};

/// Largest digit domain the pattern bitmask can hold.
pub const MAX_DOMAIN: usize = 16;
/// Largest button pad supported.
pub const MAX_BUTTONS: usize = 32;

pub const DEFAULT_DOMAIN: usize = 10;
pub const DEFAULT_BUTTONS: usize = 9;

/// The two meanings a press can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "Y")]
    Yellow,
    #[serde(rename = "G")]
    Gray,
}

impl Color {
    pub const ALL: [Color; 2] = [Color::Yellow, Color::Gray];

    pub fn other(self) -> Color {
        match self {
            Color::Yellow => Color::Gray,
            Color::Gray => Color::Yellow,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Color::Yellow => 'Y',
            Color::Gray => 'G',
        }
    }

    pub fn from_char(c: char) -> Result<Color> {
        match c {
            'Y' => Ok(Color::Yellow),
            'G' => Ok(Color::Gray),
            other => Err(PinError::Parse(format!(
                "invalid color character {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Digit(pub u8);

impl Digit {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Digit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ButtonId(pub u8);

impl ButtonId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ButtonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The set of digits a user may be entering, `{0, .., size - 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DigitDomain {
    size: u8,
}

impl DigitDomain {
    pub fn new(size: usize) -> Result<Self> {
        if !(2..=MAX_DOMAIN).contains(&size) {
            return Err(PinError::domain(format!(
                "digit domain size {size} outside 2..={MAX_DOMAIN}"
            )));
        }
        Ok(DigitDomain { size: size as u8 })
    }

    pub fn decimal() -> Self {
        DigitDomain {
            size: DEFAULT_DOMAIN as u8,
        }
    }

    pub fn size(self) -> usize {
        self.size as usize
    }

    pub fn digits(self) -> impl Iterator<Item = Digit> {
        (0..self.size).map(Digit)
    }

    pub fn contains(self, d: Digit) -> bool {
        d.0 < self.size
    }

    pub fn digit(self, value: usize) -> Result<Digit> {
        if value < self.size() {
            Ok(Digit(value as u8))
        } else {
            Err(PinError::domain(format!(
                "digit {value} outside domain of size {}",
                self.size
            )))
        }
    }

    pub(crate) fn full_mask(self) -> u16 {
        ((1u32 << self.size) - 1) as u16
    }
}

impl Default for DigitDomain {
    fn default() -> Self {
        Self::decimal()
    }
}

/// A subset of a digit domain, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DigitSet(u16);

impl DigitSet {
    pub fn empty() -> Self {
        DigitSet(0)
    }

    pub fn full(domain: DigitDomain) -> Self {
        DigitSet(domain.full_mask())
    }

    pub fn from_bits(bits: u16) -> Self {
        DigitSet(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn insert(&mut self, d: Digit) {
        self.0 |= 1 << d.0;
    }

    pub fn remove(&mut self, d: Digit) {
        self.0 &= !(1 << d.0);
    }

    pub fn contains(self, d: Digit) -> bool {
        d.0 < 16 && self.0 & (1 << d.0) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersection(self, other: DigitSet) -> DigitSet {
        DigitSet(self.0 & other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = Digit> {
        (0..16u8).filter(move |i| self.0 & (1 << i) != 0).map(Digit)
    }

    /// The only member, if the set is a singleton.
    pub fn single(self) -> Option<Digit> {
        (self.len() == 1).then(|| Digit(self.0.trailing_zeros() as u8))
    }
}

impl FromIterator<Digit> for DigitSet {
    fn from_iter<I: IntoIterator<Item = Digit>>(iter: I) -> Self {
        let mut s = DigitSet::empty();
        for d in iter {
            s.insert(d);
        }
        s
    }
}

impl fmt::Display for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, d) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "}}")
    }
}

/// The yellow/gray coloring of every digit at one iteration.
///
/// Balanced means the two color classes differ in size by at most one
/// (exactly half each for an even domain), and both colors are present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ColorPattern {
    yellow: u16,
    len: u8,
}

impl ColorPattern {
    /// Builds a pattern from the set of yellow digits, checking balance.
    pub fn from_yellow(domain: DigitDomain, yellow: DigitSet) -> Result<Self> {
        let p = ColorPattern {
            yellow: yellow.bits(),
            len: domain.size() as u8,
        };
        if yellow.bits() & !domain.full_mask() != 0 {
            return Err(PinError::domain(
                "yellow set contains digits outside the domain",
            ));
        }
        p.check_balanced()?;
        Ok(p)
    }

    pub fn from_colors(colors: &[Color]) -> Result<Self> {
        let domain = DigitDomain::new(colors.len())?;
        let yellow = colors
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == Color::Yellow)
            .map(|(i, _)| Digit(i as u8))
            .collect();
        Self::from_yellow(domain, yellow)
    }

    pub(crate) fn from_bits_unchecked(yellow: u16, len: usize) -> Self {
        ColorPattern {
            yellow,
            len: len as u8,
        }
    }

    pub fn domain(self) -> DigitDomain {
        DigitDomain { size: self.len }
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn color(self, d: Digit) -> Color {
        if self.yellow & (1 << d.0) != 0 {
            Color::Yellow
        } else {
            Color::Gray
        }
    }

    pub fn yellow_set(self) -> DigitSet {
        DigitSet(self.yellow)
    }

    pub fn gray_set(self) -> DigitSet {
        DigitSet(!self.yellow & self.domain().full_mask())
    }

    pub fn digits_of(self, c: Color) -> DigitSet {
        match c {
            Color::Yellow => self.yellow_set(),
            Color::Gray => self.gray_set(),
        }
    }

    pub fn colors(self) -> impl Iterator<Item = Color> {
        (0..self.len).map(move |i| self.color(Digit(i)))
    }

    pub fn is_balanced(self) -> bool {
        self.check_balanced().is_ok()
    }

    fn check_balanced(self) -> Result<()> {
        let y = self.yellow.count_ones() as usize;
        let g = self.len() - y;
        if y == 0 || g == 0 {
            return Err(PinError::domain("pattern must use both colors"));
        }
        if y.abs_diff(g) > 1 {
            return Err(PinError::domain(format!(
                "pattern unbalanced: {y} yellow vs {g} gray"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for ColorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.colors() {
            write!(f, "{}", c.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for ColorPattern {
    type Err = PinError;

    fn from_str(s: &str) -> Result<Self> {
        let colors = s
            .chars()
            .map(Color::from_char)
            .collect::<Result<Vec<_>>>()?;
        ColorPattern::from_colors(&colors).map_err(|e| match e {
            PinError::Domain(msg) => PinError::Parse(format!("pattern {s:?}: {msg}")),
            other => other,
        })
    }
}

impl Serialize for ColorPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ColorPattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One press: which button, under which displayed pattern, at which iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClickEvent {
    pub button: ButtonId,
    pub pattern: ColorPattern,
    pub index: u32,
}

impl ClickEvent {
    pub fn new(button: ButtonId, pattern: ColorPattern, index: u32) -> Self {
        ClickEvent {
            button,
            pattern,
            index,
        }
    }
}

/// The colors the machine has committed to each button so far.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ButtonMapping {
    colors: Vec<Option<Color>>,
}

impl ButtonMapping {
    pub fn unknown(buttons: usize) -> Result<Self> {
        if !(1..=MAX_BUTTONS).contains(&buttons) {
            return Err(PinError::domain(format!(
                "button count {buttons} outside 1..={MAX_BUTTONS}"
            )));
        }
        Ok(ButtonMapping {
            colors: vec![None; buttons],
        })
    }

    /// A mapping with every button committed.
    pub fn total(colors: &[Color]) -> Result<Self> {
        let mut m = Self::unknown(colors.len())?;
        for (slot, c) in m.colors.iter_mut().zip(colors) {
            *slot = Some(*c);
        }
        Ok(m)
    }

    pub fn button_count(&self) -> usize {
        self.colors.len()
    }

    pub fn buttons(&self) -> impl Iterator<Item = ButtonId> {
        (0..self.colors.len() as u8).map(ButtonId)
    }

    pub fn check_button(&self, b: ButtonId) -> Result<()> {
        if b.index() < self.colors.len() {
            Ok(())
        } else {
            Err(PinError::domain(format!(
                "button {b} outside pad of {} buttons",
                self.colors.len()
            )))
        }
    }

    pub fn get(&self, b: ButtonId) -> Option<Color> {
        self.colors.get(b.index()).copied().flatten()
    }

    /// Commits `color` to `b`. Re-committing the same color is a no-op;
    /// changing a committed color is refused.
    pub fn commit(&mut self, b: ButtonId, color: Color) -> Result<()> {
        self.check_button(b)?;
        match self.colors[b.index()] {
            Some(existing) if existing != color => Err(PinError::domain(format!(
                "button {b} already committed to {existing}"
            ))),
            _ => {
                self.colors[b.index()] = Some(color);
                Ok(())
            }
        }
    }

    pub fn committed(&self) -> impl Iterator<Item = (ButtonId, Color)> + '_ {
        self.colors
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|c| (ButtonId(i as u8), c)))
    }

    pub fn committed_count(&self) -> usize {
        self.colors.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_fully_committed(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    pub fn as_slice(&self) -> &[Option<Color>] {
        &self.colors
    }
}
