//! Synthetic users: a private button-to-color mapping plus a rule for
//! picking which matching button to press.

use std::fmt;
use std::str::FromStr;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{ButtonId, Color, MAX_BUTTONS};
use crate::error::{PinError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ButtonChoice {
    /// One fixed button per color for the whole session.
    Lazy,
    /// Any button of the right color, uniformly.
    UniformRandom,
    /// Uniform over a fixed k-button subset that holds both colors.
    Subset(usize),
}

impl fmt::Display for ButtonChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ButtonChoice::Lazy => f.write_str("lazy"),
            ButtonChoice::UniformRandom => f.write_str("uniform"),
            ButtonChoice::Subset(k) => write!(f, "subset-{k}"),
        }
    }
}

impl FromStr for ButtonChoice {
    type Err = PinError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lazy" => Ok(ButtonChoice::Lazy),
            "uniform" | "uniform-random" | "random" => Ok(ButtonChoice::UniformRandom),
            _ => s
                .strip_prefix("subset-")
                .and_then(|k| k.parse().ok())
                .map(ButtonChoice::Subset)
                .ok_or_else(|| PinError::Parse(format!("unknown button policy {s:?}"))),
        }
    }
}

/// Number of valid mappings of `buttons` buttons: every two-coloring except
/// all-yellow and all-gray.
pub fn mapping_count(buttons: usize) -> u64 {
    (1u64 << buttons).saturating_sub(2)
}

/// Every mapping with both colors present, each exactly once. Bit `i` of the
/// enumeration index set means button `i` is yellow.
pub fn enumerate_mappings(buttons: usize) -> (u64, impl Iterator<Item = Vec<Color>>) {
    let full = 1u64 << buttons;
    let iter = (1..full.saturating_sub(1)).map(move |mask| {
        (0..buttons)
            .map(|i| {
                if mask & (1 << i) != 0 {
                    Color::Yellow
                } else {
                    Color::Gray
                }
            })
            .collect()
    });
    (mapping_count(buttons), iter)
}

/// A uniformly drawn valid mapping.
pub fn random_mapping(buttons: usize, rng: &mut impl rand::Rng) -> Vec<Color> {
    let full = 1u64 << buttons;
    let mask = rng.random_range(1..full - 1);
    (0..buttons)
        .map(|i| {
            if mask & (1 << i) != 0 {
                Color::Yellow
            } else {
                Color::Gray
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UserPolicy {
    mapping: Vec<Color>,
    choice: ButtonChoice,
    seed: u64,
}

impl UserPolicy {
    pub fn new(mapping: Vec<Color>, choice: ButtonChoice, seed: u64) -> Result<Self> {
        if mapping.is_empty() || mapping.len() > MAX_BUTTONS {
            return Err(PinError::domain("mapping size out of range"));
        }
        for c in Color::ALL {
            if !mapping.contains(&c) {
                return Err(PinError::domain(format!(
                    "mapping needs at least one {c} button"
                )));
            }
        }
        if let ButtonChoice::Subset(k) = choice {
            if k < 2 || k > mapping.len() {
                return Err(PinError::domain(format!(
                    "subset size {k} outside 2..={}",
                    mapping.len()
                )));
            }
        }
        Ok(UserPolicy {
            mapping,
            choice,
            seed,
        })
    }

    pub fn mapping(&self) -> &[Color] {
        &self.mapping
    }

    pub fn choice(&self) -> ButtonChoice {
        self.choice
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Instantiates the policy: fixes the lazy buttons or the subset.
    pub fn user(&self) -> SimulatedUser {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let by_color = |c: Color| -> Vec<ButtonId> {
            self.mapping
                .iter()
                .enumerate()
                .filter(|(_, m)| **m == c)
                .map(|(i, _)| ButtonId(i as u8))
                .collect()
        };
        let (yellow, gray) = (by_color(Color::Yellow), by_color(Color::Gray));
        let (yellow, gray) = match self.choice {
            ButtonChoice::UniformRandom => (yellow, gray),
            ButtonChoice::Lazy => (
                vec![*yellow.choose(&mut rng).expect("validated")],
                vec![*gray.choose(&mut rng).expect("validated")],
            ),
            ButtonChoice::Subset(k) => {
                let y0 = *yellow.choose(&mut rng).expect("validated");
                let g0 = *gray.choose(&mut rng).expect("validated");
                let mut rest: Vec<ButtonId> = (0..self.mapping.len() as u8)
                    .map(ButtonId)
                    .filter(|b| *b != y0 && *b != g0)
                    .collect();
                rest.shuffle(&mut rng);
                let mut ys = vec![y0];
                let mut gs = vec![g0];
                for b in rest.into_iter().take(k - 2) {
                    match self.mapping[b.index()] {
                        Color::Yellow => ys.push(b),
                        Color::Gray => gs.push(b),
                    }
                }
                (ys, gs)
            }
        };
        SimulatedUser { yellow, gray, rng }
    }
}

/// A running synthetic user.
#[derive(Debug, Clone)]
pub struct SimulatedUser {
    yellow: Vec<ButtonId>,
    gray: Vec<ButtonId>,
    rng: ChaCha8Rng,
}

impl SimulatedUser {
    pub fn buttons_for(&self, c: Color) -> &[ButtonId] {
        match c {
            Color::Yellow => &self.yellow,
            Color::Gray => &self.gray,
        }
    }

    /// A button meaning `c` under the user's private mapping.
    pub fn press_for(&mut self, c: Color) -> ButtonId {
        let options = match c {
            Color::Yellow => &self.yellow,
            Color::Gray => &self.gray,
        };
        *options
            .choose(&mut self.rng)
            .expect("both colors always have a button")
    }
}
