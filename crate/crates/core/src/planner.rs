//! Choice of the color pattern shown before each press.
//!
//! Every admissible pattern is scored and the best one is drawn uniformly
//! from the ties using a generator seeded by `(seed, step)`, so the planner
//! is a pure function of its inputs.
//!
//! Scoring works on *acceptance*: a press on button `b` keeps candidate `d`
//! iff the color `d` currently shows equals the color `b` means under `d`
//! (the committed color, or the single color observed so far under `d`).
//! The primary score is the worst case, over relevant buttons, of the larger
//! side of the keep/drop split; the secondary score sums that over buttons;
//! the last tie-breaker is the raw yellow/gray split of the candidates. With
//! every relevant button committed the acceptance split *is* the raw split,
//! so this reduces to plain even halving.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{ButtonMapping, Color, ColorPattern, DigitDomain, DigitSet};
use crate::error::{PinError, Result};
use crate::inference::DigitHypotheses;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlannerMode {
    Roth,
    Iftt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PlannerConfig {
    pub mode: PlannerMode,
    pub seed: u64,
    pub balance: bool,
}

impl PlannerConfig {
    pub fn new(mode: PlannerMode, seed: u64) -> Self {
        PlannerConfig {
            mode,
            seed,
            balance: true,
        }
    }
}

/// Which candidates a press on one button would keep, split by the color
/// the button means under each candidate.
#[derive(Debug, Clone, Copy)]
struct ButtonConstraint {
    means_yellow: u16,
    means_gray: u16,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Score {
    worst: usize,
    total: usize,
    raw: usize,
}

fn score(yellow: u16, candidates: u16, constraints: &[ButtonConstraint]) -> Score {
    let n = candidates.count_ones() as usize;
    let gray = !yellow;
    let (mut worst, mut total) = (0, 0);
    for c in constraints {
        let kept = ((yellow & c.means_yellow) | (gray & c.means_gray)).count_ones() as usize;
        let side = kept.max(n - kept);
        worst = worst.max(side);
        total += side;
    }
    let y = (yellow & candidates).count_ones() as usize;
    Score {
        worst,
        total,
        raw: y.max(n - y),
    }
}

fn admissible(domain: DigitDomain, balance: bool) -> impl Iterator<Item = u16> {
    let n = domain.size() as u32;
    let full = domain.full_mask();
    (1..full).filter(move |m| {
        let y = m.count_ones();
        !balance || y.abs_diff(n - y) <= 1
    })
}

fn step_rng(seed: u64, step: u64) -> ChaCha8Rng {
    // splitmix64 finaliser over the pair
    let mut z = seed ^ step.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

fn choose(
    domain: DigitDomain,
    candidates: DigitSet,
    constraints: &[ButtonConstraint],
    balance: bool,
    seed: u64,
    step: u64,
) -> Result<ColorPattern> {
    if candidates.len() < 2 {
        return Err(PinError::domain(format!(
            "a pattern needs at least two candidates, got {}",
            candidates.len()
        )));
    }
    let cand = candidates.bits();
    let mut best: Option<Score> = None;
    let mut ties = Vec::new();
    for m in admissible(domain, balance) {
        let s = score(m, cand, constraints);
        match best {
            Some(b) if s > b => continue,
            Some(b) if s == b => ties.push(m),
            _ => {
                best = Some(s);
                ties.clear();
                ties.push(m);
            }
        }
    }
    let mut rng = step_rng(seed, step);
    let pick = ties[rng.random_range(0..ties.len())];
    Ok(ColorPattern::from_bits_unchecked(pick, domain.size()))
}

/// Pattern for the next press given the current hypotheses and the committed
/// button colors. `step` is the session-wide click index.
pub fn next_pattern(
    cfg: &PlannerConfig,
    hyps: &DigitHypotheses,
    known: &ButtonMapping,
    step: u64,
) -> Result<ColorPattern> {
    let candidates = hyps.consistent_digits();
    let constraints = match cfg.mode {
        PlannerMode::Roth => Vec::new(),
        PlannerMode::Iftt => {
            let mut out = Vec::new();
            for b in known.buttons() {
                let used = hyps.used_buttons().any(|u| u == b);
                let committed = known.get(b);
                if !used && committed.is_none() {
                    continue;
                }
                let (mut my, mut mg) = (0u16, 0u16);
                for d in candidates.iter() {
                    match committed.or_else(|| hyps.implied_color(d, b)) {
                        Some(Color::Yellow) => my |= 1 << d.0,
                        Some(Color::Gray) => mg |= 1 << d.0,
                        None => {}
                    }
                }
                out.push(ButtonConstraint {
                    means_yellow: my,
                    means_gray: mg,
                });
            }
            out
        }
    };
    choose(
        hyps.domain(),
        candidates,
        &constraints,
        cfg.balance,
        cfg.seed,
        step,
    )
}

/// Even halving of `candidates`, independent of any click history.
pub fn roth_schedule(
    domain: DigitDomain,
    step: u64,
    candidates: DigitSet,
    seed: u64,
) -> Result<ColorPattern> {
    choose(domain, candidates, &[], true, seed, step)
}
