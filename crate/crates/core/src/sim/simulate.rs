use crate::domain::{ButtonId, Color, Digit, DigitDomain, DEFAULT_BUTTONS};
use crate::error::{PinError, Result};
use crate::session::{Mode, Session, SessionConfig};
use crate::sim::policy::{ButtonChoice, UserPolicy};
use crate::transcript::Transcript;

/// Parses a PIN such as `"1234"` into digits of `domain`.
pub fn parse_pin(s: &str, domain: DigitDomain) -> Result<Vec<Digit>> {
    if s.is_empty() {
        return Err(PinError::Parse("empty PIN".into()));
    }
    s.chars()
        .map(|c| {
            c.to_digit(10)
                .ok_or_else(|| PinError::Parse(format!("invalid PIN character {c:?}")))
                .and_then(|v| domain.digit(v as usize))
        })
        .collect()
}

/// Default pad size for a mode: TRAD keypad, the two ROTH keys, or the
/// nine-button IFTT pad.
pub fn default_buttons(mode: Mode) -> usize {
    match mode {
        Mode::Trad => 10,
        Mode::Roth => 2,
        Mode::Iftt => DEFAULT_BUTTONS,
    }
}

/// Drives a session to completion (or abort) with a synthetic user.
///
/// In ROTH mode the pad's fixed mapping replaces the policy's private one.
pub fn simulate(policy: &UserPolicy, cfg: SessionConfig, pin: &[Digit]) -> Result<Session> {
    if pin.len() != cfg.pin_length {
        return Err(PinError::domain(format!(
            "PIN has {} digits, session expects {}",
            pin.len(),
            cfg.pin_length
        )));
    }
    if let Some(d) = pin.iter().find(|d| !cfg.domain.contains(**d)) {
        return Err(PinError::domain(format!("digit {d} outside the domain")));
    }
    let mut session = Session::start(cfg)?;
    let mut user = match cfg.mode {
        Mode::Trad => None,
        Mode::Roth => {
            let pad: Vec<Color> = session
                .mapping()
                .expect("ROTH has a mapping")
                .as_slice()
                .iter()
                .map(|c| c.expect("ROTH pad is fully committed"))
                .collect();
            let choice = match policy.choice() {
                ButtonChoice::Subset(k) if k > pad.len() => ButtonChoice::UniformRandom,
                c => c,
            };
            Some(UserPolicy::new(pad, choice, policy.seed())?.user())
        }
        Mode::Iftt => {
            if policy.mapping().len() != cfg.button_count {
                return Err(PinError::domain(format!(
                    "user mapping covers {} buttons, pad has {}",
                    policy.mapping().len(),
                    cfg.button_count
                )));
            }
            Some(policy.user())
        }
    };
    while session.is_active() {
        let target = pin[session.resolved_digits().len()];
        let button = match (&mut user, session.current_pattern()) {
            (Some(u), Some(p)) => u.press_for(p.color(target)),
            _ => ButtonId(target.0),
        };
        session.press(button)?;
    }
    Ok(session)
}

/// Simulates one session with the mode's default pad and returns its transcript.
pub fn simulate_session(
    policy: &UserPolicy,
    mode: Mode,
    pin_length: usize,
    pin: &[Digit],
    seed: u64,
) -> Result<Transcript> {
    let cfg = SessionConfig::new(mode, pin_length, default_buttons(mode), seed);
    Ok(simulate(policy, cfg, pin)?.transcript())
}
