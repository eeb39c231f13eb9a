//! Test-only oracles, independent of the inference engine.
#![allow(dead_code)]

use ifttpin_core::{ButtonId, Color, ColorPattern, Digit};

/// Digits `d` for which some total button-to-color map `m` explains every
/// press, i.e. `pattern[d] == m(button)` for each event, and agrees with
/// the committed colors in `known`.
pub fn brute_force_consistent(
    domain: usize,
    buttons: usize,
    known: &[Option<Color>],
    events: &[(ButtonId, ColorPattern)],
) -> Vec<Digit> {
    let mut out = Vec::new();
    for d in 0..domain as u8 {
        let explained = (0u32..1 << buttons).any(|mask| {
            let color_of = |b: usize| {
                if mask & (1 << b) != 0 {
                    Color::Yellow
                } else {
                    Color::Gray
                }
            };
            let agrees_with_known = known
                .iter()
                .enumerate()
                .all(|(b, k)| k.is_none_or(|c| c == color_of(b)));
            agrees_with_known
                && events
                    .iter()
                    .all(|(b, p)| p.color(Digit(d)) == color_of(b.index()))
        });
        if explained {
            out.push(Digit(d));
        }
    }
    out
}

/// Per-(digit, button) observed color sets, counted independently.
pub fn observed_colors(
    domain: usize,
    buttons: usize,
    events: &[(ButtonId, ColorPattern)],
) -> Vec<Vec<Vec<Color>>> {
    let mut table = vec![vec![Vec::new(); buttons]; domain];
    for (b, p) in events {
        for (d, row) in table.iter_mut().enumerate() {
            let c = p.color(Digit(d as u8));
            let cell: &mut Vec<Color> = &mut row[b.index()];
            if !cell.contains(&c) {
                cell.push(c);
            }
        }
    }
    table
}
