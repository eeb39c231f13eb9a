//! Rate arithmetic and distribution summaries, generic over the float type.

use num_traits::Float;
use serde::Serialize;

use crate::error::{PinError, Result};

/// Ratio of the entering rate to the decoding rate (both in digits/min).
///
/// A score of 1 means decoding a PIN takes as long as entering it; higher
/// means an observer needs longer to decode than the user needs to enter.
pub fn suto_score<T: Float>(entering_rate: T, decoding_rate: T) -> Result<T> {
    if decoding_rate.is_nan() || decoding_rate <= T::zero() {
        return Err(PinError::domain(
            "decoding rate must be positive; a zero rate only lower-bounds the score",
        ));
    }
    if entering_rate < T::zero() || !entering_rate.is_finite() {
        return Err(PinError::domain(
            "entering rate must be finite and non-negative",
        ));
    }
    Ok(entering_rate / decoding_rate)
}

/// Digits per minute when each digit costs `clicks_per_digit` presses of
/// `seconds_per_click` seconds.
pub fn digits_per_minute<T: Float>(clicks_per_digit: T, seconds_per_click: T) -> Result<T> {
    let secs = clicks_per_digit * seconds_per_click;
    if secs.is_nan() || secs <= T::zero() {
        return Err(PinError::domain("time per digit must be positive"));
    }
    Ok(T::from(60).expect("60 is representable") / secs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary<T> {
    pub mean: T,
    /// Sample standard deviation (n - 1); zero for a single sample.
    pub sd: T,
    pub min: T,
    pub max: T,
    pub count: usize,
}

impl<T: Float> Summary<T> {
    pub fn from_samples<I>(samples: I) -> Option<Self>
    where
        I: IntoIterator<Item = T>,
    {
        let xs: Vec<T> = samples.into_iter().collect();
        let n = xs.len();
        if n == 0 {
            return None;
        }
        let nf = T::from(n).expect("sample count fits the float type");
        let mean = xs.iter().fold(T::zero(), |a, &x| a + x) / nf;
        let sd = if n > 1 {
            let ss = xs
                .iter()
                .fold(T::zero(), |a, &x| a + (x - mean) * (x - mean));
            (ss / (nf - T::one())).sqrt()
        } else {
            T::zero()
        };
        let min = xs.iter().copied().fold(T::infinity(), T::min);
        let max = xs.iter().copied().fold(T::neg_infinity(), T::max);
        Some(Summary {
            mean,
            sd,
            min,
            max,
            count: n,
        })
    }
}
