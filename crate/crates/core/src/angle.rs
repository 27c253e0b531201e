//! Reduction of large phases `rate * t - offset` to `[-pi, pi)`.
//!
//! The product `rate * t` is formed exactly as a double-double (via FMA) and
//! reduced against a two-term split of `2 pi`, so the remainder stays accurate
//! at `t ~ 10^3` and `rate ~ 40`.

use std::f64::consts::{PI, TAU};

const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

/// A phase written as `2 pi * turns + rem` with `rem` in `[-pi, pi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedAngle {
    pub turns: f64,
    pub rem: f64,
}

impl ReducedAngle {
    #[inline]
    pub fn cos_sin(&self) -> (f64, f64) {
        let (s, c) = self.rem.sin_cos();
        (c, s)
    }

    /// The unreduced value (loses the extra precision).
    pub fn value(&self) -> f64 {
        TAU * self.turns + self.rem
    }
}

/// Reduce `rate * t - offset`.
pub fn reduce(rate: f64, t: f64, offset: f64) -> ReducedAngle {
    let hi = rate * t;
    let lo = rate.mul_add(t, -hi);
    let mut turns = ((hi - offset) / TAU).round();
    let mut rem = (-turns).mul_add(TAU, hi) - turns * TAU_LO + lo - offset;
    while rem >= PI {
        rem -= TAU;
        turns += 1.0;
    }
    while rem < -PI {
        rem += TAU;
        turns -= 1.0;
    }
    ReducedAngle { turns, rem }
}
