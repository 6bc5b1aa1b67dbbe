//! Asymmetry thresholds and the critical entanglement levels.
//!
//! With `g(gamma) = 4 exp(gamma) / (3 cosh(gamma) + sinh(gamma))^3 - s` the
//! profit derivative has the sign of `g`. Since `g(0) = 4/27 - s` and
//! `g -> -s` as `gamma` grows, profits peak at the root `gamma_m` whenever
//! `0 < s < 4/27`. Comparing the large-`gamma` limit `(1 - s) / 8` against the
//! classical `1/9` gives the break-even asymmetry `s = 1/9`.

use std::fmt;

use crate::error::{Error, Result};
use crate::quantum::{average_profits, marginal_gain, Entanglement};

/// Above this asymmetry, profits fall with any entanglement.
pub const S_M: f64 = 4.0 / 27.0;
/// Below this asymmetry, entanglement beats the classical game for every `gamma > 0`.
pub const S_C: f64 = 1.0 / 9.0;

/// Bisection tolerance in `gamma` used when callers have no preference.
pub const DEFAULT_GAMMA_TOL: f64 = 1e-10;

const MAX_BRACKET: f64 = 4096.0;
const SIGN_SAMPLES: usize = 1000;

pub fn thresholds() -> (f64, f64) {
    (S_M, S_C)
}

/// How the quantum game compares with the classical one at a given asymmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    SuperiorEverywhere,
    PeakedThenCrossing,
    InferiorEverywhere,
}

impl Regime {
    pub fn classify(s: f64) -> Regime {
        if s <= S_C {
            Regime::SuperiorEverywhere
        } else if s < S_M {
            Regime::PeakedThenCrossing
        } else {
            Regime::InferiorEverywhere
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Regime::SuperiorEverywhere => "superior-everywhere",
            Regime::PeakedThenCrossing => "peaked-then-crossing",
            Regime::InferiorEverywhere => "inferior-everywhere",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdReport {
    pub s_m: f64,
    pub s_c: f64,
    pub gamma_m: Option<f64>,
    pub gamma_c: Option<f64>,
}

impl ThresholdReport {
    /// Thresholds alone, or together with the critical `gamma`s at `s`.
    pub fn at(s: Option<f64>, tol: f64) -> Result<Self> {
        let (gamma_m, gamma_c) = match s {
            None => (None, None),
            Some(s) => {
                // Beyond s_m profits decrease from gamma = 0 on; there is no interior peak.
                let gamma_m = if s > S_M { None } else { find_gamma_m(s, tol)? };
                (gamma_m, find_gamma_c(s, tol)?)
            }
        };
        Ok(Self {
            s_m: S_M,
            s_c: S_C,
            gamma_m,
            gamma_c,
        })
    }
}

/// Entanglement level at which both average profits peak.
///
/// `None` for `s = 0` (profits rise for every `gamma`), `Some(0)` at `s = 4/27`.
pub fn find_gamma_m(s: f64, tol: f64) -> Result<Option<f64>> {
    check_tol(tol)?;
    if !(0.0..=S_M).contains(&s) {
        return Err(Error::OutOfRange {
            value: s,
            lo: 0.0,
            hi: S_M,
        });
    }
    if s == 0.0 {
        return Ok(None);
    }
    let slope = |gamma: f64| marginal_gain((-2.0 * gamma).exp()) - s;
    if slope(0.0) <= 0.0 {
        return Ok(Some(0.0));
    }
    let hi = expand_bracket(0.0, &slope)?;
    ensure_single_crossing(0.0, hi, &slope)?;
    Ok(Some(bisect(0.0, hi, tol, &slope)))
}

/// Entanglement level beyond which the quantum game falls below the
/// classical one. Exists only for `1/9 < s < 4/27`.
pub fn find_gamma_c(s: f64, tol: f64) -> Result<Option<f64>> {
    check_tol(tol)?;
    if !(s >= 0.0) {
        return Err(Error::OutOfRange {
            value: s,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    if s <= S_C || s >= S_M {
        return Ok(None);
    }
    let gamma_m = find_gamma_m(s, tol)?.unwrap_or(0.0);
    // Normalized by k^2; the classical level is exactly 1/9.
    let excess = |gamma: f64| average_profits(&unchecked(gamma), s, 1.0).u1_bar - S_C;
    let hi = expand_bracket(gamma_m, &excess)?;
    ensure_single_crossing(gamma_m, hi, &excess)?;
    Ok(Some(bisect(gamma_m, hi, tol, &excess)))
}

fn unchecked(gamma: f64) -> Entanglement {
    Entanglement::new(gamma).expect("bracket points are finite and non-negative")
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveTolerance(tol))
    }
}

/// Smallest `hi = 2^n > lo` with `f(hi) < 0`, starting from `hi = 1`.
fn expand_bracket(lo: f64, f: &impl Fn(f64) -> f64) -> Result<f64> {
    let mut hi = 1.0;
    while hi <= lo || f(hi) >= 0.0 {
        hi *= 2.0;
        if hi > MAX_BRACKET {
            return Err(Error::NoBracket(MAX_BRACKET));
        }
    }
    Ok(hi)
}

/// `f` is positive at `lo` and negative at `hi`; reject brackets where it
/// changes sign more than once on a uniform sample.
fn ensure_single_crossing(lo: f64, hi: f64, f: &impl Fn(f64) -> f64) -> Result<()> {
    let mut count = 0;
    let mut prev = f(lo) > 0.0;
    for i in 1..=SIGN_SAMPLES {
        let x = lo + (hi - lo) * i as f64 / SIGN_SAMPLES as f64;
        let positive = f(x) > 0.0;
        if positive != prev {
            count += 1;
        }
        prev = positive;
    }
    if count == 1 {
        Ok(())
    } else {
        Err(Error::MultipleRoots { lo, hi, count })
    }
}

/// Bisection for `f(lo) > 0 > f(hi)` until the bracket is narrower than `tol`.
fn bisect(mut lo: f64, mut hi: f64, tol: f64, f: &impl Fn(f64) -> f64) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
