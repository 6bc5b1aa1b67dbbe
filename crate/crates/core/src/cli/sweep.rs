//! Profit surfaces and curves over `t = tanh(gamma)` and `s`.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quantum::{average_profits, Entanglement};
use crate::thresholds::S_C;

/// Evenly spaced axis `min, min + step, ...` up to and including `max`
/// (within rounding of the step count).
pub fn axis(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidConfig("step > 0"));
    }
    if !(min <= max) || !min.is_finite() || !max.is_finite() {
        return Err(Error::InvalidConfig("min <= max"));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| min + i as f64 * step).collect())
}

/// Axis over `t = tanh(gamma)`, which must stay inside `[0, 1)`.
pub fn t_axis(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    let values = axis(min, max, step)?;
    for &t in [values[0], values[values.len() - 1]].iter() {
        if !(0.0..1.0).contains(&t) {
            return Err(Error::OutOfRange {
                value: t,
                lo: 0.0,
                hi: 1.0,
            });
        }
    }
    Ok(values)
}

/// Axis over the asymmetry `s >= 0`.
pub fn s_axis(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min >= 0.0) {
        return Err(Error::OutOfRange {
            value: min,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    axis(min, max, step)
}

/// Normalized average profits `(u1_bar / k^2, u2_bar / k^2)` at `t`.
pub fn normalized_profits(t: f64, s: f64, k: f64) -> Result<(f64, f64)> {
    let p = average_profits(&Entanglement::from_tanh(t)?, s, k);
    let k2 = k * k;
    Ok((p.u1_bar / k2, p.u2_bar / k2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub t_axis: Vec<f64>,
    pub s_axis: Vec<f64>,
    /// Row-major over `t`, then `s`.
    pub cells: Vec<(f64, f64)>,
}

impl SweepGrid {
    pub fn compute(t_axis: Vec<f64>, s_axis: Vec<f64>, k: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(Error::NonPositiveMargin(k));
        }
        for axis in [&t_axis, &s_axis] {
            if axis.is_empty() || axis.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::InvalidConfig(
                    "axes must be non-empty and strictly increasing",
                ));
            }
        }
        let cells = t_axis
            .par_iter()
            .flat_map_iter(|&t| s_axis.iter().map(move |&s| normalized_profits(t, s, k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            t_axis,
            s_axis,
            cells,
        })
    }

    pub fn cell(&self, ti: usize, si: usize) -> (f64, f64) {
        self.cells[ti * self.s_axis.len() + si]
    }

    pub fn write_csv<W: Write + ?Sized>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "t,s,u1_norm,u2_norm")?;
        for (ti, t) in self.t_axis.iter().enumerate() {
            for (si, s) in self.s_axis.iter().enumerate() {
                let (u1, u2) = self.cell(ti, si);
                writeln!(out, "{t},{s},{u1},{u2}")?;
            }
        }
        Ok(())
    }
}

/// Firm 1's normalized profit along `t` for each listed `s`, against the
/// classical level `1/9`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curves {
    pub t_axis: Vec<f64>,
    pub s_list: Vec<f64>,
    /// One curve per entry of `s_list`.
    pub u1_norm: Vec<Vec<f64>>,
}

impl Curves {
    pub const BASELINE: f64 = S_C;

    pub fn compute(t_axis: Vec<f64>, s_list: Vec<f64>, k: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(Error::NonPositiveMargin(k));
        }
        if s_list.is_empty() {
            return Err(Error::InvalidConfig("s-list must not be empty"));
        }
        if let Some(&s) = s_list.iter().find(|s| !(**s >= 0.0)) {
            return Err(Error::OutOfRange {
                value: s,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        let u1_norm = s_list
            .par_iter()
            .map(|&s| {
                t_axis
                    .iter()
                    .map(|&t| normalized_profits(t, s, k).map(|(u1, _)| u1))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            t_axis,
            s_list,
            u1_norm,
        })
    }

    /// Number of sign changes of `u1_norm - 1/9` over `t > 0` for curve `i`.
    pub fn baseline_crossings(&self, i: usize) -> usize {
        let signs: Vec<bool> = self
            .t_axis
            .iter()
            .zip(&self.u1_norm[i])
            .filter(|(t, _)| **t > 0.0)
            .map(|(_, u)| *u > Self::BASELINE)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    pub fn write_csv<W: Write + ?Sized>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "t,s,u1_norm,baseline")?;
        let baseline = Self::BASELINE;
        for (s, curve) in self.s_list.iter().zip(&self.u1_norm) {
            for (t, u1) in self.t_axis.iter().zip(curve) {
                writeln!(out, "{t},{s},{u1},{baseline}")?;
            }
        }
        Ok(())
    }
}
