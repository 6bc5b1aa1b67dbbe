use twofloat::TwoFloat;

use crate::error::{Error, Result};

/// Search interval and refinement schedule for [`best_response`].
///
/// Each refine round re-grids `±2` steps around the incumbent with the same
/// number of points, shrinking the spacing by `(coarse_points - 1) / 4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    lo: f64,
    hi: f64,
    coarse_points: usize,
    refine_rounds: usize,
}

impl GridSpec {
    pub const DEFAULT_POINTS: usize = 2001;
    pub const DEFAULT_ROUNDS: usize = 3;

    pub fn new(lo: f64, hi: f64, coarse_points: usize, refine_rounds: usize) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::EmptyInterval { lo, hi });
        }
        if coarse_points < 3 {
            return Err(Error::InvalidConfig("coarse_points >= 3"));
        }
        Ok(Self {
            lo,
            hi,
            coarse_points,
            refine_rounds,
        })
    }

    /// `[lo, hi]` with the default schedule.
    pub fn over(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, Self::DEFAULT_POINTS, Self::DEFAULT_ROUNDS)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn coarse_points(&self) -> usize {
        self.coarse_points
    }

    pub fn refine_rounds(&self) -> usize {
        self.refine_rounds
    }
}

/// Objective values the grid search can rank and difference.
pub trait Score: Copy + PartialOrd {
    /// `self - other`, rounded to `f64`.
    fn minus(self, other: Self) -> f64;
}

impl Score for f64 {
    fn minus(self, other: Self) -> f64 {
        self - other
    }
}

impl Score for TwoFloat {
    fn minus(self, other: Self) -> f64 {
        f64::from(self - other)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestResponse<V> {
    pub argmax: f64,
    pub value: V,
    /// Spacing of the last grid searched.
    pub resolution: f64,
    /// Grid spacing of every round, coarse first.
    pub spacings: Vec<f64>,
}

/// Maximizes `objective` over the grid with successive refinement.
///
/// Ties go to the lowest grid index, and a later round only replaces the
/// incumbent on a strict improvement. The final incumbent is polished by one
/// three-point parabolic step, kept only if it scores strictly higher; for the
/// concave quadratic payoffs of the game this recovers the exact maximizer.
pub fn best_response<V, F>(objective: F, grid: &GridSpec) -> Result<BestResponse<V>>
where
    V: Score,
    F: Fn(f64) -> V,
{
    search(None::<fn(f64) -> f64>, objective, grid)
}

/// [`best_response`] that ranks every round but the last with the cheaper
/// `estimate`. Each round's winner is still scored with `objective`, so
/// incumbents are compared at full precision.
pub fn best_response_staged<V, E, F>(
    estimate: E,
    objective: F,
    grid: &GridSpec,
) -> Result<BestResponse<V>>
where
    V: Score,
    E: Fn(f64) -> f64,
    F: Fn(f64) -> V,
{
    search(Some(estimate), objective, grid)
}

/// Lowest-index argmax of `f` over `n` evenly spaced points of `[lo, hi]`.
fn round_argmax<S: Score>(f: impl Fn(f64) -> S, lo: f64, hi: f64, n: usize) -> (f64, S) {
    let h = (hi - lo) / (n - 1) as f64;
    let mut best = (lo, f(lo));
    for i in 1..n {
        let x = if i == n - 1 { hi } else { lo + i as f64 * h };
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

fn search<V, E, F>(estimate: Option<E>, objective: F, grid: &GridSpec) -> Result<BestResponse<V>>
where
    V: Score,
    E: Fn(f64) -> f64,
    F: Fn(f64) -> V,
{
    if !(grid.lo < grid.hi) {
        return Err(Error::EmptyInterval {
            lo: grid.lo,
            hi: grid.hi,
        });
    }
    let n = grid.coarse_points;
    let (mut lo, mut hi) = (grid.lo, grid.hi);
    let mut best: Option<(f64, V)> = None;
    let mut spacings = Vec::with_capacity(grid.refine_rounds + 1);

    for round in 0..=grid.refine_rounds {
        let h = (hi - lo) / (n - 1) as f64;
        spacings.push(h);
        let (rx, rv) = match &estimate {
            Some(estimate) if round < grid.refine_rounds => {
                let (rx, _) = round_argmax(estimate, lo, hi, n);
                (rx, objective(rx))
            }
            _ => round_argmax(&objective, lo, hi, n),
        };
        if best.is_none_or(|(_, bv)| rv > bv) {
            best = Some((rx, rv));
        }
        if round < grid.refine_rounds {
            let (x, _) = best.expect("set above");
            lo = (x - 2.0 * h).max(grid.lo);
            hi = (x + 2.0 * h).min(grid.hi);
        }
    }

    let h = *spacings.last().expect("at least one round");
    let (mut x, mut v) = best.expect("at least one round");
    if x - h >= grid.lo && x + h <= grid.hi {
        let down = objective(x - h).minus(v);
        let up = objective(x + h).minus(v);
        let curvature = down + up;
        if curvature < 0.0 {
            let candidate = x + h * (down - up) / (2.0 * curvature);
            let cv = objective(candidate);
            if cv > v {
                x = candidate;
                v = cv;
            }
        }
    }

    Ok(BestResponse {
        argmax: x,
        value: v,
        resolution: h,
        spacings,
    })
}
