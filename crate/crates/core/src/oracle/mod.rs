//! Independent numerical checks that never touch the closed forms: grid
//! best responses, best-response dynamics, finite differences and a readout
//! noise sampler.

mod grid;
mod noise;

pub use grid::{best_response, best_response_staged, BestResponse, GridSpec, Score};
pub use noise::{sample_quantity, NoiseModel, QuantitySampler, SampleStats};

use rand::Rng;
use twofloat::TwoFloat;

use crate::classical::classical_bayes_nash;
use crate::error::{Error, Result};
use crate::market::{CostType, MarketParams};
use crate::quantum::{average_profits, quantum_bayes_nash, Entanglement, QuantumProfile};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointConfig {
    /// Stop once no component moves by more than this in one sweep.
    pub tol: f64,
    pub max_iters: usize,
    /// Weight on the new best response; 1 is plain best-response dynamics.
    pub damping: f64,
}

impl Default for FixedPointConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iters: 10_000,
            damping: 1.0,
        }
    }
}

impl FixedPointConfig {
    pub fn new(tol: f64, max_iters: usize, damping: f64) -> Result<Self> {
        Self {
            tol,
            max_iters,
            damping,
        }
        .validate()
    }

    pub fn validate(self) -> Result<Self> {
        if !(self.tol > 0.0) {
            return Err(Error::NonPositiveTolerance(self.tol));
        }
        if self.max_iters < 1 {
            return Err(Error::InvalidConfig("max_iters >= 1"));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidConfig("0 < damping <= 1"));
        }
        Ok(self)
    }
}

/// Profile found by best-response dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEquilibrium {
    pub profile: QuantumProfile,
    /// Largest final grid spacing among the last sweep's best responses.
    pub resolution: f64,
    pub iterations: usize,
}

/// Default search grid for a market: strategies in `[0, a]`.
pub fn market_grid(params: &MarketParams) -> Result<GridSpec> {
    GridSpec::over(0.0, params.a)
}

/// Payoffs of the entangled game evaluated in double-double arithmetic, so
/// that grid comparisons near the optimum are not swamped by rounding.
struct Payoffs {
    params: MarketParams,
    cosh: f64,
    sinh: f64,
}

impl Payoffs {
    fn new(params: &MarketParams, gamma: &Entanglement) -> Self {
        let g = gamma.gamma();
        Self {
            params: *params,
            cosh: g.cosh(),
            sinh: g.sinh(),
        }
    }

    fn quantities(&self, x1: f64, x2: f64) -> (TwoFloat, TwoFloat) {
        (
            TwoFloat::new_mul(x1, self.cosh) + TwoFloat::new_mul(x2, self.sinh),
            TwoFloat::new_mul(x2, self.cosh) + TwoFloat::new_mul(x1, self.sinh),
        )
    }

    fn profit(&self, q_self: TwoFloat, q_other: TwoFloat, cost: f64) -> TwoFloat {
        let zero = TwoFloat::from(0.0);
        let mut price = TwoFloat::from(self.params.a) - q_self - q_other;
        if price < zero {
            price = zero;
        }
        q_self * (price - cost)
    }

    /// Firm 1's expectation over firm 2's type-contingent strategies.
    fn firm1(&self, x1: f64, x2_high: f64, x2_low: f64) -> TwoFloat {
        let mut total = TwoFloat::from(0.0);
        for (cost_type, x2) in [(CostType::High, x2_high), (CostType::Low, x2_low)] {
            let weight = self.params.probability(cost_type);
            if weight > 0.0 {
                let (q1, q2) = self.quantities(x1, x2);
                total += self.profit(q1, q2, self.params.c1) * weight;
            }
        }
        total
    }

    fn firm2(&self, x1: f64, x2: f64, cost_type: CostType) -> TwoFloat {
        let (q1, q2) = self.quantities(x1, x2);
        self.profit(q2, q1, self.params.cost(cost_type))
    }

    /// Plain `f64` profit, for ranking the coarse grid rounds.
    fn profit_estimate(&self, x_self: f64, x_other: f64, cost: f64) -> f64 {
        let q_self = x_self * self.cosh + x_other * self.sinh;
        let q_other = x_other * self.cosh + x_self * self.sinh;
        q_self * ((self.params.a - q_self - q_other).max(0.0) - cost)
    }

    fn firm1_estimate(&self, x1: f64, x2_high: f64, x2_low: f64) -> f64 {
        let p = &self.params;
        p.theta * self.profit_estimate(x1, x2_high, p.c1)
            + (1.0 - p.theta) * self.profit_estimate(x1, x2_low, p.c1)
    }

    fn firm2_estimate(&self, x1: f64, x2: f64, cost_type: CostType) -> f64 {
        self.profit_estimate(x2, x1, self.params.cost(cost_type))
    }

    fn reply_firm1(
        &self,
        grid: &GridSpec,
        x2_high: f64,
        x2_low: f64,
    ) -> Result<BestResponse<TwoFloat>> {
        best_response_staged(
            |x| self.firm1_estimate(x, x2_high, x2_low),
            |x| self.firm1(x, x2_high, x2_low),
            grid,
        )
    }

    fn reply_firm2(
        &self,
        grid: &GridSpec,
        x1: f64,
        cost_type: CostType,
    ) -> Result<BestResponse<TwoFloat>> {
        best_response_staged(
            |x| self.firm2_estimate(x1, x, cost_type),
            |x| self.firm2(x1, x, cost_type),
            grid,
        )
    }
}

/// Best reply of every player-type to the other components of `profile`.
///
/// Returns the reply profile and the coarsest final grid spacing used.
pub fn best_response_profile(
    params: &MarketParams,
    gamma: &Entanglement,
    grid: &GridSpec,
    profile: &QuantumProfile,
) -> Result<(QuantumProfile, f64)> {
    let pay = Payoffs::new(params, gamma);
    let r1 = pay.reply_firm1(grid, profile.x2_high, profile.x2_low)?;
    let rh = pay.reply_firm2(grid, profile.x1, CostType::High)?;
    let rl = pay.reply_firm2(grid, profile.x1, CostType::Low)?;
    let resolution = r1.resolution.max(rh.resolution).max(rl.resolution);
    Ok((
        QuantumProfile::new(r1.argmax, rh.argmax, rl.argmax)?,
        resolution,
    ))
}

/// Bayes-Nash equilibrium by iterated best responses, starting from zero.
///
/// One sweep updates firm 1 against both types of firm 2, then each type of
/// firm 2 against the new firm-1 strategy. Works whether or not `k1 = k2`.
pub fn fixed_point_bayes_nash(
    params: &MarketParams,
    gamma: &Entanglement,
    grid: &GridSpec,
    cfg: &FixedPointConfig,
) -> Result<OracleEquilibrium> {
    let cfg = cfg.validate()?;
    let pay = Payoffs::new(params, gamma);
    let step = |old: f64, new: f64| old + cfg.damping * (new - old);
    let mut p = QuantumProfile::new(0.0, 0.0, 0.0)?;

    for iteration in 1..=cfg.max_iters {
        let prev = p;
        let r1 = pay.reply_firm1(grid, p.x2_high, p.x2_low)?;
        p.x1 = step(p.x1, r1.argmax);
        let rh = pay.reply_firm2(grid, p.x1, CostType::High)?;
        p.x2_high = step(p.x2_high, rh.argmax);
        let rl = pay.reply_firm2(grid, p.x1, CostType::Low)?;
        p.x2_low = step(p.x2_low, rl.argmax);

        if p.max_abs_diff(&prev) < cfg.tol {
            return Ok(OracleEquilibrium {
                profile: p,
                resolution: r1.resolution.max(rh.resolution).max(rl.resolution),
                iterations: iteration,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iters,
        last: p,
    })
}

/// Central difference of firm 1's average profit in `gamma`.
pub fn finite_diff_gamma(s: f64, k: f64, gamma: &Entanglement, h: f64) -> Result<f64> {
    let g = gamma.gamma();
    if !(h > 0.0) || !h.is_finite() || g - h < 0.0 {
        return Err(Error::StepOutOfDomain { gamma: g, h });
    }
    let at = |x: f64| -> Result<f64> { Ok(average_profits(&Entanglement::new(x)?, s, k).u1_bar) };
    Ok((at(g + h)? - at(g - h)?) / (2.0 * h))
}

/// Draws a random market whose classical equilibrium is interior.
///
/// With `equal_margins`, `c1` is set to firm 2's expected cost so that
/// `k1 = k2`, and the quantum equilibrium is also interior for every
/// `gamma >= 0`.
pub fn sample_market<R: Rng + ?Sized>(rng: &mut R, equal_margins: bool) -> MarketParams {
    loop {
        let a = rng.random_range(20.0..200.0);
        let c_low = rng.random_range(0.0..0.4 * a);
        let c_high = c_low + rng.random_range(0.0..0.5 * (a - c_low));
        let theta = rng.random_range(0.05..0.95);
        let c1 = if equal_margins {
            theta * c_high + (1.0 - theta) * c_low
        } else {
            rng.random_range(0.0..0.5 * a)
        };
        let Ok(params) = MarketParams::new(a, c1, c_high, c_low, theta) else {
            continue;
        };
        if classical_bayes_nash(&params).is_err() {
            continue;
        }
        if equal_margins {
            let d = params.derived();
            // x2H stays non-negative for all gamma iff 2 (1 - theta) delta <= k.
            let margin_ok = 2.0 * (1.0 - theta) * d.delta < 0.9 * d.k1;
            let interior = [0.0, 0.5, 1.0, 2.0, 20.0].iter().all(|&g| {
                quantum_bayes_nash(&params, &Entanglement::new(g).expect("valid gamma")).is_ok()
            });
            if d.k1_ne_k2 || !margin_ok || !interior {
                continue;
            }
        }
        return params;
    }
}
