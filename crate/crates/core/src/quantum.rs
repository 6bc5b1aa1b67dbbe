//! The entangled quantity game in closed form.
//!
//! Firms pick displacements `x_j >= 0`; a two-mode squeezing of strength
//! `gamma` maps them to the measured quantities
//!
//! ```text
//! q1 = x1 cosh(gamma) + x2 sinh(gamma)
//! q2 = x2 cosh(gamma) + x1 sinh(gamma)
//! ```
//!
//! which then enter the classical profit functions. Everything below works on
//! this induced mapping; no quantum state is simulated.
//!
//! Closed forms are evaluated through `w = exp(-2 gamma)`, which keeps them
//! finite for arbitrarily large `gamma`.

use crate::error::{Error, Result};
use crate::market::{derive_constants, profit, CostType, MarketParams};

/// Squeezing strength of the entangling operation. `gamma = 0` is the
/// classical game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entanglement {
    gamma: f64,
    tanh_gamma: f64,
}

impl Entanglement {
    pub const CLASSICAL: Entanglement = Entanglement {
        gamma: 0.0,
        tanh_gamma: 0.0,
    };

    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidEntanglement(gamma));
        }
        Ok(Self {
            gamma,
            tanh_gamma: gamma.tanh(),
        })
    }

    /// From `t = tanh(gamma)`, `0 <= t < 1`.
    pub fn from_tanh(t: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&t) {
            return Err(Error::OutOfRange {
                value: t,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Self::new(t.atanh())
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn tanh_gamma(&self) -> f64 {
        self.tanh_gamma
    }

    /// `exp(-2 gamma)`.
    fn w(&self) -> f64 {
        (-2.0 * self.gamma).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Firm1,
    Firm2,
}

/// Strategy triple of the quantum Bayes-Nash game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumProfile {
    pub x1: f64,
    pub x2_high: f64,
    pub x2_low: f64,
}

impl QuantumProfile {
    pub fn new(x1: f64, x2_high: f64, x2_low: f64) -> Result<Self> {
        for x in [x1, x2_high, x2_low] {
            if !(x >= 0.0) {
                return Err(Error::NegativeStrategy(x));
            }
        }
        Ok(Self {
            x1,
            x2_high,
            x2_low,
        })
    }

    pub fn x2(&self, cost_type: CostType) -> f64 {
        match cost_type {
            CostType::High => self.x2_high,
            CostType::Low => self.x2_low,
        }
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(&self, other: &QuantumProfile) -> f64 {
        (self.x1 - other.x1)
            .abs()
            .max((self.x2_high - other.x2_high).abs())
            .max((self.x2_low - other.x2_low).abs())
    }
}

/// Iterated-game profits averaged over firm 2's cost draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageProfits {
    pub u1_bar: f64,
    pub u2_bar: f64,
}

/// Measured quantities `(q1, q2)` for strategies `(x1, x2)`.
pub fn strategies_to_quantities(x1: f64, x2: f64, gamma: &Entanglement) -> Result<(f64, f64)> {
    for x in [x1, x2] {
        if !(x >= 0.0) {
            return Err(Error::NegativeStrategy(x));
        }
    }
    if gamma.gamma == 0.0 {
        return Ok((x1, x2));
    }
    let (sh, ch) = (gamma.gamma.sinh(), gamma.gamma.cosh());
    Ok((x1 * ch + x2 * sh, x2 * ch + x1 * sh))
}

/// Profit of `who` when firm 1 plays `x1`, firm 2 plays `x2` and firm 2's
/// cost is `cost_type`.
pub fn quantum_profit(
    x1: f64,
    x2: f64,
    gamma: &Entanglement,
    cost_type: CostType,
    params: &MarketParams,
    who: Player,
) -> Result<f64> {
    let (q1, q2) = strategies_to_quantities(x1, x2, gamma)?;
    match who {
        Player::Firm1 => profit(q1, q2, params.c1, params.a),
        Player::Firm2 => profit(q2, q1, params.cost(cost_type), params.a),
    }
}

/// Closed-form quantum Bayes-Nash equilibrium. Requires `k1 = k2`.
pub fn quantum_bayes_nash(params: &MarketParams, gamma: &Entanglement) -> Result<QuantumProfile> {
    let d = derive_constants(params);
    let k = d.common_margin()?;
    let theta = params.theta;
    let delta = d.delta;
    let w = gamma.w();
    // Common factor exp(-gamma) / (2 (2 + w)) of the three components.
    let scale = (-gamma.gamma).exp() / (2.0 * (2.0 + w));
    let x1 = scale * k * (1.0 + w);
    let x2_high = scale * (w * (k - (1.0 - theta) * delta) + (k - 2.0 * (1.0 - theta) * delta));
    let x2_low = scale * (w * (k + theta * delta) + (k + 2.0 * theta * delta));

    for (name, x) in [("x1", x1), ("x2H", x2_high), ("x2L", x2_low)] {
        if !(x >= 0.0) {
            return Err(Error::NonInteriorEquilibrium(format!("{name} = {x} < 0")));
        }
    }
    let profile = QuantumProfile {
        x1,
        x2_high,
        x2_low,
    };
    for cost_type in CostType::ALL {
        let (q1, q2) = strategies_to_quantities(x1, profile.x2(cost_type), gamma)?;
        if q1 + q2 > params.a {
            return Err(Error::NonInteriorEquilibrium(format!(
                "total quantity {} exceeds a = {} for {cost_type:?} cost",
                q1 + q2,
                params.a
            )));
        }
    }
    Ok(profile)
}

/// Average iterated-game profits as a function of `(gamma, s, k)` only.
pub fn average_profits(gamma: &Entanglement, s: f64, k: f64) -> AverageProfits {
    let w = gamma.w();
    let k2 = k * k;
    let u1_bar = k2 / 8.0 * (4.0 * (1.0 + w) / ((2.0 + w) * (2.0 + w)) + (w - 1.0) * s);
    AverageProfits {
        u1_bar,
        u2_bar: u1_bar + k2 * s / 4.0,
    }
}

/// [`average_profits`] for a concrete market; rejects `k1 != k2`.
pub fn average_profits_for(params: &MarketParams, gamma: &Entanglement) -> Result<AverageProfits> {
    let d = derive_constants(params);
    Ok(average_profits(gamma, d.s, d.common_margin()?))
}

/// Average profits of an arbitrary profile, evaluated type by type through
/// [`quantum_profit`].
pub fn iterated_profits(
    params: &MarketParams,
    profile: &QuantumProfile,
    gamma: &Entanglement,
) -> Result<AverageProfits> {
    let mut out = AverageProfits {
        u1_bar: 0.0,
        u2_bar: 0.0,
    };
    for cost_type in CostType::ALL {
        let weight = params.probability(cost_type);
        let x2 = profile.x2(cost_type);
        out.u1_bar +=
            weight * quantum_profit(profile.x1, x2, gamma, cost_type, params, Player::Firm1)?;
        out.u2_bar +=
            weight * quantum_profit(profile.x1, x2, gamma, cost_type, params, Player::Firm2)?;
    }
    Ok(out)
}

/// `d u_bar / d gamma`, shared by both firms.
pub fn profit_gamma_derivative(gamma: &Entanglement, s: f64, k: f64) -> f64 {
    let w = gamma.w();
    w * k * k / 4.0 * (marginal_gain(w) - s)
}

/// `4 exp(gamma) / (3 cosh(gamma) + sinh(gamma))^3` written in `w`. Its sign
/// against `s` decides whether more entanglement helps.
pub(crate) fn marginal_gain(w: f64) -> f64 {
    let d = 2.0 + w;
    4.0 * w / (d * d * d)
}

/// Limit of [`average_profits`] as `gamma` grows without bound.
pub fn asymptotic_profits(s: f64, k: f64) -> AverageProfits {
    let k2 = k * k;
    AverageProfits {
        u1_bar: k2 * (1.0 - s) / 8.0,
        u2_bar: k2 * (1.0 + s) / 8.0,
    }
}
