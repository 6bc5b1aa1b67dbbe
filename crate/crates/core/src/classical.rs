//! Closed-form classical equilibria.

use crate::error::{Error, Result};
use crate::market::{derive_constants, profit, CostType, MarketParams};

/// Bayes-Nash quantities: firm 1, and firm 2 for each cost realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalProfile {
    pub q1: f64,
    pub q2_high: f64,
    pub q2_low: f64,
}

impl ClassicalProfile {
    pub fn new(q1: f64, q2_high: f64, q2_low: f64) -> Result<Self> {
        for (name, q) in [("q1", q1), ("q2H", q2_high), ("q2L", q2_low)] {
            if !(q >= 0.0) {
                return Err(Error::NonInteriorEquilibrium(format!("{name} = {q} < 0")));
            }
        }
        Ok(Self {
            q1,
            q2_high,
            q2_low,
        })
    }

    pub fn q2(&self, cost_type: CostType) -> f64 {
        match cost_type {
            CostType::High => self.q2_high,
            CostType::Low => self.q2_low,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalReport {
    pub profile: ClassicalProfile,
    /// Firm 1's expected profit over firm 2's cost types.
    pub u1_expected: f64,
    pub u2_high: f64,
    pub u2_low: f64,
    /// `theta * u2_high + (1 - theta) * u2_low`.
    pub u2_average: f64,
}

/// Payoff-relevant point of a symmetric outcome: each firm's quantity and profit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricOutcome {
    pub quantity: f64,
    pub payoff: f64,
}

/// The Bayes-Nash equilibrium under asymmetric information.
///
/// Rejects parameter sets for which the closed form leaves the interior
/// (a negative quantity, or total output past the demand kink).
pub fn classical_bayes_nash(params: &MarketParams) -> Result<ClassicalProfile> {
    let d = derive_constants(params);
    let MarketParams {
        a,
        c1,
        c_high,
        c_low,
        theta,
    } = *params;
    let q1 = (2.0 * d.k1 - d.k2) / 3.0;
    let q2_high = (a + c1 - 2.0 * c_high) / 3.0 + (1.0 - theta) * d.delta / 6.0;
    let q2_low = (a + c1 - 2.0 * c_low) / 3.0 - theta * d.delta / 6.0;
    let profile = ClassicalProfile::new(q1, q2_high, q2_low)?;
    for cost_type in CostType::ALL {
        let total = q1 + profile.q2(cost_type);
        if total > a {
            return Err(Error::NonInteriorEquilibrium(format!(
                "total quantity {total} exceeds a = {a} for {cost_type:?} cost"
            )));
        }
    }
    Ok(profile)
}

pub fn classical_expected_profits(
    profile: &ClassicalProfile,
    params: &MarketParams,
) -> Result<ClassicalReport> {
    let a = params.a;
    let mut u1_expected = 0.0;
    let mut u2 = [0.0; 2];
    for (slot, cost_type) in CostType::ALL.into_iter().enumerate() {
        let q2 = profile.q2(cost_type);
        let weight = params.probability(cost_type);
        // Skip zero-weight branches so degenerate mixtures are exact.
        if weight > 0.0 {
            u1_expected += weight * profit(profile.q1, q2, params.c1, a)?;
        }
        u2[slot] = profit(q2, profile.q1, params.cost(cost_type), a)?;
    }
    Ok(ClassicalReport {
        profile: *profile,
        u1_expected,
        u2_high: u2[0],
        u2_low: u2[1],
        u2_average: params.theta * u2[0] + (1.0 - params.theta) * u2[1],
    })
}

/// Nash equilibrium of the complete-information game with margin `k`.
pub fn symmetric_nash(k: f64) -> Result<SymmetricOutcome> {
    if !(k > 0.0) {
        return Err(Error::NonPositiveMargin(k));
    }
    Ok(SymmetricOutcome {
        quantity: k / 3.0,
        payoff: k * k / 9.0,
    })
}

/// Joint-profit maximizing symmetric outcome with margin `k`.
pub fn pareto_optimum(k: f64) -> Result<SymmetricOutcome> {
    if !(k > 0.0) {
        return Err(Error::NonPositiveMargin(k));
    }
    Ok(SymmetricOutcome {
        quantity: k / 4.0,
        payoff: k * k / 8.0,
    })
}
