//! Economic primitives of the duopoly: parameters, inverse demand and profits.

use crate::error::{Error, Result};

/// Absolute tolerance used for floating-point equality checks.
pub const ABS_TOL: f64 = 1e-12;

/// The economic environment.
///
/// Firm 1 knows its own unit cost `c1`; firm 2's unit cost is `c_high` with
/// probability `theta` and `c_low` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    pub a: f64,
    pub c1: f64,
    pub c_high: f64,
    pub c_low: f64,
    pub theta: f64,
}

impl MarketParams {
    /// Builds and validates a parameter set.
    pub fn new(a: f64, c1: f64, c_high: f64, c_low: f64, theta: f64) -> Result<Self> {
        Self {
            a,
            c1,
            c_high,
            c_low,
            theta,
        }
        .validate()
    }

    /// Returns `self` unchanged if every constraint holds, otherwise the first
    /// violated one.
    pub fn validate(self) -> Result<Self> {
        let Self {
            a,
            c1,
            c_high,
            c_low,
            theta,
        } = self;
        if ![a, c1, c_high, c_low, theta].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParams("finite values"));
        }
        if a <= 0.0 {
            return Err(Error::InvalidParams("a > 0"));
        }
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidParams("0 <= theta <= 1"));
        }
        if c1 >= a {
            return Err(Error::InvalidParams("c1 < a"));
        }
        if c_low > c_high {
            return Err(Error::InvalidParams("cL <= cH"));
        }
        if c_high >= a {
            return Err(Error::InvalidParams("cH < a"));
        }
        Ok(self)
    }

    pub fn cost(&self, cost_type: CostType) -> f64 {
        match cost_type {
            CostType::High => self.c_high,
            CostType::Low => self.c_low,
        }
    }

    /// Probability that firm 2 draws `cost_type`.
    pub fn probability(&self, cost_type: CostType) -> f64 {
        match cost_type {
            CostType::High => self.theta,
            CostType::Low => 1.0 - self.theta,
        }
    }

    pub fn derived(&self) -> DerivedConstants {
        derive_constants(self)
    }
}

/// Firm 2's private cost realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostType {
    High,
    Low,
}

impl CostType {
    pub const ALL: [CostType; 2] = [CostType::High, CostType::Low];
}

/// Margins, cost spread and informational asymmetry of a market.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// `a - c1`.
    pub k1: f64,
    /// `a - E[c2]`.
    pub k2: f64,
    /// `cH - cL`.
    pub delta: f64,
    /// `theta (1 - theta) delta^2 / k1^2`.
    pub s: f64,
    /// Set when the margins differ; `s` is then measured against `k1`.
    pub k1_ne_k2: bool,
}

impl DerivedConstants {
    /// The common margin `k = k1 = k2`, or an error when the margins differ.
    pub fn common_margin(&self) -> Result<f64> {
        if self.k1_ne_k2 {
            Err(Error::AsymmetricMargins {
                k1: self.k1,
                k2: self.k2,
            })
        } else {
            Ok(self.k1)
        }
    }
}

pub fn derive_constants(params: &MarketParams) -> DerivedConstants {
    let MarketParams {
        a,
        c1,
        c_high,
        c_low,
        theta,
    } = *params;
    let k1 = a - c1;
    let k2 = a - (theta * c_high + (1.0 - theta) * c_low);
    let delta = c_high - c_low;
    let s = theta * (1.0 - theta) * delta * delta / (k1 * k1);
    // k2 is assembled from rounded products, so the comparison scales with a.
    let k1_ne_k2 = (k1 - k2).abs() > ABS_TOL * a.abs().max(1.0);
    DerivedConstants {
        k1,
        k2,
        delta,
        s,
        k1_ne_k2,
    }
}

/// Inverse demand: `a - Q` up to the kink at `Q = a`, zero beyond it.
pub fn price(total_quantity: f64, a: f64) -> Result<f64> {
    if total_quantity < 0.0 {
        return Err(Error::NegativeQuantity(total_quantity));
    }
    Ok(if total_quantity <= a {
        a - total_quantity
    } else {
        0.0
    })
}

/// Profit of a firm producing `q_self` at unit cost `c_self` against `q_other`.
pub fn profit(q_self: f64, q_other: f64, c_self: f64, a: f64) -> Result<f64> {
    if q_self < 0.0 {
        return Err(Error::NegativeQuantity(q_self));
    }
    if q_other < 0.0 {
        return Err(Error::NegativeQuantity(q_other));
    }
    Ok(q_self * (price(q_self + q_other, a)? - c_self))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> MarketParams {
        MarketParams::new(100.0, 10.0, 20.0, 10.0, 0.5).unwrap()
    }

    #[test]
    fn validation() {
        assert!(MarketParams::new(100.0, 10.0, 20.0, 10.0, 0.5).is_ok());
        assert_eq!(
            MarketParams::new(100.0, 110.0, 20.0, 10.0, 0.5),
            Err(Error::InvalidParams("c1 < a"))
        );
        assert_eq!(
            MarketParams::new(100.0, 10.0, 5.0, 10.0, 0.5),
            Err(Error::InvalidParams("cL <= cH"))
        );
        assert_eq!(
            MarketParams::new(100.0, 10.0, 100.0, 10.0, 0.5),
            Err(Error::InvalidParams("cH < a"))
        );
        assert_eq!(
            MarketParams::new(-1.0, -10.0, -5.0, -6.0, 0.5),
            Err(Error::InvalidParams("a > 0"))
        );
        assert_eq!(
            MarketParams::new(100.0, 10.0, 20.0, 10.0, 1.5),
            Err(Error::InvalidParams("0 <= theta <= 1"))
        );
        assert_eq!(
            MarketParams::new(f64::NAN, 10.0, 20.0, 10.0, 0.5),
            Err(Error::InvalidParams("finite values"))
        );
    }

    #[test]
    fn price_branches() {
        assert_eq!(price(0.0, 100.0).unwrap(), 100.0);
        assert_eq!(price(100.0, 100.0).unwrap(), 0.0);
        assert_eq!(price(150.0, 100.0).unwrap(), 0.0);
        assert_eq!(price(-1.0, 100.0), Err(Error::NegativeQuantity(-1.0)));
    }

    #[test]
    fn profit_values() {
        assert_eq!(profit(30.0, 30.0, 10.0, 100.0).unwrap(), 900.0);
        assert_eq!(profit(30.0, 30.0, 10.0, 100.0).unwrap(), 90.0 * 90.0 / 9.0);
        assert_eq!(profit(0.0, 40.0, 10.0, 100.0).unwrap(), 0.0);
        assert_eq!(profit(50.0, 60.0, 10.0, 100.0).unwrap(), -500.0);
        assert!(profit(1.0, -1.0, 10.0, 100.0).is_err());
    }

    #[test]
    fn derived_example() {
        let d = derive_constants(&example());
        assert_eq!(d.k1, 90.0);
        assert_eq!(d.k2, 85.0);
        assert_eq!(d.delta, 10.0);
        assert!((d.s - 0.25 * 100.0 / 8100.0).abs() < ABS_TOL);
        assert!(d.k1_ne_k2);
        assert!(d.common_margin().is_err());
    }

    #[test]
    fn zero_asymmetry() {
        let p = MarketParams::new(100.0, 10.0, 20.0, 10.0, 0.0).unwrap();
        assert_eq!(derive_constants(&p).s, 0.0);
        let p = MarketParams::new(100.0, 10.0, 10.0, 10.0, 0.3).unwrap();
        let d = derive_constants(&p);
        assert_eq!(d.k1, d.k2);
        assert_eq!(d.s, 0.0);
        assert_eq!(d.common_margin().unwrap(), 90.0);
    }
}
