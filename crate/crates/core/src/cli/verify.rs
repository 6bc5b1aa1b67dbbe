//! End-to-end invariant suite behind `qcournot verify`.

use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::classical::{classical_bayes_nash, pareto_optimum, symmetric_nash};
use crate::error::Result;
use crate::market::MarketParams;
use crate::oracle::{
    finite_diff_gamma, fixed_point_bayes_nash, market_grid, sample_market, sample_quantity,
    FixedPointConfig, NoiseModel,
};
use crate::quantum::{
    average_profits, average_profits_for, iterated_profits, profit_gamma_derivative,
    quantum_bayes_nash, strategies_to_quantities, Entanglement,
};
use crate::thresholds::{find_gamma_c, find_gamma_m, DEFAULT_GAMMA_TOL, S_M};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub depth: Depth,
    /// Replaces every check's own tolerance when set.
    pub tol_override: Option<f64>,
}

/// Outcome of one check: the worst error seen against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_error.is_finite() && self.max_error <= self.tolerance
    }
}

/// Stopping rule for the oracle. Best-response dynamics contract slowly at
/// large gamma, so the change per sweep must be far below the grid spacing.
pub const ORACLE_TOL: f64 = 1e-12;

fn gamma(g: f64) -> Entanglement {
    Entanglement::new(g).expect("suite uses valid gamma")
}

fn scaled(n_quick: usize, n_full: usize, depth: Depth) -> usize {
    match depth {
        Depth::Quick => n_quick,
        Depth::Full => n_full,
    }
}

/// Runs the suite. Errors from the library abort the run; failed comparisons
/// are reported through [`Check::passed`].
pub fn run_checks(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let depth = cfg.depth;
    let mut checks = Vec::new();
    let mut push = |name, max_error: f64, tolerance| {
        checks.push(Check {
            name,
            max_error,
            tolerance: cfg.tol_override.unwrap_or(tolerance),
        })
    };

    // Complete-information reference points at k = 90.
    let nash = symmetric_nash(90.0)?;
    let pareto = pareto_optimum(90.0)?;
    let sym = classical_bayes_nash(&MarketParams::new(100.0, 10.0, 10.0, 10.0, 0.5)?)?;
    let err = [sym.q1, sym.q2_high, sym.q2_low, nash.quantity]
        .iter()
        .map(|q| (q - 30.0).abs())
        .fold((nash.payoff - 900.0).abs(), f64::max)
        .max((pareto.payoff - 1012.5).abs());
    push("symmetric_nash_and_pareto", err, 1e-10);

    let limit = average_profits(&gamma(20.0), 0.0, 1.0).u1_bar;
    push("pareto_recovered_at_gamma_20", (limit - 0.125).abs(), 1e-8);

    let markets: Vec<MarketParams> = (0..scaled(5, 20, depth))
        .map(|_| sample_market(&mut rng, true))
        .collect();

    let mut err: f64 = 0.0;
    for params in &markets {
        let c = classical_bayes_nash(params)?;
        let q = quantum_bayes_nash(params, &Entanglement::CLASSICAL)?;
        let (q1, q2h) = strategies_to_quantities(q.x1, q.x2_high, &Entanglement::CLASSICAL)?;
        let (_, q2l) = strategies_to_quantities(q.x1, q.x2_low, &Entanglement::CLASSICAL)?;
        err = err
            .max((q1 - c.q1).abs())
            .max((q2h - c.q2_high).abs())
            .max((q2l - c.q2_low).abs());
    }
    push("gamma_zero_reduction", err, 1e-10);

    let mut err: f64 = 0.0;
    for params in &markets {
        let k2 = params.derived().k1.powi(2);
        for g in [0.0, 0.5, 1.0, 2.0] {
            let e = gamma(g);
            let profile = quantum_bayes_nash(params, &e)?;
            let composed = iterated_profits(params, &profile, &e)?;
            let closed = average_profits_for(params, &e)?;
            err = err
                .max((composed.u1_bar - closed.u1_bar).abs() / k2)
                .max((composed.u2_bar - closed.u2_bar).abs() / k2);
        }
    }
    push("average_profits_composed_vs_closed", err, 1e-9);

    let n = scaled(50, 200, depth);
    let mut err: f64 = 0.0;
    for i in 0..n {
        let e = gamma(20.0 * i as f64 / (n - 1) as f64);
        for j in 0..n {
            let s = 2.0 * j as f64 / (n - 1) as f64;
            let p = average_profits(&e, s, 1.0);
            err = err.max((p.u2_bar - p.u1_bar - s / 4.0).abs());
        }
    }
    push("constant_gap", err, 1e-9);

    let n = scaled(50, 500, depth);
    let mut err: f64 = 0.0;
    for s in [0.0, 0.05, 1.0 / 9.0, S_M, 0.3] {
        for i in 0..n {
            let e = gamma(0.01 + (5.0 - 0.01) * i as f64 / (n - 1) as f64);
            let fd = finite_diff_gamma(s, 1.0, &e, 1e-5)?;
            err = err.max((fd - profit_gamma_derivative(&e, s, 1.0)).abs());
        }
    }
    push("derivative_vs_finite_difference", err, 1e-5);

    let mut err: f64 = 0.0;
    for s in [0.0, 0.5, 1.0, 2.0] {
        let p = average_profits(&gamma(20.0), s, 1.0);
        err = err
            .max((p.u1_bar - (1.0 - s) / 8.0).abs())
            .max((p.u2_bar - (1.0 + s) / 8.0).abs());
    }
    push("asymptotic_limits", err, 1e-7);

    let at_threshold = profit_gamma_derivative(&Entanglement::CLASSICAL, S_M, 1.0).abs();
    push("s_m_stationary_at_zero", at_threshold, 1e-12);
    // Largest derivative above s_m; any positive value is a violation.
    let worst = (1..=50)
        .map(|i| profit_gamma_derivative(&gamma(10.0 * i as f64 / 50.0), S_M + 0.01, 1.0))
        .fold(f64::MIN, f64::max);
    push("decreasing_above_s_m", worst.max(0.0), 0.0);

    let s = 0.13;
    let gc = find_gamma_c(s, DEFAULT_GAMMA_TOL)?;
    let gm = find_gamma_m(s, DEFAULT_GAMMA_TOL)?;
    let err = match (gm, gc) {
        (Some(gm), Some(gc)) if gm < gc => {
            (average_profits(&gamma(gc), s, 1.0).u1_bar - 1.0 / 9.0).abs()
        }
        _ => f64::INFINITY,
    };
    push("gamma_c_crossing", err, 1e-8);

    // Oracle errors are measured in units of the final grid spacing.
    let fp = FixedPointConfig {
        tol: ORACLE_TOL,
        ..FixedPointConfig::default()
    };
    let gammas: &[f64] = match depth {
        Depth::Quick => &[0.0, 1.0],
        Depth::Full => &[0.0, 0.5, 1.0, 2.0],
    };
    let cases: Vec<(&MarketParams, f64)> = markets
        .iter()
        .take(scaled(2, 10, depth))
        .flat_map(|params| gammas.iter().map(move |&g| (params, g)))
        .collect();
    let err = cases
        .par_iter()
        .map(|&(params, g)| -> Result<f64> {
            let e = gamma(g);
            let oracle = fixed_point_bayes_nash(params, &e, &market_grid(params)?, &fp)?;
            let closed = quantum_bayes_nash(params, &e)?;
            Ok(oracle.profile.max_abs_diff(&closed) / oracle.resolution)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    push("oracle_vs_quantum_closed_form", err, 2.0);

    let mut err: f64 = 0.0;
    for _ in 0..scaled(2, 5, depth) {
        let params = sample_market(&mut rng, false);
        let oracle = fixed_point_bayes_nash(
            &params,
            &Entanglement::CLASSICAL,
            &market_grid(&params)?,
            &fp,
        )?;
        let c = classical_bayes_nash(&params)?;
        let p = oracle.profile;
        let diff = (p.x1 - c.q1)
            .abs()
            .max((p.x2_high - c.q2_high).abs())
            .max((p.x2_low - c.q2_low).abs());
        err = err.max(diff / oracle.resolution);
    }
    push("oracle_vs_classical_closed_form", err, 2.0);

    let n = scaled(10_000, 100_000, depth);
    let mut err: f64 = 0.0;
    for (i, r) in [0.0, 1.0, 2.0].into_iter().enumerate() {
        let noise = NoiseModel::new(r, cfg.seed.wrapping_add(i as u64))?;
        let stats = sample_quantity(10.0, &noise, n)?;
        let sigma2 = noise.variance();
        err = err.max((stats.variance - sigma2).abs() / stats.variance_standard_error(sigma2));
    }
    push("noise_variance_standard_errors", err, 3.0);

    Ok(checks)
}

pub fn write_report<W: Write + ?Sized>(checks: &[Check], out: &mut W) -> io::Result<()> {
    writeln!(out, "check,status,max_error,tolerance")?;
    for c in checks {
        let status = if c.passed() { "pass" } else { "FAIL" };
        writeln!(out, "{},{status},{},{}", c.name, c.max_error, c.tolerance)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let cfg = VerifyConfig {
            seed: 7,
            depth: Depth::Quick,
            tol_override: None,
        };
        let checks = run_checks(&cfg).unwrap();
        for c in &checks {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn tiny_tolerance_fails() {
        let cfg = VerifyConfig {
            seed: 7,
            depth: Depth::Quick,
            tol_override: Some(1e-30),
        };
        let checks = run_checks(&cfg).unwrap();
        assert!(checks.iter().any(|c| !c.passed()));
    }
}
