use proptest::prelude::*;

use qcournot::classical::{classical_bayes_nash, pareto_optimum, symmetric_nash};
use qcournot::market::{derive_constants, price, profit, MarketParams};
use qcournot::quantum::{
    asymptotic_profits, average_profits, average_profits_for, iterated_profits,
    profit_gamma_derivative, quantum_bayes_nash, strategies_to_quantities, Entanglement,
};
use qcournot::thresholds::{find_gamma_c, find_gamma_m, Regime, DEFAULT_GAMMA_TOL, S_C, S_M};

/// Markets with `k1 = k2` whose equilibria stay interior for every gamma.
fn equal_margin_market() -> impl Strategy<Value = MarketParams> {
    (20.0..200.0f64, 0.0..0.3f64, 0.0..1.0f64, 0.05..0.95f64).prop_filter_map(
        "non-interior",
        |(a, low_frac, spread_frac, theta)| {
            let c_low = low_frac * a;
            let c_high = c_low + spread_frac * 0.4 * (a - c_low);
            let c1 = theta * c_high + (1.0 - theta) * c_low;
            let params = MarketParams::new(a, c1, c_high, c_low, theta).ok()?;
            let d = derive_constants(&params);
            (2.0 * (1.0 - theta) * d.delta < 0.9 * d.k1).then_some(params)
        },
    )
}

fn gamma(g: f64) -> Entanglement {
    Entanglement::new(g).unwrap()
}

proptest! {
    #[test]
    fn price_non_increasing_and_non_negative(a in 1.0..500.0f64, q1 in 0.0..1000.0f64, dq in 0.0..100.0f64) {
        let p1 = price(q1, a).unwrap();
        let p2 = price(q1 + dq, a).unwrap();
        prop_assert!(p1 >= 0.0 && p2 >= 0.0);
        prop_assert!(p2 <= p1);
    }

    #[test]
    fn lone_profit_peaks_at_half_margin(a in 10.0..500.0f64, c_frac in 0.0..0.9f64, off in -1.0..1.0f64) {
        let c = c_frac * a;
        let peak = (a - c) / 2.0;
        let q = (peak + off * peak).max(0.0);
        let best = profit(peak, 0.0, c, a).unwrap();
        prop_assert!(profit(q, 0.0, c, a).unwrap() <= best + 1e-9 * a * a);
    }

    #[test]
    fn asymmetry_symmetric_in_theta(a in 50.0..200.0f64, c_low in 0.0..10.0f64, delta in 0.0..20.0f64, theta in 0.0..=1.0f64) {
        let p = MarketParams::new(a, 10.0, c_low + delta, c_low, theta).unwrap();
        let q = MarketParams::new(a, 10.0, c_low + delta, c_low, 1.0 - theta).unwrap();
        let (s, t) = (derive_constants(&p).s, derive_constants(&q).s);
        prop_assert!((s - t).abs() <= 1e-12 * s.max(1e-300));
    }

    #[test]
    fn asymmetry_non_decreasing_in_spread(a in 50.0..200.0f64, d1 in 0.0..20.0f64, extra in 0.0..20.0f64, theta in 0.01..0.99f64) {
        let s = |delta: f64| derive_constants(&MarketParams::new(a, 10.0, 5.0 + delta, 5.0, theta).unwrap()).s;
        prop_assert!(s(d1 + extra) >= s(d1));
    }

    #[test]
    fn classical_type_gap_is_half_spread(params in equal_margin_market()) {
        let c = classical_bayes_nash(&params).unwrap();
        let delta = derive_constants(&params).delta;
        prop_assert!((c.q2_low - c.q2_high - delta / 2.0).abs() <= 1e-10 * params.a);
    }

    #[test]
    fn symmetric_information_collapses(a in 20.0..200.0f64, c_frac in 0.0..0.9f64, theta in 0.0..=1.0f64) {
        let c = c_frac * a;
        let k = a - c;
        let profile = classical_bayes_nash(&MarketParams::new(a, c, c, c, theta).unwrap()).unwrap();
        for q in [profile.q1, profile.q2_high, profile.q2_low] {
            prop_assert!((q - k / 3.0).abs() <= 1e-12 * a);
        }
    }

    #[test]
    fn pareto_dominates_nash(k in 1e-3..1e4f64) {
        prop_assert!(pareto_optimum(k).unwrap().payoff > symmetric_nash(k).unwrap().payoff);
    }

    #[test]
    fn classical_reduction(params in equal_margin_market()) {
        let c = classical_bayes_nash(&params).unwrap();
        let q = quantum_bayes_nash(&params, &Entanglement::CLASSICAL).unwrap();
        let e = Entanglement::CLASSICAL;
        let (q1, q2h) = strategies_to_quantities(q.x1, q.x2_high, &e).unwrap();
        let (_, q2l) = strategies_to_quantities(q.x1, q.x2_low, &e).unwrap();
        prop_assert!((q1 - c.q1).abs() <= 1e-10);
        prop_assert!((q2h - c.q2_high).abs() <= 1e-10);
        prop_assert!((q2l - c.q2_low).abs() <= 1e-10);
    }

    #[test]
    fn composed_profits_match_closed_form(params in equal_margin_market(), g in 0.0..5.0f64) {
        let e = gamma(g);
        let profile = quantum_bayes_nash(&params, &e).unwrap();
        let composed = iterated_profits(&params, &profile, &e).unwrap();
        let closed = average_profits_for(&params, &e).unwrap();
        let k2 = derive_constants(&params).k1.powi(2);
        prop_assert!((composed.u1_bar - closed.u1_bar).abs() <= 1e-9 * k2);
        prop_assert!((composed.u2_bar - closed.u2_bar).abs() <= 1e-9 * k2);
    }

    #[test]
    fn constant_gap(g in 0.0..20.0f64, s in 0.0..2.0f64, k in 0.1..1000.0f64) {
        let p = average_profits(&gamma(g), s, k);
        prop_assert!((p.u2_bar - p.u1_bar - k * k * s / 4.0).abs() <= 1e-9 * k * k);
    }

    #[test]
    fn decreasing_above_s_m(g in 1e-6..30.0f64, excess in 1e-6..2.0f64) {
        prop_assert!(profit_gamma_derivative(&gamma(g), S_M + excess, 1.0) < 0.0);
    }

    #[test]
    fn limit_decays_like_exp_minus_two_gamma(g in 5.0..20.0f64, s in 0.0..2.0f64) {
        let p = average_profits(&gamma(g), s, 1.0);
        let limit = asymptotic_profits(s, 1.0);
        // Rounding floor for values of order 1.
        let bound = 2.0 * (-2.0 * g).exp() + 1e-15;
        prop_assert!((p.u1_bar - limit.u1_bar).abs() <= bound);
        prop_assert!((p.u2_bar - limit.u2_bar).abs() <= bound);
    }

    #[test]
    fn decomposition_monotone(g in 0.0..20.0f64, dg in 1e-3..1.0f64) {
        // u1 / k^2 = A + B s, recovered from s = 0 and s = 1.
        let parts = |g: f64| {
            let a = average_profits(&gamma(g), 0.0, 1.0).u1_bar;
            (a, average_profits(&gamma(g), 1.0, 1.0).u1_bar - a)
        };
        let (a0, b0) = parts(g);
        let (a1, b1) = parts(g + dg);
        // B is recovered by subtraction, so allow a few ulps once it saturates.
        prop_assert!(a1 >= a0 - 1e-15);
        prop_assert!(b1 <= b0 + 1e-15);
    }

    #[test]
    fn gamma_m_maximizes_profit(s in 1e-3..(4.0 / 27.0 - 1e-3)) {
        let gm = find_gamma_m(s, DEFAULT_GAMMA_TOL).unwrap().unwrap();
        let at = |g: f64| average_profits(&gamma(g.max(0.0)), s, 1.0).u1_bar;
        prop_assert!(at(gm) >= at(gm - 1e-3));
        prop_assert!(at(gm) >= at(gm + 1e-3));
        prop_assert!(profit_gamma_derivative(&gamma(gm), s, 1.0).abs() < 1e-8);
    }

    #[test]
    fn gamma_c_crosses_classical_level(s in (1.0 / 9.0 + 1e-3)..(4.0 / 27.0 - 1e-3)) {
        let gc = find_gamma_c(s, DEFAULT_GAMMA_TOL).unwrap().unwrap();
        let gm = find_gamma_m(s, DEFAULT_GAMMA_TOL).unwrap().unwrap();
        prop_assert!(gm < gc);
        prop_assert!((average_profits(&gamma(gc), s, 1.0).u1_bar - S_C).abs() < 1e-8);
        prop_assert_eq!(Regime::classify(s), Regime::PeakedThenCrossing);
    }
}
