use p2h_core::linearize::{evaluate_piecewise, linearize, quadratic};
use p2h_core::scenario::Generator;
use proptest::prelude::*;

fn generator() -> impl Strategy<Value = Generator> {
    (0.0..0.1f64, 0.0..120.0f64, 0.0..2000.0f64, 0.0..400.0f64, 0.0..900.0f64).prop_map(|(a, b, c, lo, span)| {
        Generator {
            id: 7,
            bus: 1,
            cost_a_eur_per_mw2h: a,
            cost_b_eur_per_mwh: b,
            cost_c_eur_per_h: c,
            p_min_mw: lo,
            p_max_mw: lo + span,
            ramp_up_mw_per_h: 1.0,
            ramp_down_mw_per_h: 1.0,
            emission_rate_t_per_mwh: None,
        }
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

proptest! {
    #[test]
    fn exact_at_breakpoints(g in generator(), k in prop::sample::select(vec![1usize, 2, 3, 10, 50])) {
        let pw = linearize(&g, k).unwrap();
        prop_assert!(rel(evaluate_piecewise(&pw, g.p_min_mw).unwrap(), quadratic(&g, g.p_min_mw)) <= 1e-9);
        for s in &pw.segments {
            prop_assert!(rel(evaluate_piecewise(&pw, s.end_mw).unwrap(), quadratic(&g, s.end_mw)) <= 1e-9);
        }
        if g.p_max_mw > g.p_min_mw {
            prop_assert_eq!(pw.segments.len(), k);
            prop_assert_eq!(pw.segments.last().unwrap().end_mw, g.p_max_mw);
        }
    }

    #[test]
    fn bounds_quadratic_from_above(g in generator(), k in 1usize..40, frac in 0.0..1.0f64) {
        let pw = linearize(&g, k).unwrap();
        let p = g.p_min_mw + frac * (g.p_max_mw - g.p_min_mw);
        let approx = evaluate_piecewise(&pw, p).unwrap();
        prop_assert!(approx >= quadratic(&g, p) - 1e-9 * quadratic(&g, p).abs().max(1.0));
    }

    #[test]
    fn slopes_never_decrease(g in generator(), k in 1usize..60) {
        let pw = linearize(&g, k).unwrap();
        for w in pw.segments.windows(2) {
            prop_assert!(w[1].slope >= w[0].slope);
            prop_assert_eq!(w[0].end_mw, w[1].start_mw);
        }
    }

    #[test]
    fn finer_grids_are_tighter(g in generator(), frac in 0.0..1.0f64) {
        let p = g.p_min_mw + frac * (g.p_max_mw - g.p_min_mw);
        let coarse = evaluate_piecewise(&linearize(&g, 2).unwrap(), p).unwrap();
        let fine = evaluate_piecewise(&linearize(&g, 4).unwrap(), p).unwrap();
        prop_assert!(fine <= coarse + 1e-9 * coarse.abs().max(1.0));
    }

    #[test]
    fn greedy_fill_reconstructs_output(g in generator(), k in 1usize..20, frac in 0.0..1.0f64) {
        let pw = linearize(&g, k).unwrap();
        let p = g.p_min_mw + frac * (g.p_max_mw - g.p_min_mw);
        let fill = pw.greedy_fill(p);
        let total: f64 = pw.p_min_mw + fill.iter().sum::<f64>();
        prop_assert!((total - p).abs() <= 1e-9 * p.abs().max(1.0));
        for (x, s) in fill.iter().zip(&pw.segments) {
            prop_assert!(*x >= 0.0 && *x <= s.width_mw + 1e-12);
        }
    }
}
