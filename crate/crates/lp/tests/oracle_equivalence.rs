use p2h_lp::{check_solution, solve, LinearProgram, LpBuilder, RowSense, SolverOptions, Status};
use p2h_oracle::{brute_force_minimum, DenseLp, Sense};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random bounded LP with up to `max_dim` columns and rows, returned in both
/// representations.
fn random_lp(rng: &mut ChaCha8Rng, max_dim: usize) -> (LinearProgram, DenseLp) {
    let n = rng.gen_range(1..=max_dim);
    let m = rng.gen_range(1..=max_dim);
    let mut b = LpBuilder::new("rand");
    let mut dense = DenseLp {
        cost: Vec::new(),
        offset: 0.0,
        rows: Vec::new(),
        lower: Vec::new(),
        upper: Vec::new(),
    };
    let mut cols = Vec::new();
    for j in 0..n {
        let lo = if rng.gen_bool(0.7) { 0.0 } else { rng.gen_range(-5..0) as f64 };
        let hi = lo + rng.gen_range(1..12) as f64;
        let c = rng.gen_range(-10..=10) as f64;
        cols.push(b.add_col(format!("x{j}"), lo, hi, c).unwrap());
        dense.cost.push(c);
        dense.lower.push(lo);
        dense.upper.push(hi);
    }
    for i in 0..m {
        let mut coeffs = Vec::new();
        let mut dense_row = vec![0.0; n];
        for j in 0..n {
            if rng.gen_bool(0.6) {
                let v = rng.gen_range(-6..=6) as f64;
                if v != 0.0 {
                    coeffs.push((cols[j], v));
                    dense_row[j] = v;
                }
            }
        }
        let (sense, ds) = match rng.gen_range(0..10) {
            0..=4 => (RowSense::Le, Sense::Le),
            5..=7 => (RowSense::Ge, Sense::Ge),
            _ => (RowSense::Eq, Sense::Eq),
        };
        let rhs = rng.gen_range(-15..=25) as f64;
        b.add_row(format!("r{i}"), sense, rhs, &coeffs).unwrap();
        dense.rows.push((dense_row, ds, rhs));
    }
    (b.build(), dense)
}

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let opts = SolverOptions::default();
    let (mut optimal, mut infeasible) = (0, 0);
    for case in 0..300 {
        let (lp, dense) = random_lp(&mut rng, 6);
        let sol = solve(&lp, &opts);
        match brute_force_minimum(&dense, 1e-9) {
            Some(v) => {
                assert_eq!(sol.status, Status::Optimal, "case {case}");
                assert!(
                    (sol.objective - v.objective).abs() <= 1e-6 * (1.0 + v.objective.abs()),
                    "case {case}: simplex {} vs oracle {}",
                    sol.objective,
                    v.objective
                );
                assert!(sol.duality_gap() <= 1e-6, "case {case}: gap {}", sol.duality_gap());
                assert!(check_solution(&lp, &sol.x, 1e-7).is_clean(), "case {case}");
                optimal += 1;
            }
            None => {
                assert_eq!(sol.status, Status::Infeasible, "case {case}");
                infeasible += 1;
            }
        }
    }
    assert!(optimal > 100 && infeasible > 10, "{optimal} optimal / {infeasible} infeasible");
}

#[test]
fn identical_inputs_give_identical_outputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let (lp, _) = random_lp(&mut rng, 8);
        let a = solve(&lp, &SolverOptions::default());
        let b = solve(&lp.clone(), &SolverOptions::default());
        assert_eq!(a, b);
    }
}

#[test]
fn positive_objective_scaling_keeps_the_optimal_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let opts = SolverOptions::default();
    let mut checked = 0;
    while checked < 40 {
        let (lp, _) = random_lp(&mut rng, 6);
        let a = solve(&lp, &opts);
        if a.status != Status::Optimal {
            continue;
        }
        let scaled: Vec<f64> = lp.objective().iter().map(|c| c * 8.0).collect();
        let lp2 = lp.with_objective(scaled, 0.0).unwrap();
        let b = solve(&lp2, &opts);
        assert_eq!(b.status, Status::Optimal);
        assert!((b.objective - 8.0 * a.objective).abs() <= 1e-6 * (1.0 + b.objective.abs()));
        for (p, q) in a.x.iter().zip(&b.x) {
            assert!((p - q).abs() <= 1e-7, "primal point moved");
        }
        checked += 1;
    }
}

#[test]
fn solution_without_scaling_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let (lp, _) = random_lp(&mut rng, 8);
        let a = solve(&lp, &SolverOptions::default());
        let b = solve(
            &lp,
            &SolverOptions {
                scaling: false,
                ..Default::default()
            },
        );
        assert_eq!(a.status, b.status);
        if a.status == Status::Optimal {
            assert!((a.objective - b.objective).abs() <= 1e-6 * (1.0 + a.objective.abs()));
        }
    }
}

/// A degenerate LP known to cycle under textbook Dantzig pricing without an
/// anti-cycling rule (Beale's example).
#[test]
fn beale_cycling_example_terminates() {
    let mut b = LpBuilder::new("beale");
    let x4 = b.add_col("x4", 0.0, f64::INFINITY, -0.75).unwrap();
    let x5 = b.add_col("x5", 0.0, f64::INFINITY, 150.0).unwrap();
    let x6 = b.add_col("x6", 0.0, f64::INFINITY, -0.02).unwrap();
    let x7 = b.add_col("x7", 0.0, f64::INFINITY, 6.0).unwrap();
    b.add_row("r1", RowSense::Le, 0.0, &[(x4, 0.25), (x5, -60.0), (x6, -0.04), (x7, 9.0)])
        .unwrap();
    b.add_row("r2", RowSense::Le, 0.0, &[(x4, 0.5), (x5, -90.0), (x6, -0.02), (x7, 3.0)])
        .unwrap();
    b.add_row("r3", RowSense::Le, 1.0, &[(x6, 1.0)]).unwrap();
    let opts = SolverOptions {
        stall_limit: 2,
        scaling: false,
        ..Default::default()
    };
    let sol = solve(&b.build(), &opts);
    assert_eq!(sol.status, Status::Optimal);
    assert!((sol.objective + 0.05).abs() < 1e-9);
}
