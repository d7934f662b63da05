use p2h_lp::mps::{parse_mps, read_mps_with_names, to_mps_string, write_mps};
use p2h_lp::{solve, LinearProgram, LpBuilder, RowSense, SolverOptions, Status};
use p2h_oracle::external::{reference_solver_available, solve_mps};
use proptest::prelude::*;

fn bound_strategy() -> impl Strategy<Value = (f64, f64)> {
    prop_oneof![
        (-1e3..1e3f64).prop_map(|l| (l, l)),
        (-1e3..1e3f64, 0.0..1e3f64).prop_map(|(l, w)| (l, l + w)),
        (-1e3..1e3f64).prop_map(|l| (l, f64::INFINITY)),
        (-1e3..1e3f64).prop_map(|u| (f64::NEG_INFINITY, u)),
        Just((f64::NEG_INFINITY, f64::INFINITY)),
        Just((0.0, f64::INFINITY)),
    ]
}

prop_compose! {
    fn arb_lp()(
        bounds in prop::collection::vec(bound_strategy(), 1..8),
        costs in prop::collection::vec(-1e6..1e6f64, 8),
        rows in prop::collection::vec(
            (prop::collection::vec((0usize..8, -1e4..1e4f64), 0..6), 0u8..3, -1e5..1e5f64),
            0..6
        ),
        offset in -10.0..10.0f64,
    ) -> LinearProgram {
        let mut b = LpBuilder::new("prop");
        let cols: Vec<_> = bounds
            .iter()
            .enumerate()
            .map(|(j, &(l, u))| b.add_col(format!("x{j}"), l, u, costs[j]).unwrap())
            .collect();
        for (i, (entries, sense, rhs)) in rows.into_iter().enumerate() {
            let coeffs: Vec<_> = entries
                .into_iter()
                .map(|(j, v)| (cols[j % cols.len()], v))
                .collect();
            let sense = [RowSense::Le, RowSense::Eq, RowSense::Ge][sense as usize];
            b.add_row(format!("row {i}"), sense, rhs, &coeffs).unwrap();
        }
        b.add_objective_offset(offset);
        b.build()
    }
}

proptest! {
    #[test]
    fn mps_text_round_trip_is_exact(lp in arb_lp()) {
        let text = to_mps_string(&lp).unwrap();
        let back = parse_mps(&text).unwrap();
        prop_assert_eq!(back.matrix().triplets(), lp.matrix().triplets());
        prop_assert_eq!(back.row_sense(), lp.row_sense());
        prop_assert_eq!(back.rhs(), lp.rhs());
        prop_assert_eq!(back.col_lower(), lp.col_lower());
        prop_assert_eq!(back.col_upper(), lp.col_upper());
        prop_assert_eq!(back.objective(), lp.objective());
        prop_assert_eq!(back.objective_offset(), lp.objective_offset());
        // writing is a pure function of the program
        prop_assert_eq!(to_mps_string(&back).unwrap(), text);
    }
}

fn transport() -> LinearProgram {
    let mut b = LpBuilder::new("transport");
    let supply = [30.0, 25.0];
    let demand = [20.0, 15.0, 10.0];
    let cost = [[4.0, 6.0, 9.0], [5.0, 3.0, 7.5]];
    let mut x = vec![];
    for s in 0..2 {
        for d in 0..3 {
            x.push(b.add_col(format!("ship[{s},{d}]"), 0.0, 18.0, cost[s][d]).unwrap());
        }
    }
    for s in 0..2 {
        let c: Vec<_> = (0..3).map(|d| (x[s * 3 + d], 1.0)).collect();
        b.add_row(format!("supply[{s}]"), RowSense::Le, supply[s], &c).unwrap();
    }
    for d in 0..3 {
        let c: Vec<_> = (0..2).map(|s| (x[s * 3 + d], 1.0)).collect();
        b.add_row(format!("demand[{d}]"), RowSense::Ge, demand[d], &c).unwrap();
    }
    let free = b.add_col("slack", f64::NEG_INFINITY, f64::INFINITY, 0.0).unwrap();
    b.add_row("tie", RowSense::Eq, 0.0, &[(free, 1.0), (x[0], -1.0)]).unwrap();
    b.add_objective_offset(100.0);
    b.build()
}

#[test]
fn file_round_trip_restores_names() {
    let lp = transport();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("transport.mps");
    write_mps(&lp, &path).unwrap();
    let back = read_mps_with_names(&path).unwrap();
    assert_eq!(back.col_names(), lp.col_names());
    assert_eq!(back.row_names(), lp.row_names());
    assert_eq!(back.matrix().triplets(), lp.matrix().triplets());
}

#[test]
fn unwritable_path_is_an_error() {
    let lp = transport();
    let err = write_mps(&lp, std::path::Path::new("/nonexistent-dir/x/model.mps"));
    assert!(err.is_err());
}

#[test]
fn reference_solver_agrees_including_offset() {
    if let Err(why) = reference_solver_available() {
        panic!("reference solver unavailable: {}", why.0);
    }
    let lp = transport();
    let ours = solve(&lp, &SolverOptions::default());
    assert_eq!(ours.status, Status::Optimal);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("transport.mps");
    write_mps(&lp, &path).unwrap();
    let theirs = solve_mps(&path).unwrap();
    assert_eq!(theirs.status, "Optimal");
    assert!(
        (ours.objective - theirs.objective).abs() <= 1e-9 * (1.0 + ours.objective.abs()),
        "ours {} vs reference {}",
        ours.objective,
        theirs.objective
    );
}
