//! Piecewise-linear approximation of convex quadratic fuel costs.
//!
//! The range `[p_min, p_max]` is cut into `K` equal segments. Each segment's
//! slope is the chord of the quadratic over it, so the approximation is exact
//! at breakpoints and lies above the curve in between.

use serde::Serialize;

use crate::scenario::Generator;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinearizeError {
    #[error("segment count must be at least 1")]
    ZeroSegments,
    #[error("generator g{id}: quadratic coefficient {a} is negative")]
    NonConvex { id: usize, a: f64 },
    #[error("generator g{id}: output {p} MW outside [{min}, {max}]")]
    OutOfRange { id: usize, p: f64, min: f64, max: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub start_mw: f64,
    pub end_mw: f64,
    pub width_mw: f64,
    /// €/MWh
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseCost {
    pub generator_id: usize,
    pub p_min_mw: f64,
    pub p_max_mw: f64,
    /// Cost at `p_min`, €/h.
    pub base_cost: f64,
    /// Empty when `p_min == p_max`.
    pub segments: Vec<Segment>,
}

/// Exact fuel cost `a P² + b P + c`, €/h.
pub fn quadratic(g: &Generator, p: f64) -> f64 {
    g.cost_a_eur_per_mw2h * p * p + g.cost_b_eur_per_mwh * p + g.cost_c_eur_per_h
}

fn check_range(g: &Generator, p: f64) -> Result<(), LinearizeError> {
    let slack = 1e-9 * (1.0 + g.p_max_mw.abs());
    if p.is_finite() && p >= g.p_min_mw - slack && p <= g.p_max_mw + slack {
        Ok(())
    } else {
        Err(LinearizeError::OutOfRange {
            id: g.id,
            p,
            min: g.p_min_mw,
            max: g.p_max_mw,
        })
    }
}

pub fn evaluate_quadratic(g: &Generator, p: f64) -> Result<f64, LinearizeError> {
    check_range(g, p)?;
    Ok(quadratic(g, p))
}

pub fn linearize(g: &Generator, k: usize) -> Result<PiecewiseCost, LinearizeError> {
    if k == 0 {
        return Err(LinearizeError::ZeroSegments);
    }
    let a = g.cost_a_eur_per_mw2h;
    if a < 0.0 {
        return Err(LinearizeError::NonConvex { id: g.id, a });
    }
    let (lo, hi) = (g.p_min_mw, g.p_max_mw);
    let base_cost = quadratic(g, lo);
    let mut segments = Vec::new();
    if hi > lo {
        let width = (hi - lo) / k as f64;
        for i in 0..k {
            let start = lo + i as f64 * width;
            let end = if i + 1 == k { hi } else { lo + (i + 1) as f64 * width };
            // chord of a P² + b P + c over [start, end]
            let slope = a * (start + end) + g.cost_b_eur_per_mwh;
            segments.push(Segment {
                start_mw: start,
                end_mw: end,
                width_mw: end - start,
                slope,
            });
        }
    }
    Ok(PiecewiseCost {
        generator_id: g.id,
        p_min_mw: lo,
        p_max_mw: hi,
        base_cost,
        segments,
    })
}

impl PiecewiseCost {
    /// Segment outputs when `p` is filled into segments left to right.
    pub fn greedy_fill(&self, p: f64) -> Vec<f64> {
        let mut rest = (p - self.p_min_mw).max(0.0);
        self.segments
            .iter()
            .map(|s| {
                let take = rest.min(s.width_mw);
                rest -= take;
                take
            })
            .collect()
    }

    /// Cost of the given segment outputs, €/h.
    pub fn cost_of_fill(&self, fill: &[f64]) -> f64 {
        self.base_cost + self.segments.iter().zip(fill).map(|(s, x)| s.slope * x).sum::<f64>()
    }
}

pub fn evaluate_piecewise(pw: &PiecewiseCost, p: f64) -> Result<f64, LinearizeError> {
    let slack = 1e-9 * (1.0 + pw.p_max_mw.abs());
    if !(p.is_finite() && p >= pw.p_min_mw - slack && p <= pw.p_max_mw + slack) {
        return Err(LinearizeError::OutOfRange {
            id: pw.generator_id,
            p,
            min: pw.p_min_mw,
            max: pw.p_max_mw,
        });
    }
    Ok(pw.cost_of_fill(&pw.greedy_fill(p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(a: f64, b: f64, c: f64, lo: f64, hi: f64) -> Generator {
        Generator {
            id: 1,
            bus: 1,
            cost_a_eur_per_mw2h: a,
            cost_b_eur_per_mwh: b,
            cost_c_eur_per_h: c,
            p_min_mw: lo,
            p_max_mw: hi,
            ramp_up_mw_per_h: 100.0,
            ramp_down_mw_per_h: 100.0,
            emission_rate_t_per_mwh: None,
        }
    }

    #[test]
    fn linear_cost_has_flat_slopes() {
        let pw = linearize(&gen(0.0, 10.0, 5.0, 0.0, 100.0), 4).unwrap();
        assert_eq!(pw.base_cost, 5.0);
        assert_eq!(pw.segments.len(), 4);
        assert!(pw.segments.iter().all(|s| s.slope == 10.0 && s.width_mw == 25.0));
    }

    #[test]
    fn two_segment_chords() {
        let g = gen(0.01, 10.0, 5.0, 0.0, 100.0);
        let pw = linearize(&g, 2).unwrap();
        assert_eq!(pw.segments[0].width_mw, 50.0);
        assert!((pw.segments[0].slope - 10.5).abs() < 1e-12);
        assert!((pw.segments[1].slope - 11.5).abs() < 1e-12);
        let one = linearize(&g, 1).unwrap();
        let chord = (quadratic(&g, 100.0) - quadratic(&g, 0.0)) / 100.0;
        assert!((one.segments[0].slope - chord).abs() < 1e-12);
    }

    #[test]
    fn quadratic_values() {
        let g = gen(0.01, 10.0, 5.0, 0.0, 100.0);
        assert_eq!(evaluate_quadratic(&g, 50.0).unwrap(), 530.0);
        assert_eq!(evaluate_quadratic(&g, 0.0).unwrap(), 5.0);
        assert_eq!(evaluate_quadratic(&gen(0.0, 0.0, 7.0, 3.0, 9.0), 3.0).unwrap(), 7.0);
        assert!(evaluate_quadratic(&g, 101.0).is_err());
        assert!(evaluate_quadratic(&g, -1.0).is_err());
    }

    #[test]
    fn piecewise_matches_at_breakpoints_and_bounds_above() {
        let g = gen(0.02, 12.0, 40.0, 20.0, 180.0);
        let pw = linearize(&g, 5).unwrap();
        assert_eq!(evaluate_piecewise(&pw, 20.0).unwrap(), pw.base_cost);
        for s in &pw.segments {
            let at_end = evaluate_piecewise(&pw, s.end_mw).unwrap();
            assert!((at_end - quadratic(&g, s.end_mw)).abs() <= 1e-9 * quadratic(&g, s.end_mw));
            let mid = 0.5 * (s.start_mw + s.end_mw);
            assert!(evaluate_piecewise(&pw, mid).unwrap() >= quadratic(&g, mid));
        }
        assert!(evaluate_piecewise(&pw, 181.0).is_err());
    }

    #[test]
    fn degenerate_range_has_no_segments() {
        let pw = linearize(&gen(0.01, 10.0, 5.0, 50.0, 50.0), 3).unwrap();
        assert!(pw.segments.is_empty());
        assert_eq!(pw.base_cost, 530.0);
        assert_eq!(evaluate_piecewise(&pw, 50.0).unwrap(), 530.0);
    }

    #[test]
    fn invalid_requests() {
        assert_eq!(linearize(&gen(0.01, 1.0, 0.0, 0.0, 1.0), 0), Err(LinearizeError::ZeroSegments));
        assert!(matches!(
            linearize(&gen(-0.01, 1.0, 0.0, 0.0, 1.0), 2),
            Err(LinearizeError::NonConvex { .. })
        ));
    }

    #[test]
    fn last_breakpoint_is_exactly_pmax() {
        let pw = linearize(&gen(0.003, 20.0, 0.0, 0.1, 100.3), 7).unwrap();
        assert_eq!(pw.segments.last().unwrap().end_mw, 100.3);
        for w in pw.segments.windows(2) {
            assert_eq!(w[0].end_mw, w[1].start_mw);
        }
    }
}
