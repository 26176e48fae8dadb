//! Newton polygons over (degree, exponent) point sets.
//!
//! For a polynomial whose degree-`i` coefficient grows like `mu^{e_i}`, the
//! upper convex hull of the points `(i, e_i)` determines the large-`mu` root
//! magnitudes: a hull edge of slope `-p` spanning degrees `[d_lo, d_hi]`
//! contributes `d_hi - d_lo` roots of magnitude `~ mu^p`.

use serde::Serialize;

/// Exponent of one polynomial coefficient: `|c_degree| ~ mu^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentPoint {
    pub degree: u32,
    pub exponent: f64,
}

/// One edge of the upper hull.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HullSegment {
    /// Lower-degree endpoint.
    pub from: ExponentPoint,
    /// Higher-degree endpoint.
    pub to: ExponentPoint,
    /// Root magnitude exponent `p = -slope`; the segment's roots scale like `mu^p`.
    pub root_exponent: f64,
    /// Number of roots carried by this segment.
    pub span: u32,
}

impl HullSegment {
    /// Exponent of the edge line at `degree` (degrees on the edge satisfy
    /// `e_degree == edge_level(degree)` up to the collision tolerance).
    pub fn edge_level(&self, degree: u32) -> f64 {
        self.from.exponent - self.root_exponent * (degree as f64 - self.from.degree as f64)
    }
}

/// Tolerance under which two exponents are considered equal (collinear).
pub const EXPONENT_TOL: f64 = 1e-9;

/// Upper convex hull of the exponent points, as segments ordered by
/// ascending degree (equivalently ascending root exponent).
///
/// Duplicate degrees keep their maximum exponent; collinear interior points
/// are merged into a single segment. An empty or single-point input yields
/// no segments.
pub fn newton_polygon(points: &[ExponentPoint]) -> Vec<HullSegment> {
    let mut best: Vec<(u32, f64)> = Vec::new();
    for pt in points {
        match best.iter_mut().find(|(d, _)| *d == pt.degree) {
            Some((_, e)) => {
                if pt.exponent > *e {
                    *e = pt.exponent;
                }
            }
            None => best.push((pt.degree, pt.exponent)),
        }
    }
    best.sort_by_key(|&(d, _)| d);
    if best.len() < 2 {
        return Vec::new();
    }

    // Monotone chain, keeping only strict right turns (strictly convex from
    // above); collinear points are dropped so each edge is maximal.
    let mut hull: Vec<(u32, f64)> = Vec::new();
    for &(d, e) in &best {
        while hull.len() >= 2 {
            let (d1, e1) = hull[hull.len() - 2];
            let (d2, e2) = hull[hull.len() - 1];
            let cross = (d2 as f64 - d1 as f64) * (e - e1) - (e2 - e1) * (d as f64 - d1 as f64);
            // cross >= 0 means (d2, e2) is on or below the chord — not an
            // upper-hull vertex.
            if cross >= -EXPONENT_TOL {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((d, e));
    }

    hull.windows(2)
        .map(|w| {
            let (d1, e1) = w[0];
            let (d2, e2) = w[1];
            HullSegment {
                from: ExponentPoint { degree: d1, exponent: e1 },
                to: ExponentPoint { degree: d2, exponent: e2 },
                root_exponent: (e1 - e2) / (d2 as f64 - d1 as f64),
                span: d2 - d1,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(raw: &[(u32, f64)]) -> Vec<ExponentPoint> {
        raw.iter().map(|&(degree, exponent)| ExponentPoint { degree, exponent }).collect()
    }

    #[test]
    fn single_balanced_segment() {
        // All four roots ~ mu^{1/2}: points of the quartic with
        // (alpha, beta, gamma, a) = (0, 0, 1, 2).
        let segs = newton_polygon(&pts(&[(0, 2.0), (1, 1.0), (2, 1.0), (3, 0.0), (4, 0.0)]));
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].span, 4);
        assert!((segs[0].root_exponent - 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_segment_hull_with_bounded_root() {
        // Quartic exponents for (alpha, beta, gamma) = (0.75, 1, 2): the flat
        // edge (0,3)-(1,3) carries one bounded root, the slope -1 edge three
        // roots ~ mu.
        let segs = newton_polygon(&pts(&[(0, 3.0), (1, 3.0), (2, 2.0), (3, 1.0), (4, 0.0)]));
        assert_eq!(segs.len(), 2);
        assert_eq!((segs[0].span, segs[1].span), (1, 3));
        assert!((segs[0].root_exponent - 0.0).abs() < 1e-12);
        assert!((segs[1].root_exponent - 1.0).abs() < 1e-12);
        // Interior points (2,2) and (3,1) lie exactly on the second edge.
        assert!((segs[1].edge_level(2) - 2.0).abs() < 1e-12);
        assert!((segs[1].edge_level(3) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mu_free_quartic_is_one_flat_segment() {
        let segs = newton_polygon(&pts(&[(0, 0.0), (1, 0.0), (2, 0.0), (3, 0.0), (4, 0.0)]));
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].span, 4);
        assert_eq!(segs[0].root_exponent, 0.0);
    }

    #[test]
    fn spans_sum_to_degree() {
        let segs = newton_polygon(&pts(&[(0, 2.5), (1, 2.5), (2, 1.0), (3, 1.2), (4, 0.0)]));
        let total: u32 = segs.iter().map(|s| s.span).sum();
        assert_eq!(total, 4);
        // Root exponents ascend with degree.
        for w in segs.windows(2) {
            assert!(w[0].root_exponent < w[1].root_exponent + 1e-12);
        }
    }

    #[test]
    fn duplicate_degrees_keep_max_exponent() {
        let segs = newton_polygon(&pts(&[(0, 1.0), (0, 2.0), (4, 0.0)]));
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].from.exponent, 2.0);
        assert!((segs[0].root_exponent - 0.5).abs() < 1e-12);
    }
}
