//! Regularity-domain membership and subregion classification.
//!
//! The admissible exponent box splits into a regularity domain (where the
//! semigroup is analytic or of some Gevrey class) and its complement (where
//! it is not differentiable). Inside the domain, disjoint subregions each
//! carry a closed-form resolvent exponent `mu`; the Gevrey order verdict is
//! "class delta for every delta > 1/mu". Different-speed parameters use the
//! R1..R5 tables, same-speed parameters (`a = gamma = 1`) the finer
//! R~1..R~4 tables.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};
use crate::params::Params;

/// Which regularity domain a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DomainTag {
    /// Different-speed domain at the point's `gamma`.
    DifferentSpeed,
    /// Same-speed domain (`a = gamma = 1`).
    SameSpeed,
    /// Complement: not differentiable.
    Outside,
}

/// Subregion label of the regularity domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    R1,
    R2,
    R3,
    R4,
    R5,
    Rt1,
    Rt2,
    Rt3,
    Rt4,
    Outside,
}

impl Region {
    pub const fn as_str(&self) -> &'static str {
        match self {
            Region::R1 => "R1",
            Region::R2 => "R2",
            Region::R3 => "R3",
            Region::R4 => "R4",
            Region::R5 => "R5",
            Region::Rt1 => "R~1",
            Region::Rt2 => "R~2",
            Region::Rt3 => "R~3",
            Region::Rt4 => "R~4",
            Region::Outside => "Outside",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Semigroup smoothing class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegularityKind {
    Analytic,
    Gevrey,
    NotDifferentiable,
}

impl fmt::Display for RegularityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegularityKind::Analytic => "Analytic",
            RegularityKind::Gevrey => "Gevrey",
            RegularityKind::NotDifferentiable => "NotDifferentiable",
        };
        f.write_str(s)
    }
}

/// Classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularityVerdict {
    pub kind: RegularityKind,
    pub region: Region,
    /// Resolvent decay exponent: 1 for analytic, in (0,1) for Gevrey,
    /// absent when not differentiable.
    pub mu: Option<f64>,
    /// Infimum Gevrey order `1/mu`; the verdict is "class delta > delta_inf".
    pub delta_inf: Option<f64>,
}

/// Membership test for the regularity domain, with its routing tag.
///
/// Strict/non-strict inequalities follow the printed definitions exactly.
/// The isolated corner `alpha = (gamma+1)/2, beta = 1` is part of the domain
/// for every admissible `gamma` (for `gamma <= 1` it is listed explicitly;
/// for `gamma > 1` it is the closure point of the curved upper boundary and
/// the worked plate example requires it classified).
pub fn in_regularity_domain(p: &Params) -> (bool, DomainTag) {
    if !p.in_box() {
        return (false, DomainTag::Outside);
    }
    if p.same_speed() {
        let (al, be) = (p.alpha, p.beta);
        let main = {
            let t = 2.0 * al - be;
            t > 0.0 && t < 1.0 && be > 0.0 && be <= 1.0
        };
        let corner = al == 1.0 && be == 1.0;
        if main || corner {
            (true, DomainTag::SameSpeed)
        } else {
            (false, DomainTag::Outside)
        }
    } else {
        let (al, be, ga) = (p.alpha, p.beta, p.gamma);
        let t = 2.0 * al - be;
        let main = if ga > 1.0 {
            t > 0.0 && t < ga && 2.0 * al + be - ga > 0.0 && be > 0.0 && be <= 1.0
        } else {
            t > 0.0 && t < ga && 2.0 * al + be + ga > 2.0 && be > 0.0 && be <= 1.0
        };
        let corner = al == (ga + 1.0) / 2.0 && be == 1.0;
        if main || corner {
            (true, DomainTag::DifferentSpeed)
        } else {
            (false, DomainTag::Outside)
        }
    }
}

/// Resolvent exponent formula for a subregion at the given parameters.
/// `None` for analytic regions (`mu = 1` by convention) and `Outside`.
pub fn region_mu(region: Region, p: &Params) -> Option<f64> {
    let (al, be, ga) = (p.alpha, p.beta, p.gamma);
    match region {
        Region::R1 | Region::Rt1 => Some(1.0),
        Region::R2 => Some(2.0 * (2.0 * al - be) / ga),
        Region::R3 => Some(2.0 * (2.0 * al + be - ga.max(2.0 - ga)) / ga),
        Region::R4 => Some(be / al),
        Region::R5 => Some(2.0 * (-2.0 * al + be + ga) / (-2.0 * al + ga + 1.0)),
        Region::Rt2 => Some(2.0 * (2.0 * al - be)),
        Region::Rt3 => Some(2.0 * be),
        Region::Rt4 => Some((-2.0 * al + be + 1.0) / (1.0 - al)),
        Region::Outside => None,
    }
}

fn different_speed_matches(al: f64, be: f64, ga: f64) -> Vec<Region> {
    let mut hits = Vec::new();
    // Analytic sector.
    if 4.0 * al - 2.0 * be - ga >= 0.0 && 2.0 * al - 2.0 * be + (1.0 - ga).max(0.0) <= 0.0 {
        hits.push(Region::R1);
    }
    if 2.0 * al - be > 0.0
        && 4.0 * al - 2.0 * be - ga < 0.0
        && be >= (1.0 - ga / 2.0).max(ga / 2.0)
    {
        hits.push(Region::R2);
    }
    if 2.0 * al + be - ga.max(2.0 - ga) > 0.0
        && al <= ga.max(1.0) / 2.0
        && be < (1.0 - ga / 2.0).max(ga / 2.0)
    {
        hits.push(Region::R3);
    }
    // The curved boundary separates the two upper regions (gamma > 1 only).
    // Both sides satisfy alpha > beta and alpha > gamma/2, which also keeps
    // the curve's denominator positive.
    if ga > 1.0 && al > be && al > ga / 2.0 {
        let curve = (4.0 * al * al - 2.0 * al * ga) / (4.0 * al - ga - 1.0);
        if be > curve {
            hits.push(Region::R4);
        } else if 2.0 * al - be - ga < 0.0 {
            hits.push(Region::R5);
        }
    }
    if ga <= 1.0
        && 2.0 * al - be - ga < 0.0
        && al > 0.5
        && al < (ga + 1.0) / 2.0
        && 2.0 * al - 2.0 * be - ga + 1.0 > 0.0
    {
        hits.push(Region::R5);
    }
    hits
}

fn same_speed_matches(al: f64, be: f64) -> Vec<Region> {
    let mut hits = Vec::new();
    if al <= be && 2.0 * al - be >= 0.5 {
        hits.push(Region::Rt1);
    }
    if al <= be && 2.0 * al - be > 0.0 && 2.0 * al - be < 0.5 {
        hits.push(Region::Rt2);
    }
    if al > be && al <= 0.5 {
        hits.push(Region::Rt3);
    }
    if al > be && al > 0.5 && 2.0 * al - be < 1.0 {
        hits.push(Region::Rt4);
    }
    hits
}

fn verdict_for(region: Region, p: &Params) -> RegularityVerdict {
    match region {
        Region::R1 | Region::Rt1 => RegularityVerdict {
            kind: RegularityKind::Analytic,
            region,
            mu: Some(1.0),
            delta_inf: Some(1.0),
        },
        Region::Outside => RegularityVerdict {
            kind: RegularityKind::NotDifferentiable,
            region,
            mu: None,
            delta_inf: None,
        },
        _ => {
            let mu = region_mu(region, p).expect("Gevrey region has a mu formula");
            RegularityVerdict {
                kind: RegularityKind::Gevrey,
                region,
                mu: Some(mu),
                delta_inf: Some(1.0 / mu),
            }
        }
    }
}

/// Classify a parameter tuple into its regularity verdict.
///
/// Out-of-domain points get a `NotDifferentiable` verdict (never an error).
/// A domain point matching zero or multiple subregions raises
/// [`Error::AmbiguousBoundary`] — this would indicate a fault in the printed
/// inequality transcription and must surface, not be patched over.
pub fn classify_regularity(p: &Params) -> Result<RegularityVerdict> {
    let (inside, tag) = in_regularity_domain(p);
    if !inside {
        return Ok(verdict_for(Region::Outside, p));
    }
    let (al, be, ga) = (p.alpha, p.beta, p.gamma);
    // The isolated corner is adjoined to the domain by fiat; route it before
    // the open-region predicates (whose curved boundary passes through it).
    match tag {
        DomainTag::SameSpeed => {
            let hits = same_speed_matches(al, be);
            ambiguity_check(p, &hits)?;
            Ok(verdict_for(hits[0], p))
        }
        DomainTag::DifferentSpeed => {
            if al == (ga + 1.0) / 2.0 && be == 1.0 {
                let corner_region = if ga <= 1.0 { Region::R1 } else { Region::R4 };
                return Ok(verdict_for(corner_region, p));
            }
            let hits = different_speed_matches(al, be, ga);
            ambiguity_check(p, &hits)?;
            Ok(verdict_for(hits[0], p))
        }
        DomainTag::Outside => unreachable!("inside implies a speed tag"),
    }
}

fn ambiguity_check(p: &Params, hits: &[Region]) -> Result<()> {
    if hits.len() == 1 {
        Ok(())
    } else {
        Err(Error::AmbiguousBoundary {
            alpha: p.alpha,
            beta: p.beta,
            gamma: p.gamma,
            matched: hits.iter().map(|r| r.to_string()).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(al: f64, be: f64, ga: f64, a: f64) -> Params {
        Params::new(al, be, ga, a).unwrap()
    }

    #[test]
    fn domain_membership_examples() {
        assert_eq!(in_regularity_domain(&p(1.0, 1.0, 2.0, 2.0)), (true, DomainTag::DifferentSpeed));
        assert_eq!(in_regularity_domain(&p(0.25, 0.75, 1.0, 2.0)), (false, DomainTag::Outside));
        // Same-speed corner is adjoined.
        assert_eq!(in_regularity_domain(&p(1.0, 1.0, 1.0, 1.0)), (true, DomainTag::SameSpeed));
        // 2*alpha - beta = 1 off the corner stays outside (strict bound).
        assert_eq!(in_regularity_domain(&p(0.75, 0.5, 1.0, 1.0)), (false, DomainTag::Outside));
    }

    #[test]
    fn frozen_region_verdicts() {
        // Plate-family points: analytic sector and both Gevrey branches.
        let v = classify_regularity(&p(1.0, 1.0, 2.0, 2.0)).unwrap();
        assert_eq!((v.kind, v.region), (RegularityKind::Analytic, Region::R1));
        assert_eq!(v.mu, Some(1.0));

        let v = classify_regularity(&p(0.75, 1.0, 2.0, 2.0)).unwrap();
        assert_eq!((v.kind, v.region), (RegularityKind::Gevrey, Region::R2));
        assert!((v.mu.unwrap() - 0.5).abs() < 1e-15);
        assert!((v.delta_inf.unwrap() - 2.0).abs() < 1e-15);

        let v = classify_regularity(&p(1.25, 1.0, 2.0, 2.0)).unwrap();
        assert_eq!(v.region, Region::R4);
        assert!((v.mu.unwrap() - 0.8).abs() < 1e-15);
        assert!((v.delta_inf.unwrap() - 1.25).abs() < 1e-15);

        // Low-gamma damped-dominated sample.
        let v = classify_regularity(&p(0.5, 0.85, 0.5, 2.0)).unwrap();
        assert_eq!(v.region, Region::R2);
        assert!((v.mu.unwrap() - 0.6).abs() < 1e-12);

        // Same-speed samples.
        let v = classify_regularity(&p(0.5, 0.25, 1.0, 1.0)).unwrap();
        assert_eq!(v.region, Region::Rt3);
        assert!((v.mu.unwrap() - 0.5).abs() < 1e-15);
        assert!((v.delta_inf.unwrap() - 2.0).abs() < 1e-15);

        let v = classify_regularity(&p(0.4, 0.4, 1.0, 1.0)).unwrap();
        assert_eq!(v.region, Region::Rt2);
        assert!((v.mu.unwrap() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn formulas_apply_only_inside_their_regions() {
        // This point superficially fits the R2 formula (it would give
        // mu = 1.4 > 1) but the sign condition routes it to the analytic
        // sector instead.
        let v = classify_regularity(&p(0.6, 0.85, 0.5, 2.0)).unwrap();
        assert_eq!((v.kind, v.region), (RegularityKind::Analytic, Region::R1));
    }

    #[test]
    fn curved_boundary_side_assignment() {
        // Point above the curve: damping-limited Gevrey branch.
        let v = classify_regularity(&p(0.9, 0.5, 1.5, 2.0)).unwrap();
        assert_eq!(v.region, Region::R4);
        assert!((v.mu.unwrap() - 5.0 / 9.0).abs() < 1e-15);
        // Point below the curve: coupling-limited branch.
        let v = classify_regularity(&p(0.9, 0.45, 1.5, 2.0)).unwrap();
        assert_eq!(v.region, Region::R5);
        assert!((v.mu.unwrap() - 3.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn corner_points() {
        // Low gamma: corner belongs to the analytic sector.
        let v = classify_regularity(&p(1.0, 1.0, 1.0, 2.0)).unwrap();
        assert_eq!((v.kind, v.region), (RegularityKind::Analytic, Region::R1));
        // High gamma: corner continues the damping-limited branch (beta/alpha).
        let v = classify_regularity(&p(1.5, 1.0, 2.0, 2.0)).unwrap();
        assert_eq!(v.region, Region::R4);
        assert!((v.mu.unwrap() - 2.0 / 3.0).abs() < 1e-15);
        // Same-speed corner is analytic.
        let v = classify_regularity(&p(1.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!((v.kind, v.region), (RegularityKind::Analytic, Region::Rt1));
    }

    #[test]
    fn outside_points_are_verdicts_not_errors() {
        let v = classify_regularity(&p(0.25, 0.75, 1.0, 2.0)).unwrap();
        assert_eq!((v.kind, v.region), (RegularityKind::NotDifferentiable, Region::Outside));
        assert_eq!(v.mu, None);
        // Out-of-box exploratory point.
        let q = Params::exploratory(2.0, 0.5, 2.0, 2.0, 1.0, 1.0).unwrap();
        let v = classify_regularity(&q).unwrap();
        assert_eq!(v.region, Region::Outside);
    }

    #[test]
    fn verdict_ignores_coupling_strengths() {
        for &(b, k) in &[(-2.0, 0.5), (1.0, 1.0), (3.0, 2.0)] {
            let q = Params::with_coupling(0.75, 1.0, 2.0, 2.0, b, k).unwrap();
            let v = classify_regularity(&q).unwrap();
            assert_eq!(v.region, Region::R2);
            assert_eq!(v.mu, Some(0.5));
        }
    }

    #[test]
    fn mu_is_continuous_across_the_analytic_boundary() {
        // On 4*alpha - 2*beta - gamma = 0 the Gevrey formula evaluates to 1,
        // matching the analytic verdict on the other side.
        for &(be, ga) in &[(0.9, 1.2), (1.0, 2.0), (0.8, 1.0)] {
            let al = (2.0 * be + ga) / 4.0;
            let q = p(al, be, ga, 2.0);
            let mu = region_mu(Region::R2, &q).unwrap();
            assert!((mu - 1.0).abs() < 1e-12);
        }
    }
}
