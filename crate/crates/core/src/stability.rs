//! Decay-rate formulas for the stability regions.
//!
//! Region membership for the stability tables comes from prior work and is
//! not reproduced here; callers supply the label and this module evaluates
//! the printed order formula, validating positivity.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};
use crate::params::Params;

/// Stability-region label. `S1`/`St1` are exponentially stable, `S5` only
/// strongly stable, the rest polynomially stable; `St` labels are the
/// same-speed variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StabilityRegion {
    S1,
    S2,
    S3,
    S4,
    S5,
    St1,
    St2,
}

impl fmt::Display for StabilityRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StabilityRegion::S1 => "S1",
            StabilityRegion::S2 => "S2",
            StabilityRegion::S3 => "S3",
            StabilityRegion::S4 => "S4",
            StabilityRegion::S5 => "S5",
            StabilityRegion::St1 => "S~1",
            StabilityRegion::St2 => "S~2",
        };
        f.write_str(s)
    }
}

/// Kind of energy decay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DecayKind {
    Exponential,
    Polynomial,
    Strong,
}

/// Evaluated stability verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityInfo {
    pub s_region: StabilityRegion,
    pub kind: DecayKind,
    /// Decay order `t^{-order}`; present only for polynomial decay.
    pub poly_order: Option<f64>,
}

/// Evaluate the decay-order formula for a labelled region.
///
/// The same-speed (`a = gamma = 1`) polynomial formulas coincide with the
/// general ones evaluated at `gamma = 1`, so a single table serves both; the
/// `St` labels additionally assert the point is same-speed.
pub fn stability_order(s: StabilityRegion, p: &Params) -> Result<StabilityInfo> {
    use StabilityRegion::*;
    if matches!(s, St1 | St2) && !p.same_speed() {
        return Err(Error::InvalidParams(format!(
            "label {s} requires the same-speed case a = gamma = 1, got a = {}, gamma = {}",
            p.a, p.gamma
        )));
    }
    let (al, be, ga) = (p.alpha, p.beta, p.gamma);
    let order = match s {
        S1 | St1 => {
            return Ok(StabilityInfo { s_region: s, kind: DecayKind::Exponential, poly_order: None })
        }
        S5 => return Ok(StabilityInfo { s_region: s, kind: DecayKind::Strong, poly_order: None }),
        S2 | St2 => ga / (2.0 * (be - 2.0 * al)),
        S3 => ga / (2.0 * ((ga - 1.0).abs() + 1.0 - be - 2.0 * al)),
        S4 => (ga + 1.0 - 2.0 * al) / (2.0 * (2.0 * al - be - ga)),
    };
    if !(order.is_finite() && order > 0.0) {
        return Err(Error::NonPositiveOrder { order });
    }
    Ok(StabilityInfo { s_region: s, kind: DecayKind::Polynomial, poly_order: Some(order) })
}
