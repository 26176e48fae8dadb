//! Parameter tuples for the coupled evolution family.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Admissible box for the exponent triple: `alpha` in `[0, (gamma+1)/2]`,
/// `beta` in `[0, 1]`, `gamma` in `[1/2, 2]`.
pub const GAMMA_MIN: f64 = 0.5;
pub const GAMMA_MAX: f64 = 2.0;

/// One member of the coupled evolution family.
///
/// `alpha` is the coupling order, `beta` the damping order, `gamma` the order
/// of the indirectly damped equation; `a > 0` is the speed coefficient,
/// `b != 0` the coupling strength and `k > 0` the damping strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub a: f64,
    pub b: f64,
    pub k: f64,
}

impl Params {
    /// Strict constructor: requires `(alpha, beta, gamma)` inside the
    /// admissible box and valid coefficients.
    pub fn new(alpha: f64, beta: f64, gamma: f64, a: f64) -> Result<Self> {
        Self::with_coupling(alpha, beta, gamma, a, 1.0, 1.0)
    }

    /// Strict constructor with explicit coupling and damping strengths.
    pub fn with_coupling(alpha: f64, beta: f64, gamma: f64, a: f64, b: f64, k: f64) -> Result<Self> {
        let p = Self::exploratory(alpha, beta, gamma, a, b, k)?;
        if let Some(reason) = p.box_violation() {
            return Err(Error::InvalidParams(reason));
        }
        Ok(p)
    }

    /// Relaxed constructor for out-of-box exploration: only finiteness and
    /// the sign constraints on `a`, `b`, `k` are enforced. Exponents outside
    /// the admissible box are tolerated and reported by [`Params::box_violation`].
    pub fn exploratory(alpha: f64, beta: f64, gamma: f64, a: f64, b: f64, k: f64) -> Result<Self> {
        for (name, v) in [
            ("alpha", alpha),
            ("beta", beta),
            ("gamma", gamma),
            ("a", a),
            ("b", b),
            ("k", k),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} = {v} is not finite")));
            }
        }
        if a <= 0.0 {
            return Err(Error::InvalidParams(format!("a = {a} must be positive")));
        }
        if k <= 0.0 {
            return Err(Error::InvalidParams(format!("k = {k} must be positive")));
        }
        if b == 0.0 {
            return Err(Error::InvalidParams("b must be nonzero".into()));
        }
        Ok(Self { alpha, beta, gamma, a, b, k })
    }

    /// Human-readable description of the first admissible-box violation, if
    /// any. `None` means the exponent triple lies inside the box.
    pub fn box_violation(&self) -> Option<String> {
        if !(GAMMA_MIN..=GAMMA_MAX).contains(&self.gamma) {
            return Some(format!("gamma = {} outside [{GAMMA_MIN}, {GAMMA_MAX}]", self.gamma));
        }
        let alpha_max = (self.gamma + 1.0) / 2.0;
        if !(0.0..=alpha_max).contains(&self.alpha) {
            return Some(format!("alpha = {} outside [0, {alpha_max}]", self.alpha));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Some(format!("beta = {} outside [0, 1]", self.beta));
        }
        None
    }

    /// True when the exponent triple lies in the admissible box.
    pub fn in_box(&self) -> bool {
        self.box_violation().is_none()
    }

    /// Exact same-speed detection: `a == 1` and `gamma == 1`.
    ///
    /// The same-speed case is a discrete case split, not a limit, so the
    /// comparison is exact; use [`Params::snapped`] first to absorb decimal
    /// noise deliberately.
    pub fn same_speed(&self) -> bool {
        self.a == 1.0 && self.gamma == 1.0
    }

    /// Snap parameters within `eps` of a printed boundary value onto it, so
    /// that boundary cells (which use exact equalities) are reachable from
    /// decimal input.
    ///
    /// Snapping is applied in a fixed order — `a`, then `gamma`, then
    /// `alpha`, then `beta` — because later targets depend on earlier
    /// components (for example the line `beta = 1 - gamma/2`).
    pub fn snapped(&self, eps: f64) -> Self {
        let mut p = *self;
        snap_to(&mut p.a, &[1.0], eps);
        snap_to(&mut p.gamma, &[0.5, 1.0, 1.5, 2.0], eps);
        let g = p.gamma;
        snap_to(
            &mut p.alpha,
            &[0.0, 0.5, g / 2.0, (g + 1.0) / 2.0, (g + 2.0) / 4.0, 1.0],
            eps,
        );
        let al = p.alpha;
        let mut beta_targets = vec![
            0.0,
            0.5,
            1.0,
            g / 2.0,
            1.0 - g / 2.0,
            al,
            2.0 * al,
            2.0 * al - g,
            2.0 * al - g / 2.0,
            al - (g - 1.0) / 2.0,
            2.0 - g - 2.0 * al,
        ];
        // Curved boundary between the two upper different-speed regions.
        let denom = 4.0 * al - g - 1.0;
        if g > 1.0 && denom > 0.0 {
            beta_targets.push((4.0 * al * al - 2.0 * al * g) / denom);
        }
        snap_to(&mut p.beta, &beta_targets, eps);
        p
    }
}

fn snap_to(value: &mut f64, targets: &[f64], eps: f64) {
    let mut best: Option<f64> = None;
    for &t in targets {
        let d = (*value - t).abs();
        if d <= eps {
            match best {
                Some(b) if (*value - b).abs() <= d => {}
                _ => best = Some(t),
            }
        }
    }
    if let Some(t) = best {
        *value = t;
    }
}
