//! Eigenvalue-sequence models of the underlying elastic operator, a model
//! registry, and the spectral interpolation inequality.
//!
//! Every quantity in this crate is assembled mode-by-mode: a model supplies
//! the increasing sequence `mu_1 < mu_2 < ...` of eigenvalues over which
//! modal quantities are maximized or summed. Models are registered behind a
//! trait object so new spectra can be added (or parsed from CLI strings)
//! without touching call sites.

use crate::error::{Error, Result};

/// An increasing, positive, unbounded eigenvalue sequence `mu_n`.
///
/// Implementations must guarantee `mu_1 > 0`, strict monotonicity, and
/// divergence; `eigenvalue` is 1-based.
pub trait SpectralModel: Send + Sync {
    /// Registry name (including parameters, e.g. `geometric:1:2`).
    fn name(&self) -> String;
    /// The `n`-th eigenvalue, `n >= 1`.
    fn eigenvalue(&self, n: usize) -> f64;
}

/// `mu_n = n`: the generic abstract sequence.
#[derive(Debug, Clone, Copy)]
pub struct Linear;

impl SpectralModel for Linear {
    fn name(&self) -> String {
        "linear".into()
    }
    fn eigenvalue(&self, n: usize) -> f64 {
        n as f64
    }
}

/// `mu_n = (n pi)^2`: Dirichlet Laplacian on the unit interval.
#[derive(Debug, Clone, Copy)]
pub struct Dirichlet1d;

impl SpectralModel for Dirichlet1d {
    fn name(&self) -> String {
        "dirichlet-1d".into()
    }
    fn eigenvalue(&self, n: usize) -> f64 {
        let x = n as f64 * std::f64::consts::PI;
        x * x
    }
}

/// `mu_n = (n pi)^4`: clamped-free beam / bilaplacian scaling on the unit
/// interval (hinged ends, so the quartic dispersion is exact).
#[derive(Debug, Clone, Copy)]
pub struct Bilaplacian1d;

impl SpectralModel for Bilaplacian1d {
    fn name(&self) -> String {
        "bilaplacian-1d".into()
    }
    fn eigenvalue(&self, n: usize) -> f64 {
        let x = n as f64 * std::f64::consts::PI;
        (x * x) * (x * x)
    }
}

/// `mu_n = mu0 * ratio^n`: log-equispaced samples, the right abscissas for
/// power-law exponent fitting.
#[derive(Debug, Clone, Copy)]
pub struct Geometric {
    pub mu0: f64,
    pub ratio: f64,
}

impl Geometric {
    pub fn new(mu0: f64, ratio: f64) -> Result<Self> {
        if !(mu0 > 0.0 && mu0.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "geometric model needs mu0 > 0, got {mu0}"
            )));
        }
        if !(ratio > 1.0 && ratio.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "geometric model needs ratio > 1, got {ratio}"
            )));
        }
        Ok(Geometric { mu0, ratio })
    }
}

impl SpectralModel for Geometric {
    fn name(&self) -> String {
        format!("geometric:{}:{}", self.mu0, self.ratio)
    }
    fn eigenvalue(&self, n: usize) -> f64 {
        self.mu0 * self.ratio.powi(n as i32)
    }
}

/// The built-in registry, in display order. `geometric` appears with its
/// default parameters (`mu0 = 1, ratio = 2`).
pub fn builtin_models() -> Vec<Box<dyn SpectralModel>> {
    vec![
        Box::new(Linear),
        Box::new(Dirichlet1d),
        Box::new(Bilaplacian1d),
        Box::new(Geometric { mu0: 1.0, ratio: 2.0 }),
    ]
}

/// Registry names accepted by [`model_by_name`].
pub const MODEL_NAMES: [&str; 4] = ["linear", "dirichlet-1d", "bilaplacian-1d", "geometric"];

/// Look up a model by name. `geometric` accepts optional colon-separated
/// parameters: `geometric`, `geometric:MU0:RATIO`.
pub fn model_by_name(spec: &str) -> Result<Box<dyn SpectralModel>> {
    let unknown = || Error::UnknownModel {
        name: spec.to_string(),
        known: MODEL_NAMES.join(", "),
    };
    let mut parts = spec.split(':');
    let head = parts.next().unwrap_or_default();
    let rest: Vec<&str> = parts.collect();
    match (head, rest.as_slice()) {
        ("linear", []) => Ok(Box::new(Linear)),
        ("dirichlet-1d", []) => Ok(Box::new(Dirichlet1d)),
        ("bilaplacian-1d", []) => Ok(Box::new(Bilaplacian1d)),
        ("geometric", []) => Ok(Box::new(Geometric { mu0: 1.0, ratio: 2.0 })),
        ("geometric", [mu0, ratio]) => {
            let mu0: f64 = mu0.parse().map_err(|_| unknown())?;
            let ratio: f64 = ratio.parse().map_err(|_| unknown())?;
            Ok(Box::new(Geometric::new(mu0, ratio)?))
        }
        _ => Err(unknown()),
    }
}

/// Outcome of an interpolation-inequality check.
#[derive(Debug, Clone, Copy)]
pub struct InterpolationReport {
    /// Whether `lhs <= rhs` up to the floating-point guard `1 - 1e-12`.
    pub holds: bool,
    /// `rhs / lhs`; at least `1 - 1e-12` whenever the inequality holds.
    pub slack: f64,
}

/// Floating-point guard for [`interpolation_check`]: the inequality is exact
/// in real arithmetic, so any computed slack below `1 - INTERPOLATION_GUARD`
/// signals a fault rather than a genuine violation.
pub const INTERPOLATION_GUARD: f64 = 1e-12;

/// Verify the moment interpolation inequality
/// `||A^p x|| <= ||A^q x||^{(p-r)/(q-r)} * ||A^r x||^{(q-p)/(q-r)}`
/// for `0 <= r <= p <= q`, with norms evaluated spectrally over the model
/// truncation carrying `x` (`||A^s x||^2 = sum mu_n^{2s} |x_n|^2`).
///
/// Norms are formed in log space so large exponents (e.g. bilaplacian modes
/// raised to `2q`) cannot overflow.
pub fn interpolation_check(
    model: &dyn SpectralModel,
    x: &[f64],
    p: f64,
    q: f64,
    r: f64,
) -> Result<InterpolationReport> {
    if !(0.0 <= r && r <= p && p <= q && q.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "interpolation orders must satisfy 0 <= r <= p <= q, got (p, q, r) = ({p}, {q}, {r})"
        )));
    }
    if x.iter().all(|&c| c == 0.0) {
        return Err(Error::InvalidParams("coefficient vector is zero".into()));
    }
    // log ||A^s x||^2 via log-sum-exp over 2 s ln(mu_n) + 2 ln|x_n|.
    let log_norm_sq = |s: f64| -> f64 {
        let logs: Vec<f64> = x
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(i, &c)| 2.0 * s * model.eigenvalue(i + 1).ln() + 2.0 * c.abs().ln())
            .collect();
        let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        m + logs.iter().map(|&l| (l - m).exp()).sum::<f64>().ln()
    };
    let lhs_log = 0.5 * log_norm_sq(p);
    let rhs_log = if q - r <= f64::EPSILON * q.max(1.0) {
        // p = q = r: both sides are the same norm.
        lhs_log
    } else {
        let t_hi = (p - r) / (q - r);
        let t_lo = (q - p) / (q - r);
        0.5 * (t_hi * log_norm_sq(q) + t_lo * log_norm_sq(r))
    };
    let slack = (rhs_log - lhs_log).exp();
    Ok(InterpolationReport { holds: slack >= 1.0 - INTERPOLATION_GUARD, slack })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn model_sequences_match_formulas() {
        let pi = std::f64::consts::PI;
        assert_eq!(Linear.eigenvalue(7), 7.0);
        assert!((Dirichlet1d.eigenvalue(3) - (3.0 * pi).powi(2)).abs() < 1e-9);
        assert!((Bilaplacian1d.eigenvalue(2) - (2.0 * pi).powi(4)).abs() < 1e-8);
        let g = Geometric::new(0.5, 3.0).unwrap();
        assert!((g.eigenvalue(4) - 0.5 * 81.0).abs() < 1e-12);
    }

    #[test]
    fn models_are_increasing_and_positive() {
        for model in builtin_models() {
            let mut prev = 0.0;
            for n in 1..=40 {
                let mu = model.eigenvalue(n);
                assert!(mu > prev, "{} not increasing at n = {n}", model.name());
                prev = mu;
            }
        }
    }

    #[test]
    fn registry_round_trips_names() {
        for name in ["linear", "dirichlet-1d", "bilaplacian-1d", "geometric:1:2"] {
            let model = model_by_name(name).unwrap();
            assert_eq!(model.name(), name);
            assert!(model.eigenvalue(1) > 0.0);
        }
        assert!(model_by_name("geometric").is_ok());
        assert!(matches!(
            model_by_name("weyl-2d"),
            Err(Error::UnknownModel { .. })
        ));
        assert!(model_by_name("geometric:1:0.5").is_err()); // ratio must exceed 1
    }

    #[test]
    fn equal_orders_give_unit_slack() {
        let x = [0.3, -0.7, 0.2];
        let rep = interpolation_check(&Dirichlet1d, &x, 1.5, 1.5, 1.5).unwrap();
        assert!(rep.holds);
        assert!((rep.slack - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_mode_is_tight() {
        let mut x = vec![0.0; 20];
        x[13] = 2.5;
        let rep = interpolation_check(&Bilaplacian1d, &x, 1.0, 2.0, 0.0).unwrap();
        assert!(rep.holds);
        assert!((rep.slack - 1.0).abs() < 1e-10, "slack {}", rep.slack);
    }

    #[test]
    fn random_two_mode_vectors_never_violate() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let mut x = vec![0.0; 50];
            let i = rng.gen_range(0..50);
            let mut j = rng.gen_range(0..50);
            while j == i {
                j = rng.gen_range(0..50);
            }
            x[i] = rng.gen_range(-1.0..1.0f64);
            x[j] = rng.gen_range(-1.0..1.0f64);
            if x[i] == 0.0 || x[j] == 0.0 {
                continue;
            }
            let rep = interpolation_check(&Dirichlet1d, &x, 1.0, 2.0, 0.0).unwrap();
            assert!(rep.holds, "slack {} on modes ({i}, {j})", rep.slack);
        }
    }

    #[test]
    fn zero_vector_is_rejected() {
        let x = [0.0; 4];
        assert!(matches!(
            interpolation_check(&Linear, &x, 1.0, 2.0, 0.0),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn disordered_orders_are_rejected() {
        let x = [1.0, 2.0];
        assert!(interpolation_check(&Linear, &x, 2.0, 1.0, 0.0).is_err());
    }
}
