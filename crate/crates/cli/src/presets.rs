//! Bundled one-parameter sweeps.
//!
//! Each preset fixes all but one exponent of the coupled system and sweeps
//! the remaining one across its admissible range, reproducing the canonical
//! regularity transitions: never-differentiable plateaus, Gevrey windows
//! with moving order, and isolated analytic points.  Breakpoints pin the
//! exact parameter values where the verdict or the order formula changes so
//! a coarse sweep still lands on them.

use gevrey_core::Params;

/// Which exponent a preset sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Alpha,
    Beta,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::Alpha => "alpha",
            SweepAxis::Beta => "beta",
        }
    }
}

/// One bundled sweep configuration.
#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub axis: SweepAxis,
    pub lo: f64,
    pub hi: f64,
    /// Fixed coupling order; ignored when `axis` is `Alpha`.
    pub alpha: f64,
    /// Fixed damping order; ignored when `axis` is `Beta`.
    pub beta: f64,
    pub gamma: f64,
    /// Speed ratio used unless overridden on the command line.
    pub default_a: f64,
    /// Axis values where the verdict or its order formula changes.
    pub breakpoints: &'static [f64],
}

pub static PRESETS: [Preset; 6] = [
    Preset {
        name: "gamma2-beta1-alpha",
        summary: "gamma = 2, beta = 1: coupling-order sweep, alpha in [0, 1.5]",
        axis: SweepAxis::Alpha,
        lo: 0.0,
        hi: 1.5,
        alpha: f64::NAN,
        beta: 1.0,
        gamma: 2.0,
        default_a: 2.0,
        breakpoints: &[0.5, 1.0],
    },
    Preset {
        name: "gamma-half-alpha",
        summary: "gamma = beta = 1/2: coupling-order sweep, alpha in [0, 0.75] \
                  (never differentiable throughout)",
        axis: SweepAxis::Alpha,
        lo: 0.0,
        hi: 0.75,
        alpha: f64::NAN,
        beta: 0.5,
        gamma: 0.5,
        default_a: 2.0,
        breakpoints: &[],
    },
    Preset {
        name: "gamma2-alpha1-beta",
        summary: "gamma = 2, alpha = 1: damping-order sweep, beta in [0, 1]",
        axis: SweepAxis::Beta,
        lo: 0.0,
        hi: 1.0,
        alpha: 1.0,
        beta: f64::NAN,
        gamma: 2.0,
        default_a: 2.0,
        breakpoints: &[],
    },
    Preset {
        name: "half-half-beta",
        summary: "gamma = alpha = 1/2: damping-order sweep, beta in [0, 1]",
        axis: SweepAxis::Beta,
        lo: 0.0,
        hi: 1.0,
        alpha: 0.5,
        beta: f64::NAN,
        gamma: 0.5,
        default_a: 2.0,
        breakpoints: &[0.5, 0.75],
    },
    Preset {
        name: "same-speed-half",
        summary: "a = gamma = 1, alpha = 1/2: damping-order sweep, beta in [0, 1]",
        axis: SweepAxis::Beta,
        lo: 0.0,
        hi: 1.0,
        alpha: 0.5,
        beta: f64::NAN,
        gamma: 1.0,
        default_a: 1.0,
        breakpoints: &[0.5],
    },
    Preset {
        name: "same-speed-quarter",
        summary: "a = gamma = 1, alpha = 1/4: damping-order sweep, beta in [0, 1]",
        axis: SweepAxis::Beta,
        lo: 0.0,
        hi: 1.0,
        alpha: 0.25,
        beta: f64::NAN,
        gamma: 1.0,
        default_a: 1.0,
        breakpoints: &[0.25, 0.5],
    },
];

pub fn preset_by_name(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

/// Axis values for a sweep: multiples of `step` from `lo`, the endpoint,
/// and every breakpoint, sorted and deduplicated.
pub fn sweep_values(preset: &Preset, step: f64) -> Vec<f64> {
    let mut vals = Vec::new();
    let mut i = 0u64;
    loop {
        // Snap accumulated rounding onto a decimal grid so axis values
        // print cleanly and hit breakpoints exactly.
        let v = ((preset.lo + step * i as f64) * 1e10).round() / 1e10;
        if v > preset.hi + 1e-12 {
            break;
        }
        vals.push(v.min(preset.hi));
        i += 1;
    }
    vals.push(preset.hi);
    vals.extend_from_slice(preset.breakpoints);
    vals.sort_by(f64::total_cmp);
    vals.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    vals
}

/// Materialize the parameter point at one axis value.
pub fn preset_point(preset: &Preset, value: f64, a: f64) -> gevrey_core::Result<Params> {
    match preset.axis {
        SweepAxis::Alpha => Params::new(value, preset.beta, preset.gamma, a),
        SweepAxis::Beta => Params::new(preset.alpha, value, preset.gamma, a),
    }
}
