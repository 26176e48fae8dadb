//! Classification and numerical verification of smoothing and decay classes
//! for an indirectly damped pair of coupled second-order evolution equations.
//!
//! The library has three layers:
//!
//! * **Classification** ([`params`], [`region`], [`partition`], [`stability`]):
//!   exact predicate arithmetic over the exponent parameters deciding the
//!   smoothing class (analytic / Gevrey with sharp order / not differentiable)
//!   and the decay class (exponential / polynomial with order / strong).
//! * **Modal spectra** ([`quartic`], [`roots`], [`sweep`], [`expansion`],
//!   [`polygon`]): the per-mode characteristic quartic, certified root
//!   finding, branch-tracked sweeps over the mode parameter, Newton-polygon
//!   driven asymptotic expansions of the spectral branches.
//! * **Operator-level checks** ([`resolvent`], [`spectral`]): resolvent-norm
//!   growth along the imaginary axis against pluggable mode sequences,
//!   reproducing the smoothing class from norms alone.
//!
//! Supporting utilities: [`fit`] (log-log power-law fitting), [`sampling`]
//! (deterministic low-discrepancy points), [`dd`] (double-double arithmetic
//! for root polishing), [`error`].

pub mod dd;
pub mod error;
pub mod expansion;
pub mod fit;
pub mod params;
pub mod partition;
pub mod polygon;
pub mod quartic;
pub mod region;
pub mod resolvent;
pub mod roots;
pub mod sampling;
pub mod spectral;
pub mod stability;
pub mod sweep;

pub use error::{Error, Result};
pub use params::Params;
pub use partition::{partition_cell, PartitionCell};
pub use region::{
    classify_regularity, in_regularity_domain, DomainTag, Region, RegularityKind,
    RegularityVerdict,
};
pub use resolvent::{
    continuous_resolvent_norm, criterion_check, modal_resolvent_norm, resolvent_curve,
    resolvent_norm, CriterionReport, ResolventCurve,
};
pub use spectral::{interpolation_check, model_by_name, SpectralModel};
pub use stability::{stability_order, DecayKind, StabilityInfo, StabilityRegion};
