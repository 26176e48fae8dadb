//! Symbolic asymptotic expansions of the spectral branches as `mu -> infinity`.
//!
//! The modal quartic's coefficients are sums of monomials in `mu`, so its
//! roots admit expansions `lambda(mu) = c1 mu^{q1} + c2 mu^{q2} + ...` with
//! strictly decreasing (generally non-integer) powers. This module computes
//! those expansions exactly in the exponent arithmetic:
//!
//! 1. the Newton polygon of the coefficient exponents splits the four roots
//!    into magnitude groups (one polygon edge each),
//! 2. each edge's scaled limit polynomial supplies the leading coefficients,
//! 3. simple leading roots are refined term by term with a Newton iteration
//!    in truncated power-series arithmetic, and
//! 4. multiple leading roots (coincident branches) are separated by shifting
//!    and recursing on the sub-polygon — the classical Puiseux construction.
//!
//! Expansions drive two consumers: predicted branch curves checked against
//! the numeric sweeps, and per-cell structural signatures (which powers
//! appear, where the first damping term sits) that stay constant inside a
//! partition cell and change across printed cell boundaries.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::partition::{partition_cell, PartitionCell};
use crate::polygon::{newton_polygon, ExponentPoint};
use crate::quartic::quartic_ledger;
use crate::sampling::unit_square_point;

/// Powers closer than this are grouped into one series term.
pub const POWER_TOL: f64 = 1e-9;
/// A grouped coefficient below this fraction of its summed contributions is
/// treated as an exact cancellation and dropped.
pub const CANCELLATION_TOL: f64 = 1e-12;
/// Hard cap on series length (guards pathological growth only).
const MAX_SERIES_TERMS: usize = 128;
/// Maximum Puiseux recursion depth (levels of coincident-branch splitting).
const MAX_SPLIT_DEPTH: usize = 6;
/// Relative threshold for "this term carries a real part".
const REAL_PART_TOL: f64 = 1e-9;

/// Truncated generalized power series `sum_i coeff_i * mu^{power_i}` with
/// strictly decreasing powers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerSeries {
    /// `(coefficient, power)`, powers strictly decreasing.
    pub terms: Vec<(Complex64, f64)>,
}

impl PowerSeries {
    pub fn zero() -> PowerSeries {
        PowerSeries { terms: Vec::new() }
    }

    pub fn monomial(coeff: Complex64, power: f64) -> PowerSeries {
        if coeff == Complex64::new(0.0, 0.0) {
            PowerSeries::zero()
        } else {
            PowerSeries { terms: vec![(coeff, power)] }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(Complex64, f64)> {
        self.terms.first().copied()
    }

    /// Normalize a raw term list: sort by descending power, group powers
    /// within [`POWER_TOL`], drop groups that cancel to numerical noise.
    fn normalize(mut raw: Vec<(Complex64, f64)>) -> PowerSeries {
        raw.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        let mut terms: Vec<(Complex64, f64)> = Vec::new();
        let mut i = 0;
        while i < raw.len() {
            let power = raw[i].1;
            let mut sum = Complex64::new(0.0, 0.0);
            let mut weight = 0.0;
            let mut j = i;
            while j < raw.len() && (power - raw[j].1).abs() <= POWER_TOL {
                sum += raw[j].0;
                weight += raw[j].0.norm();
                j += 1;
            }
            if sum.norm() > CANCELLATION_TOL * weight {
                terms.push((sum, power));
            }
            i = j;
        }
        terms.truncate(MAX_SERIES_TERMS);
        PowerSeries { terms }
    }

    pub fn add(&self, rhs: &PowerSeries) -> PowerSeries {
        let mut raw = self.terms.clone();
        raw.extend_from_slice(&rhs.terms);
        PowerSeries::normalize(raw)
    }

    pub fn mul(&self, rhs: &PowerSeries) -> PowerSeries {
        let mut raw = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for &(ca, pa) in &self.terms {
            for &(cb, pb) in &rhs.terms {
                raw.push((ca * cb, pa + pb));
            }
        }
        PowerSeries::normalize(raw)
    }

    pub fn scale(&self, c: Complex64) -> PowerSeries {
        if c == Complex64::new(0.0, 0.0) {
            return PowerSeries::zero();
        }
        PowerSeries { terms: self.terms.iter().map(|&(ci, pi)| (c * ci, pi)).collect() }
    }

    pub fn pow(&self, n: usize) -> PowerSeries {
        let mut out = PowerSeries::monomial(Complex64::new(1.0, 0.0), 0.0);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Numeric evaluation at a concrete `mu > 0`.
    pub fn eval(&self, mu: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(c, p) in &self.terms {
            acc += c * mu.powf(p);
        }
        acc
    }
}

/// One asymptotic spectral branch.
#[derive(Debug, Clone, Serialize)]
pub struct BranchExpansion {
    /// Series terms, powers strictly decreasing.
    pub terms: Vec<(Complex64, f64)>,
    /// The series is an exact root (the residual vanished identically).
    pub exact: bool,
    /// Power of the first term carrying a nonzero real part, if found.
    pub real_power: Option<f64>,
    /// Coefficient of that term.
    pub real_coeff: Option<Complex64>,
}

impl BranchExpansion {
    pub fn eval(&self, mu: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(c, p) in &self.terms {
            acc += c * mu.powf(p);
        }
        acc
    }

    pub fn leading_power(&self) -> f64 {
        self.terms.first().map(|t| t.1).unwrap_or(f64::NEG_INFINITY)
    }

    fn scan_real(&mut self) {
        for &(c, p) in &self.terms {
            if c.re.abs() > REAL_PART_TOL * c.norm() {
                self.real_power = Some(p);
                self.real_coeff = Some(c);
                return;
            }
        }
    }
}

/// One leading magnitude group: an edge of the coefficient polygon together
/// with its scaled limit polynomial and that polynomial's nonzero roots.
#[derive(Debug, Clone, Serialize)]
pub struct LeadingBalance {
    /// Roots in this group scale like `mu^{root_exponent}`.
    pub root_exponent: f64,
    /// Number of roots in the group.
    pub span: usize,
    /// `(degree, coefficient)` of the scaled limit polynomial (degrees lying
    /// on the polygon edge only).
    pub coefficients: Vec<(u32, f64)>,
    /// Nonzero roots of the limit polynomial, listed with multiplicity.
    pub scaled_roots: Vec<Complex64>,
}

/// Coefficients of the quartic as power series in `mu` (index = degree).
fn coefficient_series(p: &Params) -> [PowerSeries; 5] {
    let ledger = quartic_ledger(p);
    let mut out: [PowerSeries; 5] = std::array::from_fn(|_| PowerSeries::zero());
    for (d, terms) in ledger.iter().enumerate() {
        let raw: Vec<(Complex64, f64)> =
            terms.iter().map(|m| (Complex64::new(m.coeff, 0.0), m.power)).collect();
        out[d] = PowerSeries::normalize(raw);
    }
    out
}

/// Evaluate `sum_d binom(d, j) C_d x^{d-j}` — the `j`-th derivative of the
/// polynomial divided by `j!` — in series arithmetic.
fn poly_derivative_at(coeffs: &[PowerSeries], j: usize, x: &PowerSeries) -> PowerSeries {
    let mut acc = PowerSeries::zero();
    let mut xp = PowerSeries::monomial(Complex64::new(1.0, 0.0), 0.0);
    let mut cached: Vec<PowerSeries> = vec![xp.clone()];
    for d in j..coeffs.len() {
        while cached.len() <= d - j {
            xp = cached.last().unwrap().mul(x);
            cached.push(xp.clone());
        }
        let b = binomial(d, j) as f64;
        if b != 0.0 && !coeffs[d].is_zero() {
            acc = acc.add(&coeffs[d].scale(Complex64::new(b, 0.0)).mul(&cached[d - j]));
        }
    }
    acc
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut r: u64 = 1;
    for i in 0..k.min(n - k) {
        r = r * (n - i) as u64 / (i + 1) as u64;
    }
    r
}

/// Roots (with multiplicity) of a complex polynomial of degree <= 4 given by
/// ascending coefficients. Multiple roots are sharpened by Newton iteration
/// on the appropriate derivative so cluster centers are machine-accurate.
fn small_poly_roots(coeffs: &[Complex64]) -> Result<Vec<(Complex64, usize)>> {
    // Trim trailing (leading-degree) zeros.
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().map_or(false, |z| z.norm() == 0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        return Err(Error::DegenerateBalance(
            "limit polynomial has no roots (degree zero)".into(),
        ));
    }
    let deg = c.len() - 1;
    // Count zero roots (ascending zeros at the bottom).
    let mut zero_mult = 0;
    while zero_mult < deg && c[zero_mult].norm() == 0.0 {
        zero_mult += 1;
    }
    let reduced = &c[zero_mult..];
    let rdeg = reduced.len() - 1;
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    if zero_mult > 0 {
        out.push((Complex64::new(0.0, 0.0), zero_mult));
    }
    match rdeg {
        0 => {}
        1 => out.push((-reduced[0] / reduced[1], 1)),
        2 => {
            let (a, b, cc) = (reduced[2], reduced[1], reduced[0]);
            let disc = b * b - 4.0 * a * cc;
            let scale = (b.norm_sqr()).max((4.0 * a * cc).norm());
            if disc.norm() <= 1e-12 * scale {
                out.push((-b / (2.0 * a), 2));
            } else {
                let sq = disc.sqrt();
                // Stable: pick the sign that avoids cancellation.
                let q = if (b + sq).norm() >= (b - sq).norm() { b + sq } else { b - sq };
                let r1 = -q / (2.0 * a);
                let r2 = cc / (a * r1);
                out.push((r1, 1));
                out.push((r2, 1));
            }
        }
        _ => {
            out.extend(durand_kerner(reduced)?);
        }
    }
    Ok(out)
}

/// Durand–Kerner iteration for degree 3 or 4 with clustering and
/// multiplicity-aware polishing.
fn durand_kerner(coeffs: &[Complex64]) -> Result<Vec<(Complex64, usize)>> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let monic: Vec<Complex64> = coeffs.iter().map(|&z| z / lead).collect();
    let radius = monic
        .iter()
        .take(deg)
        .enumerate()
        .map(|(i, z)| z.norm().powf(1.0 / (deg - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-6)
        * 1.2;
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|i| seed.powu(i as u32 + 1) / seed.norm().powi(i as i32 + 1) * radius)
        .collect();
    let eval = |x: Complex64| -> Complex64 {
        let mut acc = monic[deg];
        for i in (0..deg).rev() {
            acc = acc * x + monic[i];
        }
        acc
    };
    for _ in 0..600 {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for k in 0..deg {
                if k != i {
                    denom *= z[i] - z[k];
                }
            }
            if denom.norm() < 1e-300 {
                continue;
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    // Cluster with a loose tolerance (multiple roots converge slowly).
    let scale = z.iter().map(|w| w.norm()).fold(0.0f64, f64::max).max(1.0);
    let mut used = vec![false; deg];
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for i in 0..deg {
        if used[i] {
            continue;
        }
        let mut members = vec![z[i]];
        used[i] = true;
        for k in (i + 1)..deg {
            if !used[k] && (z[k] - z[i]).norm() <= 1e-4 * scale {
                members.push(z[k]);
                used[k] = true;
            }
        }
        let mean = members.iter().sum::<Complex64>() / members.len() as f64;
        clusters.push((mean, members.len()));
    }
    // Polish each cluster center: a root of multiplicity m is a simple root
    // of the (m-1)-th derivative.
    for (center, mult) in clusters.iter_mut() {
        let mut d: Vec<Complex64> = monic.clone();
        for _ in 0..*mult - 1 {
            d = derivative_coeffs(&d);
        }
        for _ in 0..40 {
            let dd = derivative_coeffs(&d);
            let f = horner(&d, *center);
            let fp = horner(&dd, *center);
            if fp.norm() < 1e-300 {
                break;
            }
            let step = f / fp;
            *center -= step;
            if step.norm() <= 1e-16 * (1.0 + center.norm()) {
                break;
            }
        }
        // Certify against the original polynomial.
        let denom: f64 = monic.iter().enumerate().map(|(i, c)| c.norm() * center.norm().powi(i as i32)).sum();
        let resid = horner(&monic, *center).norm() / denom.max(1e-300);
        if resid > 1e-6 {
            return Err(Error::NoConvergence { residual: resid, iterations: 600 });
        }
    }
    Ok(clusters)
}

fn derivative_coeffs(c: &[Complex64]) -> Vec<Complex64> {
    c.iter().enumerate().skip(1).map(|(i, z)| z * i as f64).collect()
}

fn horner(c: &[Complex64], x: Complex64) -> Complex64 {
    let mut acc = *c.last().unwrap();
    for i in (0..c.len() - 1).rev() {
        acc = acc * x + c[i];
    }
    acc
}

/// The leading magnitude groups of the quartic's roots: polygon edges,
/// scaled limit polynomials, and their nonzero roots.
pub fn leading_balance(p: &Params) -> Result<Vec<LeadingBalance>> {
    let coeffs = coefficient_series(p);
    balances_of(&coeffs, None)
}

/// Polygon edges and limit-polynomial roots for a coefficient-series
/// polynomial. With a `cutoff`, keep only edges whose root exponent lies
/// strictly below it (corrections must descend below the expansion built so
/// far — edges at or above the cutoff describe *other* branch clusters).
fn balances_of(coeffs: &[PowerSeries], cutoff: Option<f64>) -> Result<Vec<LeadingBalance>> {
    let pts: Vec<ExponentPoint> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .map(|(d, s)| ExponentPoint { degree: d as u32, exponent: s.leading().unwrap().1 })
        .collect();
    if pts.len() < 2 {
        return Err(Error::DegenerateBalance(
            "polynomial has fewer than two surviving coefficients".into(),
        ));
    }
    let segments = newton_polygon(&pts);
    let mut out = Vec::new();
    for seg in &segments {
        if let Some(cut) = cutoff {
            if seg.root_exponent >= cut - POWER_TOL {
                continue;
            }
        }
        // Collect on-edge coefficients: monomials of C_d at the edge level.
        let mut poly: Vec<Complex64> = Vec::new();
        let d_lo = seg.from.degree as usize;
        let d_hi = seg.to.degree as usize;
        let mut edge_coeffs = Vec::new();
        for d in d_lo..=d_hi {
            let level = seg.edge_level(d as u32);
            let mut c = Complex64::new(0.0, 0.0);
            for &(coeff, power) in &coeffs[d].terms {
                if (power - level).abs() <= POWER_TOL {
                    c += coeff;
                }
            }
            poly.push(c);
            if c.norm() > 0.0 {
                edge_coeffs.push((d as u32, c.re));
            }
        }
        // poly is indexed by d - d_lo; its roots are the scaled leading
        // coefficients for this group (zero roots belong to other edges).
        let roots = small_poly_roots(&poly)?;
        let mut scaled = Vec::new();
        for (r, m) in roots {
            if r.norm() > 0.0 {
                for _ in 0..m {
                    scaled.push(r);
                }
            }
        }
        out.push(LeadingBalance {
            root_exponent: seg.root_exponent,
            span: seg.span as usize,
            coefficients: edge_coeffs,
            scaled_roots: scaled,
        });
    }
    Ok(out)
}

/// Stopping policy for the term-by-term refinement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RefineStop {
    /// Run until the first real-part-carrying term appears (at least two
    /// terms total); error with `DepthExhausted` if the budget runs out
    /// first.
    DampingTerm,
    /// Produce exactly the budgeted number of terms (fewer only if the
    /// series closes exactly); never insist on a damping term.
    FixedTerms,
}

/// Expand all four spectral branches to at most `depth` terms each,
/// stopping a branch early once its first real-part-carrying term has
/// appeared (and at least two terms are present). Fails with
/// `DepthExhausted` when a branch's damping term lies deeper than the
/// budget.
pub fn expand_roots(p: &Params, depth: usize) -> Result<Vec<BranchExpansion>> {
    expand_roots_impl(p, depth, RefineStop::DampingTerm)
}

/// Expand all four spectral branches to exactly `terms` terms each (fewer
/// only when a branch closes exactly), without requiring a damping term to
/// appear. This is the right tool for structural fingerprints: the power
/// ladder is recorded whether or not the (possibly very deep) damping term
/// was reached.
pub fn expand_roots_fixed(p: &Params, terms: usize) -> Result<Vec<BranchExpansion>> {
    expand_roots_impl(p, terms, RefineStop::FixedTerms)
}

fn expand_roots_impl(p: &Params, depth: usize, stop: RefineStop) -> Result<Vec<BranchExpansion>> {
    if depth < 2 {
        return Err(Error::InvalidParams(format!("expansion depth {depth} must be >= 2")));
    }
    let coeffs = coefficient_series(p);
    let pts: Vec<ExponentPoint> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .map(|(d, s)| ExponentPoint { degree: d as u32, exponent: s.leading().unwrap().1 })
        .collect();
    let segments = newton_polygon(&pts);
    let mut out = Vec::new();
    for seg in &segments {
        let mut poly: Vec<Complex64> = Vec::new();
        let d_lo = seg.from.degree as usize;
        let d_hi = seg.to.degree as usize;
        for d in d_lo..=d_hi {
            let level = seg.edge_level(d as u32);
            let mut c = Complex64::new(0.0, 0.0);
            for &(coeff, power) in &coeffs[d].terms {
                if (power - level).abs() <= POWER_TOL {
                    c += coeff;
                }
            }
            poly.push(c);
        }
        for (w0, mult) in small_poly_roots(&poly)? {
            if w0.norm() == 0.0 {
                continue; // other edges own the smaller roots
            }
            let x0 = PowerSeries::monomial(w0, seg.root_exponent);
            if mult == 1 {
                out.push(newton_refine(&coeffs, x0, depth, stop)?);
            } else {
                split_cluster(&coeffs, x0, mult, depth, stop, 0, &mut out)?;
            }
        }
    }
    if out.len() != 4 {
        return Err(Error::DegenerateBalance(format!(
            "expected 4 branch expansions, constructed {}",
            out.len()
        )));
    }
    Ok(out)
}

/// Separate `mult` coincident branches around the partial expansion `x0` by
/// shifting `lambda = x0 + t` and recursing on the sub-polygon in `t`.
fn split_cluster(
    coeffs: &[PowerSeries],
    x0: PowerSeries,
    mult: usize,
    depth: usize,
    stop: RefineStop,
    level: usize,
    out: &mut Vec<BranchExpansion>,
) -> Result<()> {
    if level >= MAX_SPLIT_DEPTH {
        return Err(Error::DepthExhausted(format!(
            "coincident branches not separated after {MAX_SPLIT_DEPTH} splitting levels"
        )));
    }
    // Shifted polynomial Q(t) = sum_j B_j t^j, B_j = P^(j)(x0)/j!. The shift
    // variable t is absolute, so valid corrections are the sub-polygon edges
    // whose root exponent descends below the last power already in x0.
    let cutoff = x0.terms.last().map(|t| t.1).unwrap_or(f64::INFINITY);
    let shifted: Vec<PowerSeries> =
        (0..coeffs.len()).map(|j| poly_derivative_at(coeffs, j, &x0)).collect();
    if shifted[0].is_zero() {
        // x0 is already an exact root; t = 0 closes this branch.
        let mut done = BranchExpansion {
            terms: x0.terms.clone(),
            exact: true,
            real_power: None,
            real_coeff: None,
        };
        done.scan_real();
        out.push(done);
        if mult > 1 {
            // Remaining cluster members continue through nonzero edges.
            let balances = balances_of(&shifted, Some(cutoff))?;
            let mut remaining = mult - 1;
            for bal in balances {
                for w in dedup_with_mult(&bal.scaled_roots) {
                    if remaining == 0 {
                        break;
                    }
                    let taken = w.1.min(remaining);
                    remaining -= taken;
                    extend_branch(coeffs, &x0, w.0, bal.root_exponent, taken, depth, stop, level, out)?;
                }
            }
            if remaining > 0 {
                return Err(Error::DegenerateBalance(format!(
                    "{remaining} coincident branches found no descending correction"
                )));
            }
        }
        return Ok(());
    }
    let balances = balances_of(&shifted, Some(cutoff))?;
    let mut remaining = mult;
    for bal in balances {
        for (w, m) in dedup_with_mult(&bal.scaled_roots) {
            if remaining == 0 {
                break;
            }
            let taken = m.min(remaining);
            remaining -= taken;
            extend_branch(coeffs, &x0, w, bal.root_exponent, taken, depth, stop, level, out)?;
        }
    }
    if remaining > 0 {
        return Err(Error::DegenerateBalance(format!(
            "{remaining} coincident branches found no descending correction"
        )));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn extend_branch(
    coeffs: &[PowerSeries],
    x0: &PowerSeries,
    w: Complex64,
    exponent_shift: f64,
    mult: usize,
    depth: usize,
    stop: RefineStop,
    level: usize,
    out: &mut Vec<BranchExpansion>,
) -> Result<()> {
    // The correction is relative to the absolute scale of the shift variable:
    // t ~ w * mu^{exponent_shift} in absolute terms (the sub-polygon is built
    // on the absolute shifted polynomial, so exponents are absolute already).
    let term = PowerSeries::monomial(w, exponent_shift);
    let x1 = x0.add(&term);
    if mult == 1 {
        out.push(newton_refine(coeffs, x1, depth, stop)?);
    } else {
        split_cluster(coeffs, x1, mult, depth, stop, level + 1, out)?;
    }
    Ok(())
}

fn dedup_with_mult(roots: &[Complex64]) -> Vec<(Complex64, usize)> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    let scale = roots.iter().map(|z| z.norm()).fold(0.0f64, f64::max).max(1e-300);
    for &r in roots {
        if let Some(entry) =
            out.iter_mut().find(|(c, _)| (*c - r).norm() <= 1e-9 * scale)
        {
            entry.1 += 1;
        } else {
            out.push((r, 1));
        }
    }
    out
}

/// Term-by-term Newton iteration in series arithmetic from a separated
/// partial expansion.
fn newton_refine(
    coeffs: &[PowerSeries],
    mut x: PowerSeries,
    depth: usize,
    stop: RefineStop,
) -> Result<BranchExpansion> {
    let mut exact = false;
    loop {
        let mut done = BranchExpansion {
            terms: x.terms.clone(),
            exact,
            real_power: None,
            real_coeff: None,
        };
        done.scan_real();
        if exact
            || (stop == RefineStop::DampingTerm
                && done.real_power.is_some()
                && x.terms.len() >= 2)
        {
            return Ok(done);
        }
        if x.terms.len() >= depth {
            if stop == RefineStop::FixedTerms || done.real_power.is_some() {
                return Ok(done);
            }
            return Err(Error::DepthExhausted(format!(
                "no damping term within {depth} expansion terms (last powers {:?})",
                x.terms.iter().map(|t| t.1).collect::<Vec<_>>()
            )));
        }
        let f = poly_derivative_at(coeffs, 0, &x);
        if f.is_zero() {
            exact = true;
            continue;
        }
        let fp = poly_derivative_at(coeffs, 1, &x);
        let (fc, fq) = f.leading().unwrap();
        let (dc, dq) = match fp.leading() {
            Some(t) => t,
            None => {
                return Err(Error::DepthExhausted(
                    "derivative vanished during refinement (unseparated cluster?)".into(),
                ))
            }
        };
        let q = fq - dq;
        let last_power = x.terms.last().unwrap().1;
        if q >= last_power - POWER_TOL {
            return Err(Error::DepthExhausted(format!(
                "refinement stalled: correction power {q} does not descend below {last_power}"
            )));
        }
        x = x.add(&PowerSeries::monomial(-fc / dc, q));
    }
}

/// Structural fingerprint of the branch expansions at one parameter point,
/// with its local affine model in `(alpha, beta)`.
///
/// The fingerprint records, per branch, the leading term (oscillation scale)
/// and the leading real-part term (damping scale). Inside one partition cell
/// these are uniform: the powers are affine functions of `(alpha, beta)` and
/// the coefficients are constants. The *intermediate* correction ladder is
/// deliberately excluded — which imaginary correction comes next is a
/// `max()` of competing affine forms whose order may switch inside a cell
/// without changing the oscillation/damping asymptotics.
#[derive(Debug, Clone, Serialize)]
pub struct CellSignature {
    pub cell: PartitionCell,
    /// Per branch (canonically ordered): `0` if the branch carries a damping
    /// term, `1` if it closed exactly with no real part.
    pub structure: Vec<usize>,
    /// Affine models `[value_at_anchor, grad_alpha, grad_beta]` for each
    /// recorded scalar. Per branch these are the leading power, leading
    /// coefficient (re, im), and — for damped branches — the damping power
    /// and damping coefficient.
    pub affine: Vec<[f64; 3]>,
    /// Anchor point `(alpha, beta)` the values refer to.
    pub anchor: (f64, f64),
}

/// Scalars recorded per expansion set, in canonical branch order.
fn signature_scalars(expansions: &[BranchExpansion]) -> (Vec<usize>, Vec<f64>) {
    let mut order: Vec<usize> = (0..expansions.len()).collect();
    order.sort_by(|&i, &j| {
        let a = &expansions[i];
        let b = &expansions[j];
        b.leading_power()
            .partial_cmp(&a.leading_power())
            .unwrap()
            .then(
                a.terms
                    .first()
                    .map(|t| t.0.im)
                    .unwrap_or(0.0)
                    .partial_cmp(&b.terms.first().map(|t| t.0.im).unwrap_or(0.0))
                    .unwrap(),
            )
            .then(
                a.terms
                    .first()
                    .map(|t| t.0.re)
                    .unwrap_or(0.0)
                    .partial_cmp(&b.terms.first().map(|t| t.0.re).unwrap_or(0.0))
                    .unwrap(),
            )
    });
    let mut structure = Vec::new();
    let mut scalars = Vec::new();
    for &i in &order {
        let e = &expansions[i];
        let (c, q) = e.terms.first().copied().unwrap_or((Complex64::new(0.0, 0.0), 0.0));
        scalars.push(q);
        scalars.push(c.re);
        scalars.push(c.im);
        match (e.real_power, e.real_coeff) {
            (Some(r), Some(d)) => {
                structure.push(0);
                scalars.push(r);
                scalars.push(d.re);
            }
            _ => structure.push(1),
        }
    }
    (structure, scalars)
}

/// Tolerance for affine-model agreement inside a cell and for deciding that
/// two cells' fingerprints differ.
pub const SIGNATURE_TOL: f64 = 1e-4;
/// Finite-difference step for the affine model.
pub const SIGNATURE_STEP: f64 = 1e-3;
/// Validation residual allowed when checking the affine model at the
/// diagonal probe point.
pub const AFFINE_VALIDATION_TOL: f64 = 1e-6;

/// Sample a partition cell's expansion fingerprint and verify it is constant
/// (as an affine family) across the cell.
///
/// `base` supplies `(gamma, a, b, k)`; `alpha, beta` are sampled inside the
/// cell. `depth` is the per-branch term budget for reaching the damping term
/// (deep cells need a generous budget — the ladder of imaginary corrections
/// above the damping term can be long). Fails with `SignatureMismatch` if
/// the structure or the affine model changes between samples, i.e. if the
/// cell is *not* asymptotically uniform.
pub fn cell_uniformity_scan(
    cell: PartitionCell,
    base: &Params,
    samples: usize,
    depth: usize,
) -> Result<CellSignature> {
    if samples == 0 {
        return Err(Error::InvalidParams("need at least one sample".into()));
    }
    let h = SIGNATURE_STEP;
    let (al_max, be_max) = if base.same_speed() {
        (1.0, 1.0)
    } else {
        ((base.gamma + 1.0) / 2.0, 1.0)
    };
    let probe = |al: f64, be: f64| -> Result<Params> {
        Params::with_coupling(al, be, base.gamma, base.a, base.b, base.k)
    };
    let in_cell = |al: f64, be: f64| -> bool {
        if al <= 0.0 || be <= 0.0 || al >= al_max || be >= be_max {
            return false;
        }
        match probe(al, be) {
            Ok(q) => partition_cell(&q).map_or(false, |c| c == cell),
            Err(_) => false,
        }
    };

    let mut reference: Option<CellSignature> = None;
    let mut found = 0usize;
    let mut attempt = 0usize;
    while found < samples {
        attempt += 1;
        if attempt > 200_000 {
            return Err(Error::InsufficientData { got: found, need: samples });
        }
        let (u, v) = unit_square_point(7, attempt as u64);
        let al = u * al_max;
        let be = v * be_max;
        // The whole finite-difference triangle plus the validation point
        // must sit inside the cell.
        if !(in_cell(al, be)
            && in_cell(al + h, be)
            && in_cell(al, be + h)
            && in_cell(al + h, be + h))
        {
            continue;
        }
        found += 1;
        let e00 = expand_roots(&probe(al, be)?, depth)?;
        let e10 = expand_roots(&probe(al + h, be)?, depth)?;
        let e01 = expand_roots(&probe(al, be + h)?, depth)?;
        let e11 = expand_roots(&probe(al + h, be + h)?, depth)?;
        let (s00, v00) = signature_scalars(&e00);
        let (s10, v10) = signature_scalars(&e10);
        let (s01, v01) = signature_scalars(&e01);
        let (s11, v11) = signature_scalars(&e11);
        if s00 != s10 || s00 != s01 || s00 != s11 {
            return Err(Error::SignatureMismatch(format!(
                "{cell}: expansion structure varies within the finite-difference triangle at \
                 (alpha, beta) = ({al:.6}, {be:.6})"
            )));
        }
        let mut affine = Vec::with_capacity(v00.len());
        for i in 0..v00.len() {
            let ga = (v10[i] - v00[i]) / h;
            let gb = (v01[i] - v00[i]) / h;
            let predicted = v00[i] + ga * h + gb * h;
            if (predicted - v11[i]).abs() > AFFINE_VALIDATION_TOL {
                return Err(Error::SignatureMismatch(format!(
                    "{cell}: scalar {i} is not affine near ({al:.6}, {be:.6}): \
                     predicted {predicted}, got {}",
                    v11[i]
                )));
            }
            affine.push([v00[i], ga, gb]);
        }
        let sig = CellSignature { cell, structure: s00, affine, anchor: (al, be) };
        match &reference {
            None => reference = Some(sig),
            Some(r) => {
                if r.structure != sig.structure {
                    return Err(Error::SignatureMismatch(format!(
                        "{cell}: expansion structure varies between samples"
                    )));
                }
                // Re-anchor to the reference point and compare triples.
                for (i, (ra, sa)) in r.affine.iter().zip(&sig.affine).enumerate() {
                    let value_at_ref =
                        sa[0] + sa[1] * (r.anchor.0 - sig.anchor.0) + sa[2] * (r.anchor.1 - sig.anchor.1);
                    if (value_at_ref - ra[0]).abs() > SIGNATURE_TOL
                        || (sa[1] - ra[1]).abs() > SIGNATURE_TOL
                        || (sa[2] - ra[2]).abs() > SIGNATURE_TOL
                    {
                        return Err(Error::SignatureMismatch(format!(
                            "{cell}: affine model of scalar {i} varies between samples \
                             ({value_at_ref} vs {} at the reference anchor)",
                            ra[0]
                        )));
                    }
                }
            }
        }
    }
    Ok(reference.expect("samples >= 1"))
}

/// Whether two cell fingerprints encode different asymptotic behavior:
/// different structure, or any affine scalar model differing beyond
/// [`SIGNATURE_TOL`] (compared at a common anchor).
pub fn signatures_differ(a: &CellSignature, b: &CellSignature) -> bool {
    if a.structure != b.structure {
        return true;
    }
    for (ra, sa) in a.affine.iter().zip(&b.affine) {
        let value_at_a = sa[0] + sa[1] * (a.anchor.0 - b.anchor.0) + sa[2] * (a.anchor.1 - b.anchor.1);
        if (value_at_a - ra[0]).abs() > SIGNATURE_TOL
            || (sa[1] - ra[1]).abs() > SIGNATURE_TOL
            || (sa[2] - ra[2]).abs() > SIGNATURE_TOL
        {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(al: f64, be: f64, ga: f64, a: f64) -> Params {
        Params::new(al, be, ga, a).unwrap()
    }

    #[test]
    fn series_normalization_groups_and_cancels() {
        let s = PowerSeries::normalize(vec![
            (Complex64::new(1.0, 0.0), 2.0),
            (Complex64::new(-1.0, 0.0), 2.0 + 1e-12),
            (Complex64::new(3.0, 0.0), 1.0),
        ]);
        assert_eq!(s.terms.len(), 1);
        assert_eq!(s.terms[0], (Complex64::new(3.0, 0.0), 1.0));
    }

    #[test]
    fn leading_balance_splits_scales() {
        // At (0.75, 1, 2) with a = 2: three fast roots of scale mu^1 obeying
        // w^3 + w^2 + 2w + 2 = (w + 1)(w^2 + 2), one slow root of scale mu^0.
        let bal = leading_balance(&p(0.75, 1.0, 2.0, 2.0)).unwrap();
        assert_eq!(bal.len(), 2);
        let slow = bal.iter().find(|b| b.root_exponent.abs() < 1e-12).unwrap();
        let fast = bal.iter().find(|b| (b.root_exponent - 1.0).abs() < 1e-12).unwrap();
        assert_eq!(slow.span, 1);
        assert_eq!(fast.span, 3);
        assert_eq!(slow.scaled_roots.len(), 1);
        assert!((slow.scaled_roots[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let mut fast_roots = fast.scaled_roots.clone();
        fast_roots.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((fast_roots[0] - Complex64::new(0.0, -2.0f64.sqrt())).norm() < 1e-9);
        assert!((fast_roots[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
        assert!((fast_roots[2] - Complex64::new(0.0, 2.0f64.sqrt())).norm() < 1e-9);
    }

    #[test]
    fn simple_branch_two_term_expansion() {
        // Oscillatory branches at (0.75, 1, 2), a = 2: lambda ~ +/- i sqrt(2) mu
        // with damping term at a lower power carrying negative real part.
        let ex = expand_roots(&p(0.75, 1.0, 2.0, 2.0), 6).unwrap();
        assert_eq!(ex.len(), 4);
        let osc: Vec<_> = ex
            .iter()
            .filter(|e| {
                (e.leading_power() - 1.0).abs() < 1e-9 && e.terms[0].0.im.abs() > 1e-9
            })
            .collect();
        assert_eq!(osc.len(), 2);
        for e in osc {
            assert!((e.terms[0].0.norm() - 2.0f64.sqrt()).abs() < 1e-9);
            let rp = e.real_power.expect("damping term found");
            let rc = e.real_coeff.unwrap();
            assert!(rc.re < 0.0, "damping must be negative, got {rc}");
            // Predicted smoothing exponent r/s = 1/2 at this point.
            assert!((rp / 1.0 - 0.5).abs() < 1e-9, "real power {rp}");
        }
    }

    #[test]
    fn coincident_branch_splitting() {
        // Same-speed with alpha = beta < 1/2: the limit polynomial is
        // (w^2 + 1)^2 and the coincident oscillatory pairs separate through
        // 4 v^2 + 2 k v + b^2 = 0, putting the damping term at power beta
        // with coefficient real part -k/4.
        let q = Params::new(0.4, 0.4, 1.0, 1.0).unwrap();
        let ex = expand_roots(&q, 6).unwrap();
        assert_eq!(ex.len(), 4);
        for e in &ex {
            assert!((e.leading_power() - 0.5).abs() < 1e-9);
            assert!((e.terms[0].0.norm() - 1.0).abs() < 1e-9);
            let rp = e.real_power.expect("damping term");
            let rc = e.real_coeff.unwrap();
            assert!((rp - 0.4).abs() < 1e-9, "damping power {rp}");
            assert!((rc.re + 0.25).abs() < 1e-9, "damping coefficient {rc}");
        }
        // The four branches carry the four sign combinations.
        let plus_im = ex.iter().filter(|e| e.terms[0].0.im > 0.0).count();
        assert_eq!(plus_im, 2);
    }

    #[test]
    fn expansion_tracks_numeric_roots() {
        use crate::roots::solve_quartic;
        use crate::quartic::build_quartic;
        for q in [p(0.75, 1.0, 2.0, 2.0), Params::new(0.4, 0.4, 1.0, 1.0).unwrap()] {
            let ex = expand_roots(&q, 6).unwrap();
            for &mu in &[1e6, 1e8] {
                let solved = solve_quartic(&build_quartic(&q, mu).unwrap()).unwrap();
                for e in &ex {
                    let predicted = e.eval(mu);
                    let err = solved
                        .roots
                        .iter()
                        .map(|r| (r - predicted).norm())
                        .fold(f64::INFINITY, f64::min);
                    let rel = err / predicted.norm().max(1e-300);
                    assert!(rel < 1e-2, "mu={mu}: prediction {predicted} off by {rel}");
                }
            }
        }
    }

    #[test]
    fn exact_branch_detection() {
        // lambda^4 - mu^2 has exact branches; exercised through a synthetic
        // coefficient set rather than model parameters.
        let coeffs = [
            PowerSeries::monomial(Complex64::new(-1.0, 0.0), 2.0),
            PowerSeries::zero(),
            PowerSeries::zero(),
            PowerSeries::zero(),
            PowerSeries::monomial(Complex64::new(1.0, 0.0), 0.0),
        ];
        let x = PowerSeries::monomial(Complex64::new(0.0, 1.0), 0.5);
        let refined = newton_refine(&coeffs, x, 8, RefineStop::DampingTerm).unwrap();
        assert!(refined.exact);
        assert_eq!(refined.terms.len(), 1);
    }

    #[test]
    fn uniform_cell_produces_stable_signature() {
        let base = p(0.3, 0.3, 1.5, 2.0);
        let sig = cell_uniformity_scan(PartitionCell::V1, &base, 4, 48).unwrap();
        assert_eq!(sig.structure.len(), 4);
        // Every branch of the damped system carries a damping term.
        assert!(sig.structure.iter().all(|&s| s == 0));
        let again = cell_uniformity_scan(PartitionCell::V1, &base, 4, 48).unwrap();
        assert!(!signatures_differ(&sig, &again));
    }

    #[test]
    fn adjacent_cells_have_different_signatures() {
        let base = p(0.3, 0.3, 1.5, 2.0);
        let s1 = cell_uniformity_scan(PartitionCell::V1, &base, 3, 48).unwrap();
        let s2 = cell_uniformity_scan(PartitionCell::V2, &base, 3, 48).unwrap();
        assert!(signatures_differ(&s1, &s2));
    }
}
