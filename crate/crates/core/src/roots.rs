//! Certified root finding for the modal quartic.
//!
//! The quartic's coefficients span many orders of magnitude (powers of `mu`
//! up to `mu^{1+gamma}` with `mu` as large as `1e10`), so naive iteration
//! from generic starting points loses branches. The solver:
//!
//! 1. seeds Aberth–Ehrlich iteration with magnitude estimates read off the
//!    coefficient Newton polygon (each polygon edge of slope `-p` and
//!    horizontal span `s` contributes `s` seeds of magnitude `|c|^(1/s)`
//!    spread on a ring),
//! 2. runs Aberth–Ehrlich to double-precision convergence,
//! 3. polishes each root with double-double Newton steps, and
//! 4. certifies the relative backward residual `|P(z)| / sum_i |c_i||z|^i`
//!    against a hard threshold, failing loudly instead of returning junk.
//!
//! Because the polynomial is real, roots are returned symmetrized into exact
//! conjugate pairs and canonically ordered.

use num_complex::Complex64;

use crate::dd::{Dd, DdComplex};
use crate::error::{Error, Result};
use crate::quartic::ModalQuartic;

/// Hard certification threshold on the relative backward residual.
pub const RESIDUAL_TOL: f64 = 1e-12;

const MAX_ABERTH_ITERS: usize = 200;
const MAX_POLISH_STEPS: usize = 12;

/// Roots of a modal quartic with certification data.
#[derive(Debug, Clone)]
pub struct QuarticRoots {
    /// The four roots, canonically ordered (see [`canonical_sort`]).
    pub roots: [Complex64; 4],
    /// Largest relative backward residual among the four roots.
    pub max_residual: f64,
    /// Largest displacement applied when symmetrizing conjugate pairs;
    /// far below any root spacing of interest when the solve is healthy.
    pub pairing_error: f64,
}

/// Evaluate `P` and `P'` at `z` in plain double precision.
fn eval_with_derivative(c: &[f64; 5], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(c[4], 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for i in (0..4).rev() {
        dp = dp * z + p;
        p = p * z + c[i];
    }
    (p, dp)
}

/// Relative backward residual `|P(z)| / sum_i |c_i| |z|^i` (denominator
/// floored to the leading term so it is never zero for finite `z`).
pub fn relative_residual(c: &[f64; 5], z: Complex64) -> f64 {
    let (p, _) = eval_with_derivative(c, z);
    let az = z.norm();
    let mut denom = 0.0;
    let mut zp = 1.0;
    for ci in c.iter() {
        denom += ci.abs() * zp;
        zp *= az;
    }
    if denom == 0.0 {
        return p.norm();
    }
    p.norm() / denom
}

/// Magnitude seeds from the Newton polygon of `log |c_i|` against degree:
/// the upper hull of `(i, log |c_i|)` splits the roots into groups of equal
/// asymptotic magnitude, one group per hull edge.
fn polygon_magnitudes(c: &[f64; 5]) -> Vec<f64> {
    // Points (degree, log|c|), skipping zero coefficients.
    let pts: Vec<(f64, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, ci)| **ci != 0.0)
        .map(|(i, ci)| (i as f64, ci.abs().ln()))
        .collect();
    // Upper convex hull by monotone chain over increasing degree.
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    // Each edge from (d1, l1) to (d2, l2) yields (d2 - d1) roots of
    // magnitude exp((l1 - l2) / (d2 - d1)).
    let mut mags = Vec::with_capacity(4);
    for w in hull.windows(2) {
        let (d1, l1) = w[0];
        let (d2, l2) = w[1];
        let span = (d2 - d1).round() as usize;
        let mag = ((l1 - l2) / (d2 - d1)).exp();
        for _ in 0..span {
            mags.push(mag);
        }
    }
    // Degenerate ledgers (e.g. leading coefficient only): top up with 1.0.
    while mags.len() < 4 {
        mags.push(1.0);
    }
    mags.truncate(4);
    mags
}

/// Deterministic Aberth–Ehrlich seeds: polygon magnitudes spread on rings
/// with irrational phase offsets so no seed starts on an axis of symmetry.
fn initial_guesses(c: &[f64; 5]) -> [Complex64; 4] {
    let mags = polygon_magnitudes(c);
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (j, (&m, slot)) in mags.iter().zip(out.iter_mut()).enumerate() {
        let angle = 0.4 + 2.0 * std::f64::consts::PI * (j as f64) / 4.0 + 0.3 * (j as f64);
        *slot = Complex64::from_polar(m.max(f64::MIN_POSITIVE.sqrt()), angle);
    }
    out
}

/// One Aberth–Ehrlich pass over all four approximations.
fn aberth_step(c: &[f64; 5], z: &mut [Complex64; 4]) -> f64 {
    let mut max_move = 0.0f64;
    for i in 0..4 {
        let (p, dp) = eval_with_derivative(c, z[i]);
        if p.norm() == 0.0 {
            continue;
        }
        let newton = if dp.norm() > 0.0 { p / dp } else { Complex64::new(1e-3, 1e-3) };
        let mut repulsion = Complex64::new(0.0, 0.0);
        for k in 0..4 {
            if k != i {
                let d = z[i] - z[k];
                if d.norm() > 1e-300 {
                    repulsion += Complex64::new(1.0, 0.0) / d;
                }
            }
        }
        let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
        let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
        z[i] -= step;
        let rel = step.norm() / (1.0 + z[i].norm());
        if rel > max_move {
            max_move = rel;
        }
    }
    max_move
}

/// Double-double Newton polish of one root.
fn dd_polish(c: &[f64; 5], z0: Complex64) -> Complex64 {
    let cd: Vec<DdComplex> = c.iter().map(|&ci| DdComplex::from_f64(ci)).collect();
    let mut z = DdComplex::from_c64(z0);
    for _ in 0..MAX_POLISH_STEPS {
        // Horner in double-double.
        let mut p = cd[4];
        let mut dp = DdComplex::ZERO;
        for i in (0..4).rev() {
            dp = dp.mul(z).add(p);
            p = p.mul(z).add(cd[i]);
        }
        let dpn = dp.abs_f64();
        if dpn == 0.0 {
            break;
        }
        let step = p.div(dp);
        z = z.sub(step);
        if step.abs_f64() <= 1e-32 * (1.0 + z.abs_f64()) {
            break;
        }
    }
    z.to_c64()
}

/// Symmetrize roots of a real polynomial into exact conjugate pairs.
/// Real-axis roots have their imaginary parts zeroed when negligible.
fn symmetrize(roots: &mut [Complex64; 4]) -> f64 {
    let mut pairing_error = 0.0f64;
    // Zero out negligible imaginary parts (true real roots). "Negligible"
    // must be judged against the root's own real part, never against the
    // other roots: when the root magnitudes span many orders, the genuine
    // oscillation of the smallest conjugate pair is far below the largest
    // root and a global threshold would flatten it onto the real axis.
    for z in roots.iter_mut() {
        if z.im.abs() <= 1e-14 * z.re.abs() {
            pairing_error = pairing_error.max(z.im.abs());
            z.im = 0.0;
        }
    }
    // Greedily match remaining complex roots with their conjugates.
    let mut used = [false; 4];
    for i in 0..4 {
        if used[i] || roots[i].im == 0.0 {
            continue;
        }
        let target = roots[i].conj();
        let mut best: Option<(usize, f64)> = None;
        for k in 0..4 {
            if k == i || used[k] || roots[k].im == 0.0 {
                continue;
            }
            let d = (roots[k] - target).norm();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((k, d));
            }
        }
        if let Some((k, d)) = best {
            pairing_error = pairing_error.max(d);
            let mean = 0.5 * (roots[i] + roots[k].conj());
            roots[i] = mean;
            roots[k] = mean.conj();
            used[i] = true;
            used[k] = true;
        }
    }
    pairing_error
}

/// Canonical order: descending |Im|, then ascending Re, then descending Im
/// (so a conjugate pair is adjacent, `+Im` before `-Im`).
pub fn canonical_sort(roots: &mut [Complex64; 4]) {
    roots.sort_by(|a, b| {
        b.im.abs()
            .partial_cmp(&a.im.abs())
            .unwrap()
            .then(a.re.partial_cmp(&b.re).unwrap())
            .then(b.im.partial_cmp(&a.im).unwrap())
    });
}

/// Solve the modal quartic with certification.
pub fn solve_quartic(q: &ModalQuartic) -> Result<QuarticRoots> {
    solve_monic(&q.coeffs)
}

/// Solve a monic quartic given coefficients `[c0, c1, c2, c3, 1]`.
pub fn solve_monic(c: &[f64; 5]) -> Result<QuarticRoots> {
    if c[4] != 1.0 {
        return Err(Error::InvalidParams(format!(
            "expected monic quartic, got leading coefficient {}",
            c[4]
        )));
    }
    let mut z = initial_guesses(c);
    let mut converged = false;
    for _ in 0..MAX_ABERTH_ITERS {
        let moved = aberth_step(c, &mut z);
        if moved < 1e-14 {
            converged = true;
            break;
        }
    }
    for zi in z.iter_mut() {
        *zi = dd_polish(c, *zi);
    }
    let pairing_error = symmetrize(&mut z);
    canonical_sort(&mut z);
    let max_residual = z.iter().map(|&zi| relative_residual(c, zi)).fold(0.0, f64::max);
    if max_residual > RESIDUAL_TOL {
        return Err(Error::NoConvergence {
            residual: max_residual,
            iterations: if converged { 0 } else { MAX_ABERTH_ITERS },
        });
    }
    Ok(QuarticRoots { roots: z, max_residual, pairing_error })
}

/// Check the four Vieta identities for a monic quartic, returning the
/// largest relative violation. Sums are accumulated in double-double and
/// conjugate pairs are combined first into real quadratic factors, so the
/// check stays meaningful even when individual roots are huge.
pub fn vieta_residual(c: &[f64; 5], roots: &[Complex64; 4]) -> f64 {
    // Multiply out (z - r1)(z - r2)(z - r3)(z - r4) in double-double,
    // pairing conjugates first so intermediate products stay real.
    let mut factors: Vec<Vec<DdComplex>> = Vec::new(); // ascending-degree coeff lists
    let mut used = [false; 4];
    for i in 0..4 {
        if used[i] {
            continue;
        }
        if roots[i].im != 0.0 {
            // Find its conjugate partner.
            let mut partner = None;
            for k in (i + 1)..4 {
                if !used[k] && roots[k] == roots[i].conj() {
                    partner = Some(k);
                    break;
                }
            }
            if let Some(k) = partner {
                used[i] = true;
                used[k] = true;
                // (z - r)(z - conj r) = z^2 - 2 Re(r) z + |r|^2.
                let re = Dd::from_f64(roots[i].re);
                let im = Dd::from_f64(roots[i].im);
                let re2 = re.mul(Dd::from_f64(2.0));
                let abs2 = re.mul(re).add(im.mul(im));
                factors.push(vec![
                    DdComplex { re: abs2, im: Dd::ZERO },
                    DdComplex { re: re2.neg(), im: Dd::ZERO },
                    DdComplex::from_f64(1.0),
                ]);
                continue;
            }
        }
        used[i] = true;
        factors.push(vec![DdComplex::from_c64(-roots[i]), DdComplex::from_f64(1.0)]);
    }
    let mut poly = vec![DdComplex::from_f64(1.0)];
    for f in factors {
        let mut next = vec![DdComplex::ZERO; poly.len() + f.len() - 1];
        for (i, pi) in poly.iter().enumerate() {
            for (j, fj) in f.iter().enumerate() {
                next[i + j] = next[i + j].add(pi.mul(*fj));
            }
        }
        poly = next;
    }
    let mut worst = 0.0f64;
    for (i, ci) in c.iter().enumerate().take(4) {
        let got = poly[i].re.to_f64();
        let rel = (got - ci).abs() / ci.abs().max(1.0);
        worst = worst.max(rel);
        worst = worst.max(poly[i].im.to_f64().abs() / ci.abs().max(1.0));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Params;
    use crate::quartic::build_quartic;

    fn assert_root_set(got: &[Complex64; 4], want: &[Complex64; 4], tol: f64) {
        let mut used = [false; 4];
        for w in want {
            let mut hit = false;
            for (k, g) in got.iter().enumerate() {
                if !used[k] && (g - w).norm() <= tol * (1.0 + w.norm()) {
                    used[k] = true;
                    hit = true;
                    break;
                }
            }
            assert!(hit, "missing root {w} in {got:?}");
        }
    }

    #[test]
    fn biquadratic_with_mixed_real_and_imaginary_roots() {
        // z^4 - 16 = 0 has roots {2, -2, 2i, -2i}.
        let c = [-16.0, 0.0, 0.0, 0.0, 1.0];
        let r = solve_monic(&c).unwrap();
        assert_root_set(
            &r.roots,
            &[
                Complex64::new(2.0, 0.0),
                Complex64::new(-2.0, 0.0),
                Complex64::new(0.0, 2.0),
                Complex64::new(0.0, -2.0),
            ],
            1e-13,
        );
        assert!(r.max_residual <= RESIDUAL_TOL);
    }

    #[test]
    fn known_factored_quartic() {
        // (z^2 + 2z + 5)(z^2 - 3z + 2) = z^4 - z^3 + z^2 - 11 z + 10:
        // roots -1 +/- 2i, 1, 2.
        let c = [10.0, -11.0, 1.0, -1.0, 1.0];
        let r = solve_monic(&c).unwrap();
        assert_root_set(
            &r.roots,
            &[
                Complex64::new(-1.0, 2.0),
                Complex64::new(-1.0, -2.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(2.0, 0.0),
            ],
            1e-12,
        );
    }

    #[test]
    fn widely_separated_magnitudes() {
        // (z + 1e8)(z + 1e-4)(z^2 + 4): coefficient span ~1e12.
        // Expanded: z^4 + (1e8 + 1e-4) z^3 + (1e4 + 4) z^2 + ...
        let r1 = -1e8;
        let r2 = -1e-4;
        let c3 = -(r1 + r2);
        let c2 = r1 * r2 + 4.0;
        let c1 = -(r1 + r2) * 4.0;
        let c0 = r1 * r2 * 4.0;
        let c = [c0, c1, c2, c3, 1.0];
        let r = solve_monic(&c).unwrap();
        assert_root_set(
            &r.roots,
            &[
                Complex64::new(r1, 0.0),
                Complex64::new(r2, 0.0),
                Complex64::new(0.0, 2.0),
                Complex64::new(0.0, -2.0),
            ],
            1e-10,
        );
    }

    #[test]
    fn modal_quartic_roots_match_eigenvalues() {
        use nalgebra::Matrix4;
        let p = Params::new(0.6, 0.7, 1.3, 2.0).unwrap();
        for &mu in &[1.0, 37.5, 1e4] {
            let q = build_quartic(&p, mu).unwrap();
            let r = solve_quartic(&q).unwrap();
            let m: Matrix4<f64> = crate::quartic::modal_matrix(&p, mu);
            let eigs = m.complex_eigenvalues();
            let want: Vec<Complex64> = eigs.iter().copied().collect();
            for w in &want {
                let hit = r.roots.iter().any(|g| (g - w).norm() <= 1e-8 * (1.0 + w.norm()));
                assert!(hit, "mu={mu}: eigenvalue {w} not found in {:?}", r.roots);
            }
        }
    }

    #[test]
    fn vieta_residual_is_tiny_for_certified_roots() {
        let p = Params::new(0.4, 0.4, 1.0, 1.0).unwrap();
        for &mu in &[1e2, 1e6, 1e10] {
            let q = build_quartic(&p, mu).unwrap();
            let r = solve_quartic(&q).unwrap();
            let v = vieta_residual(&q.coeffs, &r.roots);
            assert!(v <= 1e-10, "mu={mu}: vieta residual {v}");
        }
    }

    #[test]
    fn conjugate_pairs_are_exact() {
        let p = Params::new(0.75, 1.0, 2.0, 2.0).unwrap();
        let q = build_quartic(&p, 1e6).unwrap();
        let r = solve_quartic(&q).unwrap();
        let complex_roots: Vec<_> = r.roots.iter().filter(|z| z.im != 0.0).collect();
        assert_eq!(complex_roots.len() % 2, 0);
        for z in &complex_roots {
            assert!(complex_roots.iter().any(|w| **w == z.conj()));
        }
    }

    #[test]
    fn canonical_order_is_stable() {
        let c = [-16.0, 0.0, 0.0, 0.0, 1.0];
        let a = solve_monic(&c).unwrap().roots;
        let b = solve_monic(&c).unwrap().roots;
        assert_eq!(a, b);
        assert!(a[0].im > 0.0); // +Im first
        assert_eq!(a[0], a[1].conj());
    }
}
