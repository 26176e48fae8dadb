//! Per-mode characteristic quartic and modal matrix.
//!
//! Restricting the block generator to one eigenmode `mu` of the spatial
//! operator yields a 4x4 real matrix whose characteristic polynomial is the
//! monic quartic
//!
//! ```text
//! lambda^4 + k mu^beta lambda^3 + (mu + b^2 mu^{2 alpha} + a mu^gamma) lambda^2
//!          + a k mu^{beta+gamma} lambda + a mu^{1+gamma} = 0
//! ```
//!
//! Besides the numeric coefficients, the quartic carries an exponent ledger:
//! every monomial contribution `coeff * mu^power` per degree. The ledger is
//! what the asymptotic machinery consumes — crucially the degree-2
//! coefficient keeps its three contributions separate, because which of them
//! dominates (or ties) is exactly what distinguishes the partition cells.

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::polygon::ExponentPoint;

/// One ledger entry: `coeff * mu^power` contributing to a coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Monomial {
    pub coeff: f64,
    pub power: f64,
}

/// Monic characteristic quartic at a fixed mode `mu`, with exponent ledger.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModalQuartic {
    pub mu: f64,
    /// Coefficients `[c0, c1, c2, c3, c4]`, low degree first, `c4 = 1`.
    pub coeffs: [f64; 5],
    /// Monomial ledger per degree, same indexing as `coeffs`.
    pub ledger: [Vec<Monomial>; 5],
}

impl ModalQuartic {
    /// Exponent points for the Newton polygon: per degree, the dominant
    /// (maximum) power among that degree's monomials.
    pub fn exponent_points(&self) -> Vec<ExponentPoint> {
        self.ledger
            .iter()
            .enumerate()
            .map(|(degree, terms)| ExponentPoint {
                degree: degree as u32,
                exponent: terms
                    .iter()
                    .map(|m| m.power)
                    .fold(f64::NEG_INFINITY, f64::max),
            })
            .collect()
    }

    /// Evaluate the quartic at `z` (plain double precision).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(self.coeffs[4], 0.0);
        for i in (0..4).rev() {
            acc = acc * z + self.coeffs[i];
        }
        acc
    }
}

/// Ledger of the quartic's monomials as functions of the parameters.
/// Returned low degree first; degree 2 has three entries.
pub fn quartic_ledger(p: &Params) -> [Vec<Monomial>; 5] {
    let Params { alpha, beta, gamma, a, b, k } = *p;
    [
        vec![Monomial { coeff: a, power: 1.0 + gamma }],
        vec![Monomial { coeff: a * k, power: beta + gamma }],
        vec![
            Monomial { coeff: 1.0, power: 1.0 },
            Monomial { coeff: b * b, power: 2.0 * alpha },
            Monomial { coeff: a, power: gamma },
        ],
        vec![Monomial { coeff: k, power: beta }],
        vec![Monomial { coeff: 1.0, power: 0.0 }],
    ]
}

/// Build the characteristic quartic at mode `mu > 0`.
pub fn build_quartic(p: &Params, mu: f64) -> Result<ModalQuartic> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidParams(format!("mu = {mu} must be positive and finite")));
    }
    let ledger = quartic_ledger(p);
    let mut coeffs = [0.0f64; 5];
    for (degree, terms) in ledger.iter().enumerate() {
        let mut c = 0.0;
        for m in terms {
            c += m.coeff * mu.powf(m.power);
        }
        if !c.is_finite() {
            return Err(Error::Overflow { mu });
        }
        coeffs[degree] = c;
    }
    Ok(ModalQuartic { mu, coeffs, ledger })
}

/// The 4x4 modal matrix whose characteristic polynomial is the quartic.
/// State ordering: (position u, velocity v, position y, velocity w).
pub fn modal_matrix(p: &Params, mu: f64) -> Matrix4<f64> {
    let Params { alpha, beta, gamma, a, b, k } = *p;
    let mg = mu.powf(gamma);
    let ma = mu.powf(alpha);
    let mb = mu.powf(beta);
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -a * mg, 0.0, 0.0, b * ma, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, -b * ma, -mu, -k * mb,
    )
}
