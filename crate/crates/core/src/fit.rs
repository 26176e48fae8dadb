//! Power-law fitting in log-log coordinates.

use serde::Serialize;

use crate::error::{Error, Result};

/// Least-squares line through `(log mu, log v)` pairs.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PowerLawFit {
    /// Slope of the log-log line: `v ~ C * mu^exponent`.
    pub exponent: f64,
    /// Natural log of the prefactor `C`.
    pub log_coefficient: f64,
    /// Coefficient of determination of the log-log fit.
    pub r_squared: f64,
    /// Index range `[start, end)` of the input actually used.
    pub window: (usize, usize),
}

impl PowerLawFit {
    /// Fitted value at abscissa `x`.
    pub fn eval(&self, x: f64) -> f64 {
        (self.log_coefficient + self.exponent * x.ln()).exp()
    }
}

/// Minimum number of pairs inside the fit window.
pub const MIN_FIT_POINTS: usize = 6;

/// Fit `v ~ C * mu^p` on the trailing `window` fraction of `pairs`.
///
/// `pairs` must be ordered by ascending abscissa with strictly positive
/// entries; `window` in `(0, 1]` selects the tail (1.0 = use everything).
pub fn fit_exponent(pairs: &[(f64, f64)], window: f64) -> Result<PowerLawFit> {
    if !(window > 0.0 && window <= 1.0) {
        return Err(Error::InvalidParams(format!("fit window {window} outside (0, 1]")));
    }
    let take = ((pairs.len() as f64) * window).ceil() as usize;
    let start = pairs.len().saturating_sub(take.max(MIN_FIT_POINTS));
    let tail = &pairs[start..];
    if tail.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData { got: tail.len(), need: MIN_FIT_POINTS });
    }
    for &(x, y) in tail {
        if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
            return Err(Error::InvalidParams(format!("non-positive pair ({x}, {y}) in fit window")));
        }
    }

    let n = tail.len() as f64;
    let (mut sx, mut sy) = (0.0, 0.0);
    for &(x, y) in tail {
        sx += x.ln();
        sy += y.ln();
    }
    let (mx, my) = (sx / n, sy / n);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in tail {
        let dx = x.ln() - mx;
        sxx += dx * dx;
        sxy += dx * (y.ln() - my);
    }
    if sxx <= 0.0 {
        return Err(Error::InvalidParams("degenerate abscissa: all fit points coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;

    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for &(x, y) in tail {
        let pred = intercept + slope * x.ln();
        let dy = y.ln() - my;
        let res = y.ln() - pred;
        ss_res += res * res;
        ss_tot += dy * dy;
    }
    let r_squared = if ss_tot < 1e-300 {
        // Constant ordinate: the zero-slope line is an exact fit.
        if ss_res < 1e-300 { 1.0 } else { 0.0 }
    } else {
        1.0 - ss_res / ss_tot
    };

    Ok(PowerLawFit {
        exponent: slope,
        log_coefficient: intercept,
        r_squared,
        window: (start, pairs.len()),
    })
}
