//! Large-order expansion of `j_l`, `y_l` on the exponential side of the
//! turning point, `z = sqrt(l(l+1)) xi` with `xi < 1`.

use super::{BesselEval, Method};
use crate::constants::integral_i_unchecked;
use crate::{Error, Result};
use num_complex::Complex64;

/// Airy zone: below this value of `(1 - xi) l^(2/3)` the expansion is refused.
pub const UNIFORM_CUTOFF: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformEval {
    pub eval: BesselEval,
    /// `j'/j` and `y'/y`, computed directly (the products in `eval` lose
    /// nothing here but this is the form callers usually need).
    pub dlog_j: f64,
    pub dlog_y: f64,
    /// Documented relative error of each quantity, `5/l^2`.
    pub rel_err_bound: f64,
}

/// First correction `u(xi)` in `1 +- u/l`.
pub fn u_correction(xi: f64) -> f64 {
    let w = 1.0 - xi * xi;
    let s = w.sqrt();
    -5.0 / (24.0 * w * s) + 1.0 / (8.0 * s) + ((1.0 - s) / (1.0 + s)).ln() / 16.0
}

pub(crate) fn check_regime(l: u32, xi: f64) -> Result<()> {
    if l < 50 {
        return Err(Error::Regime(format!("uniform expansion needs l >= 50, got {l}")));
    }
    if !(xi > 0.0) || xi >= 1.0 {
        return Err(Error::Regime(format!("uniform expansion needs 0 < xi < 1, got {xi}")));
    }
    let t = (1.0 - xi) * (l as f64).powf(2.0 / 3.0);
    if t < UNIFORM_CUTOFF {
        return Err(Error::Regime(format!(
            "(1 - xi) l^(2/3) = {t:.3} is inside the Airy zone (< {UNIFORM_CUTOFF})"
        )));
    }
    Ok(())
}

/// Two-term uniform forms; `j` and `y` overflow for very large `l`, in which
/// case use [`super::log_jy_ratio_uniform`].
pub fn eval_jy_uniform(l: u32, xi: f64) -> Result<UniformEval> {
    check_regime(l, xi)?;
    let lf = l as f64;
    let big_l = (lf * (lf + 1.0)).sqrt();
    let z = big_l * xi;
    let s = (1.0 / (xi * xi) - 1.0).sqrt();
    let pre = (1.0 / (xi * xi) - 1.0).powf(-0.25) / (big_l * xi);
    let i = integral_i_unchecked(xi);
    let u = u_correction(xi) / lf;
    let j = 0.5 * pre * (-big_l * i).exp() * (1.0 + u);
    let y = -pre * (big_l * i).exp() * (1.0 - u);
    let corr = (1.0 - 2.0 * xi * xi) / (2.0 * lf * xi * (1.0 - xi * xi));
    let dlog_j = s - corr;
    let dlog_y = -s - corr;
    let eval = BesselEval {
        order: l,
        arg: Complex64::new(z, 0.0),
        j: Complex64::new(j, 0.0),
        y: Complex64::new(y, 0.0),
        jp: Complex64::new(j * dlog_j, 0.0),
        yp: Complex64::new(y * dlog_y, 0.0),
        method: Method::UniformAsymptotic,
    };
    if !y.is_finite() || j == 0.0 {
        return Err(Error::Overflow(format!(
            "uniform j_{l}, y_{l} at xi={xi} are outside f64 range"
        )));
    }
    Ok(UniformEval {
        eval,
        dlog_j,
        dlog_y,
        rel_err_bound: 5.0 / (lf * lf),
    })
}

/// `(ln|y_l|, y_l'/y_l)` from the same expansion, for orders where `y_l`
/// itself overflows.
pub fn log_y_uniform(l: u32, xi: f64) -> Result<(f64, f64)> {
    check_regime(l, xi)?;
    let lf = l as f64;
    let big_l = (lf * (lf + 1.0)).sqrt();
    let s = (1.0 / (xi * xi) - 1.0).sqrt();
    let log_pre = -0.25 * (1.0 / (xi * xi) - 1.0).ln() - (big_l * xi).ln();
    let u = u_correction(xi) / lf;
    let corr = (1.0 - 2.0 * xi * xi) / (2.0 * lf * xi * (1.0 - xi * xi));
    Ok((log_pre + big_l * integral_i_unchecked(xi) + (1.0 - u).ln(), -s - corr))
}
