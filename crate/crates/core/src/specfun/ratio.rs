//! Quantities that stay finite when `j_l`, `y_l` or `h_l` themselves do not:
//! the log of `-2 j_l/y_l` on the real axis and the logarithmic derivative
//! `h_l'/h_l` in the complex plane.

use super::real_order::log_jy;
use super::uniform::{check_regime, u_correction};
use super::Method;
use crate::constants::integral_i_unchecked;
use crate::{Error, Result};
use num_complex::Complex64 as C;
use std::f64::consts::LN_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRatio {
    pub order: u32,
    pub arg: f64,
    /// `ln(-2 j_l(x) / y_l(x))`.
    pub value: f64,
    pub method: Method,
}

/// `ln(-2 j_l(x)/y_l(x))` from the log-magnitude recurrences. Valid for any
/// `l` and `x > 0` where `j_l/y_l < 0`.
pub fn log_jy_ratio(l: u32, x: f64) -> Result<LogRatio> {
    let r = log_jy(l as f64, x)?;
    if r.ratio_sign() >= 0.0 {
        return Err(Error::Domain(format!(
            "j_{l}({x})/y_{l}({x}) is not negative; no exponential decay here"
        )));
    }
    Ok(LogRatio {
        order: l,
        arg: x,
        value: LN_2 + r.log_abs_ratio(),
        method: Method::Recurrence,
    })
}

/// Large-order form `-2 sqrt(l(l+1)) I(xi) + ln((1 + u/l)/(1 - u/l))`.
pub fn log_jy_ratio_uniform(l: u32, x: f64) -> Result<LogRatio> {
    let lf = l as f64;
    let big_l = (lf * (lf + 1.0)).sqrt();
    let xi = x / big_l;
    check_regime(l, xi)?;
    let u = u_correction(xi) / lf;
    Ok(LogRatio {
        order: l,
        arg: x,
        value: -2.0 * big_l * integral_i_unchecked(xi) + ((1.0 + u) / (1.0 - u)).ln(),
        method: Method::UniformAsymptotic,
    })
}

/// Small-argument form `-1 + (2l+1) ln(x e / 2l)`; needs `x <= l/2`.
pub fn log_jy_ratio_small_arg(l: u32, x: f64) -> Result<LogRatio> {
    let lf = l as f64;
    if l == 0 || !(x > 0.0) || x > 0.5 * lf {
        return Err(Error::Regime(format!(
            "small-argument form needs l >= 1 and 0 < x <= l/2, got l={l}, x={x}"
        )));
    }
    Ok(LogRatio {
        order: l,
        arg: x,
        value: -1.0 + (2.0 * lf + 1.0) * (x * std::f64::consts::E / (2.0 * lf)).ln(),
        method: Method::Series,
    })
}

/// Errors introduced by the upward `h_l` recurrence can be amplified by at
/// most this factor before the result is rejected.
const MAX_AMPLIFICATION: f64 = 1e6;

fn laurent(l: u32, z: C) -> Option<C> {
    // s = r + 1/z solves s' + s^2 + 1 - c/z^2 = 0 and s = sum sigma_m z^-m;
    // t_m = sigma_m z^-m keeps every term of order one
    let c = (l as f64) * (l as f64 + 1.0);
    let zi = 1.0 / z;
    let mut t: Vec<C> = Vec::with_capacity(64);
    t.push(C::i());
    t.push(C::new(0.0, 0.0));
    let mut sum = C::i();
    let half_i = C::new(0.0, -0.5); // 1/(2i)
    for m in 2..200 {
        let mut v = (m - 1) as f64 * t[m - 1] * zi;
        for p in 1..m {
            v -= t[p] * t[m - p];
        }
        if m == 2 {
            v += c * zi * zi;
        }
        let tm = v * half_i;
        t.push(tm);
        sum += tm;
        if m > 3 && tm.norm() < 1e-17 * sum.norm() && t[m - 1].norm() < 1e-15 * sum.norm() {
            return Some(sum - zi);
        }
        if !tm.is_finite() {
            return None;
        }
    }
    None
}

fn upward(l: u32, z: C) -> Result<C> {
    let zi = 1.0 / z;
    let mut rho = zi - C::i();
    let mut rho2 = zi + C::i();
    if l == 0 {
        return Ok(-rho);
    }
    let mut a = rho2.norm().ln() - rho.norm().ln();
    let mut amin = a.min(0.0);
    for n in 1..l {
        let k = (2 * n + 1) as f64 * zi;
        rho = k - 1.0 / rho;
        rho2 = k - 1.0 / rho2;
        a += rho2.norm().ln() - rho.norm().ln();
        amin = amin.min(a);
    }
    let amp = (a - amin).exp();
    if !(amp <= MAX_AMPLIFICATION) {
        return Err(Error::Precision(format!(
            "upward h_{l} recurrence at z = {z} amplifies round-off by {amp:.2e}"
        )));
    }
    Ok(1.0 / rho - (l as f64 + 1.0) * zi)
}

/// `h_l'(z)/h_l(z)` for the outgoing Hankel function. Far from the origin a
/// convergent expansion in `1/z` is used; elsewhere the upward ratio
/// recurrence, refused when its round-off amplification is too large.
pub fn hankel_log_derivative(l: u32, z: C) -> Result<C> {
    if z.norm() == 0.0 || !z.is_finite() {
        return Err(Error::Domain(format!("h'/h needs finite z != 0, got {z}")));
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::Domain(format!("z = {z} lies on the branch cut")));
    }
    if z.norm() >= 3.0 * (l as f64 + 1.0) {
        if let Some(r) = laurent(l, z) {
            return Ok(r);
        }
    }
    upward(l, z)
}
