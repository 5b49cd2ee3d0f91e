//! Universal constants of the decay law.
//!
//! Maximising `eta(l_*)` over the scaled mode index gives
//! `zeta = zeta_m0 + eps^2 zeta_m2`, `l_* = l_m0 + eps^2 l_m2` and
//! `eta = eta_m0 + eps^2 eta_m2`, hence
//! `-Im z ~ eps^-2 exp(-eta_m0/eps^2 - eta_m2)`.

use crate::{Error, Result};
use serde::Serialize;
use std::sync::OnceLock;

/// Values printed in the original analysis, kept for side-by-side display only.
pub mod published {
    pub const ZETA_M0: f64 = 0.58134;
    pub const ZETA_M2: f64 = -1.1743;
    pub const L_M0: f64 = 0.41535;
    pub const L_M2: f64 = -2.4071;
    pub const ETA_M0: f64 = 0.26924;
    pub const ETA_M2: f64 = 2.1465;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticConstants {
    pub zeta_m0: f64,
    pub zeta_m2: f64,
    pub l_m0: f64,
    pub l_m2: f64,
    /// `B` of the decay law.
    pub eta_m0: f64,
    /// `-log A_0`.
    pub eta_m2: f64,
    pub a0: f64,
}

fn check_unit(zeta: f64, what: &str) -> Result<()> {
    if zeta > 0.0 && zeta <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} needs zeta in (0, 1], got {zeta}")))
    }
}

/// `int_zeta^1 sqrt(t^-2 - 1) dt` in closed form.
pub fn integral_i(zeta: f64) -> Result<f64> {
    check_unit(zeta, "integral_i")?;
    Ok(integral_i_unchecked(zeta))
}

pub(crate) fn integral_i_unchecked(zeta: f64) -> f64 {
    let s = (1.0 - zeta * zeta).max(0.0).sqrt();
    s.ln_1p() - zeta.ln() - s
}

pub fn g0(zeta: f64) -> Result<f64> {
    check_unit(zeta, "g0")?;
    let w = 1.0 - zeta * zeta;
    Ok(integral_i_unchecked(zeta) - w.powf(1.5) / (2.0 - zeta * zeta))
}

pub fn g0_prime(zeta: f64) -> Result<f64> {
    check_unit(zeta, "g0_prime")?;
    let z2 = zeta * zeta;
    let p = 2.0 - z2;
    Ok(2.0 * (1.0 - z2).sqrt() * (2.0 - p * p) / (zeta * p * p))
}

/// `g(zeta; eps)`, half the `l_*`-derivative of `eta` through `O(eps^2)`.
pub fn g_eps(zeta: f64, eps: f64) -> Result<f64> {
    let z2 = zeta * zeta;
    let p = 2.0 - z2;
    Ok(g0(zeta)? + eps * eps * (1.0 - z2).sqrt() * (2.0 * z2 * z2 + 5.0 * z2 - 4.0) / (2.0 * z2 * p * p))
}

/// Bracket check, bisection, then Newton polish on `g0`.
fn zeta_m0() -> Result<f64> {
    let (mut a, mut b) = (0.58, 0.59);
    let (ga, gb) = (g0(a)?, g0(b)?);
    if !(ga > 0.0 && gb < 0.0) {
        return Err(Error::Domain(format!(
            "g0 does not change sign on [0.58, 0.59]: g0(0.58)={ga}, g0(0.59)={gb}"
        )));
    }
    for _ in 0..40 {
        let m = 0.5 * (a + b);
        if g0(m)? > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let mut z = 0.5 * (a + b);
    for _ in 0..5 {
        let dz = g0(z)? / g0_prime(z)?;
        z -= dz;
        if dz.abs() < 1e-17 {
            break;
        }
    }
    Ok(z)
}

pub fn solve_constants() -> Result<AsymptoticConstants> {
    let z0 = zeta_m0()?;
    let z2sq = z0 * z0;
    let w = 1.0 - z2sq;
    let p = 2.0 - z2sq;

    let zeta_m2 = -(2.0 * z2sq * z2sq + 5.0 * z2sq - 4.0) / (4.0 * z0 * (2.0 - p * p));
    // the same quantity before cancelling g0'
    let unsimplified =
        -w.sqrt() * (2.0 * z2sq * z2sq + 5.0 * z2sq - 4.0) / (2.0 * g0_prime(z0)? * z2sq * p * p);
    if (zeta_m2 - unsimplified).abs() > 1e-12 * zeta_m2.abs() {
        return Err(Error::Domain(format!(
            "zeta_m2 forms disagree: {zeta_m2} vs {unsimplified}"
        )));
    }

    let l_m0 = z2sq / w.sqrt();
    let l_m2 = zeta_m2 * z0 * p / w.powf(1.5) - (1.0 - 2.0 * z2sq) / (2.0 * w.powf(1.5));

    let i0 = integral_i_unchecked(z0);
    let eta_m0 = 2.0 * l_m0 * i0;
    let bracket = 2.0 + 1.0 / (2.0 * w) - l_m0 * l_m0 * (1.0 - 2.0 * z2sq) / (2.0 * z2sq * z2sq);
    let eta_m2 = 2.0 * l_m2 * i0 - 2.0 * l_m0 * zeta_m2 * (1.0 / z2sq - 1.0).sqrt() - (l_m0 * z0).ln()
        + bracket.ln();

    Ok(AsymptoticConstants {
        zeta_m0: z0,
        zeta_m2,
        l_m0,
        l_m2,
        eta_m0,
        eta_m2,
        a0: (-eta_m2).exp(),
    })
}

/// Process-wide cached constants.
pub fn constants() -> &'static AsymptoticConstants {
    static C: OnceLock<AsymptoticConstants> = OnceLock::new();
    C.get_or_init(|| solve_constants().expect("constant derivation is deterministic"))
}

/// `log Gamma` in z-units and lambda-units from the leading-order law.
pub fn gamma_asymptotic(eps: f64, we: f64) -> Result<(f64, f64)> {
    if !(eps > 0.0) || !(we > 0.0) {
        return Err(Error::InvalidParams(format!("need eps > 0 and We > 0, got {eps}, {we}")));
    }
    let c = constants();
    let e2 = eps * eps / we;
    let log_z = -e2.ln() - c.eta_m0 / e2 - c.eta_m2;
    Ok((log_z, log_z - eps.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;

    // composite Gauss-Legendre on t = 1 - u^2 to remove the sqrt endpoint
    fn quad_i(zeta: f64) -> f64 {
        let xs = [
            (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
            (-0.538_469_310_105_683, 0.478_628_670_499_366_5),
            (0.0, 0.568_888_888_888_888_9),
            (0.538_469_310_105_683, 0.478_628_670_499_366_5),
            (0.906_179_845_938_664, 0.236_926_885_056_189_1),
        ];
        let umax = (1.0 - zeta).sqrt();
        let n = 2000;
        let h = umax / n as f64;
        let mut s = 0.0;
        for k in 0..n {
            let a = k as f64 * h;
            for &(x, w) in &xs {
                let u = a + 0.5 * h * (1.0 + x);
                let t = 1.0 - u * u;
                s += w * 0.5 * h * 2.0 * u * (1.0 / (t * t) - 1.0).sqrt();
            }
        }
        s
    }

    #[test]
    fn integral_matches_quadrature() {
        for &z in &[0.05, 0.3, 0.5, 0.581_34, 0.8, 0.99] {
            let q = quad_i(z);
            assert!((integral_i(z).unwrap() - q).abs() < 1e-12, "zeta={z}");
        }
        assert_eq!(integral_i(1.0).unwrap(), 0.0);
        assert!(integral_i(0.0).is_err());
        assert!(integral_i(1.2).is_err());
    }

    #[test]
    fn g0_prime_is_derivative() {
        for &z in &[0.2, 0.45, 0.58, 0.7, 0.9] {
            let h = 1e-6;
            let fd = (g0(z + h).unwrap() - g0(z - h).unwrap()) / (2.0 * h);
            assert!((fd - g0_prime(z).unwrap()).abs() < 1e-8 * fd.abs().max(1.0));
        }
    }

    #[test]
    fn internal_consistency() {
        let c = solve_constants().unwrap();
        assert!(g0(c.zeta_m0).unwrap().abs() < 1e-12);
        assert!(g0_prime(c.zeta_m0).unwrap() < 0.0);
        assert!((c.l_m0 - c.zeta_m0.powi(2) / (1.0 - c.zeta_m0.powi(2)).sqrt()).abs() < 1e-10);
        assert!((c.eta_m0 - 2.0 * c.l_m0 * integral_i(c.zeta_m0).unwrap()).abs() < 1e-10);
        assert!((c.a0 - (-c.eta_m2).exp()).abs() < 1e-15);
    }

    #[test]
    fn g0_monotone_on_j() {
        let end = (2.0 - 2f64.sqrt()).sqrt();
        for k in 1..100 {
            let z = end * k as f64 / 100.0;
            assert!(g0_prime(z).unwrap() < 0.0, "zeta={z}");
        }
    }

    #[test]
    fn asymptotic_gamma_examples() {
        let (lz, ll) = gamma_asymptotic(0.3, 1.0).unwrap();
        assert!((lz.exp() - 0.065_28).abs() < 1e-4);
        assert!((ll - (lz - 0.3f64.ln())).abs() < 1e-14);
        let (lz, _) = gamma_asymptotic(0.02, 1.0).unwrap();
        assert!((lz - (2.0 * 50f64.ln() - 0.269_236_665_806_088 / 4e-4 - 2.146_526_563)).abs() < 1e-6);
        let a = gamma_asymptotic(0.2, 4.0).unwrap().0;
        let b = gamma_asymptotic(0.1, 1.0).unwrap().0;
        assert!((a - b).abs() < 1e-12);
    }
}
