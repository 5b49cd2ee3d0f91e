//! The resonance condition `z h_l(z) + Q h_l'(z) = 0` and direct complex
//! Newton on it.
//!
//! Newton runs on `g(z) = z + Q h_l'(z)/h_l(z)`, which has the same roots and
//! never overflows; `g' = 1 + Q r'` with `r' = -(2/z) r - (1 - l(l+1)/z^2) - r^2`
//! from the spherical Bessel equation.

use crate::specfun::{eval_jy, hankel_log_derivative, log_jy_ratio};
use crate::{Error, Result};
use num_complex::Complex64 as C;
use serde::Serialize;

/// Direct Newton is refused below this `|Im z| / Re z`.
pub const MIN_IM_RATIO: f64 = 1e-13;
pub const RESIDUAL_TOL: f64 = 1e-10;
const MAX_ITER: usize = 100;
const MAX_HALVINGS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalParams {
    pub l: u32,
    pub eps: f64,
    pub we: f64,
}

impl PhysicalParams {
    pub fn new(l: u32, eps: f64, we: f64) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidParams(format!("mode index must be >= 2, got {l}")));
        }
        if !(eps > 0.0 && eps <= 0.5) {
            return Err(Error::InvalidParams(format!("eps must lie in (0, 0.5], got {eps}")));
        }
        if !(we > 0.0) || !we.is_finite() {
            return Err(Error::InvalidParams(format!("We must be positive, got {we}")));
        }
        Ok(Self { l, eps, we })
    }

    /// `eps / sqrt(We)`: the only combination that enters the problem.
    pub fn eps_eff(&self) -> f64 {
        self.eps / self.we.sqrt()
    }

    fn c(&self) -> f64 {
        let l = self.l as f64;
        l * (l + 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    SmallL,
    MidL,
    Transition,
    LargeL,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::SmallL => "small-l",
            Regime::MidL => "mid-l",
            Regime::Transition => "transition",
            Regime::LargeL => "large-l",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceRoot {
    pub params: PhysicalParams,
    pub z: C,
    pub lambda: C,
    pub regime: Regime,
    pub residual: f64,
    pub iterations: usize,
}

pub fn q_param(p: &PhysicalParams) -> f64 {
    let l = p.l as f64;
    (l + 2.0) * (l - 1.0) * p.eps * p.eps / p.we
}

pub fn regime_of(p: &PhysicalParams) -> Regime {
    let e2 = p.eps_eff().powi(2);
    let l = p.l as f64;
    if p.l <= 10 && q_param(p) <= 0.5 {
        Regime::SmallL
    } else if l < 0.1 / e2 {
        Regime::MidL
    } else if l >= 10.0 / e2 {
        Regime::LargeL
    } else {
        Regime::Transition
    }
}

/// `z h_l + Q h_l'` from the Bessel values themselves.
pub fn residual(p: &PhysicalParams, z: C) -> Result<C> {
    let e = eval_jy(p.l, z)?;
    Ok(z * e.h() + q_param(p) * e.hp())
}

/// `|z h + Q h'| / (|z h| + |Q h'|)`, evaluated through `h'/h` so it exists
/// even where `h` does not fit in a double.
pub fn normalized_residual(p: &PhysicalParams, z: C) -> Result<f64> {
    let r = hankel_log_derivative(p.l, z)?;
    let qr = q_param(p) * r;
    Ok((z + qr).norm() / (z.norm() + qr.norm()))
}

/// Three-term small-`Q` series for `x^2`.
pub fn small_l_x2_series(p: &PhysicalParams) -> f64 {
    let l = p.l as f64;
    let q = q_param(p);
    (l + 1.0) * q
        * (1.0 - q / (2.0 * l - 1.0) + q * q * (l - 4.0) / ((2.0 * l - 3.0) * (2.0 * l - 1.0).powi(2)))
}

/// Log of the estimated `|Im z|` for `1 << l << eps^-2`; no window check.
pub fn mid_l_log_im_estimate(p: &PhysicalParams) -> f64 {
    let l = p.l as f64;
    let q = q_param(p);
    let s = (q * (l + 1.0)).sqrt();
    let e = std::f64::consts::E;
    s.ln() - (2.0 * e).ln()
        + (2.0 * l + 1.0) * (e * s / (2.0 * l)).ln()
        + (l + 0.5) * (1.0 - q / (2.0 * l - 1.0)).ln()
}

pub fn seed_small_l(p: &PhysicalParams) -> Result<C> {
    let q = q_param(p);
    if p.l > 10 || q > 0.5 {
        return Err(Error::Regime(format!(
            "small-l seed needs l <= 10 and Q <= 0.5, got l={}, Q={q:.4}",
            p.l
        )));
    }
    Ok(C::new(small_l_x2_series(p).sqrt(), 0.0))
}

pub fn seed_mid_l(p: &PhysicalParams) -> Result<C> {
    let l = p.l as f64;
    let lim = 0.1 / p.eps_eff().powi(2);
    if !(l > 10.0 && l < lim) {
        return Err(Error::Regime(format!(
            "mid-l seed needs 10 < l < {lim:.1}, got l={}",
            p.l
        )));
    }
    let x2 = small_l_x2_series(p);
    if !(x2 > 0.0) {
        return Err(Error::Regime(format!("small-Q series is not positive at l={}", p.l)));
    }
    Ok(C::new(x2.sqrt(), -mid_l_log_im_estimate(p).exp()))
}

pub fn seed_large_l(p: &PhysicalParams) -> Result<C> {
    let lim = 10.0 / p.eps_eff().powi(2);
    if (p.l as f64) < lim {
        return Err(Error::Regime(format!(
            "large-l seed needs l >= {lim:.1}, got l={}",
            p.l
        )));
    }
    Ok(C::new(0.0, -q_param(p)))
}

/// A-priori estimate of `ln|Im z|` near `x` where one is available.
pub fn expected_log_abs_im(p: &PhysicalParams, x: f64) -> Option<f64> {
    match regime_of(p) {
        Regime::SmallL | Regime::MidL => Some(mid_l_log_im_estimate(p)),
        Regime::Transition => log_jy_ratio(p.l, x)
            .ok()
            .map(|r| r.value - 2.0 * p.eps_eff().ln()),
        Regime::LargeL => None,
    }
}

fn g_and_dg(p: &PhysicalParams, q: f64, z: C) -> Result<(C, C, f64)> {
    let r = hankel_log_derivative(p.l, z)?;
    let rp = -2.0 / z * r - (1.0 - p.c() / (z * z)) - r * r;
    let g = z + q * r;
    let scale = z.norm() + (q * r).norm();
    Ok((g, 1.0 + q * rp, scale))
}

/// Damped complex Newton from `seed`.
pub fn find_root(p: &PhysicalParams, seed: C) -> Result<ResonanceRoot> {
    let q = q_param(p);
    let regime = regime_of(p);
    if seed.im > 0.0 {
        return Err(Error::InvalidParams(format!("seed {seed} is in the upper half plane")));
    }
    let r0 = normalized_residual(p, seed)?;
    if !(r0 < 0.5) {
        return Err(Error::InvalidParams(format!(
            "seed {seed} has normalized residual {r0:.3} (needs < 0.5)"
        )));
    }
    let floor = (MIN_IM_RATIO * seed.re.abs()).ln();
    if seed.im != 0.0 && seed.im.abs() < MIN_IM_RATIO * seed.re.abs() {
        return Err(precision_error(p, regime));
    }
    if let Some(lg) = expected_log_abs_im(p, seed.re) {
        if lg < floor {
            return Err(precision_error(p, regime));
        }
    }

    let mut z = seed;
    let (mut g, mut dg, mut scale) = g_and_dg(p, q, z)?;
    let mut converged = false;
    let mut it = 0;
    while it < MAX_ITER {
        it += 1;
        let step = -g / dg;
        let noise = 16.0 * f64::EPSILON * scale;
        let mut lam = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let zn = z + lam * step;
            if let Ok(v) = g_and_dg(p, q, zn) {
                if v.0.norm() <= g.norm().max(noise) {
                    accepted = Some((zn, v));
                    break;
                }
            }
            lam *= 0.5;
        }
        let Some((zn, (gn, dgn, sn))) = accepted else {
            break;
        };
        let dz = zn - z;
        z = zn;
        g = gn;
        dg = dgn;
        scale = sn;
        let re_ok = dz.re.abs() <= 4.0 * f64::EPSILON * z.norm();
        let im_ok = dz.im.abs() <= 1e-12 * z.im.abs();
        if re_ok && im_ok {
            converged = true;
            break;
        }
    }

    let res = g.norm() / scale;
    if !converged || !(res <= RESIDUAL_TOL) {
        return Err(Error::NoConvergence {
            iterations: it,
            residual: res,
            best_re: z.re,
            best_im: z.im,
        });
    }
    if z.im.abs() < MIN_IM_RATIO * z.re.abs() {
        return Err(precision_error(p, regime));
    }
    if z.im >= 0.0 {
        return Err(Error::Domain(format!(
            "Newton from {seed} ended at {z}, outside the lower half plane"
        )));
    }
    let mirror = normalized_residual(p, -z.conj())?;
    if !(mirror <= RESIDUAL_TOL) {
        return Err(Error::Domain(format!(
            "reflected root -conj({z}) has residual {mirror:e}"
        )));
    }
    Ok(ResonanceRoot {
        params: *p,
        z,
        lambda: z / p.eps,
        regime,
        residual: res,
        iterations: it,
    })
}

fn precision_error(p: &PhysicalParams, regime: Regime) -> Error {
    Error::Precision(format!(
        "|Im z|/Re z < {MIN_IM_RATIO:e} for l={} eps={} ({regime}); use the scaled solver",
        p.l, p.eps
    ))
}

/// Seed chosen by regime. The transition regime needs the scaled solver to
/// supply a seed (see [`crate::gamma::resonance`]).
pub fn regime_seed(p: &PhysicalParams) -> Result<C> {
    match regime_of(p) {
        Regime::SmallL => seed_small_l(p),
        Regime::MidL => seed_mid_l(p),
        Regime::LargeL => seed_large_l(p),
        Regime::Transition => Err(Error::Regime(format!(
            "l={} eps={} is in the transition regime; seed it from the scaled solver",
            p.l, p.eps
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(l: u32, eps: f64) -> PhysicalParams {
        PhysicalParams::new(l, eps, 1.0).unwrap()
    }

    #[test]
    fn q_examples() {
        assert!((q_param(&pp(2, 0.1)) - 0.04).abs() < 1e-15);
        let a = q_param(&PhysicalParams::new(2, 0.1, 2.0).unwrap());
        let b = q_param(&pp(2, 0.1 / 2f64.sqrt()));
        assert!((a - 0.02).abs() < 1e-15 && (a - b).abs() < 1e-15);
        assert!((q_param(&pp(1000, 0.1)) - 10_009.98).abs() < 1e-9);
    }

    #[test]
    fn params_validated() {
        assert!(PhysicalParams::new(1, 0.1, 1.0).is_err());
        assert!(PhysicalParams::new(2, 0.6, 1.0).is_err());
        assert!(PhysicalParams::new(2, 0.1, 0.0).is_err());
    }

    #[test]
    fn small_l_seed_example() {
        let p = pp(2, 0.1);
        assert!((small_l_x2_series(&p) - 0.118_357_3).abs() < 1e-7);
        assert!((seed_small_l(&p).unwrap().re - 0.344_031_0).abs() < 1e-6);
    }

    #[test]
    fn small_l_root() {
        let p = pp(2, 0.1);
        let r = find_root(&p, seed_small_l(&p).unwrap()).unwrap();
        assert_eq!(r.regime, Regime::SmallL);
        assert!((r.z.re - 0.344_031).abs() < 2e-5);
        let ratio = r.z.im.abs() / 0.1f64.powi(6);
        assert!(ratio > 1e-3 && ratio < 1e3);
        assert!(r.residual <= RESIDUAL_TOL);
    }

    #[test]
    fn real_axis_is_not_a_root() {
        let p = pp(2, 0.1);
        let x = seed_small_l(&p).unwrap().re;
        let r = residual(&p, C::new(x, 0.0)).unwrap();
        assert!(r.im != 0.0);
        let a = normalized_residual(&p, C::new(0.344, -1e-6)).unwrap();
        let b = normalized_residual(&p, C::new(-0.344, -1e-6)).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn large_l_root() {
        let p = pp(1000, 0.1);
        assert!(matches!(seed_large_l(&pp(50, 0.1)), Err(Error::Regime(_))));
        let r = find_root(&p, seed_large_l(&p).unwrap()).unwrap();
        let q = q_param(&p);
        assert!((r.z + C::new(0.0, q)).norm() / q <= 0.1);
        assert!(-r.z.im >= 100.0);
        assert_eq!(r.regime, Regime::LargeL);
    }

    #[test]
    fn mid_l_seed_example() {
        let p = pp(20, 0.05);
        assert!((q_param(&p) - 1.045).abs() < 1e-12);
        let s = seed_mid_l(&p).unwrap();
        assert!((s.re - 4.62).abs() < 0.01);
        // |Im z| ~ 1e-21 here, far below what direct Newton can resolve
        assert!(mid_l_log_im_estimate(&p) < -45.0);
        assert!(matches!(find_root(&p, s), Err(Error::Precision(_))));
    }

    #[test]
    fn tiny_imaginary_part_refused() {
        // l near the transition optimum at eps = 0.02
        let p = pp(1040, 0.02);
        let x = 1040.5 * 0.58;
        assert!(matches!(find_root(&p, C::new(x, 0.0)), Err(Error::Precision(_))));
    }
}
