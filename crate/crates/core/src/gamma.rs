//! Decay rate `Gamma(eps) = min_{l >= 2} (-Im z_l)` and fits of `(A, B)`.
//!
//! All mode computations run at `eps' = eps/sqrt(We)` with `We = 1`, since
//! `Q` is the only place the two enter. Rates are kept as natural logs in
//! `z`-units; `lambda = z/eps` gives the `lambda`-unit value.

use crate::constants::{constants, gamma_asymptotic};
use crate::dispersion::{
    find_root, mid_l_log_im_estimate, regime_of, regime_seed, PhysicalParams, Regime, MIN_IM_RATIO,
};
use crate::scaled::{l_star_of, solve_fg, ScaledState, SolveWindow};
use crate::{Error, Result};
use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest `eps/sqrt(We)` for which the regime ordering is trusted.
pub const MAX_EPS_EFF: f64 = 0.35;
/// Below this optimal `l` every mode up to just past it is solved outright.
const FULL_SCAN_L: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    Direct,
    Scaled,
}

impl fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveMethod::Direct => "direct",
            SolveMethod::Scaled => "scaled",
        })
    }
}

impl std::str::FromStr for SolveMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(SolveMethod::Direct),
            "scaled" => Ok(SolveMethod::Scaled),
            _ => Err(Error::Parse(format!("unknown method '{s}'"))),
        }
    }
}

/// `None` picks per mode: direct when the imaginary part is resolvable.
pub type MethodChoice = Option<SolveMethod>;

/// One resonance of one mode, in whichever representation produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeSolution {
    pub l: u32,
    pub eps: f64,
    pub we: f64,
    pub regime: Regime,
    pub x: f64,
    /// `ln(-Im z)`; `Im z` itself may be below the double range.
    pub log_neg_im: f64,
    pub zeta: f64,
    pub eta: f64,
    pub method: SolveMethod,
    /// Normalized dispersion residual (direct) or `|F| + |G|` (scaled).
    pub residual: f64,
}

impl ModeSolution {
    /// `z`, with `Im z` flushed to zero if it underflows.
    pub fn z(&self) -> C {
        C::new(self.x, -self.log_neg_im.exp())
    }

    fn from_scaled(p: &PhysicalParams, e: f64, s: &ScaledState, residual: f64) -> Self {
        let (x, log_neg_im) = s.to_root(e);
        Self {
            l: p.l,
            eps: p.eps,
            we: p.we,
            regime: regime_of(p),
            x,
            log_neg_im,
            zeta: s.zeta,
            eta: s.eta,
            method: SolveMethod::Scaled,
            residual,
        }
    }

    fn from_direct(p: &PhysicalParams, e: f64, z: C, residual: f64) -> Self {
        let e2 = e * e;
        let ls = l_star_of(p.l, e);
        let log_neg_im = (-z.im).ln();
        Self {
            l: p.l,
            eps: p.eps,
            we: p.we,
            regime: regime_of(p),
            x: z.re,
            log_neg_im,
            zeta: e2 * z.re / ls,
            eta: -e2 * (e2.ln() + log_neg_im),
            method: SolveMethod::Direct,
            residual,
        }
    }
}

fn scaled_mode(p: &PhysicalParams, e: f64) -> Result<ModeSolution> {
    let sol = solve_fg(l_star_of(p.l, e), e)?;
    Ok(ModeSolution::from_scaled(p, e, &sol.state, sol.residual))
}

fn direct_mode(p: &PhysicalParams, e: f64, seed: C) -> Result<ModeSolution> {
    let q = PhysicalParams::new(p.l, e, 1.0)?;
    let r = find_root(&q, seed)?;
    Ok(ModeSolution::from_direct(p, e, r.z, r.residual))
}

/// The physically relevant resonance of mode `p.l`, seeded automatically.
/// In the transition regime the scaled solution seeds the direct solver.
pub fn resonance(p: &PhysicalParams, method: MethodChoice) -> Result<ModeSolution> {
    let e = p.eps_eff();
    let unit = PhysicalParams::new(p.l, e, 1.0)?;
    let in_window = SolveWindow::default().check_l_star(l_star_of(p.l, e)).is_ok();
    if method == Some(SolveMethod::Scaled) {
        return scaled_mode(p, e);
    }
    let scaled = if in_window { Some(scaled_mode(p, e)) } else { None };
    match scaled {
        Some(Ok(s)) => {
            let resolvable = s.log_neg_im - s.x.ln() >= MIN_IM_RATIO.ln();
            if resolvable || method == Some(SolveMethod::Direct) {
                match direct_mode(p, e, s.z()) {
                    Ok(d) => Ok(d),
                    Err(err) if method.is_some() => Err(err),
                    Err(_) => Ok(s),
                }
            } else {
                Ok(s)
            }
        }
        other => {
            // regime seeds cover the small-, mid- and large-l ends
            match regime_seed(&unit).and_then(|seed| direct_mode(p, e, seed)) {
                Ok(d) => Ok(d),
                Err(err) => match other {
                    Some(Err(serr)) if matches!(err, Error::Regime(_)) => Err(serr),
                    _ => Err(err),
                },
            }
        }
    }
}

fn eff(eps: f64, we: f64) -> Result<f64> {
    if !(we > 0.0) || !we.is_finite() {
        return Err(Error::InvalidParams(format!("We must be positive, got {we}")));
    }
    let e = eps / we.sqrt();
    if !(e > 0.0) {
        return Err(Error::InvalidParams(format!("eps must be positive, got {eps}")));
    }
    if e > MAX_EPS_EFF {
        return Err(Error::Refused(format!(
            "eps/sqrt(We) = {e} exceeds {MAX_EPS_EFF}: the ordering of the small-l, \
             transition and large-l regimes is not established there"
        )));
    }
    Ok(e)
}

/// Integer `l` maximizing `eta` near the continuous optimum.
pub fn optimal_l(eps: f64, we: f64) -> Result<u32> {
    let e = eff(eps, we)?;
    let c = constants();
    let e2 = e * e;
    let ls = c.l_m0 + e2 * c.l_m2;
    let big_l = ls / e2;
    let l = 0.5 * ((1.0 + 4.0 * big_l * big_l).sqrt() - 1.0);
    let lo = (l.floor() as i64 - 1).max(2) as u32;
    let hi = (l.ceil() as i64 + 1).max(2) as u32;
    let eta = |l: u32| solve_fg(l_star_of(l, e), e).ok().map(|s| s.state.eta);
    let mut best: Option<(u32, f64)> = None;
    for l in lo..=hi {
        if let Some(v) = eta(l) {
            if best.map_or(true, |(_, b)| v > b) {
                best = Some((l, v));
            }
        }
    }
    if best.is_none() {
        let top = (3.0 / e2).ceil() as u32;
        best = (2..=top)
            .into_par_iter()
            .filter_map(|l| eta(l).map(|v| (l, v)))
            .reduce_with(|a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a });
    }
    best.map(|(l, _)| l).ok_or_else(|| {
        Error::Window(format!("no mode l in [2, {}] is solvable at eps' = {e}", (3.0 / e2).ceil()))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaResult {
    pub eps: f64,
    pub we: f64,
    pub l_opt: u32,
    /// `ln Gamma` in `z`-units, i.e. `ln(-Im z)` at the minimizer.
    pub log_gamma_z: f64,
    /// `ln Gamma` in `lambda`-units, `log_gamma_z - ln eps`.
    pub log_gamma_lambda: f64,
    pub eta_opt: f64,
    pub zeta_opt: f64,
    pub method: SolveMethod,
    /// `(l, ln(-Im z))` of every mode actually solved, sorted by `l`.
    pub candidates: Vec<(u32, f64)>,
    /// `(l, estimated ln|Im z|)` of mid-range modes checked by estimate only.
    pub guard: Vec<(u32, f64)>,
    /// `l` maximizing `eta` near the continuous optimum.
    pub l_eta_max: u32,
    /// Two-term asymptotic law, `z`-units.
    pub log_gamma_asym_z: f64,
    pub root: ModeSolution,
}

impl GammaResult {
    /// `Gamma_exact / Gamma_asym`, linear.
    pub fn ratio(&self) -> f64 {
        (self.log_gamma_z - self.log_gamma_asym_z).exp()
    }
}

/// `Gamma(eps)` at Weber number `we`.
pub fn gamma(eps: f64, we: f64) -> Result<GammaResult> {
    gamma_with(eps, we, None)
}

/// [`gamma`] with every mode forced through one solver.
pub fn gamma_with(eps: f64, we: f64, method: MethodChoice) -> Result<GammaResult> {
    let e = eff(eps, we)?;
    let l_eta = optimal_l(e, 1.0)?;
    let mut ls: Vec<u32> = if l_eta <= FULL_SCAN_L {
        (2..=l_eta + 3).collect()
    } else {
        (2..=10).chain(l_eta - 3..=l_eta + 3).collect()
    };
    ls.dedup();
    let solved: Vec<ModeSolution> = ls
        .par_iter()
        .filter_map(|&l| {
            let p = PhysicalParams::new(l, eps, we).ok()?;
            resonance(&p, method).ok()
        })
        .collect();
    let best = solved
        .iter()
        .min_by(|a, b| a.log_neg_im.total_cmp(&b.log_neg_im))
        .copied()
        .ok_or_else(|| Error::NoConvergence {
            iterations: 0,
            residual: f64::NAN,
            best_re: f64::NAN,
            best_im: f64::NAN,
        })?;
    let candidates = solved.iter().map(|s| (s.l, s.log_neg_im)).collect();
    let guard = if l_eta > FULL_SCAN_L {
        let top = ((0.1 / (e * e)) as u32).min(l_eta - 4);
        (11..=top)
            .filter_map(|l| PhysicalParams::new(l, e, 1.0).ok())
            .map(|p| (p.l, mid_l_log_im_estimate(&p)))
            .collect()
    } else {
        Vec::new()
    };
    let (log_gamma_asym_z, _) = gamma_asymptotic(eps, we)?;
    Ok(GammaResult {
        eps,
        we,
        l_opt: best.l,
        log_gamma_z: best.log_neg_im,
        log_gamma_lambda: best.log_neg_im - eps.ln(),
        eta_opt: best.eta,
        zeta_opt: best.zeta,
        method: best.method,
        candidates,
        guard,
        l_eta_max: l_eta,
        log_gamma_asym_z,
        root: best,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub b_fit: f64,
    pub log_a_fit: f64,
    pub residual_rms: f64,
    pub eps_range: (f64, f64),
    pub n: usize,
}

impl FitResult {
    /// Fitted `ln Gamma_z` at `eps`; refuses to extrapolate.
    pub fn predict(&self, eps: f64) -> Result<f64> {
        let (a, b) = self.eps_range;
        if eps < a || eps > b {
            return Err(Error::InvalidParams(format!(
                "eps = {eps} outside the fitted range [{a}, {b}]"
            )));
        }
        Ok(self.log_a_fit - self.b_fit / (eps * eps) - 2.0 * eps.ln())
    }
}

/// Least-squares line of `ln Gamma_z + 2 ln eps` against `eps^-2`.
/// Points are `(eps', ln Gamma_z)` with `We` already scaled out.
pub fn fit_ab(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 4 {
        return Err(Error::InsufficientPoints {
            need: 4,
            got: points.len(),
        });
    }
    if let Some(&(e, g)) = points.iter().find(|(e, g)| !(*e > 0.0) || !g.is_finite()) {
        return Err(Error::InvalidParams(format!("bad sweep point ({e}, {g})")));
    }
    let xs: Vec<f64> = points.iter().map(|(e, _)| 1.0 / (e * e)).collect();
    let ys: Vec<f64> = points.iter().map(|(e, g)| g + 2.0 * e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidParams("sweep needs at least two distinct eps".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - icpt - slope * x).powi(2)).sum();
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(FitResult {
        b_fit: -slope,
        log_a_fit: icpt,
        residual_rms: (rss / n).sqrt(),
        eps_range: (lo, hi),
        n: points.len(),
    })
}
