//! Logarithmically scaled form of the resonance condition.
//!
//! With `l_* = sqrt(l(l+1)) eps^2`, `x = l_* zeta / eps^2` and
//! `Im z = -eps^-2 exp(-eta/eps^2)`, the imaginary and real parts of
//! `z h + Q h' = 0` become two real equations `F(zeta, eta) = 0`,
//! `G(zeta, eta) = 0` whose coefficients are ratios of Bessel values and
//! whose only exponentially small inputs are `e^{-eta/eps^2}` and `j/y`, both
//! carried as logarithms. Everything here is in units with `We = 1`; pass
//! `eps / sqrt(We)` for other Weber numbers.
//!
//! `l_*` is treated as a continuous parameter, so the Bessel order
//! `nu = (sqrt(1 + 4 (l_*/eps^2)^2) - 1)/2` is in general not an integer.

use crate::constants::integral_i_unchecked;
#[cfg(test)]
use crate::constants::constants;
use crate::specfun::{log_jy, LogJy};
use crate::{Error, Result};
use serde::Serialize;

pub const DEFAULT_DELTA: f64 = 0.1;
pub const FG_TOL: f64 = 1e-12;
const MAX_ITER: usize = 50;
const MAX_HALVINGS: usize = 20;
/// Exponentially small terms below `e^-LOG_DROP` are dropped from `F`.
const LOG_DROP: f64 = 690.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveWindow {
    pub delta: f64,
    pub l_star_range: (f64, f64),
}

impl SolveWindow {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::InvalidParams(format!("delta must lie in (0, 0.5), got {delta}")));
        }
        let a = delta * delta / (1.0 - delta * delta).sqrt();
        let e = 1.0 - delta;
        let b = e * e / (1.0 - e * e).sqrt();
        Ok(Self {
            delta,
            l_star_range: (a, b),
        })
    }

    /// `eta_0 = 2 l_* int_{1-delta}^1 sqrt(t^-2 - 1) dt`.
    pub fn eta_floor(&self, l_star: f64) -> f64 {
        2.0 * l_star * integral_i_unchecked(1.0 - self.delta)
    }

    pub fn check_l_star(&self, l_star: f64) -> Result<()> {
        let (a, b) = self.l_star_range;
        if l_star > a && l_star < b {
            Ok(())
        } else {
            Err(Error::Window(format!("l_* = {l_star} outside ({a:.5}, {b:.5})")))
        }
    }

    pub fn check_zeta(&self, zeta: f64) -> Result<()> {
        if zeta > self.delta && zeta < 1.0 - self.delta {
            Ok(())
        } else {
            Err(Error::Window(format!(
                "zeta = {zeta} outside ({}, {})",
                self.delta,
                1.0 - self.delta
            )))
        }
    }
}

impl Default for SolveWindow {
    fn default() -> Self {
        Self::new(DEFAULT_DELTA).expect("default delta is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledState {
    pub l_star: f64,
    pub q: f64,
    pub zeta: f64,
    pub eta: f64,
}

impl ScaledState {
    pub fn new(l_star: f64, eps: f64, zeta: f64, eta: f64) -> Self {
        Self {
            l_star,
            q: l_star - 2.0 * eps.powi(4) / l_star,
            zeta,
            eta,
        }
    }

    /// `(x, ln(-Im z))` of the root this state describes.
    pub fn to_root(&self, eps: f64) -> (f64, f64) {
        let e2 = eps * eps;
        (self.l_star * self.zeta / e2, -self.eta / e2 - 2.0 * eps.ln())
    }

    /// Scale a root `z = x + i y` (`y < 0`) of mode `l`.
    pub fn from_root(l: u32, eps: f64, x: f64, y: f64) -> Result<Self> {
        if !(y < 0.0) {
            return Err(Error::Domain(format!("Im z must be negative, got {y}")));
        }
        let e2 = eps * eps;
        let lf = l as f64;
        let l_star = (lf * (lf + 1.0)).sqrt() * e2;
        Ok(Self::new(l_star, eps, e2 * x / l_star, -e2 * (-e2 * y).ln()))
    }
}

/// `l_*` of integer mode `l`.
pub fn l_star_of(l: u32, eps: f64) -> f64 {
    let lf = l as f64;
    (lf * (lf + 1.0)).sqrt() * eps * eps
}

/// Values of a Bessel function and its derivatives at `x + i y`, each
/// divided by the value at `x`: `[Re u, Im u / y, Re u', Im u' / y]`.
fn shifted(d1: f64, x: f64, c: f64, y: f64) -> Result<[f64; 4]> {
    if y == 0.0 {
        // d2 from the differential equation
        let d2 = -(2.0 * x * d1 + (x * x - c)) / (x * x);
        return Ok([1.0, d1, d1, d2]);
    }
    if y.abs() > 0.5 * x {
        return Err(Error::Window(format!(
            "|Im z| = {:.3e} is not small next to Re z = {x:.3e}",
            y.abs()
        )));
    }
    // d_k = u^(k)/u from the differentiated equation
    let mut d = vec![1.0, d1];
    let mut p = [0.0; 4];
    let mut fact = 1.0; // y^k / k!
    let x2 = x * x;
    for k in 0..400usize {
        if d.len() < k + 2 {
            unreachable!();
        }
        let kf = k as f64;
        let mut next = (2.0 * kf + 2.0) * x * d[k + 1] + (kf * (kf + 1.0) + x2 - c) * d[k];
        if k >= 1 {
            next += 2.0 * kf * x * d[k - 1];
        }
        if k >= 2 {
            next += kf * (kf - 1.0) * d[k - 2];
        }
        d.push(-next / x2);

        let (even, sign) = (k % 2 == 0, if (k / 2) % 2 == 0 { 1.0 } else { -1.0 });
        let t0 = d[k] * fact * sign;
        let t1 = d[k + 1] * fact * sign;
        if even {
            p[0] += t0;
            p[2] += t1;
        } else {
            // y^(k-1)/k! = fact / y
            p[1] += t0 / y;
            p[3] += t1 / y;
        }
        let scale = p.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if k > 4 && t0.abs().max(t1.abs()) < 1e-18 * scale * y.abs().min(1.0) {
            return Ok(p);
        }
        fact *= y / (kf + 1.0);
    }
    Err(Error::NoConvergence {
        iterations: 400,
        residual: f64::NAN,
        best_re: x,
        best_im: y,
    })
}

/// Bessel data of one evaluation point.
struct Point {
    x: f64,
    c: f64,
    big_q: f64,
    lj: LogJy,
}

fn point(s: &ScaledState, eps: f64) -> Result<Point> {
    let e2 = eps * eps;
    let big_l = s.l_star / e2;
    let c = big_l * big_l;
    let nu = 0.5 * ((1.0 + 4.0 * c).sqrt() - 1.0);
    let x = big_l * s.zeta;
    Ok(Point {
        x,
        c,
        big_q: big_l * s.q,
        lj: log_jy(nu, x)?,
    })
}

struct Terms {
    a: [f64; 4],
    b: [f64; 4],
    /// `y rho` with `rho = j(x)/y(x)`
    y_rho: f64,
    y2: f64,
    log_abs_rho: f64,
    rho_sign: f64,
}

fn terms(pt: &Point, s: &ScaledState, eps: f64) -> Result<Terms> {
    let e2 = eps * eps;
    let log_abs_y = -s.eta / e2 - 2.0 * eps.ln();
    let y = if log_abs_y > -LOG_DROP { -log_abs_y.exp() } else { 0.0 };
    let a = shifted(pt.lj.dlog_y, pt.x, pt.c, y)?;
    let b = shifted(pt.lj.dlog_j, pt.x, pt.c, y)?;
    let log_abs_rho = pt.lj.log_abs_ratio();
    let rho_sign = pt.lj.ratio_sign();
    let lyr = log_abs_y + log_abs_rho;
    let y_rho = if lyr > -LOG_DROP { -rho_sign * lyr.exp() } else { 0.0 };
    let y2 = if 2.0 * log_abs_y > -LOG_DROP { (2.0 * log_abs_y).exp() } else { 0.0 };
    Ok(Terms {
        a,
        b,
        y_rho,
        y2,
        log_abs_rho,
        rho_sign,
    })
}

fn im_bracket(pt: &Point, t: &Terms) -> f64 {
    // [y rho (x b2 + b1 + Q b4) - y^2 a2]
    t.y_rho * (pt.x * t.b[1] + t.b[0] + pt.big_q * t.b[3]) - t.y2 * t.a[1]
}

fn f_from(pt: &Point, t: &Terms, s: &ScaledState, eps: f64) -> f64 {
    let e2 = eps * eps;
    s.zeta + s.q * t.a[2] / t.a[0] + e2 / (s.l_star * t.a[0]) * im_bracket(pt, t)
}

fn g_from(pt: &Point, t: &Terms, s: &ScaledState, eps: f64) -> Result<f64> {
    let e2 = eps * eps;
    let sq = (1.0 / (s.zeta * s.zeta) - 1.0).sqrt();
    let n = pt.x * t.b[0] + pt.big_q * t.b[2] - t.y2 * t.b[1];
    let im = pt.x * t.a[0] + pt.big_q * t.a[2] + im_bracket(pt, t);
    let d = t.a[0] + pt.x * t.a[1] + pt.big_q * t.a[3] + sq * im;
    let ratio = -t.rho_sign * n / d;
    if !(ratio > 0.0) {
        return Err(Error::Domain(format!(
            "log argument of G is not positive at zeta={}, eta={}",
            s.zeta, s.eta
        )));
    }
    Ok(s.eta + e2 * (2.0 * eps.ln() + t.log_abs_rho + ratio.ln()))
}

fn f0(s: &ScaledState) -> f64 {
    s.zeta - s.l_star * (1.0 - s.zeta * s.zeta).sqrt() / s.zeta
}

fn g0(s: &ScaledState) -> f64 {
    s.eta - 2.0 * s.l_star * integral_i_unchecked(s.zeta)
}

fn check_state(s: &ScaledState, w: &SolveWindow) -> Result<()> {
    w.check_l_star(s.l_star)?;
    w.check_zeta(s.zeta)
}

pub fn f_eval(s: &ScaledState, eps: f64) -> Result<f64> {
    check_state(s, &SolveWindow::default())?;
    if eps == 0.0 {
        return Ok(f0(s));
    }
    let pt = point(s, eps)?;
    let t = terms(&pt, s, eps)?;
    Ok(f_from(&pt, &t, s, eps))
}

pub fn g_eval(s: &ScaledState, eps: f64) -> Result<f64> {
    check_state(s, &SolveWindow::default())?;
    if eps == 0.0 {
        return Ok(g0(s));
    }
    let pt = point(s, eps)?;
    let t = terms(&pt, s, eps)?;
    g_from(&pt, &t, s, eps)
}

fn fg(s: &ScaledState, eps: f64) -> Result<(f64, f64)> {
    if eps == 0.0 {
        return Ok((f0(s), g0(s)));
    }
    let pt = point(s, eps)?;
    let t = terms(&pt, s, eps)?;
    Ok((f_from(&pt, &t, s, eps), g_from(&pt, &t, s, eps)?))
}

/// Central-difference Jacobian `[[F_zeta, F_eta], [G_zeta, G_eta]]`.
pub fn jacobian(s: &ScaledState, eps: f64) -> Result<[[f64; 2]; 2]> {
    let hz = 1e-6 * s.zeta.max(0.1);
    let he = 1e-6 * s.eta.abs().max(0.1);
    let at = |dz: f64, de: f64| fg(&ScaledState { zeta: s.zeta + dz, eta: s.eta + de, ..*s }, eps);
    let (fp, gp) = at(hz, 0.0)?;
    let (fm, gm) = at(-hz, 0.0)?;
    let (fq, gq) = at(0.0, he)?;
    let (fr, gr) = at(0.0, -he)?;
    Ok([
        [(fp - fm) / (2.0 * hz), (fq - fr) / (2.0 * he)],
        [(gp - gm) / (2.0 * hz), (gq - gr) / (2.0 * he)],
    ])
}

/// `l_*` as a function of `zeta` through `O(eps^2)`.
fn l_star_expansion(zeta: f64, eps: f64) -> f64 {
    let w = 1.0 - zeta * zeta;
    zeta * zeta / w.sqrt() - eps * eps * (1.0 - 2.0 * zeta * zeta) / (2.0 * w.powf(1.5))
}

/// Two-term expansions of `zeta(l_*)` and `eta(l_*)`.
pub fn eta_expansion(l_star: f64, eps: f64) -> Result<(f64, f64)> {
    let w = SolveWindow::default();
    w.check_l_star(l_star)?;
    let f = |z: f64| l_star_expansion(z, eps) - l_star;
    // scan for the first sign change, then bisect
    let n = 400;
    let (mut a, mut b) = (f64::NAN, f64::NAN);
    let mut prev = (1e-3, f(1e-3));
    for k in 1..=n {
        let z = 1e-3 + (0.999 - 1e-3) * k as f64 / n as f64;
        let v = f(z);
        if prev.1 <= 0.0 && v >= 0.0 {
            a = prev.0;
            b = z;
            break;
        }
        prev = (z, v);
    }
    if a.is_nan() {
        return Err(Error::Window(format!("no zeta with l_*(zeta) = {l_star} at eps = {eps}")));
    }
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if f(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let zeta = 0.5 * (a + b);
    let z2 = zeta * zeta;
    let br = 2.0 + 1.0 / (2.0 * (1.0 - z2)) - l_star * l_star * (1.0 - 2.0 * z2) / (2.0 * z2 * z2);
    if !(br > 0.0) {
        return Err(Error::Window(format!("eta expansion undefined at zeta = {zeta}")));
    }
    let eta = 2.0 * l_star * integral_i_unchecked(zeta) + eps * eps * (br.ln() - (l_star * zeta).ln());
    Ok((zeta, eta))
}

/// Solution of the system with every exponentially small term dropped:
/// `F` becomes a scalar equation in `zeta` and `G` is explicit in `eta`.
fn seed_without_decay(l_star: f64, eps: f64) -> Result<ScaledState> {
    let w = SolveWindow::default();
    let f_at = |zeta: f64| -> Result<f64> {
        let s = ScaledState::new(l_star, eps, zeta, f64::INFINITY);
        let pt = point(&s, eps)?;
        let t = terms(&pt, &s, eps)?;
        Ok(f_from(&pt, &t, &s, eps))
    };
    let n = 80;
    let lo = w.delta;
    let hi = 1.0 - w.delta;
    let mut prev = (lo, f_at(lo)?);
    let mut br = None;
    for k in 1..=n {
        let z = lo + (hi - lo) * k as f64 / n as f64;
        let v = f_at(z)?;
        if prev.1.signum() != v.signum() {
            br = Some((prev.0, z));
            break;
        }
        prev = (z, v);
    }
    let (mut a, mut b) = br.ok_or_else(|| Error::Window(format!("F has no root in the window at l_* = {l_star}")))?;
    let fa = f_at(a)?;
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if f_at(m)?.signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    let zeta = 0.5 * (a + b);
    let s = ScaledState::new(l_star, eps, zeta, f64::INFINITY);
    let pt = point(&s, eps)?;
    let t = terms(&pt, &s, eps)?;
    // G = eta + (eta-independent) when the decay terms are absent
    let g = g_from(&pt, &t, &ScaledState { eta: 0.0, ..s }, eps)?;
    Ok(ScaledState { eta: -g, ..s })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledSolution {
    pub state: ScaledState,
    pub eps: f64,
    pub iterations: usize,
    /// `|F| + |G|` at the returned state.
    pub residual: f64,
}

fn newton(mut s: ScaledState, eps: f64, w: &SolveWindow) -> Result<ScaledSolution> {
    let (mut f, mut g) = fg(&s, eps)?;
    let mut it = 0;
    let mut small_steps = 0;
    while it < MAX_ITER {
        let r = f.abs() + g.abs();
        if r <= FG_TOL {
            break;
        }
        it += 1;
        let jm = jacobian(&s, eps)?;
        let det = jm[0][0] * jm[1][1] - jm[0][1] * jm[1][0];
        let size = (jm[0][0].abs() + jm[0][1].abs()) * (jm[1][0].abs() + jm[1][1].abs());
        if !(det.abs() > 1e-12 * size) {
            return Err(Error::SingularJacobian(format!(
                "det = {det:e} at zeta={}, eta={}",
                s.zeta, s.eta
            )));
        }
        let dz = -(jm[1][1] * f - jm[0][1] * g) / det;
        let de = -(-jm[1][0] * f + jm[0][0] * g) / det;
        let mut lam = 1.0;
        let mut next = None;
        for _ in 0..=MAX_HALVINGS {
            let t = ScaledState {
                zeta: s.zeta + lam * dz,
                eta: s.eta + lam * de,
                ..s
            };
            if w.check_zeta(t.zeta).is_ok() {
                if let Ok((fn_, gn)) = fg(&t, eps) {
                    if fn_.abs() + gn.abs() < r || (fn_.abs() + gn.abs() <= 1e2 * FG_TOL) {
                        next = Some((t, fn_, gn));
                        break;
                    }
                }
            }
            lam *= 0.5;
        }
        let Some((t, fn_, gn)) = next else {
            break;
        };
        let tiny = (lam * dz).abs() < 1e-15 && (lam * de).abs() < 1e-15 * s.eta.abs().max(1.0);
        s = t;
        f = fn_;
        g = gn;
        if tiny {
            small_steps += 1;
            if small_steps >= 2 {
                break;
            }
        }
    }
    let r = f.abs() + g.abs();
    // round-off in G grows with ln|j/y| ~ eta/eps^2
    let floor = FG_TOL.max(1e-15 * (s.eta / (eps * eps)).abs() * eps * eps * 8.0);
    if r > floor && r > 1e2 * FG_TOL {
        return Err(Error::NoConvergence {
            iterations: it,
            residual: r,
            best_re: s.zeta,
            best_im: s.eta,
        });
    }
    w.check_zeta(s.zeta)?;
    let eta_floor = w.eta_floor(s.l_star);
    if !(s.eta > eta_floor) {
        return Err(Error::Window(format!("eta = {} below the window floor {eta_floor}", s.eta)));
    }
    Ok(ScaledSolution {
        state: s,
        eps,
        iterations: it,
        residual: r,
    })
}

/// Damped 2D Newton on `(F, G)` at fixed `l_*`.
pub fn solve_fg(l_star: f64, eps: f64) -> Result<ScaledSolution> {
    let w = SolveWindow::default();
    w.check_l_star(l_star)?;
    if !(eps > 0.0 && eps <= 0.35) {
        return Err(Error::InvalidParams(format!("solve_fg needs 0 < eps <= 0.35, got {eps}")));
    }
    let first = eta_expansion(l_star, eps)
        .ok()
        .filter(|&(z, _)| w.check_zeta(z).is_ok())
        .map(|(z, e)| ScaledState::new(l_star, eps, z, e));
    if let Some(s) = first {
        if let Ok(sol) = newton(s, eps, &w) {
            return Ok(sol);
        }
    }
    newton(seed_without_decay(l_star, eps)?, eps, &w)
}

/// Continuous maximiser of `eta` over `l_*`: a coarse scan over the window
/// followed by golden-section refinement around the best sample.
pub fn eta_max_continuous(eps: f64) -> Result<ScaledSolution> {
    let w = SolveWindow::default();
    let (lo, hi) = w.l_star_range;
    let (lo, hi) = (lo * 1.001, hi.min(1.2));
    let eta = |l: f64| solve_fg(l, eps).map(|s| s.state.eta);
    let n = 48;
    let grid: Vec<f64> = (0..=n).map(|k| lo * (hi / lo).powf(k as f64 / n as f64)).collect();
    let mut best: Option<(usize, f64)> = None;
    for (k, &l) in grid.iter().enumerate() {
        if let Ok(e) = eta(l) {
            if best.map_or(true, |(_, b)| e > b) {
                best = Some((k, e));
            }
        }
    }
    let (k, _) = best.ok_or_else(|| Error::Window(format!("no solvable l_* at eps = {eps}")))?;
    let mut a = grid[k.saturating_sub(1)];
    let mut b = grid[(k + 1).min(n)];
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    // unsolvable points inside the bracket count as -inf; keep the best
    // solution seen, the bracket midpoint may sit on the window edge
    let mut best_sol: Option<ScaledSolution> = None;
    let mut eta = |l: f64| match solve_fg(l, eps) {
        Ok(s) => {
            if best_sol.map_or(true, |b| s.state.eta > b.state.eta) {
                best_sol = Some(s);
            }
            s.state.eta
        }
        Err(_) => f64::NEG_INFINITY,
    };
    let mut f1 = eta(x1);
    let mut f2 = eta(x2);
    while b - a > 1e-8 * b {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = eta(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = eta(x1);
        }
    }
    let _ = eta(0.5 * (a + b));
    best_sol.ok_or_else(|| Error::Window(format!("no solvable l_* near the optimum at eps = {eps}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LS: f64 = 0.415_35;

    #[test]
    fn eps_zero_closed_forms() {
        let s = ScaledState::new(LS, 0.0, 0.58134, 0.3);
        assert!(f_eval(&s, 0.0).unwrap().abs() < 1e-4);
        let s = ScaledState::new(LS, 0.0, 0.5, 0.3);
        assert!((f_eval(&s, 0.0).unwrap() + 0.219_40).abs() < 1e-5);
        assert!((g_eval(&s, 0.0).unwrap() + 0.074_590).abs() < 1e-5);
        let s = ScaledState::new(LS, 0.0, 0.58134, 0.26925);
        assert!(g_eval(&s, 0.0).unwrap().abs() < 1e-4);
    }

    #[test]
    fn f_first_order_in_eps() {
        // the remainder after the eps^2 term shrinks like eps^4
        for &zeta in &[0.4, 0.58, 0.7] {
            let pred = -(1.0 - 2.0 * zeta * zeta) / (2.0 * zeta * (1.0 - zeta * zeta));
            let rem = |eps: f64| {
                let s = ScaledState::new(LS, eps, zeta, 0.3);
                f_eval(&s, eps).unwrap() - f_eval(&s, 0.0).unwrap() - eps * eps * pred
            };
            let (r1, r2) = (rem(0.1), rem(0.05));
            assert!(r1.abs() < 15.0 * 1e-4, "zeta={zeta}: {r1}");
            assert!((r1 / r2 - 16.0).abs() < 3.0, "zeta={zeta}: {}", r1 / r2);
        }
    }

    #[test]
    fn jacobian_at_eps_zero() {
        let s = ScaledState::new(LS, 0.0, 0.55, 0.3);
        let j = jacobian(&s, 0.0).unwrap();
        let exact = 1.0 + LS / (0.55f64.powi(2) * (1.0 - 0.55f64.powi(2)).sqrt());
        assert!((j[0][0] - exact).abs() < 1e-6 * exact);
        assert!(j[0][1].abs() < 1e-9 && (j[1][1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn expansion_examples() {
        let (z, _) = eta_expansion(LS, 0.0).unwrap();
        assert!((z - 0.58134).abs() < 5e-5);
        let (z, _) = eta_expansion(0.19871, 0.0).unwrap();
        assert!((z * z / (1.0 - z * z).sqrt() - 0.19871).abs() < 1e-12);
        assert!((z - 0.43).abs() < 0.01);
        assert!(matches!(eta_expansion(0.001, 0.1), Err(Error::Window(_))));
    }

    #[test]
    fn solve_matches_expansion() {
        let sol = solve_fg(LS, 0.05).unwrap();
        let (_, e) = eta_expansion(LS, 0.05).unwrap();
        assert!((sol.state.eta - e).abs() < 20.0 * 0.05f64.powi(4), "{} vs {e}", sol.state.eta);
        assert!(sol.residual <= 1e-10);
        let sol = solve_fg(LS, 0.1).unwrap();
        let (_, e) = eta_expansion(LS, 0.1).unwrap();
        assert!((sol.state.eta - e).abs() < 20.0 * 1e-4);
    }

    #[test]
    fn window_violation() {
        assert!(matches!(solve_fg(0.005, 0.1), Err(Error::Window(_))));
        assert!(matches!(solve_fg(2.0, 0.1), Err(Error::Window(_))));
    }

    #[test]
    fn small_eps_does_not_underflow() {
        let sol = solve_fg(LS, 0.01).unwrap();
        let c = constants();
        assert!((sol.state.eta - (c.eta_m0 + 1e-4 * c.eta_m2)).abs() < 1e-4);
        let (_, lg) = sol.state.to_root(0.01);
        assert!(lg < -2000.0 && lg.is_finite());
    }
}
