//! Quick invariant checks runnable from the command line (`bubble-res selftest`).

use crate::constants::{constants, g0};
use crate::dispersion::{find_root, regime_seed, PhysicalParams};
use crate::gamma::{resonance, SolveMethod};
use crate::scaled::{eta_expansion, solve_fg};
use crate::specfun::{eval_jy, log_jy, log_y_uniform};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub module: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}::{}: {}", self.module, self.name, self.detail)
    }
}

fn check(module: &'static str, name: &str, passed: bool, detail: String) -> Check {
    Check {
        module,
        name: name.to_string(),
        passed,
        detail,
    }
}

pub const MODULES: [&str; 5] = ["specfun", "constants", "dispersion", "scaled", "gamma"];

/// Checks for one module, or for all of them with `None`.
pub fn run(module: Option<&str>) -> Result<Vec<Check>, String> {
    let pick: Vec<&str> = match module {
        None | Some("all") => MODULES.to_vec(),
        Some(m) if MODULES.contains(&m) => vec![m],
        Some(m) => return Err(format!("unknown module '{m}' (expected one of {})", MODULES.join(", "))),
    };
    let mut out = Vec::new();
    for m in pick {
        out.extend(match m {
            "specfun" => specfun(),
            "constants" => constants_checks(),
            "dispersion" => dispersion(),
            "scaled" => scaled(),
            _ => gamma(),
        });
    }
    Ok(out)
}

fn random_point(rng: &mut ChaCha8Rng) -> (u32, C) {
    let l = rng.random_range(0..=60u32);
    let r = 10f64.powf(rng.random_range(-1.3..1.9));
    let th = rng.random_range(-1.5..1.5);
    (l, C::from_polar(r, th))
}

fn specfun() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst_w = 0.0f64;
    let mut worst_r = 0.0f64;
    let mut errors = 0;
    for _ in 0..1000 {
        let (l, z) = random_point(&mut rng);
        match eval_jy(l, z) {
            Ok(e) => worst_w = worst_w.max((e.wronskian() - 1.0).norm() / e.wronskian_scale()),
            Err(_) => errors += 1,
        }
        let l = l.max(1);
        if let (Ok(a), Ok(b), Ok(c)) = (eval_jy(l - 1, z), eval_jy(l, z), eval_jy(l + 1, z)) {
            let k = (2 * l + 1) as f64 / z;
            for (lo, mid, hi) in [(a.j, b.j, c.j), (a.y, b.y, c.y)] {
                let scale = lo.norm() + hi.norm() + (k * mid).norm();
                worst_r = worst_r.max((lo + hi - k * mid).norm() / scale);
            }
        } else {
            errors += 1;
        }
    }
    let mut worst_u = 0.0f64;
    let mut worst_d = 0.0f64;
    let mut cross_ok = true;
    for &l in &[100u32, 200, 400] {
        for &xi in &[0.3, 0.5, 0.7] {
            let lf = l as f64;
            let x = (lf * (lf + 1.0)).sqrt() * xi;
            match (log_y_uniform(l, xi), log_jy(lf, x)) {
                (Ok((ly, dy)), Ok(r)) => {
                    let tol = 5.0 / (lf * lf);
                    let ey = (ly - r.log_abs_y).exp_m1().abs();
                    let ed = ((dy - r.dlog_y) / r.dlog_y).abs();
                    worst_u = worst_u.max(ey / tol);
                    worst_d = worst_d.max(ed / tol);
                    cross_ok &= ey <= tol && ed <= tol;
                }
                _ => cross_ok = false,
            }
        }
    }
    vec![
        check(
            "specfun",
            "wronskian",
            worst_w <= 1e-9 && errors == 0,
            format!("1000 samples, worst relative defect {worst_w:.2e}, {errors} evaluation errors"),
        ),
        check(
            "specfun",
            "recurrence",
            worst_r <= 1e-9,
            format!("worst relative defect {worst_r:.2e}"),
        ),
        check(
            "specfun",
            "uniform-vs-recurrence",
            cross_ok,
            format!("worst error / (5/l^2): y {worst_u:.3}, y'/y {worst_d:.3}"),
        ),
    ]
}

fn constants_checks() -> Vec<Check> {
    let c = constants();
    let g = g0((2.0 - 2f64.sqrt()).sqrt()).unwrap_or(f64::NAN);
    vec![
        check(
            "constants",
            "B",
            (c.eta_m0 - 0.26924).abs() <= 5e-5,
            format!("eta_m0 = {:.12}", c.eta_m0),
        ),
        check(
            "constants",
            "eta_m2",
            (c.eta_m2 - 2.1465).abs() <= 5e-4,
            format!("eta_m2 = {:.12}", c.eta_m2),
        ),
        check(
            "constants",
            "g0-landmark",
            (g + 0.0678).abs() <= 5e-4,
            format!("g0(sqrt(2 - sqrt 2)) = {g:.6}"),
        ),
    ]
}

fn dispersion() -> Vec<Check> {
    let small = PhysicalParams::new(2, 0.1, 1.0)
        .and_then(|p| regime_seed(&p).and_then(|s| find_root(&p, s)));
    let large = PhysicalParams::new(1000, 0.1, 1.0)
        .and_then(|p| regime_seed(&p).and_then(|s| find_root(&p, s)));
    vec![
        match small {
            Ok(r) => check(
                "dispersion",
                "small-l-root",
                (r.z.re - 0.344_041_199).abs() < 1e-8 && r.z.im < 0.0,
                format!("z = {:.12}{:+.6e}i", r.z.re, r.z.im),
            ),
            Err(e) => check("dispersion", "small-l-root", false, e.to_string()),
        },
        match large {
            Ok(r) => {
                let q = 10_009.98;
                let d = (r.z + C::new(0.0, q)).norm() / q;
                check("dispersion", "large-l-root", d <= 0.1, format!("|z + iQ|/Q = {d:.4}"))
            }
            Err(e) => check("dispersion", "large-l-root", false, e.to_string()),
        },
    ]
}

fn scaled() -> Vec<Check> {
    let c = constants();
    let eps = 0.05;
    let ls = c.l_m0 + eps * eps * c.l_m2;
    match (solve_fg(ls, eps), eta_expansion(ls, eps)) {
        (Ok(s), Ok((_, e))) => vec![check(
            "scaled",
            "solution-vs-expansion",
            (s.state.eta - e).abs() <= 20.0 * eps.powi(4) && s.residual <= 1e-10,
            format!("eta = {:.10}, two-term {e:.10}, |F|+|G| = {:.1e}", s.state.eta, s.residual),
        )],
        (Err(e), _) | (_, Err(e)) => vec![check("scaled", "solution-vs-expansion", false, e.to_string())],
    }
}

fn gamma() -> Vec<Check> {
    let p = PhysicalParams::new(15, 0.15, 1.0).expect("valid parameters");
    match (resonance(&p, Some(SolveMethod::Direct)), resonance(&p, Some(SolveMethod::Scaled))) {
        (Ok(d), Ok(s)) => {
            let dx = ((d.x - s.x) / d.x).abs();
            let dl = (d.log_neg_im - s.log_neg_im).abs();
            vec![check(
                "gamma",
                "dual-solver",
                dx <= 1e-6 && dl <= 1e-4,
                format!("l=15 eps=0.15: rel dx {dx:.1e}, d ln|Im z| {dl:.1e}"),
            )]
        }
        (Err(e), _) | (_, Err(e)) => vec![check("gamma", "dual-solver", false, e.to_string())],
    }
}
