//! Turning-point forms of `j_l`, `y_l` through Airy functions, plus a small
//! self-contained Airy kernel.

use crate::{Error, Result};
use std::f64::consts::{FRAC_PI_4, PI};

/// Above this value of `|1 - xi| l^(2/3)` the Airy forms are refused.
pub const AIRY_CUTOFF: f64 = 10.0;

const AI0: f64 = 0.355_028_053_887_817_24;
const AIP0: f64 = 0.258_819_403_792_806_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValues {
    pub ai: f64,
    pub aip: f64,
    pub bi: f64,
    pub bip: f64,
}

fn maclaurin(t: f64) -> AiryValues {
    // f = sum a_k, g = sum b_k with Ai = c1 f - c2 g, Bi = sqrt3 (c1 f + c2 g)
    let t3 = t * t * t;
    let (mut a, mut b) = (1.0, t);
    let (mut f, mut g) = (a, b);
    let (mut fp, mut gp) = (0.0, 1.0);
    for k in 0..200 {
        let kf = k as f64;
        a *= t3 / ((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        b *= t3 / ((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        f += a;
        g += b;
        // d/dt t^(3k+3) and t^(3k+4)
        fp += a * (3.0 * kf + 3.0) / t;
        gp += b * (3.0 * kf + 4.0) / t;
        if a.abs() <= 1e-18 * f.abs() && b.abs() <= 1e-18 * g.abs().max(1e-300) {
            break;
        }
    }
    if t == 0.0 {
        fp = 0.0;
        gp = 1.0;
    }
    let s3 = 3f64.sqrt();
    AiryValues {
        ai: AI0 * f - AIP0 * g,
        aip: AI0 * fp - AIP0 * gp,
        bi: s3 * (AI0 * f + AIP0 * g),
        bip: s3 * (AI0 * fp + AIP0 * gp),
    }
}

/// Optimally truncated `sum c_k (sign/zeta)^k` split into even and odd parts.
fn series(zeta: f64, alternate: bool) -> ([f64; 2], [f64; 2]) {
    // returns ([U_even, U_odd], [V_even, V_odd]) with (-1)^k inside each part
    // when `alternate`, otherwise plain sums (even, odd) with sign (-1)^k
    let mut u = 1.0;
    let mut ue = [1.0, 0.0];
    let mut ve = [1.0, 0.0];
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        let p = zeta.powi(k);
        let (tu, tv) = (u / p, v / p);
        if tu.abs() > last || tu.abs() < 1e-17 {
            break;
        }
        last = tu.abs();
        let sign = if alternate {
            // (-1)^(k/2) inside the even/odd split
            if (k / 2) % 2 == 0 { 1.0 } else { -1.0 }
        } else if k % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        ue[(k % 2) as usize] += sign * tu;
        ve[(k % 2) as usize] += sign * tv;
    }
    (ue, ve)
}

fn asymptotic(t: f64) -> AiryValues {
    let sp = PI.sqrt();
    if t > 0.0 {
        let zeta = 2.0 / 3.0 * t.powf(1.5);
        let q = t.powf(0.25);
        let (u, v) = series(zeta, false);
        // alternating sums are u[0]+u[1] (odd terms already carry the minus)
        let ua = u[0] + u[1];
        let va = v[0] + v[1];
        let up = u[0] - u[1];
        let vp = v[0] - v[1];
        let em = (-zeta).exp();
        let ep = zeta.exp();
        AiryValues {
            ai: em / (2.0 * sp * q) * ua,
            aip: -q * em / (2.0 * sp) * va,
            bi: ep / (sp * q) * up,
            bip: q * ep / sp * vp,
        }
    } else {
        let x = -t;
        let zeta = 2.0 / 3.0 * x.powf(1.5);
        let q = x.powf(0.25);
        let (u, v) = series(zeta, true);
        let (s, c) = (zeta - FRAC_PI_4).sin_cos();
        AiryValues {
            ai: (c * u[0] + s * u[1]) / (sp * q),
            aip: q / sp * (s * v[0] - c * v[1]),
            bi: (-s * u[0] + c * u[1]) / (sp * q),
            bip: q / sp * (c * v[0] + s * v[1]),
        }
    }
}

/// Steps `(y, y')` of `y'' = t y` from `t0` to `t1` with local Taylor series.
fn taylor_walk(mut t0: f64, t1: f64, mut y: f64, mut yp: f64) -> (f64, f64) {
    let n_steps = ((t1 - t0).abs() / 0.25).ceil().max(1.0) as usize;
    let h = (t1 - t0) / n_steps as f64;
    let mut c = [0.0f64; 40];
    for _ in 0..n_steps {
        c[0] = y;
        c[1] = yp;
        c[2] = t0 * c[0] / 2.0;
        for n in 1..38 {
            c[n + 2] = (t0 * c[n] + c[n - 1]) / ((n + 2) * (n + 1)) as f64;
        }
        let (mut v, mut d) = (0.0, 0.0);
        for n in (0..40).rev() {
            v = v * h + c[n];
            if n > 0 {
                d = d * h + n as f64 * c[n];
            }
        }
        y = v;
        yp = d;
        t0 += h;
    }
    (y, yp)
}

/// `Ai, Ai', Bi, Bi'` at a real point.
pub fn airy(t: f64) -> AiryValues {
    if t < -8.0 || t >= 15.0 {
        return asymptotic(t);
    }
    let mut v = maclaurin(t);
    if t > 2.0 {
        // Ai is recessive here: walk it down from where the expansion is sharp
        let (ai, aip) = if t >= 10.0 {
            let a = asymptotic(t);
            (a.ai, a.aip)
        } else {
            let a = asymptotic(10.0);
            taylor_walk(10.0, t, a.ai, a.aip)
        };
        v.ai = ai;
        v.aip = aip;
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryEval {
    pub order: u32,
    pub xi: f64,
    pub arg: f64,
    /// Airy argument `l^(2/3) 2^(1/3) (1 - xi)`.
    pub t: f64,
    pub j: f64,
    pub y: f64,
}

pub fn eval_jy_airy(l: u32, xi: f64) -> Result<AiryEval> {
    if l == 0 || !(xi > 0.0) {
        return Err(Error::Regime(format!("airy forms need l >= 1 and xi > 0, got l={l}, xi={xi}")));
    }
    let lf = l as f64;
    let band = (1.0 - xi).abs() * lf.powf(2.0 / 3.0);
    if band > AIRY_CUTOFF {
        return Err(Error::Regime(format!(
            "|1 - xi| l^(2/3) = {band:.3} exceeds the Airy cutoff {AIRY_CUTOFF}"
        )));
    }
    let z = (lf * (lf + 1.0)).sqrt() * xi;
    let t = lf.powf(2.0 / 3.0) * 2f64.cbrt() * (1.0 - xi);
    let pre = PI.sqrt() * lf.powf(1.0 / 6.0) / (2f64.powf(1.0 / 6.0) * z);
    let a = airy(t);
    Ok(AiryEval {
        order: l,
        xi,
        arg: z,
        t,
        j: pre * a.ai,
        y: -pre * a.bi,
    })
}
