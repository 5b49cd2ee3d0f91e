use super::{BesselEval, Method};
use crate::{Error, Result};
use num_complex::Complex64 as C;

const RESCALE: f64 = 1e200;

fn j0(z: C) -> C {
    z.sin() / z
}

fn j1(z: C) -> C {
    z.sin() / (z * z) - z.cos() / z
}

/// `j_l` by its power series, used for `|z| < 1`.
fn j_series(l: u32, z: C) -> C {
    // z^l / (2l+1)!!
    let mut lead = C::new(1.0, 0.0);
    for k in 1..=l {
        lead *= z / (2 * k + 1) as f64;
    }
    let w = -0.5 * z * z;
    let mut term = C::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..60 {
        term *= w / (k as f64 * (2 * l + 2 * k + 1) as f64);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    lead * sum
}

/// Miller recurrence; returns `(j_l, j_{l-1})` (the second is `j_1` when `l = 0`).
fn j_miller(l: u32, z: C) -> (C, C) {
    let az = z.norm();
    let start = l as usize + (1.5 * (az + (l as f64).cbrt())).ceil() as usize + 16;

    let mut fp1 = C::new(0.0, 0.0);
    let mut f = C::new(1e-30, 0.0);
    let mut scale: i64 = 0;
    let mut saved_l = (C::new(0.0, 0.0), 0i64);
    let mut saved_lm1 = (C::new(0.0, 0.0), 0i64);
    let mut f1 = C::new(0.0, 0.0);
    let mut f1_scale = 0i64;
    let mut n = start;
    loop {
        if n == l as usize {
            saved_l = (f, scale);
        }
        if l > 0 && n == l as usize - 1 {
            saved_lm1 = (f, scale);
        }
        if n == 1 {
            f1 = f;
            f1_scale = scale;
        }
        if n == 0 {
            break;
        }
        // f_{n-1} = (2n+1)/z f_n - f_{n+1}
        let fm1 = (2 * n + 1) as f64 / z * f - fp1;
        fp1 = f;
        f = fm1;
        n -= 1;
        if f.norm() > RESCALE {
            f /= RESCALE;
            fp1 /= RESCALE;
            scale += 1;
        }
    }
    let f0 = f;
    let f0_scale = scale;

    let (t0, t1) = (j0(z), j1(z));
    // j_n = t0 * f_n / f_0 with each f expressed at the final scale
    let (anchor, anchor_f, anchor_scale) = if t0.norm() >= t1.norm() {
        (t0, f0, f0_scale)
    } else {
        (t1, f1, f1_scale)
    };
    let pull = |(v, s): (C, i64)| -> C {
        let k = anchor_scale - s;
        if k == 0 {
            anchor * (v / anchor_f)
        } else {
            (anchor.ln() + v.ln() - anchor_f.ln() - k as f64 * RESCALE.ln()).exp()
        }
    };
    let jl = pull(saved_l);
    let other = if l == 0 { pull((f1, f1_scale)) } else { pull(saved_lm1) };
    (jl, other)
}

/// Upward recurrence; returns `(y_l, y_{l-1})` (the second is `y_1` when `l = 0`).
fn y_upward(l: u32, z: C) -> (C, C) {
    let (s, c) = (z.sin(), z.cos());
    let y0 = -c / z;
    let y1 = -c / (z * z) - s / z;
    if l == 0 {
        return (y0, y1);
    }
    let (mut a, mut b) = (y0, y1);
    for n in 1..l {
        let next = (2 * n + 1) as f64 / z * b - a;
        a = b;
        b = next;
        if !b.is_finite() {
            break;
        }
    }
    (b, a)
}

/// Upward recurrence for the Hankel function that grows fastest with `n`:
/// `h^(2)` below the real axis (`sigma = -1`), `h^(1)` above (`sigma = 1`).
/// Returns `(h_l, h_{l-1})`, or `(h_0, h_1)` when `l = 0`.
fn h_upward(l: u32, z: C, sigma: f64) -> (C, C) {
    let e = (C::new(0.0, sigma) * z).exp();
    let h0 = C::new(0.0, -sigma) * e / z;
    let h1 = h0 / z - e / z;
    if l == 0 {
        return (h0, h1);
    }
    let (mut a, mut b) = (h0, h1);
    for n in 1..l {
        let next = (2 * n + 1) as f64 / z * b - a;
        a = b;
        b = next;
        if !b.is_finite() {
            break;
        }
    }
    (b, a)
}

/// Spherical Bessel functions and derivatives at a complex point.
pub fn eval_jy(l: u32, z: C) -> Result<BesselEval> {
    if z.norm() == 0.0 || !z.is_finite() {
        return Err(Error::Domain(format!("eval_jy needs finite z != 0, got {z}")));
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::Domain(format!("z = {z} lies on the branch cut")));
    }
    let (method, jl, jo) = if z.norm() < 1.0 {
        let jl = j_series(l, z);
        let jo = if l == 0 { j_series(1, z) } else { j_series(l - 1, z) };
        (Method::Series, jl, jo)
    } else {
        let (a, b) = j_miller(l, z);
        (Method::Recurrence, a, b)
    };
    // Off the axis upward recurrence on y itself amplifies its small
    // Hankel component by up to e^(2|Im z|); recur on that component instead.
    let (yl, yo) = if z.im == 0.0 {
        y_upward(l, z)
    } else {
        let sigma = z.im.signum();
        let (hl, ho) = h_upward(l, z, sigma);
        let k = C::new(0.0, -sigma);
        (k * (hl - jl), k * (ho - jo))
    };
    if !yl.is_finite() || !yo.is_finite() {
        return Err(Error::Overflow(format!(
            "y_{l}({z}) exceeds f64 range; use the log-space routines"
        )));
    }

    let lp1 = (l + 1) as f64;
    let (jp, yp) = if l == 0 {
        (-jo, -yo)
    } else {
        (jo - lp1 / z * jl, yo - lp1 / z * yl)
    };

    let mut e = BesselEval {
        order: l,
        arg: z,
        j: jl,
        y: yl,
        jp,
        yp,
        method,
    };
    if z.im == 0.0 {
        e.j.im = 0.0;
        e.y.im = 0.0;
        e.jp.im = 0.0;
        e.yp.im = 0.0;
    }
    Ok(e)
}
