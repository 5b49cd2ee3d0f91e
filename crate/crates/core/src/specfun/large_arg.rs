//! Hankel expansion for `|z| >> l`. For integer order the series in `1/z`
//! terminates after `l + 1` terms, so this is exact up to cancellation, which
//! is harmless when `|z| >= 10 l`.

use super::{BesselEval, Method};
use crate::{Error, Result};
use num_complex::Complex64 as C;
use std::f64::consts::FRAC_PI_2;

/// `(P, P')` where `h_l(z) = e^{i(z - (l+1) pi/2)} P(z)`, `P = z^-1 sum a_k (i/z)^k`.
fn hankel_poly(l: u32, z: C, sign: f64) -> (C, C) {
    // sign = +1 for h^(1), -1 for h^(2) (i -> -i)
    let iz = C::new(0.0, sign) / z;
    let mut a = 1.0;
    let mut pow = C::new(1.0, 0.0);
    let mut s = C::new(0.0, 0.0);
    let mut ds = C::new(0.0, 0.0);
    for k in 0..=l {
        let term = a * pow;
        s += term;
        // d/dz (i/z)^k = -k (i/z)^k / z
        ds -= k as f64 * term / z;
        let kf = k as f64;
        let lf = l as f64;
        a *= (lf + kf + 1.0) * (lf - kf) / (2.0 * (kf + 1.0));
        pow *= iz;
    }
    let p = s / z;
    let dp = ds / z - s / (z * z);
    (p, dp)
}

pub fn eval_large_arg(l: u32, z: C) -> Result<BesselEval> {
    let need = 10.0 * (l.max(1)) as f64;
    if z.norm() < need {
        return Err(Error::Regime(format!(
            "large-argument form needs |z| >= {need}, got |z| = {:.4}",
            z.norm()
        )));
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::Domain(format!("z = {z} lies on the branch cut")));
    }
    let phase = z - C::new((l as f64 + 1.0) * FRAC_PI_2, 0.0);
    let e1 = (C::i() * phase).exp();
    let e2 = (-C::i() * phase).exp();
    let (p1, dp1) = hankel_poly(l, z, 1.0);
    let (p2, dp2) = hankel_poly(l, z, -1.0);
    let h1 = e1 * p1;
    let h2 = e2 * p2;
    let h1p = e1 * (C::i() * p1 + dp1);
    let h2p = e2 * (-C::i() * p2 + dp2);
    let half = C::new(0.5, 0.0);
    let mi = C::new(0.0, -0.5);
    let mut e = BesselEval {
        order: l,
        arg: z,
        j: half * (h1 + h2),
        y: mi * (h1 - h2),
        jp: half * (h1p + h2p),
        yp: mi * (h1p - h2p),
        method: Method::LargeArg,
    };
    if z.im == 0.0 {
        e.j.im = 0.0;
        e.y.im = 0.0;
        e.jp.im = 0.0;
        e.yp.im = 0.0;
    }
    Ok(e)
}
