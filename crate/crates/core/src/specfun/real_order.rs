//! Spherical Bessel functions of real (not necessarily integer) order at a
//! real positive argument, returned as log-magnitudes so that neither factor of
//! an exponentially small ratio `j/y` ever has to be formed in linear scale.
//!
//! The cylinder functions `J_mu`, `Y_mu` with `mu = nu + 1/2` are computed with
//! Steed's method: the continued fraction for `J'/J`, Miller recurrence down
//! to a base order in `[-1/2, 1/2]` (or near `x` for large `x`), Temme's series
//! (`x < 2`) or the complex continued fraction (`x >= 2`) for the base pair,
//! and upward recurrence for `Y`. Every recurrence is rescaled in log space.

use crate::{Error, Result};
use std::f64::consts::PI;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const BIG: f64 = 1e250;
const XMIN: f64 = 2.0;

// Taylor coefficients of 1/Gamma(z) about 0, c[k] multiplies z^k.
const RGAMMA: [f64; 27] = [
    0.0,
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_9,
    -0.042_002_635_034_095_24,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_34,
    -0.009_621_971_527_876_974,
    0.007_218_943_246_663_1,
    -0.001_165_167_591_859_065,
    -0.000_215_241_674_114_951,
    0.000_128_050_282_388_116_2,
    -2.013_485_478_078_824e-5,
    -1.250_493_482_142_670_7e-6,
    1.133_027_231_981_695_9e-6,
    -2.056_338_416_977_607e-7,
    6.116_095_104_481_416e-9,
    5.002_007_644_469_223e-9,
    -1.181_274_570_487_020_1e-9,
    1.043_426_711_691_100_5e-10,
    7.782_263_439_905_071e-12,
    -3.696_805_618_642_206e-12,
    5.100_370_287_454_476e-13,
    -2.058_326_053_566_507e-14,
    -5.348_122_539_423_018e-15,
    1.226_778_628_238_260_8e-15,
    -1.181_259_301_697_458_8e-16,
];

/// `log|f|`, `sign f` and `f'/f` for `f = j_nu, y_nu` at one real point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogJy {
    pub log_abs_j: f64,
    pub sign_j: f64,
    pub dlog_j: f64,
    pub log_abs_y: f64,
    pub sign_y: f64,
    pub dlog_y: f64,
}

impl LogJy {
    /// `log|j/y|`, finite even when `j` and `y` are not representable.
    pub fn log_abs_ratio(&self) -> f64 {
        self.log_abs_j - self.log_abs_y
    }

    pub fn ratio_sign(&self) -> f64 {
        self.sign_j * self.sign_y
    }
}

/// gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu) for |mu| <= 1/2.
fn beschb(mu: f64) -> (f64, f64, f64, f64) {
    let mut gam1 = 0.0;
    let mut gam2 = 0.0;
    let mut gampl = 0.0;
    let mut gammi = 0.0;
    for k in (1..RGAMMA.len()).rev() {
        let c = RGAMMA[k];
        let p = mu.powi(k as i32 - 1);
        gampl += c * p;
        if k % 2 == 1 {
            gam2 += c * p;
            gammi += c * p;
        } else {
            gam1 -= c * mu.powi(k as i32 - 2);
            gammi -= c * p;
        }
    }
    (gam1, gam2, gampl, gammi)
}

struct Cyl {
    log_abs_j: f64,
    sign_j: f64,
    dlog_j: f64,
    log_abs_y: f64,
    sign_y: f64,
    dlog_y: f64,
}

fn bessjy_log(xnu: f64, x: f64) -> Result<Cyl> {
    let nl = if x < XMIN {
        (xnu + 0.5) as i64
    } else {
        ((xnu - x + 1.5) as i64).max(0)
    };
    let xmu = xnu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1 for J'/J at xnu
    let maxit = 10_000 + 4 * x as usize;
    let mut isign = 1.0;
    let mut h = (xnu * xi).max(FPMIN);
    let mut b = xi2 * xnu;
    let mut d = 0.0;
    let mut c = h;
    let mut ok = false;
    for _ in 0..maxit {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            ok = true;
            break;
        }
    }
    if !ok {
        return Err(Error::NoConvergence {
            iterations: maxit,
            residual: f64::NAN,
            best_re: xnu,
            best_im: x,
        });
    }

    // downward to xmu, rescaling as we go
    let dlog_j = h;
    let mut rjl = isign;
    let mut rjpl = h * rjl;
    let mut log_scale = 0.0;
    let mut fact = xnu * xi;
    for _ in 0..nl {
        let t = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * t - rjl;
        rjl = t;
        if rjl.abs() > BIG {
            rjl /= BIG;
            rjpl /= BIG;
            log_scale += BIG.ln();
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, rymu, ry1) = if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fct = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let dd = -x2.ln();
        let e = xmu * dd;
        let fct2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = beschb(xmu);
        let mut ff = 2.0 / PI * fct * (gam1 * e.cosh() + gam2 * fct2 * dd);
        let ee = e.exp();
        let mut p = ee / (gampl * PI);
        let mut q = 1.0 / (ee * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fct3 = if pimu2.abs() < EPS { 1.0 } else { pimu2.sin() / pimu2 };
        let r = PI * pimu2 * fct3 * fct3;
        let mut cc = 1.0;
        let dd = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        let mut i = 1.0;
        loop {
            ff = (i * ff + p + q) / (i * i - xmu2);
            cc *= dd / i;
            p /= i - xmu;
            q /= i + xmu;
            let del = cc * (ff + r * q);
            sum += del;
            let del1 = cc * p - i * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                break;
            }
            i += 1.0;
            if i > 1000.0 {
                return Err(Error::NoConvergence {
                    iterations: 1000,
                    residual: del.abs(),
                    best_re: xnu,
                    best_im: x,
                });
            }
        }
        let rymu = -sum;
        let ry1 = -sum1 * xi2;
        let rymup = xmu * xi * rymu - ry1;
        let rjmu = w / (rymup - f * rymu);
        (rjmu, rymu, ry1)
    } else {
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fct = a * xi / (p * p + q * q);
        let mut cr = br + q * fct;
        let mut ci = bi + p * fct;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut t = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = t;
        let mut i = 2usize;
        loop {
            a += 2.0 * (i - 1) as f64;
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fct = a / (cr * cr + ci * ci);
            cr = br + cr * fct;
            ci = bi - ci * fct;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            t = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = t;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                break;
            }
            i += 1;
            if i > maxit {
                return Err(Error::NoConvergence {
                    iterations: maxit,
                    residual: f64::NAN,
                    best_re: xnu,
                    best_im: x,
                });
            }
        }
        let gam = (p - f) / q;
        let rjmu = (w / ((p - f) * gam + q)).sqrt().copysign(rjl);
        let rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        let ry1 = xmu * xi * rymu - rymup;
        (rjmu, rymu, ry1)
    };

    // J_xnu = isign * rjmu / (rjl * e^log_scale)
    let log_abs_j = rjmu.abs().ln() - rjl.abs().ln() - log_scale;
    let sign_j = isign * rjmu.signum() * rjl.signum();

    let mut ym = rymu;
    let mut y1 = ry1;
    let mut ylog = 0.0;
    for i in 1..=nl {
        let t = (xmu + i as f64) * xi2 * y1 - ym;
        ym = y1;
        y1 = t;
        if y1.abs() > BIG {
            ym /= BIG;
            y1 /= BIG;
            ylog += BIG.ln();
        }
    }
    let log_abs_y = ym.abs().ln() + ylog;
    let sign_y = ym.signum();
    let dlog_y = xnu * xi - y1 / ym;

    Ok(Cyl {
        log_abs_j,
        sign_j,
        dlog_j,
        log_abs_y,
        sign_y,
        dlog_y,
    })
}

/// Spherical `j_nu`, `y_nu` in log form for real `nu >= 0`, `x > 0`.
pub fn log_jy(nu: f64, x: f64) -> Result<LogJy> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_jy needs x > 0, got {x}")));
    }
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!("log_jy needs nu >= 0, got {nu}")));
    }
    let c = bessjy_log(nu + 0.5, x)?;
    let half = 0.5 * (PI / (2.0 * x)).ln();
    let shift = 0.5 / x;
    Ok(LogJy {
        log_abs_j: half + c.log_abs_j,
        sign_j: c.sign_j,
        dlog_j: c.dlog_j - shift,
        log_abs_y: half + c.log_abs_y,
        sign_y: c.sign_y,
        dlog_y: c.dlog_y - shift,
    })
}
