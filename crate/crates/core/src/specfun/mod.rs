//! Spherical Bessel functions `j_l`, `y_l` and the outgoing Hankel function
//! `h_l = j_l + i y_l`.
//!
//! [`eval_jy`] is the general complex evaluator (power series near the
//! origin, otherwise upward recurrence for `y` and Miller's downward
//! recurrence for `j`). The asymptotic forms in [`uniform`], [`airy`] and
//! [`large_arg`] are kept as independent cross-checks, and the routines in
//! [`ratio`] and [`real_order`] work with logarithms so that ratios like
//! `j_l/y_l ~ e^-1000` stay usable.

pub mod airy;
pub mod complex;
pub mod large_arg;
pub mod ratio;
pub mod real_order;
pub mod uniform;

use num_complex::Complex64;
use serde::Serialize;

pub use airy::{eval_jy_airy, AiryEval};
pub use complex::eval_jy;
pub use large_arg::eval_large_arg;
pub use ratio::{hankel_log_derivative, log_jy_ratio, log_jy_ratio_small_arg, log_jy_ratio_uniform, LogRatio};
pub use real_order::{log_jy, LogJy};
pub use uniform::{eval_jy_uniform, log_y_uniform, UniformEval};

/// Which evaluation path produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Series,
    Recurrence,
    UniformAsymptotic,
    Airy,
    LargeArg,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub order: u32,
    pub arg: Complex64,
    pub j: Complex64,
    pub y: Complex64,
    pub jp: Complex64,
    pub yp: Complex64,
    pub method: Method,
}

impl BesselEval {
    pub fn h(&self) -> Complex64 {
        self.j + Complex64::i() * self.y
    }

    pub fn hp(&self) -> Complex64 {
        self.jp + Complex64::i() * self.yp
    }

    /// `z^2 (j y' - j' y)`, identically 1.
    pub fn wronskian(&self) -> Complex64 {
        self.arg * self.arg * (self.j * self.yp - self.jp * self.y)
    }

    /// Size of the terms whose difference forms [`Self::wronskian`]; the
    /// round-off in the identity scales with it.
    pub fn wronskian_scale(&self) -> f64 {
        let z2 = self.arg.norm_sqr();
        (z2 * ((self.j * self.yp).norm() + (self.jp * self.y).norm())).max(1.0)
    }
}
