//! Scattering resonances of a gas bubble in a compressible liquid.
//!
//! Each non-spherical shape mode `l >= 2` of a bubble radiates sound through
//! the resonance condition
//!
//! ```text
//! z h_l(z) + Q h_l'(z) = 0,     Q = (l+2)(l-1) eps^2 / We,     z = eps * lambda
//! ```
//!
//! where `h_l` is the outgoing spherical Hankel function. The slowest decaying
//! mode sits at `l ~ eps^-2` and its imaginary part is exponentially small,
//!
//! ```text
//! Gamma(eps) = inf_l (-Im z) ~ eps^-2 exp(-B/eps^2 - eta_2),   B = 0.26924...
//! ```
//!
//! The crate computes these resonances two ways and checks one against the
//! other:
//!
//! * [`dispersion`] runs complex Newton directly on the Hankel relation. It is
//!   exact in double precision as long as `|Im z| / Re z >= 1e-13`.
//! * [`scaled`] solves the logarithmically rescaled real system `F = G = 0` in
//!   `(zeta, eta)`, which stays well conditioned for any `eps` because the
//!   exponentially small quantities only ever appear through their logarithms.
//!
//! [`constants`] derives `B` and `A_0` from the variational problem for the
//! maximal `eta`, [`gamma`] assembles `Gamma(eps)` over integer `l`, and
//! [`specfun`] holds the spherical Bessel machinery everything else rests on.

pub mod cli;
pub mod constants;
pub mod dispersion;
pub mod error;
pub mod gamma;
pub mod scaled;
pub mod selftest;
pub mod specfun;

pub use error::{Error, Result};
