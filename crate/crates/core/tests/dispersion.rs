use bubble_resonance::dispersion::*;
use bubble_resonance::gamma::{resonance, SolveMethod};
use bubble_resonance::Error;
use num_complex::Complex64 as C;
use proptest::prelude::*;

fn pp(l: u32, eps: f64) -> PhysicalParams {
    PhysicalParams::new(l, eps, 1.0).unwrap()
}

fn direct(p: &PhysicalParams) -> Result<ResonanceRoot, Error> {
    find_root(p, regime_seed(p)?)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weber_scaling(l in 2u32..5, eps in 0.1f64..0.3, we in 0.5f64..4.0) {
        let e = eps / we.sqrt();
        prop_assume!(e <= 0.35);
        let a = resonance(&PhysicalParams::new(l, eps, we).unwrap(), Some(SolveMethod::Direct));
        let b = resonance(&pp(l, e), Some(SolveMethod::Direct));
        prop_assume!(a.is_ok() && b.is_ok());
        let (a, b) = (a.unwrap(), b.unwrap());
        prop_assert!((a.z() - b.z()).norm() <= 1e-12 * b.z().norm());
        prop_assert!((a.log_neg_im - b.log_neg_im).abs() <= 1e-9);
    }

    #[test]
    fn newton_basin(l in 2u32..5, eps in 0.1f64..0.3, th in 0.0f64..std::f64::consts::TAU) {
        let p = pp(l, eps);
        let r = resonance(&p, Some(SolveMethod::Direct));
        prop_assume!(r.is_ok());
        let z = r.unwrap().z();
        let seed = z + 0.01 * z.norm() * C::from_polar(1.0, th);
        let seed = C::new(seed.re, seed.im.min(0.0));
        let again = find_root(&p, seed).unwrap();
        prop_assert!((again.z - z).norm() <= 1e-8 * z.norm(), "{} vs {}", again.z, z);
    }

    #[test]
    fn reflected_root(l in 2u32..5, eps in 0.1f64..0.3) {
        let p = pp(l, eps);
        let r = resonance(&p, Some(SolveMethod::Direct));
        prop_assume!(r.is_ok());
        let z = r.unwrap().z();
        prop_assert!(normalized_residual(&p, -z.conj()).unwrap() <= 1e-10);
    }
}

#[test]
fn small_l_series_accuracy() {
    for l in 2..=5u32 {
        for &eps in &[0.02, 0.05, 0.1] {
            let p = pp(l, eps);
            let Ok(r) = direct(&p) else { continue };
            let q = q_param(&p);
            let lf = l as f64;
            let x2 = r.z.re * r.z.re;
            // exponentially small part plus the truncation of the series itself
            let bound = q.powf(lf + 0.5) * lf.powf(-lf - 0.5) + q.powi(3);
            let err = (x2 - small_l_x2_series(&p)).abs() / x2;
            assert!(err <= 10.0 * bound + 1e-12, "l={l} eps={eps}: {err:e} vs {bound:e}");
        }
    }
}

#[test]
fn small_l_imaginary_part_is_right() {
    // ln(-Im z) against a 40-digit evaluation
    let r = direct(&pp(2, 0.1)).unwrap();
    assert!((r.z.im / -2.948_645_719_970e-5 - 1.0).abs() < 1e-8);
    let r = direct(&pp(2, 0.05)).unwrap();
    assert!((r.z.re - 0.172_914_319_407_18).abs() < 1e-12);
    assert!((r.z.im / -4.900_366e-7 - 1.0).abs() < 1e-5);
}

#[test]
fn mid_l_estimate_within_factor_two() {
    let p = pp(20, 0.05);
    assert!(matches!(direct(&p), Err(Error::Precision(_))));
    let s = resonance(&p, None).unwrap();
    assert_eq!(s.method, SolveMethod::Scaled);
    assert!((s.x - 4.622_099_925_4).abs() < 1e-8);
    let est = mid_l_log_im_estimate(&p);
    assert!((s.log_neg_im - est).abs() < 2f64.ln(), "{} vs {est}", s.log_neg_im);
    let seed = seed_mid_l(&p).unwrap();
    assert!((seed.re - s.x).abs() < 0.01 * s.x);
}

#[test]
fn mid_l_estimates_decrease() {
    let v: Vec<f64> = (5..=50).map(|l| mid_l_log_im_estimate(&pp(l, 0.05))).collect();
    assert!(v.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn large_l_root_near_minus_iq() {
    let p = pp(1000, 0.1);
    let r = direct(&p).unwrap();
    let q = q_param(&p);
    assert!((r.z + C::new(0.0, q)).norm() / q <= 0.1);
    assert!(-r.z.im >= 100.0);
    assert_eq!(r.regime, Regime::LargeL);
    assert!(matches!(seed_large_l(&pp(50, 0.1)), Err(Error::Regime(_))));
}

#[test]
fn transition_precision_refusal() {
    let p = pp(1040, 0.02);
    let s = resonance(&p, None).unwrap();
    assert_eq!(s.method, SolveMethod::Scaled);
    // ln(|y|/x) is far below ln(1e-13)
    assert!(s.log_neg_im - s.x.ln() < -600.0);
    assert!(matches!(find_root(&p, s.z()), Err(Error::Precision(_))));
}
