use std::f64::consts::{FRAC_PI_2, PI};

use super::*;
use crate::error::Error;
use crate::quadrature::tanh_sinh;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    tanh_sinh(|x, _, _| f(x), a, b, 1e-14).value
}

#[test]
fn complete_integrals_reference_values() {
    assert_eq!(ellint_k(0.0).unwrap(), FRAC_PI_2);
    assert!(close(ellint_e(0.0).unwrap(), FRAC_PI_2, 1e-15));
    assert_eq!(ellint_e(1.0).unwrap(), 1.0);
    // mpmath, 30 digits
    assert!(close(ellint_k(0.5).unwrap(), 1.8540746773013719, 1e-15));
    assert!(close(ellint_e(0.5).unwrap(), 1.3506438810476755, 1e-15));
    assert!(close(ellint_pi(0.0, 0.5).unwrap(), ellint_k(0.5).unwrap(), 1e-15));
    assert!(close(ellint_pi(-0.7, 0.5).unwrap(), 1.3902518954044616, 1e-15));
    assert!(close(ellint_pi(0.3, 0.9).unwrap(), 3.2347661743113745, 1e-15));
    assert!(close(ellint_pi(-50.0, 0.99).unwrap(), 0.270_485_137_291_050_1, 1e-14));
    assert!(close(ellint_pi(-1e6, 0.3).unwrap(), 0.0015710638321004763, 1e-14));
}

#[test]
fn domain_errors() {
    assert!(matches!(ellint_k(1.0), Err(Error::Divergence(_))));
    assert!(matches!(ellint_pi(0.5, 1.0), Err(Error::Divergence(_))));
    assert!(matches!(ellint_pi(1.0, 0.5), Err(Error::Pole(_))));
    assert!(matches!(ellint_k(1.5), Err(Error::Domain(_))));
    assert!(ellint_k_flagged(1.0 - 1e-12).unwrap().near_singular);
    assert!(!ellint_k_flagged(0.5).unwrap().near_singular);
}

#[test]
fn legendre_relation() {
    for i in 1..40 {
        let m = i as f64 / 40.0;
        let (k, e) = (ellint_k(m).unwrap(), ellint_e(m).unwrap());
        let (kp, ep) = (ellint_kc(m).unwrap(), ellint_ec(m));
        assert!((e * kp + ep * k - k * kp - FRAC_PI_2).abs() < 1e-13, "m = {m}");
    }
}

#[test]
fn third_kind_matches_quadrature() {
    let mut state = 0x2545f4914f6cdd1du64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..40 {
        let m = 0.95 * next();
        let n = 0.95 - 20.0 * next();
        let direct = quad(|t| 1.0 / ((1.0 - n * t.sin().powi(2)) * (1.0 - m * t.sin().powi(2)).sqrt()), 0.0, FRAC_PI_2);
        let value = ellint_pi(n, m).unwrap();
        assert!(close(value, direct, 1e-11), "Π({n},{m}) = {value} vs {direct}");
    }
}

#[test]
fn incomplete_integrals() {
    assert!(close(ellint_f(2.5, 0.7).unwrap(), 3.4768751906448916, 1e-14));
    assert!(close(ellint_e_inc(2.5, 0.7).unwrap(), 1.8713294303838588, 1e-14));
    assert!(close(ellint_f(-4.0, 0.3).unwrap(), -4.315_943_388_399_585, 1e-14));
}

#[test]
fn heuman_lambda() {
    for m in [0.0, 0.3, 0.9, 0.999, 1.0] {
        assert!(close(heuman_lambda0(FRAC_PI_2, m).unwrap(), 1.0, 1e-14), "m = {m}");
    }
    for phi in [0.3, 1.0, 2.0] {
        assert!(close(heuman_lambda0(phi, 1.0).unwrap(), 2.0 * phi / PI, 1e-15));
    }
    assert!(close(heuman_lambda0(1.0, 0.0).unwrap(), 1f64.sin(), 1e-15));
    // beyond π/2, E(φ|1) continues as 2 − sin φ
    assert!(close(heuman_lambda0(2.0, 0.0).unwrap(), 2.0 - 2f64.sin(), 1e-15));
    let (phi, m) = (1.2f64, 0.9);
    let mc = 1.0 - m;
    let k = quad(|t| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2);
    let e = quad(|t| (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2);
    let f1 = quad(|t| 1.0 / (1.0 - mc * t.sin().powi(2)).sqrt(), 0.0, phi);
    let e1 = quad(|t| (1.0 - mc * t.sin().powi(2)).sqrt(), 0.0, phi);
    let oracle = (e * f1 + k * e1 - k * f1) / FRAC_PI_2;
    let value = heuman_lambda0(phi, m).unwrap();
    assert!((value - oracle).abs() < 1e-12, "{value} vs {oracle}");
    assert!((value - 0.7869246117674222).abs() < 1e-14);
}

#[test]
fn roots_at_critical_and_bottom() {
    let d = cubic_roots(EnergyMomentum::new(0.0, 0.0)).unwrap();
    assert_eq!((d.zeta0, d.zeta1, d.zeta2), (-1.0, 1.0, 1.0));
    let d = cubic_roots(EnergyMomentum::new(-2.0, 0.0)).unwrap();
    assert!((d.zeta0 + 1.0).abs() < 1e-15 && (d.zeta1 + 1.0).abs() < 1e-15 && d.zeta2 == 1.0);
    assert!(matches!(cubic_roots(EnergyMomentum::new(-2.5, 0.0)), Err(Error::Domain(_))));
    assert!(matches!(cubic_roots(EnergyMomentum::new(-1.9, 0.5)), Err(Error::Domain(_))));
}

#[test]
fn roots_refined_and_vieta() {
    let em = EnergyMomentum::new(0.3, 0.2);
    let d = cubic_roots(em).unwrap();
    // mpmath polyroots
    assert!((d.zeta0 + 0.9956343762870106).abs() < 1e-15);
    assert!((d.zeta1 - 0.969290447905174).abs() < 1e-15);
    assert!((d.zeta2 - 1.3263439283818367).abs() < 1e-15);
    for z in [d.zeta0, d.zeta1, d.zeta2] {
        assert!(em.p(z).abs() < 1e-14);
    }
    for (h, j2) in [(0.3, 0.2), (-0.5, 0.4), (1.0, 0.01), (-0.01, 1e-4)] {
        let d = cubic_roots(EnergyMomentum::new(h, j2)).unwrap();
        let (a, b, c) = (d.zeta0, d.zeta1, d.zeta2);
        assert!((a + b + c - (h + 1.0)).abs() < 1e-13);
        assert!((a * b + a * c + b * c + 1.0).abs() < 1e-13);
        assert!((a * b * c + (h + 1.0) - j2 * j2 / 2.0).abs() < 1e-13);
    }
}

#[test]
fn roots_follow_small_amplitude_expansion() {
    for eps in [0.02, 0.01, 0.005] {
        let (h, j2) = (0.3 * eps / 0.36f64.sqrt(), 0.2 * eps / 0.36f64.sqrt());
        let d = cubic_roots(EnergyMomentum::new(h, j2)).unwrap();
        let r = (h * h + j2 * j2).sqrt();
        let z1 = 1.0 + 0.5 * (h - r) * (1.0 - j2 * j2 / (8.0 * r));
        let z2 = 1.0 + 0.5 * (h + r) * (1.0 + j2 * j2 / (8.0 * r));
        let bound = 2.0 * eps.powi(3);
        assert!((d.zeta0 - (-1.0 + j2 * j2 / 8.0)).abs() < bound);
        // the ζ₁, ζ₂ expansions drop second-order terms (−(h ± ϱ)²/8 + …)
        assert!((d.zeta1 - z1).abs() < 0.05 * eps * eps, "{eps}: {}", d.zeta1 - z1);
        assert!((d.zeta2 - z2).abs() < 0.05 * eps * eps);
        assert!((d.mc - 0.5 * r).abs() < 2.0 * eps * eps, "{eps}: {}", d.mc - 0.5 * r);
    }
}

#[test]
fn root_ordering_on_disk() {
    for i in -40..=40 {
        for j in -40..=40 {
            let (h, j2) = (i as f64 / 40.0, j as f64 / 40.0);
            if h * h + j2 * j2 > 1.0 {
                continue;
            }
            let d = cubic_roots(EnergyMomentum::new(h, j2)).unwrap();
            assert!(-1.0 <= d.zeta0 && d.zeta0 <= d.zeta1 && d.zeta1 <= 1.0 && 1.0 <= d.zeta2, "({h},{j2}): {d:?}");
            assert!((0.0..=1.0).contains(&d.m) && (d.m + d.mc - 1.0).abs() < 1e-14);
        }
    }
}

#[test]
fn complementary_parameters_are_accurate() {
    let d = cubic_roots(EnergyMomentum::new(0.1, 1e-6)).unwrap();
    assert!((d.n_plus - (d.zeta1 - d.zeta0) / (1.0 - d.zeta0)).abs() < 1e-15);
    assert!(d.p_plus > 0.0 && d.p_minus > 1e11);
    assert!((d.c3_minus * d.delta0 * 4.0 - 1e-12).abs() < 1e-24);
}
