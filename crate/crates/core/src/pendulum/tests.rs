use std::f64::consts::PI;

use super::*;
use crate::actions::InvariantModel;
use crate::elliptic::ellint_e;
use crate::error::Error;
use crate::series::TruncatedSeries1;

#[test]
fn quadruple_values_and_errors() {
    let q = pendulum_quadruple(2.0).unwrap();
    let k = 0.5f64.sqrt();
    assert!((q.i - 4.0 / (PI * k) * ellint_e(0.5).unwrap()).abs() < 1e-15);
    assert_eq!(q.branch, Branch::Above);
    assert_eq!(pendulum_quadruple(-1.0).unwrap().branch, Branch::Below);
    assert!(matches!(pendulum_quadruple(-2.0), Err(Error::Domain(_))));
    assert!(matches!(pendulum_quadruple(0.0), Err(Error::Divergence(_))));
    let t = pendulum_quadruple(-1.0).unwrap().true_pendulum();
    assert!((t.legendre() - 16.0).abs() < 1e-12);
}

#[test]
fn legendre_relation_on_grid() {
    for i in 0..50 {
        // log-spaced distances from the separatrix on both sides
        let d = 10f64.powf(-4.0 + 4.0 * (i / 2) as f64 / 24.0);
        let h = if i % 2 == 0 { (5.0 * d).min(5.0) } else { -1.9 * d };
        let q = pendulum_quadruple(h).unwrap();
        assert!((q.legendre() - 8.0).abs() < 1e-12, "h = {h}: {}", q.legendre() - 8.0);
    }
}

#[test]
fn appell_duality() {
    for i in 1..40 {
        let h = -2.0 * i as f64 / 40.0;
        let q = pendulum_quadruple(h).unwrap();
        let dual = pendulum_quadruple(-2.0 - h).unwrap();
        assert!((q.j + 2.0 * dual.i).abs() < 1e-12, "h = {h}");
        assert!((q.u - 2.0 * dual.t).abs() < 1e-12);
    }
}

#[test]
fn branches_join_at_separatrix() {
    let (a, b) = (pendulum_quadruple(1e-6).unwrap(), pendulum_quadruple(-1e-6).unwrap());
    assert!((a.j - b.j).abs() < 1e-5 && (a.u - b.u).abs() < 1e-5 && (a.i - b.i).abs() < 1e-5);
}

#[test]
fn displayed_expansions() {
    let r = pendulum_series_check().unwrap();
    assert!(r.pass, "{r:?}");
    // 2πI(j) = 8 + j(1 + ln(32/|j|)) + 3j²/32 + … agrees with the model at j₂ = 0
    let m = InvariantModel::published().unwrap();
    for j in [-0.05, 0.05] {
        let direct = 8.0 + j * (1.0 + (32.0 / f64::abs(j)).ln()) + 3.0 * j * j / 32.0;
        assert!((m.action_2pi(j, 0.0).unwrap() - direct).abs() < 1e-5);
    }
}

#[test]
fn nome_series_from_invariant() {
    let n = nome_from_invariant(&pendulum_invariant_published(), 8).unwrap();
    // printed as "48 l²" for the third term; the derived exponent is 3
    let expect = TruncatedSeries1::from_integers(8, "l", &[0, 1, -6, 48, -436, 4254, -43452, 458192, -4945872]);
    assert_eq!(n.q_of_l, expect);
    assert_eq!(n.reciprocal.pole, 1);
    assert_eq!(n.reciprocal.regular.truncate(4), TruncatedSeries1::from_integers(4, "l", &[6, -12, 76, -606, 5412]));
    assert!(n.is_integral());
    assert_eq!(n.q_of_l.compose(&n.l_of_q).unwrap(), TruncatedSeries1::variable(8, "q"));
    nome_theta_consistency(&n).unwrap();
    assert!(matches!(nome_from_invariant(&pendulum_invariant_published(), 9), Err(Error::Order(_))));
}

#[test]
fn theta_series() {
    let t = theta4(16);
    assert_eq!(t, TruncatedSeries1::from_integers(16, "q", &[1, -2, 0, 0, 2, 0, 0, 0, 0, -2, 0, 0, 0, 0, 0, 0, 2]));
    let j = j_of_q_theta(10).unwrap().scale(&rug::Rational::from((1, 32)));
    assert_eq!(j.truncate(4), TruncatedSeries1::from_integers(4, "q", &[0, 1, 6, 24, 76]));
    assert!(j.is_integral());
    // q ϑ₄′ = −2(q − 4q⁴ + 9q⁹ − …)
    let d = TruncatedSeries1::from_coeffs(16, "q", t.derivative().coeffs().to_vec()).shift_up(1);
    assert_eq!(d, TruncatedSeries1::from_integers(16, "q", &[0, -2, 0, 0, 8, 0, 0, 0, 0, -18, 0, 0, 0, 0, 0, 0, 32]));
}

#[test]
fn complex_nome() {
    let s = InvariantModel::published().unwrap().s;
    let q = complex_nome_series(&s, 4).unwrap();
    assert!(q.im.is_zero());
    let c = |a, b| q.coeff(a, b).0;
    assert_eq!((c(1, 0), c(2, 0), c(1, 1)), (1.into(), 6.into(), (-12).into()));
    assert_eq!((c(3, 0), c(2, 1), c(1, 2)), ((-51).into(), (-6).into(), 105.into()));
    assert_eq!((c(4, 0), c(3, 1), c(2, 2), c(1, 3)), (74.into(), 1332.into(), (-1266).into(), (-576).into()));
    let n = nome_from_invariant(&pendulum_invariant_published(), 4).unwrap();
    complex_nome_reduction_check(&q, &n).unwrap();
}
