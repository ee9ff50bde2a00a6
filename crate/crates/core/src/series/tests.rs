use proptest::prelude::*;
use rug::{Float, Rational};

use super::*;

const HJ: [&str; 2] = ["h", "j2"];
const JJ: [&str; 2] = ["j1", "j2"];

fn s2(order: u32, vars: [&str; 2], t: &[((u32, u32), i64, i64)]) -> TruncatedSeries2 {
    TruncatedSeries2::from_terms(order, vars, t.iter().map(|&(k, n, d)| (k, rat(n, d))))
}

#[test]
fn difference_of_squares() {
    let a = s2(2, JJ, &[((0, 0), 1, 1), ((1, 0), 1, 1)]);
    let b = s2(2, JJ, &[((0, 0), 1, 1), ((1, 0), -1, 1)]);
    assert_eq!(a.mul(&b).unwrap(), s2(2, JJ, &[((0, 0), 1, 1), ((2, 0), -1, 1)]));
}

#[test]
fn mixed_products_cancel() {
    let h = TruncatedSeries2::variable(2, HJ, Var::First);
    let j = TruncatedSeries2::variable(2, HJ, Var::Second);
    let lhs = h.mul(&h.add(&j).unwrap()).unwrap().add(&j.mul(&j.sub(&h).unwrap()).unwrap()).unwrap();
    assert_eq!(lhs, s2(2, HJ, &[((2, 0), 1, 1), ((0, 2), 1, 1)]));
}

#[test]
fn scaling() {
    let f = s2(4, JJ, &[((1, 0), 1, 1), ((0, 2), 3, 1)]);
    assert_eq!(f.scale(&rat(1, 16)), s2(4, JJ, &[((1, 0), 1, 16), ((0, 2), 3, 16)]));
}

#[test]
fn label_mismatch_is_an_error() {
    let a = TruncatedSeries2::variable(3, HJ, Var::First);
    let b = TruncatedSeries2::variable(3, JJ, Var::First);
    assert!(matches!(a.add(&b), Err(crate::Error::Labels(..))));
    assert!(matches!(a.arith(&b, ArithOp::Mul), Err(crate::Error::Labels(..))));
}

#[test]
fn truncation_discards_high_terms() {
    let x = TruncatedSeries2::variable(3, JJ, Var::First);
    assert!(x.pow(4).is_zero());
    assert_eq!(x.pow(3).coeff(3, 0), 1);
}

#[test]
fn compose_square() {
    let f = s2(4, HJ, &[((2, 0), 1, 1)]);
    let g = s2(4, JJ, &[((1, 0), 1, 1), ((0, 1), 1, 1)]);
    let f = f.relabel(["h", "j2"]);
    let g = g.relabel(["j1", "j2"]);
    let c = f.compose_first(&g).unwrap();
    assert_eq!(c, s2(4, JJ, &[((2, 0), 1, 1), ((1, 1), 2, 1), ((0, 2), 1, 1)]));
}

#[test]
fn compose_rejects_constant_term() {
    let f = s2(3, HJ, &[((1, 0), 1, 1)]);
    let g = s2(3, JJ, &[((0, 0), 1, 1), ((1, 0), 1, 1)]);
    assert_eq!(f.compose_first(&g), Err(crate::Error::Substitution));
}

#[test]
fn pendulum_inversion() {
    let f = s2(4, HJ, &[((1, 0), 1, 1), ((2, 0), -1, 16), ((3, 0), 3, 256), ((4, 0), -25, 8192)]);
    let g = f.invert_first("j1").unwrap();
    assert_eq!(g.coeff(1, 0), 1);
    assert_eq!(g.coeff(2, 0), rat(1, 16));
    // a₃ = 2b₂² − b₃ = 2/256 − 3/256
    assert_eq!(g.coeff(3, 0), rat(-1, 256));
    let id = f.compose_first(&g).unwrap();
    assert_eq!(id, TruncatedSeries2::variable(4, JJ, Var::First));
}

#[test]
fn identity_inverts_to_identity() {
    let f = TruncatedSeries2::variable(6, HJ, Var::First);
    assert_eq!(f.invert_first("j1").unwrap(), TruncatedSeries2::variable(6, JJ, Var::First));
}

#[test]
fn inversion_needs_unit_linear_term() {
    let f = s2(4, HJ, &[((1, 0), 2, 1), ((2, 0), 1, 1)]);
    assert!(matches!(f.invert_first("j1"), Err(crate::Error::Inversion(_))));
}

#[test]
fn inversion_with_parameter_terms() {
    // u + y + u·y + u²: the inverse has pure-y terms.
    let f = s2(7, HJ, &[((1, 0), 1, 1), ((0, 1), 1, 1), ((1, 1), 1, 1), ((2, 0), 1, 1)]);
    let g = f.invert_first("x").unwrap();
    assert_eq!(f.compose_first(&g).unwrap(), TruncatedSeries2::variable(7, ["x", "j2"], Var::First));
    assert_eq!(g.coeff(0, 1), -1);
}

#[test]
fn partial_derivatives() {
    let s = s2(4, JJ, &[((2, 0), 3, 32), ((0, 2), 9, 32)]);
    assert_eq!(s.partial(Var::Second), s2(3, JJ, &[((0, 1), 9, 16)]));
    let c = s2(4, HJ, &[((0, 0), 5, 1)]);
    assert!(c.partial(Var::First).is_zero());
    assert_eq!(c.partial(Var::First).order(), 3);
}

#[test]
fn evaluation() {
    let f = s2(3, JJ, &[((1, 0), 1, 1), ((0, 1), 1, 1)]);
    assert_eq!(f.evaluate(1.0, 2.0), 3.0);
    let g = s2(5, JJ, &[((2, 3), 7, 3), ((0, 1), -1, 2), ((1, 0), 1, 5)]);
    let (x, y) = (0.3_f64, -0.7_f64);
    let direct = 7.0 / 3.0 * x * x * y * y * y - 0.5 * y + 0.2 * x;
    assert!((g.evaluate(x, y) - direct).abs() < 1e-15);
    let xf = Float::with_val(200, 3) / 10;
    let yf = Float::with_val(200, -7) / 10;
    let exact = Rational::from((7 * 9 * -343, 3 * 100 * 1000)) + Rational::from((7, 20)) + Rational::from((3, 50));
    let diff = g.evaluate_float(&xf, &yf) - Float::with_val(200, &exact);
    assert!(diff.abs() < 1e-55);
}

#[test]
fn exp_and_logs() {
    let x = TruncatedSeries1::variable(3, "x");
    assert_eq!(x.exp_series().unwrap(), TruncatedSeries1::from_coeffs(3, "x", vec![rat(1, 1), rat(1, 1), rat(1, 2), rat(1, 6)]));
    let z = TruncatedSeries1::zero(5, "x");
    assert_eq!(z.exp_series().unwrap(), TruncatedSeries1::constant(5, "x", rat(1, 1)));
    let f = TruncatedSeries1::from_integers(8, "x", &[0, 3, -2, 5]);
    let back = f.exp_series().unwrap().sub(&TruncatedSeries1::constant(8, "x", rat(1, 1))).unwrap().ln_1p().unwrap();
    assert_eq!(back, f);
    let one = TruncatedSeries1::from_integers(3, "x", &[1, 1]);
    assert!(one.exp_series().is_err());
}

#[test]
fn bivariate_exp_is_multiplicative() {
    let a = s2(6, JJ, &[((1, 0), 1, 3), ((0, 2), -2, 1)]);
    let b = s2(6, JJ, &[((1, 1), 5, 1), ((0, 1), 1, 1)]);
    let lhs = a.add(&b).unwrap().exp_series().unwrap();
    let rhs = a.exp_series().unwrap().mul(&b.exp_series().unwrap()).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn univariate_reversion_round_trip() {
    let f = TruncatedSeries1::from_integers(9, "x", &[0, 1, 6, 24, 76, 200]);
    let g = f.invert("y").unwrap();
    assert_eq!(f.compose(&g).unwrap(), TruncatedSeries1::variable(9, "y"));
    assert_eq!(g.compose(&f).unwrap(), TruncatedSeries1::variable(9, "x"));
}

#[test]
fn reciprocal_and_binomial() {
    let f = TruncatedSeries1::from_integers(6, "x", &[1, -1]);
    assert_eq!(f.recip().unwrap(), TruncatedSeries1::from_integers(6, "x", &[1, 1, 1, 1, 1, 1, 1]));
    let x = TruncatedSeries1::variable(4, "x");
    let sq = x.binomial_pow(&rat(1, 2)).unwrap();
    assert_eq!(sq.mul(&sq).unwrap(), TruncatedSeries1::from_integers(4, "x", &[1, 1]));
    let g = s2(5, JJ, &[((0, 0), 2, 1), ((1, 0), 1, 1), ((1, 1), -3, 1)]);
    let one = TruncatedSeries2::constant(5, JJ, rat(1, 1));
    assert_eq!(g.mul(&g.recip().unwrap()).unwrap(), one);
}

#[test]
fn json_round_trip() {
    let f = s2(5, HJ, &[((1, 0), 1, 1), ((2, 0), -1, 16), ((0, 2), -3, 16), ((3, 2), 123456789, 987654321)]);
    let text = f.to_json();
    assert!(text.contains("\"vars\":[\"h\",\"j2\"]"));
    assert_eq!(TruncatedSeries2::from_json(&text).unwrap(), f);
    let u = TruncatedSeries1::from_integers(7, "l", &[0, 1, -6, 48]);
    assert_eq!(TruncatedSeries1::from_json(&u.to_json()).unwrap(), u);
    assert!(TruncatedSeries2::from_json(r#"{"order":1,"vars":["a","b"],"terms":[{"a":2,"b":0,"num":"1","den":"1"}]}"#).is_err());
}

#[test]
fn grouped_layout() {
    let f = s2(3, JJ, &[((1, 0), 1, 1), ((2, 0), 1, 16), ((0, 2), 3, 16), ((3, 0), -1, 256), ((1, 2), -9, 256)]);
    assert_eq!(f.pretty_grouped(false), "j1 + (1/16)(j1^2 + 3 j2^2) - (1/256)(j1^3 + 9 j1*j2^2)");
}

fn small_series(vars: [&'static str; 2]) -> impl Strategy<Value = TruncatedSeries2> {
    proptest::collection::vec(((0u32..4, 0u32..4), -5i64..6, 1i64..5), 0..7).prop_map(move |t| {
        TruncatedSeries2::from_terms(5, vars, t.into_iter().map(|(k, n, d)| (k, rat(n, d))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(a in small_series(JJ), b in small_series(JJ), c in small_series(JJ)) {
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn mixed_partials_commute(a in small_series(JJ)) {
        prop_assert_eq!(a.partial(Var::First).partial(Var::Second), a.partial(Var::Second).partial(Var::First));
    }

    #[test]
    fn inversion_round_trip(a in small_series(HJ)) {
        // force f = u + (terms of degree ≥ 2 or in y)
        let mut f = a.sub(&a.homogeneous_part(0)).unwrap();
        let lin = f.coeff(1, 0);
        f = f.sub(&TruncatedSeries2::from_terms(5, HJ, [((1, 0), lin - 1)])).unwrap();
        let g = f.invert_first("x").unwrap();
        prop_assert_eq!(f.compose_first(&g).unwrap(), TruncatedSeries2::variable(5, ["x", "j2"], Var::First));
    }

    #[test]
    fn evaluation_is_multiplicative(a in small_series(JJ), b in small_series(JJ), x in -0.05f64..0.05, y in -0.05f64..0.05) {
        let prod = a.mul(&b).unwrap().evaluate(x, y);
        let direct = a.evaluate(x, y) * b.evaluate(x, y);
        let size = 1.0 + a.terms().map(|(_, c)| c.to_f64().abs()).sum::<f64>();
        let size = size * (1.0 + b.terms().map(|(_, c)| c.to_f64().abs()).sum::<f64>());
        let bound = size * (x.abs() + y.abs()).powi(6) + 1e-14 * size;
        prop_assert!((prod - direct).abs() <= bound);
    }
}
