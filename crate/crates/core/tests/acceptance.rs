//! End-to-end acceptance checks. Each test prints one PASS/FAIL line.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use pendinv::actions::{
    a_series, action_i1, w_expansion_check, birkhoff_by_inversion, fit_invariant_s, j1_series, model_error,
    monodromy_check, rotation_w_numeric, twistless_curve, w_star, InvariantModel,
};
use pendinv::dynamics::{periodic_orbit_search, periodic_orbits_at_energy, rotation_number_by_integration};
use pendinv::elliptic::EnergyMomentum;
use pendinv::normalform::lie_normalize;
use pendinv::pendulum::{nome_from_invariant, pendulum_invariant_published, pendulum_quadruple};
use pendinv::series::{TruncatedSeries1, TruncatedSeries2};
use rug::Rational;

fn r(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn verdict(id: u32, name: &str, pass: bool, detail: String) {
    println!("criterion {id:>2} {}: {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

/// (J₁, J₂) exponents and coefficients of H through degree 5.
fn normal_form_terms() -> Vec<((u32, u32), Rational)> {
    vec![
        ((1, 0), r(1, 1)),
        ((2, 0), r(1, 16)),
        ((0, 2), r(3, 16)),
        ((3, 0), r(-1, 256)),
        ((1, 2), r(-9, 256)),
        ((4, 0), r(5, 8192)),
        ((2, 2), r(102, 8192)),
        ((0, 4), r(33, 8192)),
        ((5, 0), r(-33, 262144)),
        ((3, 2), r(-1230, 262144)),
        ((1, 4), r(-813, 262144)),
    ]
}

#[test]
fn criterion_01_normal_form_coefficients() {
    let t = Instant::now();
    let h = lie_normalize(20).unwrap();
    let elapsed = t.elapsed();
    let bad: Vec<_> = normal_form_terms().into_iter().filter(|((a, b), c)| h.coeff(*a, *b) != *c).collect();
    let low = h.truncate(5) == TruncatedSeries2::from_terms(5, ["j1", "j2"], normal_form_terms()).relabel(h.vars());
    let pass = bad.is_empty() && low && h.degree() == Some(10) && elapsed < Duration::from_secs(10);
    verdict(1, "normal form through degree 10", pass, format!("mismatches {bad:?}, degree ≤ 5 exact: {low}, {elapsed:.2?}"));
}

#[test]
fn criterion_02_inversion_equals_lie_series() {
    let t = Instant::now();
    let inv = j1_series(10).unwrap().invert_first("j1").unwrap();
    let lie = lie_normalize(20).unwrap();
    let elapsed = t.elapsed();
    let same = inv.relabel(["x", "y"]) == lie.relabel(["x", "y"]);
    let via_api = birkhoff_by_inversion(20).unwrap() == lie;
    let pass = same && via_api && lie.len() > 20 && elapsed < Duration::from_secs(10);
    verdict(2, "inverse of J1 equals the Lie normal form", pass, format!("{} terms, equal {same}/{via_api}, {elapsed:.2?}", lie.len()));
}

#[test]
fn criterion_03_residue_series() {
    let j = j1_series(4).unwrap();
    let expect = TruncatedSeries2::from_terms(
        4,
        ["h", "j2"],
        [
            ((1, 0), r(1, 1)),
            ((2, 0), r(-1, 16)),
            ((0, 2), r(-3, 16)),
            ((3, 0), r(3, 256)),
            ((1, 2), r(15, 256)),
            ((4, 0), r(-25, 8192)),
            ((2, 2), r(-210, 8192)),
            ((0, 4), r(-105, 8192)),
        ],
    );
    verdict(3, "J1 series through degree 4", j == expect, format!("{j}"));
}

#[test]
fn criterion_04_invariant_fit() {
    let t = Instant::now();
    let fit = fit_invariant_s(10, 256, 0).unwrap();
    let elapsed = t.elapsed();
    let expect = [
        ((2, 0), 3.0 / 32.0),
        ((0, 2), 9.0 / 32.0),
        ((3, 0), -5.0 / 512.0),
        ((1, 2), -51.0 / 512.0),
        ((4, 0), 55.0 / 32768.0),
        ((2, 2), 1230.0 / 32768.0),
        ((0, 4), 271.0 / 32768.0),
    ];
    let value = |e: (u32, u32)| fit.coefficients.iter().find(|c| c.exponents == e).map_or(0.0, |c| c.value);
    let mut worst = fit.diagnostics.ln32_error.abs();
    for (e, v) in expect {
        worst = worst.max((value(e) - v).abs());
    }
    // odd powers of j₂ and the j₁j₂ cross term vanish
    for e in [(1, 1), (0, 3), (2, 1)] {
        worst = worst.max(value(e).abs());
    }
    let res = fit.diagnostics.residual_max;
    let pass = worst < 1e-6 && res < 1e-9 && elapsed < Duration::from_secs(120);
    verdict(4, "fitted invariant coefficients", pass, format!("max |Δ| {worst:.1e}, residual {res:.1e}, {elapsed:.2?}"));
}

#[test]
fn criterion_05_model_error_bound() {
    let m = InvariantModel::published().unwrap();
    let half = model_error(&m, 0.5, 200).unwrap();
    let one = model_error(&m, 1.0, 200).unwrap();
    let pass = half.points == 200 && one.points == 200 && half.max_error_2pi <= 1.0e-4 && one.max_error_2pi <= 3.2e-3;
    verdict(
        5,
        "model error of 2πI1",
        pass,
        format!(
            "r = 1/2: {:.2e} (≤ 1.0e-4), r = 1: {:.2e} (≤ 3.2e-3); in I1: {:.2e}, {:.2e}",
            half.max_error_2pi, one.max_error_2pi, half.max_error_i1, one.max_error_i1
        ),
    );
}

#[test]
fn criterion_06_pendulum_legendre_relation() {
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let h = -1.9 + 6.9 * (i as f64 + 0.5) / 50.0;
        assert!(h.abs() > 1e-3);
        let q = pendulum_quadruple(h).unwrap();
        worst = worst.max((q.i * q.u - q.j * q.t - 8.0).abs());
    }
    verdict(6, "IU − JT = 8", worst < 1e-12, format!("max deviation {worst:.1e} on 50 points"));
}

#[test]
fn criterion_07_nome_and_theta_series() {
    let order = 7;
    let nome = nome_from_invariant(&pendulum_invariant_published(), order).unwrap();
    // l(q) = J(q)/32 with J = −16 q ϑ₄′/ϑ₄³, ϑ₄ = 1 + 2Σ(−1)ⁿ q^{n²}
    let mut th = vec![Rational::new(); order as usize + 1];
    let mut dth = vec![Rational::new(); order as usize + 1];
    th[0] = r(1, 1);
    for n in 1u32.. {
        let k = (n * n) as usize;
        if k > order as usize {
            break;
        }
        let c = if n % 2 == 1 { -2 } else { 2 };
        th[k] = r(c, 1);
        // q ϑ₄′ has coefficient k·c at q^k
        dth[k] = r(c * k as i64, 1);
    }
    let theta = TruncatedSeries1::from_coeffs(order, "q", th);
    let q_dtheta = TruncatedSeries1::from_coeffs(order, "q", dth);
    let cube = theta.mul(&theta).unwrap().mul(&theta).unwrap();
    let l_of_q = q_dtheta.div(&cube).unwrap().scale(&r(-16, 32));
    let inverse = l_of_q.invert("l").unwrap();
    let expect = [1, -6, 48, -436, 4254, -43452, 458192];
    let q = &nome.q_of_l;
    let integral = q.coeffs().iter().all(|c| *c.denom() == 1);
    let matches = expect.iter().enumerate().all(|(k, c)| q.coeff(k as u32 + 1) == *c) && q.coeff(0) == 0;
    let pass = *q == inverse && integral && matches;
    verdict(7, "nome series equals the theta inversion", pass, format!("q(l) = {q}"));
}

#[test]
fn criterion_08_rotation_log_coefficient() {
    let a = a_series(6).unwrap();
    let displayed = [
        ((0, 1), r(3, 8)),
        ((1, 1), r(-15, 128)),
        ((2, 1), r(45, 1024)),
        ((0, 3), r(30, 1024)),
        ((3, 1), r(-1125, 65536)),
        ((1, 3), r(-1935, 65536)),
    ];
    let routes = a.ratio == a.residue;
    let shown = displayed.iter().all(|((x, y), c)| a.ratio.coeff(*x, *y) == *c);
    let low = a.ratio.truncate(4) == TruncatedSeries2::from_terms(4, ["j1", "j2"], displayed).relabel(a.ratio.vars());
    verdict(8, "A series by two routes", routes && shown && low, format!("routes agree {routes}, displayed terms {shown}, complete through degree 4 {low}"));
}

#[test]
fn criterion_09_rotation_number_triangle() {
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        for k in 0..5 {
            let rad = 0.5 * (i as f64 + 1.0) / 5.0;
            let t = (k as f64 + 0.5) * PI / 10.0 - PI / 2.0;
            let em = EnergyMomentum::new(rad * t.sin(), rad * t.cos());
            let elliptic = rotation_w_numeric(em).unwrap();
            let d = 1e-5;
            let ip = action_i1(EnergyMomentum::new(em.h, em.j2 + d)).unwrap().value;
            let im = action_i1(EnergyMomentum::new(em.h, em.j2 - d)).unwrap().value;
            let fd = -(ip - im) / (2.0 * d);
            let orbit = rotation_number_by_integration(em, 1e-12).unwrap();
            worst = worst.max((elliptic - fd).abs()).max((elliptic - orbit).abs()).max((fd - orbit).abs());
        }
    }
    let expansion = w_expansion_check(0.07, 1e-5).unwrap();
    let pass = worst < 1e-4 && expansion.pass;
    verdict(9, "rotation number three ways", pass, format!("max pairwise {worst:.1e}; expansion error {:.1e} at radius 0.07", expansion.max_error));
}

#[test]
fn criterion_10_monodromy() {
    let a = monodromy_check(0.3, 64, 1).unwrap();
    let b = monodromy_check(0.3, 128, 1).unwrap();
    let pass = a.mu.abs() == 1 && a.mu == b.mu && (a.ratio - b.ratio).abs() < 1e-6;
    verdict(10, "monodromy of I1", pass, format!("μ = {} ({:.10}), doubled steps μ = {} ({:.10})", a.mu, a.ratio, b.mu, b.ratio));
}

#[test]
fn criterion_11_twistless_curve() {
    let m = InvariantModel::published().unwrap();
    let mut exists = true;
    for k in 0..=14 {
        exists &= twistless_curve(&m, 0.05 + 0.05 * k as f64).is_ok();
    }
    let p = w_star(&m, 0.1).unwrap();
    // independent evaluation of 3/4 + (3r/8π)(ln(32/r) − 5/2) at r = 0.1
    let approx = 0.75 + 0.3 / (8.0 * PI) * ((320.0f64).ln() - 2.5);
    let rel = (p.w - approx).abs() / approx;
    let mut in_range = true;
    for i in 1..=6 {
        for k in 1..=12 {
            let (rad, s) = (0.75 * i as f64 / 6.0, PI / 2.0 * k as f64 / 13.0);
            let w = m.rotation_w(rad * s.sin(), rad * s.cos()).unwrap();
            in_range &= w > 0.75 && w <= 1.0;
        }
    }
    let pass = exists && rel < 0.05 && in_range;
    verdict(11, "twistless curve", pass, format!("exists on [0.05, 0.75]: {exists}; r = 0.1: W = {:.6} vs {approx:.6} (rel {rel:.1e}); W ∈ (3/4, 1] for j1 > 0: {in_range}", p.w));
}

#[test]
fn criterion_12_periodic_orbits() {
    let m = InvariantModel::published().unwrap();
    let mut worst: f64 = 0.0;
    let mut found = 0;
    for t in [(4, 7), (3, 5), (5, 8), (2, 3), (5, 7), (3, 4), (4, 5), (7, 8)] {
        if let Ok(o) = periodic_orbit_search(&m, t, 0.75, 1e-12) {
            found += 1;
            worst = worst.max(o.closure_error);
        }
    }
    let pair = periodic_orbits_at_energy((5, 6), 0.05, 1e-12).unwrap_or_default();
    let distinct = pair.len() == 2 && (pair[0].j2 - pair[1].j2).abs() > 1e-3;
    for o in &pair {
        worst = worst.max(o.closure_error);
    }
    let pass = found == 8 && distinct && worst < 1e-6;
    verdict(12, "periodic orbits", pass, format!("{found}/8 on r = 0.75, {} with W = 5/6 at h = 0.05, max closure {worst:.1e}", pair.len()));
}
