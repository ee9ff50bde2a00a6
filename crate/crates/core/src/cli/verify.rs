use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use super::rotation_by_difference;
use crate::actions::{
    a_series, w_expansion_check, birkhoff_by_inversion, fit_invariant_s, j1_series, model_error,
    monodromy_check, published_coefficients, rotation_w_numeric, twistless_curve, w_star, InvariantModel,
};
use crate::dynamics::{periodic_orbit_search, periodic_orbits_at_energy, rotation_number_by_integration};
use crate::elliptic::EnergyMomentum;
use crate::error::{Error, Result};
use crate::normalform::{canonical_pt_cross_check, lie_normalize, verify_linear_nf};
use crate::pendulum::{
    nome_from_invariant, nome_theta_consistency, pendulum_invariant_published, pendulum_quadruple, pendulum_series_check,
};
use crate::series::rat;

pub const SUITES: [&str; 15] = [
    "normalform",
    "linear",
    "canonical",
    "residue",
    "aseries",
    "invariants",
    "model-error",
    "legendre",
    "pendulum-series",
    "nome",
    "rotation",
    "w-expansion",
    "monodromy",
    "twist",
    "orbits",
];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Runs one suite; failed checks are reported in the result, only unknown names are errors.
pub fn run_suite(name: &str, seed: u64) -> Result<SuiteResult> {
    let outcome = match name {
        "normalform" => normalform(),
        "linear" => linear(),
        "canonical" => canonical(),
        "residue" => residue(),
        "aseries" => aseries(),
        "invariants" => invariants(),
        "model-error" => model(),
        "legendre" => legendre(seed),
        "pendulum-series" => pendulum_series_check().map(|r| (r.pass, format!("{} rows, J = J1(h, 0): {}", r.rows.len(), r.j_matches_j1_series))),
        "nome" => nome(),
        "rotation" => rotation(),
        "w-expansion" => w_expansion_check(0.07, 1e-5).map(|r| (r.pass, format!("max error {:.2e} over {} points", r.max_error, r.points))),
        "monodromy" => monodromy(),
        "twist" => twist(),
        "orbits" => orbits(),
        _ => return Err(Error::Domain(format!("unknown suite {name:?}; available: all, {}", SUITES.join(", ")))),
    };
    let (pass, detail) = outcome.unwrap_or_else(|e| (false, e.to_string()));
    Ok(SuiteResult { name: name.to_string(), pass, detail })
}

type Outcome = Result<(bool, String)>;

fn normalform() -> Outcome {
    let lie = lie_normalize(20)?;
    let inv = birkhoff_by_inversion(20)?;
    let displayed = [
        ((2, 0), rat(1, 16)),
        ((0, 2), rat(3, 16)),
        ((3, 0), rat(-1, 256)),
        ((1, 2), rat(-9, 256)),
        ((4, 0), rat(5, 8192)),
        ((2, 2), rat(102, 8192)),
        ((0, 4), rat(33, 8192)),
        ((5, 0), rat(-33, 262144)),
        ((3, 2), rat(-1230, 262144)),
        ((1, 4), rat(-813, 262144)),
    ];
    let bad: Vec<String> =
        displayed.iter().filter(|((a, b), c)| lie.coeff(*a, *b) != *c).map(|((a, b), c)| format!("({a},{b}) ≠ {c}")).collect();
    let pass = lie == inv && bad.is_empty();
    Ok((pass, format!("degree 10: Lie = inversion: {}; displayed mismatches: {bad:?}", lie == inv)))
}

fn linear() -> Outcome {
    let (_, r) = verify_linear_nf()?;
    Ok((r.ok(), format!("symplectic {}, preserves j2 {}, normalizes H {}", r.symplectic, r.preserves_j2, r.normalizes_h)))
}

fn canonical() -> Outcome {
    let r = canonical_pt_cross_check()?;
    Ok((r.average_ok(), format!("W4 = {}S1; printed sign flips at m = {:?}", if r.w4_relation > 0 { "+" } else { "−" }, r.printed_sign_flips)))
}

fn residue() -> Outcome {
    let j = j1_series(4)?;
    let displayed = [
        ((1, 0), rat(1, 1)),
        ((2, 0), rat(-1, 16)),
        ((0, 2), rat(-3, 16)),
        ((3, 0), rat(3, 256)),
        ((1, 2), rat(15, 256)),
        ((4, 0), rat(-25, 8192)),
        ((2, 2), rat(-210, 8192)),
        ((0, 4), rat(-105, 8192)),
    ];
    let ok = displayed.iter().all(|((a, b), c)| j.coeff(*a, *b) == *c) && j.len() == displayed.len();
    Ok((ok, format!("J1 = {j}")))
}

fn aseries() -> Outcome {
    let a = a_series(6)?;
    let displayed = [
        ((0, 1), rat(3, 8)),
        ((1, 1), rat(-15, 128)),
        ((2, 1), rat(45, 1024)),
        ((0, 3), rat(30, 1024)),
        ((3, 1), rat(-1125, 65536)),
        ((1, 3), rat(-1935, 65536)),
    ];
    let ok = a.ratio == a.residue && displayed.iter().all(|((x, y), c)| a.ratio.coeff(*x, *y) == *c);
    Ok((ok, "ratio-of-partials route = −∂J1/∂j2 ∘ H through degree 6".into()))
}

fn invariants() -> Outcome {
    let fit = fit_invariant_s(8, 192, 0)?;
    let published = published_coefficients();
    let mut worst: f64 = fit.diagnostics.ln32_error.abs();
    for c in &fit.coefficients {
        let (a, b) = c.exponents;
        if a + b <= 4 {
            let p = published.get(&(a, b)).cloned().unwrap_or_else(Rational::new);
            worst = worst.max((c.value - p.to_f64()).abs());
        }
    }
    let pass = worst < 1e-6 && fit.diagnostics.residual_max < 1e-9;
    Ok((pass, format!("degree 8 at 192 bits: max |Δ| (degree ≤ 4) {worst:.1e}, residual {:.1e}", fit.diagnostics.residual_max)))
}

fn model() -> Outcome {
    let m = InvariantModel::published()?;
    let half = model_error(&m, 0.5, 200)?;
    let one = model_error(&m, 1.0, 200)?;
    let pass = half.max_error_2pi <= 1.0e-4 && one.max_error_2pi <= 3.2e-3;
    Ok((
        pass,
        format!(
            "max |Δ2πI1|: {:.2e} (r = 1/2, bound 1e-4), {:.2e} (r = 1, bound 3.2e-3); |ΔI1|: {:.2e}, {:.2e}",
            half.max_error_2pi, one.max_error_2pi, half.max_error_i1, one.max_error_i1
        ),
    ))
}

fn legendre(seed: u64) -> Outcome {
    let mut hs: Vec<f64> = (0..50).map(|i| -1.9 + 6.9 * (i as f64 + 0.5) / 50.0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    hs.extend((0..50).map(|_| rng.gen_range(-1.9..5.0)).filter(|h: &f64| h.abs() > 1e-6));
    let mut worst: f64 = 0.0;
    for h in &hs {
        worst = worst.max((pendulum_quadruple(*h)?.legendre() - 8.0).abs());
    }
    Ok((worst < 1e-12, format!("max |IU − JT − 8| = {worst:.1e} over {} points (seed {seed})", hs.len())))
}

fn nome() -> Outcome {
    let n = nome_from_invariant(&pendulum_invariant_published(), 8)?;
    nome_theta_consistency(&n)?;
    let expect = [1, -6, 48, -436, 4254, -43452, 458192];
    let ok = n.is_integral() && expect.iter().enumerate().all(|(k, c)| n.q_of_l.coeff(k as u32 + 1) == *c);
    Ok((ok, format!("q(l) = {}", n.q_of_l)))
}

fn quarter_disk() -> Vec<EnergyMomentum> {
    let mut pts = Vec::new();
    for i in 0..5 {
        for k in 0..5 {
            let r = 0.5 * (i as f64 + 1.0) / 5.0;
            let t = (k as f64 + 0.5) * PI / 10.0 - PI / 2.0;
            pts.push(EnergyMomentum::new(r * t.sin(), r * t.cos()));
        }
    }
    pts
}

fn rotation() -> Outcome {
    let diffs = quarter_disk()
        .par_iter()
        .map(|&em| {
            let w = rotation_w_numeric(em)?;
            let fd = rotation_by_difference(em)?;
            let orbit = rotation_number_by_integration(em, 1e-12)?;
            Ok((w - fd).abs().max((w - orbit).abs()).max((fd - orbit).abs()))
        })
        .collect::<Result<Vec<f64>>>()?;
    let worst = diffs.into_iter().fold(0.0, f64::max);
    Ok((worst < 1e-4, format!("max pairwise difference {worst:.1e} on a 5×5 quarter-disk grid")))
}

fn monodromy() -> Outcome {
    let a = monodromy_check(0.3, 64, 1)?;
    let b = monodromy_check(0.3, 128, 1)?;
    let c = monodromy_check(0.3, 64, -1)?;
    let pass = a.mu.abs() == 1 && a.mu == b.mu && c.mu == -a.mu;
    Ok((pass, format!("μ = {} (ratio {:.9}), doubled steps μ = {}, reversed μ = {}", a.mu, a.ratio, b.mu, c.mu)))
}

fn twist() -> Outcome {
    let m = InvariantModel::published()?;
    for k in 0..=14 {
        twistless_curve(&m, 0.05 + 0.05 * k as f64)?;
    }
    let p = w_star(&m, 0.1)?;
    let rel = (p.w - p.w_star).abs() / p.w;
    let mut range_ok = true;
    for i in 1..=6 {
        for k in 1..12 {
            let (r, s) = (0.75 * i as f64 / 6.0, PI / 2.0 * k as f64 / 12.0);
            let w = m.rotation_w(r * s.sin(), r * s.cos())?;
            range_ok &= w > 0.75 && w <= 1.0;
        }
    }
    Ok((rel < 0.05 && range_ok, format!("twistless curve on r ∈ [0.05, 0.75]; r = 0.1: W = {:.6}, W* = {:.6} (rel {rel:.1e}); W ∈ (3/4, 1] for j1 > 0: {range_ok}", p.w, p.w_star)))
}

fn orbits() -> Outcome {
    let m = InvariantModel::published()?;
    let targets = [(4, 7), (3, 5), (5, 8), (2, 3), (5, 7), (3, 4), (4, 5), (7, 8)];
    let found = targets.par_iter().map(|&t| periodic_orbit_search(&m, t, 0.75, 1e-12)).collect::<Result<Vec<_>>>()?;
    let worst = found.iter().map(|o| o.closure_error).fold(0.0, f64::max);
    let pair = periodic_orbits_at_energy((5, 6), 0.05, 1e-12)?;
    let pass = worst < 1e-6 && pair.len() == 2 && pair.iter().all(|o| o.closure_error < 1e-6);
    Ok((pass, format!("8 orbits at r = 0.75, max closure {worst:.1e}; W = 5/6 at h = 0.05: {} orbits", pair.len())))
}
