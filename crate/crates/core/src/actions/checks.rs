use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::integrals::{action_i1, period_t, rotation_w_numeric};
use super::model::InvariantModel;
use super::series::{a_series, birkhoff_by_inversion, j1_series, rotation_log_coefficient};
use crate::elliptic::EnergyMomentum;
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::series::{rat, TruncatedSeries2};

fn sgn(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Expansion of 2πW in (h, j₂) through the displayed orders, ϱ² = h² + j₂².
pub fn w_expansion_2pi(h: f64, j2: f64) -> f64 {
    let r2 = h * h + j2 * j2;
    let rho = r2.sqrt();
    let arg = j2.atan2(h);
    2.0 * PI * sgn(j2) - arg + 0.375 * j2 * (1.0 - 5.0 * h / 16.0 + 35.0 / 256.0 * r2) * (32.0 / rho).ln()
        - j2 / 8.0 * (5.0 * h * h + 6.0 * j2 * j2) / r2
        + j2 * h / 256.0 * (77.0 * h.powi(4) + 174.0 * j2 * j2 * h * h + 93.0 * j2.powi(4)) / (r2 * r2)
}

#[derive(Clone, Debug, Serialize)]
pub struct WExpansionReport {
    /// Max |W_expansion − W_numeric| over the grid with ϱ ≤ `radius`.
    pub max_error: f64,
    pub radius: f64,
    pub points: usize,
    /// The ln(32/ϱ) coefficient equals −∂J₁/∂j₂ through degree 3.
    pub log_coefficient_matches: bool,
    /// −∂J₁/∂j₂ composed with H reproduces A exactly.
    pub reproduces_a: bool,
    pub pass: bool,
}

/// Compares the expansion of W against the elliptic formula on a polar grid of radius ≤ `radius`.
pub fn w_expansion_check(radius: f64, tol: f64) -> Result<WExpansionReport> {
    let mut pts = Vec::new();
    for i in 1..=6 {
        let r = radius * i as f64 / 6.0;
        for k in 0..24 {
            let t = (k as f64 + 0.5) * 2.0 * PI / 24.0;
            pts.push((r * t.cos(), r * t.sin()));
        }
    }
    let errs = pts
        .par_iter()
        .map(|&(h, j2)| Ok((w_expansion_2pi(h, j2) / (2.0 * PI) - rotation_w_numeric(EnergyMomentum::new(h, j2))?).abs()))
        .collect::<Result<Vec<f64>>>()?;
    let max_error = errs.iter().cloned().fold(0.0, f64::max);
    let displayed = TruncatedSeries2::from_terms(
        3,
        ["h", "j2"],
        [((0, 1), rat(3, 8)), ((1, 1), rat(-15, 128)), ((2, 1), rat(105, 2048)), ((0, 3), rat(105, 2048))],
    );
    let log_coefficient_matches = rotation_log_coefficient(3)? == displayed;
    let order = 6;
    let h = birkhoff_by_inversion(2 * order + 2)?;
    let composed = rotation_log_coefficient(order)?.compose_first(&h.truncate(order))?.truncate(order);
    let reproduces_a = composed == a_series(order)?.ratio;
    let pass = max_error < tol && log_coefficient_matches && reproduces_a;
    Ok(WExpansionReport { max_error, radius, points: pts.len(), log_coefficient_matches, reproduces_a, pass })
}

/// Truncation of 2πI₁ in (h, j₂) through the displayed orders.
pub fn action_expansion_2pi(h: f64, j2: f64) -> Result<f64> {
    let r2 = h * h + j2 * j2;
    let rho = r2.sqrt();
    let j1 = j1_series(4)?.evaluate(h, j2);
    Ok(8.0 - 2.0 * PI * j2.abs() + j2 * j2.atan2(h) + j1 * (32.0 / rho).ln() + h + 3.0 / 32.0 * (h * h + 3.0 * j2 * j2)
        - h * (6.0 * h.powi(4) + 43.0 * j2 * j2 * h * h + 39.0 * j2.powi(4)) / (256.0 * r2))
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionScaling {
    pub scale: f64,
    pub max_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ActionExpansionReport {
    pub levels: Vec<ExpansionScaling>,
    /// Fitted exponent p in error ∝ εᵖ between the two smallest scales.
    pub observed_order: f64,
}

/// Pointwise check of the 2πI₁ truncation at shrinking scales ε along fixed directions.
pub fn action_expansion_check() -> Result<ActionExpansionReport> {
    let dirs: Vec<(f64, f64)> = (0..16).map(|k| ((k as f64 + 0.5) * PI / 8.0).sin_cos()).map(|(s, c)| (c, s)).collect();
    let mut levels = Vec::new();
    for scale in [0.2, 0.1, 0.05, 0.025] {
        let mut max_error: f64 = 0.0;
        for &(c, s) in &dirs {
            let (h, j2) = (scale * c, scale * s);
            let num = 2.0 * PI * action_i1(EnergyMomentum::new(h, j2))?.value;
            max_error = max_error.max((num - action_expansion_2pi(h, j2)?).abs());
        }
        levels.push(ExpansionScaling { scale, max_error });
    }
    let n = levels.len();
    let observed_order = (levels[n - 2].max_error / levels[n - 1].max_error).ln() / 2f64.ln();
    Ok(ActionExpansionReport { levels, observed_order })
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelErrorReport {
    pub radius: f64,
    pub points: usize,
    /// max |2πI₁_numeric − 2πI₁_model|
    pub max_error_2pi: f64,
    /// the same for I₁ itself
    pub max_error_i1: f64,
}

/// Error of the model over `n` points of the disk of `radius` in the (h, j₂) plane; j₁ is
/// obtained from the displayed J₁ terms (degree 4).
pub fn model_error(model: &InvariantModel, radius: f64, n: usize) -> Result<ModelErrorReport> {
    let j1s = j1_series(4)?;
    let rings = ((n as f64).sqrt() / 2.0).ceil().max(1.0) as usize;
    let per = n.div_ceil(rings);
    let mut pts = Vec::with_capacity(rings * per);
    for i in 0..rings {
        let r = radius * (i as f64 + 1.0) / rings as f64;
        for k in 0..per {
            let t = (k as f64 + 0.5) * 2.0 * PI / per as f64;
            pts.push((r * t.cos(), r * t.sin()));
        }
    }
    pts.truncate(n);
    let errs = pts
        .par_iter()
        .map(|&(h, j2)| {
            let num = 2.0 * PI * action_i1(EnergyMomentum::new(h, j2))?.value;
            let j1 = j1s.evaluate(h, j2);
            Ok((num - model.action_2pi(j1, j2)?).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_error_2pi = errs.iter().cloned().fold(0.0, f64::max);
    Ok(ModelErrorReport { radius, points: pts.len(), max_error_2pi, max_error_i1: max_error_2pi / (2.0 * PI) })
}

#[derive(Clone, Debug, Serialize)]
pub struct MonodromyReport {
    pub radius: f64,
    pub steps: usize,
    pub orientation: i32,
    /// ΔI₁/j₂ after one loop, before rounding.
    pub ratio: f64,
    pub mu: i64,
}

/// Continues I₁ around the circle h = r cos t, j₂ = r sin t (counter-clockwise for
/// `orientation` = +1) by integrating dI₁ = (T/2π)dh − W dj₂ with W continued across the
/// axis jumps, and returns the integer μ with ΔI₁ = μ j₂.
pub fn monodromy_check(radius: f64, steps: usize, orientation: i32) -> Result<MonodromyReport> {
    if !(radius > 0.0 && radius < 1.0) || steps < 8 || orientation.abs() != 1 {
        return Err(Error::Domain(format!("monodromy loop needs 0 < r < 1, steps ≥ 8, orientation ±1; got {radius}, {steps}, {orientation}")));
    }
    let dir = orientation as f64;
    let dt = dir * 2.0 * PI / steps as f64;
    // start at the top of the circle, offset so no node falls on the axis
    let t0 = 0.5 * PI + 0.5 * dt;
    let (nodes, weights) = gauss_legendre(4);
    let mut ts = Vec::with_capacity(steps * 4);
    for k in 0..steps {
        let mid = t0 + (k as f64 + 0.5) * dt;
        for x in &nodes {
            ts.push(mid + 0.5 * dt * x);
        }
    }
    let vals = ts
        .par_iter()
        .map(|&t| {
            let em = EnergyMomentum::new(radius * t.cos(), radius * t.sin());
            Ok((rotation_w_numeric(em)?, period_t(em)?))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let w_start = rotation_w_numeric(EnergyMomentum::new(radius * t0.cos(), radius * t0.sin()))?;
    let mut w_prev = w_start;
    let mut delta = 0.0;
    for (i, (&t, &(w, tp))) in ts.iter().zip(&vals).enumerate() {
        // keep W continuous: it jumps by integers across the axis
        let w_cont = w + (w_prev - w).round();
        w_prev = w_cont;
        let (dh, dj2) = (-radius * t.sin(), radius * t.cos());
        delta += weights[i % 4] * 0.5 * dt * (tp / (2.0 * PI) * dh - w_cont * dj2);
    }
    let j2_start = radius * t0.sin();
    let ratio = delta / j2_start;
    let mu = ratio.round() as i64;
    if (ratio - mu as f64).abs() > 1e-6 {
        return Err(Error::Continuation(format!("ΔI₁/j₂ = {ratio} is not an integer")));
    }
    Ok(MonodromyReport { radius, steps, orientation, ratio, mu })
}
