use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::float::Constant;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use super::series::birkhoff_by_inversion;
use crate::elliptic::{cubic_roots, EnergyMomentum};
use crate::error::{Error, Result};
use crate::quadrature::TanhSinhRule;
use crate::series::{rat, TruncatedSeries2};

/// Grade of the normal form used to map (j₁, j₂) to h in the fit (degree 30; its
/// truncation error at |ĵ| = 0.4 is far below any fitted coefficient).
const FIT_NF_GRADE: u32 = 60;
const R_MIN: f64 = 0.05;
const R_MAX: f64 = 0.4;
const SNAP_TOL: f64 = 1e-6;

/// Known exact coefficients of the regular part S, keyed by (j₁, j₂) exponents.
pub fn published_coefficients() -> BTreeMap<(u32, u32), Rational> {
    [
        ((2, 0), rat(3, 32)),
        ((0, 2), rat(9, 32)),
        ((3, 0), rat(-5, 512)),
        ((1, 2), rat(-51, 512)),
        ((4, 0), rat(55, 32768)),
        ((2, 2), rat(1230, 32768)),
        ((0, 4), rat(271, 32768)),
        ((5, 0), rat(-189, 524288)),
        ((6, 0), rat(3689, 41943040)),
        ((7, 0), rat(-3129, 134217728)),
        ((8, 0), Rational::from((Integer::from(1575405), Integer::from(240518168576u64)))),
    ]
    .into_iter()
    .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientSource {
    /// Within 1e−6 of a known fraction and replaced by it.
    Published,
    /// Matched a {2,3,5,7}-smooth fraction within the fit uncertainty.
    Recognized,
    /// Kept as the fitted decimal.
    Fitted,
}

#[derive(Clone, Debug, Serialize)]
pub struct FittedCoefficient {
    pub exponents: (u32, u32),
    pub value: f64,
    /// Difference between the fits at orders N and N + 2.
    pub uncertainty: f64,
    #[serde(serialize_with = "ser_rational")]
    pub exact: Rational,
    pub source: CoefficientSource,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct FitDiagnostics {
    pub order: u32,
    pub precision: u32,
    pub samples: usize,
    pub residual_max: f64,
    pub residual_rms: f64,
    /// Fitted j₁ coefficient minus ln 32.
    pub ln32_error: f64,
}

/// S(j₁, j₂) = j₁ ln 32 + (polynomial of degree ≥ 2); the ln 32 term is kept symbolic.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantSeries {
    /// Polynomial part without the j₁ ln 32 term, with snapped/recognized rationals.
    #[serde(skip)]
    pub s: TruncatedSeries2,
    pub coefficients: Vec<FittedCoefficient>,
    /// I₁ at the critical value, 8/2π.
    pub i10: f64,
    pub diagnostics: FitDiagnostics,
}

/// Roots of P at working precision, as the distances δ₀ = 1 + ζ₀, u₁ = ζ₁ − 1, u₂ = ζ₂ − 1.
fn float_roots(h: &Float, j2: &Float) -> Result<(Float, Float, Float)> {
    let prec = h.prec();
    let em = EnergyMomentum::new(h.to_f64(), j2.to_f64());
    let d = cubic_roots(em)?;
    let jj = Float::with_val(prec, j2.square_ref());
    if jj.is_zero() {
        let zero = Float::new(prec);
        let (u1, u2) = if h.is_sign_negative() { (h.clone(), zero.clone()) } else { (zero.clone(), h.clone()) };
        return Ok((zero, u1, u2));
    }
    let newton = |x0: f64, g: &dyn Fn(&Float) -> (Float, Float)| -> Float {
        let mut x = Float::with_val(prec, x0);
        let tol = Float::with_val(prec, 1) >> (prec as i32 + 4);
        for _ in 0..20 {
            let (v, dv) = g(&x);
            let step = v / dv;
            x -= &step;
            if Float::with_val(prec, step.abs_ref()) <= Float::with_val(prec, x.abs_ref()).max(&Float::with_val(prec, 1e-30)) * &tol
            {
                break;
            }
        }
        x
    };
    // 2δ(2−δ)(h+2−δ) = j₂²
    let gd = |x: &Float| {
        let a = Float::with_val(prec, 2 - x.clone());
        let b = Float::with_val(prec, h + 2u32) - x;
        let v = Float::with_val(prec, x * &a) * &b * 2u32 - &jj;
        let dv = (Float::with_val(prec, &a * &b) - Float::with_val(prec, x * &b) - Float::with_val(prec, x * &a)) * 2u32;
        (v, dv)
    };
    // 2u(2+u)(u−h) = j₂²
    let gu = |x: &Float| {
        let a = Float::with_val(prec, x + 2u32);
        let b = Float::with_val(prec, x - h);
        let v = Float::with_val(prec, x * &a) * &b * 2u32 - &jj;
        let dv = (Float::with_val(prec, &a * &b) + Float::with_val(prec, x * &b) + Float::with_val(prec, x * &a)) * 2u32;
        (v, dv)
    };
    Ok((newton(d.delta0, &gd), newton(d.u1, &gu), newton(d.u2, &gu)))
}

/// 2πI₁(h, j₂) at the precision of `rule`, from the ψ-form of the action integral.
pub fn action_2pi_i1_float(h: &Float, j2: &Float, rule: &TanhSinhRule) -> Result<(Float, Float)> {
    let prec = rule.prec();
    let (delta0, u1, u2) = float_roots(h, j2)?;
    let jj = Float::with_val(prec, j2.square_ref());
    let span = Float::with_val(prec, &u1 + 2u32) - &delta0;
    let has_j = !jj.is_zero();
    let f = |psi: &Float, _: &Float, _: &Float| -> Float {
        let (s, c) = psi.clone().sin_cos(Float::new(prec));
        let s2 = Float::with_val(prec, s.square_ref()) * &span;
        let c2 = Float::with_val(prec, c.square_ref()) * &span;
        let to_top = Float::with_val(prec, &u2 - &u1) + &c2;
        let mut e = (Float::with_val(prec, h - &u1) + &c2) * 2u32;
        if has_j {
            let one_minus = Float::with_val(prec, &c2 - &u1);
            let one_plus = Float::with_val(prec, &delta0 + &s2);
            e -= Float::with_val(prec, &jj / (one_minus * one_plus));
        }
        e * 2u32 / (to_top * 2u32).sqrt()
    };
    let zero = Float::new(prec);
    let top = Float::with_val(prec, Constant::Pi) / 2u32;
    let (v, err) = rule.integrate(f, &zero, &top);
    Ok((v * 2u32, err * 2u32))
}

/// 8 − 2π|j₂| + j₂ Arg ĵ − j₁ ln|ĵ| + j₁.
pub fn singular_part_float(j1: &Float, j2: &Float) -> Float {
    let prec = j1.prec();
    let pi = Float::with_val(prec, Constant::Pi);
    let arg = Float::with_val(prec, j2.atan2_ref(j1));
    let ln = Float::with_val(prec, j1.hypot_ref(j2)).ln();
    Float::with_val(prec, 8) - pi * 2u32 * Float::with_val(prec, j2.abs_ref()) + Float::with_val(prec, j2 * &arg)
        - Float::with_val(prec, j1 * &ln)
        + j1
}

/// Least squares by Householder QR; returns the coefficients.
fn least_squares(mut a: Vec<Vec<Float>>, mut b: Vec<Float>, prec: u32) -> Vec<Float> {
    let (m, n) = (a.len(), a[0].len());
    for k in 0..n {
        let mut norm = Float::new(prec);
        for row in a.iter().skip(k) {
            norm += Float::with_val(prec, row[k].square_ref());
        }
        let norm = norm.sqrt();
        if norm.is_zero() {
            continue;
        }
        let alpha = if a[k][k].is_sign_negative() { norm } else { -norm };
        let mut v: Vec<Float> = (k..m).map(|i| a[i][k].clone()).collect();
        v[0] -= &alpha;
        let mut vn = Float::new(prec);
        for x in &v {
            vn += Float::with_val(prec, x.square_ref());
        }
        if vn.is_zero() {
            continue;
        }
        for j in k..n {
            let mut dot = Float::new(prec);
            for (i, vi) in v.iter().enumerate() {
                dot += Float::with_val(prec, vi * &a[k + i][j]);
            }
            let f = dot * 2u32 / &vn;
            for (i, vi) in v.iter().enumerate() {
                a[k + i][j] -= Float::with_val(prec, vi * &f);
            }
        }
        let mut dot = Float::new(prec);
        for (i, vi) in v.iter().enumerate() {
            dot += Float::with_val(prec, vi * &b[k + i]);
        }
        let f = dot * 2u32 / &vn;
        for (i, vi) in v.iter().enumerate() {
            b[k + i] -= Float::with_val(prec, vi * &f);
        }
    }
    let mut x = vec![Float::new(prec); n];
    for k in (0..n).rev() {
        let mut s = b[k].clone();
        for j in k + 1..n {
            s -= Float::with_val(prec, &a[k][j] * &x[j]);
        }
        x[k] = s / &a[k][k];
    }
    x
}

/// Monomials j₁ᵃ j₂ᵇ with 1 ≤ a + b ≤ order, by degree.
fn basis(order: u32) -> Vec<(u32, u32)> {
    (1..=order).flat_map(|n| (0..=n).rev().map(move |a| (a, n - a))).collect()
}

fn pow_float(x: &Float, e: u32) -> Float {
    use rug::ops::Pow;
    Float::with_val(x.prec(), x.pow(e))
}

/// Denominators 2ᵃ3ᵇ5ᶜ7ᵈ up to `max`, ascending.
fn smooth_denominators(max: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for p in [2u64, 3, 5, 7] {
        let mut next = Vec::new();
        for &d in &out {
            let mut v = d;
            while v <= max {
                next.push(v);
                match v.checked_mul(p) {
                    Some(w) => v = w,
                    None => break,
                }
            }
        }
        out = next;
    }
    out.sort_unstable();
    out
}

/// Smallest-denominator {2,3,5,7}-smooth fraction within `tol` of x, provided the
/// match is not forced (denominator × tol ≪ 1).
pub fn recognize_rational(x: f64, tol: f64) -> Option<Rational> {
    if x.abs() < tol {
        return Some(Rational::new());
    }
    let max = (1e-3 / tol).min(1e15) as u64;
    for d in smooth_denominators(max) {
        let n = (x * d as f64).round();
        if (n / d as f64 - x).abs() < tol {
            return Some(Rational::from((Integer::from(n as i64), Integer::from(d))));
        }
    }
    None
}

fn classify(exponents: (u32, u32), value: f64, uncertainty: f64, published: &BTreeMap<(u32, u32), Rational>) -> FittedCoefficient {
    let snapped = published.get(&exponents).filter(|r| (r.to_f64() - value).abs() < SNAP_TOL);
    let (exact, source) = if let Some(r) = snapped {
        (r.clone(), CoefficientSource::Published)
    } else if let Some(r) = recognize_rational(value, (10.0 * uncertainty).max(1e-15)).filter(|_| uncertainty < 1e-9) {
        (r, CoefficientSource::Recognized)
    } else {
        (Rational::from_f64(value).unwrap_or_default(), CoefficientSource::Fitted)
    };
    FittedCoefficient { exponents, value, uncertainty, exact, source }
}

struct Sample {
    j1: Float,
    j2: Float,
    y: Float,
}

fn sample_points(order: u32, count: usize, prec: u32, h_series: &TruncatedSeries2, rule: &TanhSinhRule) -> Result<Vec<Sample>> {
    let circles = (order / 2 + 2) as usize;
    let per = count.div_ceil(circles).next_multiple_of(2);
    let pi = Float::with_val(prec, Constant::Pi);
    let points: Vec<(usize, usize)> = (0..circles).flat_map(|c| (0..per).map(move |i| (c, i))).collect();
    points
        .into_par_iter()
        .map(|(c, i)| {
            let r = Float::with_val(prec, R_MIN + (R_MAX - R_MIN) * c as f64 / (circles - 1) as f64);
            let t = Float::with_val(prec, 2 * i + 1) * &pi / per as u32;
            let (s, co) = t.sin_cos(Float::new(prec));
            let j1 = Float::with_val(prec, &r * &co);
            let j2 = Float::with_val(prec, &r * &s);
            let h = h_series.evaluate_float(&j1, &j2);
            let (v, _) = action_2pi_i1_float(&h, &j2, rule)?;
            let y = v - singular_part_float(&j1, &j2);
            Ok(Sample { j1, j2, y })
        })
        .collect()
}

fn solve(samples: &[Sample], monomials: &[(u32, u32)], prec: u32) -> (Vec<Float>, Vec<Float>) {
    let rows: Vec<Vec<Float>> = samples
        .iter()
        .map(|s| monomials.iter().map(|&(a, b)| pow_float(&s.j1, a) * pow_float(&s.j2, b)).collect())
        .collect();
    let b: Vec<Float> = samples.iter().map(|s| s.y.clone()).collect();
    let c = least_squares(rows.clone(), b.clone(), prec);
    let residuals = rows
        .iter()
        .zip(&b)
        .map(|(row, y)| {
            let mut r = y.clone();
            for (x, ci) in row.iter().zip(&c) {
                r -= Float::with_val(prec, x * ci);
            }
            r
        })
        .collect();
    (c, residuals)
}

/// Fits the regular part S of 2πI₁ = 8 − 2π|j₂| + j₂ Arg ĵ − j₁ ln|ĵ| + j₁ + S(j₁, j₂) by least
/// squares over the annulus 0.05 ≤ |ĵ| ≤ 0.4 at `precision` bits. `samples` = 0 picks 3× the
/// basis size of the order-(N+2) companion fit used for the uncertainty estimate.
pub fn fit_invariant_s(order: u32, precision: u32, samples: usize) -> Result<InvariantSeries> {
    if !(2..=16).contains(&order) {
        return Err(Error::Order(format!("fit order must be in 2..=16, got {order}")));
    }
    if precision < 64 {
        return Err(Error::Order(format!("fit precision must be ≥ 64 bits, got {precision}")));
    }
    let coarse = basis(order);
    let fine = basis(order + 2);
    let count = if samples == 0 { 3 * fine.len() } else { samples };
    if count < 3 * coarse.len() {
        return Err(Error::Fit(format!("{count} samples for {} unknowns; need at least 3×", coarse.len())));
    }
    let h_series = birkhoff_by_inversion(FIT_NF_GRADE)?;
    let rule = TanhSinhRule::new(precision, 10);
    let pts = sample_points(order + 2, count.max(fine.len() + 1), precision, &h_series, &rule)?;
    let (c, res) = solve(&pts, &coarse, precision);
    let (c_fine, _) = solve(&pts, &fine, precision);
    let residual_max = res.iter().map(|r| r.to_f64().abs()).fold(0.0, f64::max);
    let residual_rms = (res.iter().map(|r| r.to_f64().powi(2)).sum::<f64>() / res.len() as f64).sqrt();
    let published = published_coefficients();
    let ln32 = 32f64.ln();
    let mut coefficients = Vec::new();
    let mut ln32_error = 0.0;
    for (k, &e) in coarse.iter().enumerate() {
        let value = c[k].to_f64();
        let uncertainty = Float::with_val(precision, &c[k] - &c_fine[k]).to_f64().abs();
        if e == (1, 0) {
            ln32_error = value - ln32;
            continue;
        }
        coefficients.push(classify(e, value, uncertainty, &published));
    }
    let smallest = coefficients
        .iter()
        .filter(|c| (2..=4).contains(&(c.exponents.0 + c.exponents.1)) && c.value.abs() > 1e-8)
        .map(|c| c.value.abs())
        .fold(f64::INFINITY, f64::min);
    if residual_max > 1e-3 * smallest {
        return Err(Error::Fit(format!("residual {residual_max:e} exceeds 1e−3 × smallest coefficient {smallest:e}")));
    }
    let s = TruncatedSeries2::from_terms(order, ["j1", "j2"], coefficients.iter().map(|c| (c.exponents, c.exact.clone())));
    Ok(InvariantSeries {
        s,
        coefficients,
        i10: 4.0 / std::f64::consts::PI,
        diagnostics: FitDiagnostics { order, precision, samples: pts.len(), residual_max, residual_rms, ln32_error },
    })
}

/// The j₂ = 0 slice S(j, 0) from a one-dimensional fit of 2πI = 8 − j ln|j| + j + S(j, 0).
pub fn fit_pendulum_invariant(order: u32, precision: u32) -> Result<Vec<FittedCoefficient>> {
    if !(2..=30).contains(&order) {
        return Err(Error::Order(format!("pendulum fit order must be in 2..=30, got {order}")));
    }
    let h_series = birkhoff_by_inversion(FIT_NF_GRADE)?;
    let rule = TanhSinhRule::new(precision, 10);
    let n = 3 * (order as usize + 2);
    let zero = Float::new(precision);
    let pts: Vec<Sample> = (0..n)
        .into_par_iter()
        .map(|i| {
            let k = i / 2;
            let r = R_MIN + (R_MAX - R_MIN) * k as f64 / ((n / 2 - 1) as f64);
            let j1 = Float::with_val(precision, if i % 2 == 0 { r } else { -r });
            let h = h_series.evaluate_float(&j1, &zero);
            let (v, _) = action_2pi_i1_float(&h, &zero, &rule)?;
            let y = v - singular_part_float(&j1, &zero);
            Ok(Sample { j1, j2: zero.clone(), y })
        })
        .collect::<Result<_>>()?;
    let coarse: Vec<(u32, u32)> = (1..=order).map(|a| (a, 0)).collect();
    let fine: Vec<(u32, u32)> = (1..=order + 2).map(|a| (a, 0)).collect();
    let (c, _) = solve(&pts, &coarse, precision);
    let (c_fine, _) = solve(&pts, &fine, precision);
    let published = published_coefficients();
    Ok(coarse
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &e)| {
            let u = Float::with_val(precision, &c[k] - &c_fine[k]).to_f64().abs();
            classify(e, c[k].to_f64(), u, &published)
        })
        .collect())
}
