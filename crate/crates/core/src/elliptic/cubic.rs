use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyMomentum {
    pub h: f64,
    pub j2: f64,
}

impl EnergyMomentum {
    pub fn new(h: f64, j2: f64) -> Self {
        EnergyMomentum { h, j2 }
    }

    /// P(ζ) = 2(1−ζ²)(h+1−ζ) − j₂².
    pub fn p(&self, zeta: f64) -> f64 {
        2.0 * (1.0 - zeta * zeta) * (self.h + 1.0 - zeta) - self.j2 * self.j2
    }
}

/// Roots ζ₀ ≤ ζ₁ ≤ 1 ≤ ζ₂ of P together with the Legendre-form data.
///
/// The distances δ₀ = 1 + ζ₀, u₁ = ζ₁ − 1, u₂ = ζ₂ − 1 are kept separately so that
/// quantities vanishing at the focus-focus value (1 − k², 1 − n±) keep full relative accuracy.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EllipticData {
    pub em: EnergyMomentum,
    pub zeta0: f64,
    pub zeta1: f64,
    pub zeta2: f64,
    pub delta0: f64,
    pub u1: f64,
    pub u2: f64,
    /// k²
    pub m: f64,
    /// 1 − k²
    pub mc: f64,
    pub n_plus: f64,
    pub n_minus: f64,
    /// 1 − n₊, 1 − n₋
    pub p_plus: f64,
    pub p_minus: f64,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3_plus: f64,
    pub c3_minus: f64,
    pub phi: f64,
    pub c1_tilde: f64,
}

// Newton polish of a root of g; keeps the better iterate.
fn polish(mut x: f64, g: impl Fn(f64) -> (f64, f64)) -> f64 {
    for _ in 0..8 {
        let (v, d) = g(x);
        if v == 0.0 || d == 0.0 || !d.is_finite() {
            break;
        }
        let nx = x - v / d;
        if g(nx).0.abs() >= v.abs() {
            break;
        }
        x = nx;
    }
    x
}

/// Real roots of the monic cubic t³ + a t² + b t + c, ascending; None when two are complex.
fn trig_roots(a: f64, b: f64, c: f64) -> Option<[f64; 3]> {
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let shift = -a / 3.0;
    if p >= 0.0 {
        if p == 0.0 && q == 0.0 {
            return Some([shift; 3]);
        }
        return None;
    }
    let r = 2.0 * (-p / 3.0).sqrt();
    let arg = 3.0 * q / (p * r);
    if arg.abs() > 1.0 + 1e-9 {
        return None;
    }
    let t = arg.clamp(-1.0, 1.0).acos() / 3.0;
    let mut z = [0, 1, 2].map(|k| shift + r * (t - 2.0 * PI * k as f64 / 3.0).cos());
    z.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Some(z)
}

pub fn cubic_roots(em: EnergyMomentum) -> Result<EllipticData> {
    let EnergyMomentum { h, j2 } = em;
    if !h.is_finite() || !j2.is_finite() {
        return Err(Error::Domain("h and j₂ must be finite".into()));
    }
    if h < -2.0 {
        return Err(Error::Domain(format!("no real motion: h = {h} < −2 (potential minimum)")));
    }
    let jj = j2 * j2;
    let a = -(h + 1.0);
    let roots = trig_roots(a, -1.0, (h + 1.0) - jj / 2.0).ok_or_else(|| {
        Error::Domain(format!("no real motion: max over [−1,1] of 2(1−ζ²)(h+1−ζ) < j₂² at (h,j₂) = ({h},{j2})"))
    })?;
    // 2δ(2−δ)(h+2−δ) = j₂² with δ = 1 + ζ
    let delta0 = polish(roots[0] + 1.0, |d| {
        let v = 2.0 * d * (2.0 - d) * (h + 2.0 - d) - jj;
        let dv = 2.0 * ((2.0 - d) * (h + 2.0 - d) - d * (h + 2.0 - d) - d * (2.0 - d));
        (v, dv)
    })
    .max(0.0);
    // 2u(2+u)(u−h) = j₂² with u = ζ − 1
    let g = |u: f64| {
        let v = 2.0 * u * (2.0 + u) * (u - h) - jj;
        let dv = 2.0 * ((2.0 + u) * (u - h) + u * (u - h) + u * (2.0 + u));
        (v, dv)
    };
    let u1 = polish(roots[1] - 1.0, g).min(0.0);
    let u2 = polish(roots[2] - 1.0, g).max(0.0);
    if delta0 > 2.0 + u1 + 1e-12 {
        return Err(Error::Domain(format!("no real motion: roots ζ₀ > ζ₁ at (h,j₂) = ({h},{j2})")));
    }
    let (zeta0, zeta1, zeta2) = (delta0 - 1.0, 1.0 + u1, 1.0 + u2);
    let d = (u1 + 2.0 - delta0).max(0.0);
    let span = zeta2 - zeta0;
    let m = d / span;
    let mc = (u2 - u1) / span;
    let p_plus = -u1 / (2.0 - delta0);
    let p_minus = if delta0 == 0.0 { f64::INFINITY } else { (2.0 + u1) / delta0 };
    let c0 = 4.0 / (PI * (2.0 * span).sqrt());
    let c3_minus = if delta0 == 0.0 { if jj == 0.0 { h + 2.0 } else { f64::INFINITY } } else { jj / (4.0 * delta0) };
    let sin2 = ((jj / 2.0 - u1 - delta0) / (u2 - u1)).clamp(0.0, 1.0);
    let phi = if u2 == u1 { PI } else { PI - sin2.sqrt().asin() };
    let c1_tilde = h - u2 - jj / (4.0 * (2.0 + u2)) - j2.abs() / 2.0 * (u2 * (u2 - u1) / (2.0 * (2.0 + u2))).sqrt() * phi.sin();
    Ok(EllipticData {
        em,
        zeta0,
        zeta1,
        zeta2,
        delta0,
        u1,
        u2,
        m,
        mc,
        n_plus: 1.0 - p_plus,
        n_minus: 1.0 - p_minus,
        p_plus,
        p_minus,
        c0,
        c1: h - u2,
        c2: span,
        c3_plus: jj / (4.0 * (2.0 - delta0)),
        c3_minus,
        phi,
        c1_tilde,
    })
}
