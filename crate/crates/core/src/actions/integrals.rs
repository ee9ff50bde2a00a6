use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::elliptic::{cubic_roots, ellint_ec, ellint_kc, ellint_pic, heuman_lambda0, EllipticData, EnergyMomentum};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, tanh_sinh};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    LegendreForm,
    HeumanForm,
    Quadrature,
    Contour,
    SeriesModel,
    ClosedForm,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ActionValue {
    pub value: f64,
    pub method: Method,
    pub error: f64,
    /// Set within 1e−8 of the critical value, where only the closed form is reliable.
    pub flagged: bool,
}

/// Below this |j₂| the Heuman form replaces the Legendre form of I₁.
const HEUMAN_SWITCH: f64 = 1e-3;

fn near_critical(em: EnergyMomentum) -> bool {
    em.h.hypot(em.j2) < 1e-8
}

/// I₁ = c₀(c₁K + c₂E − c₃₊Π(n₊) − c₃₋Π(n₋)).
pub fn action_i1_legendre(d: &EllipticData) -> Result<f64> {
    let k = ellint_kc(d.mc)?;
    let e = ellint_ec(d.mc);
    let plus = if d.c3_plus == 0.0 { 0.0 } else { d.c3_plus * ellint_pic(d.p_plus, d.mc)? };
    let minus = if d.em.j2 == 0.0 { 0.0 } else { d.c3_minus * ellint_pic(d.p_minus, d.mc)? };
    Ok(d.c0 * (d.c1 * k + d.c2 * e - plus - minus))
}

/// I₁ = c₀c̃₁K + c₀c₂E − (|j₂|/2)Λ₀(φ, k).
pub fn action_i1_heuman(d: &EllipticData) -> Result<f64> {
    let k = ellint_kc(d.mc)?;
    let e = ellint_ec(d.mc);
    let lambda = if d.em.j2 == 0.0 { 0.0 } else { heuman_lambda0(d.phi, d.m)? };
    Ok(d.c0 * d.c1_tilde * k + d.c0 * d.c2 * e - d.em.j2.abs() / 2.0 * lambda)
}

/// I₁ by tanh-sinh quadrature of 2∫_{ζ₀}^{ζ₁} w/(1−ζ²) dζ / 2π after ζ = ζ₀ + (ζ₁−ζ₀)sin²ψ,
/// which removes both inverse-square-root endpoints.
pub fn action_i1_quadrature(d: &EllipticData, tol: f64) -> ActionValue {
    let (h, j2) = (d.em.h, d.em.j2);
    let span = d.u1 + 2.0 - d.delta0;
    let q = tanh_sinh(
        |psi, _, _| {
            let (s, c) = psi.sin_cos();
            let (s2, c2) = (span * s * s, span * c * c);
            let one_plus = d.delta0 + s2;
            let one_minus = -d.u1 + c2;
            let to_top = d.u2 - d.u1 + c2;
            let energy = h - d.u1 + c2;
            (2.0 * energy - j2 * j2 / (one_minus * one_plus)) * 2.0 / (2.0 * to_top).sqrt()
        },
        0.0,
        FRAC_PI_2,
        tol,
    );
    ActionValue { value: 2.0 * q.value / (2.0 * PI), method: Method::Quadrature, error: q.error / PI, flagged: false }
}

pub fn action_i1(em: EnergyMomentum) -> Result<ActionValue> {
    if em.h == 0.0 && em.j2 == 0.0 {
        return Ok(ActionValue { value: 4.0 / PI, method: Method::ClosedForm, error: 0.0, flagged: false });
    }
    let d = cubic_roots(em)?;
    let (value, method) = if em.j2.abs() < HEUMAN_SWITCH {
        (action_i1_heuman(&d)?, Method::HeumanForm)
    } else {
        (action_i1_legendre(&d)?, Method::LegendreForm)
    };
    Ok(ActionValue { value, method, error: 1e-14 * value.abs().max(1.0), flagged: near_critical(em) })
}

/// Reduced period T = 2π ∂I₁/∂h = 2√2 K(k)/√(ζ₂ − ζ₀).
pub fn period_t(em: EnergyMomentum) -> Result<f64> {
    let d = cubic_roots(em)?;
    Ok(2.0 * SQRT_2 * ellint_kc(d.mc)? / (d.zeta2 - d.zeta0).sqrt())
}

/// Rotation number W = −∂I₁/∂j₂ = j₂/(π√(2(ζ₂−ζ₀))) (Π(n₊)/(1−ζ₀) + Π(n₋)/(1+ζ₀)).
/// On the axis the one-sided limit j₂ → 0⁺ is returned: 1 above, 1/2 below the critical energy.
pub fn rotation_w_numeric(em: EnergyMomentum) -> Result<f64> {
    if em.j2 == 0.0 {
        return match em.h.partial_cmp(&0.0) {
            Some(std::cmp::Ordering::Greater) => Ok(1.0),
            Some(std::cmp::Ordering::Less) => Ok(0.5),
            _ => Err(Error::Domain("rotation number undefined at the critical value".into())),
        };
    }
    let d = cubic_roots(em)?;
    let plus = ellint_pic(d.p_plus, d.mc)? / (2.0 - d.delta0);
    let minus = ellint_pic(d.p_minus, d.mc)? / d.delta0;
    Ok(em.j2 / (PI * (2.0 * (d.zeta2 - d.zeta0)).sqrt()) * (plus + minus))
}

/// J₁ = (2/2πi)∮ w/(1−ζ²) dζ counter-clockwise around [ζ₁, ζ₂], with the branch of w
/// that is positive right of ζ₂. Returns the value and the size of its imaginary part.
pub fn action_j1_numeric(em: EnergyMomentum) -> Result<(ActionValue, f64)> {
    if em.h == 0.0 && em.j2 == 0.0 {
        return Ok((ActionValue { value: 0.0, method: Method::ClosedForm, error: 0.0, flagged: false }, 0.0));
    }
    let d = cubic_roots(em)?;
    let gap = d.zeta1 - d.zeta0;
    if gap <= 0.0 {
        return Err(Error::Geometry(format!("contour around [ζ₁, ζ₂] cannot avoid ζ₀: ζ₁ − ζ₀ = {gap}")));
    }
    let delta = gap.min(0.1) / 4.0;
    let (x0, x1, y) = (d.zeta1 - delta, d.zeta2 + delta, delta);
    let corners = [
        Complex64::new(x1, 0.0),
        Complex64::new(x1, y),
        Complex64::new(x0, y),
        Complex64::new(x0, -y),
        Complex64::new(x1, -y),
        Complex64::new(x1, 0.0),
    ];
    let (nodes, weights) = gauss_legendre(24);
    let panels = 16;
    let poly = |z: Complex64| 2.0 * (1.0 - z * z) * (em.h + 1.0 - z) - em.j2 * em.j2;
    let mut w_prev = Complex64::new(poly(corners[0]).re.sqrt(), 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for edge in corners.windows(2) {
        let (a, b) = (edge[0], edge[1]);
        for p in 0..panels {
            let pa = a + (b - a) * (p as f64 / panels as f64);
            let pb = a + (b - a) * ((p + 1) as f64 / panels as f64);
            let half = (pb - pa) * 0.5;
            let mid = (pa + pb) * 0.5;
            for (x, wt) in nodes.iter().zip(&weights) {
                let z = mid + half * *x;
                // follow the branch of √P continuously along the path
                let mut w = poly(z).sqrt();
                if (w - w_prev).norm() > (w + w_prev).norm() {
                    w = -w;
                }
                w_prev = w;
                sum += w / (1.0 - z * z) * half * *wt;
            }
        }
    }
    // counter-clockwise and doubled; with w > 0 right of ζ₂ the quotient by 2πi is already
    // real (the −i of the imaginary-w convention is absorbed in the branch choice)
    let v = 2.0 * sum / (2.0 * PI * Complex64::i());
    let value = v.re;
    Ok((ActionValue { value, method: Method::Contour, error: v.im.abs(), flagged: near_critical(em) }, v.im.abs()))
}
