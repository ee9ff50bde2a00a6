use std::f64::consts::PI;

use serde::Serialize;

use super::invariant::{published_coefficients, InvariantSeries};
use super::series::{a_series, birkhoff_by_inversion};
use crate::error::{Error, Result};
use crate::series::{TruncatedSeries2, Var};

/// ĵ = j₁ + i j₂ with the principal argument in (−π, π].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexJ {
    pub j1: f64,
    pub j2: f64,
}

impl ComplexJ {
    pub fn new(j1: f64, j2: f64) -> Self {
        ComplexJ { j1, j2 }
    }

    pub fn abs(&self) -> f64 {
        self.j1.hypot(self.j2)
    }

    pub fn arg(&self) -> f64 {
        if self.j2 == 0.0 && self.j1 < 0.0 {
            PI
        } else {
            self.j2.atan2(self.j1)
        }
    }
}

/// sgn with sgn(0) = +1, matching the one-sided limit j₂ → 0⁺ used on the axis.
fn sgn(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// The semi-global model: 2πI₁ from S, W and T from S, A and H.
#[derive(Clone, Debug)]
pub struct InvariantModel {
    /// Polynomial part of S (degree ≥ 2); the j₁ ln 32 term is added separately.
    pub s: TruncatedSeries2,
    pub a: TruncatedSeries2,
    pub h: TruncatedSeries2,
    s_1: TruncatedSeries2,
    s_2: TruncatedSeries2,
    s_11: TruncatedSeries2,
    s_12: TruncatedSeries2,
    s_22: TruncatedSeries2,
    a_1: TruncatedSeries2,
    a_2: TruncatedSeries2,
    h_1: TruncatedSeries2,
}

const MODEL_RADIUS: f64 = 1.0;

impl InvariantModel {
    pub fn new(s: TruncatedSeries2, order: u32) -> Result<Self> {
        let s = s.relabel(["j1", "j2"]);
        let a = a_series(order)?.ratio;
        let h = birkhoff_by_inversion(2 * order + 2)?;
        let s_1 = s.partial(Var::First);
        let s_2 = s.partial(Var::Second);
        Ok(InvariantModel {
            s_11: s_1.partial(Var::First),
            s_12: s_1.partial(Var::Second),
            s_22: s_2.partial(Var::Second),
            a_1: a.partial(Var::First),
            a_2: a.partial(Var::Second),
            h_1: h.partial(Var::First),
            s,
            a,
            h,
            s_1,
            s_2,
        })
    }

    /// The displayed terms of S through degree 4.
    pub fn published() -> Result<Self> {
        let terms = published_coefficients().into_iter().filter(|((a, b), _)| a + b <= 4);
        Self::new(TruncatedSeries2::from_terms(4, ["j1", "j2"], terms), 4)
    }

    pub fn from_fit(fit: &InvariantSeries) -> Result<Self> {
        Self::new(fit.s.clone(), fit.s.order())
    }

    fn check(&self, j: ComplexJ) -> Result<()> {
        if !(j.abs() <= MODEL_RADIUS) {
            return Err(Error::Domain(format!("model requires |ĵ| ≤ {MODEL_RADIUS}, got {}", j.abs())));
        }
        Ok(())
    }

    /// S₁ = ∂S/∂j₁ including ln 32.
    pub fn s1(&self, j1: f64, j2: f64) -> f64 {
        32f64.ln() + self.s_1.evaluate(j1, j2)
    }

    pub fn s2(&self, j1: f64, j2: f64) -> f64 {
        self.s_2.evaluate(j1, j2)
    }

    pub fn energy(&self, j1: f64, j2: f64) -> f64 {
        self.h.evaluate(j1, j2)
    }

    /// 2πI₁ = 8 − 2π|j₂| + j₂ Arg ĵ − j₁ ln|ĵ| + j₁ + S. Closed-form terms only, so not
    /// restricted to |ĵ| ≤ 1 (the error sweep over the unit (h, j₂) disk reaches |ĵ| ≈ 1.03).
    pub fn action_2pi(&self, j1: f64, j2: f64) -> Result<f64> {
        let j = ComplexJ::new(j1, j2);
        if j.abs() == 0.0 {
            return Ok(8.0);
        }
        let s = j1 * 32f64.ln() + self.s.evaluate(j1, j2);
        Ok(8.0 - 2.0 * PI * j2.abs() + j2 * j.arg() - j1 * j.abs().ln() + j1 + s)
    }

    /// 2πW = 2π sgn j₂ − Arg ĵ − A ln|ĵ| + A S₁ − S₂.
    pub fn rotation_w(&self, j1: f64, j2: f64) -> Result<f64> {
        let j = ComplexJ::new(j1, j2);
        self.check(j)?;
        if j.abs() == 0.0 {
            return Err(Error::Domain("rotation number undefined at ĵ = 0".into()));
        }
        let a = self.a.evaluate(j1, j2);
        let w = 2.0 * PI * sgn(j2) - j.arg() - a * j.abs().ln() + a * self.s1(j1, j2) - self.s2(j1, j2);
        Ok(w / (2.0 * PI))
    }

    /// T = (−ln|ĵ| + S₁)/(∂H/∂j₁).
    pub fn period_t(&self, j1: f64, j2: f64) -> Result<f64> {
        let j = ComplexJ::new(j1, j2);
        self.check(j)?;
        if j.abs() == 0.0 {
            return Err(Error::Domain("period diverges at ĵ = 0".into()));
        }
        Ok((-j.abs().ln() + self.s1(j1, j2)) / self.h_1.evaluate(j1, j2))
    }

    /// (2π∂W/∂j₁, 2π∂W/∂j₂) away from the axis.
    pub fn rotation_gradient(&self, j1: f64, j2: f64) -> (f64, f64) {
        let rho2 = j1 * j1 + j2 * j2;
        let l = 0.5 * rho2.ln();
        let a = self.a.evaluate(j1, j2);
        let (a1, a2) = (self.a_1.evaluate(j1, j2), self.a_2.evaluate(j1, j2));
        let s1 = self.s1(j1, j2);
        let (s11, s12, s22) = (self.s_11.evaluate(j1, j2), self.s_12.evaluate(j1, j2), self.s_22.evaluate(j1, j2));
        let w1 = j2 / rho2 - a1 * l - a * j1 / rho2 + a1 * s1 + a * s11 - s12;
        let w2 = -j1 / rho2 - a2 * l - a * j2 / rho2 + a2 * s1 + a * s12 - s22;
        (w1, w2)
    }

    /// 2π𝒯 = 2π(−A W₁ + W₂), the derivative of W along a level set of H.
    pub fn twist_2pi(&self, j1: f64, j2: f64) -> Result<f64> {
        let j = ComplexJ::new(j1, j2);
        self.check(j)?;
        if j.abs() == 0.0 {
            return Err(Error::Domain("twist undefined at ĵ = 0".into()));
        }
        let (w1, w2) = self.rotation_gradient(j1, j2);
        Ok(-self.a.evaluate(j1, j2) * w1 + w2)
    }
}

/// Leading polar form 2π𝒯 ≈ −sin s/r + (3/8)ln(32/r) − 15/16 − (3/8)cos 2s.
pub fn twist_polar_leading(r: f64, s: f64) -> f64 {
    -s.sin() / r + 0.375 * (32.0 / r).ln() - 15.0 / 16.0 - 0.375 * (2.0 * s).cos()
}

/// W* ≈ 3/4 + (3r/8π)(ln(32/r) − 5/2).
pub fn w_star_approx(r: f64) -> f64 {
    0.75 + 3.0 * r / (8.0 * PI) * ((32.0 / r).ln() - 2.5)
}

/// Bisection on a bracketing interval.
pub(crate) fn bisect(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Root(format!("no sign change on [{a}, {b}]")));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 || (b - a).abs() < tol {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// The zero of the twist on the circle j₁ = r sin s, j₂ = r cos s nearest to s = 0.
pub fn twistless_curve(model: &InvariantModel, r: f64) -> Result<f64> {
    if !(r > 0.0 && r <= MODEL_RADIUS) {
        return Err(Error::Domain(format!("twistless curve needs 0 < r ≤ 1, got {r}")));
    }
    let f = |s: f64| model.twist_2pi(r * s.sin(), r * s.cos());
    let n = 400;
    let edge = 0.5 * PI - 1e-6;
    let grid: Vec<f64> = (0..=n).map(|i| -edge + 2.0 * edge * i as f64 / n as f64).collect();
    let values = grid.iter().map(|&s| f(s)).collect::<Result<Vec<_>>>()?;
    let best = (0..n)
        .filter(|&i| values[i].signum() != values[i + 1].signum())
        .min_by(|&i, &k| grid[i].abs().min(grid[i + 1].abs()).total_cmp(&grid[k].abs().min(grid[k + 1].abs())))
        .ok_or_else(|| Error::Root(format!("twist has no sign change on the circle r = {r}")))?;
    bisect(f, grid[best], grid[best + 1], 1e-13)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TwistlessPoint {
    pub r: f64,
    pub s: f64,
    pub w: f64,
    pub w_star: f64,
}

/// W on the twistless curve, alongside the displayed approximation W*.
pub fn w_star(model: &InvariantModel, r: f64) -> Result<TwistlessPoint> {
    let s = twistless_curve(model, r)?;
    let w = model.rotation_w(r * s.sin(), r * s.cos())?;
    Ok(TwistlessPoint { r, s, w, w_star: w_star_approx(r) })
}
