use std::f64::consts::PI;

use serde::Serialize;

use crate::actions::j1_series;
use crate::elliptic::{ellint_ec, ellint_kc};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// h > 0: rotations
    Above,
    /// h < 0: librations, in the spherical-pendulum normalization
    Below,
}

/// Action I, imaginary action J, period T = 2π I′ and imaginary period U = 2π J′.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PendulumQuadruple {
    pub h: f64,
    pub i: f64,
    pub j: f64,
    pub t: f64,
    pub u: f64,
    pub branch: Branch,
}

impl PendulumQuadruple {
    /// I U − J T, which equals 8.
    pub fn legendre(&self) -> f64 {
        self.i * self.u - self.j * self.t
    }

    /// Below the separatrix, the true pendulum action and period are twice the
    /// spherical-pendulum-compatible values returned by default.
    pub fn true_pendulum(&self) -> Self {
        match self.branch {
            Branch::Above => *self,
            Branch::Below => PendulumQuadruple { i: 2.0 * self.i, t: 2.0 * self.t, ..*self },
        }
    }
}

pub fn pendulum_quadruple(h: f64) -> Result<PendulumQuadruple> {
    if !h.is_finite() || h <= -2.0 {
        return Err(Error::Domain(format!("pendulum needs h > −2 (potential minimum), got {h}")));
    }
    if h == 0.0 {
        return Err(Error::Divergence("the period diverges on the separatrix h = 0".into()));
    }
    if h > 0.0 {
        // k² = 2/(2+h), k′² = h/(2+h)
        let (m, mc) = (2.0 / (2.0 + h), h / (2.0 + h));
        let k = m.sqrt();
        let (kk, ek) = (ellint_kc(mc)?, ellint_ec(mc));
        let (kp, ep) = (ellint_kc(m)?, ellint_ec(m));
        Ok(PendulumQuadruple {
            h,
            i: 4.0 / (PI * k) * ek,
            j: 8.0 / (PI * k) * (kp - ep),
            t: 2.0 * k * kk,
            u: 4.0 * k * kp,
            branch: Branch::Above,
        })
    } else {
        // k² = (2+h)/2, k′² = −h/2
        let (m, mc) = ((2.0 + h) / 2.0, -h / 2.0);
        let (kk, ek) = (ellint_kc(mc)?, ellint_ec(mc));
        let (kp, ep) = (ellint_kc(m)?, ellint_ec(m));
        Ok(PendulumQuadruple {
            h,
            i: 4.0 / PI * (ek - mc * kk),
            j: 8.0 / PI * (m * kp - ep),
            t: 2.0 * kk,
            u: 4.0 * kp,
            branch: Branch::Below,
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PendulumSeriesRow {
    pub h: f64,
    pub i_error: f64,
    pub j_error: f64,
    pub t_error: f64,
    pub u_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PendulumSeriesReport {
    pub rows: Vec<PendulumSeriesRow>,
    /// J equals the j₂ = 0 slice of the J₁ series (degree 24) to 1e−12.
    pub j_matches_j1_series: bool,
    pub pass: bool,
}

/// Displayed truncations of 2πI, J, T and U/2π near h = 0.
pub fn pendulum_series_values(h: f64) -> (f64, f64, f64, f64) {
    let l = (32.0 / h.abs()).ln();
    let i = 8.0 + h + (h - h * h / 16.0) * l + 3.0 / 32.0 * h * h;
    let j = h - h * h / 16.0;
    let t = (1.0 - h / 8.0 - 9.0 / 256.0 * h * h) * l + h / 4.0;
    let u = 1.0 - h / 8.0 + 9.0 / 256.0 * h * h;
    (i, j, t, u)
}

/// Compares the displayed truncations with the elliptic formulas on h ∈ {±0.05, ±0.1, ±0.2}.
/// Each error must stay within a small multiple of the first omitted order.
pub fn pendulum_series_check() -> Result<PendulumSeriesReport> {
    let j1 = j1_series(24)?.slice_first();
    let mut rows = Vec::new();
    let mut pass = true;
    let mut j_matches = true;
    for h in [-0.2, -0.1, -0.05, 0.05, 0.1, 0.2] {
        let q = pendulum_quadruple(h)?;
        let (i, j, t, u) = pendulum_series_values(h);
        let row = PendulumSeriesRow {
            h,
            i_error: (2.0 * PI * q.i - i).abs(),
            j_error: (q.j - j).abs(),
            t_error: (q.t - t).abs(),
            u_error: (q.u / (2.0 * PI) - u).abs(),
        };
        let (a, l) = (h.abs(), (32.0 / h.abs()).ln());
        pass &= row.i_error < a.powi(3) * (1.0 + l)
            && row.j_error < a.powi(3)
            && row.t_error < a * a * (1.0 + l)
            && row.u_error < a.powi(3);
        j_matches &= (q.j - j1.evaluate(h)).abs() < 1e-12;
        rows.push(row);
    }
    Ok(PendulumSeriesReport { rows, j_matches_j1_series: j_matches, pass: pass && j_matches })
}
