use serde::Serialize;

use crate::elliptic::{cubic_roots, EnergyMomentum};
use crate::error::Result;

pub type Vec3 = [f64; 3];

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Point of T*S² in redundant ℝ⁶ coordinates, scaled units (m = g = l = 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseState {
    pub r: Vec3,
    pub p: Vec3,
}

impl PhaseState {
    pub fn new(r: Vec3, p: Vec3) -> Self {
        PhaseState { r, p }
    }

    /// L = r × p
    pub fn angular_momentum(&self) -> Vec3 {
        cross(self.r, self.p)
    }

    /// H = ½(L, L) + (r, e_z)/‖r‖ − 1
    pub fn energy(&self) -> f64 {
        let l = self.angular_momentum();
        0.5 * dot(l, l) + self.r[2] / dot(self.r, self.r).sqrt() - 1.0
    }

    /// j₂ = L_z
    pub fn j2(&self) -> f64 {
        self.r[0] * self.p[1] - self.r[1] * self.p[0]
    }

    /// (|(r, r) − 1|, |(r, p)|)
    pub fn constraint_residuals(&self) -> (f64, f64) {
        ((dot(self.r, self.r) - 1.0).abs(), dot(self.r, self.p).abs())
    }

    /// Projection onto (r, r) = 1, (r, p) = 0.
    pub fn project(&self) -> Self {
        let n = dot(self.r, self.r).sqrt();
        let r = self.r.map(|x| x / n);
        let rp = dot(r, self.p);
        let p = [self.p[0] - rp * r[0], self.p[1] - rp * r[1], self.p[2] - rp * r[2]];
        PhaseState { r, p }
    }

    /// The state at the turning point z = ζ₁ closest to the upward equilibrium, on the
    /// meridian y = 0, moving in the positive azimuthal direction for j₂ > 0.
    pub fn at_upper_turning_point(em: EnergyMomentum) -> Result<Self> {
        let d = cubic_roots(em)?;
        let z = d.zeta1;
        let rho = (1.0 - z * z).max(0.0).sqrt();
        let py = if rho > 0.0 { em.j2 / rho } else { 0.0 };
        Ok(PhaseState { r: [rho, 0.0, z], p: [0.0, py, 0.0] })
    }

    /// Stereographic projection from the south pole: the upward equilibrium maps to 0.
    pub fn stereographic(&self) -> [f64; 2] {
        let s = 1.0 + self.r[2];
        [self.r[0] / s, self.r[1] / s]
    }
}

/// ṙ = L × r, ṗ = L × p − e_z/‖r‖ + (e_z, r) r/‖r‖³ in scaled units.
pub fn vector_field(s: &PhaseState) -> (Vec3, Vec3) {
    let l = s.angular_momentum();
    let n = dot(s.r, s.r).sqrt();
    let rdot = cross(l, s.r);
    let lp = cross(l, s.p);
    let c = s.r[2] / (n * n * n);
    let pdot = [lp[0] + c * s.r[0], lp[1] + c * s.r[1], lp[2] - 1.0 / n + c * s.r[2]];
    (rdot, pdot)
}
