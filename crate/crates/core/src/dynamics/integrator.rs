use super::state::{vector_field, PhaseState};
use crate::error::{Error, Result};

/// Phase point plus the accumulated azimuth φ, with φ̇ = j₂/(x² + y²).
pub type Y = [f64; 7];

pub fn pack(s: &PhaseState, phi: f64) -> Y {
    [s.r[0], s.r[1], s.r[2], s.p[0], s.p[1], s.p[2], phi]
}

pub fn unpack(y: &Y) -> (PhaseState, f64) {
    (PhaseState::new([y[0], y[1], y[2]], [y[3], y[4], y[5]]), y[6])
}

fn rhs(y: &Y) -> Y {
    let (s, _) = unpack(y);
    let (rd, pd) = vector_field(&s);
    let rho2 = y[0] * y[0] + y[1] * y[1];
    let phid = if rho2 > 0.0 { s.j2() / rho2 } else { 0.0 };
    [rd[0], rd[1], rd[2], pd[0], pd[1], pd[2], phid]
}

fn axpy(y: &Y, h: f64, terms: &[(f64, &Y)]) -> Y {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..7 {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// One Dormand–Prince 5(4) step; returns the 5th-order solution and the error estimate.
pub fn dopri_step(y: &Y, h: f64) -> (Y, Y) {
    let k1 = rhs(y);
    let k2 = rhs(&axpy(y, h, &[(1.0 / 5.0, &k1)]));
    let k3 = rhs(&axpy(y, h, &[(3.0 / 40.0, &k1), (9.0 / 40.0, &k2)]));
    let k4 = rhs(&axpy(y, h, &[(44.0 / 45.0, &k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)]));
    let k5 = rhs(&axpy(
        y,
        h,
        &[(19372.0 / 6561.0, &k1), (-25360.0 / 2187.0, &k2), (64448.0 / 6561.0, &k3), (-212.0 / 729.0, &k4)],
    ));
    let k6 = rhs(&axpy(
        y,
        h,
        &[(9017.0 / 3168.0, &k1), (-355.0 / 33.0, &k2), (46732.0 / 5247.0, &k3), (49.0 / 176.0, &k4), (-5103.0 / 18656.0, &k5)],
    ));
    let y5 = axpy(
        y,
        h,
        &[(35.0 / 384.0, &k1), (500.0 / 1113.0, &k3), (125.0 / 192.0, &k4), (-2187.0 / 6784.0, &k5), (11.0 / 84.0, &k6)],
    );
    let k7 = rhs(&y5);
    let mut err = [0.0; 7];
    let e = [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];
    let ks = [&k1, &k2, &k3, &k4, &k5, &k6, &k7];
    for i in 0..7 {
        err[i] = h * (0..7).map(|j| e[j] * ks[j][i]).sum::<f64>();
    }
    (y5, err)
}

fn error_norm(y0: &Y, y1: &Y, err: &Y, tol: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..7 {
        let sc = tol + tol * y0[i].abs().max(y1[i].abs());
        acc += (err[i] / sc).powi(2);
    }
    (acc / 7.0).sqrt()
}

/// Adaptive integrator state; each accepted step is projected back onto the constraints.
pub struct Dopri {
    pub tol: f64,
    pub h: f64,
}

impl Dopri {
    pub fn new(tol: f64) -> Result<Self> {
        if !(1e-13..=1e-6).contains(&tol) {
            return Err(Error::Integration(format!("tolerance must be in [1e−13, 1e−6], got {tol}")));
        }
        Ok(Dopri { tol, h: 1e-2 })
    }

    /// Advances by at most `max_h`; returns the new point and the step taken.
    pub fn step(&mut self, y: &Y, max_h: f64) -> Result<(Y, f64)> {
        loop {
            let h = self.h.min(max_h);
            if h < 1e-12 {
                return Err(Error::Integration(format!("step size underflow (h = {h:e})")));
            }
            let (y1, err) = dopri_step(y, h);
            // local control one decade below tol keeps the global error on the order of tol
            let e = error_norm(y, &y1, &err, 0.1 * self.tol);
            let factor = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
            if e <= 1.0 {
                if h == self.h {
                    self.h = h * factor;
                } else {
                    self.h = self.h.max(h * factor);
                }
                let (s, phi) = unpack(&y1);
                return Ok((pack(&s.project(), phi), h));
            }
            self.h = h * factor.min(1.0);
        }
    }
}
