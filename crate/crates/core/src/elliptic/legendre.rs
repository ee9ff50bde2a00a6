use std::f64::consts::{FRAC_PI_2, PI};

use super::carlson::{rd, rf, rj};
use crate::error::{Error, Result};

/// Below this distance to the logarithmic singularity results are flagged.
pub const NEAR_SINGULAR: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Flagged {
    pub value: f64,
    pub near_singular: bool,
}

fn check_parameter(m: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::Domain(format!("parameter k² = {m} outside [0, 1]")));
    }
    Ok(())
}

/// K in terms of the complementary parameter mc = 1 − k².
pub fn ellint_kc(mc: f64) -> Result<f64> {
    if mc <= 0.0 {
        return Err(Error::Divergence("K(k) diverges at k² = 1".into()));
    }
    Ok(rf(0.0, mc, 1.0))
}

pub fn ellint_ec(mc: f64) -> f64 {
    if mc == 0.0 {
        return 1.0;
    }
    rf(0.0, mc, 1.0) - (1.0 - mc) / 3.0 * rd(0.0, mc, 1.0)
}

/// Π(n, k) with p = 1 − n > 0 and mc = 1 − k² given directly.
pub fn ellint_pic(p: f64, mc: f64) -> Result<f64> {
    if mc <= 0.0 {
        return Err(Error::Divergence("Π(n,k) diverges at k² = 1".into()));
    }
    if p == 0.0 {
        return Err(Error::Pole("Π(n,k) has a pole at n = 1".into()));
    }
    if p < 0.0 {
        return Err(Error::Domain(format!("Π(n,k) needs n < 1, got n = {}", 1.0 - p)));
    }
    if p.is_infinite() {
        return Ok(0.0);
    }
    if p > 1.0 {
        // p·RJ(0,mc,1,p) + q·RJ(0,mc,1,q) = 3RF(0,mc,1), q = mc/p, free of cancellation for n < 0
        let q = mc / p;
        Ok((rj(0.0, mc, 1.0, p) + q * rj(0.0, mc, 1.0, q)) / 3.0)
    } else {
        Ok(rf(0.0, mc, 1.0) + (1.0 - p) / 3.0 * rj(0.0, mc, 1.0, p))
    }
}

pub fn ellint_k(m: f64) -> Result<f64> {
    check_parameter(m)?;
    ellint_kc(1.0 - m)
}

pub fn ellint_e(m: f64) -> Result<f64> {
    check_parameter(m)?;
    Ok(ellint_ec(1.0 - m))
}

pub fn ellint_pi(n: f64, m: f64) -> Result<f64> {
    check_parameter(m)?;
    if n == 1.0 {
        return Err(Error::Pole("Π(n,k) has a pole at n = 1".into()));
    }
    ellint_pic(1.0 - n, 1.0 - m)
}

pub fn ellint_k_flagged(m: f64) -> Result<Flagged> {
    Ok(Flagged { value: ellint_k(m)?, near_singular: 1.0 - m < NEAR_SINGULAR })
}

pub fn ellint_pi_flagged(n: f64, m: f64) -> Result<Flagged> {
    Ok(Flagged { value: ellint_pi(n, m)?, near_singular: 1.0 - m < NEAR_SINGULAR || (1.0 - n).abs() < NEAR_SINGULAR })
}

// φ = jπ + r with |r| ≤ π/2
fn reduce(phi: f64) -> (f64, f64) {
    let j = (phi / PI).round();
    (j, phi - j * PI)
}

/// Incomplete integral of the first kind F(φ|m), any real φ.
pub fn ellint_f(phi: f64, m: f64) -> Result<f64> {
    check_parameter(m)?;
    let (j, r) = reduce(phi);
    let (s, c) = r.sin_cos();
    let part = s * rf(c * c, 1.0 - m * s * s, 1.0);
    if j == 0.0 {
        return Ok(part);
    }
    Ok(2.0 * j * ellint_kc(1.0 - m)? + part)
}

/// Incomplete integral of the second kind E(φ|m), any real φ.
pub fn ellint_e_inc(phi: f64, m: f64) -> Result<f64> {
    check_parameter(m)?;
    let (j, r) = reduce(phi);
    let (s, c) = r.sin_cos();
    let y = 1.0 - m * s * s;
    let part = s * rf(c * c, y, 1.0) - m / 3.0 * s * s * s * rd(c * c, y, 1.0);
    Ok(2.0 * j * ellint_ec(1.0 - m) + part)
}

/// Heuman's Λ₀(φ, k) for parameter m = k², normalized so that Λ₀(π/2, k) = 1.
pub fn heuman_lambda0(phi: f64, m: f64) -> Result<f64> {
    check_parameter(m)?;
    if m == 1.0 {
        return Ok(phi / FRAC_PI_2);
    }
    if m == 0.0 {
        // Λ₀ = E(φ|1), which is sin r + 2j on the periodic reduction
        let (j, r) = reduce(phi);
        return Ok(2.0 * j + r.sin());
    }
    let mc = 1.0 - m;
    let k = ellint_kc(mc)?;
    let e = ellint_ec(mc);
    let f1 = ellint_f(phi, mc)?;
    let e1 = ellint_e_inc(phi, mc)?;
    Ok((e * f1 + k * e1 - k * f1) / FRAC_PI_2)
}
