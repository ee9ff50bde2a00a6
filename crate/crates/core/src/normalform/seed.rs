use rug::{Integer, Rational};

use super::PClassFunction;
use crate::error::{Error, Result};

/// (2n−3)!!/(2n)!!, the Taylor coefficients of 1 − √(1 − x) (n ≥ 1).
pub fn potential_coefficient(n: u32) -> Rational {
    let odd = (1..(2 * n).saturating_sub(1)).step_by(2).fold(Integer::from(1), |acc, k| acc * k);
    let even = (1..=n).fold(Integer::from(1), |acc, k| acc * (2 * k));
    Rational::from((odd, even))
}

/// ρ² = p²/2 + q²/2 − J₁ with q² = e^{2θ₁}, p² = J²e^{−2θ₁}.
pub fn rho_squared() -> PClassFunction {
    let half = Rational::from((1, 2));
    PClassFunction::j_squared()
        .mul(&PClassFunction::exp_theta(-2))
        .add(&PClassFunction::exp_theta(2))
        .scale(&half)
        .sub(&PClassFunction::j1())
}

/// The local Hamiltonian in integral-angle coordinates (κ = ν = 1), through grade `order`:
/// H = J₁ − (q² − p²)²/8 − Σ_{n≥2} (2n−3)!!/(2n)!! ρ^{2n}.
pub fn seed_hamiltonian(order: u32) -> Result<PClassFunction> {
    if order < 2 {
        return Err(Error::Order(format!("seed Hamiltonian needs order ≥ 2, got {order}")));
    }
    let mut h = PClassFunction::j1();
    if order >= 4 {
        let qp = PClassFunction::exp_theta(2).sub(&PClassFunction::j_squared().mul(&PClassFunction::exp_theta(-2)));
        h = h.sub(&qp.pow(2).scale(&Rational::from((1, 8))));
    }
    let rho2 = rho_squared();
    let mut power = rho2.clone();
    for n in 2..=order / 2 {
        power = power.mul(&rho2);
        h = h.sub(&power.scale(&potential_coefficient(n)));
    }
    Ok(h.up_to_grade(order as i64))
}
