use rug::Rational;

use super::{deprit_normalize, seed_hamiltonian, PClassFunction};
use crate::error::{Error, Result};

/// First-order canonical perturbation theory on H₄: ⟨H₄⟩, {H₄} and S₁ = ∫{H₄}dθ₁.
#[derive(Clone, Debug)]
pub struct CanonicalReport {
    pub average: PClassFunction,
    pub oscillating: PClassFunction,
    pub s1: PClassFunction,
    pub lie_w4: PClassFunction,
    /// +1 when W₄ = S₁, −1 when W₄ = −S₁, 0 otherwise.
    pub w4_relation: i32,
    /// Terms of the printed S₁ whose sign disagrees with the computed one, keyed by m.
    pub printed_sign_flips: Vec<i32>,
}

impl CanonicalReport {
    pub fn average_ok(&self) -> bool {
        self.average == expected_average()
    }
}

fn expected_average() -> PClassFunction {
    PClassFunction::from_terms([((0, 2, 0), Rational::from((1, 16))), ((0, 0, 2), Rational::from((3, 16)))])
}

/// The printed S₁ of the canonical-perturbation route, expanded with J² = J₁² + J₂².
pub fn printed_s1() -> PClassFunction {
    let j2 = PClassFunction::j_squared();
    let e = PClassFunction::exp_theta;
    j2.pow(2)
        .mul(&e(-4))
        .scale(&Rational::from((5, 128)))
        .add(&PClassFunction::j1().mul(&j2).mul(&e(-2)).scale(&Rational::from((1, 16))))
        .sub(&PClassFunction::j1().mul(&e(2)).scale(&Rational::from((1, 16))))
        .sub(&e(4).scale(&Rational::from((5, 128))))
}

pub fn canonical_pt_cross_check() -> Result<CanonicalReport> {
    let h = seed_hamiltonian(4)?;
    let h4 = h.grade_part(4);
    let average = h4.kernel();
    let oscillating = h4.sub(&average);
    let (_, s1) = oscillating.homological_solve();
    let lie_w4 = deprit_normalize(&h, 4)?.generators[1].clone();
    let w4_relation = if lie_w4 == s1 {
        1
    } else if lie_w4 == s1.scale(&Rational::from(-1)) {
        -1
    } else {
        0
    };
    let printed = printed_s1();
    let mut printed_sign_flips: Vec<i32> = s1
        .terms()
        .filter(|(k, c)| {
            let p = printed.coeff(k.0, k.1, k.2);
            p != 0 && p == Rational::from(-*c)
        })
        .map(|(k, _)| k.0)
        .collect();
    printed_sign_flips.dedup();
    let report = CanonicalReport { average, oscillating, s1, lie_w4, w4_relation, printed_sign_flips };
    if !report.average_ok() || report.w4_relation == 0 {
        return Err(Error::Verification(format!(
            "canonical perturbation theory disagrees with the Lie route: ⟨H4⟩ = {}, S1 = {}, W4 = {}",
            report.average, report.s1, report.lie_w4
        )));
    }
    Ok(report)
}
