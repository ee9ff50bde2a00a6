//! Cubic roots of the elliptic curve, complete integrals and Heuman's Λ₀.

pub mod carlson;
mod cubic;
mod legendre;

pub use cubic::{cubic_roots, EllipticData, EnergyMomentum};
pub use legendre::{
    ellint_e, ellint_e_inc, ellint_ec, ellint_f, ellint_k, ellint_k_flagged, ellint_kc, ellint_pi, ellint_pi_flagged,
    ellint_pic, heuman_lambda0, Flagged, NEAR_SINGULAR,
};

#[cfg(test)]
mod tests;
