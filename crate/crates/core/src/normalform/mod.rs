//! Birkhoff normal form at the focus-focus point via Lie series over the ℘-class algebra.

mod canonical;
mod deprit;
mod linear;
mod pclass;
mod seed;

pub use canonical::{canonical_pt_cross_check, printed_s1, CanonicalReport};
pub use deprit::{deprit_normalize, lie_normalize, lie_transform, successive_normalize, LieNormalForm};
pub use linear::{linear_nf_data, verify_linear_nf, LinearNFData, LinearNFReport, Mat4};
pub use pclass::{grade_of, PClassFunction, PKey};
pub use seed::{potential_coefficient, rho_squared, seed_hamiltonian};
