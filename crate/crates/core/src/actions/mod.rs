//! Actions, the imaginary action, the normal form by inversion, the semi-global
//! invariant, rotation number, period, twist and monodromy.

mod checks;
mod integrals;
mod invariant;
mod model;
mod series;

pub use checks::{
    action_expansion_2pi, action_expansion_check, w_expansion_check, model_error, monodromy_check, w_expansion_2pi,
    ActionExpansionReport, WExpansionReport, ExpansionScaling, ModelErrorReport, MonodromyReport,
};
pub use integrals::{
    action_i1, action_i1_heuman, action_i1_legendre, action_i1_quadrature, action_j1_numeric, period_t,
    rotation_w_numeric, ActionValue, Method,
};
pub use invariant::{
    action_2pi_i1_float, fit_invariant_s, fit_pendulum_invariant, published_coefficients, recognize_rational, singular_part_float,
    CoefficientSource, FitDiagnostics, FittedCoefficient, InvariantSeries,
};
pub use model::{twist_polar_leading, twistless_curve, w_star, w_star_approx, ComplexJ, InvariantModel, TwistlessPoint};
pub use series::{a_series, birkhoff_by_inversion, birkhoff_cross_check, j1_series, rotation_log_coefficient, ASeries};
