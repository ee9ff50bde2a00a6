//! The ordinary pendulum: actions, periods, the Legendre relation, the nome as a
//! function of the imaginary action, its theta-function inverse, and the complex nome
//! of the spherical pendulum.

mod nome;
mod quadruple;

pub use nome::{
    complex_nome_reduction_check, complex_nome_series, j_of_q_theta, nome_from_invariant, nome_theta_consistency,
    pendulum_invariant_from_fit, pendulum_invariant_published, theta4, ComplexSeries2, NomeSeries, Reciprocal,
};
pub use quadruple::{
    pendulum_quadruple, pendulum_series_check, pendulum_series_values, Branch, PendulumQuadruple, PendulumSeriesReport,
    PendulumSeriesRow,
};

#[cfg(test)]
mod tests;
