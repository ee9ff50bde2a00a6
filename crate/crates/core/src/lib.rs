pub mod actions;
pub mod cli;
pub mod dynamics;
pub mod elliptic;
pub mod error;
pub mod normalform;
pub mod pendulum;
pub mod quadrature;
pub mod series;

pub use error::{Error, Result};
