//! Exact Morrey-type norms on radial step functions, and numerical checks of
//! the generalized Hölder inequality in Morrey, weak Morrey, generalized
//! Morrey and generalized weak Morrey spaces.

pub mod cli;
pub mod error;
pub mod exponents;
pub mod falsify;
pub mod holder;
pub mod norms;
pub mod optimize;
pub mod phi;
pub mod radial;

pub use error::{Error, Result};
pub use exponents::{
    check_holder_exponents, ConditionReport, ExponentPair, ExponentSystem, Rational,
};
pub use norms::{
    generalized_morrey_norm, generalized_weak_morrey_norm, morrey_norm, oracle_norm,
    weak_morrey_norm, Method, NormResult, OracleConfig, Weight,
};
pub use phi::PhiSpec;
pub use radial::{RadialStepFunction, Shell};
