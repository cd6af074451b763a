pub mod bundle_calc;
pub mod char_alg;
pub mod conventions;
pub mod error;
pub mod germ_lab;
pub mod gysin_calc;
pub mod integral_alg;
pub mod report;
pub mod suite;
pub mod thom_poly;

pub use error::{Error, Result};
