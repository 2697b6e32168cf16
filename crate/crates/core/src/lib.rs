pub mod arith;
pub mod characters;
pub mod coeff_ring;
pub mod eisenstein;
pub mod error;
pub mod hecke;
pub mod ideals;
pub mod io;
pub mod qexp;
pub mod quad_field;
pub mod stability;

pub use error::{Error, Result};
