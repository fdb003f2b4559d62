//! Klein four-group modules over `F_2` and the arithmetic of
//! biquadratic extensions.

pub mod f2la;
pub mod module;
pub mod decomp;
pub mod arith;
pub mod cli;
