//! Numerical laboratory for weighted polynomial inequalities.
//!
//! Weights of the form `exp(-F(g(t)))` vanish to infinite order at the zeros
//! of `g`, so every quantity here is carried as a natural logarithm.

pub mod approx;
pub mod cli;
pub mod construct;
pub mod extremal;
pub mod logmath;
pub mod quad;
pub mod trigpoly;
pub mod weights;
