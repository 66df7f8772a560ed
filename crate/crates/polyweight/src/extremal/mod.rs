//! Extremal constants of Bernstein, Markov, Remez and Nikolskii type.
//!
//! The L2 Bernstein constant is an exact generalized eigenvalue. Everything else comes from a
//! multistart search over coefficient vectors and is a lower bound for the true constant.

mod algebraic;
mod basis;
mod gram;
mod inequalities;
mod remez;
mod search;

pub use algebraic::{
    algebraic_bernstein_verify, algebraic_markov_constant, mrs_number, mrs_residual,
    AlgebraicCheck, AlgebraicDerivative, AlgebraicPoly, JacobianWeight, PhiDerivative,
};
pub use gram::bernstein_l2;
pub use inequalities::{bernstein_lp, nikolskii_ratio};
pub use remez::{
    remez_constant_fit, remez_verify, unweighted_remez_check, ConcentratedPoly, ExceptionalKind,
    RemezCheck, RemezFamily, RemezFit,
};
pub use search::SearchOptions;

use serde::Serialize;
use thiserror::Error;

use crate::quad::QuadError;
use crate::trigpoly::TrigPoly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtremalError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("exceptional set leaves no complement of positive measure")]
    EmptyComplement,
    #[error("no bracket: the defining integral stays below {target} up to the truncation")]
    NoBracket { target: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Eigen,
    Multistart,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Extremizer {
    Trig(TrigPoly),
    /// Coefficients in the Chebyshev basis `T_0, ..., T_n` on `[-1, 1]`.
    Algebraic(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalReport {
    /// Natural log of the constant.
    pub constant_log: f64,
    /// The constant divided by its expected rate in `n`.
    pub normalized: f64,
    pub extremizer: Extremizer,
    pub method: Method,
    pub restarts: usize,
    /// Eigen: relative residual of the eigenpair. Multistart: spread between the search
    /// objective and the adaptive re-evaluation, in nats.
    pub residual: f64,
    /// Set when the eigen path dropped dependent directions or a norm did not converge.
    pub flagged: bool,
}

impl ExtremalReport {
    pub fn constant(&self) -> f64 {
        self.constant_log.exp()
    }
}
