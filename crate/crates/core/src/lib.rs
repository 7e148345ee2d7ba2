//! Exact-rational calculus for one- and two-variable polynomial matrices,
//! boundary structure derivation for linear distributed-parameter systems,
//! and a structure-preserving 1-D finite-difference simulator.

pub mod dirac;
pub mod error;
pub mod factor;
pub mod lagrange;
pub mod matrix;
pub mod onevar;
pub mod rank;
pub mod rational;
pub mod sim;
pub mod twovar;
