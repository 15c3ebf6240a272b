//! Locating a-points of the Riemann zeta function and checking explicit
//! formulas for sums over them.
//!
//! The crate is organised bottom-up:
//!
//! * [`engine`] evaluates ζ, its derivatives, χ, ζ'/ζ and ξ'/ξ;
//! * [`arith`] holds the sieve-backed arithmetic functions and the
//!   Dirichlet coefficients c_a(r) of ζ'(s)/(ζ(s) − a);
//! * [`apoints`] counts and locates roots of ζ(s) − a by the argument
//!   principle and Newton refinement;
//! * [`formulas`] evaluates direct sums over located points and the
//!   closed-form main terms they are compared against;
//! * [`cli`] wires everything to the `apoints` binary.

pub mod apoints;
pub mod arith;
pub mod cli;
pub mod complex;
pub mod engine;
pub mod formulas;
pub mod reduce;

pub use complex::ComplexPoint;
pub use engine::{EngineError, EvalOptions};
