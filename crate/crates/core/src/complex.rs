//! Validated complex point type used at the public and serialization surface.

use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("complex point has a non-finite component ({re}, {im})")]
pub struct NonFiniteError {
    pub re: f64,
    pub im: f64,
}

/// A finite point σ + it of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct ComplexPoint {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct RawPoint {
    re: f64,
    im: f64,
}

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Result<Self, NonFiniteError> {
        if re.is_finite() && im.is_finite() {
            Ok(ComplexPoint { re, im })
        } else {
            Err(NonFiniteError { re, im })
        }
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }
}

impl TryFrom<C64> for ComplexPoint {
    type Error = NonFiniteError;
    fn try_from(z: C64) -> Result<Self, Self::Error> {
        ComplexPoint::new(z.re, z.im)
    }
}

impl TryFrom<RawPoint> for ComplexPoint {
    type Error = NonFiniteError;
    fn try_from(raw: RawPoint) -> Result<Self, Self::Error> {
        ComplexPoint::new(raw.re, raw.im)
    }
}

impl From<ComplexPoint> for RawPoint {
    fn from(p: ComplexPoint) -> Self {
        RawPoint { re: p.re, im: p.im }
    }
}

impl From<ComplexPoint> for C64 {
    fn from(p: ComplexPoint) -> Self {
        C64::new(p.re, p.im)
    }
}

impl fmt::Display for ComplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", C64::from(*self))
    }
}
