//! Points on the logarithmic cover of the punctured complex plane.
//!
//! The reflection amplitude of the inverse-square radial problem is built
//! from non-integer powers, so it lives on an infinitely sheeted surface.
//! Instead of cutting the plane we track `(modulus, argument)` with the
//! argument left unwrapped; every power is then single-valued and analytic
//! continuation along a path is ordinary argument arithmetic.
//!
//! Sheet numbering follows the physical-region convention: sheet 0 is the
//! argument band `(-pi/2, 3pi/2]`-ish, i.e. the band that contains the
//! positive real ray and the positive imaginary ray, with the cut sitting
//! on the negative imaginary direction. Sheet `n` is that band shifted by
//! `2*pi*n`.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RiemannError {
    #[error("modulus must be positive and finite, got {0}")]
    BadModulus(f64),
    #[error("argument must be finite, got {0}")]
    BadArgument(f64),
}

/// A nonzero complex number together with a chosen unwrapped argument.
///
/// Two `SheetPoint`s with arguments differing by `2*pi` project to the same
/// complex number but are different points of the cover, and multivalued
/// powers distinguish them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SheetPoint {
    modulus: f64,
    argument: f64,
}

impl SheetPoint {
    pub fn new(modulus: f64, argument: f64) -> Result<Self, RiemannError> {
        if !(modulus > 0.0) || !modulus.is_finite() {
            return Err(RiemannError::BadModulus(modulus));
        }
        if !argument.is_finite() {
            return Err(RiemannError::BadArgument(argument));
        }
        Ok(SheetPoint { modulus, argument })
    }

    /// The point `x > 0` on the positive real ray of sheet 0.
    pub fn from_positive_real(x: f64) -> Result<Self, RiemannError> {
        SheetPoint::new(x, 0.0)
    }

    /// Lift of `z` choosing the argument closest to `anchor_argument`.
    ///
    /// Used when an iteration produces plain complex numbers that must be
    /// placed back on the sheet the iteration started from.
    pub fn from_complex_near(z: Complex64, anchor_argument: f64) -> Result<Self, RiemannError> {
        let principal = z.arg();
        let turns = ((anchor_argument - principal) / (2.0 * PI)).round();
        SheetPoint::new(z.norm(), principal + 2.0 * PI * turns)
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    pub fn argument(&self) -> f64 {
        self.argument
    }

    /// Projection back to the plane, forgetting the sheet.
    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.argument)
    }

    /// The multivalued power `z^p = exp(p (ln|z| + i arg z))` with the
    /// unwrapped argument, the single operation everything else leans on.
    pub fn mv_pow(&self, p: f64) -> Complex64 {
        let r = (p * self.modulus.ln()).exp();
        Complex64::from_polar(r, p * self.argument)
    }

    /// Continuation along a circular arc: adds `dtheta` to the argument.
    pub fn rotate(&self, dtheta: f64) -> Self {
        SheetPoint {
            modulus: self.modulus,
            argument: self.argument + dtheta,
        }
    }

    /// Radial rescaling by `c > 0`, staying on the same ray.
    pub fn scaled(&self, c: f64) -> Self {
        debug_assert!(c > 0.0 && c.is_finite());
        SheetPoint {
            modulus: self.modulus * c,
            argument: self.argument,
        }
    }

    /// Index of the argument band `(-pi/2 + 2 pi n, 3 pi/2 + 2 pi n]`.
    pub fn sheet(&self) -> i64 {
        ((self.argument + PI / 2.0) / (2.0 * PI)).floor() as i64
    }
}
