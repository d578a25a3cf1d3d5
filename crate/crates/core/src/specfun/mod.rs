//! The outgoing radial solution ("Jost solution") of
//! `-u'' + (nu^2 - 1/4)/r^2 u = k^2 u`, normalized to `e^{ikr}` at
//! infinity, evaluated on the two rays where the library needs it:
//! real momenta (oscillatory scattering states) and positive imaginary
//! momenta (decaying bound states).
//!
//! Everything is parametrized by `t = |k| r > 0` along the ray. On the
//! real ray `f_nu(t)` is built from a Bessel-J pair near the origin and
//! from the exponential asymptotic series at large argument; on the
//! imaginary ray `f_nu(it) = sqrt(2t/pi) K_nu(t)`, which is real and
//! positive. Both routes hand over at `t = 12`, where their error
//! budgets cross at around 1e-10.

mod bessel;
mod gamma;

pub use bessel::{bessel_j, bessel_k};
pub use gamma::gamma_real;

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use thiserror::Error;

use bessel::SERIES_CUTOFF;

/// Imaginary-ray arguments beyond this flush to zero: `e^{-t}` has left
/// the normal f64 range and every downstream quantity is zero anyway.
const UNDERFLOW_CUTOFF: f64 = 700.0;

#[derive(Debug, Error, PartialEq)]
pub enum SpecFunError {
    #[error("channel order must lie strictly inside (0, 1), got {0}")]
    OrderOutOfRange(f64),
}

/// Channel order `nu`, restricted to the open interval (0, 1).
///
/// This is the window where the radial problem has a one-parameter family
/// of self-adjoint boundary conditions; the endpoints need logarithmic
/// solutions this crate does not model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderNu(f64);

impl OrderNu {
    pub fn new(nu: f64) -> Result<Self, SpecFunError> {
        if !(nu > 0.0 && nu < 1.0) {
            return Err(SpecFunError::OrderOutOfRange(nu));
        }
        Ok(OrderNu(nu))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Which ray of the complex argument plane the evaluation sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ray {
    /// Argument `t`: scattering kinematics.
    PositiveReal,
    /// Argument `i t`: bound-state kinematics. Values decay like `e^{-t}`.
    PositiveImaginary,
}

/// Function value plus an explicit underflow marker, so callers can tell
/// a genuine zero tail from a dynamic-range loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JostValue {
    pub value: Complex64,
    pub underflowed: bool,
}

impl JostValue {
    fn finite(value: Complex64) -> Self {
        JostValue {
            value,
            underflowed: false,
        }
    }

    fn underflow() -> Self {
        JostValue {
            value: Complex64::new(0.0, 0.0),
            underflowed: true,
        }
    }
}

/// `f_mu(t)` on the real ray by the Bessel-J route,
/// `sqrt(pi t / 2) e^{i(pi/4 + mu pi/2)} (J_{-mu} - e^{-i mu pi} J_mu) / (i sin mu pi)`.
fn f_real_series(mu: f64, t: f64) -> Complex64 {
    let pref = (PI * t / 2.0).sqrt() * Complex64::from_polar(1.0, FRAC_PI_4 + mu * FRAC_PI_2);
    let jm = bessel_j(-mu, t);
    let jp = bessel_j(mu, t);
    let combo = Complex64::new(jm, 0.0) - Complex64::from_polar(1.0, -mu * PI) * jp;
    pref * combo / Complex64::new(0.0, (mu * PI).sin())
}

/// Shared tail of the large-argument expansions: `sum_k c^k a_k(mu) / t^k`
/// with `a_k(mu) = prod_{j<=k} (4 mu^2 - (2j-1)^2) / (k! 8^k)`, truncated
/// at the smallest term. `c = i` gives the real ray, `c = 1` the imaginary
/// ray.
fn asymptotic_tail(mu: f64, t: f64, c: Complex64) -> Complex64 {
    let four_mu2 = 4.0 * mu * mu;
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        term *= c * ((four_mu2 - (2.0 * kf - 1.0) * (2.0 * kf - 1.0)) / (8.0 * kf * t));
        let mag = term.norm();
        if mag > prev {
            break;
        }
        prev = mag;
        sum += term;
        if mag < 1e-18 {
            break;
        }
    }
    sum
}

/// Jost value for general order `mu` in (-1, 1) excluding 0. The public
/// order window is (0, 1); the wider range exists for the derivative
/// recurrence, which needs order `nu - 1`.
fn f_general(mu: f64, ray: Ray, t: f64) -> JostValue {
    debug_assert!(mu > -1.0 && mu < 1.0 && mu != 0.0);
    debug_assert!(t > 0.0);
    match ray {
        Ray::PositiveReal => {
            if t <= SERIES_CUTOFF {
                JostValue::finite(f_real_series(mu, t))
            } else {
                let tail = asymptotic_tail(mu, t, Complex64::new(0.0, 1.0));
                JostValue::finite(Complex64::from_polar(1.0, t) * tail)
            }
        }
        Ray::PositiveImaginary => {
            if t > UNDERFLOW_CUTOFF {
                return JostValue::underflow();
            }
            let v = if t <= SERIES_CUTOFF {
                (2.0 * t / PI).sqrt() * bessel_k(mu.abs(), t)
            } else {
                (-t).exp() * asymptotic_tail(mu, t, Complex64::new(1.0, 0.0)).re
            };
            JostValue::finite(Complex64::new(v, 0.0))
        }
    }
}

/// The outgoing solution `f_nu` at `t` (real ray) or `i t` (imaginary ray).
///
/// At `nu = 1/2` the potential vanishes and the exact values are `e^{it}`
/// and `e^{-t}`; these are recovered to machine precision and anchor the
/// unit tests.
pub fn jost_f(nu: OrderNu, ray: Ray, t: f64) -> JostValue {
    assert!(t > 0.0, "evaluation point must be positive along the ray");
    f_general(nu.get(), ray, t)
}

/// Derivative of `f_nu` with respect to its complex argument, evaluated
/// at `t` or `i t`, through the order-lowering recurrence
/// `f_nu'(z) = ((1/2 - nu)/z) f_nu(z) + i f_{nu-1}(z)`.
pub fn jost_f_derivative(nu: OrderNu, ray: Ray, t: f64) -> JostValue {
    assert!(t > 0.0, "evaluation point must be positive along the ray");
    let n = nu.get();
    let f = f_general(n, ray, t);
    let f_lower = f_general(n - 1.0, ray, t);
    if f.underflowed || f_lower.underflowed {
        return JostValue::underflow();
    }
    let z = match ray {
        Ray::PositiveReal => Complex64::new(t, 0.0),
        Ray::PositiveImaginary => Complex64::new(0.0, t),
    };
    let value = (0.5 - n) / z * f.value + Complex64::new(0.0, 1.0) * f_lower.value;
    JostValue::finite(value)
}

/// Coefficients of the two boundary behaviors `t^{1/2 -+ nu}` in the
/// small-argument expansion of the Jost solution on the imaginary ray,
/// `f_nu(it) = a t^{1/2-nu} - b t^{1/2+nu} + O(t^{5/2-nu})`.
///
/// On the real ray the same numbers appear dressed with the phases
/// `e^{+-i(nu pi/2 - pi/4)}`. They satisfy `2 nu^2 a b = nu / sin(nu pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCoeffs {
    pub a: f64,
    pub b: f64,
}

pub fn boundary_coeffs(nu: OrderNu) -> BoundaryCoeffs {
    let n = nu.get();
    let s = (n * PI).sin();
    let root_pi = PI.sqrt();
    BoundaryCoeffs {
        a: root_pi / (2f64.powf(0.5 - n) * gamma_real(1.0 - n) * s),
        b: root_pi / (2f64.powf(0.5 + n) * gamma_real(1.0 + n) * s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn nu(v: f64) -> OrderNu {
        OrderNu::new(v).unwrap()
    }

    #[test]
    fn order_window_is_strict() {
        assert!(OrderNu::new(0.0).is_err());
        assert!(OrderNu::new(1.0).is_err());
        assert!(OrderNu::new(-0.2).is_err());
        assert!(OrderNu::new(f64::NAN).is_err());
        assert!(OrderNu::new(0.5).is_ok());
    }

    #[test]
    fn free_case_closed_forms() {
        // nu = 1/2 is the free particle: f(t) = e^{it}, f(it) = e^{-t},
        // and the asymptotic tails terminate, so this holds on both sides
        // of the route switch
        for &t in &[0.05, 1.0, 7.0, 11.9, 12.1, 30.0, 250.0] {
            let f = jost_f(nu(0.5), Ray::PositiveReal, t).value;
            assert_relative_eq!(f.re, t.cos(), epsilon = 1e-11, max_relative = 1e-11);
            assert_relative_eq!(f.im, t.sin(), epsilon = 1e-11, max_relative = 1e-11);

            let g = jost_f(nu(0.5), Ray::PositiveImaginary, t).value;
            assert_relative_eq!(g.re, (-t).exp(), max_relative = 1e-12);
            assert_relative_eq!(g.im, 0.0, epsilon = 1e-15);

            let df = jost_f_derivative(nu(0.5), Ray::PositiveReal, t).value;
            let expect = Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, t);
            assert_relative_eq!(df.re, expect.re, epsilon = 1e-12, max_relative = 1e-11);
            assert_relative_eq!(df.im, expect.im, epsilon = 1e-12, max_relative = 1e-11);

            let dg = jost_f_derivative(nu(0.5), Ray::PositiveImaginary, t).value;
            assert_relative_eq!(dg.im, (-t).exp(), max_relative = 1e-12);
            assert_relative_eq!(dg.re, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn routes_agree_across_the_switch() {
        // evaluate both routes throughout [10, 14] and require absolute
        // agreement at 1e-9; |f| is O(1) on the real ray so this is also
        // a relative statement there
        for &v in &[0.1, 0.25, 0.5, 0.63, 0.9] {
            for i in 0..=40 {
                let t = 10.0 + 0.1 * i as f64;
                let series = f_real_series(v, t);
                let asym = Complex64::from_polar(1.0, t)
                    * asymptotic_tail(v, t, Complex64::new(0.0, 1.0));
                assert!(
                    (series - asym).norm() <= 1e-9,
                    "real ray nu={v} t={t}: {series} vs {asym}"
                );

                let k_series = (2.0 * t / PI).sqrt() * bessel_k(v, t);
                let k_asym = (-t).exp() * asymptotic_tail(v, t, Complex64::new(1.0, 0.0)).re;
                assert!(
                    (k_series - k_asym).abs() <= 1e-9,
                    "imaginary ray nu={v} t={t}: {k_series} vs {k_asym}"
                );
            }
        }
    }

    #[test]
    fn wronskian_is_conserved() {
        // Im(conj(f) f') = 1 for every order and radius: the flux carried
        // by the outgoing solution never changes
        for &v in &[0.05, 0.3, 0.5, 0.71, 0.97] {
            for &t in &[0.2, 1.0, 5.0, 11.0, 13.0, 80.0] {
                let f = jost_f(nu(v), Ray::PositiveReal, t).value;
                let df = jost_f_derivative(nu(v), Ray::PositiveReal, t).value;
                let w = (f.conj() * df).im;
                assert!((w - 1.0).abs() <= 1e-8, "nu={v} t={t}: wronskian {w}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        // the finite difference is the noisy side here: it amplifies the
        // series rounding floor by 1/(2h), so the bar sits at 1e-6
        let h = 1e-5;
        for &v in &[0.2, 0.3, 0.5, 0.77] {
            for &t in &[0.5, 2.0, 3.0, 9.0, 20.0] {
                let fd_real = (jost_f(nu(v), Ray::PositiveReal, t + h).value
                    - jost_f(nu(v), Ray::PositiveReal, t - h).value)
                    / (2.0 * h);
                let an = jost_f_derivative(nu(v), Ray::PositiveReal, t).value;
                assert!((fd_real - an).norm() < 1e-6, "real nu={v} t={t}");

                // d/dt f(it) = i f'(it)
                let fd_imag = (jost_f(nu(v), Ray::PositiveImaginary, t + h).value
                    - jost_f(nu(v), Ray::PositiveImaginary, t - h).value)
                    / (2.0 * h);
                let an_imag = Complex64::new(0.0, 1.0) * jost_f_derivative(nu(v), Ray::PositiveImaginary, t).value;
                assert!(
                    (fd_imag - an_imag).norm() < 1e-8 * an_imag.norm().max(1e-3),
                    "imag nu={v} t={t}"
                );
            }
        }
    }

    #[test]
    fn imaginary_ray_decays_and_underflows() {
        let f1 = jost_f(nu(0.3), Ray::PositiveImaginary, 5.0);
        let f2 = jost_f(nu(0.3), Ray::PositiveImaginary, 10.0);
        assert!(!f1.underflowed && !f2.underflowed);
        assert!(f2.value.re < f1.value.re && f2.value.re > 0.0);

        let deep = jost_f(nu(0.3), Ray::PositiveImaginary, 701.0);
        assert!(deep.underflowed);
        assert_eq!(deep.value, Complex64::new(0.0, 0.0));
        assert!(jost_f_derivative(nu(0.3), Ray::PositiveImaginary, 701.0).underflowed);
    }

    #[test]
    fn small_argument_expansion_on_imaginary_ray() {
        // f(it) - (a t^{1/2-nu} - b t^{1/2+nu}) should shrink like
        // t^{5/2-nu}: check the log-log slope between two small t
        for &v in &[0.2, 0.5, 0.8] {
            let c = boundary_coeffs(nu(v));
            let resid = |t: f64| {
                let f = jost_f(nu(v), Ray::PositiveImaginary, t).value.re;
                (f - (c.a * t.powf(0.5 - v) - c.b * t.powf(0.5 + v))).abs()
            };
            let (t1, t2) = (1e-3, 1e-4);
            let slope = (resid(t1) / resid(t2)).ln() / (t1 / t2).ln();
            let expect = 2.5 - v;
            assert!(
                (slope - expect).abs() < 0.05,
                "nu={v}: slope {slope} vs {expect}"
            );
        }
    }

    #[test]
    fn boundary_coeff_identities() {
        for k in 1..20 {
            let v = k as f64 / 20.0;
            let c = boundary_coeffs(nu(v));
            let lhs = 2.0 * v * v * c.a * c.b;
            let rhs = v / (v * PI).sin();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
            let ratio = c.a / c.b;
            let expect = 2f64.powf(2.0 * v) * gamma_real(1.0 + v) / gamma_real(1.0 - v);
            assert_relative_eq!(ratio, expect, max_relative = 1e-13);
        }
        let c = boundary_coeffs(nu(0.5));
        assert_relative_eq!(c.a, 1.0, max_relative = 1e-14);
        assert_relative_eq!(c.b, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn schwarz_reflection_consistency() {
        // f(-t) = conj(f(t)) extends f to the negative ray; check that the
        // wronskian built that way equals 2i exactly as used downstream
        for &v in &[0.15, 0.6] {
            for &t in &[0.7, 4.0, 18.0] {
                let f = jost_f(nu(v), Ray::PositiveReal, t).value;
                let df = jost_f_derivative(nu(v), Ray::PositiveReal, t).value;
                let w = f.conj() * df - df.conj() * f;
                assert_relative_eq!(w.re, 0.0, epsilon = 1e-12);
                assert_relative_eq!(w.im, 2.0, max_relative = 1e-8);
            }
        }
    }
}
