//! Reflection amplitude of the inverse-square radial problem in the
//! intermediate coupling window, with its pole and residue ladders.
//!
//! The coupling axis splits into three regimes. Above the upper critical
//! value the classical scale symmetry survives untouched. Below the lower
//! critical value the spectrum is a geometric tower (scale symmetry broken
//! to a discrete subgroup of dilations). In between, which is what this
//! module computes with, the dilation group survives in a subtler form:
//! the amplitude is invariant under a discrete set of *phase* rotations of
//! the momentum, `k -> e^{i pi/nu} k`, and all of its poles sit on the
//! circle `|k| = kappa0` of the momentum cover.

use crate::riemann::SheetPoint;
use crate::specfun::{boundary_coeffs, OrderNu};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

/// Couplings below this value produce the geometric bound-state tower.
pub const LAMBDA_LOWER_CRITICAL: f64 = -0.25;
/// Couplings above this value leave the continuous scale symmetry intact.
pub const LAMBDA_UPPER_CRITICAL: f64 = 0.75;

/// Regime of the coupling `lambda` in `-u'' + lambda/r^2 u = k^2 u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseClass {
    /// `lambda > 3/4`: no anomaly, no scale is generated.
    ContinuousScale,
    /// `-1/4 < lambda < 3/4`: invariance under discrete momentum-phase
    /// rotations by `pi/nu`, `nu = sqrt(lambda + 1/4)` in (0, 1).
    DiscretePhase { nu: f64 },
    /// `lambda < -1/4`: invariance under discrete dilations; energies form
    /// a geometric ladder with ratio `exp(-2 pi / exponent)`.
    DiscreteScale { exponent: f64 },
    /// `lambda = -1/4` exactly.
    CriticalLower,
    /// `lambda = 3/4` exactly.
    CriticalUpper,
}

/// Which regime a coupling strength belongs to. Thresholds are the exact
/// rationals -1/4 and 3/4; the comparison is carried out in f64, so only
/// values representable there can hit the critical branches.
pub fn classify(lambda: f64) -> PhaseClass {
    assert!(lambda.is_finite(), "coupling must be finite");
    if lambda > LAMBDA_UPPER_CRITICAL {
        PhaseClass::ContinuousScale
    } else if lambda == LAMBDA_UPPER_CRITICAL {
        PhaseClass::CriticalUpper
    } else if lambda > LAMBDA_LOWER_CRITICAL {
        PhaseClass::DiscretePhase {
            nu: (lambda + 0.25).sqrt(),
        }
    } else if lambda == LAMBDA_LOWER_CRITICAL {
        PhaseClass::CriticalLower
    } else {
        PhaseClass::DiscreteScale {
            exponent: (-0.25 - lambda).sqrt(),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("boundary coupling g must be nonzero; the pure-Dirichlet limit is outside this family")]
    ZeroCoupling,
    #[error("reference momentum scale must be positive and finite, got {0}")]
    BadScale(f64),
}

/// Evaluation landed on (or numerically indistinguishable from) a pole of
/// the amplitude.
#[derive(Debug, Error, Clone, Copy, PartialEq)]
#[error("momentum sits on a pole of the reflection amplitude")]
pub struct PoleHit;

/// Sign of the boundary coupling `g`. The two signs produce interleaved
/// pole ladders rotated by half a step relative to one another; only the
/// positive sign puts a pole on the physical positive imaginary axis (a
/// true bound state).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingSign {
    Positive,
    Negative,
}

impl CouplingSign {
    fn as_f64(self) -> f64 {
        match self {
            CouplingSign::Positive => 1.0,
            CouplingSign::Negative => -1.0,
        }
    }
}

/// One scattering channel of the intermediate window: order `nu` in (0,1),
/// the sign of the boundary coupling, and the momentum scale `kappa0` that
/// the boundary condition generates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntermediateChannel {
    nu: OrderNu,
    sign: CouplingSign,
    kappa0: f64,
}

/// One pole of the reflection amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleEntry {
    /// Ladder index; `n = 0` is the member on (or nearest above) the
    /// positive imaginary axis.
    pub n: i32,
    /// Pole position on the momentum cover.
    pub location: SheetPoint,
    /// Residue of the amplitude in the momentum variable.
    pub residue: Complex64,
    /// Sheet index of the location.
    pub sheet: i64,
}

/// A finite slice of the infinite pole ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleLadder {
    pub entries: Vec<PoleEntry>,
}

#[derive(Debug, Error)]
#[error("pole refinement did not converge in {iterations} iterations; last iterate at modulus {last_modulus}, argument {last_argument}")]
pub struct RefineError {
    pub iterations: usize,
    pub last_modulus: f64,
    pub last_argument: f64,
}

impl IntermediateChannel {
    pub fn new(nu: OrderNu, sign: CouplingSign, kappa0: f64) -> Result<Self, ChannelError> {
        if !(kappa0 > 0.0) || !kappa0.is_finite() {
            return Err(ChannelError::BadScale(kappa0));
        }
        Ok(IntermediateChannel { nu, sign, kappa0 })
    }

    /// Build the channel from the boundary coupling `g` in
    /// `u + g r^{1-2nu} u' -> 0` at the origin: the generated scale is
    /// `kappa0 = (a / (2 nu b |g|))^{1/(2 nu)}` with `a`, `b` the boundary
    /// coefficients of the channel order.
    pub fn from_coupling(nu: OrderNu, g: f64) -> Result<Self, ChannelError> {
        if g == 0.0 || !g.is_finite() {
            return Err(ChannelError::ZeroCoupling);
        }
        let c = boundary_coeffs(nu);
        let n = nu.get();
        let kappa0 = (c.a / (2.0 * n * c.b * g.abs())).powf(1.0 / (2.0 * n));
        let sign = if g > 0.0 {
            CouplingSign::Positive
        } else {
            CouplingSign::Negative
        };
        IntermediateChannel::new(nu, sign, kappa0)
    }

    /// The boundary coupling that generates this channel's scale;
    /// inverse of `from_coupling`.
    pub fn coupling_g(&self) -> f64 {
        let c = boundary_coeffs(self.nu);
        let n = self.nu.get();
        let magnitude = c.a / (2.0 * n * c.b * self.kappa0.powf(2.0 * n));
        magnitude * self.sign.as_f64()
    }

    pub fn nu(&self) -> OrderNu {
        self.nu
    }

    pub fn sign(&self) -> CouplingSign {
        self.sign
    }

    pub fn kappa0(&self) -> f64 {
        self.kappa0
    }

    /// Squared normalization of the bound state at `k = i kappa`,
    /// `kappa sin(nu pi) / nu`. Also the magnitude of every pole residue.
    pub fn bound_norm_sq(&self, kappa: f64) -> f64 {
        let n = self.nu.get();
        kappa * (n * PI).sin() / n
    }

    /// Numerator and denominator of the amplitude at `k`, each built from
    /// the quarter-turn rotations `+-ik` scaled by the channel momentum.
    fn numerator_denominator(&self, k: SheetPoint) -> (Complex64, Complex64) {
        let n = self.nu.get();
        let s = self.sign.as_f64();
        let half = |z: SheetPoint| z.mv_pow(0.5 - n) - s * z.mv_pow(0.5 + n);
        let z_up = k.rotate(FRAC_PI_2).scaled(1.0 / self.kappa0);
        let z_dn = k.rotate(-FRAC_PI_2).scaled(1.0 / self.kappa0);
        (half(z_up), half(z_dn))
    }

    /// The reflection amplitude
    /// `S(k) = -[(+ik/kappa0)^{1/2-nu} - s (+ik/kappa0)^{1/2+nu}] /
    ///          [(-ik/kappa0)^{1/2-nu} - s (-ik/kappa0)^{1/2+nu}]`
    /// with `+-ik` realized as quarter-turn rotations on the cover, so the
    /// value genuinely depends on the sheet of `k`.
    pub fn s_matrix(&self, k: SheetPoint) -> Result<Complex64, PoleHit> {
        let (num, den) = self.numerator_denominator(k);
        if den.norm() < 1e-300 {
            return Err(PoleHit);
        }
        Ok(-num / den)
    }

    /// Same amplitude rewritten through a complex sine (positive coupling)
    /// or cosine (negative coupling) of `nu log(ik/kappa0)`. Independent
    /// evaluation path used to cross-check `s_matrix`.
    pub fn s_matrix_trig(&self, k: SheetPoint) -> Result<Complex64, PoleHit> {
        let n = self.nu.get();
        let z_up = k.rotate(FRAC_PI_2).scaled(1.0 / self.kappa0);
        let z_dn = k.rotate(-FRAC_PI_2).scaled(1.0 / self.kappa0);
        // z^{1/2-nu} - z^{1/2+nu} = 2i z^{1/2} sin(i nu log z), and with a
        // plus sign the sine becomes a cosine (up to the factor 2 i -> 2)
        let w = |z: SheetPoint| Complex64::new(-n * z.argument(), n * z.modulus().ln());
        let (num, den) = match self.sign {
            CouplingSign::Positive => (
                Complex64::new(0.0, 2.0) * z_up.mv_pow(0.5) * w(z_up).sin(),
                Complex64::new(0.0, 2.0) * z_dn.mv_pow(0.5) * w(z_dn).sin(),
            ),
            CouplingSign::Negative => (
                2.0 * z_up.mv_pow(0.5) * w(z_up).cos(),
                2.0 * z_dn.mv_pow(0.5) * w(z_dn).cos(),
            ),
        };
        if den.norm() < 1e-300 {
            return Err(PoleHit);
        }
        Ok(-num / den)
    }

    /// The amplitude at the reflected momentum `-k`, reached along the
    /// argument-conjugated path (the incoming and outgoing normalizations
    /// trade places, so numerator and denominator swap). For real `k` this
    /// equals both `conj(S(k))` and `1/S(k)`; naively rotating `k` by `pi`
    /// and re-evaluating does NOT reproduce it, because the rotation drags
    /// the powers onto the next sheet.
    pub fn s_matrix_reflected(&self, k: SheetPoint) -> Result<Complex64, PoleHit> {
        let (num, den) = self.numerator_denominator(k);
        if num.norm() < 1e-300 {
            return Err(PoleHit);
        }
        Ok(-den / num)
    }

    /// Derivative of the denominator with respect to `k`, used by the
    /// pole refinement.
    fn denominator_derivative(&self, k: SheetPoint) -> Complex64 {
        let n = self.nu.get();
        let s = self.sign.as_f64();
        let z_dn = k.rotate(-FRAC_PI_2).scaled(1.0 / self.kappa0);
        let d = (0.5 - n) * z_dn.mv_pow(0.5 - n) - s * (0.5 + n) * z_dn.mv_pow(0.5 + n);
        d / k.to_complex()
    }

    /// Argument of the ladder member `n` on the momentum cover.
    fn pole_argument(&self, n: i32) -> f64 {
        let step = PI / self.nu.get();
        match self.sign {
            CouplingSign::Positive => FRAC_PI_2 + n as f64 * step,
            CouplingSign::Negative => FRAC_PI_2 + (n as f64 + 0.5) * step,
        }
    }

    /// The analytic pole ladder: members `n_min..=n_max`, all on the
    /// circle of radius `kappa0`, arguments advancing by `pi/nu` per step
    /// (offset half a step for negative coupling). The residue in the
    /// momentum variable is `k_n sin(nu pi)/nu`, i.e. the bound-state
    /// normalization rotated to the pole's direction.
    pub fn pole_ladder(&self, n_min: i32, n_max: i32) -> PoleLadder {
        assert!(n_min <= n_max);
        let norm_sq = self.bound_norm_sq(self.kappa0);
        let entries = (n_min..=n_max)
            .map(|n| {
                let theta = self.pole_argument(n);
                let location = SheetPoint::new(self.kappa0, theta).expect("kappa0 > 0");
                PoleEntry {
                    n,
                    location,
                    residue: Complex64::from_polar(norm_sq, theta),
                    sheet: location.sheet(),
                }
            })
            .collect();
        PoleLadder { entries }
    }

    /// Ladder mapped to the energy surface `E = k^2`: arguments double,
    /// moduli square, and the residue picks up the Jacobian `2 k_n`.
    pub fn energy_ladder(&self, n_min: i32, n_max: i32) -> PoleLadder {
        let k_ladder = self.pole_ladder(n_min, n_max);
        let entries = k_ladder
            .entries
            .into_iter()
            .map(|e| {
                let m = e.location.modulus();
                let theta = e.location.argument();
                let location = SheetPoint::new(m * m, 2.0 * theta).expect("positive modulus");
                PoleEntry {
                    n: e.n,
                    location,
                    // sheet of the energy point = sheet of the underlying
                    // momentum point (halved-argument convention)
                    sheet: e.sheet,
                    residue: 2.0 * e.location.to_complex() * e.residue,
                }
            })
            .collect();
        PoleLadder { entries }
    }

    /// Newton refinement of a pole position from a nearby seed, iterating
    /// on the denominator. Seeds within about `0.3 kappa0` of a ladder
    /// member converge; the argument is unwrapped continuously from the
    /// seed, so a seed on sheet `m` refines to that sheet's member.
    pub fn refine_pole(&self, seed: SheetPoint) -> Result<SheetPoint, RefineError> {
        let mut current = seed;
        let tol = 1e-13 * self.kappa0;
        for it in 0..60 {
            let (_, den) = self.numerator_denominator(current);
            let deriv = self.denominator_derivative(current);
            let step = den / deriv;
            let next = current.to_complex() - step;
            current = SheetPoint::from_complex_near(next, current.argument())
                .unwrap_or(current);
            if step.norm() <= tol {
                return Ok(current);
            }
            let _ = it;
        }
        // one more residual check: accept if we are parked on the root
        let (_, den) = self.numerator_denominator(current);
        if den.norm() <= 1e-12 {
            return Ok(current);
        }
        Err(RefineError {
            iterations: 60,
            last_modulus: current.modulus(),
            last_argument: current.argument(),
        })
    }

    /// Residue by direct contour integration: the mean of `S e^{i theta}`
    /// over a 256-node trapezoid on a circle of radius `1e-3 kappa0`.
    /// The circle is walked in argument coordinates around the given
    /// location, so it never crosses a cut regardless of the sheet.
    pub fn residue_numeric(&self, pole: SheetPoint) -> Complex64 {
        let rho = 1e-3 * self.kappa0;
        let nodes = 256;
        let center = pole.to_complex();
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..nodes {
            let theta = 2.0 * PI * j as f64 / nodes as f64;
            let offset = Complex64::from_polar(rho, theta);
            let point = SheetPoint::from_complex_near(center + offset, pole.argument())
                .expect("contour point stays away from the origin");
            let s = self
                .s_matrix(point)
                .expect("contour radius keeps clear of the pole itself");
            acc += s * offset;
        }
        acc / nodes as f64
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum LadderError {
    #[error("energy ladders exist only in the two broken-symmetry regimes")]
    NoScale,
    #[error("reference energy must be nonzero")]
    ZeroReference,
}

/// Geometric (or phase-rotated) ladder of energy poles spawned by a
/// reference member `E0`, for either broken-symmetry regime.
///
/// In the discrete-scale regime the members are `E0 exp(-2 n pi / tau)`:
/// a real geometric tower accumulating at zero. In the discrete-phase
/// regime they are `E0 exp(2 i n pi / nu)`: constant modulus, marching
/// around the energy cover. Residues are reported relative to the `n = 0`
/// member, which the symmetry fixes to scale exactly like the positions.
pub fn energy_pole_ladder(
    phase: PhaseClass,
    e0: Complex64,
    n_min: i32,
    n_max: i32,
) -> Result<PoleLadder, LadderError> {
    assert!(n_min <= n_max);
    if e0.norm() == 0.0 {
        return Err(LadderError::ZeroReference);
    }
    let entries = match phase {
        PhaseClass::DiscreteScale { exponent } => (n_min..=n_max)
            .map(|n| {
                let scale = (-2.0 * n as f64 * PI / exponent).exp();
                let location =
                    SheetPoint::new(e0.norm() * scale, e0.arg()).expect("scaled modulus > 0");
                PoleEntry {
                    n,
                    location,
                    residue: Complex64::new(scale, 0.0),
                    sheet: location.sheet(),
                }
            })
            .collect(),
        PhaseClass::DiscretePhase { nu } => (n_min..=n_max)
            .map(|n| {
                let dtheta = 2.0 * n as f64 * PI / nu;
                let location =
                    SheetPoint::new(e0.norm(), e0.arg() + dtheta).expect("modulus > 0");
                // sheet by the halved-argument convention: the underlying
                // momentum argument is half the energy argument
                let k_arg = location.argument() / 2.0;
                PoleEntry {
                    n,
                    location,
                    residue: Complex64::from_polar(1.0, dtheta),
                    sheet: SheetPoint::new(1.0, k_arg).expect("unit modulus").sheet(),
                }
            })
            .collect(),
        _ => return Err(LadderError::NoScale),
    };
    Ok(PoleLadder { entries })
}
