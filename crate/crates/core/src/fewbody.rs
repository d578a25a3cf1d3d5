//! Mass reductions that carry the planar two-body and the linear
//! three-body flux problems onto the effective one-body radial problem:
//! reduced masses, the Jacobi coordinate maps, the twisted-boundary
//! winding phase, and the assembly of an effective flux configuration in
//! reduced units.

use crate::abscatter::{AbError, FluxConfig};
use crate::smatrix::CouplingSign;
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MassError {
    #[error("masses must be positive and finite")]
    NonPositive,
}

fn check_mass(m: f64) -> Result<(), MassError> {
    if m > 0.0 && m.is_finite() {
        Ok(())
    } else {
        Err(MassError::NonPositive)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TwoBodyMasses {
    m1: f64,
    m2: f64,
}

impl TwoBodyMasses {
    pub fn new(m1: f64, m2: f64) -> Result<Self, MassError> {
        check_mass(m1)?;
        check_mass(m2)?;
        Ok(TwoBodyMasses { m1, m2 })
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ThreeBodyMasses {
    m1: f64,
    m2: f64,
    m3: f64,
    mu0: f64,
}

impl ThreeBodyMasses {
    /// Reference mass defaults to the pair reduced mass
    /// `(1/m1 + 1/m2)^{-1}`; it is an arbitrary scale and any positive
    /// choice gives the same physics.
    pub fn new(m1: f64, m2: f64, m3: f64) -> Result<Self, MassError> {
        let mu1 = 1.0 / (1.0 / m1 + 1.0 / m2);
        ThreeBodyMasses::with_reference(m1, m2, m3, mu1)
    }

    pub fn with_reference(m1: f64, m2: f64, m3: f64, mu0: f64) -> Result<Self, MassError> {
        check_mass(m1)?;
        check_mass(m2)?;
        check_mass(m3)?;
        check_mass(mu0)?;
        Ok(ThreeBodyMasses { m1, m2, m3, mu0 })
    }

    pub fn reference(&self) -> f64 {
        self.mu0
    }
}

/// Output of a coordinate reduction: the reduced-mass ladder (relative
/// sectors first, total mass last), the Jacobi maps as dense matrices,
/// and the coefficient in front of the reduced radial operator.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub reduced_masses: Vec<f64>,
    /// Rows send particle coordinates to Jacobi coordinates.
    pub jacobi_forward: Vec<Vec<f64>>,
    /// Rows send Jacobi coordinates back to particle coordinates.
    pub jacobi_backward: Vec<Vec<f64>>,
    /// Coefficient of the radial kinetic operator in hbar = 1 units.
    pub kinetic_prefactor: f64,
    /// The mass scale the prefactor refers to; recorded so callers can
    /// convert to dimensionful units.
    pub reference_mass: f64,
}

fn apply(map: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    map.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn compose(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

impl ReductionResult {
    pub fn forward(&self, coords: &[f64]) -> Vec<f64> {
        assert_eq!(coords.len(), self.jacobi_forward.len());
        apply(&self.jacobi_forward, coords)
    }

    pub fn backward(&self, jacobi: &[f64]) -> Vec<f64> {
        assert_eq!(jacobi.len(), self.jacobi_backward.len());
        apply(&self.jacobi_backward, jacobi)
    }

    /// Largest deviation of forward-then-backward composition from the
    /// identity matrix.
    pub fn round_trip_defect(&self) -> f64 {
        let prod = compose(&self.jacobi_backward, &self.jacobi_forward);
        let mut worst: f64 = 0.0;
        for (i, row) in prod.iter().enumerate() {
            for (j, &entry) in row.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((entry - target).abs());
            }
        }
        worst
    }

    /// Defect of the scaled-polar substitution: rescaling each relative
    /// coordinate by sqrt(mu_i / mu0) must turn the kinetic quadratic
    /// form diag(1/mu_i) into the isotropic form (1/mu0) I. Returns the
    /// largest relative deviation over the relative sector (everything
    /// but the trailing center-of-mass entry).
    pub fn polar_congruence_defect(&self) -> f64 {
        let relative = &self.reduced_masses[..self.reduced_masses.len() - 1];
        let mu0 = self.reference_mass;
        let mut worst: f64 = 0.0;
        for &mu in relative {
            let scale = (mu0 / mu).sqrt();
            let transformed = (1.0 / scale) * (1.0 / mu) * (1.0 / scale);
            worst = worst.max((transformed - 1.0 / mu0).abs() * mu0);
        }
        worst
    }
}

/// Relative/center-of-mass split of two bodies: reduced masses
/// `mu1 = (1/m1 + 1/m2)^{-1}` and `mu2 = m1 + m2`, with the radial
/// operator carrying `1/(2 mu1)`.
pub fn reduce_two_body(m: &TwoBodyMasses) -> ReductionResult {
    let (m1, m2) = (m.m1, m.m2);
    let total = m1 + m2;
    let mu1 = 1.0 / (1.0 / m1 + 1.0 / m2);
    ReductionResult {
        reduced_masses: vec![mu1, total],
        jacobi_forward: vec![vec![1.0, -1.0], vec![m1 / total, m2 / total]],
        jacobi_backward: vec![vec![m2 / total, 1.0], vec![-m1 / total, 1.0]],
        kinetic_prefactor: 1.0 / (2.0 * mu1),
        reference_mass: mu1,
    }
}

/// Jacobi split of three bodies on a line: pair coordinate, spectator
/// coordinate, center of mass. The scaled-polar substitution brings both
/// relative kinetic terms to the common prefactor `1/(2 mu0)`.
pub fn reduce_three_body(m: &ThreeBodyMasses) -> ReductionResult {
    let (m1, m2, m3) = (m.m1, m.m2, m.m3);
    let pair = m1 + m2;
    let total = pair + m3;
    let mu1 = 1.0 / (1.0 / m1 + 1.0 / m2);
    let mu2 = 1.0 / (1.0 / pair + 1.0 / m3);
    ReductionResult {
        reduced_masses: vec![mu1, mu2, total],
        jacobi_forward: vec![
            vec![1.0, -1.0, 0.0],
            vec![m1 / pair, m2 / pair, -1.0],
            vec![m1 / total, m2 / total, m3 / total],
        ],
        jacobi_backward: vec![
            vec![m2 / pair, m3 / total, 1.0],
            vec![-m1 / pair, m3 / total, 1.0],
            vec![0.0, -pair / total, 1.0],
        ],
        kinetic_prefactor: 1.0 / (2.0 * m.mu0),
        reference_mass: m.mu0,
    }
}

/// Phase picked up by a wavefunction component under `n_wind` exchanges
/// around the flux: `e^{2 pi i n alpha}`. A homomorphism from the integer
/// winding numbers into the unit circle.
pub fn winding_phase(n_wind: i64, alpha: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * n_wind as f64 * alpha)
}

/// A flux problem in reduced units, together with the conversion data
/// recorded by the mass reduction that produced it.
#[derive(Debug, Clone, Copy)]
pub struct EffectiveProblem {
    pub config: FluxConfig,
    pub kinetic_prefactor: f64,
    pub reference_mass: f64,
}

/// Attach the anomalous-channel boundary data to a reduced few-body
/// problem. The channel structure depends only on `alpha` and the
/// boundary parameters; the masses enter solely through the recorded
/// unit conversions.
pub fn effective_channel(
    reduction: &ReductionResult,
    alpha: f64,
    specs: [(CouplingSign, f64); 2],
) -> Result<EffectiveProblem, AbError> {
    Ok(EffectiveProblem {
        config: FluxConfig::new(alpha, specs)?,
        kinetic_prefactor: reduction.kinetic_prefactor,
        reference_mass: reduction.reference_mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riemann::SheetPoint;
    use approx::assert_relative_eq;

    #[test]
    fn mass_validation() {
        assert_eq!(TwoBodyMasses::new(0.0, 1.0).unwrap_err(), MassError::NonPositive);
        assert_eq!(
            ThreeBodyMasses::new(1.0, -2.0, 1.0).unwrap_err(),
            MassError::NonPositive
        );
        assert_eq!(
            ThreeBodyMasses::with_reference(1.0, 1.0, 1.0, f64::NAN).unwrap_err(),
            MassError::NonPositive
        );
    }

    #[test]
    fn two_body_reduced_masses() {
        let equal = reduce_two_body(&TwoBodyMasses::new(3.0, 3.0).unwrap());
        assert_relative_eq!(equal.reduced_masses[0], 1.5, max_relative = 1e-15);
        assert_relative_eq!(equal.reduced_masses[1], 6.0, max_relative = 1e-15);
        assert_relative_eq!(equal.kinetic_prefactor, 1.0 / 3.0, max_relative = 1e-15);

        let heavy = reduce_two_body(&TwoBodyMasses::new(2.0, 1e12).unwrap());
        assert_relative_eq!(heavy.reduced_masses[0], 2.0, max_relative = 1e-11);
    }

    #[test]
    fn two_body_round_trip() {
        let red = reduce_two_body(&TwoBodyMasses::new(1.7, 0.3).unwrap());
        assert!(red.round_trip_defect() <= 1e-14);
        let coords = [0.9, -2.4];
        let back = red.backward(&red.forward(&coords));
        for (a, b) in coords.iter().zip(&back) {
            assert_relative_eq!(a, b, max_relative = 1e-14);
        }
    }

    #[test]
    fn three_body_reduced_masses() {
        let red = reduce_three_body(&ThreeBodyMasses::new(2.0, 2.0, 2.0).unwrap());
        assert_relative_eq!(red.reduced_masses[0], 1.0, max_relative = 1e-15);
        assert_relative_eq!(red.reduced_masses[1], 4.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(red.reduced_masses[2], 6.0, max_relative = 1e-15);
        // default reference is the pair reduced mass
        assert_relative_eq!(red.reference_mass, 1.0, max_relative = 1e-15);
        assert_relative_eq!(red.kinetic_prefactor, 0.5, max_relative = 1e-15);
    }

    #[test]
    fn three_body_round_trip() {
        for masses in [[1.0, 2.0, 3.0], [0.2, 5.0, 1.3], [1e-3, 1.0, 1e3]] {
            let red = reduce_three_body(
                &ThreeBodyMasses::new(masses[0], masses[1], masses[2]).unwrap(),
            );
            assert!(
                red.round_trip_defect() <= 1e-14,
                "masses {masses:?}: defect {:e}",
                red.round_trip_defect()
            );
        }
    }

    #[test]
    fn coincidence_point_maps_to_origin() {
        let red = reduce_three_body(&ThreeBodyMasses::new(1.0, 2.0, 5.0).unwrap());
        let jac = red.forward(&[0.7, 0.7, 0.7]);
        assert!(jac[0].abs() <= 1e-15 && jac[1].abs() <= 1e-15);
        assert_relative_eq!(jac[2], 0.7, max_relative = 1e-15);
    }

    #[test]
    fn polar_congruence_holds() {
        let default_ref = reduce_three_body(&ThreeBodyMasses::new(1.0, 2.0, 3.0).unwrap());
        assert!(default_ref.polar_congruence_defect() <= 1e-14);
        let custom =
            reduce_three_body(&ThreeBodyMasses::with_reference(0.4, 7.0, 2.0, 11.0).unwrap());
        assert!(custom.polar_congruence_defect() <= 1e-14);
        let pair = reduce_two_body(&TwoBodyMasses::new(1.0, 5.0).unwrap());
        assert!(pair.polar_congruence_defect() <= 1e-14);
    }

    #[test]
    fn winding_phase_is_a_homomorphism() {
        assert_eq!(winding_phase(0, 0.77), Complex64::new(1.0, 0.0));
        assert!((winding_phase(1, 0.5) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        for &alpha in &[0.3, 1.7] {
            for (a, b) in [(1, 2), (-3, 5), (4, -4)] {
                let lhs = winding_phase(a + b, alpha);
                let rhs = winding_phase(a, alpha) * winding_phase(b, alpha);
                assert!((lhs - rhs).norm() < 1e-14, "n1={a} n2={b}");
            }
        }
    }

    #[test]
    fn effective_channels_agree_across_reductions() {
        let specs = [(CouplingSign::Positive, 1.0), (CouplingSign::Negative, 2.0)];
        let two = effective_channel(
            &reduce_two_body(&TwoBodyMasses::new(1.0, 3.0).unwrap()),
            0.3,
            specs,
        )
        .unwrap();
        let three = effective_channel(
            &reduce_three_body(&ThreeBodyMasses::new(2.0, 0.5, 4.0).unwrap()),
            0.3,
            specs,
        )
        .unwrap();
        let ns: Vec<i64> = two.config.entries().iter().map(|e| e.n).collect();
        assert_eq!(ns, vec![0, -1]);
        for &k in &[0.4, 1.0, 2.7] {
            let kp = SheetPoint::from_positive_real(k).unwrap();
            for n in [0, -1] {
                let a = two.config.channel_smatrix(n, kp).unwrap();
                let b = three.config.channel_smatrix(n, kp).unwrap();
                assert!((a - b).norm() <= 1e-15, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn channel_structure_survives_mass_rescaling() {
        let specs = [(CouplingSign::Positive, 1.0), (CouplingSign::Positive, 1.0)];
        let base = effective_channel(
            &reduce_three_body(&ThreeBodyMasses::new(1.0, 2.0, 3.0).unwrap()),
            0.4,
            specs,
        )
        .unwrap();
        let scaled = effective_channel(
            &reduce_three_body(&ThreeBodyMasses::new(10.0, 20.0, 30.0).unwrap()),
            0.4,
            specs,
        )
        .unwrap();
        for (a, b) in base.config.entries().iter().zip(scaled.config.entries()) {
            assert_eq!(a.n, b.n);
            assert_relative_eq!(
                a.channel.nu().get(),
                b.channel.nu().get(),
                max_relative = 1e-15
            );
        }
        assert_relative_eq!(
            base.kinetic_prefactor,
            10.0 * scaled.kinetic_prefactor,
            max_relative = 1e-14
        );
    }

    #[test]
    fn integer_flux_rejected() {
        let red = reduce_two_body(&TwoBodyMasses::new(1.0, 1.0).unwrap());
        let specs = [(CouplingSign::Positive, 1.0), (CouplingSign::Positive, 1.0)];
        assert!(matches!(
            effective_channel(&red, 2.0, specs),
            Err(AbError::IntegerFlux(_))
        ));
    }
}
