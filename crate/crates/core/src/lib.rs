//! Scattering theory of the attractive inverse-square potential in its
//! intermediate coupling window, where the boundary condition at the
//! origin generates a scale and breaks the dilation symmetry down to a
//! discrete group of momentum-phase rotations.
//!
//! The crate supplies the exact reflection amplitude on the full momentum
//! cover, its pole and residue ladders, eigenfunction machinery strong
//! enough to verify orthonormality and completeness numerically, the
//! Aharonov-Bohm scattering application where two partial waves acquire
//! these anomalous boundary conditions, and the mass-reduction plumbing
//! that connects few-body problems to the one-body radial form.

pub mod abscatter;
pub mod fewbody;
pub mod riemann;
pub mod smatrix;
pub mod specfun;
pub mod spectral;

pub use abscatter::{
    anomalous_channels, background_amplitude, cross_section, resonance_scan, total_amplitude,
    AbError, AnomalousEntry, FluxConfig, PartialWaveRow, PartialWaveTable, ResonancePeak,
};
pub use fewbody::{
    effective_channel, reduce_three_body, reduce_two_body, winding_phase, EffectiveProblem,
    MassError, ReductionResult, ThreeBodyMasses, TwoBodyMasses,
};
pub use riemann::{RiemannError, SheetPoint};
pub use smatrix::{
    classify, energy_pole_ladder, ChannelError, CouplingSign, IntermediateChannel, LadderError,
    PhaseClass, PoleEntry, PoleHit, PoleLadder, RefineError, LAMBDA_LOWER_CRITICAL,
    LAMBDA_UPPER_CRITICAL,
};
pub use specfun::{
    bessel_j, bessel_k, boundary_coeffs, gamma_real, jost_f, jost_f_derivative, BoundaryCoeffs,
    JostValue, OrderNu, Ray, SpecFunError,
};
pub use spectral::{
    boundary_residual, norm_constant, verify_bound_scatt_orthogonality, verify_completeness,
    verify_scatt_orthonormality, BoundState, CompletenessReport, GaussLegendre,
    OrthogonalityReport, OrthonormalityReport, QuadratureGrid, RadialWave, ScatteringState,
    SpectralError,
};
