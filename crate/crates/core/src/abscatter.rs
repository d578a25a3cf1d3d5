//! Aharonov-Bohm scattering off a flux line with parameter `alpha`.
//!
//! Every partial wave `n` sees an inverse-square radial problem of order
//! `|n + alpha|`. For all but two values of `n` that order lies outside
//! `(0, 1)` and the reflection amplitude is a rigid constant; the two
//! exceptions are the anomalous channels, where the boundary scale and
//! sign enter and the full momentum-cover machinery applies. The angular
//! amplitude is therefore split into a closed-form background (the sum of
//! all trivial channels, Abel-resummed) plus an exact two-term anomalous
//! correction.

use crate::riemann::SheetPoint;
use crate::smatrix::{ChannelError, CouplingSign, IntermediateChannel, PoleHit};
use crate::specfun::OrderNu;
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AbError {
    #[error("integer flux alpha={0} has no window channel: both candidate orders land on the excluded endpoints 0 and 1")]
    IntegerFlux(f64),
    #[error("forward direction (theta = 0 mod 2pi) carries a non-integrable singularity")]
    ForwardDirection,
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Pole(#[from] PoleHit),
}

/// The two partial waves whose radial order falls inside the window:
/// `n = -floor(alpha)` with order `frac(alpha)` and `n = -floor(alpha)-1`
/// with order `1 - frac(alpha)`.
pub fn anomalous_channels(alpha: f64) -> Result<[(i64, f64); 2], AbError> {
    assert!(alpha.is_finite(), "flux parameter must be finite");
    let m = alpha.floor();
    if alpha == m {
        return Err(AbError::IntegerFlux(alpha));
    }
    let n1 = -(m as i64);
    let frac = alpha - m;
    Ok([(n1, frac), (n1 - 1, 1.0 - frac)])
}

/// One anomalous partial wave: the angular index and the radial channel
/// that serves it.
#[derive(Debug, Clone, Copy)]
pub struct AnomalousEntry {
    pub n: i64,
    pub channel: IntermediateChannel,
}

/// A flux line plus the boundary data of its two anomalous channels. The
/// two channels carry independent signs and scales; nothing in the
/// problem ties them together.
#[derive(Debug, Clone, Copy)]
pub struct FluxConfig {
    alpha: f64,
    anomalous: [AnomalousEntry; 2],
}

impl FluxConfig {
    pub fn new(alpha: f64, specs: [(CouplingSign, f64); 2]) -> Result<Self, AbError> {
        let pairs = anomalous_channels(alpha)?;
        let mut entries = [None, None];
        for i in 0..2 {
            let (n, nu) = pairs[i];
            let order = OrderNu::new(nu).expect("non-integer flux keeps the order inside (0,1)");
            let (sign, kappa) = specs[i];
            entries[i] = Some(AnomalousEntry {
                n,
                channel: IntermediateChannel::new(order, sign, kappa)?,
            });
        }
        Ok(FluxConfig {
            alpha,
            anomalous: [entries[0].unwrap(), entries[1].unwrap()],
        })
    }

    /// Both anomalous channels with the same sign and scale.
    pub fn symmetric(alpha: f64, sign: CouplingSign, kappa: f64) -> Result<Self, AbError> {
        FluxConfig::new(alpha, [(sign, kappa), (sign, kappa)])
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn entries(&self) -> &[AnomalousEntry; 2] {
        &self.anomalous
    }

    pub fn entry_for(&self, n: i64) -> Option<&AnomalousEntry> {
        self.anomalous.iter().find(|e| e.n == n)
    }

    /// Reflection amplitude of channel `n` at momentum `k`: the exact
    /// window amplitude for the two anomalous channels, the rigid
    /// constant `-i e^{-i|n+alpha| pi}` for every other channel.
    pub fn channel_smatrix(&self, n: i64, k: SheetPoint) -> Result<Complex64, PoleHit> {
        match self.entry_for(n) {
            Some(entry) => entry.channel.s_matrix(k),
            None => Ok(self.trivial_smatrix(n)),
        }
    }

    /// The constant `-i e^{-i|n+alpha| pi}` every non-anomalous channel
    /// reflects with. Anomalous channels approach this same constant as
    /// k -> 0; their large-k limit flips the sign of the exponent.
    pub fn trivial_smatrix(&self, n: i64) -> Complex64 {
        let order = (n as f64 + self.alpha).abs();
        Complex64::from_polar(1.0, -(0.5 + order) * PI)
    }

    /// Partial-wave amplitude `f_n(k) = (S_n(k) i (-1)^n - 1) / (i sqrt k)`,
    /// evaluated anywhere on the momentum cover.
    pub fn partial_amp(&self, n: i64, k: SheetPoint) -> Result<Complex64, PoleHit> {
        let s = self.channel_smatrix(n, k)?;
        Ok(partial_from_s(s, n, k))
    }

    /// The amplitude channel `n` would have if it reflected with the
    /// trivial constant. Zero for genuinely trivial channels of an
    /// integer flux; for anomalous channels this is the reference the
    /// correction term is measured against.
    pub fn trivial_partial_amp(&self, n: i64, k: SheetPoint) -> Complex64 {
        partial_from_s(self.trivial_smatrix(n), n, k)
    }

    /// Per-channel amplitudes at real momentum `k` for `n` in the
    /// inclusive range.
    pub fn partial_wave_table(
        &self,
        k: f64,
        n_min: i64,
        n_max: i64,
    ) -> Result<PartialWaveTable, AbError> {
        assert!(k > 0.0 && k.is_finite(), "momentum must be positive");
        assert!(n_min <= n_max);
        let kp = SheetPoint::from_positive_real(k).expect("k > 0");
        let mut rows = Vec::with_capacity((n_max - n_min + 1) as usize);
        for n in n_min..=n_max {
            let s_value = self.channel_smatrix(n, kp)?;
            rows.push(PartialWaveRow {
                n,
                s_value,
                f_value: partial_from_s(s_value, n, kp),
            });
        }
        Ok(PartialWaveTable { k, rows })
    }
}

fn partial_from_s(s: Complex64, n: i64, k: SheetPoint) -> Complex64 {
    // e^{i(|n|+1/2)pi} = i(-1)^n, exactly
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let phase = Complex64::new(0.0, sign);
    (s * phase - 1.0) / (Complex64::new(0.0, 1.0) * k.mv_pow(0.5))
}

#[derive(Debug, Clone, Copy)]
pub struct PartialWaveRow {
    pub n: i64,
    pub s_value: Complex64,
    pub f_value: Complex64,
}

#[derive(Debug, Clone)]
pub struct PartialWaveTable {
    pub k: f64,
    pub rows: Vec<PartialWaveRow>,
}

fn check_direction(theta: f64) -> Result<(), AbError> {
    assert!(theta.is_finite(), "angle must be finite");
    if (theta * 0.5).sin().abs() < 1e-14 {
        return Err(AbError::ForwardDirection);
    }
    Ok(())
}

/// Closed form of the trivial-channel sum
/// `sum_n f_n^{triv} e^{i n theta} / sqrt(2 pi)`.
///
/// With `m = floor(alpha)` the trivial amplitude is
/// `f_n^{triv} = (e^{i pi (|n| - |n+alpha|)} - 1)/(i sqrt k)`, and because
/// `|n| - |n + alpha|` differs from `-alpha` (for `n >= -m`) or `+alpha`
/// (for `n <= -m-1`) by an even integer, every term carries one of just
/// two constants `C_+ = (-1)^m e^{-i pi frac(alpha)} - 1` and
/// `C_- = (-1)^m e^{+i pi frac(alpha)} - 1`. Abel summation of the two
/// geometric tails gives
///
/// `f_bg = [C_+ e^{-i m theta}/(1 - e^{i theta})
///        + C_- e^{-i(m+1) theta}/(1 - e^{-i theta})] / (i sqrt(2 pi k))`.
///
/// The sum does not converge pointwise (constant-modulus tails), so this
/// Abel value is the definition, cross-checked against damped partial
/// sums in the tests.
pub fn background_amplitude(alpha: f64, k: f64, theta: f64) -> Result<Complex64, AbError> {
    assert!(alpha.is_finite(), "flux parameter must be finite");
    assert!(k > 0.0 && k.is_finite(), "momentum must be positive");
    check_direction(theta)?;
    let m = alpha.floor();
    let beta = alpha - m;
    let msign = if (m as i64) % 2 == 0 { 1.0 } else { -1.0 };
    let c_plus = msign * Complex64::from_polar(1.0, -PI * beta) - 1.0;
    let c_minus = msign * Complex64::from_polar(1.0, PI * beta) - 1.0;
    let up = Complex64::from_polar(1.0, theta);
    let s_plus = c_plus * Complex64::from_polar(1.0, -m * theta) / (1.0 - up);
    let s_minus = c_minus * Complex64::from_polar(1.0, -(m + 1.0) * theta) / (1.0 - up.conj());
    Ok((s_plus + s_minus) / Complex64::new(0.0, (2.0 * PI * k).sqrt()))
}

/// Full angular amplitude: background plus the exact anomalous
/// correction `sum [f_n - f_n^{triv}] e^{i n theta} / sqrt(2 pi)` over
/// the two window channels.
pub fn total_amplitude(cfg: &FluxConfig, k: f64, theta: f64) -> Result<Complex64, AbError> {
    let bg = background_amplitude(cfg.alpha(), k, theta)?;
    let kp = SheetPoint::from_positive_real(k).expect("k > 0");
    let mut correction = Complex64::new(0.0, 0.0);
    for entry in cfg.entries() {
        let f = cfg.partial_amp(entry.n, kp)?;
        let f_triv = cfg.trivial_partial_amp(entry.n, kp);
        correction += (f - f_triv) * Complex64::from_polar(1.0, entry.n as f64 * theta);
    }
    Ok(bg + correction / (2.0 * PI).sqrt())
}

/// Differential cross section `|f(k, theta)|^2`.
pub fn cross_section(cfg: &FluxConfig, k: f64, theta: f64) -> Result<f64, AbError> {
    Ok(total_amplitude(cfg, k, theta)?.norm_sqr())
}

/// A scan maximum matched to the real-axis projection of a ladder pole.
#[derive(Debug, Clone, Copy)]
pub struct ResonancePeak {
    /// Angular index of the anomalous channel owning the pole.
    pub n: i64,
    /// Ladder index of the pole.
    pub ell: i64,
    /// `kappa_n * |sin(angle)|`, the pole's projection onto the positive
    /// real momentum axis.
    pub predicted_k: f64,
    /// Refined location of the nearest scan maximum.
    pub k_peak: f64,
    /// Scanned quantity at the refined maximum.
    pub height: f64,
    pub match_radius: f64,
}

/// Scan the flux-weighted channel strength
/// `sum_anomalous k |f_n(k)|^2 = sum |S_n(k) i(-1)^n - 1|^2` over
/// `[k_min, k_max]` and match its local maxima against ladder poles lying
/// near the positive real axis. The extra factor of `k` removes the
/// kinematic `1/k` envelope of `|f_n|^2`, which would otherwise swamp the
/// enhancement.
///
/// A pole at modulus `kappa_n`, rotated by angle `x` past the bound-state
/// ray, projects onto real momentum `-kappa_n sin x`. It qualifies as a
/// resonance candidate when it lies within the first turn of the cover
/// (`|x| < 2 pi`; farther sheets do not touch the physical axis, and
/// their reduced angles would equidistribute into endless spurious
/// matches), `sin x < 0`, and `|cos x| < cos_threshold`. The list is
/// empty when no pole qualifies, and widening the threshold can only
/// grow it.
pub fn resonance_scan(
    cfg: &FluxConfig,
    k_min: f64,
    k_max: f64,
    samples: usize,
    cos_threshold: f64,
) -> Result<Vec<ResonancePeak>, AbError> {
    assert!(k_min > 0.0 && k_max > k_min, "need 0 < k_min < k_max");
    assert!(samples >= 16, "scan needs at least 16 samples");
    assert!(cos_threshold > 0.0);

    let mut candidates: Vec<(i64, i64, f64)> = Vec::new();
    for entry in cfg.entries() {
        let nu = entry.channel.nu().get();
        let kappa = entry.channel.kappa0();
        for ell in -3i64..=3 {
            let x = match entry.channel.sign() {
                CouplingSign::Positive => ell as f64 * PI / nu,
                CouplingSign::Negative => (ell as f64 + 0.5) * PI / nu,
            };
            if x.abs() >= 2.0 * PI {
                continue;
            }
            let (sin_x, cos_x) = x.sin_cos();
            if sin_x < 0.0 && cos_x.abs() < cos_threshold {
                let predicted = -kappa * sin_x;
                if predicted >= k_min && predicted <= k_max {
                    candidates.push((entry.n, ell, predicted));
                }
            }
        }
    }
    if candidates.is_empty() {
        return Ok(Vec::new());
    }

    let strength = |k: f64| -> Result<f64, AbError> {
        let kp = SheetPoint::from_positive_real(k).expect("k > 0");
        let mut total = 0.0;
        for entry in cfg.entries() {
            total += k * cfg.partial_amp(entry.n, kp)?.norm_sqr();
        }
        Ok(total)
    };

    let h = (k_max - k_min) / (samples as f64 - 1.0);
    let mut values = Vec::with_capacity(samples);
    for i in 0..samples {
        values.push(strength(k_min + i as f64 * h)?);
    }

    let mut maxima: Vec<(f64, f64)> = Vec::new();
    for i in 1..samples - 1 {
        if values[i] >= values[i - 1] && values[i] > values[i + 1] {
            // parabolic refinement through the three samples
            let denom = values[i - 1] - 2.0 * values[i] + values[i + 1];
            let offset = if denom.abs() > 0.0 {
                0.5 * (values[i - 1] - values[i + 1]) / denom
            } else {
                0.0
            };
            let k_peak = k_min + (i as f64 + offset.clamp(-0.5, 0.5)) * h;
            maxima.push((k_peak, strength(k_peak)?));
        }
    }
    if maxima.is_empty() {
        return Ok(Vec::new());
    }

    let mut peaks: Vec<ResonancePeak> = candidates
        .into_iter()
        .map(|(n, ell, predicted)| {
            let (k_peak, height) = maxima
                .iter()
                .cloned()
                .min_by(|a, b| {
                    ((a.0 - predicted).abs())
                        .partial_cmp(&(b.0 - predicted).abs())
                        .unwrap()
                })
                .unwrap();
            ResonancePeak {
                n,
                ell,
                predicted_k: predicted,
                k_peak,
                height,
                match_radius: (k_peak - predicted).abs(),
            }
        })
        .collect();
    peaks.sort_by(|a, b| a.predicted_k.partial_cmp(&b.predicted_k).unwrap());
    Ok(peaks)
}
