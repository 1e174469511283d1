//! Exact amplitude dynamics for a finite bath.
//!
//! In normal coordinates (a₁ ± a₂)/√2, with bath combinations
//! (b₁ₖ ± b₂ₖ)/√2, the rotating-wave Hamiltonian splits into two independent
//! single-particle problems. Each is an arrowhead matrix with Ω_i at the
//! head and the bath frequencies on the diagonal; u_i(t) and v_ik(t) are the
//! first column of exp(−i h_i t).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::arrowhead::ArrowheadEigen;
use crate::bath::DiscretizedBath;
use crate::error::{Error, Result};
use crate::model::{InitialAmplitudes, NormalMode, PropagatorSet, SystemParams};

/// Single-particle matrix of one normal mode: `head` = Ω_i at [0][0],
/// bath frequencies on the rest of the diagonal, couplings λ_k in row and
/// column 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleParticleMatrix {
    pub head: f64,
    pub frequencies: Vec<f64>,
    pub couplings: Vec<f64>,
}

impl SingleParticleMatrix {
    pub fn dim(&self) -> usize {
        self.frequencies.len() + 1
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut h = DMatrix::zeros(n, n);
        h[(0, 0)] = self.head;
        for (k, (&w, &g)) in self.frequencies.iter().zip(&self.couplings).enumerate() {
            h[(k + 1, k + 1)] = w;
            h[(0, k + 1)] = g;
            h[(k + 1, 0)] = g;
        }
        h
    }

    pub fn eigen(&self) -> Result<ArrowheadEigen> {
        ArrowheadEigen::new(self.head, &self.frequencies, &self.couplings)
    }
}

pub fn build_normal_mode_matrix(
    params: &SystemParams,
    bath: &DiscretizedBath,
    mode: NormalMode,
) -> SingleParticleMatrix {
    SingleParticleMatrix {
        head: params.normal_frequency(mode),
        frequencies: bath.frequencies(),
        couplings: bath.couplings(),
    }
}

/// First column of exp(−i h t): `[u(t), v_1(t), …, v_K(t)]`.
///
/// Diagonalizes on every call; use [`ExactDynamics`] for time sweeps.
pub fn propagate(h: &SingleParticleMatrix, t: f64) -> Result<Vec<Complex64>> {
    check_time(t)?;
    Ok(h.eigen()?.first_column(t))
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::invalid(format!("time {t} must be finite and >= 0")));
    }
    Ok(())
}

/// Diagonalized dynamics of both normal modes, reusable across times.
#[derive(Debug, Clone)]
pub struct ExactDynamics {
    spectra: [ArrowheadEigen; 2],
    bath_len: usize,
}

impl ExactDynamics {
    pub fn new(params: &SystemParams, baths: [&DiscretizedBath; 2]) -> Result<Self> {
        if !baths[0].same_grid(baths[1]) {
            return Err(Error::GridMismatch);
        }
        let spectra = [
            build_normal_mode_matrix(params, baths[0], NormalMode::Symmetric).eigen()?,
            build_normal_mode_matrix(params, baths[0], NormalMode::Antisymmetric).eigen()?,
        ];
        Ok(Self { spectra, bath_len: baths[0].len() })
    }

    pub fn spectrum(&self, mode: NormalMode) -> &ArrowheadEigen {
        &self.spectra[mode.index()]
    }

    pub fn bath_len(&self) -> usize {
        self.bath_len
    }

    /// u₁(t), u₂(t) without the bath amplitudes.
    pub fn u(&self, t: f64) -> Result<[Complex64; 2]> {
        check_time(t)?;
        Ok(self.spectra.each_ref().map(|s| s.head_amplitude(t)))
    }

    pub fn propagator_set(&self, t: f64) -> Result<PropagatorSet> {
        check_time(t)?;
        let mut cols = self.spectra.each_ref().map(|s| s.first_column(t));
        let u = [cols[0][0], cols[1][0]];
        let v = cols.each_mut().map(|c| c.split_off(1));
        Ok(PropagatorSet { t, u, v })
    }
}

/// u_i, v_ik at time t for both normal modes.
pub fn propagator_set(
    params: &SystemParams,
    baths: [&DiscretizedBath; 2],
    t: f64,
) -> Result<PropagatorSet> {
    ExactDynamics::new(params, baths)?.propagator_set(t)
}

/// Coherent amplitudes α₁(t), α₂(t) from the initial oscillator amplitudes
/// and bath amplitudes β₁ₖ, β₂ₖ:
///
/// α₁(t) = α₁(u₁+u₂)/2 + α₂(u₁−u₂)/2 + Σ_k β₁ₖ(v₁ₖ+v₂ₖ)/2 + β₂ₖ(v₁ₖ−v₂ₖ)/2
///
/// and α₂(t) with the roles of the sums and differences exchanged.
pub fn amplitudes_to_oscillators(
    p: &PropagatorSet,
    init: &InitialAmplitudes,
    bath_amplitudes: [&[Complex64]; 2],
) -> Result<(Complex64, Complex64)> {
    let k = p.bath_len();
    for (what, len) in [
        ("v2 propagators", p.v[1].len()),
        ("bath 1 amplitudes", bath_amplitudes[0].len()),
        ("bath 2 amplitudes", bath_amplitudes[1].len()),
    ] {
        if len != k {
            return Err(Error::LengthMismatch { what, expected: k, found: len });
        }
    }
    let (sum_u, diff_u) = ((p.u[0] + p.u[1]) * 0.5, (p.u[0] - p.u[1]) * 0.5);
    let mut a1 = init.alpha1 * sum_u + init.alpha2 * diff_u;
    let mut a2 = init.alpha1 * diff_u + init.alpha2 * sum_u;
    for j in 0..k {
        let s = (p.v[0][j] + p.v[1][j]) * 0.5;
        let d = (p.v[0][j] - p.v[1][j]) * 0.5;
        let (b1, b2) = (bath_amplitudes[0][j], bath_amplitudes[1][j]);
        a1 += b1 * s + b2 * d;
        a2 += b1 * d + b2 * s;
    }
    Ok((a1, a2))
}
