//! Weisskopf–Wigner propagators.
//!
//! u_i(t) = exp[−κ_i t − i(Ω_i + δΩ_i)t]
//! v_ik(t) = −iλ_k / (κ_i + i(Ω_i + δΩ_i − ω_k)) · (e^{−iω_k t} − u_i(t))
//!
//! κ_i and δΩ_i always come from the continuum closed form of the bath's
//! spectral density, never from a discrete sum.

use num_complex::Complex64;

use crate::bath::{damping_and_shift, BathSpec, DampingShift, DiscretizedBath};
use crate::error::{Error, Result};
use crate::model::{NormalMode, PropagatorSet, SystemParams};

pub fn ww_u(mode: NormalMode, t: f64, params: &SystemParams, damping: &DampingShift) -> Complex64 {
    let big = params.normal_frequency(mode) + damping.delta_omega;
    Complex64::new(-damping.kappa * t, -big * t).exp()
}

pub fn ww_v(
    mode: NormalMode,
    k: usize,
    t: f64,
    params: &SystemParams,
    bath: &DiscretizedBath,
    damping: &DampingShift,
) -> Result<Complex64> {
    let m = bath.modes().get(k).ok_or(Error::LengthMismatch {
        what: "bath mode index",
        expected: bath.len(),
        found: k,
    })?;
    Ok(v_closed_form(params.normal_frequency(mode), damping, m.omega, m.coupling, t))
}

fn v_closed_form(big: f64, damping: &DampingShift, omega_k: f64, lambda_k: f64, t: f64) -> Complex64 {
    let shifted = big + damping.delta_omega;
    let den = Complex64::new(damping.kappa, shifted - omega_k);
    let bracket = Complex64::from_polar(1.0, -omega_k * t) - Complex64::new(-damping.kappa * t, -shifted * t).exp();
    Complex64::new(0.0, -lambda_k) / den * bracket
}

/// Weisskopf–Wigner propagators on a discretized bath.
#[derive(Debug, Clone)]
pub struct WwDynamics {
    params: SystemParams,
    damping: [DampingShift; 2],
    bath: DiscretizedBath,
}

impl WwDynamics {
    /// `spec` supplies κ_i and δΩ_i; `bath` supplies the grid on which v_ik
    /// is sampled.
    pub fn new(params: &SystemParams, spec: &BathSpec, bath: &DiscretizedBath) -> Result<Self> {
        let damping = [
            damping_and_shift(spec, params.omega1())?,
            damping_and_shift(spec, params.omega2())?,
        ];
        Ok(Self { params: *params, damping, bath: bath.clone() })
    }

    pub fn damping(&self, mode: NormalMode) -> &DampingShift {
        &self.damping[mode.index()]
    }

    pub fn propagator_set(&self, t: f64) -> Result<PropagatorSet> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::invalid(format!("time {t} must be finite and >= 0")));
        }
        let per_mode = |mode: NormalMode| {
            let d = &self.damping[mode.index()];
            let big = self.params.normal_frequency(mode);
            let v = self
                .bath
                .modes()
                .iter()
                .map(|m| v_closed_form(big, d, m.omega, m.coupling, t))
                .collect::<Vec<_>>();
            (ww_u(mode, t, &self.params, d), v)
        };
        let (u1, v1) = per_mode(NormalMode::Symmetric);
        let (u2, v2) = per_mode(NormalMode::Antisymmetric);
        Ok(PropagatorSet { t, u: [u1, u2], v: [v1, v2] })
    }
}

/// Both baths must share the spectral density and grid.
pub fn ww_propagator_set(
    params: &SystemParams,
    specs: [&BathSpec; 2],
    baths: [&DiscretizedBath; 2],
    t: f64,
) -> Result<PropagatorSet> {
    if specs[0].spectral() != specs[1].spectral() || !baths[0].same_grid(baths[1]) {
        return Err(Error::GridMismatch);
    }
    WwDynamics::new(params, specs[0], baths[0])?.propagator_set(t)
}
