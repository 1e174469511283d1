//! Thermal baths: spectral densities, their discretization into finite mode
//! sets, Planck occupations, and the damping constants and frequency shifts
//! they induce on a normal mode.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Spectral density J(ω) = |λ(ω)|² ρ(ω) of a bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralDensity {
    /// J(ω) = j0 on [omega_min, omega_max], zero outside.
    Flat { j0: f64, omega_min: f64, omega_max: f64 },
}

impl SpectralDensity {
    pub fn value(&self, w: f64) -> f64 {
        match *self {
            SpectralDensity::Flat { j0, omega_min, omega_max } => {
                if (omega_min..=omega_max).contains(&w) {
                    j0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match *self {
            SpectralDensity::Flat { omega_min, omega_max, .. } => (omega_min, omega_max),
        }
    }
}

/// A bath at temperature T with a continuous spectral density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    temperature: f64,
    spectral: SpectralDensity,
}

impl BathSpec {
    pub fn flat(temperature: f64, j0: f64, omega_min: f64, omega_max: f64) -> Result<Self> {
        if ![temperature, j0, omega_min, omega_max].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("bath specification"));
        }
        if temperature < 0.0 {
            return Err(Error::invalid(format!("temperature {temperature} is negative")));
        }
        if j0 < 0.0 {
            return Err(Error::invalid(format!("J0 = {j0} is negative")));
        }
        if !(omega_min > 0.0 && omega_min < omega_max) {
            return Err(Error::invalid(format!(
                "support [{omega_min}, {omega_max}] needs 0 < omega_min < omega_max"
            )));
        }
        Ok(Self {
            temperature,
            spectral: SpectralDensity::Flat { j0, omega_min, omega_max },
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn spectral(&self) -> &SpectralDensity {
        &self.spectral
    }

    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        let SpectralDensity::Flat { j0, omega_min, omega_max } = self.spectral;
        Self::flat(temperature, j0, omega_min, omega_max)
    }
}

/// One discrete bath oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathMode {
    pub omega: f64,
    /// Real, non-negative coupling amplitude λ_k.
    pub coupling: f64,
}

/// A finite set of bath oscillators at one temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedBath {
    modes: Vec<BathMode>,
    temperature: f64,
}

impl DiscretizedBath {
    /// Frequencies must be positive and strictly increasing, couplings
    /// non-negative.
    pub fn new(modes: Vec<BathMode>, temperature: f64) -> Result<Self> {
        if !temperature.is_finite() || temperature < 0.0 {
            return Err(Error::invalid(format!("temperature {temperature} must be finite and >= 0")));
        }
        for (k, m) in modes.iter().enumerate() {
            if !(m.omega.is_finite() && m.coupling.is_finite()) {
                return Err(Error::NonFinite("bath mode"));
            }
            if m.omega <= 0.0 {
                return Err(Error::invalid(format!("bath mode {k} has frequency {} <= 0", m.omega)));
            }
            if m.coupling < 0.0 {
                return Err(Error::invalid(format!("bath mode {k} has negative coupling")));
            }
            if k > 0 && m.omega <= modes[k - 1].omega {
                return Err(Error::invalid("bath frequencies must be strictly increasing"));
            }
        }
        Ok(Self { modes, temperature })
    }

    pub fn modes(&self) -> &[BathMode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.omega).collect()
    }

    pub fn couplings(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.coupling).collect()
    }

    /// Planck occupation of every mode at the bath temperature.
    pub fn occupations(&self) -> Vec<f64> {
        self.modes
            .iter()
            .map(|m| planck(m.omega, self.temperature))
            .collect()
    }

    /// True when both baths have identical frequencies and couplings.
    pub fn same_grid(&self, other: &DiscretizedBath) -> bool {
        self.modes == other.modes
    }
}

/// Damping constant κ and frequency shift δΩ of a normal mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingShift {
    pub kappa: f64,
    pub delta_omega: f64,
}

/// Mean thermal occupation 1/(e^{ω/T} − 1); exactly zero at T = 0.
pub fn planck_occupation(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega.is_finite() && temperature.is_finite()) {
        return Err(Error::NonFinite("planck_occupation"));
    }
    if omega <= 0.0 {
        return Err(Error::invalid(format!("frequency {omega} must be > 0")));
    }
    if temperature < 0.0 {
        return Err(Error::invalid(format!("temperature {temperature} must be >= 0")));
    }
    Ok(planck(omega, temperature))
}

/// Unchecked occupation for validated inputs.
pub(crate) fn planck(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        0.0
    } else {
        1.0 / (omega / temperature).exp_m1()
    }
}

/// Midpoint grid of `k` modes over the support, λ_k = √(J(ω_k)·Δ).
pub fn discretize_bath(spec: &BathSpec, k: usize) -> Result<DiscretizedBath> {
    if k == 0 {
        return Err(Error::invalid("bath needs at least one mode"));
    }
    let (lo, hi) = spec.spectral.support();
    let delta = (hi - lo) / k as f64;
    let modes = (0..k)
        .map(|j| {
            let omega = lo + (j as f64 + 0.5) * delta;
            BathMode {
                omega,
                coupling: (spec.spectral.value(omega) * delta).sqrt(),
            }
        })
        .collect();
    DiscretizedBath::new(modes, spec.temperature)
}

/// Continuum damping and shift of a mode at `big_omega`:
/// κ = π J(Ω), δΩ = PV ∫ J(ω')/(Ω − ω') dω'.
pub fn damping_and_shift(spec: &BathSpec, big_omega: f64) -> Result<DampingShift> {
    let (lo, hi) = spec.spectral.support();
    if !(big_omega > lo && big_omega < hi) {
        return Err(Error::invalid(format!(
            "frequency {big_omega} must lie strictly inside the bath support ({lo}, {hi})"
        )));
    }
    match spec.spectral {
        SpectralDensity::Flat { j0, omega_min, omega_max } => Ok(DampingShift {
            kappa: PI * j0,
            delta_omega: j0 * ((big_omega - omega_min) / (omega_max - big_omega)).ln(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec(j0: f64, lo: f64, hi: f64) -> BathSpec {
        BathSpec::flat(1.0, j0, lo, hi).unwrap()
    }

    #[test]
    fn planck_limits() {
        assert_eq!(planck_occupation(1.0, 0.0).unwrap(), 0.0);
        for t in [0.1, 1.0, 7.5] {
            assert_relative_eq!(planck_occupation(t * 2f64.ln(), t).unwrap(), 1.0, max_relative = 1e-14);
        }
        // 1/(e − 1), 40-digit mpmath evaluation
        assert_relative_eq!(
            planck_occupation(1.0, 1.0).unwrap(),
            0.581_976_706_869_326_4,
            max_relative = 1e-15
        );
        assert!(planck_occupation(0.0, 1.0).is_err());
        assert!(planck_occupation(-1.0, 1.0).is_err());
        assert!(planck_occupation(1.0, -0.5).is_err());
    }

    #[test]
    fn planck_monotone_on_grid() {
        let ws: Vec<f64> = (1..40).map(|i| 0.1 * i as f64).collect();
        let ts: Vec<f64> = (0..40).map(|i| 0.15 * i as f64).collect();
        for w in &ws {
            for pair in ts.windows(2) {
                assert!(planck(*w, pair[1]) >= planck(*w, pair[0]));
            }
        }
        for t in ts.iter().skip(1) {
            for pair in ws.windows(2) {
                assert!(planck(pair[1], *t) < planck(pair[0], *t));
            }
        }
    }

    #[test]
    fn midpoint_grid() {
        let b = discretize_bath(&BathSpec::flat(0.0, 0.3, 1e-9, 2.0).unwrap(), 2).unwrap();
        assert_relative_eq!(b.modes()[0].omega, 0.5, epsilon = 1e-9);
        assert_relative_eq!(b.modes()[1].omega, 1.5, epsilon = 1e-9);
        for m in b.modes() {
            assert_relative_eq!(m.coupling, 0.3f64.sqrt(), max_relative = 1e-8);
        }
        assert!(discretize_bath(&spec(0.1, 0.2, 3.0), 0).is_err());
    }

    #[test]
    fn flat_couplings_sum_to_plateau_times_width() {
        for k in [1, 7, 100, 4000] {
            let b = discretize_bath(&spec(0.02, 0.2, 3.0), k).unwrap();
            let total: f64 = b.couplings().iter().map(|c| c * c).sum();
            assert_relative_eq!(total, 0.02 * 2.8, max_relative = 1e-12);
        }
    }

    #[test]
    fn centered_window_has_no_shift() {
        let w = 0.7;
        let omega = 1.3;
        let ds = damping_and_shift(&spec(0.05, omega - w, omega + w), omega).unwrap();
        assert!(ds.delta_omega.abs() < 1e-15);
        let ds = damping_and_shift(&spec(0.01 / PI, 0.2, 3.0), 1.1).unwrap();
        assert_relative_eq!(ds.kappa, 0.01, max_relative = 1e-15);
    }

    #[test]
    fn flat_kappa_independent_of_frequency() {
        let s = spec(0.004, 0.2, 3.0);
        let k0 = damping_and_shift(&s, 0.5).unwrap().kappa;
        for w in [0.3, 1.0, 2.2, 2.9] {
            assert_eq!(damping_and_shift(&s, w).unwrap().kappa, k0);
        }
    }

    #[test]
    fn shift_rejects_frequencies_off_support() {
        let s = spec(0.004, 0.2, 3.0);
        for w in [0.2, 3.0, 0.1, 4.0] {
            assert!(damping_and_shift(&s, w).is_err());
        }
    }

    #[test]
    fn discretized_bath_invariants_checked() {
        let m = |omega, coupling| BathMode { omega, coupling };
        assert!(DiscretizedBath::new(vec![m(1.0, 0.1), m(1.0, 0.1)], 1.0).is_err());
        assert!(DiscretizedBath::new(vec![m(1.0, -0.1)], 1.0).is_err());
        assert!(DiscretizedBath::new(vec![m(-1.0, 0.1)], 1.0).is_err());
        assert!(DiscretizedBath::new(vec![m(1.0, 0.1)], -1.0).is_err());
        assert!(DiscretizedBath::new(vec![], 0.0).unwrap().is_empty());
    }
}
