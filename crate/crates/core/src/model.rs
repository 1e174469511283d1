//! Shared domain types: oscillator parameters, initial amplitudes, propagator
//! bundles, and scenario validation.
//!
//! Units throughout are ħ = k_B = 1. Quadratures of each oscillator are
//! x = (a + a†)/√(2ω) and p = √ω (a − a†)/(i√2), so the vacuum covariance is
//! diag(1/(2ω), ω/2, 1/(2ω), ω/2) in (x₁, p₁, x₂, p₂) ordering.

use std::fmt;

use num_complex::Complex64;

use crate::bath::{damping_and_shift, BathSpec};
use crate::error::{Error, Result};

/// κ/Ω above which the Weisskopf–Wigner pole approximation is flagged.
pub const WW_STRAIN_RATIO: f64 = 0.1;

/// Frequency ω of each oscillator, the inter-oscillator coupling λ, and the
/// derived normal-mode frequencies Ω₁ = ω + λ and Ω₂ = ω − λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    omega: f64,
    lambda: f64,
    omega1: f64,
    omega2: f64,
}

impl SystemParams {
    pub fn new(omega: f64, lambda: f64) -> Result<Self> {
        if !omega.is_finite() || !lambda.is_finite() {
            return Err(Error::NonFinite("system parameters"));
        }
        if omega <= 0.0 {
            return Err(Error::invalid(format!("omega = {omega} must be > 0")));
        }
        if lambda.abs() >= omega {
            return Err(Error::invalid(format!(
                "|lambda| = {} must be < omega = {omega} (normal mode Omega2 = {} not positive)",
                lambda.abs(),
                omega - lambda.abs()
            )));
        }
        Ok(Self {
            omega,
            lambda,
            omega1: omega + lambda,
            omega2: omega - lambda,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Symmetric normal-mode frequency Ω₁ = ω + λ.
    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    /// Antisymmetric normal-mode frequency Ω₂ = ω − λ.
    pub fn omega2(&self) -> f64 {
        self.omega2
    }

    pub fn normal_frequency(&self, mode: NormalMode) -> f64 {
        match mode {
            NormalMode::Symmetric => self.omega1,
            NormalMode::Antisymmetric => self.omega2,
        }
    }
}

/// The two normal modes (a₁ ± a₂)/√2 of the coupled pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalMode {
    /// Frequency Ω₁ = ω + λ.
    Symmetric,
    /// Frequency Ω₂ = ω − λ.
    Antisymmetric,
}

impl NormalMode {
    pub const BOTH: [NormalMode; 2] = [NormalMode::Symmetric, NormalMode::Antisymmetric];

    /// 0 for Ω₁, 1 for Ω₂.
    pub fn index(self) -> usize {
        match self {
            NormalMode::Symmetric => 0,
            NormalMode::Antisymmetric => 1,
        }
    }
}

/// Coherent amplitudes of the two oscillators at t = 0.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InitialAmplitudes {
    pub alpha1: Complex64,
    pub alpha2: Complex64,
}

impl InitialAmplitudes {
    pub fn new(alpha1: Complex64, alpha2: Complex64) -> Result<Self> {
        if !(alpha1.is_finite() && alpha2.is_finite()) {
            return Err(Error::NonFinite("initial amplitudes"));
        }
        Ok(Self { alpha1, alpha2 })
    }
}

/// Amplitude propagators u_i(t), v_ik(t) of both normal modes at one time.
///
/// `u[0]`, `v[0]` belong to Ω₁ and `u[1]`, `v[1]` to Ω₂. Both `v` vectors run
/// over the shared bath grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorSet {
    pub t: f64,
    pub u: [Complex64; 2],
    pub v: [Vec<Complex64>; 2],
}

impl PropagatorSet {
    pub fn bath_len(&self) -> usize {
        self.v[0].len()
    }

    /// |u_i|² + Σ_k |v_ik|², one for each normal mode. Equal to 1 for exact
    /// dynamics.
    pub fn norms(&self) -> [f64; 2] {
        [0, 1].map(|i| self.u[i].norm_sqr() + self.v[i].iter().map(|c| c.norm_sqr()).sum::<f64>())
    }

    /// 1 − |u_i|² − Σ_k |v_ik|².
    pub fn unitarity_defects(&self) -> [f64; 2] {
        self.norms().map(|n| 1.0 - n)
    }
}

/// Raw flat-bath description, as read from a config before validation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatBathInput {
    pub temperature: f64,
    pub j0: f64,
    pub omega_min: f64,
    pub omega_max: f64,
}

/// A precondition violated by a scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonPositiveOmega(f64),
    NonPositiveNormalMode { mode: NormalMode, frequency: f64 },
    NegativeTemperature { bath: usize, temperature: f64 },
    NegativePlateau { bath: usize, j0: f64 },
    BadSupport { bath: usize, omega_min: f64, omega_max: f64 },
    OutsideSupport {
        bath: usize,
        mode: NormalMode,
        frequency: f64,
        omega_min: f64,
        omega_max: f64,
    },
    AsymmetricBaths,
    NonFinite,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositiveOmega(w) => write!(f, "omega = {w} must be > 0"),
            Violation::NonPositiveNormalMode { mode, frequency } => {
                let n = mode.index() + 1;
                write!(f, "normal-mode frequency Omega{n} = {frequency} must be > 0")
            }
            Violation::NegativeTemperature { bath, temperature } => {
                write!(f, "bath{bath} temperature {temperature} is negative")
            }
            Violation::NegativePlateau { bath, j0 } => write!(f, "bath{bath} J0 = {j0} is negative"),
            Violation::BadSupport { bath, omega_min, omega_max } => write!(
                f,
                "bath{bath} support [{omega_min}, {omega_max}] needs 0 < omega_min < omega_max"
            ),
            Violation::OutsideSupport { bath, mode, frequency, omega_min, omega_max } => write!(
                f,
                "Omega{} = {frequency} outside bath{bath} support ({omega_min}, {omega_max})",
                mode.index() + 1
            ),
            Violation::AsymmetricBaths => {
                write!(f, "both baths must share J0 and support (symmetric coupling)")
            }
            Violation::NonFinite => write!(f, "non-finite scenario parameter"),
        }
    }
}

/// Every violated precondition of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioError {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid scenario: ")?;
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ScenarioError {}

/// Non-fatal diagnostics attached to a valid scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// κ_i/Ω_i above [`WW_STRAIN_RATIO`].
    StrainedPoleApproximation { mode: NormalMode, ratio: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::StrainedPoleApproximation { mode, ratio } => write!(
                f,
                "kappa/Omega{} = {ratio:.3} exceeds {WW_STRAIN_RATIO}: Weisskopf-Wigner regime strained",
                mode.index() + 1
            ),
        }
    }
}

/// A scenario whose preconditions all hold.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub params: SystemParams,
    pub baths: [BathSpec; 2],
    pub warnings: Vec<Warning>,
}

/// Check every precondition at once and collect all violations.
pub fn validate_scenario(
    omega: f64,
    lambda: f64,
    baths: [FlatBathInput; 2],
) -> std::result::Result<Scenario, ScenarioError> {
    let mut violations = Vec::new();
    let mut values = vec![omega, lambda];
    for b in &baths {
        values.extend([b.temperature, b.j0, b.omega_min, b.omega_max]);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(ScenarioError { violations: vec![Violation::NonFinite] });
    }

    if omega <= 0.0 {
        violations.push(Violation::NonPositiveOmega(omega));
    }
    let normal = [omega + lambda, omega - lambda];
    for mode in NormalMode::BOTH {
        let frequency = normal[mode.index()];
        if frequency <= 0.0 {
            violations.push(Violation::NonPositiveNormalMode { mode, frequency });
        }
    }

    for (i, b) in baths.iter().enumerate() {
        let bath = i + 1;
        if b.temperature < 0.0 {
            violations.push(Violation::NegativeTemperature { bath, temperature: b.temperature });
        }
        if b.j0 < 0.0 {
            violations.push(Violation::NegativePlateau { bath, j0: b.j0 });
        }
        if !(b.omega_min > 0.0 && b.omega_min < b.omega_max) {
            violations.push(Violation::BadSupport {
                bath,
                omega_min: b.omega_min,
                omega_max: b.omega_max,
            });
            continue;
        }
        for mode in NormalMode::BOTH {
            let frequency = normal[mode.index()];
            if !(frequency > b.omega_min && frequency < b.omega_max) {
                violations.push(Violation::OutsideSupport {
                    bath,
                    mode,
                    frequency,
                    omega_min: b.omega_min,
                    omega_max: b.omega_max,
                });
            }
        }
    }
    let (b1, b2) = (&baths[0], &baths[1]);
    if b1.j0 != b2.j0 || b1.omega_min != b2.omega_min || b1.omega_max != b2.omega_max {
        violations.push(Violation::AsymmetricBaths);
    }

    if !violations.is_empty() {
        return Err(ScenarioError { violations });
    }

    // All checks above guarantee these constructors succeed.
    let params = SystemParams::new(omega, lambda).map_err(|_| ScenarioError {
        violations: vec![Violation::NonFinite],
    })?;
    let specs = baths.map(|b| BathSpec::flat(b.temperature, b.j0, b.omega_min, b.omega_max));
    let [s1, s2] = specs;
    let baths = match (s1, s2) {
        (Ok(a), Ok(b)) => [a, b],
        _ => return Err(ScenarioError { violations: vec![Violation::NonFinite] }),
    };

    let mut warnings = Vec::new();
    for mode in NormalMode::BOTH {
        let big = params.normal_frequency(mode);
        if let Ok(ds) = damping_and_shift(&baths[0], big) {
            let ratio = ds.kappa / big;
            if ratio > WW_STRAIN_RATIO {
                warnings.push(Warning::StrainedPoleApproximation { mode, ratio });
            }
        }
    }

    Ok(Scenario { params, baths, warnings })
}
