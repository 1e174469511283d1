//! Two coupled harmonic oscillators, each attached to its own bosonic bath.
//!
//! The crate propagates the single-particle amplitudes of the normal modes
//! either exactly (on a discretized bath) or in the Weisskopf–Wigner pole
//! approximation, builds the reduced two-oscillator covariance matrix from
//! them and evaluates Gaussian Wigner functions and density-matrix kernels.
//!
//! ```
//! use twobath::{discretize_bath, BathSpec, ExactDynamics, SystemParams};
//!
//! let params = SystemParams::new(1.0, 0.1).unwrap();
//! let spec = BathSpec::flat(0.0, 0.01 / std::f64::consts::PI, 0.2, 3.0).unwrap();
//! let bath = discretize_bath(&spec, 200).unwrap();
//! let dynamics = ExactDynamics::new(&params, [&bath, &bath]).unwrap();
//! let set = dynamics.propagator_set(10.0).unwrap();
//! assert!(set.unitarity_defects().iter().all(|d| d.abs() < 1e-10));
//! ```

pub mod arrowhead;
pub mod bath;
pub mod covariance;
pub mod error;
pub mod exact;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod wigner;
pub mod ww;

pub use bath::{
    damping_and_shift, discretize_bath, planck_occupation, BathMode, BathSpec, DampingShift, DiscretizedBath,
    SpectralDensity,
};
pub use covariance::{
    covariance_from_modes, equilibrium_covariance, physicality, purity, simon_separability, CovarianceMatrix,
    EquilibriumConstants, GaussianState, Quadrature, SeparabilityVerdict, Verdict,
};
pub use error::{Error, Result};
pub use exact::{amplitudes_to_oscillators, ExactDynamics};
pub use model::{
    validate_scenario, FlatBathInput, InitialAmplitudes, NormalMode, PropagatorSet, Scenario, ScenarioError,
    SystemParams, Violation, Warning,
};
pub use wigner::{
    equilibrium_kernel, equilibrium_wigner_paper, gaussian_wigner, wigner_to_kernel, GaussianWigner, KernelPoint,
    KernelTransform, PhasePoint, QuadratureSpec,
};
pub use ww::{ww_propagator_set, WwDynamics};
