//! Wigner functions and position-representation kernels.
//!
//! The covariance matrix is the source of truth: the equilibrium Wigner
//! function is `GaussianWigner` over [`equilibrium_covariance`]. The closed
//! forms [`equilibrium_wigner_paper`] and [`equilibrium_kernel`] are
//! transcribed term by term so they can be checked against that route.
//! Both closed forms assign normal mode Ω₁ the occupation at T₁ alone and Ω₂
//! the occupation at T₂, whereas the covariance averages both baths at each
//! Ω_i; they coincide only when T₁ = T₂. [`route_discrepancy`] measures the
//! gap.
//!
//! [`equilibrium_covariance`]: crate::covariance::equilibrium_covariance

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use num_complex::Complex64;
use statrs::function::erf::erfc;

use crate::bath::planck;
use crate::covariance::{equilibrium_covariance, GaussianState};
use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::quadrature::GaussHermite;

/// Exponent sum above which the closed forms switch to tanh limits.
const EXP_LIMIT: f64 = 600.0;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasePoint {
    pub x1: f64,
    pub p1: f64,
    pub x2: f64,
    pub p2: f64,
}

impl PhasePoint {
    pub fn new(x1: f64, p1: f64, x2: f64, p2: f64) -> Self {
        Self { x1, p1, x2, p2 }
    }

    pub fn to_vector(self) -> Vector4<f64> {
        Vector4::new(self.x1, self.p1, self.x2, self.p2)
    }

    pub fn from_vector(v: &Vector4<f64>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

/// Arguments of ρ(x₁′, x₂′, x₁, x₂) = ⟨x₁′, x₂′| ρ |x₁, x₂⟩.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KernelPoint {
    pub x1p: f64,
    pub x2p: f64,
    pub x1: f64,
    pub x2: f64,
}

impl KernelPoint {
    pub fn new(x1p: f64, x2p: f64, x1: f64, x2: f64) -> Self {
        Self { x1p, x2p, x1, x2 }
    }

    pub fn diagonal(x1: f64, x2: f64) -> Self {
        Self::new(x1, x2, x1, x2)
    }

    /// Primed and unprimed arguments exchanged.
    pub fn swapped(self) -> Self {
        Self::new(self.x1, self.x2, self.x1p, self.x2p)
    }
}

/// Two-mode Gaussian Wigner function, pre-factored for repeated evaluation.
#[derive(Debug, Clone)]
pub struct GaussianWigner {
    mean: Vector4<f64>,
    precision: Matrix4<f64>,
    norm: f64,
}

impl GaussianWigner {
    pub fn new(state: &GaussianState) -> Result<Self> {
        let q = *state.cov.matrix();
        let chol = q.cholesky().ok_or(Error::NotPositiveDefinite)?;
        let det = chol.l().diagonal().product().powi(2);
        if det.is_nan() || det <= 0.0 {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self {
            mean: state.mean,
            precision: chol.inverse(),
            norm: 1.0 / (4.0 * PI * PI * det.sqrt()),
        })
    }

    pub fn eval(&self, pt: PhasePoint) -> f64 {
        self.eval_vector(&pt.to_vector())
    }

    pub fn eval_vector(&self, xi: &Vector4<f64>) -> f64 {
        let d = xi - self.mean;
        self.norm * (-0.5 * d.dot(&(self.precision * d))).exp()
    }

    /// Value at the mean, 1/(4π²√det Q).
    pub fn peak(&self) -> f64 {
        self.norm
    }
}

/// W(ξ) = exp(−½(ξ − ⟨ξ⟩)ᵀ Q⁻¹ (ξ − ⟨ξ⟩)) / (4π²√det Q).
pub fn gaussian_wigner(state: &GaussianState, pt: PhasePoint) -> Result<f64> {
    Ok(GaussianWigner::new(state)?.eval(pt))
}

fn check_temperatures(t1: f64, t2: f64) -> Result<()> {
    for t in [t1, t2] {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::invalid(format!("temperature {t} must be finite and >= 0")));
        }
    }
    Ok(())
}

/// Prefactor, quadratic and cross coefficients of the closed-form
/// equilibrium Wigner function.
fn paper_coefficients(params: &SystemParams, t1: f64, t2: f64) -> (f64, f64, f64) {
    let r1 = if t1 > 0.0 { params.omega1() / t1 } else { f64::INFINITY };
    let r2 = if t2 > 0.0 { params.omega2() / t2 } else { f64::INFINITY };
    if r1 + r2 < EXP_LIMIT {
        let (e1, e2) = (r1.exp(), r2.exp());
        let den = (e1 + 1.0) * (e2 + 1.0);
        let pre = (e1 - 1.0) * (e2 - 1.0) / (PI * PI * den);
        let quad = ((r1 + r2).exp() - 1.0) / den;
        let cross = 2.0 * (e2 - e1) / den;
        (pre, quad, cross)
    } else {
        // tanh(r/2) = (e^r − 1)/(e^r + 1), → 1 as T → 0
        let (h1, h2) = ((0.5 * r1).tanh(), (0.5 * r2).tanh());
        (h1 * h2 / (PI * PI), 0.5 * (h1 + h2), h2 - h1)
    }
}

/// Closed-form equilibrium Wigner function:
///
/// W = (e^{Ω₁/T₁}−1)(e^{Ω₂/T₂}−1) / (π²(e^{Ω₁/T₁}+1)(e^{Ω₂/T₂}+1))
///     × exp(−(e^{Ω₁/T₁+Ω₂/T₂}−1)/((e^{Ω₁/T₁}+1)(e^{Ω₂/T₂}+1)) · (ωx₁² + p₁²/ω + ωx₂² + p₂²/ω)
///           + 2(e^{Ω₂/T₂}−e^{Ω₁/T₁})/((e^{Ω₁/T₁}+1)(e^{Ω₂/T₂}+1)) · (ωx₁x₂ + p₁p₂/ω))
pub fn equilibrium_wigner_paper(params: &SystemParams, t1: f64, t2: f64, pt: PhasePoint) -> Result<f64> {
    check_temperatures(t1, t2)?;
    let (pre, quad, cross) = paper_coefficients(params, t1, t2);
    let w = params.omega();
    let energy = w * (pt.x1 * pt.x1 + pt.x2 * pt.x2) + (pt.p1 * pt.p1 + pt.p2 * pt.p2) / w;
    let corr = w * pt.x1 * pt.x2 + pt.p1 * pt.p2 / w;
    Ok(pre * (-quad * energy + cross * corr).exp())
}

/// Closed-form equilibrium density matrix in position representation:
///
/// ρ = ω/(π√(coth(Ω₁/2T₁) coth(Ω₂/2T₂))) exp[
///       −(ω/4)(coth(Ω₁/T₁) + coth(Ω₂/T₂))(x₁² + x₂² + x₁′² + x₂′²)
///       + (ω/2)(1/sinh(Ω₁/T₁) + 1/sinh(Ω₂/T₂))(x₁x₁′ + x₂x₂′)
///       − (ω/2)(coth(Ω₁/T₁) − coth(Ω₂/T₂))(x₁x₂ + x₁′x₂′)
///       + (ω/2)(1/sinh(Ω₁/T₁) − 1/sinh(Ω₂/T₂))(x₁′x₂ + x₁x₂′)]
pub fn equilibrium_kernel(params: &SystemParams, t1: f64, t2: f64, kp: KernelPoint) -> Result<f64> {
    check_temperatures(t1, t2)?;
    if t1 == 0.0 || t2 == 0.0 {
        return Err(Error::ZeroTemperature);
    }
    let (th1, th2) = (params.omega1() / t1, params.omega2() / t2);
    let coth = |x: f64| 1.0 / x.tanh();
    let csch = |x: f64| 1.0 / x.sinh();
    let w = params.omega();
    let KernelPoint { x1p, x2p, x1, x2 } = kp;

    let pre = w / (PI * (coth(0.5 * th1) * coth(0.5 * th2)).sqrt());
    let exponent = -0.25 * w * (coth(th1) + coth(th2)) * ((x1 * x1 + x2 * x2) + (x1p * x1p + x2p * x2p))
        + 0.5 * w * (csch(th1) + csch(th2)) * (x1 * x1p + x2 * x2p)
        - 0.5 * w * (coth(th1) - coth(th2)) * (x1 * x2 + x1p * x2p)
        + 0.5 * w * (csch(th1) - csch(th2)) * (x1p * x2 + x1 * x2p);
    Ok(pre * exponent.exp())
}

/// Node count of the tensor-product Gauss–Hermite rule used by
/// [`wigner_to_kernel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub nodes_per_axis: usize,
}

impl QuadratureSpec {
    pub const MIN_NODES: usize = 64;
    pub const MAX_NODES: usize = 256;
    pub const MIN_COVERAGE_SIGMAS: f64 = 6.0;
    pub const TAIL_GATE: f64 = 1e-12;

    pub fn new(nodes_per_axis: usize) -> Self {
        Self { nodes_per_axis }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::new(Self::MIN_NODES)
    }
}

/// Momentum rule prepared for one state: Gauss–Hermite nodes plus the
/// conditional momentum distribution given the positions.
#[derive(Debug, Clone)]
pub struct KernelTransform {
    wigner: GaussianWigner,
    rule: GaussHermite,
    mean: Vector4<f64>,
    /// Σ_pp − Cᵀ Σ_xx⁻¹ C, Cholesky factor.
    chol: Matrix2<f64>,
    /// Cᵀ Σ_xx⁻¹, maps position offsets to conditional momentum shifts.
    gain: Matrix2<f64>,
}

impl KernelTransform {
    pub fn new(state: &GaussianState, quad: QuadratureSpec) -> Result<Self> {
        let n = quad.nodes_per_axis;
        if !(QuadratureSpec::MIN_NODES..=QuadratureSpec::MAX_NODES).contains(&n) {
            return Err(Error::InsufficientQuadrature(format!(
                "{n} nodes per axis outside [{}, {}]",
                QuadratureSpec::MIN_NODES,
                QuadratureSpec::MAX_NODES
            )));
        }
        let rule = GaussHermite::new(n)?;
        let reach = rule.max_node();
        let coverage = std::f64::consts::SQRT_2 * reach;
        // Mass of e^{−s²}/√π outside the outermost nodes, both axes.
        let tail = 2.0 * erfc(reach);
        if coverage < QuadratureSpec::MIN_COVERAGE_SIGMAS || tail > QuadratureSpec::TAIL_GATE {
            return Err(Error::InsufficientQuadrature(format!(
                "coverage {coverage:.2} sigma, tail mass {tail:.2e}"
            )));
        }

        let q = state.cov.matrix();
        let sxx = Matrix2::new(q[(0, 0)], q[(0, 2)], q[(2, 0)], q[(2, 2)]);
        let spp = Matrix2::new(q[(1, 1)], q[(1, 3)], q[(3, 1)], q[(3, 3)]);
        // rows: x₁, x₂; columns: p₁, p₂
        let cxp = Matrix2::new(q[(0, 1)], q[(0, 3)], q[(2, 1)], q[(2, 3)]);
        let sxx_inv = sxx.try_inverse().ok_or(Error::NotPositiveDefinite)?;
        let gain = cxp.transpose() * sxx_inv;
        let cond = spp - gain * cxp;
        let chol = ((cond + cond.transpose()) * 0.5)
            .cholesky()
            .ok_or(Error::NotPositiveDefinite)?
            .l();

        Ok(Self {
            wigner: GaussianWigner::new(state)?,
            rule,
            mean: state.mean,
            chol,
            gain,
        })
    }

    /// ∫ W((x₁+x₁′)/2, p₁, (x₂+x₂′)/2, p₂) e^{−ip₁(x₁−x₁′) − ip₂(x₂−x₂′)} dp₁dp₂
    pub fn eval(&self, kp: KernelPoint) -> Complex64 {
        let centre = Vector2::new(0.5 * (kp.x1 + kp.x1p), 0.5 * (kp.x2 + kp.x2p));
        let offset = Vector2::new(kp.x1 - kp.x1p, kp.x2 - kp.x2p);
        let mp = Vector2::new(self.mean[1], self.mean[3]);
        let mx = Vector2::new(self.mean[0], self.mean[2]);
        let shift = mp + self.gain * (centre - mx);
        let scale = std::f64::consts::SQRT_2 * self.chol;
        let jac = scale.determinant();

        let (x, w) = (&self.rule.nodes, &self.rule.weights);
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..x.len() {
            for b in 0..x.len() {
                let s = Vector2::new(x[a], x[b]);
                let p = shift + scale * s;
                let xi = Vector4::new(centre[0], p[0], centre[1], p[1]);
                let weight = w[a] * w[b] * (x[a] * x[a] + x[b] * x[b]).exp();
                let phase = Complex64::from_polar(1.0, -p.dot(&offset));
                acc += phase * (weight * self.wigner.eval_vector(&xi));
            }
        }
        acc * jac
    }
}

/// Inverse Weyl transform of a Gaussian Wigner function evaluated by
/// tensor-product Gauss–Hermite quadrature over both momenta.
pub fn wigner_to_kernel(state: &GaussianState, kp: KernelPoint, quad: QuadratureSpec) -> Result<Complex64> {
    Ok(KernelTransform::new(state, quad)?.eval(kp))
}

/// Comparison of the closed-form Wigner function with the covariance route.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteDiscrepancy {
    pub t1: f64,
    pub t2: f64,
    pub max_abs: f64,
    pub max_rel: f64,
    pub worst_point: PhasePoint,
    /// Normal-mode occupations (Ω₁, Ω₂) implied by the covariance route.
    pub covariance_occupations: [f64; 2],
    /// Normal-mode occupations (Ω₁, Ω₂) implied by the closed form.
    pub closed_form_occupations: [f64; 2],
}

pub fn route_discrepancy(
    params: &SystemParams,
    t1: f64,
    t2: f64,
    points: &[PhasePoint],
) -> Result<RouteDiscrepancy> {
    check_temperatures(t1, t2)?;
    let (consts, cov) = equilibrium_covariance(params, t1, t2)?;
    let wigner = GaussianWigner::new(&GaussianState::centered(cov))?;
    let mut out = RouteDiscrepancy {
        t1,
        t2,
        max_abs: 0.0,
        max_rel: 0.0,
        worst_point: PhasePoint::default(),
        covariance_occupations: consts.occupations.map(|row| 0.5 * (row[0] + row[1])),
        closed_form_occupations: [planck(params.omega1(), t1), planck(params.omega2(), t2)],
    };
    for &pt in points {
        let a = wigner.eval(pt);
        let b = equilibrium_wigner_paper(params, t1, t2, pt)?;
        let diff = (a - b).abs();
        if diff > out.max_abs {
            out.max_abs = diff;
            out.worst_point = pt;
        }
        out.max_rel = out.max_rel.max(diff / a.abs().max(f64::MIN_POSITIVE));
    }
    Ok(out)
}
