//! Covariance matrices of the two-oscillator state, the intermediate
//! equilibrium, and the separability and physicality checks.
//!
//! Matrices are 4×4 in (x₁, p₁, x₂, p₂) ordering with symmetrized second
//! moments.

use nalgebra::{Matrix4, SMatrix, Vector4};

use crate::bath::planck;
use crate::error::{Error, Result};
use crate::model::{PropagatorSet, SystemParams};

/// Minimum eigenvalue of q + (i/2)J accepted as physical.
pub const PHYSICALITY_TOL: f64 = -1e-10;

const SYMMETRY_TOL: f64 = 1e-12;

/// Phase-space coordinate labels in matrix order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    X1 = 0,
    P1 = 1,
    X2 = 2,
    P2 = 3,
}

/// Symplectic form, block-diagonal [[0, 1], [−1, 0]] per oscillator.
pub fn symplectic_form() -> Matrix4<f64> {
    let mut j = Matrix4::zeros();
    j[(0, 1)] = 1.0;
    j[(1, 0)] = -1.0;
    j[(2, 3)] = 1.0;
    j[(3, 2)] = -1.0;
    j
}

/// A symmetric covariance matrix satisfying the uncertainty relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(Matrix4<f64>);

impl CovarianceMatrix {
    pub fn new(q: Matrix4<f64>) -> Result<Self> {
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("covariance matrix"));
        }
        let scale = q.amax().max(f64::MIN_POSITIVE);
        let asym = (q - q.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::NotSymmetric(asym));
        }
        let q = (q + q.transpose()) * 0.5;
        let min = uncertainty_min_eigenvalue(&q);
        if min < PHYSICALITY_TOL {
            return Err(Error::Unphysical(min));
        }
        Ok(Self(q))
    }

    pub fn vacuum(omega: f64) -> Self {
        Self(Matrix4::from_diagonal(&Vector4::new(
            0.5 / omega,
            0.5 * omega,
            0.5 / omega,
            0.5 * omega,
        )))
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn get(&self, a: Quadrature, b: Quadrature) -> f64 {
        self.0[(a as usize, b as usize)]
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }
}

/// Covariance plus first moments (⟨x₁⟩, ⟨p₁⟩, ⟨x₂⟩, ⟨p₂⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub cov: CovarianceMatrix,
    pub mean: Vector4<f64>,
}

impl GaussianState {
    pub fn centered(cov: CovarianceMatrix) -> Self {
        Self { cov, mean: Vector4::zeros() }
    }
}

/// First moments from coherent amplitudes α₁, α₂ at frequency ω.
pub fn mean_from_amplitudes(alpha1: num_complex::Complex64, alpha2: num_complex::Complex64, omega: f64) -> Vector4<f64> {
    let (sx, sp) = ((2.0 / omega).sqrt(), (2.0 * omega).sqrt());
    Vector4::new(sx * alpha1.re, sp * alpha1.im, sx * alpha2.re, sp * alpha2.im)
}

/// Smallest eigenvalue of the Hermitian matrix q + (i/2)J.
///
/// Uses the real 8×8 embedding [[q, −J/2], [J/2, q]], whose spectrum is that
/// of q + (i/2)J with every eigenvalue doubled.
pub fn uncertainty_min_eigenvalue(q: &Matrix4<f64>) -> f64 {
    let s = symplectic_form() * 0.5;
    let mut m = SMatrix::<f64, 8, 8>::zeros();
    m.fixed_view_mut::<4, 4>(0, 0).copy_from(q);
    m.fixed_view_mut::<4, 4>(4, 4).copy_from(q);
    m.fixed_view_mut::<4, 4>(0, 4).copy_from(&(-s));
    m.fixed_view_mut::<4, 4>(4, 0).copy_from(&s);
    m.symmetric_eigenvalues().min()
}

pub fn physicality(q: &Matrix4<f64>) -> bool {
    uncertainty_min_eigenvalue(q) >= PHYSICALITY_TOL
}

/// Tr ρ² = 1/(4√det q).
pub fn purity(q: &Matrix4<f64>) -> f64 {
    0.25 / q.determinant().sqrt()
}

/// Covariance at time t from the propagators and the bath occupations
/// ⟨n₁ₖ⟩, ⟨n₂ₖ⟩:
///
/// ωQ_{x₁x₁} = Q_{p₁p₁}/ω = ½ + ¼ Σ ⟨n₁ₖ⟩|v₁ₖ+v₂ₖ|² + ⟨n₂ₖ⟩|v₁ₖ−v₂ₖ|²
/// ωQ_{x₂x₂} = Q_{p₂p₂}/ω = ½ + ¼ Σ ⟨n₁ₖ⟩|v₁ₖ−v₂ₖ|² + ⟨n₂ₖ⟩|v₁ₖ+v₂ₖ|²
/// ωQ_{x₁x₂} = Q_{p₁p₂}/ω = ¼ Σ (|v₁ₖ|² − |v₂ₖ|²)(⟨n₁ₖ⟩ + ⟨n₂ₖ⟩)
/// Q_{x₁p₂} = −Q_{x₂p₁} = (1/4i) Σ (v₁ₖv₂ₖ* − v₁ₖ*v₂ₖ)(⟨n₁ₖ⟩ − ⟨n₂ₖ⟩)
pub fn covariance_from_modes(
    p: &PropagatorSet,
    occ1: &[f64],
    occ2: &[f64],
    omega: f64,
) -> Result<CovarianceMatrix> {
    let k = p.bath_len();
    for (what, len) in [("v2 propagators", p.v[1].len()), ("bath 1 occupations", occ1.len()), ("bath 2 occupations", occ2.len())] {
        if len != k {
            return Err(Error::LengthMismatch { what, expected: k, found: len });
        }
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::invalid(format!("omega = {omega} must be finite and > 0")));
    }

    let (mut s11, mut s22, mut s12, mut a12) = (0.0, 0.0, 0.0, 0.0);
    for j in 0..k {
        let (v1, v2) = (p.v[0][j], p.v[1][j]);
        let (n1, n2) = (occ1[j], occ2[j]);
        let plus = (v1 + v2).norm_sqr();
        let minus = (v1 - v2).norm_sqr();
        s11 += n1 * plus + n2 * minus;
        s22 += n1 * minus + n2 * plus;
        s12 += (v1.norm_sqr() - v2.norm_sqr()) * (n1 + n2);
        // (v₁v₂* − v₁*v₂)/i = 2 Im(v₁v₂*)
        a12 += 2.0 * (v1 * v2.conj()).im * (n1 - n2);
    }
    let d1 = 0.5 + 0.25 * s11;
    let d2 = 0.5 + 0.25 * s22;
    let c12 = 0.25 * s12;
    let xp = 0.25 * a12;
    if ![d1, d2, c12, xp].iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("covariance_from_modes"));
    }

    let w = omega;
    #[rustfmt::skip]
    let q = Matrix4::new(
        d1 / w,  0.0,     c12 / w, xp,
        0.0,     d1 * w,  -xp,     c12 * w,
        c12 / w, -xp,     d2 / w,  0.0,
        xp,      c12 * w, 0.0,     d2 * w,
    );
    CovarianceMatrix::new(q)
}

/// A and B of the intermediate equilibrium with the four occupations they
/// aggregate. `occupations[i][j]` is ⟨n⟩ at frequency Ω_{i+1} and
/// temperature T_{j+1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumConstants {
    pub a_const: f64,
    pub b_const: f64,
    pub occupations: [[f64; 2]; 2],
}

/// A = ½ + ¼(n₁^{Ω₁} + n₂^{Ω₁} + n₁^{Ω₂} + n₂^{Ω₂}),
/// B = ¼(n₁^{Ω₁} + n₂^{Ω₁} − n₁^{Ω₂} − n₂^{Ω₂}),
/// with Q(∞) carrying A/ω, ωA on the diagonal and B/ω, ωB on the x₁x₂ and
/// p₁p₂ entries.
pub fn equilibrium_covariance(
    params: &SystemParams,
    t1: f64,
    t2: f64,
) -> Result<(EquilibriumConstants, CovarianceMatrix)> {
    for t in [t1, t2] {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::invalid(format!("temperature {t} must be finite and >= 0")));
        }
    }
    let occupations = [params.omega1(), params.omega2()].map(|big| [planck(big, t1), planck(big, t2)]);
    let upper = occupations[0][0] + occupations[0][1];
    let lower = occupations[1][0] + occupations[1][1];
    let a = 0.5 + 0.25 * (upper + lower);
    let b = 0.25 * (upper - lower);
    let w = params.omega();
    #[rustfmt::skip]
    let q = Matrix4::new(
        a / w, 0.0,   b / w, 0.0,
        0.0,   a * w, 0.0,   b * w,
        b / w, 0.0,   a / w, 0.0,
        0.0,   b * w, 0.0,   a * w,
    );
    Ok((
        EquilibriumConstants { a_const: a, b_const: b, occupations },
        CovarianceMatrix::new(q)?,
    ))
}

/// Outcome of the determinant test on the inter-oscillator block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Separable,
    /// A negative determinant does not imply entanglement here.
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparabilityVerdict {
    /// det [[Q_{x₁x₂}, Q_{x₁p₂}], [Q_{x₂p₁}, Q_{p₁p₂}]]
    pub determinant: f64,
    pub verdict: Verdict,
}

impl SeparabilityVerdict {
    pub fn separable_by_simon(&self) -> bool {
        self.verdict == Verdict::Separable
    }
}

/// Sufficient separability test: a non-negative determinant of the
/// inter-oscillator covariance block implies a separable Gaussian state.
pub fn simon_separability(q: &CovarianceMatrix) -> SeparabilityVerdict {
    use Quadrature::*;
    let determinant = q.get(X1, X2) * q.get(P1, P2) - q.get(X1, P2) * q.get(X2, P1);
    let verdict = if determinant >= 0.0 { Verdict::Separable } else { Verdict::Undecided };
    SeparabilityVerdict { determinant, verdict }
}
