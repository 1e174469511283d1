//! Independent references for the reduced dynamics and the Gibbs limit.
//!
//! - [`full_gaussian_propagate`] evolves the covariance of every oscillator
//!   (both A modes and all bath modes) with the symplectic matrix of the
//!   full quadratic Hamiltonian, obtained by a generic matrix exponential.
//! - [`fock_evolve`] builds the Hamiltonian in a number basis for one bath
//!   mode per bath and evolves the mixed initial state exactly.
//! - [`gibbs_kernel`] assembles the thermal kernel of the coupled pair from
//!   single-oscillator thermal kernels in normal coordinates.
//!
//! These are correctness references at small sizes, not production paths.

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

use crate::bath::{planck, DiscretizedBath};
use crate::covariance::{mean_from_amplitudes, CovarianceMatrix, GaussianState};
use crate::error::{Error, Result};
use crate::model::{InitialAmplitudes, SystemParams};
use crate::wigner::KernelPoint;

/// Largest bath size accepted by [`full_gaussian_propagate`].
pub const MAX_FULL_SYSTEM_MODES: usize = 200;
/// Largest total excitation number accepted by [`fock_evolve`].
pub const MAX_FOCK_CUTOFF: usize = 16;
/// Initial-state probability allowed outside the truncated basis.
pub const FOCK_LEAKAGE_GATE: f64 = 1e-8;

/// Single-particle Hamiltonian over all 2 + 2K modes in the order A₁, A₂,
/// bath 1 modes, bath 2 modes.
fn full_single_particle(params: &SystemParams, baths: [&DiscretizedBath; 2]) -> DMatrix<f64> {
    let k = baths[0].len();
    let n = 2 + 2 * k;
    let mut h = DMatrix::zeros(n, n);
    h[(0, 0)] = params.omega();
    h[(1, 1)] = params.omega();
    h[(0, 1)] = params.lambda();
    h[(1, 0)] = params.lambda();
    for (i, bath) in baths.iter().enumerate() {
        for (j, m) in bath.modes().iter().enumerate() {
            let idx = 2 + i * k + j;
            h[(idx, idx)] = m.omega;
            h[(i, idx)] = m.coupling;
            h[(idx, i)] = m.coupling;
        }
    }
    h
}

/// Covariance and first moments of all oscillators in interleaved
/// (x, p) order per mode: A₁, A₂, bath 1 modes, bath 2 modes. Every mode
/// uses the ω-scaled quadratures x = (a + a†)/√(2ω), p = √ω(a − a†)/(i√2).
#[derive(Debug, Clone, PartialEq)]
pub struct FullSystemCovariance {
    pub cov: DMatrix<f64>,
    pub mean: DVector<f64>,
}

impl FullSystemCovariance {
    pub fn modes(&self) -> usize {
        self.cov.nrows() / 2
    }

    /// Partial trace over the baths: the leading 4×4 block.
    pub fn reduced(&self) -> Result<GaussianState> {
        let q: Matrix4<f64> = self.cov.fixed_view::<4, 4>(0, 0).into_owned();
        Ok(GaussianState {
            cov: CovarianceMatrix::new(q)?,
            mean: self.mean.fixed_rows::<4>(0).into_owned(),
        })
    }
}

pub fn full_gaussian_propagate(
    params: &SystemParams,
    baths: [&DiscretizedBath; 2],
    init: &InitialAmplitudes,
    t: f64,
) -> Result<FullSystemCovariance> {
    let k = baths[0].len();
    if baths[1].len() != k {
        return Err(Error::GridMismatch);
    }
    if k > MAX_FULL_SYSTEM_MODES {
        return Err(Error::invalid(format!("oracle limited to {MAX_FULL_SYSTEM_MODES} modes per bath")));
    }
    let w = params.omega();
    let h = full_single_particle(params, baths);
    let n = h.nrows();

    // ẋ = h p/ω, ṗ = −ω h x, assembled in interleaved order.
    let mut gen = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            gen[(2 * i, 2 * j + 1)] = h[(i, j)] / w;
            gen[(2 * i + 1, 2 * j)] = -w * h[(i, j)];
        }
    }
    let s = (gen * t).exp();

    let mut cov0 = DMatrix::zeros(2 * n, 2 * n);
    let mut mean0 = DVector::zeros(2 * n);
    let mut occupation = vec![0.0; n];
    for (i, bath) in baths.iter().enumerate() {
        for (j, n_k) in bath.occupations().into_iter().enumerate() {
            occupation[2 + i * k + j] = n_k;
        }
    }
    for (i, n_i) in occupation.iter().enumerate() {
        cov0[(2 * i, 2 * i)] = (n_i + 0.5) / w;
        cov0[(2 * i + 1, 2 * i + 1)] = (n_i + 0.5) * w;
    }
    let m = mean_from_amplitudes(init.alpha1, init.alpha2, w);
    for i in 0..4 {
        mean0[i] = m[i];
    }

    let cov = &s * cov0 * s.transpose();
    let cov = (&cov + cov.transpose()) * 0.5;
    let mean = &s * mean0;
    if cov.iter().chain(mean.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("full-system propagation"));
    }
    Ok(FullSystemCovariance { cov, mean })
}

/// Occupation numbers (n₁, n₂, n_b₁, n_b₂) of the four retained modes.
type Occupation = [usize; 4];

/// Number basis for A₁, A₂ and one mode of each bath, truncated at a total
/// excitation number. The Hamiltonian conserves that number, so every
/// sector is exact and only the initial state is truncated.
struct FockBasis {
    states: Vec<Occupation>,
    index: HashMap<Occupation, usize>,
    /// Basis indices of each total-number sector.
    sectors: Vec<Vec<usize>>,
}

impl FockBasis {
    fn new(cutoff: usize) -> Self {
        let mut states = Vec::new();
        let mut sectors = vec![Vec::new(); cutoff + 1];
        for total in 0..=cutoff {
            for n1 in 0..=total {
                for n2 in 0..=total - n1 {
                    for n3 in 0..=total - n1 - n2 {
                        let n4 = total - n1 - n2 - n3;
                        sectors[total].push(states.len());
                        states.push([n1, n2, n3, n4]);
                    }
                }
            }
        }
        let index = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        Self { states, index, sectors }
    }

    fn len(&self) -> usize {
        self.states.len()
    }

    /// a_mode |ψ⟩.
    fn lower(&self, psi: &[Complex64], mode: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        for (i, s) in self.states.iter().enumerate() {
            if s[mode] == 0 || psi[i] == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut t = *s;
            t[mode] -= 1;
            out[self.index[&t]] += psi[i] * (s[mode] as f64).sqrt();
        }
        out
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Covariance of the two A oscillators from truncated-Fock evolution with
/// one bath mode per bath.
///
/// `cutoff` bounds the total excitation number of the basis. The initial
/// probability outside the basis must stay below [`FOCK_LEAKAGE_GATE`].
pub fn fock_evolve(
    params: &SystemParams,
    baths: [&DiscretizedBath; 2],
    init: &InitialAmplitudes,
    cutoff: usize,
    t: f64,
) -> Result<GaussianState> {
    if baths.iter().any(|b| b.len() != 1) || !baths[0].same_grid(baths[1]) {
        return Err(Error::invalid("fock_evolve needs exactly one shared bath mode per bath"));
    }
    if cutoff == 0 || cutoff > MAX_FOCK_CUTOFF {
        return Err(Error::invalid(format!("cutoff {cutoff} outside 1..={MAX_FOCK_CUTOFF}")));
    }
    let mode = baths[0].modes()[0];
    let basis = FockBasis::new(cutoff);
    let (w, lam, g) = (params.omega(), params.lambda(), mode.coupling);

    // Sector Hamiltonians and their eigendecompositions.
    let hops: [(usize, usize, f64); 3] = [(0, 1, lam), (0, 2, g), (1, 3, g)];
    let sector_eigen: Vec<_> = basis
        .sectors
        .iter()
        .map(|members| {
            let local: HashMap<usize, usize> = members.iter().enumerate().map(|(l, &g)| (g, l)).collect();
            let dim = members.len();
            let mut h = DMatrix::<f64>::zeros(dim, dim);
            for (l, &gi) in members.iter().enumerate() {
                let s = basis.states[gi];
                h[(l, l)] = w * (s[0] + s[1]) as f64 + mode.omega * (s[2] + s[3]) as f64;
                // c†_to c_from + h.c.
                for &(x, y, amp) in &hops {
                    for (to, from) in [(x, y), (y, x)] {
                        if s[from] == 0 {
                            continue;
                        }
                        let mut t = s;
                        t[from] -= 1;
                        t[to] += 1;
                        let coeff = amp * ((s[from] * t[to]) as f64).sqrt();
                        h[(local[&basis.index[&t]], l)] += coeff;
                    }
                }
            }
            h.symmetric_eigen()
        })
        .collect();

    let evolve = |psi: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
        for (members, eig) in basis.sectors.iter().zip(&sector_eigen) {
            let v = &eig.eigenvectors;
            let local: Vec<Complex64> = members.iter().map(|&g| psi[g]).collect();
            for m in 0..members.len() {
                let mut c = Complex64::new(0.0, 0.0);
                for (l, amp) in local.iter().enumerate() {
                    c += amp * v[(l, m)];
                }
                c *= Complex64::from_polar(1.0, -eig.eigenvalues[m] * t);
                for (l, &g) in members.iter().enumerate() {
                    out[g] += c * v[(l, m)];
                }
            }
        }
        out
    };

    // Coherent amplitudes of the A modes, truncated at the cutoff.
    let coherent = |alpha: Complex64| -> Vec<Complex64> {
        let mut c = Vec::with_capacity(cutoff + 1);
        let mut amp = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        for n in 0..=cutoff {
            if n > 0 {
                amp = amp * alpha / (n as f64).sqrt();
            }
            c.push(amp);
        }
        c
    };
    let (c1, c2) = (coherent(init.alpha1), coherent(init.alpha2));
    let thermal = |temperature: f64| -> Vec<f64> {
        if temperature == 0.0 {
            let mut p = vec![0.0; cutoff + 1];
            p[0] = 1.0;
            return p;
        }
        let x = (-mode.omega / temperature).exp();
        (0..=cutoff).map(|n| (1.0 - x) * x.powi(n as i32)).collect()
    };
    let (p3, p4) = (thermal(baths[0].temperature()), thermal(baths[1].temperature()));

    // Accumulated ⟨a_i⟩, ⟨a_i† a_j⟩, ⟨a_i a_j⟩ for i, j ∈ {A₁, A₂}.
    let mut first = [Complex64::new(0.0, 0.0); 2];
    let mut number = Matrix2::<Complex64>::zeros();
    let mut pair = Matrix2::<Complex64>::zeros();
    let mut captured = 0.0;
    for m3 in 0..=cutoff {
        for m4 in 0..=cutoff - m3 {
            let weight = p3[m3] * p4[m4];
            if weight < 1e-300 {
                continue;
            }
            let mut psi = vec![Complex64::new(0.0, 0.0); basis.len()];
            let mut norm = 0.0;
            for (i, s) in basis.states.iter().enumerate() {
                if s[2] == m3 && s[3] == m4 {
                    psi[i] = c1[s[0]] * c2[s[1]];
                    norm += psi[i].norm_sqr();
                }
            }
            captured += weight * norm;
            let psi = evolve(&psi);
            let lowered = [basis.lower(&psi, 0), basis.lower(&psi, 1)];
            for i in 0..2 {
                first[i] += inner(&psi, &lowered[i]) * weight;
                for j in 0..2 {
                    number[(i, j)] += inner(&lowered[i], &lowered[j]) * weight;
                    pair[(i, j)] += inner(&psi, &basis.lower(&lowered[j], i)) * weight;
                }
            }
        }
    }
    let leakage = 1.0 - captured;
    if leakage > FOCK_LEAKAGE_GATE {
        return Err(Error::FockLeakage { leakage, gate: FOCK_LEAKAGE_GATE });
    }
    for v in first.iter_mut() {
        *v /= captured;
    }
    number /= Complex64::new(captured, 0.0);
    pair /= Complex64::new(captured, 0.0);

    // Connected moments.
    let n_conn = Matrix2::from_fn(|i, j| number[(i, j)] - first[i].conj() * first[j]);
    let s_conn = Matrix2::from_fn(|i, j| pair[(i, j)] - first[i] * first[j]);
    let q = covariance_from_ladder_moments(&n_conn, &s_conn, w);
    Ok(GaussianState {
        cov: CovarianceMatrix::new(q)?,
        mean: mean_from_amplitudes(first[0], first[1], w),
    })
}

/// Symmetrized quadrature covariance from connected ladder moments
/// N_ij = ⟨δa_i† δa_j⟩ and S_ij = ⟨δa_i δa_j⟩.
///
/// For ξ = c δa + c* δa† and η = d δa_j + d* δa_j†,
/// ⟨{ξ, η}⟩/2 = 2Re(cd S_ij) + 2Re(c*d N_ij) + δ_ij Re(cd*).
fn covariance_from_ladder_moments(n: &Matrix2<Complex64>, s: &Matrix2<Complex64>, omega: f64) -> Matrix4<f64> {
    let cx = Complex64::new(1.0 / (2.0 * omega).sqrt(), 0.0);
    let cp = Complex64::new(0.0, -(0.5 * omega).sqrt());
    // (mode, coefficient) for x₁, p₁, x₂, p₂
    let quads = [(0, cx), (0, cp), (1, cx), (1, cp)];
    Matrix4::from_fn(|a, b| {
        let (i, c) = quads[a];
        let (j, d) = quads[b];
        let mut v = 2.0 * (c * d * s[(i, j)]).re + 2.0 * (c.conj() * d * n[(i, j)]).re;
        if i == j {
            v += (c * d.conj()).re;
        }
        v
    })
}

/// Normalized thermal kernel ⟨x′|ρ|x⟩ of an oscillator with quadrature scale
/// ω, where `beta_omega` is the ratio of its energy quantum to the
/// temperature:
///
/// ρ(x′, x) = √(ω/(2π sinh βω)) exp(−ω[(x² + x′²) cosh βω − 2xx′]/(2 sinh βω)) / Z,
/// Z = 1/(2 sinh(βω/2)).
fn thermal_kernel(omega: f64, beta_omega: f64, xp: f64, x: f64) -> f64 {
    let (sh, ch) = (beta_omega.sinh(), beta_omega.cosh());
    let z = 1.0 / (2.0 * (0.5 * beta_omega).sinh());
    let unnormalized = (omega / (2.0 * PI * sh)).sqrt()
        * (-(omega / (2.0 * sh)) * ((x * x + xp * xp) * ch - 2.0 * x * xp)).exp();
    unnormalized / z
}

/// ⟨x₁′, x₂′| e^{−H₁₂/T}/Z |x₁, x₂⟩ for the coupled pair alone.
///
/// In normal coordinates x± = (x₁ ± x₂)/√2 the Hamiltonian is
/// Ω₁ a₊†a₊ + Ω₂ a₋†a₋ with a± built from ω-scaled quadratures, so each
/// factor is a thermal kernel at quadrature scale ω and Boltzmann ratio
/// Ω_i/T.
pub fn gibbs_kernel(params: &SystemParams, temperature: f64, kp: KernelPoint) -> Result<f64> {
    if !temperature.is_finite() || temperature < 0.0 {
        return Err(Error::invalid(format!("temperature {temperature} must be finite and >= 0")));
    }
    if temperature == 0.0 {
        return Err(Error::ZeroTemperature);
    }
    let rotate = |a: f64, b: f64| (FRAC_1_SQRT_2 * (a + b), FRAC_1_SQRT_2 * (a - b));
    let (sp, dp) = rotate(kp.x1p, kp.x2p);
    let (s, d) = rotate(kp.x1, kp.x2);
    let w = params.omega();
    Ok(thermal_kernel(w, params.omega1() / temperature, sp, s)
        * thermal_kernel(w, params.omega2() / temperature, dp, d))
}

/// Thermal covariance of the coupled pair at one temperature, built in
/// normal coordinates and rotated back.
pub fn gibbs_covariance(params: &SystemParams, temperature: f64) -> Result<CovarianceMatrix> {
    if !temperature.is_finite() || temperature < 0.0 {
        return Err(Error::invalid(format!("temperature {temperature} must be finite and >= 0")));
    }
    let w = params.omega();
    let var = |big: f64| planck(big, temperature) + 0.5;
    let normal = Matrix4::from_diagonal(&Vector4::new(
        var(params.omega1()) / w,
        var(params.omega1()) * w,
        var(params.omega2()) / w,
        var(params.omega2()) * w,
    ));
    let r = FRAC_1_SQRT_2;
    // (x₊, p₊, x₋, p₋) → (x₁, p₁, x₂, p₂)
    #[rustfmt::skip]
    let rot = Matrix4::new(
        r,   0.0, r,   0.0,
        0.0, r,   0.0, r,
        r,   0.0, -r,  0.0,
        0.0, r,   0.0, -r,
    );
    CovarianceMatrix::new(rot * normal * rot.transpose())
}
