//! Reference scenarios, brute-force integrators and quadrature helpers shared
//! by the integration and acceptance tests.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use twobath::{discretize_bath, BathMode, BathSpec, DiscretizedBath, SystemParams};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

/// Real and imaginary parts uniform on [−1, 1).
pub fn random_complex(rng: &mut StdRng) -> Complex64 {
    Complex64::new(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0))
}

/// Flat bath with plateau chosen so that κ = πJ₀.
pub fn flat(kappa: f64, temperature: f64, lo: f64, hi: f64) -> BathSpec {
    BathSpec::flat(temperature, kappa / PI, lo, hi).unwrap()
}

pub fn flat_pair(kappa: f64, temps: (f64, f64), lo: f64, hi: f64, k: usize) -> ([BathSpec; 2], [DiscretizedBath; 2]) {
    let specs = [flat(kappa, temps.0, lo, hi), flat(kappa, temps.1, lo, hi)];
    let baths = specs.each_ref().map(|s| discretize_bath(s, k).unwrap());
    (specs, baths)
}

/// K modes with random frequencies near ω and random weak couplings, shared
/// by both baths.
pub fn random_small_baths(rng: &mut StdRng, p: &SystemParams, k: usize, temps: (f64, f64)) -> [DiscretizedBath; 2] {
    let mut freqs: Vec<f64> = (0..k).map(|_| uniform(rng, 0.7, 1.3) * p.omega()).collect();
    freqs.sort_by(|a, b| a.total_cmp(b));
    let modes: Vec<BathMode> = freqs
        .into_iter()
        .map(|omega| BathMode { omega, coupling: uniform(rng, 0.0, 0.08) })
        .collect();
    [
        DiscretizedBath::new(modes.clone(), temps.0).unwrap(),
        DiscretizedBath::new(modes, temps.1).unwrap(),
    ]
}

/// Single-particle Hamiltonian of all modes in the order A₁, A₂, bath 1,
/// bath 2.
pub fn full_hamiltonian(p: &SystemParams, baths: [&DiscretizedBath; 2]) -> DMatrix<f64> {
    let k = baths[0].len();
    let n = 2 + 2 * k;
    let mut h = DMatrix::zeros(n, n);
    h[(0, 0)] = p.omega();
    h[(1, 1)] = p.omega();
    h[(0, 1)] = p.lambda();
    h[(1, 0)] = p.lambda();
    for (i, b) in baths.iter().enumerate() {
        for (j, m) in b.modes().iter().enumerate() {
            let idx = 2 + i * k + j;
            h[(idx, idx)] = m.omega;
            h[(i, idx)] = m.coupling;
            h[(idx, i)] = m.coupling;
        }
    }
    h
}

/// Classical RK4 on i ċ = h c.
pub fn rk4_schrodinger(h: &DMatrix<f64>, c0: &[Complex64], t: f64, dt: f64) -> Vec<Complex64> {
    let hc = h.map(|v| Complex64::new(v, 0.0));
    let rhs = |c: &nalgebra::DVector<Complex64>| (&hc * c) * Complex64::new(0.0, -1.0);
    let steps = (t / dt).ceil() as usize;
    let dt = t / steps as f64;
    let re = |x: f64| Complex64::new(x, 0.0);
    let mut c = nalgebra::DVector::from_column_slice(c0);
    for _ in 0..steps {
        let k1 = rhs(&c);
        let k2 = rhs(&(&c + &k1 * re(0.5 * dt)));
        let k3 = rhs(&(&c + &k2 * re(0.5 * dt)));
        let k4 = rhs(&(&c + &k3 * re(dt)));
        c += (k1 + k2 * re(2.0) + k3 * re(2.0) + k4) * re(dt / 6.0);
    }
    c.iter().copied().collect()
}

/// Composite trapezoid nodes and weights on [−half, half].
pub fn trapezoid(half: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = 2.0 * half / (n - 1) as f64;
    let x = (0..n).map(|i| -half + i as f64 * h).collect();
    let w = (0..n).map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h }).collect();
    (x, w)
}

/// ∫ f over a 4-D box centred at `centre` with half-widths `half`, by an
/// n⁴ tensor trapezoid rule. Returns the integrals of every function in
/// the output of `f`.
pub fn trapezoid4<const M: usize, F>(centre: [f64; 4], half: [f64; 4], n: usize, f: F) -> [f64; M]
where
    F: Fn([f64; 4]) -> [f64; M] + Sync,
{
    use rayon::prelude::*;
    let axes: Vec<(Vec<f64>, Vec<f64>)> = (0..4)
        .map(|a| {
            let (x, w) = trapezoid(half[a], n);
            (x.into_iter().map(|v| v + centre[a]).collect(), w)
        })
        .collect();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = [0.0; M];
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let w = axes[0].1[i] * axes[1].1[j] * axes[2].1[k] * axes[3].1[l];
                        let v = f([axes[0].0[i], axes[1].0[j], axes[2].0[k], axes[3].0[l]]);
                        for m in 0..M {
                            acc[m] += w * v[m];
                        }
                    }
                }
            }
            acc
        })
        .reduce(
            || [0.0; M],
            |mut a, b| {
                for m in 0..M {
                    a[m] += b[m];
                }
                a
            },
        )
}
