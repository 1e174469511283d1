//! Eigendecomposition of real symmetric arrowhead matrices
//!
//! ```text
//!     [ a    z_1  z_2  ...  z_K ]
//!     [ z_1  d_1                ]
//! H = [ z_2       d_2           ]
//!     [ ...            ...      ]
//!     [ z_K                d_K  ]
//! ```
//!
//! with strictly increasing d. Eigenvalues with a non-zero head component
//! solve the secular equation μ − a − Σ z_j²/(μ − d_j) = 0, one per gap
//! between consecutive poles plus one beyond each end. Each root is stored
//! as an offset δ from its nearest pole so that μ − d_j = (d_o − d_j) + δ is
//! formed without cancellation; the eigenvector components z_j/(μ − d_j)
//! then keep full relative accuracy.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

const MAX_ITER: usize = 200;
const PAR_THRESHOLD: usize = 256;

#[derive(Debug, Clone, Copy)]
struct Root {
    /// Position of the origin pole in `ArrowheadEigen::active`, or `None`
    /// when no pole couples to the head.
    origin: Option<usize>,
    delta: f64,
    /// Squared head component of the normalized eigenvector.
    weight: f64,
}

#[derive(Debug, Clone)]
pub struct ArrowheadEigen {
    head: f64,
    poles: Vec<f64>,
    couplings: Vec<f64>,
    /// Indices of poles with non-negligible coupling.
    active: Vec<usize>,
    roots: Vec<Root>,
}

impl ArrowheadEigen {
    pub fn new(head: f64, poles: &[f64], couplings: &[f64]) -> Result<Self> {
        if poles.len() != couplings.len() {
            return Err(Error::LengthMismatch {
                what: "arrowhead couplings",
                expected: poles.len(),
                found: couplings.len(),
            });
        }
        if !head.is_finite() || poles.iter().chain(couplings).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("arrowhead matrix"));
        }
        if poles.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Eigen("diagonal entries must be strictly increasing".into()));
        }

        let znorm = couplings.iter().map(|z| z * z).sum::<f64>().sqrt();
        let scale = head.abs().max(poles.iter().fold(0.0f64, |m, d| m.max(d.abs()))).max(znorm);
        let tol = 8.0 * f64::EPSILON * scale;
        let active: Vec<usize> = (0..poles.len()).filter(|&j| couplings[j].abs() > tol).collect();

        let mut solver = Self {
            head,
            poles: poles.to_vec(),
            couplings: couplings.to_vec(),
            active,
            roots: Vec::new(),
        };
        solver.roots = solver.solve_roots(znorm)?;
        Ok(solver)
    }

    pub fn dim(&self) -> usize {
        self.poles.len() + 1
    }

    fn pole(&self, a: usize) -> f64 {
        self.poles[self.active[a]]
    }

    /// Secular function and derivative at offset `delta` from active pole `o`.
    fn secular(&self, o: usize, delta: f64) -> (f64, f64) {
        let d_o = self.pole(o);
        let mut f = (d_o - self.head) + delta;
        let mut df = 1.0;
        for &j in &self.active {
            let den = (d_o - self.poles[j]) + delta;
            let r = self.couplings[j] / den;
            f -= self.couplings[j] * r;
            df += r * r;
        }
        (f, df)
    }

    /// Safeguarded Newton on the increasing secular function inside (lo, hi).
    fn find_root(&self, o: usize, mut lo: f64, mut hi: f64) -> Result<f64> {
        let mut x = 0.5 * (lo + hi);
        let mut last_abs = f64::INFINITY;
        for _ in 0..MAX_ITER {
            let (f, df) = self.secular(o, x);
            if !f.is_finite() {
                return Err(Error::Eigen("secular function not finite".into()));
            }
            if f == 0.0 {
                return Ok(x);
            }
            if f < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let mut next = x - f / df;
            // Bisect when Newton leaves the bracket or stalls.
            if !(next > lo && next < hi) || f.abs() > 0.5 * last_abs {
                next = 0.5 * (lo + hi);
            }
            last_abs = f.abs();
            let tiny = 2.0 * f64::EPSILON * next.abs();
            if (next - x).abs() <= tiny || (hi - lo) <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                return Ok(next);
            }
            x = next;
        }
        Err(Error::Eigen("secular root did not converge".into()))
    }

    fn solve_roots(&self, znorm: f64) -> Result<Vec<Root>> {
        let n = self.active.len();
        if n == 0 {
            return Ok(vec![Root { origin: None, delta: 0.0, weight: 1.0 }]);
        }
        let margin = |v: f64| v * (1.0 + 1e-8) + f64::MIN_POSITIVE.sqrt();

        // Root i lies in gap i − 1 (root 0 below the first pole, root n above the last).
        let solve = |i: usize| -> Result<Root> {
            let (origin, delta) = if i == 0 {
                let reach = margin((self.pole(0) - self.head).max(0.0) + znorm);
                (0, self.find_root(0, -reach, 0.0)?)
            } else if i == n {
                let reach = margin((self.head - self.pole(n - 1)).max(0.0) + znorm);
                (n - 1, self.find_root(n - 1, 0.0, reach)?)
            } else {
                let gap = self.pole(i) - self.pole(i - 1);
                let (f_mid, _) = self.secular(i - 1, 0.5 * gap);
                if f_mid >= 0.0 {
                    (i - 1, if f_mid == 0.0 { 0.5 * gap } else { self.find_root(i - 1, 0.0, 0.5 * gap)? })
                } else {
                    (i, self.find_root(i, -0.5 * gap, 0.0)?)
                }
            };
            let (_, df) = self.secular(origin, delta);
            Ok(Root { origin: Some(origin), delta, weight: 1.0 / df })
        };

        if n >= PAR_THRESHOLD {
            (0..=n).into_par_iter().map(solve).collect()
        } else {
            (0..=n).map(solve).collect()
        }
    }

    fn root_value(&self, r: &Root) -> f64 {
        match r.origin {
            Some(o) => self.pole(o) + r.delta,
            None => self.head,
        }
    }

    /// μ_m − d_j for active pole j.
    fn gap_to(&self, r: &Root, j: usize) -> f64 {
        let o = r.origin.expect("active pole implies an origin");
        (self.pole(o) - self.poles[j]) + r.delta
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.roots.iter().map(|r| self.root_value(r)).collect();
        let mut is_active = vec![false; self.poles.len()];
        for &j in &self.active {
            is_active[j] = true;
        }
        ev.extend((0..self.poles.len()).filter(|&j| !is_active[j]).map(|j| self.poles[j]));
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    fn phases(&self, t: f64) -> Vec<Complex64> {
        self.roots
            .iter()
            .map(|r| Complex64::from_polar(1.0, -self.root_value(r) * t))
            .collect()
    }

    fn par_map<F>(&self, f: F) -> Vec<Complex64>
    where
        F: Fn(usize) -> Complex64 + Sync + Send,
    {
        let k = self.poles.len();
        if k >= PAR_THRESHOLD {
            (0..k).into_par_iter().map(f).collect()
        } else {
            (0..k).map(f).collect()
        }
    }

    /// Head entry of exp(−i H t), O(K) per call.
    pub fn head_amplitude(&self, t: f64) -> Complex64 {
        if t == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        self.roots
            .iter()
            .map(|r| Complex64::from_polar(r.weight, -self.root_value(r) * t))
            .sum()
    }

    /// First column of exp(−i H t): entry 0 is the head amplitude, entries
    /// 1..=K the pole amplitudes.
    pub fn first_column(&self, t: f64) -> Vec<Complex64> {
        if t == 0.0 {
            let mut e0 = vec![Complex64::new(0.0, 0.0); self.dim()];
            e0[0] = Complex64::new(1.0, 0.0);
            return e0;
        }
        let phases = self.phases(t);
        let weighted: Vec<Complex64> = self
            .roots
            .iter()
            .zip(&phases)
            .map(|(r, p)| p * r.weight)
            .collect();

        let head = weighted.iter().sum::<Complex64>();
        let mut is_active = vec![false; self.poles.len()];
        for &j in &self.active {
            is_active[j] = true;
        }
        let tail = self.par_map(|j| {
            if !is_active[j] {
                return Complex64::new(0.0, 0.0);
            }
            let s: Complex64 = self
                .roots
                .iter()
                .zip(&weighted)
                .map(|(r, w)| w / self.gap_to(r, j))
                .sum();
            s * self.couplings[j]
        });

        let mut out = Vec::with_capacity(self.dim());
        out.push(head);
        out.extend(tail);
        out
    }

    /// exp(−i H t)·c for an arbitrary vector of length K + 1.
    pub fn evolve(&self, t: f64, c: &[Complex64]) -> Result<Vec<Complex64>> {
        if c.len() != self.dim() {
            return Err(Error::LengthMismatch {
                what: "state vector",
                expected: self.dim(),
                found: c.len(),
            });
        }
        let phases = self.phases(t);
        let mut is_active = vec![false; self.poles.len()];
        for &j in &self.active {
            is_active[j] = true;
        }

        // Coefficients in the eigenbasis, already rotated.
        let coeffs: Vec<Complex64> = self
            .roots
            .iter()
            .zip(&phases)
            .map(|(r, p)| {
                let head = r.weight.sqrt();
                let mut y = c[0] * head;
                for &j in &self.active {
                    y += c[j + 1] * (self.couplings[j] * head / self.gap_to(r, j));
                }
                y * p
            })
            .collect();

        let head: Complex64 = self
            .roots
            .iter()
            .zip(&coeffs)
            .map(|(r, y)| y * r.weight.sqrt())
            .sum();
        let tail = self.par_map(|j| {
            if !is_active[j] {
                return c[j + 1] * Complex64::from_polar(1.0, -self.poles[j] * t);
            }
            let s: Complex64 = self
                .roots
                .iter()
                .zip(&coeffs)
                .map(|(r, y)| y * (r.weight.sqrt() / self.gap_to(r, j)))
                .sum();
            s * self.couplings[j]
        });

        let mut out = Vec::with_capacity(self.dim());
        out.push(head);
        out.extend(tail);
        Ok(out)
    }
}
