use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;
use twobath::oracle::gibbs_kernel;
use twobath::wigner::{equilibrium_kernel, equilibrium_wigner_paper};
use twobath::{
    covariance_from_modes, discretize_bath, equilibrium_covariance, purity, simon_separability, BathSpec,
    CovarianceMatrix, DiscretizedBath, ExactDynamics, GaussianState, GaussianWigner, KernelPoint, KernelTransform,
    PhasePoint, PropagatorSet, QuadratureSpec, SystemParams, WwDynamics,
};

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::grid::Axis;
use crate::output::{sink, Csv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EngineKind {
    Exact,
    Ww,
}

enum Engine {
    Exact(ExactDynamics),
    Ww(WwDynamics),
}

impl Engine {
    fn propagator_set(&self, t: f64) -> Result<PropagatorSet, CliError> {
        Ok(match self {
            Engine::Exact(d) => d.propagator_set(t)?,
            Engine::Ww(d) => d.propagator_set(t)?,
        })
    }
}

/// Validated scenario with its discretized baths.
struct Setup {
    params: SystemParams,
    specs: [BathSpec; 2],
    baths: [DiscretizedBath; 2],
}

impl Setup {
    fn new(cfg: &ScenarioConfig) -> Result<Self, CliError> {
        let scenario = cfg.scenario()?;
        // Only first moments depend on the amplitudes; no output carries them.
        cfg.initial()?;
        for w in &scenario.warnings {
            eprintln!("{}", json!({ "warning": w.to_string() }));
        }
        let k = cfg.discretization.modes;
        let baths = [discretize_bath(&scenario.baths[0], k)?, discretize_bath(&scenario.baths[1], k)?];
        Ok(Self { params: scenario.params, specs: scenario.baths, baths })
    }

    fn engine(&self, kind: EngineKind) -> Result<Engine, CliError> {
        Ok(match kind {
            EngineKind::Exact => Engine::Exact(ExactDynamics::new(&self.params, [&self.baths[0], &self.baths[1]])?),
            EngineKind::Ww => Engine::Ww(WwDynamics::new(&self.params, &self.specs[0], &self.baths[0])?),
        })
    }

    fn covariance(&self, set: &PropagatorSet) -> Result<CovarianceMatrix, CliError> {
        Ok(covariance_from_modes(
            set,
            &self.baths[0].occupations(),
            &self.baths[1].occupations(),
            self.params.omega(),
        )?)
    }
}

fn simon_det(q: &CovarianceMatrix) -> f64 {
    simon_separability(q).determinant
}

/// Entries in the order Q_x1x1, Q_p1p1, Q_x2x2, Q_p2p2, Q_x1x2, Q_p1p2, Q_x1p2, Q_x2p1.
fn covariance_columns(q: &CovarianceMatrix) -> [f64; 8] {
    let m = q.matrix();
    [m[(0, 0)], m[(1, 1)], m[(2, 2)], m[(3, 3)], m[(0, 2)], m[(1, 3)], m[(0, 3)], m[(2, 1)]]
}

/// Evaluates `f` on every item in parallel and keeps the input order.
fn ordered<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> Result<R, CliError> + Sync + Send) -> Result<Vec<R>, CliError> {
    items.par_iter().map(f).collect()
}

pub fn evolve(cfg: &ScenarioConfig, kind: EngineKind, out: Option<&Path>) -> Result<(), CliError> {
    let setup = Setup::new(cfg)?;
    let engine = setup.engine(kind)?;
    let rows = ordered(&cfg.times(), |&t| {
        let set = engine.propagator_set(t)?;
        let q = setup.covariance(&set)?;
        let defects = set.unitarity_defects();
        let mut row = vec![t];
        row.extend(covariance_columns(&q));
        row.extend([simon_det(&q), purity(q.matrix()), set.u[0].norm(), set.u[1].norm(), defects[0], defects[1]]);
        Ok(row)
    })?;
    let mut csv = Csv::new(
        sink(out.or(cfg.output.evolve.as_deref()))?,
        &[
            "t", "Q_x1x1", "Q_p1p1", "Q_x2x2", "Q_p2p2", "Q_x1x2", "Q_p1p2", "Q_x1p2", "Q_x2p1", "simon_det", "purity",
            "abs_u1", "abs_u2", "unitarity_defect_1", "unitarity_defect_2",
        ],
    )?;
    for row in &rows {
        csv.row(row)?;
    }
    csv.finish()
}

fn matrix_rows(m: &nalgebra::Matrix4<f64>) -> Vec<Vec<f64>> {
    (0..4).map(|i| (0..4).map(|j| m[(i, j)]).collect()).collect()
}

pub fn equilibrium(cfg: &ScenarioConfig, kind: EngineKind, sweep: bool, out: Option<&Path>) -> Result<(), CliError> {
    let setup = Setup::new(cfg)?;
    let (t1, t2) = cfg.temperatures();
    let (consts, q) = equilibrium_covariance(&setup.params, t1, t2)?;
    let n = consts.occupations;
    let mut report = json!({
        "omega": setup.params.omega(),
        "lambda": setup.params.lambda(),
        "T1": t1,
        "T2": t2,
        "A": consts.a_const,
        "B": consts.b_const,
        "occupations": {
            "Omega1_T1": n[0][0],
            "Omega1_T2": n[0][1],
            "Omega2_T1": n[1][0],
            "Omega2_T2": n[1][1],
        },
        "Q": matrix_rows(q.matrix()),
        "purity": purity(q.matrix()),
        "simon_det": simon_det(&q),
    });
    if sweep {
        let t_end = cfg.time.t_end;
        let qt = setup.covariance(&setup.engine(kind)?.propagator_set(t_end)?)?;
        let diff = qt.matrix() - q.matrix();
        // Relative deviation is undefined where Q(∞) vanishes; those entries are null.
        let relative: Vec<Vec<Option<f64>>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        let r = q.matrix()[(i, j)];
                        (r != 0.0).then(|| diff[(i, j)].abs() / r.abs())
                    })
                    .collect()
            })
            .collect();
        report["sweep"] = json!({
            "engine": match kind { EngineKind::Exact => "exact", EngineKind::Ww => "ww" },
            "t_end": t_end,
            "Q_t_end": matrix_rows(qt.matrix()),
            "absolute_deviation": matrix_rows(&diff.abs()),
            "relative_deviation": relative,
        });
    }
    let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Numerical(e.to_string()))?;
    let mut w = sink(out.or(cfg.output.equilibrium.as_deref()))?;
    writeln!(w, "{text}")?;
    w.flush()?;
    Ok(())
}

pub struct PlaneSpec {
    pub axes: (usize, usize),
    pub grid: (Axis, Axis),
    pub fixed: [f64; 4],
}

pub fn wigner(cfg: &ScenarioConfig, plane: &PlaneSpec, out: Option<&Path>) -> Result<(), CliError> {
    let setup = Setup::new(cfg)?;
    let (t1, t2) = cfg.temperatures();
    let (_, q) = equilibrium_covariance(&setup.params, t1, t2)?;
    let w = GaussianWigner::new(&GaussianState::centered(q))?;
    let (ia, ib) = plane.axes;
    let mut points = Vec::new();
    for a in plane.grid.0.points() {
        for b in plane.grid.1.points() {
            points.push((a, b));
        }
    }
    let rows = ordered(&points, |&(a, b)| {
        let mut xi = plane.fixed;
        xi[ia] = a;
        xi[ib] = b;
        let pt = PhasePoint::new(xi[0], xi[1], xi[2], xi[3]);
        let cov = w.eval(pt);
        let closed = equilibrium_wigner_paper(&setup.params, t1, t2, pt)?;
        Ok([a, b, cov, closed, (cov - closed).abs()])
    })?;
    let mut csv = Csv::new(
        sink(out.or(cfg.output.wigner.as_deref()))?,
        &["coord_a", "coord_b", "W_covariance_route", "W_paper_formula", "abs_diff"],
    )?;
    for row in &rows {
        csv.row(row)?;
    }
    csv.finish()
}

pub struct KernelSpec {
    pub lattice: Axis,
    pub numeric: bool,
    pub nodes: usize,
}

pub fn kernel(cfg: &ScenarioConfig, spec: &KernelSpec, out: Option<&Path>) -> Result<(), CliError> {
    let setup = Setup::new(cfg)?;
    let p = setup.params;
    let (t1, t2) = cfg.temperatures();
    let transform = if spec.numeric {
        let (_, q) = equilibrium_covariance(&p, t1, t2)?;
        Some(KernelTransform::new(&GaussianState::centered(q), QuadratureSpec::new(spec.nodes))?)
    } else {
        None
    };
    let gibbs = t1 == t2;

    let axis = spec.lattice.points();
    let mut points = Vec::new();
    for &a in &axis {
        for &b in &axis {
            for &c in &axis {
                for &d in &axis {
                    points.push(KernelPoint::new(a, b, c, d));
                }
            }
        }
    }
    let rows = ordered(&points, |&kp| {
        let closed = equilibrium_kernel(&p, t1, t2, kp)?;
        let mut row = vec![kp.x1p, kp.x2p, kp.x1, kp.x2, closed];
        if let Some(kt) = &transform {
            let v = kt.eval(kp);
            row.extend([v.re, v.im, (v - Complex64::new(closed, 0.0)).norm()]);
        }
        if gibbs {
            let g = gibbs_kernel(&p, t1, kp)?;
            row.extend([g, (g - closed).abs()]);
        }
        Ok(row)
    })?;

    let mut header = vec!["x1p", "x2p", "x1", "x2", "rho_closed"];
    if transform.is_some() {
        header.extend(["rho_numeric_re", "rho_numeric_im", "abs_diff_numeric"]);
    }
    if gibbs {
        header.extend(["rho_gibbs", "abs_diff_gibbs"]);
    }
    let mut csv = Csv::new(sink(out.or(cfg.output.kernel.as_deref()))?, &header)?;
    for row in &rows {
        csv.row(row)?;
    }
    csv.finish()
}

pub fn compare_ww(cfg: &ScenarioConfig, out: Option<&Path>) -> Result<(), CliError> {
    let setup = Setup::new(cfg)?;
    let exact = setup.engine(EngineKind::Exact)?;
    let ww = setup.engine(EngineKind::Ww)?;
    let rows = ordered(&cfg.times(), |&t| {
        let (se, sw) = (exact.propagator_set(t)?, ww.propagator_set(t)?);
        let (qe, qw) = (setup.covariance(&se)?, setup.covariance(&sw)?);
        let phase = |i: usize| if se.u[i] == Complex64::new(0.0, 0.0) || sw.u[i] == Complex64::new(0.0, 0.0) {
            0.0
        } else {
            (se.u[i] / sw.u[i]).arg()
        };
        Ok([
            t,
            se.u[0].norm(),
            sw.u[0].norm(),
            se.u[1].norm(),
            sw.u[1].norm(),
            phase(0),
            phase(1),
            (qe.matrix() - qw.matrix()).amax(),
        ])
    })?;
    let mut csv = Csv::new(
        sink(out.or(cfg.output.compare_ww.as_deref()))?,
        &["t", "abs_u1_exact", "abs_u1_ww", "abs_u2_exact", "abs_u2_ww", "phase_diff_1", "phase_diff_2", "max_abs_dq"],
    )?;
    for row in &rows {
        csv.row(row)?;
    }
    csv.finish()
}
