use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use twobath::{equilibrium_covariance, physicality, purity, simon_separability, CovarianceMatrix, SystemParams};

const J0_KAPPA_001: f64 = 0.01 / std::f64::consts::PI;

struct Scenario {
    lambda: f64,
    temps: (f64, f64),
    j0: f64,
    modes: usize,
    t_end: f64,
    steps: usize,
}

impl Default for Scenario {
    fn default() -> Self {
        Self { lambda: 0.1, temps: (1.0, 2.0), j0: J0_KAPPA_001, modes: 300, t_end: 200.0, steps: 20 }
    }
}

impl Scenario {
    fn toml(&self) -> String {
        let bath = |t: f64| format!("temperature = {t:?}\nj0 = {:?}\nomega_min = 0.2\nomega_max = 3.0\n", self.j0);
        format!(
            "[system]\nomega = 1.0\nlambda = {:?}\n\n[bath1]\n{}\n[bath2]\n{}\n[discretization]\nmodes = {}\n\n\
             [time]\nt_start = 0.0\nt_end = {:?}\nsteps = {}\n\n\
             [initial]\nalpha1_re = 0.3\nalpha1_im = 0.0\nalpha2_re = 0.0\nalpha2_im = -0.2\n",
            self.lambda,
            bath(self.temps.0),
            bath(self.temps.1),
            self.modes,
            self.t_end,
            self.steps
        )
    }

    fn write(&self, dir: &TempDir, name: &str) -> PathBuf {
        let path = dir.path().join(name);
        std::fs::write(&path, self.toml()).unwrap();
        path
    }
}

fn twobath(config: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twobath"))
        .args(args)
        .arg("--config")
        .arg(config)
        .output()
        .unwrap()
}

fn stdout_ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Header and numeric rows.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("missing column {name}"))
}

fn error_code(out: &Output) -> i64 {
    let line = String::from_utf8_lossy(&out.stderr);
    let v: serde_json::Value = serde_json::from_str(line.lines().last().unwrap()).unwrap();
    let code = v["code"].as_i64().unwrap();
    assert_eq!(out.status.code(), Some(code as i32));
    code
}

#[test]
fn evolve_is_deterministic_and_well_formed() {
    let dir = TempDir::new().unwrap();
    let cfg = Scenario::default().write(&dir, "s.toml");
    let a = stdout_ok(&twobath(&cfg, &["evolve"]));
    let file = dir.path().join("out.csv");
    stdout_ok(&twobath(&cfg, &["evolve", "--out", file.to_str().unwrap()]));
    assert_eq!(a, std::fs::read_to_string(&file).unwrap());

    let (header, rows) = parse_csv(&a);
    assert_eq!(header.len(), 15);
    assert_eq!(rows.len(), 21);
    let first = &rows[0];
    assert_eq!(&first[1..9], &[0.5, 0.5, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0]);
    assert_eq!(first[column(&header, "simon_det")], 0.0);
    for row in &rows {
        let det = row[column(&header, "simon_det")];
        assert!(det >= 0.0, "{det}");
        let [xx1, pp1, xx2, pp2, x12, p12, x1p2, x2p1] = [1, 2, 3, 4, 5, 6, 7, 8].map(|i| row[i]);
        #[rustfmt::skip]
        let q = nalgebra::Matrix4::new(
            xx1, 0.0, x12, x1p2,
            0.0, pp1, x2p1, p12,
            x12, x2p1, xx2, 0.0,
            x1p2, p12, 0.0, pp2,
        );
        assert!(physicality(&q));
        let cov = CovarianceMatrix::new(q).unwrap();
        assert_eq!(simon_separability(&cov).determinant, det);
        assert!((purity(&q) - row[column(&header, "purity")]).abs() < 1e-14);
    }
}

#[test]
fn exact_and_ww_decay_agree() {
    let dir = TempDir::new().unwrap();
    // κ/Ω₁ = 0.01
    let s = Scenario { j0: 0.011 / std::f64::consts::PI, modes: 2500, t_end: 3.0 / 0.011, steps: 60, ..Default::default() };
    let cfg = s.write(&dir, "s.toml");
    let (h, exact) = parse_csv(&stdout_ok(&twobath(&cfg, &["evolve", "--engine", "exact"])));
    let (_, ww) = parse_csv(&stdout_ok(&twobath(&cfg, &["evolve", "--engine", "ww"])));
    let u1 = column(&h, "abs_u1");
    for (a, b) in exact.iter().zip(&ww) {
        assert!((a[u1] - b[u1]).abs() < 0.02, "t {}: {} vs {}", a[0], a[u1], b[u1]);
    }
}

#[test]
fn compare_ww_columns() {
    let dir = TempDir::new().unwrap();
    let cfg = Scenario::default().write(&dir, "s.toml");
    let (h, rows) = parse_csv(&stdout_ok(&twobath(&cfg, &["compare-ww"])));
    assert_eq!(
        h,
        ["t", "abs_u1_exact", "abs_u1_ww", "abs_u2_exact", "abs_u2_ww", "phase_diff_1", "phase_diff_2", "max_abs_dq"]
    );
    assert_eq!(rows.len(), 21);
    assert_eq!(&rows[0][1..], &[1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
}

fn equilibrium_json(s: &Scenario, extra: &[&str]) -> serde_json::Value {
    let dir = TempDir::new().unwrap();
    let cfg = s.write(&dir, "s.toml");
    let mut args = vec!["equilibrium"];
    args.extend(extra);
    serde_json::from_str(&stdout_ok(&twobath(&cfg, &args))).unwrap()
}

#[test]
fn equilibrium_matches_library_bit_for_bit() {
    let v = equilibrium_json(&Scenario::default(), &[]);
    let p = SystemParams::new(1.0, 0.1).unwrap();
    let (c, q) = equilibrium_covariance(&p, 1.0, 2.0).unwrap();
    assert_eq!(v["A"].as_f64().unwrap().to_bits(), c.a_const.to_bits());
    assert_eq!(v["B"].as_f64().unwrap().to_bits(), c.b_const.to_bits());
    assert_eq!(v["occupations"]["Omega2_T1"].as_f64().unwrap().to_bits(), c.occupations[1][0].to_bits());
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(v["Q"][i][j].as_f64().unwrap().to_bits(), q.matrix()[(i, j)].to_bits());
        }
    }
    assert_eq!(v["purity"].as_f64().unwrap().to_bits(), purity(q.matrix()).to_bits());
    assert!(v.get("sweep").is_none());
}

#[test]
fn equilibrium_limits_and_sweep() {
    let cold = equilibrium_json(&Scenario { temps: (0.0, 0.0), ..Default::default() }, &[]);
    assert_eq!(cold["A"].as_f64(), Some(0.5));
    assert_eq!(cold["B"].as_f64(), Some(0.0));
    let uncoupled = equilibrium_json(&Scenario { lambda: 0.0, ..Default::default() }, &[]);
    assert_eq!(uncoupled["B"].as_f64(), Some(0.0));

    let s = Scenario { modes: 800, t_end: 1000.0, ..Default::default() };
    let v = equilibrium_json(&s, &["--sweep"]);
    let sweep = &v["sweep"];
    assert_eq!(sweep["engine"], "exact");
    assert_eq!(sweep["t_end"].as_f64(), Some(1000.0));
    // Diagonal entries sit within a few percent of equilibrium; x-p entries have no reference.
    for i in 0..4 {
        assert!(sweep["relative_deviation"][i][i].as_f64().unwrap() < 0.03);
    }
    assert!(sweep["relative_deviation"][0][3].is_null());
}

#[test]
fn wigner_plane_output() {
    let dir = TempDir::new().unwrap();
    let cfg = Scenario { temps: (1.5, 1.5), ..Default::default() }.write(&dir, "s.toml");
    let args = ["wigner", "--plane", "x1,p1", "--grid-a", "-2:2:9", "--grid-b", "-2:2:7", "--fixed", "x2=0,p2=0"];
    let (h, rows) = parse_csv(&stdout_ok(&twobath(&cfg, &args)));
    assert_eq!(h, ["coord_a", "coord_b", "W_covariance_route", "W_paper_formula", "abs_diff"]);
    assert_eq!(rows.len(), 9 * 7);
    assert_eq!((rows[0][0], rows[0][1], rows[1][1]), (-2.0, -2.0, (5.0 * -2.0 + 2.0) / 6.0));
    for r in &rows {
        assert!(r[4] < 1e-9);
    }
    // Zero-mean state: W(a, b) = W(−a, −b), mirrored row index.
    for (i, r) in rows.iter().enumerate() {
        let m = &rows[rows.len() - 1 - i];
        assert_eq!((r[0], r[1]), (-m[0], -m[1]));
        assert!((r[2] - m[2]).abs() <= 1e-15 * r[2]);
    }
}

#[test]
fn kernel_lattice_output() {
    let dir = TempDir::new().unwrap();
    let cfg = Scenario { temps: (1.0, 1.0), ..Default::default() }.write(&dir, "s.toml");
    let (h, rows) = parse_csv(&stdout_ok(&twobath(&cfg, &["kernel", "--lattice", "-1:1:3", "--numeric"])));
    assert_eq!(rows.len(), 81);
    let (closed, num, gibbs) = (column(&h, "rho_closed"), column(&h, "abs_diff_numeric"), column(&h, "abs_diff_gibbs"));
    for r in &rows {
        assert!(r[num] < 1e-6);
        assert!(r[gibbs] < 1e-8);
        // Row of the swapped point (x1', x2') <-> (x1, x2).
        let idx = |v: f64| ((v + 1.0).round()) as usize;
        let swapped = &rows[27 * idx(r[2]) + 9 * idx(r[3]) + 3 * idx(r[0]) + idx(r[1])];
        assert_eq!((swapped[0], swapped[1], swapped[2], swapped[3]), (r[2], r[3], r[0], r[1]));
        assert_eq!(swapped[closed], r[closed]);
    }

    let hot = Scenario { temps: (1.0, 2.0), ..Default::default() }.write(&dir, "hot.toml");
    let (h, _) = parse_csv(&stdout_ok(&twobath(&hot, &["kernel", "--lattice", "0:1:2"])));
    assert_eq!(h, ["x1p", "x2p", "x1", "x2", "rho_closed"]);
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = Scenario::default().toml();

    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let missing_key = write("missing.toml", &good.replace("steps = 20\n", ""));
    assert_eq!(error_code(&twobath(&missing_key, &["evolve"])), 2);
    let unknown_key = write("unknown.toml", &good.replace("[initial]", "[initial]\nalpha3_re = 1.0"));
    assert_eq!(error_code(&twobath(&unknown_key, &["evolve"])), 2);
    let garbage = write("garbage.toml", "this is not toml");
    assert_eq!(error_code(&twobath(&garbage, &["evolve"])), 2);
    assert_eq!(error_code(&twobath(&dir.path().join("absent.toml"), &["evolve"])), 2);

    let strong = write("strong.toml", &good.replace("lambda = 0.1", "lambda = 1.2"));
    assert_eq!(error_code(&twobath(&strong, &["evolve"])), 4);
    let cold = Scenario { temps: (0.0, 1.0), ..Default::default() }.write(&dir, "cold.toml");
    assert_eq!(error_code(&twobath(&cold, &["kernel"])), 4);

    let cfg = write("good.toml", &good);
    assert_eq!(error_code(&twobath(&cfg, &["wigner", "--plane", "x1,x1"])), 2);
    assert_eq!(error_code(&twobath(&cfg, &["wigner", "--grid-a", "1:0:5"])), 2);
    assert_eq!(error_code(&twobath(&cfg, &["kernel", "--numeric", "--nodes", "8"])), 4);
}
