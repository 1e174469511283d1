//! Grid and plane specifications given on the command line.

use std::str::FromStr;

use crate::error::CliError;

/// `lo:hi:n`, n equally spaced points including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        // Weighted form keeps grids symmetric about zero exactly.
        let m = (self.n - 1) as f64;
        (0..self.n).map(|i| ((m - i as f64) * self.lo + i as f64 * self.hi) / m).collect()
    }
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Config(format!("grid axis '{s}' must look like lo:hi:n"));
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else { return Err(bad()) };
        let (lo, hi): (f64, f64) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        if n == 0 || !lo.is_finite() || !hi.is_finite() || hi < lo || (n > 1 && hi == lo) {
            return Err(CliError::Config(format!("degenerate grid axis '{s}'")));
        }
        Ok(Self { lo, hi, n })
    }
}

/// Phase-space coordinate index in (x1, p1, x2, p2) order.
pub fn coordinate(name: &str) -> Result<usize, CliError> {
    match name.trim() {
        "x1" => Ok(0),
        "p1" => Ok(1),
        "x2" => Ok(2),
        "p2" => Ok(3),
        other => Err(CliError::Config(format!("unknown coordinate '{other}' (expected x1, p1, x2 or p2)"))),
    }
}

/// Two swept coordinates, e.g. `x1,p1`.
pub fn plane(spec: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = spec.split(',').collect();
    let [a, b] = parts.as_slice() else {
        return Err(CliError::Config(format!("plane '{spec}' must name two coordinates, e.g. x1,p1")));
    };
    let (a, b) = (coordinate(a)?, coordinate(b)?);
    if a == b {
        return Err(CliError::Config(format!("plane '{spec}' repeats a coordinate")));
    }
    Ok((a, b))
}

/// Values of the fixed coordinates, e.g. `x2=0.5,p2=-1`. Unset ones are 0.
pub fn fixed(spec: Option<&str>, swept: (usize, usize)) -> Result<[f64; 4], CliError> {
    let mut values = [0.0; 4];
    let Some(spec) = spec.filter(|s| !s.trim().is_empty()) else { return Ok(values) };
    for item in spec.split(',') {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("fixed coordinate '{item}' must look like x2=0.5")))?;
        let i = coordinate(name)?;
        if i == swept.0 || i == swept.1 {
            return Err(CliError::Config(format!("coordinate '{}' is both swept and fixed", name.trim())));
        }
        values[i] = value
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| CliError::Config(format!("bad value in '{item}'")))?;
    }
    Ok(values)
}
