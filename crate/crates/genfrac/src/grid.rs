//! Functions sampled on a uniform grid, plus their CSV exchange format.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// A real function on `[a, b]` known at the `n + 1` uniform nodes
/// `t_i = a + i (b - a) / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    a: f64,
    b: f64,
    values: Vec<f64>,
}

impl SampledFunction {
    /// Wraps node values on `[a, b]`. Requires `b > a`, at least three nodes
    /// (two intervals) and finite values.
    pub fn new(a: f64, b: f64, values: Vec<f64>) -> Result<Self> {
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain(format!(
                "interval [{a}, {b}] must be finite with b > a"
            )));
        }
        if values.len() < 3 {
            return Err(Error::Domain(format!(
                "need at least 3 nodes, got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite sample value {v}")));
        }
        Ok(Self { a, b, values })
    }

    /// Samples a closed-form function at `n + 1` nodes.
    pub fn from_fn(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("need n >= 2 intervals, got {n}")));
        }
        let values = (0..=n)
            .map(|i| f(a + i as f64 * (b - a) / n as f64))
            .collect();
        Self::new(a, b, values)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of intervals N (one less than the node count).
    pub fn intervals(&self) -> usize {
        self.values.len() - 1
    }

    /// Node spacing h = (b - a) / N.
    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.intervals() as f64
    }

    /// The i-th node t_i = a + i h.
    pub fn node(&self, i: usize) -> f64 {
        self.a + i as f64 * (self.b - self.a) / self.intervals() as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(|i| self.node(i))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Replaces the samples with `f(t_i, v_i)`, keeping the grid.
    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| f(self.node(i), v))
            .collect();
        Self {
            a: self.a,
            b: self.b,
            values,
        }
    }

    /// True when both functions share the same grid (endpoints and length).
    pub fn same_grid(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && self.values.len() == other.values.len()
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Trapezoid approximation of the integral of |f| over [a, b].
    pub fn l1_norm(&self) -> f64 {
        let h = self.h();
        let n = self.intervals();
        let mut s = 0.5 * (self.values[0].abs() + self.values[n].abs());
        for v in &self.values[1..n] {
            s += v.abs();
        }
        s * h
    }

    /// Max-norm distance to another function on the same grid.
    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        if !self.same_grid(other) {
            return Err(Error::Domain("grid mismatch".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (x, y)| m.max((x - y).abs())))
    }

    /// Max-norm distance over nodes with t in [lo, hi].
    pub fn max_diff_on(&self, other: &Self, lo: f64, hi: f64) -> Result<f64> {
        if !self.same_grid(other) {
            return Err(Error::Domain("grid mismatch".into()));
        }
        let mut m = 0.0_f64;
        for (i, (x, y)) in self.values.iter().zip(&other.values).enumerate() {
            let t = self.node(i);
            if t >= lo && t <= hi {
                m = m.max((x - y).abs());
            }
        }
        Ok(m)
    }

    /// Writes the `t,value` CSV exchange format with 17 significant digits.
    pub fn write_csv(&self, w: &mut impl Write) -> Result<()> {
        let mut emit = || -> std::io::Result<()> {
            writeln!(w, "t,value")?;
            for (i, v) in self.values.iter().enumerate() {
                writeln!(w, "{:.16e},{:.16e}", self.node(i), v)?;
            }
            Ok(())
        };
        emit().map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }

    /// Parses the `t,value` CSV format, checking grid uniformity.
    pub fn read_csv(r: impl BufRead) -> Result<Self> {
        let mut ts = Vec::new();
        let mut vs = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line.map_err(|e| Error::Io(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if lineno == 0 {
                if line != "t,value" {
                    return Err(Error::Parse {
                        pos: 0,
                        expected: "header 't,value'".into(),
                        found: line.into(),
                    });
                }
                continue;
            }
            let (ts_str, vs_str) = line.split_once(',').ok_or_else(|| Error::Parse {
                pos: lineno,
                expected: "two comma-separated numbers".into(),
                found: line.into(),
            })?;
            let parse = |s: &str| -> Result<f64> {
                s.trim().parse::<f64>().map_err(|_| Error::Parse {
                    pos: lineno,
                    expected: "a floating-point number".into(),
                    found: s.into(),
                })
            };
            ts.push(parse(ts_str)?);
            vs.push(parse(vs_str)?);
        }
        if ts.len() < 3 {
            return Err(Error::Domain(format!(
                "CSV contains {} rows; need at least 3",
                ts.len()
            )));
        }
        let a = ts[0];
        let b = *ts.last().unwrap();
        let f = SampledFunction::new(a, b, vs)?;
        // the 17-digit format round-trips doubles, so nodes must line up
        let tol = 1e-9 * (b - a).abs().max(1.0);
        for (i, &t) in ts.iter().enumerate() {
            if (t - f.node(i)).abs() > tol {
                return Err(Error::Domain(format!(
                    "non-uniform grid in CSV: row {i} has t = {t}, expected {}",
                    f.node(i)
                )));
            }
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_nodes_and_spacing() {
        let f = SampledFunction::from_fn(0.0, 1.0, 4, |t| t * t).unwrap();
        assert_eq!(f.intervals(), 4);
        assert_eq!(f.h(), 0.25);
        assert_eq!(f.node(0), 0.0);
        assert_eq!(f.node(4), 1.0);
        assert_eq!(f.values()[2], 0.25);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(SampledFunction::new(0.0, 0.0, vec![1.0; 5]).is_err());
        assert!(SampledFunction::new(0.0, 1.0, vec![1.0, 2.0]).is_err());
        assert!(SampledFunction::new(0.0, 1.0, vec![1.0, f64::NAN, 3.0]).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let f = SampledFunction::from_fn(0.25, 2.75, 17, |t| (3.1 * t).sin() / 7.0).unwrap();
        let text = f.to_csv_string();
        assert!(text.starts_with("t,value\n"));
        let g = SampledFunction::read_csv(text.as_bytes()).unwrap();
        assert_eq!(f.values(), g.values());
        assert_eq!(f.a(), g.a());
        assert_eq!(f.b(), g.b());
    }

    #[test]
    fn csv_rejects_bad_header() {
        let err = SampledFunction::read_csv("x,y\n0,0\n0.5,1\n1,2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }
}
