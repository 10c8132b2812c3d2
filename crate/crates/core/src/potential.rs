//! Radial, compactly supported potentials and their moments over ℝⁿ.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;
use crate::specfun::sphere_volume;

/// Shape of the radial profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `-d·exp(1 - 1/(1 - (r/a)²))` inside the support.
    Bump,
    /// `-d` inside the support.
    Well,
    /// `d·T(r)` with `T` a monotone cubic interpolant of tabulated samples.
    Table(Table),
}

/// Tabulated samples `(r, T(r))` with strictly increasing `r`, ending at `T(a) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    r: Vec<f64>,
    v: Vec<f64>,
    slopes: Vec<f64>,
}

impl Table {
    pub fn new(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if r.len() != v.len() || r.len() < 2 {
            return Err(Error::Configuration("table needs at least two (r, V) samples".into()));
        }
        if r[0] < 0.0 || r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Configuration(
                "table radii must be nonnegative and strictly increasing".into(),
            ));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Configuration("table values must be finite".into()));
        }
        if *v.last().unwrap() != 0.0 {
            return Err(Error::Configuration(
                "table must end with V(a) = 0 at the support radius".into(),
            ));
        }
        let slopes = pchip_slopes(&r, &v);
        Ok(Self { r, v, slopes })
    }

    /// Reads a two-column whitespace separated text file; `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut r = Vec::new();
        let mut v = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .collect();
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Configuration(format!("{}:{}: bad number {s:?}", path.display(), lineno + 1)))
            };
            if cols.len() != 2 {
                return Err(Error::Configuration(format!(
                    "{}:{}: expected two columns",
                    path.display(),
                    lineno + 1
                )));
            }
            r.push(parse(cols[0])?);
            v.push(parse(cols[1])?);
        }
        Self::new(r, v)
    }

    pub fn radius(&self) -> f64 {
        *self.r.last().unwrap()
    }

    pub fn knots(&self) -> &[f64] {
        &self.r
    }

    fn eval(&self, r: f64) -> Result<f64> {
        let (lo, hi) = (self.r[0], self.radius());
        if r < lo || r > hi {
            return Err(Error::Interpolation { r, lo, hi });
        }
        let i = match self.r.partition_point(|&x| x <= r) {
            0 => 0,
            p if p >= self.r.len() => self.r.len() - 2,
            p => p - 1,
        };
        let h = self.r[i + 1] - self.r[i];
        let t = (r - self.r[i]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        Ok(h00 * self.v[i] + h10 * h * self.slopes[i] + h01 * self.v[i + 1] + h11 * h * self.slopes[i + 1])
    }

    fn max_abs(&self) -> f64 {
        self.v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }
}

/// Fritsch–Carlson slopes for a monotone piecewise cubic Hermite interpolant.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    if n == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s * d0 <= 0.0 {
            0.0
        } else if d0 * d1 <= 0.0 && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    d[0] = end(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

/// A radial potential `V(|x|)` on ℝⁿ supported in the closed ball of radius `a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Potential {
    dimension: usize,
    family: Family,
    depth: f64,
    radius: f64,
}

impl Potential {
    pub fn new(dimension: usize, family: Family, depth: f64, radius: f64) -> Result<Self> {
        if !(1..=4).contains(&dimension) {
            return Err(Error::Domain(format!("dimension {dimension} not in 1..=4")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!("support radius must be positive, got {radius}")));
        }
        if !depth.is_finite() {
            return Err(Error::Domain("depth must be finite".into()));
        }
        if let Family::Table(t) = &family {
            if (t.radius() - radius).abs() > 1e-12 * radius {
                return Err(Error::Configuration(format!(
                    "table ends at r = {} but support radius is {radius}",
                    t.radius()
                )));
            }
        }
        Ok(Self {
            dimension,
            family,
            depth,
            radius,
        })
    }

    pub fn bump(dimension: usize, depth: f64, radius: f64) -> Result<Self> {
        Self::new(dimension, Family::Bump, depth, radius)
    }

    pub fn well(dimension: usize, depth: f64, radius: f64) -> Result<Self> {
        Self::new(dimension, Family::Well, depth, radius)
    }

    /// The zero potential (a well of depth zero).
    pub fn free(dimension: usize) -> Result<Self> {
        Self::new(dimension, Family::Well, 0.0, 1.0)
    }

    pub fn table(dimension: usize, table: Table, multiplier: f64) -> Result<Self> {
        let radius = table.radius();
        Self::new(dimension, Family::Table(table), multiplier, radius)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Same profile with a different depth parameter.
    pub fn with_depth(&self, depth: f64) -> Self {
        Self { depth, ..self.clone() }
    }

    /// Same profile in another dimension.
    pub fn with_dimension(&self, dimension: usize) -> Result<Self> {
        Self::new(dimension, self.family.clone(), self.depth, self.radius)
    }

    /// Returns `c·V`.
    pub fn scaled(&self, c: f64) -> Self {
        self.with_depth(self.depth * c)
    }

    pub fn is_zero(&self) -> bool {
        self.depth == 0.0 || matches!(&self.family, Family::Table(t) if t.v.iter().all(|&x| x == 0.0))
    }

    /// `V(r)`; exactly zero for `r ≥ a`.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if r >= self.radius {
            return Ok(0.0);
        }
        self.evaluate_inside(r)
    }

    /// Left limit of the profile, valid on the closed interval `[0, a]`.
    ///
    /// Integrators working on `[r0, a]` use this so that the piecewise-constant
    /// well keeps its interior value at the endpoint.
    pub fn evaluate_inside(&self, r: f64) -> Result<f64> {
        if r < 0.0 {
            return Err(Error::Domain(format!("negative radius {r}")));
        }
        let x = r / self.radius;
        Ok(match &self.family {
            Family::Bump => {
                if x >= 1.0 {
                    0.0
                } else {
                    -self.depth * (1.0 - 1.0 / (1.0 - x * x)).exp()
                }
            }
            Family::Well => -self.depth,
            Family::Table(t) => self.depth * t.eval(r)?,
        })
    }

    /// `max_r |V(r)|`.
    pub fn sup_abs(&self) -> f64 {
        match &self.family {
            Family::Bump | Family::Well => self.depth.abs(),
            // Monotone interpolation never overshoots the samples.
            Family::Table(t) => self.depth.abs() * t.max_abs(),
        }
    }

    /// Natural energy scale `max|V| + a⁻²`.
    pub fn energy_scale(&self) -> f64 {
        self.sup_abs() + 1.0 / (self.radius * self.radius)
    }

    /// Radii where the profile is not smooth (always includes `0` and `a`).
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.family {
            Family::Table(t) => {
                let mut b: Vec<f64> = t.knots().to_vec();
                if b[0] > 0.0 {
                    b.insert(0, 0.0);
                }
                b
            }
            _ => vec![0.0, self.radius],
        }
    }

    /// `∫ V` and `∫ V²` over ℝⁿ together with `max|V|`.
    pub fn moments(&self, quad_tol: f64) -> Result<Moments> {
        if !(quad_tol > 0.0) {
            return Err(Error::Domain(format!("quad_tol must be positive, got {quad_tol}")));
        }
        let n = self.dimension as i32;
        let vol = sphere_volume(self.dimension);
        if self.is_zero() {
            return Ok(Moments {
                i1: 0.0,
                i2: 0.0,
                sup_abs: 0.0,
            });
        }
        let breaks = self.breakpoints();
        let eval = |r: f64| self.evaluate_inside(r);
        // Surface any interpolation-domain failure before integrating.
        for &b in &breaks {
            eval(b)?;
        }
        let weight = |r: f64| r.powi(n - 1);
        let i1 =
            quad::integrate_adaptive_with_breaks(|r| eval(r).unwrap_or(f64::NAN) * weight(r), &breaks, 0.0, quad_tol)?;
        let i2 = quad::integrate_adaptive_with_breaks(
            |r| eval(r).map(|v| v * v).unwrap_or(f64::NAN) * weight(r),
            &breaks,
            0.0,
            quad_tol,
        )?;
        Ok(Moments {
            i1: vol * i1,
            i2: vol * i2,
            sup_abs: self.sup_abs(),
        })
    }
}

/// Integrated moments of a potential over ℝⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    /// `∫ V(x) dx`
    pub i1: f64,
    /// `∫ V(x)² dx`
    pub i2: f64,
    /// `max_r |V(r)|`
    pub sup_abs: f64,
}
