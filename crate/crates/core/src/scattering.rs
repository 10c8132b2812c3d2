//! Global scattering data assembled from the partial-wave phases:
//! `ξ(λ) = -(1/π) Σ m δ`, `Tr(S*S′) = 2i Σ m δ′`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::radial::{channels, phase_shift, unwrap_continuous, Channel};

/// Continuous phases of every retained channel on a shared energy grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseShiftTable {
    pub channels: Vec<Channel>,
    pub grid: Vec<f64>,
    /// `delta[c][i]` is the phase of channel `c` at `grid[i]`.
    pub delta: Vec<Vec<f64>>,
    pub delta_prime: Vec<Vec<f64>>,
    /// Highest retained `ℓ`.
    pub l_star: usize,
    /// Refinement passes used to resolve the unwrapping.
    pub refinements: usize,
}

/// `Tr(S(λ)*S′(λ))` and `ξ(λ)` on the table grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceCurve {
    pub grid: Vec<f64>,
    pub tr: Vec<Complex64>,
    pub xi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssembleOptions {
    pub l_max: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub points_per_decade: usize,
    /// A channel is negligible once `m·max|δ|` falls below this.
    pub truncation_tol: f64,
    pub step_tol: f64,
    /// Adjacent samples further apart than this (radians) get a midpoint inserted.
    pub refine_jump: f64,
    pub max_refinements: usize,
}

impl AssembleOptions {
    /// Defaults scaled to `E = max|V| + a⁻²`: grid `[1e-4·E, 400·E]`.
    pub fn for_potential(pot: &Potential) -> Self {
        let e = pot.energy_scale();
        Self {
            l_max: 400,
            lambda_min: 1e-4 * e,
            lambda_max: 400.0 * e,
            points_per_decade: 60,
            truncation_tol: 1e-10,
            step_tol: 1e-11,
            refine_jump: 0.3,
            max_refinements: 12,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda_max > 0.0) || !(self.lambda_min > 0.0) || self.lambda_min >= self.lambda_max {
            return Err(Error::Domain(format!(
                "energy grid [{}, {}] is not a positive interval",
                self.lambda_min, self.lambda_max
            )));
        }
        if self.points_per_decade < 2 || !(self.truncation_tol > 0.0) || !(self.step_tol > 0.0) {
            return Err(Error::Domain("grid density and tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Geometric grid from `lo` to `hi` inclusive with about `ppd` points per decade.
pub fn geometric_grid(lo: f64, hi: f64, ppd: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = ((decades * ppd as f64).ceil() as usize).max(2);
    let step = (hi / lo).ln() / n as f64;
    (0..=n)
        .map(|i| if i == n { hi } else { lo * (step * i as f64).exp() })
        .collect()
}

/// Second-order finite differences on a nonuniform grid (one-sided at the ends).
pub fn derivative(x: &[f64], f: &[f64]) -> Vec<f64> {
    let n = x.len();
    assert_eq!(n, f.len());
    if n < 2 {
        return vec![0.0; n];
    }
    if n == 2 {
        let d = (f[1] - f[0]) / (x[1] - x[0]);
        return vec![d, d];
    }
    let three = |i0: usize, at: usize| -> f64 {
        // Derivative at x[at] of the parabola through i0, i0+1, i0+2.
        let (x0, x1, x2) = (x[i0], x[i0 + 1], x[i0 + 2]);
        let t = x[at];
        f[i0] * ((t - x1) + (t - x2)) / ((x0 - x1) * (x0 - x2))
            + f[i0 + 1] * ((t - x0) + (t - x2)) / ((x1 - x0) * (x1 - x2))
            + f[i0 + 2] * ((t - x0) + (t - x1)) / ((x2 - x0) * (x2 - x1))
    };
    let mut d = Vec::with_capacity(n);
    d.push(three(0, 0));
    for i in 1..n - 1 {
        d.push(three(i - 1, i));
    }
    d.push(three(n - 3, n - 1));
    d
}

impl PhaseShiftTable {
    /// Builds a table from continuous phases, differentiating on the grid.
    pub fn from_phases(channels: Vec<Channel>, grid: Vec<f64>, delta: Vec<Vec<f64>>) -> Result<Self> {
        if channels.len() != delta.len() || delta.iter().any(|d| d.len() != grid.len()) {
            return Err(Error::Domain("phase matrix does not match channels × grid".into()));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) || grid.first().is_some_and(|&l| l <= 0.0) {
            return Err(Error::Domain("energy grid must be positive and increasing".into()));
        }
        let delta_prime = delta.iter().map(|d| derivative(&grid, d)).collect();
        let l_star = channels.iter().map(|c| c.l).max().unwrap_or(0);
        Ok(Self {
            channels,
            grid,
            delta,
            delta_prime,
            l_star,
            refinements: 0,
        })
    }

    /// `ξ(λ) = -(1/π) Σ m δ(λ)`.
    pub fn xi(&self) -> Vec<f64> {
        let mut xi = vec![0.0; self.grid.len()];
        for (ch, d) in self.channels.iter().zip(&self.delta) {
            let m = ch.multiplicity as f64;
            for (x, v) in xi.iter_mut().zip(d) {
                *x -= m * v / PI;
            }
        }
        xi
    }

    /// `Σ m δ′(λ)`.
    pub fn weighted_delta_prime(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.grid.len()];
        for (ch, d) in self.channels.iter().zip(&self.delta_prime) {
            let m = ch.multiplicity as f64;
            for (x, v) in s.iter_mut().zip(d) {
                *x += m * v;
            }
        }
        s
    }

    /// `ξ` from the stored phases and `Tr(S*S′)` from the stored derivatives.
    pub fn trace_curve(&self) -> TraceCurve {
        TraceCurve {
            grid: self.grid.clone(),
            tr: self
                .weighted_delta_prime()
                .into_iter()
                .map(|s| Complex64::new(0.0, 2.0 * s))
                .collect(),
            xi: self.xi(),
        }
    }

    pub fn channel_index(&self, l: usize) -> Option<usize> {
        self.channels.iter().position(|c| c.l == l)
    }
}

fn raw_phases(pot: &Potential, ch: &Channel, grid: &[f64], tol: f64) -> Result<Vec<f64>> {
    grid.par_iter().map(|&l| phase_shift(pot, ch, l, tol)).collect()
}

/// Nearest-branch lift from the top of the grid, without failing on large jumps.
fn lift(raw: &[f64]) -> Vec<f64> {
    let n = raw.len();
    let mut d = vec![0.0; n];
    if n == 0 {
        return d;
    }
    d[n - 1] = raw[n - 1] - PI * (raw[n - 1] / PI).round();
    for i in (0..n - 1).rev() {
        d[i] = raw[i] + PI * ((d[i + 1] - raw[i]) / PI).round();
    }
    d
}

/// Computes, unwraps and differentiates the phases of every non-negligible channel.
pub fn assemble(pot: &Potential, opts: &AssembleOptions) -> Result<(PhaseShiftTable, TraceCurve)> {
    opts.validate()?;
    let n = pot.dimension();
    let mut grid = geometric_grid(opts.lambda_min, opts.lambda_max, opts.points_per_decade);
    let a2v = pot.radius().powi(2) * pot.sup_abs();

    let mut kept: Vec<Channel> = Vec::new();
    let mut raw: Vec<Vec<f64>> = Vec::new();
    let candidates = channels(n, opts.l_max)?;
    let mut truncated = n == 1;
    let mut residual = 0.0_f64;
    for ch in candidates {
        let r = raw_phases(pot, &ch, &grid, opts.step_tol)?;
        let peak = lift(&r).iter().fold(0.0_f64, |m, d| m.max(d.abs()));
        let weight = ch.multiplicity as f64 * peak;
        if n > 1 && !kept.is_empty() && weight < opts.truncation_tol && ch.centrifugal() >= a2v {
            truncated = true;
            break;
        }
        residual = weight;
        kept.push(ch);
        raw.push(r);
    }
    if !truncated {
        return Err(Error::Truncation {
            l_max: opts.l_max,
            residual,
        });
    }

    let mut refinements = 0;
    loop {
        let lifted: Vec<Vec<f64>> = raw.iter().map(|r| lift(r)).collect();
        let mut flagged = vec![false; grid.len() - 1];
        for d in &lifted {
            for i in 0..grid.len() - 1 {
                if (d[i + 1] - d[i]).abs() > opts.refine_jump {
                    flagged[i] = true;
                }
            }
        }
        if !flagged.iter().any(|&f| f) || refinements >= opts.max_refinements {
            break;
        }
        refinements += 1;
        let mids: Vec<f64> = (0..grid.len() - 1)
            .filter(|&i| flagged[i])
            .map(|i| (grid[i] * grid[i + 1]).sqrt())
            .collect();
        let fresh: Vec<Vec<f64>> = kept
            .par_iter()
            .map(|ch| raw_phases(pot, ch, &mids, opts.step_tol))
            .collect::<Result<_>>()?;
        let mut merged_grid = Vec::with_capacity(grid.len() + mids.len());
        let mut merged: Vec<Vec<f64>> = vec![Vec::with_capacity(grid.len() + mids.len()); kept.len()];
        let mut m = 0;
        for i in 0..grid.len() {
            merged_grid.push(grid[i]);
            for c in 0..kept.len() {
                merged[c].push(raw[c][i]);
            }
            if i + 1 < grid.len() && flagged[i] {
                merged_grid.push(mids[m]);
                for c in 0..kept.len() {
                    merged[c].push(fresh[c][m]);
                }
                m += 1;
            }
        }
        grid = merged_grid;
        raw = merged;
    }

    let mut delta = Vec::with_capacity(kept.len());
    for r in &raw {
        let samples: Vec<(f64, f64)> = grid.iter().copied().zip(r.iter().copied()).collect();
        delta.push(unwrap_continuous(&samples)?.delta);
    }
    let mut table = PhaseShiftTable::from_phases(kept, grid, delta)?;
    table.refinements = refinements;
    let curve = table.trace_curve();
    Ok((table, curve))
}

/// `max |tr/(2πi) + ξ′| / max|ξ′|` over interior points, `ξ′` by finite differences of `ξ`.
pub fn consistency_check(tc: &TraceCurve) -> f64 {
    let n = tc.grid.len();
    if n < 3 {
        return 0.0;
    }
    let dxi = derivative(&tc.grid, &tc.xi);
    let scale = dxi.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    if scale == 0.0 {
        let worst = tc.tr.iter().fold(0.0_f64, |m, t| m.max(t.norm()));
        return worst;
    }
    let worst = tc.tr[1..n - 1]
        .iter()
        .zip(&dxi[1..n - 1])
        .map(|(t, d)| (t / Complex64::new(0.0, 2.0 * PI) + d).norm())
        .fold(0.0_f64, f64::max);
    worst / scale
}
