//! Gragg–Bulirsch–Stoer extrapolation integrator for two-component systems.

use crate::error::{Error, Result};

pub type State = [f64; 2];

const SEQUENCE: [usize; 9] = [2, 4, 6, 8, 10, 12, 14, 16, 18];

/// Adaptive extrapolation integrator.
///
/// Errors are measured in the weighted norm `√((w0·y0)² + (w1·y1)²)` relative
/// to the norm of the state, so `tol` is a relative local error per step.
#[derive(Debug, Clone, Copy)]
pub struct BulirschStoer {
    pub tol: f64,
    pub h_max: f64,
    pub weights: [f64; 2],
}

impl BulirschStoer {
    pub fn new(tol: f64, h_max: f64, weights: [f64; 2]) -> Self {
        Self { tol, h_max, weights }
    }

    fn norm(&self, y: &State) -> f64 {
        ((self.weights[0] * y[0]).powi(2) + (self.weights[1] * y[1]).powi(2)).sqrt()
    }

    fn modified_midpoint<F: Fn(f64, &State) -> State>(
        f: &F,
        x: f64,
        y: &State,
        dydx: &State,
        big_h: f64,
        nstep: usize,
    ) -> State {
        let h = big_h / nstep as f64;
        let mut zm = *y;
        let mut zn = [y[0] + h * dydx[0], y[1] + h * dydx[1]];
        let mut xx = x + h;
        let mut d = f(xx, &zn);
        let h2 = 2.0 * h;
        for _ in 1..nstep {
            let swap = [zm[0] + h2 * d[0], zm[1] + h2 * d[1]];
            zm = zn;
            zn = swap;
            xx += h;
            d = f(xx, &zn);
        }
        [0.5 * (zm[0] + zn[0] + h * d[0]), 0.5 * (zm[1] + zn[1] + h * d[1])]
    }

    /// Integrates from `x0` to `x1`, invoking `observe(x, y)` after each accepted step.
    ///
    /// `observe` may rescale the state in place; callers use this for linear
    /// systems whose solutions grow by many orders of magnitude.
    pub fn integrate<F, O>(&self, f: F, x0: f64, x1: f64, y0: State, h0: f64, mut observe: O) -> Result<State>
    where
        F: Fn(f64, &State) -> State,
        O: FnMut(f64, &mut State),
    {
        let mut x = x0;
        let mut y = y0;
        let span = x1 - x0;
        if span <= 0.0 {
            return Ok(y);
        }
        let mut h = h0.min(self.h_max).min(span);
        let h_min = 1e-14 * x1.abs().max(x0.abs()).max(1e-300);
        let kmax = SEQUENCE.len();
        while x < x1 {
            if x + h > x1 || x1 - (x + h) < 1e-12 * span {
                h = x1 - x;
            }
            let dydx = f(x, &y);
            let scale = self.norm(&y).max(1e-300);
            let mut prev_row: Vec<State> = Vec::new();
            let mut accepted = None;
            for k in 0..kmax {
                let mut row: Vec<State> = Vec::with_capacity(k + 1);
                row.push(Self::modified_midpoint(&f, x, &y, &dydx, h, SEQUENCE[k]));
                // Aitken–Neville extrapolation in h².
                for j in 1..=k {
                    let ratio = (SEQUENCE[k] as f64 / SEQUENCE[k - j] as f64).powi(2);
                    let a = row[j - 1];
                    let b = prev_row[j - 1];
                    row.push([
                        a[0] + (a[0] - b[0]) / (ratio - 1.0),
                        a[1] + (a[1] - b[1]) / (ratio - 1.0),
                    ]);
                }
                if k >= 2 {
                    let (t, s) = (row[k], row[k - 1]);
                    let err = self.norm(&[t[0] - s[0], t[1] - s[1]]) / scale;
                    if err <= self.tol {
                        accepted = Some((t, k, err));
                        break;
                    }
                }
                prev_row = row;
            }
            match accepted {
                Some((ynew, k, err)) => {
                    x += h;
                    y = ynew;
                    observe(x, &mut y);
                    let order = (2 * k + 1) as f64;
                    let grow = if err == 0.0 {
                        4.0
                    } else {
                        (0.5 * self.tol / err).powf(1.0 / order).clamp(0.2, 4.0)
                    };
                    let bias = if k <= 4 { 1.0 } else { 0.7 };
                    h = (h * grow * bias).min(self.h_max);
                }
                None => {
                    h *= 0.25;
                    if h < h_min {
                        return Err(Error::Stiffness { r: x });
                    }
                }
            }
        }
        Ok(y)
    }
}
