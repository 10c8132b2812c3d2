//! ξ(λ) for the three-dimensional square well against phases built from spherical
//! Bessel functions, computed here without the crate's special functions.

use std::f64::consts::PI;

use levinson::potential::Potential;
use levinson::scattering::{assemble, AssembleOptions};

/// `(j_l(x), j_l′(x))` for `l = 0..=l_max` by Miller's downward recurrence.
fn spherical_j(l_max: usize, x: f64) -> Vec<(f64, f64)> {
    let start = l_max + 20 + x as usize;
    let mut j = vec![0.0; start + 2];
    j[start + 1] = 0.0;
    j[start] = 1e-300;
    for l in (1..=start).rev() {
        j[l - 1] = (2 * l + 1) as f64 / x * j[l] - j[l + 1];
        if j[l - 1].abs() > 1e200 {
            for v in j.iter_mut().skip(l - 1) {
                *v *= 1e-200;
            }
        }
    }
    let scale = (x.sin() / x) / j[0];
    let j: Vec<f64> = j.iter().map(|v| v * scale).collect();
    (0..=l_max)
        .map(|l| {
            let d = if l == 0 {
                -j[1]
            } else {
                j[l - 1] - (l + 1) as f64 / x * j[l]
            };
            (j[l], d)
        })
        .collect()
}

/// `(y_l(x), y_l′(x))` by upward recurrence, stable for `y`.
fn spherical_y(l_max: usize, x: f64) -> Vec<(f64, f64)> {
    let mut y = vec![-x.cos() / x, -x.cos() / (x * x) - x.sin() / x];
    for l in 1..=l_max {
        let next = (2 * l + 1) as f64 / x * y[l] - y[l - 1];
        y.push(next);
    }
    (0..=l_max)
        .map(|l| {
            let d = if l == 0 {
                -y[1]
            } else {
                y[l - 1] - (l + 1) as f64 / x * y[l]
            };
            (y[l], d)
        })
        .collect()
}

/// `δ_l mod π` for `V = -d` on `r < a`.
fn well_phases(d: f64, a: f64, k: f64, l_max: usize) -> Vec<f64> {
    let kappa = (k * k + d).sqrt();
    let ji = spherical_j(l_max, kappa * a);
    let jo = spherical_j(l_max, k * a);
    let yo = spherical_y(l_max, k * a);
    (0..=l_max)
        .map(|l| {
            let (jin, djin) = ji[l];
            let (j, dj) = jo[l];
            let (y, dy) = yo[l];
            let num = k * dj * jin - kappa * j * djin;
            let den = k * dy * jin - kappa * y * djin;
            (num / den).atan()
        })
        .collect()
}

fn unwrap_from_top(raw: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; raw.len()];
    let last = raw.len() - 1;
    out[last] = raw[last] - PI * (raw[last] / PI).round();
    for i in (0..last).rev() {
        let mut v = raw[i];
        v += PI * ((out[i + 1] - v) / PI).round();
        out[i] = v;
    }
    out
}

#[test]
fn xi_matches_spherical_bessel_oracle() {
    let (d, a) = (4.0, 1.0);
    let pot = Potential::well(3, d, a).unwrap();
    let opts = AssembleOptions::for_potential(&pot);
    let (table, curve) = assemble(&pot, &opts).unwrap();
    let l_max = table.channels.len() - 1;
    let raw: Vec<Vec<f64>> = table
        .grid
        .iter()
        .map(|&lam| well_phases(d, a, lam.sqrt(), l_max))
        .collect();
    let mut xi = vec![0.0; table.grid.len()];
    for l in 0..=l_max {
        let column: Vec<f64> = raw.iter().map(|r| r[l]).collect();
        let delta = unwrap_from_top(&column);
        for (x, dl) in xi.iter_mut().zip(&delta) {
            *x -= (2 * l + 1) as f64 * dl / PI;
        }
    }
    let worst = xi
        .iter()
        .zip(&curve.xi)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    assert!(worst <= 1e-6, "max |ξ - ξ_oracle| = {worst:.3e}");
    // One bound s-state: ξ(0+) = -1.
    assert!((curve.xi[0] + 1.0).abs() < 0.05, "ξ(λmin) = {}", curve.xi[0]);
}

#[test]
fn oracle_bessel_functions_are_sane() {
    for &x in &[0.3, 2.0, 17.0] {
        let j = spherical_j(3, x);
        let y = spherical_y(3, x);
        assert!((j[1].0 - (x.sin() / (x * x) - x.cos() / x)).abs() < 1e-13);
        for l in 0..=3 {
            // Wronskian j_l y_l′ - j_l′ y_l = 1/x².
            let w = j[l].0 * y[l].1 - j[l].1 * y[l].0;
            assert!(
                (w - 1.0 / (x * x)).abs() < 1e-10 * (1.0 / (x * x)).max(1.0),
                "l={l} x={x}"
            );
        }
    }
}
