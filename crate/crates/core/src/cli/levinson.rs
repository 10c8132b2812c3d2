//! Both sides of the Levinson identity
//! `-N = (1/2πi)∫₀^∞ (Tr(S*S′) - pₙ) dλ - βₙ + N_res`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::higher::{high_energy, HighEnergyData};
use crate::potential::Potential;
use crate::scattering::{assemble, consistency_check, AssembleOptions, PhaseShiftTable, TraceCurve};
use crate::spectrum::{total_counts, SpectralReport};

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevinsonOptions {
    pub assemble: AssembleOptions,
    pub quad_tol: f64,
    /// Decades at the top of the grid used for the tail fit.
    pub tail_decades: f64,
    pub residual_tol: f64,
}

impl LevinsonOptions {
    pub fn for_potential(pot: &Potential) -> Self {
        Self {
            assemble: AssembleOptions::for_potential(pot),
            quad_tol: 1e-10,
            tail_decades: 1.0,
            residual_tol: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    /// Theoretical decay exponent `q` of the integrand.
    pub exponent: f64,
    /// Exponent from a log-log fit of the same window.
    pub fitted_exponent: Option<f64>,
    /// Coefficient `c` of `c·λ^{-q}` at the theoretical exponent.
    pub coefficient: f64,
    /// `∫_{λmax}^∞ c·λ^{-q} dλ`.
    pub estimate: f64,
    /// Change of the estimate when the fitted exponent is used instead.
    pub uncertainty: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevinsonDiagnostics {
    pub l_star: usize,
    pub channels: usize,
    pub grid_points: usize,
    pub refinements: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `max |tr/(2πi) + ξ′| / max|ξ′|`.
    pub consistency: f64,
    /// Grid part of the integral, `∫_{λmin}^{λmax}`.
    pub grid_integral: f64,
    /// Extrapolated part on `(0, λmin)`.
    pub low_energy: f64,
    pub tail: TailFit,
    /// `ξ(λmin)` and `ξ(λmax)` from the phases.
    pub xi_low: f64,
    pub xi_high: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevinsonReport {
    pub dimension: usize,
    /// Eigenvalues counted with multiplicity, the zero eigenvalue included.
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "N_negative")]
    pub n_negative: usize,
    #[serde(rename = "N0")]
    pub n0: usize,
    #[serde(rename = "N_res")]
    pub n_res: f64,
    pub resonance: crate::spectrum::Resonance,
    /// `(1/2πi)∫₀^∞ (Tr(S*S′) - pₙ) dλ`.
    pub integral: f64,
    pub integral_imag: f64,
    pub beta_n: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tail_estimate: f64,
    pub error_budget: f64,
    pub sf_prediction: f64,
    pub passed: bool,
    pub diagnostics: LevinsonDiagnostics,
}

/// Integrand `(Tr(S*S′) - pₙ)/(2πi)` on the grid, real and imaginary parts.
fn integrand(curve: &TraceCurve, h: &HighEnergyData) -> (Vec<f64>, Vec<f64>) {
    curve
        .grid
        .iter()
        .zip(&curve.tr)
        .map(|(&l, &t)| {
            let v = (t - h.pn(l)) / TWO_PI_I;
            (v.re, v.im)
        })
        .unzip()
}

/// Composite trapezoid in `s = √λ` below `λ = 1` and in `λ` above.
fn composite(grid: &[f64], f: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..grid.len() - 1 {
        let (l0, l1) = (grid[i], grid[i + 1]);
        if l1 <= 1.0 {
            let (s0, s1) = (l0.sqrt(), l1.sqrt());
            sum += 0.5 * (s1 - s0) * (2.0 * s0 * f[i] + 2.0 * s1 * f[i + 1]);
        } else {
            sum += 0.5 * (l1 - l0) * (f[i] + f[i + 1]);
        }
    }
    sum
}

/// Phase change `δ(λmin) - δ(0⁺)` of one channel below the grid.
///
/// Away from logarithmic thresholds `δ - δ(0⁺) ∝ λ^p` with `p = max(|μ|, 1/2)`;
/// the two-dimensional s-wave instead approaches a multiple of `π` from below
/// like `1/ln λ`, so the whole distance to that multiple is returned.
fn low_energy_phase_change(table: &PhaseShiftTable, c: usize) -> f64 {
    let ch = &table.channels[c];
    let d0 = table.delta[c][0];
    if ch.n == 2 && ch.l == 0 {
        let j = (d0 / PI).ceil();
        return d0 - j * PI;
    }
    let p = ch.mu.abs().max(0.5);
    table.grid[0] * table.delta_prime[c][0] / p
}

/// Disagreement, in units of the integral, between the threshold power law and the
/// phases on the lowest half decade of the grid.
fn low_energy_model_defect(table: &PhaseShiftTable) -> f64 {
    let Some(k) = (1..table.grid.len()).find(|&i| table.grid[i] >= table.grid[0] * 10f64.sqrt()) else {
        return 0.0;
    };
    let mut defect = 0.0;
    for (c, ch) in table.channels.iter().enumerate() {
        if ch.n == 2 && ch.l == 0 {
            continue;
        }
        let p = ch.mu.abs().max(0.5);
        let model = |i: usize| table.grid[i] * table.delta_prime[c][i] / p;
        let phases = table.delta[c][k] - table.delta[c][0];
        defect += ch.multiplicity as f64 * (phases - (model(k) - model(0))).abs() / PI;
    }
    defect
}

fn fit_tail(grid: &[f64], f: &[f64], q: f64, decades: f64) -> TailFit {
    let top = *grid.last().expect("non-empty grid");
    let lo = top / 10f64.powf(decades);
    let window: Vec<(f64, f64)> = grid
        .iter()
        .zip(f)
        .filter(|(l, _)| **l >= lo)
        .map(|(l, v)| (*l, *v))
        .collect();
    let (num, den) = window
        .iter()
        .fold((0.0, 0.0), |(n, d), (l, v)| (n + v * l.powf(-q), d + l.powf(-2.0 * q)));
    let coefficient = if den > 0.0 { num / den } else { 0.0 };
    let estimate = coefficient * top.powf(1.0 - q) / (q - 1.0);

    let same_sign = window.iter().all(|(_, v)| *v > 0.0) || window.iter().all(|(_, v)| *v < 0.0);
    let fitted_exponent = if same_sign && window.len() >= 3 {
        let pts: Vec<(f64, f64)> = window.iter().map(|(l, v)| (l.ln(), v.abs().ln())).collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some(-sxy / sxx)
    } else {
        None
    };
    let uncertainty = match fitted_exponent {
        Some(qf) if qf > 1.0 => {
            let last = window.last().expect("non-empty window");
            let cf = last.1 * last.0.powf(qf);
            (cf * top.powf(1.0 - qf) / (qf - 1.0) - estimate).abs()
        }
        _ => estimate.abs(),
    };
    TailFit {
        exponent: q,
        fitted_exponent,
        coefficient,
        estimate,
        uncertainty,
    }
}

/// Evaluates both sides of the identity from an assembled table and spectral report.
pub fn levinson_from_parts(
    pot: &Potential,
    table: &PhaseShiftTable,
    curve: &TraceCurve,
    spectral: &SpectralReport,
    opts: &LevinsonOptions,
) -> Result<LevinsonReport> {
    let n = pot.dimension();
    let moments = pot.moments(opts.quad_tol)?;
    let h = high_energy(n, &moments)?;
    let mut warnings = spectral.warnings.clone();

    let (re, im) = integrand(curve, &h);
    let grid_integral = composite(&curve.grid, &re);
    let grid_imag = composite(&curve.grid, &im);

    let lambda_min = curve.grid[0];
    let mut low_energy = -((h.big_pn(lambda_min) - TWO_PI_I * h.beta_n) / TWO_PI_I).re;
    for c in 0..table.channels.len() {
        let m = table.channels[c].multiplicity as f64;
        low_energy += m * low_energy_phase_change(table, c) / PI;
    }

    let defect = low_energy_model_defect(table);
    if defect > 0.1 * opts.residual_tol {
        warnings.push(format!("threshold model off by {defect:.3e} at the bottom of the grid"));
    }
    if grid_imag.abs() > 1e-8 {
        warnings.push(format!("integral has imaginary part {grid_imag:.3e}"));
    }

    let tail = fit_tail(&curve.grid, &re, h.tail_exponent(), opts.tail_decades);
    if let Some(qf) = tail.fitted_exponent {
        if (qf - tail.exponent).abs() > 0.25 * tail.exponent {
            warnings.push(format!(
                "tail model: fitted exponent {qf:.3} differs from {} by more than 25%",
                tail.exponent
            ));
        }
    }

    let integral = grid_integral + low_energy + tail.estimate;
    let n_total = spectral.n + spectral.n0;
    let lhs = -(n_total as f64);
    let rhs = integral - h.beta_n + spectral.n_res;
    let residual = (lhs - rhs).abs();
    let error_budget = opts.residual_tol + tail.uncertainty;
    let sf_prediction = 0.5 * (n_total as f64 + spectral.n_res) + 0.5 * integral - 0.5 * h.beta_n;
    let passed = residual <= opts.residual_tol && sf_prediction.abs() <= 0.5 * error_budget;

    let xi = &curve.xi;
    Ok(LevinsonReport {
        dimension: n,
        n: n_total,
        n_negative: spectral.n,
        n0: spectral.n0,
        n_res: spectral.n_res,
        resonance: spectral.resonance,
        integral,
        integral_imag: grid_imag,
        beta_n: h.beta_n,
        lhs,
        rhs,
        residual,
        tail_estimate: tail.estimate,
        error_budget,
        sf_prediction,
        passed,
        diagnostics: LevinsonDiagnostics {
            l_star: table.l_star,
            channels: table.channels.len(),
            grid_points: curve.grid.len(),
            refinements: table.refinements,
            lambda_min,
            lambda_max: *curve.grid.last().expect("non-empty grid"),
            consistency: consistency_check(curve),
            grid_integral,
            low_energy,
            tail,
            xi_low: xi[0],
            xi_high: xi[xi.len() - 1],
            warnings,
        },
    })
}

/// Assembles the phases, lowering `λ_min` by two decades at a time (at most
/// `LOW_EXTENSIONS` times) while the threshold power law does not yet describe the
/// bottom of the grid.
pub fn assemble_for_levinson(pot: &Potential, opts: &LevinsonOptions) -> Result<(PhaseShiftTable, TraceCurve, usize)> {
    let mut a = opts.assemble.clone();
    let mut extensions = 0;
    loop {
        let (table, curve) = assemble(pot, &a)?;
        if extensions == LOW_EXTENSIONS || low_energy_model_defect(&table) <= 0.1 * opts.residual_tol {
            return Ok((table, curve, extensions));
        }
        a.lambda_min *= 1e-2;
        extensions += 1;
    }
}

const LOW_EXTENSIONS: usize = 4;

/// Full verification for one potential.
pub fn levinson_report(pot: &Potential, opts: &LevinsonOptions) -> Result<LevinsonReport> {
    let spectral = total_counts(pot, opts.assemble.l_max)?;
    let (table, curve, _) = assemble_for_levinson(pot, opts)?;
    levinson_from_parts(pot, &table, &curve, &spectral, opts)
}
