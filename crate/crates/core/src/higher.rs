//! High-energy polynomials `Pₙ(λ) = 2πi·βₙ + Σ C_ℓ λ^{n/2-ℓ}` and `pₙ = Pₙ′` for `n ≤ 4`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::Moments;
use crate::specfun::sphere_volume;

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HighEnergyData {
    pub n: usize,
    /// `C_ℓ` for `ℓ = 1..=⌊(n-1)/2⌋`.
    pub coeffs: Vec<Complex64>,
    /// `c_ℓ = (n/2 - ℓ)·C_ℓ`.
    pub c: Vec<Complex64>,
    pub beta_n: f64,
}

/// `C₁(n, V) = -2πi·Vol(𝕊ⁿ⁻¹)/(2(2π)ⁿ)·∫V`.
pub fn first_order_coefficient(n: usize, m: &Moments) -> Result<Complex64> {
    if n < 2 {
        return Err(Error::Domain(format!("first-order coefficient needs n >= 2, got {n}")));
    }
    let factor = sphere_volume(n) / (2.0 * (2.0 * PI).powi(n as i32));
    Ok(-TWO_PI_I * factor * m.i1)
}

pub fn high_energy(n: usize, m: &Moments) -> Result<HighEnergyData> {
    let (coeffs, beta_n) = match n {
        1 => (vec![], 0.0),
        2 => (vec![], -m.i1 / (4.0 * PI)),
        3 => (vec![first_order_coefficient(3, m)?], 0.0),
        4 => (
            vec![first_order_coefficient(4, m)?],
            sphere_volume(4) / (4.0 * (2.0 * PI).powi(4)) * m.i2,
        ),
        _ => {
            return Err(Error::Domain(format!(
                "high-energy coefficients unsupported for n = {n}"
            )))
        }
    };
    let c = coeffs
        .iter()
        .enumerate()
        .map(|(i, &cl)| cl * (n as f64 / 2.0 - (i + 1) as f64))
        .collect();
    Ok(HighEnergyData { n, coeffs, c, beta_n })
}

impl HighEnergyData {
    /// `pₙ(λ) = Σ c_ℓ λ^{n/2-ℓ-1}`.
    pub fn pn(&self, lambda: f64) -> Complex64 {
        let half = self.n as f64 / 2.0;
        self.c
            .iter()
            .enumerate()
            .map(|(i, &c)| c * lambda.powf(half - (i + 1) as f64 - 1.0))
            .sum()
    }

    /// `Pₙ(λ) = 2πi·βₙ + Σ C_ℓ λ^{n/2-ℓ}`.
    pub fn big_pn(&self, lambda: f64) -> Complex64 {
        let half = self.n as f64 / 2.0;
        TWO_PI_I * self.beta_n
            + self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| c * lambda.powf(half - (i + 1) as f64))
                .sum::<Complex64>()
    }

    /// `∫_lo^hi pₙ(λ) dλ = Pₙ(hi) - Pₙ(lo)`.
    pub fn pn_integral(&self, lo: f64, hi: f64) -> Complex64 {
        self.big_pn(hi) - self.big_pn(lo)
    }

    /// Decay exponent `q` of the first omitted term of `Tr(S*S′) - pₙ`.
    pub fn tail_exponent(&self) -> f64 {
        if self.n % 2 == 1 {
            1.5
        } else {
            2.0
        }
    }
}

pub fn pn_eval(h: &HighEnergyData, lambda: f64) -> Complex64 {
    h.pn(lambda)
}
