//! Partial-wave reduction of `-Δ + V` for radial `V`.
//!
//! In the channel of order `μ = ℓ + (n-2)/2` the reduced radial function obeys
//!
//! ```text
//! -u'' + [V(r) + (μ² - 1/4)/r²] u = k² u,      u(r) ~ r^{μ+1/2} as r → 0.
//! ```
//!
//! For `n = 1` the even and odd parity sectors are the channels `μ = -1/2`
//! (`u'(0) = 0`) and `μ = +1/2` (`u(0) = 0`).

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{BulirschStoer, State};
use crate::potential::Potential;
use crate::specfun::riccati_bessel_scaled;

/// One partial-wave sector of the radial decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    pub n: usize,
    pub l: usize,
    pub mu: f64,
    pub multiplicity: usize,
}

impl Channel {
    pub fn new(n: usize, l: usize) -> Result<Self> {
        if !(1..=4).contains(&n) {
            return Err(Error::Domain(format!("dimension {n} not in 1..=4")));
        }
        if n == 1 && l > 1 {
            return Err(Error::Domain(
                "n = 1 has only the even (l = 0) and odd (l = 1) channels".into(),
            ));
        }
        let mu = if n == 1 {
            if l == 0 {
                -0.5
            } else {
                0.5
            }
        } else {
            l as f64 + (n as f64 - 2.0) / 2.0
        };
        Ok(Self {
            n,
            l,
            mu,
            multiplicity: multiplicity(n, l),
        })
    }

    /// Coefficient `μ² - 1/4` of the centrifugal term.
    pub fn centrifugal(&self) -> f64 {
        self.mu * self.mu - 0.25
    }

    /// Exponent of the growing zero-energy exterior solution, `|μ| + 1/2`.
    pub fn growth_exponent(&self) -> f64 {
        self.mu.abs() + 0.5
    }

    pub fn label(&self) -> String {
        if self.n == 1 {
            if self.l == 0 {
                "even".into()
            } else {
                "odd".into()
            }
        } else {
            format!("l{}", self.l)
        }
    }
}

/// Number of degree-`ℓ` spherical harmonics on `𝕊ⁿ⁻¹` (parity sectors for `n = 1`).
pub fn multiplicity(n: usize, l: usize) -> usize {
    match n {
        1 => 1,
        2 => {
            if l == 0 {
                1
            } else {
                2
            }
        }
        _ => {
            // (2ℓ+n-2)·(ℓ+n-3)! / (ℓ!·(n-2)!)
            let mut binom: u128 = 1;
            for i in 1..=(n - 3) as u128 {
                binom = binom * (l as u128 + i) / i;
            }
            // binom = C(ℓ+n-3, n-3); multiply by (2ℓ+n-2)/(n-2)
            ((2 * l + n - 2) as u128 * binom / (n - 2) as u128) as usize
        }
    }
}

/// Channels `ℓ = 0..=l_max` in increasing order (two parity channels for `n = 1`).
pub fn channels(n: usize, l_max: usize) -> Result<Vec<Channel>> {
    if !(1..=4).contains(&n) {
        return Err(Error::Domain(format!("dimension {n} not in 1..=4")));
    }
    let top = if n == 1 { 1 } else { l_max };
    (0..=top).map(|l| Channel::new(n, l)).collect()
}

/// Regular solution sampled at the accepted integrator steps.
///
/// Values are stored as mantissas with a per-point natural-log scale:
/// the solution is `u[i]·exp(log_scale[i])`, normalised to `r^{μ+1/2}` at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub u_prime: Vec<f64>,
    pub log_scale: Vec<f64>,
    pub k: f64,
}

impl RadialSolution {
    pub fn value(&self, i: usize) -> f64 {
        self.u[i] * self.log_scale[i].exp()
    }

    pub fn derivative(&self, i: usize) -> f64 {
        self.u_prime[i] * self.log_scale[i].exp()
    }

    fn last(&self) -> (f64, f64, f64) {
        let i = self.grid.len() - 1;
        (self.u[i], self.u_prime[i], self.log_scale[i])
    }

    /// Sign changes of `u` along the recorded grid (endpoint included).
    pub fn sign_changes(&self) -> usize {
        Self::count_sign_changes(&self.u)
    }

    /// Sign changes of `u` with the final grid point left out.
    pub fn sign_changes_before_end(&self) -> usize {
        Self::count_sign_changes(&self.u[..self.u.len().saturating_sub(1)])
    }

    fn count_sign_changes(values: &[f64]) -> usize {
        let mut count = 0;
        let mut prev = 0.0_f64;
        for &u in values {
            if u != 0.0 {
                if prev != 0.0 && (u > 0.0) != (prev > 0.0) {
                    count += 1;
                }
                prev = u;
            }
        }
        count
    }
}

/// Two-term Frobenius start: `u ≈ r^{s}(1 + c r²)` with `s = μ + 1/2`.
///
/// Returns `(r0, u mantissa, u' mantissa, log scale)`.
fn startup(pot: &Potential, ch: &Channel, k: f64, step_tol: f64) -> Result<(f64, f64, f64, f64)> {
    let a = pot.radius();
    let v0 = pot.evaluate_inside(0.0)?;
    let s = ch.mu + 0.5;
    let q0 = v0 - k * k;
    let c1 = q0 / (4.0 * (ch.mu + 1.0));
    // Neglected r⁴ term: [q0·c1 + V''(0)/2] / (8(μ+2)); bound V'' by max|V|/a².
    let v2 = pot.sup_abs() / (a * a);
    let c2 = (q0.abs() * c1.abs() + v2) / (8.0 * (ch.mu + 2.0));
    let target = (0.01 * step_tol).max(1e-16);
    let mut r0 = 1e-3 * a;
    if c2 > 0.0 {
        r0 = r0.min((target / c2).powf(0.25));
    }
    r0 = r0.max(1e-9 * a);
    if c2 * r0.powi(4) > 1e-6 {
        return Err(Error::Startup { r0, mu: ch.mu });
    }
    let u = 1.0 + c1 * r0 * r0;
    let up = (s + (s + 2.0) * c1 * r0 * r0) / r0;
    Ok((r0, u, up, s * r0.ln()))
}

struct Propagation {
    grid: Vec<f64>,
    u: Vec<f64>,
    up: Vec<f64>,
    log_scale: Vec<f64>,
}

/// Propagates `(u, u')` from `r_from` to `r_to` through the channel equation.
#[allow(clippy::too_many_arguments)]
fn propagate(
    pot: &Potential,
    ch: &Channel,
    k: f64,
    r_from: f64,
    r_to: f64,
    y0: State,
    log0: f64,
    step_tol: f64,
    record: bool,
) -> Result<Propagation> {
    let a = pot.radius();
    let kappa = (pot.sup_abs() + k * k + 1.0 / (a * a)).sqrt();
    let bs = BulirschStoer::new(step_tol, 1.0 / kappa, [kappa, 1.0]);
    let cent = ch.centrifugal();
    let k2 = k * k;

    let mut out = Propagation {
        grid: vec![r_from],
        u: vec![y0[0]],
        up: vec![y0[1]],
        log_scale: vec![log0],
    };
    let mut y = y0;
    let mut log_scale = log0;

    let mut breaks: Vec<f64> = pot
        .breakpoints()
        .into_iter()
        .filter(|&b| b > r_from && b < r_to)
        .collect();
    breaks.insert(0, r_from);
    breaks.push(r_to);

    for seg in breaks.windows(2) {
        let (lo, hi) = (seg[0], seg[1]);
        let inside = hi <= a * (1.0 + 1e-15);
        // Probe once so that table-domain failures surface as errors, not NaNs.
        if inside {
            pot.evaluate_inside(0.5 * (lo + hi))?;
        }
        let rhs = |r: f64, y: &State| -> State {
            let v = if inside {
                pot.evaluate_inside(r).unwrap_or(f64::NAN)
            } else {
                0.0
            };
            [y[1], (cent / (r * r) + v - k2) * y[0]]
        };
        let h0 = (0.1 * lo).max(1e-3 * (hi - lo)).min(hi - lo);
        y = bs.integrate(rhs, lo, hi, y, h0, |r, y| {
            let n = (y[0] * kappa).abs().max(y[1].abs());
            if !(1e-100..=1e100).contains(&n) && n > 0.0 {
                y[0] /= n;
                y[1] /= n;
                log_scale += n.ln();
            }
            if record {
                out.grid.push(r);
                out.u.push(y[0]);
                out.up.push(y[1]);
                out.log_scale.push(log_scale);
            }
        })?;
        if !(y[0].is_finite() && y[1].is_finite()) {
            return Err(Error::Stiffness { r: hi });
        }
    }
    if !record {
        out.grid.push(r_to);
        out.u.push(y[0]);
        out.up.push(y[1]);
        out.log_scale.push(log_scale);
    }
    Ok(out)
}

/// Regular solution from the origin out to `r_max ≥ a`.
pub fn integrate_regular(pot: &Potential, ch: &Channel, k: f64, r_max: f64, step_tol: f64) -> Result<RadialSolution> {
    let sol = regular_internal(pot, ch, k, r_max, step_tol, true)?;
    Ok(sol)
}

fn regular_internal(
    pot: &Potential,
    ch: &Channel,
    k: f64,
    r_max: f64,
    step_tol: f64,
    record: bool,
) -> Result<RadialSolution> {
    if r_max < pot.radius() {
        return Err(Error::Domain(format!(
            "matching radius {r_max} inside the support radius {}",
            pot.radius()
        )));
    }
    if !(step_tol > 0.0) {
        return Err(Error::Domain("step_tol must be positive".into()));
    }
    if !(k >= 0.0) {
        return Err(Error::Domain(format!("momentum must be nonnegative, got {k}")));
    }
    let (r0, u0, up0, log0) = startup(pot, ch, k, step_tol)?;
    let p = propagate(pot, ch, k, r0, r_max, [u0, up0], log0, step_tol, record)?;
    Ok(RadialSolution {
        grid: p.grid,
        u: p.u,
        u_prime: p.up,
        log_scale: p.log_scale,
        k,
    })
}

/// Integrates an arbitrary initial value problem of the channel equation on `[r_from, r_to]`.
pub fn integrate_ivp(
    pot: &Potential,
    ch: &Channel,
    k: f64,
    r_from: f64,
    r_to: f64,
    y0: State,
    step_tol: f64,
) -> Result<RadialSolution> {
    let p = propagate(pot, ch, k, r_from, r_to, y0, 0.0, step_tol, true)?;
    Ok(RadialSolution {
        grid: p.grid,
        u: p.u,
        u_prime: p.up,
        log_scale: p.log_scale,
        k,
    })
}

/// Free exterior basis at `x = kR`: `(ĵ, ĵ', ŷ, ŷ', log scale)` with `ĵ = j·e^{-s}`, `ŷ = y·e^{s}`.
fn matching_basis(mu: f64, x: f64) -> Result<(f64, f64, f64, f64, f64)> {
    if mu == -0.5 {
        let (s, c) = x.sin_cos();
        return Ok((c, -s, s, c, 0.0));
    }
    if mu == 0.5 {
        let (s, c) = x.sin_cos();
        return Ok((s, c, -c, s, 0.0));
    }
    let b = riccati_bessel_scaled(mu.abs(), x)?;
    Ok((b.j, b.jp, b.y, b.yp, b.scale))
}

/// Phase shift `δ mod π`, in `(-π/2, π/2]`, matched at `r_match ≥ a`.
pub fn phase_shift_at(pot: &Potential, ch: &Channel, lambda: f64, r_match: f64, tol: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("phase shift needs lambda > 0, got {lambda}")));
    }
    if pot.is_zero() {
        return Ok(0.0);
    }
    let k = lambda.sqrt();
    let sol = regular_internal(pot, ch, k, r_match, tol, false)?;
    let (u, up, _) = sol.last();
    let (j, jp, y, yp, s) = matching_basis(ch.mu, k * r_match)?;
    let num = j * up - k * jp * u;
    let den = y * up - k * yp * u;
    if num.abs() < 1e-300 && den.abs() < 1e-300 {
        return Err(Error::DegenerateMatching { lambda });
    }
    if den == 0.0 {
        return Ok(FRAC_PI_2);
    }
    // tan δ = e^{-2s}·num/den
    let log_t = num.abs().ln() - den.abs().ln() - 2.0 * s;
    let sign = if (num < 0.0) != (den < 0.0) { -1.0 } else { 1.0 };
    if num == 0.0 || log_t < -745.0 {
        return Ok(0.0);
    }
    let delta = if log_t > 700.0 {
        FRAC_PI_2
    } else {
        (sign * log_t.exp()).atan()
    };
    Ok(if delta <= -FRAC_PI_2 { delta + PI } else { delta })
}

/// Phase shift matched at the support radius.
pub fn phase_shift(pot: &Potential, ch: &Channel, lambda: f64, tol: f64) -> Result<f64> {
    phase_shift_at(pot, ch, lambda, pot.radius(), tol)
}

/// Phase of one channel on an energy grid, made continuous in `λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCurve {
    pub lambda: Vec<f64>,
    pub delta: Vec<f64>,
}

/// Largest branch-corrected jump accepted between adjacent samples.
pub const MAX_UNWRAP_JUMP: f64 = 1.0;

/// Lifts `δ mod π` samples to a continuous branch pinned nearest 0 at the largest `λ`.
pub fn unwrap_continuous(samples: &[(f64, f64)]) -> Result<PhaseCurve> {
    let mut s: Vec<(f64, f64)> = samples.to_vec();
    s.sort_by(|x, y| x.0.total_cmp(&y.0));
    let n = s.len();
    let mut delta = vec![0.0; n];
    if n == 0 {
        return Ok(PhaseCurve { lambda: vec![], delta });
    }
    let top = s[n - 1].1;
    delta[n - 1] = top - PI * (top / PI).round();
    for i in (0..n - 1).rev() {
        let raw = s[i].1;
        let m = ((delta[i + 1] - raw) / PI).round();
        let cand = raw + m * PI;
        let jump = (cand - delta[i + 1]).abs();
        if jump > MAX_UNWRAP_JUMP {
            return Err(Error::GridResolution {
                lo: s[i].0,
                hi: s[i + 1].0,
                jump,
            });
        }
        delta[i] = cand;
    }
    Ok(PhaseCurve {
        lambda: s.iter().map(|p| p.0).collect(),
        delta,
    })
}

/// Zero-energy data of the regular solution at the support radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroEnergy {
    /// Coefficient of the growing exterior solution.
    pub a: f64,
    /// Coefficient of the subdominant exterior solution.
    pub b: f64,
    /// Relative size of the growing component at `r = a`, in `[0, 1]`.
    pub growth_fraction: f64,
    /// Sign changes of `u` on `(0, a]`.
    pub interior_nodes: usize,
    /// Sign changes of `u` up to the last step before `a`.
    pub nodes_before_a: usize,
    /// The growing exterior tail has a node beyond `r = a`.
    pub exterior_node: bool,
    /// `u(a)` and `u'(a)` up to a common positive factor.
    pub u_at_a: f64,
    pub du_at_a: f64,
}

/// Exterior basis for `V = 0, k = 0`: `(f1, f1', f2, f2')` at `r`.
fn exterior_zero_basis(mu: f64, r: f64) -> (f64, f64, f64, f64) {
    let nu = mu.abs();
    if nu == 0.0 {
        let sr = r.sqrt();
        let lr = r.ln();
        (sr * lr, (0.5 * lr + 1.0) / sr, sr, 0.5 / sr)
    } else {
        (
            r.powf(nu + 0.5),
            (nu + 0.5) * r.powf(nu - 0.5),
            r.powf(0.5 - nu),
            (0.5 - nu) * r.powf(-nu - 0.5),
        )
    }
}

/// Zero-energy regular solution decomposed outside the support as
/// `u = A·r^{|μ|+1/2} + B·r^{1/2-|μ|}` (or `A·r^{1/2}ln r + B·r^{1/2}` when `μ = 0`).
pub fn zero_energy(pot: &Potential, ch: &Channel, step_tol: f64) -> Result<ZeroEnergy> {
    let a = pot.radius();
    let sol = regular_internal(pot, ch, 0.0, a, step_tol, true)?;
    let (um, upm, ls) = sol.last();
    let (f1, f1p, f2, f2p) = exterior_zero_basis(ch.mu, a);
    let det = f1 * f2p - f2 * f1p;
    let norm_m = (f1.abs() + f2.abs()).max(f1p.abs() + f2p.abs());
    let norm_inv = (f2p.abs() + f2.abs()).max(f1p.abs() + f1.abs()) / det.abs();
    let condition = norm_m * norm_inv;
    if condition > 1e12 || !condition.is_finite() {
        return Err(Error::Conditioning { condition });
    }
    let am = (um * f2p - upm * f2) / det;
    let bm = (f1 * upm - f1p * um) / det;
    let scale = ls.exp();
    let grow = (am * if ch.mu == 0.0 { a.sqrt() } else { f1 }).abs();
    let sub = (bm * f2).abs();
    let growth_fraction = if grow + sub == 0.0 { 0.0 } else { grow / (grow + sub) };
    let exterior_node = am != 0.0 && um != 0.0 && (am > 0.0) != (um > 0.0);
    Ok(ZeroEnergy {
        a: am * scale,
        b: bm * scale,
        growth_fraction,
        interior_nodes: sol.sign_changes(),
        nodes_before_a: sol.sign_changes_before_end(),
        exterior_node,
        u_at_a: um,
        du_at_a: upm,
    })
}

/// `(A, B)` of [`zero_energy`].
pub fn zero_energy_coefficients(pot: &Potential, ch: &Channel) -> Result<(f64, f64)> {
    let z = zero_energy(pot, ch, 1e-12)?;
    Ok((z.a, z.b))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Analytic s-wave phase of the 3D square well `-d·χ_{r<a}`, branch by continuity
    /// from its high-energy value.
    pub(crate) fn well_s_wave(d: f64, a: f64, k: f64) -> f64 {
        let kappa = (k * k + d).sqrt();
        ((k / kappa) * (kappa * a).tan()).atan() - k * a
    }

    fn well_mod_pi(d: f64, a: f64, k: f64) -> f64 {
        let x = well_s_wave(d, a, k);
        let y = x - PI * (x / PI).round();
        if y <= -FRAC_PI_2 {
            y + PI
        } else {
            y
        }
    }

    fn mod_pi_dist(x: f64, y: f64) -> f64 {
        let d = (x - y) / PI;
        (d - d.round()).abs() * PI
    }

    #[test]
    fn channel_multiplicities() {
        let m3: Vec<usize> = channels(3, 2).unwrap().iter().map(|c| c.multiplicity).collect();
        assert_eq!(m3, vec![1, 3, 5]);
        let m2: Vec<usize> = channels(2, 2).unwrap().iter().map(|c| c.multiplicity).collect();
        assert_eq!(m2, vec![1, 2, 2]);
        let c1 = channels(1, 7).unwrap();
        assert_eq!(c1.len(), 2);
        assert_eq!((c1[0].multiplicity, c1[1].multiplicity), (1, 1));
        assert_eq!((c1[0].mu, c1[1].mu), (-0.5, 0.5));
        let m4: Vec<usize> = channels(4, 3).unwrap().iter().map(|c| c.multiplicity).collect();
        assert_eq!(m4, vec![1, 4, 9, 16]);
        assert!(channels(5, 1).is_err());
    }

    #[test]
    fn multiplicity_matches_harmonic_polynomial_count() {
        // dim H_ℓ = dim P_ℓ - dim P_{ℓ-2}, P_ℓ = homogeneous polynomials of degree ℓ in n variables.
        fn homogeneous(n: usize, deg: usize) -> usize {
            fn count(n: usize, deg: usize) -> usize {
                if n == 1 {
                    return 1;
                }
                (0..=deg).map(|d| count(n - 1, deg - d)).sum()
            }
            count(n, deg)
        }
        for n in 3..=4 {
            for l in 0..8 {
                let brute = homogeneous(n, l) - if l >= 2 { homogeneous(n, l - 2) } else { 0 };
                assert_eq!(multiplicity(n, l), brute, "n={n} l={l}");
            }
        }
    }

    #[test]
    fn free_solution_is_riccati_bessel() {
        let pot = Potential::free(3).unwrap();
        for l in [0usize, 1, 3] {
            let ch = Channel::new(3, l).unwrap();
            let k = 2.3;
            let sol = integrate_regular(&pot, &ch, k, 3.0, 1e-12).unwrap();
            let mut ratio = None;
            for i in (0..sol.grid.len()).step_by(5) {
                let r = sol.grid[i];
                let b = riccati_bessel_scaled(ch.mu, k * r).unwrap().unscaled().unwrap();
                if b.j.abs() < 1e-3 {
                    continue;
                }
                let q = sol.value(i) / b.j;
                let q0 = *ratio.get_or_insert(q);
                assert!((q - q0).abs() < 1e-8 * q0.abs(), "l={l} r={r}");
            }
        }
    }

    #[test]
    fn well_interior_at_zero_energy_is_sine() {
        let d: f64 = 4.0;
        let pot = Potential::well(3, d, 1.0).unwrap();
        let ch = Channel::new(3, 0).unwrap();
        let sol = integrate_regular(&pot, &ch, 0.0, 1.0, 1e-12).unwrap();
        let norm = d.sqrt();
        for i in 0..sol.grid.len() {
            let r = sol.grid[i];
            let exact = (norm * r).sin() / norm;
            assert!((sol.value(i) - exact).abs() < 1e-9, "r={r}");
        }
    }

    #[test]
    fn wronskian_is_conserved() {
        let pot = Potential::bump(2, 6.0, 1.0).unwrap();
        for l in [0usize, 1, 4] {
            let ch = Channel::new(2, l).unwrap();
            for k in [0.0, 1.5, 9.0] {
                let s1 = integrate_ivp(&pot, &ch, k, 0.05, 2.0, [1.0, 0.0], 1e-12).unwrap();
                let s2 = integrate_ivp(&pot, &ch, k, 0.05, 2.0, [0.0, 1.0], 1e-12).unwrap();
                let i = s1.grid.len() - 1;
                let j = s2.grid.len() - 1;
                let (p, q) = (s1.value(i) * s2.derivative(j), s1.derivative(i) * s2.value(j));
                let w = p - q;
                assert!((w - 1.0).abs() < 1e-9 * p.abs().max(1.0), "l={l} k={k}: W = {w}");
            }
        }
    }

    #[test]
    fn free_phase_is_zero() {
        let pot = Potential::free(3).unwrap();
        let ch = Channel::new(3, 2).unwrap();
        assert_eq!(phase_shift(&pot, &ch, 3.0, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn square_well_s_wave_matches_closed_form() {
        for d in [1.0, 4.0, 10.0] {
            let pot = Potential::well(3, d, 1.0).unwrap();
            let ch = Channel::new(3, 0).unwrap();
            for k in [0.05, 0.5, 1.7, 6.0, 30.0] {
                let got = phase_shift(&pot, &ch, k * k, 1e-12).unwrap();
                let exact = well_mod_pi(d, 1.0, k);
                assert!(mod_pi_dist(got, exact) < 1e-9, "d={d} k={k}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn phase_independent_of_matching_radius() {
        let pot = Potential::bump(2, 3.0, 1.0).unwrap();
        let ch = Channel::new(2, 1).unwrap();
        for lambda in [0.3, 4.0, 50.0] {
            let d1 = phase_shift_at(&pot, &ch, lambda, 1.0, 1e-12).unwrap();
            for r in [1.5, 2.0] {
                let d2 = phase_shift_at(&pot, &ch, lambda, r, 1e-12).unwrap();
                assert!(mod_pi_dist(d1, d2) < 1e-8, "lambda={lambda} R={r}: {d1} vs {d2}");
            }
        }
    }

    #[test]
    fn one_dimensional_channels_are_parity_sectors() {
        // Even/odd well phases: tan(ka+δ_e) = (q/k) tan(qa), cot(ka+δ_o)... via the
        // interior log-derivative with q = √(k²+d).
        let (d, a) = (2.0_f64, 1.0_f64);
        let pot = Potential::well(1, d, a).unwrap();
        let k = 1.3_f64;
        let q = (k * k + d).sqrt();
        let even = Channel::new(1, 0).unwrap();
        let odd = Channel::new(1, 1).unwrap();
        // even: u = cos(qx), L = -q tan(qa) = -k tan(ka + δ)
        let de = ((q / k) * (q * a).tan()).atan() - k * a;
        // odd: u = sin(qx), L = q cot(qa) = k cot(ka + δ)
        let dodd = ((k / q) * (q * a).tan()).atan() - k * a;
        let ge = phase_shift(&pot, &even, k * k, 1e-12).unwrap();
        let go = phase_shift(&pot, &odd, k * k, 1e-12).unwrap();
        assert!(mod_pi_dist(ge, de) < 1e-9, "{ge} vs {de}");
        assert!(mod_pi_dist(go, dodd) < 1e-9, "{go} vs {dodd}");
    }

    #[test]
    fn born_regime_is_linear() {
        let base = Potential::bump(3, 1.0, 1.0).unwrap();
        let ch = Channel::new(3, 1).unwrap();
        let lambda = 2.0;
        let c = 1e-3;
        let d1 = phase_shift(&base.scaled(c), &ch, lambda, 1e-13).unwrap() / c;
        let d2 = phase_shift(&base.scaled(c / 2.0), &ch, lambda, 1e-13).unwrap() / (c / 2.0);
        assert!((d1 - d2).abs() < 0.01 * d2.abs(), "{d1} vs {d2}");
    }

    #[test]
    fn unwrap_examples() {
        let flat: Vec<(f64, f64)> = (1..10).map(|i| (i as f64, 0.3)).collect();
        let c = unwrap_continuous(&flat).unwrap();
        assert!(c.delta.iter().all(|&d| d == 0.3));

        // Synthetic sawtooth: the true phase decreases linearly from 2.5 to 0.1.
        let truth = |l: f64| 2.5 - 0.24 * l;
        let raw: Vec<(f64, f64)> = (0..=10)
            .map(|i| {
                let l = i as f64;
                let t = truth(l);
                let m = t - PI * (t / PI).round();
                (l, if m <= -FRAC_PI_2 { m + PI } else { m })
            })
            .collect();
        let corrections = raw.iter().filter(|p| (p.1 - truth(p.0)).abs() > 1.0).count();
        assert!(corrections > 0);
        let c = unwrap_continuous(&raw).unwrap();
        for (l, d) in c.lambda.iter().zip(&c.delta) {
            assert!((d - truth(*l)).abs() < 1e-12);
        }

        let bad = vec![(1.0, 0.0), (2.0, 1.2)];
        assert!(matches!(unwrap_continuous(&bad), Err(Error::GridResolution { .. })));
    }

    #[test]
    fn well_with_one_bound_state_drops_by_pi() {
        let pot = Potential::well(3, 4.0, 1.0).unwrap();
        let ch = Channel::new(3, 0).unwrap();
        let samples: Vec<(f64, f64)> = (0..=400)
            .map(|i| {
                let lambda = 1e-6 * 10f64.powf(i as f64 * 10.0 / 400.0);
                (lambda, phase_shift(&pot, &ch, lambda, 1e-12).unwrap())
            })
            .collect();
        let c = unwrap_continuous(&samples).unwrap();
        let drop = c.delta[0] - c.delta[c.delta.len() - 1];
        let (k_lo, k_hi) = (1e-3, 1e2);
        let exact = PI + well_mod_pi(4.0, 1.0, k_lo) - well_mod_pi(4.0, 1.0, k_hi);
        assert!((drop - exact).abs() < 1e-8, "{drop} vs {exact}");
    }

    #[test]
    fn zero_energy_examples() {
        let free = Potential::free(3).unwrap();
        for l in 0..3 {
            let (_, b) = zero_energy_coefficients(&free, &Channel::new(3, l).unwrap()).unwrap();
            assert!(b.abs() < 1e-10);
        }
        let d = (PI / 2.0).powi(2);
        let pot = Potential::well(3, d, 1.0).unwrap();
        let z = zero_energy(&pot, &Channel::new(3, 0).unwrap(), 1e-12).unwrap();
        assert!(z.growth_fraction < 1e-8, "{z:?}");

        // A changes sign across each s-wave threshold ((2j+1)π/2)².
        let ch = Channel::new(3, 0).unwrap();
        let mut prev = None;
        for j in 0..3 {
            let t = ((2 * j + 1) as f64 * PI / 2.0).powi(2);
            let below = zero_energy(&pot.with_depth(t * 0.97), &ch, 1e-12).unwrap().a;
            let above = zero_energy(&pot.with_depth(t * 1.03), &ch, 1e-12).unwrap().a;
            assert!(below * above < 0.0, "threshold {j}");
            if let Some(p) = prev {
                assert!(p * below > 0.0);
            }
            prev = Some(above);
        }
    }
}
