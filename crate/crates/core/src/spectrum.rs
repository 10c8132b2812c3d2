//! Bound-state counting, zero-energy classification and a finite-difference box oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::quad::gauss_legendre;
use crate::radial::{channels, zero_energy, Channel, ZeroEnergy};

const ZERO_ENERGY_TOL: f64 = 1e-12;
/// Growth fraction at or below which `A = 0` is declared.
pub const ZERO_TOL: f64 = 1e-6;
/// Growth fraction below which a nonzero `A` is flagged as ambiguous.
pub const AMBIGUOUS_TOL: f64 = 1e-3;

/// Zero-energy resonance type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Resonance {
    None,
    /// Bounded zero-energy solution in the even sector.
    N1Even,
    /// Bounded zero-energy solution in the odd sector only.
    N1Odd,
    /// `ℓ = 0` log-free solution in two dimensions; recorded, never counted.
    N2S,
    /// `ℓ = 1` resonance in two dimensions with the given number of harmonics.
    N2P(u8),
    N3S,
    N4S,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroEnergyClass {
    pub n0: usize,
    pub resonance: Resonance,
    pub n_res: f64,
    /// Two-dimensional s-wave resonance, present alongside any p-wave one.
    pub s_resonance: bool,
    pub warnings: Vec<String>,
    /// Classification obtained if every ambiguous channel were declared resonant.
    pub alternative: Option<(usize, Resonance, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub per_channel: Vec<(Channel, usize)>,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "N0")]
    pub n0: usize,
    pub resonance: Resonance,
    #[serde(rename = "N_res")]
    pub n_res: f64,
    pub s_resonance: bool,
    pub warnings: Vec<String>,
}

/// Negative eigenvalues of one channel, from the nodes of the zero-energy solution.
pub fn count_channel(pot: &Potential, ch: &Channel) -> Result<usize> {
    let z = zero_energy(pot, ch, ZERO_ENERGY_TOL)?;
    count_from(&z, pot.radius())
}

fn count_from(z: &ZeroEnergy, a: f64) -> Result<usize> {
    if z.u_at_a == 0.0 && z.du_at_a == 0.0 {
        return Err(Error::Refinement { r: a });
    }
    if z.u_at_a.abs() <= 1e-10 * z.du_at_a.abs() * a {
        // Node at the support radius: it is the last one, inside or out.
        return Ok(z.nodes_before_a + 1);
    }
    // A threshold state (A = 0) is not a negative eigenvalue.
    let exterior = z.exterior_node && z.growth_fraction > ZERO_TOL;
    Ok(z.interior_nodes + usize::from(exterior))
}

/// Channels whose zero-energy data matter: all for `n = 1`, otherwise `ℓ` up to the
/// first channel beyond `ℓ = 0` without bound states.
fn scan_channels(pot: &Potential, l_max: usize) -> Result<Vec<(Channel, ZeroEnergy, usize)>> {
    let n = pot.dimension();
    let mut out = Vec::new();
    for ch in channels(n, l_max)? {
        let z = zero_energy(pot, &ch, ZERO_ENERGY_TOL)?;
        let c = count_from(&z, pot.radius())?;
        out.push((ch, z, c));
        if n > 1 && ch.l >= 1 && c == 0 {
            return Ok(out);
        }
    }
    if n == 1 {
        return Ok(out);
    }
    Err(Error::Truncation {
        l_max,
        residual: out.last().map_or(0.0, |x| x.2 as f64),
    })
}

fn classify(n: usize, zero: &[(Channel, bool)]) -> (usize, Resonance, f64, bool) {
    let hit = |l: usize| zero.iter().any(|(c, z)| c.l == l && *z);
    let n0: usize = zero
        .iter()
        .filter(|(c, z)| *z && c.mu > 1.0)
        .map(|(c, _)| c.multiplicity)
        .sum();
    match n {
        1 => {
            if hit(0) {
                (n0, Resonance::N1Even, 0.0, false)
            } else if hit(1) {
                (n0, Resonance::N1Odd, 0.0, false)
            } else {
                // Generic 1D: the even phase tends to π(N_even - 1/2), so ξ(0+) = -N + 1/2.
                (n0, Resonance::None, -0.5, false)
            }
        }
        2 => {
            let s = hit(0);
            if hit(1) {
                let m = zero.iter().find(|(c, _)| c.l == 1).map_or(2, |(c, _)| c.multiplicity);
                (n0, Resonance::N2P(m as u8), m as f64, s)
            } else if s {
                (n0, Resonance::N2S, 0.0, true)
            } else {
                (n0, Resonance::None, 0.0, false)
            }
        }
        3 => {
            if hit(0) {
                (n0, Resonance::N3S, 0.5, false)
            } else {
                (n0, Resonance::None, 0.0, false)
            }
        }
        _ => {
            if hit(0) {
                (n0, Resonance::N4S, 1.0, false)
            } else {
                (n0, Resonance::None, 0.0, false)
            }
        }
    }
}

fn classify_scanned(n: usize, scanned: &[(Channel, ZeroEnergy, usize)]) -> ZeroEnergyClass {
    let firm: Vec<(Channel, bool)> = scanned
        .iter()
        .map(|(c, z, _)| (*c, z.growth_fraction <= ZERO_TOL))
        .collect();
    let loose: Vec<(Channel, bool)> = scanned
        .iter()
        .map(|(c, z, _)| (*c, z.growth_fraction <= AMBIGUOUS_TOL))
        .collect();
    let mut warnings = Vec::new();
    for (c, z, _) in scanned {
        if z.growth_fraction > ZERO_TOL && z.growth_fraction <= AMBIGUOUS_TOL {
            warnings.push(format!(
                "ambiguous threshold in channel {}: growth fraction {:.3e}",
                c.label(),
                z.growth_fraction
            ));
        }
    }
    let (n0, resonance, n_res, s_resonance) = classify(n, &firm);
    let alternative = if warnings.is_empty() {
        None
    } else {
        let (a0, ar, an, _) = classify(n, &loose);
        Some((a0, ar, an))
    };
    ZeroEnergyClass {
        n0,
        resonance,
        n_res,
        s_resonance,
        warnings,
        alternative,
    }
}

/// `N₀`, resonance type and `N_res` from the zero-energy coefficients of the low channels.
pub fn classify_zero_energy(pot: &Potential) -> Result<ZeroEnergyClass> {
    let scanned = scan_channels(pot, 400)?;
    Ok(classify_scanned(pot.dimension(), &scanned))
}

/// Multiplicity-weighted bound-state count together with the zero-energy classification.
pub fn total_counts(pot: &Potential, l_max: usize) -> Result<SpectralReport> {
    let scanned = scan_channels(pot, l_max)?;
    let class = classify_scanned(pot.dimension(), &scanned);
    let per_channel: Vec<(Channel, usize)> = scanned.iter().map(|(c, _, k)| (*c, *k)).collect();
    let n = per_channel.iter().map(|(c, k)| c.multiplicity * k).sum();
    Ok(SpectralReport {
        per_channel,
        n,
        n0: class.n0,
        resonance: class.resonance,
        n_res: class.n_res,
        s_resonance: class.s_resonance,
        warnings: class.warnings,
    })
}

/// Symmetric tridiagonal matrix `(diag, off)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `sigma` (Sylvester inertia of `T - σ`).
    pub fn count_below(&self, sigma: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.diag.len() {
            let b2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            d = self.diag[i] - sigma - if i == 0 { 0.0 } else { b2 / d };
            if d == 0.0 {
                d = -f64::EPSILON * (self.diag[i].abs() + sigma.abs() + 1.0);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection on the inertia count.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// All eigenvalues below `sigma`, ascending.
    pub fn eigenvalues_below(&self, sigma: f64) -> Vec<f64> {
        (0..self.count_below(sigma)).map(|k| self.eigenvalue(k)).collect()
    }

    pub fn shifted(&self, alpha: f64) -> Self {
        Self {
            diag: self.diag.iter().map(|d| d + alpha).collect(),
            off: self.off.clone(),
        }
    }
}

/// Finite-difference box discretization of one channel on `[0, L]` with `u(L) = 0`.
///
/// Dirichlet vertex grid `r_i = i·h`; the even `n = 1` sector uses a cell-centred
/// grid with a reflecting origin.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxChannel {
    pub r: Vec<f64>,
    pub h: f64,
    pub kinetic: Tridiagonal,
    /// `V(r_i)` on the grid.
    pub potential: Vec<f64>,
}

impl BoxChannel {
    pub fn new(pot: &Potential, ch: &Channel, length: f64, points: usize) -> Result<Self> {
        if !(length > pot.radius()) || points < 3 {
            return Err(Error::Configuration(format!(
                "box [0, {length}] with {points} points cannot contain the support radius {}",
                pot.radius()
            )));
        }
        let neumann = ch.n == 1 && ch.l == 0;
        let h = if neumann {
            length / (points as f64 + 0.5)
        } else {
            length / (points as f64 + 1.0)
        };
        let r: Vec<f64> = (1..=points)
            .map(|i| if neumann { (i as f64 - 0.5) * h } else { i as f64 * h })
            .collect();
        let cent = ch.centrifugal();
        let h2 = 1.0 / (h * h);
        let mut diag: Vec<f64> = r.iter().map(|&x| 2.0 * h2 + cent / (x * x)).collect();
        if neumann {
            diag[0] -= h2;
        }
        let off = vec![-h2; points - 1];
        let potential = cell_averages(pot, &r, h)?;
        Ok(Self {
            r,
            h,
            kinetic: Tridiagonal { diag, off },
            potential,
        })
    }

    /// `H₀ + t·V`.
    pub fn hamiltonian(&self, t: f64) -> Tridiagonal {
        Tridiagonal {
            diag: self
                .kinetic
                .diag
                .iter()
                .zip(&self.potential)
                .map(|(k, v)| k + t * v)
                .collect(),
            off: self.kinetic.off.clone(),
        }
    }
}

/// `V` averaged over the cell `[r_i - h/2, r_i + h/2]`, so that a jump at `a`
/// costs second-order rather than first-order accuracy.
fn cell_averages(pot: &Potential, r: &[f64], h: f64) -> Result<Vec<f64>> {
    let (x, w) = gauss_legendre(4);
    let a = pot.radius();
    let breaks = pot.breakpoints();
    r.iter()
        .map(|&c| {
            let (lo, hi) = ((c - 0.5 * h).max(0.0), c + 0.5 * h);
            if lo >= a {
                return Ok(0.0);
            }
            let mut cuts = vec![lo];
            cuts.extend(breaks.iter().copied().filter(|&b| b > lo && b < hi));
            if a > lo && a < hi && !cuts.contains(&a) {
                cuts.push(a);
            }
            cuts.push(hi);
            cuts.sort_by(f64::total_cmp);
            let mut sum = 0.0;
            for seg in cuts.windows(2) {
                let (s0, s1) = (seg[0], seg[1]);
                if s0 >= a {
                    break;
                }
                let (m, half) = (0.5 * (s0 + s1), 0.5 * (s1 - s0));
                for (xi, wi) in x.iter().zip(&w) {
                    sum += wi * half * pot.evaluate_inside(m + half * xi)?;
                }
            }
            Ok(sum / (hi - lo))
        })
        .collect()
}

/// Default box oracle: `L = 20a`, 4000 points.
pub fn box_oracle_count(pot: &Potential, ch: &Channel) -> Result<usize> {
    box_count(pot, ch, 20.0 * pot.radius(), 4000)
}

pub fn box_count(pot: &Potential, ch: &Channel, length: f64, points: usize) -> Result<usize> {
    Ok(BoxChannel::new(pot, ch, length, points)?
        .hamiltonian(1.0)
        .count_below(0.0))
}

/// Lowest box eigenvalue over the channels carrying bound states (`ν` estimate).
pub fn lowest_eigenvalue(pot: &Potential, length: f64, points: usize) -> Result<f64> {
    let n = pot.dimension();
    let first = Channel::new(n, 0)?;
    let b = BoxChannel::new(pot, &first, length, points)?;
    Ok(b.hamiltonian(1.0).eigenvalue(0))
}

/// Threshold depths where the growth coefficient `A(d)` changes sign in `[lo, hi]`.
pub fn resonance_scan(pot: &Potential, ch: &Channel, lo: f64, hi: f64, samples: usize) -> Result<Vec<f64>> {
    if !(hi > lo) || samples < 2 {
        return Err(Error::Domain(format!(
            "scan interval [{lo}, {hi}] with {samples} samples"
        )));
    }
    let a_of = |d: f64| -> Result<f64> { Ok(zero_energy(&pot.with_depth(d), ch, ZERO_ENERGY_TOL)?.a) };
    let depths: Vec<f64> = (0..samples)
        .map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64)
        .collect();
    let values: Vec<f64> = depths.iter().map(|&d| a_of(d)).collect::<Result<_>>()?;
    let mut roots = Vec::new();
    for i in 0..samples - 1 {
        let (mut x0, mut x1) = (depths[i], depths[i + 1]);
        let (mut f0, f1) = (values[i], values[i + 1]);
        if f0 == 0.0 {
            roots.push(x0);
            continue;
        }
        if f0 * f1 >= 0.0 {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (x0 + x1);
            if mid <= x0 || mid >= x1 || (x1 - x0) <= 1e-15 * mid.abs().max(1e-300) {
                break;
            }
            let fm = a_of(mid)?;
            if fm == 0.0 {
                x0 = mid;
                x1 = mid;
                break;
            }
            if (fm < 0.0) == (f0 < 0.0) {
                x0 = mid;
                f0 = fm;
            } else {
                x1 = mid;
            }
        }
        roots.push(0.5 * (x0 + x1));
    }
    if values[samples - 1] == 0.0 {
        roots.push(depths[samples - 1]);
    }
    Ok(roots)
}
