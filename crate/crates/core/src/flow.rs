//! Spectral flow of Hermitian matrix paths: the Phillips partition definition, its
//! bounded transform, the analytic formula
//! `sf = ∫₀¹ Tr(Ḋ g_s(D)) dt - Tr(G_s(D₁) - B₁/2 - G_s(D₀) + B₀/2)`, and finite-difference
//! Hamiltonian paths `H₀ + tV (+ α)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::quad::{gauss_legendre, gauss_legendre_composite};
use crate::radial::Channel;
use crate::scattering::{assemble, AssembleOptions, PhaseShiftTable};
use crate::specfun::{gamma_fn, incomplete_beta};
use crate::spectrum::{BoxChannel, Tridiagonal};

pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalues within this distance of 0 at an endpoint trigger the shift below.
pub const KERNEL_TOL: f64 = 1e-10;
/// Identity shift applied to a path whose endpoint has a (near) kernel.
pub const KERNEL_SHIFT: f64 = 1e-9;
const HERMITIAN_TOL: f64 = 1e-12;
const MAX_PARTITION: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
enum PathKind {
    Affine {
        d0: CMatrix,
        delta: CMatrix,
    },
    /// Piecewise affine through the samples.
    Sampled {
        t: Vec<f64>,
        d: Vec<CMatrix>,
    },
}

/// A path `t ↦ D_t` of Hermitian matrices on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPath {
    dim: usize,
    kind: PathKind,
    shift: f64,
}

fn hermitian_defect(m: &CMatrix) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check_hermitian(m: &CMatrix, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Domain(format!("{what} is not square")));
    }
    let defect = hermitian_defect(m);
    if defect > HERMITIAN_TOL {
        return Err(Error::Domain(format!("{what} is not Hermitian (defect {defect:.2e})")));
    }
    Ok(())
}

impl MatrixPath {
    /// `D_t = D₀ + t·Δ`.
    pub fn affine(d0: CMatrix, delta: CMatrix) -> Result<Self> {
        check_hermitian(&d0, "D0")?;
        check_hermitian(&delta, "Δ")?;
        if d0.shape() != delta.shape() {
            return Err(Error::Domain("D0 and Δ differ in shape".into()));
        }
        Ok(Self {
            dim: d0.nrows(),
            kind: PathKind::Affine { d0, delta },
            shift: 0.0,
        })
    }

    /// Straight segment from `a` to `b`.
    pub fn segment(a: CMatrix, b: CMatrix) -> Result<Self> {
        let delta = &b - &a;
        Self::affine(a, delta)
    }

    /// Piecewise-affine interpolation of samples with `t₀ = 0 < … < t_last = 1`.
    pub fn sampled(samples: Vec<(f64, CMatrix)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Domain("a sampled path needs at least two samples".into()));
        }
        let (t, d): (Vec<f64>, Vec<CMatrix>) = samples.into_iter().unzip();
        if t[0] != 0.0 || t[t.len() - 1] != 1.0 || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("sample times must increase from 0 to 1".into()));
        }
        let dim = d[0].nrows();
        for (i, m) in d.iter().enumerate() {
            check_hermitian(m, &format!("sample {i}"))?;
            if m.nrows() != dim {
                return Err(Error::Domain("samples differ in shape".into()));
            }
        }
        Ok(Self {
            dim,
            kind: PathKind::Sampled { t, d },
            shift: 0.0,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Identity shift added to every `D_t` (nonzero only after kernel perturbation).
    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn at(&self, t: f64) -> CMatrix {
        let mut m = match &self.kind {
            PathKind::Affine { d0, delta } => d0 + delta * Complex64::new(t, 0.0),
            PathKind::Sampled { t: ts, d } => {
                let i = segment_index(ts, t);
                let w = (t - ts[i]) / (ts[i + 1] - ts[i]);
                &d[i] * Complex64::new(1.0 - w, 0.0) + &d[i + 1] * Complex64::new(w, 0.0)
            }
        };
        if self.shift != 0.0 {
            for i in 0..self.dim {
                m[(i, i)] += self.shift;
            }
        }
        m
    }

    /// `Ḋ_t`: `Δ` for affine paths, the segment slope for sampled ones.
    pub fn derivative(&self, t: f64) -> CMatrix {
        match &self.kind {
            PathKind::Affine { delta, .. } => delta.clone(),
            PathKind::Sampled { t: ts, d } => {
                let i = segment_index(ts, t);
                (&d[i + 1] - &d[i]) / Complex64::new(ts[i + 1] - ts[i], 0.0)
            }
        }
    }

    /// Points where the path may fail to be differentiable.
    fn knots(&self) -> Vec<f64> {
        match &self.kind {
            PathKind::Affine { .. } => vec![0.0, 1.0],
            PathKind::Sampled { t, .. } => t.clone(),
        }
    }

    /// Shifts the path by `+1e-9·Id` if an endpoint eigenvalue lies within `1e-10` of 0.
    pub fn with_kernel_convention(&self) -> (Self, bool) {
        let near = |m: &CMatrix| eigenvalues(m).iter().any(|e| e.abs() <= KERNEL_TOL);
        if near(&self.at(0.0)) || near(&self.at(1.0)) {
            let mut p = self.clone();
            p.shift += KERNEL_SHIFT;
            (p, true)
        } else {
            (self.clone(), false)
        }
    }

    /// Random affine path between two independent GUE-type samples.
    pub fn random_affine<R: Rng>(dim: usize, rng: &mut R) -> Result<Self> {
        let a = random_hermitian(dim, rng);
        let b = random_hermitian(dim, rng);
        Self::segment(a, b)
    }
}

fn segment_index(ts: &[f64], t: f64) -> usize {
    match ts.binary_search_by(|x| x.total_cmp(&t)) {
        Ok(i) => i.min(ts.len() - 2),
        Err(i) => i.saturating_sub(1).min(ts.len() - 2),
    }
}

/// Hermitian matrix `(X + X*)/2` with standard complex Gaussian entries.
pub fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    let x = CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        )
    });
    (&x + x.adjoint()) * Complex64::new(0.5, 0.0)
}

fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut e: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Orthonormal basis of the range of `χ_{[0,∞)}(D)`.
fn nonnegative_basis(m: &CMatrix) -> CMatrix {
    let eig = m.clone().symmetric_eigen();
    let cols: Vec<usize> = (0..m.nrows()).filter(|&i| eig.eigenvalues[i] >= 0.0).collect();
    CMatrix::from_fn(m.nrows(), cols.len(), |i, j| eig.eigenvectors[(i, cols[j])])
}

/// Comparison of `P_a = χ_{[0,∞)}(D_a)` and `P_b = χ_{[0,∞)}(D_b)`.
struct ProjectorPair {
    rank_a: usize,
    rank_b: usize,
    /// Cosines of the principal angles between the two ranges, descending.
    cosines: Vec<f64>,
}

impl ProjectorPair {
    fn new(a: &CMatrix, b: &CMatrix) -> Self {
        let qa = nonnegative_basis(a);
        let qb = nonnegative_basis(b);
        let (ra, rb) = (qa.ncols(), qb.ncols());
        let mut cosines = if ra == 0 || rb == 0 {
            vec![]
        } else {
            let overlap = qa.adjoint() * &qb;
            overlap.singular_values().iter().copied().collect::<Vec<_>>()
        };
        cosines.sort_by(|x, y| y.total_cmp(x));
        Self {
            rank_a: ra,
            rank_b: rb,
            cosines,
        }
    }

    /// Ranges agree up to the rank change: every shared direction has `cos ≥ √3/2`,
    /// so that `‖P_a - P_b‖ < 1/2` off the kernel and cokernel of `P_a P_b`.
    fn resolved(&self) -> bool {
        let shared = self.rank_a.min(self.rank_b);
        self.cosines.iter().take(shared).all(|&c| c >= 0.75_f64.sqrt()) && self.rank_a.abs_diff(self.rank_b) <= 1
    }

    /// `Index(P_a P_b : P_b ℋ → P_a ℋ) = dim ker - dim coker`.
    fn index(&self) -> i64 {
        let rank = self.cosines.iter().filter(|&&c| c > 0.5).count();
        let kernel = self.rank_b - rank;
        let cokernel = self.rank_a - rank;
        kernel as i64 - cokernel as i64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhillipsResult {
    pub sf: i64,
    pub partition: Vec<f64>,
    /// The `+1e-9·Id` endpoint convention was applied.
    pub perturbed: bool,
}

/// Phillips spectral flow of an arbitrary continuous Hermitian family on `[0, 1]`.
fn phillips_family<F: Fn(f64) -> CMatrix>(family: F, knots: &[f64]) -> Result<(i64, Vec<f64>)> {
    let mut partition: Vec<f64> = Vec::new();
    for w in knots.windows(2) {
        for k in 0..8 {
            partition.push(w[0] + (w[1] - w[0]) * k as f64 / 8.0);
        }
    }
    partition.push(1.0);
    let mut mats: Vec<CMatrix> = partition.iter().map(|&t| family(t)).collect();
    let mut i = 0;
    let mut sf = 0;
    while i + 1 < partition.len() {
        let pair = ProjectorPair::new(&mats[i], &mats[i + 1]);
        if pair.resolved() {
            sf += pair.index();
            i += 1;
            continue;
        }
        let mid = 0.5 * (partition[i] + partition[i + 1]);
        if partition.len() >= MAX_PARTITION || mid <= partition[i] || mid >= partition[i + 1] {
            return Err(Error::PathResolution { t: partition[i] });
        }
        partition.insert(i + 1, mid);
        mats.insert(i + 1, family(mid));
    }
    Ok((sf, partition))
}

/// Phillips spectral flow; a negative-to-positive crossing counts `+1`.
pub fn spectral_flow_phillips(path: &MatrixPath) -> Result<PhillipsResult> {
    let (p, perturbed) = path.with_kernel_convention();
    let (sf, partition) = phillips_family(|t| p.at(t), &p.knots())?;
    Ok(PhillipsResult {
        sf,
        partition,
        perturbed,
    })
}

/// `F(x) = x/√(1+x²)` applied through the spectral theorem.
pub fn bounded_transform(m: &CMatrix) -> CMatrix {
    let eig = m.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let f = eig.eigenvalues.map(|x| x / (1.0 + x * x).sqrt());
    let mut scaled = v.clone();
    for (j, fj) in f.iter().enumerate() {
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= *fj;
        }
    }
    scaled * v.adjoint()
}

/// Phillips flow of `F(D_t)`.
pub fn bounded_transform_flow(path: &MatrixPath) -> Result<i64> {
    let (p, _) = path.with_kernel_convention();
    let (sf, _) = phillips_family(|t| bounded_transform(&p.at(t)), &p.knots())?;
    Ok(sf)
}

/// Reference flow: net count of sorted eigenvalues changing sign on a uniform `t` grid.
pub fn crossing_count(path: &MatrixPath, steps: usize) -> i64 {
    let (p, _) = path.with_kernel_convention();
    let mut prev = eigenvalues(&p.at(0.0));
    let mut sf = 0;
    for k in 1..=steps {
        let cur = eigenvalues(&p.at(k as f64 / steps as f64));
        for (a, b) in prev.iter().zip(&cur) {
            match (*a >= 0.0, *b >= 0.0) {
                (false, true) => sf += 1,
                (true, false) => sf -= 1,
                _ => {}
            }
        }
        prev = cur;
    }
    sf
}

/// `g_s(x) = (1+x²)^{-s}/C_s` with its primitive and the eta function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaKit {
    pub s: f64,
    /// `C_s = ∫(1+u²)^{-s} du = √π·Γ(s-1/2)/Γ(s)`.
    pub c_s: f64,
}

impl EtaKit {
    pub fn new(s: f64) -> Result<Self> {
        if !(s > 0.5) {
            return Err(Error::Domain(format!("eta kit needs s > 1/2, got {s}")));
        }
        let c_s = PI.sqrt() * gamma_fn(s - 0.5)? / gamma_fn(s)?;
        Ok(Self { s, c_s })
    }

    pub fn g(&self, x: f64) -> f64 {
        (1.0 + x * x).powf(-self.s) / self.c_s
    }

    /// `G_s(x) = ∫₀ˣ g_s`, odd, with `G_s(±∞) = ±1/2`.
    pub fn big_g(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let z = x * x / (1.0 + x * x);
        let half = 0.5 * incomplete_beta(0.5, self.s - 0.5, z).unwrap_or(1.0);
        half.copysign(x)
    }

    /// `η_s(x) = (2/C_s)∫ₓ^∞ (1+v²)^{-s} dv = 1 - 2G_s(x)` for `x > 0`, extended oddly.
    pub fn eta(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        (1.0 - 2.0 * self.big_g(x.abs())).copysign(x)
    }

    /// `Σ η_s(λ)` over the eigenvalues of `m`.
    pub fn trace_eta(&self, m: &CMatrix) -> f64 {
        eigenvalues(m).iter().map(|&e| self.eta(e)).sum()
    }
}

/// Right-hand side of the analytic spectral-flow formula with `g = g_s`.
pub fn spectral_flow_formula(path: &MatrixPath, s: f64) -> Result<f64> {
    let kit = EtaKit::new(s)?;
    let (p, _) = path.with_kernel_convention();
    let (nodes, weights) = gauss_legendre(64);
    let integrand = |t: f64| -> f64 {
        let eig = p.at(t).symmetric_eigen();
        let d = p.derivative(t);
        let v = &eig.eigenvectors;
        let mut sum = 0.0;
        for (k, &lam) in eig.eigenvalues.iter().enumerate() {
            let col = v.column(k);
            let dv = &d * col;
            let q = col.dotc(&dv).re;
            sum += kit.g(lam) * q;
        }
        sum
    };
    let knots = p.knots();
    let integrate = |panels: usize| -> f64 {
        knots
            .windows(2)
            .map(|w| gauss_legendre_composite(integrand, w[0], w[1], &nodes, &weights, panels))
            .sum()
    };
    let mut panels = 1;
    let mut prev = integrate(panels);
    let integral = loop {
        panels *= 2;
        let cur = integrate(panels);
        if (cur - prev).abs() <= 1e-9 {
            break cur;
        }
        if panels >= 1 << 12 {
            return Err(Error::Accuracy {
                estimate: cur,
                error: (cur - prev).abs(),
            });
        }
        prev = cur;
    };
    let endpoint = |m: &CMatrix| -> f64 {
        eigenvalues(m)
            .iter()
            .map(|&e| kit.big_g(e) - 0.5 * if e >= 0.0 { 1.0 } else { -1.0 })
            .sum()
    };
    Ok(integral - (endpoint(&p.at(1.0)) - endpoint(&p.at(0.0))))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub seed: u64,
    pub dim: usize,
    pub sf_phillips: i64,
    pub sf_crossing: i64,
    pub sf_bounded: i64,
    /// `(s, formula value)` pairs.
    pub sf_formula: Vec<(f64, f64)>,
    /// `max_s |formula - Phillips|`.
    pub discrepancy: f64,
    pub perturbed: bool,
}

impl PathRecord {
    pub fn passed(&self, formula_tol: f64) -> bool {
        self.sf_phillips == self.sf_crossing && self.sf_phillips == self.sf_bounded && self.discrepancy <= formula_tol
    }
}

/// Runs every flow definition on the random affine path drawn from `seed`.
pub fn random_path_record(
    seed: u64,
    dims: (usize, usize),
    s_values: &[f64],
    crossing_steps: usize,
) -> Result<PathRecord> {
    if dims.0 == 0 || dims.0 > dims.1 {
        return Err(Error::Configuration(format!("bad dimension range {dims:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = rng.gen_range(dims.0..=dims.1);
    let path = MatrixPath::random_affine(dim, &mut rng)?;
    let ph = spectral_flow_phillips(&path)?;
    let sf_crossing = crossing_count(&path, crossing_steps);
    let sf_bounded = bounded_transform_flow(&path)?;
    let mut sf_formula = Vec::with_capacity(s_values.len());
    let mut discrepancy = 0.0_f64;
    for &s in s_values {
        let v = spectral_flow_formula(&path, s)?;
        discrepancy = discrepancy.max((v - ph.sf as f64).abs());
        sf_formula.push((s, v));
    }
    Ok(PathRecord {
        seed,
        dim,
        sf_phillips: ph.sf,
        sf_crossing,
        sf_bounded,
        sf_formula,
        discrepancy,
        perturbed: ph.perturbed,
    })
}

/// Records for seeds `base..base + count`, in seed order.
pub fn random_suite(base: u64, count: usize, dims: (usize, usize), s_values: &[f64]) -> Result<Vec<PathRecord>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| random_path_record(base + i, dims, s_values, 4000))
        .collect()
}

/// Discretization grid for Hamiltonian paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxGrid {
    pub length: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianFlow {
    pub sf_shifted: i64,
    pub sf_unshifted: i64,
    pub alpha: f64,
    /// Lowest eigenvalue of `H₀ + V` in the box.
    pub nu: f64,
    pub perturbed: bool,
}

/// Phillips flow of `t ↦ T₀ + t·W` for tridiagonal `T`, by inertia counts on a partition
/// refined until `rank χ_{[0,∞)}` changes by at most one per interval.
fn tridiagonal_flow(t0: &Tridiagonal, w: &[f64]) -> Result<(i64, bool)> {
    let n = t0.len();
    let at = |t: f64, shift: f64| Tridiagonal {
        diag: t0.diag.iter().zip(w).map(|(d, v)| d + t * v + shift).collect(),
        off: t0.off.clone(),
    };
    let near_kernel = |m: &Tridiagonal| m.count_below(KERNEL_TOL) != m.count_below(-KERNEL_TOL);
    let perturbed = near_kernel(&at(0.0, 0.0)) || near_kernel(&at(1.0, 0.0));
    let shift = if perturbed { KERNEL_SHIFT } else { 0.0 };
    let rank = |t: f64| (n - at(t, shift).count_below(0.0)) as i64;
    let mut stack = vec![(0.0_f64, rank(0.0), 1.0_f64, rank(1.0))];
    let mut sf = 0;
    let mut steps = 0;
    while let Some((a, ra, b, rb)) = stack.pop() {
        steps += 1;
        if (ra - rb).abs() <= 1 || steps > MAX_PARTITION {
            if (ra - rb).abs() > 1 {
                return Err(Error::PathResolution { t: a });
            }
            sf += rb - ra;
            continue;
        }
        let m = 0.5 * (a + b);
        let rm = rank(m);
        stack.push((m, rm, b, rb));
        stack.push((a, ra, m, rm));
    }
    Ok((sf, perturbed))
}

/// Spectral flow of `H_t = H₀ + tV` and `H_t + α` for one channel in a Dirichlet box.
pub fn discretized_hamiltonian_flow(
    pot: &Potential,
    ch: &Channel,
    alpha: f64,
    grid: BoxGrid,
) -> Result<HamiltonianFlow> {
    let bx = BoxChannel::new(pot, ch, grid.length, grid.points)?;
    let h0 = &bx.kinetic;
    if h0.count_below(0.0) > 0 {
        return Err(Error::Configuration(
            "free box operator is not positive; grid too coarse".into(),
        ));
    }
    let nu = bx.hamiltonian(1.0).eigenvalue(0).min(0.0);
    if !(alpha > -2.0 * nu + 1.0) {
        return Err(Error::Configuration(format!(
            "shift α = {alpha} must exceed -2ν + 1 = {}",
            -2.0 * nu + 1.0
        )));
    }
    let (sf_unshifted, p1) = tridiagonal_flow(h0, &bx.potential)?;
    let (sf_shifted, p2) = tridiagonal_flow(&h0.shifted(alpha), &bx.potential)?;
    Ok(HamiltonianFlow {
        sf_shifted,
        sf_unshifted,
        alpha,
        nu,
        perturbed: p1 || p2,
    })
}

/// Smooth bump test function `f(x) = h·exp(1 - 1/(1-y²))`, `y = (2x - lo - hi)/(hi - lo)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpFunction {
    pub lo: f64,
    pub hi: f64,
    pub height: f64,
}

impl BumpFunction {
    fn y(&self, x: f64) -> f64 {
        (2.0 * x - self.lo - self.hi) / (self.hi - self.lo)
    }

    pub fn value(&self, x: f64) -> f64 {
        let y = self.y(x);
        if y.abs() >= 1.0 {
            0.0
        } else {
            self.height * (1.0 - 1.0 / (1.0 - y * y)).exp()
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let y = self.y(x);
        if y.abs() >= 1.0 {
            return 0.0;
        }
        let q = 1.0 - y * y;
        self.value(x) * (-2.0 * y / (q * q)) * 2.0 / (self.hi - self.lo)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirmanKreinCheck {
    /// `Σ [f(E_j(H)) - f(E_j(H₀))]` in the box of length `length`.
    pub lhs: f64,
    /// `∫ ξ f′` with the eigenvalue-step form of `ξ` below 0.
    pub rhs: f64,
    /// Box sum at twice the box length (and twice the points).
    pub lhs_doubled: f64,
    pub bound_states: Vec<f64>,
    pub length: f64,
    pub points: usize,
    /// `max(|lhs|, |rhs|, height/10)`.
    pub scale: f64,
    pub discrepancy: f64,
    pub discrepancy_doubled: f64,
}

impl BirmanKreinCheck {
    /// Both box sizes agree with `∫ ξ f′` to `tol·scale`, and the larger box is no worse
    /// beyond that margin.
    pub fn passed(&self, tol: f64) -> bool {
        let bound = tol * self.scale;
        self.discrepancy <= bound && self.discrepancy_doubled <= bound
    }
}

/// Linear interpolation of `ξ` built from the table phases (constant below the grid).
fn xi_at(table: &PhaseShiftTable, xi: &[f64], lambda: f64) -> f64 {
    let g = &table.grid;
    if lambda <= g[0] {
        return xi[0];
    }
    if lambda >= g[g.len() - 1] {
        return xi[xi.len() - 1];
    }
    let i = g.partition_point(|&x| x <= lambda) - 1;
    let w = (lambda - g[i]) / (g[i + 1] - g[i]);
    xi[i] * (1.0 - w) + xi[i + 1] * w
}

fn box_trace(
    pot: &Potential,
    chans: &[Channel],
    f: &BumpFunction,
    length: f64,
    points: usize,
) -> Result<(f64, Vec<f64>)> {
    let mut lhs = 0.0;
    let mut bound = Vec::new();
    for ch in chans {
        let bx = BoxChannel::new(pot, ch, length, points)?;
        let m = ch.multiplicity as f64;
        let h = bx.hamiltonian(1.0);
        for e in h.eigenvalues_below(f.hi) {
            lhs += m * f.value(e);
            if e < 0.0 {
                for _ in 0..ch.multiplicity {
                    bound.push(e);
                }
            }
        }
        for e in bx.kinetic.eigenvalues_below(f.hi) {
            lhs -= m * f.value(e);
        }
    }
    bound.sort_by(f64::total_cmp);
    Ok((lhs, bound))
}

/// Compares the box trace `Tr(f(H) - f(H₀))` with `∫ ξ f′` for a radial potential.
pub fn birman_krein_desk_check(
    pot: &Potential,
    f: &BumpFunction,
    grid: BoxGrid,
    l_max: usize,
) -> Result<BirmanKreinCheck> {
    if !(f.hi > f.lo) {
        return Err(Error::Domain("test function support is empty".into()));
    }
    let mut opts = AssembleOptions::for_potential(pot);
    opts.l_max = l_max;
    let (table, curve) = assemble(pot, &opts)?;
    let chans = &table.channels;
    let (lhs, bound) = box_trace(pot, chans, f, grid.length, grid.points)?;
    let (lhs_doubled, _) = box_trace(pot, chans, f, 2.0 * grid.length, 2 * grid.points)?;

    // ξ = -#{E_j ≤ λ} below zero: ∫_{-∞}^0 ξ f′ = Σ f(E_j) - N·f(0).
    let mut rhs: f64 = bound.iter().map(|&e| f.value(e)).sum::<f64>() - bound.len() as f64 * f.value(0.0);
    if f.hi > 0.0 {
        let (nodes, weights) = gauss_legendre(64);
        rhs += gauss_legendre_composite(
            |l| xi_at(&table, &curve.xi, l) * f.derivative(l),
            f.lo.max(0.0),
            f.hi,
            &nodes,
            &weights,
            64,
        );
    }
    let scale = lhs.abs().max(rhs.abs()).max(0.1 * f.height.abs());
    Ok(BirmanKreinCheck {
        lhs,
        rhs,
        lhs_doubled,
        bound_states: bound,
        length: grid.length,
        points: grid.points,
        scale,
        discrepancy: (lhs - rhs).abs(),
        discrepancy_doubled: (lhs_doubled - rhs).abs(),
    })
}
