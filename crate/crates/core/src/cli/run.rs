//! One function per subcommand; each writes its files into the output directory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{
    birman_krein_desk_check, discretized_hamiltonian_flow, random_suite, spectral_flow_phillips, BirmanKreinCheck,
    HamiltonianFlow, MatrixPath, PathRecord,
};
use crate::higher::high_energy;
use crate::potential::Potential;
use crate::radial::Channel;
use crate::scattering::assemble;
use crate::spectrum::{lowest_eigenvalue, resonance_scan, total_counts};

use super::config::RunConfig;
use super::levinson::{assemble_for_levinson, levinson_from_parts, LevinsonReport};

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub passed: bool,
    pub files: Vec<PathBuf>,
    pub summary: String,
}

/// Writes `bytes` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, bytes).map_err(io(&tmp))?;
    fs::rename(&tmp, &target).map_err(io(&target))?;
    Ok(target)
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    write_atomic(dir, name, text.as_bytes())
}

pub fn run_levinson(cfg: &RunConfig) -> Result<LevinsonReport> {
    let pot = cfg.potential()?;
    let opts = cfg.levinson_options(&pot);
    let spectral = total_counts(&pot, opts.assemble.l_max)?;
    let (table, curve, _) = assemble_for_levinson(&pot, &opts)?;
    levinson_from_parts(&pot, &table, &curve, &spectral, &opts)
}

pub fn levinson_command(cfg: &RunConfig, out: &Path) -> Result<RunOutcome> {
    let report = run_levinson(cfg)?;
    let file = write_json(out, "levinson.json", &report)?;
    Ok(RunOutcome {
        passed: report.passed,
        files: vec![file],
        summary: format!(
            "n={} N={} N_res={} integral={:.6} residual={:.3e} passed={}",
            report.dimension, report.n, report.n_res, report.integral, report.residual, report.passed
        ),
    })
}

#[derive(Debug, Clone, Serialize)]
struct CurvesManifest {
    dimension: usize,
    potential: Potential,
    csv: String,
    columns: Vec<String>,
    rows: usize,
    lambda_min: f64,
    lambda_max: f64,
    points_per_decade: usize,
    refinements: usize,
    l_star: usize,
    channels: Vec<Channel>,
}

/// CSV of `λ, δ per channel, ξ, Im tr, |pₙ/i|` on the assembled grid, plus a manifest.
pub fn run_curves(cfg: &RunConfig, out: &Path) -> Result<RunOutcome> {
    let pot = cfg.potential()?;
    let opts = cfg.levinson_options(&pot);
    let (table, curve) = assemble(&pot, &opts.assemble)?;
    let h = high_energy(pot.dimension(), &pot.moments(opts.quad_tol)?)?;

    let mut columns = vec!["lambda".to_string()];
    columns.extend(table.channels.iter().map(|c| format!("delta_{}", c.label())));
    columns.extend(["xi", "im_tr", "abs_pn"].map(String::from));
    let mut csv = columns.join(",");
    csv.push('\n');
    for (i, &lam) in curve.grid.iter().enumerate() {
        write!(csv, "{lam:e}").unwrap();
        for d in &table.delta {
            write!(csv, ",{:e}", d[i]).unwrap();
        }
        write!(csv, ",{:e},{:e},{:e}", curve.xi[i], curve.tr[i].im, h.pn(lam).norm()).unwrap();
        csv.push('\n');
    }
    let csv_file = write_atomic(out, "curves.csv", csv.as_bytes())?;
    let manifest = CurvesManifest {
        dimension: pot.dimension(),
        potential: pot.clone(),
        csv: "curves.csv".into(),
        columns,
        rows: curve.grid.len(),
        lambda_min: curve.grid[0],
        lambda_max: curve.grid[curve.grid.len() - 1],
        points_per_decade: opts.assemble.points_per_decade,
        refinements: table.refinements,
        l_star: table.l_star,
        channels: table.channels.clone(),
    };
    let json_file = write_json(out, "curves.json", &manifest)?;
    Ok(RunOutcome {
        passed: true,
        files: vec![csv_file, json_file],
        summary: format!("{} rows, {} channels", manifest.rows, manifest.channels.len()),
    })
}

#[derive(Debug, Clone, Serialize)]
struct ScanReport {
    dimension: usize,
    channel: Channel,
    depth_lo: f64,
    depth_hi: f64,
    samples: usize,
    thresholds: Vec<f64>,
}

pub fn run_resonance_scan(cfg: &RunConfig, out: &Path) -> Result<RunOutcome> {
    let pot = cfg.potential()?;
    let ch = cfg.scan_channel()?;
    let lo = cfg
        .scan_lo
        .ok_or_else(|| Error::Configuration("resonance scan needs scan_lo".into()))?;
    let hi = cfg
        .scan_hi
        .ok_or_else(|| Error::Configuration("resonance scan needs scan_hi".into()))?;
    if !(hi > lo) {
        return Err(Error::Configuration(format!("scan interval [{lo}, {hi}] is empty")));
    }
    let samples = cfg.scan_samples.unwrap_or(64);
    let thresholds = resonance_scan(&pot, &ch, lo, hi, samples)?;
    let report = ScanReport {
        dimension: pot.dimension(),
        channel: ch,
        depth_lo: lo,
        depth_hi: hi,
        samples,
        thresholds,
    };
    let file = write_json(out, "resonance_scan.json", &report)?;
    Ok(RunOutcome {
        passed: true,
        files: vec![file],
        summary: format!("{} thresholds in [{lo}, {hi}]", report.thresholds.len()),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ChannelFlow {
    pub channel: Channel,
    /// Sturm count of the channel.
    pub count: usize,
    pub flow: HamiltonianFlow,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowSuiteReport {
    pub seed: u64,
    pub paths: usize,
    pub formula_tol: f64,
    pub passed: usize,
    pub failed_seeds: Vec<u64>,
    pub canned: Vec<(String, i64, i64)>,
    pub hamiltonian: Vec<ChannelFlow>,
    pub records: Vec<PathRecord>,
}

impl FlowSuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed_seeds.is_empty()
            && self.canned.iter().all(|(_, got, want)| got == want)
            && self.hamiltonian.iter().all(|h| h.passed)
    }
}

/// Shifted and unshifted Hamiltonian flows for every counted channel of `pot`.
pub fn hamiltonian_flows(pot: &Potential, cfg: &RunConfig) -> Result<Vec<ChannelFlow>> {
    let grid = cfg.box_grid();
    let spectral = total_counts(pot, cfg.l_max.unwrap_or(400))?;
    let nu = lowest_eigenvalue(pot, grid.length, grid.points)?.min(0.0);
    let alpha = cfg.alpha.unwrap_or(-2.0 * nu + 2.0);
    spectral
        .per_channel
        .iter()
        .map(|&(channel, count)| {
            let flow = discretized_hamiltonian_flow(pot, &channel, alpha, grid)?;
            let passed = flow.sf_shifted == 0 && flow.sf_unshifted == -(count as i64);
            Ok(ChannelFlow {
                channel,
                count,
                flow,
                passed,
            })
        })
        .collect()
}

fn canned_paths() -> Result<Vec<(String, i64, i64)>> {
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    let scalar = |x: f64| DMatrix::from_element(1, 1, Complex64::new(x, 0.0));
    let up = MatrixPath::affine(scalar(-0.5), scalar(1.0))?;
    let down = MatrixPath::affine(scalar(0.5), scalar(-1.0))?;
    Ok(vec![
        ("t - 1/2".into(), spectral_flow_phillips(&up)?.sf, 1),
        ("1/2 - t".into(), spectral_flow_phillips(&down)?.sf, -1),
    ])
}

pub fn run_flow_suite(cfg: &RunConfig, out: &Path) -> Result<RunOutcome> {
    let seed = cfg.seed.unwrap_or(0);
    let paths = cfg.paths.unwrap_or(200);
    let dims = (cfg.dim_min.unwrap_or(2), cfg.dim_max.unwrap_or(10));
    let s_values = cfg.s_values.clone().unwrap_or_else(|| vec![0.75, 1.0, 2.0]);
    let formula_tol = cfg.formula_tol.unwrap_or(1e-8);
    let records = random_suite(seed, paths, dims, &s_values)?;
    let failed_seeds: Vec<u64> = records
        .iter()
        .filter(|r| !r.passed(formula_tol))
        .map(|r| r.seed)
        .collect();
    let pot = cfg.potential()?;
    let report = FlowSuiteReport {
        seed,
        paths,
        formula_tol,
        passed: records.len() - failed_seeds.len(),
        failed_seeds,
        canned: canned_paths()?,
        hamiltonian: hamiltonian_flows(&pot, cfg)?,
        records,
    };
    let file = write_json(out, "flow_suite.json", &report)?;
    let mut summary = format!("{}/{} random paths agree", report.passed, report.paths);
    if !report.failed_seeds.is_empty() {
        write!(summary, "; failing seeds {:?}", report.failed_seeds).unwrap();
    }
    Ok(RunOutcome {
        passed: report.all_passed(),
        files: vec![file],
        summary,
    })
}

#[derive(Debug, Clone, Serialize)]
struct BirmanKreinReport {
    check: BirmanKreinCheck,
    tolerance: f64,
    passed: bool,
}

pub fn run_bk_check(cfg: &RunConfig, out: &Path) -> Result<RunOutcome> {
    let pot = cfg.potential()?;
    let f = cfg.bump_function();
    if !(f.hi > f.lo) {
        return Err(Error::Configuration(format!(
            "bk_lo {} must be below bk_hi {}",
            f.lo, f.hi
        )));
    }
    let tolerance = cfg.bk_tol.unwrap_or(0.05);
    let check = birman_krein_desk_check(&pot, &f, cfg.box_grid(), cfg.l_max.unwrap_or(400))?;
    let passed = check.passed(tolerance);
    let summary = format!(
        "trace {:.6} vs ∫ξf′ {:.6} (doubled box {:.6})",
        check.lhs, check.rhs, check.lhs_doubled
    );
    let file = write_json(
        out,
        "bk_check.json",
        &BirmanKreinReport {
            check,
            tolerance,
            passed,
        },
    )?;
    Ok(RunOutcome {
        passed,
        files: vec![file],
        summary,
    })
}
