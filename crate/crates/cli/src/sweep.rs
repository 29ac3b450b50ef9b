//! Parallel evaluation of sweep points and writing of result files.

use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;
use splittrap::analysis::{k_grid, DEFAULT_SCHMIDT_THRESHOLD};
use splittrap::dvr::{ground_state_with, SolverOptions};
use splittrap::tonks::{tonks_rspd, tonks_rspd_accurate, TonksState};
use splittrap::{
    build_grid, even_energy, momentum_distribution, natural_orbitals, rspd_from_state,
    schmidt_number, spectrum, von_neumann_entropy, BarrierStrength, DensityMatrix, Parity,
};

use crate::output::{self, Failure, FailureManifest, Record};
use crate::spec::{Format, Mode, Observable, SweepSpec};
use crate::CliError;

/// Everything a single sweep point produced.
#[derive(Debug, Clone)]
pub struct PointResult {
    pub record: Record,
    pub rspd: Option<DMatrix<f64>>,
    pub momentum: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    /// Successful points in sweep order, tagged with their point index.
    pub points: Vec<(usize, PointResult)>,
    pub failures: Vec<Failure>,
}

impl SweepResult {
    pub fn records(&self) -> Vec<Record> {
        self.points.iter().map(|(_, p)| p.record.clone()).collect()
    }
}

fn kappa_f64(k: BarrierStrength) -> f64 {
    k.value().unwrap_or(f64::INFINITY)
}

fn solver(e: impl std::fmt::Display) -> CliError {
    CliError::Solver(e.to_string())
}

fn evaluate_point(
    spec: &SweepSpec,
    kappa: BarrierStrength,
    g1d: f64,
) -> Result<PointResult, CliError> {
    let (n, dx) = spec.grid;
    let grid = build_grid(n, dx).map_err(|e| CliError::validation(e.to_string()))?;
    let ks = k_grid(spec.k_grid.0, spec.k_grid.1);
    let mut record = Record {
        kappa: kappa_f64(kappa),
        g1d,
        energy: None,
        entropy: None,
        schmidt: None,
    };
    let wants_decomp = spec.wants(Observable::Entropy)
        || spec.wants(Observable::Schmidt)
        || spec.wants(Observable::Momentum);

    let (energy, rspd, density): (f64, Option<DensityMatrix>, Option<DensityMatrix>) = match spec
        .mode
    {
        Mode::Spectrum => (even_energy(kappa, 0).map_err(solver)?, None, None),
        Mode::Tonks => {
            let state = TonksState::new(kappa).map_err(solver)?;
            let rspd = if spec.wants(Observable::Rspd) {
                Some(tonks_rspd(kappa, &grid).map_err(solver)?)
            } else {
                None
            };
            let accurate = if wants_decomp {
                Some(tonks_rspd_accurate(kappa).map_err(solver)?)
            } else {
                None
            };
            (state.pair_energy, rspd, accurate)
        }
        Mode::Dvr => {
            let k = kappa_f64(kappa);
            let state =
                ground_state_with(&grid, k, g1d, &SolverOptions::default()).map_err(solver)?;
            if state.near_degenerate {
                warn!("kappa = {k}, g1d = {g1d}: ground state is nearly degenerate with its parity partner");
            }
            let rho = rspd_from_state(&state);
            (state.energy, Some(rho.clone()), Some(rho))
        }
    };
    if spec.wants(Observable::Energy) {
        record.energy = Some(energy);
    }

    let mut momentum = None;
    if let Some(rho) = density.filter(|_| wants_decomp) {
        let decomp = natural_orbitals(&rho);
        if spec.wants(Observable::Entropy) {
            record.entropy = Some(von_neumann_entropy(&decomp));
        }
        if spec.wants(Observable::Schmidt) {
            record.schmidt = Some(schmidt_number(&decomp, DEFAULT_SCHMIDT_THRESHOLD));
        }
        if spec.wants(Observable::Momentum) {
            let n = momentum_distribution(&decomp, &ks).map_err(solver)?;
            if n.aliased {
                warn!(
                    "kappa = {}, g1d = {g1d}: k span exceeds the mesh resolution",
                    record.kappa
                );
            }
            momentum = Some(n.densities);
        }
    }
    let rspd = rspd
        .filter(|_| spec.wants(Observable::Rspd))
        .map(|r| r.values().clone());
    Ok(PointResult {
        record,
        rspd,
        momentum,
    })
}

/// Evaluates every point on a pool of `spec.workers` threads. Results come
/// back in sweep order whatever order the points finish in.
pub fn evaluate(spec: &SweepSpec) -> Result<SweepResult, CliError> {
    let points = spec.points();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| CliError::Io(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<Result<PointResult, CliError>> = pool.install(|| {
        points
            .par_iter()
            .map(|&(kappa, g)| {
                info!("evaluating kappa = {kappa}, g1d = {g}");
                evaluate_point(spec, kappa, g)
            })
            .collect()
    });
    let mut result = SweepResult {
        points: Vec::new(),
        failures: Vec::new(),
    };
    for (index, ((kappa, g), outcome)) in points.into_iter().zip(outcomes).enumerate() {
        match outcome {
            Ok(p) => result.points.push((index, p)),
            Err(e) => result.failures.push(Failure {
                index,
                kappa: kappa_f64(kappa),
                g1d: g,
                error: e.to_string(),
            }),
        }
    }
    Ok(result)
}

pub fn render_table(records: &[Record], format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => Ok(output::to_csv(records)),
        Format::Json => output::to_json(records),
    }
}

/// `dir/name.csv` plus `rspd.003.txt` gives `dir/name.rspd.003.txt`.
pub fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}"))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Writes the table and any matrix or momentum files under `spec.out`, or
/// returns the table text when there is no output path. Failed points go
/// to a manifest beside the table; the table keeps the points that worked.
pub fn write_results(spec: &SweepSpec, result: &SweepResult) -> Result<Option<String>, CliError> {
    let table = render_table(&result.records(), spec.format)?;
    let Some(out) = &spec.out else {
        if !result.failures.is_empty() {
            let manifest = FailureManifest {
                completed: result.points.len(),
                failed: result.failures.clone(),
            };
            eprintln!(
                "{}",
                serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?
            );
        }
        return Ok(Some(table));
    };
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    write(out, &table)?;
    let dx = spec.grid.1;
    let ks = k_grid(spec.k_grid.0, spec.k_grid.1);
    for (index, point) in &result.points {
        if let Some(values) = &point.rspd {
            write(
                &sibling(out, &format!("rspd.{index:03}.txt")),
                &output::matrix_to_text(values, dx),
            )?;
        }
        if let Some(n) = &point.momentum {
            write(
                &sibling(out, &format!("momentum.{index:03}.csv")),
                &output::momentum_to_csv(&ks, n),
            )?;
        }
    }
    let manifest_path = sibling(out, "failures.json");
    if result.failures.is_empty() {
        if manifest_path.exists() {
            fs::remove_file(&manifest_path)
                .map_err(|e| CliError::Io(format!("{}: {e}", manifest_path.display())))?;
        }
    } else {
        let manifest = FailureManifest {
            completed: result.points.len(),
            failed: result.failures.clone(),
        };
        let text =
            serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
        write(&manifest_path, &(text + "\n"))?;
    }
    Ok(None)
}

/// Evaluates and writes a sweep. Point failures do not stop the other
/// points; they are reported in the result for the caller to act on.
pub fn run_sweep(spec: &SweepSpec) -> Result<(SweepResult, Option<String>), CliError> {
    let result = evaluate(spec)?;
    let table = write_results(spec, &result)?;
    Ok((result, table))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Level {
    #[serde(serialize_with = "crate::output::serialize_real")]
    pub kappa: f64,
    pub index: usize,
    pub parity: &'static str,
    pub energy: f64,
}

/// Lowest `count` single-particle levels for each barrier strength.
pub fn spectrum_levels(kappas: &[BarrierStrength], count: usize) -> Result<Vec<Level>, CliError> {
    let mut levels = Vec::new();
    for &k in kappas {
        for state in spectrum(k, count).map_err(solver)? {
            levels.push(Level {
                kappa: kappa_f64(k),
                index: state.index,
                parity: match state.parity {
                    Parity::Even => "even",
                    Parity::Odd => "odd",
                },
                energy: state.energy,
            });
        }
    }
    Ok(levels)
}

pub fn render_levels(levels: &[Level], format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut text =
                serde_json::to_string_pretty(levels).map_err(|e| CliError::Io(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
        Format::Csv => {
            let mut text = String::from("kappa,index,parity,energy\n");
            for l in levels {
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    output::format_real(l.kappa),
                    l.index,
                    l.parity,
                    output::format_real(l.energy)
                ));
            }
            Ok(text)
        }
    }
}
