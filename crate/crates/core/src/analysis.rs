//! Observables of a two-particle state: reduced single-particle density,
//! natural orbitals, momentum distribution, von Neumann entropy and Schmidt
//! number.
//!
//! Density matrices live on a [`Mesh`]. Both the DVR grid (equal weights)
//! and Gauss panel meshes (used for the analytic pair) go through the same
//! weighted eigenproblem `W^{1/2} rho W^{1/2}`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use thiserror::Error;

use crate::dvr::TwoBodyState;
use crate::grid::Mesh;

/// Occupations below this are treated as exactly zero.
pub const OCCUPATION_FLOOR: f64 = 1e-12;
/// Default cut for counting an occupation as non-zero.
pub const DEFAULT_SCHMIDT_THRESHOLD: f64 = 1e-6;
/// Orbitals are summed into `n(k)` until this much occupation is covered.
pub const MOMENTUM_OCCUPATION_COVERAGE: f64 = 1.0 - 1e-8;

const SYMMETRY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("density matrix is {rows}x{cols} but the mesh has {nodes} nodes")]
    Shape {
        rows: usize,
        cols: usize,
        nodes: usize,
    },
    #[error("density matrix is not symmetric (max deviation {0:e})")]
    NotSymmetric(f64),
    #[error("density matrix trace is {0}, expected 1")]
    Trace(f64),
    #[error("k grid must have at least two points and be symmetric about 0")]
    KGrid,
}

/// Reduced single-particle density `rho(x, x')` sampled on a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    values: DMatrix<f64>,
    mesh: Mesh,
}

impl DensityMatrix {
    /// Checks shape, symmetry and unit trace.
    pub fn new(values: DMatrix<f64>, mesh: Mesh) -> Result<Self, AnalysisError> {
        let n = mesh.len();
        if values.nrows() != n || values.ncols() != n {
            return Err(AnalysisError::Shape {
                rows: values.nrows(),
                cols: values.ncols(),
                nodes: n,
            });
        }
        let scale = values.amax().max(1.0);
        let asym = (&values - values.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(AnalysisError::NotSymmetric(asym));
        }
        let rho = Self { values, mesh };
        let trace = rho.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(AnalysisError::Trace(trace));
        }
        Ok(rho)
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    /// `sum_i w_i rho_ii`.
    pub fn trace(&self) -> f64 {
        self.mesh
            .weights()
            .iter()
            .enumerate()
            .map(|(i, w)| w * self.values[(i, i)])
            .sum()
    }

    /// Density `rho(x, x)` at each node.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.mesh.len()).map(|i| self.values[(i, i)]).collect()
    }

    /// `sum_{x x' < 0} |rho| w w'`: weight carried by the quadrants that
    /// connect opposite sides of the barrier.
    pub fn cross_barrier_mass(&self) -> f64 {
        let x = self.mesh.nodes();
        let w = self.mesh.weights();
        let mut total = 0.0;
        for i in 0..x.len() {
            for j in 0..x.len() {
                if x[i] * x[j] < 0.0 {
                    total += self.values[(i, j)].abs() * w[i] * w[j];
                }
            }
        }
        total
    }
}

/// `rho_ij = dx sum_k Psi_ik Psi_jk`.
pub fn rspd_from_state(state: &TwoBodyState) -> DensityMatrix {
    let psi = &state.amplitudes;
    let values = (psi * psi.transpose()) * state.grid.spacing();
    DensityMatrix::new(values, Mesh::from(&state.grid))
        .expect("normalized symmetric state gives a valid RSPD")
}

/// Occupations (descending) and mesh-sampled natural orbitals.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalDecomposition {
    pub occupations: Vec<f64>,
    /// `orbitals[i][node]`, normalized so that `sum w psi^2 = 1`.
    pub orbitals: Vec<Vec<f64>>,
    pub mesh: Mesh,
}

impl NaturalDecomposition {
    /// `sum_i lambda_i psi_i(x) psi_i(x')`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let n = self.mesh.len();
        let mut out = DMatrix::zeros(n, n);
        for (lambda, psi) in self.occupations.iter().zip(&self.orbitals) {
            if *lambda == 0.0 {
                continue;
            }
            for a in 0..n {
                for b in 0..n {
                    out[(a, b)] += lambda * psi[a] * psi[b];
                }
            }
        }
        out
    }
}

/// Eigen-decomposition of the density-matrix integral operator.
pub fn natural_orbitals(rho: &DensityMatrix) -> NaturalDecomposition {
    let mesh = rho.mesh.clone();
    let sqrt_w: Vec<f64> = mesh.weights().iter().map(|w| w.sqrt()).collect();
    let n = mesh.len();
    let weighted = DMatrix::from_fn(n, n, |i, j| {
        let v = 0.5 * (rho.values[(i, j)] + rho.values[(j, i)]);
        sqrt_w[i] * v * sqrt_w[j]
    });
    let eig = SymmetricEigen::new(weighted);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let occupations = order
        .iter()
        .map(|&k| {
            let l = eig.eigenvalues[k];
            if l < OCCUPATION_FLOOR {
                0.0
            } else {
                l
            }
        })
        .collect();
    let orbitals = order
        .iter()
        .map(|&k| {
            let u = eig.eigenvectors.column(k);
            // fix the sign so the largest lobe is positive
            let peak = u
                .iter()
                .copied()
                .fold(0.0, |m: f64, v| if v.abs() > m.abs() { v } else { m });
            let sign = if peak < 0.0 { -1.0 } else { 1.0 };
            u.iter().zip(&sqrt_w).map(|(v, s)| sign * v / s).collect()
        })
        .collect();
    NaturalDecomposition {
        occupations,
        orbitals,
        mesh,
    }
}

/// `n(k)` on a symmetric k grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumDistribution {
    pub k_values: Vec<f64>,
    pub densities: Vec<f64>,
    /// The k grid reaches past the mesh's resolvable wavenumber.
    pub aliased: bool,
    /// Number of natural orbitals that entered the sum.
    pub orbitals_used: usize,
}

impl MomentumDistribution {
    /// Trapezoid integral over the k grid.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.k_values, &self.densities)
    }

    /// Full width at half maximum, with linear interpolation of the
    /// half-height crossings on both sides of the peak.
    pub fn fwhm(&self) -> f64 {
        let (peak, max) = self
            .densities
            .iter()
            .enumerate()
            .fold(
                (0, f64::MIN),
                |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
            );
        let half = 0.5 * max;
        let k = &self.k_values;
        let n = &self.densities;
        let mut right = k[k.len() - 1];
        for i in peak..n.len() - 1 {
            if n[i + 1] < half {
                right = k[i] + (half - n[i]) / (n[i + 1] - n[i]) * (k[i + 1] - k[i]);
                break;
            }
        }
        let mut left = k[0];
        for i in (1..=peak).rev() {
            if n[i - 1] < half {
                left = k[i] + (half - n[i]) / (n[i - 1] - n[i]) * (k[i - 1] - k[i]);
                break;
            }
        }
        right - left
    }

    /// Wavenumbers of local maxima away from `k = 0` that rise above their
    /// neighbours by more than `prominence * max n(k)`.
    pub fn secondary_peaks(&self, prominence: f64) -> Vec<f64> {
        let n = &self.densities;
        let max = n.iter().copied().fold(0.0, f64::max);
        let floor = prominence * max;
        let mut peaks = Vec::new();
        for i in 1..n.len().saturating_sub(1) {
            if self.k_values[i] == 0.0 || !(n[i] > n[i - 1] && n[i] >= n[i + 1]) {
                continue;
            }
            // depth of the dip on either side before the profile climbs higher
            let left_min = n[..i]
                .iter()
                .rev()
                .take_while(|&&v| v <= n[i])
                .copied()
                .fold(n[i], f64::min);
            let right_min = n[i + 1..]
                .iter()
                .take_while(|&&v| v <= n[i])
                .copied()
                .fold(n[i], f64::min);
            if n[i] - left_min.max(right_min) > floor {
                peaks.push(self.k_values[i]);
            }
        }
        peaks
    }

    /// `max |n(k) - f(k)|` over `|k| <= k_max`.
    pub fn sup_distance(&self, k_max: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.k_values
            .iter()
            .zip(&self.densities)
            .filter(|(k, _)| k.abs() <= k_max)
            .map(|(&k, &n)| (n - f(k)).abs())
            .fold(0.0, f64::max)
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// Uniform k grid of `count` points on `[-span, span]`.
pub fn k_grid(count: usize, span: f64) -> Vec<f64> {
    if count < 2 {
        return vec![0.0; count];
    }
    let step = 2.0 * span / (count - 1) as f64;
    (0..count).map(|i| -span + i as f64 * step).collect()
}

/// Fourier transform of one mesh-sampled orbital,
/// `(2 pi)^{-1/2} sum_j w_j psi(x_j) e^{-i k x_j}`, as `(re, im)`.
pub fn orbital_transform(mesh: &Mesh, orbital: &[f64], k: f64) -> (f64, f64) {
    let mut re = 0.0;
    let mut im = 0.0;
    for ((&x, &w), &psi) in mesh.nodes().iter().zip(mesh.weights()).zip(orbital) {
        let (s, c) = (k * x).sin_cos();
        re += w * psi * c;
        im -= w * psi * s;
    }
    let scale = (2.0 * PI).sqrt().recip();
    (re * scale, im * scale)
}

/// `n(k) = sum_i lambda_i |mu_i(k)|^2` over the most occupied orbitals.
pub fn momentum_distribution(
    decomp: &NaturalDecomposition,
    k_grid: &[f64],
) -> Result<MomentumDistribution, AnalysisError> {
    let m = k_grid.len();
    if m < 2
        || k_grid
            .iter()
            .zip(k_grid.iter().rev())
            .any(|(a, b)| (a + b).abs() > 1e-9 * a.abs().max(1.0))
    {
        return Err(AnalysisError::KGrid);
    }
    let k_max = k_grid.iter().fold(0.0, |acc: f64, k| acc.max(k.abs()));
    let resolvable = PI / decomp.mesh.max_gap();
    let aliased = k_max > resolvable * (1.0 + 1e-12);
    if aliased {
        log::warn!(
            "k grid reaches {k_max}, beyond the mesh limit pi/dx = {resolvable}; n(k) will alias"
        );
    }
    let mut densities = vec![0.0; m];
    let mut covered = 0.0;
    let mut used = 0;
    for (lambda, psi) in decomp.occupations.iter().zip(&decomp.orbitals) {
        if covered >= MOMENTUM_OCCUPATION_COVERAGE || *lambda == 0.0 {
            break;
        }
        for (n, &k) in densities.iter_mut().zip(k_grid) {
            let (re, im) = orbital_transform(&decomp.mesh, psi, k);
            *n += lambda * (re * re + im * im);
        }
        covered += lambda;
        used += 1;
    }
    Ok(MomentumDistribution {
        k_values: k_grid.to_vec(),
        densities,
        aliased,
        orbitals_used: used,
    })
}

/// `S = -sum lambda log2 lambda`, skipping occupations below the floor.
pub fn von_neumann_entropy(decomp: &NaturalDecomposition) -> f64 {
    entropy_of(&decomp.occupations)
}

/// Entropy of a bare occupation list.
pub fn entropy_of(occupations: &[f64]) -> f64 {
    -occupations
        .iter()
        .filter(|&&l| l >= OCCUPATION_FLOOR)
        .map(|l| l * l.log2())
        .sum::<f64>()
}

/// Number of occupations strictly above `threshold`.
pub fn schmidt_number(decomp: &NaturalDecomposition, threshold: f64) -> usize {
    decomp
        .occupations
        .iter()
        .filter(|&&l| l > threshold)
        .count()
}
