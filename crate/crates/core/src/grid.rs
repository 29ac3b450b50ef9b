//! Spatial meshes: the uniform odd-point grid shared by the DVR and the
//! analysis pipeline, and general weighted meshes (Gauss panels) used when
//! analytic integrands need more than a uniform rule.

use thiserror::Error;

use crate::quadrature::{cumulative_matrix, gauss_legendre};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid needs an odd number of points >= 3 so that x = 0 is a node, got {0}")]
    EvenOrTooFew(usize),
    #[error("grid spacing must be finite and positive, got {0}")]
    Spacing(f64),
    #[error("invalid panel mesh: {0}")]
    Panels(String),
}

/// Uniform mesh `q_i = (i - (N-1)/2) dx`, symmetric about an exact zero node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n_points: usize,
    spacing: f64,
}

impl Grid {
    pub fn new(n_points: usize, spacing: f64) -> Result<Self, GridError> {
        if n_points < 3 || n_points.is_multiple_of(2) {
            return Err(GridError::EvenOrTooFew(n_points));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(GridError::Spacing(spacing));
        }
        Ok(Self { n_points, spacing })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Index of the `x = 0` node.
    pub fn center(&self) -> usize {
        (self.n_points - 1) / 2
    }

    pub fn point(&self, i: usize) -> f64 {
        (i as f64 - self.center() as f64) * self.spacing
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Largest `|q_i|`.
    pub fn half_span(&self) -> f64 {
        self.center() as f64 * self.spacing
    }

    /// Highest wavenumber the mesh resolves, `pi / dx`.
    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI / self.spacing
    }
}

/// Same as [`Grid::new`].
pub fn build_grid(n_points: usize, spacing: f64) -> Result<Grid, GridError> {
    Grid::new(n_points, spacing)
}

#[derive(Debug, Clone, PartialEq)]
struct Panels {
    order: usize,
    /// left edge and width of each panel
    edges: Vec<(f64, f64)>,
}

/// Quadrature mesh: nodes with weights. A uniform [`Grid`] becomes a mesh of
/// equal weights `dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    uniform: Option<Grid>,
    panels: Option<Panels>,
}

impl Mesh {
    /// Composite Gauss–Legendre mesh on `[-half_width, half_width]`, panels of
    /// width `panel_width` laid out from 0 outward so that no panel straddles
    /// the origin.
    pub fn gauss_panels(
        half_width: f64,
        panel_width: f64,
        order: usize,
    ) -> Result<Self, GridError> {
        if !(half_width > 0.0 && panel_width > 0.0 && half_width.is_finite()) || order == 0 {
            return Err(GridError::Panels(format!(
                "half width {half_width}, panel width {panel_width}, order {order}"
            )));
        }
        let per_side = (half_width / panel_width - 1e-9).ceil() as usize;
        let width = half_width / per_side as f64;
        let left_edges = (0..2 * per_side).map(|p| -half_width + p as f64 * width);
        let (t, w) = gauss_legendre(order);
        let mut nodes = Vec::with_capacity(2 * per_side * order);
        let mut weights = Vec::with_capacity(2 * per_side * order);
        let mut edges = Vec::with_capacity(2 * per_side);
        for a in left_edges {
            edges.push((a, width));
            for (ti, wi) in t.iter().zip(&w) {
                nodes.push(a + 0.5 * width * (ti + 1.0));
                weights.push(0.5 * width * wi);
            }
        }
        Ok(Self {
            nodes,
            weights,
            uniform: None,
            panels: Some(Panels { order, edges }),
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The uniform grid this mesh came from, if any.
    pub fn grid(&self) -> Option<&Grid> {
        self.uniform.as_ref()
    }

    /// Largest gap between neighbouring nodes; sets the aliasing limit of a
    /// discrete Fourier sum.
    pub fn max_gap(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|p| p[1] - p[0])
            .fold(0.0, f64::max)
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    /// `int_{left end}^{x_i} f` at every node, spectrally accurate per panel.
    /// Only available for Gauss panel meshes.
    pub fn cumulative_integral(&self, values: &[f64]) -> Option<Vec<f64>> {
        let panels = self.panels.as_ref()?;
        let order = panels.order;
        let s = cumulative_matrix(order);
        let mut out = Vec::with_capacity(values.len());
        let mut offset = 0.0;
        for (p, &(_, width)) in panels.edges.iter().enumerate() {
            let f = &values[p * order..(p + 1) * order];
            for row in &s {
                let partial: f64 = row.iter().zip(f).map(|(a, b)| a * b).sum();
                out.push(offset + 0.5 * width * partial);
            }
            let w = &self.weights[p * order..(p + 1) * order];
            offset += f.iter().zip(w).map(|(a, b)| a * b).sum::<f64>();
        }
        Some(out)
    }
}

impl From<&Grid> for Mesh {
    fn from(grid: &Grid) -> Self {
        Self {
            nodes: grid.points(),
            weights: vec![grid.spacing(); grid.n_points()],
            uniform: Some(*grid),
            panels: None,
        }
    }
}

impl From<Grid> for Mesh {
    fn from(grid: Grid) -> Self {
        Self::from(&grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_grid_examples() {
        let g = build_grid(81, 0.16).unwrap();
        assert!((g.point(0) + 6.4).abs() < 1e-12 && (g.point(80) - 6.4).abs() < 1e-12);
        assert_eq!(build_grid(3, 1.0).unwrap().points(), vec![-1.0, 0.0, 1.0]);
        let g = build_grid(61, 0.16).unwrap();
        assert!((g.half_span() - 4.8).abs() < 1e-12);
        assert_eq!(g.point(g.center()), 0.0);
    }

    #[test]
    fn build_grid_rejects_bad_input() {
        assert_eq!(build_grid(80, 0.1), Err(GridError::EvenOrTooFew(80)));
        assert_eq!(build_grid(1, 0.1), Err(GridError::EvenOrTooFew(1)));
        assert!(matches!(build_grid(5, 0.0), Err(GridError::Spacing(_))));
        assert!(matches!(build_grid(5, -1.0), Err(GridError::Spacing(_))));
        assert!(matches!(
            build_grid(5, f64::NAN),
            Err(GridError::Spacing(_))
        ));
    }

    #[test]
    fn grid_is_symmetric() {
        let g = build_grid(161, 0.08).unwrap();
        let p = g.points();
        for i in 0..p.len() {
            assert_eq!(p[i], -p[p.len() - 1 - i]);
        }
        assert!(p.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn panel_mesh_integrates_gaussian_and_cumulates() {
        let mesh = Mesh::gauss_panels(7.0, 0.5, 12).unwrap();
        let f: Vec<f64> = mesh.nodes().iter().map(|x| (-x * x).exp()).collect();
        let total = mesh.integrate(&f);
        assert!((total - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        let cum = mesh.cumulative_integral(&f).unwrap();
        // by symmetry the cumulative integral at -x and x sums to the total
        let n = cum.len();
        for i in 0..n {
            assert!((cum[i] + cum[n - 1 - i] - total).abs() < 1e-12);
        }
        // a node-free check: derivative of x e^{-x^2}
        let g: Vec<f64> = mesh
            .nodes()
            .iter()
            .map(|x| (1.0 - 2.0 * x * x) * (-x * x).exp())
            .collect();
        let cum = mesh.cumulative_integral(&g).unwrap();
        for (c, x) in cum.iter().zip(mesh.nodes()) {
            assert!((c - x * (-x * x).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn panel_mesh_has_edge_at_origin() {
        let mesh = Mesh::gauss_panels(6.0, 0.7, 4).unwrap();
        let nodes = mesh.nodes();
        let neg = nodes.iter().filter(|&&x| x < 0.0).count();
        assert_eq!(neg * 2, nodes.len());
    }
}
