//! Parameter grids with per-node geometry.

use rayon::prelude::*;
use rcgeom_core::ambient::TensorAtPoint;
use rcgeom_core::extrinsic::ExtrinsicData;
use rcgeom_core::gaussmap::{gauss_map, GaussField};
use rcgeom_core::holo::ComplexGrid;
use rcgeom_core::surface::SurfaceSample;
use rcgeom_core::Complex64;

use crate::error::{LabError, Result};
use crate::quadrature::AxisRule;
use crate::scene::Compiled;

/// Nodes with a smaller area density are masked out.
pub const AREA_VALID_MIN: f64 = 1e-6;
/// Half-width of the ∂z̄ stencil.
pub const STENCIL_HALF: usize = 2;
/// Relative tolerance for `E = G`, `F = 0` in isothermal charts.
pub const ISO_TOL: f64 = 1e-9;
pub const MIN_RESOLUTION: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    /// Evenly spaced nodes, endpoints included on non-periodic axes.
    Uniform,
    /// Gauss-Legendre panels on non-periodic axes.
    Quadrature,
}

#[derive(Clone, Debug)]
pub struct NodeData {
    pub sample: SurfaceSample,
    pub ext: ExtrinsicData,
    pub tensors: TensorAtPoint,
    pub gauss: Option<GaussField>,
    /// Conformal factor λ where the chart is isothermal.
    pub lambda: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Node {
    pub uv: [f64; 2],
    pub state: std::result::Result<Box<NodeData>, String>,
}

impl Node {
    pub fn data(&self) -> Option<&NodeData> {
        self.state.as_deref().ok()
    }
}

/// Row-major grid: node `i * nv + j` sits at `(u_i, v_j)`.
#[derive(Clone, Debug)]
pub struct SampleGrid {
    pub axes: [AxisRule; 2],
    pub layout: Layout,
    pub nodes: Vec<Node>,
    /// Nodes at least two stencil widths from every non-periodic edge.
    pub interior: Vec<bool>,
}

fn node_data(c: &Compiled, u: f64, v: f64) -> std::result::Result<Box<NodeData>, String> {
    let sample = c.surface.sample_full(u, v).map_err(|e| e.to_string())?;
    if sample.area.is_nan() || sample.area < AREA_VALID_MIN {
        return Err(format!("area density {:e} below threshold", sample.area));
    }
    let ext = ExtrinsicData::new(&sample);
    let tensors = sample.amb.tensors().map_err(|e| e.to_string())?;
    let gauss = if c.is_frame() { Some(gauss_map(&sample).map_err(|e| e.to_string())?) } else { None };
    let lambda = if c.isothermal() { Some(sample.isothermal_factor(ISO_TOL).map_err(|e| e.to_string())?) } else { None };
    Ok(Box::new(NodeData { sample, ext, tensors, gauss, lambda }))
}

pub fn parse_resolution(text: &str) -> Result<[usize; 2]> {
    let bad = || LabError::Config(format!("grid must look like NxM with N, M >= {MIN_RESOLUTION}, got `{text}`"));
    let (a, b) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    let n: usize = a.trim().parse().map_err(|_| bad())?;
    let m: usize = b.trim().parse().map_err(|_| bad())?;
    if n < MIN_RESOLUTION || m < MIN_RESOLUTION {
        return Err(bad());
    }
    Ok([n, m])
}

impl SampleGrid {
    /// Samples the scene in parallel; node order does not depend on the
    /// thread count.
    pub fn build(c: &Compiled, res: [usize; 2], layout: Layout) -> Result<SampleGrid> {
        if res[0] < MIN_RESOLUTION || res[1] < MIN_RESOLUTION {
            return Err(LabError::Config(format!("grid resolution must be at least {MIN_RESOLUTION} per axis")));
        }
        let d = &c.surface.domain;
        let per = c.surface.periodic;
        let axes = [
            AxisRule::new(d[0][0], d[0][1], res[0], per[0], layout),
            AxisRule::new(d[1][0], d[1][1], res[1], per[1], layout),
        ];
        let (nu, nv) = (axes[0].len(), axes[1].len());
        let nodes: Vec<Node> = (0..nu * nv)
            .into_par_iter()
            .map(|k| {
                let uv = [axes[0].nodes[k / nv], axes[1].nodes[k % nv]];
                Node { uv, state: node_data(c, uv[0], uv[1]) }
            })
            .collect();
        let m = 2 * STENCIL_HALF;
        let inside = |i: usize, n: usize, periodic: bool| periodic || (i >= m && i + m < n);
        let interior = (0..nu * nv).map(|k| inside(k / nv, nu, per[0]) && inside(k % nv, nv, per[1])).collect();
        Ok(SampleGrid { axes, layout, nodes, interior })
    }

    pub fn shape(&self) -> [usize; 2] {
        [self.axes[0].len(), self.axes[1].len()]
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.axes[1].len() + j
    }

    pub fn weight(&self, k: usize) -> f64 {
        let nv = self.axes[1].len();
        self.axes[0].weights[k / nv] * self.axes[1].weights[k % nv]
    }

    pub fn valid(&self) -> impl Iterator<Item = (usize, &NodeData)> {
        self.nodes.iter().enumerate().filter_map(|(k, n)| n.data().map(|d| (k, d)))
    }

    pub fn valid_interior(&self) -> impl Iterator<Item = (usize, &NodeData)> {
        self.valid().filter(|(k, _)| self.interior[*k])
    }

    pub fn valid_count(&self) -> usize {
        self.valid().count()
    }

    /// Interior node whose whole ∂z̄ stencil is valid.
    pub fn stencil_ok(&self, k: usize) -> bool {
        if self.layout != Layout::Uniform || !self.interior[k] {
            return false;
        }
        let [nu, nv] = self.shape();
        let (i, j) = ((k / nv) as isize, (k % nv) as isize);
        let h = STENCIL_HALF as isize;
        (-h..=h).all(|o| {
            let a = (i + o).rem_euclid(nu as isize) as usize;
            let b = (j + o).rem_euclid(nv as isize) as usize;
            self.nodes[a * nv + j as usize].data().is_some() && self.nodes[i as usize * nv + b].data().is_some()
        })
    }

    /// A complex field on the grid; invalid nodes hold NaN.
    pub fn complex_field(&self, f: impl Fn(&NodeData) -> Complex64) -> ComplexGrid {
        let [nu, nv] = self.shape();
        let nan = Complex64::new(f64::NAN, f64::NAN);
        ComplexGrid {
            nu,
            nv,
            h: [self.axes[0].step, self.axes[1].step],
            periodic: [self.axes[0].periodic, self.axes[1].periodic],
            data: self.nodes.iter().map(|n| n.data().map(&f).unwrap_or(nan)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin_default;

    #[test]
    fn resolution_parsing() {
        assert_eq!(parse_resolution("64x32").unwrap(), [64, 32]);
        assert!(parse_resolution("4x64").is_err());
        assert!(parse_resolution("64").is_err());
    }

    #[test]
    fn sphere_poles_are_masked() {
        let c = builtin_default("round_sphere_standard").unwrap().compile().unwrap();
        let g = SampleGrid::build(&c, [16, 16], Layout::Uniform).unwrap();
        assert!(g.nodes[g.index(0, 3)].data().is_none());
        assert!(g.nodes[g.index(15, 3)].data().is_none());
        assert!(g.nodes[g.index(1, 3)].data().is_some());
        assert_eq!(g.valid_count(), 14 * 16);
        assert!(!g.interior[g.index(3, 0)] && g.interior[g.index(4, 0)]);
    }

    #[test]
    fn row_major_order() {
        let c = builtin_default("euclidean_plane").unwrap().compile().unwrap();
        let g = SampleGrid::build(&c, [8, 9], Layout::Uniform).unwrap();
        assert_eq!(g.nodes[g.index(2, 5)].uv, [2.0 / 7.0, 5.0 / 8.0]);
        assert_eq!(g.nodes[1].uv, [0.0, 1.0 / 8.0]);
    }
}
