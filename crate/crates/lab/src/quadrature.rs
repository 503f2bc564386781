//! Axis rules and surface integrals `∫ f √det G_S du dv`.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

use crate::error::{LabError, Result};
use crate::grid::{Layout, NodeData, SampleGrid};

/// Nodes per Gauss-Legendre panel.
pub const PANEL: usize = 16;

/// Nodes and weights along one parameter axis.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub periodic: bool,
    /// Node spacing of a uniform rule, 0 otherwise.
    pub step: f64,
}

impl AxisRule {
    /// Uniform nodes; the endpoint is dropped on periodic axes.
    pub fn uniform(lo: f64, hi: f64, n: usize, periodic: bool) -> AxisRule {
        let len = hi - lo;
        if periodic {
            let h = len / n as f64;
            let nodes = (0..n).map(|k| lo + k as f64 * h).collect();
            return AxisRule { nodes, weights: vec![h; n], periodic, step: h };
        }
        let h = len / (n - 1) as f64;
        let nodes = (0..n).map(|k| if k + 1 == n { hi } else { lo + k as f64 * h }).collect();
        let mut weights = vec![h; n];
        weights[0] *= 0.5;
        weights[n - 1] *= 0.5;
        AxisRule { nodes, weights, periodic, step: h }
    }

    /// Composite Gauss-Legendre with 16-node panels (one shorter panel
    /// below 16 nodes); `n` is rounded down to a whole number of panels.
    pub fn gauss_legendre(lo: f64, hi: f64, n: usize) -> AxisRule {
        let (panels, per) = if n < PANEL { (1, n) } else { (n / PANEL, PANEL) };
        let rule = GaussLegendre::new(NonZeroUsize::new(per).expect("panel size is positive"));
        let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let width = (hi - lo) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * per);
        let mut weights = Vec::with_capacity(panels * per);
        for p in 0..panels {
            let a = lo + p as f64 * width;
            for &(x, w) in &pairs {
                nodes.push(a + 0.5 * width * (x + 1.0));
                weights.push(0.5 * width * w);
            }
        }
        AxisRule { nodes, weights, periodic: false, step: 0.0 }
    }

    pub fn new(lo: f64, hi: f64, n: usize, periodic: bool, layout: Layout) -> AxisRule {
        match (layout, periodic) {
            (Layout::Quadrature, false) => AxisRule::gauss_legendre(lo, hi, n),
            _ => AxisRule::uniform(lo, hi, n, periodic),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Field names accepted by [`integrate`].
pub const FIELDS: [&str; 8] = ["one", "K", "K_e", "H", "star_tau", "abs_phi", "abs_psi", "degree"];

/// Integrand over the area form at one node; `degree` is scaled so that its
/// integral is the raw degree.
pub fn field_value(name: &str, d: &NodeData) -> Result<Option<f64>> {
    Ok(match name {
        "one" | "1" | "area" => Some(1.0),
        "K" => d.sample.curvature.map(|c| c.k),
        "K_e" => Some(d.ext.k_e),
        "H" => Some(d.ext.h),
        "star_tau" => Some(d.ext.star_tau),
        "abs_phi" => d.lambda.map(|_| rcgeom_core::holo::phi(&d.ext).norm()),
        "abs_psi" => d.lambda.map(|_| rcgeom_core::holo::psi(&d.ext).norm()),
        "degree" => d.gauss.map(|g| rcgeom_core::gaussmap::degree_density(&g) / d.sample.area),
        _ => return Err(LabError::UndefinedField(name.to_string())),
    })
}

/// `∫ f √det G_S du dv` with the grid's weights; invalid nodes count as zero
/// (their area density is below the validity threshold).
pub fn integrate(grid: &SampleGrid, field: &str) -> Result<f64> {
    let mut total = 0.0;
    for (k, node) in grid.nodes.iter().enumerate() {
        let Some(d) = node.data() else { continue };
        let f = field_value(field, d)?.ok_or_else(|| LabError::UndefinedField(field.to_string()))?;
        total += grid.weight(k) * f * d.sample.area;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panels_integrate_polynomials() {
        let r = AxisRule::gauss_legendre(0.0, 2.0, 32);
        assert_eq!(r.len(), 32);
        let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(7)).sum();
        assert!((s - 32.0).abs() < 1e-12);
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn periodic_trapezoid_is_exact_for_trig() {
        let r = AxisRule::uniform(0.0, std::f64::consts::TAU, 12, true);
        let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * (3.0 * x).cos().powi(2)).sum();
        assert!((s - std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn short_axes_use_one_panel() {
        assert_eq!(AxisRule::gauss_legendre(0.0, 1.0, 9).len(), 9);
        assert_eq!(AxisRule::gauss_legendre(0.0, 1.0, 40).len(), 32);
    }
}
