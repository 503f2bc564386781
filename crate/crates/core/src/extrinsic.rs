//! Fundamental forms, Weingarten map, H, ★τ and the complex mean curvature 𝑯.

use num_complex::Complex64;

use crate::ambient::{AmbientPoint, TensorAtPoint};
use crate::error::{Error, Result};
#[allow(unused_imports)]
use crate::prelude::*;
use crate::surface::SurfaceSample;

/// Largest ambient curvature component for which the ambient counts as flat.
pub const FLAT_TOL: f64 = 1e-9;

pub type M2 = [[f64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtrinsicData {
    /// `ii[a][b] = II(X_a, X_b)`, not symmetrized.
    pub ii: M2,
    /// `w[c][a]`: column `a` holds `W X_a` in the basis `(X_u, X_v)`.
    pub w: M2,
    /// `w_on[i][j]`: column `j` holds `W Ē_j` in the basis `(Ē₁, Ē₂)`.
    pub w_on: M2,
    pub iii: M2,
    pub k_e: f64,
    pub h: f64,
    /// `★τ = τ(Ē₁, Ē₂)` from the ambient torsion.
    pub star_tau: f64,
    /// `★τ` read off the Weingarten matrix, `W_on[1][0] − W_on[0][1]`.
    pub star_tau_w: f64,
    pub bold_h: Complex64,
    /// `τ(X_u, X_v) = ⟨N, T̃(X_u, X_v)⟩`.
    pub tau_uv: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub umbilic: bool,
    pub minimal_point: bool,
    pub geodesic_point: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Weingarten {
    pub w: M2,
    /// `W` from `−∇̃N`.
    pub w_cov: M2,
    /// `⟨−∇̃_{X_a} N, N⟩`.
    pub normal: [f64; 2],
    pub cross_check_residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decomposition {
    /// `|K_e − K|`, reported only over flat ambients.
    pub egregium: Option<f64>,
    /// `|sec̃ − (K − K_e)|` on the tangent plane.
    pub sectional_split: f64,
    pub sectional: f64,
}

fn max_abs2(m: &M2) -> f64 {
    m.iter().flatten().fold(0.0, |a: f64, x| a.max(x.abs()))
}

fn cov_deriv(amb: &AmbientPoint, xab: &[f64; 3], a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    let g = amb.gamma_apply(a, b);
    [xab[0] + g[0], xab[1] + g[1], xab[2] + g[2]]
}

/// `II(X_a, X_b) = ⟨N, ∂_a∂_b X + Γ(X_a, X_b)⟩`.
pub fn second_fundamental(s: &SurfaceSample) -> M2 {
    core::array::from_fn(|a| {
        core::array::from_fn(|b| s.inner(&s.n, &cov_deriv(&s.amb, &s.xab[a][b], &s.xa[a], &s.xa[b])))
    })
}

/// `II(α, β)` for tangent vectors given in `(X_u, X_v)` coordinates.
pub fn ii_apply(ii: &M2, a: [f64; 2], b: [f64; 2]) -> f64 {
    (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| a[i] * ii[i][j] * b[j]).sum()
}

pub fn mat_vec2(m: &M2, v: [f64; 2]) -> [f64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

impl ExtrinsicData {
    pub fn new(s: &SurfaceSample) -> ExtrinsicData {
        let ii = second_fundamental(s);
        let gi = &s.gs_inv;
        let w: M2 = core::array::from_fn(|c| core::array::from_fn(|a| gi[c][0] * ii[a][0] + gi[c][1] * ii[a][1]));
        let e = [s.tangent_coords(&s.e1), s.tangent_coords(&s.e2)];
        let w_on: M2 = core::array::from_fn(|i| core::array::from_fn(|j| ii_apply(&ii, e[j], e[i])));
        let iii: M2 = core::array::from_fn(|a| {
            core::array::from_fn(|b| {
                let (wa, wb) = ([w[0][a], w[1][a]], [w[0][b], w[1][b]]);
                ii_apply(&s.gs, wa, wb)
            })
        });
        let k_e = w[0][0] * w[1][1] - w[0][1] * w[1][0];
        let h = w[0][0] + w[1][1];
        let star_tau = s.inner(&s.n, &s.amb.torsion_apply(&s.e1, &s.e2));
        let star_tau_w = w_on[1][0] - w_on[0][1];
        let tau_uv = s.inner(&s.n, &s.amb.torsion_apply(&s.xa[0], &s.xa[1]));
        ExtrinsicData { ii, w, w_on, iii, k_e, h, star_tau, star_tau_w, bold_h: Complex64::new(h, star_tau), tau_uv }
    }

    /// `W` applied to a tangent vector in `(X_u, X_v)` coordinates.
    pub fn w_apply(&self, t: [f64; 2]) -> [f64; 2] {
        mat_vec2(&self.w, t)
    }

    /// Residuals of the stored invariants: `II` antisymmetry against `τ`,
    /// both `★τ` paths, and `III = WᵀG_S W`.
    pub fn invariant_residual(&self) -> f64 {
        let anti = (self.ii[0][1] - self.ii[1][0] - self.tau_uv).abs();
        let st = (self.star_tau - self.star_tau_w).abs();
        anti.max(st)
    }

    pub fn classify(&self, tol: f64) -> Classification {
        let (h, t) = (self.h, self.star_tau);
        let umb = [[0.5 * h, -0.5 * t], [0.5 * t, 0.5 * h]];
        let diff: M2 = core::array::from_fn(|i| core::array::from_fn(|j| self.w_on[i][j] - umb[i][j]));
        Classification {
            umbilic: max_abs2(&diff) <= tol,
            minimal_point: self.bold_h.norm() <= tol,
            geodesic_point: max_abs2(&self.ii) <= tol,
        }
    }
}

/// Both Weingarten paths: `II·G_S⁻¹` and `−(∂_a N + Γ(X_a, N))`.
pub fn weingarten(s: &SurfaceSample, e: &ExtrinsicData) -> Weingarten {
    let mut w_cov = [[0.0; 2]; 2];
    let mut normal = [0.0; 2];
    for a in 0..2 {
        let g = s.amb.gamma_apply(&s.xa[a], &s.n);
        let v: [f64; 3] = core::array::from_fn(|k| -(s.dn[a][k] + g[k]));
        let c = s.tangent_coords(&v);
        w_cov[0][a] = c[0];
        w_cov[1][a] = c[1];
        normal[a] = s.inner(&v, &s.n);
    }
    let diff: M2 = core::array::from_fn(|i| core::array::from_fn(|j| e.w[i][j] - w_cov[i][j]));
    let cross_check_residual = max_abs2(&diff) + normal[0].abs().max(normal[1].abs());
    Weingarten { w: e.w, w_cov, normal, cross_check_residual }
}

/// `|R̃(X_u,X_v,X_v,X_u) − R_S(X_u,X_v,X_v,X_u) + II_uu II_vv − II_uv II_vu|`.
pub fn gauss_equation_residual(s: &SurfaceSample, e: &ExtrinsicData, t: &TensorAtPoint) -> Result<f64> {
    let c = s.curvature.as_ref().ok_or(Error::MissingSecondOrder)?;
    let r = AmbientPoint::riem_apply(t, &s.xa[0], &s.xa[1], &s.xa[1]);
    let lhs = s.inner(&r, &s.xa[0]);
    let ii = &e.ii;
    let rhs = c.uvvu - ii[0][0] * ii[1][1] + ii[0][1] * ii[1][0];
    Ok((lhs - rhs).abs())
}

pub fn is_flat(t: &TensorAtPoint) -> bool {
    t.riem.iter().flatten().flatten().flatten().all(|x| x.abs() <= FLAT_TOL)
}

pub fn curvature_decomposition_residual(s: &SurfaceSample, e: &ExtrinsicData, t: &TensorAtPoint) -> Result<Decomposition> {
    let c = s.curvature.as_ref().ok_or(Error::MissingSecondOrder)?;
    let sectional = s.amb.sectional(t, s.xa[0].into(), s.xa[1].into())?;
    Ok(Decomposition {
        egregium: if is_flat(t) { Some((e.k_e - c.k).abs()) } else { None },
        sectional_split: (sectional - (c.k - e.k_e)).abs(),
        sectional,
    })
}
