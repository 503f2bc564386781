//! Complex quantities on isothermal charts `z = u + iv`: the Hopf
//! differential φ, ψ = III(∂z, ∂z), the L-tensor and ∂z̄ stencils.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::ambient::{AmbientPoint, TensorAtPoint};
use crate::error::{Error, Result};
use crate::extrinsic::{ii_apply, ExtrinsicData, M2};
#[allow(unused_imports)]
use crate::prelude::*;
use crate::surface::SurfaceSample;

/// `¼[(m_uu − m_vv) − i(m_uv + m_vu)]`, the `dz²` coefficient of `m(∂z, ∂z)`.
pub fn quad_coeff(m: &M2) -> Complex64 {
    Complex64::new(m[0][0] - m[1][1], -(m[0][1] + m[1][0])) * 0.25
}

pub fn phi(e: &ExtrinsicData) -> Complex64 {
    quad_coeff(&e.ii)
}

pub fn psi(e: &ExtrinsicData) -> Complex64 {
    quad_coeff(&e.iii)
}

/// `|ψ − 𝑯φ|`.
pub fn psi_identity_residual(e: &ExtrinsicData) -> f64 {
    (psi(e) - e.bold_h * phi(e)).norm()
}

/// 𝑯 from covariant derivatives of the coordinate fields, divided by `λ²`.
pub fn bold_h_isothermal(s: &SurfaceSample, tol: f64) -> Result<Complex64> {
    let lambda = s.isothermal_factor(tol)?;
    let nabla = |a: usize, b: usize| -> [f64; 3] {
        let g = s.amb.gamma_apply(&s.xa[a], &s.xa[b]);
        core::array::from_fn(|k| s.xab[a][b][k] + g[k])
    };
    let (uu, vv, uv, vu) = (nabla(0, 0), nabla(1, 1), nabla(0, 1), nabla(1, 0));
    let re: [f64; 3] = core::array::from_fn(|k| uu[k] + vv[k]);
    let im: [f64; 3] = core::array::from_fn(|k| uv[k] - vu[k]);
    let l2 = lambda * lambda;
    Ok(Complex64::new(s.inner(&s.n, &re), s.inner(&s.n, &im)) / l2)
}

fn on_tangent(s: &SurfaceSample, e: &ExtrinsicData, v: &[f64; 3]) -> [f64; 3] {
    s.tangent(e.w_apply(s.tangent_coords(v)))
}

/// Tangential torsion `T_S(a, b) = T̃(a, b) − τ(a, b) N`.
pub fn torsion_tangential(s: &SurfaceSample, a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    let t = s.amb.torsion_apply(a, b);
    let tau = s.inner(&s.n, &t);
    core::array::from_fn(|k| t[k] - tau * s.n[k])
}

/// `L(Ē₁, Ē₂) = R̃(Ē₁, Ē₂)N − J W J T_S(Ē₁, Ē₂)`, chart components.
pub fn l_tensor(s: &SurfaceSample, e: &ExtrinsicData, t: &TensorAtPoint) -> [f64; 3] {
    let r = AmbientPoint::riem_apply(t, &s.e1, &s.e2, &s.n);
    let ts = torsion_tangential(s, &s.e1, &s.e2);
    let jwj = s.j(&on_tangent(s, e, &s.j(&ts)));
    core::array::from_fn(|k| r[k] - jwj[k])
}

/// Right-hand side pieces of the ∂z̄φ identity at one sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HopfTerms {
    pub lambda2: f64,
    /// `−(i/2) R(X_u, X_v, ∂z, N)`.
    pub curvature: Complex64,
    /// `−½ II(J T_S(X_u, X_v), ∂z)`.
    pub torsion: Complex64,
}

impl HopfTerms {
    /// `(λ²/4) conj(∂z̄𝑯) + curvature + torsion`.
    pub fn rhs(&self, dzbar_h: Complex64) -> Complex64 {
        dzbar_h.conj() * (0.25 * self.lambda2) + self.curvature + self.torsion
    }
}

pub fn hopf_terms(s: &SurfaceSample, e: &ExtrinsicData, t: &TensorAtPoint, tol: f64) -> Result<HopfTerms> {
    let lambda = s.isothermal_factor(tol)?;
    let (xu, xv) = (&s.xa[0], &s.xa[1]);
    let ru = s.inner(&AmbientPoint::riem_apply(t, xu, xv, xu), &s.n);
    let rv = s.inner(&AmbientPoint::riem_apply(t, xu, xv, xv), &s.n);
    // ∂z = ½(X_u − i X_v), extended ℂ-linearly
    let r_dz = Complex64::new(ru, -rv) * 0.5;
    let curvature = Complex64::new(0.0, -0.5) * r_dz;
    let jt = s.tangent_coords(&s.j(&torsion_tangential(s, xu, xv)));
    let ii_dz = Complex64::new(ii_apply(&e.ii, jt, [1.0, 0.0]), -ii_apply(&e.ii, jt, [0.0, 1.0])) * 0.5;
    Ok(HopfTerms { lambda2: lambda * lambda, curvature, torsion: ii_dz * -0.5 })
}

/// Complex field on a uniform `(u,v)` grid, `data[i * nv + j]` at
/// `(u_i, v_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexGrid {
    pub nu: usize,
    pub nv: usize,
    pub h: [f64; 2],
    pub periodic: [bool; 2],
    pub data: Vec<Complex64>,
}

impl ComplexGrid {
    fn at(&self, i: isize, j: isize) -> Result<Complex64> {
        let wrap = |k: isize, n: usize, per: bool| -> Result<usize> {
            if per {
                Ok(k.rem_euclid(n as isize) as usize)
            } else if k >= 0 && (k as usize) < n {
                Ok(k as usize)
            } else {
                Err(Error::StencilOutsideDomain)
            }
        };
        let (a, b) = (wrap(i, self.nu, self.periodic[0])?, wrap(j, self.nv, self.periodic[1])?);
        Ok(self.data[a * self.nv + b])
    }

    /// Fourth-order central difference along `axis`.
    pub fn partial(&self, i: usize, j: usize, axis: usize) -> Result<Complex64> {
        let (i, j) = (i as isize, j as isize);
        let f = |k: isize| if axis == 0 { self.at(i + k, j) } else { self.at(i, j + k) };
        let d = f(-2)? - f(-1)? * 8.0 + f(1)? * 8.0 - f(2)?;
        Ok(d / (12.0 * self.h[axis]))
    }

    /// `∂/∂z̄ = ½(∂_u + i ∂_v)`.
    pub fn dzbar(&self, i: usize, j: usize) -> Result<Complex64> {
        Ok((self.partial(i, j, 0)? + Complex64::i() * self.partial(i, j, 1)?) * 0.5)
    }

    /// `|∂z̄ f|` per node; `None` where the stencil leaves the grid.
    pub fn cr_residual(&self) -> Vec<Option<f64>> {
        (0..self.nu)
            .flat_map(|i| (0..self.nv).map(move |j| (i, j)))
            .map(|(i, j)| self.dzbar(i, j).ok().map(|z| z.norm()))
            .collect()
    }
}
