//! Parameterized surfaces `X(u,v)` in an ambient chart.
//!
//! Per-sample data is computed with first-order jets in `(u,v)`, so
//! `∂_a N` and `∂_a Γ^S` are exact up to round-off.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::ambient::{Ambient, AmbientPoint, Order};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::{self, inner, inv2, inv3, Jet, Real, M3, V3};
#[allow(unused_imports)]
use crate::prelude::*;
use crate::tape::Tape;

pub const SURFACE_VARS: [&str; 2] = ["u", "v"];
/// Smallest area density accepted at a sample.
pub const AREA_MIN: f64 = 1e-9;

/// `gamma_s[c][a][b] = Γ^S{}^c_{ab}`.
pub type Christoffel2 = [[[f64; 2]; 2]; 2];

#[derive(Clone, Debug)]
pub struct Surface {
    ambient: Arc<Ambient>,
    x: [Expr; 3],
    tape: Tape,
    pub domain: [[f64; 2]; 2],
    pub periodic: [bool; 2],
    pub isothermal: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceCurvature {
    /// `dgamma_s[i][c][a][b] = ∂_i Γ^S{}^c_{ab}`.
    pub dgamma_s: [Christoffel2; 2],
    /// `riem[l][k][i][j] = R_S{}^l_{kij}`.
    pub riem: [[[[f64; 2]; 2]; 2]; 2],
    pub ric: [[f64; 2]; 2],
    pub scal: f64,
    /// Gaussian curvature `K = Scal_S / 2`.
    pub k: f64,
    /// `R_S(X_u, X_v, X_v, X_u)`.
    pub uvvu: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceSample {
    pub uv: [f64; 2],
    pub p: [f64; 3],
    /// `xa[a] = ∂_a X`.
    pub xa: [[f64; 3]; 2],
    /// `xab[a][b] = ∂_a ∂_b X`.
    pub xab: [[[f64; 3]; 2]; 2],
    pub amb: AmbientPoint,
    /// Unit normal, chart components.
    pub n: [f64; 3],
    /// `dn[a] = ∂_a N` (componentwise).
    pub dn: [[f64; 3]; 2],
    pub gs: [[f64; 2]; 2],
    pub gs_inv: [[f64; 2]; 2],
    pub area: f64,
    pub e1: [f64; 3],
    pub e2: [f64; 3],
    pub gamma_s: Christoffel2,
    pub curvature: Option<SurfaceCurvature>,
}

fn lift(v: f64, d: [f64; 2]) -> Jet {
    Jet::new(v, d)
}

fn lift3(v: &[f64; 3], du: &[f64; 3], dv: &[f64; 3]) -> V3<Jet> {
    core::array::from_fn(|k| lift(v[k], [du[k], dv[k]]))
}

fn chain(d: &[M3<f64>; 3], xa: &[[f64; 3]; 2], i: usize, j: usize) -> [f64; 2] {
    core::array::from_fn(|a| (0..3).map(|c| d[c][i][j] * xa[a][c]).sum())
}

/// Induced Christoffels, surface metric and its inverse.
type Induced<T> = ([[[T; 2]; 2]; 2], [[T; 2]; 2], [[T; 2]; 2]);

fn induced<T: Real>(
    g: &M3<T>,
    gamma: &[M3<T>; 3],
    xa: &[V3<T>; 2],
    xab: &[[V3<T>; 2]; 2],
) -> Induced<T> {
    let gs: [[T; 2]; 2] = core::array::from_fn(|a| core::array::from_fn(|b| inner(g, &xa[a], &xa[b])));
    let (gi, _) = inv2(&gs);
    let mut out = [[[T::zero(); 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let cov = jet::add3(&xab[a][b], &jet::gamma_apply(gamma, &xa[a], &xa[b]));
            let w = [inner(g, &cov, &xa[0]), inner(g, &cov, &xa[1])];
            for c in 0..2 {
                out[c][a][b] = gi[c][0] * w[0] + gi[c][1] * w[1];
            }
        }
    }
    (out, gs, gi)
}

/// Curvature of a 2D connection from its coefficients and their partials
/// `dgs[i][c][a][b]`.
pub fn curvature_2d(gs: &Christoffel2, dgs: &[Christoffel2; 2], metric: &[[f64; 2]; 2]) -> SurfaceCurvature {
    let (ginv, _) = inv2(metric);
    let mut riem = [[[[0.0; 2]; 2]; 2]; 2];
    for l in 0..2 {
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let mut r = dgs[i][l][j][k] - dgs[j][l][i][k];
                    for m in 0..2 {
                        r += gs[l][i][m] * gs[m][j][k] - gs[l][j][m] * gs[m][i][k];
                    }
                    riem[l][k][i][j] = r;
                }
            }
        }
    }
    let ric: [[f64; 2]; 2] = core::array::from_fn(|j| core::array::from_fn(|k| riem[0][k][0][j] + riem[1][k][1][j]));
    let mut scal = 0.0;
    for j in 0..2 {
        for k in 0..2 {
            scal += ginv[j][k] * ric[j][k];
        }
    }
    // R(∂u,∂v)∂v paired with ∂u
    let uvvu = riem[0][1][0][1] * metric[0][0] + riem[1][1][0][1] * metric[1][0];
    SurfaceCurvature { dgamma_s: *dgs, riem, ric, scal, k: 0.5 * scal, uvvu }
}

impl Surface {
    pub fn new(
        ambient: Arc<Ambient>,
        x: [Expr; 3],
        domain: [[f64; 2]; 2],
        periodic: [bool; 2],
        isothermal: bool,
    ) -> Result<Surface> {
        let mut out: Vec<Expr> = x.to_vec();
        let mut layer: Vec<Expr> = x.to_vec();
        // derivatives in the order u, v; uu, uv, vv; uuu, uuv, uvv, vvv
        for order in 1..=3 {
            let mut next = Vec::new();
            for k in 0..=order {
                let src_idx = if k < order { k } else { order - 1 };
                let var = if k < order { "u" } else { "v" };
                next.extend(Expr::diff_all(&layer[3 * src_idx..3 * src_idx + 3], var));
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        let tape = Tape::compile(&out, &SURFACE_VARS)?;
        Ok(Surface { ambient, x, tape, domain, periodic, isothermal })
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn x(&self) -> &[Expr; 3] {
        &self.x
    }

    /// Same map and domain in another ambient.
    pub fn with_ambient(&self, ambient: Arc<Ambient>) -> Surface {
        Surface { ambient, ..self.clone() }
    }

    /// Same map with `u` and `v` exchanged (opposite orientation).
    pub fn swapped(&self) -> Result<Surface> {
        let map = [("u", Expr::var("v")), ("v", Expr::var("u"))];
        let x = self.x.clone().map(|e| e.substitute(&map));
        Surface::new(
            self.ambient.clone(),
            x,
            [self.domain[1], self.domain[0]],
            [self.periodic[1], self.periodic[0]],
            self.isothermal,
        )
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.domain[axis][1] - self.domain[axis][0]
    }

    pub fn in_domain(&self, uv: [f64; 2]) -> bool {
        (0..2).all(|a| {
            let slack = 1e-12 * self.extent(a).abs().max(1.0);
            self.periodic[a] || (uv[a] >= self.domain[a][0] - slack && uv[a] <= self.domain[a][1] + slack)
        })
    }

    /// `X`, its three first-and-second derivative layers, as 10 vectors.
    pub fn eval_map(&self, u: f64, v: f64) -> Result<[[f64; 3]; 10]> {
        let w = self.tape.eval(&[u, v])?;
        Ok(core::array::from_fn(|i| [w[3 * i], w[3 * i + 1], w[3 * i + 2]]))
    }

    pub fn point(&self, u: f64, v: f64) -> Result<[f64; 3]> {
        Ok(self.eval_map(u, v)?[0])
    }

    /// First-order data: frame, normal and its exact derivatives, Γ^S.
    pub fn sample(&self, u: f64, v: f64) -> Result<SurfaceSample> {
        self.sample_with(u, v, Order::First)
    }

    /// As [`Surface::sample`] plus surface curvature and ambient `∂Γ`.
    pub fn sample_full(&self, u: f64, v: f64) -> Result<SurfaceSample> {
        self.sample_with(u, v, Order::Second)
    }

    pub fn sample_with(&self, u: f64, v: f64, order: Order) -> Result<SurfaceSample> {
        if !self.in_domain([u, v]) {
            return Err(Error::OutsideChart);
        }
        let m = self.eval_map(u, v)?;
        let (p, xa, xab) = (m[0], [m[1], m[2]], [[m[3], m[4]], [m[4], m[5]]]);
        let xabc = [[[m[6], m[7]], [m[7], m[8]]], [[m[7], m[8]], [m[8], m[9]]]];
        let amb = self.ambient.eval(p, order)?;

        let g: M3<Jet> = core::array::from_fn(|i| {
            core::array::from_fn(|j| lift(amb.g[i][j], chain(&amb.dg, &xa, i, j)))
        });
        let xa_j: [V3<Jet>; 2] = core::array::from_fn(|a| lift3(&xa[a], &xab[a][0], &xab[a][1]));
        let (ginv, det) = inv3(&g);
        let c = jet::cross_g(&ginv, Real::square_root(det), &xa_j[0], &xa_j[1]);
        let len = Real::square_root(inner(&g, &c, &c));
        if !(len.v >= AREA_MIN) {
            return Err(Error::DegenerateParameterization);
        }
        let nj: V3<Jet> = c.map(|x| x / len);
        let n = jet::values3(&nj);
        let dn = [jet::partial3(&nj, 0), jet::partial3(&nj, 1)];

        let (gamma_s, gs, gs_inv, curvature) = match amb.dgamma {
            Some(dgam) => {
                let gamma: [M3<Jet>; 3] = core::array::from_fn(|k| {
                    core::array::from_fn(|i| {
                        core::array::from_fn(|j| {
                            lift(amb.gamma[k][i][j], core::array::from_fn(|a| (0..3).map(|c| dgam[c][k][i][j] * xa[a][c]).sum()))
                        })
                    })
                });
                let xab_j: [[V3<Jet>; 2]; 2] =
                    core::array::from_fn(|a| core::array::from_fn(|b| lift3(&xab[a][b], &xabc[a][b][0], &xabc[a][b][1])));
                let (gsj, gsm, gsi) = induced(&g, &gamma, &xa_j, &xab_j);
                let val = gsj.map(|r| r.map(|c| c.map(|x| x.v)));
                let dgs: [Christoffel2; 2] = core::array::from_fn(|i| gsj.map(|r| r.map(|c| c.map(|x| x.d[i]))));
                let metric = gsm.map(|r| r.map(|x| x.v));
                let curv = curvature_2d(&val, &dgs, &metric);
                (val, metric, gsi.map(|r| r.map(|x| x.v)), Some(curv))
            }
            None => {
                let (val, metric, gi) = induced(&amb.g, &amb.gamma, &xa, &xab);
                (val, metric, gi, None)
            }
        };
        let area = (gs[0][0] * gs[1][1] - gs[0][1] * gs[1][0]).sqrt();
        if !(area >= AREA_MIN) {
            return Err(Error::DegenerateParameterization);
        }
        let nu = amb.inner(&xa[0], &xa[0]).sqrt();
        let e1 = xa[0].map(|x| x / nu);
        let proj = amb.inner(&xa[1], &e1);
        let w = [xa[1][0] - proj * e1[0], xa[1][1] - proj * e1[1], xa[1][2] - proj * e1[2]];
        let nw = amb.inner(&w, &w).sqrt();
        let e2 = w.map(|x| x / nw);
        Ok(SurfaceSample { uv: [u, v], p, xa, xab, amb, n, dn, gs, gs_inv, area, e1, e2, gamma_s, curvature })
    }

    /// Gaussian curvature from Γ^S differentiated by central differences with
    /// one Richardson step. Step `h` defaults to `1e-3` times the extent.
    pub fn intrinsic_curvature_fd(&self, u: f64, v: f64, h: Option<[f64; 2]>) -> Result<f64> {
        let h = h.unwrap_or([1e-3 * self.extent(0), 1e-3 * self.extent(1)]);
        let base = self.sample(u, v)?;
        let mut dgs = [[[[0.0; 2]; 2]; 2]; 2];
        for i in 0..2 {
            let at = |s: f64| -> Result<Christoffel2> {
                let mut uv = [u, v];
                uv[i] += s;
                if !self.in_domain(uv) {
                    return Err(Error::StencilOutsideDomain);
                }
                Ok(self.sample(uv[0], uv[1])?.gamma_s)
            };
            let (p1, m1, p2, m2) = (at(h[i] / 2.0)?, at(-h[i] / 2.0)?, at(h[i])?, at(-h[i])?);
            for c in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        let fine = (p1[c][a][b] - m1[c][a][b]) / h[i];
                        let coarse = (p2[c][a][b] - m2[c][a][b]) / (2.0 * h[i]);
                        dgs[i][c][a][b] = (4.0 * fine - coarse) / 3.0;
                    }
                }
            }
        }
        Ok(curvature_2d(&base.gamma_s, &dgs, &base.gs).k)
    }

    /// Conformal factor λ of a declared isothermal chart.
    pub fn isothermal_factor(&self, u: f64, v: f64, tol: f64) -> Result<f64> {
        self.sample(u, v)?.isothermal_factor(tol)
    }
}

impl SurfaceSample {
    pub fn inner(&self, a: &[f64; 3], b: &[f64; 3]) -> f64 {
        self.amb.inner(a, b)
    }

    /// `α X_u + β X_v`.
    pub fn tangent(&self, c: [f64; 2]) -> [f64; 3] {
        core::array::from_fn(|k| c[0] * self.xa[0][k] + c[1] * self.xa[1][k])
    }

    /// Coordinates of the tangential part of `w` in the basis `(X_u, X_v)`.
    pub fn tangent_coords(&self, w: &[f64; 3]) -> [f64; 2] {
        let r = [self.inner(w, &self.xa[0]), self.inner(w, &self.xa[1])];
        [
            self.gs_inv[0][0] * r[0] + self.gs_inv[0][1] * r[1],
            self.gs_inv[1][0] * r[0] + self.gs_inv[1][1] * r[1],
        ]
    }

    /// `J(w) = N × w`.
    pub fn j(&self, w: &[f64; 3]) -> [f64; 3] {
        self.amb.cross(&self.n, w)
    }

    pub fn isothermal_factor(&self, tol: f64) -> Result<f64> {
        let [[e, f], [_, g]] = self.gs;
        let scale = e.max(g);
        if (e - g).abs() <= tol * scale && f.abs() <= tol * scale {
            Ok(e.sqrt())
        } else {
            Err(Error::NotIsothermal { e, f, g })
        }
    }

    /// Metric-compatibility residual of Γ^S against `G_S`, using exact
    /// derivatives of `G_S` from the ambient.
    pub fn induced_compat_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for c in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    let dg = self.d_gs(c, a, b);
                    let mut r = dg;
                    for d in 0..2 {
                        r -= self.gamma_s[d][c][a] * self.gs[d][b] + self.gamma_s[d][c][b] * self.gs[a][d];
                    }
                    worst = worst.max(r.abs());
                }
            }
        }
        worst
    }

    /// `∂_c G_S[a][b]` from `∂g`, `X_a` and `X_ab`.
    pub fn d_gs(&self, c: usize, a: usize, b: usize) -> f64 {
        let mut dg: M3<f64> = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                dg[i][j] = (0..3).map(|m| self.amb.dg[m][i][j] * self.xa[c][m]).sum();
            }
        }
        inner(&dg, &self.xa[a], &self.xa[b])
            + self.inner(&self.xab[c][a], &self.xa[b])
            + self.inner(&self.xa[a], &self.xab[c][b])
    }

    /// Tangential torsion `T_S(X_a, X_b)` in `(X_u, X_v)` coordinates.
    pub fn torsion_s(&self) -> [f64; 2] {
        [
            self.gamma_s[0][0][1] - self.gamma_s[0][1][0],
            self.gamma_s[1][0][1] - self.gamma_s[1][1][0],
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{ChartBox, CHART_VARS};
    use crate::expr::parse;
    use core::f64::consts::PI;

    pub(crate) fn ex3(rows: [[&str; 3]; 3]) -> [[Expr; 3]; 3] {
        rows.map(|r| r.map(|s| parse(s, &CHART_VARS).unwrap()))
    }

    fn euclid() -> Arc<Ambient> {
        Arc::new(Ambient::from_frame(ex3([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]), ChartBox::default()).unwrap())
    }

    fn surf(a: Arc<Ambient>, x: [&str; 3], dom: [[f64; 2]; 2], per: [bool; 2]) -> Surface {
        Surface::new(a, x.map(|s| parse(s, &SURFACE_VARS).unwrap()), dom, per, false).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn plane_sample() {
        let s = surf(euclid(), ["u", "v", "0"], [[0.0, 1.0], [0.0, 1.0]], [false; 2]);
        let x = s.sample(0.3, 0.4).unwrap();
        assert_eq!(x.n, [0.0, 0.0, 1.0]);
        assert_eq!(x.gs, [[1.0, 0.0], [0.0, 1.0]]);
        assert!(close(&x.j(&x.xa[0]), &x.xa[1], 1e-15));
        let c = s.sample_full(0.3, 0.4).unwrap().curvature.unwrap();
        assert_eq!(c.k, 0.0);
        assert_eq!(s.isothermal_factor(0.3, 0.4, 1e-9).unwrap(), 1.0);
    }

    #[test]
    fn round_sphere_sample() {
        let s = surf(
            euclid(),
            ["sin(u)*cos(v)", "sin(u)*sin(v)", "cos(u)"],
            [[0.0, PI], [0.0, 2.0 * PI]],
            [false, true],
        );
        let (u, v) = (0.7, 2.1);
        let x = s.sample_full(u, v).unwrap();
        assert!((x.area - u.sin()).abs() < 1e-14);
        assert!(close(&x.n, &x.p, 1e-14));
        assert!((x.curvature.unwrap().k - 1.0).abs() < 1e-12);
        let fd = s.intrinsic_curvature_fd(u, v, None).unwrap();
        assert!((fd - 1.0).abs() < 1e-6);
        assert!(matches!(s.isothermal_factor(u, v, 1e-6), Err(Error::NotIsothermal { .. })));
        assert!(matches!(s.intrinsic_curvature_fd(1e-4, v, None), Err(Error::StencilOutsideDomain)));
    }

    #[test]
    fn euclidean_catenoid_is_isothermal() {
        let s = surf(
            euclid(),
            ["cosh(v)*cos(u)", "cosh(v)*sin(u)", "v"],
            [[0.0, 2.0 * PI], [-1.0, 1.0]],
            [true, false],
        );
        let v = 0.6;
        assert!((s.isothermal_factor(1.0, v, 1e-12).unwrap() - v.cosh()).abs() < 1e-13);
        let x = s.sample_full(1.0, v).unwrap();
        assert!((x.curvature.unwrap().k + 1.0 / v.cosh().powi(4)).abs() < 1e-12);
    }

    #[test]
    fn catenoid_frame_plane_normal() {
        let g = [
            ["-sin(x)", "tanh(y)*cos(x)", "sech(y)*cos(x)"],
            ["cos(x)", "tanh(y)*sin(x)", "sech(y)*sin(x)"],
            ["0", "sech(y)", "-tanh(y)"],
        ];
        let f = ex3(core::array::from_fn(|i| core::array::from_fn(|j| g[j][i])));
        let a = Arc::new(Ambient::from_frame(f, ChartBox::default()).unwrap());
        let s = surf(a, ["u", "v", "0"], [[0.0, 2.0 * PI], [-2.0, 2.0]], [true, false]);
        let x = s.sample_full(0.4, 1.3).unwrap();
        assert!(close(&x.n, &[0.0, 0.0, 1.0], 1e-14));
        assert!((x.curvature.unwrap().k + 1.0 / 1.3f64.cosh().powi(2)).abs() < 1e-12);
        assert!(x.induced_compat_residual() < 1e-12);
        // T_S(∂1, ∂2) = tanh y ∂1
        assert!(close(&x.torsion_s(), &[1.3f64.tanh(), 0.0], 1e-14));
    }

    #[test]
    fn degenerate_and_outside() {
        let s = surf(euclid(), ["u", "u", "0"], [[0.0, 1.0], [0.0, 1.0]], [false; 2]);
        assert!(matches!(s.sample(0.5, 0.5), Err(Error::DegenerateParameterization)));
        assert!(matches!(s.sample(1.5, 0.5), Err(Error::OutsideChart)));
    }

    #[test]
    fn swapped_reverses_normal() {
        let s = surf(euclid(), ["u", "v", "u*v"], [[0.0, 1.0], [0.0, 2.0]], [false; 2]);
        let t = s.swapped().unwrap();
        let (a, b) = (s.sample(0.2, 0.7).unwrap(), t.sample(0.7, 0.2).unwrap());
        assert!(close(&a.n, &b.n.map(|x| -x), 1e-15));
        assert_eq!(t.domain, [[0.0, 2.0], [0.0, 1.0]]);
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Graph surfaces in a curved coefficient ambient: orthonormality of
        /// (Ē₁, Ē₂, N), J² = −1, induced compatibility, jet K against FD K.
        #[test]
        fn frame_and_curvature_invariants(
            c in prop::array::uniform4(-0.5..0.5f64),
            uv in prop::array::uniform2(0.2..0.8f64),
        ) {
            use crate::expr::lit;
            let phi = parse(&alloc::format!("{}*x*y + {}*z", lit(c[0]), lit(c[1])), &CHART_VARS).unwrap();
            let w = Expr::call(crate::expr::Func::Exp, &phi.mul(&Expr::num(2.0)));
            let g: [[Expr; 3]; 3] = core::array::from_fn(|i| core::array::from_fn(|j| if i == j { w.clone() } else { Expr::zero() }));
            let dphi: [Expr; 3] = core::array::from_fn(|i| phi.diff(CHART_VARS[i]));
            let gamma = core::array::from_fn(|k| core::array::from_fn(|i| core::array::from_fn(|j| {
                let d = |x: usize, y: usize| if x == y { Expr::one() } else { Expr::zero() };
                &d(k, i) * &dphi[j] + &d(k, j) * &dphi[i] - &d(i, j) * &dphi[k]
            })));
            let a = Arc::new(Ambient::from_coefficients(g, gamma, ChartBox::default()).unwrap());
            let z = alloc::format!("{}*u^2 + {}*sin(v)", lit(c[2]), lit(c[3]));
            let s = surf(a, ["u", "v", z.as_str()], [[0.0, 1.0], [0.0, 1.0]], [false; 2]);
            let x = s.sample_full(uv[0], uv[1]).unwrap();
            let frame = [x.e1, x.e2, x.n];
            for i in 0..3 { for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((x.inner(&frame[i], &frame[j]) - want).abs() <= 1e-10);
            }}
            // orientation: N = Ē₁ × Ē₂
            prop_assert!(close(&x.amb.cross(&x.e1, &x.e2), &x.n, 1e-10));
            let jj = x.j(&x.j(&x.e1));
            prop_assert!(close(&jj, &x.e1.map(|v| -v), 1e-10));
            prop_assert!(close(&x.j(&x.e1), &x.e2, 1e-10));
            prop_assert!(x.induced_compat_residual() <= 1e-9);
            let k = x.curvature.unwrap().k;
            let fd = s.intrinsic_curvature_fd(uv[0], uv[1], None).unwrap();
            prop_assert!((k - fd).abs() <= 1e-6 * (1.0 + k.abs()));
            // ∂_a N against central differences
            for a in 0..2 {
                let h = 1e-5;
                let mut p = uv; p[a] += h;
                let mut m = uv; m[a] -= h;
                let (np, nm) = (s.sample(p[0], p[1]).unwrap().n, s.sample(m[0], m[1]).unwrap().n);
                let fd: Vec<f64> = (0..3).map(|k| (np[k] - nm[k]) / (2.0 * h)).collect();
                prop_assert!(close(&x.dn[a], &fd, 1e-7));
            }
        }
    }
}
