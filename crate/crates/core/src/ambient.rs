//! Riemann-Cartan 3-manifolds on a chart of ℝ³.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::{inv3, M3};
#[allow(unused_imports)]
use crate::prelude::*;
use crate::so3::Vec3;
use crate::tape::Tape;

pub const CHART_VARS: [&str; 3] = ["x", "y", "z"];
/// Smallest `|det F|` accepted for a frame.
pub const FRAME_DET_MIN: f64 = 1e-9;
/// Largest metric-compatibility residual accepted for coefficient input.
pub const COMPAT_TOL: f64 = 1e-6;

pub type Christoffel = [M3<f64>; 3];
pub type Riemann = [[M3<f64>; 3]; 3];

/// Open box of the chart; infinite bounds by default.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartBox {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl Default for ChartBox {
    fn default() -> Self {
        ChartBox { lo: [f64::NEG_INFINITY; 3], hi: [f64::INFINITY; 3] }
    }
}

impl ChartBox {
    pub fn contains(&self, p: &[f64; 3]) -> bool {
        (0..3).all(|i| p[i] > self.lo[i] && p[i] < self.hi[i])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    /// Metric, connection and first derivatives.
    First,
    /// Also derivatives of the connection, needed for curvature.
    Second,
}

#[derive(Clone, Debug)]
pub enum Source {
    /// Columns of `f` are the frame vectors; `finv` is its inverse.
    Frame { f: [[Expr; 3]; 3], finv: [[Expr; 3]; 3] },
    /// `gamma[k][i][j] = Γ^k_{ij}`.
    Coeff { g: [[Expr; 3]; 3], gamma: [[[Expr; 3]; 3]; 3] },
}

#[derive(Clone, Debug)]
pub struct Ambient {
    domain: ChartBox,
    source: Source,
    first: Tape,
    second: Option<Tape>,
}

/// Frame data at a point: `f`, `finv = F⁻¹` and `dfinv[c] = ∂_c F⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameAt {
    pub f: M3<f64>,
    pub finv: M3<f64>,
    pub dfinv: [M3<f64>; 3],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmbientPoint {
    pub p: [f64; 3],
    pub g: M3<f64>,
    pub ginv: M3<f64>,
    pub sqrt_det: f64,
    /// `dg[c] = ∂_c g`.
    pub dg: [M3<f64>; 3],
    pub gamma: Christoffel,
    /// `dgamma[c][k][i][j] = ∂_c Γ^k_{ij}`.
    pub dgamma: Option<[Christoffel; 3]>,
    pub frame: Option<FrameAt>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TensorAtPoint {
    /// `torsion[k][i][j] = T^k_{ij}`.
    pub torsion: Christoffel,
    /// `riem[l][k][i][j] = R^l_{kij}`.
    pub riem: Riemann,
    /// `ric[j][k] = R^i_{kij}`.
    pub ric: M3<f64>,
    pub scal: f64,
    /// `low[i][j][k][l] = R(∂i, ∂j, ∂k, ∂l)`.
    pub low: Riemann,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SufficientCondition {
    pub ricci_proportional: bool,
    pub torsion_proportional: bool,
    pub kappa: f64,
    pub ricci_residual: f64,
    pub torsion_residual: f64,
}

fn sym_det(m: &[[Expr; 3]; 3]) -> Expr {
    let t = |a: usize, b: usize, c: usize| &(&m[0][a] * &m[1][b]) * &m[2][c];
    t(0, 1, 2) - t(0, 2, 1) + t(1, 2, 0) - t(1, 0, 2) + t(2, 0, 1) - t(2, 1, 0)
}

/// Symbolic inverse `adj(m)/det(m)`.
pub fn sym_inverse(m: &[[Expr; 3]; 3]) -> [[Expr; 3]; 3] {
    let d = sym_det(m);
    core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            let (a, b) = ((j + 1) % 3, (j + 2) % 3);
            let (c, e) = ((i + 1) % 3, (i + 2) % 3);
            (&(&m[a][c] * &m[b][e]) - &(&m[a][e] * &m[b][c])) / &d
        })
    })
}

fn flat9(m: &[[Expr; 3]; 3]) -> impl Iterator<Item = Expr> + '_ {
    m.iter().flat_map(|r| r.iter().cloned())
}

fn read9(v: &[f64]) -> M3<f64> {
    core::array::from_fn(|i| core::array::from_fn(|j| v[3 * i + j]))
}

fn matmul(a: &M3<f64>, b: &M3<f64>) -> M3<f64> {
    core::array::from_fn(|i| core::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
}

fn transpose(a: &M3<f64>) -> M3<f64> {
    core::array::from_fn(|i| core::array::from_fn(|j| a[j][i]))
}

fn max_abs<const N: usize>(it: impl IntoIterator<Item = [f64; N]>) -> f64 {
    it.into_iter().flatten().fold(0.0, |m: f64, x| m.max(x.abs()))
}

impl Ambient {
    /// Frame-defined (Weitzenböck) ambient; `F⁻¹` is formed symbolically.
    pub fn from_frame(f: [[Expr; 3]; 3], domain: ChartBox) -> Result<Ambient> {
        let finv = sym_inverse(&f);
        Ambient::from_frame_parts(f, finv, domain, Order::Second)
    }

    /// Frame-defined ambient with a caller-supplied symbolic inverse.
    pub fn from_frame_parts(
        f: [[Expr; 3]; 3],
        finv: [[Expr; 3]; 3],
        domain: ChartBox,
        order: Order,
    ) -> Result<Ambient> {
        let flat: Vec<Expr> = flat9(&finv).collect();
        let d1: Vec<Vec<Expr>> = CHART_VARS.iter().map(|v| Expr::diff_all(&flat, v)).collect();
        let mut first: Vec<Expr> = flat9(&f).collect();
        first.extend(flat.iter().cloned());
        for d in &d1 {
            first.extend(d.iter().cloned());
        }
        let first = Tape::compile(&first, &CHART_VARS)?;
        let second = if order == Order::Second {
            let mut out = Vec::with_capacity(81);
            for v in CHART_VARS {
                for d in &d1 {
                    out.extend(Expr::diff_all(d, v));
                }
            }
            Some(Tape::compile(&out, &CHART_VARS)?)
        } else {
            None
        };
        Ok(Ambient { domain, source: Source::Frame { f, finv }, first, second })
    }

    /// Coefficient-defined ambient. `g` is symmetrized from its upper triangle.
    pub fn from_coefficients(
        g: [[Expr; 3]; 3],
        gamma: [[[Expr; 3]; 3]; 3],
        domain: ChartBox,
    ) -> Result<Ambient> {
        let g: [[Expr; 3]; 3] = core::array::from_fn(|i| core::array::from_fn(|j| g[i.min(j)][i.max(j)].clone()));
        let gflat: Vec<Expr> = flat9(&g).collect();
        let gam: Vec<Expr> = gamma.iter().flat_map(flat9).collect();
        let mut first = gflat.clone();
        for v in CHART_VARS {
            first.extend(Expr::diff_all(&gflat, v));
        }
        first.extend(gam.iter().cloned());
        let first = Tape::compile(&first, &CHART_VARS)?;
        let mut second = Vec::with_capacity(81);
        for v in CHART_VARS {
            second.extend(Expr::diff_all(&gam, v));
        }
        let second = Some(Tape::compile(&second, &CHART_VARS)?);
        Ok(Ambient { domain, source: Source::Coeff { g, gamma }, first, second })
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn domain(&self) -> &ChartBox {
        &self.domain
    }

    pub fn is_frame(&self) -> bool {
        matches!(self.source, Source::Frame { .. })
    }

    pub fn has_second_order(&self) -> bool {
        self.second.is_some()
    }

    /// Checks the construction invariants at the given points: non-singular
    /// frame, or SPD metric with metric-compatible connection.
    pub fn validate(&self, points: &[[f64; 3]]) -> Result<()> {
        for p in points {
            let a = self.eval(*p, Order::First)?;
            if !self.is_frame() {
                let r = a.metric_compat_residual();
                if !(r <= COMPAT_TOL) {
                    return Err(Error::NotMetricCompatible(r));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, p: [f64; 3], order: Order) -> Result<AmbientPoint> {
        if !self.domain.contains(&p) {
            return Err(Error::OutsideChart);
        }
        let raw = self.first.eval(&p);
        match &self.source {
            Source::Frame { .. } => {
                let v = raw.map_err(|_| Error::SingularFrame(0.0))?;
                let f = read9(&v[0..9]);
                let det = crate::jet::det3(&f);
                if !(det.abs() >= FRAME_DET_MIN) {
                    return Err(Error::SingularFrame(det));
                }
                let finv = read9(&v[9..18]);
                let dfinv: [M3<f64>; 3] = core::array::from_fn(|c| read9(&v[18 + 9 * c..27 + 9 * c]));
                let g = matmul(&transpose(&finv), &finv);
                let dg = core::array::from_fn(|c| {
                    let a = matmul(&transpose(&dfinv[c]), &finv);
                    core::array::from_fn(|i| core::array::from_fn(|j| a[i][j] + a[j][i]))
                });
                // Γ^k_{ab} = F^k_i ∂_a (F⁻¹)^i_b
                let gamma: Christoffel = core::array::from_fn(|k| {
                    core::array::from_fn(|a| {
                        core::array::from_fn(|b| (0..3).map(|i| f[k][i] * dfinv[a][i][b]).sum())
                    })
                });
                let dgamma = match (order, &self.second) {
                    (Order::Second, Some(t)) => {
                        let w = t.eval(&p).map_err(|_| Error::SingularFrame(det))?;
                        // ∂_c F = −F (∂_c F⁻¹) F
                        let df: [M3<f64>; 3] = core::array::from_fn(|c| {
                            let m = matmul(&matmul(&f, &dfinv[c]), &f);
                            m.map(|r| r.map(|x| -x))
                        });
                        Some(core::array::from_fn(|c| {
                            core::array::from_fn(|k| {
                                core::array::from_fn(|a| {
                                    core::array::from_fn(|b| {
                                        (0..3)
                                            .map(|i| {
                                                df[c][k][i] * dfinv[a][i][b]
                                                    + f[k][i] * w[27 * c + 9 * a + 3 * i + b]
                                            })
                                            .sum()
                                    })
                                })
                            })
                        }))
                    }
                    (Order::Second, None) => return Err(Error::MissingSecondOrder),
                    _ => None,
                };
                let (ginv, gd) = inv3(&g);
                Ok(AmbientPoint {
                    p,
                    g,
                    ginv,
                    sqrt_det: gd.sqrt(),
                    dg,
                    gamma,
                    dgamma,
                    frame: Some(FrameAt { f, finv, dfinv }),
                })
            }
            Source::Coeff { .. } => {
                let v = raw?;
                let g = read9(&v[0..9]);
                if !(g[0][0] > 0.0
                    && g[0][0] * g[1][1] - g[0][1] * g[1][0] > 0.0
                    && crate::jet::det3(&g) > 0.0)
                {
                    return Err(Error::SingularMetric);
                }
                let dg = core::array::from_fn(|c| read9(&v[9 + 9 * c..18 + 9 * c]));
                let gamma: Christoffel = core::array::from_fn(|k| read9(&v[36 + 9 * k..45 + 9 * k]));
                let dgamma = match (order, &self.second) {
                    (Order::Second, Some(t)) => {
                        let w = t.eval(&p)?;
                        Some(core::array::from_fn(|c| core::array::from_fn(|k| read9(&w[27 * c + 9 * k..27 * c + 9 * k + 9]))))
                    }
                    (Order::Second, None) => return Err(Error::MissingSecondOrder),
                    _ => None,
                };
                let (ginv, gd) = inv3(&g);
                Ok(AmbientPoint { p, g, ginv, sqrt_det: gd.sqrt(), dg, gamma, dgamma, frame: None })
            }
        }
    }

    pub fn christoffel(&self, p: [f64; 3]) -> Result<Christoffel> {
        Ok(self.eval(p, Order::First)?.gamma)
    }

    pub fn torsion(&self, p: [f64; 3]) -> Result<Christoffel> {
        Ok(self.eval(p, Order::First)?.torsion())
    }

    pub fn curvature(&self, p: [f64; 3]) -> Result<TensorAtPoint> {
        self.eval(p, Order::Second)?.tensors()
    }

    pub fn sectional(&self, p: [f64; 3], u: Vec3, v: Vec3) -> Result<f64> {
        let a = self.eval(p, Order::Second)?;
        a.sectional(&a.tensors()?, u, v)
    }

    pub fn metric_compat_residual(&self, p: [f64; 3]) -> Result<f64> {
        Ok(self.eval(p, Order::First)?.metric_compat_residual())
    }

    pub fn sufficient_condition_check(&self, p: [f64; 3], tol: f64) -> Result<SufficientCondition> {
        let a = self.eval(p, Order::Second)?;
        Ok(a.sufficient_condition(&a.tensors()?, tol))
    }
}

impl AmbientPoint {
    pub fn inner(&self, a: &[f64; 3], b: &[f64; 3]) -> f64 {
        crate::jet::inner(&self.g, a, b)
    }

    pub fn cross(&self, a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
        crate::jet::cross_g(&self.ginv, self.sqrt_det, a, b)
    }

    /// `Γ(a, b) = Γ^k_{ij} a^i b^j ∂k`, i.e. `∇_a b` for constant components.
    pub fn gamma_apply(&self, a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
        crate::jet::gamma_apply(&self.gamma, a, b)
    }

    pub fn torsion(&self) -> Christoffel {
        core::array::from_fn(|k| {
            core::array::from_fn(|i| core::array::from_fn(|j| self.gamma[k][i][j] - self.gamma[k][j][i]))
        })
    }

    /// `T(a, b)`.
    pub fn torsion_apply(&self, a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
        let x = self.gamma_apply(a, b);
        let y = self.gamma_apply(b, a);
        [x[0] - y[0], x[1] - y[1], x[2] - y[2]]
    }

    pub fn tensors(&self) -> Result<TensorAtPoint> {
        let dg = self.dgamma.as_ref().ok_or(Error::MissingSecondOrder)?;
        let gm = &self.gamma;
        let mut riem = [[[[0.0; 3]; 3]; 3]; 3];
        for l in 0..3 {
            for k in 0..3 {
                for i in 0..3 {
                    for j in 0..3 {
                        let mut r = dg[i][l][j][k] - dg[j][l][i][k];
                        for m in 0..3 {
                            r += gm[l][i][m] * gm[m][j][k] - gm[l][j][m] * gm[m][i][k];
                        }
                        riem[l][k][i][j] = r;
                    }
                }
            }
        }
        let ric: M3<f64> = core::array::from_fn(|j| core::array::from_fn(|k| (0..3).map(|i| riem[i][k][i][j]).sum()));
        let scal = (0..3).flat_map(|j| (0..3).map(move |k| (j, k))).map(|(j, k)| self.ginv[j][k] * ric[j][k]).sum();
        let low = core::array::from_fn(|i| {
            core::array::from_fn(|j| {
                core::array::from_fn(|k| {
                    core::array::from_fn(|l| (0..3).map(|m| riem[m][k][i][j] * self.g[m][l]).sum())
                })
            })
        });
        Ok(TensorAtPoint { torsion: self.torsion(), riem, ric, scal, low })
    }

    /// `R(a, b)c`.
    pub fn riem_apply(t: &TensorAtPoint, a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (l, o) in out.iter_mut().enumerate() {
            for k in 0..3 {
                for i in 0..3 {
                    for j in 0..3 {
                        *o += t.riem[l][k][i][j] * a[i] * b[j] * c[k];
                    }
                }
            }
        }
        out
    }

    pub fn sectional(&self, t: &TensorAtPoint, u: Vec3, v: Vec3) -> Result<f64> {
        let (u, v) = (u.0, v.0);
        let den = self.inner(&u, &u) * self.inner(&v, &v) - self.inner(&u, &v).powi(2);
        if !(den >= 1e-12) {
            return Err(Error::DegeneratePlane);
        }
        let r = AmbientPoint::riem_apply(t, &u, &v, &v);
        Ok(self.inner(&r, &u) / den)
    }

    /// `max |∂_i g_{jk} − Γ^l_{ij} g_{lk} − Γ^l_{ik} g_{jl}|`.
    pub fn metric_compat_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let mut r = self.dg[i][j][k];
                    for l in 0..3 {
                        r -= self.gamma[l][i][j] * self.g[l][k] + self.gamma[l][i][k] * self.g[j][l];
                    }
                    worst = worst.max(r.abs());
                }
            }
        }
        worst
    }

    /// Cross-product tensor `C^k_{ij} = (∂i × ∂j)^k`.
    pub fn cross_tensor(&self) -> Christoffel {
        let e = |i: usize| {
            let mut v = [0.0; 3];
            v[i] = 1.0;
            v
        };
        let mut c = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let w = self.cross(&e(i), &e(j));
                for k in 0..3 {
                    c[k][i][j] = w[k];
                }
            }
        }
        c
    }

    pub fn sufficient_condition(&self, t: &TensorAtPoint, tol: f64) -> SufficientCondition {
        let third = t.scal / 3.0;
        let ricci_residual = max_abs((0..3).map(|j| core::array::from_fn::<f64, 3, _>(|k| t.ric[j][k] - third * self.g[j][k])));
        let c = self.cross_tensor();
        let (mut tc, mut cc) = (0.0, 0.0);
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    tc += t.torsion[k][i][j] * c[k][i][j];
                    cc += c[k][i][j] * c[k][i][j];
                }
            }
        }
        let kappa = tc / cc;
        let torsion_residual = max_abs(
            (0..9).map(|n| core::array::from_fn::<f64, 3, _>(|j| t.torsion[n / 3][n % 3][j] - kappa * c[n / 3][n % 3][j])),
        );
        SufficientCondition {
            ricci_proportional: ricci_residual <= tol,
            torsion_proportional: torsion_residual <= tol,
            kappa,
            ricci_residual,
            torsion_residual,
        }
    }
}
