//! Gauss map of a surface in a Weitzenböck ambient, gauge changes of the
//! frame and the identities relating them to 𝑯.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::ambient::{Ambient, Order, Source, CHART_VARS};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::extrinsic::{ExtrinsicData, M2};
#[allow(unused_imports)]
use crate::prelude::*;
use crate::so3::AXIS_TOL;
use crate::surface::SurfaceSample;
use crate::tape::Tape;

/// Largest `‖e − n‖` for which a gauge axis counts as the Gauss map.
pub const AXIS_NORMAL_TOL: f64 = 1e-8;
/// Largest distance of a raw degree integral from an integer.
pub const DEGREE_TOL: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussField {
    /// Frame components of `N`.
    pub n: [f64; 3],
    /// `dn[a] = ∂_a n`.
    pub dn: [[f64; 3]; 2],
    /// `e_top[i]`: `E_i^⊤` in `(X_u, X_v)` coordinates.
    pub e_top: [[f64; 2]; 3],
    /// `e_cross[i]`: `N × E_i` in `(X_u, X_v)` coordinates.
    pub e_cross: [[f64; 2]; 3],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DivCurl {
    pub div_top: f64,
    pub curl_top: [f64; 3],
    pub div_cross: f64,
    pub curl_cross: [f64; 3],
}

/// A rotation field `e^{θê}` on the chart; the axis is normalized symbolically.
#[derive(Clone, Debug)]
pub struct GaugeField {
    pub theta: Expr,
    pub axis: [Expr; 3],
    tape: Tape,
}

/// Gauge data at a point: `θ`, `∇θ`, `e`, `de[c] = ∂_c e` and the raw axis length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaugeAt {
    pub theta: f64,
    pub dtheta: [f64; 3],
    pub e: [f64; 3],
    pub de: [[f64; 3]; 3],
    pub raw_norm: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaugeCheck {
    /// 𝑯 predicted from the ungauged data and the correction terms.
    pub predicted: Complex64,
    /// 𝑯 recomputed in the gauged frame.
    pub direct: Complex64,
    /// `max(|ΔH|, |Δ★τ|)` between the two.
    pub general: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Conformality {
    pub k: f64,
    /// `‖G_n − k G_S‖_max / ‖G_n‖_max`.
    pub residual: f64,
    pub conformal: bool,
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Divergence and curl from `d[i][j] = D_i f^j`.
pub fn div_curl_of(d: &[[f64; 3]; 3]) -> (f64, [f64; 3]) {
    (
        d[0][0] + d[1][1] + d[2][2],
        [d[1][2] - d[2][1], d[2][0] - d[0][2], d[0][1] - d[1][0]],
    )
}

pub fn gauss_map(s: &SurfaceSample) -> Result<GaussField> {
    let fr = s.amb.frame.as_ref().ok_or(Error::NotWeitzenboeck)?;
    let apply = |m: &[[f64; 3]; 3], v: &[f64; 3]| -> [f64; 3] { core::array::from_fn(|i| dot(&m[i], v)) };
    let n = apply(&fr.finv, &s.n);
    let dn = core::array::from_fn(|a| {
        let dfinv: [[f64; 3]; 3] =
            core::array::from_fn(|i| core::array::from_fn(|j| (0..3).map(|c| fr.dfinv[c][i][j] * s.xa[a][c]).sum()));
        let x = apply(&dfinv, &s.n);
        let y = apply(&fr.finv, &s.dn[a]);
        [x[0] + y[0], x[1] + y[1], x[2] + y[2]]
    });
    let col = |i: usize| -> [f64; 3] { [fr.f[0][i], fr.f[1][i], fr.f[2][i]] };
    let e_top = core::array::from_fn(|i| s.tangent_coords(&col(i)));
    let e_cross = core::array::from_fn(|i| s.tangent_coords(&s.j(&col(i))));
    Ok(GaussField { n, dn, e_top, e_cross })
}

impl GaussField {
    /// Derivative of `n` along the tangent vector with coordinates `t`.
    pub fn directional(&self, t: [f64; 2]) -> [f64; 3] {
        core::array::from_fn(|j| t[0] * self.dn[0][j] + t[1] * self.dn[1][j])
    }

    pub fn div_curl(&self) -> DivCurl {
        let top: [[f64; 3]; 3] = core::array::from_fn(|i| self.directional(self.e_top[i]));
        let crs: [[f64; 3]; 3] = core::array::from_fn(|i| self.directional(self.e_cross[i]));
        let (div_top, curl_top) = div_curl_of(&top);
        let (div_cross, curl_cross) = div_curl_of(&crs);
        DivCurl { div_top, curl_top, div_cross, curl_cross }
    }

    /// `W` from the differential of the Gauss map, `W X_a = −F ∂_a n`.
    pub fn weingarten(&self, s: &SurfaceSample) -> Result<M2> {
        let fr = s.amb.frame.as_ref().ok_or(Error::NotWeitzenboeck)?;
        let mut w = [[0.0; 2]; 2];
        for a in 0..2 {
            let v: [f64; 3] = core::array::from_fn(|k| -dot(&fr.f[k], &self.dn[a]));
            let c = s.tangent_coords(&v);
            w[0][a] = c[0];
            w[1][a] = c[1];
        }
        Ok(w)
    }

    /// `n · (n_u × n_v)`, the pullback of the sphere's area form.
    pub fn sphere_density(&self) -> f64 {
        dot(&self.n, &cross(&self.dn[0], &self.dn[1]))
    }

    /// `G_n[a][b] = ∂_a n · ∂_b n`.
    pub fn pullback_metric(&self) -> M2 {
        core::array::from_fn(|a| core::array::from_fn(|b| dot(&self.dn[a], &self.dn[b])))
    }

    pub fn conformality(&self, s: &SurfaceSample, tol: f64) -> Conformality {
        let gn = self.pullback_metric();
        let gi = &s.gs_inv;
        let k = 0.5 * (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).map(|(a, b)| gi[a][b] * gn[b][a]).sum::<f64>();
        let (mut num, mut den) = (0.0f64, 0.0f64);
        for a in 0..2 {
            for b in 0..2 {
                num = num.max((gn[a][b] - k * s.gs[a][b]).abs());
                den = den.max(gn[a][b].abs());
            }
        }
        let residual = if den > 0.0 { num / den } else { f64::INFINITY };
        Conformality { k, residual, conformal: k > tol && num <= tol * den }
    }
}

impl DivCurl {
    /// `[|Div⊤n + H|, ‖Curl⊤n + ★τ n‖, |Div×n − ★τ|, ‖Curl×n + H n‖]`.
    pub fn ladder_residuals(&self, n: &[f64; 3], h: f64, star_tau: f64) -> [f64; 4] {
        let norm = |c: &[f64; 3], s: f64| -> f64 {
            let d: [f64; 3] = core::array::from_fn(|i| c[i] + s * n[i]);
            dot(&d, &d).sqrt()
        };
        [
            (self.div_top + h).abs(),
            norm(&self.curl_top, star_tau),
            (self.div_cross - star_tau).abs(),
            norm(&self.curl_cross, h),
        ]
    }
}

/// `|K_e √det G_S − n·(n_u × n_v)|`.
pub fn area_form_residual(s: &SurfaceSample, e: &ExtrinsicData, g: &GaussField) -> f64 {
    (e.k_e * s.area - g.sphere_density()).abs()
}

/// Rounds a raw degree integral `(1/4π)∫ n*dA`; returns the degree and the
/// distance to it.
pub fn gauss_degree(raw: f64, closed: bool) -> Result<(i64, f64)> {
    if !closed {
        return Err(Error::NotClosed);
    }
    let d = raw.round();
    Ok((d as i64, (raw - d).abs()))
}

/// Integrand of the degree with respect to `du dv`.
pub fn degree_density(g: &GaussField) -> f64 {
    g.sphere_density() / (4.0 * PI)
}

impl GaugeField {
    pub fn new(theta: Expr, axis: [Expr; 3]) -> Result<GaugeField> {
        let norm2 = &(&(&axis[0] * &axis[0]) + &(&axis[1] * &axis[1])) + &(&axis[2] * &axis[2]);
        let norm = norm2.sqrt();
        let e: [Expr; 3] = core::array::from_fn(|i| &axis[i] / &norm);
        let mut out: Vec<Expr> = Vec::with_capacity(17);
        out.push(theta.clone());
        for v in CHART_VARS {
            out.push(theta.diff(v));
        }
        out.extend(e.iter().cloned());
        for v in CHART_VARS {
            out.extend(Expr::diff_all(&e, v));
        }
        out.push(norm);
        let tape = Tape::compile(&out, &CHART_VARS)?;
        Ok(GaugeField { theta, axis: e, tape })
    }

    pub fn eval(&self, p: [f64; 3]) -> Result<GaugeAt> {
        let w = self.tape.eval(&p)?;
        Ok(GaugeAt {
            theta: w[0],
            dtheta: [w[1], w[2], w[3]],
            e: [w[4], w[5], w[6]],
            de: core::array::from_fn(|c| [w[7 + 3 * c], w[8 + 3 * c], w[9 + 3 * c]]),
            raw_norm: w[16],
        })
    }

    /// Fails with `NonUnitAxis` where the supplied axis is not unit length.
    pub fn validate(&self, points: &[[f64; 3]]) -> Result<()> {
        for p in points {
            let g = self.eval(*p)?;
            if !((g.raw_norm - 1.0).abs() <= AXIS_TOL) {
                return Err(Error::NonUnitAxis(g.raw_norm));
            }
        }
        Ok(())
    }

    /// Rodrigues matrix `I + sin θ ê + (1 − cos θ)(eeᵀ − I)` as Exprs.
    pub fn rotation(&self) -> [[Expr; 3]; 3] {
        let e = &self.axis;
        let (s, c) = (self.theta.sin(), Expr::one() - self.theta.cos());
        let hat = [
            [Expr::zero(), e[2].neg(), e[1].clone()],
            [e[2].clone(), Expr::zero(), e[0].neg()],
            [e[1].neg(), e[0].clone(), Expr::zero()],
        ];
        core::array::from_fn(|i| {
            core::array::from_fn(|j| {
                let d = if i == j { Expr::one() } else { Expr::zero() };
                let sq = if i == j { &(&e[i] * &e[j]) - &Expr::one() } else { &e[i] * &e[j] };
                &(&d + &(&s * &hat[i][j])) + &(&c * &sq)
            })
        })
    }
}

/// Frame-defined ambient with frame `F·e^{θê}`.
pub fn apply_gauge(a: &Ambient, g: &GaugeField, order: Order) -> Result<Ambient> {
    let Source::Frame { f, finv } = a.source() else {
        return Err(Error::NotWeitzenboeck);
    };
    let r = g.rotation();
    let mul = |x: &[[Expr; 3]; 3], y: &[[Expr; 3]; 3], tx: bool| -> [[Expr; 3]; 3] {
        core::array::from_fn(|i| {
            core::array::from_fn(|j| {
                (0..3).fold(Expr::zero(), |acc, m| {
                    let xe = if tx { &x[m][i] } else { &x[i][m] };
                    &acc + &(xe * &y[m][j])
                })
            })
        })
    };
    let f2 = mul(f, &r, false);
    let finv2 = mul(&r, finv, true);
    Ambient::from_frame_parts(f2, finv2, *a.domain(), order)
}

/// Compares 𝑯 in the gauged frame against the correction formula built from
/// the ungauged Gauss field and the gauge data.
pub fn general_gauge_residual(
    s: &SurfaceSample,
    e: &ExtrinsicData,
    gf: &GaussField,
    gauge: &GaugeAt,
    gauged: &ExtrinsicData,
) -> GaugeCheck {
    // surface derivatives of a chart function from its gradient
    let along = |grad: &[f64; 3], t: [f64; 2]| -> f64 {
        let w = s.tangent(t);
        dot(grad, &w)
    };
    let grad_de: [[f64; 3]; 3] = core::array::from_fn(|j| core::array::from_fn(|c| gauge.de[c][j]));
    let ops = |dirs: &[[f64; 2]; 3]| -> ([f64; 3], f64, [f64; 3]) {
        let grad_theta: [f64; 3] = core::array::from_fn(|i| along(&gauge.dtheta, dirs[i]));
        let d: [[f64; 3]; 3] = core::array::from_fn(|i| core::array::from_fn(|j| along(&grad_de[j], dirs[i])));
        let (div, curl) = div_curl_of(&d);
        (grad_theta, div, curl)
    };
    let (gt_top, div_top, curl_top) = ops(&gf.e_top);
    let (gt_x, div_x, curl_x) = ops(&gf.e_cross);
    let (st, ct) = (gauge.theta.sin(), 1.0 - gauge.theta.cos());
    let ee = &gauge.e;
    let h = e.h - dot(ee, &gt_x) - st * div_x + ct * dot(&curl_x, ee);
    let tau = e.star_tau - dot(ee, &gt_top) - st * div_top + ct * dot(&curl_top, ee);
    let general = (h - gauged.h).abs().max((tau - gauged.star_tau).abs());
    GaugeCheck { predicted: Complex64::new(h, tau), direct: gauged.bold_h, general }
}

/// `|𝑯(s·e^{θn̂}) − 𝑯(s)e^{iθ}|`; the axis must be the Gauss map on S.
pub fn gauge_theorem_residual(
    e: &ExtrinsicData,
    gf: &GaussField,
    gauge: &GaugeAt,
    gauged: &ExtrinsicData,
) -> Result<f64> {
    let d: [f64; 3] = core::array::from_fn(|i| gauge.e[i] - gf.n[i]);
    let dist = dot(&d, &d).sqrt();
    if !(dist <= AXIS_NORMAL_TOL) {
        return Err(Error::AxisNotNormal(dist));
    }
    Ok((gauged.bold_h - e.bold_h * Complex64::from_polar(1.0, gauge.theta)).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::ChartBox;
    use crate::expr::{lit, parse};
    use crate::surface::{Surface, SURFACE_VARS};
    use alloc::format;
    use alloc::sync::Arc;
    use proptest::prelude::*;

    fn ex3(rows: [[&str; 3]; 3]) -> [[Expr; 3]; 3] {
        rows.map(|r| r.map(|s| parse(s, &CHART_VARS).unwrap()))
    }

    fn chart(s: &str) -> Expr {
        parse(s, &CHART_VARS).unwrap()
    }

    fn standard() -> Arc<Ambient> {
        Arc::new(Ambient::from_frame(ex3([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]), ChartBox::default()).unwrap())
    }

    fn catenoid_frame() -> Arc<Ambient> {
        let g = [
            ["-sin(x)", "tanh(y)*cos(x)", "sech(y)*cos(x)"],
            ["cos(x)", "tanh(y)*sin(x)", "sech(y)*sin(x)"],
            ["0", "sech(y)", "-tanh(y)"],
        ];
        Arc::new(Ambient::from_frame(ex3(core::array::from_fn(|i| core::array::from_fn(|j| g[j][i]))), ChartBox::default()).unwrap())
    }

    fn rotated(theta: &str, e: [f64; 3]) -> Arc<Ambient> {
        let g = GaugeField::new(chart(theta), e.map(Expr::num)).unwrap();
        Arc::new(apply_gauge(&standard(), &g, Order::Second).unwrap())
    }

    fn surf(a: Arc<Ambient>, x: [&str; 3], dom: [[f64; 2]; 2], per: [bool; 2]) -> Surface {
        Surface::new(a, x.map(|s| parse(s, &SURFACE_VARS).unwrap()), dom, per, false).unwrap()
    }

    fn plane(a: Arc<Ambient>) -> Surface {
        surf(a, ["u", "v", "0"], [[-2.0, 2.0], [-2.0, 2.0]], [false; 2])
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    /// Gauss-map axis of `z = 0`: third row of `F⁻¹`, extended off the plane.
    fn plane_normal_axis(a: &Ambient) -> [Expr; 3] {
        let Source::Frame { finv, .. } = a.source() else { unreachable!() };
        [finv[0][2].clone(), finv[1][2].clone(), finv[2][2].clone()]
    }

    #[test]
    fn catenoid_frame_plane() {
        let s = plane(catenoid_frame());
        for (x, y) in [(0.3, -1.1), (2.0, 0.4)] {
            let smp = s.sample(x, y).unwrap();
            let g = gauss_map(&smp).unwrap();
            let sech = 1.0 / y.cosh();
            assert!(close(&g.n, &[sech * x.cos(), sech * x.sin(), -y.tanh()], 1e-14));
            let c = g.conformality(&smp, 1e-7);
            assert!(c.conformal && (c.k - sech * sech).abs() < 1e-14);
            let gn = g.pullback_metric();
            assert!(close(&[gn[0][0], gn[1][1], gn[0][1]], &[sech * sech, sech * sech, 0.0], 1e-14));
            let dc = g.div_curl();
            assert!(close(&[dc.div_top, dc.div_cross], &[0.0, 0.0], 1e-14));
            assert!(close(&dc.curl_top, &[0.0; 3], 1e-14) && close(&dc.curl_cross, &[0.0; 3], 1e-14));
        }
        assert!(matches!(gauss_degree(0.2, false), Err(Error::NotClosed)));
    }

    #[test]
    fn euclidean_plane_and_sphere() {
        let smp = plane(standard()).sample(0.1, 0.2).unwrap();
        let g = gauss_map(&smp).unwrap();
        assert_eq!(g.n, [0.0, 0.0, 1.0]);
        assert!(!g.conformality(&smp, 1e-7).conformal);
        let sph = surf(standard(), ["sin(u)*cos(v)", "sin(u)*sin(v)", "cos(u)"], [[0.0, PI], [0.0, 2.0 * PI]], [false, true]);
        let smp = sph.sample(0.8, 2.0).unwrap();
        let g = gauss_map(&smp).unwrap();
        assert!(close(&g.n, &smp.p, 1e-14));
        assert!(g.conformality(&smp, 1e-7).conformal);
        assert!((degree_density(&g) - 0.8f64.sin() / (4.0 * PI)).abs() < 1e-15);
        assert_eq!(gauss_degree(1.0004, true).unwrap().0, 1);
    }

    #[test]
    fn rotated_frame_plane_div() {
        let s = plane(rotated("x*y", [-1.0, 0.0, 0.0]));
        let (x, y) = (0.7, -0.3);
        let g = gauss_map(&s.sample(x, y).unwrap()).unwrap();
        let dc = g.div_curl();
        assert!((dc.div_top + x).abs() < 1e-13);
        assert!((dc.div_cross - y).abs() < 1e-13);
    }

    #[test]
    fn rotated_frame_matches_closed_form_w() {
        let (t, e) = ("0.5*x^2 - y + 0.3*x*y", [0.0, 0.6, 0.8]);
        let s = plane(rotated(t, e));
        let (x, y) = (0.4, 0.9);
        let ex = ExtrinsicData::new(&s.sample(x, y).unwrap());
        let (tx, ty) = (x + 0.3 * y, -1.0 + 0.3 * x);
        let want = [[tx * e[1], ty * e[1]], [-tx * e[0], -ty * e[0]]];
        assert!(close(&ex.w.concat(), &want.concat(), 1e-13));
    }

    #[test]
    fn zero_gauge_is_identity() {
        let a = catenoid_frame();
        let g = GaugeField::new(Expr::zero(), [chart("x"), chart("1"), chart("z")]).unwrap();
        let b = apply_gauge(&a, &g, Order::First).unwrap();
        let (pa, pb) = (a.eval([0.3, 0.2, 0.1], Order::First).unwrap(), b.eval([0.3, 0.2, 0.1], Order::First).unwrap());
        assert_eq!(pa.frame.unwrap().f, pb.frame.unwrap().f);
    }

    #[test]
    fn non_unit_axis_rejected() {
        let g = GaugeField::new(chart("x"), [chart("2"), chart("0"), chart("0")]).unwrap();
        assert!(matches!(g.validate(&[[0.0; 3]]), Err(Error::NonUnitAxis(_))));
        assert!(apply_gauge(&Ambient::from_coefficients(
            ex3([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]),
            core::array::from_fn(|_| ex3([["0", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]])),
            ChartBox::default()
        ).unwrap(), &g, Order::First).is_err());
    }

    #[test]
    fn quarter_turn_about_normal() {
        let a = rotated("x*y", [-1.0, 0.0, 0.0]);
        let g = GaugeField::new(Expr::num(PI / 2.0), plane_normal_axis(&a)).unwrap();
        let b = Arc::new(apply_gauge(&a, &g, Order::First).unwrap());
        let (s1, s2) = (plane(a), plane(b));
        let (x, y) = (0.3, 0.8);
        let (p, q) = (s1.sample(x, y).unwrap(), s2.sample(x, y).unwrap());
        let (e1, e2) = (ExtrinsicData::new(&p), ExtrinsicData::new(&q));
        assert!((e2.bold_h - e1.bold_h * Complex64::i()).norm() < 1e-12);
        let r = gauge_theorem_residual(&e1, &gauss_map(&p).unwrap(), &g.eval(p.p).unwrap(), &e2).unwrap();
        assert!(r < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ladder_weingarten_area(
            c in prop::array::uniform3(-0.6..0.6f64),
            e in prop::array::uniform3(-1.0..1.0f64),
            uv in prop::array::uniform2(-0.8..0.8f64),
        ) {
            let n = crate::so3::Vec3(e).norm();
            prop_assume!(n > 0.2);
            let e = e.map(|x| x / n);
            let a = rotated(&format!("{}*x*y + {}*z + 0.2*x", lit(c[0]), lit(c[1])), e);
            let z = format!("{}*(u^2 - v^2) + 0.1*u*v", lit(c[2]));
            let s = surf(a, ["u", "v", z.as_str()], [[-1.0, 1.0], [-1.0, 1.0]], [false; 2]);
            let smp = s.sample(uv[0], uv[1]).unwrap();
            let ex = ExtrinsicData::new(&smp);
            let g = gauss_map(&smp).unwrap();
            prop_assert!((dot(&g.n, &g.n) - 1.0).abs() <= 1e-10);
            let r = g.div_curl().ladder_residuals(&g.n, ex.h, ex.star_tau);
            for x in r { prop_assert!(x <= 1e-10); }
            let w = g.weingarten(&smp).unwrap();
            prop_assert!(close(&w.concat(), &ex.w.concat(), 1e-10));
            prop_assert!(area_form_residual(&smp, &ex, &g) <= 1e-10);
            // Σ n^i E_i^⊤ = 0
            for k in 0..2 {
                let s: f64 = (0..3).map(|i| g.n[i] * g.e_top[i][k]).sum();
                prop_assert!(s.abs() <= 1e-10);
            }
        }

        #[test]
        fn general_gauge_matches_recomputation(
            c in prop::array::uniform4(-0.8..0.8f64),
            e in prop::array::uniform3(-1.0..1.0f64),
            uv in prop::array::uniform2(-1.5..1.5f64),
        ) {
            let n = crate::so3::Vec3(e).norm();
            prop_assume!(n > 0.2);
            let base = catenoid_frame();
            let theta = chart(&format!("{}*sin(x) + {}*x*y + {}*z + {}", lit(c[0]), lit(c[1]), lit(c[2]), lit(c[3])));
            let axis = [
                chart(&format!("{} + 0.3*sin(y)", lit(e[0]))),
                chart(&format!("{} + 0.2*x", lit(e[1]))),
                chart(&lit(e[2])),
            ];
            let gauge = GaugeField::new(theta, axis).unwrap();
            let gauged = Arc::new(apply_gauge(&base, &gauge, Order::First).unwrap());
            let (s1, s2) = (plane(base), plane(gauged));
            let (p, q) = (s1.sample(uv[0], uv[1]).unwrap(), s2.sample(uv[0], uv[1]).unwrap());
            let (e1, e2) = (ExtrinsicData::new(&p), ExtrinsicData::new(&q));
            let gf = gauss_map(&p).unwrap();
            let chk = general_gauge_residual(&p, &e1, &gf, &gauge.eval(p.p).unwrap(), &e2);
            prop_assert!(chk.general <= 1e-10, "{:?}", chk);
            // same metric, same N
            prop_assert!(close(&p.n, &q.n, 1e-12));
        }

        #[test]
        fn normal_axis_gauge_rotates_bold_h(
            c in prop::array::uniform3(-1.0..1.0f64),
            uv in prop::array::uniform2(-1.5..1.5f64),
        ) {
            let base = catenoid_frame();
            let t = chart(&format!("{}*x + {}*sin(y) + {}*x*y", lit(c[0]), lit(c[1]), lit(c[2])));
            let gauge = GaugeField::new(t, plane_normal_axis(&base)).unwrap();
            let gauged = Arc::new(apply_gauge(&base, &gauge, Order::First).unwrap());
            let (a, b) = (plane(base), plane(gauged));
            let (p, q) = (a.sample(uv[0], uv[1]).unwrap(), b.sample(uv[0], uv[1]).unwrap());
            let (e1, e2) = (ExtrinsicData::new(&p), ExtrinsicData::new(&q));
            let gf = gauss_map(&p).unwrap();
            let ga = gauge.eval(p.p).unwrap();
            let thm = gauge_theorem_residual(&e1, &gf, &ga, &e2).unwrap();
            prop_assert!(thm <= 1e-10);
            let gen = general_gauge_residual(&p, &e1, &gf, &ga, &e2).general;
            prop_assert!((gen - thm).abs() <= 1e-9);
            prop_assert!((e2.bold_h.norm() - e1.bold_h.norm()).abs() <= 1e-10);
            // the gauged frame has the same Gauss map
            prop_assert!(close(&gauss_map(&q).unwrap().n, &gf.n, 1e-10));
        }

        #[test]
        fn constant_rotation_keeps_scalars(
            e in prop::array::uniform3(-1.0..1.0f64),
            th in -3.0..3.0f64,
            uv in prop::array::uniform2(0.2..2.9f64),
        ) {
            let n = crate::so3::Vec3(e).norm();
            prop_assume!(n > 0.2);
            let base = rotated("0.4*x*z + y", [0.0, 0.6, 0.8]);
            let gauge = GaugeField::new(Expr::num(th), e.map(|x| Expr::num(x / n))).unwrap();
            let gauged = Arc::new(apply_gauge(&base, &gauge, Order::First).unwrap());
            let mk = |a| surf(a, ["sin(u)*cos(v)", "sin(u)*sin(v)", "cos(u)"], [[0.0, PI], [0.0, 2.0 * PI]], [false, true]);
            let (p, q) = (mk(base).sample(uv[0], uv[1]).unwrap(), mk(gauged).sample(uv[0], uv[1]).unwrap());
            let (e1, e2) = (ExtrinsicData::new(&p), ExtrinsicData::new(&q));
            prop_assert!((e1.bold_h - e2.bold_h).norm() <= 1e-10);
            prop_assert!((e1.k_e - e2.k_e).abs() <= 1e-10);
        }
    }
}
