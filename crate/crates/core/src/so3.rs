//! 3-vectors, 3×3 matrices, the hat map and Rodrigues rotations.

use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::expr::{Bindings, Expr};
#[allow(unused_imports)]
use crate::prelude::*;

/// Tolerance on `‖e‖ − 1` accepted for rotation axes.
pub const AXIS_TOL: f64 = 1e-9;
/// Orthogonality drift above which a rotation is re-orthonormalized.
pub const ORTHO_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub fn unit(i: usize) -> Self {
        let mut v = [0.0; 3];
        v[i] = 1.0;
        Vec3(v)
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = o.0;
        Vec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: f64) -> Vec3 {
        Vec3(self.0.map(|x| x * s))
    }

    pub fn max_abs(self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3(a)
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec3 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3(self.0.map(|x| -x))
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        self.scale(s)
    }
}

/// Row-major: `m[i][j]` is the entry `A^i_j`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn from_cols(c0: Vec3, c1: Vec3, c2: Vec3) -> Self {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            m[i] = [c0[i], c1[i], c2[i]];
        }
        Mat3(m)
    }

    pub fn diag(d: [f64; 3]) -> Self {
        let mut m = Mat3::ZERO;
        for i in 0..3 {
            m.0[i][i] = d[i];
        }
        m
    }

    pub fn col(&self, j: usize) -> Vec3 {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn transpose(&self) -> Mat3 {
        let mut t = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                t[i][j] = self.0[j][i];
            }
        }
        Mat3(t)
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// Inverse via the adjugate; `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Mat3> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let m = &self.0;
        let mut r = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let (a, b) = ((j + 1) % 3, (j + 2) % 3);
                let (c, e) = ((i + 1) % 3, (i + 2) % 3);
                r[i][j] = (m[a][c] * m[b][e] - m[a][e] * m[b][c]) / d;
            }
        }
        Some(Mat3(r))
    }

    pub fn scale(&self, s: f64) -> Mat3 {
        Mat3(self.0.map(|row| row.map(|x| x * s)))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        let mut r = self;
        for i in 0..3 {
            for j in 0..3 {
                r.0[i][j] += o.0[i][j];
            }
        }
        r
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, o: Mat3) -> Mat3 {
        self + o.scale(-1.0)
    }
}

impl Neg for Mat3 {
    type Output = Mat3;
    fn neg(self) -> Mat3 {
        self.scale(-1.0)
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut r = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                r[i][j] = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Mat3(r)
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        Vec3([
            self.0[0][0] * v[0] + self.0[0][1] * v[1] + self.0[0][2] * v[2],
            self.0[1][0] * v[0] + self.0[1][1] * v[1] + self.0[1][2] * v[2],
            self.0[2][0] * v[0] + self.0[2][1] * v[1] + self.0[2][2] * v[2],
        ])
    }
}

impl Mul<f64> for Mat3 {
    type Output = Mat3;
    fn mul(self, s: f64) -> Mat3 {
        self.scale(s)
    }
}

/// Element of 𝔰𝔬(3), built from its three independent entries.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SkewMat3(Mat3);

impl SkewMat3 {
    pub fn as_mat(&self) -> Mat3 {
        self.0
    }

    pub fn unhat(&self) -> Vec3 {
        unhat(&self.0)
    }
}

impl Add for SkewMat3 {
    type Output = SkewMat3;
    fn add(self, o: SkewMat3) -> SkewMat3 {
        SkewMat3(self.0 + o.0)
    }
}

impl Mul<f64> for SkewMat3 {
    type Output = SkewMat3;
    fn mul(self, s: f64) -> SkewMat3 {
        SkewMat3(self.0.scale(s))
    }
}

/// Cross-product matrix: `hat(a) x = a × x`.
pub fn hat(a: Vec3) -> SkewMat3 {
    let [a1, a2, a3] = a.0;
    SkewMat3(Mat3([[0.0, -a3, a2], [a3, 0.0, -a1], [-a2, a1, 0.0]]))
}

/// Reads `(A³₂, A¹₃, A²₁)`. Only the lower/upper pattern of `hat` is used,
/// so a non-skew input is projected implicitly.
pub fn unhat(a: &Mat3) -> Vec3 {
    Vec3([a.0[2][1], a.0[0][2], a.0[1][0]])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation3(Mat3);

impl Rotation3 {
    pub const IDENTITY: Rotation3 = Rotation3(Mat3::IDENTITY);

    /// Accepts a matrix close to SO(3) and snaps it onto the group by
    /// polar decomposition when it drifts beyond [`ORTHO_TOL`].
    pub fn from_matrix(m: Mat3) -> Option<Rotation3> {
        if !m.is_finite() || m.det() <= 0.0 {
            return None;
        }
        if ortho_drift(&m) <= ORTHO_TOL && (m.det() - 1.0).abs() <= ORTHO_TOL {
            return Some(Rotation3(m));
        }
        let mut r = m;
        for _ in 0..64 {
            let next = (r + r.inverse()?.transpose()).scale(0.5);
            let step = (next - r).max_abs();
            r = next;
            if step < 1e-16 {
                break;
            }
        }
        (ortho_drift(&r) <= ORTHO_TOL).then_some(Rotation3(r))
    }

    pub fn as_mat(&self) -> Mat3 {
        self.0
    }

    pub fn transpose(&self) -> Rotation3 {
        Rotation3(self.0.transpose())
    }
}

impl Mul for Rotation3 {
    type Output = Rotation3;
    fn mul(self, o: Rotation3) -> Rotation3 {
        Rotation3::from_matrix(self.0 * o.0).unwrap_or(Rotation3(self.0 * o.0))
    }
}

impl Mul<Vec3> for Rotation3 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        self.0 * v
    }
}

fn ortho_drift(m: &Mat3) -> f64 {
    (m.transpose() * *m - Mat3::IDENTITY).max_abs()
}

fn check_axis(e: Vec3) -> Result<f64> {
    let n = e.norm();
    if !n.is_finite() || (n - 1.0).abs() > AXIS_TOL {
        return Err(Error::NonUnitAxis(n));
    }
    Ok(n)
}

/// `I + sin θ ê + (1 − cos θ) ê²`.
pub fn rodrigues(e: Vec3, theta: f64) -> Result<Rotation3> {
    let n = check_axis(e)?;
    let k = hat(e.scale(1.0 / n)).as_mat();
    let m = Mat3::IDENTITY + k.scale(theta.sin()) + (k * k).scale(1.0 - theta.cos());
    Rotation3::from_matrix(m).ok_or(Error::NonUnitAxis(n))
}

/// Pullback of the Maurer-Cartan form by `p ↦ rodrigues(e(p), θ(p))`,
/// evaluated on the coordinate direction `vars[direction]` at `point`:
/// `dθ(X) ê + sin θ dê(X) + (1 − cos θ) hat(de(X) × e)`.
pub fn maurer_cartan_pullback(
    theta: &Expr,
    e: &[Expr; 3],
    vars: &[&str],
    direction: usize,
    point: &[f64],
) -> Result<SkewMat3> {
    let b = Bindings::new(vars, point);
    let var = vars[direction];
    let th = theta.eval(&b)?;
    let dth = theta.diff(var).eval(&b)?;
    let mut ev = Vec3::ZERO;
    let mut dev = Vec3::ZERO;
    for i in 0..3 {
        ev[i] = e[i].eval(&b)?;
        dev[i] = e[i].diff(var).eval(&b)?;
    }
    check_axis(ev)?;
    Ok(hat(ev) * dth + hat(dev) * th.sin() + hat(dev.cross(ev)) * (1.0 - th.cos()))
}

/// Metric cross product `(u × v)^k = s g^{kl} √det g ε_{lmn} u^m v^n`.
pub fn cross_metric(g: &Mat3, orientation_sign: f64, u: Vec3, v: Vec3) -> Result<Vec3> {
    let d = g.det();
    if !(d > 0.0) || g.0[0][0] <= 0.0 {
        return Err(Error::SingularMetric);
    }
    let gi = g.inverse().ok_or(Error::SingularMetric)?;
    Ok((gi * u.cross(v)).scale(orientation_sign.signum() * d.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use proptest::prelude::*;

    fn vec3() -> impl Strategy<Value = Vec3> {
        prop::array::uniform3(-3.0..3.0f64).prop_map(Vec3)
    }

    fn unit3() -> impl Strategy<Value = Vec3> {
        prop::array::uniform3(-1.0..1.0f64)
            .prop_filter("nonzero", |a| Vec3(*a).norm() > 0.1)
            .prop_map(|a| Vec3(a).scale(1.0 / Vec3(a).norm()))
    }

    fn expm(a: Mat3) -> Mat3 {
        let mut s = 0;
        let mut b = a;
        while b.max_abs() > 0.25 {
            b = b.scale(0.5);
            s += 1;
        }
        let mut sum = Mat3::IDENTITY;
        let mut term = Mat3::IDENTITY;
        for k in 1..30 {
            term = (term * b).scale(1.0 / k as f64);
            sum = sum + term;
        }
        for _ in 0..s {
            sum = sum * sum;
        }
        sum
    }

    #[test]
    fn hat_basis() {
        let l1 = hat(Vec3::unit(0)).as_mat();
        assert_eq!(l1, Mat3([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]]));
        assert_eq!(hat(Vec3::ZERO).as_mat(), Mat3::ZERO);
    }

    #[test]
    fn half_turn_about_z() {
        let r = rodrigues(Vec3::unit(2), core::f64::consts::PI).unwrap();
        assert!((r.as_mat() - Mat3::diag([-1.0, -1.0, 1.0])).max_abs() < 1e-15);
        let r0 = rodrigues(Vec3::new(0.6, 0.0, 0.8), 0.0).unwrap();
        assert_eq!(r0.as_mat(), Mat3::IDENTITY);
    }

    #[test]
    fn non_unit_axis_rejected() {
        assert!(matches!(rodrigues(Vec3::new(1.0, 1.0, 0.0), 0.3), Err(Error::NonUnitAxis(_))));
    }

    #[test]
    fn snaps_drifted_matrix() {
        let r = rodrigues(Vec3::new(0.0, 0.6, 0.8), 1.1).unwrap().as_mat();
        let mut m = r;
        m.0[0][1] += 1e-7;
        let s = Rotation3::from_matrix(m).unwrap().as_mat();
        assert!(ortho_drift(&s) <= ORTHO_TOL);
        assert!((s - r).max_abs() < 1e-6);
    }

    #[test]
    fn pullback_constant_fields() {
        let th = parse("0.7", &["x", "y", "z"]).unwrap();
        let e = ["0", "0.6", "0.8"].map(|s| parse(s, &["x", "y", "z"]).unwrap());
        let m = maurer_cartan_pullback(&th, &e, &["x", "y", "z"], 1, &[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(m.as_mat().max_abs(), 0.0);
    }

    #[test]
    fn pullback_rotation_about_z() {
        let th = parse("x", &["x", "y", "z"]).unwrap();
        let e = ["0", "0", "1"].map(|s| parse(s, &["x", "y", "z"]).unwrap());
        let m = maurer_cartan_pullback(&th, &e, &["x", "y", "z"], 0, &[0.4, -1.0, 2.0]).unwrap();
        assert!((m.as_mat() - hat(Vec3::unit(2)).as_mat()).max_abs() < 1e-15);
    }

    #[test]
    fn euclidean_cross() {
        let w = cross_metric(&Mat3::IDENTITY, 1.0, Vec3::unit(0), Vec3::unit(1)).unwrap();
        assert_eq!(w, Vec3::unit(2));
        let p = cross_metric(&Mat3::IDENTITY, 1.0, Vec3::new(1.0, 2.0, 3.0), Vec3::new(2.0, 4.0, 6.0)).unwrap();
        assert_eq!(p, Vec3::ZERO);
        assert_eq!(cross_metric(&Mat3::ZERO, 1.0, Vec3::unit(0), Vec3::unit(1)), Err(Error::SingularMetric));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn commutator_is_cross(a in vec3(), b in vec3()) {
            let c = (hat(a).as_mat() * hat(b).as_mat()) - (hat(b).as_mat() * hat(a).as_mat());
            prop_assert!((unhat(&c) - a.cross(b)).max_abs() <= 1e-13);
        }

        #[test]
        fn hat_anticommutes(a in vec3(), b in vec3()) {
            prop_assert!((hat(a).as_mat() * b + hat(b).as_mat() * a).max_abs() <= 1e-14);
        }

        #[test]
        fn hat_sandwich(a in vec3(), b in vec3(), e in unit3()) {
            let (ha, hb) = (hat(a).as_mat(), hat(b).as_mat());
            prop_assert!((ha * hb * ha + ha.scale(a.dot(b))).max_abs() <= 1e-12);
            let he = hat(e).as_mat();
            prop_assert!((he * he * he + he).max_abs() <= 1e-14);
        }

        #[test]
        fn hat_equivariant(b in vec3(), e in unit3(), th in -4.0..4.0f64, a in vec3()) {
            let r = rodrigues(e, th).unwrap().as_mat();
            let lhs = hat(r * b).as_mat();
            prop_assert!((lhs - r * hat(b).as_mat() * r.transpose()).max_abs() <= 1e-12);
            let ah = hat(a).as_mat();
            let rhs = ah * hat(b).as_mat() - hat(b).as_mat() * ah;
            prop_assert!((hat(ah * b).as_mat() - rhs).max_abs() <= 1e-13);
        }

        #[test]
        fn trace_inner_product(a in vec3(), b in vec3()) {
            let t = -0.5 * (hat(a).as_mat() * hat(b).as_mat()).trace();
            prop_assert!((t - a.dot(b)).abs() <= 1e-13);
        }

        #[test]
        fn rodrigues_is_rotation(e in unit3(), th in -10.0..10.0f64) {
            let r = rodrigues(e, th).unwrap();
            prop_assert!(ortho_drift(&r.as_mat()) <= ORTHO_TOL);
            prop_assert!((r.as_mat().det() - 1.0).abs() <= ORTHO_TOL);
            prop_assert!((r * e - e).max_abs() <= 1e-14);
        }

        #[test]
        fn rodrigues_group_law(e in unit3(), t1 in -4.0..4.0f64, t2 in -4.0..4.0f64) {
            let lhs = rodrigues(e, t1).unwrap() * rodrigues(e, t2).unwrap();
            prop_assert!((lhs.as_mat() - rodrigues(e, t1 + t2).unwrap().as_mat()).max_abs() <= 1e-12);
        }

        #[test]
        fn rodrigues_matches_exponential(e in unit3(), th in -6.0..6.0f64) {
            let r = rodrigues(e, th).unwrap().as_mat();
            prop_assert!((r - expm(hat(e).as_mat().scale(th))).max_abs() <= 1e-10);
        }

        #[test]
        fn cross_metric_identities(
            l in prop::array::uniform3(prop::array::uniform3(-1.0..1.0f64)),
            u in vec3(), v in vec3(),
        ) {
            let a = Mat3(l) + Mat3::IDENTITY.scale(1.5);
            let g = a.transpose() * a;
            let w = cross_metric(&g, 1.0, u, v).unwrap();
            let ip = |x: Vec3, y: Vec3| x.dot(g * y);
            let scale = 1.0 + u.norm() * v.norm() * g.max_abs();
            prop_assert!(ip(w, u).abs() <= 1e-10 * scale * scale);
            prop_assert!(ip(w, v).abs() <= 1e-10 * scale * scale);
            let area2 = ip(u, u) * ip(v, v) - ip(u, v).powi(2);
            prop_assert!((ip(w, w) - area2).abs() <= 1e-10 * scale * scale);
            // positively oriented in chart coordinates
            let det = Mat3::from_cols(u, v, w).det();
            prop_assert!(det >= -1e-10 * scale * scale);
        }

        #[test]
        fn pullback_matches_fd(
            c in prop::array::uniform4(-1.0..1.0f64),
            d in prop::array::uniform3(-1.0..1.0f64),
            p in prop::array::uniform3(-1.0..1.0f64),
            dir in 0usize..3,
        ) {
            let vars = ["x", "y", "z"];
            let th = parse(&format!("{:?}*sin(x) + {:?}*y*z + {:?}*cos(z) + {:?}", c[0], c[1], c[2], c[3]), &vars).unwrap();
            let raw = [
                format!("1 + {:?}*x", d[0] * 0.3),
                format!("0.5 + {:?}*sin(y)", d[1] * 0.3),
                format!("0.2 + {:?}*z*x", d[2] * 0.3),
            ];
            let norm = format!("sqrt(({})^2 + ({})^2 + ({})^2)", raw[0], raw[1], raw[2]);
            let e = [0, 1, 2].map(|i| parse(&format!("({})/{}", raw[i], norm), &vars).unwrap());
            let m = maurer_cartan_pullback(&th, &e, &vars, dir, &p).unwrap().as_mat();
            let rot = |q: [f64; 3]| {
                let b = Bindings::new(&vars, &q);
                let ev = Vec3([0, 1, 2].map(|i| e[i].eval(&b).unwrap()));
                rodrigues(ev, th.eval(&b).unwrap()).unwrap().as_mat()
            };
            let h = 1e-5;
            let (mut qp, mut qm) = (p, p);
            qp[dir] += h;
            qm[dir] -= h;
            let fd = rot(p).transpose() * (rot(qp) - rot(qm)).scale(0.5 / h);
            prop_assert!((fd - m).max_abs() <= 1e-6);
        }
    }
}
