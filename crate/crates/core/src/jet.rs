//! First-order forward-mode numbers over the two surface parameters, and small
//! linear-algebra kernels generic over them.

use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

#[allow(unused_imports)]
use crate::prelude::*;

pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    fn cst(x: f64) -> Self;
    fn val(self) -> f64;
    fn square_root(self) -> Self;
    fn zero() -> Self {
        Self::cst(0.0)
    }
    fn scale(self, s: f64) -> Self {
        self * Self::cst(s)
    }
}

impl Real for f64 {
    fn cst(x: f64) -> f64 {
        x
    }
    fn val(self) -> f64 {
        self
    }
    fn square_root(self) -> f64 {
        num_traits::Float::sqrt(self)
    }
}

/// `v + d[0] du + d[1] dv`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d: [f64; 2],
}

impl Jet {
    pub const fn new(v: f64, d: [f64; 2]) -> Jet {
        Jet { v, d }
    }
}

impl Real for Jet {
    fn cst(x: f64) -> Jet {
        Jet { v: x, d: [0.0; 2] }
    }
    fn val(self) -> f64 {
        self.v
    }
    fn square_root(self) -> Jet {
        let s = num_traits::Float::sqrt(self.v);
        Jet { v: s, d: self.d.map(|x| 0.5 * x / s) }
    }
    fn scale(self, s: f64) -> Jet {
        Jet { v: self.v * s, d: self.d.map(|x| x * s) }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet { v: self.v + o.v, d: [self.d[0] + o.d[0], self.d[1] + o.d[1]] }
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, o: Jet) {
        *self = *self + o;
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet { v: self.v - o.v, d: [self.d[0] - o.d[0], self.d[1] - o.d[1]] }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { v: -self.v, d: [-self.d[0], -self.d[1]] }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d: [self.d[0] * o.v + self.v * o.d[0], self.d[1] * o.v + self.v * o.d[1]],
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let q = self.v / o.v;
        Jet { v: q, d: [(self.d[0] - q * o.d[0]) / o.v, (self.d[1] - q * o.d[1]) / o.v] }
    }
}

pub type V3<T> = [T; 3];
pub type M3<T> = [[T; 3]; 3];

pub fn zeros3<T: Real>() -> V3<T> {
    [T::zero(); 3]
}

pub fn dot<T: Real>(a: &V3<T>, b: &V3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `⟨a, b⟩_g`.
pub fn inner<T: Real>(g: &M3<T>, a: &V3<T>, b: &V3<T>) -> T {
    let mut s = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            s += a[i] * g[i][j] * b[j];
        }
    }
    s
}

pub fn mat_vec<T: Real>(m: &M3<T>, v: &V3<T>) -> V3<T> {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

pub fn cross<T: Real>(a: &V3<T>, b: &V3<T>) -> V3<T> {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn det3<T: Real>(m: &M3<T>) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn inv3<T: Real>(m: &M3<T>) -> (M3<T>, T) {
    let d = det3(m);
    let mut r = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = ((j + 1) % 3, (j + 2) % 3);
            let (c, e) = ((i + 1) % 3, (i + 2) % 3);
            r[i][j] = (m[a][c] * m[b][e] - m[a][e] * m[b][c]) / d;
        }
    }
    (r, d)
}

/// Metric cross product for a positively oriented chart, given `g⁻¹` and
/// `√det g`.
pub fn cross_g<T: Real>(ginv: &M3<T>, sqrt_det: T, a: &V3<T>, b: &V3<T>) -> V3<T> {
    let c = cross(a, b);
    let w = mat_vec(ginv, &c);
    [w[0] * sqrt_det, w[1] * sqrt_det, w[2] * sqrt_det]
}

pub fn add3<T: Real>(a: &V3<T>, b: &V3<T>) -> V3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub3<T: Real>(a: &V3<T>, b: &V3<T>) -> V3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale3<T: Real>(a: &V3<T>, s: T) -> V3<T> {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// `Γ(a, b)^k = Γ^k_{ij} a^i b^j`.
pub fn gamma_apply<T: Real>(gamma: &[M3<T>; 3], a: &V3<T>, b: &V3<T>) -> V3<T> {
    let mut r = zeros3();
    for (k, gk) in gamma.iter().enumerate() {
        r[k] = inner(gk, a, b);
    }
    r
}

pub fn inv2<T: Real>(m: &[[T; 2]; 2]) -> ([[T; 2]; 2], T) {
    let d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    ([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]], d)
}

pub fn values3(a: &V3<Jet>) -> [f64; 3] {
    a.map(|x| x.v)
}

pub fn partial3(a: &V3<Jet>, k: usize) -> [f64; 3] {
    a.map(|x| x.d[k])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_quotient_rules() {
        let a = Jet::new(2.0, [1.0, 0.0]);
        let b = Jet::new(3.0, [0.0, 1.0]);
        let p = a * b / (a + b);
        // f = uv/(u+v) at (2,3)
        assert!((p.v - 1.2).abs() < 1e-15);
        assert!((p.d[0] - 9.0 / 25.0).abs() < 1e-15);
        assert!((p.d[1] - 4.0 / 25.0).abs() < 1e-15);
        let s = Real::square_root(Jet::new(4.0, [1.0, 2.0]));
        assert_eq!(s, Jet::new(2.0, [0.25, 0.5]));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = [[2.0, 1.0, 0.0], [0.5, 3.0, 0.2], [0.0, -1.0, 1.5]];
        let (mi, d) = inv3(&m);
        assert!((d - det3(&m)).abs() < 1e-15);
        for i in 0..3 {
            for j in 0..3 {
                let s: f64 = (0..3).map(|k| m[i][k] * mi[k][j]).sum();
                assert!((s - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }
}
