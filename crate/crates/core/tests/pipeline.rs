use std::f64::consts::PI;
use std::sync::Arc;

use rcgeom_core::ambient::{Ambient, ChartBox, Order, Source, CHART_VARS};
use rcgeom_core::expr::{parse, Expr};
use rcgeom_core::extrinsic::ExtrinsicData;
use rcgeom_core::gaussmap::{apply_gauge, degree_density, gauge_theorem_residual, gauss_degree, gauss_map, GaugeField};
use rcgeom_core::surface::{Surface, SURFACE_VARS};

fn ex3(rows: [[&str; 3]; 3]) -> [[Expr; 3]; 3] {
    rows.map(|r| r.map(|s| parse(s, &CHART_VARS).unwrap()))
}

fn euclidean() -> Arc<Ambient> {
    Arc::new(Ambient::from_frame(ex3([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]), ChartBox::default()).unwrap())
}

fn catenoid_frame() -> Arc<Ambient> {
    // F = G⁻¹ = Gᵀ
    let f = ex3([
        ["-sin(x)", "cos(x)", "0"],
        ["tanh(y)*cos(x)", "tanh(y)*sin(x)", "sech(y)"],
        ["sech(y)*cos(x)", "sech(y)*sin(x)", "-tanh(y)"],
    ]);
    Arc::new(Ambient::from_frame(f, ChartBox::default()).unwrap())
}

fn surface(a: Arc<Ambient>, x: [&str; 3], dom: [[f64; 2]; 2], per: [bool; 2]) -> Surface {
    Surface::new(a, x.map(|s| parse(s, &SURFACE_VARS).unwrap()), dom, per, false).unwrap()
}

#[test]
fn euclidean_sphere_has_degree_one() {
    let s = surface(euclidean(), ["sin(u)*cos(v)", "sin(u)*sin(v)", "cos(u)"], [[0.0, PI], [0.0, 2.0 * PI]], [false, true]);
    let (nu, nv) = (120, 120);
    let (hu, hv) = (PI / nu as f64, 2.0 * PI / nv as f64);
    let mut raw = 0.0;
    for i in 0..nu {
        for j in 0..nv {
            let (u, v) = ((i as f64 + 0.5) * hu, j as f64 * hv);
            let x = s.sample(u, v).unwrap();
            let g = gauss_map(&x).unwrap();
            // outward normal on the unit sphere in the identity frame
            assert!((0..3).all(|k| (g.n[k] - x.p[k]).abs() < 1e-12));
            raw += degree_density(&g) * hu * hv;
        }
    }
    let (deg, r) = gauss_degree(raw, true).unwrap();
    assert_eq!(deg, 1);
    assert!(r < 1e-3, "{raw}");
}

#[test]
fn phase_rotation_about_the_normal() {
    let amb = catenoid_frame();
    let Source::Frame { finv, .. } = amb.source() else { panic!("frame ambient") };
    let axis: [Expr; 3] = std::array::from_fn(|i| finv[i][2].clone());
    let theta = parse("0.3*x + y^2 - 0.5", &CHART_VARS).unwrap();
    let gf = GaugeField::new(theta, axis).unwrap();
    let gauged = Arc::new(apply_gauge(&amb, &gf, Order::First).unwrap());
    let s = surface(amb, ["u", "v", "0"], [[0.0, 2.0 * PI], [-2.0, 2.0]], [true, false]);
    let s2 = s.with_ambient(gauged);
    for (u, v) in [(0.2, -1.5), (1.0, 0.0), (3.3, 0.8), (5.9, 1.9)] {
        let x = s.sample(u, v).unwrap();
        let e = ExtrinsicData::new(&x);
        let e2 = ExtrinsicData::new(&s2.sample(u, v).unwrap());
        let at = gf.eval(x.p).unwrap();
        assert!(gauge_theorem_residual(&e, &gauss_map(&x).unwrap(), &at, &e2).unwrap() < 1e-12);
        let sech = 1.0 / v.cosh();
        assert!(e.bold_h.norm() < 1e-12 && e2.bold_h.norm() < 1e-12);
        assert!((e.k_e + sech * sech).abs() < 1e-12 && (e2.k_e - e.k_e).abs() < 1e-12);
    }
}

#[test]
fn swapping_the_chart_flips_h_but_not_star_tau() {
    let levi = |i: usize, j: usize, k: usize| ((i as f64 - j as f64) * (j as f64 - k as f64) * (k as f64 - i as f64)) / 2.0;
    let lam = 0.4;
    let g = ex3([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]);
    let gamma = std::array::from_fn(|k| std::array::from_fn(|i| std::array::from_fn(|j| Expr::num(lam * levi(i, j, k)))));
    let amb = Arc::new(Ambient::from_coefficients(g, gamma, ChartBox::default()).unwrap());
    let a = surface(amb.clone(), ["sin(u)*cos(v)", "sin(u)*sin(v)", "cos(u)"], [[0.0, PI], [0.0, 2.0 * PI]], [false, true]);
    let b = surface(amb, ["sin(v)*cos(u)", "sin(v)*sin(u)", "cos(v)"], [[0.0, 2.0 * PI], [0.0, PI]], [true, false]);
    for (u, v) in [(0.7, 2.0), (2.2, 5.1)] {
        let ea = ExtrinsicData::new(&a.sample(u, v).unwrap());
        let eb = ExtrinsicData::new(&b.sample(v, u).unwrap());
        assert!((ea.h + eb.h).abs() < 1e-12);
        assert!((ea.star_tau - eb.star_tau).abs() < 1e-12);
        assert!((ea.k_e - eb.k_e).abs() < 1e-12);
        assert!((ea.h + 2.0).abs() < 1e-12 && (ea.star_tau - 2.0 * lam).abs() < 1e-12);
    }
}
