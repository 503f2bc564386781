use std::collections::BTreeMap;
use std::f64::consts::PI;

use rcgeom::builtins::{builtin, builtin_default};
use rcgeom::grid::{Layout, SampleGrid};
use rcgeom::quadrature::integrate;
use rcgeom::LabError;

fn cs_sphere(lambda: f64) -> rcgeom::Compiled {
    let mut p = BTreeMap::new();
    p.insert("lambda".to_string(), lambda.to_string());
    builtin("cartan_schouten_sphere", &p).unwrap().compile().unwrap()
}

fn k_error(c: &rcgeom::Compiled, res: [usize; 2]) -> f64 {
    let g = SampleGrid::build(c, res, Layout::Quadrature).unwrap();
    (integrate(&g, "K").unwrap() - 4.0 * PI).abs()
}

#[test]
fn cartan_schouten_gauss_bonnet() {
    for lambda in [0.0, 0.3, 0.5, 1.0] {
        let e = k_error(&cs_sphere(lambda), [96, 192]);
        assert!(e <= 1e-3 * 4.0 * PI, "lambda {lambda}: {e}");
    }
}

#[test]
fn halving_spacing_shrinks_the_error() {
    let c = cs_sphere(0.5);
    let errs: Vec<f64> = [[8, 8], [16, 16], [32, 32], [64, 64]].iter().map(|r| k_error(&c, *r)).collect();
    for w in errs.windows(2) {
        // once at round-off there is nothing left to shrink
        assert!(w[1] <= w[0] / 4.0 || w[1] <= 1e-12, "{errs:?}");
    }
}

#[test]
fn areas() {
    let sphere = builtin_default("round_sphere_standard").unwrap().compile().unwrap();
    let g = SampleGrid::build(&sphere, [32, 32], Layout::Quadrature).unwrap();
    let a = integrate(&g, "one").unwrap();
    assert!((a - 4.0 * PI).abs() <= 1e-6 * 4.0 * PI);

    let plane = builtin_default("euclidean_plane").unwrap().compile().unwrap();
    let g = SampleGrid::build(&plane, [8, 8], Layout::Quadrature).unwrap();
    assert!((integrate(&g, "one").unwrap() - 1.0).abs() < 1e-14);

    let torus = builtin_default("torus_standard").unwrap().compile().unwrap();
    let g = SampleGrid::build(&torus, [32, 32], Layout::Quadrature).unwrap();
    assert!((integrate(&g, "one").unwrap() - 8.0 * PI * PI).abs() < 1e-10);
}

#[test]
fn undefined_fields() {
    let c = cs_sphere(0.2);
    let g = SampleGrid::build(&c, [8, 8], Layout::Quadrature).unwrap();
    assert!(matches!(integrate(&g, "mass"), Err(LabError::UndefinedField(_))));
    // no Gauss map without a frame
    assert!(matches!(integrate(&g, "degree"), Err(LabError::UndefinedField(_))));
}
