//! Built-in scenes with their golden values.

use std::collections::BTreeMap;

use rcgeom_core::ambient::CHART_VARS;
use rcgeom_core::expr::{lit, parse, Expr};
use rcgeom_core::so3::{hat, Vec3};

use crate::error::{LabError, Result};
use crate::scene::{AmbientKind, AmbientSpec, Goldens, Scene, SurfaceSpec};

pub struct BuiltinInfo {
    pub name: &'static str,
    /// Parameter names with their defaults.
    pub params: &'static [(&'static str, &'static str)],
    pub summary: &'static str,
}

pub const BUILTINS: [BuiltinInfo; 7] = [
    BuiltinInfo {
        name: "euclidean_plane",
        params: &[],
        summary: "unit square in the z = 0 plane of the standard frame",
    },
    BuiltinInfo {
        name: "round_sphere_standard",
        params: &[],
        summary: "unit sphere in the standard frame, polar chart",
    },
    BuiltinInfo {
        name: "torus_standard",
        params: &[],
        summary: "torus of revolution R = 2, r = 1 in the standard frame",
    },
    BuiltinInfo {
        name: "rotated_frame_plane",
        params: &[("theta", "x*y"), ("e", "-1,0,0")],
        summary: "z = 0 plane in the standard frame rotated by theta about the fixed axis e",
    },
    BuiltinInfo {
        name: "catenoid_frame_plane",
        params: &[],
        summary: "z = 0 plane in the frame adapted to the catenoid; Gauss map of the catenoid",
    },
    BuiltinInfo {
        name: "catenoid_frame_cylinder",
        params: &[],
        summary: "unit cylinder in the catenoid frame transported around the z axis",
    },
    BuiltinInfo {
        name: "cartan_schouten_sphere",
        params: &[("lambda", "0.5")],
        summary: "unit sphere in flat space with totally antisymmetric torsion of strength lambda",
    },
];

const ID: [[&str; 3]; 3] = [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]];

fn strs<const N: usize>(a: [&str; N]) -> [String; N] {
    a.map(String::from)
}

fn strs33(a: [[&str; 3]; 3]) -> [[String; 3]; 3] {
    a.map(strs)
}

fn text(e: &Expr) -> String {
    e.to_string()
}

fn frame_ambient(cols: [[String; 3]; 3]) -> AmbientSpec {
    AmbientSpec { kind: AmbientKind::Frame, frame: Some(cols), metric: None, gamma: None, lo: None, hi: None }
}

/// Frame vectors (columns) of a matrix of Exprs.
fn columns(f: &[[Expr; 3]; 3]) -> [[String; 3]; 3] {
    std::array::from_fn(|j| std::array::from_fn(|i| text(&f[i][j])))
}

fn surface(x: [&str; 3], u: [f64; 2], v: [f64; 2], periodic: [bool; 2]) -> SurfaceSpec {
    SurfaceSpec {
        x: strs(x),
        u,
        v,
        periodic,
        isothermal: false,
        closed: false,
        euler_characteristic: None,
        normal: None,
    }
}

fn sphere_surface() -> SurfaceSpec {
    SurfaceSpec {
        closed: true,
        euler_characteristic: Some(2),
        ..surface(["sin(u)*cos(v)", "sin(u)*sin(v)", "cos(u)"], [0.0, PI], [0.0, TAU], [false, true])
    }
}

use std::f64::consts::{PI, TAU};

fn some(s: &str) -> Option<String> {
    Some(s.to_string())
}

fn euclidean_plane() -> Scene {
    Scene {
        name: "euclidean_plane".into(),
        description: BUILTINS[0].summary.into(),
        ambient: frame_ambient(strs33(ID)),
        surface: SurfaceSpec {
            isothermal: true,
            normal: Some(strs(["0", "0", "1"])),
            ..surface(["u", "v", "0"], [0.0, 1.0], [0.0, 1.0], [false, false])
        },
        gauge: None,
        tolerances: BTreeMap::new(),
        goldens: Goldens {
            h: some("0"),
            star_tau: some("0"),
            k_e: some("0"),
            k: some("0"),
            w_on: Some([strs(["0", "0"]), strs(["0", "0"])]),
            n: Some(strs(["0", "0", "1"])),
            phi: Some(strs(["0", "0"])),
            sectional: some("0"),
            area: some("1"),
            holomorphic_h: Some(true),
            ..Goldens::default()
        },
    }
}

fn round_sphere_standard() -> Scene {
    Scene {
        name: "round_sphere_standard".into(),
        description: BUILTINS[1].summary.into(),
        ambient: frame_ambient(strs33(ID)),
        surface: SurfaceSpec { normal: Some(strs(["x", "y", "z"])), ..sphere_surface() },
        gauge: None,
        tolerances: BTreeMap::new(),
        goldens: Goldens {
            h: some("-2"),
            star_tau: some("0"),
            k_e: some("1"),
            k: some("1"),
            w_on: Some([strs(["-1", "0"]), strs(["0", "-1"])]),
            n: Some(strs(["sin(u)*cos(v)", "sin(u)*sin(v)", "cos(u)"])),
            conformal_factor: some("1"),
            sectional: some("0"),
            integral_k: some("4*pi"),
            area: some("4*pi"),
            degree: Some(1),
            ..Goldens::default()
        },
    }
}

fn torus_standard() -> Scene {
    let rho = "sqrt(x^2+y^2)";
    Scene {
        name: "torus_standard".into(),
        description: BUILTINS[2].summary.into(),
        ambient: frame_ambient(strs33(ID)),
        surface: SurfaceSpec {
            closed: true,
            euler_characteristic: Some(0),
            normal: Some([format!("({rho}-2)*x/{rho}"), format!("({rho}-2)*y/{rho}"), "z".into()]),
            ..surface(
                ["(2+cos(v))*cos(u)", "(2+cos(v))*sin(u)", "sin(v)"],
                [0.0, TAU],
                [0.0, TAU],
                [true, true],
            )
        },
        gauge: None,
        tolerances: BTreeMap::new(),
        goldens: Goldens {
            h: some("-1-cos(v)/(2+cos(v))"),
            star_tau: some("0"),
            k_e: some("cos(v)/(2+cos(v))"),
            k: some("cos(v)/(2+cos(v))"),
            w_on: Some([strs(["-cos(v)/(2+cos(v))", "0"]), strs(["0", "-1"])]),
            n: Some(strs(["cos(v)*cos(u)", "cos(v)*sin(u)", "sin(v)"])),
            sectional: some("0"),
            integral_k: some("0"),
            area: some("8*pi^2"),
            degree: Some(0),
            ..Goldens::default()
        },
    }
}

fn param<'a>(params: &'a BTreeMap<String, String>, info: &BuiltinInfo, key: &str) -> &'a str {
    params.get(key).map(String::as_str).unwrap_or_else(|| {
        let d = info.params.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        // defaults live in 'static storage
        d.unwrap_or("")
    })
}

fn parse_vec3(key: &str, s: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || LabError::Config(format!("parameter `{key}` expects three comma-separated numbers, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| bad())?;
    }
    Ok(out)
}

fn rotated_frame_plane(params: &BTreeMap<String, String>) -> Result<Scene> {
    let info = &BUILTINS[3];
    let theta_src = param(params, info, "theta");
    let theta = parse(theta_src, &CHART_VARS).map_err(|e| LabError::Expr { field: "theta".into(), location: None, source: e })?;
    let e = parse_vec3("e", param(params, info, "e"))?;
    let norm = Vec3(e).norm();
    if !(norm > 1e-12 && norm.is_finite()) {
        return Err(LabError::Config("parameter `e` must be a nonzero axis".into()));
    }
    let e = e.map(|c| c / norm);
    let k = hat(Vec3(e)).as_mat();
    let k2 = (k * k).0;
    let (s, c) = (theta.sin(), Expr::one() - theta.cos());
    let f: [[Expr; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let d = if i == j { 1.0 } else { 0.0 };
            Expr::num(d) + &s * Expr::num(k.0[i][j]) + &c * Expr::num(k2[i][j])
        })
    });

    // goldens: θ and its gradient restricted to the plane
    let on_plane = [("x", Expr::var("u")), ("y", Expr::var("v")), ("z", Expr::zero())];
    let th = theta.substitute(&on_plane);
    let tx = theta.diff("x").substitute(&on_plane);
    let ty = theta.diff("y").substitute(&on_plane);
    let lap = theta.diff("x").diff("x") + theta.diff("y").diff("y");
    let n = |x: f64| Expr::num(x);
    let w_on = [[&tx * n(e[1]), &ty * n(e[1])], [-(&tx * n(e[0])), -(&ty * n(e[0]))]];
    let h = &tx * n(e[1]) - &ty * n(e[0]);
    let star_tau = -(&tx * n(e[0])) - &ty * n(e[1]);
    let phi_re = (&tx * n(e[1]) + &ty * n(e[0])) * n(0.25);
    let phi_im = (&tx * n(e[0]) - &ty * n(e[1])) * n(0.25);
    let row2 = [-e[1], e[0], 0.0];
    let gn: [Expr; 3] = std::array::from_fn(|i| {
        let d = if i == 2 { 1.0 } else { 0.0 };
        n(d) + th.sin() * n(row2[i]) + (Expr::one() - th.cos()) * n(e[2] * e[i] - d)
    });

    let mut name = "rotated_frame_plane".to_string();
    if !params.is_empty() {
        name = format!("rotated_frame_plane(theta={theta_src}, e={},{},{})", lit(e[0]), lit(e[1]), lit(e[2]));
    }
    Ok(Scene {
        name,
        description: info.summary.into(),
        ambient: frame_ambient(columns(&f)),
        surface: SurfaceSpec {
            isothermal: true,
            normal: Some(strs(["0", "0", "1"])),
            ..surface(["u", "v", "0"], [-1.0, 1.0], [-1.0, 1.0], [false, false])
        },
        gauge: None,
        tolerances: BTreeMap::new(),
        goldens: Goldens {
            h: Some(text(&h)),
            star_tau: Some(text(&star_tau)),
            k_e: some("0"),
            k: some("0"),
            w_on: Some(w_on.map(|r| r.map(|x| text(&x)))),
            n: Some(gn.map(|x| text(&x))),
            phi: Some([text(&phi_re), text(&phi_im)]),
            sectional: some("0"),
            holomorphic_h: (lap.as_num() == Some(0.0)).then_some(true),
            ..Goldens::default()
        },
    })
}

const CATENOID_FRAME: [[&str; 3]; 3] = [
    ["-sin(x)", "tanh(y)*cos(x)", "sech(y)*cos(x)"],
    ["cos(x)", "tanh(y)*sin(x)", "sech(y)*sin(x)"],
    ["0", "sech(y)", "-tanh(y)"],
];

fn catenoid_goldens() -> Goldens {
    Goldens {
        h: some("0"),
        star_tau: some("0"),
        k_e: some("-sech(v)^2"),
        k: some("-sech(v)^2"),
        w_on: Some([strs(["-sech(v)", "0"]), strs(["0", "sech(v)"])]),
        n: Some(strs(["sech(v)*cos(u)", "sech(v)*sin(u)", "-tanh(v)"])),
        conformal_factor: some("sech(v)^2"),
        phi: Some(strs(["-0.5*sech(v)", "0"])),
        sectional: some("0"),
        holomorphic_h: Some(true),
        ..Goldens::default()
    }
}

fn catenoid_frame_plane() -> Scene {
    Scene {
        name: "catenoid_frame_plane".into(),
        description: BUILTINS[4].summary.into(),
        ambient: frame_ambient(strs33(CATENOID_FRAME)),
        surface: SurfaceSpec {
            isothermal: true,
            normal: Some(strs(["0", "0", "1"])),
            ..surface(["u", "v", "0"], [0.0, TAU], [-2.0, 2.0], [true, false])
        },
        gauge: None,
        tolerances: BTreeMap::new(),
        goldens: catenoid_goldens(),
    }
}

fn catenoid_frame_cylinder() -> Scene {
    let p = |s: &str| parse(s, &CHART_VARS).expect("builtin expression");
    let (c, s) = (p("x/sqrt(x^2+y^2)"), p("y/sqrt(x^2+y^2)"));
    let (th, sh) = (p("tanh(z)"), p("sech(z)"));
    // catenoid frame at (u(x, y), z), cos u = x/ρ, sin u = y/ρ
    let g = [[-&s, &th * &c, &sh * &c], [c.clone(), &th * &s, &sh * &s], [Expr::zero(), sh.clone(), -&th]];
    let gt: [[Expr; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| g[j][i].clone()));
    let gp = [[-&s, Expr::zero(), c.clone()], [c.clone(), Expr::zero(), s.clone()], [Expr::zero(), Expr::one(), Expr::zero()]];
    let f: [[Expr; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| (0..3).fold(Expr::zero(), |acc, m| acc + &gp[i][m] * &gt[m][j])));
    Scene {
        name: "catenoid_frame_cylinder".into(),
        description: BUILTINS[5].summary.into(),
        ambient: frame_ambient(columns(&f)),
        surface: SurfaceSpec {
            isothermal: true,
            normal: Some(strs(["x", "y", "0"])),
            ..surface(["cos(u)", "sin(u)", "v"], [0.0, TAU], [-2.0, 2.0], [true, false])
        },
        gauge: None,
        tolerances: BTreeMap::new(),
        goldens: catenoid_goldens(),
    }
}

fn levi(i: usize, j: usize, k: usize) -> f64 {
    ((i as f64 - j as f64) * (j as f64 - k as f64) * (k as f64 - i as f64)) / 2.0
}

fn cartan_schouten_sphere(params: &BTreeMap<String, String>) -> Result<Scene> {
    let info = &BUILTINS[6];
    let raw = param(params, info, "lambda");
    let lambda: f64 = raw
        .trim()
        .parse()
        .ok()
        .filter(|x: &f64| x.is_finite())
        .ok_or_else(|| LabError::Config(format!("parameter `lambda` expects a number, got `{raw}`")))?;
    let l = lit(lambda);
    let gamma: [[[String; 3]; 3]; 3] =
        std::array::from_fn(|k| std::array::from_fn(|i| std::array::from_fn(|j| lit(lambda * levi(i, j, k)))));
    let mut name = "cartan_schouten_sphere".to_string();
    if !params.is_empty() {
        name = format!("cartan_schouten_sphere(lambda={l})");
    }
    Ok(Scene {
        name,
        description: info.summary.into(),
        ambient: AmbientSpec {
            kind: AmbientKind::Coefficients,
            frame: None,
            metric: Some(strs33(ID)),
            gamma: Some(gamma),
            lo: None,
            hi: None,
        },
        surface: sphere_surface(),
        gauge: None,
        tolerances: BTreeMap::new(),
        goldens: Goldens {
            h: some("-2"),
            star_tau: Some(format!("2*{l}")),
            k_e: Some(format!("1+{l}^2")),
            k: some("1"),
            w_on: Some([["-1".into(), format!("-{l}")], [l.clone(), "-1".into()]]),
            sectional: Some(format!("-{l}^2")),
            integral_k: some("4*pi"),
            area: some("4*pi"),
            ..Goldens::default()
        },
    })
}

/// Builds a registered scene; unknown parameters are rejected.
pub fn builtin(name: &str, params: &BTreeMap<String, String>) -> Result<Scene> {
    let info = BUILTINS.iter().find(|b| b.name == name).ok_or_else(|| LabError::UnknownScene(name.to_string()))?;
    if let Some(k) = params.keys().find(|k| !info.params.iter().any(|(p, _)| p == k)) {
        return Err(LabError::Config(format!("scene `{name}` has no parameter `{k}`")));
    }
    match name {
        "euclidean_plane" => Ok(euclidean_plane()),
        "round_sphere_standard" => Ok(round_sphere_standard()),
        "torus_standard" => Ok(torus_standard()),
        "rotated_frame_plane" => rotated_frame_plane(params),
        "catenoid_frame_plane" => Ok(catenoid_frame_plane()),
        "catenoid_frame_cylinder" => Ok(catenoid_frame_cylinder()),
        "cartan_schouten_sphere" => cartan_schouten_sphere(params),
        _ => unreachable!("registered builtin without constructor"),
    }
}

pub fn builtin_default(name: &str) -> Result<Scene> {
    builtin(name, &BTreeMap::new())
}

/// Parses `key=value` pairs.
pub fn parse_params<S: AsRef<str>>(items: &[S]) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for it in items {
        let it = it.as_ref();
        let (k, v) = it.split_once('=').ok_or_else(|| LabError::Config(format!("expected key=value, got `{it}`")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}
