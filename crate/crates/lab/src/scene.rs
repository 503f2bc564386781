//! Scene documents (`.rcscene`, TOML) and their compiled form.
//!
//! ```toml
//! name = "example"
//! description = "one line"
//!
//! [ambient]
//! kind = "frame"                        # or "coefficients"
//! frame = [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]   # E_1, E_2, E_3
//! # metric = [[...], [...], [...]]      # g_ij, coefficients only
//! # gamma = [[[...]]]                   # gamma[k][i][j] = Γ^k_ij, coefficients only
//! # lo = [-1.0, -1.0, -1.0]             # optional open chart box
//! # hi = [1.0, 1.0, 1.0]
//!
//! [surface]
//! X = ["u", "v", "0"]
//! u = [0.0, 1.0]
//! v = [0.0, 1.0]
//! periodic = [false, false]
//! isothermal = true
//! closed = false
//! # euler_characteristic = 2
//! # normal = ["0", "0", "1"]            # extension of N to the chart
//!
//! [gauge]                               # optional
//! theta = "x*y"
//! axis = ["1", "0", "0"]
//!
//! [tolerances]                          # optional, per suite
//! gauss_eq = 1e-6
//!
//! [goldens]                             # optional, Exprs in u, v
//! H = "0"
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use rcgeom_core::ambient::{Ambient, ChartBox, CHART_VARS};
use rcgeom_core::expr::{line_col, parse, Bindings, Expr};
use rcgeom_core::gaussmap::GaugeField;
use rcgeom_core::surface::{Surface, SURFACE_VARS};
use rcgeom_core::Error as CoreError;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Location, Result};
use crate::suites::SUITES;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmbientKind {
    Frame,
    Coefficients,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientSpec {
    pub kind: AmbientKind,
    /// Frame vectors `E_j`, each in chart components.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<[[String; 3]; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<[[String; 3]; 3]>,
    /// `gamma[k][i][j] = Γ^k_{ij}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<[[[String; 3]; 3]; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<[f64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    #[serde(rename = "X")]
    pub x: [String; 3],
    pub u: [f64; 2],
    pub v: [f64; 2],
    #[serde(default)]
    pub periodic: [bool; 2],
    #[serde(default)]
    pub isothermal: bool,
    #[serde(default)]
    pub closed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_characteristic: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal: Option<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeSpec {
    pub theta: String,
    pub axis: [String; 3],
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Goldens {
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star_tau: Option<String>,
    #[serde(rename = "K_e", default, skip_serializing_if = "Option::is_none")]
    pub k_e: Option<String>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(rename = "W_on", default, skip_serializing_if = "Option::is_none")]
    pub w_on: Option<[[String; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conformal_factor: Option<String>,
    /// Real and imaginary part of φ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<[String; 2]>,
    /// Sectional curvature of the tangent plane.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sectional: Option<String>,
    #[serde(rename = "integral_K", default, skip_serializing_if = "Option::is_none")]
    pub integral_k: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    #[serde(rename = "holomorphic_H", default, skip_serializing_if = "Option::is_none")]
    pub holomorphic_h: Option<bool>,
}

impl Goldens {
    pub fn is_empty(&self) -> bool {
        *self == Goldens::default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub ambient: AmbientSpec,
    pub surface: SurfaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Goldens::is_empty")]
    pub goldens: Goldens,
}

/// Golden values compiled to Exprs in `(u, v)`.
#[derive(Clone, Debug, Default)]
pub struct GoldenExprs {
    pub h: Option<Expr>,
    pub star_tau: Option<Expr>,
    pub k_e: Option<Expr>,
    pub k: Option<Expr>,
    pub w_on: Option<[[Expr; 2]; 2]>,
    pub n: Option<[Expr; 3]>,
    pub conformal_factor: Option<Expr>,
    pub phi: Option<[Expr; 2]>,
    pub sectional: Option<Expr>,
    pub integral_k: Option<f64>,
    pub area: Option<f64>,
}

impl GoldenExprs {
    pub fn has_pointwise(&self) -> bool {
        self.h.is_some()
            || self.star_tau.is_some()
            || self.k_e.is_some()
            || self.k.is_some()
            || self.w_on.is_some()
            || self.n.is_some()
            || self.conformal_factor.is_some()
            || self.phi.is_some()
            || self.sectional.is_some()
    }
}

/// Evaluates a golden Expr at `(u, v)`.
pub fn eval_uv(e: &Expr, uv: [f64; 2]) -> f64 {
    e.eval(&Bindings::new(&SURFACE_VARS, &uv)).unwrap_or(f64::NAN)
}

/// A validated scene with its geometry built.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub scene: Scene,
    pub ambient: Arc<Ambient>,
    pub surface: Surface,
    pub gauge: Option<GaugeField>,
    /// Extension of the unit normal to the chart.
    pub normal: Option<[Expr; 3]>,
    pub goldens: GoldenExprs,
}

impl Compiled {
    pub fn is_frame(&self) -> bool {
        self.ambient.is_frame()
    }

    pub fn isothermal(&self) -> bool {
        self.surface.isothermal
    }

    pub fn closed(&self) -> bool {
        self.scene.surface.closed
    }
}

fn toml_error(source: &str, e: &toml::de::Error) -> LabError {
    let msg = e.message().trim().to_string();
    match e.span() {
        Some(span) => {
            let (line, col) = line_col(source, span.start);
            LabError::format("document", format!("{msg} (line {line}, column {col})"))
        }
        None => LabError::format("document", msg),
    }
}

fn require(table: &toml::Table, path: &str) -> Result<()> {
    let mut cur = table;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, key) in parts.iter().enumerate() {
        match cur.get(*key) {
            None => return Err(LabError::format(path, "required")),
            Some(toml::Value::Table(t)) if i + 1 < parts.len() => cur = t,
            Some(_) if i + 1 < parts.len() => return Err(LabError::format(parts[..=i].join("."), "expected a table")),
            Some(_) => {}
        }
    }
    Ok(())
}

struct ExprCtx<'a> {
    source: Option<&'a str>,
}

impl ExprCtx<'_> {
    fn locate(&self, text: &str, err: &CoreError) -> Option<Location> {
        let src = self.source?;
        let start = [format!("\"{text}\""), format!("'{text}'")].iter().find_map(|q| src.find(q.as_str()))? + 1;
        let inner = match err {
            CoreError::Syntax { offset, .. } => *offset,
            CoreError::UnknownVariable(name) | CoreError::UnknownFunction(name) => text.find(name.as_str()).unwrap_or(0),
            _ => 0,
        };
        let (line, col) = line_col(src, start + inner);
        Some(Location { line, col })
    }

    fn parse(&self, field: &str, text: &str, vars: &[&str]) -> Result<Expr> {
        parse(text, vars).map_err(|e| LabError::Expr { field: field.to_string(), location: self.locate(text, &e), source: e })
    }

    fn parse3(&self, field: &str, t: &[String; 3], vars: &[&str]) -> Result<[Expr; 3]> {
        let v: Vec<Expr> = (0..3).map(|i| self.parse(&format!("{field}[{i}]"), &t[i], vars)).collect::<Result<_>>()?;
        Ok(v.try_into().unwrap())
    }

    fn parse33(&self, field: &str, t: &[[String; 3]; 3], vars: &[&str]) -> Result<[[Expr; 3]; 3]> {
        let v: Vec<[Expr; 3]> = (0..3).map(|i| self.parse3(&format!("{field}[{i}]"), &t[i], vars)).collect::<Result<_>>()?;
        Ok(v.try_into().unwrap())
    }

    fn constant(&self, field: &str, text: &str) -> Result<f64> {
        let e = self.parse(field, text, &[])?;
        e.eval(&Bindings::default()).map_err(|e| LabError::Expr { field: field.to_string(), location: None, source: e })
    }
}

fn check_interval(path: &str, iv: [f64; 2]) -> Result<()> {
    if !(iv[0].is_finite() && iv[1].is_finite() && iv[0] < iv[1]) {
        return Err(LabError::format(path, "expected a finite interval [lo, hi] with lo < hi"));
    }
    Ok(())
}

impl Scene {
    /// Parses a scene document without building its geometry.
    pub fn from_toml(text: &str) -> Result<Scene> {
        let table: toml::Table = text.parse().map_err(|e| toml_error(text, &e))?;
        for path in ["name", "ambient", "ambient.kind", "surface", "surface.X", "surface.u", "surface.v"] {
            require(&table, path)?;
        }
        if let Some(g) = table.get("gauge") {
            for path in ["gauge.theta", "gauge.axis"] {
                if g.is_table() {
                    require(&table, path)?;
                }
            }
        }
        toml::from_str(text).map_err(|e| toml_error(text, &e))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scene documents always serialize")
    }

    pub fn compile(&self) -> Result<Compiled> {
        self.compile_with_source(None)
    }

    /// Builds and validates the geometry; `source` is used to locate
    /// expression errors.
    pub fn compile_with_source(&self, source: Option<&str>) -> Result<Compiled> {
        let cx = ExprCtx { source };
        let a = &self.ambient;
        let domain = ChartBox {
            lo: a.lo.unwrap_or([f64::NEG_INFINITY; 3]),
            hi: a.hi.unwrap_or([f64::INFINITY; 3]),
        };
        let ambient = match a.kind {
            AmbientKind::Frame => {
                if a.metric.is_some() || a.gamma.is_some() {
                    return Err(LabError::format("ambient", "a frame ambient takes no metric or gamma"));
                }
                let fr = a.frame.as_ref().ok_or_else(|| LabError::format("ambient.frame", "required"))?;
                let cols = cx.parse33("ambient.frame", fr, &CHART_VARS)?;
                let f: [[Expr; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i].clone()));
                Ambient::from_frame(f, domain)?
            }
            AmbientKind::Coefficients => {
                if a.frame.is_some() {
                    return Err(LabError::format("ambient.frame", "not allowed for coefficient ambients"));
                }
                let g = a.metric.as_ref().ok_or_else(|| LabError::format("ambient.metric", "required"))?;
                let gamma = a.gamma.as_ref().ok_or_else(|| LabError::format("ambient.gamma", "required"))?;
                let g = cx.parse33("ambient.metric", g, &CHART_VARS)?;
                let gm: Vec<[[Expr; 3]; 3]> = (0..3)
                    .map(|k| cx.parse33(&format!("ambient.gamma[{k}]"), &gamma[k], &CHART_VARS))
                    .collect::<Result<_>>()?;
                Ambient::from_coefficients(g, gm.try_into().unwrap(), domain)?
            }
        };
        let ambient = Arc::new(ambient);

        let s = &self.surface;
        check_interval("surface.u", s.u)?;
        check_interval("surface.v", s.v)?;
        let x = cx.parse3("surface.X", &s.x, &SURFACE_VARS)?;
        let surface = Surface::new(ambient.clone(), x, [s.u, s.v], s.periodic, s.isothermal)?;
        if s.closed && !(s.periodic[1] || s.periodic[0]) {
            return Err(LabError::format("surface.closed", "a closed surface needs at least one periodic axis"));
        }
        let normal = s.normal.as_ref().map(|n| cx.parse3("surface.normal", n, &CHART_VARS)).transpose()?;

        let gauge = match &self.gauge {
            Some(g) => {
                let theta = cx.parse("gauge.theta", &g.theta, &CHART_VARS)?;
                let axis = cx.parse3("gauge.axis", &g.axis, &CHART_VARS)?;
                Some(GaugeField::new(theta, axis)?)
            }
            None => None,
        };
        if gauge.is_some() && !ambient.is_frame() {
            return Err(LabError::format("gauge", "a gauge needs a frame ambient"));
        }

        for (name, tol) in &self.tolerances {
            if !SUITES.contains(&name.as_str()) {
                return Err(LabError::format(format!("tolerances.{name}"), "unknown suite"));
            }
            if !(tol.is_finite() && *tol > 0.0) {
                return Err(LabError::format(format!("tolerances.{name}"), "tolerance must be positive"));
            }
        }

        let gd = &self.goldens;
        let uv = |f: &str, t: &Option<String>| t.as_ref().map(|t| cx.parse(&format!("goldens.{f}"), t, &SURFACE_VARS)).transpose();
        let goldens = GoldenExprs {
            h: uv("H", &gd.h)?,
            star_tau: uv("star_tau", &gd.star_tau)?,
            k_e: uv("K_e", &gd.k_e)?,
            k: uv("K", &gd.k)?,
            w_on: match &gd.w_on {
                Some(w) => {
                    let p = |i: usize, j: usize| cx.parse(&format!("goldens.W_on[{i}][{j}]"), &w[i][j], &SURFACE_VARS);
                    Some([[p(0, 0)?, p(0, 1)?], [p(1, 0)?, p(1, 1)?]])
                }
                None => None,
            },
            n: gd.n.as_ref().map(|n| cx.parse3("goldens.n", n, &SURFACE_VARS)).transpose()?,
            conformal_factor: uv("conformal_factor", &gd.conformal_factor)?,
            phi: match &gd.phi {
                Some(p) => Some([
                    cx.parse("goldens.phi[0]", &p[0], &SURFACE_VARS)?,
                    cx.parse("goldens.phi[1]", &p[1], &SURFACE_VARS)?,
                ]),
                None => None,
            },
            sectional: uv("sectional", &gd.sectional)?,
            integral_k: gd.integral_k.as_ref().map(|t| cx.constant("goldens.integral_K", t)).transpose()?,
            area: gd.area.as_ref().map(|t| cx.constant("goldens.area", t)).transpose()?,
        };

        let out = Compiled { scene: self.clone(), ambient, surface, gauge, normal, goldens };
        out.validate()?;
        Ok(out)
    }
}

impl Compiled {
    /// Chart points at a 4×4 block of cell centres of the parameter domain.
    pub fn validation_points(&self) -> Result<Vec<[f64; 3]>> {
        let d = &self.surface.domain;
        let mut pts = Vec::with_capacity(16);
        for i in 0..4 {
            for j in 0..4 {
                let u = d[0][0] + (i as f64 + 0.5) / 4.0 * (d[0][1] - d[0][0]);
                let v = d[1][0] + (j as f64 + 0.5) / 4.0 * (d[1][1] - d[1][0]);
                pts.push(self.surface.point(u, v)?);
            }
        }
        Ok(pts)
    }

    fn validate(&self) -> Result<()> {
        let pts = self.validation_points()?;
        self.ambient.validate(&pts)?;
        if let Some(g) = &self.gauge {
            g.validate(&pts)?;
        }
        Ok(())
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| LabError::io(path.display(), e))
}

/// Reads, parses and validates a scene file.
pub fn load_scene(path: impl AsRef<Path>) -> Result<Scene> {
    Ok(open_scene(path)?.scene)
}

/// Like [`load_scene`] but keeps the built geometry.
pub fn open_scene(path: impl AsRef<Path>) -> Result<Compiled> {
    let text = read(path.as_ref())?;
    let scene = Scene::from_toml(&text)?;
    scene.compile_with_source(Some(&text))
}

pub fn save_scene(scene: &Scene, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, scene.to_toml()).map_err(|e| LabError::io(path.display(), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PLANE: &str = r#"
name = "plane"

[ambient]
kind = "frame"
frame = [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]

[surface]
X = ["u", "v", "0"]
u = [0.0, 1.0]
v = [0.0, 1.0]
"#;

    #[test]
    fn parses_minimal_scene() {
        let s = Scene::from_toml(PLANE).unwrap();
        assert_eq!(s.surface.periodic, [false, false]);
        let c = s.compile().unwrap();
        assert!(c.is_frame());
        assert!(!c.goldens.has_pointwise());
    }

    #[test]
    fn missing_surface_map() {
        let text = PLANE.replace("X = [\"u\", \"v\", \"0\"]\n", "");
        match Scene::from_toml(&text) {
            Err(LabError::SceneFormat { path, message }) => assert_eq!((path.as_str(), message.as_str()), ("surface.X", "required")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn expression_error_has_location() {
        let text = PLANE.replace("\"u\", \"v\", \"0\"", "\"u\", \"v +\", \"0\"");
        let s = Scene::from_toml(&text).unwrap();
        match s.compile_with_source(Some(&text)) {
            Err(LabError::Expr { field, location: Some(loc), .. }) => {
                assert_eq!(field, "surface.X[1]");
                assert_eq!(loc.line, 9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_variable_in_surface() {
        let text = PLANE.replace("\"u\", \"v\", \"0\"", "\"u\", \"v\", \"x\"");
        let s = Scene::from_toml(&text).unwrap();
        assert!(matches!(
            s.compile_with_source(Some(&text)),
            Err(LabError::Expr { source: CoreError::UnknownVariable(_), .. })
        ));
    }

    #[test]
    fn singular_frame_is_rejected() {
        let text = PLANE.replace(r#"["0", "0", "1"]]"#, r#"["1", "1", "0"]]"#);
        let s = Scene::from_toml(&text).unwrap();
        assert!(matches!(s.compile(), Err(LabError::Geometry(CoreError::SingularFrame(_)))));
    }

    #[test]
    fn unknown_key_reports_line() {
        let text = PLANE.replace("kind = \"frame\"", "kind = \"frame\"\ncolour = 3");
        match Scene::from_toml(&text) {
            Err(LabError::SceneFormat { message, .. }) => assert!(message.contains("line 6"), "{message}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_tolerance_key() {
        let mut s = Scene::from_toml(PLANE).unwrap();
        s.tolerances.insert("nonsense".into(), 1e-3);
        assert!(matches!(s.compile(), Err(LabError::SceneFormat { .. })));
    }

    #[test]
    fn round_trip_text() {
        let s = Scene::from_toml(PLANE).unwrap();
        assert_eq!(Scene::from_toml(&s.to_toml()).unwrap(), s);
    }
}
