//! Verification suites run over a sample grid.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rcgeom_core::ambient::{Order, Source, CHART_VARS};
use rcgeom_core::expr::{lit, parse, Expr};
use rcgeom_core::extrinsic::{curvature_decomposition_residual, gauss_equation_residual, weingarten, ExtrinsicData};
use rcgeom_core::gaussmap::{apply_gauge, gauge_theorem_residual, gauss_degree, general_gauge_residual, GaugeField};
use rcgeom_core::holo::{self, hopf_terms};
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::grid::{Layout, NodeData, SampleGrid, ISO_TOL};
use crate::quadrature::integrate;
use crate::scene::{eval_uv, Compiled};

pub const SUITES: [&str; 14] = [
    "ambient_sanity",
    "goldens",
    "weingarten",
    "gauss_eq",
    "egregium",
    "divcurl",
    "gauge",
    "psi_identity",
    "umbilic_phi",
    "hopf_identity",
    "holomorphic",
    "conformality",
    "gauss_bonnet",
    "degree",
];

/// Seed of the randomized gauge fields.
pub const GAUGE_SEED: u64 = 0x5eed_4a11;
pub const RANDOM_GAUGES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tier {
    Analytic,
    Strict,
    /// One tolerance for every suite.
    Value(f64),
}

/// Error budgets of a tier.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Budgets {
    /// Quantities built from exact derivatives.
    pub exact: f64,
    /// Quantities that go through finite-difference stencils.
    pub stencil: f64,
    /// Quadrature results, relative.
    pub quadrature: f64,
}

impl Tier {
    pub fn parse(s: &str) -> Result<Tier> {
        match s {
            "analytic" => Ok(Tier::Analytic),
            "strict" => Ok(Tier::Strict),
            _ => match s.parse::<f64>() {
                Ok(v) if v.is_finite() && v > 0.0 => Ok(Tier::Value(v)),
                _ => Err(LabError::Config(format!("tolerance must be `analytic`, `strict` or a positive number, got `{s}`"))),
            },
        }
    }

    pub fn budgets(self) -> Budgets {
        match self {
            Tier::Analytic => Budgets { exact: 1e-7, stencil: 1e-5, quadrature: 1e-3 },
            Tier::Strict => Budgets { exact: 1e-8, stencil: 1e-6, quadrature: 1e-4 },
            Tier::Value(v) => Budgets { exact: v, stencil: v, quadrature: v },
        }
    }

    pub fn label(self) -> String {
        match self {
            Tier::Analytic => "analytic".into(),
            Tier::Strict => "strict".into(),
            Tier::Value(v) => format!("{v:e}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub status: Status,
    pub max_residual: Option<f64>,
    pub mean_residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub samples: usize,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub scene: String,
    pub grid: [usize; 2],
    pub tier: String,
    pub pass: bool,
    /// Extremes of the main quantities over valid samples.
    pub observables: BTreeMap<String, f64>,
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize") + "\n"
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub resolution: [usize; 2],
    pub tier: Tier,
    /// Explicit `--tol` value, which beats scene overrides.
    pub forced: bool,
    pub suites: Vec<String>,
}

impl VerifyConfig {
    pub fn new(resolution: [usize; 2], tier: Tier) -> VerifyConfig {
        VerifyConfig {
            resolution,
            tier,
            forced: matches!(tier, Tier::Value(_)),
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Parses `a,b,c`; `all` selects every suite.
pub fn parse_selection(s: &str) -> Result<Vec<String>> {
    if s.trim() == "all" {
        return Ok(SUITES.iter().map(|s| s.to_string()).collect());
    }
    let mut out = Vec::new();
    for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
        if !SUITES.contains(&name) {
            return Err(LabError::Config(format!("unknown suite `{name}`; known: {}", SUITES.join(", "))));
        }
        if !out.iter().any(|o| o == name) {
            out.push(name.to_string());
        }
    }
    if out.is_empty() {
        return Err(LabError::Config("empty suite selection".into()));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
enum Budget {
    Exact,
    Stencil,
    Quadrature,
}

fn budget_of(name: &str) -> Budget {
    match name {
        "gauss_eq" | "egregium" | "hopf_identity" | "holomorphic" => Budget::Stencil,
        "gauss_bonnet" | "degree" => Budget::Quadrature,
        _ => Budget::Exact,
    }
}

/// Running max/mean of residuals; NaN poisons the maximum.
#[derive(Default)]
struct Acc {
    max: f64,
    sum: f64,
    n: usize,
    nan: bool,
}

impl Acc {
    fn push(&mut self, r: f64) {
        if r.is_nan() {
            self.nan = true;
        } else {
            self.max = self.max.max(r);
        }
        self.sum += r;
        self.n += 1;
    }

    fn finish(self, name: &str, tol: f64, note: String) -> SuiteResult {
        if self.n == 0 {
            return skipped(name, tol, if note.is_empty() { "no samples".into() } else { note });
        }
        let max = if self.nan { f64::NAN } else { self.max };
        let pass = max <= tol;
        SuiteResult {
            name: name.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            max_residual: max.is_finite().then_some(max),
            mean_residual: Some(self.sum / self.n as f64).filter(|m| m.is_finite()),
            tolerance: tol,
            pass,
            samples: self.n,
            note,
        }
    }
}

fn skipped(name: &str, tol: f64, note: impl Into<String>) -> SuiteResult {
    SuiteResult {
        name: name.into(),
        status: Status::Skipped,
        max_residual: None,
        mean_residual: None,
        tolerance: tol,
        pass: true,
        samples: 0,
        note: note.into(),
    }
}

fn failed(name: &str, tol: f64, note: impl Into<String>) -> SuiteResult {
    SuiteResult {
        name: name.into(),
        status: Status::Fail,
        max_residual: None,
        mean_residual: None,
        tolerance: tol,
        pass: false,
        samples: 0,
        note: note.into(),
    }
}

/// `max` that keeps NaN.
fn worst(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn max_abs<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| worst(m, (x - y).abs()))
}

struct Ctx<'a> {
    c: &'a Compiled,
    grid: &'a SampleGrid,
    quad: Option<SampleGrid>,
    res: [usize; 2],
    budgets: Budgets,
}

impl Ctx<'_> {
    fn quad_grid(&mut self) -> Result<&SampleGrid> {
        if self.quad.is_none() {
            self.quad = Some(SampleGrid::build(self.c, self.res, Layout::Quadrature)?);
        }
        Ok(self.quad.as_ref().unwrap())
    }

    fn exact(&self) -> f64 {
        self.budgets.exact
    }
}

/// Runs the selected suites on a uniform grid of the scene.
pub fn verify(c: &Compiled, cfg: &VerifyConfig) -> Result<Report> {
    let grid = SampleGrid::build(c, cfg.resolution, Layout::Uniform)?;
    verify_on(c, &grid, cfg)
}

pub fn verify_on(c: &Compiled, grid: &SampleGrid, cfg: &VerifyConfig) -> Result<Report> {
    let budgets = cfg.tier.budgets();
    let mut cx = Ctx { c, grid, quad: None, res: cfg.resolution, budgets };
    let mut suites = Vec::new();
    for name in SUITES.iter().filter(|s| cfg.suites.iter().any(|x| x == *s)) {
        let tier_tol = match budget_of(name) {
            Budget::Exact => budgets.exact,
            Budget::Stencil => budgets.stencil,
            Budget::Quadrature => budgets.quadrature,
        };
        let tol = match c.scene.tolerances.get(*name) {
            Some(t) if !cfg.forced => *t,
            _ => tier_tol,
        };
        suites.push(run_suite(&mut cx, name, tol)?);
    }
    Ok(Report {
        scene: c.scene.name.clone(),
        grid: cfg.resolution,
        tier: cfg.tier.label(),
        pass: suites.iter().all(|s| s.pass),
        observables: observables(grid),
        suites,
    })
}

/// `max |𝑯|`, `max |K_e|`, `max |K|` and the valid sample count.
pub fn observables(grid: &SampleGrid) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    let mut put = |k: &str, f: &dyn Fn(&NodeData) -> f64| {
        let m = grid.valid().fold(0.0, |m, (_, d)| worst(m, f(d).abs()));
        out.insert(k.to_string(), m);
    };
    put("max_abs_bold_H", &|d| d.ext.bold_h.norm());
    put("max_abs_K_e", &|d| d.ext.k_e);
    put("max_abs_K", &|d| d.sample.curvature.map_or(f64::NAN, |c| c.k));
    out.insert("valid_samples".into(), grid.valid_count() as f64);
    out
}

fn run_suite(cx: &mut Ctx, name: &str, tol: f64) -> Result<SuiteResult> {
    Ok(match name {
        "ambient_sanity" => ambient_sanity(cx, tol),
        "goldens" => goldens(cx, tol),
        "weingarten" => per_node(cx, name, tol, |_, d| {
            Some(weingarten(&d.sample, &d.ext).cross_check_residual.max(d.ext.invariant_residual()))
        }),
        "gauss_eq" => per_node(cx, name, tol, |_, d| Some(gauss_equation_residual(&d.sample, &d.ext, &d.tensors).unwrap_or(f64::NAN))),
        "egregium" => per_node(cx, name, tol, |_, d| {
            Some(match curvature_decomposition_residual(&d.sample, &d.ext, &d.tensors) {
                Ok(dec) => dec.egregium.unwrap_or(0.0).max(dec.sectional_split),
                Err(_) => f64::NAN,
            })
        }),
        "divcurl" => divcurl(cx, tol),
        "gauge" => gauge(cx, tol)?,
        "psi_identity" => isothermal(cx, name, tol, |_, d| Some(holo::psi_identity_residual(&d.ext))),
        "umbilic_phi" => umbilic_phi(cx, tol),
        "hopf_identity" => hopf_identity(cx, tol),
        "holomorphic" => holomorphic(cx, tol),
        "conformality" => conformality(cx, tol),
        "gauss_bonnet" => gauss_bonnet(cx, tol)?,
        "degree" => degree(cx, tol)?,
        _ => return Err(LabError::Config(format!("unknown suite `{name}`"))),
    })
}

fn per_node(cx: &Ctx, name: &str, tol: f64, f: impl Fn(usize, &NodeData) -> Option<f64>) -> SuiteResult {
    let mut acc = Acc::default();
    for (k, d) in cx.grid.valid() {
        if let Some(r) = f(k, d) {
            acc.push(r);
        }
    }
    acc.finish(name, tol, String::new())
}

fn isothermal(cx: &Ctx, name: &str, tol: f64, f: impl Fn(usize, &NodeData) -> Option<f64>) -> SuiteResult {
    if !cx.c.isothermal() {
        return skipped(name, tol, "chart is not isothermal");
    }
    if let Some(bad) = cx.grid.nodes.iter().find_map(|n| n.state.as_ref().err().filter(|e| e.contains("isothermal"))) {
        return failed(name, tol, bad.clone());
    }
    per_node(cx, name, tol, f)
}

fn ambient_sanity(cx: &Ctx, tol: f64) -> SuiteResult {
    per_node(cx, "ambient_sanity", tol, |_, d| {
        let a = &d.sample.amb;
        let mut r = a.metric_compat_residual();
        let t = &d.tensors.torsion;
        for tk in t {
            for (i, row) in tk.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    r = r.max((x + tk[j][i]).abs());
                }
            }
        }
        if let Some(f) = &a.frame {
            for i in 0..3 {
                for j in 0..3 {
                    let fi: f64 = (0..3).map(|m| f.f[i][m] * f.finv[m][j]).sum();
                    r = r.max((fi - if i == j { 1.0 } else { 0.0 }).abs());
                }
            }
        }
        Some(r)
    })
}

fn goldens(cx: &Ctx, tol: f64) -> SuiteResult {
    let g = &cx.c.goldens;
    if !g.has_pointwise() {
        return skipped("goldens", tol, "scene has no pointwise goldens");
    }
    let exact = cx.exact();
    per_node(cx, "goldens", tol, |_, d| {
        let uv = d.sample.uv;
        let ev = |e: &Expr| eval_uv(e, uv);
        let mut r: f64 = 0.0;
        let mut cmp = |got: f64, e: &Option<Expr>| {
            if let Some(e) = e {
                r = worst(r, (got - ev(e)).abs());
            }
        };
        cmp(d.ext.h, &g.h);
        cmp(d.ext.star_tau, &g.star_tau);
        cmp(d.ext.k_e, &g.k_e);
        cmp(d.sample.curvature.map_or(f64::NAN, |c| c.k), &g.k);
        if g.sectional.is_some() {
            let sec = curvature_decomposition_residual(&d.sample, &d.ext, &d.tensors).map_or(f64::NAN, |x| x.sectional);
            cmp(sec, &g.sectional);
        }
        if let Some(w) = &g.w_on {
            let want = [ev(&w[0][0]), ev(&w[0][1]), ev(&w[1][0]), ev(&w[1][1])];
            let got = [d.ext.w_on[0][0], d.ext.w_on[0][1], d.ext.w_on[1][0], d.ext.w_on[1][1]];
            r = worst(r, max_abs(&got, &want));
        }
        if let (Some(n), Some(gf)) = (&g.n, &d.gauss) {
            r = worst(r, max_abs(&gf.n, &[ev(&n[0]), ev(&n[1]), ev(&n[2])]));
        }
        if let (Some(k), Some(gf)) = (&g.conformal_factor, &d.gauss) {
            r = worst(r, (gf.conformality(&d.sample, exact).k - ev(k)).abs());
        }
        if let (Some(p), Some(_)) = (&g.phi, d.lambda) {
            let phi = holo::phi(&d.ext);
            r = worst(r, max_abs(&[phi.re, phi.im], &[ev(&p[0]), ev(&p[1])]));
        }
        Some(r)
    })
}

fn divcurl(cx: &Ctx, tol: f64) -> SuiteResult {
    if !cx.c.is_frame() {
        return skipped("divcurl", tol, "ambient is not given by a frame");
    }
    let mut acc = Acc::default();
    for (_, d) in cx.grid.valid_interior() {
        let gf = d.gauss.as_ref().expect("frame scenes carry a Gauss field");
        let r = gf.div_curl().ladder_residuals(&gf.n, d.ext.h, d.ext.star_tau);
        acc.push(r.iter().fold(0.0, |m: f64, x| m.max(*x)));
    }
    acc.finish("divcurl", tol, String::new())
}

fn umbilic_phi(cx: &Ctx, tol: f64) -> SuiteResult {
    let exact = cx.exact();
    let mut res = isothermal(cx, "umbilic_phi", tol, |_, d| {
        let lambda = d.lambda?;
        let umbilic = d.ext.classify(exact).umbilic;
        let phi_zero = 2.0 * holo::phi(&d.ext).norm() / (lambda * lambda) <= exact;
        Some(if umbilic == phi_zero { 0.0 } else { 1.0 })
    });
    if res.status != Status::Skipped {
        res.note = "residual 1 marks a sample where the two tests disagree".into();
    }
    res
}

fn hopf_identity(cx: &Ctx, tol: f64) -> SuiteResult {
    let g = cx.grid;
    let phi = g.complex_field(|d| holo::phi(&d.ext));
    let bh = g.complex_field(|d| d.ext.bold_h);
    isothermal(cx, "hopf_identity", tol, |k, d| {
        if !g.stencil_ok(k) {
            return None;
        }
        let nv = g.shape()[1];
        let (i, j) = (k / nv, k % nv);
        let r = match (hopf_terms(&d.sample, &d.ext, &d.tensors, ISO_TOL), phi.dzbar(i, j), bh.dzbar(i, j)) {
            (Ok(t), Ok(dp), Ok(dh)) => (dp - t.rhs(dh)).norm(),
            _ => f64::NAN,
        };
        Some(r)
    })
}

fn holomorphic(cx: &Ctx, tol: f64) -> SuiteResult {
    if cx.c.scene.goldens.holomorphic_h != Some(true) {
        return skipped("holomorphic", tol, "scene does not claim a holomorphic 𝑯");
    }
    let g = cx.grid;
    let exact = cx.exact();
    let l_zero = g.valid().all(|(_, d)| {
        let l = holo::l_tensor(&d.sample, &d.ext, &d.tensors);
        l.iter().all(|x| x.abs() <= exact)
    });
    let phi = g.complex_field(|d| holo::phi(&d.ext));
    let bh = g.complex_field(|d| d.ext.bold_h);
    let mut res = isothermal(cx, "holomorphic", tol, |k, _| {
        if !g.stencil_ok(k) {
            return None;
        }
        let nv = g.shape()[1];
        let (i, j) = (k / nv, k % nv);
        let h = bh.dzbar(i, j).map_or(f64::NAN, |z| z.norm());
        let p = if l_zero { phi.dzbar(i, j).map_or(f64::NAN, |z| z.norm()) } else { 0.0 };
        Some(h.max(p))
    });
    if res.status != Status::Skipped {
        res.note = if l_zero { "L vanishes; φ checked as well".into() } else { "L does not vanish; 𝑯 only".into() };
    }
    res
}

fn conformality(cx: &Ctx, tol: f64) -> SuiteResult {
    if !cx.c.is_frame() {
        return skipped("conformality", tol, "ambient is not given by a frame");
    }
    let exact = cx.exact();
    let mut acc = Acc::default();
    let mut conformal = 0;
    for (_, d) in cx.grid.valid_interior() {
        let gf = d.gauss.as_ref().expect("frame scenes carry a Gauss field");
        let cls = d.ext.classify(exact);
        let predicted = !cls.geodesic_point && (cls.minimal_point || cls.umbilic);
        let actual = gf.conformality(&d.sample, exact).conformal;
        conformal += actual as usize;
        acc.push(if predicted == actual { 0.0 } else { 1.0 });
    }
    let note = format!("{conformal} of {} interior samples conformal", acc.n);
    acc.finish("conformality", tol, note)
}

fn gauss_bonnet(cx: &mut Ctx, tol: f64) -> Result<SuiteResult> {
    if !cx.c.closed() {
        return Ok(skipped("gauss_bonnet", tol, "surface is not closed"));
    }
    let target = match (cx.c.scene.surface.euler_characteristic, cx.c.goldens.integral_k) {
        (Some(chi), _) => 2.0 * std::f64::consts::PI * chi as f64,
        (None, Some(v)) => v,
        (None, None) => return Ok(skipped("gauss_bonnet", tol, "no Euler characteristic given")),
    };
    let q = cx.quad_grid()?;
    let value = integrate(q, "K")?;
    let r = if target != 0.0 { (value - target).abs() / target.abs() } else { (value - target).abs() };
    let mut acc = Acc::default();
    acc.push(r);
    let mut out = acc.finish("gauss_bonnet", tol, format!("integral of K = {value:.12e}, expected {target:.12e}"));
    out.samples = q.valid_count();
    Ok(out)
}

fn degree(cx: &mut Ctx, tol: f64) -> Result<SuiteResult> {
    if !cx.c.is_frame() {
        return Ok(skipped("degree", tol, "ambient is not given by a frame"));
    }
    if !cx.c.closed() {
        return Ok(skipped("degree", tol, "surface is not closed"));
    }
    let chi = cx.c.scene.surface.euler_characteristic;
    let golden = cx.c.scene.goldens.degree;
    let q = cx.quad_grid()?;
    let raw = integrate(q, "degree")?;
    let (deg, r) = gauss_degree(raw, true)?;
    let mut acc = Acc::default();
    acc.push(r);
    let mut out = acc.finish("degree", tol, format!("degree {deg} from raw integral {raw:.12e}"));
    out.samples = q.valid_count();
    let mismatch = chi.is_some_and(|x| 2 * deg != x) || golden.is_some_and(|g| g != deg);
    if mismatch {
        out.pass = false;
        out.status = Status::Fail;
        out.note.push_str("; does not match the expected degree");
    }
    Ok(out)
}

/// Random smooth angle field in the chart variables.
pub fn random_theta(rng: &mut ChaCha8Rng) -> Expr {
    let mut c = || lit(rng.random_range(-1.0..1.0));
    let text = format!(
        "{} + {}*sin({}*x + {}) + {}*cos({}*y + {}) + {}*sin({}*z + {})*cos({}*x)",
        c(),
        c(),
        c(),
        c(),
        c(),
        c(),
        c(),
        c(),
        c(),
        c(),
        c()
    );
    parse(&text, &CHART_VARS).expect("generated angle parses")
}

/// Random nonvanishing smooth axis field (not normalized).
pub fn random_axis(rng: &mut ChaCha8Rng) -> [Expr; 3] {
    let d: [f64; 3] = loop {
        let d: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        if n >= 0.1 {
            break d.map(|x| x / n);
        }
    };
    let vars = ["y", "z", "x"];
    std::array::from_fn(|i| {
        let (b, p) = (rng.random_range(0.5..1.5), rng.random_range(0.0..std::f64::consts::TAU));
        let text = format!("{} + 0.3*sin({}*{} + {})", lit(d[i]), lit(b), vars[i], lit(p));
        parse(&text, &CHART_VARS).expect("generated axis parses")
    })
}

/// The Gauss map `F⁻¹N` written on the chart from an extension of `N`.
pub fn normal_axis(c: &Compiled) -> Option<[Expr; 3]> {
    let Source::Frame { finv, .. } = c.ambient.source() else { return None };
    let n = c.normal.as_ref()?;
    Some(std::array::from_fn(|i| (0..3).fold(Expr::zero(), |acc, j| acc + &finv[i][j] * &n[j])))
}

/// Per-node gauge residuals for one gauge field: `[general, theorem]`, the
/// second entry only when `theorem` (normal-axis phase rotation), else 0.
pub fn gauge_residuals(c: &Compiled, grid: &SampleGrid, gf: &GaugeField, theorem: bool) -> Result<Vec<[f64; 2]>> {
    let gauged = Arc::new(apply_gauge(&c.ambient, gf, Order::First)?);
    let surf = c.surface.with_ambient(gauged);
    let nodes: Vec<(usize, &NodeData)> = grid.valid().collect();
    Ok(nodes
        .par_iter()
        .map(|(_, d)| {
            let run = || -> rcgeom_core::Result<[f64; 2]> {
                let s2 = surf.sample(d.sample.uv[0], d.sample.uv[1])?;
                let e2 = ExtrinsicData::new(&s2);
                let at = gf.eval(d.sample.p)?;
                let gfield = d.gauss.as_ref().ok_or(rcgeom_core::Error::NotWeitzenboeck)?;
                let general = general_gauge_residual(&d.sample, &d.ext, gfield, &at, &e2).general;
                let phase = if theorem { gauge_theorem_residual(&d.ext, gfield, &at, &e2)? } else { 0.0 };
                Ok([general, phase])
            };
            run().unwrap_or([f64::NAN; 2])
        })
        .collect())
}

fn gauge(cx: &Ctx, tol: f64) -> Result<SuiteResult> {
    let c = cx.c;
    if !c.is_frame() {
        return Ok(skipped("gauge", tol, "ambient is not given by a frame"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(GAUGE_SEED);
    let mut fields: Vec<(GaugeField, bool)> = Vec::new();
    if let Some(g) = &c.gauge {
        fields.push((g.clone(), false));
    }
    for _ in 0..RANDOM_GAUGES {
        let theta = random_theta(&mut rng);
        let axis = random_axis(&mut rng);
        fields.push((GaugeField::new(theta, axis)?, false));
    }
    let axis = normal_axis(c);
    if let Some(axis) = &axis {
        for _ in 0..RANDOM_GAUGES {
            fields.push((GaugeField::new(random_theta(&mut rng), axis.clone())?, true));
        }
    }
    let mut acc = Acc::default();
    for (gf, theorem) in &fields {
        for [general, phase] in gauge_residuals(c, cx.grid, gf, *theorem)? {
            acc.push(worst(general, phase));
        }
    }
    let note = format!(
        "{} general gauges{}",
        fields.iter().filter(|f| !f.1).count(),
        if axis.is_some() { format!(", {RANDOM_GAUGES} about the normal") } else { ", no normal extension".into() }
    );
    Ok(acc.finish("gauge", tol, note))
}
