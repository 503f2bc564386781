//! `rcgeom` command line: verify, fields, integrate, list, scene.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::builtins::{builtin, parse_params, BUILTINS};
use crate::error::{LabError, Result};
use crate::export::{export_fields, write_fields};
use crate::grid::{parse_resolution, Layout, SampleGrid};
use crate::quadrature::{integrate, FIELDS};
use crate::scene::{open_scene, save_scene, Compiled};
use crate::suites::{parse_selection, verify_on, Report, Status, Tier, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "rcgeom", version, about = "Numerical lab for surfaces in Riemann-Cartan 3-manifolds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Source {
    /// Scene file (.rcscene)
    #[arg(long, conflicts_with = "builtin")]
    scene: Option<PathBuf>,
    /// Built-in scene name
    #[arg(long)]
    builtin: Option<String>,
    /// Builtin parameter, key=value
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

#[derive(Args, Debug)]
struct Run {
    #[command(flatten)]
    source: Source,
    /// Resolution NxM
    #[arg(long, default_value = "64x64")]
    grid: String,
    /// Worker threads
    #[arg(long)]
    jobs: Option<usize>,
    /// Output path
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run verification suites and write a JSON report
    Verify {
        #[command(flatten)]
        run: Run,
        /// analytic, strict or a number
        #[arg(long, default_value = "analytic")]
        tol: String,
        /// Comma-separated suite names, or `all`
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Export per-sample fields as CSV
    Fields {
        #[command(flatten)]
        run: Run,
    },
    /// Integrate a field against the area form
    Integrate {
        #[command(flatten)]
        run: Run,
        #[arg(long)]
        field: String,
    },
    /// List built-in scenes
    List,
    /// Write a scene document
    Scene {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn compile(src: &Source) -> Result<Compiled> {
    let params = parse_params(&src.params)?;
    match (&src.scene, &src.builtin) {
        (Some(path), None) => {
            if !params.is_empty() {
                return Err(LabError::Config("--param applies to builtin scenes only".into()));
            }
            open_scene(path)
        }
        (None, Some(name)) => builtin(name, &params)?.compile(),
        _ => Err(LabError::Config("give exactly one of --scene or --builtin".into())),
    }
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        if n == 0 {
            return Err(LabError::Config("--jobs must be positive".into()));
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| LabError::Config(e.to_string()))
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| LabError::io(p.display(), e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| LabError::io("stdout", e)),
    }
}

fn summary(r: &Report) -> String {
    let mut s = format!("scene {} on {}x{} ({})\n", r.scene, r.grid[0], r.grid[1], r.tier);
    for x in &r.suites {
        let status = match x.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        };
        let max = x.max_residual.map_or("-".to_string(), |m| format!("{m:.3e}"));
        s += &format!("  {:<15} {status}  max {max:>10}  tol {:.1e}  {}\n", x.name, x.tolerance, x.note);
    }
    s += if r.pass { "all suites pass\n" } else { "verification failed\n" };
    s
}

fn execute(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::List => {
            let mut s = String::new();
            for b in &BUILTINS {
                let params: Vec<String> = b.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let params = if params.is_empty() { String::new() } else { format!(" [{}]", params.join(", ")) };
                s += &format!("{}{params}: {}\n", b.name, b.summary);
            }
            write_out(&None, &s)?;
            Ok(EXIT_OK)
        }
        Cmd::Scene { source, out } => {
            let c = compile(&source)?;
            match &out {
                Some(p) => save_scene(&c.scene, p)?,
                None => write_out(&None, &c.scene.to_toml())?,
            }
            Ok(EXIT_OK)
        }
        Cmd::Verify { run, tol, suite } => {
            let tier = Tier::parse(&tol)?;
            let res = parse_resolution(&run.grid)?;
            let mut cfg = VerifyConfig::new(res, tier);
            cfg.suites = parse_selection(&suite)?;
            let c = compile(&run.source)?;
            let report = pool(run.jobs)?.install(|| {
                let grid = SampleGrid::build(&c, res, Layout::Uniform)?;
                verify_on(&c, &grid, &cfg)
            })?;
            eprint!("{}", summary(&report));
            write_out(&run.out, &report.to_json())?;
            Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
        }
        Cmd::Fields { run } => {
            let res = parse_resolution(&run.grid)?;
            let c = compile(&run.source)?;
            let grid = pool(run.jobs)?.install(|| SampleGrid::build(&c, res, Layout::Uniform))?;
            match &run.out {
                Some(p) => export_fields(&grid, p)?,
                None => write_fields(&grid, std::io::stdout().lock())?,
            }
            Ok(EXIT_OK)
        }
        Cmd::Integrate { run, field } => {
            if !FIELDS.contains(&field.as_str()) {
                return Err(LabError::UndefinedField(field));
            }
            let res = parse_resolution(&run.grid)?;
            let c = compile(&run.source)?;
            let value = pool(run.jobs)?.install(|| -> Result<f64> {
                let grid = SampleGrid::build(&c, res, Layout::Quadrature)?;
                integrate(&grid, &field)
            })?;
            write_out(&run.out, &format!("{value:.16e}\n"))?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(run(["rcgeom", "list"]), EXIT_OK);
        assert_eq!(run(["rcgeom", "verify", "--scene", "/nonexistent/missing.rcscene"]), EXIT_INPUT);
        assert_eq!(run(["rcgeom", "verify", "--builtin", "nope"]), EXIT_INPUT);
        assert_eq!(run(["rcgeom", "verify", "--builtin", "euclidean_plane", "--grid", "4x4"]), EXIT_INPUT);
        assert_eq!(run(["rcgeom", "frobnicate"]), EXIT_INPUT);
    }
}
