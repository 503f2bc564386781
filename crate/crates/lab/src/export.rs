//! Per-sample field tables.

use std::io::Write;
use std::path::Path;

use rcgeom_core::holo;

use crate::error::{LabError, Result};
use crate::grid::SampleGrid;

pub const COLUMNS: [&str; 15] = [
    "u",
    "v",
    "p_x",
    "p_y",
    "p_z",
    "H",
    "star_tau",
    "K_e",
    "K_intrinsic",
    "abs_phi",
    "abs_psi",
    "n_1",
    "n_2",
    "n_3",
    "flags",
];

/// Threshold used for the classification flags.
pub const FLAG_TOL: f64 = 1e-7;

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// One row per node in grid order; missing quantities are empty cells.
pub fn rows(grid: &SampleGrid) -> Vec<Vec<String>> {
    grid.nodes
        .iter()
        .enumerate()
        .map(|(k, node)| {
            let mut r = vec![num(node.uv[0]), num(node.uv[1])];
            let Some(d) = node.data() else {
                r.extend(std::iter::repeat_n(String::new(), 12));
                r.push("invalid".into());
                return r;
            };
            let s = &d.sample;
            r.extend(s.p.iter().map(|x| num(*x)));
            r.push(num(d.ext.h));
            r.push(num(d.ext.star_tau));
            r.push(num(d.ext.k_e));
            r.push(opt(s.curvature.map(|c| c.k)));
            r.push(opt(d.lambda.map(|_| holo::phi(&d.ext).norm())));
            r.push(opt(d.lambda.map(|_| holo::psi(&d.ext).norm())));
            for i in 0..3 {
                r.push(opt(d.gauss.map(|g| g.n[i])));
            }
            let c = d.ext.classify(FLAG_TOL);
            let flags: Vec<&str> = [
                (c.umbilic, "umbilic"),
                (c.minimal_point, "minimal"),
                (c.geodesic_point, "geodesic"),
                (grid.interior[k], "interior"),
            ]
                .into_iter()
                .filter_map(|(on, f)| on.then_some(f))
                .collect();
            r.push(flags.join(";"));
            r
        })
        .collect()
}

pub fn write_fields<W: Write>(grid: &SampleGrid, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let err = |e: csv::Error| LabError::io("field table", e);
    w.write_record(COLUMNS).map_err(err)?;
    for r in rows(grid) {
        w.write_record(&r).map_err(err)?;
    }
    w.flush().map_err(|e| LabError::io("field table", e))
}

pub fn export_fields(grid: &SampleGrid, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let f = std::fs::File::create(path).map_err(|e| LabError::io(path.display(), e))?;
    write_fields(grid, std::io::BufWriter::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin_default;
    use crate::grid::{Layout, SampleGrid};

    #[test]
    fn header_and_rows() {
        let c = builtin_default("euclidean_plane").unwrap().compile().unwrap();
        let g = SampleGrid::build(&c, [8, 8], Layout::Uniform).unwrap();
        let mut buf = Vec::new();
        write_fields(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 65);
        assert!(lines[0].starts_with("u,v,p_x"));
        assert!(!text.contains('\r'));
        assert!(lines[1].ends_with(",umbilic;minimal;geodesic"));
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, -1.0 / 3.0, 6.02e23, 5e-324, 0.0] {
            assert_eq!(num(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }
}
