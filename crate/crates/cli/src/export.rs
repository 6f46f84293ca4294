use std::fmt::Write as _;
use std::path::Path;

use dpg_core::assembly::SolutionLayout;
use dpg_core::fem::LocalBasis;
use dpg_core::mesh::MeshPair;

use crate::{CliError, ErrorReport};

pub const CSV_HEADER: &str = "level,H,ndof,l2_error,eta,efficiency,iterations,seconds";

pub fn csv_string(report: &ErrorReport) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in &report.rows {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.level, r.h, r.ndof, r.l2_error, r.eta, r.efficiency, r.iterations, r.seconds
        )
        .unwrap();
    }
    s
}

pub fn export_csv(report: &ErrorReport, path: &Path) -> Result<(), CliError> {
    write_file(path, &csv_string(report))
}

/// Legacy ASCII VTK of the coarse mesh. Every cell gets its own three
/// points so the broken `phi` can be sampled per cell; `theta` is
/// continuous and takes the same value on coinciding points.
pub fn vtk_string(
    phi: &[f64],
    theta: &[f64],
    pair: &MeshPair,
    layout: &SolutionLayout,
) -> Result<String, CliError> {
    for (b, v) in [(0, phi), (1, theta)] {
        if v.len() != layout.map(b).n_dofs() {
            return Err(CliError::Core(dpg_core::DpgError::DimensionMismatch {
                expected: layout.map(b).n_dofs(),
                got: v.len(),
            }));
        }
    }
    let mesh = &pair.coarse;
    let nc = mesh.num_cells();
    let corners = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
    let sample = |block: usize, coeffs: &[f64]| -> Result<Vec<f64>, CliError> {
        let map = layout.map(block);
        let basis = LocalBasis::new(map.degree);
        let at_corners: Vec<Vec<f64>> = corners
            .iter()
            .map(|&c| basis.eval(c))
            .collect::<Result<_, _>>()?;
        let mut out = Vec::with_capacity(3 * nc);
        for k in 0..nc {
            for vals in &at_corners {
                out.push(
                    map.cell(k)
                        .iter()
                        .zip(vals)
                        .map(|(&g, v)| coeffs[g] * v)
                        .sum(),
                );
            }
        }
        Ok(out)
    };
    let phi_pts = sample(0, phi)?;
    let theta_pts = sample(1, theta)?;

    let mut s = String::new();
    s.push_str("# vtk DataFile Version 2.0\n");
    s.push_str("dpg transport solution\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    writeln!(s, "POINTS {} double", 3 * nc).unwrap();
    for k in 0..nc {
        for p in mesh.cell_vertices(k) {
            writeln!(s, "{} {} 0", p[0], p[1]).unwrap();
        }
    }
    writeln!(s, "CELLS {} {}", nc, 4 * nc).unwrap();
    for k in 0..nc {
        writeln!(s, "3 {} {} {}", 3 * k, 3 * k + 1, 3 * k + 2).unwrap();
    }
    writeln!(s, "CELL_TYPES {nc}").unwrap();
    for _ in 0..nc {
        s.push_str("5\n");
    }
    writeln!(s, "POINT_DATA {}", 3 * nc).unwrap();
    for (name, vals) in [("phi", &phi_pts), ("theta", &theta_pts)] {
        writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default").unwrap();
        for v in vals {
            writeln!(s, "{v}").unwrap();
        }
    }
    Ok(s)
}

pub fn export_vtk(
    phi: &[f64],
    theta: &[f64],
    pair: &MeshPair,
    layout: &SolutionLayout,
    path: &Path,
) -> Result<(), CliError> {
    write_file(path, &vtk_string(phi, theta, pair, layout)?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
