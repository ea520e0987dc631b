//! File emission: legacy-VTK structured-points field dumps, flat CSV field
//! dumps, and per-step diagnostics CSV. All floating-point values are
//! written with 17 significant digits so text output round-trips exactly.

use crate::error::{GepupError, Result};
use crate::grid::{fill_ghosts_vector, CellField, VectorBc, VectorField};
use crate::ops::{div, vorticity};
use crate::stepper::StepDiagnostics;
use std::fmt::Write as _;
use std::path::Path;

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| GepupError::Io {
                path: dir.display().to_string(),
                source: e,
            })?;
        }
    }
    std::fs::write(path, contents).map_err(|e| GepupError::Io {
        path: path.display().to_string(),
        source: e,
    })
}

/// Derived cell fields dumped alongside U and W.
fn derived(u: &VectorField, w: &VectorField) -> (CellField, CellField) {
    let mut ug = u.clone();
    fill_ghosts_vector(&mut ug, &VectorBc::projected());
    let mut wg = w.clone();
    fill_ghosts_vector(&mut wg, &VectorBc::electric());
    (vorticity(&ug), div(&wg))
}

fn push_scalar_array(out: &mut String, name: &str, f: &CellField) {
    let g = &f.grid;
    let _ = writeln!(out, "SCALARS {name} double 1");
    let _ = writeln!(out, "LOOKUP_TABLE default");
    for j in 0..g.ny as isize {
        for i in 0..g.nx as isize {
            let _ = writeln!(out, "{:.17e}", f.get(i, j));
        }
    }
}

/// Legacy-VTK structured-points dump with cell data U, W, vorticity, D W.
pub fn write_vtk(path: &Path, t: f64, u: &VectorField, w: &VectorField) -> Result<()> {
    let g = u.grid();
    let (vort, divw) = derived(u, w);
    let mut out = String::new();
    let _ = writeln!(out, "# vtk DataFile Version 3.0");
    let _ = writeln!(out, "gepup fields t={t:.17e}");
    let _ = writeln!(out, "ASCII");
    let _ = writeln!(out, "DATASET STRUCTURED_POINTS");
    let _ = writeln!(out, "DIMENSIONS {} {} 1", g.nx + 1, g.ny + 1);
    let _ = writeln!(out, "ORIGIN {:.17e} {:.17e} 0", g.origin.0, g.origin.1);
    let _ = writeln!(out, "SPACING {0:.17e} {0:.17e} 1", g.h);
    let _ = writeln!(out, "CELL_DATA {}", g.nx * g.ny);
    let _ = writeln!(out, "VECTORS U double");
    for j in 0..g.ny as isize {
        for i in 0..g.nx as isize {
            let _ = writeln!(out, "{:.17e} {:.17e} 0", u.x.get(i, j), u.y.get(i, j));
        }
    }
    let _ = writeln!(out, "VECTORS W double");
    for j in 0..g.ny as isize {
        for i in 0..g.nx as isize {
            let _ = writeln!(out, "{:.17e} {:.17e} 0", w.x.get(i, j), w.y.get(i, j));
        }
    }
    push_scalar_array(&mut out, "vorticity", &vort);
    push_scalar_array(&mut out, "div_w", &divw);
    write_file(path, &out)
}

/// Flat CSV field dump: i, j, cell-center coordinates, then the values.
pub fn write_fields_csv(path: &Path, u: &VectorField, w: &VectorField) -> Result<()> {
    let g = u.grid();
    let (vort, divw) = derived(u, w);
    let mut out = String::from("i,j,x,y,ux,uy,wx,wy,vorticity,div_w\n");
    for j in 0..g.ny as isize {
        for i in 0..g.nx as isize {
            let (x, y) = g.cell_center(i, j);
            let _ = writeln!(
                out,
                "{i},{j},{x:.17e},{y:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                u.x.get(i, j),
                u.y.get(i, j),
                w.x.get(i, j),
                w.y.get(i, j),
                vort.get(i, j),
                divw.get(i, j),
            );
        }
    }
    write_file(path, &out)
}

pub const DIAGNOSTICS_HEADER: &str =
    "t,E_h,sav_dev,div_l1,div_l2,div_linf,wall_normal_max,kinetic";

pub fn diagnostics_to_csv(series: &[StepDiagnostics]) -> String {
    let mut out = String::from(DIAGNOSTICS_HEADER);
    out.push('\n');
    for d in series {
        let _ = writeln!(
            out,
            "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            d.t,
            d.energy,
            d.r - 1.0,
            d.div_w_l1,
            d.div_w_l2,
            d.div_w_linf,
            d.wall_normal_w_max,
            d.kinetic,
        );
    }
    out
}

pub fn write_diagnostics_csv(path: &Path, series: &[StepDiagnostics]) -> Result<()> {
    write_file(path, &diagnostics_to_csv(series))
}

/// Inverse of diagnostics_to_csv (step indices are regenerated).
pub fn parse_diagnostics_csv(text: &str) -> Result<Vec<StepDiagnostics>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == DIAGNOSTICS_HEADER => {}
        other => {
            return Err(GepupError::Config(format!(
                "bad diagnostics header: {other:?}"
            )))
        }
    }
    let mut out = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| GepupError::Config(format!("diagnostics line {}: {e}", n + 2)))?;
        if vals.len() != 8 {
            return Err(GepupError::Config(format!(
                "diagnostics line {}: expected 8 fields, got {}",
                n + 2,
                vals.len()
            )));
        }
        out.push(StepDiagnostics {
            step: n,
            t: vals[0],
            energy: vals[1],
            r: vals[2] + 1.0,
            div_w_l1: vals[3],
            div_w_l2: vals[4],
            div_w_linf: vals[5],
            wall_normal_w_max: vals[6],
            kinetic: vals[7],
        });
    }
    Ok(out)
}
