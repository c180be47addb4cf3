//! Legacy ASCII VTK `STRUCTURED_POINTS` writer for cell-centered fields.
//!
//! Cell centers are written as the structured points, so `DIMENSIONS` are the
//! cell counts and `ORIGIN` is the first cell center.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::field::ScalarField;

/// Writes one scalar array in `x`-fastest order.
pub fn write_structured_points<W: Write>(
    out: &mut W,
    title: &str,
    dims: [usize; 3],
    origin: [f64; 3],
    spacing: [f64; 3],
    name: &str,
    values: &[f64],
) -> io::Result<()> {
    assert_eq!(
        dims.iter().product::<usize>(),
        values.len(),
        "value count must match DIMENSIONS"
    );
    writeln!(out, "# vtk DataFile Version 3.0")?;
    writeln!(out, "{title}")?;
    writeln!(out, "ASCII")?;
    writeln!(out, "DATASET STRUCTURED_POINTS")?;
    writeln!(out, "DIMENSIONS {} {} {}", dims[0], dims[1], dims[2])?;
    writeln!(out, "ORIGIN {:?} {:?} {:?}", origin[0], origin[1], origin[2])?;
    writeln!(out, "SPACING {:?} {:?} {:?}", spacing[0], spacing[1], spacing[2])?;
    writeln!(out, "POINT_DATA {}", values.len())?;
    writeln!(out, "SCALARS {name} double 1")?;
    writeln!(out, "LOOKUP_TABLE default")?;
    for v in values {
        writeln!(out, "{v:?}")?;
    }
    Ok(())
}

/// Writes `phi` to `path` as a legacy VTK file with a scalar array `phi`.
pub fn write_vtk_snapshot(phi: &ScalarField, path: impl AsRef<Path>) -> io::Result<()> {
    let grid = phi.grid();
    let h = grid.spacing();
    let o = grid.origin();
    let origin = [0, 1, 2].map(|a| if a < grid.dim() { o[a] + 0.5 * h } else { 0.0 });
    let mut out = BufWriter::new(File::create(path)?);
    write_structured_points(&mut out, "phi", grid.cells(), origin, [h, h, h], "phi", phi.values())?;
    out.flush()
}
