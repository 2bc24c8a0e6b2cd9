//! Locale-independent text output: CSV tables and legacy ASCII VTK files.
//!
//! Every float is written in C `%.8e` style (nine significant digits,
//! signed two-digit exponent), so identical inputs give identical bytes.

use std::io::{self, Write};

use crate::Vec3;

/// `v` formatted like C's `%.8e`.
pub fn sci(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let s = format!("{v:.8e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Writes a header row and rows of numbers.
pub fn write_csv<W: Write>(out: &mut W, header: &[&str], rows: &[Vec<f64>]) -> io::Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| sci(*v)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Legacy ASCII `STRUCTURED_GRID` with a `VECTORS w float` point attribute.
/// Points are ordered with `x` fastest, then `y`, then `z`.
pub fn write_vtk_structured_grid<W: Write>(
    out: &mut W,
    title: &str,
    dims: [usize; 3],
    points: &[Vec3],
    vectors: &[Vec3],
) -> io::Result<()> {
    writeln!(out, "# vtk DataFile Version 2.0")?;
    writeln!(out, "{}", title.lines().next().unwrap_or(""))?;
    writeln!(out, "ASCII")?;
    writeln!(out, "DATASET STRUCTURED_GRID")?;
    writeln!(out, "DIMENSIONS {} {} {}", dims[0], dims[1], dims[2])?;
    write_points(out, points)?;
    write_vectors(out, vectors)
}

/// Legacy ASCII `POLYDATA` made of quads, with a `VECTORS w float` attribute.
pub fn write_vtk_polydata<W: Write>(
    out: &mut W,
    title: &str,
    points: &[Vec3],
    quads: &[[usize; 4]],
    vectors: &[Vec3],
) -> io::Result<()> {
    writeln!(out, "# vtk DataFile Version 2.0")?;
    writeln!(out, "{}", title.lines().next().unwrap_or(""))?;
    writeln!(out, "ASCII")?;
    writeln!(out, "DATASET POLYDATA")?;
    write_points(out, points)?;
    writeln!(out, "POLYGONS {} {}", quads.len(), quads.len() * 5)?;
    for q in quads {
        writeln!(out, "4 {} {} {} {}", q[0], q[1], q[2], q[3])?;
    }
    write_vectors(out, vectors)
}

fn write_points<W: Write>(out: &mut W, points: &[Vec3]) -> io::Result<()> {
    writeln!(out, "POINTS {} float", points.len())?;
    for p in points {
        writeln!(out, "{} {} {}", sci(p.x), sci(p.y), sci(p.z))?;
    }
    Ok(())
}

fn write_vectors<W: Write>(out: &mut W, vectors: &[Vec3]) -> io::Result<()> {
    writeln!(out, "POINT_DATA {}", vectors.len())?;
    writeln!(out, "VECTORS w float")?;
    for v in vectors {
        writeln!(out, "{} {} {}", sci(v.x), sci(v.y), sci(v.z))?;
    }
    Ok(())
}
