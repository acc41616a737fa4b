//! CSV and OBJ serialization of sampled geometry.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geom::{Curve2, PointCloud3};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshFormat {
    Csv,
    Obj,
}

impl MeshFormat {
    pub fn extension(self) -> &'static str {
        match self {
            MeshFormat::Csv => "csv",
            MeshFormat::Obj => "obj",
        }
    }
}

impl FromStr for MeshFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(MeshFormat::Csv),
            "obj" => Ok(MeshFormat::Obj),
            other => Err(Error::Parse(format!("unknown mesh format '{other}'"))),
        }
    }
}

/// Anything that can be written by [`emit_mesh`].
pub trait Geometry {
    fn axes(&self) -> Vec<String>;
    fn rows(&self) -> Vec<Vec<f64>>;
    fn write_obj_records(&self, out: &mut String);
}

impl Geometry for PointCloud3 {
    fn axes(&self) -> Vec<String> {
        if self.meta.axes.len() == 3 {
            self.meta.axes.clone()
        } else {
            vec!["x".into(), "y".into(), "z".into()]
        }
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| p.to_vec()).collect()
    }

    fn write_obj_records(&self, out: &mut String) {
        for [x, y, z] in &self.points {
            let _ = writeln!(out, "v {} {} {}", num(*x), num(*y), num(*z));
        }
        for f in &self.faces {
            let _ = writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1);
        }
    }
}

impl Geometry for Curve2 {
    fn axes(&self) -> Vec<String> {
        if self.meta.axes.len() == 2 {
            self.meta.axes.clone()
        } else {
            vec!["x".into(), "y".into()]
        }
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| p.to_vec()).collect()
    }

    fn write_obj_records(&self, out: &mut String) {
        for [x, y] in &self.points {
            let _ = writeln!(out, "v {} {} 0", num(*x), num(*y));
        }
        out.push('l');
        for k in 1..=self.points.len() {
            let _ = write!(out, " {k}");
        }
        if self.closed {
            out.push_str(" 1");
        }
        out.push('\n');
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn emit_mesh(geometry: &impl Geometry, format: MeshFormat) -> Result<Vec<u8>> {
    let rows = geometry.rows();
    if rows.is_empty() {
        return Err(Error::EmptyGeometry);
    }
    let mut out = String::new();
    match format {
        MeshFormat::Csv => {
            out.push_str(&geometry.axes().join(","));
            out.push('\n');
            for row in rows {
                let cells: Vec<String> = row.into_iter().map(num).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
        MeshFormat::Obj => geometry.write_obj_records(&mut out),
    }
    Ok(out.into_bytes())
}

/// Reads a CSV produced by [`emit_mesh`]: header names and numeric rows.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Parse("empty csv".into()))?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("row {}: {e}", n + 1)))?;
        if row.len() != header.len() {
            return Err(Error::Parse(format!(
                "row {} has {} fields, expected {}",
                n + 1,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

pub fn bubble_file_name(resolution: usize, format: MeshFormat) -> String {
    format!("bubble_r{resolution:03}.{}", format.extension())
}

pub fn tetra_file_name(b4: f64, resolution: usize, format: MeshFormat) -> String {
    format!("tetra_b4_{b4}_r{resolution:03}.{}", format.extension())
}

pub fn circle_file_name(b1: f64, b2: f64, b3: f64, b4: f64, format: MeshFormat) -> String {
    format!(
        "circle_b1_{b1}_b2_{b2}_b3_{b3}_b4_{b4}.{}",
        format.extension()
    )
}
