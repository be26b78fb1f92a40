//! Dense sampling on rectilinear grids and file output.
//!
//! Arrays are stored x-fastest: the sample at grid index `(i, j, k)` lives at
//! `i + nx * (j + ny * k)`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::Solution;
use crate::helmholtz::HorizontalMode;
use crate::model::{PhysicalParams, ValidatedSpec};
use crate::verify::VerificationReport;

pub const CSV_HEADER: &str = "x,y,z,p,u,v,p_z";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub z: [f64; 2],
    #[serde(default)]
    pub t: f64,
}

impl GridSpec {
    pub fn check(&self, phys: &PhysicalParams) -> Result<()> {
        for (axis, n) in [("nx", self.nx), ("ny", self.ny), ("nz", self.nz)] {
            if n < 2 {
                return Err(Error::BadParameter(format!("grid {axis} must be at least 2, got {n}")));
            }
        }
        for (axis, [lo, hi]) in [("x", self.x), ("y", self.y), ("z", self.z)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::BadParameter(format!("grid {axis} range [{lo}, {hi}] is empty or not finite")));
            }
        }
        if !self.t.is_finite() {
            return Err(Error::BadParameter(format!("grid time must be finite, got {}", self.t)));
        }
        phys.check_depth(self.z[0])?;
        phys.check_depth(self.z[1])?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.nx * (j + self.ny * k)
    }

    /// Inverse of [`GridSpec::index`].
    pub fn unindex(&self, index: usize) -> (usize, usize, usize) {
        (index % self.nx, (index / self.nx) % self.ny, index / (self.nx * self.ny))
    }

    pub fn xs(&self) -> Vec<f64> {
        axis(self.x, self.nx)
    }

    pub fn ys(&self) -> Vec<f64> {
        axis(self.y, self.ny)
    }

    pub fn zs(&self) -> Vec<f64> {
        axis(self.z, self.nz)
    }
}

/// `n` evenly spaced points with both ends hit exactly.
fn axis([lo, hi]: [f64; 2], n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { (lo + (hi - lo) * (i as f64 / last)).min(hi) })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub spec: ValidatedSpec,
    pub mode: HorizontalMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldBlock {
    pub grid: GridSpec,
    /// Axis coordinates; the fields below are flattened in grid order.
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub p: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub p_z: Vec<f64>,
    pub provenance: Provenance,
}

/// Minimum and maximum of one sampled variable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Extrema {
    pub min: f64,
    pub max: f64,
}

impl FieldBlock {
    /// Coordinates of the flattened point `index`.
    pub fn point(&self, index: usize) -> [f64; 3] {
        let (i, j, k) = self.grid.unindex(index);
        [self.x[i], self.y[j], self.z[k]]
    }

    pub fn variables(&self) -> [(&'static str, &[f64]); 4] {
        [("p", &self.p), ("u", &self.u), ("v", &self.v), ("p_z", &self.p_z)]
    }

    pub fn extrema(&self) -> Vec<(&'static str, Extrema)> {
        self.variables()
            .into_iter()
            .map(|(name, values)| {
                let min = values.iter().copied().fold(f64::INFINITY, f64::min);
                let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (name, Extrema { min, max })
            })
            .collect()
    }
}

pub fn sample_grid(solution: &Solution, grid: &GridSpec) -> Result<FieldBlock> {
    sample_grid_with_seed(solution, grid, None)
}

pub fn sample_grid_with_seed(solution: &Solution, grid: &GridSpec, seed: Option<u64>) -> Result<FieldBlock> {
    grid.check(solution.phys())?;
    let (xs, ys, zs) = (grid.xs(), grid.ys(), grid.zs());
    let slices: Vec<[Vec<f64>; 4]> = zs
        .par_iter()
        .map(|&z| {
            let mut out: [Vec<f64>; 4] = Default::default();
            for &y in &ys {
                for &x in &xs {
                    let s = solution.eval(grid.t, x, y, z)?;
                    out[0].push(s.p);
                    out[1].push(s.u);
                    out[2].push(s.v);
                    out[3].push(s.p_z);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let n = grid.len();
    let mut fields: [Vec<f64>; 4] = std::array::from_fn(|_| Vec::with_capacity(n));
    for slice in slices {
        for (dst, src) in fields.iter_mut().zip(slice) {
            dst.extend(src);
        }
    }
    let [p, u, v, p_z] = fields;
    Ok(FieldBlock {
        grid: *grid,
        x: xs,
        y: ys,
        z: zs,
        p,
        u,
        v,
        p_z,
        provenance: Provenance { spec: *solution.spec(), mode: solution.mode().clone(), seed },
    })
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(io_error(path))
}

/// 17 significant digits, enough to round-trip any `f64`.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn export_csv(block: &FieldBlock, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = create(path)?;
    let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        let g = &block.grid;
        for index in 0..g.len() {
            let (i, j, k) = g.unindex(index);
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                num(block.x[i]),
                num(block.y[j]),
                num(block.z[k]),
                num(block.p[index]),
                num(block.u[index]),
                num(block.v[index]),
                num(block.p_z[index])
            )?;
        }
        out.flush()
    };
    write(&mut out).map_err(io_error(path))
}

/// Rows of a file written by [`export_csv`], as `[x, y, z, p, u, v, p_z]`.
pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<[f64; 7]>> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path).map_err(io_error(path))?);
    let mut rows = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(io_error(path))?;
        if lineno == 0 {
            if line != CSV_HEADER {
                return Err(Error::BadParameter(format!("{}: unexpected header {line:?}", path.display())));
            }
            continue;
        }
        let mut row = [0.0; 7];
        let mut fields = line.split(',');
        for slot in row.iter_mut() {
            let field = fields.next().ok_or_else(|| {
                Error::BadParameter(format!("{}:{}: expected 7 columns", path.display(), lineno + 1))
            })?;
            *slot = field.parse().map_err(|e| {
                Error::BadParameter(format!("{}:{}: bad number {field:?}: {e}", path.display(), lineno + 1))
            })?;
        }
        if fields.next().is_some() {
            return Err(Error::BadParameter(format!("{}:{}: expected 7 columns", path.display(), lineno + 1)));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Legacy ASCII VTK rectilinear grid with point scalars `p`, `p_z` and the
/// horizontal velocity as a 3-vector `(u, v, 0)`.
pub fn export_vtk(block: &FieldBlock, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = create(path)?;
    let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
        let g = &block.grid;
        let n = g.len();
        writeln!(out, "# vtk DataFile Version 3.0")?;
        writeln!(out, "drifting Rossby solution, family {}, t = {}", block.provenance.spec.family(), num(g.t))?;
        writeln!(out, "ASCII")?;
        writeln!(out, "DATASET RECTILINEAR_GRID")?;
        writeln!(out, "DIMENSIONS {} {} {}", g.nx, g.ny, g.nz)?;
        for (name, coords) in [("X", &block.x), ("Y", &block.y), ("Z", &block.z)] {
            writeln!(out, "{name}_COORDINATES {} double", coords.len())?;
            write_values(out, coords)?;
        }
        writeln!(out, "POINT_DATA {n}")?;
        for (name, values) in [("p", &block.p), ("p_z", &block.p_z)] {
            writeln!(out, "SCALARS {name} double 1")?;
            writeln!(out, "LOOKUP_TABLE default")?;
            write_values(out, values)?;
        }
        writeln!(out, "VECTORS velocity double")?;
        for (u, v) in block.u.iter().zip(&block.v) {
            writeln!(out, "{} {} {}", num(*u), num(*v), num(0.0))?;
        }
        out.flush()
    };
    write(&mut out).map_err(io_error(path))
}

fn write_values(out: &mut impl Write, values: &[f64]) -> std::io::Result<()> {
    for chunk in values.chunks(6) {
        let line: Vec<String> = chunk.iter().map(|v| num(*v)).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn write_report(report: &VerificationReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(report).expect("reports always serialise");
    std::fs::write(path, text + "\n").map_err(io_error(path))
}
