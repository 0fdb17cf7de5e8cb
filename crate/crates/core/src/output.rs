//! Flat-file outputs: grid and eigenvalue CSVs, PPM heatmaps and `.meta`
//! sidecars. Floats are written with Rust's shortest round-trip formatting,
//! so parsing a written value gives back the same `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hamiltonian::{ModelParams, C64};
use crate::sweep::{Axis, Grid, Metric};

pub const GRID_HEADER: &str = "delta_over_omega,g_over_omega,n_atoms,metric,value";
pub const CURVE_HEADER: &str = "x,re_energy_over_omega,im_energy_over_omega,branch,active";

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::config("out", format!("`{}` is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let located = |e: std::io::Error| Error::config(path.display().to_string(), e.to_string());
    fs::write(&tmp, bytes).map_err(located)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        located(e)
    })
}

/// `path` with `ext` appended to its full file name (`a.csv` → `a.csv.meta`).
pub fn sidecar(path: &Path, ext: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// One line per cell in storage order. The first two columns hold the x and
/// y axis values whatever parameters the axes scan.
pub fn grid_csv(grid: &Grid) -> String {
    let mut s = String::with_capacity(grid.values.len() * 48);
    s.push_str(GRID_HEADER);
    s.push('\n');
    for iy in 0..grid.y.count {
        let y = grid.y.value(iy);
        for ix in 0..grid.x.count {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                grid.x.value(ix),
                y,
                grid.n_atoms,
                grid.metric,
                grid.get(ix, iy)
            );
        }
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridRow {
    pub x: f64,
    pub y: f64,
    pub n_atoms: usize,
    pub metric: Metric,
    pub value: f64,
}

pub fn parse_grid_csv(text: &str) -> Result<Vec<GridRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == GRID_HEADER => {}
        _ => return Err(Error::config("line 1", format!("expected header `{GRID_HEADER}`"))),
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, line)| {
            let bad = |what: &str| Error::config(format!("line {}", i + 1), format!("bad {what} in `{line}`"));
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 5 {
                return Err(bad("column count"));
            }
            let float = |s: &str, what: &str| f64::from_str(s).map_err(|_| bad(what));
            Ok(GridRow {
                x: float(cols[0], "x value")?,
                y: float(cols[1], "y value")?,
                n_atoms: cols[2].parse().map_err(|_| bad("atom count"))?,
                metric: Metric::from_str(cols[3]).map_err(|_| bad("metric"))?,
                value: float(cols[4], "value")?,
            })
        })
        .collect()
}

pub fn read_grid_csv(path: &Path) -> Result<Vec<GridRow>> {
    parse_grid_csv(&fs::read_to_string(path)?)
}

/// Linear blue (0) to red (`full`) ramp, clamped at both ends.
fn colour(value: f64, full: f64) -> [u8; 3] {
    let t = if full > 0.0 {
        (value / full).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let t = if t.is_nan() { 0.0 } else { t };
    [(255.0 * t).round() as u8, 0, (255.0 * (1.0 - t)).round() as u8]
}

/// Binary P6 pixmap, one pixel per cell, largest y on the top row.
/// Populations saturate at 0.5; other metrics at the grid maximum.
pub fn heatmap_ppm(grid: &Grid) -> Vec<u8> {
    let full = match grid.metric {
        Metric::RhoExc1 | Metric::RhoExc2 => 0.5,
        Metric::MinAbsRealEnergy => grid.values.iter().copied().fold(0.0, f64::max),
    };
    let mut out = format!("P6\n{} {}\n255\n", grid.x.count, grid.y.count).into_bytes();
    for iy in (0..grid.y.count).rev() {
        for &v in grid.row(iy) {
            out.extend_from_slice(&colour(v, full));
        }
    }
    out
}

/// One dressed state at one abscissa of an eigenvalue curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    /// In units of Ω.
    pub energy: C64,
    /// Position in the energy-sorted spectrum at this `x`.
    pub branch: usize,
    pub active: bool,
}

pub fn curves_csv(points: &[CurvePoint]) -> String {
    let mut s = String::from(CURVE_HEADER);
    s.push('\n');
    for p in points {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            p.x,
            p.energy.re,
            p.energy.im,
            p.branch,
            u8::from(p.active)
        );
    }
    s
}

/// Ordered `key = value` metadata.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Meta {
    entries: Vec<(String, String)>,
}

impl Meta {
    pub fn new() -> Self {
        let mut m = Meta::default();
        m.push("tool", env!("CARGO_PKG_NAME"));
        m.push("version", env!("CARGO_PKG_VERSION"));
        m
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn params(&mut self, p: &ModelParams) -> &mut Self {
        let w = p.omega;
        self.push("g_ac_over_omega", p.g_ac / w)
            .push("g_bd_over_omega", p.g_bd / w)
            .push("delta_over_omega", p.delta / w)
            .push("delta_omega_over_omega", p.delta_omega / w)
            .push("gamma_c_over_omega", p.gamma_c / w)
            .push("gamma_d_over_omega", p.gamma_d / w)
            .push("gamma_cav_over_omega", p.gamma_cav / w)
            .push("beta_over_omega", p.beta / w)
            .push("drive_offset_over_omega", p.drive_offset / w)
    }

    pub fn axis(&mut self, name: &str, axis: &Axis) -> &mut Self {
        self.push(&format!("{name}_param"), axis.param)
            .push(&format!("{name}_start"), axis.start)
            .push(&format!("{name}_stop"), axis.stop)
            .push(&format!("{name}_count"), axis.count)
    }

    pub fn grid(&mut self, grid: &Grid) -> &mut Self {
        self.push("n_atoms", grid.n_atoms)
            .push("metric", grid.metric)
            .params(&grid.params)
            .axis("x", &grid.x)
            .axis("y", &grid.y)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

/// Grid CSV at `path`, its `.meta` sidecar and, optionally, a `.ppm` heatmap
/// next to it. Returns the files written.
pub fn write_grid(path: &Path, grid: &Grid, meta: &Meta, heatmap: bool) -> Result<Vec<PathBuf>> {
    write_atomic(path, grid_csv(grid).as_bytes())?;
    let meta_path = sidecar(path, "meta");
    write_atomic(&meta_path, meta.render().as_bytes())?;
    let mut files = vec![path.to_path_buf(), meta_path];
    if heatmap {
        let ppm = path.with_extension("ppm");
        write_atomic(&ppm, &heatmap_ppm(grid))?;
        files.push(ppm);
    }
    Ok(files)
}

pub fn write_curves(path: &Path, points: &[CurvePoint], meta: &Meta) -> Result<Vec<PathBuf>> {
    write_atomic(path, curves_csv(points).as_bytes())?;
    let meta_path = sidecar(path, "meta");
    write_atomic(&meta_path, meta.render().as_bytes())?;
    Ok(vec![path.to_path_buf(), meta_path])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::AxisParam;

    fn grid() -> Grid {
        Grid {
            x: Axis::new(AxisParam::DeltaOverOmega, -1.0, 1.0, 3).unwrap(),
            y: Axis::new(AxisParam::GOverOmega, 0.1, 0.2, 2).unwrap(),
            n_atoms: 2,
            metric: Metric::RhoExc2,
            values: vec![0.0, 0.1, 0.2, 0.3, 0.5, 0.7],
            params: ModelParams::ideal(),
        }
    }

    #[test]
    fn csv_layout() {
        let text = grid_csv(&grid());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "delta_over_omega,g_over_omega,n_atoms,metric,value");
        assert_eq!(lines[1], "-1,0.1,2,rho_exc_2,0");
        assert_eq!(lines[5], "0,0.2,2,rho_exc_2,0.5");
        assert_eq!(lines.len(), 7);
    }

    #[test]
    fn csv_round_trips_values() {
        let mut g = grid();
        g.values = vec![0.1 + 0.2, 1.0 / 3.0, 2f64.sqrt() / 7.0, 1e-17, 0.49999999999999994, 0.0];
        let rows = parse_grid_csv(&grid_csv(&g)).unwrap();
        for (row, v) in rows.iter().zip(&g.values) {
            assert_eq!(row.value.to_bits(), v.to_bits());
        }
        assert_eq!(rows[4].x, 0.0);
        assert_eq!(rows[4].y, 0.2);
    }

    #[test]
    fn csv_reader_rejects_garbage() {
        assert!(parse_grid_csv("x,y\n").is_err());
        let text = format!("{GRID_HEADER}\n1,2,3,rho_exc_2\n");
        assert!(parse_grid_csv(&text).is_err());
        let text = format!("{GRID_HEADER}\n1,2,3,rho_exc_9,0\n");
        assert!(parse_grid_csv(&text).is_err());
    }

    #[test]
    fn heatmap_orientation_and_colours() {
        let ppm = heatmap_ppm(&grid());
        let header = b"P6\n3 2\n255\n";
        assert_eq!(&ppm[..header.len()], header);
        let px = &ppm[header.len()..];
        assert_eq!(px.len(), 18);
        // top row is y = 0.2: values 0.3, 0.5, 0.7 (clamped)
        assert_eq!(&px[0..3], &[153, 0, 102]);
        assert_eq!(&px[3..6], &[255, 0, 0]);
        assert_eq!(&px[6..9], &[255, 0, 0]);
        // bottom row starts at 0.0: pure blue
        assert_eq!(&px[9..12], &[0, 0, 255]);
    }

    #[test]
    fn curve_csv_layout() {
        let pts = [CurvePoint {
            x: 0.5,
            energy: C64::new(-1.25, -0.05),
            branch: 2,
            active: true,
        }];
        assert_eq!(curves_csv(&pts), format!("{CURVE_HEADER}\n0.5,-1.25,-0.05,2,1\n"));
    }

    #[test]
    fn writes_are_atomic_and_complete() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.csv");
        let mut meta = Meta::new();
        meta.grid(&grid());
        let files = write_grid(&path, &grid(), &meta, true).unwrap();
        assert_eq!(files.len(), 3);
        assert_eq!(read_grid_csv(&path).unwrap().len(), 6);
        let m = fs::read_to_string(dir.path().join("g.csv.meta")).unwrap();
        assert!(m.contains("version = 0.1.0"));
        assert!(m.contains("x_param = delta_over_omega"));
        assert!(m.contains("gamma_cav_over_omega = 0.01"));
        assert!(dir.path().join("g.ppm").exists());
        let leftovers = fs::read_dir(dir.path())
            .unwrap()
            .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().ends_with(".tmp"))
            .count();
        assert_eq!(leftovers, 0);
        assert!(write_atomic(&dir.path().join("missing/x.csv"), b"x").is_err());
    }
}
