//! File formats written by scenario runs: error tables, field dumps and PGM
//! rasters.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::cochain::{Cochain, Degree};
use crate::error::{Error, Result};
use crate::fv::SchemeKind;
use crate::grid::GridComplex2D;

pub const ERRORS_HEADER: [&str; 5] = ["resolution", "scheme", "l1", "l2", "runtime_ms"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorRecord {
    pub resolution: usize,
    pub scheme: SchemeKind,
    pub l1: f64,
    pub l2: f64,
    pub runtime_ms: f64,
}

pub fn write_errors_csv(path: &Path, records: &[ErrorRecord]) -> Result<()> {
    let io_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::io(path, e),
        other => Error::Parse {
            path: path.to_path_buf(),
            reason: format!("{other:?}"),
        },
    };
    let mut w = csv::Writer::from_path(path).map_err(io_err)?;
    w.write_record(ERRORS_HEADER).map_err(io_err)?;
    for r in records {
        w.write_record([
            r.resolution.to_string(),
            r.scheme.name().to_string(),
            format!("{:.16e}", r.l1),
            format!("{:.16e}", r.l2),
            format!("{:.3}", r.runtime_ms),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_errors_csv(path: &Path) -> Result<Vec<ErrorRecord>> {
    let parse_err = |reason: String| Error::Parse {
        path: path.to_path_buf(),
        reason,
    };
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let header = rdr.headers().map_err(|e| parse_err(e.to_string()))?.clone();
    if header.iter().ne(ERRORS_HEADER) {
        return Err(parse_err(format!(
            "header {:?}, expected {}",
            header.iter().collect::<Vec<_>>(),
            ERRORS_HEADER.join(",")
        )));
    }
    let mut out = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| parse_err(e.to_string()))?;
        let field = |k: usize| row.get(k).unwrap_or("");
        let real = |k: usize| -> Result<f64> {
            let v: f64 = field(k)
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("row {}: bad {} {:?}", line + 1, ERRORS_HEADER[k], field(k))))?;
            if v.is_nan() || v < 0.0 {
                return Err(parse_err(format!("row {}: {} must be >= 0", line + 1, ERRORS_HEADER[k])));
            }
            Ok(v)
        };
        let resolution = field(0)
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("row {}: bad resolution {:?}", line + 1, field(0))))?;
        let scheme = field(1)
            .trim()
            .parse()
            .map_err(|e: Error| parse_err(format!("row {}: {e}", line + 1)))?;
        out.push(ErrorRecord {
            resolution,
            scheme,
            l1: real(2)?,
            l2: real(3)?,
            runtime_ms: real(4)?,
        });
    }
    Ok(out)
}

/// Text dump: `degree=K nx=NX ny=NY h=H`, then one value per line in canonical
/// order. Values use the shortest round-trip representation.
pub fn format_field(w: &Cochain, grid: &GridComplex2D) -> String {
    let mut s = format!("degree={} nx={} ny={} h={}\n", w.degree(), grid.nx(), grid.ny(), grid.h());
    for v in w.values() {
        s.push_str(&format!("{v}\n"));
    }
    s
}

pub fn write_field(path: &Path, w: &Cochain, grid: &GridComplex2D) -> Result<()> {
    fs::write(path, format_field(w, grid)).map_err(|e| Error::io(path, e))
}

pub fn parse_field(text: &str) -> std::result::Result<(GridComplex2D, Cochain), String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty dump")?;
    let (mut degree, mut nx, mut ny, mut h) = (None, None, None, None);
    for tok in header.split_whitespace() {
        let (key, val) = tok.split_once('=').ok_or_else(|| format!("bad header token {tok:?}"))?;
        match key {
            "degree" => {
                degree = Some(match val {
                    "empty" => Degree::Empty,
                    k => Degree::from_k(k.parse().map_err(|_| format!("bad degree {k:?}"))?)
                        .map_err(|e| e.to_string())?,
                })
            }
            "nx" => nx = Some(val.parse::<usize>().map_err(|_| format!("bad nx {val:?}"))?),
            "ny" => ny = Some(val.parse::<usize>().map_err(|_| format!("bad ny {val:?}"))?),
            "h" => h = Some(val.parse::<f64>().map_err(|_| format!("bad h {val:?}"))?),
            _ => return Err(format!("unknown header key {key:?}")),
        }
    }
    let (Some(degree), Some(nx), Some(ny), Some(h)) = (degree, nx, ny, h) else {
        return Err("header must set degree, nx, ny and h".into());
    };
    let grid = GridComplex2D::new(nx, ny, h).map_err(|e| e.to_string())?;
    let values = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.trim().parse::<f64>().map_err(|_| format!("bad value {l:?}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let w = Cochain::from_values(degree, &grid, values).map_err(|e| e.to_string())?;
    Ok((grid, w))
}

pub fn read_field(path: &Path) -> Result<(GridComplex2D, Cochain)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_field(&text).map_err(|reason| Error::Parse {
        path: path.to_path_buf(),
        reason,
    })
}

/// 8-bit grayscale image, one pixel per 2-cell, first row at the top (largest `j`).
#[derive(Clone, Debug, PartialEq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
    pub min: f64,
    pub max: f64,
}

impl Raster {
    /// True when all magnitudes were equal and the image is uniformly black.
    pub fn is_degenerate(&self) -> bool {
        self.max.partial_cmp(&self.min) != Some(std::cmp::Ordering::Greater)
    }

    pub fn pixel(&self, i: usize, j: usize) -> u8 {
        self.pixels[(self.height - 1 - j) * self.width + i]
    }

    pub fn sidecar(&self) -> String {
        let mut s = format!("min={}\nmax={}\n", self.min, self.max);
        if self.is_degenerate() {
            s.push_str("degenerate range: all cells equal, image left black\n");
        }
        s
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    /// Writes `path` and `path.txt` with the normalization range.
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(&self.to_pgm()).map_err(|e| Error::io(path, e))?;
        let mut side = path.as_os_str().to_owned();
        side.push(".txt");
        let side = Path::new(&side);
        fs::write(side, self.sidecar()).map_err(|e| Error::io(side, e))
    }
}

/// Per-cell magnitude of `w`: `|v|` for a 2-form, the RMS of the four bounding
/// edges for a 1-form, the mean `|v|` of the four corners for a 0-form.
pub fn cell_magnitudes(w: &Cochain, grid: &GridComplex2D) -> Vec<f64> {
    let (nx, ny) = (grid.nx() as isize, grid.ny() as isize);
    let mut out = Vec::with_capacity(grid.plane_len());
    for j in 0..ny {
        for i in 0..nx {
            let m = match w.degree() {
                Degree::Two => w.at(i, j).abs(),
                Degree::One => {
                    let e = [w.x(i, j), w.x(i, j + 1), w.y(i, j), w.y(i + 1, j)];
                    (e.iter().map(|v| v * v).sum::<f64>() / 4.0).sqrt()
                }
                Degree::Zero => {
                    let c = [w.at(i, j), w.at(i + 1, j), w.at(i, j + 1), w.at(i + 1, j + 1)];
                    c.iter().map(|v| v.abs()).sum::<f64>() / 4.0
                }
                Degree::Empty => 0.0,
            };
            out.push(m);
        }
    }
    out
}

pub fn render_field(w: &Cochain, grid: &GridComplex2D) -> Raster {
    let (nx, ny) = (grid.nx(), grid.ny());
    let mags = cell_magnitudes(w, grid);
    let finite = mags.iter().copied().filter(|v| v.is_finite());
    let min = finite.clone().fold(f64::INFINITY, f64::min);
    let max = finite.fold(f64::NEG_INFINITY, f64::max);
    let (min, max) = if min.is_finite() { (min, max) } else { (0.0, 0.0) };
    let mut pixels = vec![0u8; nx * ny];
    if max > min {
        for j in 0..ny {
            for i in 0..nx {
                let t = ((mags[j * nx + i] - min) / (max - min)).clamp(0.0, 1.0);
                pixels[(ny - 1 - j) * nx + i] = (t * 255.0).round() as u8;
            }
        }
    }
    Raster {
        width: nx,
        height: ny,
        pixels,
        min,
        max,
    }
}
