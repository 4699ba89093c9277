//! Periodic 2-D Cartesian cell complex and its signed incidence operators.
//!
//! Cells are addressed by integer coordinates `(i, j)` taken modulo the grid
//! extent. Vertex `(i, j)` sits at `(i h, j h)`. The horizontal edge `(i, j)`
//! runs from vertex `(i, j)` to `(i + 1, j)` and the vertical edge `(i, j)`
//! from `(i, j)` to `(i, j + 1)`. Cell `(i, j)` is the square with lower-left
//! corner at vertex `(i, j)`, oriented counterclockwise.

use crate::error::{Error, Result};

/// Smallest extent accepted along either axis.
pub const MIN_EXTENT: usize = 4;

/// Direction of an edge (or of a 1-D sweep).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// Periodic Cartesian complex with square cells of side `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridComplex2D {
    nx: usize,
    ny: usize,
    h: f64,
}

impl GridComplex2D {
    pub fn new(nx: usize, ny: usize, h: f64) -> Result<Self> {
        if nx < MIN_EXTENT || ny < MIN_EXTENT {
            return Err(Error::InvalidGrid(format!(
                "grid {nx}x{ny} is below the minimum extent {MIN_EXTENT}"
            )));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing h = {h} must be positive")));
        }
        Ok(Self { nx, ny, h })
    }

    /// Square `n x n` grid covering the unit square.
    pub fn unit_square(n: usize) -> Result<Self> {
        Self::new(n, n, 1.0 / n as f64)
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.nx
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.ny
    }

    #[inline]
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of cells per dimension family (vertices, cells, or one edge axis).
    #[inline]
    pub fn plane_len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn cell_count(&self, k: usize) -> usize {
        match k {
            0 | 2 => self.plane_len(),
            1 => 2 * self.plane_len(),
            _ => 0,
        }
    }

    /// Row-major index of `(i, j)` after periodic wrap.
    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        let i = i.rem_euclid(self.nx as isize) as usize;
        let j = j.rem_euclid(self.ny as isize) as usize;
        j * self.nx + i
    }

    /// Extent along `axis`.
    #[inline]
    pub fn extent(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => self.nx,
            Axis::Y => self.ny,
        }
    }

    /// Physical size of the domain along x and y.
    pub fn lengths(&self) -> (f64, f64) {
        (self.nx as f64 * self.h, self.ny as f64 * self.h)
    }

    /// Canonical flattened index over all cells of every dimension.
    ///
    /// Order is dimension-major, then axis, then row-major.
    pub fn flatten(&self, cell: CellRef) -> usize {
        let n = self.plane_len();
        let local = self.idx(cell.i, cell.j);
        match (cell.dim, cell.axis) {
            (0, _) => local,
            (1, Axis::X) => n + local,
            (1, Axis::Y) => 2 * n + local,
            (2, _) => 3 * n + local,
            (d, _) => panic!("cell dimension {d} out of range"),
        }
    }

    pub fn unflatten(&self, index: usize) -> Option<CellRef> {
        let n = self.plane_len();
        let (dim, axis, local) = match index / n {
            0 => (0, Axis::X, index),
            1 => (1, Axis::X, index - n),
            2 => (1, Axis::Y, index - 2 * n),
            3 => (2, Axis::X, index - 3 * n),
            _ => return None,
        };
        Some(CellRef {
            dim,
            axis,
            i: (local % self.nx) as isize,
            j: (local / self.nx) as isize,
        })
    }

    /// Index of a cell inside a cochain of its own degree.
    pub fn local_index(&self, cell: CellRef) -> usize {
        let local = self.idx(cell.i, cell.j);
        match (cell.dim, cell.axis) {
            (1, Axis::Y) => self.plane_len() + local,
            _ => local,
        }
    }

    pub fn boundary_operator(&self, k: usize) -> Result<IncidenceOperator> {
        let n = self.plane_len();
        let mut rows = Vec::with_capacity(self.cell_count(k));
        match k {
            1 => {
                for axis in [Axis::X, Axis::Y] {
                    for j in 0..self.ny as isize {
                        for i in 0..self.nx as isize {
                            let (hi, hj) = match axis {
                                Axis::X => (i + 1, j),
                                Axis::Y => (i, j + 1),
                            };
                            rows.push(vec![(self.idx(hi, hj), 1), (self.idx(i, j), -1)]);
                        }
                    }
                }
            }
            2 => {
                for j in 0..self.ny as isize {
                    for i in 0..self.nx as isize {
                        rows.push(vec![
                            (self.idx(i, j), 1),
                            (n + self.idx(i + 1, j), 1),
                            (self.idx(i, j + 1), -1),
                            (n + self.idx(i, j), -1),
                        ]);
                    }
                }
            }
            _ => {
                return Err(Error::InvalidDegree(format!(
                    "boundary operator defined for k in {{1, 2}}, got {k}"
                )))
            }
        }
        Ok(IncidenceOperator {
            k,
            target_len: self.cell_count(k - 1),
            rows,
        })
    }
}

/// A single oriented cell of the complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CellRef {
    pub dim: u8,
    /// Only meaningful for edges.
    pub axis: Axis,
    pub i: isize,
    pub j: isize,
}

impl CellRef {
    pub fn vertex(i: isize, j: isize) -> Self {
        Self { dim: 0, axis: Axis::X, i, j }
    }

    pub fn edge(axis: Axis, i: isize, j: isize) -> Self {
        Self { dim: 1, axis, i, j }
    }

    pub fn face(i: isize, j: isize) -> Self {
        Self { dim: 2, axis: Axis::X, i, j }
    }
}

/// Sparse signed incidence map from k-cells to (k-1)-cells.
///
/// Row `r` lists the boundary of the `r`-th k-cell in local cochain order.
#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceOperator {
    k: usize,
    target_len: usize,
    rows: Vec<Vec<(usize, i8)>>,
}

impl IncidenceOperator {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[Vec<(usize, i8)>] {
        &self.rows
    }

    pub fn source_len(&self) -> usize {
        self.rows.len()
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    /// Integer composition `self` followed by `next` (i.e. `next . self` as
    /// maps on chains). Entries that cancel are dropped.
    pub fn then(&self, next: &IncidenceOperator) -> Vec<Vec<(usize, i32)>> {
        self.rows
            .iter()
            .map(|row| {
                let mut acc: Vec<(usize, i32)> = Vec::new();
                for &(mid, a) in row {
                    for &(tgt, b) in &next.rows[mid] {
                        match acc.iter_mut().find(|(t, _)| *t == tgt) {
                            Some(slot) => slot.1 += a as i32 * b as i32,
                            None => acc.push((tgt, a as i32 * b as i32)),
                        }
                    }
                }
                acc.retain(|&(_, v)| v != 0);
                acc
            })
            .collect()
    }

    /// Coboundary: `(d w)[r] = sum_c sign * w[c]` over the boundary of row `r`.
    pub fn coboundary(&self, values: &[f64]) -> Vec<f64> {
        assert_eq!(values.len(), self.target_len);
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .fold(0.0, |acc, &(c, s)| acc + s as f64 * values[c])
            })
            .collect()
    }

    /// Transpose application: pushes a k-chain down to its (k-1)-boundary.
    pub fn boundary_of_chain(&self, chain: &[f64]) -> Vec<f64> {
        assert_eq!(chain.len(), self.rows.len());
        let mut out = vec![0.0; self.target_len];
        for (row, &w) in self.rows.iter().zip(chain) {
            for &(c, s) in row {
                out[c] += s as f64 * w;
            }
        }
        out
    }
}
