use crate::error::{Error, Result};

/// Smallest admissible node count per axis. One-sided second-order closures
/// need four nodes from each wall and the interior must not be empty.
pub const MIN_NODES: usize = 9;

/// Uniform vertex-centered rectangular mesh on `[0, lx] x [0, ly]`.
///
/// Boundary nodes are part of the grid, so a Dirichlet value on the wall is
/// imposed exactly at nodes. Node `(i, j)` sits at `(i dx, j dy)` and is
/// stored at flat index `j * nx + i`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Grid {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
    dx: f64,
    dy: f64,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        if nx < MIN_NODES || ny < MIN_NODES {
            return Err(Error::DimensionTooSmall { nx, ny });
        }
        if !(lx.is_finite() && ly.is_finite() && lx > 0.0 && ly > 0.0) {
            return Err(Error::NonPositiveExtent { lx, ly });
        }
        Ok(Self {
            nx,
            ny,
            lx,
            ly,
            dx: lx / (nx - 1) as f64,
            dy: ly / (ny - 1) as f64,
        })
    }

    /// Square `n x n` grid on the unit square.
    pub fn unit_square(n: usize) -> Result<Self> {
        Self::new(n, n, 1.0, 1.0)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn lx(&self) -> f64 {
        self.lx
    }
    pub fn ly(&self) -> f64 {
        self.ly
    }
    pub fn dx(&self) -> f64 {
        self.dx
    }
    pub fn dy(&self) -> f64 {
        self.dy
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn area(&self) -> f64 {
        self.lx * self.ly
    }

    pub fn min_spacing(&self) -> f64 {
        self.dx.min(self.dy)
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.dy
    }

    #[inline]
    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny
    }

    /// Trapezoidal weight of node `(i, j)`: `dx dy` in the interior, halved
    /// on edges and quartered at corners.
    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        edge_factor(i, self.nx) * edge_factor(j, self.ny) * self.dx * self.dy
    }

    /// Flat indices of every boundary node, each visited once.
    pub fn boundary_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.ny).flat_map(move |j| {
            (0..self.nx)
                .filter(move |&i| self.is_boundary(i, j))
                .map(move |i| self.idx(i, j))
        })
    }
}

#[inline]
pub(crate) fn edge_factor(i: usize, n: usize) -> f64 {
    if i == 0 || i + 1 == n {
        0.5
    } else {
        1.0
    }
}
