use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Axis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Shifts fill with zero past the walls.
    #[default]
    Dirichlet,
    /// Shifts wrap around.
    Periodic,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::Dirichlet => "dirichlet",
            Boundary::Periodic => "periodic",
        }
    }
}

impl std::str::FromStr for Boundary {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dirichlet" => Ok(Boundary::Dirichlet),
            "periodic" => Ok(Boundary::Periodic),
            other => Err(GridError::UnknownBoundary(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("points per axis must be odd and at least 3 (axis {axis}: {points})")]
    BadPointCount { axis: Axis, points: usize },
    #[error("spacing must be positive and finite (axis {axis}: {spacing})")]
    BadSpacing { axis: Axis, spacing: f64 },
    #[error("unknown boundary condition `{0}` (expected dirichlet or periodic)")]
    UnknownBoundary(String),
}

/// Uniform lattice symmetric about the origin.
///
/// Axis `k` has `points[k]` sites at `x_n = (n − (M−1)/2)·h`. The orbital
/// index is `ix + Mx·(iy + My·iz)`; the full spinor index is
/// `spin·D + orbital` with `D = Mx·My·Mz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    points: [usize; 3],
    spacing: [f64; 3],
    boundary: Boundary,
}

impl Default for Grid {
    fn default() -> Self {
        Grid::cubic(7, 0.5).expect("default grid is valid")
    }
}

impl Grid {
    pub fn new(points: [usize; 3], spacing: [f64; 3], boundary: Boundary) -> Result<Grid, GridError> {
        for axis in Axis::ALL {
            let m = points[axis.index()];
            if m < 3 || m.is_multiple_of(2) {
                return Err(GridError::BadPointCount { axis, points: m });
            }
            let h = spacing[axis.index()];
            if !(h > 0.0 && h.is_finite()) {
                return Err(GridError::BadSpacing { axis, spacing: h });
            }
        }
        Ok(Grid { points, spacing, boundary })
    }

    pub fn cubic(points: usize, spacing: f64) -> Result<Grid, GridError> {
        Grid::new([points; 3], [spacing; 3], Boundary::Dirichlet)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Grid {
        self.boundary = boundary;
        self
    }

    pub fn points(&self) -> [usize; 3] {
        self.points
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Orbital dimension `D`.
    pub fn orbital_dim(&self) -> usize {
        self.points.iter().product()
    }

    /// Spinor dimension `2D`.
    pub fn dim(&self) -> usize {
        2 * self.orbital_dim()
    }

    pub fn coordinate(&self, axis: Axis, n: usize) -> f64 {
        let k = axis.index();
        (n as f64 - ((self.points[k] - 1) / 2) as f64) * self.spacing[k]
    }

    pub fn orbital_index(&self, n: [usize; 3]) -> usize {
        n[0] + self.points[0] * (n[1] + self.points[1] * n[2])
    }

    pub fn site(&self, orbital: usize) -> [usize; 3] {
        let [mx, my, _] = self.points;
        [orbital % mx, (orbital / mx) % my, orbital / (mx * my)]
    }

    pub fn position(&self, orbital: usize) -> [f64; 3] {
        let s = self.site(orbital);
        [
            self.coordinate(Axis::X, s[0]),
            self.coordinate(Axis::Y, s[1]),
            self.coordinate(Axis::Z, s[2]),
        ]
    }

    /// Neighbouring site one step along `axis` (`forward` or backward), if any.
    pub fn neighbour(&self, orbital: usize, axis: Axis, forward: bool) -> Option<usize> {
        let mut s = self.site(orbital);
        let k = axis.index();
        let m = self.points[k];
        s[k] = match (forward, self.boundary) {
            (true, _) if s[k] + 1 < m => s[k] + 1,
            (false, _) if s[k] > 0 => s[k] - 1,
            (_, Boundary::Dirichlet) => return None,
            (true, Boundary::Periodic) => 0,
            (false, Boundary::Periodic) => m - 1,
        };
        Some(self.orbital_index(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_coordinates() {
        let g = Grid::new([3, 5, 7], [1.0, 0.5, 0.25], Boundary::Dirichlet).unwrap();
        assert_eq!(g.orbital_dim(), 105);
        assert_eq!(g.dim(), 210);
        assert_eq!((0..3).map(|n| g.coordinate(Axis::X, n)).collect::<Vec<_>>(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(g.coordinate(Axis::Y, 2), 0.0);
        assert_eq!(g.coordinate(Axis::Z, 0), -0.75);
        for o in 0..g.orbital_dim() {
            assert_eq!(g.orbital_index(g.site(o)), o);
        }
    }

    #[test]
    fn rejects_even_or_small_axes() {
        assert!(matches!(Grid::cubic(4, 1.0), Err(GridError::BadPointCount { points: 4, .. })));
        assert!(matches!(Grid::cubic(1, 1.0), Err(GridError::BadPointCount { .. })));
        assert!(matches!(Grid::cubic(3, 0.0), Err(GridError::BadSpacing { .. })));
        assert!("neumann".parse::<Boundary>().is_err());
    }

    #[test]
    fn neighbours_respect_boundary() {
        let g = Grid::cubic(3, 1.0).unwrap();
        assert_eq!(g.neighbour(2, Axis::X, true), None);
        let p = g.with_boundary(Boundary::Periodic);
        assert_eq!(p.neighbour(2, Axis::X, true), Some(0));
        assert_eq!(p.neighbour(0, Axis::Z, false), Some(18));
    }
}
