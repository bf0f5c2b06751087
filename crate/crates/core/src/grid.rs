//! Uniform staggered mesh on (0, 1).
//!
//! Density and magnetic field live at the `n` cell centers, velocity at the
//! `n + 1` faces. Faces `0` and `n` sit on the walls.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n_cells: usize,
    dx: f64,
}

/// Where a sampled array lives on the staggered mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Cells,
    Faces,
}

impl Grid {
    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells < 2 {
            return Err(Error::invalid(format!(
                "grid needs at least 2 cells, got {n_cells}"
            )));
        }
        Ok(Self {
            n_cells,
            dx: 1.0 / n_cells as f64,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_faces(&self) -> usize {
        self.n_cells + 1
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx
    }

    #[inline]
    pub fn face(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }

    pub fn cell_centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }

    pub fn faces(&self) -> Vec<f64> {
        (0..=self.n_cells).map(|i| self.face(i)).collect()
    }

    /// Classifies an array by its length.
    pub fn layout_of(&self, len: usize) -> Result<Layout> {
        if len == self.n_cells {
            Ok(Layout::Cells)
        } else if len == self.n_cells + 1 {
            Ok(Layout::Faces)
        } else {
            Err(Error::ShapeMismatch {
                expected: format!("{} (cells) or {} (faces)", self.n_cells, self.n_cells + 1),
                got: len,
            })
        }
    }

    /// Sample positions of an array with the given layout.
    pub fn positions(&self, layout: Layout) -> Vec<f64> {
        match layout {
            Layout::Cells => self.cell_centers(),
            Layout::Faces => self.faces(),
        }
    }

    pub(crate) fn check_cells(&self, len: usize) -> Result<()> {
        if len != self.n_cells {
            return Err(Error::ShapeMismatch {
                expected: format!("{} (cells)", self.n_cells),
                got: len,
            });
        }
        Ok(())
    }

    pub(crate) fn check_faces(&self, len: usize) -> Result<()> {
        if len != self.n_cells + 1 {
            return Err(Error::ShapeMismatch {
                expected: format!("{} (faces)", self.n_cells + 1),
                got: len,
            });
        }
        Ok(())
    }

    /// Samples `f` at the cell centers.
    pub fn sample_cells(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.n_cells).map(|i| f(self.center(i))).collect()
    }

    /// Samples `f` at the faces.
    pub fn sample_faces(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..=self.n_cells).map(|i| f(self.face(i))).collect()
    }
}

/// Average of neighbouring cells; wall faces copy the adjacent cell.
pub fn interpolate_center_to_face(field: &[f64], grid: &Grid) -> Result<Vec<f64>> {
    grid.check_cells(field.len())?;
    let n = grid.n_cells();
    let mut out = Vec::with_capacity(n + 1);
    out.push(field[0]);
    out.extend(field.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    out.push(field[n - 1]);
    Ok(out)
}

/// Average of the two faces bounding each cell.
pub fn interpolate_face_to_center(field: &[f64], grid: &Grid) -> Result<Vec<f64>> {
    grid.check_faces(field.len())?;
    Ok(field.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry() {
        for n in [2usize, 3, 7, 64, 1000, 4096] {
            let g = Grid::new(n).unwrap();
            let total = g.dx() * n as f64;
            assert!((total - 1.0).abs() <= 4.0 * f64::EPSILON);
            let f = g.faces();
            assert_eq!(f[0], 0.0);
            assert!((f[n] - 1.0).abs() <= 4.0 * f64::EPSILON);
            assert!(f.windows(2).all(|w| w[1] > w[0]));
            let c = g.cell_centers();
            for i in 0..n {
                assert!((c[i] - 0.5 * (f[i] + f[i + 1])).abs() < 1e-15);
            }
        }
        assert!(Grid::new(1).is_err());
    }

    #[test]
    fn center_to_face_constant_and_linear() {
        let g = Grid::new(16).unwrap();
        let c = vec![3.5; 16];
        assert!(interpolate_center_to_face(&c, &g)
            .unwrap()
            .iter()
            .all(|&v| v == 3.5));
        let lin = g.sample_cells(|x| 2.0 * x);
        let f = interpolate_center_to_face(&lin, &g).unwrap();
        for i in 1..16 {
            assert!((f[i] - 2.0 * g.face(i)).abs() < 1e-14);
        }
    }

    #[test]
    fn interpolation_matches_hand_computation() {
        let g = Grid::new(8).unwrap();
        let c = [1.0, -2.0, 4.0, 0.5, 7.0, 3.0, -1.0, 2.0];
        let f = interpolate_center_to_face(&c, &g).unwrap();
        let mut expect = vec![c[0]];
        for i in 1..8 {
            expect.push((c[i - 1] + c[i]) / 2.0);
        }
        expect.push(c[7]);
        assert_eq!(f, expect);

        let back = interpolate_face_to_center(&f, &g).unwrap();
        for i in 0..8 {
            assert_eq!(back[i], (f[i] + f[i + 1]) / 2.0);
        }
    }

    #[test]
    fn shape_errors() {
        let g = Grid::new(8).unwrap();
        assert!(interpolate_center_to_face(&[1.0; 9], &g).is_err());
        assert!(interpolate_face_to_center(&[1.0; 8], &g).is_err());
        assert!(g.layout_of(5).is_err());
    }
}

/// Conservative restriction of a cell array by averaging `factor` fine cells.
pub fn restrict_cells(fine: &[f64], factor: usize) -> Result<Vec<f64>> {
    if factor == 0 || fine.len() % factor != 0 {
        return Err(Error::ShapeMismatch {
            expected: format!("a multiple of {factor}"),
            got: fine.len(),
        });
    }
    let w = 1.0 / factor as f64;
    Ok(fine
        .chunks_exact(factor)
        .map(|c| c.iter().sum::<f64>() * w)
        .collect())
}

/// Restriction of a face array by injection at coincident faces.
pub fn restrict_faces(fine: &[f64], factor: usize) -> Result<Vec<f64>> {
    if factor == 0 || fine.is_empty() || (fine.len() - 1) % factor != 0 {
        return Err(Error::ShapeMismatch {
            expected: format!("a multiple of {factor} plus one"),
            got: fine.len(),
        });
    }
    Ok(fine.iter().step_by(factor).copied().collect())
}
