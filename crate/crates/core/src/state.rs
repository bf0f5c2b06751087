use crate::error::{Error, Result};
use crate::grid::Grid;

/// Discrete fields `(rho, u, b)` at one instant.
///
/// `rho` and `b` are cell-centred, `u` is face-centred with the wall faces
/// pinned to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub b: Vec<f64>,
    pub time: f64,
}

impl State {
    /// Builds a state and checks shapes, positivity, finiteness and the
    /// non-slip walls.
    pub fn new(grid: &Grid, rho: Vec<f64>, u: Vec<f64>, b: Vec<f64>, time: f64) -> Result<Self> {
        grid.check_cells(rho.len())?;
        grid.check_faces(u.len())?;
        grid.check_cells(b.len())?;
        let s = Self { rho, u, b, time };
        s.validate()?;
        if s.u[0] != 0.0 || s.u[s.u.len() - 1] != 0.0 {
            return Err(Error::invalid("velocity must vanish on both walls"));
        }
        Ok(s)
    }

    /// The constant state `(rho_bar, 0, 0)`.
    pub fn uniform(grid: &Grid, rho_bar: f64) -> Self {
        Self {
            rho: vec![rho_bar; grid.n_cells()],
            u: vec![0.0; grid.n_faces()],
            b: vec![0.0; grid.n_cells()],
            time: 0.0,
        }
    }

    pub fn n_cells(&self) -> usize {
        self.rho.len()
    }

    pub fn rho_min(&self) -> f64 {
        self.rho.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn rho_max(&self) -> f64 {
        self.rho.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn b_sup(&self) -> f64 {
        self.b.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn u_sup(&self) -> f64 {
        self.u.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Positivity and finiteness check used after every step.
    pub fn validate(&self) -> Result<()> {
        for (field, values) in [("rho", &self.rho), ("u", &self.u), ("b", &self.b)] {
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::Divergence {
                    field,
                    time: self.time,
                });
            }
        }
        if let Some((cell, &rho)) = self.rho.iter().enumerate().find(|(_, &r)| r <= 0.0) {
            return Err(Error::Vacuum {
                cell,
                time: self.time,
                rho,
            });
        }
        Ok(())
    }

    /// Reflection `x -> 1 - x`; velocity changes sign.
    pub fn mirrored(&self) -> Self {
        Self {
            rho: self.rho.iter().rev().copied().collect(),
            u: self.u.iter().rev().map(|v| -v).collect(),
            b: self.b.iter().rev().copied().collect(),
            time: self.time,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_states() {
        let g = Grid::new(4).unwrap();
        let ok = State::new(&g, vec![1.0; 4], vec![0.0; 5], vec![0.0; 4], 0.0);
        assert!(ok.is_ok());
        assert!(matches!(
            State::new(
                &g,
                vec![1.0, 0.0, 1.0, 1.0],
                vec![0.0; 5],
                vec![0.0; 4],
                0.0
            ),
            Err(Error::Vacuum { cell: 1, .. })
        ));
        assert!(State::new(
            &g,
            vec![1.0; 4],
            vec![0.0, 1.0, 0.0, 0.0, 0.1],
            vec![0.0; 4],
            0.0
        )
        .is_err());
        assert!(matches!(
            State::new(&g, vec![1.0; 4], vec![0.0; 5], vec![f64::NAN; 4], 0.0),
            Err(Error::Divergence { field: "b", .. })
        ));
        assert!(State::new(&g, vec![1.0; 3], vec![0.0; 5], vec![0.0; 4], 0.0).is_err());
    }
}
