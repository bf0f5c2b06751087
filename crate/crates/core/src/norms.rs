//! Discrete norms and functionals shared by every study.
//!
//! Cell arrays use the midpoint rule. Face arrays use the trapezoid rule so
//! that wall faces carry half weight.

use crate::error::{Error, Result};
use crate::grid::{Grid, Layout};

/// Quadrature weight for sample `i` of an array with the given layout.
#[inline]
fn weight(layout: Layout, i: usize, len: usize, dx: f64) -> f64 {
    match layout {
        Layout::Cells => dx,
        Layout::Faces if i == 0 || i + 1 == len => 0.5 * dx,
        Layout::Faces => dx,
    }
}

/// `sqrt(∫ f²)`.
pub fn l2_norm(field: &[f64], grid: &Grid) -> Result<f64> {
    let layout = grid.layout_of(field.len())?;
    let dx = grid.dx();
    let len = field.len();
    let sum: f64 = field
        .iter()
        .enumerate()
        .map(|(i, v)| v * v * weight(layout, i, len, dx))
        .sum();
    Ok(sum.sqrt())
}

/// `sqrt(∫ (f - g)²)` for two arrays of the same layout.
pub fn l2_distance(f: &[f64], g: &[f64], grid: &Grid) -> Result<f64> {
    if f.len() != g.len() {
        return Err(Error::ShapeMismatch {
            expected: f.len().to_string(),
            got: g.len(),
        });
    }
    let layout = grid.layout_of(f.len())?;
    let dx = grid.dx();
    let len = f.len();
    let sum: f64 = f
        .iter()
        .zip(g)
        .enumerate()
        .map(|(i, (a, b))| (a - b) * (a - b) * weight(layout, i, len, dx))
        .sum();
    Ok(sum.sqrt())
}

/// Max of `|f|` over every sample point.
pub fn linf_norm(field: &[f64], grid: &Grid) -> Result<f64> {
    grid.layout_of(field.len())?;
    Ok(field.iter().fold(0.0, |m, v| m.max(v.abs())))
}

/// Max of `|f|` over sample points with `delta < x < 1 - delta`.
///
/// Returns 0 when no sample point is admitted.
pub fn interior_linf(field: &[f64], grid: &Grid, delta: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&delta) {
        return Err(Error::Domain(format!(
            "interior margin must lie in [0, 1/2), got {delta}"
        )));
    }
    let layout = grid.layout_of(field.len())?;
    let dx = grid.dx();
    let pos = |i: usize| match layout {
        Layout::Cells => (i as f64 + 0.5) * dx,
        Layout::Faces => i as f64 * dx,
    };
    Ok(field
        .iter()
        .enumerate()
        .filter(|&(i, _)| {
            let x = pos(i);
            x > delta && x < 1.0 - delta
        })
        .fold(0.0, |m, (_, v)| m.max(v.abs())))
}

/// `x²(1-x)²`.
#[inline]
pub fn xi_weight(x: f64) -> f64 {
    let s = x * (1.0 - x);
    s * s
}

/// `∫ ξ(x) (rho_x² + b_x²) dx` with `ξ(x) = x²(1-x)²`.
///
/// Gradients are centred differences at the interior faces; the weight is
/// evaluated at the face.
pub fn weighted_h1_integral(rho: &[f64], b: &[f64], grid: &Grid) -> Result<f64> {
    grid.check_cells(rho.len())?;
    grid.check_cells(b.len())?;
    let dx = grid.dx();
    let inv = 1.0 / dx;
    let sum: f64 = (1..grid.n_cells())
        .map(|f| {
            let dr = (rho[f] - rho[f - 1]) * inv;
            let db = (b[f] - b[f - 1]) * inv;
            xi_weight(grid.face(f)) * (dr * dr + db * db)
        })
        .sum();
    Ok(sum * dx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn l2_examples() {
        for n in [2usize, 17, 256] {
            let g = Grid::new(n).unwrap();
            assert!((l2_norm(&vec![1.0; n], &g).unwrap() - 1.0).abs() < 1e-14);
            assert!((l2_norm(&vec![1.0; n + 1], &g).unwrap() - 1.0).abs() < 1e-14);
            assert_eq!(l2_norm(&vec![0.0; n], &g).unwrap(), 0.0);
        }
        let g = Grid::new(4096).unwrap();
        let s = g.sample_cells(|x| (2.0 * PI * x).sin());
        assert!((l2_norm(&s, &g).unwrap() - 0.5f64.sqrt()).abs() < 1e-6);
        assert!(l2_norm(&[1.0; 3], &g).is_err());
    }

    #[test]
    fn interior_examples() {
        let g = Grid::new(1024).unwrap();
        let x = g.cell_centers();
        // brute force: largest admitted center below 0.75
        let oracle = x
            .iter()
            .copied()
            .filter(|&c| c > 0.25 && c < 0.75)
            .fold(f64::MIN, f64::max);
        let got = interior_linf(&x, &g, 0.25).unwrap();
        assert_eq!(got, oracle);
        assert!((got - 0.75).abs() < g.dx());
        assert_eq!(interior_linf(&vec![-2.5; 1024], &g, 0.1).unwrap(), 2.5);
        assert_eq!(interior_linf(&vec![0.0; 1024], &g, 0.1).unwrap(), 0.0);
        assert!(interior_linf(&x, &g, 0.5).is_err());
        assert!(interior_linf(&x, &g, -0.1).is_err());
    }

    #[test]
    fn interior_at_zero_margin_is_full_norm() {
        let g = Grid::new(64).unwrap();
        let f = g.sample_cells(|x| (7.0 * x).cos());
        assert_eq!(
            interior_linf(&f, &g, 0.0).unwrap(),
            linf_norm(&f, &g).unwrap()
        );
    }

    #[test]
    fn weighted_examples() {
        let g = Grid::new(2048).unwrap();
        assert_eq!(
            weighted_h1_integral(&vec![1.3; 2048], &vec![0.0; 2048], &g).unwrap(),
            0.0
        );
        let b = g.cell_centers();
        let w = weighted_h1_integral(&vec![1.0; 2048], &b, &g).unwrap();
        // Simpson oracle for ∫ξ on a fine mesh
        let m = 20000;
        let h = 1.0 / m as f64;
        let simpson: f64 = (0..=m)
            .map(|k| {
                let c = if k == 0 || k == m {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                c * xi_weight(k as f64 * h)
            })
            .sum::<f64>()
            * h
            / 3.0;
        assert!((simpson - 1.0 / 30.0).abs() < 1e-12);
        assert!((w - 1.0 / 30.0).abs() < 1e-4);
        let b2: Vec<f64> = b.iter().map(|v| 2.0 * v).collect();
        let w2 = weighted_h1_integral(&vec![1.0; 2048], &b2, &g).unwrap();
        assert!((w2 - 4.0 * w).abs() < 1e-12);
    }

    fn field(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-10.0f64..10.0, n)
    }

    proptest! {
        #[test]
        fn norms_homogeneous_and_subadditive(f in field(33), g in field(33), c in -5.0f64..5.0) {
            let grid = Grid::new(33).unwrap();
            let cf: Vec<f64> = f.iter().map(|v| c * v).collect();
            let sum: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
            for norm in [l2_norm, linf_norm] {
                let nf = norm(&f, &grid).unwrap();
                prop_assert!((norm(&cf, &grid).unwrap() - c.abs() * nf).abs() <= 1e-12 * (1.0 + nf));
                prop_assert!(norm(&sum, &grid).unwrap() <= nf + norm(&g, &grid).unwrap() + 1e-12);
            }
        }

        #[test]
        fn interior_monotone_in_margin(f in field(40), d1 in 0.0f64..0.49, d2 in 0.0f64..0.49) {
            let grid = Grid::new(40).unwrap();
            let (big, small) = if d1 >= d2 { (d1, d2) } else { (d2, d1) };
            let a = interior_linf(&f, &grid, big).unwrap();
            let b = interior_linf(&f, &grid, small).unwrap();
            prop_assert!(a <= b);
            prop_assert!(b <= linf_norm(&f, &grid).unwrap());
        }

        #[test]
        fn weighted_reflection_invariant(r in proptest::collection::vec(0.5f64..2.0, 30), b in field(30)) {
            let grid = Grid::new(30).unwrap();
            let rr: Vec<f64> = r.iter().rev().copied().collect();
            let br: Vec<f64> = b.iter().rev().copied().collect();
            let w = weighted_h1_integral(&r, &b, &grid).unwrap();
            let wr = weighted_h1_integral(&rr, &br, &grid).unwrap();
            prop_assert!((w - wr).abs() <= 1e-10 * (1.0 + w));
        }
    }
}
