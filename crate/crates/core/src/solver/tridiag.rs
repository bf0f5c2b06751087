//! Thomas algorithm for tridiagonal systems.

use crate::error::{Error, Result};

/// Solves `A x = rhs` where `A` has sub-diagonal `lower` (`lower[0]` unused),
/// main diagonal `diag` and super-diagonal `upper` (`upper[n-1]` unused).
pub fn thomas_solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    let mut scratch = vec![0.0; n];
    let mut out = vec![0.0; n];
    thomas_solve_into(lower, diag, upper, rhs, &mut scratch, &mut out)?;
    Ok(out)
}

/// Allocation-free variant; `scratch` and `out` must have the system size.
pub fn thomas_solve_into(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
    scratch: &mut [f64],
    out: &mut [f64],
) -> Result<()> {
    let n = rhs.len();
    for (name, len) in [
        ("lower", lower.len()),
        ("diag", diag.len()),
        ("upper", upper.len()),
        ("scratch", scratch.len()),
        ("out", out.len()),
    ] {
        if len != n {
            return Err(Error::ShapeMismatch {
                expected: format!("{n} ({name})"),
                got: len,
            });
        }
    }
    if n == 0 {
        return Ok(());
    }

    // forward sweep: scratch holds the modified super-diagonal
    let mut den = diag[0];
    if den == 0.0 {
        return Err(Error::ZeroPivot(0));
    }
    scratch[0] = upper[0] / den;
    out[0] = rhs[0] / den;
    for i in 1..n {
        den = diag[i] - lower[i] * scratch[i - 1];
        if den == 0.0 || !den.is_finite() {
            return Err(Error::ZeroPivot(i));
        }
        scratch[i] = if i + 1 < n { upper[i] / den } else { 0.0 };
        out[i] = (rhs[i] - lower[i] * out[i - 1]) / den;
    }

    for i in (0..n - 1).rev() {
        out[i] -= scratch[i] * out[i + 1];
    }
    Ok(())
}
