//! Power-law fits `value ≈ C ν^p` by least squares in log-log space.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// Coefficient of determination of the log-log line; 0 when the values
    /// are constant.
    pub r_squared: f64,
}

/// Fits `log value = log C + p log nu` through at least three points.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "rate fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(nu, v)) = points.iter().find(|&&(nu, v)| !(nu > 0.0) || !(v > 0.0)) {
        return Err(Error::Domain(format!(
            "rate fit needs positive nu and values, got ({nu}, {v})"
        )));
    }
    let mut nus: Vec<f64> = points.iter().map(|p| p.0).collect();
    nus.sort_by(f64::total_cmp);
    if nus.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Domain("rate fit needs distinct nu values".into()));
    }

    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / m;
    let ybar = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let syy: f64 = ys.iter().map(|y| (y - ybar) * (y - ybar)).sum();

    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    // relative threshold: constant data leaves only round-off in syy
    let r_squared = if syy <= 1e-24 * (1.0 + ybar * ybar) * m {
        0.0
    } else {
        let ss_res: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| {
                let r = y - (intercept + slope * x);
                r * r
            })
            .sum();
        1.0 - ss_res / syy
    };
    Ok(RateFit {
        exponent: slope,
        prefactor: intercept.exp(),
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const LADDER: [f64; 5] = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4];

    #[test]
    fn exact_power_law() {
        let pts: Vec<_> = LADDER.iter().map(|&nu| (nu, 3.0 * nu.powf(0.25))).collect();
        let fit = fit_rate(&pts).unwrap();
        assert!((fit.exponent - 0.25).abs() < 1e-12);
        assert!((fit.prefactor - 3.0).abs() < 1e-11);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_values() {
        let pts: Vec<_> = LADDER.iter().map(|&nu| (nu, 0.7)).collect();
        let fit = fit_rate(&pts).unwrap();
        assert!(fit.exponent.abs() < 1e-12);
        assert_eq!(fit.r_squared, 0.0);
    }

    #[test]
    fn perturbed_half_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let pts: Vec<_> = LADDER
                .iter()
                .map(|&nu| (nu, nu.sqrt() * (1.0 + 0.01 * rng.gen_range(-1.0..1.0))))
                .collect();
            let fit = fit_rate(&pts).unwrap();
            assert!((fit.exponent - 0.5).abs() <= 0.05, "{}", fit.exponent);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            fit_rate(&[(1e-2, 1.0), (1e-3, 1.0)]),
            Err(Error::InsufficientData(_))
        ));
        assert!(fit_rate(&[(1e-2, 1.0), (1e-3, 0.0), (1e-4, 1.0)]).is_err());
        assert!(fit_rate(&[(1e-2, 1.0), (1e-2, 2.0), (1e-4, 1.0)]).is_err());
        assert!(fit_rate(&[(0.0, 1.0), (1e-3, 2.0), (1e-4, 1.0)]).is_err());
    }
}
