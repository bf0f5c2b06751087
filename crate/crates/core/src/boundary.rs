//! Magnetic boundary signals `b(0,t) = b1(t)`, `b(1,t) = b2(t)`.

use crate::error::{Error, Result};

/// Named family of boundary signals, all C¹ in time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryMagnetic {
    /// No magnetic boundary data (non-resistive system only).
    None,
    Constant {
        c1: f64,
        c2: f64,
    },
    /// `b_i(t) = a_i sin(omega_i t)`.
    Sinusoid {
        a1: f64,
        omega1: f64,
        a2: f64,
        omega2: f64,
    },
    /// `b_i(t) = c_i s(t / t_rise)` with the smoothstep `s(r) = 3r² - 2r³`
    /// on `[0, 1]` and `s = 1` afterwards.
    Ramp {
        c1: f64,
        c2: f64,
        t_rise: f64,
    },
}

impl BoundaryMagnetic {
    pub fn validate(&self) -> Result<()> {
        let finite = |vals: &[f64]| vals.iter().all(|v| v.is_finite());
        match *self {
            BoundaryMagnetic::None => Ok(()),
            BoundaryMagnetic::Constant { c1, c2 } if finite(&[c1, c2]) => Ok(()),
            BoundaryMagnetic::Sinusoid {
                a1,
                omega1,
                a2,
                omega2,
            } if finite(&[a1, omega1, a2, omega2]) => Ok(()),
            BoundaryMagnetic::Ramp { c1, c2, t_rise } if finite(&[c1, c2]) => {
                if t_rise > 0.0 && t_rise.is_finite() {
                    Ok(())
                } else {
                    Err(Error::invalid(format!(
                        "ramp t_rise must be > 0, got {t_rise}"
                    )))
                }
            }
            _ => Err(Error::invalid("boundary signal parameters must be finite")),
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, BoundaryMagnetic::None)
    }

    /// `(b1(t), b2(t))`, or `None` when no data is prescribed.
    pub fn values(&self, t: f64) -> Option<(f64, f64)> {
        match *self {
            BoundaryMagnetic::None => None,
            BoundaryMagnetic::Constant { c1, c2 } => Some((c1, c2)),
            BoundaryMagnetic::Sinusoid {
                a1,
                omega1,
                a2,
                omega2,
            } => Some((a1 * (omega1 * t).sin(), a2 * (omega2 * t).sin())),
            BoundaryMagnetic::Ramp { c1, c2, t_rise } => {
                let r = (t / t_rise).clamp(0.0, 1.0);
                let s = r * r * (3.0 - 2.0 * r);
                Some((c1 * s, c2 * s))
            }
        }
    }

    /// True when both signals vanish for all time.
    pub fn is_identically_zero(&self) -> bool {
        match *self {
            BoundaryMagnetic::None => true,
            BoundaryMagnetic::Constant { c1, c2 } | BoundaryMagnetic::Ramp { c1, c2, .. } => {
                c1 == 0.0 && c2 == 0.0
            }
            BoundaryMagnetic::Sinusoid {
                a1,
                omega1,
                a2,
                omega2,
            } => (a1 == 0.0 || omega1 == 0.0) && (a2 == 0.0 || omega2 == 0.0),
        }
    }

    /// `max(|b1(t)|, |b2(t)|)`, zero without data.
    pub fn amplitude_at(&self, t: f64) -> f64 {
        self.values(t)
            .map_or(0.0, |(b1, b2)| b1.abs().max(b2.abs()))
    }

    /// Largest `|b_i|` the signal can reach.
    pub fn peak_amplitude(&self) -> f64 {
        match *self {
            BoundaryMagnetic::None => 0.0,
            BoundaryMagnetic::Constant { c1, c2 } | BoundaryMagnetic::Ramp { c1, c2, .. } => {
                c1.abs().max(c2.abs())
            }
            BoundaryMagnetic::Sinusoid { a1, a2, .. } => a1.abs().max(a2.abs()),
        }
    }

    /// Signal for the reflected domain `x ↦ 1 - x` (walls swap).
    pub fn mirrored(&self) -> Self {
        match *self {
            BoundaryMagnetic::None => BoundaryMagnetic::None,
            BoundaryMagnetic::Constant { c1, c2 } => BoundaryMagnetic::Constant { c1: c2, c2: c1 },
            BoundaryMagnetic::Sinusoid {
                a1,
                omega1,
                a2,
                omega2,
            } => BoundaryMagnetic::Sinusoid {
                a1: a2,
                omega1: omega2,
                a2: a1,
                omega2: omega1,
            },
            BoundaryMagnetic::Ramp { c1, c2, t_rise } => BoundaryMagnetic::Ramp {
                c1: c2,
                c2: c1,
                t_rise,
            },
        }
    }
}
