//! Binary64 versions of the maps, for Monte Carlo and sweeps over
//! non-exact parameters.
//!
//! Points within [`GUARD`] of a branch boundary are reported as ambiguous
//! rather than assigned to a branch.

use super::{Digit, MapKind};
use crate::error::{Error, Result};
use crate::field::BETA_F64;

/// Half-width of the band around ±1/β inside which the branch is
/// considered undetermined.
pub const GUARD: f64 = 1e-12;

pub const INV_BETA: f64 = BETA_F64 - 1.0;

/// Digit of a float point, or `None` inside the guard band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FloatDigit {
    /// Branch by the closed-J_0 convention.
    pub digit: Digit,
    /// True when the point lies within the guard band of a boundary.
    pub ambiguous: bool,
}

pub fn branch_index(x: f64) -> FloatDigit {
    let ambiguous = (x.abs() - INV_BETA).abs() < GUARD;
    let digit = if x > INV_BETA {
        Digit::Pos
    } else if x < -INV_BETA {
        Digit::Neg
    } else {
        Digit::Zero
    };
    FloatDigit { digit, ambiguous }
}

pub fn b_digit(x: f64) -> FloatDigit {
    let ambiguous = (x - INV_BETA).abs() < GUARD;
    let digit = if x >= INV_BETA { Digit::Pos } else { Digit::Zero };
    FloatDigit { digit, ambiguous }
}

fn clamp_unit(y: f64, lo: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::Numeric(format!("non-finite iterate {y}")));
    }
    if y > 1.0 + 1e-9 || y < lo - 1e-9 {
        return Err(Error::Numeric(format!("iterate {y} escaped the interval")));
    }
    Ok(y.clamp(lo, 1.0))
}

/// One step of the chosen map. Returns the image and the digit read at `x`.
#[inline]
pub fn step(map: MapKind, alpha: f64, x: f64) -> Result<(f64, FloatDigit)> {
    match map {
        MapKind::S => {
            let t = branch_index(x);
            let y = BETA_F64 * x - t.digit.value() as f64 * alpha;
            Ok((clamp_unit(y, -1.0)?, t))
        }
        MapKind::T => {
            let t = branch_index(x);
            let y = match t.digit {
                Digit::Zero => BETA_F64 * x,
                d => BETA_F64 * (BETA_F64 * x - d.value() as f64 * alpha),
            };
            Ok((clamp_unit(y, -1.0)?, t))
        }
        MapKind::B => {
            let b = b_digit(x);
            let y = BETA_F64 * x - if b.digit == Digit::Pos { 1.0 } else { 0.0 };
            Ok((clamp_unit(y, 0.0)?, b))
        }
    }
}

/// First `n` digits of the expansion of x; an ambiguous boundary hit is an
/// error.
pub fn expansion(map: MapKind, alpha: f64, x: f64, n: usize) -> Result<Vec<Digit>> {
    if n == 0 {
        return Err(Error::Domain("expansion length must be at least 1".into()));
    }
    let lo = if map == MapKind::B { 0.0 } else { -1.0 };
    if !(lo..=1.0).contains(&x) {
        return Err(Error::Domain(format!("point {x} outside [{lo}, 1]")));
    }
    let mut cur = x;
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let (next, d) = step(map, alpha, cur)?;
        if d.ambiguous {
            return Err(Error::Domain(format!("boundary ambiguity at iterate {j} (x = {cur:e})")));
        }
        out.push(d.digit);
        cur = next;
    }
    Ok(out)
}

/// Float estimate of the matching index: the first j at which the two
/// critical orbits agree to within `tol`. Only meaningful while β^j·ε stays
/// well below `tol`, so the search stops at `max_iter` and returns `None`.
pub fn estimate_matching_index(alpha: f64, max_iter: usize, tol: f64) -> Result<Option<usize>> {
    let mut x = 1.0;
    let mut y = 1.0 - alpha;
    for j in 1..=max_iter {
        x = step(MapKind::S, alpha, x)?.0;
        y = step(MapKind::S, alpha, y)?.0;
        if (x - y).abs() < tol {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ambiguity_flagged() {
        assert!(branch_index(INV_BETA).ambiguous);
        assert!(branch_index(-INV_BETA + 1e-13).ambiguous);
        assert!(!branch_index(0.3).ambiguous);
        assert!(expansion(MapKind::S, 1.5, INV_BETA, 3).is_err());
    }

    #[test]
    fn matches_exact_digits() {
        let d = expansion(MapKind::B, 1.0, 0.9, 2).unwrap();
        assert_eq!(d, vec![Digit::Pos, Digit::Zero]);
        assert!(expansion(MapKind::B, 1.0, 1.0, 2).is_err());
        let d = expansion(MapKind::S, 1.3, 1.0, 4).unwrap();
        assert_eq!(super::super::digits_to_compact(&d), "+00+");
    }

    #[test]
    fn estimate_small_index() {
        assert_eq!(estimate_matching_index(1.5, 20, 1e-9).unwrap(), Some(2));
        assert_eq!(estimate_matching_index(1.3, 20, 1e-9).unwrap(), Some(4));
    }
}
