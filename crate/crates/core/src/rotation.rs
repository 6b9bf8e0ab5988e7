//! Integer multiples of a rotation angle that come back close to the
//! identity from the positive side.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Partial quotients above this mark `theta / 2pi` as numerically rational.
pub const NEAR_RATIONAL_QUOTIENT: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct RotationApproximants {
    /// `(p, p theta mod 2pi)` with `p` strictly increasing and the residue
    /// strictly decreasing.
    pub entries: Vec<(u64, f64)>,
    /// Fewer than the requested number of entries could be produced before
    /// the residues stopped being resolvable in floating point.
    pub exhausted: bool,
    /// The continued fraction terminated or produced a huge partial
    /// quotient: `theta / pi` is rational as far as `f64` can tell.
    pub near_rational: bool,
}

/// `p theta mod 2pi` in `[0, 2pi)`.
pub fn residue(p: u64, theta: f64) -> f64 {
    (p as f64 * theta).rem_euclid(TAU)
}

/// Denominators of the continued-fraction convergents of `theta / 2pi`
/// that undershoot it, i.e. whose multiples of `theta` land just past a
/// full turn.
pub fn rotation_approximants(theta: f64, k: usize) -> Result<RotationApproximants> {
    if !theta.is_finite() {
        return Err(Error::Precondition("theta must be finite".into()));
    }
    let alpha = (theta / TAU).rem_euclid(1.0);
    let mut out = RotationApproximants {
        entries: Vec::new(),
        exhausted: false,
        near_rational: false,
    };
    if alpha == 0.0 {
        out.near_rational = true;
        out.exhausted = k > 0;
        return Ok(out);
    }
    // Denominators of the convergents of alpha = [0; a1, a2, ...].
    let (mut q_prev, mut q) = (0u64, 1u64);
    let mut x = alpha;
    let mut index = 0usize;
    let emit = |q: u64, out: &mut RotationApproximants| -> bool {
        let eps = residue(q, theta);
        let unreliable = eps <= 64.0 * f64::EPSILON * (q as f64 * theta.abs()).max(1.0);
        let decreasing = out.entries.last().is_none_or(|&(_, e)| eps < e);
        if unreliable || !decreasing {
            return false;
        }
        out.entries.push((q, eps));
        true
    };
    // q = 1 is the zeroth convergent 0/1, which undershoots alpha.
    if k > 0 && !emit(1, &mut out) {
        out.exhausted = true;
        return Ok(out);
    }
    while out.entries.len() < k {
        let inv = 1.0 / x;
        let a = inv.floor();
        if !a.is_finite() || a > NEAR_RATIONAL_QUOTIENT {
            out.near_rational = true;
            break;
        }
        x = inv - a;
        index += 1;
        let a = a as u64;
        let Some(q_next) = a.checked_mul(q).and_then(|v| v.checked_add(q_prev)) else {
            break;
        };
        (q_prev, q) = (q, q_next);
        // Even-indexed convergents lie below alpha.
        if index.is_multiple_of(2) && !emit(q, &mut out) {
            break;
        }
        if x == 0.0 {
            out.near_rational = true;
            break;
        }
    }
    out.exhausted = out.entries.len() < k;
    Ok(out)
}
