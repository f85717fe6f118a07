//! Bisection on a monotone feasibility indicator.
//!
//! The indicator `feasible(x)` must be `false` below some threshold and
//! `true` above it. Nothing is assumed about continuity of whatever the
//! indicator is built from, so jumps to `+inf` in a modular are fine.

/// Hard cap on halving steps once a bracket is known.
pub const MAX_ITERATIONS: usize = 200;

/// Outcome of [`infimum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    /// Largest point known infeasible (0 if none was found above the
    /// smallest positive float).
    pub lo: f64,
    /// Smallest point known feasible.
    pub hi: f64,
    pub iterations: usize,
}

impl Bracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Half-width: the distance from the midpoint to either end.
    pub fn accuracy(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }
}

/// Locates `inf { x > 0 : feasible(x) }`.
///
/// The bracket is found by doubling (or halving) from 1, then bisected until
/// `hi - lo <= tol * hi` or [`MAX_ITERATIONS`] is reached. Returns `None` if
/// no feasible point is representable, i.e. doubling overflows.
pub fn infimum<F>(tol: f64, mut feasible: F) -> Option<Bracket>
where
    F: FnMut(f64) -> bool,
{
    let (mut lo, mut hi) = if feasible(1.0) {
        let mut hi = 1.0f64;
        loop {
            let lo = 0.5 * hi;
            if lo == 0.0 {
                break (0.0, hi);
            }
            if !feasible(lo) {
                break (lo, hi);
            }
            hi = lo;
        }
    } else {
        let mut lo = 1.0f64;
        loop {
            let hi = 2.0 * lo;
            if hi.is_infinite() {
                return None;
            }
            if feasible(hi) {
                break (lo, hi);
            }
            lo = hi;
        }
    };

    let mut iterations = 0;
    while hi - lo > tol * hi && iterations < MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Some(Bracket { lo, hi, iterations })
}
