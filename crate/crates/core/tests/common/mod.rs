//! Test-only oracles, independent of the bisection code paths.
#![allow(dead_code)]

pub const INF: f64 = f64::INFINITY;

/// `|a - b| <= tol * max(1, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// Constant-exponent Lebesgue norm in closed form.
pub fn lp_norm(values: &[f64], measures: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        values.iter().cloned().fold(0.0, f64::max)
    } else {
        values
            .iter()
            .zip(measures)
            .map(|(v, m)| m * v.powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }
}

/// `(sum_nu ||f_nu||_p^q)^(1/q)` (or `max_nu ||f_nu||_p` for `q = inf`).
pub fn constant_mixed_norm(rows: &[Vec<f64>], measures: &[f64], p: f64, q: f64) -> f64 {
    let norms = rows.iter().map(|r| lp_norm(r, measures, p));
    if q.is_infinite() {
        norms.fold(0.0, f64::max)
    } else {
        norms.map(|n| n.powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

/// Root of `1/mu + mu^(-q0) = 1` by Newton's method from `mu = 1`, where
/// the function is positive, convex and decreasing so iterates increase
/// monotonically to the root.
pub fn bounded_q_norm_f(q0: f64) -> f64 {
    let h = |mu: f64| 1.0 / mu + mu.powf(-q0) - 1.0;
    let dh = |mu: f64| -1.0 / (mu * mu) - q0 * mu.powf(-q0 - 1.0);
    let mut mu = 1.0;
    for _ in 0..100 {
        let next = mu - h(mu) / dh(mu);
        if (next - mu).abs() <= 1e-16 * next {
            return next;
        }
        mu = next;
    }
    mu
}

/// `||f + g||` of the bounded variant: both terms equal `chi_Q0 + chi_Q1`
/// and each inner infimum must be 1/2, so `mu = 2 + 2^(1/q0)`.
pub fn bounded_q_norm_sum(q0: f64) -> f64 {
    2.0 + 2f64.powf(1.0 / q0)
}
