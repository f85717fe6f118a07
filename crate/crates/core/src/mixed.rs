//! The two-level `l_q(.)(L_p(.))` modular and norm.
//!
//! For a term `f_nu` the inner infimum is
//! `inf { lambda > 0 : rho_p(f_nu / (mu * lambda^(1/q))) <= 1 }` with
//! `lambda^(1/inf) := 1`. On cells where `q = inf` the constraint does not
//! depend on `lambda` at all, which makes 0 and `+inf` ordinary outcomes.

use crate::bisect;
use crate::error::{check_tol, Error, Result};
use crate::space::{
    self, luxemburg_norm, phi_raw, Estimate, ExponentPair, Partition, SimpleFunction,
};
use crate::xreal::{Exponent, XReal};

/// A finitely supported sequence `(f_0, ..., f_K)` on one partition; terms
/// past `K` are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSequence {
    terms: Vec<SimpleFunction>,
}

impl FunctionSequence {
    pub fn new(terms: Vec<SimpleFunction>) -> Result<Self> {
        let first = terms.first().ok_or(Error::EmptySequence)?;
        let cells = first.len();
        if cells == 0 {
            return Err(Error::EmptyPartition);
        }
        for t in &terms {
            if t.len() != cells {
                return Err(Error::Misaligned {
                    expected: cells,
                    found: t.len(),
                });
            }
        }
        Ok(FunctionSequence { terms })
    }

    /// Builds a sequence from rows of raw cell values.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let terms = rows
            .iter()
            .map(|r| SimpleFunction::new(r.clone()))
            .collect::<Result<Vec<_>>>()?;
        FunctionSequence::new(terms)
    }

    pub fn zeros(len: usize, cells: usize) -> Self {
        FunctionSequence {
            terms: vec![SimpleFunction::zeros(cells); len.max(1)],
        }
    }

    pub fn terms(&self) -> &[SimpleFunction] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cells(&self) -> usize {
        self.terms[0].len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(SimpleFunction::is_zero)
    }

    pub fn scaled(&self, c: f64) -> Self {
        FunctionSequence {
            terms: self.terms.iter().map(|t| t.scaled(c)).collect(),
        }
    }

    /// Padded to `len` terms with zero functions.
    pub fn padded(&self, len: usize) -> Self {
        let mut terms = self.terms.clone();
        terms.resize(len.max(self.len()), SimpleFunction::zeros(self.cells()));
        FunctionSequence { terms }
    }

    /// Termwise cellwise sum; the shorter sequence is padded with zeros.
    pub fn plus(&self, other: &FunctionSequence) -> Result<Self> {
        if self.cells() != other.cells() {
            return Err(Error::Misaligned {
                expected: self.cells(),
                found: other.cells(),
            });
        }
        let len = self.len().max(other.len());
        let (a, b) = (self.padded(len), other.padded(len));
        let terms = a
            .terms
            .iter()
            .zip(&b.terms)
            .map(|(x, y)| x.plus(y))
            .collect();
        Ok(FunctionSequence { terms })
    }

    /// `theta * self + (1 - theta) * other`.
    pub fn convex_combination(&self, other: &FunctionSequence, theta: f64) -> Result<Self> {
        self.scaled(theta).plus(&other.scaled(1.0 - theta))
    }

    pub(crate) fn check_aligned(&self, exps: &ExponentPair, part: &Partition) -> Result<()> {
        part.check_aligned(self.cells())?;
        part.check_aligned(exps.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Feasible for every `lambda > 0`.
    Zero,
    Finite,
    /// Feasible for no `lambda > 0`.
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerInfimumResult {
    pub lambda: XReal,
    pub accuracy: f64,
    pub branch: Branch,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::Zero => "Zero",
            Branch::Finite => "Finite",
            Branch::Infeasible => "Infeasible",
        }
    }
}

impl InnerInfimumResult {
    const ZERO: Self = InnerInfimumResult {
        lambda: XReal::ZERO,
        accuracy: 0.0,
        branch: Branch::Zero,
    };
    const INFEASIBLE: Self = InnerInfimumResult {
        lambda: XReal::INFINITY,
        accuracy: 0.0,
        branch: Branch::Infeasible,
    };
}

pub(crate) fn inner_at(
    values: &[f64],
    exps: &ExponentPair,
    measures: &[f64],
    mu: f64,
    tol: f64,
) -> InnerInfimumResult {
    let cells = || {
        values
            .iter()
            .zip(exps.p().iter().zip(exps.q()))
            .zip(measures)
            .filter(|((v, _), _)| **v > 0.0)
            .map(|((&v, (&p, &q)), &m)| (v, p, q, m))
    };

    // lambda-independent part: the q = inf cells
    let fixed: XReal = cells()
        .filter(|(_, _, q, _)| q.is_infinite())
        .map(|(v, p, _, m)| XReal::saturating(m) * phi_raw(p, v / mu))
        .sum();
    if fixed > XReal::ONE {
        return InnerInfimumResult::INFEASIBLE;
    }
    let mut any_dependent = false;
    let mut any_dependent_finite_p = false;
    for (_, p, q, _) in cells() {
        if q.is_finite() {
            any_dependent = true;
            any_dependent_finite_p |= p.is_finite();
        }
    }
    if !any_dependent {
        return InnerInfimumResult::ZERO;
    }
    // finite-p dependent terms are positive for every finite lambda
    if any_dependent_finite_p && fixed >= XReal::ONE {
        return InnerInfimumResult::INFEASIBLE;
    }

    let bracket = bisect::infimum(tol, |lambda| {
        let mut total = fixed;
        for (v, p, q, m) in cells() {
            if q.is_infinite() {
                continue;
            }
            let t = v / (mu * lambda.powf(q.recip()));
            total = total + XReal::saturating(m) * phi_raw(p, t);
            if total > XReal::ONE {
                return false;
            }
        }
        true
    });
    match bracket {
        Some(b) => InnerInfimumResult {
            lambda: XReal::saturating(b.midpoint()),
            accuracy: b.accuracy(),
            branch: Branch::Finite,
        },
        None => InnerInfimumResult::INFEASIBLE,
    }
}

fn check_scale(mu: f64) -> Result<()> {
    if mu.is_finite() && mu > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidScale(mu))
    }
}

/// `inf { lambda > 0 : rho_p(f / (mu * lambda^(1/q))) <= 1 }`.
pub fn inner_infimum(
    f: &SimpleFunction,
    exps: &ExponentPair,
    part: &Partition,
    mu: f64,
    tol: f64,
) -> Result<InnerInfimumResult> {
    part.check_aligned(f.len())?;
    part.check_aligned(exps.len())?;
    check_scale(mu)?;
    check_tol(tol)?;
    Ok(inner_at(f.values(), exps, part.measures(), mu, tol))
}

/// Mixed modular of `seq / mu`. Stops early once the running sum exceeds
/// `stop_above`.
fn modular_scaled(
    seq: &FunctionSequence,
    exps: &ExponentPair,
    part: &Partition,
    mu: f64,
    tol: f64,
    stop_above: Option<XReal>,
) -> Estimate {
    let mut value = XReal::ZERO;
    let mut accuracy = 0.0;
    for term in seq.terms() {
        let r = inner_at(term.values(), exps, part.measures(), mu, tol);
        value = value + r.lambda;
        accuracy += r.accuracy;
        if value.is_infinite() || stop_above.is_some_and(|s| value > s) {
            break;
        }
    }
    Estimate {
        value: value.value(),
        accuracy,
    }
}

/// The mixed modular `sum_nu inf { lambda_nu > 0 : rho_p(f_nu / lambda_nu^(1/q)) <= 1 }`.
pub fn mixed_modular(
    seq: &FunctionSequence,
    exps: &ExponentPair,
    part: &Partition,
    tol: f64,
) -> Result<Estimate> {
    seq.check_aligned(exps, part)?;
    check_tol(tol)?;
    Ok(modular_scaled(seq, exps, part, 1.0, tol, None))
}

/// The mixed norm `inf { mu > 0 : mixed_modular(seq / mu) <= 1 }`.
///
/// Inner infima are computed at `tol / 10`.
pub fn mixed_norm(
    seq: &FunctionSequence,
    exps: &ExponentPair,
    part: &Partition,
    tol: f64,
) -> Result<Estimate> {
    seq.check_aligned(exps, part)?;
    check_tol(tol)?;
    if seq.is_zero() {
        return Ok(Estimate::exact(0.0));
    }
    let inner_tol = tol / 10.0;
    let bracket = bisect::infimum(tol, |mu| {
        modular_scaled(seq, exps, part, mu, inner_tol, Some(XReal::ONE)).value <= 1.0
    });
    Ok(Estimate::from_bracket(bracket))
}

/// Simplified modular `sum_nu || phi_q(|f_nu|) ||_{p/q}`.
///
/// Valid only when `1 <= q <= p` on every cell (so `q = inf` forces
/// `p = inf`), with `inf/inf := 1`.
pub fn mixed_modular_alt(
    seq: &FunctionSequence,
    exps: &ExponentPair,
    part: &Partition,
    tol: f64,
) -> Result<Estimate> {
    seq.check_aligned(exps, part)?;
    check_tol(tol)?;
    for (cell, (p, q)) in exps.p().iter().zip(exps.q()).enumerate() {
        if !(q.value() >= 1.0 && q.value() <= p.value()) {
            return Err(Error::OutOfRegime(format!(
                "cell {cell}: need 1 <= q <= p, got p = {p}, q = {q}"
            )));
        }
    }
    let ratio: Vec<Exponent> = exps
        .p()
        .iter()
        .zip(exps.q())
        .map(|(&p, &q)| p.ratio(q))
        .collect();

    let mut value = XReal::ZERO;
    let mut accuracy = 0.0;
    for term in seq.terms() {
        let lifted: Vec<XReal> = term
            .values()
            .iter()
            .zip(exps.q())
            .map(|(&v, &q)| phi_raw(q, v))
            .collect();
        if lifted.iter().any(|x| x.is_infinite()) {
            return Ok(Estimate {
                value: f64::INFINITY,
                accuracy,
            });
        }
        let g = SimpleFunction::new(lifted.into_iter().map(XReal::value).collect())?;
        let n = luxemburg_norm(&g, &ratio, part, tol)?;
        value = value + XReal::saturating(n.value);
        accuracy += n.accuracy;
    }
    Ok(Estimate {
        value: value.value(),
        accuracy,
    })
}

/// Scale-normalized residual of `phi_p(t / lambda^(1/q)) = phi_{p/q}(phi_q(t) / lambda)`.
///
/// Returns `|lhs - rhs| / max(1, lhs, rhs)`; two infinite sides count as 0.
/// Requires `1 <= q <= p <= inf`.
pub fn phi_identity_residual(p: Exponent, q: Exponent, lambda: f64, t: f64) -> Result<f64> {
    if !(q.value() >= 1.0 && q.value() <= p.value()) {
        return Err(Error::OutOfRegime(format!(
            "need 1 <= q <= p, got p = {p}, q = {q}"
        )));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidScale(lambda));
    }
    let _ = space::phi(p, t)?;
    let lhs = phi_raw(p, t / lambda.powf(q.recip()));
    let rhs = phi_raw(p.ratio(q), phi_raw(q, t).value() / lambda);
    Ok(relative_gap(lhs, rhs))
}

pub(crate) fn relative_gap(a: XReal, b: XReal) -> f64 {
    match (a.is_infinite(), b.is_infinite()) {
        (true, true) => 0.0,
        (false, false) => {
            let (a, b) = (a.value(), b.value());
            (a - b).abs() / a.max(b).max(1.0)
        }
        _ => f64::INFINITY,
    }
}
