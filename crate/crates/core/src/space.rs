//! Partitions, simple functions, `phi_p`, the variable-exponent modular and
//! the Luxemburg norm.
//!
//! The domain is a finite list of disjoint cells with positive measure;
//! functions and exponents are constant on each cell, so every integral is an
//! exact finite sum.

use crate::bisect;
use crate::error::{check_tol, Error, Result};
use crate::xreal::{Exponent, XReal};

pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    measures: Vec<f64>,
}

impl Partition {
    pub fn new(measures: Vec<f64>) -> Result<Self> {
        if measures.is_empty() {
            return Err(Error::EmptyPartition);
        }
        for (cell, &measure) in measures.iter().enumerate() {
            if !(measure.is_finite() && measure > 0.0) {
                return Err(Error::InvalidMeasure { cell, measure });
            }
        }
        Ok(Partition { measures })
    }

    /// `n` cells of unit measure.
    pub fn unit_cells(n: usize) -> Result<Self> {
        Partition::new(vec![1.0; n])
    }

    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    pub fn len(&self) -> usize {
        self.measures.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub(crate) fn check_aligned(&self, found: usize) -> Result<()> {
        if found == self.len() {
            Ok(())
        } else {
            Err(Error::Misaligned {
                expected: self.len(),
                found,
            })
        }
    }
}

/// Per-cell values of the two exponents `p(.)` and `q(.)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentPair {
    p: Vec<Exponent>,
    q: Vec<Exponent>,
}

impl ExponentPair {
    pub fn new(p: Vec<Exponent>, q: Vec<Exponent>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::EmptyPartition);
        }
        if p.len() != q.len() {
            return Err(Error::Misaligned {
                expected: p.len(),
                found: q.len(),
            });
        }
        Ok(ExponentPair { p, q })
    }

    pub fn from_values(p: &[f64], q: &[f64]) -> Result<Self> {
        let p = p
            .iter()
            .map(|&v| Exponent::new(v))
            .collect::<Result<Vec<_>>>()?;
        let q = q
            .iter()
            .map(|&v| Exponent::new(v))
            .collect::<Result<Vec<_>>>()?;
        ExponentPair::new(p, q)
    }

    pub fn p(&self) -> &[Exponent] {
        &self.p
    }

    pub fn q(&self) -> &[Exponent] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn p_minus(&self) -> f64 {
        self.p
            .iter()
            .map(|e| e.value())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn p_plus(&self) -> f64 {
        self.p.iter().map(|e| e.value()).fold(0.0, f64::max)
    }

    pub fn q_minus(&self) -> f64 {
        self.q
            .iter()
            .map(|e| e.value())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn q_plus(&self) -> f64 {
        self.q.iter().map(|e| e.value()).fold(0.0, f64::max)
    }
}

/// `|f|` on a partition: one finite nonnegative value per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleFunction {
    values: Vec<f64>,
}

impl SimpleFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (cell, &value) in values.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidValue { cell, value });
            }
        }
        let values = values.into_iter().map(|v| v + 0.0).collect();
        Ok(SimpleFunction { values })
    }

    pub fn zeros(cells: usize) -> Self {
        SimpleFunction {
            values: vec![0.0; cells],
        }
    }

    /// Characteristic function of one cell.
    pub fn indicator(cells: usize, cell: usize) -> Self {
        let mut values = vec![0.0; cells];
        values[cell] = 1.0;
        SimpleFunction { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// `c * f` for finite `c >= 0`.
    pub fn scaled(&self, c: f64) -> Self {
        debug_assert!(c.is_finite() && c >= 0.0);
        SimpleFunction {
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Cellwise sum. Both functions must live on the same partition.
    pub fn plus(&self, other: &SimpleFunction) -> Self {
        debug_assert_eq!(self.len(), other.len());
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        SimpleFunction { values }
    }
}

/// `phi_p(t)`: `t^p` for finite `p`; for `p = inf`, 0 when `t <= 1` and
/// `+inf` otherwise.
pub fn phi(p: Exponent, t: f64) -> Result<XReal> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(t));
    }
    Ok(phi_raw(p, t))
}

/// `phi` without argument validation; `t` may be `+inf` here.
pub(crate) fn phi_raw(p: Exponent, t: f64) -> XReal {
    if t == 0.0 {
        return XReal::ZERO;
    }
    if p.is_infinite() {
        if t <= 1.0 {
            XReal::ZERO
        } else {
            XReal::INFINITY
        }
    } else {
        XReal::saturating(t.powf(p.value()))
    }
}

/// `sum_i measure_i * phi(p_i, f_i / lambda)`.
pub(crate) fn modular_at(values: &[f64], p: &[Exponent], measures: &[f64], lambda: f64) -> XReal {
    let mut total = XReal::ZERO;
    for ((&v, &pi), &m) in values.iter().zip(p).zip(measures) {
        total = total + XReal::saturating(m) * phi_raw(pi, v / lambda);
        if total.is_infinite() {
            break;
        }
    }
    total
}

fn check_inputs(f: &SimpleFunction, p: &[Exponent], part: &Partition) -> Result<()> {
    part.check_aligned(f.len())?;
    part.check_aligned(p.len())
}

/// The modular `sum_i measure_i * phi(p_i, f_i)`.
pub fn modular(f: &SimpleFunction, p: &[Exponent], part: &Partition) -> Result<XReal> {
    check_inputs(f, p, part)?;
    Ok(modular_at(f.values(), p, part.measures(), 1.0))
}

/// A bisected quantity together with the half-width of its final bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub accuracy: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate {
            value,
            accuracy: 0.0,
        }
    }

    pub(crate) fn from_bracket(bracket: Option<bisect::Bracket>) -> Self {
        match bracket {
            Some(b) => Estimate {
                value: b.midpoint(),
                accuracy: b.accuracy(),
            },
            None => Estimate {
                value: f64::INFINITY,
                accuracy: 0.0,
            },
        }
    }
}

/// Luxemburg norm `inf { lambda > 0 : modular(f / lambda) <= 1 }`.
///
/// Relative accuracy `tol`; exactly 0 for the zero function.
pub fn luxemburg_norm(
    f: &SimpleFunction,
    p: &[Exponent],
    part: &Partition,
    tol: f64,
) -> Result<Estimate> {
    check_inputs(f, p, part)?;
    check_tol(tol)?;
    if f.is_zero() {
        return Ok(Estimate::exact(0.0));
    }
    let bracket = bisect::infimum(tol, |lambda| {
        modular_at(f.values(), p, part.measures(), lambda) <= XReal::ONE
    });
    Ok(Estimate::from_bracket(bracket))
}
