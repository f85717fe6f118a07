//! Norm-regime classification and residual checks for the triangle
//! inequality, modular convexity and the scalar Hölder-type estimates.

use crate::error::{check_tol, Error, Result};
use crate::mixed::{mixed_modular, mixed_norm, FunctionSequence};
use crate::space::{Estimate, ExponentPair, Partition};
use crate::xreal::{Exponent, XReal};

/// Residuals above this are reported as genuine violations.
pub const VIOLATION_THRESHOLD: f64 = 1e-7;

/// Slack for `1/p + 1/q <= 1` so that conjugate pairs such as `(3, 1.5)`
/// are not rejected by a rounding ulp.
const CONJUGATE_SLACK: f64 = 1e-14;

/// First cell at which each uniform condition fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonUniformWitness {
    pub constant_q: usize,
    pub q_le_p: usize,
    pub holder_conjugate: usize,
}

/// Which sufficient condition for the norm property holds on every cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    ConstantQ,
    QleP,
    HolderConjugate,
    /// No single condition holds on all cells, even if every cell satisfies
    /// one of them.
    NoneUniform(NonUniformWitness),
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::ConstantQ => "ConstantQ",
            Regime::QleP => "QleP",
            Regime::HolderConjugate => "HolderConjugate",
            Regime::NoneUniform(_) => "NoneUniform",
        }
    }

    pub fn is_uniform(&self) -> bool {
        !matches!(self, Regime::NoneUniform(_))
    }
}

pub fn q_le_p_at(p: Exponent, q: Exponent) -> bool {
    q.value() >= 1.0 && q.value() <= p.value()
}

pub fn holder_conjugate_at(p: Exponent, q: Exponent) -> bool {
    p.recip() + q.recip() <= 1.0 + CONJUGATE_SLACK
}

/// First cell violating "`p >= 1` and `q >= 1` constant".
fn constant_q_failure(exps: &ExponentPair) -> Option<usize> {
    let q0 = exps.q()[0];
    exps.p()
        .iter()
        .zip(exps.q())
        .position(|(p, q)| p.value() < 1.0 || q.value() < 1.0 || q.value() != q0.value())
}

fn first_failure(exps: &ExponentPair, pred: fn(Exponent, Exponent) -> bool) -> Option<usize> {
    exps.p()
        .iter()
        .zip(exps.q())
        .position(|(&p, &q)| !pred(p, q))
}

pub fn classify_regime(exps: &ExponentPair) -> Regime {
    let constant_q = constant_q_failure(exps);
    let q_le_p = first_failure(exps, q_le_p_at);
    let holder_conjugate = first_failure(exps, holder_conjugate_at);
    match (constant_q, q_le_p, holder_conjugate) {
        (None, _, _) => Regime::ConstantQ,
        (_, None, _) => Regime::QleP,
        (_, _, None) => Regime::HolderConjugate,
        (Some(a), Some(b), Some(c)) => Regime::NoneUniform(NonUniformWitness {
            constant_q: a,
            q_le_p: b,
            holder_conjugate: c,
        }),
    }
}

/// The three norms entering a triangle-inequality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleCheck {
    pub norm_f: Estimate,
    pub norm_g: Estimate,
    pub norm_sum: Estimate,
    /// `norm_sum - norm_f - norm_g`
    pub residual: f64,
}

impl TriangleCheck {
    pub fn accuracy(&self) -> f64 {
        self.norm_f.accuracy + self.norm_g.accuracy + self.norm_sum.accuracy
    }

    pub fn violated(&self) -> bool {
        self.residual > VIOLATION_THRESHOLD
    }
}

pub fn triangle_residual(
    f: &FunctionSequence,
    g: &FunctionSequence,
    exps: &ExponentPair,
    part: &Partition,
    tol: f64,
) -> Result<TriangleCheck> {
    let sum = f.plus(g)?;
    let norm_f = mixed_norm(f, exps, part, tol)?;
    let norm_g = mixed_norm(g, exps, part, tol)?;
    let norm_sum = mixed_norm(&sum, exps, part, tol)?;
    Ok(TriangleCheck {
        norm_f,
        norm_g,
        norm_sum,
        residual: norm_sum.value - norm_f.value - norm_g.value,
    })
}

/// `rho(theta a + (1 - theta) b) - theta rho(a) - (1 - theta) rho(b)`; 0 when
/// the right-hand side is infinite.
pub fn convexity_residual(
    a: &FunctionSequence,
    b: &FunctionSequence,
    theta: f64,
    exps: &ExponentPair,
    part: &Partition,
    tol: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidTheta(theta));
    }
    check_tol(tol)?;
    let mix = a.convex_combination(b, theta)?;
    let rho = |s: &FunctionSequence| -> Result<XReal> {
        Ok(XReal::saturating(mixed_modular(s, exps, part, tol)?.value))
    };
    let rhs = rho(a)?.scale(theta) + rho(b)?.scale(1.0 - theta);
    if rhs.is_infinite() {
        return Ok(0.0);
    }
    let lhs = rho(&mix)?;
    Ok(lhs.value() - rhs.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HolderKind {
    /// `1 <= q <= p < inf`
    Hol1,
    /// `1/p + 1/q <= 1`, `p < inf`
    Hol2,
}

/// Scalars of the pointwise estimate: scales `mu`, inner infima `lambda`
/// and the normalized values `F`, `G`, for the `f` side and the `g` side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderTerms {
    pub mu: (f64, f64),
    pub lambda: (f64, f64),
    pub value: (f64, f64),
}

fn check_holder_terms(t: &HolderTerms) -> Result<()> {
    let (m1, m2) = t.mu;
    for x in [m1, m2, t.value.0, t.value.1] {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::InvalidArgument(x));
        }
    }
    if m1 + m2 <= 0.0 {
        return Err(Error::InvalidScale(m1 + m2));
    }
    for l in [t.lambda.0, t.lambda.1] {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::InvalidScale(l));
        }
    }
    Ok(())
}

/// `max(0, lhs - rhs) / max(1, rhs)` for the chosen scalar inequality.
///
/// Both share `lhs = F^(1/p) l1^(1/q) m1 + G^(1/p) l2^(1/q) m2`:
///
/// * `Hol1`: `rhs = (m1+m2)^(1-1/q) (m1 l1 + m2 l2)^(1/q-1/p) (F l1 m1 + G l2 m2)^(1/p)`
/// * `Hol2`: `rhs = (m1+m2)^(1-1/p-1/q) (m1 l1 + m2 l2)^(1/q) (F m1 + G m2)^(1/p)`
pub fn holder_form_residual(
    kind: HolderKind,
    p: Exponent,
    q: Exponent,
    terms: &HolderTerms,
) -> Result<f64> {
    let in_regime = p.is_finite()
        && match kind {
            HolderKind::Hol1 => q_le_p_at(p, q),
            HolderKind::Hol2 => q.value() >= 1.0 && holder_conjugate_at(p, q),
        };
    if !in_regime {
        return Err(Error::OutOfRegime(format!(
            "{kind:?} with p = {p}, q = {q}"
        )));
    }
    check_holder_terms(terms)?;

    let (ip, iq) = (p.recip(), q.recip());
    let (m1, m2) = terms.mu;
    let (l1, l2) = terms.lambda;
    let (f, g) = terms.value;
    let lhs = f.powf(ip) * l1.powf(iq) * m1 + g.powf(ip) * l2.powf(iq) * m2;
    let weights = m1 * l1 + m2 * l2;
    let rhs = match kind {
        HolderKind::Hol1 => {
            (m1 + m2).powf(1.0 - iq) * weights.powf(iq - ip) * (f * l1 * m1 + g * l2 * m2).powf(ip)
        }
        HolderKind::Hol2 => {
            (m1 + m2).powf((1.0 - ip - iq).max(0.0)) * weights.powf(iq) * (f * m1 + g * m2).powf(ip)
        }
    };
    Ok((lhs - rhs).max(0.0) / rhs.max(1.0))
}

/// An instance with a certified triangle-inequality failure.
#[derive(Debug, Clone, PartialEq)]
pub struct ViolationWitness {
    pub partition: Partition,
    pub exponents: ExponentPair,
    pub f: FunctionSequence,
    pub g: FunctionSequence,
    pub norm_f: f64,
    pub norm_g: f64,
    pub norm_sum: f64,
    pub residual: f64,
}

impl ViolationWitness {
    /// Runs the triangle check and keeps the instance only if it violates the
    /// inequality beyond [`VIOLATION_THRESHOLD`].
    pub fn certify(
        partition: Partition,
        exponents: ExponentPair,
        f: FunctionSequence,
        g: FunctionSequence,
        tol: f64,
    ) -> Result<Option<Self>> {
        let check = triangle_residual(&f, &g, &exponents, &partition, tol)?;
        if !check.violated() {
            return Ok(None);
        }
        Ok(Some(ViolationWitness {
            partition,
            exponents,
            f,
            g,
            norm_f: check.norm_f.value,
            norm_g: check.norm_g.value,
            norm_sum: check.norm_sum.value,
            residual: check.residual,
        }))
    }
}
