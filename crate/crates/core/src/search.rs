//! Seeded instance generation, the two-cube counterexample and its
//! bounded-exponent variant, and randomized search for triangle-inequality
//! violations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_tol, Error, Result};
use crate::mixed::{phi_identity_residual, FunctionSequence};
use crate::properties::{
    holder_conjugate_at, holder_form_residual, triangle_residual, HolderKind, HolderTerms,
    TriangleCheck, ViolationWitness, VIOLATION_THRESHOLD,
};
use crate::space::{ExponentPair, Partition, SimpleFunction};
use crate::xreal::Exponent;

/// Range of the log-uniform exponent component.
pub const EXPONENT_RANGE: (f64, f64) = (1.0, 10.0);

/// A partition with exponents and two sequences to compare.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub partition: Partition,
    pub exponents: ExponentPair,
    pub f: FunctionSequence,
    pub g: FunctionSequence,
}

impl Instance {
    pub fn triangle(&self, tol: f64) -> Result<TriangleCheck> {
        triangle_residual(&self.f, &self.g, &self.exponents, &self.partition, tol)
    }
}

/// Mixture weights over {1, inf, log-uniform on [1, 10]}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentDistribution {
    pub one: f64,
    pub infinity: f64,
    pub log_uniform: f64,
}

impl ExponentDistribution {
    pub const ONE: Self = ExponentDistribution {
        one: 1.0,
        infinity: 0.0,
        log_uniform: 0.0,
    };

    fn validate(&self, name: &str) -> Result<()> {
        let w = [self.one, self.infinity, self.log_uniform];
        if w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::InvalidConfig(format!(
                "{name}: weights must be nonnegative"
            )));
        }
        if (w.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "{name}: weights must sum to 1"
            )));
        }
        Ok(())
    }

    fn sample(&self, rng: &mut impl Rng) -> Exponent {
        let u: f64 = rng.random();
        if u < self.one {
            Exponent::ONE
        } else if u < self.one + self.infinity {
            Exponent::INFINITY
        } else {
            // log_uniform never returns below the range start, so this is >= 1
            Exponent::new(log_uniform(rng, EXPONENT_RANGE)).expect("positive")
        }
    }
}

impl Default for ExponentDistribution {
    fn default() -> Self {
        ExponentDistribution {
            one: 0.25,
            infinity: 0.25,
            log_uniform: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UniformRegime {
    ConstantQ,
    QleP,
    HolderConjugate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenConfig {
    /// Inclusive range of the number of cells.
    pub cells: (usize, usize),
    /// Inclusive range of sequence lengths, drawn separately for `f` and `g`.
    pub terms: (usize, usize),
    pub p: ExponentDistribution,
    pub q: ExponentDistribution,
    /// Log-uniform range of nonzero function values.
    pub values: (f64, f64),
    /// Chance that a cell value is exactly zero.
    pub zero_probability: f64,
    /// Log-uniform range of cell measures.
    pub measures: (f64, f64),
    /// Repair exponents so that this condition holds on every cell.
    pub regime: Option<UniformRegime>,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            cells: (1, 8),
            terms: (1, 4),
            p: ExponentDistribution::default(),
            q: ExponentDistribution::default(),
            values: (1e-2, 1e2),
            zero_probability: 0.25,
            measures: (1e-1, 1e1),
            regime: None,
            seed: 0,
        }
    }
}

impl GenConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        GenConfig {
            seed,
            ..self.clone()
        }
    }

    pub fn with_regime(&self, regime: UniformRegime) -> Self {
        GenConfig {
            regime: Some(regime),
            ..self.clone()
        }
    }

    /// `p = 1` everywhere and `q` split between the atoms 1 and inf.
    pub fn atom_mixture() -> Self {
        GenConfig {
            p: ExponentDistribution::ONE,
            q: ExponentDistribution {
                one: 0.5,
                infinity: 0.5,
                log_uniform: 0.0,
            },
            ..GenConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let count_range = |name: &str, (lo, hi): (usize, usize)| {
            if lo >= 1 && lo <= hi {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!(
                    "{name}: need 1 <= lo <= hi, got [{lo}, {hi}]"
                )))
            }
        };
        let real_range = |name: &str, (lo, hi): (f64, f64)| {
            if lo > 0.0 && lo <= hi && hi.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!(
                    "{name}: need 0 < lo <= hi < inf, got [{lo}, {hi}]"
                )))
            }
        };
        count_range("cells", self.cells)?;
        count_range("terms", self.terms)?;
        real_range("values", self.values)?;
        real_range("measures", self.measures)?;
        self.p.validate("p")?;
        self.q.validate("q")?;
        if !(0.0..1.0).contains(&self.zero_probability) {
            return Err(Error::InvalidConfig(
                "zero_probability must lie in [0, 1)".into(),
            ));
        }
        Ok(())
    }
}

fn log_uniform(rng: &mut impl Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        return lo;
    }
    let u: f64 = rng.random();
    (lo.ln() + u * (hi.ln() - lo.ln())).exp().clamp(lo, hi)
}

/// Smallest `q` with `1/p + 1/q <= 1`.
fn conjugate(p: Exponent) -> Exponent {
    if p.is_infinite() {
        return Exponent::ONE;
    }
    if p.value() <= 1.0 {
        return Exponent::INFINITY;
    }
    let mut q = p.value() / (p.value() - 1.0);
    while !holder_conjugate_at(p, Exponent::new(q).expect("positive")) {
        q *= 1.0 + 1e-12;
    }
    Exponent::new(q).expect("positive")
}

fn draw_exponents(cfg: &GenConfig, cells: usize, rng: &mut impl Rng) -> ExponentPair {
    let mut p: Vec<Exponent> = (0..cells).map(|_| cfg.p.sample(rng)).collect();
    let mut q: Vec<Exponent> = match cfg.regime {
        Some(UniformRegime::ConstantQ) => vec![cfg.q.sample(rng); cells],
        _ => (0..cells).map(|_| cfg.q.sample(rng)).collect(),
    };
    match cfg.regime {
        Some(UniformRegime::QleP) => {
            for (pi, qi) in p.iter_mut().zip(q.iter_mut()) {
                if qi.value() > pi.value() {
                    std::mem::swap(pi, qi);
                }
            }
        }
        Some(UniformRegime::HolderConjugate) => {
            for (pi, qi) in p.iter().zip(q.iter_mut()) {
                if !holder_conjugate_at(*pi, *qi) {
                    *qi = conjugate(*pi);
                }
            }
        }
        Some(UniformRegime::ConstantQ) | None => {}
    }
    ExponentPair::new(p, q).expect("aligned")
}

fn draw_sequence(cfg: &GenConfig, cells: usize, rng: &mut impl Rng) -> FunctionSequence {
    let len = rng.random_range(cfg.terms.0..=cfg.terms.1);
    let terms = (0..len)
        .map(|_| {
            let values = (0..cells)
                .map(|_| {
                    if rng.random::<f64>() < cfg.zero_probability {
                        0.0
                    } else {
                        log_uniform(rng, cfg.values)
                    }
                })
                .collect();
            SimpleFunction::new(values).expect("finite nonnegative")
        })
        .collect();
    FunctionSequence::new(terms).expect("nonempty")
}

/// Deterministic function of `cfg` (in particular of `cfg.seed`).
pub fn gen_instance(cfg: &GenConfig) -> Result<Instance> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let cells = rng.random_range(cfg.cells.0..=cfg.cells.1);
    let measures = (0..cells)
        .map(|_| log_uniform(&mut rng, cfg.measures))
        .collect();
    let partition = Partition::new(measures)?;
    let exponents = draw_exponents(cfg, cells, &mut rng);
    let f = draw_sequence(cfg, cells, &mut rng);
    let g = draw_sequence(cfg, cells, &mut rng);
    Ok(Instance {
        partition,
        exponents,
        f,
        g,
    })
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of the `index`-th instance of a search started from `seed`.
pub fn instance_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

fn two_cube_instance(q_on_second: Exponent) -> Instance {
    let chi0 = SimpleFunction::indicator(2, 0);
    let chi1 = SimpleFunction::indicator(2, 1);
    Instance {
        partition: Partition::unit_cells(2).expect("two cells"),
        exponents: ExponentPair::new(vec![Exponent::ONE; 2], vec![Exponent::ONE, q_on_second])
            .expect("aligned"),
        f: FunctionSequence::new(vec![chi0.clone(), chi1.clone()]).expect("nonempty"),
        g: FunctionSequence::new(vec![chi1, chi0]).expect("nonempty"),
    }
}

/// Two unit cells `Q0`, `Q1`; `p = 1`; `q = 1` on `Q0` and `inf` on `Q1`;
/// `f = (chi_Q0, chi_Q1)` and `g = (chi_Q1, chi_Q0)`. The norms are 1, 1 and
/// `||f + g|| = 3`.
pub fn counterexample_instance() -> Instance {
    two_cube_instance(Exponent::INFINITY)
}

/// [`counterexample_instance`] with the finite exponent `q0` on `Q1`.
pub fn bounded_q_instance(q0: f64) -> Result<Instance> {
    if !(q0 >= 1.0 && q0.is_finite()) {
        return Err(Error::InvalidExponent(q0));
    }
    Ok(two_cube_instance(Exponent::new(q0)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub q0: f64,
    pub check: TriangleCheck,
}

impl SweepRow {
    pub fn residual(&self) -> f64 {
        self.check.residual
    }
}

/// Triangle residual of [`bounded_q_instance`] at every grid point.
pub fn bounded_q_sweep(grid: &[f64], tol: f64) -> Result<Vec<SweepRow>> {
    check_tol(tol)?;
    if grid.is_empty() {
        return Err(Error::InvalidConfig("q grid must be nonempty".into()));
    }
    if grid.windows(2).any(|w| {
        !matches!(
            w[0].partial_cmp(&w[1]),
            Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal)
        )
    }) {
        return Err(Error::InvalidConfig("q grid must be ascending".into()));
    }
    grid.iter()
        .map(|&q0| {
            Ok(SweepRow {
                q0,
                check: bounded_q_instance(q0)?.triangle(tol)?,
            })
        })
        .collect()
}

/// First grid point whose residual exceeds [`VIOLATION_THRESHOLD`].
pub fn bounded_q_threshold(grid: &[f64], tol: f64) -> Result<Option<SweepRow>> {
    Ok(bounded_q_sweep(grid, tol)?
        .into_iter()
        .find(|r| r.check.violated()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchHit {
    /// Position in the instance stream.
    pub index: u64,
    /// Seed that regenerates the instance through [`gen_instance`].
    pub seed: u64,
    pub witness: ViolationWitness,
    /// Residual recomputed at `tol / 10`.
    pub recheck_residual: f64,
}

/// Evaluates `budget` generated instances and returns the certified
/// violations, largest residual first.
///
/// Output depends only on `(cfg, budget, tol)`; the thread count does not
/// matter because instance `i` is generated from [`instance_seed`].
pub fn search_violations(cfg: &GenConfig, budget: u64, tol: f64) -> Result<Vec<SearchHit>> {
    if budget == 0 {
        return Err(Error::ZeroBudget);
    }
    cfg.validate()?;
    check_tol(tol)?;
    let results: Vec<Result<Option<SearchHit>>> = (0..budget)
        .into_par_iter()
        .map(|index| {
            let seed = instance_seed(cfg.seed, index);
            let inst = gen_instance(&cfg.with_seed(seed))?;
            let Some(witness) =
                ViolationWitness::certify(inst.partition, inst.exponents, inst.f, inst.g, tol)?
            else {
                return Ok(None);
            };
            let recheck = triangle_residual(
                &witness.f,
                &witness.g,
                &witness.exponents,
                &witness.partition,
                tol / 10.0,
            )?;
            if recheck.residual <= VIOLATION_THRESHOLD / 2.0 {
                return Ok(None);
            }
            Ok(Some(SearchHit {
                index,
                seed,
                witness,
                recheck_residual: recheck.residual,
            }))
        })
        .collect();
    let mut hits = Vec::new();
    for r in results {
        if let Some(hit) = r? {
            hits.push(hit);
        }
    }
    hits.sort_by(|a, b| {
        b.witness
            .residual
            .total_cmp(&a.witness.residual)
            .then(a.index.cmp(&b.index))
    });
    Ok(hits)
}

/// Largest residuals seen by [`fuzz_identities`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IdentityFuzz {
    pub samples: u64,
    pub phi_identity_max: f64,
    pub hol1_max: f64,
    pub hol2_max: f64,
}

fn sample_pair(rng: &mut impl Rng) -> (Exponent, Exponent) {
    let dist = ExponentDistribution::default();
    let (a, b) = (dist.sample(rng), dist.sample(rng));
    if a.value() >= b.value() {
        (a, b)
    } else {
        (b, a)
    }
}

fn sample_nonnegative(rng: &mut impl Rng, range: (f64, f64)) -> f64 {
    if rng.random::<f64>() < 0.05 {
        0.0
    } else {
        log_uniform(rng, range)
    }
}

fn sample_holder_terms(rng: &mut impl Rng) -> HolderTerms {
    let scale = (1e-2, 1e2);
    HolderTerms {
        mu: (log_uniform(rng, scale), log_uniform(rng, scale)),
        lambda: (log_uniform(rng, scale), log_uniform(rng, scale)),
        value: (
            sample_nonnegative(rng, (1e-3, 1e3)),
            sample_nonnegative(rng, (1e-3, 1e3)),
        ),
    }
}

fn fuzz_one(rng: &mut impl Rng) -> Result<(f64, f64, f64)> {
    // phi identity: 1 <= q <= p <= inf
    let (p, q) = sample_pair(rng);
    let lambda = log_uniform(rng, (1e-2, 1e2));
    let t = sample_nonnegative(rng, (1e-2, 1e2));
    let phi = phi_identity_residual(p, q, lambda, t)?;

    // Hol1: 1 <= q <= p < inf
    let (p1, q1) = loop {
        let (p, q) = sample_pair(rng);
        if p.is_finite() {
            break (p, q);
        }
    };
    let hol1 = holder_form_residual(HolderKind::Hol1, p1, q1, &sample_holder_terms(rng))?;

    // Hol2: p < inf, q at or above the conjugate of p
    let p2 = loop {
        let p = ExponentDistribution::default().sample(rng);
        if p.is_finite() {
            break p;
        }
    };
    let mut q2 = ExponentDistribution::default().sample(rng);
    if !holder_conjugate_at(p2, q2) {
        q2 = conjugate(p2);
    }
    let hol2 = holder_form_residual(HolderKind::Hol2, p2, q2, &sample_holder_terms(rng))?;
    Ok((phi, hol1, hol2))
}

/// Evaluates the exponent identity and both Hölder-type inequalities on
/// `samples` seeded in-regime parameter draws.
pub fn fuzz_identities(seed: u64, samples: u64) -> Result<IdentityFuzz> {
    if samples == 0 {
        return Err(Error::ZeroBudget);
    }
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(seed, i));
            let (phi, hol1, hol2) = fuzz_one(&mut rng)?;
            Ok(IdentityFuzz {
                samples: 1,
                phi_identity_max: phi,
                hol1_max: hol1,
                hol2_max: hol2,
            })
        })
        .try_reduce(IdentityFuzz::default, |a, b| {
            Ok(IdentityFuzz {
                samples: a.samples + b.samples,
                phi_identity_max: a.phi_identity_max.max(b.phi_identity_max),
                hol1_max: a.hol1_max.max(b.hol1_max),
                hol2_max: a.hol2_max.max(b.hol2_max),
            })
        })
}
