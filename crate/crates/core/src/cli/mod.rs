//! Command-line front end.
//!
//! Exit codes: 0 success, 2 parse or usage error, 3 invariant violation,
//! 4 certification failure.

pub mod instance;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::mixed::{inner_at, mixed_norm, FunctionSequence};
use crate::properties::{classify_regime, TriangleCheck, ViolationWitness, VIOLATION_THRESHOLD};
use crate::search::{self, GenConfig, SearchHit};
use crate::space::DEFAULT_TOL;

use instance::{InstanceFile, LoadedInstance};
use report::{fmt_num, key_value_csv, verdict, InnerRow, Quantity, Report};

/// Agreement required between the reproduced norms and (1, 1, 3).
pub const CERTIFICATE_TOLERANCE: f64 = 1e-9;
/// Largest residual accepted by `identity-check`.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(
    name = "varlp",
    version,
    about = "Variable-exponent Lebesgue and mixed l_q(L_p) norms"
)]
struct Cli {
    /// Relative bisection tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Output format (default depends on the command).
    #[arg(long, global = true, value_enum)]
    output: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mixed norm of one sequence of an instance file.
    Norm { file: PathBuf, sequence: String },
    /// Triangle inequality for two sequences of an instance file.
    CheckTriangle {
        file: PathBuf,
        seq_a: String,
        seq_b: String,
    },
    /// Certify the two-cube counterexample (norms 1, 1 and 3).
    #[command(name = "reproduce-thm2")]
    ReproduceThm2,
    /// Sweep the finite exponent q0 of the bounded variant.
    BoundedQ {
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32,64")]
        grid: Vec<f64>,
    },
    /// Randomized search for triangle-inequality violations.
    Search {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        /// JSON generator configuration; `--seed` overrides its seed.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Fuzz the exponent identity and the Hölder-type inequalities.
    IdentityCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
    },
}

#[derive(Debug)]
enum Failure {
    Parse(String),
    Invariant(String),
    Certification(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Invariant(_) => 3,
            Failure::Certification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Invariant(m) | Failure::Certification(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invariant(e.to_string())
    }
}

/// Output of a successful command, plus an optional certification failure
/// raised after the report is written.
struct Outcome {
    stdout: String,
    failure: Option<Failure>,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            failure: None,
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = dispatch(&cli);
    let (stdout, failure) = match result {
        Ok(o) => (o.stdout, o.failure),
        Err(f) => (String::new(), Some(f)),
    };
    let _ = out.write_all(stdout.as_bytes());
    match failure {
        None => 0,
        Some(f) => {
            let _ = writeln!(err, "varlp: {}", f.message());
            f.code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance(tol).into());
    }
    match &cli.command {
        Command::Norm { file, sequence } => cmd_norm(file, sequence, tol, cli.output),
        Command::CheckTriangle { file, seq_a, seq_b } => {
            cmd_check_triangle(file, seq_a, seq_b, tol, cli.output)
        }
        Command::ReproduceThm2 => cmd_reproduce(tol, cli.output),
        Command::BoundedQ { grid } => cmd_bounded_q(grid, tol, cli.output),
        Command::Search {
            seed,
            budget,
            config,
        } => cmd_search(*seed, *budget, config.as_deref(), tol, cli.output),
        Command::IdentityCheck { seed, budget } => {
            cmd_identity_check(*seed, *budget, tol, cli.output)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(InstanceFile, LoadedInstance), Failure> {
    let text = read_file(path)?;
    let file = InstanceFile::parse(&text)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let loaded = file
        .validate()
        .map_err(|e| Failure::Invariant(format!("{}: {e}", path.display())))?;
    Ok((file, loaded))
}

fn lookup<'a>(loaded: &'a LoadedInstance, name: &str) -> Result<&'a FunctionSequence, Failure> {
    loaded.sequence(name).ok_or_else(|| {
        let known: Vec<&str> = loaded.sequences.keys().map(String::as_str).collect();
        Failure::Parse(format!("no sequence named {name:?} (have {known:?})"))
    })
}

#[derive(Serialize)]
struct NormResult {
    sequence: String,
    regime: &'static str,
    norm: Quantity,
    /// Scale `mu` at which `inner` was evaluated: the feasible end of the
    /// norm's bracket.
    inner_scale: f64,
    inner: Vec<InnerRow>,
}

fn cmd_norm(path: &Path, name: &str, tol: f64, format: Option<Format>) -> Result<Outcome, Failure> {
    let (file, loaded) = load(path)?;
    let seq = lookup(&loaded, name)?;
    let norm = mixed_norm(seq, &loaded.exponents, &loaded.partition, tol)?;
    // the upper end of the bracket is known feasible; the midpoint may sit
    // just below a jump of the indicator
    let mu = norm.value + norm.accuracy;
    let inner = if mu > 0.0 && mu.is_finite() {
        seq.terms()
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let r = inner_at(
                    t.values(),
                    &loaded.exponents,
                    loaded.partition.measures(),
                    mu,
                    tol / 10.0,
                );
                InnerRow::new(i, &r)
            })
            .collect()
    } else {
        Vec::new()
    };
    let result = NormResult {
        sequence: name.to_string(),
        regime: classify_regime(&loaded.exponents).label(),
        norm: norm.into(),
        inner_scale: mu,
        inner,
    };
    let stdout = match format.unwrap_or(Format::Json) {
        Format::Json => Report::new("norm", tol, None, &file, &result).to_json(),
        Format::Csv => {
            let mut rows = vec![
                ("sequence", result.sequence.clone()),
                ("regime", result.regime.to_string()),
                ("norm", fmt_num(norm.value)),
                ("accuracy", fmt_num(norm.accuracy)),
                ("tolerance", fmt_num(tol)),
            ];
            let inner: Vec<(String, String)> = result
                .inner
                .iter()
                .map(|r| (format!("lambda_{}", r.index), fmt_num(r.lambda.0)))
                .collect();
            rows.push(("inner_scale", fmt_num(mu)));
            rows.extend(inner.iter().map(|(k, v)| (k.as_str(), v.clone())));
            key_value_csv(&rows)
        }
    };
    Ok(Outcome::ok(stdout))
}

#[derive(Serialize)]
struct TriangleResult {
    sequences: [String; 2],
    regime: &'static str,
    norm_a: Quantity,
    norm_b: Quantity,
    norm_sum: Quantity,
    residual: Quantity,
    threshold: f64,
    verdict: &'static str,
}

impl TriangleResult {
    fn new(a: &str, b: &str, regime: &'static str, c: &TriangleCheck) -> Self {
        TriangleResult {
            sequences: [a.to_string(), b.to_string()],
            regime,
            norm_a: c.norm_f.into(),
            norm_b: c.norm_g.into(),
            norm_sum: c.norm_sum.into(),
            residual: Quantity::new(c.residual, c.accuracy()),
            threshold: VIOLATION_THRESHOLD,
            verdict: verdict(c.violated()),
        }
    }

    fn csv(&self, tol: f64) -> String {
        key_value_csv(&[
            ("sequence_a", self.sequences[0].clone()),
            ("sequence_b", self.sequences[1].clone()),
            ("regime", self.regime.to_string()),
            ("norm_a", fmt_num(self.norm_a.value.0)),
            ("norm_b", fmt_num(self.norm_b.value.0)),
            ("norm_sum", fmt_num(self.norm_sum.value.0)),
            ("residual", fmt_num(self.residual.value.0)),
            ("accuracy", fmt_num(self.residual.accuracy)),
            ("threshold", fmt_num(self.threshold)),
            ("verdict", self.verdict.to_string()),
            ("tolerance", fmt_num(tol)),
        ])
    }
}

fn cmd_check_triangle(
    path: &Path,
    a: &str,
    b: &str,
    tol: f64,
    format: Option<Format>,
) -> Result<Outcome, Failure> {
    let (file, loaded) = load(path)?;
    let (f, g) = (lookup(&loaded, a)?, lookup(&loaded, b)?);
    let check =
        crate::properties::triangle_residual(f, g, &loaded.exponents, &loaded.partition, tol)?;
    let result = TriangleResult::new(a, b, classify_regime(&loaded.exponents).label(), &check);
    let stdout = match format.unwrap_or(Format::Json) {
        Format::Json => Report::new("check-triangle", tol, None, &file, &result).to_json(),
        Format::Csv => result.csv(tol),
    };
    Ok(Outcome::ok(stdout))
}

#[derive(Serialize)]
struct Certificate {
    regime: &'static str,
    expected: [f64; 3],
    norm_f: Quantity,
    norm_g: Quantity,
    norm_f_plus_g: Quantity,
    residual: Quantity,
    certificate_tolerance: f64,
    certified: bool,
}

fn cmd_reproduce(tol: f64, format: Option<Format>) -> Result<Outcome, Failure> {
    let inst = search::counterexample_instance();
    let check = inst.triangle(tol)?;
    let expected = [1.0, 1.0, 3.0];
    let got = [check.norm_f.value, check.norm_g.value, check.norm_sum.value];
    let certified = got
        .iter()
        .zip(&expected)
        .all(|(g, e)| (g - e).abs() <= CERTIFICATE_TOLERANCE);
    let cert = Certificate {
        regime: classify_regime(&inst.exponents).label(),
        expected,
        norm_f: check.norm_f.into(),
        norm_g: check.norm_g.into(),
        norm_f_plus_g: check.norm_sum.into(),
        residual: Quantity::new(check.residual, check.accuracy()),
        certificate_tolerance: CERTIFICATE_TOLERANCE,
        certified,
    };
    let sum = inst.f.plus(&inst.g)?;
    let file = InstanceFile::from_parts(
        &inst.partition,
        &inst.exponents,
        [("f", &inst.f), ("g", &inst.g), ("f_plus_g", &sum)],
    );
    let stdout = match format.unwrap_or(Format::Json) {
        Format::Json => Report::new("reproduce-thm2", tol, None, &file, &cert).to_json(),
        Format::Csv => key_value_csv(&[
            ("norm_f", fmt_num(got[0])),
            ("norm_g", fmt_num(got[1])),
            ("norm_f_plus_g", fmt_num(got[2])),
            ("residual", fmt_num(check.residual)),
            ("certified", certified.to_string()),
            ("tolerance", fmt_num(tol)),
        ]),
    };
    let failure = (!certified).then(|| {
        Failure::Certification(format!(
            "norms {got:?} differ from {expected:?} by more than {CERTIFICATE_TOLERANCE}"
        ))
    });
    Ok(Outcome { stdout, failure })
}

#[derive(Serialize)]
struct SweepEntry {
    q0: f64,
    residual: Quantity,
    norm_f: Quantity,
    norm_f_plus_g: Quantity,
    verdict: &'static str,
}

#[derive(Serialize)]
struct SweepResult {
    threshold: f64,
    first_violation: Option<f64>,
    rows: Vec<SweepEntry>,
}

fn cmd_bounded_q(grid: &[f64], tol: f64, format: Option<Format>) -> Result<Outcome, Failure> {
    let rows = search::bounded_q_sweep(grid, tol)?;
    let stdout = match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("q0,residual,accuracy,verdict\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_num(r.q0),
                    fmt_num(r.residual()),
                    fmt_num(r.check.accuracy()),
                    verdict(r.check.violated())
                ));
            }
            out
        }
        Format::Json => {
            let result = SweepResult {
                threshold: VIOLATION_THRESHOLD,
                first_violation: rows.iter().find(|r| r.check.violated()).map(|r| r.q0),
                rows: rows
                    .iter()
                    .map(|r| SweepEntry {
                        q0: r.q0,
                        residual: Quantity::new(r.residual(), r.check.accuracy()),
                        norm_f: r.check.norm_f.into(),
                        norm_f_plus_g: r.check.norm_sum.into(),
                        verdict: verdict(r.check.violated()),
                    })
                    .collect(),
            };
            #[derive(Serialize)]
            struct Input<'a> {
                grid: &'a [f64],
            }
            Report::new("bounded-q", tol, None, Input { grid }, result).to_json()
        }
    };
    Ok(Outcome::ok(stdout))
}

#[derive(Serialize)]
struct WitnessLine<'a> {
    tool: &'static str,
    version: &'static str,
    search_seed: u64,
    index: u64,
    seed: u64,
    tolerance: f64,
    regime: &'static str,
    norm_f: f64,
    norm_g: f64,
    norm_sum: f64,
    residual: f64,
    recheck_residual: f64,
    instance: &'a InstanceFile,
}

fn witness_file(w: &ViolationWitness) -> InstanceFile {
    InstanceFile::from_parts(&w.partition, &w.exponents, [("f", &w.f), ("g", &w.g)])
}

fn cmd_search(
    seed: u64,
    budget: u64,
    config: Option<&Path>,
    tol: f64,
    format: Option<Format>,
) -> Result<Outcome, Failure> {
    let cfg = match config {
        Some(path) => {
            let text = read_file(path)?;
            serde_json::from_str::<GenConfig>(&text)
                .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?
        }
        None => GenConfig::default(),
    }
    .with_seed(seed);
    let hits: Vec<SearchHit> = search::search_violations(&cfg, budget, tol)?;
    let mut out = String::new();
    match format.unwrap_or(Format::Json) {
        Format::Json => {
            for h in &hits {
                let file = witness_file(&h.witness);
                let line = WitnessLine {
                    tool: report::TOOL,
                    version: report::VERSION,
                    search_seed: seed,
                    index: h.index,
                    seed: h.seed,
                    tolerance: tol,
                    regime: classify_regime(&h.witness.exponents).label(),
                    norm_f: h.witness.norm_f,
                    norm_g: h.witness.norm_g,
                    norm_sum: h.witness.norm_sum,
                    residual: h.witness.residual,
                    recheck_residual: h.recheck_residual,
                    instance: &file,
                };
                out.push_str(
                    &serde_json::to_string(&line).expect("witness lines always serialize"),
                );
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str("index,seed,cells,terms_f,terms_g,norm_f,norm_g,norm_sum,residual\n");
            for h in &hits {
                let w = &h.witness;
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    h.index,
                    h.seed,
                    w.partition.len(),
                    w.f.len(),
                    w.g.len(),
                    fmt_num(w.norm_f),
                    fmt_num(w.norm_g),
                    fmt_num(w.norm_sum),
                    fmt_num(w.residual)
                ));
            }
        }
    }
    Ok(Outcome::ok(out))
}

#[derive(Serialize)]
struct IdentityResult {
    samples: u64,
    phi_identity_max: f64,
    hol1_max: f64,
    hol2_max: f64,
    limit: f64,
    passed: bool,
}

fn cmd_identity_check(
    seed: u64,
    budget: u64,
    tol: f64,
    format: Option<Format>,
) -> Result<Outcome, Failure> {
    let fuzz = search::fuzz_identities(seed, budget)?;
    let passed = [fuzz.phi_identity_max, fuzz.hol1_max, fuzz.hol2_max]
        .iter()
        .all(|&r| r <= IDENTITY_TOLERANCE);
    let result = IdentityResult {
        samples: fuzz.samples,
        phi_identity_max: fuzz.phi_identity_max,
        hol1_max: fuzz.hol1_max,
        hol2_max: fuzz.hol2_max,
        limit: IDENTITY_TOLERANCE,
        passed,
    };
    #[derive(Serialize)]
    struct Input {
        budget: u64,
    }
    let stdout = match format.unwrap_or(Format::Json) {
        Format::Json => {
            Report::new("identity-check", tol, Some(seed), Input { budget }, &result).to_json()
        }
        Format::Csv => key_value_csv(&[
            ("samples", fuzz.samples.to_string()),
            ("phi_identity_max", fmt_num(fuzz.phi_identity_max)),
            ("hol1_max", fmt_num(fuzz.hol1_max)),
            ("hol2_max", fmt_num(fuzz.hol2_max)),
            ("passed", passed.to_string()),
            ("seed", seed.to_string()),
        ]),
    };
    let failure =
        (!passed).then(|| Failure::Certification(format!("residual above {IDENTITY_TOLERANCE}")));
    Ok(Outcome { stdout, failure })
}
