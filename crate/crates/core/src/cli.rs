//! Command-line front end: `classify`, `examples`, `decompose`, `sweep`
//! and `selftest`.
//!
//! Text output writes one `key = <json>` line per field so that it parses
//! back into the same document as `--format json`.

use std::collections::BTreeMap;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::arith::rational::{squarefree_part_int, Rational};
use crate::arith::{
    factor_k3_norm, norm_product, relevant_places, ArithError, BiquadParams, Classifier,
    KElement, NormTarget, Witnesses,
};
use crate::decomp::{build_hat_j, XShape};
use crate::f2la::{F2Vector, Subspace};
use crate::module::{
    format_functional_matrix, multiplicities, Family, KleinModule, ModuleError, SummandType,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_IN_FAMILY: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "klein4", about = "Klein four-group modules and biquadratic square classes")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[arg(long, default_value_t = 1, global = true)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000, global = true)]
    pub witness_bound: u64,
    /// Flip every Hilbert symbol at 2.
    #[arg(long, hide = true, global = true)]
    pub inject_fault: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the summand X for Q(√a1, √a2).
    #[command(allow_negative_numbers = true)]
    Classify { a1: i64, a2: i64 },
    /// Reproduce the five worked examples.
    Examples,
    /// Decompose a module given in the text format.
    Decompose { path: std::path::PathBuf },
    /// Classify every valid pair with |a1| ≤ |a2| ≤ N.
    Sweep { max_abs: u64 },
    /// Run the internal consistency checks.
    Selftest {
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub z4z2: [bool; 3],
    pub d4: [bool; 3],
    pub q8: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    /// `[x, y]` with `aᵢ = x² + y²`.
    pub z4z2: [Option<[String; 2]>; 3],
    /// `[x, y]` with `aᵢ = aⱼ y² − x²`, `j` the first index other than `i`.
    pub d4: [Option<[String; 2]>; 3],
    /// `[e, f]` with `|e|² = a1`, `|f|² = a2`, `e·f = 0`.
    pub q8: Option<[[String; 3]; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReportDoc {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub report: ReportDoc,
    pub im_t: Vec<String>,
    pub x_shape: String,
    pub witnesses: WitnessDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandDoc {
    pub kind: String,
    pub basis: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationDoc {
    pub gram_rank: usize,
    pub dims_add_up: bool,
    pub hat_j_verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeReportDoc {
    pub dim: usize,
    pub status: String,
    pub multiplicities: BTreeMap<String, usize>,
    pub functionals: Option<Vec<i64>>,
    /// Summands of Ĵ for Φ = M^G, as images of the canonical bases.
    pub generators: Vec<SummandDoc>,
    pub verification: VerificationDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleDoc {
    pub a1: i64,
    pub a2: i64,
    pub expected_shape: String,
    pub expected_im_t: Vec<String>,
    pub computed: Option<ClassifyReportDoc>,
    pub error: Option<String>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepDoc {
    pub max_abs: u64,
    pub records: Vec<ClassifyReportDoc>,
    pub histogram: BTreeMap<String, usize>,
}

/// Writes a document as `key = <json>` lines.
pub fn to_text<T: Serialize>(doc: &T) -> String {
    let value = serde_json::to_value(doc).expect("documents serialize");
    let mut out = String::new();
    if let serde_json::Value::Object(map) = value {
        for (k, v) in map {
            out.push_str(&format!("{k} = {v}\n"));
        }
    }
    out
}

/// Parses the output of [`to_text`].
pub fn from_text<T: DeserializeOwned>(text: &str) -> Result<T, String> {
    let mut map = serde_json::Map::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (k, v) = line
            .split_once(" = ")
            .ok_or_else(|| format!("malformed line {line:?}"))?;
        let v: serde_json::Value = serde_json::from_str(v).map_err(|e| e.to_string())?;
        map.insert(k.to_string(), v);
    }
    serde_json::from_value(serde_json::Value::Object(map)).map_err(|e| e.to_string())
}

fn bits(v: &F2Vector) -> String {
    v.to_string()
}

fn pair_doc(w: &Option<(Rational, Rational)>) -> Option<[String; 2]> {
    w.as_ref().map(|(x, y)| [x.to_string(), y.to_string()])
}

fn witness_doc(w: &Witnesses) -> WitnessDoc {
    WitnessDoc {
        z4z2: std::array::from_fn(|i| pair_doc(&w.z4z2[i])),
        d4: std::array::from_fn(|i| pair_doc(&w.d4[i])),
        q8: w
            .q8
            .as_ref()
            .map(|(e, f)| [e.clone().map(|c| c.to_string()), f.clone().map(|c| c.to_string())]),
    }
}

/// Classifies one parameter pair into a report document.
pub fn classify_doc(c: &Classifier, p: &BiquadParams) -> Result<ClassifyReportDoc, ArithError> {
    let x = c.classify_x(p)?;
    let w = c.witnesses(p, &x.report);
    let to_i64 = |n: &BigInt| n.to_i64().expect("parameters fit in i64");
    Ok(ClassifyReportDoc {
        a1: to_i64(p.a1()),
        a2: to_i64(p.a2()),
        a3: to_i64(p.a3()),
        report: ReportDoc {
            z4z2: x.report.z4z2,
            d4: x.report.d4,
            q8: x.report.q8,
        },
        im_t: x.im_t.basis().iter().map(bits).collect(),
        x_shape: x.shape.to_string(),
        witnesses: witness_doc(&w),
    })
}

/// The five worked examples: parameters, expected shape, and a basis of
/// the expected image of `T`.
pub fn worked_examples() -> Vec<(i64, i64, XShape, Vec<&'static str>)> {
    vec![
        (7, -5, XShape::Zero, vec![]),
        (7, -1, XShape::F2, vec!["010"]),
        (2, -1, XShape::OmegaMinus1, vec!["010", "001"]),
        (5, 13, XShape::F2PlusF2, vec!["011", "101"]),
        (5, 41, XShape::Undecided, vec!["100", "010", "001"]),
    ]
}

fn example_doc(c: &Classifier, a1: i64, a2: i64, shape: XShape, basis: &[&str]) -> ExampleDoc {
    let vs: Vec<F2Vector> = basis.iter().map(|s| s.parse().unwrap()).collect();
    let expected = Subspace::span(&vs, 3).unwrap();
    let expected_im_t: Vec<String> = expected.basis().iter().map(bits).collect();
    let outcome = BiquadParams::new(a1, a2).and_then(|p| classify_doc(c, &p));
    let (computed, error, matches) = match outcome {
        Ok(doc) => {
            let ok = doc.x_shape == shape.to_string() && doc.im_t == expected_im_t;
            (Some(doc), None, ok)
        }
        Err(e) => (None, Some(e.to_string()), false),
    };
    ExampleDoc {
        a1,
        a2,
        expected_shape: shape.to_string(),
        expected_im_t,
        computed,
        error,
        matches,
    }
}

/// Squarefree representatives `a` with `2 ≤ |a| ≤ n`, plus `−1`.
pub fn sweep_values(n: u64) -> Vec<i64> {
    let mut vals = vec![-1i64];
    for d in 2..=n as i64 {
        if squarefree_part_int(&BigInt::from(d)).unwrap() == BigInt::from(d) {
            vals.push(d);
            vals.push(-d);
        }
    }
    vals.sort_unstable();
    vals
}

/// All valid pairs with `|a1| ≤ |a2| ≤ n`, in lexicographic order.
pub fn sweep_pairs(n: u64) -> Vec<BiquadParams> {
    let vals = sweep_values(n);
    let mut out = Vec::new();
    for &a1 in &vals {
        for &a2 in &vals {
            if a1.abs() <= a2.abs() {
                if let Ok(p) = BiquadParams::new(a1, a2) {
                    out.push(p);
                }
            }
        }
    }
    out
}

pub fn sweep_doc(c: &Classifier, n: u64) -> Result<SweepDoc, ArithError> {
    let records: Vec<ClassifyReportDoc> = sweep_pairs(n)
        .par_iter()
        .map(|p| classify_doc(c, p))
        .collect::<Result<_, _>>()?;
    let mut histogram = BTreeMap::new();
    for r in &records {
        *histogram.entry(r.x_shape.clone()).or_insert(0) += 1;
    }
    Ok(SweepDoc {
        max_abs: n,
        records,
        histogram,
    })
}

pub fn decompose_doc(m: &KleinModule) -> Result<DecomposeReportDoc, ModuleError> {
    let gram_rank = crate::module::default_family().rank();
    let phi = m.fixed_submodule();
    let hat_j = build_hat_j(m, &phi);
    let generators = hat_j
        .as_ref()
        .map(|r| {
            r.summands()
                .map(|s| SummandDoc {
                    kind: s.kind.name(),
                    basis: s.basis.iter().map(bits).collect(),
                })
                .collect()
        })
        .unwrap_or_default();
    let hat_j_verified = hat_j.is_ok();
    match multiplicities(m) {
        Ok(mult) => Ok(DecomposeReportDoc {
            dim: m.dim(),
            status: "ok".into(),
            multiplicities: mult.iter().map(|(t, c)| (t.name(), c)).collect(),
            functionals: None,
            generators,
            verification: VerificationDoc {
                gram_rank,
                dims_add_up: mult.total_dim() == m.dim(),
                hat_j_verified,
            },
        }),
        Err(ModuleError::NotInFamily { functionals }) => Ok(DecomposeReportDoc {
            dim: m.dim(),
            status: "not_in_family".into(),
            multiplicities: BTreeMap::new(),
            functionals: Some(functionals),
            generators,
            verification: VerificationDoc {
                gram_rank,
                dims_add_up: false,
                hat_j_verified,
            },
        }),
        Err(e) => Err(e),
    }
}

fn random_rational(rng: &mut ChaCha8Rng, max: i64) -> Rational {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-max..=max);
    }
    Rational::new(BigInt::from(n), BigInt::from(rng.gen_range(1..=max)))
}

/// `(check name, passed, detail)` for each self-test.
pub fn selftest_checks(c: &Classifier, seed: u64) -> Vec<(&'static str, bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let family = Family::with_max_omega(2);
    out.push((
        "gram-rank",
        family.verify().is_ok(),
        format!("rank {} of {}", family.rank(), family.types().len()),
    ));

    let mut failures = 0;
    for _ in 0..200 {
        let a = random_rational(&mut rng, 10_000);
        let b = random_rational(&mut rng, 10_000);
        let places = relevant_places(&[&a, &b]).expect("inputs below 64 bits");
        let prod: i8 = places.iter().map(|v| c.symbol(&a, &b, *v).unwrap()).product();
        failures += usize::from(prod != 1);
    }
    out.push(("hilbert-product-formula", failures == 0, format!("{failures} of 200 pairs failed")));

    let pairs = [(7, -5), (2, -1), (5, 13), (-3, 10), (6, 35)];
    let mut failures = 0;
    for _ in 0..50 {
        let (a1, a2) = pairs[rng.gen_range(0..pairs.len())];
        let p = BiquadParams::new(a1, a2).unwrap();
        let k = KElement::new(&p, std::array::from_fn(|_| random_rational(&mut rng, 50)));
        let full = k.norm(NormTarget::F).as_rational().cloned();
        for t in [NormTarget::K1, NormTarget::K2, NormTarget::K3] {
            failures += usize::from(full.is_none() || k.norm(t).norm_down(t) != full);
        }
    }
    out.push(("norm-tower", failures == 0, format!("{failures} of 150 identities failed")));

    let mut failures = 0;
    for _ in 0..100 {
        let (a1, a2) = pairs[rng.gen_range(0..pairs.len())];
        let p = BiquadParams::new(a1, a2).unwrap();
        let f1 = random_rational(&mut rng, 50);
        let f2 = if rng.gen_bool(0.2) { Rational::zero() } else { random_rational(&mut rng, 50) };
        let f3 = random_rational(&mut rng, 50);
        let f4 = &f2 * &f3 / &f1;
        let k = KElement::new(&p, [f1, f2, f3, f4]);
        let ok = factor_k3_norm(&k)
            .map(|h| Some(norm_product(&p, &h)) == k.norm(NormTarget::K3).as_rational().cloned())
            .unwrap_or(false);
        failures += usize::from(!ok);
    }
    out.push(("k3-norm-factorization", failures == 0, format!("{failures} of 100 failed")));
    out
}

fn emit<T: Serialize>(out: &mut dyn Write, format: Format, doc: &T) -> std::io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(doc).unwrap()),
        Format::Text => write!(out, "{}", to_text(doc)),
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_CHECK_FAILED
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let classifier = Classifier {
        witness_bound: cli.witness_bound,
        fault_at_two: cli.inject_fault,
    };
    match &cli.command {
        Command::Classify { a1, a2 } => {
            if *a1 == 0 || *a2 == 0 {
                writeln!(err, "error: parameters must be nonzero")?;
                return Ok(EXIT_INPUT);
            }
            let r1 = squarefree_part_int(&BigInt::from(*a1)).unwrap();
            let r2 = squarefree_part_int(&BigInt::from(*a2)).unwrap();
            if r1 != BigInt::from(*a1) || r2 != BigInt::from(*a2) {
                writeln!(err, "warning: reduced ({a1}, {a2}) to squarefree ({r1}, {r2})")?;
            }
            let p = match BiquadParams::new(r1, r2) {
                Ok(p) => p,
                Err(e) => {
                    writeln!(err, "error: {e}")?;
                    return Ok(EXIT_INPUT);
                }
            };
            match classify_doc(&classifier, &p) {
                Ok(doc) => {
                    emit(out, cli.format, &doc)?;
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    writeln!(err, "error: {e}")?;
                    Ok(EXIT_CHECK_FAILED)
                }
            }
        }
        Command::Examples => {
            let docs: Vec<ExampleDoc> = worked_examples()
                .iter()
                .map(|(a1, a2, shape, basis)| example_doc(&classifier, *a1, *a2, *shape, basis))
                .collect();
            let matched = docs.iter().filter(|d| d.matches).count();
            match cli.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&docs).unwrap())?,
                Format::Text => {
                    for d in &docs {
                        let computed = match (&d.computed, &d.error) {
                            (Some(c), _) => c.x_shape.clone(),
                            (None, Some(e)) => format!("error: {e}"),
                            (None, None) => String::new(),
                        };
                        writeln!(
                            out,
                            "({}, {}) expected = {} computed = {} {}",
                            d.a1,
                            d.a2,
                            d.expected_shape,
                            computed,
                            if d.matches { "ok" } else { "MISMATCH" }
                        )?;
                    }
                    writeln!(out, "{matched}/{} matches", docs.len())?;
                }
            }
            Ok(if matched == docs.len() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Decompose { path } => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    writeln!(err, "error: {}: {e}", path.display())?;
                    return Ok(EXIT_INPUT);
                }
            };
            let module = match KleinModule::from_text(&text) {
                Ok(m) => m,
                Err(ModuleError::Invalid(v)) => {
                    writeln!(err, "error: {v}")?;
                    return Ok(EXIT_INPUT);
                }
                Err(e) => {
                    writeln!(err, "error: {e}")?;
                    return Ok(EXIT_INPUT);
                }
            };
            match decompose_doc(&module) {
                Ok(doc) => {
                    emit(out, cli.format, &doc)?;
                    Ok(if doc.status == "ok" { EXIT_OK } else { EXIT_NOT_IN_FAMILY })
                }
                Err(e) => {
                    writeln!(err, "error: {e}")?;
                    Ok(EXIT_CHECK_FAILED)
                }
            }
        }
        Command::Sweep { max_abs } => {
            if *max_abs < 2 {
                writeln!(err, "error: sweep bound must be at least 2")?;
                return Ok(EXIT_INPUT);
            }
            let doc = match sweep_doc(&classifier, *max_abs) {
                Ok(d) => d,
                Err(e) => {
                    writeln!(err, "error: {e}")?;
                    return Ok(EXIT_CHECK_FAILED);
                }
            };
            match cli.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap())?,
                Format::Text => {
                    for r in &doc.records {
                        write!(out, "{}", to_text(r))?;
                        writeln!(out)?;
                    }
                    for (shape, count) in &doc.histogram {
                        writeln!(out, "# {shape}: {count}")?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Selftest { verbose } => {
            if *verbose {
                write!(out, "{}", format_functional_matrix(&Family::with_max_omega(2)))?;
            }
            let checks = selftest_checks(&classifier, cli.seed);
            for (name, ok, detail) in &checks {
                writeln!(out, "{} {name}: {detail}", if *ok { "PASS" } else { "FAIL" })?;
            }
            if let Some((name, _, _)) = checks.iter().find(|(_, ok, _)| !ok) {
                writeln!(err, "selftest failed: {name}")?;
                return Ok(EXIT_CHECK_FAILED);
            }
            Ok(EXIT_OK)
        }
    }
}

/// Names of the nine summand types, in family order.
pub fn summand_names() -> Vec<String> {
    crate::module::default_family()
        .types()
        .iter()
        .map(|t: &SummandType| t.name())
        .collect()
}
