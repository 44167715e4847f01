//! `gmetric` command-line front end.
//!
//! Every subcommand reads JSON files, writes a JSON (or DOT) document to
//! `--out` or stdout, and prints a one-line summary (to stdout when the
//! document goes to a file, to stderr otherwise). Failures print an error
//! object on stderr. Exit codes: 0 success, 1 invalid input, 2 search
//! exhausted.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use gmetric::eppa::{
    brute_force_witness, is_geodesic_consistent, semi_archimedean_witness, sigma_system, verify_witness,
    BruteForce, EppaError, VerifyFailure,
};
use gmetric::fraisse::{homogeneity_audit, saturate, FraisseError, SaturateOptions};
use gmetric::graph::{path_metric_completion, GraphError};
use gmetric::json::{
    ForbiddenJson, GraphJson, JsonError, MonoidSpec, PathExtensionJson, SpaceJson, WitnessJson,
};
use gmetric::monoid::{archimedean_classes, is_semi_archimedean, Dist, DistanceMonoid, MonoidError};
use gmetric::omission::{
    enumerate_path_extensions, free_witness_search, is_free, odd_perimeter_triangles, verify_parity,
    ForbiddenClass, OmissionError,
};
use gmetric::random::{random_free_space, GenerationError};
use gmetric::space::{free_amalgamation, MetricSpace, PartialIsometry, SpaceError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_EXHAUSTED: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "gmetric", version, about = "Generalised metric spaces and extension witnesses")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Summary,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write the document here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Document format; `dot` applies to commands producing a space.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct MonoidArgs {
    /// Monoid JSON file.
    #[arg(long, value_name = "FILE")]
    pub monoid: Option<PathBuf>,
    /// Use the truncated monoid R_n.
    #[arg(long, value_name = "N")]
    pub truncated: Option<usize>,
    /// Use the max-chain {0..n}.
    #[arg(long, value_name = "N")]
    pub max_chain: Option<usize>,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct ForbiddenArgs {
    /// Forbidden class JSON file.
    #[arg(long, value_name = "FILE")]
    pub forbidden: Option<PathBuf>,
    /// Use the odd-perimeter triangles F^c_n (odd n).
    #[arg(long, value_name = "N")]
    pub odd: Option<usize>,
}

#[derive(Args, Debug, Clone)]
#[group(required = false, multiple = false)]
pub struct OptionalForbiddenArgs {
    /// Forbidden class JSON file.
    #[arg(long, value_name = "FILE")]
    pub forbidden: Option<PathBuf>,
    /// Use the odd-perimeter triangles F^c_n (odd n).
    #[arg(long, value_name = "N")]
    pub odd: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a monoid table and report its archimedean classes.
    MonoidCheck {
        #[arg(long, value_name = "FILE")]
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Validate a metric space.
    SpaceCheck {
        #[arg(long, value_name = "FILE")]
        space: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Free amalgamation of two spaces over glued points.
    Amalgamate {
        #[arg(long, value_name = "FILE")]
        a: PathBuf,
        #[arg(long, value_name = "FILE")]
        b: PathBuf,
        /// Identify point X of A with point Y of B; repeatable.
        #[arg(long, value_name = "X:Y", required = true)]
        glue: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Forbidden distance tuples for a spectrum; optionally check a
    /// labelled graph for geodesic consistency.
    Sigma {
        #[command(flatten)]
        monoid: MonoidArgs,
        /// Comma-separated monoid element labels.
        #[arg(long, value_name = "LABELS")]
        s: String,
        /// Labelled graph JSON to test and complete.
        #[arg(long, value_name = "FILE")]
        graph: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Smallest witness by exhaustive search.
    Witness {
        #[arg(long, value_name = "FILE")]
        space: PathBuf,
        /// Largest witness considered [default: |A| + 6].
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
        max_size: Option<u32>,
        /// Comma-separated allowed distances [default: spectrum of the space].
        #[arg(long, value_name = "LABELS")]
        allowed: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Witness by the layered construction over archimedean classes.
    WitnessSa {
        #[arg(long, value_name = "FILE")]
        space: PathBuf,
        /// Size bound for the exhaustive base case.
        #[arg(long, value_name = "N", default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        base_max_size: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Smallest witness avoiding a forbidden class.
    WitnessFree {
        #[arg(long, value_name = "FILE")]
        space: PathBuf,
        #[command(flatten)]
        forbidden: ForbiddenArgs,
        #[arg(long, value_name = "N", default_value_t = 9, value_parser = clap::value_parser!(u32).range(1..))]
        max_size: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Check every partial isometry of a witness's base.
    Verify {
        #[arg(long, value_name = "FILE")]
        witness: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Enumerate path extensions of a space over a spectrum.
    PathExtensions {
        #[arg(long, value_name = "FILE")]
        space: PathBuf,
        /// Comma-separated monoid element labels.
        #[arg(long, value_name = "LABELS")]
        s: String,
        /// Skip carriers with more points than this.
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
        size_cap: Option<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Look for a short odd closed walk in a space over R_m.
    Parity {
        #[arg(long, value_name = "FILE")]
        space: PathBuf,
        /// Odd perimeter bound.
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[command(flatten)]
        output: Output,
    },
    /// The odd-perimeter triangle class F^c_n.
    ForbiddenOdd {
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Realise one-point extensions level by level.
    Saturate {
        #[arg(long, value_name = "FILE")]
        space: PathBuf,
        #[arg(long, value_name = "N", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        depth: u32,
        #[command(flatten)]
        forbidden: OptionalForbiddenArgs,
        #[arg(long, value_name = "N", default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        subspace_cap: u32,
        #[arg(long, value_name = "N", default_value_t = 256, value_parser = clap::value_parser!(u32).range(1..))]
        budget: u32,
        #[command(flatten)]
        output: Output,
    },
    /// List partial isometries that extend to no automorphism.
    Audit {
        #[arg(long, value_name = "FILE")]
        space: PathBuf,
        #[arg(long, value_name = "N", default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        size_cap: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Seeded random space avoiding a forbidden class.
    RandomFree {
        #[command(flatten)]
        monoid: MonoidArgs,
        #[command(flatten)]
        forbidden: ForbiddenArgs,
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

/// A failure with its exit code and machine-readable description.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub body: Value,
}

impl CliError {
    fn invalid(kind: &str, message: impl ToString) -> CliError {
        CliError {
            code: EXIT_INVALID,
            body: json!({"error": kind, "message": message.to_string()}),
        }
    }

    fn exhausted(message: impl ToString) -> CliError {
        CliError {
            code: EXIT_EXHAUSTED,
            body: json!({"error": "exhausted", "message": message.to_string()}),
        }
    }
}

impl From<MonoidError> for CliError {
    fn from(e: MonoidError) -> Self {
        match &e {
            MonoidError::Axiom { axiom, witness } => CliError {
                code: EXIT_INVALID,
                body: json!({"error": "monoid_axiom", "axiom": axiom, "witness": witness, "message": e.to_string()}),
            },
            _ => CliError::invalid("monoid", e),
        }
    }
}

impl From<SpaceError> for CliError {
    fn from(e: SpaceError) -> Self {
        CliError {
            code: EXIT_INVALID,
            body: json!({
                "error": "space",
                "condition": e.condition(),
                "witness": e.witness(),
                "message": e.to_string(),
            }),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Space(s) => s.into(),
            e => CliError::invalid("graph", e),
        }
    }
}

impl From<EppaError> for CliError {
    fn from(e: EppaError) -> Self {
        match e {
            EppaError::Exhausted { .. } => CliError::exhausted(e),
            EppaError::Space(s) => s.into(),
            EppaError::Monoid(m) => m.into(),
            e => CliError::invalid("eppa", e),
        }
    }
}

impl From<OmissionError> for CliError {
    fn from(e: OmissionError) -> Self {
        match e {
            OmissionError::Eppa(e) => e.into(),
            OmissionError::Space(s) => s.into(),
            OmissionError::Monoid(m) => m.into(),
            e => CliError::invalid("omission", e),
        }
    }
}

impl From<FraisseError> for CliError {
    fn from(e: FraisseError) -> Self {
        match e {
            FraisseError::Space(s) => s.into(),
            e => CliError::invalid("fraisse", e),
        }
    }
}

impl From<GenerationError> for CliError {
    fn from(e: GenerationError) -> Self {
        match e {
            GenerationError::BoundExceeded(_) => CliError::exhausted(e),
            GenerationError::Space(s) => s.into(),
            e => CliError::invalid("generation", e),
        }
    }
}

impl From<JsonError> for CliError {
    fn from(e: JsonError) -> Self {
        match e {
            JsonError::Monoid(m) => m.into(),
            JsonError::Space(s) => s.into(),
            JsonError::Graph(g) => g.into(),
            JsonError::Omission(o) => o.into(),
            e => CliError::invalid("input", e),
        }
    }
}

/// The produced document plus its summary line.
struct Outcome {
    document: String,
    summary: String,
}

impl Outcome {
    fn json<T: Serialize>(value: &T, summary: String) -> Outcome {
        let mut document = serde_json::to_string_pretty(value).expect("serializable output");
        document.push('\n');
        Outcome { document, summary }
    }

    /// JSON or DOT depending on `format`.
    fn space<T: Serialize>(value: &T, space: &MetricSpace, format: Format, summary: String) -> Outcome {
        match format {
            Format::Dot => Outcome {
                document: space.to_dot(false),
                summary,
            },
            _ => Outcome::json(value, summary),
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::invalid("io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid("input", format!("{}: {e}", path.display())))
}

fn read_space(path: &Path) -> Result<MetricSpace, CliError> {
    Ok(read_json::<SpaceJson>(path)?.build()?)
}

fn monoid_from(args: &MonoidArgs) -> Result<DistanceMonoid, CliError> {
    let spec = match (&args.monoid, args.truncated, args.max_chain) {
        (Some(path), _, _) => read_json::<MonoidSpec>(path)?,
        (_, Some(n), _) => MonoidSpec::Truncated { n },
        (_, _, Some(n)) => MonoidSpec::MaxChain { n },
        _ => return Err(CliError::invalid("usage", "a monoid is required")),
    };
    Ok(spec.build()?)
}

fn forbidden_from(path: Option<&PathBuf>, odd: Option<usize>) -> Result<Option<ForbiddenClass>, CliError> {
    match (path, odd) {
        (Some(p), _) => Ok(Some(read_json::<ForbiddenJson>(p)?.build()?)),
        (_, Some(n)) => Ok(Some(odd_perimeter_triangles(n)?)),
        _ => Ok(None),
    }
}

fn parse_elements(m: &DistanceMonoid, list: &str) -> Result<BTreeSet<Dist>, CliError> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            m.element_by_label(s)
                .ok_or_else(|| CliError::invalid("input", format!("{s:?} is not a monoid element")))
        })
        .collect()
}

fn element_labels(m: &DistanceMonoid, set: impl IntoIterator<Item = Dist>) -> Vec<String> {
    set.into_iter().map(|d| m.label(d).to_string()).collect()
}

fn map_labels(space: &MetricSpace, pairs: &[(usize, usize)]) -> Vec<(String, String)> {
    pairs
        .iter()
        .map(|&(x, y)| (space.label(x).to_string(), space.label(y).to_string()))
        .collect()
}

fn partial_json(space: &MetricSpace, p: &PartialIsometry) -> Value {
    json!(map_labels(space, p.pairs()))
}

fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::MonoidCheck { file, .. } => {
            let m = read_json::<MonoidSpec>(file)?.build()?;
            let classes = archimedean_classes(&m);
            let class_labels: Vec<Vec<String>> = classes
                .classes()
                .iter()
                .map(|c| element_labels(&m, c.iter().copied()))
                .collect();
            let semi = is_semi_archimedean(&m);
            let value = json!({
                "valid": true,
                "size": m.len(),
                "archimedean": m.is_archimedean(),
                "semi_archimedean": semi,
                "classes": class_labels,
            });
            let summary = format!(
                "valid monoid with {} elements, {} archimedean classes{}",
                m.len(),
                class_labels.len(),
                if semi { ", semi-archimedean" } else { "" }
            );
            Ok(Outcome::json(&value, summary))
        }
        Command::SpaceCheck { space, output } => {
            let s = read_space(space)?;
            let m = s.monoid();
            let value = json!({
                "valid": true,
                "points": s.len(),
                "spectrum": element_labels(m, s.spectrum()),
                "dominating_element": s.dominating_element().map(|d| m.label(d).to_string()),
            });
            let summary = format!("valid space with {} points", s.len());
            Ok(Outcome::space(&value, &s, output.format, summary))
        }
        Command::Amalgamate { a, b, glue, output } => {
            let a = read_space(a)?;
            let b = read_space(b)?;
            let pairs = glue
                .iter()
                .map(|g| {
                    let (x, y) = g
                        .split_once(':')
                        .ok_or_else(|| CliError::invalid("usage", format!("glue {g:?} is not X:Y")))?;
                    let i = a.index_of(x).ok_or_else(|| CliError::invalid("input", format!("unknown point {x:?} in A")))?;
                    let j = b.index_of(y).ok_or_else(|| CliError::invalid("input", format!("unknown point {y:?} in B")))?;
                    Ok((i, j))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let c = free_amalgamation(&a, &b, &pairs)?;
            let summary = format!("amalgam with {} points", c.len());
            Ok(Outcome::space(&SpaceJson::of(&c), &c, output.format, summary))
        }
        Command::Sigma { monoid, s, graph, .. } => {
            let m = Arc::new(monoid_from(monoid)?);
            let s_set = parse_elements(&m, s)?;
            let sys = sigma_system(&m, &s_set)?;
            let tuples: Vec<Vec<String>> = sys.tuples.iter().map(|t| element_labels(&m, t.iter().copied())).collect();
            let mut value = json!({
                "s": element_labels(&m, s_set.iter().copied()),
                "k": sys.k,
                "tuples": tuples,
            });
            let mut summary = format!("{} forbidden tuples, k = {}", tuples.len(), sys.k);
            if let Some(path) = graph {
                let mut gj: GraphJson = read_json(path)?;
                if gj.monoid.is_none() {
                    gj.monoid = Some(MonoidSpec::of(&m));
                }
                let g = gj.labeled_graph()?;
                if **g.monoid() != *m {
                    return Err(CliError::invalid("input", "graph uses a different monoid"));
                }
                let consistent = is_geodesic_consistent(&g, &sys)?;
                value["geodesic_consistent"] = json!(consistent);
                if consistent && !g.is_empty() {
                    let completion = path_metric_completion(&g, &[0])?;
                    value["completion"] = serde_json::to_value(SpaceJson::of(&completion)).expect("serializable");
                }
                summary.push_str(if consistent {
                    "; graph is geodesically consistent"
                } else {
                    "; graph is not geodesically consistent"
                });
            }
            Ok(Outcome::json(&value, summary))
        }
        Command::Witness {
            space,
            max_size,
            allowed,
            output,
        } => {
            let base = read_space(space)?;
            let allowed = match allowed {
                Some(list) => parse_elements(base.monoid(), list)?,
                None => base.spectrum(),
            };
            let max_size = max_size.map_or(base.len() + 6, |n| n as usize);
            let w = brute_force_witness(&base, max_size, &allowed)?;
            let summary = format!("witness with {} points for a {}-point base", w.size(), base.len());
            Ok(Outcome::space(&WitnessJson::of(&w), &w.witness, output.format, summary))
        }
        Command::WitnessSa {
            space,
            base_max_size,
            output,
        } => {
            let base = read_space(space)?;
            let sa = semi_archimedean_witness(
                &base,
                &BruteForce {
                    max_size: *base_max_size as usize,
                },
            )?;
            let summary = format!(
                "witness with {} points for a {}-point base, {} layers",
                sa.witness.size(),
                base.len(),
                sa.depth()
            );
            Ok(Outcome::space(&WitnessJson::of(&sa.witness), &sa.witness.witness, output.format, summary))
        }
        Command::WitnessFree {
            space,
            forbidden,
            max_size,
            output,
        } => {
            let base = read_space(space)?;
            let f = forbidden_from(forbidden.forbidden.as_ref(), forbidden.odd)?
                .ok_or_else(|| CliError::invalid("usage", "a forbidden class is required"))?;
            let w = free_witness_search(&base, &f, *max_size as usize)?;
            let summary = format!(
                "free witness with {} points for a {}-point base (free: {})",
                w.size(),
                base.len(),
                is_free(&w.witness, &f)
            );
            Ok(Outcome::space(&WitnessJson::of(&w), &w.witness, output.format, summary))
        }
        Command::Verify { witness, .. } => {
            let w = read_json::<WitnessJson>(witness)?.build()?;
            let report = verify_witness(&w);
            let failure = report.failure.as_ref().map(|f| match f {
                VerifyFailure::Embedding => json!({"kind": "embedding"}),
                VerifyFailure::BadCertificate(p) => json!({"kind": "bad_certificate", "partial": partial_json(&w.base, p)}),
                VerifyFailure::NoExtension(p) => json!({"kind": "no_extension", "partial": partial_json(&w.base, p)}),
            });
            if let Some(failure) = failure {
                return Err(CliError {
                    code: EXIT_INVALID,
                    body: json!({
                        "error": "verification",
                        "checked": report.checked,
                        "failure": failure,
                        "message": "witness failed verification",
                    }),
                });
            }
            let value = json!({"ok": true, "checked": report.checked});
            Ok(Outcome::json(&value, format!("witness verified: {} partial isometries", report.checked)))
        }
        Command::PathExtensions { space, s, size_cap, .. } => {
            let base = read_space(space)?;
            let s_set = parse_elements(base.monoid(), s)?;
            let exts = enumerate_path_extensions(&base, &s_set, size_cap.map(|c| c as usize))?;
            let docs: Vec<PathExtensionJson> = exts.iter().map(PathExtensionJson::of).collect();
            let summary = format!("{} path extensions", docs.len());
            Ok(Outcome::json(&docs, summary))
        }
        Command::Parity { space, n, .. } => {
            let s = read_space(space)?;
            let report = verify_parity(&s, *n as usize)?;
            let cycle = report
                .cycle
                .as_ref()
                .map(|c| c.iter().map(|&i| s.label(i).to_string()).collect::<Vec<_>>());
            let value = json!({"ok": report.ok(), "cycle": cycle, "perimeter": report.perimeter});
            let summary = match report.perimeter {
                None => format!("no odd closed walk of total at most {n}"),
                Some(p) => format!("odd closed walk of total {p}"),
            };
            Ok(Outcome::json(&value, summary))
        }
        Command::ForbiddenOdd { n, .. } => {
            let f = odd_perimeter_triangles(*n as usize)?;
            let summary = format!("{} triangles", f.len());
            Ok(Outcome::json(&ForbiddenJson::of(&f), summary))
        }
        Command::Saturate {
            space,
            depth,
            forbidden,
            subspace_cap,
            budget,
            output,
        } => {
            let start = read_space(space)?;
            let f = forbidden_from(forbidden.forbidden.as_ref(), forbidden.odd)?;
            let opts = SaturateOptions {
                subspace_cap: *subspace_cap as usize,
                budget: *budget as usize,
            };
            let report = saturate(&start, *depth as usize, f.as_ref(), opts)?;
            let value = json!({
                "start": SpaceJson::of(&report.start),
                "result": SpaceJson::of(&report.result),
                "depth": report.depth,
                "levels": report.levels,
                "partial": report.partial,
            });
            let summary = format!(
                "saturated to {} points over {} levels{}",
                report.result.len(),
                report.levels.len(),
                if report.partial { " (budget reached)" } else { "" }
            );
            Ok(Outcome::space(&value, &report.result, output.format, summary))
        }
        Command::Audit { space, size_cap, .. } => {
            let s = read_space(space)?;
            let bad = homogeneity_audit(&s, *size_cap as usize);
            let maps: Vec<Value> = bad.iter().map(|p| partial_json(&s, p)).collect();
            let value = json!({"homogeneous_up_to": if maps.is_empty() { Some(*size_cap) } else { None }, "failures": maps});
            let summary = format!("{} partial isometries do not extend", maps.len());
            Ok(Outcome::json(&value, summary))
        }
        Command::RandomFree {
            monoid,
            forbidden,
            n,
            seed,
            output,
        } => {
            let m = Arc::new(monoid_from(monoid)?);
            let f = forbidden_from(forbidden.forbidden.as_ref(), forbidden.odd)?
                .ok_or_else(|| CliError::invalid("usage", "a forbidden class is required"))?;
            let s = random_free_space(m, *n as usize, &f, *seed)?;
            let summary = format!("random free space with {} points (seed {seed})", s.len());
            Ok(Outcome::space(&SpaceJson::of(&s), &s, output.format, summary))
        }
    }
}

fn output_of(command: &Command) -> &Output {
    match command {
        Command::MonoidCheck { output, .. }
        | Command::SpaceCheck { output, .. }
        | Command::Amalgamate { output, .. }
        | Command::Sigma { output, .. }
        | Command::Witness { output, .. }
        | Command::WitnessSa { output, .. }
        | Command::WitnessFree { output, .. }
        | Command::Verify { output, .. }
        | Command::PathExtensions { output, .. }
        | Command::Parity { output, .. }
        | Command::ForbiddenOdd { output, .. }
        | Command::Saturate { output, .. }
        | Command::Audit { output, .. }
        | Command::RandomFree { output, .. } => output,
    }
}

/// Run with the given arguments (including the program name) and return
/// the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let output = output_of(&cli.command);
    match execute(&cli.command) {
        Ok(outcome) => {
            let write = match (&output.out, output.format) {
                (_, Format::Summary) => writeln!(stdout, "{}", outcome.summary),
                (Some(path), _) => fs::write(path, &outcome.document)
                    .and_then(|_| writeln!(stdout, "{}", outcome.summary)),
                (None, _) => stdout
                    .write_all(outcome.document.as_bytes())
                    .and_then(|_| writeln!(stderr, "{}", outcome.summary)),
            };
            match write {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(stderr, "{}", json!({"error": "io", "message": e.to_string()}));
                    EXIT_INVALID
                }
            }
        }
        Err(err) => {
            let _ = writeln!(stderr, "{}", err.body);
            err.code
        }
    }
}
