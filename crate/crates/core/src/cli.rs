//! Command-line front end. Exit codes: 0 success, 1 usage, 2 invalid input,
//! 3 resource guard.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::distance::DistanceKind;
use crate::error::{Error, Result};
use crate::formula::{Model, Universe};
use crate::geometry::{render_svg, Point2};
use crate::instancegen::{random_instance, realize, replicated_blocks, VectorSpec};
use crate::io::{result_json, InstanceFile, Loaded};
use crate::maxcons::{maxcons, maxcons_disjunction};
use crate::merge::{merge_scheme, MergeResult};
use crate::postulates::{closest_pairs_merge, run_suite, Check, OperatorConfig};
use crate::weights::{WeightScheme, WeightVector};

#[derive(Debug, Parser)]
#[command(name = "beliefmerge", version, about = "Merge propositional belief bases with unknown source weights")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OperatorArgs {
    /// equal | expert[:A] | all | list:W1;W2 (e.g. list:2,1;1,2)
    #[arg(long)]
    scheme: Option<String>,
    /// drastic | hamming | table:FILE
    #[arg(long)]
    distance: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the models selected by merging.
    Merge {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the maximal consistent subsets of the profile (1-based indices).
    Maxcons {
        #[arg(long)]
        instance: PathBuf,
        /// Print the models of the disjunction of the maxcons instead.
        #[arg(long)]
        disjunction: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit an instance file whose constraint models have the given distance vectors.
    Realize {
        /// Vectors separated by `;`, entries by `,` (e.g. "3,0;1,1;0,3").
        #[arg(long)]
        vectors: String,
        /// Variables per formula; defaults to the largest entry.
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the replicated three-scenario instance with K blocks.
    Blocks {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a postulate check over a seeded random suite.
    Check {
        /// ic0..ic8 | majority | arbitration | disjunctive
        #[arg(long)]
        postulate: String,
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, default_value_t = 100)]
        suite: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Draw the distance points of a two-formula instance as SVG.
    Plot {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Models in the Hamming-closest pairs of the two profile formulae.
    ClosestPairs {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a seeded random instance file.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Probability of a variable appearing in a term, as a fraction.
        #[arg(long, default_value = "1/2")]
        density: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load(path: &Path) -> Result<Loaded> {
    InstanceFile::read(path)?.load()
}

fn parse_distance(text: &str) -> Result<DistanceKind> {
    match text.strip_prefix("table:") {
        Some(file) => DistanceKind::parse(&std::fs::read_to_string(file)?),
        None => DistanceKind::parse(text),
    }
}

/// Command-line flags override the file; defaults are `all` and `hamming`.
fn operator(op: &OperatorArgs, loaded: Option<&Loaded>) -> Result<OperatorConfig> {
    let kind = match &op.distance {
        Some(d) => parse_distance(d)?,
        None => loaded.and_then(|l| l.distance.clone()).unwrap_or(DistanceKind::Hamming),
    };
    let scheme = match &op.scheme {
        Some(s) => WeightScheme::parse(s)?,
        None => loaded.and_then(|l| l.scheme.clone()).unwrap_or(WeightScheme::AllPositive),
    };
    Ok(OperatorConfig::new(kind, scheme))
}

fn weight_text(w: &WeightVector) -> String {
    w.to_string()
}

fn models_text(u: &Universe, models: &BTreeSet<Model>) -> String {
    models.iter().map(|m| format!("{}\n", m.display(u))).collect()
}

fn to_json_line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("json values serialize");
    s.push('\n');
    s
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<()> {
    match command {
        Command::Merge { instance, op, json, out } => {
            let loaded = load(&instance)?;
            let cfg = operator(&op, Some(&loaded))?;
            let result = loaded.merge(&cfg.scheme, &cfg.kind)?;
            let with_witness = cfg.scheme == WeightScheme::AllPositive;
            let u = &loaded.universe;
            let text = if json {
                to_json_line(&result_json(u, &result, with_witness))
            } else {
                result
                    .models
                    .iter()
                    .map(|m| match (with_witness, result.witnesses.get(m)) {
                        (true, Some(w)) => format!("{}\t{}\n", m.display(u), weight_text(w)),
                        _ => format!("{}\n", m.display(u)),
                    })
                    .collect()
            };
            emit(&text, out.as_deref(), stdout)
        }
        Command::Maxcons { instance, disjunction, json, out } => {
            let loaded = load(&instance)?;
            let inst = loaded.flat_instance()?;
            let cons = maxcons(&inst)?;
            let u = inst.universe();
            let text = if json {
                let lists: Vec<Vec<usize>> = cons.iter().map(|c| c.indices.iter().map(|i| i + 1).collect()).collect();
                let mut v = json!({ "maxcons": lists });
                if disjunction {
                    let r = MergeResult { models: maxcons_disjunction(&inst)?, ..Default::default() };
                    v["models"] = result_json(u, &r, false)["models"].clone();
                }
                to_json_line(&v)
            } else if disjunction {
                models_text(u, &maxcons_disjunction(&inst)?)
            } else {
                cons.iter().map(|c| format!("{c}\n")).collect()
            };
            emit(&text, out.as_deref(), stdout)
        }
        Command::Realize { vectors, bound, out } => {
            let inst = realize(&VectorSpec::parse(&vectors)?, bound)?;
            emit(&InstanceFile::from_instance(&inst, None, None).to_json(), out.as_deref(), stdout)
        }
        Command::Blocks { k, out } => {
            let inst = replicated_blocks(k)?;
            emit(&InstanceFile::from_instance(&inst, None, None).to_json(), out.as_deref(), stdout)
        }
        Command::Check { postulate, op, suite, seed, json } => {
            let check: Check = postulate.parse()?;
            let cfg = operator(&op, None)?;
            let report = run_suite(check, &cfg, suite, seed)?;
            let text = if json {
                to_json_line(&serde_json::to_value(&report)?)
            } else {
                let mut s = format!(
                    "check\tscheme\tdistance\ttotal\tpass\tvacuous\tfail\n{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    report.check, cfg.scheme, cfg.kind, report.total, report.passed, report.vacuous, report.failed
                );
                if let Some((idx, verdict)) = &report.first_failure {
                    s.push_str(&format!(
                        "first failure (instance {idx}): {}\n",
                        serde_json::to_string(verdict)?
                    ));
                }
                s
            };
            emit(&text, None, stdout)
        }
        Command::Plot { instance, op, out } => {
            let loaded = load(&instance)?;
            let inst = loaded.flat_instance()?;
            if inst.m() != 2 {
                return Err(Error::Arity { expected: 2, found: inst.m() });
            }
            let cfg = operator(&op, Some(&loaded))?;
            let points = inst.points(&cfg.kind)?;
            let selected_models = merge_scheme(&inst, &cfg.scheme, &cfg.kind)?.models;
            let all: BTreeSet<Point2> = points.iter().map(|(_, d)| Point2::from_vector(d)).collect::<Result<_>>()?;
            let selected: BTreeSet<Point2> = points
                .iter()
                .filter(|(m, _)| selected_models.contains(m))
                .map(|(_, d)| Point2::from_vector(d))
                .collect::<Result<_>>()?;
            render_svg(&all, &selected, &out)
        }
        Command::ClosestPairs { instance, json, out } => {
            let loaded = load(&instance)?;
            let inst = loaded.flat_instance()?;
            if inst.m() != 2 {
                return Err(Error::Arity { expected: 2, found: inst.m() });
            }
            let u = inst.universe();
            let models = closest_pairs_merge(u, inst.profile().get(0), inst.profile().get(1))?;
            let text = if json {
                let r = MergeResult { models, ..Default::default() };
                to_json_line(&result_json(u, &r, false))
            } else {
                models_text(u, &models)
            };
            emit(&text, out.as_deref(), stdout)
        }
        Command::Random { n, m, seed, density, out } => {
            let density: BigRational = density
                .trim()
                .parse()
                .map_err(|_| Error::OutOfRange(format!("bad density `{density}`")))?;
            let inst = random_instance(n, m, seed, &density)?;
            emit(&InstanceFile::from_instance(&inst, None, None).to_json(), out.as_deref(), stdout)
        }
    }
}
