use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use smartgt::adaptive::{check_adaptive_model4, posthoc_candidates, run, Answerer, Builtin, Semantics, Strategy};
use smartgt::audit::{equivalence_audit, AuditMode};
use smartgt::constructions as cons;
use smartgt::family::{
    is_cancellative, is_completely_separating, is_intersection_cancellative, is_intersection_closed, is_pbd,
    is_separating, is_sperner, is_steiner_triple_system, Format,
};
use smartgt::knowledge::{check, Coalition};
use smartgt::search::{exists_solution, min_solution_size_with, Outcome, SearchSpec, DEFAULT_BUDGET};
use smartgt::{Error, Family, ModelSpec};

#[derive(Parser)]
#[command(name = "smartgt", version, about = "Group testing with smart elements")]
struct Cli {
    /// Output format: human-readable text or JSON.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
    /// Worker threads for search and audit.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    BinarySep,
    CompSep,
    Model3p,
    Sts,
    M4Sts,
    Pbd34,
    Pbd345,
    #[value(name = "m4-n8")]
    M4N8,
    M4Extend,
}

#[derive(Clone, Copy, ValueEnum)]
enum Adversary {
    Yes,
    No,
}

#[derive(Subcommand)]
enum Command {
    /// Build one of the known families.
    Construct {
        #[arg(long, value_enum)]
        what: What,
        #[arg(long)]
        n: Option<usize>,
        /// Write the family here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Disjoint blocks to drop (m4-sts).
        #[arg(long, default_value_t = 0)]
        matching: usize,
        /// Family placed on the extra points (m4-extend).
        #[arg(long)]
        base: Option<PathBuf>,
        /// The resolvable triple system has 6k+3 points (m4-extend).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Check whether a family solves a model.
    Verify {
        #[arg(long)]
        model: String,
        #[arg(short)]
        i: Option<usize>,
        #[arg(short)]
        j: Option<usize>,
        #[arg(long)]
        family: PathBuf,
    },
    /// Evaluate every structural predicate on a family.
    Predicates {
        #[arg(long)]
        family: PathBuf,
    },
    /// Exhaustively search for a solving family.
    Search {
        #[arg(long)]
        model: String,
        #[arg(short)]
        i: Option<usize>,
        #[arg(short)]
        j: Option<usize>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_size: Option<usize>,
        /// Allowed member sizes, comma separated.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        /// Only families closed under nonempty intersections.
        #[arg(long)]
        closed: bool,
        /// Skip families that are not the least relabeling of themselves.
        #[arg(long)]
        prune: bool,
        /// Refuse searches with more families than this (default 2^32, or SMARTGT_BUDGET).
        #[arg(long)]
        budget: Option<u128>,
        /// Report the smallest solving family.
        #[arg(long)]
        min: bool,
    },
    /// Run an adaptive strategy.
    Simulate {
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "adversary")]
        defective: Option<usize>,
        #[arg(long, value_enum)]
        adversary: Option<Adversary>,
        /// Check Model 4 with parameters I J for every defective.
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        check_model4: Option<Vec<usize>>,
        #[arg(long, default_value = "realized")]
        semantics: String,
    },
    /// Cross-check the structural characterizations.
    Audit {
        #[arg(long)]
        n: usize,
        /// Sample this many random families instead of enumerating all.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    /// Bad flags or unreadable input.
    Usage(String),
    /// A well-formed request with a negative answer.
    Negative(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unsolvable { .. } | Error::InvalidOrder { .. } | Error::Construction(_) => {
                Failure::Negative(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Negative(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    let json = cli.format == OutFormat::Json;
    match &cli.command {
        Command::Construct {
            what,
            n,
            out,
            matching,
            base,
            k,
        } => construct(*what, *n, out.as_deref(), *matching, base.as_deref(), *k, json),
        Command::Verify { model, i, j, family } => {
            let f = read_family(family)?;
            let model = parse_model(model, *i, *j)?;
            let violation = check(&f, model)?;
            if json {
                let value = json!({
                    "model": model.to_string(),
                    "solves": violation.is_none(),
                    "violation": violation.as_ref().map(ToString::to_string),
                });
                println!("{value}");
            } else {
                match &violation {
                    None => println!("solves {model}"),
                    Some(v) => println!("does not solve {model}: {v}"),
                }
            }
            Ok(violation.is_none())
        }
        Command::Predicates { family } => {
            let f = read_family(family)?;
            predicates(&f, json);
            Ok(true)
        }
        Command::Search {
            model,
            i,
            j,
            n,
            max_size,
            sizes,
            closed,
            prune,
            budget,
            min,
        } => {
            let mut spec = SearchSpec::new(parse_model(model, *i, *j)?, *n);
            spec.max_family_size = *max_size;
            spec.allowed_set_sizes = sizes.clone();
            spec.require_intersection_closed = *closed;
            spec.prune_symmetric = *prune;
            spec.budget = match budget {
                Some(b) => *b,
                None => env_budget()?,
            };
            search(&spec, *min, json)
        }
        Command::Simulate {
            strategy,
            n,
            defective,
            adversary,
            check_model4,
            semantics,
        } => {
            let strategy: Builtin = strategy.parse()?;
            strategy.validate(*n)?;
            let semantics: Semantics = semantics.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            simulate(&strategy, *n, *defective, *adversary, check_model4.as_deref(), semantics, json)
        }
        Command::Audit { n, samples, seed } => {
            let mode = match samples {
                Some(s) => AuditMode::Sampled { samples: *s, seed: *seed },
                None => AuditMode::Exhaustive,
            };
            let report = equivalence_audit(*n, mode)?;
            if json {
                println!("{}", report.to_json());
            } else {
                println!("audited {} families on n = {}", report.families, report.n);
                for e in &report.equivalences {
                    println!(
                        "{:<48} {:>8} counterexamples  ({} families satisfy both sides)",
                        e.equivalence.name(),
                        e.counterexamples,
                        e.both_true
                    );
                    if let Some(f) = &e.first_counterexample {
                        println!("  first counterexample: {}", f.to_json());
                    }
                }
            }
            Ok(report.counterexamples() == 0)
        }
    }
}

fn env_budget() -> Result<u128, Failure> {
    match std::env::var("SMARTGT_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("SMARTGT_BUDGET must be a nonnegative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn parse_model(name: &str, i: Option<usize>, j: Option<usize>) -> Result<ModelSpec, Failure> {
    match (name, i, j) {
        ("4", Some(i), Some(j)) => Ok(ModelSpec::Model4 { i, j }),
        ("4", _, _) => Err(Failure::Usage("model 4 needs -i and -j".into())),
        (_, None, None) => name.parse().map_err(|e: Error| Failure::Usage(e.to_string())),
        _ => Err(Failure::Usage("-i and -j apply only to model 4".into())),
    }
}

fn read_family(path: &Path) -> Result<Family, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Family::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn need_n(n: Option<usize>) -> Result<usize, Failure> {
    n.ok_or_else(|| Failure::Usage("--n is required".into()))
}

fn construct(
    what: What,
    n: Option<usize>,
    out: Option<&Path>,
    matching: usize,
    base: Option<&Path>,
    k: Option<usize>,
    json: bool,
) -> CmdResult {
    let f = match what {
        What::BinarySep => cons::binary_separating(need_n(n)?),
        What::CompSep => cons::sperner_code_family(need_n(n)?),
        What::Model3p => cons::model3prime_family(need_n(n)?)?,
        What::Sts => cons::steiner_triple_system(need_n(n)?)?,
        What::M4Sts => cons::model4_sts_minus_matching(need_n(n)?, matching)?,
        What::Pbd34 => cons::pbd34(need_n(n)?)?,
        What::Pbd345 => cons::pbd345(need_n(n)?)?,
        What::M4N8 => cons::model4_n8_family(),
        What::M4Extend => {
            let base = base.ok_or_else(|| Failure::Usage("m4-extend needs --base".into()))?;
            let k = k.ok_or_else(|| Failure::Usage("m4-extend needs --k".into()))?;
            cons::extend_model4_solution(&read_family(base)?, k)?
        }
    };
    let text = f.render(if json { Format::Json } else { Format::Text });
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(true)
}

fn predicates(f: &Family, json: bool) {
    let mut sizes: Vec<usize> = f.iter().map(|s| s.len()).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let dual = f.dual();
    let rows = [
        ("separating", is_separating(f)),
        ("completely_separating", is_completely_separating(f)),
        ("sperner", is_sperner(f.sets())),
        ("cancellative", is_cancellative(f.sets())),
        ("intersection_cancellative", is_intersection_cancellative(f.sets())),
        ("intersection_closed", is_intersection_closed(f.sets())),
        ("dual_sperner", is_sperner(dual.members())),
        ("dual_intersection_cancellative", is_intersection_cancellative(&dual.deduplicated())),
        ("pairwise_balanced", !sizes.is_empty() && is_pbd(f, &sizes)),
        ("steiner_triple_system", is_steiner_triple_system(f)),
    ];
    if json {
        let map: serde_json::Map<String, serde_json::Value> =
            rows.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        println!("{}", serde_json::Value::Object(map));
    } else {
        for (k, v) in rows {
            println!("{k:<32} {v}");
        }
    }
}

fn search(spec: &SearchSpec, min: bool, json: bool) -> CmdResult {
    if min {
        let found = min_solution_size_with(spec)?;
        match (&found, json) {
            (Some((k, w)), true) => println!("{{\"size\":{k},\"witness\":{}}}", w.to_json()),
            (None, true) => println!("{{\"size\":null}}"),
            (Some((k, w)), false) => println!("minimum size {k}, witness {}", w.to_json()),
            (None, false) => println!("no solving family within the cap"),
        }
        return Ok(found.is_some());
    }
    let result = exists_solution(spec)?;
    if json {
        println!("{}", result.to_json());
    } else {
        match &result.outcome {
            Outcome::Exists(w) => println!("exists: {} ({} families explored)", w.to_json(), result.explored),
            Outcome::NotExists => println!("not-exists ({} families explored)", result.explored),
            Outcome::Inconclusive => println!("inconclusive: size cap reached ({} families explored)", result.explored),
        }
    }
    Ok(matches!(result.outcome, Outcome::Exists(_)))
}

fn simulate(
    strategy: &Builtin,
    n: usize,
    defective: Option<usize>,
    adversary: Option<Adversary>,
    check_model4: Option<&[usize]>,
    semantics: Semantics,
    json: bool,
) -> CmdResult {
    let answerer = match (defective, adversary) {
        (Some(d), _) => Some(Answerer::FixedDefective(d)),
        (None, Some(Adversary::Yes)) => Some(Answerer::YesUnlessContradiction),
        (None, Some(Adversary::No)) => Some(Answerer::NoUnlessContradiction),
        (None, None) => None,
    };
    if answerer.is_none() && check_model4.is_none() {
        return Err(Failure::Usage("give --defective, --adversary or --check-model4".into()));
    }
    if let Some(answerer) = answerer {
        let t = run(strategy as &dyn Strategy, answerer, n)?;
        let d = t.consistent().first().expect("run ends with one consistent element");
        if json {
            println!("{}", t.to_json());
        } else {
            for (q, a) in t.steps() {
                println!("{q} {a}");
            }
            println!("defective {d} found after {} queries", t.len());
            for x in 1..=n {
                let me = Coalition::single(n, x)?;
                let cand = posthoc_candidates(strategy, n, d, &me, semantics)?;
                println!("element {x} suspects {}", cand.0);
            }
        }
    }
    match check_model4 {
        Some([i, j]) => {
            let ok = check_adaptive_model4(strategy, n, *i, *j, semantics)?;
            if json {
                println!("{{\"model4\":{{\"i\":{i},\"j\":{j}}},\"solves\":{ok}}}");
            } else {
                println!("Model 4 (i={i}, j={j}): {}", if ok { "solved" } else { "not solved" });
            }
            Ok(ok)
        }
        Some(_) => Err(Failure::Usage("--check-model4 takes two values".into())),
        None => Ok(true),
    }
}
