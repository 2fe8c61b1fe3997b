//! `mms-lab`: check, build and experiment with MMS hypergraphs from the shell.
//!
//! Exit codes: 0 success or property holds, 1 property fails or nothing
//! found, 2 usage or validation error, 3 budget exceeded.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use mms_core::budget::Budget;
use mms_core::circulant::{
    build_circulant, circulant_mms_criterion, construct_regular_mms, is_coprime_circulant, CirculantSpec,
};
use mms_core::construct::{blowout, counterexample_regular, edge_disjoint_union, BlockPartition};
use mms_core::hypergraph::parse_rational;
use mms_core::partitions::{
    greedy_conflictless, is_conflictless, layered_partitions, maxm_bruteforce, maxm_upper_bound,
    prime_pairings, PartitionFamily,
};
use mms_core::random::mms_experiment;
use mms_core::verify::{check_mms_graph, check_mms_lp, check_mms_random, check_pseudo_matching_sufficient};
use mms_core::{Error, Graph, Hypergraph, MmsVerdict};

#[derive(Parser)]
#[command(name = "mms-lab", version, about = "Decide and construct MMS hypergraphs")]
struct Cli {
    /// Seed for every randomized command.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Budget overrides, e.g. `lp_instances=1000,graph_vertices=20`.
    #[arg(long, global = true)]
    budget: Option<String>,
    /// Write the payload here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a property.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Generate a hypergraph as JSON.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Conflictless partition families.
    #[command(subcommand)]
    Partitions(PartitionsCommand),
    /// Random graph experiments.
    #[command(subcommand)]
    Random(RandomCommand),
    /// Print a failure weighting for a hypergraph without the MMS property.
    Witness {
        /// Hypergraph JSON file, or `-` for standard input.
        file: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Graph,
    Lp,
    Fuzz,
    Pseudo,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Does the hypergraph have the MMS property?
    Mms {
        /// Hypergraph JSON file, or `-` for standard input.
        file: String,
        #[arg(long, value_enum, default_value = "lp")]
        method: Method,
        /// Weightings tried by `--method fuzz`.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Evaluate the circulant MMS criterion.
    Circulant(CirculantArgs),
}

#[derive(Args)]
struct CirculantArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated generators.
    #[arg(long, value_delimiter = ',', required = true)]
    gens: Vec<usize>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Circulant graph; the criterion report goes to standard error.
    Circulant(CirculantArgs),
    /// Connected d-regular MMS circulant on n vertices.
    RegularMms {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Blowout of a hypergraph by classes of size m.
    Blowout {
        file: String,
        #[arg(long)]
        m: usize,
        /// JSON list of blocks; block i replaces vertex i.
        #[arg(long)]
        partition: Option<String>,
    },
    /// The (2k+2)-regular graph on 4k+1 vertices without the MMS property.
    Counterexample {
        #[arg(long)]
        k: usize,
    },
    /// Edge-disjoint union of hypergraphs on the same vertex set.
    Union {
        #[arg(required = true)]
        files: Vec<String>,
    },
}

#[derive(Subcommand)]
enum PartitionsCommand {
    /// The binom(p, 2) pairings over Z_p.
    Prime {
        #[arg(long)]
        p: usize,
    },
    /// The binom(p, 2)^(m-1) layered partitions over Z_p x Z_m.
    Layered {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        m: usize,
    },
    /// Is a family JSON file conflictless?
    Verify {
        file: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Bounds on the largest conflictless family.
    Maxm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Exact value by exhaustive search.
        #[arg(long, conflicts_with = "greedy")]
        exact: bool,
        /// Seeded greedy family (k = 2 only).
        #[arg(long)]
        greedy: bool,
    },
}

#[derive(Subcommand)]
enum RandomCommand {
    /// MMS frequency in G(n, p).
    Experiment {
        #[arg(long)]
        n: usize,
        /// Edge probability as `a/b` or `a`.
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// CSV instead of JSON (also chosen by an `--out` path ending in .csv).
        #[arg(long)]
        csv: bool,
    },
}

enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::Capacity(_)) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Usage(msg) => f.write_str(msg),
        }
    }
}

struct Outcome {
    payload: String,
    code: u8,
}

impl Outcome {
    fn ok(payload: String) -> Self {
        Outcome { payload, code: 0 }
    }

    fn verdict(payload: String, holds: bool) -> Self {
        Outcome {
            payload,
            code: if holds { 0 } else { 1 },
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
    Ok(text)
}

fn read_hypergraph(path: &str) -> Result<Hypergraph, Failure> {
    Ok(Hypergraph::from_json(&read_input(path)?)?)
}

fn as_graph(h: Hypergraph) -> Result<Graph, Failure> {
    if h.k() != 2 {
        return Err(Failure::Usage(format!(
            "the graph method needs a 2-uniform input, got k = {}",
            h.k()
        )));
    }
    Ok(Graph::from_hypergraph(h)?)
}

/// Graph checker for graphs, LP oracle otherwise.
fn decide(h: &Hypergraph, budget: &Budget) -> Result<MmsVerdict, Failure> {
    if h.k() == 2 {
        Ok(check_mms_graph(&as_graph(h.clone())?, budget)?)
    } else {
        Ok(check_mms_lp(h, budget)?)
    }
}

fn criterion_report(spec: &CirculantSpec) -> serde_json::Value {
    let coprime = is_coprime_circulant(spec);
    let criterion = circulant_mms_criterion(spec).ok();
    json!({
        "n": spec.n,
        "generators": spec.generators,
        "coprime": coprime,
        "criterion": criterion,
    })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let mut budget = Budget::from_env()?;
    if let Some(spec) = &cli.budget {
        budget.apply(spec)?;
    }
    match &cli.command {
        Command::Check(CheckCommand::Mms { file, method, trials }) => {
            let h = read_hypergraph(file)?;
            match method {
                Method::Graph => {
                    let v = check_mms_graph(&as_graph(h.clone())?, &budget)?;
                    Ok(Outcome::verdict(v.to_json(&h), v.holds))
                }
                Method::Lp => {
                    let v = check_mms_lp(&h, &budget)?;
                    Ok(Outcome::verdict(v.to_json(&h), v.holds))
                }
                Method::Fuzz => {
                    let found = check_mms_random(&h, *trials, cli.seed);
                    let doc = json!({
                        "falsified": found.is_some(),
                        "weighting": found.as_ref().map(|w| {
                            w.values().iter().map(mms_core::hypergraph::format_rational).collect::<Vec<_>>()
                        }),
                    });
                    Ok(Outcome::verdict(doc.to_string(), found.is_none()))
                }
                Method::Pseudo => {
                    let ok = check_pseudo_matching_sufficient(&h, &budget)?;
                    Ok(Outcome::verdict(json!({ "sufficient": ok }).to_string(), ok))
                }
            }
        }
        Command::Check(CheckCommand::Circulant(args)) => {
            let spec = CirculantSpec::new(args.n, args.gens.clone())?;
            let holds = circulant_mms_criterion(&spec)?;
            Ok(Outcome::verdict(criterion_report(&spec).to_string(), holds))
        }
        Command::Gen(cmd) => {
            let h: Hypergraph = match cmd {
                GenCommand::Circulant(args) => {
                    let spec = CirculantSpec::new(args.n, args.gens.clone())?;
                    eprintln!("{}", criterion_report(&spec));
                    build_circulant(&spec)?.into_hypergraph()
                }
                GenCommand::RegularMms { n, d } => construct_regular_mms(*n, *d)?.into_hypergraph(),
                GenCommand::Blowout { file, m, partition } => {
                    let h = read_hypergraph(file)?;
                    let part = match partition {
                        Some(path) => {
                            let blocks: Vec<Vec<usize>> = serde_json::from_str(&read_input(path)?)
                                .map_err(|e| Failure::Usage(format!("partition {path}: {e}")))?;
                            Some(BlockPartition::new(*m, blocks)?)
                        }
                        None => None,
                    };
                    blowout(&h, *m, part.as_ref())?
                }
                GenCommand::Counterexample { k } => counterexample_regular(*k)?.into_hypergraph(),
                GenCommand::Union { files } => {
                    let parts = files.iter().map(|f| read_hypergraph(f)).collect::<Result<Vec<_>, _>>()?;
                    edge_disjoint_union(&parts)?
                }
            };
            Ok(Outcome::ok(h.to_json()))
        }
        Command::Partitions(cmd) => match cmd {
            PartitionsCommand::Prime { p } => Ok(Outcome::ok(prime_pairings(*p)?.to_json())),
            PartitionsCommand::Layered { p, m } => Ok(Outcome::ok(layered_partitions(*p, *m, &budget)?.to_json())),
            PartitionsCommand::Verify { file, k } => {
                let fam = PartitionFamily::from_json(&read_input(file)?)?;
                let ok = is_conflictless(&fam, *k, &budget)?;
                let doc = json!({ "members": fam.len(), "k": k, "conflictless": ok });
                Ok(Outcome::verdict(doc.to_string(), ok))
            }
            PartitionsCommand::Maxm { n, m, k, exact, greedy } => {
                let upper = maxm_upper_bound(*n, *m, *k)?;
                if *exact {
                    Ok(Outcome::ok(maxm_bruteforce(*n, *m, *k, &budget)?.to_string()))
                } else if *greedy {
                    if *k != 2 {
                        return Err(Failure::Usage("--greedy builds families for k = 2 only".into()));
                    }
                    let fam = greedy_conflictless(*n, *m, cli.seed, &budget)?;
                    let doc = json!({
                        "size": fam.len(),
                        "upper_bound": upper.to_string(),
                        "family": fam.to_doc(),
                    });
                    Ok(Outcome::ok(doc.to_string()))
                } else {
                    Ok(Outcome::ok(json!({ "upper_bound": upper.to_string() }).to_string()))
                }
            }
        },
        Command::Random(RandomCommand::Experiment { n, p, trials, csv }) => {
            let p = parse_rational(p).map_err(|e| Failure::Usage(format!("--p: {e}")))?;
            let report = mms_experiment(*n, *trials, &p, cli.seed, &budget)?;
            let wants_csv = *csv
                || cli
                    .out
                    .as_ref()
                    .and_then(|o| o.extension())
                    .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
            Ok(Outcome::ok(if wants_csv { report.to_csv() } else { report.to_json() }))
        }
        Command::Witness { file } => {
            let h = read_hypergraph(file)?;
            let v = decide(&h, &budget)?;
            match v.witness {
                Some(w) => Ok(Outcome::ok(w.weighting.to_json())),
                None => {
                    eprintln!("the hypergraph has the MMS property; there is no witness");
                    Ok(Outcome { payload: String::new(), code: 1 })
                }
            }
        }
    }
}

fn emit(out: &Option<PathBuf>, payload: &str) -> std::io::Result<()> {
    if payload.is_empty() {
        return Ok(());
    }
    let mut text = payload.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli.out, &outcome.payload) {
                eprintln!("mms-lab: cannot write output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("mms-lab: {e}");
            ExitCode::from(e.code())
        }
    }
}
