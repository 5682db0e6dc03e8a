//! Command-line pipeline: extract, seed, bootstrap, build, query, wsc.
//! Stage boundaries are files; diagnostics go to stderr, data to files or
//! stdout (queries).

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use evkg::bootstrap::BootstrapConfig;
use evkg::infer::{self, Direction, InferOptions};
use evkg::kg::KnowledgeGraph;
use evkg::pipeline::{
    self, parse_config_file, run_build, run_extract, run_seed, ExtractOptions,
};
use evkg::relation::RelationType;
use evkg::wsc;
use serde_json::json;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const PATTERN_SET_VERSION: &str = "patterns v1 (14 codes)";
const SCHEMA_VERSION: &str = "schema v1 (events/instances/relations jsonl)";

#[derive(Parser)]
#[command(
    name = "evkg",
    about = "Eventuality knowledge graph pipeline",
    version = concat!(env!("CARGO_PKG_VERSION"), "; patterns v1 (14 codes); schema v1 (events/instances/relations jsonl)")
)]
struct Cli {
    /// Plain key=value config file; command-line flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract eventualities and training instances from CoNLL-U input.
    Extract(ExtractArgs),
    /// Label instances through the seed connectives.
    Seed(SeedArgs),
    /// Bootstrap-expand the labeled set with per-category classifiers.
    Bootstrap(BootstrapArgs),
    /// Build the persisted graph from events and labeled instances.
    Build(BuildArgs),
    /// Query the graph (eventuality or relation retrieval).
    #[command(subcommand)]
    Query(QueryCommand),
    /// Resolve pronoun questions against the graph.
    Wsc(WscArgs),
}

#[derive(Args)]
struct ExtractArgs {
    /// CoNLL-U input files.
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long)]
    out_events: PathBuf,
    #[arg(long)]
    out_instances: PathBuf,
    /// Normalize UD-v2 labels (obj, obl, nsubj:pass, ...) to the native
    /// dialect.
    #[arg(long)]
    ud2: bool,
    /// Comma-separated clausal label set overriding the default.
    #[arg(long)]
    clausal_labels: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct SeedArgs {
    #[arg(long)]
    instances: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BootstrapArgs {
    #[arg(long)]
    instances: PathBuf,
    #[arg(long)]
    seeds: PathBuf,
    #[arg(long)]
    iterations: Option<u32>,
    #[arg(long)]
    tau0: Option<f64>,
    #[arg(long)]
    out: PathBuf,
    /// Telemetry JSONL path; defaults to <out>.telemetry.jsonl.
    #[arg(long)]
    telemetry: Option<PathBuf>,
    /// Directory for per-category classifier checkpoints.
    #[arg(long)]
    models_dir: Option<PathBuf>,
    /// Pretrained embedding file (word followed by its vector per line).
    #[arg(long)]
    embeddings: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    epochs: Option<usize>,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    events: PathBuf,
    #[arg(long)]
    relations: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Apply the core frequency filter.
    #[arg(long)]
    core: bool,
    #[arg(long)]
    min_freq: Option<u64>,
}

#[derive(Subcommand)]
enum QueryCommand {
    /// Rank eventualities reachable along a relation path.
    Tails(TailsArgs),
    /// Relation probabilities between two eventualities.
    Rels(RelsArgs),
}

#[derive(Args)]
struct TailsArgs {
    #[arg(long)]
    kg: PathBuf,
    /// Event words (or a full canonical key containing `|`).
    #[arg(long)]
    event: String,
    /// One or two comma-separated relation types.
    #[arg(long)]
    relations: String,
    #[arg(long)]
    topk: Option<usize>,
    /// Rank heads that reach the event instead of tails reached from it.
    #[arg(long)]
    reverse: bool,
}

#[derive(Args)]
struct RelsArgs {
    #[arg(long)]
    kg: PathBuf,
    #[arg(long)]
    event: String,
    #[arg(long)]
    event2: String,
    /// Optional: one relation for its probability, two for a two-hop path.
    #[arg(long)]
    relations: Option<String>,
    /// Leave co-occurrence out of the probability denominators.
    #[arg(long)]
    no_co_occurrence: bool,
}

#[derive(Args)]
struct WscArgs {
    #[arg(long)]
    kg: PathBuf,
    #[arg(long)]
    questions: PathBuf,
    #[arg(long)]
    report: PathBuf,
}

/// Exit codes: 0 ok, 1 fatal, 2 unknown eventuality, 3 ambiguous words.
fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match &cli.config {
        Some(path) => match parse_config_file(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
        None => BTreeMap::new(),
    };
    match run(cli.command, &config) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn cfg_parse<T: std::str::FromStr>(
    config: &BTreeMap<String, String>,
    key: &str,
) -> anyhow::Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match config.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|e| anyhow::anyhow!("config key `{key}`: {e}")),
    }
}

fn run(command: Command, config: &BTreeMap<String, String>) -> anyhow::Result<ExitCode> {
    match command {
        Command::Extract(args) => cmd_extract(args, config),
        Command::Seed(args) => cmd_seed(args),
        Command::Bootstrap(args) => cmd_bootstrap(args, config),
        Command::Build(args) => cmd_build(args, config),
        Command::Query(q) => match q {
            QueryCommand::Tails(args) => cmd_query_tails(args, config),
            QueryCommand::Rels(args) => cmd_query_rels(args),
        },
        Command::Wsc(args) => cmd_wsc(args),
    }
}

fn cmd_extract(args: ExtractArgs, config: &BTreeMap<String, String>) -> anyhow::Result<ExitCode> {
    let clausal = args
        .clausal_labels
        .or_else(|| config.get("clausal_labels").cloned())
        .map(|s| {
            s.split(',')
                .map(|l| l.trim().to_string())
                .filter(|l| !l.is_empty())
                .collect::<Vec<_>>()
        });
    let options = ExtractOptions {
        ud2: args.ud2 || cfg_parse::<bool>(config, "ud2")?.unwrap_or(false),
        clausal_labels: clausal,
        workers: args
            .workers
            .or(cfg_parse(config, "workers")?)
            .unwrap_or(1),
    };
    let report = run_extract(&args.input, &args.out_events, &args.out_instances, &options)?;
    for err in &report.parse_errors {
        eprintln!("warning: {err}");
    }
    eprintln!(
        "extracted {} occurrences ({} unique) from {} sentences ({} clausal skipped), {} instances",
        report.occurrences,
        report.unique_eventualities,
        report.sentences,
        report.clausal_skipped,
        report.instances
    );
    eprintln!("pattern tally:");
    for (code, n) in &report.per_pattern {
        eprintln!("  {code:<12} {n}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_seed(args: SeedArgs) -> anyhow::Result<ExitCode> {
    let report = run_seed(&args.instances, &args.out)?;
    eprintln!(
        "seeded {} of {} instances",
        report.seeds, report.instances
    );
    for (name, n) in &report.per_type {
        eprintln!("  {name:<18} {n}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bootstrap(
    args: BootstrapArgs,
    config: &BTreeMap<String, String>,
) -> anyhow::Result<ExitCode> {
    let mut bc = BootstrapConfig::default();
    if let Some(v) = cfg_parse(config, "tau0")? {
        bc.tau0 = v;
    }
    if let Some(v) = cfg_parse(config, "learning_rate")? {
        bc.learning_rate = v;
    }
    if let Some(v) = cfg_parse(config, "batch_size")? {
        bc.batch_size = v;
    }
    if let Some(v) = cfg_parse(config, "dropout")? {
        bc.dropout = v;
    }
    if let Some(v) = cfg_parse(config, "d_e")? {
        bc.d_e = v;
    }
    if let Some(v) = cfg_parse(config, "d_h")? {
        bc.d_h = v;
    }
    if let Some(v) = cfg_parse(config, "ffn_hidden")? {
        bc.ffn_hidden = v;
    }
    if let Some(v) = cfg_parse(config, "negative_ratio")? {
        bc.negative_ratio = v;
    }
    if let Some(v) = cfg_parse(config, "epochs")? {
        bc.epochs = v;
    }
    if let Some(v) = cfg_parse(config, "seed")? {
        bc.seed = v;
    }
    if let Some(v) = args.tau0 {
        bc.tau0 = v;
    }
    if let Some(v) = args.epochs {
        bc.epochs = v;
    }
    if let Some(v) = args.seed {
        bc.seed = v;
    }
    let iterations = args
        .iterations
        .or(cfg_parse(config, "iterations")?)
        .unwrap_or(bc.iterations);
    let telemetry = args.telemetry.unwrap_or_else(|| {
        let mut s = args.out.as_os_str().to_owned();
        s.push(".telemetry.jsonl");
        PathBuf::from(s)
    });
    let report = pipeline::run_bootstrap(
        &args.instances,
        &args.seeds,
        &bc,
        iterations,
        &args.out,
        &telemetry,
        args.models_dir.as_deref(),
        args.embeddings.as_deref(),
    )?;
    eprintln!(
        "bootstrap finished: {} of {} instances labeled after {} iterations",
        report.labeled_instances, report.total_instances, report.iterations
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_build(args: BuildArgs, config: &BTreeMap<String, String>) -> anyhow::Result<ExitCode> {
    let min_freq = args
        .min_freq
        .or(cfg_parse(config, "min_freq")?)
        .unwrap_or(2);
    let report = run_build(&args.events, &args.relations, &args.out, args.core, min_freq)?;
    eprintln!(
        "built graph: {} eventualities, {} edges{}",
        report.eventualities,
        report.edges,
        if report.core_applied {
            format!(" (core, min_freq {min_freq})")
        } else {
            String::new()
        }
    );
    Ok(ExitCode::SUCCESS)
}

/// Resolves an `--event` argument to a single key. A string containing `|`
/// is taken as a canonical key; otherwise the words are looked up and
/// ambiguity is reported with every matching key.
fn resolve_event(g: &KnowledgeGraph, raw: &str) -> Result<String, ExitCode> {
    if raw.contains('|') {
        if g.contains(raw) {
            return Ok(raw.to_string());
        }
        eprintln!("error: unknown eventuality key `{raw}`");
        return Err(ExitCode::from(2));
    }
    let words: Vec<&str> = raw.split_whitespace().collect();
    let matches = g.match_by_words(&words);
    match matches.len() {
        0 => {
            eprintln!("error: no eventuality with words `{raw}`");
            Err(ExitCode::from(2))
        }
        1 => Ok(matches[0].key()),
        _ => {
            eprintln!("error: `{raw}` is ambiguous; rerun with one of these keys:");
            for m in matches {
                eprintln!("  {}", m.key());
            }
            Err(ExitCode::from(3))
        }
    }
}

fn parse_relations(raw: &str) -> anyhow::Result<Vec<RelationType>> {
    raw.split(',')
        .map(|s| s.trim().parse::<RelationType>().map_err(Into::into))
        .collect()
}

fn load_graph(dir: &Path) -> anyhow::Result<KnowledgeGraph> {
    KnowledgeGraph::load(dir).with_context(|| format!("loading graph from {}", dir.display()))
}

fn cmd_query_tails(args: TailsArgs, config: &BTreeMap<String, String>) -> anyhow::Result<ExitCode> {
    let g = load_graph(&args.kg)?;
    let key = match resolve_event(&g, &args.event) {
        Ok(k) => k,
        Err(code) => return Ok(code),
    };
    let path = parse_relations(&args.relations)?;
    let topk = args.topk.or(cfg_parse(config, "topk")?).unwrap_or(10);
    let direction = if args.reverse {
        Direction::Reverse
    } else {
        Direction::Forward
    };
    let results = infer::retrieve(&g, &key, &path, topk, direction)?;
    let rendered: Vec<serde_json::Value> = results
        .iter()
        .map(|r| {
            let words = g
                .eventuality(&r.target)
                .map(|e| e.forms().collect::<Vec<_>>().join(" "))
                .unwrap_or_default();
            let mut v = json!({"target": r.target, "words": words, "p": r.probability});
            if let Some(s) = &r.support {
                v["support"] = json!(s);
            }
            v
        })
        .collect();
    let out = json!({
        "query": {
            "event": key,
            "relations": path.iter().map(|r| r.name()).collect::<Vec<_>>(),
            "direction": if args.reverse { "reverse" } else { "forward" },
            "topk": topk,
        },
        "results": rendered,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_query_rels(args: RelsArgs) -> anyhow::Result<ExitCode> {
    let g = load_graph(&args.kg)?;
    let head = match resolve_event(&g, &args.event) {
        Ok(k) => k,
        Err(code) => return Ok(code),
    };
    let tail = match resolve_event(&g, &args.event2) {
        Ok(k) => k,
        Err(code) => return Ok(code),
    };
    let options = InferOptions {
        include_co_occurrence: !args.no_co_occurrence,
    };
    let relations = args.relations.as_deref().map(parse_relations).transpose()?;
    let results = match relations.as_deref() {
        None => {
            let p = infer::p_rel_one(&g, &head, &tail, options)?;
            json!(p
                .iter()
                .map(|(r, v)| (r.name().to_string(), *v))
                .collect::<BTreeMap<_, _>>())
        }
        Some([r]) => {
            let p = infer::p_rel_one(&g, &head, &tail, options)?;
            json!({ r.name(): p.get(r).copied().unwrap_or(0.0) })
        }
        Some([r1, r2]) => {
            let (p, support) = infer::p_rel_two(&g, &head, &tail, *r1, *r2, options)?;
            json!({"path": [r1.name(), r2.name()], "p": p, "support": support})
        }
        Some(other) => bail!("expected one or two relations, got {}", other.len()),
    };
    let out = json!({
        "query": {"head": head, "tail": tail},
        "results": results,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_wsc(args: WscArgs) -> anyhow::Result<ExitCode> {
    let g = load_graph(&args.kg)?;
    let file = std::fs::File::open(&args.questions)
        .with_context(|| format!("opening {}", args.questions.display()))?;
    let questions = wsc::parse_questions(std::io::BufReader::new(file))?;
    let report = wsc::run_questions(&g, &questions);
    let f = std::fs::File::create(&args.report)
        .with_context(|| format!("creating {}", args.report.display()))?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(f), &report)?;
    eprintln!(
        "wsc: {} correct, {} wrong, {} abstained (a_p {}, a_o {:.3})",
        report.correct,
        report.wrong,
        report.na,
        report
            .a_p
            .map(|v| format!("{v:.3}"))
            .unwrap_or_else(|| "n/a".to_string()),
        report.a_o
    );
    Ok(ExitCode::SUCCESS)
}

// keep the two version strings referenced so they stay in sync with --version
#[allow(dead_code)]
const VERSION_NOTE: (&str, &str) = (PATTERN_SET_VERSION, SCHEMA_VERSION);
