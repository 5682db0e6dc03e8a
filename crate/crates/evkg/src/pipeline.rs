//! File-to-file pipeline stages behind the CLI subcommands. Every stage
//! boundary is a file so any stage can be rerun or swapped.

use crate::bootstrap::{BootstrapConfig, BootstrapError};
use crate::conllu::{ClausalFilter, ConlluReader, DependencyGraph};
use crate::eventuality::EventualityRecord;
use crate::extract::extract_with_patterns;
use crate::kg::{KgError, KnowledgeGraph};
use crate::pattern::builtin_patterns;
use crate::relation::RelationType;
use crate::seeds::{build_instances, match_seed_standalone, seed_rules, TrainingInstance};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Record {
        path: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Kg(#[from] KgError),
    #[error(transparent)]
    Bootstrap(#[from] BootstrapError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn open_read(path: &Path) -> Result<BufReader<std::fs::File>, PipelineError> {
    std::fs::File::open(path)
        .map(BufReader::new)
        .map_err(|source| PipelineError::File {
            path: path.display().to_string(),
            source,
        })
}

fn open_write(path: &Path) -> Result<BufWriter<std::fs::File>, PipelineError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|source| PipelineError::File {
            path: path.display().to_string(),
            source,
        })
}

fn read_instances(path: &Path) -> Result<Vec<TrainingInstance>, PipelineError> {
    let mut out = Vec::new();
    for (i, line) in open_read(path)?.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let inst: TrainingInstance =
            serde_json::from_str(&line).map_err(|e| PipelineError::Record {
                path: path.display().to_string(),
                line: i + 1,
                message: e.to_string(),
            })?;
        out.push(inst);
    }
    Ok(out)
}

fn write_instances(path: &Path, instances: &[TrainingInstance]) -> Result<(), PipelineError> {
    let mut w = open_write(path)?;
    for inst in instances {
        serde_json::to_writer(&mut w, inst).map_err(std::io::Error::from)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ExtractOptions {
    pub ud2: bool,
    pub clausal_labels: Option<Vec<String>>,
    pub workers: usize,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            ud2: false,
            clausal_labels: None,
            workers: 1,
        }
    }
}

#[derive(Debug, Default)]
pub struct ExtractReport {
    pub sentences: usize,
    pub clausal_skipped: usize,
    pub parse_errors: Vec<String>,
    pub unique_eventualities: usize,
    pub occurrences: u64,
    pub instances: usize,
    pub per_pattern: BTreeMap<String, u64>,
}

/// Streams CoNLL-U input into deduplicated eventualities and same-sentence
/// training instances.
pub fn run_extract(
    inputs: &[PathBuf],
    out_events: &Path,
    out_instances: &Path,
    options: &ExtractOptions,
) -> Result<ExtractReport, PipelineError> {
    let filter = match &options.clausal_labels {
        Some(labels) => ClausalFilter::new(labels.iter().cloned()),
        None => ClausalFilter::default(),
    };
    let mut report = ExtractReport::default();
    let mut graphs: Vec<DependencyGraph> = Vec::new();
    for input in inputs {
        let reader = open_read(input)?;
        for item in ConlluReader::new(reader).with_ud2(options.ud2) {
            match item {
                Ok(g) => {
                    report.sentences += 1;
                    if filter.is_clausal(&g) {
                        report.clausal_skipped += 1;
                    } else {
                        graphs.push(g);
                    }
                }
                Err(e) => report.parse_errors.push(format!("{}: {e}", input.display())),
            }
        }
    }

    let patterns = builtin_patterns();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.max(1))
        .build()
        .expect("thread pool");
    let per_sentence: Vec<(Vec<EventualityRecord>, Vec<TrainingInstance>)> = pool.install(|| {
        graphs
            .par_iter()
            .map(|g| {
                let events = extract_with_patterns(g, &patterns);
                let instances = build_instances(g, &events);
                let records = events
                    .iter()
                    .map(EventualityRecord::from_eventuality)
                    .collect();
                (records, instances)
            })
            .collect()
    });

    // Deterministic merge: aggregate by key, write sorted.
    let mut aggregated: BTreeMap<String, EventualityRecord> = BTreeMap::new();
    let mut instance_count = 0usize;
    {
        let mut iw = open_write(out_instances)?;
        for (records, instances) in &per_sentence {
            for rec in records {
                report.occurrences += 1;
                *report.per_pattern.entry(rec.pattern.as_str().to_string()).or_insert(0) += 1;
                aggregated
                    .entry(rec.key.clone())
                    .and_modify(|r| r.freq += 1)
                    .or_insert_with(|| rec.clone());
            }
            for inst in instances {
                serde_json::to_writer(&mut iw, inst).map_err(std::io::Error::from)?;
                iw.write_all(b"\n")?;
                instance_count += 1;
            }
        }
        iw.flush()?;
    }
    let mut ew = open_write(out_events)?;
    for rec in aggregated.values() {
        serde_json::to_writer(&mut ew, rec).map_err(std::io::Error::from)?;
        ew.write_all(b"\n")?;
    }
    ew.flush()?;
    report.unique_eventualities = aggregated.len();
    report.instances = instance_count;
    Ok(report)
}

#[derive(Debug, Default)]
pub struct SeedReport {
    pub instances: usize,
    pub seeds: usize,
    pub per_type: BTreeMap<String, usize>,
}

/// Labels instances via the seed connectives and writes the labeled subset.
pub fn run_seed(instances_path: &Path, out_path: &Path) -> Result<SeedReport, PipelineError> {
    let rules = seed_rules();
    let mut report = SeedReport::default();
    let mut seeds = Vec::new();
    for mut inst in read_instances(instances_path)? {
        report.instances += 1;
        let fired = match_seed_standalone(&inst, &rules);
        if fired.is_empty() {
            continue;
        }
        for r in &fired {
            *report.per_type.entry(r.name().to_string()).or_insert(0) += 1;
        }
        inst.labels = fired;
        seeds.push(inst);
    }
    report.seeds = seeds.len();
    write_instances(out_path, &seeds)?;
    Ok(report)
}

#[derive(Debug)]
pub struct BootstrapRunReport {
    pub labeled_instances: usize,
    pub total_instances: usize,
    pub iterations: u32,
}

/// Runs the bootstrap loop file-to-file. `iterations == 0` short-circuits:
/// the output equals the seed file and the telemetry is empty.
pub fn run_bootstrap(
    instances_path: &Path,
    seeds_path: &Path,
    config: &BootstrapConfig,
    iterations: u32,
    out_path: &Path,
    telemetry_path: &Path,
    models_dir: Option<&Path>,
    embeddings_path: Option<&Path>,
) -> Result<BootstrapRunReport, PipelineError> {
    let seeds = read_instances(seeds_path)?;
    if iterations == 0 {
        write_instances(out_path, &seeds)?;
        open_write(telemetry_path)?.flush()?;
        return Ok(BootstrapRunReport {
            labeled_instances: seeds.len(),
            total_instances: seeds.len(),
            iterations: 0,
        });
    }
    let instances = read_instances(instances_path)?;
    let config = BootstrapConfig {
        iterations,
        ..config.clone()
    };
    let pretrained = embeddings_path
        .map(crate::bootstrap::load_embeddings)
        .transpose()?;
    let outcome =
        crate::bootstrap::bootstrap_with_embeddings(&instances, &seeds, &config, pretrained.as_ref())?;
    write_instances(out_path, &outcome.instances)?;
    let mut tw = open_write(telemetry_path)?;
    for entry in &outcome.telemetry {
        serde_json::to_writer(&mut tw, entry).map_err(std::io::Error::from)?;
        tw.write_all(b"\n")?;
    }
    tw.flush()?;
    if let Some(dir) = models_dir {
        std::fs::create_dir_all(dir)?;
        for (category, model) in &outcome.models {
            model.save(&dir.join(format!("{category}.json")))?;
        }
    }
    Ok(BootstrapRunReport {
        labeled_instances: outcome
            .instances
            .iter()
            .filter(|i| !i.labels.is_empty())
            .count(),
        total_instances: outcome.instances.len(),
        iterations,
    })
}

#[derive(Debug)]
pub struct BuildReport {
    pub eventualities: usize,
    pub edges: usize,
    pub core_applied: bool,
}

/// Builds the persisted graph from an events file and a (possibly labeled)
/// instances file: co-occurrence plus one weight unit per label.
pub fn run_build(
    events_path: &Path,
    relations_path: &Path,
    out_dir: &Path,
    core: bool,
    min_freq: u64,
) -> Result<BuildReport, PipelineError> {
    let mut g = KnowledgeGraph::new();
    let epath = events_path.display().to_string();
    for (i, line) in open_read(events_path)?.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: EventualityRecord =
            serde_json::from_str(&line).map_err(|e| PipelineError::Record {
                path: epath.clone(),
                line: i + 1,
                message: e.to_string(),
            })?;
        let freq = rec.freq.max(1);
        g.upsert_eventuality(&rec.into_eventuality(), freq);
    }
    let rpath = relations_path.display().to_string();
    for (i, inst) in read_instances(relations_path)?.into_iter().enumerate() {
        let relate = |g: &mut KnowledgeGraph, r: RelationType| {
            g.upsert_relation(&inst.e1_key, &inst.e2_key, r, 1.0)
        };
        relate(&mut g, RelationType::CoOccurrence).map_err(|e| PipelineError::Record {
            path: rpath.clone(),
            line: i + 1,
            message: e.to_string(),
        })?;
        for r in &inst.labels {
            relate(&mut g, *r).map_err(|e| PipelineError::Record {
                path: rpath.clone(),
                line: i + 1,
                message: e.to_string(),
            })?;
        }
    }
    let g = if core { g.filter_core(min_freq) } else { g };
    g.save(out_dir)?;
    Ok(BuildReport {
        eventualities: g.eventuality_count(),
        edges: g.edge_count(),
        core_applied: core,
    })
}

/// Plain `key = value` configuration file; `#` starts a comment.
pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, PipelineError> {
    let mut out = BTreeMap::new();
    let name = path.display().to_string();
    for (i, line) in open_read(path)?.lines().enumerate() {
        let line = line?;
        let line = line.split('#').next().unwrap_or("").trim().to_string();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(PipelineError::Record {
                path: name.clone(),
                line: i + 1,
                message: format!("expected key=value, got `{line}`"),
            });
        };
        out.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}
