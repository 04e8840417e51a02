//! Command-line front end. Every subcommand that writes files also writes
//! `manifest.tsv` (flat `key<TAB>value`) next to them.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{description_leakage, iqr_outliers, pearson_matrix, relation_distribution};
use crate::convert::{convert, SourceLayout};
use crate::error::{Error, Result};
use crate::eval::{evaluate_predictions, RankingMode};
use crate::kg::{load_dataset, write_dataset, Split};
use crate::synthetic::{synthetic_kg, SyntheticConfig};
use crate::transe::{evaluate_model_with, train_with_log, write_checkpoint, Hyperparams, Norm};
use crate::transform::{
    apply_recipe, default_suite, generate_suite, write_variant, RecipeKind, SuiteEntry, Targets, TransformRecipe,
};

pub const MANIFEST_FILE: &str = "manifest.tsv";

#[derive(Debug, Parser)]
#[command(
    name = "kgsynth",
    version,
    about = "Perturb, analyse and evaluate knowledge-graph completion datasets"
)]
pub struct Cli {
    /// Worker threads (0 = all cores). Use 1 for bit-exact baseline training.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply one recipe and write the variant dataset.
    Transform(TransformArgs),
    /// Write the base dataset and every default variant.
    Suite(SuiteArgs),
    /// Entity, relation and per-split triple counts.
    Stats(AnalysisArgs),
    /// Share of entities by number of distinct relations, per split.
    RelationDist(AnalysisArgs),
    /// Share of queries whose answer is named in the query entity's description.
    Leakage(AnalysisArgs),
    /// Train the TransE baseline and report filtered metrics.
    TrainBaseline(TrainArgs),
    /// Score ranked candidate lists from an external system.
    Evaluate(EvaluateArgs),
    /// Pearson correlation matrix of the columns of a TSV table.
    Correlate(TableArgs),
    /// IQR outliers of a list of numbers.
    Outliers(TableArgs),
    /// Convert a public dataset layout into this tool's layout.
    Convert(ConvertArgs),
    /// Generate a seeded synthetic dataset.
    Synthesize(SynthesizeArgs),
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// virtual-world, anonymized-entities, inconsistent-descriptions or fully-anonymized
    #[arg(long)]
    pub recipe: String,
    /// Comma list of entities, relations, descriptions (or letters e, r, d)
    #[arg(long)]
    pub targets: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma list of variant labels (default: all 13)
    #[arg(long)]
    pub only: Option<String>,
}

#[derive(Debug, Args)]
pub struct AnalysisArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Directory for the TSV report and manifest
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Checkpoint directory
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub dim: usize,
    #[arg(long, default_value_t = 1.0)]
    pub margin: f64,
    #[arg(long, default_value = "L1")]
    pub norm: String,
    #[arg(long, default_value_t = 0.01)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 100)]
    pub epochs: usize,
    #[arg(long, default_value_t = 1)]
    pub negatives: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "test")]
    pub split: String,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub predictions: PathBuf,
    /// Filtered ranking (the default)
    #[arg(long, conflicts_with = "raw")]
    pub filtered: bool,
    #[arg(long)]
    pub raw: bool,
    #[arg(long, default_value = "test")]
    pub split: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// TSV file. `correlate`: header row of labels, one column per series.
    /// `outliers`: numbers separated by whitespace.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    /// kgbert, kgbert-wn or wikidata5m
    #[arg(long)]
    pub layout: String,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthesizeArgs {
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub entities: usize,
    #[arg(long, default_value_t = 10)]
    pub relations: usize,
    /// Total triples; a tenth each goes to valid and test
    #[arg(long, default_value_t = 5000)]
    pub triples: usize,
    /// Use WN18RR's counts instead of the size flags
    #[arg(long)]
    pub wn18rr_like: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Run metadata written as `manifest.tsv`.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub command: String,
    pub input: String,
    pub output: String,
    pub seed: Option<u64>,
    pub params: Vec<(String, String)>,
    pub started: u64,
    pub finished: u64,
}

impl RunManifest {
    fn new(command: &str, input: &Path, output: &Path, seed: Option<u64>) -> Self {
        RunManifest {
            command: command.into(),
            input: input.display().to_string(),
            output: output.display().to_string(),
            seed,
            params: Vec::new(),
            started: unix_now(),
            finished: 0,
        }
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command\t{}", self.command);
        let _ = writeln!(out, "input\t{}", self.input);
        let _ = writeln!(out, "output\t{}", self.output);
        if let Some(s) = self.seed {
            let _ = writeln!(out, "seed\t{s}");
        }
        for (k, v) in &self.params {
            let _ = writeln!(out, "param.{k}\t{}", v.replace(['\t', '\n'], " "));
        }
        let _ = writeln!(out, "version\t{}", crate::VERSION);
        let _ = writeln!(out, "started_unix\t{}", self.started);
        let _ = writeln!(out, "finished_unix\t{}", self.finished);
        out
    }

    fn write(mut self, dir: &Path) -> Result<()> {
        self.finished = unix_now();
        write_text(&dir.join(MANIFEST_FILE), &self.to_tsv())
    }
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.class().exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| usage(format!("cannot start {} threads: {e}", cli.threads)))?;
    pool.install(|| dispatch(cli.command))
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Transform(a) => transform(a),
        Command::Suite(a) => suite(a),
        Command::Stats(a) => analysis(a, "stats", "stats.tsv", |kg| Ok(kg.stats().to_tsv())),
        Command::RelationDist(a) => analysis(a, "relation-dist", "relation_distribution.tsv", |kg| {
            Ok(relation_distribution(kg).to_tsv())
        }),
        Command::Leakage(a) => analysis(a, "leakage", "leakage.tsv", |kg| Ok(description_leakage(kg).to_tsv())),
        Command::TrainBaseline(a) => train_baseline(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Correlate(a) => correlate(a),
        Command::Outliers(a) => outliers(a),
        Command::Convert(a) => convert_cmd(a),
        Command::Synthesize(a) => synthesize(a),
    }
}

fn transform(a: TransformArgs) -> Result<()> {
    let kind: RecipeKind = a.recipe.parse()?;
    let targets: Targets = a.targets.parse()?;
    let recipe = TransformRecipe::new(kind, targets, a.seed)?;
    let manifest = RunManifest::new("transform", &a.input, &a.output, Some(a.seed))
        .param("recipe", kind.as_str())
        .param("targets", targets);
    let kg = load_dataset(&a.input)?;
    let (variant, mapping) = apply_recipe(&kg, &recipe)?;
    write_variant(&kg, &variant, &mapping, &a.output)?;
    manifest.write(&a.output)?;
    println!("wrote {} to {}", recipe.label(), a.output.display());
    Ok(())
}

fn suite(a: SuiteArgs) -> Result<()> {
    let entries: Vec<SuiteEntry> = match &a.only {
        Some(list) => list.split(',').map(|s| s.trim().parse()).collect::<Result<_>>()?,
        None => default_suite(),
    };
    let labels: Vec<String> = entries.iter().map(SuiteEntry::label).collect();
    let manifest = RunManifest::new("suite", &a.input, &a.output, Some(a.seed)).param("variants", labels.join(","));
    let kg = load_dataset(&a.input)?;
    let outcomes = generate_suite(&kg, a.seed, &a.output, &entries);
    let mut first_error = None;
    for o in outcomes {
        match o.result {
            Ok(()) => println!("{}\tok", o.label),
            Err(e) => {
                println!("{}\tfailed\t{e}", o.label);
                first_error.get_or_insert(e.context(format!("variant {}", o.label)));
            }
        }
    }
    manifest.write(&a.output)?;
    first_error.map_or(Ok(()), Err)
}

fn analysis(
    a: AnalysisArgs,
    command: &str,
    file: &str,
    f: impl FnOnce(&crate::kg::KnowledgeGraph) -> Result<String>,
) -> Result<()> {
    let manifest = a.output.as_ref().map(|o| RunManifest::new(command, &a.input, o, None));
    let kg = load_dataset(&a.input)?;
    let report = f(&kg)?;
    print!("{report}");
    if let (Some(out), Some(m)) = (&a.output, manifest) {
        write_text(&out.join(file), &report)?;
        m.write(out)?;
    }
    Ok(())
}

fn train_baseline(a: TrainArgs) -> Result<()> {
    let split: Split = a.split.parse()?;
    let hp = Hyperparams {
        dim: a.dim,
        margin: a.margin,
        norm: a.norm.parse::<Norm>()?,
        learning_rate: a.learning_rate,
        epochs: a.epochs,
        negatives_per_positive: a.negatives,
        seed: a.seed,
        workers: rayon::current_num_threads(),
    };
    let mut manifest = RunManifest::new("train-baseline", &a.input, &a.output, Some(a.seed)).param("split", split);
    for line in hp.to_manifest().lines() {
        if let Some((k, v)) = line.split_once('\t') {
            manifest = manifest.param(k, v);
        }
    }
    let kg = load_dataset(&a.input)?;
    let (model, log) = train_with_log(&kg, &hp)?;
    write_checkpoint(&model, &kg, &hp, &a.output)?;
    let report = evaluate_model_with(&model, &kg, split, RankingMode::Filtered)?;
    let mut losses = String::from("epoch\tprobe_loss\tmean_step_loss\n");
    for (i, p) in log.probe_loss.iter().enumerate() {
        let step = if i == 0 {
            String::new()
        } else {
            log.epoch_loss[i - 1].to_string()
        };
        let _ = writeln!(losses, "{i}\t{p}\t{step}");
    }
    write_text(&a.output.join("training_log.tsv"), &losses)?;
    write_text(&a.output.join("metrics.tsv"), &report.to_tsv())?;
    print!("{}", report.to_tsv());
    manifest.write(&a.output)
}

fn evaluate(a: EvaluateArgs) -> Result<()> {
    let mode = if a.raw { RankingMode::Raw } else { RankingMode::Filtered };
    let split: Split = a.split.parse()?;
    let manifest = a.output.as_ref().map(|o| {
        RunManifest::new("evaluate", &a.input, o, None)
            .param("predictions", a.predictions.display())
            .param("ranking", mode.as_str())
            .param("split", split)
    });
    let kg = load_dataset(&a.input)?;
    let report = evaluate_predictions(&kg, &a.predictions, mode, split)?;
    print!("{}", report.to_tsv());
    if let (Some(out), Some(m)) = (&a.output, manifest) {
        write_text(&out.join("metrics.tsv"), &report.to_tsv())?;
        m.write(out)?;
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_number(file: &str, line: usize, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::parse(file, line, format!("not a number: {s:?}")))
}

/// Header row of labels, then one row of values per observation.
pub fn parse_series_table(text: &str, file: &str) -> Result<Vec<(String, Vec<f64>)>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::parse(file, 1, "empty table"))?;
    let mut series: Vec<(String, Vec<f64>)> = header.split('\t').map(|l| (l.trim().to_string(), Vec::new())).collect();
    for (i, line) in lines {
        let cells: Vec<&str> = line.split('\t').collect();
        if cells.len() != series.len() {
            return Err(Error::parse(file, i + 1, format!("expected {} columns", series.len())));
        }
        for (s, c) in series.iter_mut().zip(cells) {
            s.1.push(parse_number(file, i + 1, c)?);
        }
    }
    Ok(series)
}

fn correlate(a: TableArgs) -> Result<()> {
    let file = a.input.display().to_string();
    let series = parse_series_table(&read_text(&a.input)?, &file)?;
    let report = pearson_matrix(&series)?.to_tsv();
    print!("{report}");
    if let Some(out) = &a.output {
        write_text(&out.join("correlation.tsv"), &report)?;
        RunManifest::new("correlate", &a.input, out, None).write(out)?;
    }
    Ok(())
}

fn outliers(a: TableArgs) -> Result<()> {
    let file = a.input.display().to_string();
    let text = read_text(&a.input)?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        for tok in line.split_whitespace() {
            values.push(parse_number(&file, i + 1, tok)?);
        }
    }
    let report = iqr_outliers(&values)?.to_tsv();
    print!("{report}");
    if let Some(out) = &a.output {
        write_text(&out.join("outliers.tsv"), &report)?;
        RunManifest::new("outliers", &a.input, out, None).write(out)?;
    }
    Ok(())
}

fn convert_cmd(a: ConvertArgs) -> Result<()> {
    let layout: SourceLayout = a.layout.parse()?;
    let manifest = RunManifest::new("convert", &a.input, &a.output, None).param("layout", &a.layout);
    let kg = convert(layout, &a.input)?;
    write_dataset(&kg, &a.output)?;
    print!("{}", kg.stats().to_tsv());
    manifest.write(&a.output)
}

fn synthesize(a: SynthesizeArgs) -> Result<()> {
    let cfg = if a.wn18rr_like {
        SyntheticConfig::wn18rr_like(a.seed)
    } else {
        if a.triples < 10 {
            return Err(usage("--triples must be at least 10"));
        }
        SyntheticConfig::small(a.entities, a.relations, a.triples, a.seed)
    };
    let manifest = RunManifest::new("synthesize", Path::new(""), &a.output, Some(a.seed))
        .param("entities", cfg.entities)
        .param("relations", cfg.relations)
        .param("train", cfg.train)
        .param("valid", cfg.valid)
        .param("test", cfg.test);
    let kg = synthetic_kg(&cfg)?;
    write_dataset(&kg, &a.output)?;
    print!("{}", kg.stats().to_tsv());
    manifest.write(&a.output)
}
