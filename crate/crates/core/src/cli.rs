//! The `rankdiff` command line. Exit codes: 0 success, 1 invalid or
//! unusable data, 2 configuration error.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::baselines::compute_scaling_factors;
use crate::config::{ConfigError, RunConfig};
use crate::corpus::{apply_filters, load_corpus, Corpus, CorpusError, CorpusPaths, Level, Scope};
use crate::divergence::{dispersion, dispersion_of, quartile_stats, range_summary, shift_stats, DivergenceSummary};
use crate::indicators::{Indicator, IndicatorError, ScoreBoard, ScoringContext};
use crate::manifest::RunManifest;
use crate::ranking::{compare, rank, ComparisonTable, RankingError};
use crate::report::{self, ReportError, ScopeReport};
use crate::synth::{generate, SynthConfig, SynthError};

#[derive(Debug, Parser)]
#[command(name = "rankdiff", version, about = "FSS and MNCS university rankings and how far they diverge")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a corpus and check every invariant.
    Validate(ValidateArgs),
    /// Write FSS and/or MNCS scoreboards for every rankable scope of a level.
    Score(ScoreArgs),
    /// Rank by both indicators and summarize the disagreement.
    Compare(CompareArgs),
    /// Generate a synthetic corpus.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Directory holding the five corpus CSV files.
    #[arg(long)]
    pub data: PathBuf,
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub start_year: Option<i32>,
    #[arg(long)]
    pub end_year: Option<i32>,
    /// Keep excluded document types in the citation baselines.
    #[arg(long)]
    pub baseline_include_all_doctypes: bool,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    #[arg(long)]
    pub out: PathBuf,
    /// Replace earlier results in the output directory.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Where to write the run manifest.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IndicatorChoice {
    Fss,
    Mncs,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Sds,
    Uda,
    Overall,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Self {
        match l {
            LevelArg::Sds => Level::Sds,
            LevelArg::Uda => Level::Uda,
            LevelArg::Overall => Level::Overall,
        }
    }
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long, value_enum, default_value = "both")]
    pub indicator: IndicatorChoice,
    #[arg(long, value_enum, default_value = "sds")]
    pub level: LevelArg,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["data", "from_scores"])))]
pub struct CompareArgs {
    /// Directory holding the five corpus CSV files.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Pre-scored CSV: unit,fss_score,mncs_score[,staff,fss_tiebreak,mncs_tiebreak].
    #[arg(long)]
    pub from_scores: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub start_year: Option<i32>,
    #[arg(long)]
    pub end_year: Option<i32>,
    #[arg(long)]
    pub baseline_include_all_doctypes: bool,
    #[arg(long, value_enum, default_value = "sds")]
    pub level: LevelArg,
    /// Restrict to one scope code; with --from-scores, the label of the run.
    #[arg(long)]
    pub scope: Option<String>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// TOML generator configuration.
    #[arg(long, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// small, chemistry-like or scale.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Data(_) => 1,
            CliError::Config(_) => 2,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::UnknownScope(_) => CliError::Config(e.to_string()),
            CorpusError::Invalid(v) => CliError::Data(
                v.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"),
            ),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<IndicatorError> for CliError {
    fn from(e: IndicatorError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<RankingError> for CliError {
    fn from(e: RankingError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::Invalid(_) | SynthError::Parse(_) | SynthError::Io(_) => CliError::Config(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

/// Initializes logging from `RANKDIFF_LOG` (default `warn`).
pub fn init_logging() {
    let env = env_logger::Env::default().filter_or("RANKDIFF_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Parses `args` and runs; returns the process exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let raw: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match run(cli, raw) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli, raw_args: Vec<String>) -> Result<(), CliError> {
    match cli.command {
        Command::Validate(a) => cmd_validate(&a, raw_args),
        Command::Score(a) => cmd_score(&a, raw_args),
        Command::Compare(a) => cmd_compare(&a, raw_args),
        Command::Synth(a) => cmd_synth(&a, raw_args),
    }
}

fn run_config(
    config: Option<&Path>,
    start_year: Option<i32>,
    end_year: Option<i32>,
    include_all: bool,
) -> Result<RunConfig, CliError> {
    let mut cfg = match config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(y) = start_year {
        cfg.window.start_year = y;
    }
    if let Some(y) = end_year {
        cfg.window.end_year = y;
    }
    cfg.filters.baseline_include_all_doctypes |= include_all;
    cfg.validate()?;
    Ok(cfg)
}

impl CorpusArgs {
    fn run_config(&self) -> Result<RunConfig, CliError> {
        run_config(
            self.config.as_deref(),
            self.start_year,
            self.end_year,
            self.baseline_include_all_doctypes,
        )
    }
}

fn load(data: &Path, cfg: &RunConfig, manifest: &mut RunManifest) -> Result<Corpus, CliError> {
    let paths = CorpusPaths::in_dir(data);
    for p in paths.all() {
        if p.exists() {
            manifest.add_input(p)?;
        }
    }
    Ok(load_corpus(&paths, cfg.window.clone())?)
}

const OUT_DIRS: [&str; 4] = ["scoreboards", "comparisons", "summaries", "manifest"];

/// Creates the output layout; earlier results are only replaced with `force`.
fn prepare_out(out: &OutArgs) -> Result<(), CliError> {
    let existing: Vec<PathBuf> = OUT_DIRS
        .iter()
        .map(|d| out.out.join(d))
        .filter(|p| p.read_dir().map(|mut r| r.next().is_some()).unwrap_or(false))
        .collect();
    if !existing.is_empty() {
        if !out.force {
            return Err(CliError::Config(format!(
                "{} already holds results; pass --force to replace them",
                out.out.display()
            )));
        }
        for p in existing {
            std::fs::remove_dir_all(p)?;
        }
    }
    for d in OUT_DIRS {
        std::fs::create_dir_all(out.out.join(d))?;
    }
    Ok(())
}

fn create(path: &Path, manifest: &mut RunManifest) -> Result<BufWriter<File>, CliError> {
    manifest.outputs.push(path.to_owned());
    Ok(BufWriter::new(File::create(path)?))
}

fn finish(manifest: &RunManifest, out: &Path) -> Result<(), CliError> {
    let path = manifest.write(out)?;
    log::info!("manifest written to {}", path.display());
    Ok(())
}

pub fn cmd_validate(a: &ValidateArgs, raw: Vec<String>) -> Result<(), CliError> {
    let cfg = a.corpus.run_config()?;
    let mut manifest = RunManifest::new("validate", raw).with_config(&cfg);
    let result = load(&a.corpus.data, &cfg, &mut manifest);
    let outcome = match result {
        Ok(corpus) => {
            let r = corpus.report();
            println!(
                "ok: {} publications, {} authorships, {} professors, {} universities, {} SDS",
                r.publications, r.authorships, r.professors, r.universities, r.sds
            );
            Ok(())
        }
        Err(e) => {
            if let CliError::Data(msg) = &e {
                for line in msg.lines() {
                    manifest.warnings.push(line.to_owned());
                }
            }
            Err(e)
        }
    };
    if let Some(out) = &a.out {
        finish(&manifest, out)?;
    }
    outcome
}

fn warn_dropped_and_missing(ctx: &ScoringContext<'_>, manifest: &mut RunManifest) {
    let missing: usize = ctx.scores.iter().map(|s| s.missing_baseline).sum();
    if missing > 0 {
        manifest.warn(format!("{missing} professor-publication terms had no citation baseline and were skipped"));
    }
}

pub fn cmd_score(a: &ScoreArgs, raw: Vec<String>) -> Result<(), CliError> {
    let cfg = a.corpus.run_config()?;
    let level = Level::from(a.level);
    let mut manifest = RunManifest::new("score", raw).with_config(&json!({
        "run": cfg,
        "indicator": format!("{:?}", a.indicator).to_lowercase(),
        "level": level.as_str(),
    }));
    prepare_out(&a.out)?;
    let raw_corpus = load(&a.corpus.data, &cfg, &mut manifest)?;
    let (corpus, filtered) = apply_filters(&raw_corpus, &cfg.filters);
    log::info!("filters: {filtered:?}");
    let table = compute_scaling_factors(&corpus);
    let sf = a.out.out.join("manifest").join("scaling_factors.csv");
    table
        .write_csv(create(&sf, &mut manifest)?)
        .map_err(|e| CliError::Data(e.to_string()))?;

    let ctx = ScoringContext::new(&corpus, &table, &cfg.filters)?;
    warn_dropped_and_missing(&ctx, &mut manifest);
    let scored = ctx.score_level(level, &cfg.filters)?;
    for nr in &scored.not_rankable {
        manifest.warn(format!("{} not ranked: {}", nr.scope, nr.reason));
    }
    let dir = a.out.out.join("scoreboards");
    if scored.boards.is_empty() && level == Level::Overall {
        manifest.warn("no university meets the overall professor threshold; board is empty");
        report::write_scoreboards(&[], create(&dir.join("overall.csv"), &mut manifest)?)?;
    }
    for b in &scored.boards {
        for d in &b.dropped {
            manifest.warn(format!(
                "{} dropped from {} ({}): {}",
                d.unit.university, b.scope, d.indicator, d.reason
            ));
        }
        let boards: Vec<&ScoreBoard> = match a.indicator {
            IndicatorChoice::Fss => vec![&b.fss],
            IndicatorChoice::Mncs => vec![&b.mncs],
            IndicatorChoice::Both => vec![&b.fss, &b.mncs],
        };
        let stem = b.scope.file_stem();
        report::write_scoreboards(&boards, create(&dir.join(format!("{stem}.csv")), &mut manifest)?)?;
        if a.indicator == IndicatorChoice::Both {
            report::write_wide_scores(b, create(&dir.join(format!("{stem}.wide.csv")), &mut manifest)?)?;
        }
    }
    println!(
        "scored {} scope(s) at {} level; {} not rankable",
        scored.boards.len(),
        level.as_str(),
        scored.not_rankable.len()
    );
    finish(&manifest, &a.out.out)
}

struct ScopeResult {
    comparison: ComparisonTable,
    shifts: DivergenceSummary,
    quartiles: crate::divergence::QuartileSummary,
    dispersion: Vec<crate::divergence::DispersionStats>,
}

fn summarize(comparison: ComparisonTable, dispersion: Vec<crate::divergence::DispersionStats>, manifest: &mut RunManifest) -> ScopeResult {
    let label = comparison.label.clone();
    for (name, groups) in [("FSS", &comparison.ties.0), ("MNCS", &comparison.ties.1)] {
        for g in groups {
            let ids: Vec<&str> = g.iter().map(|u| u.as_str()).collect();
            manifest.warn(format!("{label}: tied {name} scores for {}", ids.join(", ")));
        }
    }
    if comparison.n() < 3 {
        manifest.warn(format!("{label}: fewer than 3 units, correlations omitted"));
    }
    let shifts = shift_stats(&comparison);
    let quartiles = quartile_stats(&comparison);
    ScopeResult {
        comparison,
        shifts,
        quartiles,
        dispersion,
    }
}

fn write_compare_outputs(
    out: &Path,
    title: &str,
    results: &[(String, ScopeResult)],
    ranges: &[crate::divergence::RangeSummary],
    manifest: &mut RunManifest,
) -> Result<(), CliError> {
    let cdir = out.join("comparisons");
    let sdir = out.join("summaries");
    for (stem, r) in results {
        report::write_comparison(&r.comparison, create(&cdir.join(format!("{stem}.csv")), manifest)?)?;
    }
    let shifts: Vec<_> = results.iter().map(|(_, r)| r.shifts.clone()).collect();
    let quartiles: Vec<_> = results.iter().map(|(_, r)| r.quartiles.clone()).collect();
    let disp: Vec<_> = results.iter().flat_map(|(_, r)| r.dispersion.clone()).collect();
    report::write_shift_summaries(&shifts, create(&sdir.join("shifts.csv"), manifest)?)?;
    report::write_quartile_summaries(&quartiles, create(&sdir.join("quartiles.csv"), manifest)?)?;
    report::write_dispersion(&disp, create(&sdir.join("dispersion.csv"), manifest)?)?;
    if !ranges.is_empty() {
        report::write_ranges(ranges, create(&sdir.join("ranges.csv"), manifest)?)?;
    }
    let views: Vec<ScopeReport<'_>> = results
        .iter()
        .map(|(_, r)| ScopeReport {
            comparison: &r.comparison,
            shifts: &r.shifts,
            quartiles: &r.quartiles,
            dispersion: &r.dispersion,
        })
        .collect();
    let md = report::render_markdown(title, &views, ranges);
    let path = sdir.join("report.md");
    manifest.outputs.push(path.clone());
    std::fs::write(path, md)?;
    Ok(())
}

pub fn cmd_compare(a: &CompareArgs, raw: Vec<String>) -> Result<(), CliError> {
    let level = Level::from(a.level);
    let cfg = run_config(a.config.as_deref(), a.start_year, a.end_year, a.baseline_include_all_doctypes)?;
    let mut manifest = RunManifest::new("compare", raw);
    if let Some(scores) = &a.from_scores {
        manifest = manifest.with_config(&json!({ "from_scores": scores, "scope": a.scope }));
        if !scores.is_file() {
            return Err(CliError::Config(format!("scores file {} not found", scores.display())));
        }
        prepare_out(&a.out)?;
        manifest.add_input(scores)?;
        let rows = report::read_replay(File::open(scores)?)?;
        let label = a.scope.clone().unwrap_or_else(|| {
            scores
                .file_stem()
                .map_or_else(|| "scores".to_owned(), |s| s.to_string_lossy().into_owned())
        });
        let cmp = report::compare_replay(&label, &rows)?;
        let mut disp = Vec::new();
        for (ind, vals) in [(Indicator::Fss, cmp.fss_scores()), (Indicator::Mncs, cmp.mncs_scores())] {
            match dispersion_of(&label, ind, &vals) {
                Ok(d) => disp.push(d),
                Err(e) => manifest.warn(format!("{label}: {ind} dispersion omitted: {e}")),
            }
        }
        let stem = sanitize(&label);
        let result = summarize(cmp, disp, &mut manifest);
        print_summary(&result);
        write_compare_outputs(&a.out.out, &label, &[(stem, result)], &[], &mut manifest)?;
        return finish(&manifest, &a.out.out);
    }

    let data = a.data.as_ref().expect("clap enforces a source");
    manifest = manifest.with_config(&json!({ "run": cfg, "level": level.as_str(), "scope": a.scope }));
    prepare_out(&a.out)?;
    let raw_corpus = load(data, &cfg, &mut manifest)?;
    let (corpus, _) = apply_filters(&raw_corpus, &cfg.filters);
    let table = compute_scaling_factors(&corpus);
    let ctx = ScoringContext::new(&corpus, &table, &cfg.filters)?;
    warn_dropped_and_missing(&ctx, &mut manifest);

    let scored = match &a.scope {
        Some(code) => {
            let scope = corpus
                .scopes(level)
                .into_iter()
                .find(|s| s.code() == code)
                .ok_or_else(|| CliError::Config(format!("no {} scope `{code}` in the corpus", level.as_str())))?;
            crate::indicators::LevelScores {
                level,
                boards: vec![ctx.score_scope(&scope, &cfg.filters)?],
                not_rankable: vec![],
            }
        }
        None => ctx.score_level(level, &cfg.filters)?,
    };
    for nr in &scored.not_rankable {
        manifest.warn(format!("{} not ranked: {}", nr.scope, nr.reason));
    }
    if scored.boards.is_empty() {
        manifest.warn(format!("no rankable {} scope", level.as_str()));
    }
    let mut results = Vec::new();
    for b in &scored.boards {
        for d in &b.dropped {
            manifest.warn(format!("{} dropped from {} ({}): {}", d.unit.university, b.scope, d.indicator, d.reason));
        }
        let cmp = compare(&rank(&b.fss)?, &rank(&b.mncs)?)?;
        let mut disp = Vec::new();
        for board in [&b.fss, &b.mncs] {
            match dispersion(board) {
                Ok(d) => disp.push(d),
                Err(e) => manifest.warn(format!("{}: {} dispersion omitted: {e}", b.scope, board.indicator)),
            }
        }
        results.push((b.scope.file_stem(), summarize(cmp, disp, &mut manifest)));
    }

    let mut ranges = Vec::new();
    if level == Level::Sds {
        for uda in corpus.fields().uda_codes() {
            let per: Vec<DivergenceSummary> = scored
                .boards
                .iter()
                .zip(&results)
                .filter(|(b, _)| matches!(&b.scope, Scope::Sds(s) if corpus.fields().uda_of(s) == Some(uda)))
                .map(|(_, (_, r))| r.shifts.clone())
                .collect();
            if let Ok(r) = range_summary(&per, uda) {
                ranges.push(r);
            }
        }
    }
    for (_, r) in &results {
        print_summary(r);
    }
    let title = format!("FSS vs MNCS, {} level", level.as_str());
    write_compare_outputs(&a.out.out, &title, &results, &ranges, &mut manifest)?;
    finish(&manifest, &a.out.out)
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

fn print_summary(r: &ScopeResult) {
    let s = &r.shifts;
    let fmt = |v: Option<f64>| v.map_or_else(|| "n/a".to_owned(), |x| format!("{x:.3}"));
    println!(
        "{}: n={} shifting={:.1}% mean|shift|={:.2} median={} max={} pearson={} spearman={}",
        s.label,
        s.n_units,
        s.pct_shifting_rank,
        s.mean_abs_shift,
        s.median_abs_shift,
        s.max_abs_shift,
        fmt(s.pearson),
        fmt(s.spearman)
    );
}

pub fn cmd_synth(a: &SynthArgs, raw: Vec<String>) -> Result<(), CliError> {
    let mut cfg = match (&a.config, &a.preset) {
        (Some(p), _) => SynthConfig::load(p)?,
        (None, Some(name)) => SynthConfig::preset(name).ok_or_else(|| {
            CliError::Config(format!(
                "unknown preset `{name}` (expected one of {})",
                SynthConfig::PRESETS.join(", ")
            ))
        })?,
        (None, None) => SynthConfig::small(),
    };
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    let out = &a.out.out;
    let paths = CorpusPaths::in_dir(out);
    if paths.all().iter().any(|p| p.exists()) && !a.out.force {
        return Err(CliError::Config(format!(
            "{} already holds a corpus; pass --force to replace it",
            out.display()
        )));
    }
    let mut manifest = RunManifest::new("synth", raw).with_config(&cfg);
    let synthetic = generate(&cfg)?;
    synthetic.corpus.write_csv_dir(out)?;
    for p in paths.all() {
        manifest.outputs.push(p.to_owned());
    }
    let cfg_path = out.join("synth_config.toml");
    std::fs::write(&cfg_path, toml::to_string(&cfg).map_err(|e| CliError::Config(e.to_string()))?)?;
    manifest.outputs.push(cfg_path);
    manifest.config = json!({ "synth": cfg, "result": synthetic.report });
    let r = &synthetic.report;
    println!(
        "generated {} professors and {} publications (seed {}, attempt {}, quantity-impact r = {})",
        r.professors,
        r.publications,
        r.seed,
        r.attempt,
        r.measured_quantity_impact_corr.map_or_else(|| "n/a".to_owned(), |x| format!("{x:.3}"))
    );
    finish(&manifest, out)
}
