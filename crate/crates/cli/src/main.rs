use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use bitext_core::alignment::{self, CandidatePair};
use bitext_core::config::{self, KeyValues, PipelineConfig};
use bitext_core::corpus::{self, DocStats};
use bitext_core::evaluation::{self, EvalReport, SyntheticSpec};
use bitext_core::freqdict::DEFAULT_MIN_COLLECTION_FREQ;
use bitext_core::keywords::{self, Extractor, KeywordProfile, StopList};
use bitext_core::morphology::DEFAULT_NOUN_TAG;
use bitext_core::pipeline::{self, OutputGuard, PipelineOptions};
use bitext_core::{io, Error, FrequencyDictionary, MorphDictionary, RawTranslationTable, SurfaceStats, TranslationDictionary};

/// Mines parallel document pairs from two monolingual collections.
#[derive(Debug, Parser)]
#[command(name = "bitext", version)]
struct Cli {
    /// key = value configuration file
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Worker threads for the parallel stages (default: all cores)
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    /// Debug logging; stage commands also keep rejected candidates
    #[arg(long, short, global = true)]
    verbose: bool,

    /// Override a configuration key (repeatable)
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count noun lemmas of a corpus into a frequency dictionary
    BuildFreqdict(BuildFreqdictArgs),
    /// Pick one translation per lemma using the target frequency dictionary
    ResolveTranslations(ResolveArgs),
    /// Extract keyword profiles and surface statistics
    Extract(ExtractArgs),
    /// Pair documents of two languages by their keyword profiles
    Align(AlignArgs),
    /// Write the parallel corpus for accepted pairs
    Emit(EmitArgs),
    /// Generate a synthetic bilingual collection with gold pairs
    Synth(SynthArgs),
    /// Score pairs against gold, or run a synthetic spec end to end
    Evaluate(EvaluateArgs),
    /// Run every stage from a configuration file
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
struct BuildFreqdictArgs {
    /// Corpus in JSON lines
    #[arg(long)]
    corpus: PathBuf,
    /// Morphological dictionary (wordform, lemma, pos)
    #[arg(long)]
    morph: PathBuf,
    /// Extra morphological entries, listed before the main ones
    #[arg(long)]
    morph_extra: Option<PathBuf>,
    #[arg(long)]
    lang: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ResolveArgs {
    /// Raw table: src_lemma TAB cand1|cand2|...
    #[arg(long)]
    raw: PathBuf,
    #[arg(long)]
    src: String,
    #[arg(long)]
    dst: String,
    /// Frequency dictionary of the target language
    #[arg(long)]
    freqdict: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ExtractArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    lang: String,
    #[arg(long)]
    morph: PathBuf,
    #[arg(long)]
    morph_extra: Option<PathBuf>,
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Frequency dictionary of this language
    #[arg(long)]
    freqdict: PathBuf,
    /// Resolved translation dictionary into the other language
    #[arg(long)]
    translations: PathBuf,
    /// Target language of the translation dictionary
    #[arg(long)]
    other_lang: String,
    #[arg(long)]
    profiles_out: PathBuf,
    #[arg(long)]
    stats_out: PathBuf,
}

#[derive(Debug, Args)]
struct AlignArgs {
    #[arg(long)]
    profiles_a: PathBuf,
    #[arg(long)]
    profiles_b: PathBuf,
    #[arg(long)]
    stats_a: PathBuf,
    #[arg(long)]
    stats_b: PathBuf,
    /// Accepted pairs, JSON lines
    #[arg(long)]
    out: PathBuf,
    /// Also write every rejected candidate with its filter verdicts
    #[arg(long)]
    rejected: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EmitArgs {
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long)]
    corpus_a: PathBuf,
    #[arg(long)]
    corpus_b: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Synthetic spec (key = value); --set overrides apply to it
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Generate from this spec, run the pipeline and score it
    #[arg(long, conflicts_with_all = ["pairs", "gold"], required_unless_present = "pairs")]
    spec: Option<PathBuf>,
    /// Accepted pairs to score
    #[arg(long, requires = "gold")]
    pairs: Option<PathBuf>,
    /// Gold pairs: doc_a TAB doc_b
    #[arg(long, requires = "pairs")]
    gold: Option<PathBuf>,
    /// Write the report as JSON here too
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    /// Output directory, overriding out_dir from the configuration
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "debug" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", error_message(&e));
            let config_error = e.chain().any(|c| c.downcast_ref::<Error>().is_some_and(Error::is_config));
            ExitCode::from(if config_error { 2 } else { 1 })
        }
    }
}

/// Joins the error chain, skipping causes already spelled out by their parent.
fn error_message(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let msg = cause.to_string();
        if out.ends_with(&msg) {
            continue;
        }
        if !out.is_empty() {
            out.push_str(": ");
        }
        out.push_str(&msg);
    }
    out
}

/// Configuration file (if any) with `--set`, `--workers` and `--verbose` applied.
fn settings(cli: &Cli) -> Result<KeyValues> {
    let mut kv = match &cli.config {
        Some(p) => KeyValues::load(p)?,
        None => KeyValues::new(),
    };
    for o in &cli.overrides {
        kv.set_pair(o)?;
    }
    if let Some(n) = cli.workers {
        kv.set("workers", &n.to_string());
    }
    if cli.verbose {
        kv.set("verbose", "true");
    }
    Ok(kv)
}

fn run(cli: Cli) -> Result<()> {
    let kv = settings(&cli)?;
    let workers: Option<usize> = kv.parse_opt("workers")?;
    match &cli.command {
        Command::BuildFreqdict(a) => pipeline::with_workers(workers, || build_freqdict(a, &kv))?,
        Command::ResolveTranslations(a) => resolve_translations(a),
        Command::Extract(a) => pipeline::with_workers(workers, || extract(a, &kv))?,
        Command::Align(a) => pipeline::with_workers(workers, || align(a, &kv))?,
        Command::Emit(a) => emit(a),
        Command::Synth(a) => synth(a, &cli.overrides),
        Command::Evaluate(a) => evaluate(a, &kv),
        Command::Pipeline(a) => run_pipeline(a, kv),
    }
}

fn noun_tag(kv: &KeyValues) -> &str {
    kv.get("noun_tag").unwrap_or(DEFAULT_NOUN_TAG)
}

fn load_morph(path: &Path, extra: Option<&Path>, lang: &str, kv: &KeyValues) -> Result<MorphDictionary> {
    let mut md = MorphDictionary::load_with_noun_tag(path, lang, noun_tag(kv))?;
    if let Some(extra) = extra {
        md = md.augment_from_file(extra)?;
    }
    Ok(md)
}

fn build_freqdict(a: &BuildFreqdictArgs, kv: &KeyValues) -> Result<()> {
    let docs = corpus::read_corpus(&a.corpus, Some(&a.lang))?;
    let md = load_morph(&a.morph, a.morph_extra.as_deref(), &a.lang, kv)?;
    let min_cf = kv.parse_or("min_collection_freq", DEFAULT_MIN_COLLECTION_FREQ)?;
    if docs.is_empty() {
        warn!("corpus {} is empty; writing an empty dictionary", a.corpus.display());
    }
    let fd = FrequencyDictionary::build(&docs, &md, min_cf);
    fd.save(&a.out)?;
    println!("doc_count={} lemmas={} avgdl={}", fd.doc_count, fd.len(), fd.avg_doc_len);
    Ok(())
}

fn resolve_translations(a: &ResolveArgs) -> Result<()> {
    let raw = RawTranslationTable::load(&a.raw, &a.src, &a.dst)?;
    let fd = FrequencyDictionary::load(&a.freqdict)?;
    if fd.lang != a.dst {
        return Err(Error::Config(format!(
            "frequency dictionary {} is for {:?}, translations target {:?}",
            a.freqdict.display(),
            fd.lang,
            a.dst
        ))
        .into());
    }
    let td = raw.resolve_senses(&fd);
    td.save(&a.out)?;
    println!("entries={}", td.len());
    Ok(())
}

fn extract(a: &ExtractArgs, kv: &KeyValues) -> Result<()> {
    let docs = corpus::read_corpus(&a.corpus, Some(&a.lang))?;
    let morph = load_morph(&a.morph, a.morph_extra.as_deref(), &a.lang, kv)?;
    let freq = FrequencyDictionary::load(&a.freqdict)?;
    if freq.lang != a.lang {
        return Err(Error::Config(format!("frequency dictionary is for {:?}, corpus is {:?}", freq.lang, a.lang)).into());
    }
    let stop = match &a.stopwords {
        Some(p) => StopList::load(p)?,
        None => StopList::default(),
    };
    let translations = TranslationDictionary::load(&a.translations, &a.lang, &a.other_lang)?;
    let extractor = Extractor {
        morph: &morph,
        freq: &freq,
        stop: &stop,
        translations: &translations,
        params: config::bm25_params(kv)?,
        profile_size: config::match_config(kv)?.profile_size,
    };
    let (profiles, stats) = pipeline::extract_side(&docs, &extractor);

    let mut guard = OutputGuard::new();
    keywords::write_profiles(guard.track(a.profiles_out.clone()), &profiles)?;
    io::write_jsonl(guard.track(a.stats_out.clone()), &stats)?;
    guard.commit();
    println!("profiles={}", profiles.len());
    Ok(())
}

fn stats_map(path: &Path) -> Result<HashMap<String, SurfaceStats>> {
    let rows: Vec<DocStats> = corpus::read_stats(path)?;
    Ok(rows.into_iter().map(|r| (r.id, r.stats)).collect())
}

fn align(a: &AlignArgs, kv: &KeyValues) -> Result<()> {
    let pa: Vec<KeywordProfile> = keywords::read_profiles(&a.profiles_a)?;
    let pb: Vec<KeywordProfile> = keywords::read_profiles(&a.profiles_b)?;
    let (sa, sb) = (stats_map(&a.stats_a)?, stats_map(&a.stats_b)?);
    let cfg = config::match_config(kv)?;
    let keep_rejected = a.rejected.is_some() || kv.parse_or("verbose", false)?;
    let candidates = alignment::align(&pa, &pb, &sa, &sb, &cfg, keep_rejected)?;
    let accepted: Vec<CandidatePair> = candidates.iter().filter(|p| p.accepted).cloned().collect();

    let mut guard = OutputGuard::new();
    alignment::write_pairs(guard.track(a.out.clone()), &accepted)?;
    if let Some(r) = &a.rejected {
        alignment::write_rejected_tsv(guard.track(r.clone()), &candidates)?;
    }
    guard.commit();
    println!("pairs={}", accepted.len());
    Ok(())
}

fn emit(a: &EmitArgs) -> Result<()> {
    let pairs = alignment::read_pairs(&a.pairs)?;
    let docs_a = corpus::read_corpus(&a.corpus_a, None)?;
    let docs_b = corpus::read_corpus(&a.corpus_b, None)?;
    let n = alignment::emit_parallel_corpus(&a.out, &pairs, &docs_a, &docs_b)?;
    println!("entries={n}");
    Ok(())
}

fn load_spec(path: Option<&Path>, overrides: &[String]) -> Result<SyntheticSpec> {
    let mut kv = match path {
        Some(p) => KeyValues::load(p)?,
        None => KeyValues::new(),
    };
    for o in overrides {
        kv.set_pair(o)?;
    }
    Ok(SyntheticSpec::from_key_values(&kv)?)
}

fn synth(a: &SynthArgs, overrides: &[String]) -> Result<()> {
    let spec = load_spec(a.spec.as_deref(), overrides)?;
    let corpus = evaluation::generate_synthetic(&spec)?;
    corpus.write(&a.out_dir)?;
    println!(
        "docs_a={} docs_b={} gold_pairs={}",
        corpus.docs_a.len(),
        corpus.docs_b.len(),
        corpus.gold.len()
    );
    Ok(())
}

/// Pipeline options from stage keys only, for runs without input paths.
fn stage_options(kv: &KeyValues) -> Result<PipelineOptions> {
    Ok(PipelineOptions {
        params: config::bm25_params(kv)?,
        matching: config::match_config(kv)?,
        min_collection_freq: kv.parse_or("min_collection_freq", DEFAULT_MIN_COLLECTION_FREQ)?,
        workers: kv.parse_opt("workers")?,
        keep_rejected: kv.parse_or("verbose", false)?,
    })
}

fn evaluate(a: &EvaluateArgs, kv: &KeyValues) -> Result<()> {
    let report: EvalReport = match (&a.spec, &a.pairs, &a.gold) {
        (Some(spec), _, _) => {
            let spec = SyntheticSpec::load(spec)?;
            evaluation::run_synthetic(&spec, &stage_options(kv)?)?
        }
        (None, Some(pairs), Some(gold)) => {
            let candidates = alignment::read_pairs(pairs)?;
            let predicted: Vec<(String, String)> = candidates
                .iter()
                .filter(|p| p.accepted)
                .map(|p| (p.doc_a.clone(), p.doc_b.clone()))
                .collect();
            let gold = evaluation::read_gold(gold)?;
            evaluation::evaluate(&predicted, &gold).with_rejections(&candidates)
        }
        _ => unreachable!("clap enforces --spec or --pairs with --gold"),
    };
    print!("{report}");
    if let Some(p) = &a.json {
        let json = serde_json::to_string_pretty(&report)?;
        io::write_atomic(p, |w| writeln!(w, "{json}"))?;
    }
    Ok(())
}

fn run_pipeline(a: &PipelineArgs, mut kv: KeyValues) -> Result<()> {
    if kv.keys().next().is_none() {
        return Err(Error::Config("pipeline needs --config or --set keys".into()).into());
    }
    if let Some(dir) = &a.out_dir {
        let dir = std::path::absolute(dir).with_context(|| format!("resolving {}", dir.display()))?;
        kv.set("out_dir", &dir.to_string_lossy());
    }
    let cfg = PipelineConfig::from_key_values(&kv)?;
    let started = Instant::now();
    let inputs = pipeline::load_inputs(&cfg)?;
    info!(
        "loaded {} {} and {} {} documents",
        inputs.docs_a.len(),
        cfg.a.lang,
        inputs.docs_b.len(),
        cfg.b.lang
    );
    let out = pipeline::run(&inputs.docs_a, &inputs.docs_b, &inputs.res_a, &inputs.res_b, &PipelineOptions::from(&cfg))?;
    pipeline::write_outputs(&out, &inputs.docs_a, &inputs.docs_b, &cfg.out_dir)
        .with_context(|| format!("writing outputs to {}", cfg.out_dir.display()))?;
    println!("pairs={}", out.accepted().len());
    println!("elapsed_ms={}", started.elapsed().as_millis());
    Ok(())
}
