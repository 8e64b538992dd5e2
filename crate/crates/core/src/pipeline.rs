//! End-to-end run over two collections: frequency dictionaries, sense
//! resolution, keyword profiles, alignment.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::alignment::{self, CandidatePair, MatchConfig};
use crate::config::{PipelineConfig, SidePaths};
use crate::corpus::{self, DocStats, Document, SurfaceStats};
use crate::error::{Error, Result};
use crate::freqdict::{FrequencyDictionary, DEFAULT_MIN_COLLECTION_FREQ};
use crate::io;
use crate::keywords::{self, Bm25Params, Extractor, KeywordProfile, StopList};
use crate::morphology::MorphDictionary;
use crate::translation::{RawTranslationTable, TranslationDictionary};

/// Dictionaries for one language of the pair.
#[derive(Debug, Clone)]
pub struct LanguageResources {
    pub lang: String,
    pub morph: MorphDictionary,
    pub stop: StopList,
    /// Raw table from this language into the other one.
    pub translations: RawTranslationTable,
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub params: Bm25Params,
    pub matching: MatchConfig,
    pub min_collection_freq: u64,
    /// Rayon worker count; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Keep rejected candidates in the output for debugging.
    pub keep_rejected: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            params: Bm25Params::default(),
            matching: MatchConfig::default(),
            min_collection_freq: DEFAULT_MIN_COLLECTION_FREQ,
            workers: None,
            keep_rejected: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SideOutput {
    pub lang: String,
    pub freq: FrequencyDictionary,
    /// This language into the other one, senses resolved.
    pub translations: TranslationDictionary,
    /// Sorted by document id.
    pub profiles: Vec<KeywordProfile>,
    /// Sorted by document id.
    pub stats: Vec<DocStats>,
}

impl SideOutput {
    pub fn stats_map(&self) -> HashMap<String, SurfaceStats> {
        self.stats.iter().map(|s| (s.id.clone(), s.stats.clone())).collect()
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub a: SideOutput,
    pub b: SideOutput,
    /// Candidates in alignment order; rejected ones only with `keep_rejected`.
    pub candidates: Vec<CandidatePair>,
}

impl PipelineOutput {
    pub fn accepted(&self) -> Vec<CandidatePair> {
        self.candidates.iter().filter(|p| p.accepted).cloned().collect()
    }

    pub fn accepted_ids(&self) -> Vec<(String, String)> {
        self.candidates
            .iter()
            .filter(|p| p.accepted)
            .map(|p| (p.doc_a.clone(), p.doc_b.clone()))
            .collect()
    }
}

/// Runs `f` on a dedicated pool with `workers` threads, or on the global
/// pool when `workers` is `None`.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::Config("worker count must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

pub fn extract_side(
    docs: &[Document],
    extractor: &Extractor<'_>,
) -> (Vec<KeywordProfile>, Vec<DocStats>) {
    let mut rows: Vec<(KeywordProfile, DocStats)> = docs
        .par_iter()
        .map(|d| {
            let (p, s) = extractor.extract(d);
            let id = p.id.clone();
            (p, DocStats { id, stats: s })
        })
        .collect();
    rows.sort_by(|x, y| x.0.id.cmp(&y.0.id));
    rows.into_iter().unzip()
}

fn check_side(docs: &[Document], res: &LanguageResources) -> Result<()> {
    if res.morph.lang() != res.lang {
        return Err(Error::Config(format!(
            "morphological dictionary is for {:?}, side is {:?}",
            res.morph.lang(),
            res.lang
        )));
    }
    if let Some(d) = docs.iter().find(|d| d.lang != res.lang) {
        return Err(Error::Config(format!(
            "document {:?} has lang {:?}, expected {:?}",
            d.id, d.lang, res.lang
        )));
    }
    Ok(())
}

pub fn run(
    docs_a: &[Document],
    docs_b: &[Document],
    res_a: &LanguageResources,
    res_b: &LanguageResources,
    opts: &PipelineOptions,
) -> Result<PipelineOutput> {
    opts.params.validate()?;
    opts.matching.validate()?;
    if res_a.lang == res_b.lang {
        return Err(Error::Config(format!("language pair needs two languages, got {:?} twice", res_a.lang)));
    }
    check_side(docs_a, res_a)?;
    check_side(docs_b, res_b)?;
    for (res, other) in [(res_a, res_b), (res_b, res_a)] {
        let t = &res.translations;
        if t.src_lang != res.lang || t.dst_lang != other.lang {
            return Err(Error::Config(format!(
                "translation table {}->{} does not fit pair {}->{}",
                t.src_lang, t.dst_lang, res.lang, other.lang
            )));
        }
    }

    with_workers(opts.workers, || {
        let freq_a = FrequencyDictionary::build(docs_a, &res_a.morph, opts.min_collection_freq);
        let freq_b = FrequencyDictionary::build(docs_b, &res_b.morph, opts.min_collection_freq);
        let td_ab = res_a.translations.resolve_senses(&freq_b);
        let td_ba = res_b.translations.resolve_senses(&freq_a);

        let side = |docs: &[Document], res: &LanguageResources, freq: FrequencyDictionary, td: TranslationDictionary| {
            let extractor = Extractor {
                morph: &res.morph,
                freq: &freq,
                stop: &res.stop,
                translations: &td,
                params: opts.params,
                profile_size: opts.matching.profile_size,
            };
            let (profiles, stats) = extract_side(docs, &extractor);
            SideOutput {
                lang: res.lang.clone(),
                freq,
                translations: td,
                profiles,
                stats,
            }
        };
        let a = side(docs_a, res_a, freq_a, td_ab);
        let b = side(docs_b, res_b, freq_b, td_ba);

        let candidates = alignment::align(
            &a.profiles,
            &b.profiles,
            &a.stats_map(),
            &b.stats_map(),
            &opts.matching,
            opts.keep_rejected,
        )?;
        Ok(PipelineOutput { a, b, candidates })
    })?
}

/// Output file names inside an output directory.
pub fn freqdict_file(lang: &str) -> String {
    format!("freqdict.{lang}.tsv")
}

pub fn translations_file(src: &str, dst: &str) -> String {
    format!("translations.{src}-{dst}.tsv")
}

pub fn profiles_file(lang: &str) -> String {
    format!("profiles.{lang}.jsonl")
}

pub fn stats_file(lang: &str) -> String {
    format!("stats.{lang}.jsonl")
}

pub const PAIRS_FILE: &str = "pairs.jsonl";
pub const REJECTED_FILE: &str = "rejected.tsv";
pub const PARALLEL_FILE: &str = "parallel.jsonl";

/// Tracks files written by a stage so a failing run leaves nothing behind.
#[derive(Debug, Default)]
pub struct OutputGuard {
    written: Vec<PathBuf>,
    committed: bool,
}

impl OutputGuard {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn track(&mut self, path: PathBuf) -> &Path {
        self.written.push(path);
        self.written.last().unwrap()
    }

    pub fn commit(mut self) -> Vec<PathBuf> {
        self.committed = true;
        std::mem::take(&mut self.written)
    }
}

impl Drop for OutputGuard {
    fn drop(&mut self) {
        if !self.committed {
            for p in &self.written {
                let _ = fs::remove_file(p);
            }
        }
    }
}

/// Writes every stage output of a run into `dir`. Returns the written paths.
pub fn write_outputs(
    out: &PipelineOutput,
    docs_a: &[Document],
    docs_b: &[Document],
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    io::ensure_dir(dir)?;
    let mut guard = OutputGuard::new();
    for (side, other) in [(&out.a, &out.b), (&out.b, &out.a)] {
        side.freq.save(guard.track(dir.join(freqdict_file(&side.lang))))?;
        side.translations
            .save(guard.track(dir.join(translations_file(&side.lang, &other.lang))))?;
        keywords::write_profiles(guard.track(dir.join(profiles_file(&side.lang))), &side.profiles)?;
        io::write_jsonl(guard.track(dir.join(stats_file(&side.lang))), &side.stats)?;
    }
    let accepted = out.accepted();
    alignment::write_pairs(guard.track(dir.join(PAIRS_FILE)), &accepted)?;
    if out.candidates.iter().any(|p| !p.accepted) {
        alignment::write_rejected_tsv(guard.track(dir.join(REJECTED_FILE)), &out.candidates)?;
    }
    alignment::emit_parallel_corpus(guard.track(dir.join(PARALLEL_FILE)), &accepted, docs_a, docs_b)?;
    Ok(guard.commit())
}

/// Corpora and dictionaries named by a [`PipelineConfig`].
#[derive(Debug, Clone)]
pub struct Inputs {
    pub docs_a: Vec<Document>,
    pub docs_b: Vec<Document>,
    pub res_a: LanguageResources,
    pub res_b: LanguageResources,
}

pub fn load_resources(side: &SidePaths, other_lang: &str, noun_tag: &str) -> Result<LanguageResources> {
    let mut morph = MorphDictionary::load_with_noun_tag(&side.morph, &side.lang, noun_tag)?;
    if let Some(extra) = &side.morph_extra {
        morph = morph.augment_from_file(extra)?;
    }
    let stop = match &side.stopwords {
        Some(p) => StopList::load(p)?,
        None => StopList::default(),
    };
    let translations = RawTranslationTable::load(&side.translations, &side.lang, other_lang)?;
    Ok(LanguageResources {
        lang: side.lang.clone(),
        morph,
        stop,
        translations,
    })
}

pub fn load_inputs(cfg: &PipelineConfig) -> Result<Inputs> {
    cfg.check_inputs_exist()?;
    Ok(Inputs {
        docs_a: corpus::read_corpus(&cfg.a.corpus, Some(&cfg.a.lang))?,
        docs_b: corpus::read_corpus(&cfg.b.corpus, Some(&cfg.b.lang))?,
        res_a: load_resources(&cfg.a, &cfg.b.lang, &cfg.noun_tag)?,
        res_b: load_resources(&cfg.b, &cfg.a.lang, &cfg.noun_tag)?,
    })
}

impl From<&PipelineConfig> for PipelineOptions {
    fn from(cfg: &PipelineConfig) -> Self {
        PipelineOptions {
            params: cfg.params,
            matching: cfg.matching.clone(),
            min_collection_freq: cfg.min_collection_freq,
            workers: cfg.workers,
            keep_rejected: cfg.verbose,
        }
    }
}
