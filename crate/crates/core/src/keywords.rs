//! Okapi BM25 keyword profiles.
//!
//! Each document's candidate terms are its own retained noun lemmas; every
//! candidate is scored independently with
//!
//! ```text
//! idf(q)      = ln((N - n(q) + 0.5) / (n(q) + 0.5))
//! score(D, q) = idf(q) * f(q, D) * (k1 + 1) / (f(q, D) + k1 * (1 - b + b * |D| / avgdl))
//! ```
//!
//! and the top K lemmas (score descending, lemma ascending on ties) form
//! the document's [`KeywordProfile`]. Negative IDF values are not clamped.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{surface_stats, tokenize, Document, SurfaceStats};
use crate::error::{Error, Result};
use crate::freqdict::FrequencyDictionary;
use crate::io;
use crate::morphology::{fold_case, MorphDictionary};
use crate::translation::TranslationDictionary;

pub const DEFAULT_PROFILE_SIZE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Bm25Params { k1: 2.0, b: 0.75 }
    }
}

impl Bm25Params {
    pub fn new(k1: f64, b: f64) -> Result<Self> {
        let p = Bm25Params { k1, b };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k1 >= 0.0 && self.k1.is_finite()) {
            return Err(Error::Config(format!("k1 must be >= 0, got {}", self.k1)));
        }
        if !(0.0..=1.0).contains(&self.b) {
            return Err(Error::Config(format!("b must be in [0, 1], got {}", self.b)));
        }
        Ok(())
    }
}

/// Per-document term frequencies over retained lemmas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermVector {
    pub doc_id: String,
    /// All word tokens, including unknown and stopped ones.
    pub doc_len: u64,
    pub freqs: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Keyword {
    pub lemma: String,
    pub score: f64,
    /// Resolved translation into the other language, when the dictionary has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordProfile {
    pub id: String,
    pub lang: String,
    pub char_count: u64,
    pub keywords: Vec<Keyword>,
    pub translated: BTreeSet<String>,
}

impl KeywordProfile {
    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.keywords.iter().map(|k| k.lemma.as_str())
    }
}

/// Stop-dictionary: lemmas that may never become keywords.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopList {
    lemmas: HashSet<String>,
}

impl StopList {
    pub fn new<I, S>(lemmas: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopList {
            lemmas: lemmas.into_iter().map(|s| fold_case(s.as_ref())).collect(),
        }
    }

    /// One lemma per line, `#` comments allowed; an empty file stops nothing.
    pub fn load(path: &Path) -> Result<Self> {
        Ok(StopList::new(io::data_lines(path)?.into_iter().map(|(_, l)| l.trim().to_string())))
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.lemmas.contains(lemma)
    }

    pub fn len(&self) -> usize {
        self.lemmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lemmas.is_empty()
    }
}

pub fn idf(fd: &FrequencyDictionary, lemma: &str) -> f64 {
    let n = fd.get(lemma).map_or(0, |s| s.doc_freq) as f64;
    let total = fd.doc_count as f64;
    ((total - n + 0.5) / (n + 0.5)).ln()
}

pub fn bm25_score(tv: &TermVector, lemma: &str, fd: &FrequencyDictionary, p: &Bm25Params) -> f64 {
    let f = match tv.freqs.get(lemma) {
        Some(&f) if f > 0 => f as f64,
        _ => return 0.0,
    };
    let len_norm = 1.0 - p.b + p.b * tv.doc_len as f64 / fd.avg_doc_len;
    idf(fd, lemma) * (f * (p.k1 + 1.0)) / (f + p.k1 * len_norm)
}

/// Dictionaries and parameters shared by every document of one language.
#[derive(Debug, Clone, Copy)]
pub struct Extractor<'a> {
    pub morph: &'a MorphDictionary,
    pub freq: &'a FrequencyDictionary,
    pub stop: &'a StopList,
    pub translations: &'a TranslationDictionary,
    pub params: Bm25Params,
    pub profile_size: usize,
}

impl<'a> Extractor<'a> {
    /// Builds the term vector: each word resolved to its corpus-most-frequent
    /// noun lemma, stopped and unknown lemmas dropped.
    pub fn term_vector(&self, doc: &Document) -> (TermVector, SurfaceStats) {
        let ts = tokenize(&doc.text);
        let stats = surface_stats(&ts, &doc.text);
        let mut freqs: BTreeMap<String, u64> = BTreeMap::new();
        for tok in ts.words() {
            let analyses = self.morph.analyses(&tok.surface);
            if let Some(lemma) = self.freq.most_frequent_lemma(analyses) {
                if !self.stop.contains(lemma) {
                    *freqs.entry(lemma.to_string()).or_default() += 1;
                }
            }
        }
        let tv = TermVector {
            doc_id: doc.id.clone(),
            doc_len: stats.word_count,
            freqs,
        };
        (tv, stats)
    }

    /// Scores every retained lemma of the document, best first.
    pub fn ranked_terms(&self, tv: &TermVector) -> Vec<(String, f64)> {
        let mut scored: Vec<(String, f64)> = tv
            .freqs
            .keys()
            .map(|lemma| (lemma.clone(), bm25_score(tv, lemma, self.freq, &self.params)))
            .collect();
        scored.sort_by(|(la, sa), (lb, sb)| rank_order(la, *sa, lb, *sb));
        scored
    }

    pub fn extract(&self, doc: &Document) -> (KeywordProfile, SurfaceStats) {
        let (tv, stats) = self.term_vector(doc);
        let mut ranked = self.ranked_terms(&tv);
        ranked.truncate(self.profile_size);

        let keywords: Vec<Keyword> = ranked
            .into_iter()
            .map(|(lemma, score)| Keyword {
                translation: self.translations.translate(&lemma).map(str::to_string),
                lemma,
                score,
            })
            .collect();
        let translated = keywords.iter().filter_map(|k| k.translation.clone()).collect();
        let profile = KeywordProfile {
            id: doc.id.clone(),
            lang: doc.lang.clone(),
            char_count: stats.char_count,
            keywords,
            translated,
        };
        (profile, stats)
    }
}

/// Score descending, then lemma ascending.
pub fn rank_order(lemma_a: &str, score_a: f64, lemma_b: &str, score_b: f64) -> Ordering {
    score_b.total_cmp(&score_a).then_with(|| lemma_a.cmp(lemma_b))
}

pub fn read_profiles(path: &Path) -> Result<Vec<KeywordProfile>> {
    io::read_jsonl(path)
}

pub fn write_profiles(path: &Path, profiles: &[KeywordProfile]) -> Result<()> {
    io::write_jsonl(path, profiles)
}
