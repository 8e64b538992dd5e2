//! Per-language lemma frequency dictionaries.
//!
//! Counting is split into a mergeable [`FrequencyCounts`] accumulator and a
//! finalization step that prunes rare lemmas, so shards can be counted in
//! parallel and merged in any order with an identical result.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use rayon::prelude::*;

use crate::corpus::{tokenize, Document};
use crate::error::{Error, Result};
use crate::io;
use crate::morphology::{Analysis, MorphDictionary};

/// Lemmas must occur strictly more often than twice to be kept.
pub const DEFAULT_MIN_COLLECTION_FREQ: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TermStats {
    pub collection_freq: u64,
    pub doc_freq: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyDictionary {
    pub lang: String,
    pub doc_count: u64,
    pub avg_doc_len: f64,
    pub term_stats: BTreeMap<String, TermStats>,
}

/// Partial counts over a shard of documents, before pruning.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrequencyCounts {
    pub doc_count: u64,
    pub total_words: u64,
    pub terms: HashMap<String, TermStats>,
}

impl FrequencyCounts {
    pub fn add_document(&mut self, doc: &Document, md: &MorphDictionary) {
        let mut in_doc: HashMap<&str, u64> = HashMap::new();
        let mut words = 0u64;
        for tok in tokenize(&doc.text).words() {
            words += 1;
            let mut seen: HashSet<&str> = HashSet::new();
            for a in md.analyses(&tok.surface).iter().filter(|a| a.is_noun()) {
                if seen.insert(&a.lemma) {
                    *in_doc.entry(&a.lemma).or_default() += 1;
                }
            }
        }
        self.doc_count += 1;
        self.total_words += words;
        for (lemma, n) in in_doc {
            let s = self.terms.entry(lemma.to_string()).or_default();
            s.collection_freq += n;
            s.doc_freq += 1;
        }
    }

    pub fn merge(mut self, other: FrequencyCounts) -> FrequencyCounts {
        self.doc_count += other.doc_count;
        self.total_words += other.total_words;
        for (lemma, s) in other.terms {
            let e = self.terms.entry(lemma).or_default();
            e.collection_freq += s.collection_freq;
            e.doc_freq += s.doc_freq;
        }
        self
    }

    pub fn finalize(self, lang: &str, min_collection_freq: u64) -> FrequencyDictionary {
        let avg_doc_len = if self.doc_count == 0 {
            0.0
        } else {
            self.total_words as f64 / self.doc_count as f64
        };
        let term_stats = self
            .terms
            .into_iter()
            .filter(|(_, s)| s.collection_freq >= min_collection_freq)
            .collect();
        FrequencyDictionary {
            lang: lang.to_string(),
            doc_count: self.doc_count,
            avg_doc_len,
            term_stats,
        }
    }
}

impl FrequencyDictionary {
    pub fn empty(lang: &str) -> Self {
        FrequencyDictionary {
            lang: lang.to_string(),
            doc_count: 0,
            avg_doc_len: 0.0,
            term_stats: BTreeMap::new(),
        }
    }

    /// Counts noun lemmas over `docs` (in parallel on the current rayon pool)
    /// and prunes lemmas occurring fewer than `min_collection_freq` times.
    ///
    /// Every noun analysis of an ambiguous wordform is counted; homonymy is
    /// resolved later by [`Self::most_frequent_lemma`].
    pub fn build(docs: &[Document], md: &MorphDictionary, min_collection_freq: u64) -> Self {
        let counts = docs
            .par_iter()
            .fold(FrequencyCounts::default, |mut acc, doc| {
                acc.add_document(doc, md);
                acc
            })
            .reduce(FrequencyCounts::default, FrequencyCounts::merge);
        counts.finalize(md.lang(), min_collection_freq)
    }

    pub fn get(&self, lemma: &str) -> Option<&TermStats> {
        self.term_stats.get(lemma)
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.term_stats.contains_key(lemma)
    }

    pub fn len(&self) -> usize {
        self.term_stats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.term_stats.is_empty()
    }

    /// Picks the noun lemma with the highest collection frequency among
    /// `analyses`; ties go to the lexicographically smallest lemma.
    pub fn most_frequent_lemma<'a>(&self, analyses: &'a [Analysis]) -> Option<&'a str> {
        analyses
            .iter()
            .filter(|a| a.is_noun())
            .filter_map(|a| self.get(&a.lemma).map(|s| (a.lemma.as_str(), s.collection_freq)))
            .min_by(|(la, ca), (lb, cb)| cb.cmp(ca).then_with(|| la.cmp(lb)))
            .map(|(lemma, _)| lemma)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        io::write_atomic(path, |w| {
            writeln!(w, "#lang={}", self.lang)?;
            writeln!(w, "#doc_count={}", self.doc_count)?;
            // shortest representation that parses back to the same f64
            writeln!(w, "#avg_doc_len={:?}", self.avg_doc_len)?;
            for (lemma, s) in &self.term_stats {
                writeln!(w, "{lemma}\t{}\t{}", s.collection_freq, s.doc_freq)?;
            }
            Ok(())
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut lang = String::new();
        let mut doc_count: Option<u64> = None;
        let mut avg_doc_len: Option<f64> = None;
        let mut term_stats = BTreeMap::new();
        let mut rows = Vec::new();

        for (idx, raw) in io::read_lines(path)?.into_iter().enumerate() {
            let line = idx + 1;
            let text = raw.trim_end_matches('\r');
            if let Some(header) = text.strip_prefix('#') {
                if let Some(v) = header.strip_prefix("lang=") {
                    lang = v.trim().to_string();
                } else if let Some(v) = header.strip_prefix("doc_count=") {
                    doc_count = Some(v.trim().parse().map_err(|_| {
                        Error::format(path, line, format!("bad doc_count {v:?}"))
                    })?);
                } else if let Some(v) = header.strip_prefix("avg_doc_len=") {
                    let x: f64 = v.trim().parse().map_err(|_| {
                        Error::format(path, line, format!("bad avg_doc_len {v:?}"))
                    })?;
                    if !x.is_finite() || x < 0.0 {
                        return Err(Error::format(path, line, "avg_doc_len must be finite and >= 0"));
                    }
                    avg_doc_len = Some(x);
                }
                continue;
            }
            if text.trim().is_empty() {
                continue;
            }
            rows.push((line, text.to_string()));
        }

        let doc_count =
            doc_count.ok_or_else(|| Error::format(path, 0, "missing #doc_count header"))?;
        let avg_doc_len =
            avg_doc_len.ok_or_else(|| Error::format(path, 0, "missing #avg_doc_len header"))?;

        for (line, text) in rows {
            let cols: Vec<&str> = text.split('\t').collect();
            if cols.len() != 3 || cols[0].is_empty() {
                return Err(Error::format(path, line, "expected lemma<TAB>collection_freq<TAB>doc_freq"));
            }
            let num = |s: &str, what: &str| -> Result<u64> {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::format(path, line, format!("bad {what} {s:?}")))
            };
            let stats = TermStats {
                collection_freq: num(cols[1], "collection_freq")?,
                doc_freq: num(cols[2], "doc_freq")?,
            };
            if stats.doc_freq == 0 || stats.doc_freq > doc_count {
                return Err(Error::format(
                    path,
                    line,
                    format!("doc_freq {} outside 1..={doc_count}", stats.doc_freq),
                ));
            }
            if stats.collection_freq < stats.doc_freq {
                return Err(Error::format(path, line, "collection_freq below doc_freq"));
            }
            if term_stats.insert(cols[0].to_string(), stats).is_some() {
                return Err(Error::format(path, line, format!("duplicate lemma {:?}", cols[0])));
            }
        }

        Ok(FrequencyDictionary {
            lang,
            doc_count,
            avg_doc_len,
            term_stats,
        })
    }
}
