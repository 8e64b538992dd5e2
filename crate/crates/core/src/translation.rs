//! Lemma-to-lemma translation dictionaries.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::freqdict::FrequencyDictionary;
use crate::io;
use crate::morphology::fold_case;

/// Source lemma to candidate target lemmas, as delivered by whatever tool
/// bootstrapped the dictionary. Candidate lists are non-empty and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTranslationTable {
    pub src_lang: String,
    pub dst_lang: String,
    pub rows: BTreeMap<String, Vec<String>>,
}

/// Single-sense translation mapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationDictionary {
    pub src_lang: String,
    pub dst_lang: String,
    pub entries: BTreeMap<String, String>,
}

impl RawTranslationTable {
    pub fn new(src_lang: &str, dst_lang: &str) -> Self {
        RawTranslationTable {
            src_lang: src_lang.to_string(),
            dst_lang: dst_lang.to_string(),
            rows: BTreeMap::new(),
        }
    }

    /// Appends candidates for `src`, dropping ones already listed.
    pub fn add(&mut self, src: &str, candidates: impl IntoIterator<Item = String>) {
        let list = self.rows.entry(src.to_string()).or_default();
        for c in candidates {
            if !list.contains(&c) {
                list.push(c);
            }
        }
    }

    /// Loads `src_lemma<TAB>cand1|cand2|...` rows. Repeated source lemmas
    /// have their candidate lists concatenated.
    pub fn load(path: &Path, src_lang: &str, dst_lang: &str) -> Result<Self> {
        let mut table = RawTranslationTable::new(src_lang, dst_lang);
        for (line, text) in io::data_lines(path)? {
            let cols: Vec<&str> = text.split('\t').collect();
            if cols.len() != 2 {
                return Err(Error::format(path, line, "expected src_lemma<TAB>candidates"));
            }
            let src = fold_case(cols[0].trim());
            if src.is_empty() {
                return Err(Error::format(path, line, "empty source lemma"));
            }
            let field = cols[1].trim();
            if field.is_empty() {
                return Err(Error::format(path, line, "empty candidate field"));
            }
            let mut cands = Vec::new();
            for c in field.split('|') {
                let c = fold_case(c.trim());
                if c.is_empty() {
                    return Err(Error::format(path, line, "empty candidate"));
                }
                cands.push(c);
            }
            table.add(&src, cands);
        }
        Ok(table)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        io::write_atomic(path, |w| {
            for (src, cands) in &self.rows {
                writeln!(w, "{src}\t{}", cands.join("|"))?;
            }
            Ok(())
        })
    }

    /// Chooses, for each source lemma, the candidate most frequent in the
    /// target-language frequency dictionary. Candidates missing from it rank
    /// below every present one; ties keep list order, and when no candidate
    /// is known the first one is kept.
    pub fn resolve_senses(&self, dst_fd: &FrequencyDictionary) -> TranslationDictionary {
        let entries = self
            .rows
            .iter()
            .map(|(src, cands)| {
                let mut best = &cands[0];
                let mut best_cf = dst_fd.get(best).map(|s| s.collection_freq);
                for c in &cands[1..] {
                    let cf = dst_fd.get(c).map(|s| s.collection_freq);
                    // Option<u64> orders None below every Some
                    if cf > best_cf {
                        best = c;
                        best_cf = cf;
                    }
                }
                (src.clone(), best.clone())
            })
            .collect();
        TranslationDictionary {
            src_lang: self.src_lang.clone(),
            dst_lang: self.dst_lang.clone(),
            entries,
        }
    }
}

impl TranslationDictionary {
    pub fn new(src_lang: &str, dst_lang: &str) -> Self {
        TranslationDictionary {
            src_lang: src_lang.to_string(),
            dst_lang: dst_lang.to_string(),
            entries: BTreeMap::new(),
        }
    }

    pub fn translate(&self, lemma: &str) -> Option<&str> {
        self.entries.get(lemma).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        io::write_atomic(path, |w| {
            for (src, dst) in &self.entries {
                writeln!(w, "{src}\t{dst}")?;
            }
            Ok(())
        })
    }

    pub fn load(path: &Path, src_lang: &str, dst_lang: &str) -> Result<Self> {
        let mut td = TranslationDictionary::new(src_lang, dst_lang);
        for (line, text) in io::data_lines(path)? {
            let cols: Vec<&str> = text.split('\t').collect();
            if cols.len() != 2 || cols[0].is_empty() || cols[1].is_empty() {
                return Err(Error::format(path, line, "expected src_lemma<TAB>dst_lemma"));
            }
            match td.entries.get(cols[0]) {
                Some(prev) if prev != cols[1] => {
                    return Err(Error::format(
                        path,
                        line,
                        format!("conflicting translations for {:?}", cols[0]),
                    ));
                }
                _ => {
                    td.entries.insert(cols[0].to_string(), cols[1].to_string());
                }
            }
        }
        Ok(td)
    }
}
