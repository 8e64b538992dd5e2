//! Dictionary-based lemmatization.
//!
//! A [`MorphDictionary`] maps case-folded wordforms to their analyses
//! (standard-form lemma plus a coarse part of speech). The on-disk format is
//! a three-column TSV, `wordform<TAB>lemma<TAB>pos`, one analysis per row.
//! Only the noun/other distinction is kept: a tag equal to the configured
//! noun tag is a noun, any other non-empty tag is `other`.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io;

pub const DEFAULT_NOUN_TAG: &str = "noun";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pos {
    Noun,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Analysis {
    pub lemma: String,
    pub pos: Pos,
}

impl Analysis {
    pub fn noun(lemma: impl Into<String>) -> Self {
        Analysis {
            lemma: lemma.into(),
            pos: Pos::Noun,
        }
    }

    pub fn is_noun(&self) -> bool {
        self.pos == Pos::Noun
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphDictionary {
    lang: String,
    noun_tag: String,
    entries: HashMap<String, Vec<Analysis>>,
}

pub fn fold_case(s: &str) -> String {
    s.to_lowercase()
}

impl MorphDictionary {
    pub fn new(lang: impl Into<String>) -> Self {
        MorphDictionary {
            lang: lang.into(),
            noun_tag: DEFAULT_NOUN_TAG.to_string(),
            entries: HashMap::new(),
        }
    }

    pub fn with_noun_tag(mut self, tag: impl Into<String>) -> Self {
        self.noun_tag = tag.into();
        self
    }

    pub fn lang(&self) -> &str {
        &self.lang
    }

    pub fn load(path: &Path, lang: &str) -> Result<Self> {
        Self::load_with_noun_tag(path, lang, DEFAULT_NOUN_TAG)
    }

    pub fn load_with_noun_tag(path: &Path, lang: &str, noun_tag: &str) -> Result<Self> {
        let mut md = MorphDictionary::new(lang).with_noun_tag(noun_tag);
        for (line, text) in io::data_lines(path)? {
            let cols: Vec<&str> = text.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::format(
                    path,
                    line,
                    format!("expected 3 tab-separated columns, found {}", cols.len()),
                ));
            }
            let (form, lemma, tag) = (cols[0].trim(), cols[1].trim(), cols[2].trim());
            if form.is_empty() {
                return Err(Error::format(path, line, "empty wordform"));
            }
            if lemma.is_empty() {
                return Err(Error::format(path, line, "empty lemma"));
            }
            if tag.is_empty() || tag.contains(char::is_whitespace) {
                return Err(Error::format(path, line, format!("unknown pos tag {tag:?}")));
            }
            let pos = if tag == noun_tag { Pos::Noun } else { Pos::Other };
            md.insert(form, Analysis {
                lemma: fold_case(lemma),
                pos,
            });
        }
        md.synthesize_self_analyses();
        Ok(md)
    }

    /// Adds one analysis; duplicate (wordform, analysis) pairs are ignored.
    /// Call [`Self::synthesize_self_analyses`] afterwards when building by hand.
    pub fn insert(&mut self, wordform: &str, analysis: Analysis) {
        let list = self.entries.entry(fold_case(wordform)).or_default();
        if !list.contains(&analysis) {
            list.push(analysis);
        }
    }

    /// Makes every lemma analyze to itself.
    pub fn synthesize_self_analyses(&mut self) {
        let mut lemmas: Vec<Analysis> = self.entries.values().flatten().cloned().collect();
        // deterministic insertion order for the synthesized rows
        lemmas.sort_by(|a, b| a.lemma.cmp(&b.lemma).then((a.pos as u8).cmp(&(b.pos as u8))));
        lemmas.dedup();
        for a in lemmas {
            let form = a.lemma.clone();
            self.insert(&form, a);
        }
    }

    /// All analyses of a wordform in dictionary order; empty when unknown.
    pub fn analyses(&self, wordform: &str) -> &[Analysis] {
        self.entries
            .get(&fold_case(wordform))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Union with `extra`; for a shared wordform the extra analyses come first.
    pub fn augment(&self, extra: &MorphDictionary) -> MorphDictionary {
        let mut out = self.clone();
        for (form, extra_list) in &extra.entries {
            let base = out.entries.remove(form).unwrap_or_default();
            let mut merged = Vec::with_capacity(extra_list.len() + base.len());
            for a in extra_list.iter().chain(base.iter()) {
                if !merged.contains(a) {
                    merged.push(a.clone());
                }
            }
            out.entries.insert(form.clone(), merged);
        }
        out
    }

    pub fn augment_from_file(&self, path: &Path) -> Result<MorphDictionary> {
        let extra = Self::load_with_noun_tag(path, &self.lang, &self.noun_tag)?;
        Ok(self.augment(&extra))
    }

    /// Number of (wordform, analysis) pairs.
    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn wordforms(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Writes the dictionary as TSV, wordforms sorted, analyses in stored order.
    pub fn save(&self, path: &Path) -> Result<()> {
        let other_tag = if self.noun_tag == "other" { "-" } else { "other" };
        let mut forms: Vec<&String> = self.entries.keys().collect();
        forms.sort();
        io::write_atomic(path, |w| {
            for form in forms {
                for a in &self.entries[form] {
                    let tag = match a.pos {
                        Pos::Noun => self.noun_tag.as_str(),
                        Pos::Other => other_tag,
                    };
                    writeln!(w, "{form}\t{}\t{tag}", a.lemma)?;
                }
            }
            Ok(())
        })
    }
}
