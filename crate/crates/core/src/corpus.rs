//! Documents, tokenization and per-document surface statistics.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;

/// One web publication.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub lang: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl Document {
    pub fn new(id: impl Into<String>, lang: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            lang: lang.into(),
            text: text.into(),
            source: None,
            timestamp: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Word,
    Number,
    Punctuation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
    pub is_capitalized: bool,
    pub sentence_initial: bool,
}

impl Token {
    /// Decimal value of a number token; `None` for other kinds.
    pub fn number_value(&self) -> Option<f64> {
        match self.kind {
            TokenKind::Number => parse_numeral(&self.surface),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
}

impl TokenStream {
    pub fn words(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.kind == TokenKind::Word)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Counts feeding the length gate and the cross-language rejection filters.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SurfaceStats {
    pub word_count: u64,
    /// Unicode code points, not bytes.
    pub char_count: u64,
    pub capitalized_midline_count: u64,
    pub number_count: u64,
    pub numbers: Vec<f64>,
}

/// Surface statistics tagged with their document id; one JSON line each in
/// a stats file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocStats {
    pub id: String,
    #[serde(flatten)]
    pub stats: SurfaceStats,
}

const APOSTROPHES: [char; 3] = ['\'', '\u{2019}', '\u{02BC}'];
const SENTENCE_FINAL: [char; 4] = ['.', '!', '?', '\u{2026}'];

fn is_word_char(c: char) -> bool {
    // combining diacritics (e.g. stress marks) stay inside the word
    c.is_alphabetic() || ('\u{0300}'..='\u{036F}').contains(&c)
}

/// Splits text into word, number and punctuation tokens.
///
/// Words are maximal alphabetic runs; an apostrophe between two letters is
/// kept inside the word ("п'ять"). Numbers are ASCII digit runs with an
/// optional leading sign and an optional `.`/`,` fractional part. Every
/// other non-space character is a one-character punctuation token.
pub fn tokenize(text: &str) -> TokenStream {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut sentence_start = true;
    let mut i = 0;

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }

        if is_word_char(c) {
            let mut j = i + 1;
            loop {
                while j < chars.len() && is_word_char(chars[j]) {
                    j += 1;
                }
                if j + 1 < chars.len()
                    && APOSTROPHES.contains(&chars[j])
                    && chars[j + 1].is_alphabetic()
                {
                    j += 1;
                    continue;
                }
                break;
            }
            let surface: String = chars[i..j].iter().collect();
            tokens.push(Token {
                is_capitalized: c.is_uppercase(),
                surface,
                kind: TokenKind::Word,
                sentence_initial: sentence_start,
            });
            sentence_start = false;
            i = j;
            continue;
        }

        if let Some(end) = scan_number(&chars, i) {
            tokens.push(Token {
                surface: chars[i..end].iter().collect(),
                kind: TokenKind::Number,
                is_capitalized: false,
                sentence_initial: false,
            });
            i = end;
            continue;
        }

        if SENTENCE_FINAL.contains(&c) {
            sentence_start = true;
        }
        tokens.push(Token {
            surface: c.to_string(),
            kind: TokenKind::Punctuation,
            is_capitalized: false,
            sentence_initial: false,
        });
        i += 1;
    }

    TokenStream { tokens }
}

/// Returns the end index of a numeral starting at `start`, if one starts there.
fn scan_number(chars: &[char], start: usize) -> Option<usize> {
    let mut j = start;
    if matches!(chars[j], '-' | '+' | '\u{2212}') {
        let glued_to_previous = start > 0 && chars[start - 1].is_alphanumeric();
        if glued_to_previous || !chars.get(j + 1).is_some_and(|c| c.is_ascii_digit()) {
            return None;
        }
        j += 1;
    }
    if !chars[j].is_ascii_digit() {
        return None;
    }
    while j < chars.len() && chars[j].is_ascii_digit() {
        j += 1;
    }
    if j + 1 < chars.len() && matches!(chars[j], '.' | ',') && chars[j + 1].is_ascii_digit() {
        j += 1;
        while j < chars.len() && chars[j].is_ascii_digit() {
            j += 1;
        }
    }
    Some(j)
}

/// Parses a numeral produced by the tokenizer (sign, digits, `.`/`,` fraction).
pub fn parse_numeral(surface: &str) -> Option<f64> {
    let normalized: String = surface
        .chars()
        .map(|c| match c {
            ',' => '.',
            '\u{2212}' => '-',
            c => c,
        })
        .collect();
    let body = normalized.strip_prefix(['-', '+']).unwrap_or(&normalized);
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    let digits_ok = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits_ok(int) || frac.is_some_and(|f| !digits_ok(f)) {
        return None;
    }
    normalized.parse().ok()
}

pub fn surface_stats(ts: &TokenStream, text: &str) -> SurfaceStats {
    let mut stats = SurfaceStats {
        char_count: text.chars().count() as u64,
        ..SurfaceStats::default()
    };
    for tok in &ts.tokens {
        match tok.kind {
            TokenKind::Word => {
                stats.word_count += 1;
                if tok.is_capitalized && !tok.sentence_initial {
                    stats.capitalized_midline_count += 1;
                }
            }
            TokenKind::Number => {
                if let Some(v) = tok.number_value() {
                    stats.numbers.push(v);
                }
            }
            TokenKind::Punctuation => {}
        }
    }
    stats.number_count = stats.numbers.len() as u64;
    stats
}

/// Reads a JSON-lines corpus, checking that ids are non-empty and unique and,
/// when `lang` is given, that every document is in that language.
pub fn read_corpus(path: &Path, lang: Option<&str>) -> Result<Vec<Document>> {
    let mut seen = HashSet::new();
    let mut docs = Vec::new();
    for (line, text) in io::data_lines(path)? {
        let doc: Document =
            serde_json::from_str(&text).map_err(|e| Error::format(path, line, e.to_string()))?;
        if doc.id.is_empty() {
            return Err(Error::format(path, line, "empty document id"));
        }
        if let Some(lang) = lang {
            if doc.lang != lang {
                return Err(Error::format(
                    path,
                    line,
                    format!("document {:?} has lang {:?}, expected {:?}", doc.id, doc.lang, lang),
                ));
            }
        }
        if !seen.insert(doc.id.clone()) {
            return Err(Error::format(path, line, format!("duplicate document id {:?}", doc.id)));
        }
        docs.push(doc);
    }
    Ok(docs)
}

pub fn write_corpus(path: &Path, docs: &[Document]) -> Result<()> {
    io::write_jsonl(path, docs)
}

pub fn read_stats(path: &Path) -> Result<Vec<DocStats>> {
    io::read_jsonl(path)
}
