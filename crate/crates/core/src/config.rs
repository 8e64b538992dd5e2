//! `key = value` configuration files.
//!
//! Blank lines and `#` comments are ignored. Relative paths are resolved
//! against the directory of the file they were read from.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::alignment::MatchConfig;
use crate::error::{Error, Result};
use crate::freqdict::DEFAULT_MIN_COLLECTION_FREQ;
use crate::io;
use crate::keywords::Bm25Params;
use crate::morphology::DEFAULT_NOUN_TAG;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KeyValues {
    values: BTreeMap<String, String>,
    base_dir: Option<PathBuf>,
}

impl KeyValues {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut kv = KeyValues::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::format(origin, idx + 1, "expected key = value"))?;
            let k = k.trim();
            if k.is_empty() {
                return Err(Error::format(origin, idx + 1, "empty key"));
            }
            kv.values.insert(k.to_string(), v.trim().to_string());
        }
        Ok(kv)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = io::read_lines(path)?.join("\n");
        let mut kv = Self::parse(&text, path)?;
        kv.base_dir = path.parent().map(Path::to_path_buf);
        Ok(kv)
    }

    /// Sets a value; later settings override earlier ones.
    pub fn set(&mut self, key: &str, value: &str) {
        self.values.insert(key.to_string(), value.to_string());
    }

    /// Parses a `key=value` override as given on a command line.
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got {pair:?}")))?;
        self.set(k.trim(), v.trim());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    pub fn parse_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("invalid value {v:?} for {key}"))),
        }
    }

    pub fn parse_opt<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::Config(format!("invalid value {v:?} for {key}")))
            })
            .transpose()
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .filter(|v| !v.is_empty())
            .ok_or_else(|| Error::Config(format!("missing required key {key}")))
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.get(key).filter(|v| !v.is_empty()).map(|v| {
            let p = PathBuf::from(v);
            match &self.base_dir {
                Some(base) if p.is_relative() => base.join(p),
                _ => p,
            }
        })
    }

    pub fn require_path(&self, key: &str) -> Result<PathBuf> {
        self.require(key)?;
        Ok(self.path(key).unwrap())
    }

    /// Fails on any key not listed in `known`.
    pub fn reject_unknown(&self, known: &[&str]) -> Result<()> {
        match self.keys().find(|k| !known.contains(k)) {
            Some(k) => Err(Error::Config(format!("unknown configuration key {k}"))),
            None => Ok(()),
        }
    }
}

pub const MATCH_KEYS: &[&str] = &[
    "min_shared_keywords",
    "profile_size",
    "min_char_count",
    "require_both_long",
    "max_wordcount_ratio_diff",
    "max_capitalized_diff",
    "max_numbercount_diff",
    "max_number_value_diff",
];

pub const BM25_KEYS: &[&str] = &["k1", "b"];

pub fn match_config(kv: &KeyValues) -> Result<MatchConfig> {
    let d = MatchConfig::default();
    let cfg = MatchConfig {
        min_shared_keywords: kv.parse_or("min_shared_keywords", d.min_shared_keywords)?,
        profile_size: kv.parse_or("profile_size", d.profile_size)?,
        min_char_count: kv.parse_or("min_char_count", d.min_char_count)?,
        require_both_long: kv.parse_or("require_both_long", d.require_both_long)?,
        max_wordcount_ratio_diff: kv.parse_or("max_wordcount_ratio_diff", d.max_wordcount_ratio_diff)?,
        max_capitalized_diff: kv.parse_or("max_capitalized_diff", d.max_capitalized_diff)?,
        max_numbercount_diff: kv.parse_or("max_numbercount_diff", d.max_numbercount_diff)?,
        max_number_value_diff: kv.parse_or("max_number_value_diff", d.max_number_value_diff)?,
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn bm25_params(kv: &KeyValues) -> Result<Bm25Params> {
    let d = Bm25Params::default();
    Bm25Params::new(kv.parse_or("k1", d.k1)?, kv.parse_or("b", d.b)?)
}

/// Per-language input paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SidePaths {
    pub lang: String,
    pub corpus: PathBuf,
    pub morph: PathBuf,
    pub morph_extra: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    /// Raw translation table from this language into the other.
    pub translations: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub a: SidePaths,
    pub b: SidePaths,
    pub out_dir: PathBuf,
    pub noun_tag: String,
    pub min_collection_freq: u64,
    pub params: Bm25Params,
    pub matching: MatchConfig,
    pub workers: Option<usize>,
    pub verbose: bool,
}

const SIDE_KEYS: &[&str] = &["lang", "corpus", "morph", "morph_extra", "stopwords", "translations"];
const GLOBAL_KEYS: &[&str] = &["out_dir", "noun_tag", "min_collection_freq", "workers", "verbose"];

impl PipelineConfig {
    pub fn known_keys() -> Vec<String> {
        let mut keys: Vec<String> = Vec::new();
        for side in ["a", "b"] {
            keys.extend(SIDE_KEYS.iter().map(|k| format!("{k}_{side}")));
        }
        keys.extend(GLOBAL_KEYS.iter().chain(MATCH_KEYS).chain(BM25_KEYS).map(|k| k.to_string()));
        keys
    }

    pub fn from_key_values(kv: &KeyValues) -> Result<Self> {
        let known = Self::known_keys();
        let known: Vec<&str> = known.iter().map(String::as_str).collect();
        kv.reject_unknown(&known)?;

        let side = |s: &str| -> Result<SidePaths> {
            Ok(SidePaths {
                lang: kv.require(&format!("lang_{s}"))?.to_string(),
                corpus: kv.require_path(&format!("corpus_{s}"))?,
                morph: kv.require_path(&format!("morph_{s}"))?,
                morph_extra: kv.path(&format!("morph_extra_{s}")),
                stopwords: kv.path(&format!("stopwords_{s}")),
                translations: kv.require_path(&format!("translations_{s}"))?,
            })
        };
        let cfg = PipelineConfig {
            a: side("a")?,
            b: side("b")?,
            out_dir: kv.require_path("out_dir")?,
            noun_tag: kv.get("noun_tag").unwrap_or(DEFAULT_NOUN_TAG).to_string(),
            min_collection_freq: kv.parse_or("min_collection_freq", DEFAULT_MIN_COLLECTION_FREQ)?,
            params: bm25_params(kv)?,
            matching: match_config(kv)?,
            workers: kv.parse_opt("workers")?,
            verbose: kv.parse_or("verbose", false)?,
        };
        if cfg.a.lang == cfg.b.lang {
            return Err(Error::Config(format!("lang_a and lang_b are both {:?}", cfg.a.lang)));
        }
        Ok(cfg)
    }

    /// Input files that must exist before the run starts.
    pub fn input_paths(&self) -> Vec<&Path> {
        let mut out = Vec::new();
        for s in [&self.a, &self.b] {
            out.push(s.corpus.as_path());
            out.push(s.morph.as_path());
            out.push(s.translations.as_path());
            out.extend(s.morph_extra.as_deref());
            out.extend(s.stopwords.as_deref());
        }
        out
    }

    pub fn check_inputs_exist(&self) -> Result<()> {
        match self.input_paths().into_iter().find(|p| !p.is_file()) {
            Some(p) => Err(Error::Config(format!("input file {} does not exist", p.display()))),
            None => Ok(()),
        }
    }
}
