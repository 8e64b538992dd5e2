//! Synthetic bilingual corpora with known translation pairs, and
//! precision/recall scoring of a run against them.
//!
//! The generator builds a paired pseudo-vocabulary (one lemma per language
//! per concept), morphological and translation dictionaries for it, and
//! documents composed from an abstract sequence of slots (noun, function
//! word, proper name, number). A gold pair renders the same abstract
//! document in both languages and then applies the configured noise.
//!
//! Every abstract document carries `topic_size` salient lemmas drawn from a
//! topic pool disjoint from the Zipf-distributed background vocabulary, each
//! repeated `topic_tf_min..=topic_tf_max` times. Two documents share at most
//! `max_topic_overlap` topic lemmas, which keeps unrelated documents below
//! the keyword match threshold.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alignment::{CandidatePair, Filter, MatchConfig};
use crate::config::KeyValues;
use crate::corpus::{self, Document};
use crate::error::{Error, Result};
use crate::io;
use crate::keywords::StopList;
use crate::morphology::{Analysis, MorphDictionary, Pos, DEFAULT_NOUN_TAG};
use crate::pipeline::{self, LanguageResources, PipelineOptions};
use crate::translation::RawTranslationTable;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseOps {
    /// Probability that a noun lemma of a pair is replaced, everywhere in
    /// the translated side, by an out-of-vocabulary word.
    pub keyword_drop_rate: f64,
    /// Per-word probability of inserting an extra word after it; applied to
    /// both sides of a pair independently.
    pub word_insertion_rate: f64,
    /// Maximum relative perturbation of numbers on the translated side.
    pub number_jitter: f64,
}

impl NoiseOps {
    pub const NONE: NoiseOps = NoiseOps {
        keyword_drop_rate: 0.0,
        word_insertion_rate: 0.0,
        number_jitter: 0.0,
    };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub lang_a: String,
    pub lang_b: String,
    pub n_pairs: usize,
    pub n_noise_a: usize,
    pub n_noise_b: usize,
    pub vocab_size: usize,
    /// Word slots per document before insertion noise, inclusive bounds.
    pub doc_len_min: usize,
    pub doc_len_max: usize,
    pub noise: NoiseOps,
    pub seed: u64,
    pub zipf_exponent: f64,
    /// Share of the vocabulary used as Zipf background; the rest is the topic pool.
    pub background_share: f64,
    pub topic_size: usize,
    pub topic_tf_min: usize,
    pub topic_tf_max: usize,
    pub max_topic_overlap: usize,
    /// Refuse settings under which unrelated documents could reach the
    /// default keyword match threshold.
    pub enforce_separability: bool,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            lang_a: "uk".into(),
            lang_b: "ru".into(),
            n_pairs: 50,
            n_noise_a: 200,
            n_noise_b: 200,
            vocab_size: 6000,
            doc_len_min: 180,
            doc_len_max: 320,
            noise: NoiseOps::NONE,
            seed: 1,
            zipf_exponent: 1.0,
            background_share: 0.4,
            topic_size: 10,
            topic_tf_min: 3,
            topic_tf_max: 5,
            max_topic_overlap: 2,
            enforce_separability: true,
        }
    }
}

const SPEC_KEYS: &[&str] = &[
    "lang_a",
    "lang_b",
    "n_pairs",
    "n_noise_a",
    "n_noise_b",
    "vocab_size",
    "doc_len_min",
    "doc_len_max",
    "keyword_drop_rate",
    "word_insertion_rate",
    "number_jitter",
    "seed",
    "zipf_exponent",
    "background_share",
    "topic_size",
    "topic_tf_min",
    "topic_tf_max",
    "max_topic_overlap",
    "enforce_separability",
];

impl SyntheticSpec {
    pub fn from_key_values(kv: &KeyValues) -> Result<Self> {
        kv.reject_unknown(SPEC_KEYS)?;
        let d = SyntheticSpec::default();
        let spec = SyntheticSpec {
            lang_a: kv.get("lang_a").unwrap_or(&d.lang_a).to_string(),
            lang_b: kv.get("lang_b").unwrap_or(&d.lang_b).to_string(),
            n_pairs: kv.parse_or("n_pairs", d.n_pairs)?,
            n_noise_a: kv.parse_or("n_noise_a", d.n_noise_a)?,
            n_noise_b: kv.parse_or("n_noise_b", d.n_noise_b)?,
            vocab_size: kv.parse_or("vocab_size", d.vocab_size)?,
            doc_len_min: kv.parse_or("doc_len_min", d.doc_len_min)?,
            doc_len_max: kv.parse_or("doc_len_max", d.doc_len_max)?,
            noise: NoiseOps {
                keyword_drop_rate: kv.parse_or("keyword_drop_rate", 0.0)?,
                word_insertion_rate: kv.parse_or("word_insertion_rate", 0.0)?,
                number_jitter: kv.parse_or("number_jitter", 0.0)?,
            },
            seed: kv.parse_or("seed", d.seed)?,
            zipf_exponent: kv.parse_or("zipf_exponent", d.zipf_exponent)?,
            background_share: kv.parse_or("background_share", d.background_share)?,
            topic_size: kv.parse_or("topic_size", d.topic_size)?,
            topic_tf_min: kv.parse_or("topic_tf_min", d.topic_tf_min)?,
            topic_tf_max: kv.parse_or("topic_tf_max", d.topic_tf_max)?,
            max_topic_overlap: kv.parse_or("max_topic_overlap", d.max_topic_overlap)?,
            enforce_separability: kv.parse_or("enforce_separability", d.enforce_separability)?,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_key_values(&KeyValues::load(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        let n = &self.noise;
        for (name, v) in [
            ("keyword_drop_rate", n.keyword_drop_rate),
            ("word_insertion_rate", n.word_insertion_rate),
            ("number_jitter", n.number_jitter),
            ("background_share", self.background_share),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} must be in [0, 1], got {v}"));
            }
        }
        if self.lang_a == self.lang_b {
            return bad("lang_a and lang_b must differ".into());
        }
        if self.doc_len_min == 0 || self.doc_len_min > self.doc_len_max {
            return bad(format!("bad doc length range {}..={}", self.doc_len_min, self.doc_len_max));
        }
        if self.topic_size == 0 || self.topic_tf_min == 0 || self.topic_tf_min > self.topic_tf_max {
            return bad("topic_size and topic_tf_min must be positive, topic_tf_min <= topic_tf_max".into());
        }
        if !(self.zipf_exponent >= 0.0 && self.zipf_exponent.is_finite()) {
            return bad(format!("zipf_exponent must be >= 0, got {}", self.zipf_exponent));
        }
        if self.enforce_separability {
            let m = MatchConfig::default();
            let background_slots = m.profile_size.saturating_sub(self.topic_size);
            if self.max_topic_overlap + background_slots >= m.min_shared_keywords {
                return bad(format!(
                    "max_topic_overlap {} plus {} background keyword slots could reach the match threshold {}",
                    self.max_topic_overlap, background_slots, m.min_shared_keywords
                ));
            }
        }
        Ok(())
    }

    fn background_size(&self) -> usize {
        ((self.vocab_size as f64) * self.background_share).round() as usize
    }
}

/// Output of [`generate_synthetic`].
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub docs_a: Vec<Document>,
    pub docs_b: Vec<Document>,
    /// (lang-a id, lang-b id) of every true translation pair.
    pub gold: Vec<(String, String)>,
    pub morph_a: MorphDictionary,
    pub morph_b: MorphDictionary,
    pub raw_ab: RawTranslationTable,
    pub raw_ba: RawTranslationTable,
    pub stop_a: Vec<String>,
    pub stop_b: Vec<String>,
}

impl SyntheticCorpus {
    pub fn resources(&self) -> (LanguageResources, LanguageResources) {
        (
            LanguageResources {
                lang: self.morph_a.lang().to_string(),
                morph: self.morph_a.clone(),
                stop: StopList::new(&self.stop_a),
                translations: self.raw_ab.clone(),
            },
            LanguageResources {
                lang: self.morph_b.lang().to_string(),
                morph: self.morph_b.clone(),
                stop: StopList::new(&self.stop_b),
                translations: self.raw_ba.clone(),
            },
        )
    }

    /// Writes corpora, dictionaries, gold pairs and a ready-to-run
    /// `pipeline.conf` (outputs to `<dir>/out`) into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        io::ensure_dir(dir)?;
        let (la, lb) = (self.morph_a.lang(), self.morph_b.lang());
        let mut written = Vec::new();
        let mut file = |name: String| {
            let p = dir.join(name);
            written.push(p.clone());
            p
        };
        corpus::write_corpus(&file(format!("corpus.{la}.jsonl")), &self.docs_a)?;
        corpus::write_corpus(&file(format!("corpus.{lb}.jsonl")), &self.docs_b)?;
        self.morph_a.save(&file(format!("morph.{la}.tsv")))?;
        self.morph_b.save(&file(format!("morph.{lb}.tsv")))?;
        self.raw_ab.save(&file(format!("raw.{la}-{lb}.tsv")))?;
        self.raw_ba.save(&file(format!("raw.{lb}-{la}.tsv")))?;
        for (lang, stop) in [(la, &self.stop_a), (lb, &self.stop_b)] {
            io::write_atomic(&file(format!("stop.{lang}.txt")), |w| {
                writeln!(w, "# stop lemmas")?;
                for s in stop {
                    writeln!(w, "{s}")?;
                }
                Ok(())
            })?;
        }
        write_gold(&file("gold.tsv".into()), &self.gold)?;
        io::write_atomic(&file("pipeline.conf".into()), |w| {
            for (side, lang, other) in [("a", la, lb), ("b", lb, la)] {
                writeln!(w, "lang_{side} = {lang}")?;
                writeln!(w, "corpus_{side} = corpus.{lang}.jsonl")?;
                writeln!(w, "morph_{side} = morph.{lang}.tsv")?;
                writeln!(w, "stopwords_{side} = stop.{lang}.txt")?;
                writeln!(w, "translations_{side} = raw.{lang}-{other}.tsv")?;
            }
            writeln!(w, "out_dir = out")
        })?;
        Ok(written)
    }
}

pub fn write_gold(path: &Path, gold: &[(String, String)]) -> Result<()> {
    io::write_atomic(path, |w| {
        for (a, b) in gold {
            writeln!(w, "{a}\t{b}")?;
        }
        Ok(())
    })
}

pub fn read_gold(path: &Path) -> Result<Vec<(String, String)>> {
    io::data_lines(path)?
        .into_iter()
        .map(|(line, text)| match text.split('\t').collect::<Vec<_>>()[..] {
            [a, b] if !a.is_empty() && !b.is_empty() => Ok((a.to_string(), b.to_string())),
            _ => Err(Error::format(path, line, "expected doc_a<TAB>doc_b")),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Slot {
    Noun { lemma: usize, form: usize },
    /// A noun replaced by an untranslatable word on one side.
    Unknown(usize),
    Function(usize),
    Name(usize),
    Number(f64, u8),
}

impl Slot {
    fn is_word(&self) -> bool {
        !matches!(self, Slot::Number(..))
    }
}

type Sentence = Vec<Slot>;

#[derive(Debug, Clone)]
struct AbstractDoc {
    sentences: Vec<Sentence>,
}

const CONSONANTS_A: &[char] = &['б', 'в', 'г', 'д', 'ж', 'з', 'к', 'л', 'м', 'н', 'п', 'р', 'с', 'т', 'ф', 'х', 'ц', 'ч', 'ш'];
const VOWELS_A: &[char] = &['а', 'е', 'и', 'о', 'у', 'і', 'я', 'ю'];
const CONSONANTS_B: &[char] = &['б', 'в', 'г', 'д', 'ж', 'з', 'к', 'л', 'м', 'н', 'п', 'р', 'с', 'т', 'ф', 'х', 'ц', 'ч', 'щ'];
const VOWELS_B: &[char] = &['а', 'е', 'ы', 'о', 'у', 'и', 'я', 'ю'];

const SUFFIXES_A: &[&str] = &["", "у", "ом", "ів"];
const SUFFIXES_B: &[&str] = &["", "у", "ом", "ов"];

const FUNCTION_A: &[&str] = &[
    "і", "в", "на", "що", "з", "до", "та", "як", "за", "про", "від", "це", "але", "для", "по", "при", "вже",
    "також", "ще", "не",
];
const FUNCTION_B: &[&str] = &[
    "и", "в", "на", "что", "с", "до", "да", "как", "за", "про", "от", "это", "но", "для", "по", "при", "уже",
    "также", "ещё", "не",
];

/// Offsets into the pseudo-word index space, so lemmas, names and unknown
/// words never collide.
const NAME_BASE: usize = 1 << 20;
const UNKNOWN_BASE: usize = 1 << 21;
const NAME_POOL: usize = 300;

struct Language {
    consonants: &'static [char],
    vowels: &'static [char],
    suffixes: &'static [&'static str],
    function_words: &'static [&'static str],
    decimal_sep: char,
}

const LANG_A: Language = Language {
    consonants: CONSONANTS_A,
    vowels: VOWELS_A,
    suffixes: SUFFIXES_A,
    function_words: FUNCTION_A,
    decimal_sep: ',',
};
const LANG_B: Language = Language {
    consonants: CONSONANTS_B,
    vowels: VOWELS_B,
    suffixes: SUFFIXES_B,
    function_words: FUNCTION_B,
    decimal_sep: '.',
};

impl Language {
    /// Bijective encoding of `index` as consonant-vowel syllables, at least two.
    fn pseudo_word(&self, index: usize) -> String {
        let radix = self.consonants.len() * self.vowels.len();
        let mut n = index + radix;
        let mut syllables = Vec::new();
        while n > 0 {
            let d = n % radix;
            syllables.push((self.consonants[d / self.vowels.len()], self.vowels[d % self.vowels.len()]));
            n /= radix;
        }
        syllables.iter().rev().flat_map(|&(c, v)| [c, v]).collect()
    }

    fn lemma(&self, i: usize) -> String {
        self.pseudo_word(i)
    }

    fn form(&self, lemma: usize, form: usize) -> String {
        format!("{}{}", self.lemma(lemma), self.suffixes[form])
    }

    fn render(&self, doc: &AbstractDoc) -> String {
        let mut out = String::new();
        for (si, sentence) in doc.sentences.iter().enumerate() {
            if si > 0 {
                out.push(' ');
            }
            for (wi, slot) in sentence.iter().enumerate() {
                if wi > 0 {
                    out.push(' ');
                }
                let word = match *slot {
                    Slot::Noun { lemma, form } => self.form(lemma, form),
                    Slot::Unknown(k) => self.pseudo_word(UNKNOWN_BASE + k),
                    Slot::Function(f) => self.function_words[f].to_string(),
                    Slot::Name(n) => capitalize(&self.pseudo_word(NAME_BASE + n)),
                    Slot::Number(v, decimals) => {
                        let s = format!("{v:.*}", decimals as usize);
                        s.replace('.', &self.decimal_sep.to_string())
                    }
                };
                if wi == 0 {
                    out.push_str(&capitalize(&word));
                } else {
                    out.push_str(&word);
                }
            }
            out.push(if si % 7 == 6 { '!' } else { '.' });
        }
        out
    }
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

struct Generator<'s> {
    spec: &'s SyntheticSpec,
    rng: ChaCha8Rng,
    background: WeightedIndex<f64>,
    background_size: usize,
    topics: Vec<Vec<usize>>,
}

const PAD_MARGIN: usize = 150;

impl<'s> Generator<'s> {
    fn new(spec: &'s SyntheticSpec) -> Result<Self> {
        let background_size = spec.background_size();
        let topic_pool = spec.vocab_size.saturating_sub(background_size);
        let needed_topics = spec.topic_size * 4;
        if background_size < 20 || topic_pool < needed_topics {
            return Err(Error::Generation(format!(
                "vocab_size {} too small: background {} (need 20), topic pool {} (need {})",
                spec.vocab_size, background_size, topic_pool, needed_topics
            )));
        }
        if spec.doc_len_min < spec.topic_size * spec.topic_tf_max + 2 {
            return Err(Error::Generation(format!(
                "doc_len_min {} cannot hold {} topic lemmas of up to {} occurrences",
                spec.doc_len_min, spec.topic_size, spec.topic_tf_max
            )));
        }
        let weights: Vec<f64> = (0..background_size)
            .map(|r| 1.0 / ((r + 1) as f64).powf(spec.zipf_exponent))
            .collect();
        let background = WeightedIndex::new(weights).map_err(|e| Error::Generation(e.to_string()))?;
        Ok(Generator {
            spec,
            rng: ChaCha8Rng::seed_from_u64(spec.seed),
            background,
            background_size,
            topics: Vec::new(),
        })
    }

    fn sample_topics(&mut self) -> Result<Vec<usize>> {
        let pool = self.spec.vocab_size - self.background_size;
        for _ in 0..10_000 {
            let mut t: Vec<usize> = rand::seq::index::sample(&mut self.rng, pool, self.spec.topic_size)
                .into_iter()
                .map(|i| self.background_size + i)
                .collect();
            t.sort_unstable();
            let ok = self.topics.iter().all(|other| {
                let shared = t.iter().filter(|x| other.binary_search(x).is_ok()).count();
                shared <= self.spec.max_topic_overlap
            });
            if ok {
                self.topics.push(t.clone());
                return Ok(t);
            }
        }
        Err(Error::Generation(format!(
            "vocab too small: cannot find topic sets overlapping in at most {} lemmas",
            self.spec.max_topic_overlap
        )))
    }

    fn random_word(&mut self) -> Slot {
        let r: f64 = self.rng.gen();
        if r < 0.50 {
            Slot::Noun {
                lemma: self.background.sample(&mut self.rng),
                form: self.rng.gen_range(0..SUFFIXES_A.len()),
            }
        } else if r < 0.96 {
            Slot::Function(self.rng.gen_range(0..FUNCTION_A.len()))
        } else {
            Slot::Name(self.rng.gen_range(0..NAME_POOL))
        }
    }

    fn random_number(&mut self) -> Slot {
        if self.rng.gen_bool(0.7) {
            Slot::Number(self.rng.gen_range(1..5000) as f64, 0)
        } else {
            let v = self.rng.gen_range(10..10_000) as f64 / 10.0;
            Slot::Number(v, 1)
        }
    }

    fn abstract_doc(&mut self) -> Result<AbstractDoc> {
        let spec = self.spec;
        let topics = self.sample_topics()?;
        let len = self.rng.gen_range(spec.doc_len_min..=spec.doc_len_max);

        let mut words: Vec<Slot> = Vec::with_capacity(len);
        for &t in &topics {
            for _ in 0..self.rng.gen_range(spec.topic_tf_min..=spec.topic_tf_max) {
                let form = self.rng.gen_range(0..SUFFIXES_A.len());
                words.push(Slot::Noun { lemma: t, form });
            }
        }
        while words.len() < len {
            let w = self.random_word();
            words.push(w);
        }
        words.shuffle(&mut self.rng);

        let mut sentences: Vec<Sentence> = Vec::new();
        let mut rest = &words[..];
        while !rest.is_empty() {
            let n = self.rng.gen_range(8..=20).min(rest.len());
            sentences.push(rest[..n].to_vec());
            rest = &rest[n..];
        }
        let n_numbers = self.rng.gen_range(0..=6);
        for _ in 0..n_numbers {
            let s = self.rng.gen_range(0..sentences.len());
            let pos = self.rng.gen_range(1..=sentences[s].len());
            let num = self.random_number();
            sentences[s].insert(pos, num);
        }
        Ok(AbstractDoc { sentences })
    }

    /// Appends background sentences until both renderings clear the length
    /// gate with a margin for noise that can shorten the translated side.
    fn pad(&mut self, mut doc: AbstractDoc) -> AbstractDoc {
        let target = MatchConfig::default().min_char_count as usize + PAD_MARGIN;
        while LANG_A.render(&doc).chars().count() < target || LANG_B.render(&doc).chars().count() < target {
            let n = self.rng.gen_range(8..=20);
            let sentence = (0..n).map(|_| self.random_word()).collect();
            doc.sentences.push(sentence);
        }
        doc
    }

    fn insert_words(&mut self, doc: &AbstractDoc) -> AbstractDoc {
        let rate = self.spec.noise.word_insertion_rate;
        if rate == 0.0 {
            return doc.clone();
        }
        let sentences = doc
            .sentences
            .iter()
            .map(|s| {
                let mut out = Vec::with_capacity(s.len() + 2);
                for slot in s {
                    out.push(*slot);
                    if slot.is_word() && self.rng.gen_bool(rate) {
                        let w = self.random_word();
                        out.push(w);
                    }
                }
                out
            })
            .collect();
        AbstractDoc { sentences }
    }

    /// Drops lemmas and jitters numbers on the translated side.
    fn corrupt_translation(&mut self, doc: &AbstractDoc, unknown_counter: &mut usize) -> AbstractDoc {
        let noise = self.spec.noise;
        let lemmas: BTreeSet<usize> = doc
            .sentences
            .iter()
            .flatten()
            .filter_map(|s| match s {
                Slot::Noun { lemma, .. } => Some(*lemma),
                _ => None,
            })
            .collect();
        let mut replaced: BTreeMap<usize, usize> = BTreeMap::new();
        for l in lemmas {
            if noise.keyword_drop_rate > 0.0 && self.rng.gen_bool(noise.keyword_drop_rate) {
                replaced.insert(l, *unknown_counter);
                *unknown_counter += 1;
            }
        }
        let sentences = doc
            .sentences
            .iter()
            .map(|s| {
                s.iter()
                    .map(|slot| match *slot {
                        Slot::Noun { lemma, .. } if replaced.contains_key(&lemma) => Slot::Unknown(replaced[&lemma]),
                        Slot::Number(v, d) if noise.number_jitter > 0.0 => {
                            let u = self.rng.gen_range(-noise.number_jitter..=noise.number_jitter);
                            let scale = 10f64.powi(d as i32);
                            Slot::Number(((v * (1.0 + u)) * scale).round() / scale, d)
                        }
                        other => other,
                    })
                    .collect()
            })
            .collect();
        AbstractDoc { sentences }
    }
}

fn distinct_lemmas(doc: &AbstractDoc) -> usize {
    doc.sentences
        .iter()
        .flatten()
        .filter_map(|s| match s {
            Slot::Noun { lemma, .. } => Some(*lemma),
            _ => None,
        })
        .collect::<HashSet<_>>()
        .len()
}

fn build_dictionaries(spec: &SyntheticSpec) -> Result<(MorphDictionary, MorphDictionary, RawTranslationTable, RawTranslationTable)> {
    let mut md_a = MorphDictionary::new(&spec.lang_a);
    let mut md_b = MorphDictionary::new(&spec.lang_b);
    let mut raw_ab = RawTranslationTable::new(&spec.lang_a, &spec.lang_b);
    let mut raw_ba = RawTranslationTable::new(&spec.lang_b, &spec.lang_a);
    for i in 0..spec.vocab_size {
        let (la, lb) = (LANG_A.lemma(i), LANG_B.lemma(i));
        for f in 0..SUFFIXES_A.len() {
            md_a.insert(&LANG_A.form(i, f), Analysis::noun(la.clone()));
            md_b.insert(&LANG_B.form(i, f), Analysis::noun(lb.clone()));
        }
        raw_ab.add(&la, [lb.clone()]);
        raw_ba.add(&lb, [la]);
    }
    for (md, words) in [(&mut md_a, FUNCTION_A), (&mut md_b, FUNCTION_B)] {
        for w in words {
            if !md.analyses(w).is_empty() {
                return Err(Error::Generation(format!("function word {w:?} collides with a noun form")));
            }
            md.insert(w, Analysis {
                lemma: w.to_string(),
                pos: Pos::Other,
            });
        }
        md.synthesize_self_analyses();
    }
    debug_assert_eq!(DEFAULT_NOUN_TAG, "noun");
    Ok((md_a, md_b, raw_ab, raw_ba))
}

/// Generates a synthetic bilingual collection; fully determined by `spec`.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<SyntheticCorpus> {
    spec.validate()?;
    let mut g = Generator::new(spec)?;
    let (morph_a, morph_b, raw_ab, raw_ba) = build_dictionaries(spec)?;
    let min_lemmas = MatchConfig::default().profile_size;

    let draw = |g: &mut Generator| -> Result<AbstractDoc> {
        for _ in 0..100 {
            let d = g.abstract_doc()?;
            if distinct_lemmas(&d) >= min_lemmas {
                return Ok(g.pad(d));
            }
            g.topics.pop();
        }
        Err(Error::Generation(format!("documents with {min_lemmas} distinct lemmas could not be drawn")))
    };

    let mut texts_a: Vec<(Option<usize>, String)> = Vec::new();
    let mut texts_b: Vec<(Option<usize>, String)> = Vec::new();
    let mut unknown = 0usize;
    for p in 0..spec.n_pairs {
        let source = draw(&mut g)?;
        let side_a = g.insert_words(&source);
        let translated = g.corrupt_translation(&source, &mut unknown);
        let side_b = g.insert_words(&translated);
        texts_a.push((Some(p), LANG_A.render(&side_a)));
        texts_b.push((Some(p), LANG_B.render(&side_b)));
    }
    for _ in 0..spec.n_noise_a {
        let d = draw(&mut g)?;
        texts_a.push((None, LANG_A.render(&d)));
    }
    for _ in 0..spec.n_noise_b {
        let d = draw(&mut g)?;
        texts_b.push((None, LANG_B.render(&d)));
    }
    texts_a.shuffle(&mut g.rng);
    texts_b.shuffle(&mut g.rng);

    let mut pair_a = vec![String::new(); spec.n_pairs];
    let mut pair_b = vec![String::new(); spec.n_pairs];
    let to_docs = |texts: Vec<(Option<usize>, String)>, lang: &str, slots: &mut Vec<String>| {
        texts
            .into_iter()
            .enumerate()
            .map(|(i, (pair, text))| {
                let id = format!("{lang}-{i:06}");
                if let Some(p) = pair {
                    slots[p] = id.clone();
                }
                Document::new(id, lang, text)
            })
            .collect::<Vec<_>>()
    };
    let docs_a = to_docs(texts_a, &spec.lang_a, &mut pair_a);
    let docs_b = to_docs(texts_b, &spec.lang_b, &mut pair_b);
    let mut gold: Vec<(String, String)> = pair_a.into_iter().zip(pair_b).collect();
    gold.sort();

    // the three most frequent background nouns are stopped
    let stop_a = (0..3).map(|i| LANG_A.lemma(i)).collect();
    let stop_b = (0..3).map(|i| LANG_B.lemma(i)).collect();

    Ok(SyntheticCorpus {
        docs_a,
        docs_b,
        gold,
        morph_a,
        morph_b,
        raw_ab,
        raw_ba,
        stop_a,
        stop_b,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub true_pos: u64,
    pub false_pos: u64,
    pub false_neg: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub confusion: Confusion,
    /// Rejected candidates per failed criterion ("keywords" or a filter
    /// name); a candidate failing several criteria counts under each.
    pub rejections: BTreeMap<String, u64>,
}

/// Scores predicted pairs against gold pairs, both as unordered id pairs.
pub fn evaluate(predicted: &[(String, String)], gold: &[(String, String)]) -> EvalReport {
    let norm = |(a, b): &(String, String)| if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    let pred: HashSet<(String, String)> = predicted.iter().map(norm).collect();
    let truth: HashSet<(String, String)> = gold.iter().map(norm).collect();
    let tp = pred.intersection(&truth).count() as u64;
    let fp = pred.len() as u64 - tp;
    let fne = truth.len() as u64 - tp;
    let ratio = |num: u64, den: u64| if den == 0 { 1.0 } else { num as f64 / den as f64 };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fne);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    EvalReport {
        precision,
        recall,
        f1,
        confusion: Confusion {
            true_pos: tp,
            false_pos: fp,
            false_neg: fne,
        },
        rejections: BTreeMap::new(),
    }
}

pub fn rejection_histogram(candidates: &[CandidatePair]) -> BTreeMap<String, u64> {
    let mut hist: BTreeMap<String, u64> = BTreeMap::new();
    hist.insert("keywords".into(), 0);
    for f in Filter::ALL {
        hist.insert(f.name().into(), 0);
    }
    for p in candidates.iter().filter(|p| !p.accepted) {
        if !p.keyword_match {
            *hist.get_mut("keywords").unwrap() += 1;
        }
        for f in p.failed_filters() {
            *hist.get_mut(f.name()).unwrap() += 1;
        }
    }
    hist
}

impl EvalReport {
    pub fn with_rejections(mut self, candidates: &[CandidatePair]) -> Self {
        self.rejections = rejection_histogram(candidates);
        self
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "precision  {:.4}", self.precision)?;
        writeln!(f, "recall     {:.4}", self.recall)?;
        writeln!(f, "f1         {:.4}", self.f1)?;
        let c = &self.confusion;
        writeln!(f, "tp={} fp={} fn={}", c.true_pos, c.false_pos, c.false_neg)?;
        if !self.rejections.is_empty() {
            writeln!(f, "rejected candidates by criterion:")?;
            for (k, v) in &self.rejections {
                writeln!(f, "  {k:<14}{v}")?;
            }
        }
        Ok(())
    }
}

/// Generates a corpus from `spec`, runs the pipeline over it and scores
/// the accepted pairs.
pub fn run_synthetic(spec: &SyntheticSpec, opts: &PipelineOptions) -> Result<EvalReport> {
    let corpus = generate_synthetic(spec)?;
    let (res_a, res_b) = corpus.resources();
    let opts = PipelineOptions {
        keep_rejected: true,
        ..opts.clone()
    };
    let out = pipeline::run(&corpus.docs_a, &corpus.docs_b, &res_a, &res_b, &opts)?;
    Ok(evaluate(&out.accepted_ids(), &corpus.gold).with_rejections(&out.candidates))
}
