//! Cross-language duplicate detection over keyword profiles.
//!
//! Two documents in different languages are a candidate when at least one
//! keyword of one side translates into a keyword of the other. A candidate
//! is accepted when, in the better of the two directions, at least
//! `min_shared_keywords` keywords translate into the other profile, at least
//! one side is longer than `min_char_count` characters, and all four
//! surface-statistics filters pass.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Document, SurfaceStats};
use crate::error::{Error, Result};
use crate::io;
use crate::keywords::{KeywordProfile, DEFAULT_PROFILE_SIZE};

#[derive(Debug, Clone, PartialEq)]
pub struct MatchConfig {
    pub min_shared_keywords: usize,
    pub profile_size: usize,
    pub min_char_count: u64,
    /// Require both sides (rather than one) to exceed `min_char_count`.
    pub require_both_long: bool,
    pub max_wordcount_ratio_diff: f64,
    pub max_capitalized_diff: u64,
    pub max_numbercount_diff: u64,
    pub max_number_value_diff: f64,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            min_shared_keywords: 5,
            profile_size: DEFAULT_PROFILE_SIZE,
            min_char_count: 1000,
            require_both_long: false,
            max_wordcount_ratio_diff: 0.10,
            max_capitalized_diff: 3,
            max_numbercount_diff: 2,
            max_number_value_diff: 0.15,
        }
    }
}

impl MatchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_shared_keywords > self.profile_size {
            return Err(Error::Config(format!(
                "min_shared_keywords ({}) exceeds profile_size ({})",
                self.min_shared_keywords, self.profile_size
            )));
        }
        for (name, v) in [
            ("max_wordcount_ratio_diff", self.max_wordcount_ratio_diff),
            ("max_number_value_diff", self.max_number_value_diff),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(())
    }

    /// The length gate: one side (or both, if configured) must be longer
    /// than `min_char_count` code points.
    pub fn length_gate(&self, chars_a: u64, chars_b: u64) -> bool {
        let long = |c: u64| c > self.min_char_count;
        if self.require_both_long {
            long(chars_a) && long(chars_b)
        } else {
            long(chars_a) || long(chars_b)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Filter {
    WordCount,
    Capitalized,
    NumberCount,
    NumberValues,
}

impl Filter {
    pub const ALL: [Filter; 4] = [
        Filter::WordCount,
        Filter::Capitalized,
        Filter::NumberCount,
        Filter::NumberValues,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Filter::WordCount => "word_count",
            Filter::Capitalized => "capitalized",
            Filter::NumberCount => "number_count",
            Filter::NumberValues => "number_values",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub filter: Filter,
    pub passed: bool,
    /// The observed difference the threshold was compared against.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordMatch {
    pub shared_count: usize,
    pub is_match: bool,
    /// (lang-a lemma, lang-b lemma) pairs of the winning direction.
    pub shared: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePair {
    pub doc_a: String,
    pub doc_b: String,
    pub shared_keyword_count: usize,
    pub shared_keywords: Vec<(String, String)>,
    pub keyword_match: bool,
    pub verdicts: Vec<Verdict>,
    pub accepted: bool,
}

impl CandidatePair {
    pub fn failed_filters(&self) -> impl Iterator<Item = Filter> + '_ {
        self.verdicts.iter().filter(|v| !v.passed).map(|v| v.filter)
    }
}

/// Keywords of `from` whose translation is a keyword of `to`, as (from, to) pairs.
fn directional(from: &KeywordProfile, to: &KeywordProfile) -> Vec<(String, String)> {
    let targets: HashSet<&str> = to.lemmas().collect();
    from.keywords
        .iter()
        .filter_map(|k| {
            let t = k.translation.as_deref()?;
            targets.contains(t).then(|| (k.lemma.clone(), t.to_string()))
        })
        .collect()
}

/// Counts shared keywords in both directions and keeps the larger count,
/// which makes the rule symmetric in its arguments.
pub fn keyword_match(a: &KeywordProfile, b: &KeywordProfile, cfg: &MatchConfig) -> KeywordMatch {
    let forward = directional(a, b);
    let backward: Vec<(String, String)> =
        directional(b, a).into_iter().map(|(lb, la)| (la, lb)).collect();
    let shared = if backward.len() > forward.len() { backward } else { forward };
    KeywordMatch {
        shared_count: shared.len(),
        is_match: shared.len() >= cfg.min_shared_keywords,
        shared,
    }
}

fn relative_diff(x: f64, y: f64) -> f64 {
    let denom = x.abs().max(y.abs());
    if denom == 0.0 {
        0.0
    } else {
        (x - y).abs() / denom
    }
}

/// The four surface-statistics filters, in [`Filter::ALL`] order.
pub fn heuristic_filters(sa: &SurfaceStats, sb: &SurfaceStats, cfg: &MatchConfig) -> [Verdict; 4] {
    let wc = relative_diff(sa.word_count as f64, sb.word_count as f64);
    let cap = sa.capitalized_midline_count.abs_diff(sb.capitalized_midline_count);
    let nc = sa.number_count.abs_diff(sb.number_count);

    let mut xs = sa.numbers.clone();
    let mut ys = sb.numbers.clone();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let worst = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| relative_diff(x, y))
        .fold(0.0f64, f64::max);

    [
        Verdict {
            filter: Filter::WordCount,
            passed: wc <= cfg.max_wordcount_ratio_diff,
            value: wc,
        },
        Verdict {
            filter: Filter::Capitalized,
            passed: cap <= cfg.max_capitalized_diff,
            value: cap as f64,
        },
        Verdict {
            filter: Filter::NumberCount,
            passed: nc <= cfg.max_numbercount_diff,
            value: nc as f64,
        },
        Verdict {
            filter: Filter::NumberValues,
            passed: worst <= cfg.max_number_value_diff,
            value: worst,
        },
    ]
}

/// Index pairs `(i, j)` into `profiles_a`/`profiles_b` sharing at least one
/// translated keyword in either direction, found through inverted indexes
/// keyed by keyword lemma.
pub fn candidate_pairs(
    profiles_a: &[KeywordProfile],
    profiles_b: &[KeywordProfile],
) -> BTreeSet<(usize, usize)> {
    fn index(profiles: &[KeywordProfile]) -> HashMap<&str, Vec<usize>> {
        let mut idx: HashMap<&str, Vec<usize>> = HashMap::new();
        for (i, p) in profiles.iter().enumerate() {
            for lemma in p.lemmas() {
                idx.entry(lemma).or_default().push(i);
            }
        }
        idx
    }
    let by_lemma_a = index(profiles_a);
    let by_lemma_b = index(profiles_b);

    let mut out = BTreeSet::new();
    for (i, p) in profiles_a.iter().enumerate() {
        for t in p.keywords.iter().filter_map(|k| k.translation.as_deref()) {
            for &j in by_lemma_b.get(t).into_iter().flatten() {
                out.insert((i, j));
            }
        }
    }
    for (j, p) in profiles_b.iter().enumerate() {
        for t in p.keywords.iter().filter_map(|k| k.translation.as_deref()) {
            for &i in by_lemma_a.get(t).into_iter().flatten() {
                out.insert((i, j));
            }
        }
    }
    out
}

fn side_lang<'a>(profiles: &'a [KeywordProfile], side: &str) -> Result<Option<&'a str>> {
    let mut langs = profiles.iter().map(|p| p.lang.as_str());
    let Some(first) = langs.next() else {
        return Ok(None);
    };
    if let Some(other) = langs.find(|l| *l != first) {
        return Err(Error::Config(format!(
            "side {side} mixes languages {first:?} and {other:?}"
        )));
    }
    Ok(Some(first))
}

/// Evaluates every candidate pair. Returns accepted pairs only, or every
/// candidate that passed the length gate when `keep_rejected` is set; the
/// order is shared count descending, then `doc_a`, then `doc_b`.
pub fn align(
    profiles_a: &[KeywordProfile],
    profiles_b: &[KeywordProfile],
    stats_a: &HashMap<String, SurfaceStats>,
    stats_b: &HashMap<String, SurfaceStats>,
    cfg: &MatchConfig,
    keep_rejected: bool,
) -> Result<Vec<CandidatePair>> {
    cfg.validate()?;
    if let (Some(la), Some(lb)) = (side_lang(profiles_a, "a")?, side_lang(profiles_b, "b")?) {
        if la == lb {
            return Err(Error::Config(format!("both sides are in language {la:?}")));
        }
    }
    for (profiles, stats) in [(profiles_a, stats_a), (profiles_b, stats_b)] {
        if let Some(p) = profiles.iter().find(|p| !stats.contains_key(&p.id)) {
            return Err(Error::MissingStats(p.id.clone()));
        }
    }

    let candidates: Vec<(usize, usize)> = candidate_pairs(profiles_a, profiles_b).into_iter().collect();
    let mut pairs: Vec<CandidatePair> = candidates
        .par_iter()
        .filter_map(|&(i, j)| {
            let (a, b) = (&profiles_a[i], &profiles_b[j]);
            if !cfg.length_gate(a.char_count, b.char_count) {
                return None;
            }
            let km = keyword_match(a, b, cfg);
            let verdicts = heuristic_filters(&stats_a[&a.id], &stats_b[&b.id], cfg).to_vec();
            let accepted = km.is_match && verdicts.iter().all(|v| v.passed);
            if !accepted && !keep_rejected {
                return None;
            }
            Some(CandidatePair {
                doc_a: a.id.clone(),
                doc_b: b.id.clone(),
                shared_keyword_count: km.shared_count,
                shared_keywords: km.shared,
                keyword_match: km.is_match,
                verdicts,
                accepted,
            })
        })
        .collect();
    pairs.sort_by(|x, y| {
        y.shared_keyword_count
            .cmp(&x.shared_keyword_count)
            .then_with(|| x.doc_a.cmp(&y.doc_a))
            .then_with(|| x.doc_b.cmp(&y.doc_b))
    });
    Ok(pairs)
}

pub fn write_pairs(path: &Path, pairs: &[CandidatePair]) -> Result<()> {
    io::write_jsonl(path, pairs)
}

pub fn read_pairs(path: &Path) -> Result<Vec<CandidatePair>> {
    io::read_jsonl(path)
}

/// Debug listing of rejected candidates with every filter verdict.
pub fn write_rejected_tsv(path: &Path, pairs: &[CandidatePair]) -> Result<()> {
    io::write_atomic(path, |w| {
        write!(w, "doc_a\tdoc_b\tshared\tkeywords")?;
        for f in Filter::ALL {
            write!(w, "\t{}", f.name())?;
        }
        writeln!(w)?;
        for p in pairs.iter().filter(|p| !p.accepted) {
            let kw = if p.keyword_match { "pass" } else { "fail" };
            write!(w, "{}\t{}\t{}\t{kw}", p.doc_a, p.doc_b, p.shared_keyword_count)?;
            for v in &p.verdicts {
                let tag = if v.passed { "pass" } else { "fail" };
                write!(w, "\t{tag}:{}", v.value)?;
            }
            writeln!(w)?;
        }
        Ok(())
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Side {
    pub id: String,
    pub lang: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelCorpusEntry {
    pub pair_id: String,
    pub side_a: Side,
    pub side_b: Side,
    pub shared_keywords: Vec<(String, String)>,
}

pub const PARALLEL_CORPUS_HEADER: &str = "# parallel corpus: one JSON object per line";

/// Resolves accepted pairs against the two collections, keeping pair order.
pub fn parallel_entries(
    pairs: &[CandidatePair],
    docs_a: &[Document],
    docs_b: &[Document],
) -> Result<Vec<ParallelCorpusEntry>> {
    let by_id = |docs: &[Document]| -> HashMap<String, Side> {
        docs.iter()
            .map(|d| {
                (
                    d.id.clone(),
                    Side {
                        id: d.id.clone(),
                        lang: d.lang.clone(),
                        text: d.text.clone(),
                    },
                )
            })
            .collect()
    };
    let (sides_a, sides_b) = (by_id(docs_a), by_id(docs_b));
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in pairs.iter().filter(|p| p.accepted) {
        let pair_id = format!("{}|{}", p.doc_a, p.doc_b);
        if !seen.insert((p.doc_a.as_str(), p.doc_b.as_str())) {
            return Err(Error::DuplicatePair(pair_id));
        }
        let side_a = sides_a
            .get(&p.doc_a)
            .ok_or_else(|| Error::DanglingDocument(p.doc_a.clone()))?;
        let side_b = sides_b
            .get(&p.doc_b)
            .ok_or_else(|| Error::DanglingDocument(p.doc_b.clone()))?;
        if side_a.lang == side_b.lang {
            return Err(Error::Config(format!("pair {pair_id} has both sides in {:?}", side_a.lang)));
        }
        out.push(ParallelCorpusEntry {
            pair_id,
            side_a: side_a.clone(),
            side_b: side_b.clone(),
            shared_keywords: p.shared_keywords.clone(),
        });
    }
    Ok(out)
}

pub fn emit_parallel_corpus(
    path: &Path,
    pairs: &[CandidatePair],
    docs_a: &[Document],
    docs_b: &[Document],
) -> Result<usize> {
    let entries = parallel_entries(pairs, docs_a, docs_b)?;
    io::write_atomic(path, |w| {
        writeln!(w, "{PARALLEL_CORPUS_HEADER}")?;
        for e in &entries {
            serde_json::to_writer(&mut *w, e)?;
            writeln!(w)?;
        }
        Ok(())
    })?;
    Ok(entries.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keywords::Keyword;
    use proptest::prelude::*;

    fn profile(id: &str, lang: &str, kws: &[(&str, Option<&str>)]) -> KeywordProfile {
        let keywords: Vec<Keyword> = kws
            .iter()
            .enumerate()
            .map(|(i, (l, t))| Keyword {
                lemma: l.to_string(),
                score: 100.0 - i as f64,
                translation: t.map(str::to_string),
            })
            .collect();
        let translated = keywords.iter().filter_map(|k| k.translation.clone()).collect();
        KeywordProfile {
            id: id.into(),
            lang: lang.into(),
            char_count: 2000,
            keywords,
            translated,
        }
    }

    /// `a` has 12 keywords a0..a11 translating to b0..b11; `b` holds the
    /// first `shared` of those plus unrelated filler.
    fn pair_with_shared(shared: usize) -> (KeywordProfile, KeywordProfile) {
        let a_kw: Vec<(String, String)> = (0..12).map(|i| (format!("a{i}"), format!("b{i}"))).collect();
        let a = profile(
            "A",
            "uk",
            &a_kw.iter().map(|(l, t)| (l.as_str(), Some(t.as_str()))).collect::<Vec<_>>(),
        );
        let b_kw: Vec<String> = (0..12)
            .map(|i| if i < shared { format!("b{i}") } else { format!("z{i}") })
            .collect();
        let b = profile("B", "ru", &b_kw.iter().map(|l| (l.as_str(), None)).collect::<Vec<_>>());
        (a, b)
    }

    #[test]
    fn five_shared_match_four_do_not() {
        let cfg = MatchConfig::default();
        let (a, b) = pair_with_shared(5);
        let m = keyword_match(&a, &b, &cfg);
        assert_eq!(m.shared_count, 5);
        assert!(m.is_match);
        let (a, b) = pair_with_shared(4);
        let m = keyword_match(&a, &b, &cfg);
        assert_eq!(m.shared_count, 4);
        assert!(!m.is_match);
    }

    #[test]
    fn backward_direction_counts() {
        let a = profile("A", "uk", &[("x", None), ("y", None), ("z", None)]);
        let b = profile("B", "ru", &[("p", Some("x")), ("q", Some("y")), ("r", Some("w"))]);
        let m = keyword_match(&a, &b, &MatchConfig::default());
        assert_eq!(m.shared_count, 2);
        assert_eq!(m.shared, [("x".to_string(), "p".to_string()), ("y".into(), "q".into())]);
        assert_eq!(keyword_match(&b, &a, &MatchConfig::default()).shared_count, 2);
    }

    fn stats(wc: u64, cap: u64, numbers: &[f64]) -> SurfaceStats {
        SurfaceStats {
            word_count: wc,
            char_count: 0,
            capitalized_midline_count: cap,
            number_count: numbers.len() as u64,
            numbers: numbers.to_vec(),
        }
    }

    fn passed(sa: &SurfaceStats, sb: &SurfaceStats, f: Filter) -> bool {
        heuristic_filters(sa, sb, &MatchConfig::default())
            .iter()
            .find(|v| v.filter == f)
            .unwrap()
            .passed
    }

    #[test]
    fn word_count_boundaries() {
        assert!(passed(&stats(100, 0, &[]), &stats(111, 0, &[]), Filter::WordCount));
        assert!(!passed(&stats(100, 0, &[]), &stats(112, 0, &[]), Filter::WordCount));
        assert!(passed(&stats(90, 0, &[]), &stats(100, 0, &[]), Filter::WordCount));
        assert!(passed(&stats(0, 0, &[]), &stats(0, 0, &[]), Filter::WordCount));
    }

    #[test]
    fn capitalized_boundaries() {
        assert!(passed(&stats(1, 7, &[]), &stats(1, 10, &[]), Filter::Capitalized));
        assert!(!passed(&stats(1, 7, &[]), &stats(1, 11, &[]), Filter::Capitalized));
    }

    #[test]
    fn number_count_boundaries() {
        assert!(passed(&stats(1, 0, &[1.0]), &stats(1, 0, &[1.0, 2.0, 3.0]), Filter::NumberCount));
        assert!(!passed(&stats(1, 0, &[]), &stats(1, 0, &[1.0, 2.0, 3.0]), Filter::NumberCount));
    }

    #[test]
    fn number_value_boundaries() {
        assert!(passed(&stats(1, 0, &[100.0]), &stats(1, 0, &[114.0]), Filter::NumberValues));
        assert!(!passed(&stats(1, 0, &[100.0]), &stats(1, 0, &[118.0]), Filter::NumberValues));
        assert!(passed(&stats(1, 0, &[85.0]), &stats(1, 0, &[100.0]), Filter::NumberValues));
        assert!(passed(&stats(1, 0, &[0.0]), &stats(1, 0, &[0.0]), Filter::NumberValues));
        assert!(!passed(&stats(1, 0, &[0.0]), &stats(1, 0, &[5.0]), Filter::NumberValues));
    }

    #[test]
    fn number_values_sorted_and_truncated() {
        // sorted: [1, 50, 100] vs [2, 52]: pairs (1,2) fails at 0.5
        assert!(!passed(&stats(1, 0, &[100.0, 1.0, 50.0]), &stats(1, 0, &[52.0, 2.0]), Filter::NumberValues));
        // sorted: [10, 100] vs [10, 100, 5000] truncated to [10, 100]
        assert!(passed(&stats(1, 0, &[100.0, 10.0]), &stats(1, 0, &[5000.0, 10.0, 100.0]), Filter::NumberValues));
    }

    #[test]
    fn length_gate() {
        let cfg = MatchConfig::default();
        assert!(cfg.length_gate(1001, 10));
        assert!(!cfg.length_gate(1000, 1000));
        let both = MatchConfig {
            require_both_long: true,
            ..cfg
        };
        assert!(!both.length_gate(1001, 10));
        assert!(both.length_gate(1001, 1001));
    }

    fn stats_map(profiles: &[KeywordProfile], s: SurfaceStats) -> HashMap<String, SurfaceStats> {
        profiles.iter().map(|p| (p.id.clone(), s.clone())).collect()
    }

    #[test]
    fn align_empty_sides() {
        let cfg = MatchConfig::default();
        let (a, _) = pair_with_shared(5);
        let sa = stats_map(std::slice::from_ref(&a), stats(10, 0, &[]));
        assert!(align(&[a], &[], &sa, &HashMap::new(), &cfg, false).unwrap().is_empty());
    }

    #[test]
    fn align_reports_rejected_when_verbose() {
        let cfg = MatchConfig::default();
        let (a, b) = pair_with_shared(6);
        let sa = stats_map(std::slice::from_ref(&a), stats(100, 0, &[1.0]));
        let sb = stats_map(std::slice::from_ref(&b), stats(100, 0, &[1.0, 2.0, 3.0, 4.0]));
        let pairs = [a.clone()];
        let quiet = align(&pairs, std::slice::from_ref(&b), &sa, &sb, &cfg, false).unwrap();
        assert!(quiet.is_empty());
        let verbose = align(&pairs, std::slice::from_ref(&b), &sa, &sb, &cfg, true).unwrap();
        assert_eq!(verbose.len(), 1);
        let p = &verbose[0];
        assert!(!p.accepted && p.keyword_match);
        assert_eq!(p.failed_filters().collect::<Vec<_>>(), [Filter::NumberCount]);
    }

    #[test]
    fn align_errors() {
        let cfg = MatchConfig::default();
        let (a, b) = pair_with_shared(6);
        let sa = stats_map(std::slice::from_ref(&a), stats(100, 0, &[]));
        let err = align(std::slice::from_ref(&a), std::slice::from_ref(&b), &sa, &HashMap::new(), &cfg, false).unwrap_err();
        assert!(matches!(err, Error::MissingStats(id) if id == "B"));

        let mut b_uk = b.clone();
        b_uk.lang = "uk".into();
        let sb = stats_map(&[b_uk.clone()], stats(100, 0, &[]));
        assert!(matches!(
            align(&[a], &[b_uk], &sa, &sb, &cfg, false),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn align_skips_short_pairs() {
        let cfg = MatchConfig::default();
        let (mut a, mut b) = pair_with_shared(8);
        a.char_count = 500;
        b.char_count = 1000;
        let sa = stats_map(std::slice::from_ref(&a), stats(100, 0, &[]));
        let sb = stats_map(std::slice::from_ref(&b), stats(100, 0, &[]));
        assert!(align(&[a], &[b], &sa, &sb, &cfg, true).unwrap().is_empty());
    }

    fn docs() -> (Vec<Document>, Vec<Document>) {
        (
            vec![Document::new("A", "uk", "текст")],
            vec![Document::new("B", "ru", "текст")],
        )
    }

    fn accepted_pair() -> CandidatePair {
        CandidatePair {
            doc_a: "A".into(),
            doc_b: "B".into(),
            shared_keyword_count: 5,
            shared_keywords: vec![("a".into(), "b".into())],
            keyword_match: true,
            verdicts: vec![],
            accepted: true,
        }
    }

    #[test]
    fn emit_corpus() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.jsonl");
        let (da, db) = docs();

        assert_eq!(emit_parallel_corpus(&path, &[], &da, &db).unwrap(), 0);
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, format!("{PARALLEL_CORPUS_HEADER}\n"));

        assert_eq!(emit_parallel_corpus(&path, &[accepted_pair()], &da, &db).unwrap(), 1);
        let text = std::fs::read_to_string(&path).unwrap();
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body.len(), 1);
        let e: ParallelCorpusEntry = serde_json::from_str(body[0]).unwrap();
        assert_eq!(e.side_a.text, "текст");
        assert_eq!(e.side_b.lang, "ru");
    }

    #[test]
    fn emit_rejects_dangling_and_duplicates() {
        let (da, db) = docs();
        let mut dangling = accepted_pair();
        dangling.doc_b = "missing".into();
        assert!(matches!(parallel_entries(&[dangling], &da, &db), Err(Error::DanglingDocument(_))));
        let dup = [accepted_pair(), accepted_pair()];
        assert!(matches!(parallel_entries(&dup, &da, &db), Err(Error::DuplicatePair(_))));
    }

    fn arb_profile(id: String, lang: &'static str) -> impl Strategy<Value = KeywordProfile> {
        proptest::collection::vec(("[a-h]", proptest::option::of("[a-h]")), 0..12).prop_map(move |kws| {
            let mut seen = HashSet::new();
            let kws: Vec<(String, Option<String>)> =
                kws.into_iter().filter(|(l, _)| seen.insert(l.clone())).collect();
            profile(
                &id,
                lang,
                &kws.iter().map(|(l, t)| (l.as_str(), t.as_deref())).collect::<Vec<_>>(),
            )
        })
    }

    proptest! {
        #[test]
        fn keyword_match_symmetric(a in arb_profile("a".into(), "uk"), b in arb_profile("b".into(), "ru"), k in 0usize..12) {
            let cfg = MatchConfig { min_shared_keywords: k, ..MatchConfig::default() };
            let ab = keyword_match(&a, &b, &cfg);
            let ba = keyword_match(&b, &a, &cfg);
            prop_assert_eq!(ab.shared_count, ba.shared_count);
            prop_assert_eq!(ab.is_match, ba.is_match);
        }

        #[test]
        fn more_translations_never_lower_count(a in arb_profile("a".into(), "uk"), b in arb_profile("b".into(), "ru"), extra in "[a-h]") {
            let cfg = MatchConfig::default();
            let before = keyword_match(&a, &b, &cfg).shared_count;
            // add a translation to the first untranslated keyword on side a
            let mut grown = a.clone();
            if let Some(k) = grown.keywords.iter_mut().find(|k| k.translation.is_none()) {
                k.translation = Some(extra.clone());
                grown.translated.insert(extra);
            }
            prop_assert!(keyword_match(&grown, &b, &cfg).shared_count >= before);
        }
    }
}
