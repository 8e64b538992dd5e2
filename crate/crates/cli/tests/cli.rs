use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bitext_core::evaluation::{self, SyntheticSpec};

fn bitext(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bitext"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn small_spec() -> SyntheticSpec {
    SyntheticSpec {
        n_pairs: 6,
        n_noise_a: 15,
        n_noise_b: 15,
        vocab_size: 2000,
        ..SyntheticSpec::default()
    }
}

fn write_synthetic(dir: &Path) {
    evaluation::generate_synthetic(&small_spec()).unwrap().write(dir).unwrap();
}

#[test]
fn help_on_every_command() {
    for cmd in [
        "build-freqdict",
        "resolve-translations",
        "extract",
        "align",
        "emit",
        "synth",
        "evaluate",
        "pipeline",
    ] {
        let o = bitext(&[cmd, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
        assert!(stdout(&o).contains("Usage: bitext"), "{cmd}");
    }
    assert_eq!(bitext(&["--help"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(bitext(&["align"]).status.code(), Some(2));
    assert_eq!(bitext(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(bitext(&["evaluate", "--pairs", "x.jsonl"]).status.code(), Some(2));
}

#[test]
fn build_freqdict_toy_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.jsonl");
    let morph = dir.path().join("m.tsv");
    let out = dir.path().join("f.tsv");
    fs::write(
        &corpus,
        concat!(
            "{\"id\":\"1\",\"lang\":\"uk\",\"text\":\"Стіл і стола.\"}\n",
            "{\"id\":\"2\",\"lang\":\"uk\",\"text\":\"Столи стоять.\"}\n",
            "{\"id\":\"3\",\"lang\":\"uk\",\"text\":\"Ліс.\"}\n",
        ),
    )
    .unwrap();
    fs::write(&morph, "стіл\tстіл\tnoun\nстола\tстіл\tnoun\nстоли\tстіл\tnoun\nліс\tліс\tnoun\nі\tі\tconj\n").unwrap();

    let o = bitext(&["build-freqdict", "--corpus", p(&corpus), "--morph", p(&morph), "--lang", "uk", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("doc_count=3"), "{}", stdout(&o));
    assert!(stdout(&o).contains("lemmas=1"));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("стіл\t3\t2"), "{text}");
    assert!(!text.contains("ліс"));
}

#[test]
fn empty_corpus_gives_empty_dictionary_and_warning() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.jsonl");
    let morph = dir.path().join("m.tsv");
    let out = dir.path().join("f.tsv");
    fs::write(&corpus, "").unwrap();
    fs::write(&morph, "стіл\tстіл\tnoun\n").unwrap();
    let o = bitext(&["build-freqdict", "--corpus", p(&corpus), "--morph", p(&morph), "--lang", "uk", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("doc_count=0 lemmas=0"));
    assert!(stderr(&o).to_lowercase().contains("empty"), "{}", stderr(&o));
    let fd = bitext_core::FrequencyDictionary::load(&out).unwrap();
    assert!(fd.is_empty());
}

#[test]
fn missing_input_exits_2_and_names_path() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.jsonl");
    let o = bitext(&[
        "build-freqdict",
        "--corpus",
        p(&missing),
        "--morph",
        p(&missing),
        "--lang",
        "uk",
        "--out",
        p(&dir.path().join("f.tsv")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("absent.jsonl"), "{}", stderr(&o));

    let o = bitext(&["pipeline", "--config", p(&dir.path().join("nope.conf"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nope.conf"));
}

#[test]
fn malformed_input_exits_1_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.jsonl");
    let morph = dir.path().join("m.tsv");
    fs::write(&corpus, "").unwrap();
    fs::write(&morph, "стіл\tстіл\tnoun\nбитий рядок\n").unwrap();
    let o = bitext(&[
        "build-freqdict",
        "--corpus",
        p(&corpus),
        "--morph",
        p(&morph),
        "--lang",
        "uk",
        "--out",
        p(&dir.path().join("f.tsv")),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("m.tsv:2:"), "{}", stderr(&o));
}

#[test]
fn noiseless_pipeline_pair_count_equals_gold() {
    let dir = tempfile::tempdir().unwrap();
    let o = bitext(&["synth", "--out-dir", p(dir.path()), "--set", "n_pairs=8", "--set", "n_noise_a=20", "--set", "n_noise_b=30"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("gold_pairs=8"));

    let conf = dir.path().join("pipeline.conf");
    let o = bitext(&["pipeline", "--config", p(&conf)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("pairs=8\n"), "{}", stdout(&o));
    assert!(stdout(&o).contains("elapsed_ms="));

    let out = dir.path().join("out");
    let json = dir.path().join("report.json");
    let o = bitext(&[
        "evaluate",
        "--pairs",
        p(&out.join("pairs.jsonl")),
        "--gold",
        p(&dir.path().join("gold.tsv")),
        "--json",
        p(&json),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("precision  1.0000"));
    assert!(stdout(&o).contains("recall     1.0000"));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["confusion"]["true_pos"], 8);

    let parallel = fs::read_to_string(out.join("parallel.jsonl")).unwrap();
    assert_eq!(parallel.lines().count(), 9);
    assert!(parallel.starts_with("# "));
}

#[test]
fn staged_commands_match_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_synthetic(d);
    let o = bitext(&["pipeline", "--config", p(&d.join("pipeline.conf"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let reference = d.join("out");
    let staged = d.join("staged");
    fs::create_dir(&staged).unwrap();
    let s = |name: &str| staged.join(name);

    for lang in ["uk", "ru"] {
        let o = bitext(&[
            "build-freqdict",
            "--corpus",
            p(&d.join(format!("corpus.{lang}.jsonl"))),
            "--morph",
            p(&d.join(format!("morph.{lang}.tsv"))),
            "--lang",
            lang,
            "--out",
            p(&s(&format!("freqdict.{lang}.tsv"))),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    for (src, dst) in [("uk", "ru"), ("ru", "uk")] {
        let o = bitext(&[
            "resolve-translations",
            "--raw",
            p(&d.join(format!("raw.{src}-{dst}.tsv"))),
            "--src",
            src,
            "--dst",
            dst,
            "--freqdict",
            p(&s(&format!("freqdict.{dst}.tsv"))),
            "--out",
            p(&s(&format!("translations.{src}-{dst}.tsv"))),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    for (lang, other) in [("uk", "ru"), ("ru", "uk")] {
        let o = bitext(&[
            "extract",
            "--corpus",
            p(&d.join(format!("corpus.{lang}.jsonl"))),
            "--lang",
            lang,
            "--morph",
            p(&d.join(format!("morph.{lang}.tsv"))),
            "--stopwords",
            p(&d.join(format!("stop.{lang}.txt"))),
            "--freqdict",
            p(&s(&format!("freqdict.{lang}.tsv"))),
            "--translations",
            p(&s(&format!("translations.{lang}-{other}.tsv"))),
            "--other-lang",
            other,
            "--profiles-out",
            p(&s(&format!("profiles.{lang}.jsonl"))),
            "--stats-out",
            p(&s(&format!("stats.{lang}.jsonl"))),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let o = bitext(&[
        "align",
        "--profiles-a",
        p(&s("profiles.uk.jsonl")),
        "--profiles-b",
        p(&s("profiles.ru.jsonl")),
        "--stats-a",
        p(&s("stats.uk.jsonl")),
        "--stats-b",
        p(&s("stats.ru.jsonl")),
        "--out",
        p(&s("pairs.jsonl")),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = bitext(&[
        "emit",
        "--pairs",
        p(&s("pairs.jsonl")),
        "--corpus-a",
        p(&d.join("corpus.uk.jsonl")),
        "--corpus-b",
        p(&d.join("corpus.ru.jsonl")),
        "--out",
        p(&s("parallel.jsonl")),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    for entry in fs::read_dir(&staged).unwrap() {
        let name = entry.unwrap().file_name();
        let a = fs::read(staged.join(&name)).unwrap();
        let b = fs::read(reference.join(&name)).unwrap();
        assert!(a == b, "{name:?} differs between staged and pipeline runs");
    }
    assert_eq!(fs::read_dir(&staged).unwrap().count(), 10);
}

#[test]
fn align_rejects_same_language_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_synthetic(d);
    assert_eq!(bitext(&["pipeline", "--config", p(&d.join("pipeline.conf"))]).status.code(), Some(0));
    let out = d.join("out");
    let o = bitext(&[
        "align",
        "--profiles-a",
        p(&out.join("profiles.uk.jsonl")),
        "--profiles-b",
        p(&out.join("profiles.uk.jsonl")),
        "--stats-a",
        p(&out.join("stats.uk.jsonl")),
        "--stats-b",
        p(&out.join("stats.uk.jsonl")),
        "--out",
        p(&d.join("pairs.jsonl")),
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("configuration error"));
    assert!(!d.join("pairs.jsonl").exists());
}

#[test]
fn failed_pipeline_leaves_no_partial_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_synthetic(d);
    let out = d.join("out");
    // the last output cannot be written over a directory
    fs::create_dir_all(out.join("parallel.jsonl")).unwrap();
    let o = bitext(&["pipeline", "--config", p(&d.join("pipeline.conf"))]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let left: Vec<_> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(left, ["parallel.jsonl"]);
}

#[test]
fn pipeline_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_synthetic(d);
    let conf = p(&d.join("pipeline.conf")).to_string();
    let o = bitext(&["pipeline", "--config", &conf, "--set", "no_such_key=1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bitext(&["pipeline", "--config", &conf, "--set", "max_wordcount_ratio_diff=-1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bitext(&["pipeline", "--config", &conf, "--workers", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bitext(&["pipeline", "--config", &conf, "--set", "corpus_a=missing.jsonl"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing.jsonl"));
    let o = bitext(&["pipeline"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verbose_pipeline_writes_rejected_candidates() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let spec = SyntheticSpec {
        noise: evaluation::NoiseOps {
            keyword_drop_rate: 0.3,
            word_insertion_rate: 0.2,
            number_jitter: 0.3,
        },
        ..small_spec()
    };
    evaluation::generate_synthetic(&spec).unwrap().write(d).unwrap();
    let o = bitext(&["pipeline", "--config", p(&d.join("pipeline.conf")), "--verbose"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rejected = d.join("out").join("rejected.tsv");
    let text = fs::read_to_string(rejected).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "doc_a\tdoc_b\tshared\tkeywords\tword_count\tcapitalized\tnumber_count\tnumber_values"
    );
    assert!(lines.all(|l| l.contains("fail")));
}

#[test]
fn evaluate_runs_a_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.conf");
    fs::write(&spec, "n_pairs = 4\nn_noise_a = 10\nn_noise_b = 10\nvocab_size = 2000\nseed = 3\n").unwrap();
    let o = bitext(&["evaluate", "--spec", p(&spec)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("tp=4 fp=0 fn=0"), "{}", stdout(&o));

    fs::write(&spec, "keyword_drop_rate = 2\n").unwrap();
    assert_eq!(bitext(&["evaluate", "--spec", p(&spec)]).status.code(), Some(2));
}
