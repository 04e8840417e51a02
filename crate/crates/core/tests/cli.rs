mod common;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use kgsynth::eval::split_queries;
use kgsynth::kg::{KnowledgeGraphBuilder, Split};

fn kgsynth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgsynth")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn transform_writes_variant_mapping_and_manifest() {
    let out = tempfile::tempdir().unwrap();
    let dir = out.path().join("vw");
    let o = kgsynth(&[
        "transform",
        "--input",
        p(&common::fixture_dir()),
        "--output",
        p(&dir),
        "--recipe",
        "virtual-world",
        "--targets",
        "entities,relations",
        "--seed",
        "42",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "entities.tsv",
        "relations.tsv",
        "descriptions.tsv",
        "train.tsv",
        "mapping.tsv",
        "recipe.txt",
        "manifest.tsv",
    ] {
        assert!(dir.join(f).is_file(), "{f}");
    }
    common::verify_variant_files(&common::fixture_dir(), &dir).unwrap();
    let manifest = fs::read_to_string(dir.join("manifest.tsv")).unwrap();
    for key in [
        "command\ttransform",
        "seed\t42",
        "param.recipe\tvirtual_world",
        "version\t",
    ] {
        assert!(manifest.contains(key), "{key} missing from\n{manifest}");
    }
}

#[test]
fn repeated_runs_are_identical() {
    let out = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let dir = out.path().join(name);
        let o = kgsynth(&[
            "--threads",
            threads,
            "suite",
            "--input",
            p(&common::fixture_dir()),
            "--output",
            p(&dir),
            "--seed",
            "3",
        ]);
        assert!(o.status.success());
        dir
    };
    let (a, b) = (run("a", "1"), run("b", "4"));
    let mut labels = 0;
    for entry in fs::read_dir(&a).unwrap() {
        let entry = entry.unwrap();
        if !entry.path().is_dir() {
            continue;
        }
        labels += 1;
        for file in fs::read_dir(entry.path()).unwrap() {
            let file = file.unwrap();
            let name = file.file_name();
            let other = b.join(entry.file_name()).join(&name);
            assert_eq!(
                fs::read(file.path()).unwrap(),
                fs::read(other).unwrap(),
                "{:?}/{:?}",
                entry.file_name(),
                name
            );
        }
    }
    assert_eq!(labels, 13);
}

#[test]
fn evaluate_gold_first_predictions() {
    let kg = common::fixture();
    let mut text = String::new();
    for q in split_queries(&kg, Split::Test) {
        let t = q.triple();
        let mut cands = vec![kg.entity(q.gold).id.clone()];
        cands.extend(
            kg.entities()
                .iter()
                .filter(|e| e.id != kg.entity(q.gold).id)
                .map(|e| e.id.clone()),
        );
        let _ = writeln!(
            text,
            "{}\t{}\t{}\t{}\t{}",
            kg.entity(t.head).id,
            kg.relation(t.relation).id,
            kg.entity(t.tail).id,
            q.direction.as_str(),
            cands.join(",")
        );
    }
    let dir = tempfile::tempdir().unwrap();
    let preds = dir.path().join("preds.tsv");
    fs::write(&preds, text).unwrap();
    let o = kgsynth(&[
        "evaluate",
        "--input",
        p(&common::fixture_dir()),
        "--predictions",
        p(&preds),
        "--filtered",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.contains("hits@10\t1\n") && s.contains("mrr\t1\n"), "{s}");
}

#[test]
fn analysis_commands_print_tables() {
    let fixture = common::fixture_dir();
    let s = stdout(&kgsynth(&["stats", "--input", p(&fixture)]));
    assert!(s.starts_with("entities\t10\n"), "{s}");
    let s = stdout(&kgsynth(&["leakage", "--input", p(&fixture)]));
    assert!(s.lines().any(|l| l.starts_with("total\t40\t15\t")), "{s}");
    let out = tempfile::tempdir().unwrap();
    let o = kgsynth(&["relation-dist", "--input", p(&fixture), "--output", p(out.path())]);
    assert!(o.status.success());
    assert!(out.path().join("relation_distribution.tsv").is_file());
    assert!(out.path().join("manifest.tsv").is_file());
}

#[test]
fn correlate_and_outliers() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.tsv");
    fs::write(&table, "a\tb\n1\t2\n2\t4\n3\t6.5\n").unwrap();
    let s = stdout(&kgsynth(&["correlate", "--input", p(&table)]));
    assert!(s.starts_with("\ta\tb\n"), "{s}");
    let values = dir.path().join("v.txt");
    fs::write(&values, "1 2 3\n4 100\n").unwrap();
    let s = stdout(&kgsynth(&["outliers", "--input", p(&values)]));
    assert!(s.contains("outlier\t100\n"), "{s}");
}

#[test]
fn train_baseline_writes_checkpoint() {
    let out = tempfile::tempdir().unwrap();
    let o = kgsynth(&[
        "--threads",
        "1",
        "train-baseline",
        "--input",
        p(&common::fixture_dir()),
        "--output",
        p(out.path()),
        "--dim",
        "8",
        "--epochs",
        "5",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "entity_embeddings.tsv",
        "relation_embeddings.tsv",
        "hyperparams.tsv",
        "training_log.tsv",
        "metrics.tsv",
        "manifest.tsv",
    ] {
        assert!(out.path().join(f).is_file(), "{f}");
    }
}

#[test]
fn exit_codes_follow_error_class() {
    // usage
    assert_eq!(kgsynth(&["transform"]).status.code(), Some(1));
    assert_eq!(kgsynth(&["no-such-command"]).status.code(), Some(1));
    let tmp = tempfile::tempdir().unwrap();
    let bad_recipe = kgsynth(&[
        "transform",
        "--input",
        p(&common::fixture_dir()),
        "--output",
        p(tmp.path()),
        "--recipe",
        "nope",
        "--targets",
        "e",
    ]);
    assert_eq!(bad_recipe.status.code(), Some(1));
    // data
    let missing = tmp.path().join("missing");
    assert_eq!(kgsynth(&["stats", "--input", p(&missing)]).status.code(), Some(2));
    // infeasible: a single relation cannot be deranged
    let kg = KnowledgeGraphBuilder::new()
        .entity("a", "alpha")
        .entity("b", "beta")
        .relation("r", "only")
        .triple(Split::Train, "a", "r", "b")
        .build()
        .unwrap();
    let one = tmp.path().join("one");
    kgsynth::write_dataset(&kg, &one).unwrap();
    let o = kgsynth(&[
        "transform",
        "--input",
        p(&one),
        "--output",
        p(&tmp.path().join("x")),
        "--recipe",
        "virtual-world",
        "--targets",
        "r",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    // help is not an error
    assert_eq!(kgsynth(&["--help"]).status.code(), Some(0));
}

#[test]
fn synthesize_writes_a_loadable_dataset() {
    let tmp = tempfile::tempdir().unwrap();
    let syn = tmp.path().join("syn");
    let o = kgsynth(&[
        "synthesize",
        "--output",
        p(&syn),
        "--entities",
        "50",
        "--relations",
        "4",
        "--triples",
        "120",
        "--seed",
        "2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let kg = kgsynth::load_dataset(&syn).unwrap();
    assert_eq!((kg.n_entities(), kg.n_relations()), (50, 4));
}
