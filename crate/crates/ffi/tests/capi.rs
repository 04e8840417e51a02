use std::ffi::{CStr, CString};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::ptr;

use kgsynth::eval::split_queries;
use kgsynth::Split;
use kgsynth_ffi::*;

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/bernoulli")
}

fn c(s: impl AsRef<str>) -> CString {
    CString::new(s.as_ref()).unwrap()
}

fn cpath(p: &Path) -> CString {
    c(p.to_str().unwrap())
}

fn last_error() -> String {
    let p = kgs_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn load() -> *mut KgsGraph {
    let mut g = ptr::null_mut();
    let dir = cpath(&fixture_dir());
    assert_eq!(unsafe { kgs_graph_load(dir.as_ptr(), &mut g) }, KgsStatus::Ok);
    assert!(!g.is_null());
    g
}

fn stats(g: *const KgsGraph) -> KgsStats {
    let mut s = KgsStats::default();
    assert_eq!(unsafe { kgs_graph_stats(g, &mut s) }, KgsStatus::Ok);
    s
}

#[test]
fn load_and_stats() {
    let g = load();
    let s = stats(g);
    assert_eq!((s.entities, s.relations, s.train, s.valid, s.test), (10, 6, 14, 3, 3));
    unsafe { kgs_graph_free(g) };
    unsafe { kgs_graph_free(ptr::null_mut()) };
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(kgs_version()) }.to_str().unwrap();
    assert_eq!(v, kgsynth::VERSION);
}

#[test]
fn transform_returns_a_new_handle() {
    let g = load();
    let mut v = ptr::null_mut();
    let (recipe, targets) = (c("virtual-world"), c("entities,relations"));
    assert_eq!(
        unsafe { kgs_transform(g, recipe.as_ptr(), targets.as_ptr(), 42, &mut v) },
        KgsStatus::Ok
    );
    assert_eq!(stats(v), stats(g));
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(unsafe { kgs_graph_write(v, cpath(&a).as_ptr()) }, KgsStatus::Ok);
    assert_eq!(
        unsafe { kgs_transform_to_dir(g, recipe.as_ptr(), targets.as_ptr(), 42, cpath(&b).as_ptr()) },
        KgsStatus::Ok
    );
    for f in ["entities.tsv", "relations.tsv", "descriptions.tsv", "train.tsv"] {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
    assert!(b.join("mapping.tsv").is_file());
    unsafe {
        kgs_graph_free(v);
        kgs_graph_free(g);
    }
}

#[test]
fn suite_writes_thirteen_variants() {
    let g = load();
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(
        unsafe { kgs_suite_generate(g, 1, cpath(tmp.path()).as_ptr()) },
        KgsStatus::Ok
    );
    assert_eq!(std::fs::read_dir(tmp.path()).unwrap().count(), 13);
    unsafe { kgs_graph_free(g) };
}

#[test]
fn evaluate_gold_first_file() {
    let kg = kgsynth::load_dataset(fixture_dir()).unwrap();
    let mut text = String::new();
    for q in split_queries(&kg, Split::Test) {
        let t = q.triple();
        let mut cands = vec![q.gold];
        cands.extend((0..kg.n_entities() as u32).filter(|&e| e != q.gold));
        let ids: Vec<&str> = cands.iter().map(|&e| kg.entity(e).id.as_str()).collect();
        let _ = writeln!(
            text,
            "{}\t{}\t{}\t{}\t{}",
            kg.entity(t.head).id,
            kg.relation(t.relation).id,
            kg.entity(t.tail).id,
            q.direction.as_str(),
            ids.join(",")
        );
    }
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("p.tsv");
    std::fs::write(&path, text).unwrap();
    let g = load();
    let mut m = KgsMetrics::default();
    let split = c("test");
    assert_eq!(
        unsafe { kgs_evaluate_predictions(g, cpath(&path).as_ptr(), 1, split.as_ptr(), &mut m) },
        KgsStatus::Ok
    );
    assert_eq!((m.hits_at_1, m.mrr, m.count), (1.0, 1.0, 6));
    unsafe { kgs_graph_free(g) };
}

#[test]
fn compute_metrics_from_ranks() {
    let ranks = [1u64, 2, 10];
    let mut m = KgsMetrics::default();
    assert_eq!(unsafe { kgs_compute_metrics(ranks.as_ptr(), 3, &mut m) }, KgsStatus::Ok);
    assert!((m.mrr - 1.6 / 3.0).abs() < 1e-12);
    assert_eq!(m.hits_at_10, 1.0);
    assert_eq!(unsafe { kgs_compute_metrics(ptr::null(), 0, &mut m) }, KgsStatus::Usage);
}

#[test]
fn errors_map_to_status_codes() {
    let mut g = ptr::null_mut();
    let missing = c("/nonexistent/kgsynth");
    assert_eq!(unsafe { kgs_graph_load(missing.as_ptr(), &mut g) }, KgsStatus::Data);
    assert!(g.is_null());
    assert!(last_error().contains("missing"));

    assert_eq!(unsafe { kgs_graph_load(ptr::null(), &mut g) }, KgsStatus::Usage);
    assert!(last_error().contains("dir is null"));
    assert_eq!(
        unsafe { kgs_graph_stats(ptr::null(), &mut KgsStats::default()) },
        KgsStatus::Usage
    );

    let g = load();
    let mut v = ptr::null_mut();
    let bad = c("nonsense");
    let targets = c("e");
    assert_eq!(
        unsafe { kgs_transform(g, bad.as_ptr(), targets.as_ptr(), 0, &mut v) },
        KgsStatus::Usage
    );
    assert!(v.is_null());
    unsafe { kgs_graph_free(g) };
}

#[test]
fn infeasible_status() {
    let kg = kgsynth::kg::KnowledgeGraphBuilder::new()
        .entity("a", "alpha")
        .entity("b", "beta")
        .relation("r", "only")
        .triple(Split::Train, "a", "r", "b")
        .build()
        .unwrap();
    let tmp = tempfile::tempdir().unwrap();
    kgsynth::write_dataset(&kg, tmp.path()).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { kgs_graph_load(cpath(tmp.path()).as_ptr(), &mut g) },
        KgsStatus::Ok
    );
    let mut v = ptr::null_mut();
    let (recipe, targets) = (c("virtual-world"), c("r"));
    assert_eq!(
        unsafe { kgs_transform(g, recipe.as_ptr(), targets.as_ptr(), 0, &mut v) },
        KgsStatus::Infeasible
    );
    unsafe { kgs_graph_free(g) };
}

/// Compiles the C smoke program against the generated header and the
/// static library when a C compiler is around.
#[test]
fn c_smoke_program() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    // the copy next to the test binary is the one rebuilt for this run
    let lib = exe.parent().unwrap().join("libkgsynth_ffi.a");
    if !lib.is_file() || std::process::Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let bin = tmp.path().join("smoke");
    let status = std::process::Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = std::process::Command::new(&bin).arg(fixture_dir()).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "10 6 14 3 3\n");
}
