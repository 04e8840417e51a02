//! C ABI for kgsynth.
//!
//! Graphs are opaque `KgsGraph` handles owned by the caller and released
//! with `kgs_graph_free`. Every fallible call returns a `KgsStatus` whose
//! values equal the CLI exit codes; on failure the message is available
//! from `kgs_last_error_message` on the same thread until the next failing
//! call. Strings are UTF-8 and NUL-terminated.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use kgsynth::error::{Error, ErrorClass};
use kgsynth::eval::{evaluate_predictions, metrics_from_ranks, MetricsReport, RankingMode};
use kgsynth::kg::{load_dataset, write_dataset, KnowledgeGraph, Split};
use kgsynth::transform::{
    apply_recipe, default_suite, generate_suite, write_variant, RecipeKind, Targets, TransformRecipe,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KgsStatus {
    Ok = 0,
    Usage = 1,
    Data = 2,
    Infeasible = 3,
    Internal = 4,
}

impl From<ErrorClass> for KgsStatus {
    fn from(c: ErrorClass) -> Self {
        match c {
            ErrorClass::Usage => KgsStatus::Usage,
            ErrorClass::Data => KgsStatus::Data,
            ErrorClass::Infeasible => KgsStatus::Infeasible,
            ErrorClass::Internal => KgsStatus::Internal,
        }
    }
}

/// Opaque graph handle.
pub struct KgsGraph {
    kg: KnowledgeGraph,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KgsStats {
    pub entities: u64,
    pub relations: u64,
    pub train: u64,
    pub valid: u64,
    pub test: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KgsMetrics {
    pub hits_at_1: f64,
    pub hits_at_3: f64,
    pub hits_at_10: f64,
    pub mr: f64,
    pub mrr: f64,
    pub count: u64,
}

impl From<&MetricsReport> for KgsMetrics {
    fn from(r: &MetricsReport) -> Self {
        KgsMetrics {
            hits_at_1: r.hits_at_1,
            hits_at_3: r.hits_at_3,
            hits_at_10: r.hits_at_10,
            mr: r.mr,
            mrr: r.mrr,
            count: r.count as u64,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> KgsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KgsStatus::Ok,
        Ok(Err(e)) => {
            let status = e.class().into();
            set_error(e.to_string());
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            KgsStatus::Internal
        }
    }
}

fn null_arg(name: &str) -> Error {
    Error::InvalidArgument(format!("{name} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Error> {
    if p.is_null() {
        return Err(null_arg(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Error::InvalidArgument(format!("{name} is not valid UTF-8")))
}

unsafe fn graph_arg<'a>(g: *const KgsGraph) -> Result<&'a KnowledgeGraph, Error> {
    g.as_ref().map(|g| &g.kg).ok_or_else(|| null_arg("graph"))
}

fn parse_recipe(recipe: &str, targets: &str, seed: u64) -> Result<TransformRecipe, Error> {
    let kind: RecipeKind = recipe.parse()?;
    let targets: Targets = targets.parse()?;
    TransformRecipe::new(kind, targets, seed)
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn kgs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn kgs_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains NUL"),
    };
    VERSION.as_ptr()
}

/// Loads a dataset directory into a new handle written to `*out`.
///
/// # Safety
/// `dir` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kgs_graph_load(dir: *const c_char, out: *mut *mut KgsGraph) -> KgsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_arg("out"));
        }
        *out = ptr::null_mut();
        let kg = load_dataset(PathBuf::from(str_arg(dir, "dir")?))?;
        *out = Box::into_raw(Box::new(KgsGraph { kg }));
        Ok(())
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `graph` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kgs_graph_free(graph: *mut KgsGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kgs_graph_stats(graph: *const KgsGraph, out: *mut KgsStats) -> KgsStatus {
    guard(|| {
        let kg = graph_arg(graph)?;
        let out = out.as_mut().ok_or_else(|| null_arg("out"))?;
        let s = kg.stats();
        *out = KgsStats {
            entities: s.n_entities as u64,
            relations: s.n_relations as u64,
            train: s.n_train as u64,
            valid: s.n_valid as u64,
            test: s.n_test as u64,
        };
        Ok(())
    })
}

/// Writes the graph in the dataset layout.
///
/// # Safety
/// `graph` must be a live handle and `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn kgs_graph_write(graph: *const KgsGraph, dir: *const c_char) -> KgsStatus {
    guard(|| write_dataset(graph_arg(graph)?, str_arg(dir, "dir")?))
}

/// Applies a recipe (`virtual-world`, `anonymized-entities`,
/// `inconsistent-descriptions`, `fully-anonymized`) to the targets (e.g.
/// `"entities,relations"` or `"er"`) and returns the variant as a new
/// handle.
///
/// # Safety
/// `graph` must be a live handle, the strings NUL-terminated and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kgs_transform(
    graph: *const KgsGraph,
    recipe: *const c_char,
    targets: *const c_char,
    seed: u64,
    out: *mut *mut KgsGraph,
) -> KgsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_arg("out"));
        }
        *out = ptr::null_mut();
        let kg = graph_arg(graph)?;
        let recipe = parse_recipe(str_arg(recipe, "recipe")?, str_arg(targets, "targets")?, seed)?;
        let (variant, _) = apply_recipe(kg, &recipe)?;
        *out = Box::into_raw(Box::new(KgsGraph { kg: variant }));
        Ok(())
    })
}

/// Like `kgs_transform`, but writes the variant with its mapping and
/// recipe files to `dir`.
///
/// # Safety
/// As for `kgs_transform`; `dir` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn kgs_transform_to_dir(
    graph: *const KgsGraph,
    recipe: *const c_char,
    targets: *const c_char,
    seed: u64,
    dir: *const c_char,
) -> KgsStatus {
    guard(|| {
        let kg = graph_arg(graph)?;
        let recipe = parse_recipe(str_arg(recipe, "recipe")?, str_arg(targets, "targets")?, seed)?;
        let dir = str_arg(dir, "dir")?;
        let (variant, mapping) = apply_recipe(kg, &recipe)?;
        write_variant(kg, &variant, &mapping, dir)
    })
}

/// Writes the base dataset and the 12 default variants under `dir`.
/// Fails with the first variant error, after attempting all of them.
///
/// # Safety
/// `graph` must be a live handle and `dir` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn kgs_suite_generate(graph: *const KgsGraph, seed: u64, dir: *const c_char) -> KgsStatus {
    guard(|| {
        let kg = graph_arg(graph)?;
        let dir = str_arg(dir, "dir")?;
        generate_suite(kg, seed, dir, &default_suite())
            .into_iter()
            .try_for_each(|o| o.result.map_err(|e| e.context(format!("variant {}", o.label))))
    })
}

/// Scores a ranked-candidates file (see the CLI `evaluate` command) on
/// `split` (`train`, `valid` or `test`). `filtered` != 0 selects filtered
/// ranking.
///
/// # Safety
/// `graph` must be a live handle, strings NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn kgs_evaluate_predictions(
    graph: *const KgsGraph,
    predictions: *const c_char,
    filtered: i32,
    split: *const c_char,
    out: *mut KgsMetrics,
) -> KgsStatus {
    guard(|| {
        let kg = graph_arg(graph)?;
        let out = out.as_mut().ok_or_else(|| null_arg("out"))?;
        let split: Split = str_arg(split, "split")?.parse()?;
        let mode = if filtered != 0 {
            RankingMode::Filtered
        } else {
            RankingMode::Raw
        };
        let report = evaluate_predictions(kg, str_arg(predictions, "predictions")?, mode, split)?;
        *out = (&report).into();
        Ok(())
    })
}

/// Aggregates `n` 1-based gold ranks.
///
/// # Safety
/// `ranks` must point to `n` readable values and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn kgs_compute_metrics(ranks: *const u64, n: usize, out: *mut KgsMetrics) -> KgsStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null_arg("out"))?;
        if ranks.is_null() && n > 0 {
            return Err(null_arg("ranks"));
        }
        let ranks: Vec<usize> = if n == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(ranks, n)
                .iter()
                .map(|&r| r as usize)
                .collect()
        };
        let report = metrics_from_ranks(&ranks, RankingMode::Filtered)?;
        *out = (&report).into();
        Ok(())
    })
}
