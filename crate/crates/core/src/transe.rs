//! Translational embedding baseline (TransE). It trains on triple ids
//! alone, so name and description perturbations cannot change its results.
//!
//! Score: `-||h + r - t||` under L1 or L2 (higher is better). Training
//! minimizes the margin ranking loss `max(0, margin + d(pos) - d(neg))` by
//! SGD, corrupting the head or tail of each positive uniformly at random.
//! Entity vectors are renormalized to unit L2 norm after every epoch.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::eval::{evaluate_scores, Direction, MetricsReport, RankingMode};
use crate::kg::{KnowledgeGraph, Split, Triple};
use crate::rng::{derive_seed, item_seed, rng_from, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    L1,
    L2,
}

impl Norm {
    pub fn as_str(self) -> &'static str {
        match self {
            Norm::L1 => "L1",
            Norm::L2 => "L2",
        }
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L1" | "l1" | "1" => Ok(Norm::L1),
            "L2" | "l2" | "2" => Ok(Norm::L2),
            other => Err(Error::InvalidArgument(format!("unknown norm {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperparams {
    pub dim: usize,
    pub margin: f64,
    pub norm: Norm,
    pub learning_rate: f64,
    pub epochs: usize,
    pub negatives_per_positive: usize,
    pub seed: u64,
    /// 1 is deterministic. More workers update shared parameters without
    /// locks (last write wins) and are only statistically reproducible.
    pub workers: usize,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            dim: 100,
            margin: 1.0,
            norm: Norm::L1,
            learning_rate: 0.01,
            epochs: 100,
            negatives_per_positive: 1,
            seed: 0,
            workers: 1,
        }
    }
}

impl Hyperparams {
    pub fn to_manifest(&self) -> String {
        format!(
            "dim\t{}\nmargin\t{}\nnorm\t{}\nlearning_rate\t{}\nepochs\t{}\nnegatives_per_positive\t{}\nseed\t{}\nworkers\t{}\n",
            self.dim,
            self.margin,
            self.norm.as_str(),
            self.learning_rate,
            self.epochs,
            self.negatives_per_positive,
            self.seed,
            self.workers
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    pub norm: Norm,
    pub margin: f64,
    dim: usize,
    n_entities: usize,
    /// Entity block followed by relation block, row-major.
    params: Vec<f64>,
}

impl EmbeddingModel {
    /// Builds a model from explicit vectors (all of one dimension).
    pub fn from_vectors(entities: &[Vec<f64>], relations: &[Vec<f64>], norm: Norm, margin: f64) -> Result<Self> {
        let dim = entities.first().or(relations.first()).map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::InvalidArgument("embedding dimension must be at least 1".into()));
        }
        if entities.iter().chain(relations).any(|v| v.len() != dim) {
            return Err(Error::InvalidArgument("vectors differ in dimension".into()));
        }
        let params: Vec<f64> = entities.iter().chain(relations).flatten().copied().collect();
        if params.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite embedding value".into()));
        }
        Ok(EmbeddingModel {
            norm,
            margin,
            dim,
            n_entities: entities.len(),
            params,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_entities(&self) -> usize {
        self.n_entities
    }

    pub fn n_relations(&self) -> usize {
        self.params.len() / self.dim - self.n_entities
    }

    pub fn entity_vector(&self, e: u32) -> &[f64] {
        let at = e as usize * self.dim;
        &self.params[at..at + self.dim]
    }

    pub fn relation_vector(&self, r: u32) -> &[f64] {
        let at = (self.n_entities + r as usize) * self.dim;
        &self.params[at..at + self.dim]
    }

    fn relation_offset(&self) -> usize {
        self.n_entities * self.dim
    }

    /// Distance `||h + r - t||` of a triple given by indices.
    pub fn distance(&self, t: &Triple) -> f64 {
        let (h, r, tl) = (
            self.entity_vector(t.head),
            self.relation_vector(t.relation),
            self.entity_vector(t.tail),
        );
        norm_of(self.norm, (0..self.dim).map(|k| h[k] + r[k] - tl[k]))
    }

    pub fn score(&self, t: &Triple) -> f64 {
        -self.distance(t)
    }

    fn is_finite(&self) -> bool {
        self.params.iter().all(|x| x.is_finite())
    }
}

#[inline]
fn norm_of(norm: Norm, xs: impl Iterator<Item = f64>) -> f64 {
    match norm {
        Norm::L1 => xs.map(f64::abs).sum(),
        Norm::L2 => xs.map(|x| x * x).sum::<f64>().sqrt(),
    }
}

/// Uniform init in `[-6/sqrt(dim), 6/sqrt(dim)]`, then every vector is
/// scaled to unit L2 norm.
pub fn init_model(kg: &KnowledgeGraph, dim: usize, seed: u64) -> Result<EmbeddingModel> {
    if dim == 0 {
        return Err(Error::InvalidArgument("embedding dimension must be at least 1".into()));
    }
    let bound = 6.0 / (dim as f64).sqrt();
    let mut rng = rng_from(derive_seed(seed, &["transe", "init"]));
    let rows = kg.n_entities() + kg.n_relations();
    let mut params: Vec<f64> = (0..rows * dim).map(|_| rng.gen_range(-bound..=bound)).collect();
    for row in params.chunks_mut(dim) {
        unit_normalize(row);
    }
    Ok(EmbeddingModel {
        norm: Norm::L1,
        margin: 1.0,
        dim,
        n_entities: kg.n_entities(),
        params,
    })
}

fn unit_normalize(v: &mut [f64]) {
    let sq: f64 = v.iter().map(|x| x * x).sum();
    // already-unit rows are left alone so repeated passes cannot drift
    if sq > 0.0 && (sq - 1.0).abs() > 1e-12 {
        let n = sq.sqrt();
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// Scores a triple by ids.
pub fn score_triple(
    model: &EmbeddingModel,
    kg: &KnowledgeGraph,
    head: &str,
    relation: &str,
    tail: &str,
) -> Result<f64> {
    let e = |id: &str| {
        kg.entity_index(id)
            .filter(|&i| (i as usize) < model.n_entities())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown entity {id:?}")))
    };
    let r = kg
        .relation_index(relation)
        .filter(|&i| (i as usize) < model.n_relations())
        .ok_or_else(|| Error::InvalidArgument(format!("unknown relation {relation:?}")))?;
    Ok(model.score(&Triple::new(e(head)?, r, e(tail)?)))
}

/// `d ||x|| / dx` for one component (0 at the non-differentiable origin).
#[inline]
fn norm_grad(norm: Norm, x: f64, len: f64) -> f64 {
    match norm {
        Norm::L1 => {
            if x > 0.0 {
                1.0
            } else if x < 0.0 {
                -1.0
            } else {
                0.0
            }
        }
        Norm::L2 => {
            if len > 0.0 {
                x / len
            } else {
                0.0
            }
        }
    }
}

/// Margin ranking loss of one (positive, negative) pair.
pub fn margin_loss(model: &EmbeddingModel, pos: &Triple, neg: &Triple) -> f64 {
    (model.margin + model.distance(pos) - model.distance(neg)).max(0.0)
}

/// Which parameter row a gradient entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamRow {
    Entity(u32),
    Relation(u32),
}

/// Sparse gradient of the margin loss, one entry per touched row.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Gradient {
    pub rows: Vec<(ParamRow, Vec<f64>)>,
}

impl Gradient {
    fn add(&mut self, row: ParamRow, scale: f64, g: &[f64]) {
        let slot = match self.rows.iter().position(|(r, _)| *r == row) {
            Some(i) => i,
            None => {
                self.rows.push((row, vec![0.0; g.len()]));
                self.rows.len() - 1
            }
        };
        for (a, b) in self.rows[slot].1.iter_mut().zip(g) {
            *a += scale * b;
        }
    }

    pub fn row(&self, row: ParamRow) -> Option<&[f64]> {
        self.rows.iter().find(|(r, _)| *r == row).map(|(_, g)| g.as_slice())
    }
}

/// Per-component derivative of `d(triple)` w.r.t. `h + r - t`, written into
/// `out`.
fn distance_grad(norm: Norm, params: &impl ParamStore, dim: usize, rel_offset: usize, t: &Triple, out: &mut [f64]) {
    let h = t.head as usize * dim;
    let r = rel_offset + t.relation as usize * dim;
    let tl = t.tail as usize * dim;
    for (k, o) in out.iter_mut().enumerate() {
        *o = params.get(h + k) + params.get(r + k) - params.get(tl + k);
    }
    let len = match norm {
        Norm::L2 => out.iter().map(|x| x * x).sum::<f64>().sqrt(),
        Norm::L1 => 0.0,
    };
    for o in out.iter_mut() {
        *o = norm_grad(norm, *o, len);
    }
}

fn pair_distance(norm: Norm, params: &impl ParamStore, dim: usize, rel_offset: usize, t: &Triple) -> f64 {
    let h = t.head as usize * dim;
    let r = rel_offset + t.relation as usize * dim;
    let tl = t.tail as usize * dim;
    norm_of(
        norm,
        (0..dim).map(|k| params.get(h + k) + params.get(r + k) - params.get(tl + k)),
    )
}

/// Gradient of [`margin_loss`] w.r.t. every parameter row it touches.
pub fn margin_loss_gradient(model: &EmbeddingModel, pos: &Triple, neg: &Triple) -> Gradient {
    let mut grad = Gradient::default();
    if margin_loss(model, pos, neg) <= 0.0 {
        return grad;
    }
    let dim = model.dim;
    let mut gp = vec![0.0; dim];
    let mut gn = vec![0.0; dim];
    let off = model.relation_offset();
    distance_grad(model.norm, &model.params.as_slice(), dim, off, pos, &mut gp);
    distance_grad(model.norm, &model.params.as_slice(), dim, off, neg, &mut gn);
    grad.add(ParamRow::Entity(pos.head), 1.0, &gp);
    grad.add(ParamRow::Relation(pos.relation), 1.0, &gp);
    grad.add(ParamRow::Entity(pos.tail), -1.0, &gp);
    grad.add(ParamRow::Entity(neg.head), -1.0, &gn);
    grad.add(ParamRow::Relation(neg.relation), -1.0, &gn);
    grad.add(ParamRow::Entity(neg.tail), 1.0, &gn);
    grad
}

/// Flat parameter storage shared by the serial and lock-free trainers.
trait ParamStore {
    fn get(&self, i: usize) -> f64;
    fn add(&mut self, i: usize, delta: f64);
}

impl ParamStore for &mut [f64] {
    #[inline]
    fn get(&self, i: usize) -> f64 {
        self[i]
    }
    #[inline]
    fn add(&mut self, i: usize, delta: f64) {
        self[i] += delta;
    }
}

impl ParamStore for &[f64] {
    #[inline]
    fn get(&self, i: usize) -> f64 {
        self[i]
    }
    fn add(&mut self, _: usize, _: f64) {
        unreachable!("read-only parameters")
    }
}

struct SharedParams<'a>(&'a [AtomicU64]);

impl ParamStore for SharedParams<'_> {
    #[inline]
    fn get(&self, i: usize) -> f64 {
        f64::from_bits(self.0[i].load(Ordering::Relaxed))
    }
    #[inline]
    fn add(&mut self, i: usize, delta: f64) {
        // racy read-modify-write: concurrent updates may be lost
        let v = self.get(i) + delta;
        self.0[i].store(v.to_bits(), Ordering::Relaxed);
    }
}

struct StepScratch {
    gp: Vec<f64>,
    gn: Vec<f64>,
}

/// One SGD step on a (positive, negative) pair. Returns the pair's loss.
fn sgd_step(
    hp: &Hyperparams,
    params: &mut impl ParamStore,
    rel_offset: usize,
    pos: &Triple,
    neg: &Triple,
    scratch: &mut StepScratch,
) -> f64 {
    let dim = hp.dim;
    let loss = hp.margin + pair_distance(hp.norm, params, dim, rel_offset, pos)
        - pair_distance(hp.norm, params, dim, rel_offset, neg);
    if loss <= 0.0 {
        return 0.0;
    }
    distance_grad(hp.norm, params, dim, rel_offset, pos, &mut scratch.gp);
    distance_grad(hp.norm, params, dim, rel_offset, neg, &mut scratch.gn);
    let lr = hp.learning_rate;
    let (ph, pr, pt) = (
        pos.head as usize * dim,
        rel_offset + pos.relation as usize * dim,
        pos.tail as usize * dim,
    );
    let (nh, nr, nt) = (
        neg.head as usize * dim,
        rel_offset + neg.relation as usize * dim,
        neg.tail as usize * dim,
    );
    for k in 0..dim {
        let (gp, gn) = (scratch.gp[k], scratch.gn[k]);
        params.add(ph + k, -lr * gp);
        params.add(pr + k, -lr * gp);
        params.add(pt + k, lr * gp);
        params.add(nh + k, lr * gn);
        params.add(nr + k, lr * gn);
        params.add(nt + k, -lr * gn);
    }
    loss
}

/// Replaces the head or the tail (fair coin) by a different uniform entity.
fn corrupt(pos: &Triple, n_entities: u32, rng: &mut Rng) -> Triple {
    let mut neg = *pos;
    let slot = if rng.gen_bool(0.5) {
        &mut neg.head
    } else {
        &mut neg.tail
    };
    let original = *slot;
    loop {
        let e = rng.gen_range(0..n_entities);
        if e != original {
            *slot = e;
            return neg;
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainingLog {
    /// Mean margin loss over the fixed probe pairs: before training, then
    /// after each epoch.
    pub probe_loss: Vec<f64>,
    /// Mean loss of the SGD steps taken in each epoch.
    pub epoch_loss: Vec<f64>,
}

const PROBE_PAIRS: usize = 256;

fn probe_pairs(kg: &KnowledgeGraph, seed: u64) -> Vec<(Triple, Triple)> {
    let train = kg.split(Split::Train);
    let mut rng = rng_from(derive_seed(seed, &["transe", "probe"]));
    (0..PROBE_PAIRS.min(train.len()))
        .map(|_| {
            let pos = train[rng.gen_range(0..train.len())];
            let neg = corrupt(&pos, kg.n_entities() as u32, &mut rng);
            (pos, neg)
        })
        .collect()
}

pub fn mean_margin_loss(model: &EmbeddingModel, pairs: &[(Triple, Triple)]) -> f64 {
    if pairs.is_empty() {
        return 0.0;
    }
    pairs.iter().map(|(p, n)| margin_loss(model, p, n)).sum::<f64>() / pairs.len() as f64
}

pub fn train(kg: &KnowledgeGraph, hp: &Hyperparams) -> Result<EmbeddingModel> {
    train_with_log(kg, hp).map(|(m, _)| m)
}

pub fn train_with_log(kg: &KnowledgeGraph, hp: &Hyperparams) -> Result<(EmbeddingModel, TrainingLog)> {
    let train = kg.split(Split::Train);
    if train.is_empty() {
        return Err(Error::InvalidArgument("the train split is empty".into()));
    }
    if kg.n_entities() < 2 {
        return Err(Error::InvalidArgument(
            "negative sampling needs at least 2 entities".into(),
        ));
    }
    if hp.margin.is_nan() || hp.margin <= 0.0 || !hp.learning_rate.is_finite() || hp.learning_rate < 0.0 {
        return Err(Error::InvalidArgument(
            "margin must be > 0 and learning rate finite and >= 0".into(),
        ));
    }
    if hp.negatives_per_positive == 0 || hp.workers == 0 {
        return Err(Error::InvalidArgument(
            "negatives_per_positive and workers must be >= 1".into(),
        ));
    }
    let mut model = init_model(kg, hp.dim, hp.seed)?;
    model.norm = hp.norm;
    model.margin = hp.margin;

    let probes = probe_pairs(kg, hp.seed);
    let mut log = TrainingLog {
        probe_loss: vec![mean_margin_loss(&model, &probes)],
        epoch_loss: Vec::with_capacity(hp.epochs),
    };
    let n_e = kg.n_entities() as u32;
    let rel_offset = model.relation_offset();
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut shuffle_rng = rng_from(derive_seed(hp.seed, &["transe", "order"]));

    for epoch in 1..=hp.epochs {
        order.shuffle(&mut shuffle_rng);
        let epoch_seed = item_seed(derive_seed(hp.seed, &["transe", "negatives"]), epoch as u64);
        let (loss_sum, steps) = if hp.workers == 1 {
            let mut rng = rng_from(epoch_seed);
            let mut scratch = StepScratch {
                gp: vec![0.0; hp.dim],
                gn: vec![0.0; hp.dim],
            };
            let mut store = model.params.as_mut_slice();
            let mut sum = 0.0;
            for &i in &order {
                let pos = train[i];
                for _ in 0..hp.negatives_per_positive {
                    let neg = corrupt(&pos, n_e, &mut rng);
                    sum += sgd_step(hp, &mut store, rel_offset, &pos, &neg, &mut scratch);
                }
            }
            (sum, order.len() * hp.negatives_per_positive)
        } else {
            parallel_epoch(hp, &mut model.params, rel_offset, train, &order, n_e, epoch_seed)
        };
        for row in model.params[..rel_offset].chunks_mut(hp.dim) {
            unit_normalize(row);
        }
        if !model.is_finite() {
            return Err(Error::Divergence { epoch });
        }
        log.epoch_loss.push(loss_sum / steps as f64);
        log.probe_loss.push(mean_margin_loss(&model, &probes));
    }
    Ok((model, log))
}

fn parallel_epoch(
    hp: &Hyperparams,
    params: &mut [f64],
    rel_offset: usize,
    train: &[Triple],
    order: &[usize],
    n_e: u32,
    epoch_seed: u64,
) -> (f64, usize) {
    let shared: Vec<AtomicU64> = params.iter().map(|x| AtomicU64::new(x.to_bits())).collect();
    let chunk = order.len().div_ceil(hp.workers);
    let sums: Vec<f64> = std::thread::scope(|s| {
        let handles: Vec<_> = order
            .chunks(chunk.max(1))
            .enumerate()
            .map(|(w, part)| {
                let shared = &shared;
                s.spawn(move || {
                    let mut rng = rng_from(item_seed(epoch_seed, w as u64));
                    let mut scratch = StepScratch {
                        gp: vec![0.0; hp.dim],
                        gn: vec![0.0; hp.dim],
                    };
                    let mut store = SharedParams(shared);
                    let mut sum = 0.0;
                    for &i in part {
                        let pos = train[i];
                        for _ in 0..hp.negatives_per_positive {
                            let neg = corrupt(&pos, n_e, &mut rng);
                            sum += sgd_step(hp, &mut store, rel_offset, &pos, &neg, &mut scratch);
                        }
                    }
                    sum
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    for (p, a) in params.iter_mut().zip(&shared) {
        *p = f64::from_bits(a.load(Ordering::Relaxed));
    }
    (sums.iter().sum(), order.len() * hp.negatives_per_positive)
}

/// Filtered link-prediction metrics of `model` on `split`.
pub fn evaluate_model(model: &EmbeddingModel, kg: &KnowledgeGraph, split: Split) -> Result<MetricsReport> {
    evaluate_model_with(model, kg, split, RankingMode::Filtered)
}

pub fn evaluate_model_with(
    model: &EmbeddingModel,
    kg: &KnowledgeGraph,
    split: Split,
    mode: RankingMode,
) -> Result<MetricsReport> {
    if model.n_entities() != kg.n_entities() || model.n_relations() != kg.n_relations() {
        return Err(Error::InvalidArgument(format!(
            "model covers {} entities / {} relations, graph has {} / {}",
            model.n_entities(),
            model.n_relations(),
            kg.n_entities(),
            kg.n_relations()
        )));
    }
    let dim = model.dim;
    evaluate_scores(kg, split, mode, |q, scores| {
        let known = model.entity_vector(q.known);
        let r = model.relation_vector(q.relation);
        // tail query: target = h + r, candidate distance ||target - e||;
        // head query: target = t - r, candidate distance ||e - target||
        let target: Vec<f64> = match q.direction {
            Direction::Tail => (0..dim).map(|k| known[k] + r[k]).collect(),
            Direction::Head => (0..dim).map(|k| known[k] - r[k]).collect(),
        };
        for (e, s) in scores.iter_mut().enumerate() {
            let v = model.entity_vector(e as u32);
            *s = -norm_of(model.norm, (0..dim).map(|k| target[k] - v[k]));
        }
    })
}

pub const ENTITY_EMBEDDINGS_FILE: &str = "entity_embeddings.tsv";
pub const RELATION_EMBEDDINGS_FILE: &str = "relation_embeddings.tsv";
pub const HYPERPARAMS_FILE: &str = "hyperparams.tsv";

fn vector_rows(ids: impl Iterator<Item = String>, rows: std::slice::Chunks<'_, f64>) -> String {
    let mut out = String::new();
    for (id, row) in ids.zip(rows) {
        out.push_str(&id);
        out.push('\t');
        for (k, x) in row.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            let _ = write!(out, "{x}");
        }
        out.push('\n');
    }
    out
}

/// Writes `id<TAB>v1,v2,...` rows for entities and relations, plus the
/// hyperparameters. Values round-trip exactly.
pub fn write_checkpoint(
    model: &EmbeddingModel,
    kg: &KnowledgeGraph,
    hp: &Hyperparams,
    dir: impl AsRef<Path>,
) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let off = model.relation_offset();
    let write = |name: &str, body: String| {
        let p = dir.join(name);
        std::fs::write(&p, body).map_err(|e| Error::io(&p, e))
    };
    write(
        ENTITY_EMBEDDINGS_FILE,
        vector_rows(
            kg.entities().iter().map(|e| e.id.clone()),
            model.params[..off].chunks(model.dim),
        ),
    )?;
    write(
        RELATION_EMBEDDINGS_FILE,
        vector_rows(
            kg.relations().iter().map(|r| r.id.clone()),
            model.params[off..].chunks(model.dim),
        ),
    )?;
    write(HYPERPARAMS_FILE, hp.to_manifest())
}

pub fn read_checkpoint(kg: &KnowledgeGraph, dir: impl AsRef<Path>) -> Result<EmbeddingModel> {
    let dir = dir.as_ref();
    let read = |name: &str| {
        let p = dir.join(name);
        std::fs::read_to_string(&p).map_err(|e| Error::io(&p, e))
    };
    let hp_text = read(HYPERPARAMS_FILE)?;
    let mut norm = Norm::L1;
    let mut margin = 1.0;
    for line in hp_text.lines() {
        match line.split_once('\t') {
            Some(("norm", v)) => norm = v.parse()?,
            Some(("margin", v)) => {
                margin = v
                    .parse()
                    .map_err(|_| Error::parse(HYPERPARAMS_FILE, 0, format!("bad margin {v:?}")))?
            }
            _ => {}
        }
    }
    let parse_rows = |name: &str, n: usize, index: &dyn Fn(&str) -> Option<u32>| -> Result<Vec<Vec<f64>>> {
        let text = read(name)?;
        let mut rows = vec![Vec::new(); n];
        for (i, line) in text.lines().enumerate() {
            let (id, values) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(name, i + 1, "expected id<TAB>values"))?;
            let idx = index(id).ok_or_else(|| Error::parse(name, i + 1, format!("unknown id {id:?}")))?;
            rows[idx as usize] = values
                .split(',')
                .map(|v| {
                    v.parse::<f64>()
                        .map_err(|_| Error::parse(name, i + 1, format!("bad value {v:?}")))
                })
                .collect::<Result<_>>()?;
        }
        if rows.iter().any(Vec::is_empty) {
            return Err(Error::Validation(format!("{name} does not cover every id")));
        }
        Ok(rows)
    };
    let entities = parse_rows(ENTITY_EMBEDDINGS_FILE, kg.n_entities(), &|id| kg.entity_index(id))?;
    let relations = parse_rows(RELATION_EMBEDDINGS_FILE, kg.n_relations(), &|id| kg.relation_index(id))?;
    EmbeddingModel::from_vectors(&entities, &relations, norm, margin)
}
