//! Link-prediction ranking and metrics.
//!
//! Each triple yields two queries, `(h, r, ?)` and `(?, r, t)`. The gold
//! entity's rank is pessimistic: every other candidate scoring at least as
//! high as the gold entity is ranked above it. In the filtered setting,
//! other entities that complete the query to a known triple (any split) are
//! dropped from the candidates first.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kg::{KnowledgeGraph, Split, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// `(?, r, t)`: predict the head.
    Head,
    /// `(h, r, ?)`: predict the tail.
    Tail,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Head => "head",
            Direction::Tail => "tail",
        }
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "head" => Ok(Direction::Head),
            "tail" => Ok(Direction::Tail),
            other => Err(Error::InvalidArgument(format!(
                "direction must be head or tail, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Query {
    /// The entity given in the query.
    pub known: u32,
    pub relation: u32,
    pub direction: Direction,
    pub gold: u32,
}

impl Query {
    pub fn from_triple(t: &Triple, direction: Direction) -> Self {
        match direction {
            Direction::Tail => Query {
                known: t.head,
                relation: t.relation,
                direction,
                gold: t.tail,
            },
            Direction::Head => Query {
                known: t.tail,
                relation: t.relation,
                direction,
                gold: t.head,
            },
        }
    }

    pub fn triple(&self) -> Triple {
        match self.direction {
            Direction::Tail => Triple::new(self.known, self.relation, self.gold),
            Direction::Head => Triple::new(self.gold, self.relation, self.known),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RankingMode {
    #[default]
    Filtered,
    Raw,
}

impl RankingMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RankingMode::Filtered => "filtered",
            RankingMode::Raw => "raw",
        }
    }
}

/// True answers of every `(known, relation, direction)` over all splits.
#[derive(Debug, Clone, Default)]
pub struct KnownAnswers {
    tails: HashMap<(u32, u32), Vec<u32>>,
    heads: HashMap<(u32, u32), Vec<u32>>,
}

impl KnownAnswers {
    pub fn from_kg(kg: &KnowledgeGraph) -> Self {
        let mut out = KnownAnswers::default();
        for t in kg.all_triples() {
            out.tails.entry((t.head, t.relation)).or_default().push(t.tail);
            out.heads.entry((t.tail, t.relation)).or_default().push(t.head);
        }
        for v in out.tails.values_mut().chain(out.heads.values_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        out
    }

    /// Sorted, deduplicated true answers for the query (gold included).
    pub fn answers(&self, q: &Query) -> &[u32] {
        let map = match q.direction {
            Direction::Tail => &self.tails,
            Direction::Head => &self.heads,
        };
        map.get(&(q.known, q.relation)).map_or(&[], Vec::as_slice)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankingRecord {
    pub query: Query,
    pub gold_rank: usize,
}

/// Ranks the gold entity given one score per entity (higher is better).
pub fn rank_gold(scores: &[f64], query: &Query, filter: Option<&KnownAnswers>) -> Result<RankingRecord> {
    let gold = query.gold as usize;
    let gold_score = *scores
        .get(gold)
        .ok_or_else(|| Error::InvalidArgument(format!("no score for gold entity index {gold}")))?;
    if gold_score.is_nan() {
        return Err(Error::InvalidArgument("gold entity score is NaN".into()));
    }
    let mut above = scores.iter().filter(|&&s| s >= gold_score).count() - 1;
    if let Some(known) = filter {
        above -= known
            .answers(query)
            .iter()
            .filter(|&&a| a as usize != gold && scores.get(a as usize).is_some_and(|&s| s >= gold_score))
            .count();
    }
    Ok(RankingRecord {
        query: *query,
        gold_rank: above + 1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub hits_at_1: f64,
    pub hits_at_3: f64,
    pub hits_at_10: f64,
    pub mr: f64,
    pub mrr: f64,
    pub count: usize,
    pub mode: RankingMode,
}

/// Tie policy stamped into every report.
pub const TIE_POLICY: &str = "pessimistic";

impl MetricsReport {
    pub fn hits(&self, k: usize) -> Option<f64> {
        match k {
            1 => Some(self.hits_at_1),
            3 => Some(self.hits_at_3),
            10 => Some(self.hits_at_10),
            _ => None,
        }
    }

    /// Flat `key<TAB>value` lines.
    pub fn to_tsv(&self) -> String {
        format!(
            "ranking\t{}\nties\t{}\nqueries\t{}\nhits@1\t{}\nhits@3\t{}\nhits@10\t{}\nmr\t{}\nmrr\t{}\n",
            self.mode.as_str(),
            TIE_POLICY,
            self.count,
            self.hits_at_1,
            self.hits_at_3,
            self.hits_at_10,
            self.mr,
            self.mrr
        )
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MRR {:.4} | MR {:.1} | H@1 {:.4} | H@3 {:.4} | H@10 {:.4} ({} queries, {})",
            self.mrr,
            self.mr,
            self.hits_at_1,
            self.hits_at_3,
            self.hits_at_10,
            self.count,
            self.mode.as_str()
        )
    }
}

pub fn metrics_from_ranks(ranks: &[usize], mode: RankingMode) -> Result<MetricsReport> {
    if ranks.is_empty() {
        return Err(Error::InvalidArgument("no rankings to aggregate".into()));
    }
    if ranks.contains(&0) {
        return Err(Error::InvalidArgument("ranks are 1-based".into()));
    }
    let n = ranks.len() as f64;
    let hits = |k: usize| ranks.iter().filter(|&&r| r <= k).count() as f64 / n;
    Ok(MetricsReport {
        hits_at_1: hits(1),
        hits_at_3: hits(3),
        hits_at_10: hits(10),
        mr: ranks.iter().map(|&r| r as f64).sum::<f64>() / n,
        mrr: ranks.iter().map(|&r| 1.0 / r as f64).sum::<f64>() / n,
        count: ranks.len(),
        mode,
    })
}

pub fn compute_metrics(records: &[RankingRecord], mode: RankingMode) -> Result<MetricsReport> {
    let ranks: Vec<usize> = records.iter().map(|r| r.gold_rank).collect();
    metrics_from_ranks(&ranks, mode)
}

/// Both queries of every triple in `split`, tail query first.
pub fn split_queries(kg: &KnowledgeGraph, split: Split) -> Vec<Query> {
    kg.split(split)
        .iter()
        .flat_map(|t| {
            [
                Query::from_triple(t, Direction::Tail),
                Query::from_triple(t, Direction::Head),
            ]
        })
        .collect()
}

/// Ranks every query of `split` with scores from `score_fn`, which fills one
/// score per entity. Queries run in parallel; records keep query order, so
/// the report is independent of thread count.
pub fn evaluate_scores<F>(kg: &KnowledgeGraph, split: Split, mode: RankingMode, score_fn: F) -> Result<MetricsReport>
where
    F: Fn(&Query, &mut [f64]) + Sync,
{
    let known = match mode {
        RankingMode::Filtered => Some(KnownAnswers::from_kg(kg)),
        RankingMode::Raw => None,
    };
    let queries = split_queries(kg, split);
    let n = kg.n_entities();
    let records: Vec<RankingRecord> = queries
        .par_iter()
        .map_init(
            || vec![0.0; n],
            |scores, q| {
                score_fn(q, scores);
                rank_gold(scores, q, known.as_ref())
            },
        )
        .collect::<Result<_>>()?;
    compute_metrics(&records, mode)
}

/// Scores an external system's ranked candidate lists.
///
/// One line per (triple, direction):
/// `head<TAB>relation<TAB>tail<TAB>head|tail<TAB>cand1,cand2,...` (best
/// first). Every triple of `split` must be covered in both directions. The
/// gold rank is its 1-based position in the list (after removing other known
/// answers in the filtered setting); a gold entity missing from the list gets
/// rank |E|.
pub fn evaluate_predictions(
    kg: &KnowledgeGraph,
    path: impl AsRef<Path>,
    mode: RankingMode,
    split: Split,
) -> Result<MetricsReport> {
    let path = path.as_ref();
    let file_label = path.display().to_string();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let in_split: std::collections::HashSet<Triple> = kg.split(split).iter().copied().collect();
    let known = match mode {
        RankingMode::Filtered => Some(KnownAnswers::from_kg(kg)),
        RankingMode::Raw => None,
    };
    let worst = kg.n_entities();
    let mut ranks: HashMap<(Triple, Direction), usize> = HashMap::new();

    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::parse(file_label.as_str(), line_no, msg);
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 5 {
            return Err(err("expected 5 tab-separated fields".into()));
        }
        let entity = |id: &str| {
            kg.entity_index(id)
                .ok_or_else(|| err(format!("unknown entity id {id:?}")))
        };
        let relation = kg
            .relation_index(f[1])
            .ok_or_else(|| err(format!("unknown relation id {:?}", f[1])))?;
        let triple = Triple::new(entity(f[0])?, relation, entity(f[2])?);
        let direction: Direction = f[3].parse().map_err(|e: Error| err(e.to_string()))?;
        if !in_split.contains(&triple) {
            return Err(err(format!("triple is not in the {split} split")));
        }
        let query = Query::from_triple(&triple, direction);
        let skip: &[u32] = known.as_ref().map_or(&[], |k| k.answers(&query));
        let mut rank = None;
        let mut position = 0;
        for cand in f[4].split(',').filter(|c| !c.is_empty()) {
            let c = entity(cand)?;
            if c == query.gold {
                rank.get_or_insert(position + 1);
            } else if skip.binary_search(&c).is_ok() {
                continue;
            }
            position += 1;
        }
        if ranks.insert((triple, direction), rank.unwrap_or(worst)).is_some() {
            return Err(err(format!("duplicate {} query", direction.as_str())));
        }
    }

    let mut missing = Vec::new();
    let mut out = Vec::with_capacity(kg.split(split).len() * 2);
    for t in kg.split(split) {
        for direction in [Direction::Tail, Direction::Head] {
            match ranks.get(&(*t, direction)) {
                Some(&r) => out.push(r),
                None => missing.push(format!(
                    "({}, {}, {}) {}",
                    kg.entity(t.head).id,
                    kg.relation(t.relation).id,
                    kg.entity(t.tail).id,
                    direction.as_str()
                )),
            }
        }
    }
    if !missing.is_empty() {
        let shown: Vec<&str> = missing.iter().take(20).map(String::as_str).collect();
        return Err(Error::Validation(format!(
            "{} queries missing from {}: {}{}",
            missing.len(),
            file_label,
            shown.join("; "),
            if missing.len() > shown.len() { "; ..." } else { "" }
        )));
    }
    metrics_from_ranks(&out, mode)
}
