//! Seeded synthetic knowledge graphs with pronounceable names and
//! descriptions that mention neighbouring entities. Used for fixtures,
//! scale checks and benchmarks when the public datasets are not at hand.

use std::collections::HashSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng as _;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kg::{KnowledgeGraph, Named, Triple};
use crate::rng::{derive_seed, item_seed, rng_from, Rng};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub entities: usize,
    pub relations: usize,
    pub train: usize,
    pub valid: usize,
    pub test: usize,
    /// Chance that an entity's description names one of its neighbours.
    pub mention_probability: f64,
    pub seed: u64,
}

impl SyntheticConfig {
    /// Same counts as WN18RR.
    pub fn wn18rr_like(seed: u64) -> Self {
        SyntheticConfig {
            entities: 40_943,
            relations: 11,
            train: 86_835,
            valid: 3_034,
            test: 3_134,
            mention_probability: 0.3,
            seed,
        }
    }

    pub fn small(entities: usize, relations: usize, triples: usize, seed: u64) -> Self {
        let held_out = triples / 10;
        SyntheticConfig {
            entities,
            relations,
            train: triples - 2 * held_out,
            valid: held_out,
            test: held_out,
            mention_probability: 0.5,
            seed,
        }
    }
}

const CONSONANTS: &[&str] = &[
    "b", "c", "d", "f", "g", "h", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "st",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u", "ai", "ou"];
const FILLER: &[&str] = &[
    "a",
    "an",
    "the",
    "of",
    "and",
    "or",
    "in",
    "on",
    "that",
    "is",
    "with",
    "for",
    "used",
    "as",
    "any",
    "kind",
    "small",
    "large",
    "part",
    "form",
    "by",
    "from",
    "having",
    "being",
    "made",
    "often",
    "especially",
    "native",
    "common",
    "genus",
    "family",
    "member",
    "type",
    "act",
    "process",
    "state",
    "quality",
    "person",
    "who",
    "which",
    "place",
    "where",
    "to",
    "its",
];

fn word(rng: &mut Rng) -> String {
    let syllables = rng.gen_range(2..=3);
    let mut w = String::new();
    for _ in 0..syllables {
        w.push_str(CONSONANTS[rng.gen_range(0..CONSONANTS.len())]);
        w.push_str(VOWELS[rng.gen_range(0..VOWELS.len())]);
    }
    if rng.gen_bool(0.3) {
        w.push_str(CONSONANTS[rng.gen_range(0..CONSONANTS.len())]);
    }
    w
}

/// One to three words; about a third of the names are multi-word.
fn entity_name(rng: &mut Rng) -> String {
    let words = match rng.gen_range(0..10) {
        0..=6 => 1,
        7..=8 => 2,
        _ => 3,
    };
    (0..words).map(|_| word(rng)).collect::<Vec<_>>().join(" ")
}

fn description(rng: &mut Rng, mention: Option<&str>) -> String {
    let len = rng.gen_range(6..=14);
    let at = rng.gen_range(0..=len);
    let mut parts: Vec<&str> = Vec::with_capacity(len + 1);
    for i in 0..=len {
        if i == at {
            if let Some(m) = mention {
                parts.push(m);
            }
        }
        if i < len {
            parts.push(FILLER[rng.gen_range(0..FILLER.len())]);
        }
    }
    parts.join(" ")
}

pub fn synthetic_kg(cfg: &SyntheticConfig) -> Result<KnowledgeGraph> {
    if cfg.entities < 2 || cfg.relations < 2 {
        return Err(Error::InvalidArgument(
            "need at least 2 entities and 2 relations".into(),
        ));
    }
    if !(0.0..=1.0).contains(&cfg.mention_probability) {
        return Err(Error::InvalidArgument("mention_probability must lie in [0, 1]".into()));
    }
    let total = cfg.train + cfg.valid + cfg.test;
    let capacity = (cfg.entities as u128) * (cfg.entities as u128 - 1) * cfg.relations as u128;
    if total as u128 > capacity / 2 {
        return Err(Error::InvalidArgument(
            "too many triples for the entity and relation counts".into(),
        ));
    }

    let name_seed = derive_seed(cfg.seed, &["synthetic", "names"]);
    let names: Vec<String> = (0..cfg.entities)
        .into_par_iter()
        .map(|i| entity_name(&mut rng_from(item_seed(name_seed, i as u64))))
        .collect();
    let width = (cfg.entities - 1).to_string().len();
    let entities: Vec<Named> = names
        .into_iter()
        .enumerate()
        .map(|(i, n)| Named::new(format!("e{i:0width$}"), n))
        .collect();

    let mut rng = rng_from(derive_seed(cfg.seed, &["synthetic", "relations"]));
    let mut relation_names = HashSet::new();
    let relations: Vec<Named> = (0..cfg.relations)
        .map(|i| loop {
            let name = format!("_{}", word(&mut rng));
            if relation_names.insert(name.clone()) {
                break Named::new(format!("r{i}"), name);
            }
        })
        .collect();

    // relation frequencies fall off roughly like 1/rank
    let weights: Vec<f64> = (1..=cfg.relations).map(|k| 1.0 / k as f64).collect();
    let pick_relation = WeightedIndex::new(&weights).expect("positive weights");
    let mut rng = rng_from(derive_seed(cfg.seed, &["synthetic", "triples"]));
    let mut seen: HashSet<Triple> = HashSet::with_capacity(total);
    let mut draw = |n: usize, rng: &mut Rng| -> Vec<Triple> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let head = rng.gen_range(0..cfg.entities as u32);
            let tail = rng.gen_range(0..cfg.entities as u32);
            let t = Triple::new(head, pick_relation.sample(rng) as u32, tail);
            if head != tail && seen.insert(t) {
                out.push(t);
            }
        }
        out
    };
    let train = draw(cfg.train, &mut rng);
    let valid = draw(cfg.valid, &mut rng);
    let test = draw(cfg.test, &mut rng);
    drop(seen);

    // neighbours in CSR form, over every split
    let mut degree = vec![0u32; cfg.entities + 1];
    for t in train.iter().chain(&valid).chain(&test) {
        degree[t.head as usize + 1] += 1;
        degree[t.tail as usize + 1] += 1;
    }
    for i in 1..degree.len() {
        degree[i] += degree[i - 1];
    }
    let mut fill = degree.clone();
    let mut neighbours = vec![0u32; 2 * total];
    for t in train.iter().chain(&valid).chain(&test) {
        for (a, b) in [(t.head, t.tail), (t.tail, t.head)] {
            neighbours[fill[a as usize] as usize] = b;
            fill[a as usize] += 1;
        }
    }

    let text_seed = derive_seed(cfg.seed, &["synthetic", "descriptions"]);
    let descriptions: Vec<String> = (0..cfg.entities)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from(item_seed(text_seed, i as u64));
            let adj = &neighbours[degree[i] as usize..degree[i + 1] as usize];
            let mention = if !adj.is_empty() && rng.gen_bool(cfg.mention_probability) {
                Some(entities[adj[rng.gen_range(0..adj.len())] as usize].name.as_str())
            } else {
                None
            };
            description(&mut rng, mention)
        })
        .collect();

    KnowledgeGraph::from_parts(entities, relations, descriptions, train, valid, test)
}
