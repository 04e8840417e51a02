//! Slow, obviously-correct reference implementations shared by the oracle
//! tests and the acceptance run.

use std::collections::HashSet;

use kgsynth::derangement::RemovedEdges;
use kgsynth::eval::{Direction, Query};
use kgsynth::kg::{KnowledgeGraph, KnowledgeGraphBuilder, Split, Triple};
use kgsynth::rng::rng_from;
use kgsynth::transe::{margin_loss, margin_loss_gradient, EmbeddingModel, Norm, ParamRow};
use rand::seq::SliceRandom;
use rand::Rng;

/// Six entities; r0 has several true tails per head so filtering matters.
pub fn six_entity_kg() -> KnowledgeGraph {
    let mut b = KnowledgeGraphBuilder::new();
    for i in 0..6 {
        b = b.entity(&format!("e{i}"), &format!("entity {i}"));
    }
    b.relation("r0", "likes")
        .relation("r1", "knows")
        .triple(Split::Train, "e0", "r0", "e1")
        .triple(Split::Train, "e0", "r0", "e2")
        .triple(Split::Train, "e3", "r1", "e4")
        .triple(Split::Train, "e5", "r0", "e2")
        .triple(Split::Valid, "e0", "r0", "e3")
        .triple(Split::Test, "e0", "r0", "e4")
        .triple(Split::Test, "e1", "r1", "e4")
        .triple(Split::Test, "e5", "r0", "e1")
        .build()
        .unwrap()
}

/// Sort-based rank: order candidates by descending score, put the gold
/// entity after every candidate with an equal score, drop other true
/// answers when filtering, and read off the gold position.
pub fn brute_rank(kg: &KnowledgeGraph, scores: &[f64], q: &Query, filtered: bool) -> usize {
    let truth: HashSet<u32> = kg
        .all_triples()
        .filter(|t| match q.direction {
            Direction::Tail => t.head == q.known && t.relation == q.relation,
            Direction::Head => t.tail == q.known && t.relation == q.relation,
        })
        .map(|t| if q.direction == Direction::Tail { t.tail } else { t.head })
        .collect();
    let mut order: Vec<u32> = (0..scores.len() as u32)
        .filter(|&e| !filtered || e == q.gold || !truth.contains(&e))
        .collect();
    order.sort_by(|&a, &b| {
        scores[b as usize]
            .partial_cmp(&scores[a as usize])
            .unwrap()
            .then((a == q.gold).cmp(&(b == q.gold)))
    });
    order.iter().position(|&e| e == q.gold).unwrap() + 1
}

/// [hits@1, hits@3, hits@10, MR, MRR] by direct summation.
pub fn naive_metrics(ranks: &[usize]) -> [f64; 5] {
    let n = ranks.len() as f64;
    let mut out = [0.0; 5];
    let mut mr = 0.0;
    let mut mrr = 0.0;
    for &r in ranks {
        for (slot, k) in [(0, 1), (1, 3), (2, 10)] {
            if r <= k {
                out[slot] += 1.0;
            }
        }
        mr += r as f64;
        mrr += 1.0 / r as f64;
    }
    for h in &mut out[..3] {
        *h /= n;
    }
    out[3] = mr / n;
    out[4] = mrr / n;
    out
}

/// Calls `f` with every permutation of `0..n` (Heap's algorithm) until it
/// returns true.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    if f(&p) {
        return;
    }
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            if f(&p) {
                return;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

pub fn brute_force_feasible(items: &[u8], removed: &RemovedEdges<u8>) -> bool {
    let mut found = false;
    for_each_permutation(items.len(), |p| {
        found = p
            .iter()
            .enumerate()
            .all(|(i, &j)| items[j] != items[i] && !removed.contains(&items[i], &items[j]));
        found
    });
    found
}

/// Whether positions `0..n` can all be matched to distinct sources under
/// `allowed(position, source)`, by simple augmenting paths.
pub fn perfect_matching_exists(n: usize, allowed: impl Fn(usize, usize) -> bool) -> bool {
    fn augment(
        u: usize,
        n: usize,
        allowed: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for v in 0..n {
            if allowed(u, v) && !seen[v] {
                seen[v] = true;
                if owner[v].is_none_or(|w| augment(w, n, allowed, seen, owner)) {
                    owner[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; n];
    (0..n).all(|u| augment(u, n, &allowed, &mut vec![false; n], &mut owner))
}

fn word_char_before(text: &str, i: usize) -> bool {
    text[..i].chars().next_back().is_some_and(char::is_alphanumeric)
}

fn word_char_after(text: &str, i: usize) -> bool {
    text[i..].chars().next().is_some_and(char::is_alphanumeric)
}

/// Straightforward rewrite: at each character position that follows a
/// non-word character, try every key and take the longest that ends at a
/// boundary.
pub fn reference_rewrite(map: &[(String, String)], text: &str) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < text.len() {
        if !word_char_before(text, i) {
            let best = map
                .iter()
                .filter(|(k, _)| text[i..].starts_with(k.as_str()) && !word_char_after(text, i + k.len()))
                .max_by_key(|(k, _)| k.len());
            if let Some((k, v)) = best {
                out.push_str(v);
                i += k.len();
                continue;
            }
        }
        let c = text[i..].chars().next().unwrap();
        out.push(c);
        i += c.len_utf8();
    }
    out
}

pub fn reference_contains(text: &str, pattern: &str) -> bool {
    !pattern.is_empty()
        && text.char_indices().any(|(i, _)| {
            text[i..].starts_with(pattern) && !word_char_before(text, i) && !word_char_after(text, i + pattern.len())
        })
}

const ATOMS: &[&str] = &[
    "a", "ab", "b", "York", "New", "New York", "art", "art deco", "é", "日本", "x-ray", " ", " ", ",", ".", "-", "(",
    "1", "Ab",
];

pub fn random_text(rng: &mut impl Rng, max_atoms: usize) -> String {
    let n = rng.gen_range(0..=max_atoms);
    (0..n).map(|_| *ATOMS.choose(rng).unwrap()).collect::<Vec<_>>().concat()
}

/// Up to seven distinct non-empty keys with tagged values.
pub fn random_map(rng: &mut impl Rng) -> Vec<(String, String)> {
    let mut map: Vec<(String, String)> = Vec::new();
    for _ in 0..rng.gen_range(1..8) {
        let key = random_text(rng, 3);
        if key.is_empty() || map.iter().any(|(k, _)| *k == key) {
            continue;
        }
        let value = format!("<{}>", rng.gen_range(0..100));
        map.push((key, value));
    }
    map
}

fn random_vectors(rng: &mut impl Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn loss_with(
    e: &[Vec<f64>],
    r: &[Vec<f64>],
    row: ParamRow,
    k: usize,
    delta: f64,
    norm: Norm,
    pos: &Triple,
    neg: &Triple,
) -> f64 {
    let (mut e, mut r) = (e.to_vec(), r.to_vec());
    match row {
        ParamRow::Entity(i) => e[i as usize][k] += delta,
        ParamRow::Relation(i) => r[i as usize][k] += delta,
    }
    margin_loss(&EmbeddingModel::from_vectors(&e, &r, norm, 2.0).unwrap(), pos, neg)
}

/// Relative error, ‖analytic − numeric‖ / max(‖analytic‖, ‖numeric‖) over
/// every parameter, of the margin-loss gradient against central
/// differences on `probes` random models, alternating L1 and L2. Probes
/// near the hinge or an L1 kink are redrawn.
pub fn gradient_probe_errors(probes: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_from(seed);
    let (n_e, n_r, dim) = (5, 3, 6);
    let h = 1e-6;
    let mut out = Vec::with_capacity(probes);
    while out.len() < probes {
        let norm = if out.len() % 2 == 0 { Norm::L1 } else { Norm::L2 };
        let e = random_vectors(&mut rng, n_e, dim);
        let r = random_vectors(&mut rng, n_r, dim);
        let pos = Triple::new(
            rng.gen_range(0..n_e as u32),
            rng.gen_range(0..n_r as u32),
            rng.gen_range(0..n_e as u32),
        );
        let mut neg = pos;
        neg.tail = rng.gen_range(0..n_e as u32);
        let m = EmbeddingModel::from_vectors(&e, &r, norm, 2.0).unwrap();
        let active = 2.0 + m.distance(&pos) - m.distance(&neg);
        let near_kink = |t: &Triple| {
            (0..dim).any(|k| (e[t.head as usize][k] + r[t.relation as usize][k] - e[t.tail as usize][k]).abs() < 1e-3)
        };
        if active < 1e-3 || near_kink(&pos) || near_kink(&neg) || neg == pos {
            continue;
        }
        let g = margin_loss_gradient(&m, &pos, &neg);
        let rows = (0..n_e as u32)
            .map(ParamRow::Entity)
            .chain((0..n_r as u32).map(ParamRow::Relation));
        let mut diff = 0.0f64;
        let (mut an_sq, mut fd_sq) = (0.0f64, 0.0f64);
        for row in rows {
            for k in 0..dim {
                let fd = (loss_with(&e, &r, row, k, h, norm, &pos, &neg)
                    - loss_with(&e, &r, row, k, -h, norm, &pos, &neg))
                    / (2.0 * h);
                let an = g.row(row).map_or(0.0, |v| v[k]);
                diff += (fd - an).powi(2);
                an_sq += an * an;
                fd_sq += fd * fd;
            }
        }
        let scale = an_sq.sqrt().max(fd_sq.sqrt());
        out.push(diff.sqrt() / scale.max(1e-12));
    }
    out
}
