//! Derangements: uniform random ones by rejection, and constrained ones via
//! maximum bipartite matching (Hopcroft-Karp).
//!
//! Both operate at the *value* level: position `i` of the result never holds
//! a value equal to `items[i]`, even when values repeat.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::kg::KnowledgeGraph;
use crate::rng::{derive_seed, rng_from};

/// Uniform-permutation attempts before switching to the repair fallback.
const MAX_REJECTIONS: usize = 1000;

/// Forbidden value transitions `(from, to)`: position holding `from` may not
/// receive `to`. Self pairs are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovedEdges<T: Eq + Hash> {
    pairs: HashSet<(T, T)>,
}

impl<T: Eq + Hash> Default for RemovedEdges<T> {
    fn default() -> Self {
        RemovedEdges { pairs: HashSet::new() }
    }
}

impl<T: Eq + Hash + Clone> RemovedEdges<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `(from, to)`. Returns false for self pairs and duplicates.
    pub fn insert(&mut self, from: T, to: T) -> bool {
        if from == to {
            return false;
        }
        self.pairs.insert((from, to))
    }

    pub fn contains(&self, from: &T, to: &T) -> bool {
        // HashSet<(T, T)> needs an owned tuple for lookup
        self.pairs.contains(&(from.clone(), to.clone()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(T, T)> {
        self.pairs.iter()
    }
}

impl<T: Eq + Hash + Clone> FromIterator<(T, T)> for RemovedEdges<T> {
    fn from_iter<I: IntoIterator<Item = (T, T)>>(iter: I) -> Self {
        let mut out = RemovedEdges::new();
        for (a, b) in iter {
            out.insert(a, b);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerangementResult<T> {
    /// Rearranged values; `res[i] == items[permutation[i]]`.
    pub res: Vec<T>,
    /// Source index of each output position.
    pub permutation: Vec<usize>,
}

/// Maps values to dense ids in first-occurrence order.
fn value_ids<T: Eq + Hash>(items: &[T]) -> (Vec<u32>, usize) {
    let mut ids = HashMap::with_capacity(items.len());
    let out = items
        .iter()
        .map(|v| {
            let next = ids.len() as u32;
            *ids.entry(v).or_insert(next)
        })
        .collect();
    (out, ids.len())
}

/// Uniform random value-level derangement of `items`.
///
/// Draws uniform permutations until one has no fixed value (about `e`
/// attempts for distinct values). Heavily repeated values can make that
/// rare, so after `MAX_REJECTIONS` attempts the last permutation is repaired
/// by conflict-resolving swaps, which always succeeds when no value fills
/// more than half the positions.
pub fn derange<T: Eq + Hash + Clone>(items: &[T], seed: u64) -> Result<DerangementResult<T>> {
    let n = items.len();
    if n <= 1 {
        return Err(Error::Infeasible(format!("no derangement of {n} item(s)")));
    }
    let (ids, n_values) = value_ids(items);
    let mut counts = vec![0usize; n_values];
    for &v in &ids {
        counts[v as usize] += 1;
    }
    let max = counts.iter().copied().max().unwrap_or(0);
    if max * 2 > n {
        return Err(Error::Infeasible(format!(
            "a value fills {max} of {n} positions; no derangement exists"
        )));
    }

    let mut rng = rng_from(derive_seed(seed, &["derange"]));
    let mut perm: Vec<usize> = (0..n).collect();
    let is_valid = |perm: &[usize]| perm.iter().enumerate().all(|(i, &j)| ids[i] != ids[j]);
    let mut found = false;
    for _ in 0..MAX_REJECTIONS {
        perm.shuffle(&mut rng);
        if is_valid(&perm) {
            found = true;
            break;
        }
    }
    if !found {
        repair(&ids, &mut perm, &mut rng);
        debug_assert!(is_valid(&perm));
    }
    Ok(DerangementResult {
        res: perm.iter().map(|&j| items[j].clone()).collect(),
        permutation: perm,
    })
}

/// Swaps away every fixed value. For a conflict at `i` with value `v`, some
/// `j` has neither `ids[j] == v` nor `ids[perm[j]] == v` (at most `2m - 1 < n`
/// positions are excluded), and swapping fixes `i` without breaking `j`.
fn repair(ids: &[u32], perm: &mut [usize], rng: &mut crate::rng::Rng) {
    let n = ids.len();
    for i in 0..n {
        let v = ids[i];
        if ids[perm[i]] != v {
            continue;
        }
        let ok = |j: usize, perm: &[usize]| ids[j] != v && ids[perm[j]] != v;
        let mut chosen = None;
        for _ in 0..32 {
            let j = rng.gen_range(0..n);
            if ok(j, perm) {
                chosen = Some(j);
                break;
            }
        }
        let j = chosen.unwrap_or_else(|| {
            let start = rng.gen_range(0..n);
            (0..n)
                .map(|k| (start + k) % n)
                .find(|&j| ok(j, perm))
                .expect("feasible multiset always has a repairing swap")
        });
        perm.swap(i, j);
    }
}

/// Maximum-cardinality bipartite matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub left_to_right: Vec<Option<usize>>,
    pub right_to_left: Vec<Option<usize>>,
    pub size: usize,
}

/// Hopcroft-Karp over an edge list. O(E sqrt(V)).
pub fn maximum_matching(left_size: usize, right_size: usize, edges: &[(usize, usize)]) -> Result<Matching> {
    let mut adj = vec![Vec::new(); left_size];
    for &(l, r) in edges {
        if l >= left_size || r >= right_size {
            return Err(Error::InvalidArgument(format!(
                "edge ({l}, {r}) outside a {left_size}x{right_size} graph"
            )));
        }
        adj[l].push(r);
    }
    Ok(hopcroft_karp(&adj, right_size))
}

const UNREACHED: u32 = u32::MAX;

fn hopcroft_karp(adj: &[Vec<usize>], right_size: usize) -> Matching {
    let left_size = adj.len();
    let mut l2r: Vec<Option<usize>> = vec![None; left_size];
    let mut r2l: Vec<Option<usize>> = vec![None; right_size];
    let mut dist = vec![UNREACHED; left_size];
    let mut queue = Vec::with_capacity(left_size);
    let mut cursor = vec![0usize; left_size];
    let mut stack = Vec::new();
    let mut size = 0;

    loop {
        // layer the graph from the free left vertices
        queue.clear();
        for u in 0..left_size {
            if l2r[u].is_none() {
                dist[u] = 0;
                queue.push(u);
            } else {
                dist[u] = UNREACHED;
            }
        }
        let mut reachable_free = false;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for &v in &adj[u] {
                match r2l[v] {
                    None => reachable_free = true,
                    Some(w) if dist[w] == UNREACHED => {
                        dist[w] = dist[u] + 1;
                        queue.push(w);
                    }
                    Some(_) => {}
                }
            }
        }
        if !reachable_free {
            break;
        }

        // vertex-disjoint shortest augmenting paths, iterative DFS
        cursor.iter_mut().for_each(|c| *c = 0);
        for root in 0..left_size {
            if l2r[root].is_some() {
                continue;
            }
            stack.clear();
            stack.push(root);
            while let Some(&u) = stack.last() {
                if cursor[u] == adj[u].len() {
                    dist[u] = UNREACHED;
                    stack.pop();
                    continue;
                }
                let v = adj[u][cursor[u]];
                match r2l[v] {
                    None => {
                        for &x in &stack {
                            let y = adj[x][cursor[x]];
                            l2r[x] = Some(y);
                            r2l[y] = Some(x);
                        }
                        size += 1;
                        break;
                    }
                    Some(w) if dist[w] != UNREACHED && dist[w] == dist[u] + 1 => stack.push(w),
                    Some(_) => cursor[u] += 1,
                }
            }
        }
    }

    Matching {
        left_to_right: l2r,
        right_to_left: r2l,
        size,
    }
}

/// Constrained derangement: position `i` may receive value `v` only when
/// `v != arr[i]` and `(arr[i], v)` is not a removed edge. Solved as a perfect
/// matching between positions; positions and adjacency lists are shuffled
/// under `seed` first so different seeds can give different valid results.
pub fn bipartite_derange<T: Eq + Hash + Clone>(
    arr: &[T],
    removed: &RemovedEdges<T>,
    seed: u64,
) -> Result<DerangementResult<T>> {
    let n = arr.len();
    if n == 0 {
        return Err(Error::InvalidArgument("cannot derange an empty list".into()));
    }
    let (ids, n_values) = value_ids(arr);
    let mut values: Vec<Option<&T>> = vec![None; n_values];
    for (v, &id) in arr.iter().zip(&ids) {
        values[id as usize].get_or_insert(v);
    }
    let values: Vec<&T> = values.into_iter().map(|v| v.expect("dense ids")).collect();
    // the constraint depends only on values, so decide it once per value pair
    let mut allowed = vec![false; n_values * n_values];
    for a in 0..n_values {
        for b in 0..n_values {
            allowed[a * n_values + b] = a != b && !removed.contains(values[a], values[b]);
        }
    }

    let mut rng = rng_from(derive_seed(seed, &["bipartite_derange"]));
    let mut left_order: Vec<usize> = (0..n).collect();
    let mut right_order: Vec<usize> = (0..n).collect();
    left_order.shuffle(&mut rng);
    right_order.shuffle(&mut rng);
    let adj: Vec<Vec<usize>> = left_order
        .iter()
        .map(|&pos| {
            let from = ids[pos] as usize;
            let mut row: Vec<usize> = (0..n)
                .filter(|&rj| allowed[from * n_values + ids[right_order[rj]] as usize])
                .collect();
            row.shuffle(&mut rng);
            row
        })
        .collect();

    let matching = hopcroft_karp(&adj, n);
    if matching.size < n {
        let mut unmatched: Vec<usize> = matching
            .left_to_right
            .iter()
            .enumerate()
            .filter(|(_, m)| m.is_none())
            .map(|(li, _)| left_order[li])
            .collect();
        unmatched.sort_unstable();
        return Err(Error::Infeasible(format!(
            "maximum matching covers {} of {n} positions; unmatched positions {unmatched:?}",
            matching.size
        )));
    }
    let mut permutation = vec![0usize; n];
    for (li, m) in matching.left_to_right.iter().enumerate() {
        permutation[left_order[li]] = right_order[m.expect("perfect matching")];
    }
    Ok(DerangementResult {
        res: permutation.iter().map(|&j| arr[j].clone()).collect(),
        permutation,
    })
}

/// Relation pairs that co-occur on some (head, tail) pair anywhere in the
/// graph. Swapping the names of such relations would leave those triples
/// unchanged, so neither may take the other's name.
pub fn build_removed_edges(kg: &KnowledgeGraph) -> RemovedEdges<u32> {
    let mut keyed: Vec<(u32, u32, u32)> = kg.all_triples().map(|t| (t.head, t.tail, t.relation)).collect();
    keyed.sort_unstable();
    keyed.dedup();
    let mut removed = RemovedEdges::new();
    for group in keyed.chunk_by(|a, b| a.0 == b.0 && a.1 == b.1) {
        if group.len() < 2 {
            continue;
        }
        for a in group {
            for b in group {
                removed.insert(a.2, b.2);
            }
        }
    }
    removed
}
