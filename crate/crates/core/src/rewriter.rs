//! Multi-pattern search-and-replace of surface names inside free text.
//!
//! Keys live in a byte-level prefix tree stored breadth-first in flat
//! arrays: the children of a node are a contiguous, label-sorted block of
//! node ids, so each node costs a label byte, a child offset and a value
//! slot, and shared prefixes are stored once.
//!
//! Matching rules, shared with [`crate::analysis::description_leakage`]:
//! - case-sensitive, byte-exact;
//! - a key matches only at token boundaries: the characters just before and
//!   just after the span must not be letters or digits (text start and end
//!   count as boundaries);
//! - greedy left-to-right scan, longest boundary-respecting key wins, the
//!   scan resumes after the replaced span, and replacement text is never
//!   rescanned.

use std::collections::{HashMap, VecDeque};
use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kg::KnowledgeGraph;

const NO_VALUE: u32 = u32::MAX;

/// Ordered original-name → replacement map with unique keys.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NameMap {
    entries: Vec<(String, String)>,
    positions: HashMap<String, usize>,
}

impl NameMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts unless the key is already present; the first mapping for a
    /// key wins. Returns whether the pair was inserted.
    pub fn insert(&mut self, key: impl Into<String>, value: impl Into<String>) -> bool {
        let key = key.into();
        if self.positions.contains_key(&key) {
            return false;
        }
        self.positions.insert(key.clone(), self.entries.len());
        self.entries.push((key, value.into()));
        true
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.positions.get(key).map(|&i| self.entries[i].1.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for NameMap {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        let mut map = NameMap::new();
        for (k, v) in iter {
            map.insert(k, v);
        }
        map
    }
}

/// Prefix tree over the keys of a [`NameMap`].
#[derive(Debug, Clone)]
pub struct PatternIndex {
    child_begin: Vec<u32>,
    labels: Vec<u8>,
    values: Vec<u32>,
    replacements: Vec<String>,
}

/// One key occurrence found by the scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyMatch {
    pub span: Range<usize>,
    pub replacement: u32,
}

/// Where a replacement came from in the input and where it landed in the
/// output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplacedSpan {
    pub input: Range<usize>,
    pub output: Range<usize>,
}

impl PatternIndex {
    pub fn n_keys(&self) -> usize {
        self.replacements.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.replacements.is_empty()
    }

    pub fn replacement(&self, id: u32) -> &str {
        &self.replacements[id as usize]
    }

    #[inline]
    fn child(&self, node: u32, byte: u8) -> Option<u32> {
        let lo = self.child_begin[node as usize] as usize;
        let hi = self.child_begin[node as usize + 1] as usize;
        self.labels[lo..hi].binary_search(&byte).ok().map(|k| (lo + k) as u32)
    }

    /// Exact membership lookup.
    pub fn get(&self, key: &str) -> Option<&str> {
        let mut node = 0u32;
        for &b in key.as_bytes() {
            node = self.child(node, b)?;
        }
        match self.values[node as usize] {
            NO_VALUE => None,
            v => Some(self.replacement(v)),
        }
    }

    pub fn contains_key(&self, key: &str) -> bool {
        self.get(key).is_some()
    }

    /// Longest key starting at byte `start` whose end is a token boundary.
    fn longest_at(&self, text: &str, start: usize) -> Option<(usize, u32)> {
        let bytes = text.as_bytes();
        let mut node = 0u32;
        let mut best = None;
        for (i, &b) in bytes[start..].iter().enumerate() {
            match self.child(node, b) {
                Some(next) => node = next,
                None => break,
            }
            let v = self.values[node as usize];
            if v != NO_VALUE {
                let end = start + i + 1;
                if right_boundary(text, end) {
                    best = Some((end, v));
                }
            }
        }
        best
    }

    /// Non-overlapping matches in scan order, under the module's rules.
    pub fn find_matches(&self, text: &str) -> Vec<KeyMatch> {
        let mut out = Vec::new();
        if self.is_empty() {
            return out;
        }
        let mut pos = 0;
        let mut prev: Option<char> = None;
        while pos < text.len() {
            if !prev.is_some_and(is_word_char) {
                if let Some((end, v)) = self.longest_at(text, pos) {
                    out.push(KeyMatch {
                        span: pos..end,
                        replacement: v,
                    });
                    prev = text[..end].chars().next_back();
                    pos = end;
                    continue;
                }
            }
            let c = text[pos..].chars().next().expect("pos is a char boundary");
            prev = Some(c);
            pos += c.len_utf8();
        }
        out
    }

    /// Rewrites `text` and reports every replaced span.
    pub fn rewrite_with_spans(&self, text: &str) -> (String, Vec<ReplacedSpan>) {
        let matches = self.find_matches(text);
        if matches.is_empty() {
            return (text.to_string(), Vec::new());
        }
        let mut out = String::with_capacity(text.len());
        let mut spans = Vec::with_capacity(matches.len());
        let mut last = 0;
        for m in matches {
            out.push_str(&text[last..m.span.start]);
            let start = out.len();
            out.push_str(self.replacement(m.replacement));
            spans.push(ReplacedSpan {
                input: m.span.clone(),
                output: start..out.len(),
            });
            last = m.span.end;
        }
        out.push_str(&text[last..]);
        (out, spans)
    }
}

#[inline]
fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

#[inline]
fn right_boundary(text: &str, end: usize) -> bool {
    !text[end..].chars().next().is_some_and(is_word_char)
}

#[inline]
fn left_boundary(text: &str, start: usize) -> bool {
    !text[..start].chars().next_back().is_some_and(is_word_char)
}

/// Whether `pattern` occurs in `text` at token boundaries (case-sensitive).
pub fn contains_at_boundary(text: &str, pattern: &str) -> bool {
    if pattern.is_empty() {
        return false;
    }
    let mut from = 0;
    while let Some(i) = text[from..].find(pattern) {
        let start = from + i;
        let end = start + pattern.len();
        if left_boundary(text, start) && right_boundary(text, end) {
            return true;
        }
        from = start + text[start..].chars().next().map_or(1, char::len_utf8);
    }
    false
}

/// Builds the prefix tree. Fails on an empty key.
pub fn build_index(map: &NameMap) -> Result<PatternIndex> {
    let mut keyed: Vec<(&[u8], u32)> = Vec::with_capacity(map.len());
    let mut replacements = Vec::with_capacity(map.len());
    for (i, (k, v)) in map.iter().enumerate() {
        if k.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "empty pattern key (entry {} maps to {v:?})",
                i + 1
            )));
        }
        keyed.push((k.as_bytes(), i as u32));
        replacements.push(v.to_string());
    }
    if keyed.len() >= NO_VALUE as usize {
        return Err(Error::InvalidArgument("too many pattern keys".into()));
    }
    keyed.sort_unstable_by(|a, b| a.0.cmp(b.0));

    let mut child_begin: Vec<u32> = Vec::new();
    let mut labels: Vec<u8> = vec![0];
    let mut values: Vec<u32> = vec![NO_VALUE];
    let mut queue: VecDeque<(usize, usize, usize)> = VecDeque::new();
    queue.push_back((0, keyed.len(), 0));
    while let Some((mut lo, hi, depth)) = queue.pop_front() {
        let node = child_begin.len();
        child_begin.push(labels.len() as u32);
        if lo < hi && keyed[lo].0.len() == depth {
            // keys are unique, so at most one ends here and it sorts first
            values[node] = keyed[lo].1;
            lo += 1;
        }
        while lo < hi {
            let b = keyed[lo].0[depth];
            let mut end = lo + 1;
            while end < hi && keyed[end].0[depth] == b {
                end += 1;
            }
            if labels.len() >= u32::MAX as usize {
                return Err(Error::InvalidArgument("pattern index too large".into()));
            }
            labels.push(b);
            values.push(NO_VALUE);
            queue.push_back((lo, end, depth + 1));
            lo = end;
        }
    }
    child_begin.push(labels.len() as u32);
    Ok(PatternIndex {
        child_begin,
        labels,
        values,
        replacements,
    })
}

pub fn rewrite_text(index: &PatternIndex, text: &str) -> String {
    index.rewrite_with_spans(text).0
}

/// Rewrites every description in entity order. Runs in parallel; the result
/// does not depend on thread count.
pub fn rewrite_descriptions(kg: &KnowledgeGraph, map: &NameMap) -> Result<Vec<String>> {
    let index = build_index(map)?;
    Ok(rewrite_all(&index, kg.descriptions()))
}

pub fn rewrite_all(index: &PatternIndex, texts: &[String]) -> Vec<String> {
    texts.par_iter().map(|t| rewrite_text(index, t)).collect()
}
