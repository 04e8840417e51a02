//! Character-level unigram language model with an end-of-sequence symbol,
//! and generation of unique random strings from it.
//!
//! A string `s = s_1 .. s_n` has probability `p(eos) * prod p(s_i)`; the
//! characters are independent draws, so no co-occurrence information from
//! the fitting corpus leaks into samples.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use rand::distributions::{Distribution, WeightedIndex};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{item_seed, rng_from, Rng};

/// Longest string `sample_string` will build before giving up.
pub const MAX_SAMPLE_CHARS: usize = 10_000;
/// Consecutive empty draws tolerated before the model is declared degenerate.
const MAX_EMPTY_DRAWS: usize = 10_000;
/// Retry budget per requested string in [`sample_unique_strings`].
pub const RETRIES_PER_STRING: u64 = 1000;

#[derive(Debug, Clone)]
pub struct UnigramModel {
    chars: Vec<char>,
    probs: Vec<f64>,
    eos: f64,
    // index == chars.len() is EOS
    sampler: Option<WeightedIndex<f64>>,
}

impl PartialEq for UnigramModel {
    fn eq(&self, other: &Self) -> bool {
        self.chars == other.chars && self.probs == other.probs && self.eos == other.eos
    }
}

impl UnigramModel {
    /// Builds a model from explicit probabilities. They must be finite,
    /// non-negative and sum (with `eos`) to 1 within 1e-9; `eos` must be > 0.
    pub fn from_probabilities(probabilities: impl IntoIterator<Item = (char, f64)>, eos: f64) -> Result<Self> {
        let table: BTreeMap<char, f64> = probabilities.into_iter().collect();
        let (chars, probs): (Vec<char>, Vec<f64>) = table.into_iter().unzip();
        if !(eos.is_finite() && eos > 0.0 && eos <= 1.0) {
            return Err(Error::InvalidArgument(format!("eos probability {eos} not in (0, 1]")));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidArgument(
                "negative or non-finite character probability".into(),
            ));
        }
        let total: f64 = probs.iter().sum::<f64>() + eos;
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self::assemble(chars, probs, eos))
    }

    fn assemble(chars: Vec<char>, probs: Vec<f64>, eos: f64) -> Self {
        let weights = probs.iter().copied().chain(std::iter::once(eos));
        let sampler = WeightedIndex::new(weights).ok();
        UnigramModel {
            chars,
            probs,
            eos,
            sampler,
        }
    }

    pub fn eos_probability(&self) -> f64 {
        self.eos
    }

    pub fn probability(&self, c: char) -> f64 {
        match self.chars.binary_search(&c) {
            Ok(i) => self.probs[i],
            Err(_) => 0.0,
        }
    }

    /// Characters with their probabilities, in code point order.
    pub fn probabilities(&self) -> impl Iterator<Item = (char, f64)> + '_ {
        self.chars.iter().copied().zip(self.probs.iter().copied())
    }

    /// `log p(s) = sum log p(s_i) + log p(eos)`.
    pub fn log_prob(&self, s: &str) -> f64 {
        s.chars().map(|c| self.probability(c).ln()).sum::<f64>() + self.eos.ln()
    }

    /// Writes `char<TAB>probability` rows plus a final `<EOS>` row. Tab,
    /// newline, carriage return and backslash are written as `\t`, `\n`,
    /// `\r` and `\\`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (c, p) in self.probabilities() {
            let _ = writeln!(out, "{}\t{p}", escape_char(c));
        }
        let _ = writeln!(out, "<EOS>\t{}", self.eos);
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut probs = Vec::new();
        let mut eos = None;
        for (i, line) in text.lines().enumerate() {
            let (key, value) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse("unigram.tsv", i + 1, "expected char<TAB>probability"))?;
            let p: f64 = value
                .parse()
                .map_err(|_| Error::parse("unigram.tsv", i + 1, format!("bad probability {value:?}")))?;
            if key == "<EOS>" {
                eos = Some(p);
            } else {
                let c = unescape_char(key)
                    .ok_or_else(|| Error::parse("unigram.tsv", i + 1, format!("bad character {key:?}")))?;
                probs.push((c, p));
            }
        }
        let eos = eos.ok_or_else(|| Error::parse("unigram.tsv", 0, "missing <EOS> row"))?;
        Self::from_probabilities(probs, eos)
    }

    pub fn write_tsv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_tsv()).map_err(|e| Error::io(path, e))
    }
}

fn escape_char(c: char) -> String {
    match c {
        '\t' => "\\t".into(),
        '\n' => "\\n".into(),
        '\r' => "\\r".into(),
        '\\' => "\\\\".into(),
        c => c.to_string(),
    }
}

fn unescape_char(s: &str) -> Option<char> {
    match s {
        "\\t" => Some('\t'),
        "\\n" => Some('\n'),
        "\\r" => Some('\r'),
        "\\\\" => Some('\\'),
        _ => {
            let mut it = s.chars();
            let c = it.next()?;
            it.next().is_none().then_some(c)
        }
    }
}

/// Fits character frequencies over `corpus`, counting one EOS event per
/// string: `p(c) = count(c) / (chars + strings)`, `p(eos) = strings / (chars + strings)`.
pub fn fit_unigram<S: AsRef<str>>(corpus: &[S]) -> Result<UnigramModel> {
    if corpus.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot fit a unigram model to an empty corpus".into(),
        ));
    }
    let mut counts: BTreeMap<char, u64> = BTreeMap::new();
    let mut total_chars = 0u64;
    for s in corpus {
        for c in s.as_ref().chars() {
            *counts.entry(c).or_insert(0) += 1;
            total_chars += 1;
        }
    }
    if total_chars == 0 {
        return Err(Error::InvalidArgument(
            "unigram corpus contains only empty strings".into(),
        ));
    }
    let n_strings = corpus.len() as u64;
    let denom = (total_chars + n_strings) as f64;
    let (chars, probs) = counts.into_iter().map(|(c, k)| (c, k as f64 / denom)).unzip();
    Ok(UnigramModel::assemble(chars, probs, n_strings as f64 / denom))
}

/// Draws one non-empty string: i.i.d. characters until EOS is drawn. Draws
/// that hit EOS immediately are discarded and redrawn.
pub fn sample_string(model: &UnigramModel, rng: &mut Rng) -> Result<String> {
    let sampler = match &model.sampler {
        Some(s) if model.probs.iter().any(|&p| p > 0.0) => s,
        _ => return Err(Error::Sampling("model can only produce the empty string".into())),
    };
    let eos_index = model.chars.len();
    for _ in 0..MAX_EMPTY_DRAWS {
        let mut out = String::new();
        let mut len = 0usize;
        loop {
            let k = sampler.sample(rng);
            if k == eos_index {
                break;
            }
            if len == MAX_SAMPLE_CHARS {
                return Err(Error::Sampling(format!(
                    "string exceeded {MAX_SAMPLE_CHARS} characters; EOS probability {} is degenerate",
                    model.eos
                )));
            }
            out.push(model.chars[k]);
            len += 1;
        }
        if !out.is_empty() {
            return Ok(out);
        }
    }
    Err(Error::Sampling(format!(
        "{MAX_EMPTY_DRAWS} consecutive empty draws; EOS probability {} is degenerate",
        model.eos
    )))
}

/// Draws `count` pairwise-distinct strings, none of which is in `forbidden`.
///
/// Item `i` uses its own generator seeded from `(seed, i)`. First candidates
/// are drawn in parallel; collisions are then resolved in item order by
/// drawing further from the colliding item's own generator, so the output
/// does not depend on thread count. Fails once more than
/// `RETRIES_PER_STRING * count` redraws have been spent.
pub fn sample_unique_strings(
    model: &UnigramModel,
    count: usize,
    forbidden: &HashSet<String>,
    seed: u64,
) -> Result<Vec<String>> {
    let mut seen = HashSet::with_capacity(count);
    let out = sample_unique_into(model, count, forbidden, &mut seen, seed)?;
    Ok(out)
}

/// Like [`sample_unique_strings`], additionally avoiding and extending
/// `taken`, so several calls can share one uniqueness scope.
pub fn sample_unique_into(
    model: &UnigramModel,
    count: usize,
    forbidden: &HashSet<String>,
    taken: &mut HashSet<String>,
    seed: u64,
) -> Result<Vec<String>> {
    let drafts: Vec<(Rng, String)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from(item_seed(seed, i as u64));
            let s = sample_string(model, &mut rng)?;
            Ok((rng, s))
        })
        .collect::<Result<_>>()?;

    let budget = RETRIES_PER_STRING.saturating_mul(count as u64);
    let mut retries = 0u64;
    let mut out = Vec::with_capacity(count);
    for (mut rng, mut s) in drafts {
        while forbidden.contains(&s) || taken.contains(&s) {
            if retries == budget {
                return Err(Error::Uniqueness {
                    requested: count,
                    produced: out.len(),
                    budget,
                });
            }
            retries += 1;
            s = sample_string(model, &mut rng)?;
        }
        taken.insert(s.clone());
        out.push(s);
    }
    Ok(out)
}
