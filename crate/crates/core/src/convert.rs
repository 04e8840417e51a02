//! Adapters from common public dataset layouts to the crate's own layout.
//!
//! * `kgbert`: `train.tsv`, `dev.tsv`, `test.tsv` with `h<TAB>r<TAB>t`;
//!   `entity2text.txt` (names), optional `entity2textlong.txt`
//!   (descriptions), `relation2text.txt`, and optional `entities.txt` /
//!   `relations.txt` fixing the id order.
//! * `kgbert-wn`: as `kgbert`, but each `entity2text.txt` value is
//!   `name, gloss` and is split at the first `", "`.
//! * `wikidata5m`: `wikidata5m_transductive_{train,valid,test}.txt`,
//!   `wikidata5m_entity.txt` / `wikidata5m_relation.txt` (id then aliases;
//!   the first alias is the name) and `wikidata5m_text.txt`.
//!
//! Entities and relations without an explicit list are ordered by first
//! appearance in train, valid, test. Tabs and line breaks inside text are
//! replaced by spaces. Missing names and descriptions become empty.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kg::{KnowledgeGraph, Named, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceLayout {
    KgBert,
    KgBertWordNet,
    Wikidata5m,
}

impl FromStr for SourceLayout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kgbert" => Ok(SourceLayout::KgBert),
            "kgbert-wn" => Ok(SourceLayout::KgBertWordNet),
            "wikidata5m" => Ok(SourceLayout::Wikidata5m),
            other => Err(Error::InvalidArgument(format!(
                "unknown layout {other:?} (expected kgbert, kgbert-wn or wikidata5m)"
            ))),
        }
    }
}

#[derive(Default)]
struct Interner {
    ids: Vec<String>,
    index: HashMap<String, u32>,
}

impl Interner {
    fn intern(&mut self, id: &str) -> u32 {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        let i = self.ids.len() as u32;
        self.ids.push(id.to_string());
        self.index.insert(id.to_string(), i);
        i
    }

    fn get(&self, id: &str) -> Option<u32> {
        self.index.get(id).copied()
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    match File::open(path) {
        Ok(f) => Ok(BufReader::with_capacity(1 << 20, f)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(Error::MissingFile(path.to_path_buf())),
        Err(e) => Err(Error::io(path, e)),
    }
}

fn for_each_line(path: &Path, mut f: impl FnMut(usize, &str) -> Result<()>) -> Result<()> {
    let mut reader = open(path)?;
    let mut buf = String::new();
    let mut n = 0;
    loop {
        buf.clear();
        if reader.read_line(&mut buf).map_err(|e| Error::io(path, e))? == 0 {
            return Ok(());
        }
        n += 1;
        let line = buf.trim_end_matches(['\n', '\r']);
        if !line.is_empty() {
            f(n, line)?;
        }
    }
}

fn clean(text: &str) -> String {
    text.replace(['\t', '\n', '\r'], " ").trim().to_string()
}

fn file_label(path: &Path) -> String {
    path.file_name()
        .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn read_triples(path: &Path, entities: &mut Interner, relations: &mut Interner) -> Result<Vec<Triple>> {
    let label = file_label(path);
    let mut out = Vec::new();
    for_each_line(path, |n, line| {
        let f: Vec<&str> = line.split('\t').map(str::trim).collect();
        if f.len() != 3 || f.iter().any(|x| x.is_empty()) {
            return Err(Error::parse(label.as_str(), n, "expected 3 tab-separated ids"));
        }
        out.push(Triple::new(
            entities.intern(f[0]),
            relations.intern(f[1]),
            entities.intern(f[2]),
        ));
        Ok(())
    })?;
    Ok(out)
}

/// Reads `id<TAB>value[<TAB>more...]` rows for ids already interned.
/// `all_fields` keeps every column after the id joined by spaces;
/// otherwise only the first value is kept.
fn read_values(path: &Path, ids: &Interner, all_fields: bool) -> Result<Vec<Option<String>>> {
    let mut out = vec![None; ids.ids.len()];
    for_each_line(path, |_, line| {
        let (id, rest) = line.split_once('\t').unwrap_or((line, ""));
        if let Some(i) = ids.get(id.trim()) {
            let value = if all_fields {
                rest
            } else {
                rest.split('\t').next().unwrap_or("")
            };
            let slot = &mut out[i as usize];
            if slot.is_none() {
                *slot = Some(clean(value));
            }
        }
        Ok(())
    })?;
    Ok(out)
}

/// Pre-interns an id list so that file order fixes the index order.
fn seed_ids(path: &Path, ids: &mut Interner) -> Result<()> {
    for_each_line(path, |_, line| {
        ids.intern(line.split('\t').next().unwrap_or("").trim());
        Ok(())
    })
}

struct Sources {
    splits: [PathBuf; 3],
    entity_list: Option<PathBuf>,
    relation_list: Option<PathBuf>,
    entity_names: PathBuf,
    entity_text: Option<PathBuf>,
    relation_names: Option<PathBuf>,
    names_all_fields: bool,
}

fn sources(layout: SourceLayout, dir: &Path) -> Sources {
    let opt = |name: &str| Some(dir.join(name)).filter(|p| p.is_file());
    match layout {
        SourceLayout::KgBert | SourceLayout::KgBertWordNet => Sources {
            splits: [dir.join("train.tsv"), dir.join("dev.tsv"), dir.join("test.tsv")],
            entity_list: opt("entities.txt"),
            relation_list: opt("relations.txt"),
            entity_names: dir.join("entity2text.txt"),
            entity_text: opt("entity2textlong.txt"),
            relation_names: opt("relation2text.txt"),
            names_all_fields: true,
        },
        SourceLayout::Wikidata5m => Sources {
            splits: [
                dir.join("wikidata5m_transductive_train.txt"),
                dir.join("wikidata5m_transductive_valid.txt"),
                dir.join("wikidata5m_transductive_test.txt"),
            ],
            entity_list: None,
            relation_list: None,
            entity_names: dir.join("wikidata5m_entity.txt"),
            entity_text: Some(dir.join("wikidata5m_text.txt")),
            relation_names: Some(dir.join("wikidata5m_relation.txt")),
            names_all_fields: false,
        },
    }
}

/// Reads a public layout into a validated graph.
pub fn convert(layout: SourceLayout, dir: impl AsRef<Path>) -> Result<KnowledgeGraph> {
    let dir = dir.as_ref();
    if !dir.is_dir() {
        return Err(Error::MissingFile(dir.to_path_buf()));
    }
    let src = sources(layout, dir);
    let mut entities = Interner::default();
    let mut relations = Interner::default();
    if let Some(p) = &src.entity_list {
        seed_ids(p, &mut entities)?;
    }
    if let Some(p) = &src.relation_list {
        seed_ids(p, &mut relations)?;
    }
    let [train, valid, test] = [0, 1, 2].map(|i| read_triples(&src.splits[i], &mut entities, &mut relations));
    let (train, valid, test) = (train?, valid?, test?);

    let raw_names = read_values(&src.entity_names, &entities, src.names_all_fields)?;
    let long_text = match &src.entity_text {
        Some(p) => Some(read_values(p, &entities, true)?),
        None => None,
    };
    let mut names = Vec::with_capacity(raw_names.len());
    let mut descriptions = Vec::with_capacity(raw_names.len());
    for (i, raw) in raw_names.into_iter().enumerate() {
        let raw = raw.unwrap_or_default();
        let (name, gloss) = match layout {
            SourceLayout::KgBertWordNet => match raw.split_once(", ") {
                Some((n, g)) => (n.to_string(), g.to_string()),
                None => (raw, String::new()),
            },
            _ => (raw, String::new()),
        };
        let text = long_text.as_ref().and_then(|t| t[i].clone()).unwrap_or(gloss);
        names.push(name);
        descriptions.push(text);
    }
    let relation_names: Vec<String> = match &src.relation_names {
        Some(p) => read_values(p, &relations, src.names_all_fields)?
            .into_iter()
            .zip(&relations.ids)
            .map(|(n, id)| n.unwrap_or_else(|| id.clone()))
            .collect(),
        None => relations.ids.clone(),
    };

    let entities: Vec<Named> = entities
        .ids
        .into_iter()
        .zip(names)
        .map(|(id, n)| Named::new(id, n))
        .collect();
    let relations: Vec<Named> = relations
        .ids
        .into_iter()
        .zip(relation_names)
        .map(|(id, n)| Named::new(id, n))
        .collect();
    KnowledgeGraph::from_parts(entities, relations, descriptions, train, valid, test)
        .map_err(|e| e.context(format!("converting {}", dir.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::Split;

    #[test]
    fn kgbert_wordnet_splits_gloss() {
        let dir = tempfile::tempdir().unwrap();
        let w = |n: &str, s: &str| std::fs::write(dir.path().join(n), s).unwrap();
        w("train.tsv", "1\t_hypernym\t2\n");
        w("dev.tsv", "2\t_hyponym\t1\n");
        w("test.tsv", "");
        w(
            "entity2text.txt",
            "1\toak, a tree of the genus quercus\n2\ttree, a tall woody plant\n",
        );
        let kg = convert(SourceLayout::KgBertWordNet, dir.path()).unwrap();
        assert_eq!(kg.entity(0).name, "oak");
        assert_eq!(kg.description(0), "a tree of the genus quercus");
        assert_eq!(kg.relation(1).name, "_hyponym");
        assert_eq!(kg.split(Split::Valid).len(), 1);
    }

    #[test]
    fn wikidata_first_alias_is_name() {
        let dir = tempfile::tempdir().unwrap();
        let w = |n: &str, s: &str| std::fs::write(dir.path().join(n), s).unwrap();
        w("wikidata5m_transductive_train.txt", "Q1\tP1\tQ2\n");
        w("wikidata5m_transductive_valid.txt", "");
        w("wikidata5m_transductive_test.txt", "");
        w("wikidata5m_entity.txt", "Q1\tAlpha\talpha one\nQ2\tBeta\nQ9\tUnused\n");
        w("wikidata5m_relation.txt", "P1\tknows\n");
        w("wikidata5m_text.txt", "Q2\tBeta is\ta letter\n");
        let kg = convert(SourceLayout::Wikidata5m, dir.path()).unwrap();
        assert_eq!(kg.n_entities(), 2);
        assert_eq!(kg.entity(0).name, "Alpha");
        assert_eq!(kg.description(1), "Beta is a letter");
        assert_eq!(kg.description(0), "");
    }
}
