//! Knowledge graphs with entity descriptions, and their on-disk TSV layout.
//!
//! A dataset directory holds six UTF-8 files with LF line endings:
//!
//! | file               | line format                      |
//! |--------------------|----------------------------------|
//! | `entities.tsv`     | `entity_id<TAB>name`             |
//! | `relations.tsv`    | `relation_id<TAB>name`           |
//! | `descriptions.tsv` | `entity_id<TAB>description`      |
//! | `train.tsv`        | `head_id<TAB>relation_id<TAB>tail_id` |
//! | `valid.tsv`        | same as train                    |
//! | `test.tsv`         | same as train                    |
//!
//! Fields never contain tabs or line breaks; such values are rejected on
//! both load and write. Entities missing from `descriptions.tsv` get an
//! empty description. Entity and relation order is file order, and every
//! seeded algorithm in the crate indexes against that order.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const ENTITIES_FILE: &str = "entities.tsv";
pub const RELATIONS_FILE: &str = "relations.tsv";
pub const DESCRIPTIONS_FILE: &str = "descriptions.tsv";
pub const TRAIN_FILE: &str = "train.tsv";
pub const VALID_FILE: &str = "valid.tsv";
pub const TEST_FILE: &str = "test.tsv";

/// An entity or relation: opaque identifier plus surface name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Named {
    pub id: String,
    pub name: String,
}

impl Named {
    pub fn new(id: impl Into<String>, name: impl Into<String>) -> Self {
        Named {
            id: id.into(),
            name: name.into(),
        }
    }
}

/// A triple over entity and relation indices (positions in file order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub head: u32,
    pub relation: u32,
    pub tail: u32,
}

impl Triple {
    pub fn new(head: u32, relation: u32, tail: u32) -> Self {
        Triple { head, relation, tail }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Split {
    Train,
    Valid,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Valid, Split::Test];

    pub fn file_name(self) -> &'static str {
        match self {
            Split::Train => TRAIN_FILE,
            Split::Valid => VALID_FILE,
            Split::Test => TEST_FILE,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Valid => "valid",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "valid" | "dev" => Ok(Split::Valid),
            "test" => Ok(Split::Test),
            other => Err(Error::InvalidArgument(format!(
                "unknown split {other:?} (expected train, valid or test)"
            ))),
        }
    }
}

/// Row counts of a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DatasetStats {
    pub n_entities: usize,
    pub n_relations: usize,
    pub n_train: usize,
    pub n_valid: usize,
    pub n_test: usize,
}

impl DatasetStats {
    pub fn to_tsv(&self) -> String {
        format!(
            "entities\t{}\nrelations\t{}\ntrain\t{}\nvalid\t{}\ntest\t{}\n",
            self.n_entities, self.n_relations, self.n_train, self.n_valid, self.n_test
        )
    }
}

/// Entities, relations, three triple splits and one description per entity.
///
/// Immutable once built; every constructor validates the invariants (known
/// ids, unique ids, one description per entity, pairwise disjoint splits).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeGraph {
    entities: Vec<Named>,
    relations: Vec<Named>,
    descriptions: Vec<String>,
    train: Vec<Triple>,
    valid: Vec<Triple>,
    test: Vec<Triple>,
    entity_lookup: HashMap<String, u32>,
    relation_lookup: HashMap<String, u32>,
}

impl KnowledgeGraph {
    /// Builds a graph from index-based parts, validating all invariants.
    pub fn from_parts(
        entities: Vec<Named>,
        relations: Vec<Named>,
        descriptions: Vec<String>,
        train: Vec<Triple>,
        valid: Vec<Triple>,
        test: Vec<Triple>,
    ) -> Result<Self> {
        let entity_lookup = build_lookup(&entities, "entity")?;
        let relation_lookup = build_lookup(&relations, "relation")?;
        if descriptions.len() != entities.len() {
            return Err(Error::Validation(format!(
                "{} descriptions for {} entities",
                descriptions.len(),
                entities.len()
            )));
        }
        let n_e = entities.len() as u64;
        let n_r = relations.len() as u64;
        for split in Split::ALL {
            let triples = match split {
                Split::Train => &train,
                Split::Valid => &valid,
                Split::Test => &test,
            };
            for (i, t) in triples.iter().enumerate() {
                if u64::from(t.head) >= n_e || u64::from(t.tail) >= n_e || u64::from(t.relation) >= n_r {
                    return Err(Error::Validation(format!(
                        "{split} triple #{} references an index out of range",
                        i + 1
                    )));
                }
            }
        }
        let kg = KnowledgeGraph {
            entities,
            relations,
            descriptions,
            train,
            valid,
            test,
            entity_lookup,
            relation_lookup,
        };
        check_disjoint(&kg, None)?;
        Ok(kg)
    }

    pub fn entities(&self) -> &[Named] {
        &self.entities
    }

    pub fn relations(&self) -> &[Named] {
        &self.relations
    }

    pub fn descriptions(&self) -> &[String] {
        &self.descriptions
    }

    pub fn n_entities(&self) -> usize {
        self.entities.len()
    }

    pub fn n_relations(&self) -> usize {
        self.relations.len()
    }

    pub fn entity(&self, idx: u32) -> &Named {
        &self.entities[idx as usize]
    }

    pub fn relation(&self, idx: u32) -> &Named {
        &self.relations[idx as usize]
    }

    pub fn description(&self, idx: u32) -> &str {
        &self.descriptions[idx as usize]
    }

    pub fn entity_index(&self, id: &str) -> Option<u32> {
        self.entity_lookup.get(id).copied()
    }

    pub fn relation_index(&self, id: &str) -> Option<u32> {
        self.relation_lookup.get(id).copied()
    }

    pub fn split(&self, split: Split) -> &[Triple] {
        match split {
            Split::Train => &self.train,
            Split::Valid => &self.valid,
            Split::Test => &self.test,
        }
    }

    /// All triples, train then valid then test.
    pub fn all_triples(&self) -> impl Iterator<Item = &Triple> + '_ {
        self.train.iter().chain(&self.valid).chain(&self.test)
    }

    pub fn stats(&self) -> DatasetStats {
        compute_stats(self)
    }

    /// Same graph with new entity names (one per entity, same order).
    pub fn with_entity_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.entities.len() {
            return Err(Error::Validation(format!(
                "{} names for {} entities",
                names.len(),
                self.entities.len()
            )));
        }
        for (e, name) in self.entities.iter_mut().zip(names) {
            e.name = name;
        }
        Ok(self)
    }

    /// Same graph with new relation names (one per relation, same order).
    pub fn with_relation_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.relations.len() {
            return Err(Error::Validation(format!(
                "{} names for {} relations",
                names.len(),
                self.relations.len()
            )));
        }
        for (r, name) in self.relations.iter_mut().zip(names) {
            r.name = name;
        }
        Ok(self)
    }

    /// Same graph with new descriptions (one per entity, same order).
    pub fn with_descriptions(mut self, descriptions: Vec<String>) -> Result<Self> {
        if descriptions.len() != self.entities.len() {
            return Err(Error::Validation(format!(
                "{} descriptions for {} entities",
                descriptions.len(),
                self.entities.len()
            )));
        }
        self.descriptions = descriptions;
        Ok(self)
    }
}

fn build_lookup(items: &[Named], what: &str) -> Result<HashMap<String, u32>> {
    if items.len() > u32::MAX as usize {
        return Err(Error::Validation(format!("too many {what} entries")));
    }
    let mut lookup = HashMap::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        if item.id.is_empty() {
            return Err(Error::Validation(format!("empty {what} id at position {}", i + 1)));
        }
        if lookup.insert(item.id.clone(), i as u32).is_some() {
            return Err(Error::Validation(format!("duplicate {what} id {:?}", item.id)));
        }
    }
    Ok(lookup)
}

/// Checks pairwise disjointness of the splits. `lines` optionally carries
/// the 1-based file line of each triple for error reporting.
fn check_disjoint(kg: &KnowledgeGraph, lines: Option<&SplitLines>) -> Result<()> {
    let line_of = |split: Split, i: usize| -> usize {
        match lines {
            Some(l) => l.get(split)[i],
            None => i + 1,
        }
    };
    let mut seen: HashMap<Triple, Split> = HashMap::with_capacity(kg.valid.len() + kg.test.len());
    for split in [Split::Valid, Split::Test, Split::Train] {
        for (i, t) in kg.split(split).iter().enumerate() {
            match seen.get(t) {
                Some(&other) if other != split => {
                    return Err(Error::parse(
                        split.file_name(),
                        line_of(split, i),
                        format!(
                            "triple ({}, {}, {}) also appears in {}",
                            kg.entity(t.head).id,
                            kg.relation(t.relation).id,
                            kg.entity(t.tail).id,
                            other.file_name()
                        ),
                    ));
                }
                Some(_) => {}
                // train is checked last and never needs to be remembered
                None if split != Split::Train => {
                    seen.insert(*t, split);
                }
                None => {}
            }
        }
    }
    Ok(())
}

struct SplitLines {
    train: Vec<usize>,
    valid: Vec<usize>,
    test: Vec<usize>,
}

impl SplitLines {
    fn get(&self, split: Split) -> &[usize] {
        match split {
            Split::Train => &self.train,
            Split::Valid => &self.valid,
            Split::Test => &self.test,
        }
    }
}

/// Builds a [`KnowledgeGraph`] from string ids, for fixtures and adapters.
#[derive(Debug, Default, Clone)]
pub struct KnowledgeGraphBuilder {
    entities: Vec<Named>,
    relations: Vec<Named>,
    descriptions: HashMap<String, String>,
    triples: [Vec<(String, String, String)>; 3],
}

impl KnowledgeGraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entity(mut self, id: &str, name: &str) -> Self {
        self.entities.push(Named::new(id, name));
        self
    }

    pub fn relation(mut self, id: &str, name: &str) -> Self {
        self.relations.push(Named::new(id, name));
        self
    }

    pub fn description(mut self, id: &str, text: &str) -> Self {
        self.descriptions.insert(id.to_string(), text.to_string());
        self
    }

    pub fn triple(mut self, split: Split, head: &str, relation: &str, tail: &str) -> Self {
        let slot = match split {
            Split::Train => 0,
            Split::Valid => 1,
            Split::Test => 2,
        };
        self.triples[slot].push((head.to_string(), relation.to_string(), tail.to_string()));
        self
    }

    pub fn build(self) -> Result<KnowledgeGraph> {
        let entity_lookup = build_lookup(&self.entities, "entity")?;
        let relation_lookup = build_lookup(&self.relations, "relation")?;
        let mut descriptions = vec![String::new(); self.entities.len()];
        for (id, text) in self.descriptions {
            let idx = *entity_lookup
                .get(&id)
                .ok_or_else(|| Error::Validation(format!("description for unknown entity {id:?}")))?;
            descriptions[idx as usize] = text;
        }
        let resolve = |list: &[(String, String, String)]| -> Result<Vec<Triple>> {
            list.iter()
                .map(|(h, r, t)| {
                    let get_e = |id: &str| {
                        entity_lookup
                            .get(id)
                            .copied()
                            .ok_or_else(|| Error::Validation(format!("unknown entity {id:?}")))
                    };
                    let rel = relation_lookup
                        .get(r)
                        .copied()
                        .ok_or_else(|| Error::Validation(format!("unknown relation {r:?}")))?;
                    Ok(Triple::new(get_e(h)?, rel, get_e(t)?))
                })
                .collect()
        };
        let [train, valid, test] = &self.triples;
        KnowledgeGraph::from_parts(
            self.entities,
            self.relations,
            descriptions,
            resolve(train)?,
            resolve(valid)?,
            resolve(test)?,
        )
    }
}

pub fn compute_stats(kg: &KnowledgeGraph) -> DatasetStats {
    DatasetStats {
        n_entities: kg.entities.len(),
        n_relations: kg.relations.len(),
        n_train: kg.train.len(),
        n_valid: kg.valid.len(),
        n_test: kg.test.len(),
    }
}

fn open_lines(dir: &Path, name: &str) -> Result<(PathBuf, BufReader<File>)> {
    let path = dir.join(name);
    match File::open(&path) {
        Ok(f) => Ok((path, BufReader::with_capacity(1 << 20, f))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(Error::MissingFile(path)),
        Err(e) => Err(Error::io(path, e)),
    }
}

/// Streams a file line by line; `f` receives the 1-based line number.
fn for_each_line(dir: &Path, name: &str, mut f: impl FnMut(usize, &str) -> Result<()>) -> Result<()> {
    let (path, mut reader) = open_lines(dir, name)?;
    let mut buf = String::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        let n = reader.read_line(&mut buf).map_err(|e| Error::io(&path, e))?;
        if n == 0 {
            break;
        }
        line_no += 1;
        let line = buf.strip_suffix('\n').unwrap_or(&buf);
        f(line_no, line)?;
    }
    Ok(())
}

fn check_field(file: &str, line: usize, what: &str, value: &str) -> Result<()> {
    if value.contains(['\t', '\n', '\r']) {
        return Err(Error::parse(file, line, format!("{what} contains a tab or line break")));
    }
    Ok(())
}

fn read_named(dir: &Path, file: &str, what: &str) -> Result<Vec<Named>> {
    let mut out = Vec::new();
    for_each_line(dir, file, |line_no, line| {
        let (id, name) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(file, line_no, "expected 2 tab-separated fields"))?;
        if name.contains('\t') {
            return Err(Error::parse(file, line_no, format!("{what} name contains a tab")));
        }
        check_field(file, line_no, what, name)?;
        check_field(file, line_no, what, id)?;
        if id.is_empty() {
            return Err(Error::parse(file, line_no, format!("empty {what} id")));
        }
        out.push(Named::new(id, name));
        Ok(())
    })?;
    Ok(out)
}

fn lookup_with_lines(items: &[Named], file: &str, what: &str) -> Result<HashMap<String, u32>> {
    if items.len() > u32::MAX as usize {
        return Err(Error::Validation(format!("too many {what} entries")));
    }
    let mut lookup = HashMap::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        if lookup.insert(item.id.clone(), i as u32).is_some() {
            return Err(Error::parse(file, i + 1, format!("duplicate {what} id {:?}", item.id)));
        }
    }
    Ok(lookup)
}

fn read_triples(
    dir: &Path,
    split: Split,
    entities: &HashMap<String, u32>,
    relations: &HashMap<String, u32>,
) -> Result<(Vec<Triple>, Vec<usize>)> {
    let file = split.file_name();
    let mut triples = Vec::new();
    let mut lines = Vec::new();
    for_each_line(dir, file, |line_no, line| {
        let mut fields = line.split('\t');
        let (Some(h), Some(r), Some(t), None) = (fields.next(), fields.next(), fields.next(), fields.next()) else {
            return Err(Error::parse(file, line_no, "expected 3 tab-separated fields"));
        };
        let entity = |id: &str| {
            entities
                .get(id)
                .copied()
                .ok_or_else(|| Error::parse(file, line_no, format!("unknown entity id {id:?}")))
        };
        let relation = relations
            .get(r)
            .copied()
            .ok_or_else(|| Error::parse(file, line_no, format!("unknown relation id {r:?}")))?;
        triples.push(Triple::new(entity(h)?, relation, entity(t)?));
        lines.push(line_no);
        Ok(())
    })?;
    Ok((triples, lines))
}

fn read_descriptions(dir: &Path, entities: &HashMap<String, u32>, n: usize) -> Result<Vec<String>> {
    let mut out = vec![String::new(); n];
    let mut seen = vec![false; n];
    for_each_line(dir, DESCRIPTIONS_FILE, |line_no, line| {
        let (id, text) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(DESCRIPTIONS_FILE, line_no, "expected 2 tab-separated fields"))?;
        if text.contains('\t') {
            return Err(Error::parse(DESCRIPTIONS_FILE, line_no, "description contains a tab"));
        }
        check_field(DESCRIPTIONS_FILE, line_no, "description", text)?;
        let idx = *entities
            .get(id)
            .ok_or_else(|| Error::parse(DESCRIPTIONS_FILE, line_no, format!("unknown entity id {id:?}")))?
            as usize;
        if std::mem::replace(&mut seen[idx], true) {
            return Err(Error::parse(
                DESCRIPTIONS_FILE,
                line_no,
                format!("duplicate description for entity {id:?}"),
            ));
        }
        out[idx] = text.to_string();
        Ok(())
    })?;
    Ok(out)
}

fn join<T>(handle: std::thread::ScopedJoinHandle<'_, Result<T>>) -> Result<T> {
    handle
        .join()
        .unwrap_or_else(|_| Err(Error::Validation("loader thread panicked".into())))
}

/// Loads a dataset directory. Files are read concurrently; the result is
/// independent of thread scheduling.
pub fn load_dataset(dir: impl AsRef<Path>) -> Result<KnowledgeGraph> {
    let dir = dir.as_ref();
    if !dir.is_dir() {
        return Err(Error::MissingFile(dir.to_path_buf()));
    }
    let (entities, relations) = std::thread::scope(|s| {
        let e = s.spawn(|| read_named(dir, ENTITIES_FILE, "entity"));
        let r = s.spawn(|| read_named(dir, RELATIONS_FILE, "relation"));
        (join(e), join(r))
    });
    let (entities, relations) = (entities?, relations?);
    let entity_lookup = lookup_with_lines(&entities, ENTITIES_FILE, "entity")?;
    let relation_lookup = lookup_with_lines(&relations, RELATIONS_FILE, "relation")?;

    let n_entities = entities.len();
    let (train, valid, test, descriptions) = std::thread::scope(|s| {
        let el = &entity_lookup;
        let rl = &relation_lookup;
        let tr = s.spawn(move || read_triples(dir, Split::Train, el, rl));
        let va = s.spawn(move || read_triples(dir, Split::Valid, el, rl));
        let te = s.spawn(move || read_triples(dir, Split::Test, el, rl));
        let de = s.spawn(move || read_descriptions(dir, el, n_entities));
        (join(tr), join(va), join(te), join(de))
    });
    let (train, train_lines) = train?;
    let (valid, valid_lines) = valid?;
    let (test, test_lines) = test?;
    let descriptions = descriptions?;

    let kg = KnowledgeGraph {
        entities,
        relations,
        descriptions,
        train,
        valid,
        test,
        entity_lookup,
        relation_lookup,
    };
    let lines = SplitLines {
        train: train_lines,
        valid: valid_lines,
        test: test_lines,
    };
    check_disjoint(&kg, Some(&lines))?;
    Ok(kg)
}

fn reject_unwritable(file: &str, row: usize, what: &str, value: &str) -> Result<()> {
    if value.contains(['\t', '\n', '\r']) {
        return Err(Error::Validation(format!(
            "cannot write {file} row {row}: {what} contains a tab or line break"
        )));
    }
    Ok(())
}

fn write_file(dir: &Path, name: &str, body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
    let mut w = BufWriter::with_capacity(1 << 20, file);
    body(&mut w).map_err(|e| Error::io(&path, e))?;
    w.flush().map_err(|e| Error::io(&path, e))
}

/// Validates that every field is representable in the TSV layout.
pub fn check_writable(kg: &KnowledgeGraph) -> Result<()> {
    for (i, e) in kg.entities.iter().enumerate() {
        reject_unwritable(ENTITIES_FILE, i + 1, "entity id", &e.id)?;
        reject_unwritable(ENTITIES_FILE, i + 1, "entity name", &e.name)?;
        reject_unwritable(DESCRIPTIONS_FILE, i + 1, "description", &kg.descriptions[i])?;
    }
    for (i, r) in kg.relations.iter().enumerate() {
        reject_unwritable(RELATIONS_FILE, i + 1, "relation id", &r.id)?;
        reject_unwritable(RELATIONS_FILE, i + 1, "relation name", &r.name)?;
    }
    Ok(())
}

/// Writes the six dataset files. Output bytes depend only on `kg`.
pub fn write_dataset(kg: &KnowledgeGraph, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    check_writable(kg)?;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    write_file(dir, ENTITIES_FILE, |w| {
        for e in &kg.entities {
            writeln!(w, "{}\t{}", e.id, e.name)?;
        }
        Ok(())
    })?;
    write_file(dir, RELATIONS_FILE, |w| {
        for r in &kg.relations {
            writeln!(w, "{}\t{}", r.id, r.name)?;
        }
        Ok(())
    })?;
    write_file(dir, DESCRIPTIONS_FILE, |w| {
        for (e, d) in kg.entities.iter().zip(&kg.descriptions) {
            writeln!(w, "{}\t{}", e.id, d)?;
        }
        Ok(())
    })?;
    for split in Split::ALL {
        write_file(dir, split.file_name(), |w| {
            for t in kg.split(split) {
                writeln!(
                    w,
                    "{}\t{}\t{}",
                    kg.entities[t.head as usize].id,
                    kg.relations[t.relation as usize].id,
                    kg.entities[t.tail as usize].id
                )?;
            }
            Ok(())
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> KnowledgeGraph {
        KnowledgeGraphBuilder::new()
            .entity("e1", "alpha")
            .entity("e2", "beta")
            .relation("r1", "likes")
            .description("e1", "alpha likes beta")
            .triple(Split::Train, "e1", "r1", "e2")
            .build()
            .unwrap()
    }

    #[test]
    fn missing_description_defaults_to_empty() {
        let kg = small();
        assert_eq!(kg.description(1), "");
        assert_eq!(kg.description(0), "alpha likes beta");
    }

    #[test]
    fn duplicate_entity_rejected() {
        let err = KnowledgeGraphBuilder::new()
            .entity("e1", "a")
            .entity("e1", "b")
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err}");
    }

    #[test]
    fn overlapping_splits_rejected() {
        let err = KnowledgeGraphBuilder::new()
            .entity("e1", "a")
            .entity("e2", "b")
            .relation("r", "r")
            .triple(Split::Train, "e1", "r", "e2")
            .triple(Split::Test, "e1", "r", "e2")
            .build()
            .unwrap_err();
        assert!(err.to_string().contains("also appears"), "{err}");
    }

    #[test]
    fn duplicates_within_a_split_are_kept() {
        let kg = KnowledgeGraphBuilder::new()
            .entity("e1", "a")
            .entity("e2", "b")
            .relation("r", "r")
            .triple(Split::Train, "e1", "r", "e2")
            .triple(Split::Train, "e1", "r", "e2")
            .build()
            .unwrap();
        assert_eq!(kg.stats().n_train, 2);
    }

    #[test]
    fn empty_graph_has_zero_stats() {
        let kg = KnowledgeGraphBuilder::new().build().unwrap();
        assert_eq!(compute_stats(&kg), DatasetStats::default());
    }

    #[test]
    fn write_rejects_tab_in_name() {
        let kg = small().with_entity_names(vec!["a\tb".into(), "c".into()]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let err = write_dataset(&kg, dir.path()).unwrap_err();
        assert!(err.to_string().contains("tab"), "{err}");
        assert!(!dir.path().join(ENTITIES_FILE).exists());
    }

    #[test]
    fn missing_file_names_the_file() {
        let dir = tempfile::tempdir().unwrap();
        write_dataset(&small(), dir.path()).unwrap();
        std::fs::remove_file(dir.path().join(VALID_FILE)).unwrap();
        let err = load_dataset(dir.path()).unwrap_err();
        assert!(
            matches!(&err, Error::MissingFile(p) if p.ends_with(VALID_FILE)),
            "{err}"
        );
    }

    #[test]
    fn unknown_id_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        write_dataset(&small(), dir.path()).unwrap();
        std::fs::write(dir.path().join(TEST_FILE), "e1\tr1\te2\ne1\tr1\te9\n").unwrap();
        let err = load_dataset(dir.path()).unwrap_err();
        match err {
            Error::Parse { file, line, message } => {
                assert_eq!(file, TEST_FILE);
                assert_eq!(line, 2);
                assert!(message.contains("e9"));
            }
            other => panic!("unexpected {other}"),
        }
    }
}
