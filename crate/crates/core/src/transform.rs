//! Structure-preserving perturbations of a knowledge graph's text.
//!
//! Every recipe leaves ids and triples untouched and only rewrites the name
//! tables and descriptions:
//!
//! - **virtual world**: entity names are deranged, relation names are
//!   deranged subject to co-occurrence constraints, and entity mentions
//!   inside descriptions follow the new names;
//! - **anonymized entities**: names become unique random strings from a
//!   character unigram model fitted on the original names, and mentions
//!   follow;
//! - **inconsistent descriptions**: descriptions are deranged on their own,
//!   or travel with shuffled entity names without mention rewriting;
//! - **fully anonymized**: descriptions become unique random strings,
//!   optionally together with anonymized names.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::derangement::{bipartite_derange, build_removed_edges, derange, RemovedEdges};
use crate::error::{Error, Result};
use crate::kg::{write_dataset, KnowledgeGraph};
use crate::rewriter::{rewrite_descriptions, NameMap};
use crate::rng::derive_seed;
use crate::textgen::{fit_unigram, sample_unique_into, UnigramModel};

pub const MAPPING_FILE: &str = "mapping.tsv";
pub const RECIPE_FILE: &str = "recipe.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecipeKind {
    VirtualWorld,
    AnonymizedEntities,
    InconsistentDescriptions,
    FullyAnonymized,
}

impl RecipeKind {
    pub const ALL: [RecipeKind; 4] = [
        RecipeKind::VirtualWorld,
        RecipeKind::AnonymizedEntities,
        RecipeKind::InconsistentDescriptions,
        RecipeKind::FullyAnonymized,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RecipeKind::VirtualWorld => "virtual_world",
            RecipeKind::AnonymizedEntities => "anonymized_entities",
            RecipeKind::InconsistentDescriptions => "inconsistent_descriptions",
            RecipeKind::FullyAnonymized => "fully_anonymized",
        }
    }

    fn label_prefix(self) -> &'static str {
        match self {
            RecipeKind::VirtualWorld => "vw",
            RecipeKind::AnonymizedEntities => "anon",
            RecipeKind::InconsistentDescriptions => "incons",
            RecipeKind::FullyAnonymized => "fullanon",
        }
    }
}

impl fmt::Display for RecipeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RecipeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_");
        RecipeKind::ALL.into_iter().find(|k| k.as_str() == norm).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown recipe {s:?} (expected virtual-world, anonymized-entities, \
                     inconsistent-descriptions or fully-anonymized)"
            ))
        })
    }
}

/// Which text fields a recipe touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Targets {
    pub entities: bool,
    pub relations: bool,
    pub descriptions: bool,
}

impl Targets {
    pub const NONE: Targets = Targets {
        entities: false,
        relations: false,
        descriptions: false,
    };
    pub const E: Targets = Targets {
        entities: true,
        ..Targets::NONE
    };
    pub const R: Targets = Targets {
        relations: true,
        ..Targets::NONE
    };
    pub const D: Targets = Targets {
        descriptions: true,
        ..Targets::NONE
    };

    pub fn union(self, other: Targets) -> Targets {
        Targets {
            entities: self.entities || other.entities,
            relations: self.relations || other.relations,
            descriptions: self.descriptions || other.descriptions,
        }
    }

    pub fn is_empty(self) -> bool {
        self == Targets::NONE
    }

    /// Bit set: entities = 1, relations = 2, descriptions = 4.
    pub fn bits(self) -> u32 {
        u32::from(self.entities) | u32::from(self.relations) << 1 | u32::from(self.descriptions) << 2
    }

    pub fn from_bits(bits: u32) -> Result<Targets> {
        if bits & !0b111 != 0 {
            return Err(Error::InvalidArgument(format!("unknown target bits {bits:#x}")));
        }
        Ok(Targets {
            entities: bits & 1 != 0,
            relations: bits & 2 != 0,
            descriptions: bits & 4 != 0,
        })
    }

    /// Short form used in variant labels: a subset of "erd" in that order.
    pub fn letters(self) -> String {
        let mut s = String::new();
        if self.entities {
            s.push('e');
        }
        if self.relations {
            s.push('r');
        }
        if self.descriptions {
            s.push('d');
        }
        s
    }
}

impl fmt::Display for Targets {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.entities {
            parts.push("entities");
        }
        if self.relations {
            parts.push("relations");
        }
        if self.descriptions {
            parts.push("descriptions");
        }
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Targets {
    type Err = Error;

    /// Accepts comma-separated names (`entities,relations`) or letters (`er`).
    fn from_str(s: &str) -> Result<Self> {
        let mut t = Targets::NONE;
        let s = s.trim();
        if s.is_empty() || s == "none" {
            return Ok(t);
        }
        let parts: Vec<&str> = if s.contains(',') || s.len() > 3 {
            s.split(',').map(str::trim).collect()
        } else {
            s.split_inclusive(|_: char| true).collect()
        };
        for p in parts {
            match p {
                "e" | "E" | "entity" | "entities" => t.entities = true,
                "r" | "R" | "relation" | "relations" => t.relations = true,
                "d" | "D" | "description" | "descriptions" => t.descriptions = true,
                other => {
                    return Err(Error::InvalidArgument(format!("unknown target {other:?}")));
                }
            }
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TransformRecipe {
    pub kind: RecipeKind,
    pub targets: Targets,
    pub seed: u64,
}

impl TransformRecipe {
    pub fn new(kind: RecipeKind, targets: Targets, seed: u64) -> Result<Self> {
        let recipe = TransformRecipe { kind, targets, seed };
        recipe.validate()?;
        Ok(recipe)
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            RecipeKind::VirtualWorld | RecipeKind::AnonymizedEntities => {
                if self.targets.descriptions || self.targets.is_empty() {
                    return Err(Error::InvalidArgument(format!(
                        "{} targets entities and/or relations, got {{{}}}",
                        self.kind, self.targets
                    )));
                }
            }
            RecipeKind::InconsistentDescriptions | RecipeKind::FullyAnonymized => {
                if !self.targets.descriptions {
                    return Err(Error::InvalidArgument(format!(
                        "{} must target descriptions, got {{{}}}",
                        self.kind, self.targets
                    )));
                }
            }
        }
        Ok(())
    }

    /// Suite label such as `vw-er` or `incons-ed`.
    pub fn label(&self) -> String {
        format!("{}-{}", self.kind.label_prefix(), self.targets.letters())
    }

    pub fn manifest(&self) -> String {
        format!("kind={}\ntargets={}\nseed={}\n", self.kind, self.targets, self.seed)
    }
}

/// Where an entity's new description came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DescriptionSource {
    /// The original description of another entity.
    Entity(u32),
    /// Fresh text.
    Literal(String),
}

/// Record of what a recipe did. Populated fields are the targeted ones;
/// `None` means identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformMapping {
    pub recipe: TransformRecipe,
    /// New name of each entity, by entity index.
    pub entity_map: Option<Vec<String>>,
    /// For shuffles: entity `i` took the name of entity `entity_source[i]`.
    pub entity_source: Option<Vec<usize>>,
    pub relation_map: Option<Vec<String>>,
    pub relation_source: Option<Vec<usize>>,
    pub description_map: Option<Vec<DescriptionSource>>,
}

impl TransformMapping {
    fn empty(recipe: TransformRecipe) -> Self {
        TransformMapping {
            recipe,
            entity_map: None,
            entity_source: None,
            relation_map: None,
            relation_source: None,
            description_map: None,
        }
    }

    /// `kind<TAB>id<TAB>old_text<TAB>new_text` rows. Kinds: `entity`,
    /// `relation`, `description` (new text is a literal) and
    /// `description-from` (new text is the id of the entity whose original
    /// description was moved here).
    pub fn write_tsv(&self, original: &KnowledgeGraph, out: &mut impl std::io::Write) -> std::io::Result<()> {
        if let Some(names) = &self.entity_map {
            for (e, new) in original.entities().iter().zip(names) {
                writeln!(out, "entity\t{}\t{}\t{}", e.id, e.name, new)?;
            }
        }
        if let Some(names) = &self.relation_map {
            for (r, new) in original.relations().iter().zip(names) {
                writeln!(out, "relation\t{}\t{}\t{}", r.id, r.name, new)?;
            }
        }
        if let Some(descs) = &self.description_map {
            for (i, src) in descs.iter().enumerate() {
                let e = &original.entities()[i];
                let old = &original.descriptions()[i];
                match src {
                    DescriptionSource::Entity(j) => {
                        writeln!(out, "description-from\t{}\t{}\t{}", e.id, old, original.entity(*j).id)?
                    }
                    DescriptionSource::Literal(text) => writeln!(out, "description\t{}\t{}\t{}", e.id, old, text)?,
                }
            }
        }
        Ok(())
    }
}

/// One parsed `mapping.tsv` row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingRow {
    pub kind: String,
    pub id: String,
    pub old_text: String,
    pub new_text: String,
}

pub fn read_mapping(path: impl AsRef<Path>) -> Result<Vec<MappingRow>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 4 {
                return Err(Error::parse(MAPPING_FILE, i + 1, "expected 4 tab-separated fields"));
            }
            Ok(MappingRow {
                kind: f[0].to_string(),
                id: f[1].to_string(),
                old_text: f[2].to_string(),
                new_text: f[3].to_string(),
            })
        })
        .collect()
}

fn seed_for(recipe: &TransformRecipe, field: &str) -> u64 {
    derive_seed(recipe.seed, &[recipe.kind.as_str(), field])
}

fn entity_names(kg: &KnowledgeGraph) -> Vec<String> {
    kg.entities().iter().map(|e| e.name.clone()).collect()
}

/// Entity i takes the name of entity `source[i]`, never its own name.
fn shuffle_entity_names(kg: &KnowledgeGraph, seed: u64) -> Result<(Vec<String>, Vec<usize>)> {
    let names = entity_names(kg);
    let d = derange(&names, seed).map_err(|e| e.context("deranging entity names"))?;
    Ok((d.res, d.permutation))
}

/// Relation i takes the name of relation `source[i]`. Relations that share
/// a (head, tail) pair anywhere in the graph never take each other's name,
/// and no relation receives a name equal to its own.
fn shuffle_relation_names(kg: &KnowledgeGraph, seed: u64) -> Result<(Vec<String>, Vec<usize>)> {
    let mut removed: RemovedEdges<u32> = build_removed_edges(kg);
    let rels = kg.relations();
    let mut by_name: std::collections::HashMap<&str, Vec<u32>> = Default::default();
    for (i, r) in rels.iter().enumerate() {
        by_name.entry(r.name.as_str()).or_default().push(i as u32);
    }
    for group in by_name.values().filter(|g| g.len() > 1) {
        for &a in group {
            for &b in group {
                removed.insert(a, b);
            }
        }
    }
    let indices: Vec<u32> = (0..rels.len() as u32).collect();
    let d = bipartite_derange(&indices, &removed, seed).map_err(|e| e.context("deranging relation names"))?;
    let names = d.permutation.iter().map(|&j| rels[j].name.clone()).collect();
    Ok((names, d.permutation))
}

/// Original entity name → new name, skipping empty names. When two
/// entities share a name the first one in entity order decides its
/// replacement.
fn mention_map(kg: &KnowledgeGraph, new_names: &[String]) -> NameMap {
    kg.entities()
        .iter()
        .zip(new_names)
        .filter(|(e, _)| !e.name.is_empty())
        .map(|(e, new)| (e.name.clone(), new.clone()))
        .collect()
}

fn fit_name_model(kg: &KnowledgeGraph) -> Result<UnigramModel> {
    let corpus: Vec<&str> = kg
        .entities()
        .iter()
        .map(|e| e.name.as_str())
        .chain(kg.relations().iter().map(|r| r.name.as_str()))
        .collect();
    fit_unigram(&corpus).map_err(|e| e.context("fitting the name model"))
}

fn original_surface_forms(kg: &KnowledgeGraph) -> HashSet<String> {
    kg.entities()
        .iter()
        .map(|e| e.name.clone())
        .chain(kg.relations().iter().map(|r| r.name.clone()))
        .chain(kg.descriptions().iter().cloned())
        .collect()
}

/// Unique random strings for the targeted fields, drawn in the order
/// entities, relations, descriptions from one shared uniqueness scope that
/// starts out containing every original name and description.
struct RandomText {
    entities: Option<Vec<String>>,
    relations: Option<Vec<String>>,
    descriptions: Option<Vec<String>>,
}

fn draw_random_text(kg: &KnowledgeGraph, recipe: &TransformRecipe) -> Result<RandomText> {
    let model = fit_name_model(kg)?;
    let forbidden = original_surface_forms(kg);
    let mut taken = HashSet::new();
    let mut draw = |wanted: bool, n: usize, field: &str| -> Result<Option<Vec<String>>> {
        if !wanted {
            return Ok(None);
        }
        sample_unique_into(&model, n, &forbidden, &mut taken, seed_for(recipe, field))
            .map(Some)
            .map_err(|e| e.context(format!("drawing random {field}")))
    };
    Ok(RandomText {
        entities: draw(recipe.targets.entities, kg.n_entities(), "entities")?,
        relations: draw(recipe.targets.relations, kg.n_relations(), "relations")?,
        descriptions: draw(recipe.targets.descriptions, kg.n_entities(), "descriptions")?,
    })
}

/// Swaps entity and/or relation names; descriptions mention the new names.
pub fn virtual_world(kg: &KnowledgeGraph, targets: Targets, seed: u64) -> Result<(KnowledgeGraph, TransformMapping)> {
    let recipe = TransformRecipe::new(RecipeKind::VirtualWorld, targets, seed)?;
    let ctx = |e: Error| e.context(recipe.kind.as_str());
    let mut out = kg.clone();
    let mut mapping = TransformMapping::empty(recipe);
    if targets.entities {
        let (names, source) = shuffle_entity_names(kg, seed_for(&recipe, "entities")).map_err(ctx)?;
        let descriptions = rewrite_descriptions(kg, &mention_map(kg, &names)).map_err(ctx)?;
        out = out.with_entity_names(names.clone())?.with_descriptions(descriptions)?;
        mapping.entity_map = Some(names);
        mapping.entity_source = Some(source);
    }
    if targets.relations {
        let (names, source) = shuffle_relation_names(kg, seed_for(&recipe, "relations")).map_err(ctx)?;
        out = out.with_relation_names(names.clone())?;
        mapping.relation_map = Some(names);
        mapping.relation_source = Some(source);
    }
    Ok((out, mapping))
}

/// Replaces entity and/or relation names with unique random strings;
/// descriptions mention the new entity names.
pub fn anonymized_entities(
    kg: &KnowledgeGraph,
    targets: Targets,
    seed: u64,
) -> Result<(KnowledgeGraph, TransformMapping)> {
    let recipe = TransformRecipe::new(RecipeKind::AnonymizedEntities, targets, seed)?;
    let ctx = |e: Error| e.context(recipe.kind.as_str());
    let random = draw_random_text(kg, &recipe).map_err(ctx)?;
    let mut out = kg.clone();
    let mut mapping = TransformMapping::empty(recipe);
    if let Some(names) = random.entities {
        let descriptions = rewrite_descriptions(kg, &mention_map(kg, &names)).map_err(ctx)?;
        out = out.with_entity_names(names.clone())?.with_descriptions(descriptions)?;
        mapping.entity_map = Some(names);
    }
    if let Some(names) = random.relations {
        out = out.with_relation_names(names.clone())?;
        mapping.relation_map = Some(names);
    }
    Ok((out, mapping))
}

/// Breaks the link between entities and their descriptions.
///
/// With `also_shuffle` empty, descriptions are deranged by index and names
/// stay. With entities in `also_shuffle`, names are deranged as in the
/// virtual world and each description travels with its name; mentions
/// inside descriptions are left as they were. Relations in `also_shuffle`
/// are shuffled as in the virtual world.
pub fn inconsistent_descriptions(
    kg: &KnowledgeGraph,
    also_shuffle: Targets,
    seed: u64,
) -> Result<(KnowledgeGraph, TransformMapping)> {
    let recipe = TransformRecipe::new(
        RecipeKind::InconsistentDescriptions,
        also_shuffle.union(Targets::D),
        seed,
    )?;
    let ctx = |e: Error| e.context(recipe.kind.as_str());
    let mut out = kg.clone();
    let mut mapping = TransformMapping::empty(recipe);
    let source = if recipe.targets.entities {
        let (names, source) = shuffle_entity_names(kg, seed_for(&recipe, "entities")).map_err(ctx)?;
        out = out.with_entity_names(names.clone())?;
        mapping.entity_map = Some(names);
        mapping.entity_source = Some(source.clone());
        source
    } else {
        let indices: Vec<u32> = (0..kg.n_entities() as u32).collect();
        derange(&indices, seed_for(&recipe, "descriptions"))
            .map_err(|e| ctx(e.context("deranging descriptions")))?
            .permutation
    };
    let descriptions = source.iter().map(|&j| kg.descriptions()[j].clone()).collect();
    out = out.with_descriptions(descriptions)?;
    mapping.description_map = Some(source.iter().map(|&j| DescriptionSource::Entity(j as u32)).collect());
    if recipe.targets.relations {
        let (names, source) = shuffle_relation_names(kg, seed_for(&recipe, "relations")).map_err(ctx)?;
        out = out.with_relation_names(names.clone())?;
        mapping.relation_map = Some(names);
        mapping.relation_source = Some(source);
    }
    Ok((out, mapping))
}

/// Replaces every description with a unique random string, optionally
/// anonymizing entity and/or relation names too. Descriptions carry no
/// mentions afterwards, so nothing is rewritten.
pub fn fully_anonymized(
    kg: &KnowledgeGraph,
    also_anonymize: Targets,
    seed: u64,
) -> Result<(KnowledgeGraph, TransformMapping)> {
    let recipe = TransformRecipe::new(RecipeKind::FullyAnonymized, also_anonymize.union(Targets::D), seed)?;
    let random = draw_random_text(kg, &recipe).map_err(|e| e.context(recipe.kind.as_str()))?;
    let mut out = kg.clone();
    let mut mapping = TransformMapping::empty(recipe);
    if let Some(names) = random.entities {
        out = out.with_entity_names(names.clone())?;
        mapping.entity_map = Some(names);
    }
    if let Some(names) = random.relations {
        out = out.with_relation_names(names.clone())?;
        mapping.relation_map = Some(names);
    }
    let descriptions = random.descriptions.expect("descriptions are always targeted");
    out = out.with_descriptions(descriptions.clone())?;
    mapping.description_map = Some(descriptions.into_iter().map(DescriptionSource::Literal).collect());
    Ok((out, mapping))
}

/// Runs the recipe described by `recipe`.
pub fn apply_recipe(kg: &KnowledgeGraph, recipe: &TransformRecipe) -> Result<(KnowledgeGraph, TransformMapping)> {
    recipe.validate()?;
    let also = Targets {
        descriptions: false,
        ..recipe.targets
    };
    match recipe.kind {
        RecipeKind::VirtualWorld => virtual_world(kg, recipe.targets, recipe.seed),
        RecipeKind::AnonymizedEntities => anonymized_entities(kg, recipe.targets, recipe.seed),
        RecipeKind::InconsistentDescriptions => inconsistent_descriptions(kg, also, recipe.seed),
        RecipeKind::FullyAnonymized => fully_anonymized(kg, also, recipe.seed),
    }
}

/// Writes a transformed dataset together with `mapping.tsv` and `recipe.txt`.
pub fn write_variant(
    original: &KnowledgeGraph,
    variant: &KnowledgeGraph,
    mapping: &TransformMapping,
    dir: impl AsRef<Path>,
) -> Result<()> {
    let dir = dir.as_ref();
    write_dataset(variant, dir)?;
    let path = dir.join(MAPPING_FILE);
    let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    let mut w = std::io::BufWriter::new(file);
    mapping
        .write_tsv(original, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(&path, e))?;
    let path = dir.join(RECIPE_FILE);
    fs::write(&path, mapping.recipe.manifest()).map_err(|e| Error::io(&path, e))
}

/// A suite member: the untouched base dataset or one recipe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteEntry {
    Base,
    Recipe(RecipeKind, Targets),
}

impl SuiteEntry {
    pub fn label(&self) -> String {
        match self {
            SuiteEntry::Base => "base".into(),
            SuiteEntry::Recipe(kind, targets) => format!("{}-{}", kind.label_prefix(), targets.letters()),
        }
    }
}

impl FromStr for SuiteEntry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "base" {
            return Ok(SuiteEntry::Base);
        }
        let bad = || Error::InvalidArgument(format!("unknown variant label {s:?}"));
        let (prefix, letters) = s.split_once('-').ok_or_else(bad)?;
        let kind = RecipeKind::ALL
            .into_iter()
            .find(|k| k.label_prefix() == prefix)
            .ok_or_else(bad)?;
        if letters.is_empty() || !letters.chars().all(|c| "erd".contains(c)) {
            return Err(bad());
        }
        let targets: Targets = letters.parse()?;
        TransformRecipe::new(kind, targets, 0)?;
        Ok(SuiteEntry::Recipe(kind, targets))
    }
}

/// The 13 default configurations: base, virtual world and anonymized
/// entities over {E, R, ER}, and inconsistent / fully anonymized
/// descriptions over {D, ED, ERD}.
pub fn default_suite() -> Vec<SuiteEntry> {
    let names = [Targets::E, Targets::R, Targets::E.union(Targets::R)];
    let descs = [
        Targets::D,
        Targets::E.union(Targets::D),
        Targets::E.union(Targets::R).union(Targets::D),
    ];
    let mut out = vec![SuiteEntry::Base];
    for kind in [RecipeKind::VirtualWorld, RecipeKind::AnonymizedEntities] {
        out.extend(names.iter().map(|&t| SuiteEntry::Recipe(kind, t)));
    }
    for kind in [RecipeKind::InconsistentDescriptions, RecipeKind::FullyAnonymized] {
        out.extend(descs.iter().map(|&t| SuiteEntry::Recipe(kind, t)));
    }
    out
}

#[derive(Debug)]
pub struct VariantOutcome {
    pub label: String,
    pub dir: PathBuf,
    pub result: Result<()>,
}

/// Generates and writes each entry to `<out>/<label>/`. A failing variant
/// is reported in its outcome and does not stop the others.
pub fn generate_suite(
    kg: &KnowledgeGraph,
    seed: u64,
    out: impl AsRef<Path>,
    entries: &[SuiteEntry],
) -> Vec<VariantOutcome> {
    let out = out.as_ref();
    entries
        .iter()
        .map(|entry| {
            let label = entry.label();
            let dir = out.join(&label);
            let result = match *entry {
                SuiteEntry::Base => write_dataset(kg, &dir).and_then(|_| {
                    let path = dir.join(MAPPING_FILE);
                    fs::write(&path, "").map_err(|e| Error::io(&path, e))?;
                    let path = dir.join(RECIPE_FILE);
                    fs::write(&path, format!("kind=base\ntargets=\nseed={seed}\n")).map_err(|e| Error::io(&path, e))
                }),
                SuiteEntry::Recipe(kind, targets) => TransformRecipe::new(kind, targets, seed)
                    .and_then(|recipe| apply_recipe(kg, &recipe))
                    .and_then(|(variant, mapping)| write_variant(kg, &variant, &mapping, &dir)),
            };
            VariantOutcome { label, dir, result }
        })
        .collect()
}
