#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

use kgsynth::kg::{KnowledgeGraph, Named, Split, Triple};
use kgsynth::rng::rng_from;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/bernoulli")
}

pub fn fixture() -> KnowledgeGraph {
    kgsynth::load_dataset(fixture_dir()).expect("bundled fixture loads")
}

/// Random graph whose names never nest inside one another: entity `i` is
/// `k{i}z` or the two-word `p{i}z q{i}z`, and descriptions mention random
/// entity names between filler words.
pub fn random_kg(seed: u64, n_entities: usize, n_relations: usize, n_triples: usize) -> KnowledgeGraph {
    let mut rng = rng_from(seed);
    let entities: Vec<Named> = (0..n_entities)
        .map(|i| {
            let name = if rng.gen_bool(0.3) {
                format!("p{i}z q{i}z")
            } else {
                format!("k{i}z")
            };
            Named::new(format!("E{i}"), name)
        })
        .collect();
    let relations: Vec<Named> = (0..n_relations)
        .map(|i| Named::new(format!("R{i}"), format!("rel{i}z")))
        .collect();
    let filler = ["the", "of", "a", "near", "with", "and", ",", "(", ")", "-"];
    let descriptions: Vec<String> = (0..n_entities)
        .map(|_| {
            let n = rng.gen_range(0..8);
            (0..n)
                .map(|_| {
                    if rng.gen_bool(0.4) {
                        entities[rng.gen_range(0..n_entities)].name.clone()
                    } else {
                        filler.choose(&mut rng).unwrap().to_string()
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let mut triples = std::collections::HashSet::new();
    let mut guard = 0;
    while triples.len() < n_triples && guard < n_triples * 50 {
        guard += 1;
        let t = Triple::new(
            rng.gen_range(0..n_entities as u32),
            rng.gen_range(0..n_relations as u32),
            rng.gen_range(0..n_entities as u32),
        );
        triples.insert(t);
    }
    let mut triples: Vec<Triple> = triples.into_iter().collect();
    triples.sort_by_key(|t| (t.head, t.relation, t.tail));
    triples.shuffle(&mut rng);
    let n_valid = triples.len() / 10;
    let test = triples.split_off(triples.len() - n_valid);
    let valid = triples.split_off(triples.len() - n_valid);
    KnowledgeGraph::from_parts(entities, relations, descriptions, triples, valid, test).unwrap()
}

/// Sorted (head id, relation id, tail id) strings of one split.
pub fn id_triples(kg: &KnowledgeGraph, split: Split) -> Vec<(String, String, String)> {
    let mut v: Vec<_> = kg
        .split(split)
        .iter()
        .map(|t| {
            (
                kg.entity(t.head).id.clone(),
                kg.relation(t.relation).id.clone(),
                kg.entity(t.tail).id.clone(),
            )
        })
        .collect();
    v.sort();
    v
}

/// Checks a written variant against its original using only the files:
/// ids and per-split id triples are unchanged, `mapping.tsv` accounts for
/// every changed name or description, and mapping the original
/// (head name, relation name, tail name) triples through the recorded name
/// bijections gives exactly the variant's.
pub fn verify_variant_files(original_dir: &std::path::Path, variant_dir: &std::path::Path) -> Result<(), String> {
    use kgsynth::transform::read_mapping;
    use std::collections::HashMap;

    let orig = kgsynth::load_dataset(original_dir).map_err(|e| e.to_string())?;
    let var = kgsynth::load_dataset(variant_dir).map_err(|e| e.to_string())?;
    let ids = |kg: &KnowledgeGraph| -> (Vec<String>, Vec<String>) {
        (
            kg.entities().iter().map(|e| e.id.clone()).collect(),
            kg.relations().iter().map(|r| r.id.clone()).collect(),
        )
    };
    if ids(&orig) != ids(&var) {
        return Err("entity or relation ids differ".into());
    }
    for s in Split::ALL {
        if id_triples(&orig, s) != id_triples(&var, s) {
            return Err(format!("{s} triples differ"));
        }
    }
    let rows = read_mapping(variant_dir.join(kgsynth::transform::MAPPING_FILE)).map_err(|e| e.to_string())?;
    let mut entity_name: Vec<String> = orig.entities().iter().map(|e| e.name.clone()).collect();
    let mut relation_name: Vec<String> = orig.relations().iter().map(|r| r.name.clone()).collect();
    let mut description: Vec<Option<String>> = vec![None; orig.n_entities()];
    let mut seen: HashMap<(String, String), usize> = HashMap::new();
    for row in &rows {
        *seen.entry((row.kind.clone(), row.id.clone())).or_insert(0) += 1;
        match row.kind.as_str() {
            "entity" => {
                let i = orig.entity_index(&row.id).ok_or("mapping names an unknown entity")? as usize;
                if orig.entities()[i].name != row.old_text {
                    return Err(format!("old name mismatch for {}", row.id));
                }
                entity_name[i] = row.new_text.clone();
            }
            "relation" => {
                let i = orig
                    .relation_index(&row.id)
                    .ok_or("mapping names an unknown relation")? as usize;
                if orig.relations()[i].name != row.old_text {
                    return Err(format!("old relation name mismatch for {}", row.id));
                }
                relation_name[i] = row.new_text.clone();
            }
            "description" | "description-from" => {
                let i = orig.entity_index(&row.id).ok_or("mapping names an unknown entity")? as usize;
                if orig.descriptions()[i] != row.old_text {
                    return Err(format!("old description mismatch for {}", row.id));
                }
                description[i] = Some(if row.kind == "description" {
                    row.new_text.clone()
                } else {
                    let j = orig.entity_index(&row.new_text).ok_or("unknown description source")?;
                    orig.description(j).to_string()
                });
            }
            other => return Err(format!("unknown mapping row kind {other:?}")),
        }
    }
    if let Some(((k, id), _)) = seen.iter().find(|(_, &n)| n > 1) {
        return Err(format!("{k} {id} mapped twice"));
    }
    for (i, e) in var.entities().iter().enumerate() {
        if e.name != entity_name[i] {
            return Err(format!("entity {} name not explained by the mapping", e.id));
        }
    }
    for (i, r) in var.relations().iter().enumerate() {
        if r.name != relation_name[i] {
            return Err(format!("relation {} name not explained by the mapping", r.id));
        }
    }
    for (i, d) in description.iter().enumerate() {
        if let Some(d) = d {
            if var.descriptions()[i] != *d {
                return Err(format!(
                    "description of {} not explained by the mapping",
                    orig.entities()[i].id
                ));
            }
        }
    }
    for s in Split::ALL {
        let mapped = |kg: &KnowledgeGraph, e: &dyn Fn(u32) -> String, r: &dyn Fn(u32) -> String| {
            let mut v: Vec<(String, String, String)> = kg
                .split(s)
                .iter()
                .map(|t| (e(t.head), r(t.relation), e(t.tail)))
                .collect();
            v.sort();
            v
        };
        let through = mapped(&orig, &|i| entity_name[i as usize].clone(), &|i| {
            relation_name[i as usize].clone()
        });
        let actual = mapped(&var, &|i| var.entity(i).name.clone(), &|i| var.relation(i).name.clone());
        if through != actual {
            return Err(format!("{s} name triples are not the image of the original"));
        }
    }
    Ok(())
}
