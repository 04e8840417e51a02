mod common;

use kgsynth::eval::{Direction, KnownAnswers, Query, RankingMode};
use kgsynth::kg::{KnowledgeGraph, KnowledgeGraphBuilder, Split, Triple};
use kgsynth::rng::rng_from;
use kgsynth::transe::{
    evaluate_model, init_model, read_checkpoint, score_triple, train, train_with_log, write_checkpoint, EmbeddingModel,
    Hyperparams, Norm,
};
use kgsynth::transform::{apply_recipe, default_suite, SuiteEntry, TransformRecipe};
use rand::Rng;

fn random_vectors(rng: &mut impl Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect()
}

#[test]
#[allow(clippy::needless_range_loop)]
fn score_matches_naive_distance() {
    let mut rng = rng_from(1);
    for norm in [Norm::L1, Norm::L2] {
        let e = random_vectors(&mut rng, 4, 7);
        let r = random_vectors(&mut rng, 2, 7);
        let m = EmbeddingModel::from_vectors(&e, &r, norm, 1.0).unwrap();
        for h in 0..4 {
            for rel in 0..2 {
                for t in 0..4 {
                    let mut acc = 0.0;
                    for k in 0..7 {
                        let x: f64 = e[h][k] + r[rel][k] - e[t][k];
                        acc += if norm == Norm::L1 { x.abs() } else { x * x };
                    }
                    let d = if norm == Norm::L1 { acc } else { acc.sqrt() };
                    let s = m.score(&Triple::new(h as u32, rel as u32, t as u32));
                    assert!((s + d).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn score_by_id_rejects_unknown() {
    let kg = common::fixture();
    let m = init_model(&kg, 4, 0).unwrap();
    assert!(score_triple(&m, &kg, "e01", "r1", "e04").is_ok());
    assert!(score_triple(&m, &kg, "e01", "nope", "e04").is_err());
    assert!(score_triple(&m, &kg, "zz", "r1", "e04").is_err());
}

#[test]
fn gradient_matches_central_differences() {
    for (i, err) in common::oracle::gradient_probe_errors(100, 99).iter().enumerate() {
        assert!(*err <= 1e-4, "probe {i}: relative error {err}");
    }
}

#[test]
fn init_is_deterministic_and_unit_norm() {
    let kg = common::fixture();
    assert_eq!(init_model(&kg, 16, 5).unwrap(), init_model(&kg, 16, 5).unwrap());
    assert_ne!(init_model(&kg, 16, 5).unwrap(), init_model(&kg, 16, 6).unwrap());
    let m = init_model(&kg, 16, 5).unwrap();
    for e in 0..kg.n_entities() as u32 {
        let n: f64 = m.entity_vector(e).iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((n - 1.0).abs() <= 1e-9);
    }
    assert!(init_model(&kg, 0, 5).is_err());
}

fn quick(seed: u64) -> Hyperparams {
    Hyperparams {
        dim: 8,
        epochs: 50,
        learning_rate: 0.05,
        seed,
        ..Hyperparams::default()
    }
}

#[test]
fn zero_learning_rate_keeps_init() {
    let kg = common::fixture();
    let hp = Hyperparams {
        learning_rate: 0.0,
        epochs: 5,
        ..quick(3)
    };
    let mut init = init_model(&kg, hp.dim, hp.seed).unwrap();
    init.norm = hp.norm;
    init.margin = hp.margin;
    assert_eq!(train(&kg, &hp).unwrap(), init);
}

#[test]
fn entity_norms_hold_after_every_epoch() {
    let kg = common::fixture();
    for epochs in 1..=4 {
        let m = train(&kg, &Hyperparams { epochs, ..quick(2) }).unwrap();
        for e in 0..kg.n_entities() as u32 {
            let n: f64 = m.entity_vector(e).iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() <= 1e-9, "epoch {epochs}: norm {n}");
        }
    }
}

#[test]
fn probe_loss_does_not_increase_early() {
    let kg = common::fixture();
    let (_, log) = train_with_log(&kg, &Hyperparams { epochs: 3, ..quick(0) }).unwrap();
    for w in log.probe_loss.windows(2) {
        assert!(w[1] <= w[0], "probe loss rose: {:?}", log.probe_loss);
    }
}

#[test]
fn deterministic_single_worker() {
    let kg = common::random_kg(4, 60, 4, 300);
    let hp = Hyperparams { epochs: 10, ..quick(8) };
    assert_eq!(train(&kg, &hp).unwrap(), train(&kg, &hp).unwrap());
}

#[test]
fn multi_worker_trains_finite_unit_model() {
    let kg = common::random_kg(4, 60, 4, 300);
    let m = train(
        &kg,
        &Hyperparams {
            epochs: 10,
            workers: 4,
            ..quick(8)
        },
    )
    .unwrap();
    let r = evaluate_model(&m, &kg, Split::Test).unwrap();
    assert!(r.mrr.is_finite() && r.mrr > 0.0);
}

#[test]
fn divergence_names_the_epoch() {
    let kg = common::fixture();
    let err = train(
        &kg,
        &Hyperparams {
            learning_rate: 1e308,
            epochs: 3,
            ..quick(0)
        },
    )
    .unwrap_err();
    assert!(err.to_string().contains("epoch 1"), "{err}");
}

/// Six triples in a chain a -> b -> c -> d -> e -> f under one relation.
fn chain() -> KnowledgeGraph {
    let names = ["a", "b", "c", "d", "e", "f", "g"];
    let mut b = KnowledgeGraphBuilder::new().relation("next", "next");
    for n in names {
        b = b.entity(n, n);
    }
    for (i, w) in names.windows(2).enumerate() {
        let split = if i < 4 { Split::Train } else { Split::Test };
        b = b.triple(split, w[0], "next", w[1]);
    }
    b.build().unwrap()
}

#[test]
fn tiny_chain_is_learned() {
    let kg = chain();
    let m = train(&kg, &quick(1)).unwrap();
    let r = evaluate_model(&m, &kg, Split::Test).unwrap();
    // exhaustive check of the same ranks
    let known = KnownAnswers::from_kg(&kg);
    for t in kg.split(Split::Test) {
        for dir in [Direction::Tail, Direction::Head] {
            let q = Query::from_triple(t, dir);
            let scores: Vec<f64> = (0..kg.n_entities() as u32)
                .map(|e| {
                    let cand = match dir {
                        Direction::Tail => Triple::new(t.head, t.relation, e),
                        Direction::Head => Triple::new(e, t.relation, t.tail),
                    };
                    m.score(&cand)
                })
                .collect();
            let rank = kgsynth::eval::rank_gold(&scores, &q, Some(&known)).unwrap().gold_rank;
            assert!(rank <= 10);
        }
    }
    assert_eq!(r.hits_at_10, 1.0);
}

#[test]
fn hand_placed_vectors_are_perfect() {
    let kg = chain();
    let e: Vec<Vec<f64>> = (0..7).map(|i| vec![i as f64, 0.0]).collect();
    let m = EmbeddingModel::from_vectors(&e, &[vec![1.0, 0.0]], Norm::L1, 1.0).unwrap();
    let r = evaluate_model(&m, &kg, Split::Test).unwrap();
    assert_eq!((r.mrr, r.hits_at_1), (1.0, 1.0));
}

#[test]
fn untrained_model_is_near_chance() {
    let kg = common::random_kg(12, 100, 5, 600);
    let mut total = 0.0;
    for seed in 0..20 {
        let m = init_model(&kg, 16, seed).unwrap();
        total += evaluate_model(&m, &kg, Split::Test).unwrap().hits_at_10;
    }
    let mean = total / 20.0;
    assert!(mean <= 2.0 * 10.0 / kg.n_entities() as f64, "mean hits@10 {mean}");
}

#[test]
fn metrics_identical_on_every_variant() {
    let kg = common::fixture();
    let hp = Hyperparams {
        epochs: 20,
        workers: 1,
        ..quick(5)
    };
    let base = evaluate_model(&train(&kg, &hp).unwrap(), &kg, Split::Test).unwrap();
    for entry in default_suite() {
        let SuiteEntry::Recipe(kind, targets) = entry else {
            continue;
        };
        let (variant, _) = apply_recipe(&kg, &TransformRecipe::new(kind, targets, 42).unwrap()).unwrap();
        let m = evaluate_model(&train(&variant, &hp).unwrap(), &variant, Split::Test).unwrap();
        assert_eq!(m, base, "{}", entry.label());
    }
}

#[test]
fn checkpoint_round_trips_exactly() {
    let kg = common::fixture();
    let hp = Hyperparams {
        epochs: 3,
        norm: Norm::L2,
        ..quick(7)
    };
    let m = train(&kg, &hp).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_checkpoint(&m, &kg, &hp, dir.path()).unwrap();
    assert_eq!(read_checkpoint(&kg, dir.path()).unwrap(), m);
    let first = std::fs::read_to_string(dir.path().join("entity_embeddings.tsv")).unwrap();
    assert!(first.starts_with("e01\t"));
    assert_eq!(
        kgsynth::transe::evaluate_model_with(&m, &kg, Split::Test, RankingMode::Raw)
            .unwrap()
            .count,
        6
    );
}
