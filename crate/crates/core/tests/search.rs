mod common;

use common::*;
use projline::coordinatize::coordinatize;
use projline::groupoid::{read_groupoid, ProjGroupoid};
use projline::search::{
    enumerate_models, export_results, is_isomorphism, iso_check, MinusOneFilter, SearchConfig,
};

fn subsets() -> Vec<Vec<u8>> {
    (0..16u8)
        .map(|mask| (1..=4).filter(|a| mask & (1 << (a - 1)) != 0).collect())
        .collect()
}

#[test]
fn pruned_search_agrees_with_filtering_afterwards() {
    let all = enumerate_models(&SearchConfig::new(4, &[])).unwrap();
    assert_eq!(all.labeled_count, 512);
    assert_eq!(all.classes.iter().map(|c| c.member_count).sum::<usize>(), 512);
    for axioms in subsets() {
        let pruned = enumerate_models(&SearchConfig::new(4, &axioms)).unwrap();
        let kept: Vec<_> = all
            .classes
            .iter()
            .filter(|c| axioms.iter().all(|a| c.axioms.passed(&format!("axiom{a}"))))
            .collect();
        assert_eq!(pruned.classes.len(), kept.len(), "{axioms:?}");
        assert_eq!(
            pruned.labeled_count,
            kept.iter().map(|c| c.member_count).sum::<usize>(),
            "{axioms:?}"
        );
        for (p, k) in pruned.classes.iter().zip(&kept) {
            assert_eq!(p.representative.to_json(), k.representative.to_json());
        }
    }
}

#[test]
fn representatives_are_pairwise_non_isomorphic() {
    let r = enumerate_models(&SearchConfig::new(4, &[])).unwrap();
    for (i, a) in r.classes.iter().enumerate() {
        for b in &r.classes[i + 1..] {
            assert!(iso_check(&a.representative, &b.representative).is_none());
        }
        let back = iso_check(&a.representative, &a.representative).unwrap();
        assert!(is_isomorphism(&a.representative, &a.representative, &back));
    }
}

#[test]
fn three_points() {
    let r = enumerate_models(&SearchConfig::new(3, &[1, 2, 3, 4])).unwrap();
    assert_eq!(r.classes.len(), 1);
    assert!(iso_check(&r.classes[0].representative, &model(&prime(2))).is_some());
}

#[test]
fn coordinate_models_appear_exactly_once() {
    for (n, f) in [(3, prime(2)), (4, prime(3))] {
        let r = enumerate_models(&SearchConfig::new(n, &[])).unwrap();
        let g = model(&f);
        let hits = r
            .classes
            .iter()
            .filter(|c| iso_check(&c.representative, &g).is_some())
            .count();
        assert_eq!(hits, 1);
    }
}

#[test]
fn four_points_with_distinct_minus_one() {
    let config = SearchConfig::new(4, &[1, 2, 3, 4]).with_minus_one(MinusOneFilter::Distinct);
    let r = enumerate_models(&config).unwrap();
    assert_eq!(r.classes.len(), 1);
    let iso = iso_check(&r.classes[0].representative, &model(&prime(3))).unwrap();
    assert!(is_isomorphism(&r.classes[0].representative, &model(&prime(3)), &iso));
}

#[test]
fn four_points_with_trivial_minus_one() {
    let config = SearchConfig::new(4, &[1, 2, 3, 4]).with_minus_one(MinusOneFilter::Trivial);
    let r = enumerate_models(&config).unwrap();
    println!("4 points, all axioms, -1 = 1: {} classes", r.classes.len());
    for c in &r.classes {
        assert!(c.axioms.is_clean());
        assert_eq!(c.minus_one.as_deref(), Some("1"));
    }
}

#[test]
fn five_points_coordinatize_over_gf4() {
    let r = enumerate_models(&SearchConfig::new(5, &[1, 2, 3, 4])).unwrap();
    assert!(!r.classes.is_empty());
    for c in &r.classes {
        let k = coordinatize(&c.representative).unwrap();
        assert_eq!(k.field.order(), 4);
        assert!(iso_check(&c.representative, &model(&gf4())).is_some());
    }
}

#[test]
fn six_points_with_override() {
    let mut config = SearchConfig::new(6, &[1, 2, 3, 4]);
    config.allow_large = true;
    let r = enumerate_models(&config).unwrap();
    assert!(!r.warnings.is_empty());
    assert_eq!(r.classes.len(), 1);
    assert!(iso_check(&r.classes[0].representative, &model(&prime(5))).is_some());
}

#[test]
fn search_is_deterministic() {
    let config = SearchConfig::new(4, &[2, 4]);
    let a = enumerate_models(&config).unwrap();
    let b = enumerate_models(&config).unwrap();
    let dump = |r: &projline::search::SearchResult| {
        r.classes.iter().map(|c| c.representative.to_json()).collect::<Vec<_>>()
    };
    assert_eq!(dump(&a), dump(&b));
}

fn relabel_points(g: &ProjGroupoid, sigma: &[usize], names: &[&str]) -> ProjGroupoid {
    use projline::groupoid::Morphism;
    let m = g.n_scalars();
    let inv = |p: usize| sigma.iter().position(|&s| s == p).unwrap();
    ProjGroupoid::build(
        names.iter().map(|s| s.to_string()).collect(),
        g.scalars().to_vec(),
        (0..m * m).map(|i| g.scalar_mul(i / m, i % m)).collect(),
        |x, y| {
            let back = |f: Morphism| Morphism {
                src: inv(f.src),
                dst: inv(f.dst),
                label: if f.is_endo() { f.label } else { inv(f.label) },
            };
            let r = g.compose(back(x), back(y));
            Morphism {
                src: sigma[r.src],
                dst: sigma[r.dst],
                label: if r.is_endo() { r.label } else { sigma[r.label] },
            }
        },
    )
    .unwrap()
}

#[test]
fn iso_check_on_relabeled_models() {
    let g = model(&prime(3));
    let h = relabel_points(&g, &[2, 0, 3, 1], &["P", "Q", "R", "S"]);
    let iso = iso_check(&g, &h).unwrap();
    assert!(is_isomorphism(&g, &h, &iso));
    assert!(iso_check(&g, &model(&prime(5))).is_none());

    let g7 = model(&prime(7));
    let h7 = relabel_points(&g7, &[7, 3, 5, 0, 6, 1, 4, 2], &["a", "b", "c", "d", "e", "f", "g", "h"]);
    assert!(iso_check(&g7, &h7).is_some());
}

#[test]
fn export_writes_classes_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = SearchConfig::new(4, &[1, 2, 3, 4]);
    let r = enumerate_models(&config).unwrap();
    export_results(&r, &config, dir.path()).unwrap();
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["points"], 4);
    assert_eq!(summary["classes"].as_array().unwrap().len(), r.classes.len());
    for (i, c) in r.classes.iter().enumerate() {
        let file = summary["classes"][i]["file"].as_str().unwrap();
        let g = read_groupoid(dir.path().join(file)).unwrap();
        assert_eq!(g, c.representative);
    }
}
