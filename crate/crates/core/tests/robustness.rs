mod common;

use common::*;
use projline::field::{field_iso_check, validate_field, FieldError, FieldTable, Op};
use projline::groupoid::{GroupoidError, ProjGroupoid};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn single_entry_mutations_are_detected() {
    for (i, (name, f)) in small_fields().into_iter().enumerate() {
        let g = model(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + i as u64);
        for k in 0..100 {
            let m = mutate(&g, &mut rng);
            assert!(detected(&m), "{name}: mutation {k} passed every check");
        }
    }
}

#[test]
fn gf2_mutations_cannot_be_well_typed() {
    let g = model(&prime(2));
    assert!(g.morphisms().all(|m| g.hom(m.src, m.dst).count() == 1));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        match mutate(&g, &mut rng) {
            Mutant::Text(t) => assert!(matches!(ProjGroupoid::from_json(&t), Err(GroupoidError::Malformed(_)))),
            Mutant::Table(_) => panic!("GF(2) admits no well-typed mutation"),
        }
    }
}

#[test]
fn groupoid_files_round_trip_exactly() {
    for (name, f) in all_fields() {
        let g = model(&f);
        let text = g.to_json();
        let back = ProjGroupoid::from_json(&text).unwrap();
        assert_eq!(back, g, "{name}");
        assert_eq!(back.to_json(), text, "{name}");
    }
}

#[test]
fn truncated_groupoid_file_reports_a_location() {
    let text = model(&prime(3)).to_json();
    let cut = &text[..text.len() / 2];
    match ProjGroupoid::from_json(cut) {
        Err(GroupoidError::Parse(loc)) => assert!(loc.line > 1),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

fn prime_below_30() -> impl Strategy<Value = u64> {
    proptest::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn changing_one_field_entry_breaks_the_field(
        p in prime_below_30(),
        add in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let f = prime(p);
        let q = f.order();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let (a, b) = (rng.gen_range(0..q), rng.gen_range(0..q));
        let (op, old) = if add { (Op::Add, f.add(a, b)) } else { (Op::Mul, f.mul(a, b)) };
        let new = (old + rng.gen_range(1..q)) % q;
        let g = f.with_entry(op, a, b, new).unwrap();
        prop_assert!(!validate_field(&g).is_clean());
    }

    #[test]
    fn field_files_round_trip(p in prime_below_30()) {
        let f = prime(p);
        let text = f.to_json();
        let back = FieldTable::from_json(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn renamed_prime_fields_are_isomorphic(p in prime_below_30(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let f = prime(p);
        let q = f.order();
        let mut perm: Vec<usize> = (0..q).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let names: Vec<String> = (0..q).map(|i| format!("e{}", perm[i])).collect();
        let table = |op: fn(&FieldTable, usize, usize) -> usize| -> Vec<Vec<String>> {
            (0..q).map(|a| (0..q).map(|b| names[op(&f, a, b)].clone()).collect()).collect()
        };
        let g = FieldTable::from_ids(
            names.clone(),
            &names[f.zero()],
            &names[f.one()],
            &table(FieldTable::add),
            &table(FieldTable::mul),
        )
        .unwrap();
        let iso = field_iso_check(&f, &g).unwrap().unwrap();
        for a in 0..q {
            prop_assert_eq!(g.id(iso.apply(a)), names[a].as_str());
        }
    }
}

#[test]
fn composite_orders_are_rejected() {
    for n in [1, 4, 6, 9, 15] {
        assert!(matches!(projline::field::make_prime_field(n), Err(FieldError::CompositeModulus(_))));
    }
}
