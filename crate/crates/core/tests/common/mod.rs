#![allow(dead_code)]

use std::path::PathBuf;

use projline::coord::generate_groupoid;
use projline::field::{make_prime_field, read_field, FieldTable};
use projline::groupoid::{check_axioms, validate_structure, Morphism, ProjGroupoid};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// `GF(4) = {0, 1, a, b}` with `a^2 = b`, `a + 1 = b`.
pub fn gf4() -> FieldTable {
    read_field(data("gf4.field.json")).unwrap()
}

/// `GF(p^k)` as `F_p[x] / (modulus)`, with `modulus` monic of degree `k`
/// given by its low coefficients. Elements are numbered by their base-`p`
/// coefficient digits, so `0` and `1` are the constants.
pub fn poly_field(p: usize, modulus: &[usize]) -> FieldTable {
    let k = modulus.len();
    let q = p.pow(k as u32);
    let digits = |mut x: usize| {
        let mut d = vec![0; k];
        for c in d.iter_mut() {
            *c = x % p;
            x /= p;
        }
        d
    };
    let number = |d: &[usize]| d.iter().rev().fold(0, |acc, &c| acc * p + c);
    let add = |a: usize, b: usize| {
        let (x, y) = (digits(a), digits(b));
        number(&(0..k).map(|i| (x[i] + y[i]) % p).collect::<Vec<_>>())
    };
    let mul = |a: usize, b: usize| {
        let (x, y) = (digits(a), digits(b));
        let mut prod = vec![0; 2 * k];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        // x^k = -modulus
        for deg in (k..2 * k).rev() {
            let c = prod[deg];
            prod[deg] = 0;
            for (i, &m) in modulus.iter().enumerate() {
                prod[deg - k + i] = (prod[deg - k + i] + c * (p - m)) % p;
            }
        }
        number(&prod[..k])
    };
    let elements = (0..q).map(|x| x.to_string()).collect();
    let add_t = (0..q * q).map(|i| add(i / q, i % q)).collect();
    let mul_t = (0..q * q).map(|i| mul(i / q, i % q)).collect();
    FieldTable::from_indices(elements, 0, 1, add_t, mul_t).unwrap()
}

/// `x^3 + x + 1` over `F_2`.
pub fn gf8() -> FieldTable {
    poly_field(2, &[1, 1, 0])
}

/// `x^2 + 1` over `F_3`.
pub fn gf9() -> FieldTable {
    poly_field(3, &[1, 0])
}

pub fn prime(p: u64) -> FieldTable {
    make_prime_field(p).unwrap()
}

/// The fields whose models the acceptance suite covers.
pub fn small_fields() -> Vec<(&'static str, FieldTable)> {
    vec![
        ("GF(2)", prime(2)),
        ("GF(3)", prime(3)),
        ("GF(4)", gf4()),
        ("GF(5)", prime(5)),
        ("GF(7)", prime(7)),
    ]
}

/// Every field with at most 14 points on its line.
pub fn all_fields() -> Vec<(&'static str, FieldTable)> {
    let mut v = small_fields();
    v.extend([("GF(8)", gf8()), ("GF(9)", gf9()), ("GF(11)", prime(11)), ("GF(13)", prime(13))]);
    v
}

pub fn model(f: &FieldTable) -> ProjGroupoid {
    generate_groupoid(f).unwrap()
}

/// Homogeneous coordinates of point `i` of the model over `f`: `(i:1)`
/// for `i < q`, `(1:0)` for `i = q`.
pub fn coords(f: &FieldTable, i: usize) -> (usize, usize) {
    if i == f.order() {
        (f.one(), f.zero())
    } else {
        (i, f.one())
    }
}

/// The field element named like scalar `s`.
pub fn elem(g: &ProjGroupoid, f: &FieldTable, s: usize) -> usize {
    match g.scalar_id(s) {
        "1" => f.one(),
        id => f.index_of(id).unwrap(),
    }
}

pub fn det(f: &FieldTable, u: (usize, usize), v: (usize, usize)) -> usize {
    f.sub(f.mul(u.0, v.1), f.mul(u.1, v.0))
}

/// `|a c| / |b c| . |b d| / |a d|` from coordinates.
pub fn classical_cross_ratio(f: &FieldTable, a: usize, b: usize, c: usize, d: usize) -> usize {
    let [a, b, c, d] = [a, b, c, d].map(|i| coords(f, i));
    let first = f.div(det(f, a, c), det(f, b, c));
    let second = f.div(det(f, b, d), det(f, a, d));
    f.mul(first, second)
}

/// Whether `sigma` (with identity on scalars) preserves every composite.
pub fn preserves_composition(g: &ProjGroupoid, sigma: &[usize]) -> bool {
    let map = |m: Morphism| Morphism {
        src: sigma[m.src],
        dst: sigma[m.dst],
        label: if m.is_endo() { m.label } else { sigma[m.label] },
    };
    g.morphisms()
        .all(|f| g.out_of(f.dst).all(|h| map(g.compose(f, h)) == g.compose(map(f), map(h))))
}

/// All point permutations that, with the identity on scalars, are
/// automorphisms. Brute force over the symmetric group.
pub fn brute_automorphisms(g: &ProjGroupoid) -> Vec<Vec<usize>> {
    let n = g.n_points();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    permute(&mut perm, 0, &mut |p| {
        if preserves_composition(g, p) {
            out.push(p.to_vec());
        }
    });
    out.sort();
    out
}

fn permute(v: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == v.len() {
        visit(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, visit);
        v.swap(k, i);
    }
}

/// A single-entry corruption of a groupoid.
pub enum Mutant {
    /// A well-typed table with one entry changed.
    Table(ProjGroupoid),
    /// A groupoid file with one entry changed so that it no longer typechecks.
    Text(String),
}

/// Changes one composition or scalar-product entry. When every hom-set
/// has a single element no well-typed change exists, and the entry's label
/// is replaced by its own source point instead.
pub fn mutate(g: &ProjGroupoid, rng: &mut impl Rng) -> Mutant {
    let morphisms: Vec<Morphism> = g.morphisms().collect();
    let m = g.n_scalars();
    if m > 1 && rng.gen_ratio(1, 10) {
        let (s, t) = (rng.gen_range(0..m), rng.gen_range(0..m));
        let old = g.scalar_mul(s, t);
        let v = (old + rng.gen_range(1..m)) % m;
        return Mutant::Table(g.with_scalar_mul_entry(s, t, v).unwrap());
    }
    let f = *morphisms.choose(rng).unwrap();
    let outs: Vec<Morphism> = g.out_of(f.dst).collect();
    let h = *outs.choose(rng).unwrap();
    let r = g.compose(f, h);
    let others: Vec<Morphism> = g.hom(r.src, r.dst).filter(|&x| x != r).collect();
    match others.choose(rng) {
        Some(&x) => Mutant::Table(g.with_compose_entry(f, h, x).unwrap()),
        None => {
            let entry = |m: Morphism| {
                let label = if m.is_endo() { g.scalar_id(m.label) } else { g.point_id(m.label) };
                format!("[\"{}\",\"{}\",\"{}\"]", g.point_id(m.src), g.point_id(m.dst), label)
            };
            let bad = format!("[\"{}\",\"{}\",\"{}\"]", g.point_id(r.src), g.point_id(r.dst), g.point_id(r.src));
            let line = format!("[{},{},{}]", entry(f), entry(h), entry(r));
            let text = g.to_json();
            assert!(text.contains(&line), "entry {line} not found");
            let mutated = format!("[{},{},{}]", entry(f), entry(h), bad);
            Mutant::Text(text.replacen(&line, &mutated, 1))
        }
    }
}

/// Whether a mutant fails at least one check: parsing, structure, or axioms.
pub fn detected(m: &Mutant) -> bool {
    match m {
        Mutant::Text(text) => ProjGroupoid::from_json(text).is_err(),
        Mutant::Table(g) => {
            let structure = validate_structure(g);
            !structure.is_clean() || !check_axioms(g).unwrap().is_clean()
        }
    }
}
