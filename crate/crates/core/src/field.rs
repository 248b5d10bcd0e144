//! Finite fields as explicit addition and multiplication tables.
//!
//! Elements are addressed by index into [`FieldTable::elements`]; the string
//! ids are only used at the file boundary and in reports. Nothing here
//! assumes the tables actually form a field: [`validate_field`] decides that.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::report::{first_fail, Check, ValidationReport, WitnessItem};
use crate::serial::{json_row, json_str, ParseLocation};

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    CompositeModulus(u64),
    #[error("malformed field table: {0}")]
    MalformedTable(String),
    #[error("not a field:\n{0}")]
    InvalidField(ValidationReport),
    #[error("parse error at {0}")]
    Parse(ParseLocation),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTable {
    elements: Vec<String>,
    zero: usize,
    one: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
}

/// Which of the two operation tables an entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Mul,
}

impl FieldTable {
    /// Builds a table from element indices. `add` and `mul` are row-major
    /// `q * q` arrays.
    pub fn from_indices(
        elements: Vec<String>,
        zero: usize,
        one: usize,
        add: Vec<usize>,
        mul: Vec<usize>,
    ) -> Result<Self, FieldError> {
        let q = elements.len();
        if q == 0 {
            return Err(FieldError::MalformedTable("no elements".into()));
        }
        for (i, e) in elements.iter().enumerate() {
            if elements[..i].contains(e) {
                return Err(FieldError::MalformedTable(format!("duplicate element id {e:?}")));
            }
        }
        if zero >= q || one >= q {
            return Err(FieldError::MalformedTable("zero/one out of range".into()));
        }
        for (name, t) in [("add", &add), ("mul", &mul)] {
            if t.len() != q * q {
                return Err(FieldError::MalformedTable(format!(
                    "{name} table has {} entries, expected {}",
                    t.len(),
                    q * q
                )));
            }
            if let Some(bad) = t.iter().find(|&&v| v >= q) {
                return Err(FieldError::MalformedTable(format!(
                    "{name} table entry {bad} out of range"
                )));
            }
        }
        Ok(FieldTable {
            elements,
            zero,
            one,
            add,
            mul,
        })
    }

    /// Builds a table from element ids, as found in a field file.
    pub fn from_ids(
        elements: Vec<String>,
        zero: &str,
        one: &str,
        add: &[Vec<String>],
        mul: &[Vec<String>],
    ) -> Result<Self, FieldError> {
        let lookup = |id: &str| {
            elements
                .iter()
                .position(|e| e == id)
                .ok_or_else(|| FieldError::MalformedTable(format!("undeclared element id {id:?}")))
        };
        let q = elements.len();
        let flatten = |name: &str, rows: &[Vec<String>]| -> Result<Vec<usize>, FieldError> {
            if rows.len() != q || rows.iter().any(|r| r.len() != q) {
                return Err(FieldError::MalformedTable(format!("{name} table is not {q}x{q}")));
            }
            rows.iter().flatten().map(|id| lookup(id)).collect()
        };
        let zero = lookup(zero)?;
        let one = lookup(one)?;
        let add = flatten("add", add)?;
        let mul = flatten("mul", mul)?;
        FieldTable::from_indices(elements, zero, one, add, mul)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn id(&self, a: usize) -> &str {
        &self.elements[a]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == id)
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order() + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b]
    }

    pub fn neg(&self, a: usize) -> Option<usize> {
        (0..self.order()).find(|&b| self.add(a, b) == self.zero)
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        if a == self.zero {
            return None;
        }
        (0..self.order()).find(|&b| self.mul(a, b) == self.one)
    }

    /// `a - b`. Panics if `b` has no additive inverse.
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b).expect("element without additive inverse"))
    }

    /// `a / b`. Panics if `b` is not invertible.
    pub fn div(&self, a: usize, b: usize) -> usize {
        self.mul(a, self.inv(b).expect("division by a non-invertible element"))
    }

    /// Multiplicative order of a nonzero element, if its powers return to one.
    pub fn multiplicative_order(&self, a: usize) -> Option<usize> {
        if a == self.zero {
            return None;
        }
        let mut x = a;
        for k in 1..=self.order() {
            if x == self.one {
                return Some(k);
            }
            x = self.mul(x, a);
        }
        None
    }

    /// First element (in element order) generating the multiplicative group.
    pub fn primitive_element(&self) -> Option<usize> {
        let target = self.order() - 1;
        (0..self.order()).find(|&a| self.multiplicative_order(a) == Some(target))
    }

    /// Copy of the table with a single entry replaced.
    pub fn with_entry(&self, op: Op, a: usize, b: usize, value: usize) -> Result<Self, FieldError> {
        let q = self.order();
        if a >= q || b >= q || value >= q {
            return Err(FieldError::MalformedTable("entry out of range".into()));
        }
        let mut t = self.clone();
        match op {
            Op::Add => t.add[a * q + b] = value,
            Op::Mul => t.mul[a * q + b] = value,
        }
        Ok(t)
    }

    fn rows(&self, op: Op) -> Vec<Vec<&str>> {
        let q = self.order();
        (0..q)
            .map(|a| {
                (0..q)
                    .map(|b| match op {
                        Op::Add => self.id(self.add(a, b)),
                        Op::Mul => self.id(self.mul(a, b)),
                    })
                    .collect()
            })
            .collect()
    }

    /// Canonical field file text: fixed key order, one table row per line.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        out.push_str(&format!("  \"elements\": {},\n", json_row(&self.elements)));
        out.push_str(&format!("  \"zero\": {},\n", json_str(self.id(self.zero))));
        out.push_str(&format!("  \"one\": {},\n", json_str(self.id(self.one))));
        for (key, op, last) in [("add", Op::Add, false), ("mul", Op::Mul, true)] {
            out.push_str(&format!("  \"{key}\": [\n"));
            let rows = self.rows(op);
            for (i, r) in rows.iter().enumerate() {
                let sep = if i + 1 == rows.len() { "" } else { "," };
                out.push_str(&format!("    {}{sep}\n", json_row(r)));
            }
            out.push_str(if last { "  ]\n" } else { "  ],\n" });
        }
        out.push_str("}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Self, FieldError> {
        let file: FieldFile =
            serde_json::from_str(text).map_err(|e| FieldError::Parse(ParseLocation::from(&e)))?;
        FieldTable::from_ids(file.elements, &file.zero, &file.one, &file.add, &file.mul)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldFile {
    elements: Vec<String>,
    zero: String,
    one: String,
    add: Vec<Vec<String>>,
    mul: Vec<Vec<String>>,
}

pub fn read_field(path: impl AsRef<Path>) -> Result<FieldTable, FieldError> {
    FieldTable::from_json(&std::fs::read_to_string(path)?)
}

pub fn write_field(f: &FieldTable, path: impl AsRef<Path>) -> Result<(), FieldError> {
    std::fs::write(path, f.to_json())?;
    Ok(())
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The integers modulo a prime `p`, elements named `"0"..="p-1"`.
pub fn make_prime_field(p: u64) -> Result<FieldTable, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::CompositeModulus(p));
    }
    let q = p as usize;
    let elements = (0..q).map(|i| i.to_string()).collect();
    let mut add = Vec::with_capacity(q * q);
    let mut mul = Vec::with_capacity(q * q);
    for a in 0..q {
        for b in 0..q {
            add.push((a + b) % q);
            mul.push((a * b) % q);
        }
    }
    FieldTable::from_indices(elements, 0, 1, add, mul)
}

fn el(f: &FieldTable, xs: &[usize]) -> Vec<WitnessItem> {
    xs.iter().map(|&x| WitnessItem::Element(f.id(x).to_string())).collect()
}

/// Checks every field axiom exhaustively. The report is clean iff `t` is a field.
pub fn validate_field(t: &FieldTable) -> ValidationReport {
    let q = t.order();
    let (z, o) = (t.zero, t.one);
    let all = || 0..q;
    let nonzero = move || (0..q).filter(move |&a| a != z);
    let pairs = || all().flat_map(move |a| all().map(move |b| (a, b)));
    let triples = || pairs().flat_map(move |(a, b)| all().map(move |c| (a, b, c)));

    let mut r = ValidationReport::new();
    r.push(Check::from_result(
        "zero_ne_one",
        if z != o { Ok(()) } else { Err(el(t, &[z])) },
    ));
    r.push(Check::from_result(
        "add_associative",
        first_fail(triples().map(|(a, b, c)| {
            (t.add(t.add(a, b), c) != t.add(a, t.add(b, c))).then(|| el(t, &[a, b, c]))
        })),
    ));
    r.push(Check::from_result(
        "add_commutative",
        first_fail(pairs().map(|(a, b)| (t.add(a, b) != t.add(b, a)).then(|| el(t, &[a, b])))),
    ));
    r.push(Check::from_result(
        "add_identity",
        first_fail(all().map(|a| (t.add(z, a) != a || t.add(a, z) != a).then(|| el(t, &[a])))),
    ));
    r.push(Check::from_result(
        "add_inverse",
        first_fail(all().map(|a| {
            (!all().any(|b| t.add(a, b) == z && t.add(b, a) == z)).then(|| el(t, &[a]))
        })),
    ));
    r.push(Check::from_result(
        "mul_associative",
        first_fail(triples().map(|(a, b, c)| {
            (t.mul(t.mul(a, b), c) != t.mul(a, t.mul(b, c))).then(|| el(t, &[a, b, c]))
        })),
    ));
    r.push(Check::from_result(
        "mul_commutative",
        first_fail(pairs().map(|(a, b)| (t.mul(a, b) != t.mul(b, a)).then(|| el(t, &[a, b])))),
    ));
    r.push(Check::from_result(
        "mul_identity",
        first_fail(all().map(|a| (t.mul(o, a) != a || t.mul(a, o) != a).then(|| el(t, &[a])))),
    ));
    r.push(Check::from_result(
        "mul_inverse",
        first_fail(nonzero().map(|a| {
            (!nonzero().any(|b| t.mul(a, b) == o && t.mul(b, a) == o)).then(|| el(t, &[a]))
        })),
    ));
    r.push(Check::from_result(
        "no_zero_divisors",
        first_fail(nonzero().flat_map(|a| {
            nonzero().map(move |b| (t.mul(a, b) == z).then(|| el(t, &[a, b])))
        })),
    ));
    r.push(Check::from_result(
        "distributive",
        first_fail(triples().map(|(a, b, c)| {
            let left = t.mul(a, t.add(b, c)) != t.add(t.mul(a, b), t.mul(a, c));
            let right = t.mul(t.add(a, b), c) != t.add(t.mul(a, c), t.mul(b, c));
            (left || right).then(|| el(t, &[a, b, c]))
        })),
    ));
    r
}

/// A bijection of elements carrying zero, one, addition and multiplication
/// of the source field onto the target field. `map[i]` is the image of
/// source element `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldIsomorphism {
    pub map: Vec<usize>,
}

impl FieldIsomorphism {
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }
}

fn require_field(f: &FieldTable) -> Result<(), FieldError> {
    let r = validate_field(f);
    if r.is_clean() {
        Ok(())
    } else {
        Err(FieldError::InvalidField(r))
    }
}

fn preserves(f1: &FieldTable, f2: &FieldTable, map: &[usize]) -> bool {
    let q = f1.order();
    map[f1.zero] == f2.zero
        && map[f1.one] == f2.one
        && (0..q).all(|a| {
            (0..q).all(|b| {
                map[f1.add(a, b)] == f2.add(map[a], map[b])
                    && map[f1.mul(a, b)] == f2.mul(map[a], map[b])
            })
        })
}

/// All isomorphisms `f1 -> f2`, found by sending a primitive element of `f1`
/// to every element of `f2` of the same multiplicative order.
pub fn field_isomorphisms(
    f1: &FieldTable,
    f2: &FieldTable,
) -> Result<Vec<FieldIsomorphism>, FieldError> {
    require_field(f1)?;
    require_field(f2)?;
    if f1.order() != f2.order() {
        return Ok(Vec::new());
    }
    let q = f1.order();
    let g = f1.primitive_element().expect("finite field has a primitive element");
    let mut found = Vec::new();
    for h in 0..q {
        if f2.multiplicative_order(h) != Some(q - 1) {
            continue;
        }
        let mut map = vec![usize::MAX; q];
        map[f1.zero] = f2.zero;
        let (mut x, mut y) = (f1.one, f2.one);
        for _ in 0..q - 1 {
            map[x] = y;
            x = f1.mul(x, g);
            y = f2.mul(y, h);
        }
        if preserves(f1, f2, &map) {
            found.push(FieldIsomorphism { map });
        }
    }
    Ok(found)
}

/// First isomorphism `f1 -> f2` in search order, if any.
pub fn field_iso_check(
    f1: &FieldTable,
    f2: &FieldTable,
) -> Result<Option<FieldIsomorphism>, FieldError> {
    Ok(field_isomorphisms(f1, f2)?.into_iter().next())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> FieldTable {
        // elements 0, 1, a, b with a^2 = b, a + 1 = b
        let e = |s: &str| s.to_string();
        let row = |xs: [&str; 4]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        FieldTable::from_ids(
            vec![e("0"), e("1"), e("a"), e("b")],
            "0",
            "1",
            &[
                row(["0", "1", "a", "b"]),
                row(["1", "0", "b", "a"]),
                row(["a", "b", "0", "1"]),
                row(["b", "a", "1", "0"]),
            ],
            &[
                row(["0", "0", "0", "0"]),
                row(["0", "1", "a", "b"]),
                row(["0", "a", "b", "1"]),
                row(["0", "b", "1", "a"]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn gf2_table() {
        let f = make_prime_field(2).unwrap();
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
    }

    #[test]
    fn gf5_entries_match_modular_arithmetic() {
        let f = make_prime_field(5).unwrap();
        assert_eq!(f.add(2, 4), 1);
        assert_eq!(f.mul(3, 4), 2);
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(f.add(a, b), (a + b) % 5);
                assert_eq!(f.mul(a, b), (a * b) % 5);
            }
        }
    }

    #[test]
    fn composite_moduli_rejected() {
        for p in [0, 1, 4, 6, 9, 15] {
            assert!(matches!(make_prime_field(p), Err(FieldError::CompositeModulus(x)) if x == p));
        }
    }

    #[test]
    fn prime_fields_validate() {
        for p in [2, 3, 5, 7, 11, 13] {
            let r = validate_field(&make_prime_field(p).unwrap());
            assert!(r.is_clean(), "GF({p}):\n{r}");
        }
    }

    #[test]
    fn user_gf4_validates() {
        assert!(validate_field(&gf4()).is_clean());
    }

    #[test]
    fn swapped_mul_entry_reports_violation() {
        let f = make_prime_field(5).unwrap();
        // 2*3 = 1 becomes 2*3 = 4
        let bad = f.with_entry(Op::Mul, 2, 3, 4).unwrap();
        let r = validate_field(&bad);
        assert!(!r.is_clean());
        let c = r.failures().next().unwrap();
        assert!(!c.witness.is_empty());
        assert!(r.get("mul_commutative").is_some_and(|c| !c.passed));
    }

    #[test]
    fn zero_equal_one_is_not_a_field() {
        let f = FieldTable::from_indices(vec!["z".into()], 0, 0, vec![0], vec![0]).unwrap();
        let r = validate_field(&f);
        assert!(!r.passed("zero_ne_one"));
    }

    #[test]
    fn malformed_tables() {
        let e = |s: &str| s.to_string();
        let r = FieldTable::from_ids(
            vec![e("0"), e("1")],
            "0",
            "1",
            &[vec![e("0"), e("1")], vec![e("1"), e("x")]],
            &[vec![e("0"), e("0")], vec![e("0"), e("1")]],
        );
        assert!(matches!(r, Err(FieldError::MalformedTable(_))));
        let r = FieldTable::from_ids(vec![e("0"), e("1")], "0", "1", &[vec![e("0")]], &[]);
        assert!(matches!(r, Err(FieldError::MalformedTable(_))));
    }

    #[test]
    fn renamed_gf3_is_isomorphic() {
        let f = make_prime_field(3).unwrap();
        let renamed = FieldTable::from_indices(
            vec!["zero".into(), "one".into(), "two".into()],
            0,
            1,
            (0..9).map(|i| f.add(i / 3, i % 3)).collect(),
            (0..9).map(|i| f.mul(i / 3, i % 3)).collect(),
        )
        .unwrap();
        let iso = field_iso_check(&f, &renamed).unwrap().unwrap();
        assert_eq!(iso.map, vec![0, 1, 2]);
    }

    #[test]
    fn different_orders_not_isomorphic() {
        let f3 = make_prime_field(3).unwrap();
        let f5 = make_prime_field(5).unwrap();
        assert!(field_iso_check(&f3, &f5).unwrap().is_none());
    }

    #[test]
    fn gf4_has_two_automorphisms() {
        let f = gf4();
        let autos = field_isomorphisms(&f, &f).unwrap();
        assert_eq!(autos.len(), 2);
        // identity and Frobenius x -> x^2
        assert!(autos.iter().any(|a| a.map == vec![0, 1, 2, 3]));
        assert!(autos.iter().any(|a| a.map == (0..4).map(|x| f.mul(x, x)).collect::<Vec<_>>()));
    }

    #[test]
    fn iso_check_rejects_non_fields() {
        let f = make_prime_field(5).unwrap();
        let bad = f.with_entry(Op::Add, 1, 1, 0).unwrap();
        assert!(matches!(field_iso_check(&f, &bad), Err(FieldError::InvalidField(_))));
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for f in [make_prime_field(7).unwrap(), make_prime_field(13).unwrap(), gf4()] {
            let g = f.primitive_element().unwrap();
            assert_eq!(f.multiplicative_order(g), Some(f.order() - 1));
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let f = gf4();
        let text = f.to_json();
        let back = FieldTable::from_json(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn truncated_json_is_parse_error() {
        let text = make_prime_field(3).unwrap().to_json();
        let cut = &text[..text.len() / 2];
        assert!(matches!(FieldTable::from_json(cut), Err(FieldError::Parse(_))));
    }
}
