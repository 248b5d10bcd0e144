//! Reconstructing a field from an abstract projective line, and
//! projectivities between projective lines.

use std::collections::HashMap;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::coord::{generate_groupoid, CoordError};
use crate::field::{validate_field, FieldError, FieldTable};
use crate::groupoid::{
    check_axioms, distinct_tuples, validate_structure, GroupoidError, Morphism, ProjGroupoid, UNIT_ID,
};
use crate::rapport::{PhiMap, RapportEngine, RapportError};
use crate::report::{first_fail, Check, ValidationReport, WitnessItem};
use crate::serial::{json_str, ParseLocation};

#[derive(Debug, Error)]
pub enum CoordinatizeError {
    #[error("groupoid is not structurally valid:\n{0}")]
    StructurallyInvalid(ValidationReport),
    #[error("groupoid fails the axioms:\n{0}")]
    AxiomViolation(ValidationReport),
    #[error(transparent)]
    Rapport(#[from] RapportError),
    #[error("malformed Phi-group: {0}")]
    MalformedPhiGroup(String),
    #[error("scalars do not form a field:\n{0}")]
    NotAField(ValidationReport),
    #[error("four-point groupoids with -1 = 1 are not supported")]
    UnsupportedFourPoint,
    #[error("points are not distinct as required")]
    DegeneratePoints,
    #[error("scalar map rejected: {0}")]
    IncompatibleScalarMap(String),
    #[error("constructed map is not a projectivity:\n{0}")]
    VerificationFailure(ValidationReport),
    #[error(transparent)]
    Coord(#[from] CoordError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("malformed projectivity file: {0}")]
    Malformed(String),
    #[error("parse error at {0}")]
    Parse(ParseLocation),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<GroupoidError> for CoordinatizeError {
    fn from(e: GroupoidError) -> Self {
        match e {
            GroupoidError::StructurallyInvalid(r) => CoordinatizeError::StructurallyInvalid(r),
            other => CoordinatizeError::Coord(CoordError::Groupoid(other)),
        }
    }
}

/// An abelian group with an involution on its non-identity elements and a
/// distinguished element `-1` of order at most 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiGroup {
    scalars: Vec<String>,
    unit: usize,
    mul: Vec<usize>,
    phi: Vec<Option<usize>>,
    minus_one: usize,
}

impl PhiGroup {
    /// Checks the group laws, the involution law on the domain of `phi`, and
    /// `minus_one^2 = 1`.
    pub fn new(
        scalars: Vec<String>,
        mul: Vec<usize>,
        phi: Vec<Option<usize>>,
        minus_one: usize,
    ) -> Result<Self, CoordinatizeError> {
        let bad = |m: String| Err(CoordinatizeError::MalformedPhiGroup(m));
        let m = scalars.len();
        let Some(unit) = scalars.iter().position(|s| s == UNIT_ID) else {
            return bad(format!("no scalar named {UNIT_ID:?}"));
        };
        if mul.len() != m * m || mul.iter().any(|&x| x >= m) || phi.len() != m || minus_one >= m {
            return bad("tables do not match the scalar set".into());
        }
        let op = |a: usize, b: usize| mul[a * m + b];
        for a in 0..m {
            if op(unit, a) != a {
                return bad(format!("{} is not an identity", UNIT_ID));
            }
            if !(0..m).any(|b| op(a, b) == unit) {
                return bad(format!("{} has no inverse", scalars[a]));
            }
            for b in 0..m {
                if op(a, b) != op(b, a) {
                    return bad(format!("{} and {} do not commute", scalars[a], scalars[b]));
                }
                if (0..m).any(|c| op(op(a, b), c) != op(a, op(b, c))) {
                    return bad("multiplication is not associative".into());
                }
            }
        }
        if phi[unit].is_some() {
            return bad("Phi is defined at the identity".into());
        }
        for (s, t) in phi.iter().enumerate() {
            if let Some(t) = *t {
                if t >= m || t == unit || phi[t] != Some(s) {
                    return bad(format!("Phi is not an involution at {}", scalars[s]));
                }
            }
        }
        if op(minus_one, minus_one) != unit {
            return bad("-1 does not square to 1".into());
        }
        Ok(PhiGroup {
            scalars,
            unit,
            mul,
            phi,
            minus_one,
        })
    }

    pub fn order(&self) -> usize {
        self.scalars.len()
    }

    pub fn scalars(&self) -> &[String] {
        &self.scalars
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.order())
            .find(|&b| self.mul(a, b) == self.unit)
            .expect("validated group")
    }

    pub fn phi(&self, a: usize) -> Option<usize> {
        self.phi[a]
    }

    pub fn minus_one(&self) -> usize {
        self.minus_one
    }
}

/// The scalar group of `g` with its involution and `-1`.
pub fn extract_phi_group(g: &ProjGroupoid) -> Result<PhiGroup, CoordinatizeError> {
    let engine = RapportEngine::new(g);
    let PhiMap { images } = engine.phi()?.clone();
    let minus_one = engine.minus_one()?;
    let m = g.n_scalars();
    let mul = (0..m * m).map(|i| g.scalar_mul(i / m, i % m)).collect();
    PhiGroup::new(g.scalars().to_vec(), mul, images, minus_one)
}

/// The candidate field on `G + {0}`: multiplication extends the group by
/// `0 . x = 0`, and addition is `l + m = l . Phi((-1) . l^-1 . m)`, with
/// `l + 0 = 0 + l = l` and `l + (-l) = 0`.
///
/// Element 0 is the new zero (named `0` unless a scalar already has that
/// name); element `i + 1` is scalar `i`. The report decides fieldhood.
pub fn reconstruct_field(pg: &PhiGroup) -> Result<(FieldTable, ValidationReport), CoordinatizeError> {
    let m = pg.order();
    let q = m + 1;
    let mut zero_id = String::from("0");
    while pg.scalars.contains(&zero_id) {
        zero_id.push('\'');
    }
    let mut elements = vec![zero_id];
    elements.extend(pg.scalars.iter().cloned());

    let mut add = vec![0; q * q];
    let mut mul = vec![0; q * q];
    for a in 1..q {
        for b in 1..q {
            let (l, u) = (a - 1, b - 1);
            mul[a * q + b] = pg.mul(l, u) + 1;
            let r = pg.mul(pg.minus_one, pg.mul(pg.inv(l), u));
            add[a * q + b] = if r == pg.unit {
                0
            } else {
                let Some(pr) = pg.phi(r) else {
                    return Err(CoordinatizeError::MalformedPhiGroup(format!(
                        "Phi is undefined at {}",
                        pg.scalars[r]
                    )));
                };
                pg.mul(l, pr) + 1
            };
        }
    }
    for x in 0..q {
        add[x] = x;
        add[x * q] = x;
    }
    let table = FieldTable::from_indices(elements, 0, pg.unit + 1, add, mul)?;
    let report = validate_field(&table);
    Ok((table, report))
}

/// A map of projective lines: a point map and a scalar map. Arrows are sent
/// by label transport, `(C: A -> B) |-> (P(C): P(A) -> P(B))` and
/// `(s: A -> A) |-> (p(s): P(A) -> P(A))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Projectivity {
    pub point_map: Vec<usize>,
    pub scalar_map: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectivityFile {
    points: Vec<(String, String)>,
    scalars: Vec<(String, String)>,
}

impl Projectivity {
    pub fn identity(g: &ProjGroupoid) -> Self {
        Projectivity {
            point_map: (0..g.n_points()).collect(),
            scalar_map: (0..g.n_scalars()).collect(),
        }
    }

    pub fn apply(&self, m: Morphism) -> Morphism {
        let (src, dst) = (self.point_map[m.src], self.point_map[m.dst]);
        let label = if m.is_endo() {
            self.scalar_map[m.label]
        } else {
            self.point_map[m.label]
        };
        Morphism { src, dst, label }
    }

    /// Inverse of a bijective projectivity.
    pub fn inverse(&self) -> Option<Self> {
        let invert = |v: &[usize]| {
            let mut out = vec![usize::MAX; v.len()];
            for (i, &j) in v.iter().enumerate() {
                *out.get_mut(j)? = i;
            }
            out.iter().all(|&x| x != usize::MAX).then_some(out)
        };
        Some(Projectivity {
            point_map: invert(&self.point_map)?,
            scalar_map: invert(&self.scalar_map)?,
        })
    }

    pub fn to_json(&self, src: &ProjGroupoid, dst: &ProjGroupoid) -> String {
        let pair = |a: &str, b: &str| format!("    [{}, {}]", json_str(a), json_str(b));
        let points: Vec<String> = self
            .point_map
            .iter()
            .enumerate()
            .map(|(a, &b)| pair(src.point_id(a), dst.point_id(b)))
            .collect();
        let scalars: Vec<String> = self
            .scalar_map
            .iter()
            .enumerate()
            .map(|(a, &b)| pair(src.scalar_id(a), dst.scalar_id(b)))
            .collect();
        format!(
            "{{\n  \"points\": [\n{}\n  ],\n  \"scalars\": [\n{}\n  ]\n}}\n",
            points.join(",\n"),
            scalars.join(",\n")
        )
    }

    pub fn from_json(text: &str, src: &ProjGroupoid, dst: &ProjGroupoid) -> Result<Self, CoordinatizeError> {
        let file: ProjectivityFile =
            serde_json::from_str(text).map_err(|e| CoordinatizeError::Parse(ParseLocation::from(&e)))?;
        let bad = |m: String| CoordinatizeError::Malformed(m);
        let mut point_map = vec![usize::MAX; src.n_points()];
        for (a, b) in &file.points {
            let ia = src.point_index(a).ok_or_else(|| bad(format!("unknown source point {a:?}")))?;
            let ib = dst.point_index(b).ok_or_else(|| bad(format!("unknown target point {b:?}")))?;
            if point_map[ia] != usize::MAX {
                return Err(bad(format!("point {a:?} mapped twice")));
            }
            point_map[ia] = ib;
        }
        let mut scalar_map = vec![usize::MAX; src.n_scalars()];
        for (a, b) in &file.scalars {
            let ia = src.scalar_index(a).ok_or_else(|| bad(format!("unknown source scalar {a:?}")))?;
            let ib = dst.scalar_index(b).ok_or_else(|| bad(format!("unknown target scalar {b:?}")))?;
            if scalar_map[ia] != usize::MAX {
                return Err(bad(format!("scalar {a:?} mapped twice")));
            }
            scalar_map[ia] = ib;
        }
        if point_map.contains(&usize::MAX) || scalar_map.contains(&usize::MAX) {
            return Err(bad("map is not total".into()));
        }
        Ok(Projectivity { point_map, scalar_map })
    }
}

pub fn read_projectivity(
    path: impl AsRef<Path>,
    src: &ProjGroupoid,
    dst: &ProjGroupoid,
) -> Result<Projectivity, CoordinatizeError> {
    Projectivity::from_json(&std::fs::read_to_string(path)?, src, dst)
}

pub fn write_projectivity(
    pr: &Projectivity,
    src: &ProjGroupoid,
    dst: &ProjGroupoid,
    path: impl AsRef<Path>,
) -> Result<(), CoordinatizeError> {
    std::fs::write(path, pr.to_json(src, dst))?;
    Ok(())
}

fn injective(v: &[usize]) -> Result<(), (usize, usize)> {
    let mut seen = HashMap::new();
    for (i, &x) in v.iter().enumerate() {
        if let Some(j) = seen.insert(x, i) {
            return Err((j, i));
        }
    }
    Ok(())
}

/// Why `p` cannot be the scalar part of a projectivity from `src` to `dst`:
/// it must be an injective homomorphism commuting with `Phi` and sending
/// `-1` to `-1`.
fn scalar_map_defect(src: &ProjGroupoid, dst: &ProjGroupoid, p: &[usize]) -> Result<Option<String>, RapportError> {
    if p.len() != src.n_scalars() || p.iter().any(|&s| s >= dst.n_scalars()) {
        return Ok(Some("scalar map is not total".into()));
    }
    if let Err((i, j)) = injective(p) {
        return Ok(Some(format!("{} and {} have the same image", src.scalar_id(i), src.scalar_id(j))));
    }
    for s in 0..p.len() {
        for t in 0..p.len() {
            if p[src.scalar_mul(s, t)] != dst.scalar_mul(p[s], p[t]) {
                return Ok(Some(format!(
                    "not a homomorphism at {} . {}",
                    src.scalar_id(s),
                    src.scalar_id(t)
                )));
            }
        }
    }
    let (es, ed) = (RapportEngine::new(src), RapportEngine::new(dst));
    let (phi_s, phi_d) = (es.phi()?, ed.phi()?);
    for s in 0..p.len() {
        if let Some(t) = phi_s.get(s) {
            if phi_d.get(p[s]) != Some(p[t]) {
                return Ok(Some(format!("does not commute with Phi at {}", src.scalar_id(s))));
            }
        }
    }
    if p[es.minus_one()?] != ed.minus_one()? {
        return Ok(Some("does not send -1 to -1".into()));
    }
    Ok(None)
}

/// The projectivity with `P(A,B,C) = (A',B',C')` and scalar part `p`,
/// forced pointwise by `(A',B';C',P(X)) = p((A,B;C,X))`, then verified
/// exhaustively.
pub fn build_projectivity(
    src: &ProjGroupoid,
    dst: &ProjGroupoid,
    [a, b, c]: [usize; 3],
    [a1, b1, c1]: [usize; 3],
    p: &[usize],
) -> Result<Projectivity, CoordinatizeError> {
    let distinct3 = |x: usize, y: usize, z: usize, n: usize| x != y && y != z && x != z && x.max(y).max(z) < n;
    if !distinct3(a, b, c, src.n_points()) || !distinct3(a1, b1, c1, dst.n_points()) {
        return Err(CoordinatizeError::DegeneratePoints);
    }
    if let Some(why) = scalar_map_defect(src, dst, p)? {
        return Err(CoordinatizeError::IncompatibleScalarMap(why));
    }
    let es = RapportEngine::new(src);
    let ed = RapportEngine::new(dst);
    let mut point_map = vec![usize::MAX; src.n_points()];
    point_map[a] = a1;
    point_map[b] = b1;
    point_map[c] = c1;
    for x in 0..src.n_points() {
        if point_map[x] == usize::MAX {
            let mu = es.cross_ratio(a, b, c, x)?;
            point_map[x] = ed.solve_fourth_point(p[mu], a1, b1, c1)?;
        }
    }
    let pr = Projectivity {
        point_map,
        scalar_map: p.to_vec(),
    };
    let report = verify_projectivity(&pr, src, dst);
    if report.is_clean() {
        Ok(pr)
    } else {
        Err(CoordinatizeError::VerificationFailure(report))
    }
}

/// Exhaustive check that `pr` is a projectivity from `src` to `dst`.
pub fn verify_projectivity(pr: &Projectivity, src: &ProjGroupoid, dst: &ProjGroupoid) -> ValidationReport {
    let mut report = ValidationReport::new();
    let total = pr.point_map.len() == src.n_points()
        && pr.scalar_map.len() == src.n_scalars()
        && pr.point_map.iter().all(|&x| x < dst.n_points())
        && pr.scalar_map.iter().all(|&s| s < dst.n_scalars());
    if !total {
        report.push(Check::fail("maps_total", vec![WitnessItem::Note("map size or range mismatch".into())]));
        return report;
    }
    report.push(Check::pass("maps_total"));

    let pm = &pr.point_map;
    let sm = &pr.scalar_map;
    report.push(Check::from_result(
        "point_map_injective",
        injective(pm).map_err(|(i, j)| vec![src.point_item(i), src.point_item(j)]),
    ));
    report.push(Check::from_result(
        "scalar_map_injective",
        injective(sm).map_err(|(i, j)| vec![src.scalar_item(i), src.scalar_item(j)]),
    ));

    let morphisms: Vec<Morphism> = src.morphisms().collect();
    report.push(Check::from_result(
        "label_equation",
        first_fail(morphisms.iter().map(|&m| {
            let im = pr.apply(m);
            (!dst.is_well_typed(im)).then(|| {
                vec![
                    src.item(m),
                    WitnessItem::Note(format!("{}:{}->{}", im.label, im.src, im.dst)),
                ]
            })
        })),
    ));
    if !report.is_clean() {
        return report;
    }

    report.push(Check::from_result(
        "functoriality",
        first_fail(morphisms.iter().flat_map(|&f| {
            src.out_of(f.dst).map(move |h| {
                let lhs = pr.apply(src.compose(f, h));
                let rhs = dst.compose(pr.apply(f), pr.apply(h));
                (lhs != rhs).then(|| vec![src.item(f), src.item(h), dst.item(lhs), dst.item(rhs)])
            })
        })),
    ));

    let m = src.n_scalars();
    report.push(Check::from_result(
        "scalar_homomorphism",
        first_fail((0..m * m).map(|i| {
            let (s, t) = (i / m, i % m);
            (sm[src.scalar_mul(s, t)] != dst.scalar_mul(sm[s], sm[t]))
                .then(|| vec![src.scalar_item(s), src.scalar_item(t)])
        })),
    ));

    let (es, ed) = (RapportEngine::new(src), RapportEngine::new(dst));
    report.push(Check::from_result(
        "phi_compatible",
        match (es.phi(), ed.phi()) {
            (Ok(ps), Ok(pd)) => first_fail((0..m).map(|s| {
                ps.get(s)
                    .and_then(|t| (pd.get(sm[s]) != Some(sm[t])).then(|| vec![src.scalar_item(s)]))
            })),
            (Err(e), _) | (_, Err(e)) => Err(vec![WitnessItem::Note(e.to_string())]),
        },
    ));

    report.push(Check::from_result(
        "cross_ratio_preserved",
        first_fail(distinct_tuples(src.n_points(), 4).into_iter().map(|q| {
            let v = es.cross_ratio(q[0], q[1], q[2], q[3]).ok()?;
            let w = ed.cross_ratio(pm[q[0]], pm[q[1]], pm[q[2]], pm[q[3]]).ok();
            (w != Some(sm[v])).then(|| q.iter().map(|&x| src.point_item(x)).collect())
        })),
    ));

    report.push(Check::from_result(
        "minus_one_preserved",
        match (es.minus_one(), ed.minus_one()) {
            (Ok(s), Ok(d)) if sm[s] == d => Ok(()),
            (Ok(s), Ok(_)) => Err(vec![src.scalar_item(s)]),
            (Err(e), _) | (_, Err(e)) => Err(vec![WitnessItem::Note(e.to_string())]),
        },
    ));
    report
}

/// All maps of the scalar group of `pg` to itself that are homomorphisms,
/// commute with `Phi` and fix `-1`, in lexicographic order.
pub fn phi_group_endomorphisms(pg: &PhiGroup) -> Vec<Vec<usize>> {
    let m = pg.order();
    let mut out = Vec::new();
    let mut cur = vec![0; m];
    loop {
        let hom = (0..m).all(|s| (0..m).all(|t| cur[pg.mul(s, t)] == pg.mul(cur[s], cur[t])));
        let compatible = (0..m).all(|s| match pg.phi(s) {
            Some(t) => pg.phi(cur[s]) == Some(cur[t]),
            None => true,
        });
        if hom && compatible && cur[pg.minus_one] == pg.minus_one {
            out.push(cur.clone());
        }
        let Some(i) = (0..m).rev().find(|&i| cur[i] + 1 < m) else {
            break;
        };
        cur[i] += 1;
        for x in &mut cur[i + 1..] {
            *x = 0;
        }
    }
    out
}

/// The result of coordinatizing a projective line groupoid.
#[derive(Debug, Clone)]
pub struct Coordinatization {
    pub field: FieldTable,
    /// The coordinate model over `field`.
    pub model: ProjGroupoid,
    /// An isomorphism from the input onto `model`.
    pub projectivity: Projectivity,
}

/// Reconstructs the scalar field of `g` and an isomorphism of `g` onto the
/// projective line over it, sending the first three points of `g` to
/// `(1:0)`, `(0:1)`, `(1:1)` and each scalar to the field element of the
/// same name.
pub fn coordinatize(g: &ProjGroupoid) -> Result<Coordinatization, CoordinatizeError> {
    let structure = validate_structure(g);
    if !structure.is_clean() {
        return Err(CoordinatizeError::StructurallyInvalid(structure));
    }
    let axioms = check_axioms(g)?;
    if !axioms.is_clean() {
        return Err(CoordinatizeError::AxiomViolation(axioms));
    }
    let pg = extract_phi_group(g)?;
    if g.n_points() == 4 && pg.minus_one() == pg.unit() {
        return Err(CoordinatizeError::UnsupportedFourPoint);
    }
    let (field, report) = reconstruct_field(&pg)?;
    if !report.is_clean() {
        return Err(CoordinatizeError::NotAField(report));
    }
    let model = generate_groupoid(&field)?;
    let q = field.order();
    let target = [q, field.zero(), field.one()];
    let p: Vec<usize> = (0..g.n_scalars())
        .map(|s| model.scalar_index(g.scalar_id(s)).expect("scalar ids carry over"))
        .collect();
    let projectivity = build_projectivity(g, &model, [0, 1, 2], target, &p)?;
    if projectivity.inverse().is_none() {
        let mut r = ValidationReport::new();
        r.push(Check::fail(
            "surjective",
            vec![WitnessItem::Note(format!(
                "{} points onto {}",
                g.n_points(),
                model.n_points()
            ))],
        ));
        return Err(CoordinatizeError::VerificationFailure(r));
    }
    Ok(Coordinatization {
        field,
        model,
        projectivity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{field_iso_check, make_prime_field};

    fn model(p: u64) -> ProjGroupoid {
        generate_groupoid(&make_prime_field(p).unwrap()).unwrap()
    }

    #[test]
    fn phi_group_of_gf5() {
        let g = model(5);
        let pg = extract_phi_group(&g).unwrap();
        assert_eq!(pg.order(), 4);
        assert_eq!(pg.scalars()[pg.minus_one()], "4");
        let ix = |s: &str| g.scalar_index(s).unwrap();
        assert_eq!(pg.phi(ix("2")), Some(ix("4")));
        assert_eq!(pg.phi(ix("3")), Some(ix("3")));
        assert_eq!(pg.phi(pg.unit()), None);
    }

    #[test]
    fn malformed_phi_groups_are_rejected() {
        let ids = vec!["1".to_string(), "x".to_string()];
        assert!(PhiGroup::new(ids.clone(), vec![0, 1, 1, 0], vec![None, Some(1)], 1).is_ok());
        assert!(PhiGroup::new(ids.clone(), vec![0, 1, 1, 1], vec![None, Some(1)], 1).is_err());
        assert!(PhiGroup::new(ids.clone(), vec![0, 1, 1, 0], vec![Some(1), Some(0)], 1).is_err());
        let ids3: Vec<String> = ["1", "g", "g2"].map(String::from).to_vec();
        let c3 = vec![0, 1, 2, 1, 2, 0, 2, 0, 1];
        assert!(PhiGroup::new(ids3, c3, vec![None, None, None], 1).is_err());
    }

    #[test]
    fn reconstruction_of_gf5() {
        let g = model(5);
        let (k, report) = reconstruct_field(&extract_phi_group(&g).unwrap()).unwrap();
        assert!(report.is_clean(), "{report}");
        let e = |s: &str| k.index_of(s).unwrap();
        assert_eq!(k.add(e("2"), e("1")), e("3"));
        assert_eq!(k.add(e("2"), e("3")), e("0"));
        assert!(field_iso_check(&k, &make_prime_field(5).unwrap()).unwrap().is_some());
    }

    #[test]
    fn reconstruction_of_gf2() {
        let g = model(2);
        let (k, report) = reconstruct_field(&extract_phi_group(&g).unwrap()).unwrap();
        assert!(report.is_clean());
        assert_eq!(k.elements(), ["0", "1"]);
    }

    #[test]
    fn identity_and_swap_projectivities() {
        let g = model(5);
        let id: Vec<usize> = (0..4).collect();
        let pr = build_projectivity(&g, &g, [0, 1, 2], [0, 1, 2], &id).unwrap();
        assert_eq!(pr, Projectivity::identity(&g));

        let swap = build_projectivity(&g, &g, [0, 1, 2], [1, 0, 2], &id).unwrap();
        assert_eq!(&swap.point_map[..3], [1, 0, 2]);
        assert!(verify_projectivity(&swap, &g, &g).is_clean());
    }

    #[test]
    fn swapping_two_points_post_hoc_is_detected() {
        let g = model(5);
        let mut pr = Projectivity::identity(&g);
        pr.point_map.swap(0, 1);
        let report = verify_projectivity(&pr, &g, &g);
        assert!(!report.passed("functoriality"));
        assert!(!report.passed("cross_ratio_preserved"));
    }

    #[test]
    fn inversion_on_gf7_scalars_is_incompatible() {
        let g = model(7);
        let inv: Vec<usize> = (0..6).map(|s| g.scalar_inv(s).unwrap()).collect();
        assert!(matches!(
            build_projectivity(&g, &g, [0, 1, 2], [0, 1, 2], &inv),
            Err(CoordinatizeError::IncompatibleScalarMap(_))
        ));
    }

    #[test]
    fn coordinatize_small_models() {
        for p in [2, 3, 5, 7] {
            let g = model(p);
            let c = coordinatize(&g).unwrap();
            assert_eq!(c.field.order() as u64, p);
            assert!(verify_projectivity(&c.projectivity, &g, &c.model).is_clean());
        }
    }

    #[test]
    fn projectivity_json_round_trip() {
        let g = model(3);
        let c = coordinatize(&g).unwrap();
        let text = c.projectivity.to_json(&g, &c.model);
        assert_eq!(Projectivity::from_json(&text, &g, &c.model).unwrap(), c.projectivity);
    }
}
