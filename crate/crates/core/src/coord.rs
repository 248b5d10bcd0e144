//! The coordinate model: the projective line over a finite field.
//!
//! A point is a 1-dimensional subspace of `k^2`, kept as its canonical
//! representative `(t:1)` or `(1:0)`. The arrow `C: A -> B` is the linear
//! isomorphism `A -> B` projecting along `C`; with respect to the canonical
//! representatives it is multiplication by `|a c| / |b c|`.

use thiserror::Error;

use crate::field::{validate_field, FieldTable};
use crate::groupoid::{GroupoidError, Morphism, ProjGroupoid, UNIT_ID};
use crate::report::ValidationReport;

#[derive(Debug, Error)]
pub enum CoordError {
    #[error("not a field:\n{0}")]
    InvalidField(ValidationReport),
    #[error("points must be mutually distinct")]
    DegeneratePoints,
    #[error("zero coefficient: zero maps are not part of the groupoid")]
    ZeroCoefficient,
    #[error("morphisms are not composable")]
    NonComposable,
    #[error("the zero vector spans no point")]
    ZeroVector,
    #[error("element id {0:?} is reserved for the unit scalar")]
    ReservedUnitName(String),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

/// Canonical homogeneous coordinates `(x:y)` with `y = 1`, or `(1:0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    pub x: usize,
    pub y: usize,
}

impl ProjPoint {
    pub fn rep(&self) -> (usize, usize) {
        (self.x, self.y)
    }

    /// `(t:1)`.
    pub fn affine(t: usize, f: &FieldTable) -> Self {
        ProjPoint { x: t, y: f.one() }
    }

    /// `(1:0)`.
    pub fn infinity(f: &FieldTable) -> Self {
        ProjPoint { x: f.one(), y: f.zero() }
    }

    pub fn id(&self, f: &FieldTable) -> String {
        format!("({}:{})", f.id(self.x), f.id(self.y))
    }
}

/// The point spanned by `(x, y)`.
pub fn normalize(x: usize, y: usize, f: &FieldTable) -> Result<ProjPoint, CoordError> {
    if y != f.zero() {
        Ok(ProjPoint::affine(f.div(x, y), f))
    } else if x != f.zero() {
        Ok(ProjPoint::infinity(f))
    } else {
        Err(CoordError::ZeroVector)
    }
}

fn require_field(f: &FieldTable) -> Result<(), CoordError> {
    let r = validate_field(f);
    if r.is_clean() {
        Ok(())
    } else {
        Err(CoordError::InvalidField(r))
    }
}

/// The `q + 1` points: `(t:1)` in field element order, then `(1:0)`.
pub fn enumerate_points(f: &FieldTable) -> Result<Vec<ProjPoint>, CoordError> {
    require_field(f)?;
    Ok(points_unchecked(f))
}

fn points_unchecked(f: &FieldTable) -> Vec<ProjPoint> {
    (0..f.order())
        .map(|t| ProjPoint::affine(t, f))
        .chain(std::iter::once(ProjPoint::infinity(f)))
        .collect()
}

/// `u.x * v.y - u.y * v.x`.
pub fn det2(u: (usize, usize), v: (usize, usize), f: &FieldTable) -> usize {
    f.sub(f.mul(u.0, v.1), f.mul(u.1, v.0))
}

/// The coefficient of `c: a -> b`, i.e. `|a c| / |b c|`.
pub fn proj_scalar(a: ProjPoint, b: ProjPoint, c: ProjPoint, f: &FieldTable) -> Result<usize, CoordError> {
    if a == b || a == c || b == c {
        return Err(CoordError::DegeneratePoints);
    }
    Ok(f.div(det2(a.rep(), c.rep(), f), det2(b.rep(), c.rep(), f)))
}

/// The direction of projection of the map `a -> b` with coefficient `t`:
/// the span of `a - t b`.
pub fn label_of_map(a: ProjPoint, b: ProjPoint, t: usize, f: &FieldTable) -> Result<ProjPoint, CoordError> {
    if a == b {
        return Err(CoordError::DegeneratePoints);
    }
    if t == f.zero() {
        return Err(CoordError::ZeroCoefficient);
    }
    let x = f.sub(a.x, f.mul(t, b.x));
    let y = f.sub(a.y, f.mul(t, b.y));
    normalize(x, y, f)
}

/// A nonzero linear map between two points, as its 1x1 matrix with respect
/// to the canonical representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoordMorphism {
    pub src: ProjPoint,
    pub dst: ProjPoint,
    pub coeff: usize,
}

/// What a coordinate morphism is called in the groupoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordLabel {
    Point(ProjPoint),
    Scalar(usize),
}

impl CoordMorphism {
    /// `c: a -> b`.
    pub fn projection(a: ProjPoint, b: ProjPoint, c: ProjPoint, f: &FieldTable) -> Result<Self, CoordError> {
        Ok(CoordMorphism {
            src: a,
            dst: b,
            coeff: proj_scalar(a, b, c, f)?,
        })
    }

    pub fn scalar(a: ProjPoint, t: usize, f: &FieldTable) -> Result<Self, CoordError> {
        if t == f.zero() {
            return Err(CoordError::ZeroCoefficient);
        }
        Ok(CoordMorphism { src: a, dst: a, coeff: t })
    }

    pub fn label(&self, f: &FieldTable) -> Result<CoordLabel, CoordError> {
        if self.src == self.dst {
            Ok(CoordLabel::Scalar(self.coeff))
        } else {
            Ok(CoordLabel::Point(label_of_map(self.src, self.dst, self.coeff, f)?))
        }
    }
}

/// `m1` then `m2`.
pub fn compose_coord(m1: CoordMorphism, m2: CoordMorphism, f: &FieldTable) -> Result<CoordMorphism, CoordError> {
    if m1.dst != m2.src {
        return Err(CoordError::NonComposable);
    }
    Ok(CoordMorphism {
        src: m1.src,
        dst: m2.dst,
        coeff: f.mul(m1.coeff, m2.coeff),
    })
}

/// `(|a c| / |b c|) * (|b d| / |a d|)`.
pub fn cross_ratio_coord(
    a: ProjPoint,
    b: ProjPoint,
    c: ProjPoint,
    d: ProjPoint,
    f: &FieldTable,
) -> Result<usize, CoordError> {
    if [a, b, c, d].iter().enumerate().any(|(i, p)| [a, b, c, d][..i].contains(p)) {
        return Err(CoordError::DegeneratePoints);
    }
    Ok(f.mul(proj_scalar(a, b, c, f)?, proj_scalar(b, a, d, f)?))
}

/// Scalar ids of the coordinate model: nonzero field elements in element
/// order, with the unit named [`UNIT_ID`].
pub(crate) fn scalar_ids(f: &FieldTable) -> Result<Vec<String>, CoordError> {
    let mut ids = Vec::new();
    for e in 0..f.order() {
        if e == f.zero() {
            continue;
        }
        if e == f.one() {
            ids.push(UNIT_ID.to_string());
        } else if f.id(e) == UNIT_ID {
            return Err(CoordError::ReservedUnitName(f.id(e).to_string()));
        } else {
            ids.push(f.id(e).to_string());
        }
    }
    Ok(ids)
}

/// Materializes the projective line over `f` as an explicit groupoid.
///
/// Points are ordered as in [`enumerate_points`], so `(t:1)` has the index of
/// `t` and `(1:0)` comes last. Scalars are the nonzero elements in element
/// order.
pub fn generate_groupoid(f: &FieldTable) -> Result<ProjGroupoid, CoordError> {
    require_field(f)?;
    let q = f.order();
    let n = q + 1;
    let pts = points_unchecked(f);
    let index = |p: ProjPoint| if p.y == f.zero() { q } else { p.x };

    // field element <-> scalar index
    let elems: Vec<usize> = (0..q).filter(|&e| e != f.zero()).collect();
    let mut scalar_of = vec![usize::MAX; q];
    for (s, &e) in elems.iter().enumerate() {
        scalar_of[e] = s;
    }
    let m = elems.len();
    let scalar_mul: Vec<usize> = (0..m * m)
        .map(|i| scalar_of[f.mul(elems[i / m], elems[i % m])])
        .collect();

    // coefficient of c: a -> b, and label of the map a -> b with coefficient t
    let mut coeff = vec![usize::MAX; n * n * n];
    let mut label = vec![usize::MAX; n * n * q];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            for c in 0..n {
                if c != a && c != b {
                    coeff[(a * n + b) * n + c] = proj_scalar(pts[a], pts[b], pts[c], f)?;
                }
            }
            for &t in &elems {
                label[(a * n + b) * q + t] = index(label_of_map(pts[a], pts[b], t, f)?);
            }
        }
    }
    let coeff_of = |mm: Morphism| {
        if mm.is_endo() {
            elems[mm.label]
        } else {
            coeff[(mm.src * n + mm.dst) * n + mm.label]
        }
    };

    let points = pts.iter().map(|p| p.id(f)).collect();
    let g = ProjGroupoid::build(points, scalar_ids(f)?, scalar_mul, |m1, m2| {
        let t = f.mul(coeff_of(m1), coeff_of(m2));
        let (src, dst) = (m1.src, m2.dst);
        let lbl = if src == dst {
            scalar_of[t]
        } else {
            label[(src * n + dst) * q + t]
        };
        Morphism { src, dst, label: lbl }
    })?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_prime_field;

    fn pt(f: &FieldTable, x: usize, y: usize) -> ProjPoint {
        normalize(x, y, f).unwrap()
    }

    /// Brute-force oracle: group the nonzero vectors of k^2 by span.
    fn spans(f: &FieldTable) -> usize {
        let q = f.order();
        let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
        for x in 0..q {
            for y in 0..q {
                if x == f.zero() && y == f.zero() {
                    continue;
                }
                let found = classes.iter_mut().find(|cl| {
                    let (u, v) = cl[0];
                    (0..q).any(|s| s != f.zero() && f.mul(s, u) == x && f.mul(s, v) == y)
                });
                match found {
                    Some(cl) => cl.push((x, y)),
                    None => classes.push(vec![(x, y)]),
                }
            }
        }
        classes.len()
    }

    #[test]
    fn point_counts_match_span_oracle() {
        for p in [2, 3, 5] {
            let f = make_prime_field(p).unwrap();
            let pts = enumerate_points(&f).unwrap();
            assert_eq!(pts.len(), spans(&f));
            assert_eq!(pts.len(), p as usize + 1);
        }
        let f = make_prime_field(2).unwrap();
        let ids: Vec<String> = enumerate_points(&f).unwrap().iter().map(|p| p.id(&f)).collect();
        assert_eq!(ids, ["(0:1)", "(1:1)", "(1:0)"]);
    }

    #[test]
    fn determinants() {
        let f5 = make_prime_field(5).unwrap();
        let f3 = make_prime_field(3).unwrap();
        assert_eq!(det2((1, 0), (0, 1), &f5), 1);
        assert_eq!(det2((0, 1), (1, 1), &f3), 2);
        assert_eq!(det2((1, 1), (1, 1), &f5), 0);
    }

    #[test]
    fn projection_scalars() {
        let f5 = make_prime_field(5).unwrap();
        let (a, b, c) = (pt(&f5, 1, 0), pt(&f5, 0, 1), pt(&f5, 1, 1));
        assert_eq!(proj_scalar(a, b, c, &f5).unwrap(), 4);
        let f3 = make_prime_field(3).unwrap();
        let (a3, b3, c3) = (pt(&f3, 1, 0), pt(&f3, 0, 1), pt(&f3, 1, 1));
        assert_eq!(proj_scalar(a3, b3, c3, &f3).unwrap(), 2);
        assert!(matches!(proj_scalar(a, b, a, &f5), Err(CoordError::DegeneratePoints)));
    }

    #[test]
    fn labels_of_maps() {
        let f5 = make_prime_field(5).unwrap();
        let (a, b) = (pt(&f5, 1, 0), pt(&f5, 0, 1));
        assert_eq!(label_of_map(a, b, 4, &f5).unwrap(), pt(&f5, 1, 1));
        let f3 = make_prime_field(3).unwrap();
        let (a3, b3) = (pt(&f3, 1, 0), pt(&f3, 0, 1));
        assert_eq!(label_of_map(a3, b3, 2, &f3).unwrap(), pt(&f3, 1, 1));
        assert!(matches!(label_of_map(a, b, 0, &f5), Err(CoordError::ZeroCoefficient)));
        assert!(matches!(label_of_map(a, a, 1, &f5), Err(CoordError::DegeneratePoints)));
    }

    #[test]
    fn composition_examples() {
        let f = make_prime_field(5).unwrap();
        let (a, b) = (pt(&f, 1, 0), pt(&f, 0, 1));
        let (c, d, e) = (pt(&f, 2, 1), pt(&f, 3, 1), pt(&f, 1, 1));
        let m1 = CoordMorphism::projection(a, b, c, &f).unwrap();
        let m2 = CoordMorphism::projection(b, e, d, &f).unwrap();
        assert_eq!((m1.coeff, m2.coeff), (2, 4));
        let m = compose_coord(m1, m2, &f).unwrap();
        assert_eq!(m.coeff, 3);
        assert_eq!(m.label(&f).unwrap(), CoordLabel::Point(pt(&f, 4, 1)));

        let back = CoordMorphism::projection(b, a, c, &f).unwrap();
        let id = compose_coord(m1, back, &f).unwrap();
        assert_eq!(id.label(&f).unwrap(), CoordLabel::Scalar(1));

        let c11 = pt(&f, 1, 1);
        let x = CoordMorphism::projection(a, b, c11, &f).unwrap();
        let y = CoordMorphism::projection(b, a, c, &f).unwrap();
        assert_eq!(compose_coord(x, y, &f).unwrap().label(&f).unwrap(), CoordLabel::Scalar(2));

        assert!(matches!(compose_coord(m2, m1, &f), Err(CoordError::NonComposable)));
    }

    #[test]
    fn cross_ratio_examples() {
        let f5 = make_prime_field(5).unwrap();
        let f3 = make_prime_field(3).unwrap();
        let q = |f: &FieldTable| (pt(f, 1, 0), pt(f, 0, 1), pt(f, 1, 1), pt(f, 2, 1));
        let (a, b, c, d) = q(&f5);
        assert_eq!(cross_ratio_coord(a, b, c, d, &f5).unwrap(), 2);
        assert_eq!(cross_ratio_coord(a, c, b, d, &f5).unwrap(), 4);
        let (a, b, c, d) = q(&f3);
        assert_eq!(cross_ratio_coord(a, b, c, d, &f3).unwrap(), 2);
        assert!(matches!(cross_ratio_coord(a, b, c, c, &f3), Err(CoordError::DegeneratePoints)));
    }

    #[test]
    fn generated_sizes() {
        for (p, n, m) in [(2, 3, 1), (3, 4, 2), (5, 6, 4)] {
            let g = generate_groupoid(&make_prime_field(p).unwrap()).unwrap();
            assert_eq!((g.n_points(), g.n_scalars()), (n, m));
        }
    }
}
