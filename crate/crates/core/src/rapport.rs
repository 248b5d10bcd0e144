//! Bi-rapports, tri-rapports and the derived structure on the scalars.
//!
//! All functions assume the groupoid passes [`validate_structure`]; the
//! global constants (the involution on scalars and the scalar `-1`) are
//! computed on first use, checked for well-definedness, and cached.
//!
//! [`validate_structure`]: crate::groupoid::validate_structure

use std::collections::HashMap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::groupoid::{abstract_scalar_of, distinct_tuples, Morphism, ProjGroupoid};
use crate::report::{Check, ValidationReport, WitnessItem};

#[derive(Debug, Clone, Error)]
pub enum RapportError {
    #[error("points are not distinct as required")]
    DegeneratePoints,
    #[error("the identity scalar is not a cross ratio of distinct points")]
    IdentityScalar,
    #[error("no fourth point closes the triangle")]
    NoSolution(Vec<WitnessItem>),
    #[error("axiom violation: {what}")]
    AxiomViolation {
        what: String,
        witness: Vec<WitnessItem>,
    },
    #[error("-1 = 1, so every point is its own harmonic conjugate")]
    SelfConjugate,
    #[error("reference tri-rapport is not the identity")]
    ReferenceNotUnit,
    #[error("needs at least {needed} points, groupoid has {found}")]
    TooFewPoints { needed: usize, found: usize },
}

fn violation(what: impl Into<String>, witness: Vec<WitnessItem>) -> RapportError {
    RapportError::AxiomViolation {
        what: what.into(),
        witness,
    }
}

fn distinct(ps: &[usize]) -> bool {
    ps.iter().enumerate().all(|(i, p)| !ps[..i].contains(p))
}

/// The involution on non-identity scalars induced by middle-four
/// interchange. `images[s]` is `None` for the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiMap {
    pub images: Vec<Option<usize>>,
}

impl PhiMap {
    pub fn get(&self, s: usize) -> Option<usize> {
        self.images.get(s).copied().flatten()
    }

    pub fn is_empty(&self) -> bool {
        self.images.iter().all(Option::is_none)
    }
}

/// One of the twelve scalars attached to four points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwelveEntry {
    /// Classical name in terms of `mu = (A,B;C,D)`, e.g. `Phi(mu^-1)` or `-mu`.
    pub name: String,
    /// The tri-rapport `(P,Q,R;X,Y,Z)` realizing the value.
    pub tri: [usize; 6],
    pub value: usize,
}

/// Rapport calculus over one groupoid.
pub struct RapportEngine<'g> {
    g: &'g ProjGroupoid,
    phi: OnceLock<Result<PhiMap, RapportError>>,
    minus_one: OnceLock<Result<usize, RapportError>>,
}

impl<'g> RapportEngine<'g> {
    pub fn new(g: &'g ProjGroupoid) -> Self {
        RapportEngine {
            g,
            phi: OnceLock::new(),
            minus_one: OnceLock::new(),
        }
    }

    pub fn groupoid(&self) -> &'g ProjGroupoid {
        self.g
    }

    fn scalar(&self, m: Morphism) -> usize {
        abstract_scalar_of(self.g, m).expect("rapport composites are endomorphisms")
    }

    fn pts(&self, ps: &[usize]) -> Vec<WitnessItem> {
        ps.iter().map(|&p| self.g.point_item(p)).collect()
    }

    /// `(A,B;C,D)`: the scalar of `A -C-> B -D-> A`.
    pub fn cross_ratio(&self, a: usize, b: usize, c: usize, d: usize) -> Result<usize, RapportError> {
        if !distinct(&[a, b, c, d]) {
            return Err(RapportError::DegeneratePoints);
        }
        Ok(self.cr(a, b, c, d))
    }

    fn cr(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        let g = self.g;
        self.scalar(g.compose(g.arrow(a, b, c), g.arrow(b, a, d)))
    }

    /// The unique `D` with `(A,B;C,D) = mu`, obtained by dividing the scalar
    /// `mu` at `A` by the arrow `C: A -> B`.
    pub fn solve_fourth_point(&self, mu: usize, a: usize, b: usize, c: usize) -> Result<usize, RapportError> {
        let g = self.g;
        if mu == g.unit() {
            return Err(RapportError::IdentityScalar);
        }
        if !distinct(&[a, b, c]) {
            return Err(RapportError::DegeneratePoints);
        }
        let first = g.arrow(a, b, c);
        let back = g
            .inverse(first)
            .ok_or_else(|| RapportError::NoSolution(vec![g.item(first)]))?;
        let closing = g.compose(back, g.endo(a, mu));
        let d = closing.label;
        if closing.is_endo() || d == c || self.cr(a, b, c, d) != mu {
            return Err(RapportError::NoSolution(vec![g.item(first), g.item(closing)]));
        }
        Ok(d)
    }

    /// The involution `Phi` with `(A,C;B,D) = Phi((A,B;C,D))`, checked to be
    /// well defined, total on the non-identity scalars, and an involution.
    /// Empty on three points.
    pub fn phi(&self) -> Result<&PhiMap, RapportError> {
        self.phi
            .get_or_init(|| self.derive_phi())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn derive_phi(&self) -> Result<PhiMap, RapportError> {
        let g = self.g;
        let mut images: Vec<Option<usize>> = vec![None; g.n_scalars()];
        let mut source: Vec<Option<Vec<usize>>> = vec![None; g.n_scalars()];
        let quads = distinct_tuples(g.n_points(), 4);
        if quads.is_empty() {
            return Ok(PhiMap { images });
        }
        for q in &quads {
            let (a, b, c, d) = (q[0], q[1], q[2], q[3]);
            let v = self.cr(a, b, c, d);
            let w = self.cr(a, c, b, d);
            if v == g.unit() || w == g.unit() {
                return Err(violation("cross ratio of distinct points is 1", self.pts(q)));
            }
            match images[v] {
                Some(w0) if w0 != w => {
                    let mut wit = self.pts(source[v].as_ref().unwrap());
                    wit.extend(self.pts(q));
                    return Err(violation("middle-four interchange does not descend", wit));
                }
                Some(_) => {}
                None => {
                    images[v] = Some(w);
                    source[v] = Some(q.clone());
                }
            }
        }
        for s in 0..g.n_scalars() {
            if s == g.unit() {
                continue;
            }
            match images[s] {
                None => return Err(violation("scalar is not a cross ratio", vec![g.scalar_item(s)])),
                Some(t) if images[t] != Some(s) => {
                    return Err(violation("Phi is not an involution", vec![g.scalar_item(s), g.scalar_item(t)]));
                }
                Some(_) => {}
            }
        }
        Ok(PhiMap { images })
    }

    /// `(A,B,C;X,Y,Z)`: the scalar of `A -X-> B -Y-> C -Z-> A`.
    pub fn tri_rapport(
        &self,
        a: usize,
        b: usize,
        c: usize,
        x: usize,
        y: usize,
        z: usize,
    ) -> Result<usize, RapportError> {
        if !distinct(&[a, b, c]) || [a, b].contains(&x) || [b, c].contains(&y) || [c, a].contains(&z) {
            return Err(RapportError::DegeneratePoints);
        }
        Ok(self.tri(a, b, c, x, y, z))
    }

    fn tri(&self, a: usize, b: usize, c: usize, x: usize, y: usize, z: usize) -> usize {
        let g = self.g;
        self.scalar(g.compose_path(&[g.arrow(a, b, x), g.arrow(b, c, y), g.arrow(c, a, z)]))
    }

    /// The common value of `(A,B,C;C,A,B)` over all distinct triples,
    /// checked to be triple-independent and to square to 1.
    pub fn minus_one(&self) -> Result<usize, RapportError> {
        self.minus_one
            .get_or_init(|| self.derive_minus_one())
            .clone()
    }

    fn derive_minus_one(&self) -> Result<usize, RapportError> {
        let g = self.g;
        let triples = distinct_tuples(g.n_points(), 3);
        let t0 = &triples[0];
        let value = self.tri(t0[0], t0[1], t0[2], t0[2], t0[0], t0[1]);
        for t in &triples[1..] {
            if self.tri(t[0], t[1], t[2], t[2], t[0], t[1]) != value {
                let mut wit = self.pts(t0);
                wit.extend(self.pts(t));
                return Err(violation("(A,B,C;C,A,B) depends on the triple", wit));
            }
        }
        if g.scalar_mul(value, value) != g.unit() {
            return Err(violation("(-1).(-1) != 1", vec![g.scalar_item(value)]));
        }
        Ok(value)
    }

    /// `(-1) . s`.
    pub fn negate(&self, s: usize) -> Result<usize, RapportError> {
        Ok(self.g.scalar_mul(self.minus_one()?, s))
    }

    /// The `H` with `(A,B;C,H) = -1`, checked against the characterization
    /// `H: B -> A` = `B -A-> C -B-> A`.
    pub fn harmonic_conjugate(&self, a: usize, b: usize, c: usize) -> Result<usize, RapportError> {
        let g = self.g;
        if !distinct(&[a, b, c]) {
            return Err(RapportError::DegeneratePoints);
        }
        let m1 = self.minus_one()?;
        if m1 == g.unit() {
            return Err(RapportError::SelfConjugate);
        }
        let h = self.solve_fourth_point(m1, a, b, c)?;
        let via = g.compose(g.arrow(b, c, a), g.arrow(c, a, b));
        if g.arrow(b, a, h) != via {
            return Err(violation(
                "harmonic conjugate does not match B -A-> C -B-> A",
                vec![g.item(g.arrow(b, a, h)), g.item(via)],
            ));
        }
        Ok(h)
    }

    /// Confirms that each of the 24 permutations of a 4-tuple descends along
    /// cross-ratio formation, that the four generators descend to the
    /// identity, the identity, inversion and `Phi`, and that every orbit lies
    /// in the six classical values.
    pub fn permutation_descent_report(&self) -> Result<ValidationReport, RapportError> {
        let g = self.g;
        let n = g.n_points();
        if n < 4 {
            return Err(RapportError::TooFewPoints { needed: 4, found: n });
        }
        let phi = self.phi()?;
        let inv = |s: usize| g.scalar_inv(s).expect("scalar group has inverses");
        let quads = distinct_tuples(n, 4);
        let apply = |q: &[usize], sigma: [usize; 4]| [q[sigma[0]], q[sigma[1]], q[sigma[2]], q[sigma[3]]];
        let value = |q: [usize; 4]| self.cr(q[0], q[1], q[2], q[3]);

        type Descended<'a> = Box<dyn Fn(usize) -> Option<usize> + 'a>;
        let generators: [(&str, [usize; 4], Descended); 4] = [
            ("descent_row_swap", [2, 3, 0, 1], Box::new(Some)),
            ("descent_column_swap", [1, 0, 3, 2], Box::new(Some)),
            ("descent_lower_swap", [0, 1, 3, 2], Box::new(|s| Some(inv(s)))),
            ("descent_middle_four", [0, 2, 1, 3], Box::new(|s| phi.get(s))),
        ];
        let mut report = ValidationReport::new();
        for (name, sigma, expected) in &generators {
            let bad = quads.iter().find(|q| {
                let v = value([q[0], q[1], q[2], q[3]]);
                expected(v) != Some(value(apply(q, *sigma)))
            });
            report.push(match bad {
                None => Check::pass(*name),
                Some(q) => Check::fail(*name, self.pts(q)),
            });
        }

        let perms = distinct_tuples(4, 4);
        let mut all_descend = Ok(());
        'perm: for sigma in &perms {
            let sigma = [sigma[0], sigma[1], sigma[2], sigma[3]];
            let mut seen: HashMap<usize, (&Vec<usize>, usize)> = HashMap::new();
            for q in &quads {
                let v = value([q[0], q[1], q[2], q[3]]);
                let w = value(apply(q, sigma));
                match seen.get(&v) {
                    Some(&(q0, w0)) if w0 != w => {
                        let mut wit = vec![WitnessItem::Note(format!("sigma={sigma:?}"))];
                        wit.extend(self.pts(q0));
                        wit.extend(self.pts(q));
                        all_descend = Err(wit);
                        break 'perm;
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(v, (q, w));
                    }
                }
            }
        }
        report.push(Check::from_result("descent_all_24", all_descend));

        let orbit = quads.iter().find(|q| {
            let mu = value([q[0], q[1], q[2], q[3]]);
            let six = six_values(mu, phi, &inv);
            perms.iter().any(|sigma| {
                let w = value(apply(q, [sigma[0], sigma[1], sigma[2], sigma[3]]));
                !six.contains(&Some(w))
            })
        });
        report.push(match orbit {
            None => Check::pass("orbit_six_values"),
            Some(q) => Check::fail("orbit_six_values", self.pts(q)),
        });
        Ok(report)
    }

    /// The six classical values of `(A,B;C,D)` and their negatives, each
    /// realized as a tri-rapport over the four given points.
    ///
    /// A cross ratio `(P,Q;R,S)` equals the tri-rapport `(P,R,S;Q,P,Q)`, and
    /// by the sign-change law its negative equals `(P,R,Q;Q,P,S)`. Both
    /// identities are checked against the direct values for every entry.
    pub fn twelve_scalars(&self, a: usize, b: usize, c: usize, d: usize) -> Result<Vec<TwelveEntry>, RapportError> {
        if !distinct(&[a, b, c, d]) {
            return Err(RapportError::DegeneratePoints);
        }
        let classical: [(&str, [usize; 4]); 6] = [
            ("mu", [a, b, c, d]),
            ("mu^-1", [a, b, d, c]),
            ("Phi(mu)", [a, c, b, d]),
            ("Phi(mu)^-1", [a, c, d, b]),
            ("Phi(mu^-1)", [a, d, b, c]),
            ("Phi(mu^-1)^-1", [a, d, c, b]),
        ];
        let mut out = Vec::with_capacity(12);
        for (name, [p, q, r, s]) in classical {
            let bi = self.cr(p, q, r, s);
            let tri = [p, r, s, q, p, q];
            let v = self.tri(p, r, s, q, p, q);
            if v != bi {
                return Err(violation("(P,Q;R,S) != (P,R,S;Q,P,Q)", self.pts(&[p, q, r, s])));
            }
            out.push(TwelveEntry {
                name: name.to_string(),
                tri,
                value: v,
            });
        }
        for i in 0..6 {
            let [p, r, s, q, _, _] = out[i].tri;
            let tri = [p, r, q, q, p, s];
            let v = self.tri(p, r, q, q, p, s);
            if v != self.negate(out[i].value)? {
                return Err(violation("sign change law fails", self.pts(&[p, q, r, s])));
            }
            out.push(TwelveEntry {
                name: format!("-{}", out[i].name),
                tri,
                value: v,
            });
        }
        Ok(out)
    }

    /// `(A,B;E,E').(B,C;F,F').(C,A;H,H')`, given a reference tri-rapport
    /// `(A,B,C;E',F',H') = 1`. A factor whose two lower entries coincide is
    /// taken to be 1. The product is checked against `(A,B,C;E,F,H)`.
    pub fn tri_as_birapport_product(
        &self,
        [a, b, c]: [usize; 3],
        [e, f, h]: [usize; 3],
        [e1, f1, h1]: [usize; 3],
    ) -> Result<usize, RapportError> {
        let g = self.g;
        let direct = self.tri_rapport(a, b, c, e, f, h)?;
        if self.tri_rapport(a, b, c, e1, f1, h1)? != g.unit() {
            return Err(RapportError::ReferenceNotUnit);
        }
        let factor = |p, q, x, x1| if x == x1 { g.unit() } else { self.cr(p, q, x, x1) };
        let product = g.scalar_mul(
            g.scalar_mul(factor(a, b, e, e1), factor(b, c, f, f1)),
            factor(c, a, h, h1),
        );
        if product != direct {
            return Err(violation(
                "tri-rapport differs from the product of three cross ratios",
                self.pts(&[a, b, c, e, f, h, e1, f1, h1]),
            ));
        }
        Ok(product)
    }

    /// Labels `(E',F',H')` with `(A,B,C;E',F',H') = 1`: the least distinct
    /// `E', F'` outside `{A,B,C}`, closed by the label of `E': A -> B`
    /// followed by `F': B -> C`.
    pub fn find_unit_reference(&self, a: usize, b: usize, c: usize) -> Result<[usize; 3], RapportError> {
        let g = self.g;
        let n = g.n_points();
        if n < 5 {
            return Err(RapportError::TooFewPoints { needed: 5, found: n });
        }
        if !distinct(&[a, b, c]) {
            return Err(RapportError::DegeneratePoints);
        }
        let others: Vec<usize> = (0..n).filter(|p| ![a, b, c].contains(p)).collect();
        for &e1 in &others {
            for &f1 in &others {
                if e1 == f1 {
                    continue;
                }
                let h1 = g.compose(g.arrow(a, b, e1), g.arrow(b, c, f1)).label;
                if self.tri(a, b, c, e1, f1, h1) == g.unit() {
                    return Ok([e1, f1, h1]);
                }
            }
        }
        Err(violation("no unit reference tri-rapport", self.pts(&[a, b, c])))
    }
}

/// `{mu, mu^-1, Phi mu, (Phi mu)^-1, Phi(mu^-1), (Phi(mu^-1))^-1}`; entries
/// are `None` where `Phi` is undefined.
pub fn six_values(mu: usize, phi: &PhiMap, inv: &dyn Fn(usize) -> usize) -> [Option<usize>; 6] {
    let p = phi.get(mu);
    let pi = phi.get(inv(mu));
    [Some(mu), Some(inv(mu)), p, p.map(inv), pi, pi.map(inv)]
}
