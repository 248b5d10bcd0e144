//! Exhaustive enumeration of small groupoids with projection structure, up
//! to isomorphism.
//!
//! A structurally valid groupoid on points `0..n` with vertex group `G` is
//! pinned down by one element of `G` per non-endo arrow: fix for each `X != 0`
//! the anchor `t_X`, the arrow `0 -> X` of least label, and write every arrow
//! `f: A -> B` as `t_A^-1 . v(f) . t_B` with `v(f)` in `G` (and `t_0 = 1`).
//! Composition adds values, each hom-set is a bijection from its labels onto
//! `G`, and the anchors have value 0. Axioms 1, 2 and 4 are linear equations
//! in these values and prune the search as soon as their last variable is
//! set; Axiom 3 and the `-1` filter are applied to complete tables.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde_json::json;
use thiserror::Error;

use crate::coordinatize::Projectivity;
use crate::groupoid::{check_axioms, distinct_tuples, validate_structure, Morphism, ProjGroupoid, UNIT_ID};
use crate::rapport::RapportEngine;
use crate::report::ValidationReport;

/// Unconstrained searches larger than this many labeled tables are refused.
const MAX_UNPRUNED: f64 = 1e7;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("{0} points is out of range (3..=5, or 6 with the large-size override)")]
    SizeOutOfRange(usize),
    #[error("search space of about {0:.1e} labeled tables is too large without Axiom 1")]
    SearchInfeasible(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A finite abelian group `Z_d1 x ... x Z_dk`, elements in mixed radix with
/// the first factor varying slowest. Element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    factors: Vec<usize>,
}

impl AbelianGroup {
    pub fn new(factors: Vec<usize>) -> Self {
        AbelianGroup { factors }
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().product()
    }

    fn digits(&self, mut x: usize) -> Vec<usize> {
        let mut d = vec![0; self.factors.len()];
        for i in (0..self.factors.len()).rev() {
            d[i] = x % self.factors[i];
            x /= self.factors[i];
        }
        d
    }

    fn undigits(&self, d: &[usize]) -> usize {
        d.iter().zip(&self.factors).fold(0, |acc, (&x, &f)| acc * f + x)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<usize> = (0..self.factors.len())
            .map(|i| (da[i] + db[i]) % self.factors[i])
            .collect();
        self.undigits(&sum)
    }

    pub fn neg(&self, a: usize) -> usize {
        let d: Vec<usize> = self
            .digits(a)
            .iter()
            .zip(&self.factors)
            .map(|(&x, &f)| (f - x) % f)
            .collect();
        self.undigits(&d)
    }

    /// Multiplicative ids: `1`, then words in generators `g, h, ...`.
    pub fn ids(&self) -> Vec<String> {
        const GENS: &[char] = &['g', 'h', 'k', 'l'];
        (0..self.order())
            .map(|x| {
                let word: String = self
                    .digits(x)
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| match e {
                        1 => GENS[i].to_string(),
                        _ => format!("{}{e}", GENS[i]),
                    })
                    .collect();
                if word.is_empty() {
                    UNIT_ID.to_string()
                } else {
                    word
                }
            })
            .collect()
    }

    pub fn table(&self) -> Vec<usize> {
        let m = self.order();
        (0..m * m).map(|i| self.add(i / m, i % m)).collect()
    }

    /// Automorphisms as permutations of the elements, lexicographic.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let m = self.order();
        distinct_tuples(m, m)
            .into_iter()
            .filter(|p| (0..m).all(|a| (0..m).all(|b| p[self.add(a, b)] == self.add(p[a], p[b]))))
            .collect()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "C1");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("C{d}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// All abelian groups of order `m` up to isomorphism, by invariant factors.
pub fn abelian_groups(m: usize) -> Vec<AbelianGroup> {
    fn partitions(e: usize, max: usize) -> Vec<Vec<usize>> {
        if e == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=e.min(max)).rev() {
            for mut rest in partitions(e - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut primes = Vec::new();
    let mut r = m;
    let mut p = 2;
    while r > 1 {
        let mut e = 0;
        while r % p == 0 {
            r /= p;
            e += 1;
        }
        if e > 0 {
            primes.push((p, e));
        }
        p += 1;
    }
    let mut groups: Vec<Vec<usize>> = vec![vec![]];
    for (p, e) in primes {
        let mut next = Vec::new();
        for g in &groups {
            for part in partitions(e, e) {
                let mut factors = g.clone();
                factors.resize(factors.len().max(part.len()), 1);
                for (i, k) in part.iter().enumerate() {
                    factors[i] *= p.pow(*k as u32);
                }
                next.push(factors);
            }
        }
        groups = next;
    }
    groups.into_iter().map(AbelianGroup::new).collect()
}

/// Which value of `-1` a model must have to be kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MinusOneFilter {
    #[default]
    Any,
    /// `-1 != 1`.
    Distinct,
    /// `-1 = 1`.
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub points: usize,
    /// `axioms[i]` requires Axiom `i + 1`.
    pub axioms: [bool; 4],
    pub minus_one: MinusOneFilter,
    /// Permits six points.
    pub allow_large: bool,
}

impl SearchConfig {
    pub fn new(points: usize, axioms: &[u8]) -> Self {
        let mut flags = [false; 4];
        for &a in axioms {
            if (1..=4).contains(&a) {
                flags[a as usize - 1] = true;
            }
        }
        SearchConfig {
            points,
            axioms: flags,
            minus_one: MinusOneFilter::Any,
            allow_large: false,
        }
    }

    pub fn with_minus_one(mut self, filter: MinusOneFilter) -> Self {
        self.minus_one = filter;
        self
    }
}

/// One isomorphism class of surviving models.
#[derive(Debug, Clone)]
pub struct IsoClass {
    /// Canonical representative: least table over all relabelings.
    pub representative: ProjGroupoid,
    pub group: AbelianGroup,
    /// Number of labeled tables in the class.
    pub member_count: usize,
    /// First labeled table found in the class.
    pub first_member: ProjGroupoid,
    /// Isomorphism from `first_member` onto `representative`.
    pub witness: Projectivity,
    pub axioms: ValidationReport,
    /// Scalar id of `-1`, when it is well defined.
    pub minus_one: Option<String>,
    code: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub point_count: usize,
    /// Number of labeled tables that passed every filter.
    pub labeled_count: usize,
    /// Ordered by group, then canonical table.
    pub classes: Vec<IsoClass>,
    pub warnings: Vec<String>,
}

/// Value variables: one per non-endo arrow `(a, b, c)`.
struct Layout {
    n: usize,
    vars: Vec<(usize, usize, usize)>,
    index: Vec<usize>,
}

impl Layout {
    fn new(n: usize) -> Self {
        let mut vars = Vec::new();
        let mut index = vec![usize::MAX; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if a != b && c != a && c != b {
                        index[(a * n + b) * n + c] = vars.len();
                        vars.push((a, b, c));
                    }
                }
            }
        }
        Layout { n, vars, index }
    }

    fn var(&self, a: usize, b: usize, c: usize) -> usize {
        self.index[(a * self.n + b) * self.n + c]
    }

    fn anchor(&self, x: usize) -> usize {
        let c = (1..self.n).find(|&c| c != x).expect("three points");
        self.var(0, x, c)
    }
}

/// `sum coeff * value = 0` over the group.
struct Constraint {
    terms: Vec<(usize, i64)>,
}

fn constraint(terms: &[(usize, i64)]) -> Option<Constraint> {
    let mut merged: Vec<(usize, i64)> = Vec::new();
    for &(v, k) in terms {
        match merged.iter_mut().find(|(w, _)| *w == v) {
            Some(t) => t.1 += k,
            None => merged.push((v, k)),
        }
    }
    merged.retain(|&(_, k)| k != 0);
    (!merged.is_empty()).then_some(Constraint { terms: merged })
}

fn linear_constraints(l: &Layout, axioms: [bool; 4]) -> Vec<Constraint> {
    let n = l.n;
    let mut out = Vec::new();
    let triples = distinct_tuples(n, 3);
    let quads = distinct_tuples(n, 4);
    if axioms[0] {
        for t in &triples {
            let (a, b, c) = (t[0], t[1], t[2]);
            out.extend(constraint(&[(l.var(a, b, c), 1), (l.var(b, a, c), 1)]));
        }
        for q in &quads {
            let (a, b, c, d) = (q[0], q[1], q[2], q[3]);
            out.extend(constraint(&[(l.var(a, b, c), 1), (l.var(b, d, c), 1), (l.var(a, d, c), -1)]));
        }
    }
    if axioms[1] {
        for q in &quads {
            let (a, b, c, d) = (q[0], q[1], q[2], q[3]);
            out.extend(constraint(&[
                (l.var(a, b, c), 1),
                (l.var(b, a, d), 1),
                (l.var(c, d, a), -1),
                (l.var(d, c, b), -1),
            ]));
        }
    }
    if axioms[3] {
        for q in &quads {
            let (a, b, c, d) = (q[0], q[1], q[2], q[3]);
            out.extend(constraint(&[
                (l.var(a, b, c), 1),
                (l.var(b, c, a), 1),
                (l.var(c, a, b), 1),
                (l.var(a, b, d), -1),
                (l.var(b, d, a), -1),
                (l.var(d, a, b), -1),
            ]));
        }
    }
    out
}

fn times(g: &AbelianGroup, k: i64, x: usize) -> usize {
    let base = if k < 0 { g.neg(x) } else { x };
    (0..k.unsigned_abs()).fold(0, |acc, _| g.add(acc, base))
}

struct Search<'a> {
    layout: &'a Layout,
    group: &'a AbelianGroup,
    /// Constraints keyed by their last variable.
    checks: Vec<Vec<Constraint>>,
    anchors: Vec<bool>,
    values: Vec<usize>,
    used: Vec<u64>,
}

impl Search<'_> {
    fn hom_set(&self, v: usize) -> usize {
        let (a, b, _) = self.layout.vars[v];
        a * self.layout.n + b
    }

    fn consistent(&self, v: usize) -> bool {
        self.checks[v].iter().all(|c| {
            c.terms
                .iter()
                .fold(0, |acc, &(w, k)| self.group.add(acc, times(self.group, k, self.values[w])))
                == 0
        })
    }

    fn run(&mut self, v: usize, leaf: &mut dyn FnMut(&[usize])) {
        if v == self.values.len() {
            leaf(&self.values);
            return;
        }
        let h = self.hom_set(v);
        let candidates = if self.anchors[v] { 0..1 } else { 0..self.group.order() };
        for x in candidates {
            if self.used[h] & (1 << x) != 0 {
                continue;
            }
            self.values[v] = x;
            if !self.consistent(v) {
                continue;
            }
            self.used[h] |= 1 << x;
            self.run(v + 1, leaf);
            self.used[h] &= !(1 << x);
        }
    }
}

fn point_names(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'A' + i as u8) as char).to_string()).collect()
}

/// The groupoid with the given arrow values.
fn materialize(l: &Layout, group: &AbelianGroup, values: &[usize]) -> ProjGroupoid {
    let n = l.n;
    let m = group.order();
    let mut label_of = vec![usize::MAX; n * n * m];
    for (v, &(a, b, c)) in l.vars.iter().enumerate() {
        label_of[(a * n + b) * m + values[v]] = c;
    }
    let value = |f: Morphism| if f.is_endo() { f.label } else { values[l.var(f.src, f.dst, f.label)] };
    ProjGroupoid::build(point_names(n), group.ids(), group.table(), |f, h| {
        let s = group.add(value(f), value(h));
        let (src, dst) = (f.src, h.dst);
        let label = if src == dst { s } else { label_of[(src * n + dst) * m + s] };
        Morphism { src, dst, label }
    })
    .expect("value tables give well-typed composites")
}

/// Every composite of two non-endo arrows, in a fixed order, after
/// relabeling points by `sigma` and scalars by `alpha`. Stops early once
/// the code is known to exceed `bound`.
fn relabeled_code(g: &ProjGroupoid, sigma: &[usize], alpha: &[usize], bound: Option<&[usize]>) -> Option<Vec<usize>> {
    let n = g.n_points();
    let mut inv = vec![0; n];
    for (i, &s) in sigma.iter().enumerate() {
        inv[s] = i;
    }
    let mut code = Vec::new();
    let mut tied = bound.is_some();
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            for c in (0..n).filter(|&c| c != a && c != b) {
                for d in (0..n).filter(|&d| d != b) {
                    for e in (0..n).filter(|&e| e != b && e != d) {
                        let f = g.arrow(inv[a], inv[b], inv[c]);
                        let h = g.arrow(inv[b], inv[d], inv[e]);
                        let r = g.compose(f, h);
                        let x = if r.is_endo() { alpha[r.label] } else { sigma[r.label] };
                        if tied {
                            let y = bound.unwrap()[code.len()];
                            if x > y {
                                return None;
                            }
                            if x < y {
                                tied = false;
                            }
                        }
                        code.push(x);
                    }
                }
            }
        }
    }
    Some(code)
}

/// The groupoid `g` with points relabeled by `sigma` and scalars by `alpha`.
fn relabel(g: &ProjGroupoid, sigma: &[usize], alpha: &[usize]) -> ProjGroupoid {
    let pr = Projectivity {
        point_map: sigma.to_vec(),
        scalar_map: alpha.to_vec(),
    };
    let back = pr.inverse().expect("relabelings are bijections");
    let m = g.n_scalars();
    let mut mul = vec![0; m * m];
    for s in 0..m {
        for t in 0..m {
            mul[alpha[s] * m + alpha[t]] = alpha[g.scalar_mul(s, t)];
        }
    }
    ProjGroupoid::build(g.points().to_vec(), g.scalars().to_vec(), mul, |f, h| {
        pr.apply(g.compose(back.apply(f), back.apply(h)))
    })
    .expect("relabeling preserves typing")
}

fn canonical(g: &ProjGroupoid, autos: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let n = g.n_points();
    let mut best: Option<(Vec<usize>, Vec<usize>, Vec<usize>)> = None;
    for sigma in distinct_tuples(n, n) {
        for alpha in autos {
            if let Some(code) = relabeled_code(g, &sigma, alpha, best.as_ref().map(|b| b.0.as_slice())) {
                best = Some((code, sigma.clone(), alpha.clone()));
            }
        }
    }
    best.expect("at least one relabeling")
}

fn estimate(n: usize, m: usize) -> f64 {
    let fact: f64 = (1..=m).map(|x| x as f64).product();
    fact.powi((n * (n - 1)) as i32) / (m as f64).powi(n as i32 - 1)
}

/// All groupoids with projection structure on `config.points` points passing
/// the requested axioms and `-1` filter, classified up to isomorphism.
pub fn enumerate_models(config: &SearchConfig) -> Result<SearchResult, SearchError> {
    let n = config.points;
    let ceiling = if config.allow_large { 6 } else { 5 };
    if !(3..=ceiling).contains(&n) {
        return Err(SearchError::SizeOutOfRange(n));
    }
    let mut warnings = Vec::new();
    if n > 5 {
        warnings.push(format!("searching {n} points; this may take a long time"));
    }
    let m = n - 2;
    if !config.axioms[0] && estimate(n, m) > MAX_UNPRUNED {
        return Err(SearchError::SearchInfeasible(estimate(n, m)));
    }

    let layout = Layout::new(n);
    let mut classes: Vec<IsoClass> = Vec::new();
    let mut labeled_count = 0;
    for (gi, group) in abelian_groups(m).into_iter().enumerate() {
        let autos = group.automorphisms();
        let mut checks: Vec<Vec<Constraint>> = (0..layout.vars.len()).map(|_| Vec::new()).collect();
        for c in linear_constraints(&layout, config.axioms) {
            let last = c.terms.iter().map(|t| t.0).max().unwrap();
            checks[last].push(c);
        }
        let mut anchors = vec![false; layout.vars.len()];
        for x in 1..n {
            anchors[layout.anchor(x)] = true;
        }
        let mut search = Search {
            layout: &layout,
            group: &group,
            checks,
            anchors,
            values: vec![0; layout.vars.len()],
            used: vec![0; n * n],
        };
        let mut by_code: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut found: Vec<IsoClass> = Vec::new();
        search.run(0, &mut |values| {
            let g = materialize(&layout, &group, values);
            if !validate_structure(&g).is_clean() {
                return;
            }
            let report = check_axioms(&g).expect("structurally valid");
            let required_ok = (0..4).all(|i| !config.axioms[i] || report.passed(&format!("axiom{}", i + 1)));
            if !required_ok {
                return;
            }
            let minus_one = RapportEngine::new(&g).minus_one().ok();
            let keep = match config.minus_one {
                MinusOneFilter::Any => true,
                MinusOneFilter::Distinct => minus_one.is_some_and(|s| s != g.unit()),
                MinusOneFilter::Trivial => minus_one == Some(g.unit()),
            };
            if !keep {
                return;
            }
            labeled_count += 1;
            let (mut code, sigma, alpha) = canonical(&g, &autos);
            code.insert(0, gi);
            if let Some(&k) = by_code.get(&code) {
                found[k].member_count += 1;
                return;
            }
            by_code.insert(code.clone(), found.len());
            let representative = relabel(&g, &sigma, &alpha);
            let axioms = check_axioms(&representative).expect("structurally valid");
            found.push(IsoClass {
                minus_one: minus_one.map(|s| g.scalar_id(s).to_string()),
                representative,
                group: group.clone(),
                member_count: 1,
                first_member: g,
                witness: Projectivity {
                    point_map: sigma,
                    scalar_map: alpha,
                },
                axioms,
                code,
            });
        });
        classes.extend(found);
    }
    classes.sort_by(|a, b| a.code.cmp(&b.code));
    Ok(SearchResult {
        point_count: n,
        labeled_count,
        classes,
        warnings,
    })
}

/// Writes one groupoid file per class and a `summary.json`.
pub fn export_results(result: &SearchResult, config: &SearchConfig, dir: impl AsRef<Path>) -> Result<(), SearchError> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let mut entries = Vec::new();
    for (i, class) in result.classes.iter().enumerate() {
        let file = format!("class_{i}.groupoid.json");
        std::fs::write(dir.join(&file), class.representative.to_json())?;
        let axioms: serde_json::Map<String, serde_json::Value> = class
            .axioms
            .checks
            .iter()
            .map(|c| (c.name.clone(), json!(c.passed)))
            .collect();
        entries.push(json!({
            "file": file,
            "group": class.group.to_string(),
            "members": class.member_count,
            "minus_one": class.minus_one,
            "axioms": axioms,
        }));
    }
    let requested: Vec<usize> = (0..4).filter(|&i| config.axioms[i]).map(|i| i + 1).collect();
    let filter = match config.minus_one {
        MinusOneFilter::Any => "any",
        MinusOneFilter::Distinct => "distinct",
        MinusOneFilter::Trivial => "trivial",
    };
    let summary = json!({
        "points": result.point_count,
        "axioms": requested,
        "minus_one_filter": filter,
        "labeled_models": result.labeled_count,
        "classes": entries,
    });
    let mut text = serde_json::to_string_pretty(&summary).expect("json values serialize");
    text.push('\n');
    std::fs::write(dir.join("summary.json"), text)?;
    Ok(())
}

/// Whether `pr` is a bijective, composition-preserving map from `g1` to
/// `g2` that is also an isomorphism of scalar groups.
pub fn is_isomorphism(g1: &ProjGroupoid, g2: &ProjGroupoid, pr: &Projectivity) -> bool {
    if g1.n_points() != g2.n_points()
        || g1.n_scalars() != g2.n_scalars()
        || pr.point_map.len() != g1.n_points()
        || pr.scalar_map.len() != g1.n_scalars()
        || pr.inverse().is_none()
    {
        return false;
    }
    let m = g1.n_scalars();
    let scalars_ok = (0..m).all(|s| {
        (0..m).all(|t| pr.scalar_map[g1.scalar_mul(s, t)] == g2.scalar_mul(pr.scalar_map[s], pr.scalar_map[t]))
    });
    scalars_ok
        && g1.morphisms().all(|f| {
            g1.out_of(f.dst)
                .all(|h| pr.apply(g1.compose(f, h)) == g2.compose(pr.apply(f), pr.apply(h)))
        })
}

/// The first isomorphism `g1 -> g2` in lexicographic order of point maps,
/// if any. The scalar map is forced by the point map.
pub fn iso_check(g1: &ProjGroupoid, g2: &ProjGroupoid) -> Option<Projectivity> {
    let n = g1.n_points();
    if n != g2.n_points() || g1.n_scalars() != g2.n_scalars() {
        return None;
    }
    // each scalar as a composite 0 -c-> b -d-> 0
    let mut reps: Vec<Option<(usize, usize, usize)>> = vec![None; g1.n_scalars()];
    for b in 1..n {
        for c in (1..n).filter(|&c| c != b) {
            for d in (1..n).filter(|&d| d != b) {
                let s = g1.compose(g1.arrow(0, b, c), g1.arrow(b, 0, d)).label;
                reps[s].get_or_insert((b, c, d));
            }
        }
    }
    if reps.iter().any(Option::is_none) {
        return None;
    }
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];
    iso_extend(g1, g2, &reps, &mut sigma, &mut used, 0)
}

fn iso_extend(
    g1: &ProjGroupoid,
    g2: &ProjGroupoid,
    reps: &[Option<(usize, usize, usize)>],
    sigma: &mut Vec<usize>,
    used: &mut Vec<bool>,
    k: usize,
) -> Option<Projectivity> {
    let n = g1.n_points();
    if k == n {
        let scalar_map = reps
            .iter()
            .map(|r| {
                let (b, c, d) = r.expect("checked");
                g2.compose(g2.arrow(sigma[0], sigma[b], sigma[c]), g2.arrow(sigma[b], sigma[0], sigma[d]))
                    .label
            })
            .collect();
        let pr = Projectivity {
            point_map: sigma.clone(),
            scalar_map,
        };
        return is_isomorphism(g1, g2, &pr).then_some(pr);
    }
    for x in 0..n {
        if used[x] {
            continue;
        }
        sigma[k] = x;
        used[x] = true;
        if partial_ok(g1, g2, sigma, k) {
            if let Some(pr) = iso_extend(g1, g2, reps, sigma, used, k + 1) {
                return Some(pr);
            }
        }
        used[x] = false;
        sigma[k] = usize::MAX;
    }
    None
}

/// Composites of two non-endo arrows among points `0..=k` with a non-endo
/// result already inside `0..=k`, involving point `k`, are preserved.
fn partial_ok(g1: &ProjGroupoid, g2: &ProjGroupoid, sigma: &[usize], k: usize) -> bool {
    let s = |p: usize| sigma[p];
    for a in 0..=k {
        for b in (0..=k).filter(|&b| b != a) {
            for c in (0..=k).filter(|&c| c != a && c != b) {
                for d in (0..=k).filter(|&d| d != b && d != a) {
                    for e in (0..=k).filter(|&e| e != b && e != d) {
                        let r = g1.compose(g1.arrow(a, b, c), g1.arrow(b, d, e));
                        if r.label > k || ![a, b, c, d, e, r.label].contains(&k) {
                            continue;
                        }
                        let r2 = g2.compose(g2.arrow(s(a), s(b), s(c)), g2.arrow(s(b), s(d), s(e)));
                        if r2.label != s(r.label) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_groups_by_order() {
        let show = |m| abelian_groups(m).iter().map(|g| g.factors().to_vec()).collect::<Vec<_>>();
        assert_eq!(show(1), vec![Vec::<usize>::new()]);
        assert_eq!(show(3), vec![vec![3]]);
        assert_eq!(show(4), vec![vec![4], vec![2, 2]]);
        assert_eq!(show(12), vec![vec![12], vec![6, 2]]);
        assert_eq!(show(8).len(), 3);
    }

    #[test]
    fn group_ids_and_automorphisms() {
        let c3 = AbelianGroup::new(vec![3]);
        assert_eq!(c3.ids(), ["1", "g", "g2"]);
        assert_eq!(c3.automorphisms().len(), 2);
        let v4 = AbelianGroup::new(vec![2, 2]);
        assert_eq!(v4.ids(), ["1", "h", "g", "gh"]);
        assert_eq!(v4.automorphisms().len(), 6);
        assert_eq!(v4.to_string(), "C2xC2");
    }

    #[test]
    fn three_points_have_one_model() {
        let r = enumerate_models(&SearchConfig::new(3, &[1, 2, 3, 4])).unwrap();
        assert_eq!(r.labeled_count, 1);
        assert_eq!(r.classes.len(), 1);
    }

    #[test]
    fn size_limits() {
        assert!(matches!(
            enumerate_models(&SearchConfig::new(2, &[])),
            Err(SearchError::SizeOutOfRange(2))
        ));
        assert!(matches!(
            enumerate_models(&SearchConfig::new(6, &[1])),
            Err(SearchError::SizeOutOfRange(6))
        ));
        assert!(matches!(
            enumerate_models(&SearchConfig::new(5, &[2, 3, 4])),
            Err(SearchError::SearchInfeasible(_))
        ));
    }

    #[test]
    fn witness_maps_first_member_to_representative() {
        let r = enumerate_models(&SearchConfig::new(4, &[])).unwrap();
        for class in &r.classes {
            assert!(is_isomorphism(&class.first_member, &class.representative, &class.witness));
        }
    }
}
