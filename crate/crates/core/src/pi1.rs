//! Fundamental categories: flexible vertices as objects, controlled routes
//! up to pauses and cell moves as arrows, enumerated up to a length bound.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::complex::Complex;
use crate::constructors::{full_substructure, product, sum};
use crate::enumerate::walks_from;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::reflect::{dhat, fl};
use crate::route::Route;

/// A route with its pauses erased.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Label {
    pub start: VertexId,
    pub end: VertexId,
    pub edges: Vec<EdgeId>,
}

impl Label {
    pub fn identity(v: VertexId) -> Label {
        Label { start: v, end: v, edges: Vec::new() }
    }

    pub fn of_route(r: &Route) -> Label {
        Label { start: r.start(), end: r.end(), edges: r.edges().to_vec() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn route(&self, graph: &Graph) -> Route {
        Route::path(graph, self.start, self.edges.clone()).expect("labels are walks")
    }

    pub fn concat(&self, other: &Label) -> Option<Label> {
        (self.end == other.start).then(|| {
            let mut edges = self.edges.clone();
            edges.extend_from_slice(&other.edges);
            Label { start: self.start, end: other.end, edges }
        })
    }

    pub fn display<'a>(&'a self, graph: &'a Graph) -> LabelDisplay<'a> {
        LabelDisplay { label: self, graph }
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest first, then by edge ids.
impl Ord for Label {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.edges.len(), &self.edges, self.start, self.end).cmp(&(
            other.edges.len(),
            &other.edges,
            other.start,
            other.end,
        ))
    }
}

pub struct LabelDisplay<'a> {
    label: &'a Label,
    graph: &'a Graph,
}

impl fmt::Display for LabelDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.label.edges.is_empty() {
            return write!(f, "id");
        }
        let names: Vec<&str> = self.label.edges.iter().map(|&e| self.graph.edge_name(e)).collect();
        write!(f, "{}", names.join("."))
    }
}

/// Whether some pausing of the label's walk is controlled. Pauses can only
/// be required, never forbidden, so the fully paused walk decides.
pub fn is_realizable(x: &Complex, label: &Label) -> bool {
    if label.is_empty() {
        return x.is_flexible(label.start);
    }
    x.is_controlled(&label.route(x.graph()).with_all_dwells())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowClass {
    pub representative: Label,
    /// Realizable labels within the bound, sorted.
    pub members: Vec<Label>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrowRef {
    pub src: VertexId,
    pub dst: VertexId,
    pub index: usize,
}

#[derive(Clone, Debug)]
pub struct FundamentalCategory {
    pub objects: Vec<VertexId>,
    pub homs: BTreeMap<(VertexId, VertexId), Vec<ArrowClass>>,
    pub bound: usize,
    /// Longer controlled routes exist than the bound admits, so homs may be
    /// incomplete.
    pub truncated: bool,
    index: HashMap<Label, ArrowRef>,
}

impl FundamentalCategory {
    pub fn arrow_count(&self) -> usize {
        self.homs.values().map(Vec::len).sum()
    }

    pub fn hom(&self, x: VertexId, y: VertexId) -> &[ArrowClass] {
        self.homs.get(&(x, y)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn class(&self, a: ArrowRef) -> &ArrowClass {
        &self.homs[&(a.src, a.dst)][a.index]
    }

    pub fn class_of(&self, label: &Label) -> Option<ArrowRef> {
        self.index.get(label).copied()
    }

    pub fn identity(&self, x: VertexId) -> Option<ArrowRef> {
        self.class_of(&Label::identity(x))
    }

    pub fn arrows(&self) -> impl Iterator<Item = ArrowRef> + '_ {
        self.homs
            .iter()
            .flat_map(|(&(src, dst), cs)| (0..cs.len()).map(move |index| ArrowRef { src, dst, index }))
    }

    /// Composite `a` then `b`, when the composite of the representatives
    /// lies within the bound.
    pub fn compose(&self, a: ArrowRef, b: ArrowRef) -> Option<ArrowRef> {
        if a.dst != b.src {
            return None;
        }
        let l = self.class(a).representative.concat(&self.class(b).representative)?;
        if l.len() > self.bound {
            return None;
        }
        self.class_of(&l)
    }

    /// Every hom has at most one class.
    pub fn is_preorder(&self) -> bool {
        self.homs.values().all(|cs| cs.len() <= 1)
    }
}

fn realizable_from(x: &Complex, from: VertexId, bound: usize) -> (Vec<Label>, bool) {
    let walks = walks_from(x.graph(), from, bound + 1, |w| x.is_restriction(&w.with_all_dwells()));
    let overflow = walks.last().is_some_and(|w| w.len() > bound);
    let labels = walks
        .iter()
        .filter(|w| w.len() <= bound && x.is_flexible(w.end()))
        .map(Label::of_route)
        .filter(|l| is_realizable(x, l))
        .collect();
    (labels, overflow)
}

/// Partitions the realizable labels of one hom into classes connected by
/// single cell moves.
fn classify_slice(x: &Complex, labels: Vec<Label>) -> Vec<ArrowClass> {
    let position: HashMap<&Label, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut parent: Vec<usize> = (0..labels.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut i = i;
        while parent[i] != r {
            let next = parent[i];
            parent[i] = r;
            i = next;
        }
        r
    }
    let g = x.graph();
    for (i, l) in labels.iter().enumerate() {
        let route = l.route(g);
        for c in x.cells() {
            for (side, other) in [(c.left(), c.right()), (c.right(), c.left())] {
                if side.is_empty() {
                    continue;
                }
                let k = side.len();
                if k > l.len() {
                    continue;
                }
                for p in 0..=l.len() - k {
                    if l.edges[p..p + k] != *side || route.vertices()[p] != c.start() {
                        continue;
                    }
                    let mut edges = l.edges[..p].to_vec();
                    edges.extend_from_slice(other);
                    edges.extend_from_slice(&l.edges[p + k..]);
                    let moved = Label { start: l.start, end: l.end, edges };
                    if let Some(&j) = position.get(&moved) {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Label>> = BTreeMap::new();
    for (i, label) in labels.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(label.clone());
    }
    let mut classes: Vec<ArrowClass> = groups
        .into_values()
        .map(|mut members| {
            members.sort();
            ArrowClass { representative: members[0].clone(), members }
        })
        .collect();
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    classes
}

/// The fundamental category truncated at routes of length `bound`.
pub fn pi1(x: &Complex, bound: usize) -> FundamentalCategory {
    let objects: Vec<VertexId> = x.flexible_vertices().into_iter().collect();
    let mut homs = BTreeMap::new();
    let mut index = HashMap::new();
    let mut truncated = false;
    for &from in &objects {
        let (labels, overflow) = realizable_from(x, from, bound);
        truncated |= overflow;
        let mut by_end: BTreeMap<VertexId, Vec<Label>> = BTreeMap::new();
        for l in labels {
            by_end.entry(l.end).or_default().push(l);
        }
        for (to, slice) in by_end {
            let classes = classify_slice(x, slice);
            for (i, c) in classes.iter().enumerate() {
                for m in &c.members {
                    index.insert(m.clone(), ArrowRef { src: from, dst: to, index: i });
                }
            }
            homs.insert((from, to), classes);
        }
    }
    FundamentalCategory { objects, homs, bound, truncated, index }
}

/// The classes of one hom, computed without the rest of the category.
pub fn hom_classes(x: &Complex, from: VertexId, to: VertexId, bound: usize) -> Result<Vec<ArrowClass>> {
    for v in [from, to] {
        if !x.graph().contains_vertex(v) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        if !x.is_flexible(v) {
            return Err(Error::NotFlexible(x.graph().vertex_name(v).to_string()));
        }
    }
    let (labels, _) = realizable_from(x, from, bound);
    Ok(classify_slice(x, labels.into_iter().filter(|l| l.end == to).collect()))
}

#[derive(Clone, Debug)]
pub struct Monoid {
    pub base: VertexId,
    pub classes: Vec<ArrowClass>,
    /// `table[i][j]` is the class of `classes[i]` followed by `classes[j]`,
    /// when within the bound.
    pub table: Vec<Vec<Option<usize>>>,
    pub truncated: bool,
}

/// Endomorphisms of `x0` with their composition table.
pub fn fundamental_monoid(x: &Complex, x0: VertexId, bound: usize) -> Result<Monoid> {
    if !x.graph().contains_vertex(x0) {
        return Err(Error::UnknownVertex(x0.to_string()));
    }
    if !x.is_flexible(x0) {
        return Err(Error::NotFlexible(x.graph().vertex_name(x0).to_string()));
    }
    let cat = pi1(x, bound);
    let classes = cat.hom(x0, x0).to_vec();
    let n = classes.len();
    let table = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    cat.compose(
                        ArrowRef { src: x0, dst: x0, index: i },
                        ArrowRef { src: x0, dst: x0, index: j },
                    )
                    .map(|a| a.index)
                })
                .collect()
        })
        .collect();
    Ok(Monoid { base: x0, classes, table, truncated: cat.truncated })
}

/// Whether every hom has at most one class. The witness is the
/// representative of a second class in the first hom that has one.
pub fn is_one_simple(x: &Complex, bound: usize) -> crate::classify::Verdict {
    let cat = pi1(x, bound);
    let witness = cat
        .homs
        .values()
        .find(|cs| cs.len() > 1)
        .map(|cs| cs[1].representative.route(x.graph()));
    crate::classify::Verdict { holds: witness.is_none(), witness, bound: Some(bound) }
}

/// How a map of complexes acts on truncated fundamental categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorReport {
    /// Every source arrow lands on a target arrow, and all members of a
    /// class land in one class.
    pub well_defined: bool,
    pub preserves_identities: bool,
    pub preserves_composition: bool,
    pub injective_on_objects: bool,
    pub faithful: bool,
    pub full: bool,
    /// A target arrow between images of source objects that is not hit.
    pub fullness_witness: Option<Label>,
    /// Bijective on objects and arrows.
    pub is_isomorphism: bool,
}

impl FunctorReport {
    pub fn is_functor(&self) -> bool {
        self.well_defined && self.preserves_identities && self.preserves_composition
    }

    pub fn is_full_embedding(&self) -> bool {
        self.is_functor() && self.injective_on_objects && self.faithful && self.full
    }
}

/// Compares two truncated categories along vertex and edge maps.
pub fn compare(
    src: &FundamentalCategory,
    dst: &FundamentalCategory,
    vmap: impl Fn(VertexId) -> VertexId,
    emap: impl Fn(EdgeId) -> EdgeId,
) -> FunctorReport {
    let map_label = |l: &Label| Label { start: vmap(l.start), end: vmap(l.end), edges: l.edges.iter().map(|&e| emap(e)).collect() };
    let mut well_defined = true;
    let mut image: HashMap<ArrowRef, ArrowRef> = HashMap::new();
    for a in src.arrows() {
        let targets: BTreeSet<Option<ArrowRef>> =
            src.class(a).members.iter().map(|m| dst.class_of(&map_label(m))).collect();
        match (targets.len(), targets.iter().next()) {
            (1, Some(Some(t))) => {
                image.insert(a, *t);
            }
            _ => well_defined = false,
        }
    }
    let preserves_identities = src
        .objects
        .iter()
        .all(|&o| src.identity(o).and_then(|i| image.get(&i).copied()) == dst.identity(vmap(o)));
    let mut preserves_composition = true;
    for a in src.arrows() {
        for b in src.arrows().filter(|b| b.src == a.dst) {
            if let Some(ab) = src.compose(a, b) {
                let (fa, fb, fab) = (image.get(&a), image.get(&b), image.get(&ab));
                if let (Some(&fa), Some(&fb), Some(&fab)) = (fa, fb, fab) {
                    if let Some(c) = dst.compose(fa, fb) {
                        preserves_composition &= c == fab;
                    }
                }
            }
        }
    }
    let object_images: BTreeSet<VertexId> = src.objects.iter().map(|&o| vmap(o)).collect();
    let injective_on_objects = object_images.len() == src.objects.len();
    let hit: BTreeSet<ArrowRef> = image.values().copied().collect();
    let faithful = hit.len() == image.len() && image.len() == src.arrow_count();
    let mut fullness_witness = None;
    'outer: for &a in &object_images {
        for &b in &object_images {
            for (i, c) in dst.hom(a, b).iter().enumerate() {
                if !hit.contains(&ArrowRef { src: a, dst: b, index: i }) && c.representative.len() <= src.bound {
                    fullness_witness = Some(c.representative.clone());
                    break 'outer;
                }
            }
        }
    }
    let full = fullness_witness.is_none();
    let is_isomorphism = well_defined
        && injective_on_objects
        && object_images.len() == dst.objects.len()
        && faithful
        && hit.len() == dst.arrow_count();
    FunctorReport {
        well_defined,
        preserves_identities,
        preserves_composition,
        injective_on_objects,
        faithful,
        full,
        fullness_witness,
        is_isomorphism,
    }
}

/// The comparisons from the flexible part into `x` and from `x` into its
/// generated d-space.
#[derive(Clone, Debug)]
pub struct Comparisons {
    pub flexible_part: FunctorReport,
    pub generated: FunctorReport,
}

pub fn induced_comparisons(x: &Complex, bound: usize) -> Comparisons {
    let flx = fl(x);
    let dx = dhat(x);
    let (cf, cx, cd) = (pi1(&flx, bound), pi1(x, bound), pi1(&dx, bound));
    let (vs, es): (Vec<VertexId>, Vec<EdgeId>) = {
        let g = x.graph();
        let vs: Vec<VertexId> = g.vertices().filter(|&v| x.is_flexible(v)).collect();
        let es = g
            .edge_ids()
            .filter(|&e| x.is_flexible(g.src(e)) && x.is_flexible(g.dst(e)))
            .collect();
        (vs, es)
    };
    Comparisons {
        flexible_part: compare(&cf, &cx, |v| vs[v.index()], |e| es[e.index()]),
        generated: compare(&cx, &cd, |v| v, |e| e),
    }
}

/// Whether the truncated fundamental category of the full substructure on
/// `keep` embeds fully into that of `x`.
pub fn check_fullness(x: &Complex, keep: &BTreeSet<VertexId>, bound: usize) -> Result<FunctorReport> {
    let sub = full_substructure(x, keep)?;
    let (cs, cx) = (pi1(&sub, bound), pi1(x, bound));
    Ok(compare(&cs, &cx, |v| v, |e| e))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreservationReport {
    pub objects_bijective: bool,
    pub well_defined: bool,
    pub injective: bool,
    pub surjective: bool,
    pub source_arrows: usize,
    pub target_arrows: usize,
    pub source_objects: usize,
    pub witness: Option<String>,
}

impl PreservationReport {
    pub fn bijective(&self) -> bool {
        self.objects_bijective && self.well_defined && self.injective && self.surjective
    }
}

/// Compares arrows of the product with pairs of factor arrows whose total
/// length fits in the bound.
pub fn check_product_preservation(x: &Complex, y: &Complex, bound: usize) -> PreservationReport {
    let p = product(x, y);
    let (cp, cx, cy) = (pi1(&p, bound), pi1(x, bound), pi1(y, bound));
    let ny = y.graph().vertex_count() as u32;
    let objects_bijective = cp.objects.len() == cx.objects.len() * cy.objects.len()
        && cp
            .objects
            .iter()
            .all(|o| cx.objects.contains(&VertexId(o.0 / ny)) && cy.objects.contains(&VertexId(o.0 % ny)));
    let mut well_defined = true;
    let mut image: BTreeMap<ArrowRef, (ArrowRef, ArrowRef)> = BTreeMap::new();
    let mut witness = None;
    for a in cp.arrows() {
        let pairs: BTreeSet<Option<(ArrowRef, ArrowRef)>> = cp
            .class(a)
            .members
            .iter()
            .map(|m| {
                let (rx, ry) = crate::membership::project(x, y, &m.route(p.graph()));
                Some((cx.class_of(&Label::of_route(&rx))?, cy.class_of(&Label::of_route(&ry))?))
            })
            .collect();
        match (pairs.len(), pairs.into_iter().next()) {
            (1, Some(Some(t))) => {
                image.insert(a, t);
            }
            _ => {
                well_defined = false;
                witness.get_or_insert_with(|| format!("class {} projects ambiguously", cp.class(a).representative.display(p.graph())));
            }
        }
    }
    let hit: BTreeSet<(ArrowRef, ArrowRef)> = image.values().copied().collect();
    let injective = hit.len() == image.len();
    let mut target_arrows = 0;
    let mut surjective = true;
    for ax in cx.arrows() {
        for ay in cy.arrows() {
            if cx.class(ax).representative.len() + cy.class(ay).representative.len() > bound {
                continue;
            }
            target_arrows += 1;
            if !hit.contains(&(ax, ay)) {
                surjective = false;
                witness.get_or_insert_with(|| {
                    format!(
                        "pair ({}, {}) is not hit",
                        cx.class(ax).representative.display(x.graph()),
                        cy.class(ay).representative.display(y.graph())
                    )
                });
            }
        }
    }
    PreservationReport {
        objects_bijective,
        well_defined,
        injective,
        surjective,
        source_arrows: cp.arrow_count(),
        target_arrows,
        source_objects: cp.objects.len(),
        witness,
    }
}

/// Compares arrows of the sum with the disjoint union of the summands'
/// arrows.
pub fn check_sum_preservation(x: &Complex, y: &Complex, bound: usize) -> PreservationReport {
    let s = sum(x, y);
    let (cs, cx, cy) = (pi1(&s, bound), pi1(x, bound), pi1(y, bound));
    let nx = x.graph().vertex_count() as u32;
    let ex = x.graph().edge_count() as u32;
    let objects_bijective = cs.objects.len() == cx.objects.len() + cy.objects.len();
    let mut well_defined = true;
    let mut hit: BTreeSet<(bool, ArrowRef)> = BTreeSet::new();
    let mut count = 0;
    for a in cs.arrows() {
        count += 1;
        let targets: BTreeSet<Option<(bool, ArrowRef)>> = cs
            .class(a)
            .members
            .iter()
            .map(|m| {
                if m.start.0 < nx {
                    cx.class_of(m).map(|r| (false, r))
                } else {
                    let l = Label {
                        start: VertexId(m.start.0 - nx),
                        end: VertexId(m.end.0 - nx),
                        edges: m.edges.iter().map(|e| EdgeId(e.0 - ex)).collect(),
                    };
                    cy.class_of(&l).map(|r| (true, r))
                }
            })
            .collect();
        match (targets.len(), targets.into_iter().next()) {
            (1, Some(Some(t))) => {
                hit.insert(t);
            }
            _ => well_defined = false,
        }
    }
    let target_arrows = cx.arrow_count() + cy.arrow_count();
    PreservationReport {
        objects_bijective,
        well_defined,
        injective: hit.len() == count,
        surjective: hit.len() == target_arrows,
        source_arrows: cs.arrow_count(),
        target_arrows,
        source_objects: cs.objects.len(),
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{std_space, StandardSpaceKind as K};

    #[test]
    fn interval_is_ordinal_two() {
        let x = std_space(K::IntervalC).unwrap();
        let c = pi1(&x, 2);
        assert_eq!(c.objects.len(), 2);
        assert_eq!(c.arrow_count(), 3);
        assert!(c.is_preorder());
        assert!(!c.truncated);
    }

    #[test]
    fn one_stop_circle_monoid_is_truncated_naturals() {
        let x = std_space(K::CircleNStop(1)).unwrap();
        let m = fundamental_monoid(&x, x.vertex("x0").unwrap(), 5).unwrap();
        assert_eq!(m.classes.len(), 6);
        assert!(m.truncated);
        assert_eq!(m.table[2][3], Some(5));
        assert_eq!(m.table[3][3], None);
    }

    #[test]
    fn unit_laws() {
        let x = std_space(K::IntervalJ).unwrap();
        let c = pi1(&x, 3);
        for a in c.arrows() {
            assert_eq!(c.compose(c.identity(a.src).unwrap(), a), Some(a));
            assert_eq!(c.compose(a, c.identity(a.dst).unwrap()), Some(a));
        }
    }
}
