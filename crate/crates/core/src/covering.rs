//! Covering maps: star bijections, unique route lifting and the hom-set
//! bijection between a base and its cover.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::Complex;
use crate::constructors::{line_segment, product, product_left_edge, product_right_edge, product_vertex, std_space, StandardSpaceKind};
use crate::enumerate::{controlled_routes, decorations};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId};
use crate::pi1::{pi1, Label};
use crate::route::Route;

/// A map of complexes meant to be a covering. Vertices in `boundary` sit at
/// the edge of a finite window onto an infinite cover and are exempt from
/// the star condition.
#[derive(Clone, Debug)]
pub struct CoveringMap {
    pub total: Complex,
    pub base: Complex,
    pub vmap: Vec<VertexId>,
    pub emap: Vec<EdgeId>,
    pub boundary: BTreeSet<VertexId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoveringReport {
    pub star_bijective: bool,
    pub lifts_controlled: bool,
    pub flexible_is_preimage: bool,
    /// Boundary vertices excluded from the star check.
    pub excluded: Vec<VertexId>,
    pub routes_checked: usize,
    pub failures: Vec<String>,
}

impl CoveringReport {
    pub fn passed(&self) -> bool {
        self.star_bijective && self.lifts_controlled && self.flexible_is_preimage
    }
}

impl CoveringMap {
    /// Checks that the maps are total and commute with endpoints.
    pub fn new(
        total: Complex,
        base: Complex,
        vmap: Vec<VertexId>,
        emap: Vec<EdgeId>,
        boundary: BTreeSet<VertexId>,
    ) -> Result<CoveringMap> {
        let (gt, gb) = (total.graph(), base.graph());
        if vmap.len() != gt.vertex_count() || emap.len() != gt.edge_count() {
            return Err(Error::Covering("vertex or edge map is not total".into()));
        }
        if let Some(v) = vmap.iter().find(|v| !gb.contains_vertex(**v)) {
            return Err(Error::Covering(format!("vertex map hits unknown vertex {v}")));
        }
        for e in gt.edge_ids() {
            let f = emap[e.index()];
            if !gb.contains_edge(f) {
                return Err(Error::Covering(format!("edge map hits unknown edge {f}")));
            }
            if vmap[gt.src(e).index()] != gb.src(f) || vmap[gt.dst(e).index()] != gb.dst(f) {
                return Err(Error::Covering(format!(
                    "edge {} does not commute with endpoints",
                    gt.edge_name(e)
                )));
            }
        }
        if let Some(v) = boundary.iter().find(|v| !gt.contains_vertex(**v)) {
            return Err(Error::Covering(format!("unknown boundary vertex {v}")));
        }
        Ok(CoveringMap { total, base, vmap, emap, boundary })
    }

    pub fn fibre(&self, y: VertexId) -> Vec<VertexId> {
        self.total.graph().vertices().filter(|v| self.vmap[v.index()] == y).collect()
    }

    pub fn project(&self, r: &Route) -> Route {
        let gb = self.base.graph();
        let edges = r.edges().iter().map(|e| self.emap[e.index()]).collect();
        Route::new(gb, self.vmap[r.start().index()], edges, r.dwells().iter().copied())
            .expect("projection commutes with endpoints")
    }

    /// The lift of `b` starting at `x0`, pauses carried over.
    pub fn lift_route(&self, b: &Route, x0: VertexId) -> Result<Route> {
        let gt = self.total.graph();
        if !gt.contains_vertex(x0) {
            return Err(Error::UnknownVertex(x0.to_string()));
        }
        if self.vmap[x0.index()] != b.start() {
            return Err(Error::Covering(format!(
                "{} does not lie over the start of the route",
                gt.vertex_name(x0)
            )));
        }
        let mut at = x0;
        let mut edges = Vec::with_capacity(b.len());
        for &f in b.edges() {
            let step = gt.out_edges(at).iter().copied().find(|&e| self.emap[e.index()] == f);
            match step {
                Some(e) => {
                    edges.push(e);
                    at = gt.dst(e);
                }
                None => {
                    return Err(Error::Covering(format!(
                        "lift leaves the window at {}",
                        gt.vertex_name(at)
                    )))
                }
            }
        }
        Route::new(gt, x0, edges, b.dwells().iter().copied())
    }

    pub fn validate(&self, bound: usize) -> CoveringReport {
        let (gt, gb) = (self.total.graph(), self.base.graph());
        let mut report = CoveringReport {
            excluded: self.boundary.iter().copied().collect(),
            ..CoveringReport::default()
        };
        report.star_bijective = true;
        for x in gt.vertices().filter(|v| !self.boundary.contains(v)) {
            let y = self.vmap[x.index()];
            for (up, down, dir) in [
                (gt.out_edges(x), gb.out_edges(y), "out"),
                (gt.in_edges(x), gb.in_edges(y), "in"),
            ] {
                let images: Vec<EdgeId> = up.iter().map(|e| self.emap[e.index()]).collect();
                let distinct: BTreeSet<EdgeId> = images.iter().copied().collect();
                let target: BTreeSet<EdgeId> = down.iter().copied().collect();
                if distinct.len() != images.len() || distinct != target {
                    report.star_bijective = false;
                    report.failures.push(format!("{dir}-star of {} is not bijective", gt.vertex_name(x)));
                }
            }
        }
        report.lifts_controlled = true;
        for b in controlled_routes(&self.base, bound) {
            for x0 in self.fibre(b.start()) {
                let Ok(lift) = self.lift_route(&b, x0) else { continue };
                report.routes_checked += 1;
                if !self.total.is_controlled(&lift) {
                    report.lifts_controlled = false;
                    if report.failures.len() < 8 {
                        report.failures.push(format!("lift {} is not controlled", lift.display(gt)));
                    }
                }
            }
        }
        report.flexible_is_preimage = gt
            .vertices()
            .all(|x| self.total.is_flexible(x) == self.base.is_flexible(self.vmap[x.index()]));
        if !report.flexible_is_preimage {
            report.failures.push("flexible vertices are not the preimage of the base's".into());
        }
        report
    }

    /// Compares base classes out of `p(x0)` ending at `y` with the union of
    /// total classes from `x0` to the fibre over `y`. The bound is clipped
    /// so that no lift can leave the window.
    pub fn check_lifting_bijection(&self, x0: VertexId, y: VertexId, bound: usize) -> Result<BijectionReport> {
        let (gt, gb) = (self.total.graph(), self.base.graph());
        if !gt.contains_vertex(x0) || !self.total.is_flexible(x0) {
            return Err(Error::Precondition(format!("basepoint {x0} is not a flexible vertex of the cover")));
        }
        if !gb.contains_vertex(y) || !self.base.is_flexible(y) {
            return Err(Error::Precondition(format!("target {y} is not a flexible vertex of the base")));
        }
        let effective = bound.min(self.distance_to_boundary(x0));
        let base_cat = pi1(&self.base, effective);
        let total_cat = pi1(&self.total, effective);
        let y0 = self.vmap[x0.index()];
        let base_classes = base_cat.hom(y0, y);
        let mut lifted: BTreeMap<usize, (VertexId, usize)> = BTreeMap::new();
        let mut well_defined = true;
        let mut lifts_realizable = true;
        for (i, c) in base_classes.iter().enumerate() {
            let mut targets = BTreeSet::new();
            for m in &c.members {
                let lift = self.lift_route(&m.route(gb), x0)?;
                match total_cat.class_of(&Label::of_route(&lift)) {
                    Some(a) => {
                        targets.insert((a.dst, a.index));
                    }
                    None => lifts_realizable = false,
                }
            }
            if targets.len() == 1 {
                lifted.insert(i, targets.into_iter().next().expect("one target"));
            } else {
                well_defined = false;
            }
        }
        let hit: BTreeSet<(VertexId, usize)> = lifted.values().copied().collect();
        let injective = hit.len() == lifted.len();
        let mut upstairs = 0;
        for x in self.fibre(y) {
            upstairs += total_cat.hom(x0, x).len();
        }
        let surjective = hit.len() == upstairs;
        let mut pairs: Vec<(Label, Label)> = lifted
            .iter()
            .map(|(&i, &(dst, j))| {
                (base_classes[i].representative.clone(), total_cat.hom(x0, dst)[j].representative.clone())
            })
            .collect();
        pairs.sort();
        Ok(BijectionReport {
            effective_bound: effective,
            base_classes: base_classes.len(),
            total_classes: upstairs,
            well_defined: well_defined && lifts_realizable,
            injective,
            surjective,
            pairs,
        })
    }

    /// Length of the shortest walk from `x` to a boundary vertex, or
    /// `usize::MAX` when none is reachable.
    fn distance_to_boundary(&self, x: VertexId) -> usize {
        if self.boundary.is_empty() {
            return usize::MAX;
        }
        let g = self.total.graph();
        let mut dist = vec![usize::MAX; g.vertex_count()];
        dist[x.index()] = 0;
        let mut queue = std::collections::VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            if self.boundary.contains(&v) {
                return dist[v.index()];
            }
            for &e in g.out_edges(v) {
                let w = g.dst(e);
                if dist[w.index()] == usize::MAX {
                    dist[w.index()] = dist[v.index()] + 1;
                    queue.push_back(w);
                }
            }
        }
        usize::MAX
    }

    /// Lifts of cell moves: for every base cell whose sides both lift from
    /// a total vertex, the lifts end together and form a total cell.
    pub fn check_cell_lifting(&self) -> bool {
        let (gt, gb) = (self.total.graph(), self.base.graph());
        let total_cells: BTreeSet<(VertexId, Vec<EdgeId>, Vec<EdgeId>)> = self
            .total
            .cells()
            .iter()
            .map(|c| (c.start(), c.left().to_vec(), c.right().to_vec()))
            .collect();
        for c in self.base.cells() {
            for x0 in self.fibre(c.start()) {
                let l = Route::path(gb, c.start(), c.left().to_vec()).expect("cell sides are walks");
                let r = Route::path(gb, c.start(), c.right().to_vec()).expect("cell sides are walks");
                let (Ok(ll), Ok(lr)) = (self.lift_route(&l, x0), self.lift_route(&r, x0)) else { continue };
                if ll.end() != lr.end() {
                    return false;
                }
                if !total_cells.contains(&(x0, ll.edges().to_vec(), lr.edges().to_vec())) {
                    return false;
                }
            }
        }
        let _ = gt;
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionReport {
    pub effective_bound: usize,
    pub base_classes: usize,
    pub total_classes: usize,
    pub well_defined: bool,
    pub injective: bool,
    pub surjective: bool,
    /// Base representative and the representative of its lift's class.
    pub pairs: Vec<(Label, Label)>,
}

impl BijectionReport {
    pub fn holds(&self) -> bool {
        self.well_defined && self.injective && self.surjective
    }
}

/// The line on `-m..=m` wrapped onto the `n`-stop circle, vertex `k` going
/// to `x(k mod n)`. The two window ends are boundary vertices.
pub fn exponential_cover(n: usize, m: i64) -> Result<CoveringMap> {
    if n == 0 || m <= 0 {
        return Err(Error::InvalidParameter("exponential cover needs n >= 1 and m >= 1".into()));
    }
    let total = line_segment(-m, m)?.with_name(format!("line({m})"));
    let base = std_space(StandardSpaceKind::CircleNStop(n))?;
    let vmap = (-m..=m).map(|k| VertexId(k.rem_euclid(n as i64) as u32)).collect();
    let emap = (-m..m).map(|k| EdgeId(k.rem_euclid(n as i64) as u32)).collect();
    let boundary = [VertexId(0), VertexId(2 * m as u32)].into_iter().collect();
    CoveringMap::new(total, base, vmap, emap, boundary)
}

pub fn identity_cover(x: &Complex) -> CoveringMap {
    CoveringMap {
        total: x.clone(),
        base: x.clone(),
        vmap: x.graph().vertices().collect(),
        emap: x.graph().edge_ids().collect(),
        boundary: BTreeSet::new(),
    }
}

/// Product of two coverings.
pub fn product_cover(p: &CoveringMap, q: &CoveringMap) -> CoveringMap {
    let total = product(&p.total, &q.total);
    let base = product(&p.base, &q.base);
    let (gpt, gqt) = (p.total.graph(), q.total.graph());
    let mut vmap = vec![VertexId(0); total.graph().vertex_count()];
    let mut boundary = BTreeSet::new();
    for a in gpt.vertices() {
        for b in gqt.vertices() {
            let v = product_vertex(&q.total, a, b);
            vmap[v.index()] = product_vertex(&q.base, p.vmap[a.index()], q.vmap[b.index()]);
            if p.boundary.contains(&a) || q.boundary.contains(&b) {
                boundary.insert(v);
            }
        }
    }
    let mut emap = vec![EdgeId(0); total.graph().edge_count()];
    for e in gpt.edge_ids() {
        for b in gqt.vertices() {
            emap[product_left_edge(&q.total, e, b).index()] =
                product_left_edge(&q.base, p.emap[e.index()], q.vmap[b.index()]);
        }
    }
    for a in gpt.vertices() {
        for f in gqt.edge_ids() {
            emap[product_right_edge(&p.total, &q.total, a, f).index()] =
                product_right_edge(&p.base, &q.base, p.vmap[a.index()], q.emap[f.index()]);
        }
    }
    CoveringMap { total, base, vmap, emap, boundary }
}

/// Every decorated lift of every base walk, used by property checks.
pub fn all_lifts(p: &CoveringMap, b: &Route) -> Vec<Route> {
    p.fibre(b.start())
        .into_iter()
        .filter_map(|x0| p.lift_route(b, x0).ok())
        .flat_map(|l| decorations(&l).collect::<Vec<_>>())
        .collect()
}
