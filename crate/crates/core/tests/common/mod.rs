//! Independent oracles and randomized checks shared by the integration
//! tests.
//!
//! The closure oracle applies the three closure rules literally to a
//! worklist until nothing new appears: constants at the ends of a
//! controlled route, concatenation of consecutive controlled routes, and
//! adding a pause. Routes longer than the bound never help derive shorter
//! ones, so truncating the closure at the bound is exact.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use ctop::constructors::{opposite, product};
use ctop::covering::exponential_cover;
use ctop::enumerate::{all_routes, decorations, walks_from};
use ctop::pi1::{pi1, Label};
use ctop::reflect::{dhat, fl, pf};
use ctop::{Complex, EdgeId, Graph, Route, SquareCell, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CASES: u64 = 1000;

/// Concatenation as the closure rule states it: a constant factor leaves a
/// pause at the junction.
fn join(a: &Route, b: &Route, g: &Graph) -> Route {
    let mut edges = a.edges().to_vec();
    edges.extend_from_slice(b.edges());
    let mut dwells: BTreeSet<usize> = a.dwells().clone();
    dwells.extend(b.dwells().iter().map(|d| d + a.len()));
    if a.is_constant() || b.is_constant() {
        dwells.insert(a.len());
    }
    Route::new(g, a.start(), edges, dwells).unwrap()
}

/// Every controlled route of length at most `max`, by saturation.
pub fn brute_closure(x: &Complex, max: usize) -> HashSet<Route> {
    let g = x.graph();
    let mut seen: HashSet<Route> = HashSet::new();
    let mut by_start: HashMap<VertexId, Vec<Route>> = HashMap::new();
    let mut by_end: HashMap<VertexId, Vec<Route>> = HashMap::new();
    let mut work: VecDeque<Route> = x
        .generators()
        .expect("oracle needs generators")
        .iter()
        .filter(|r| r.len() <= max)
        .cloned()
        .collect();
    while let Some(r) = work.pop_front() {
        if !seen.insert(r.clone()) {
            continue;
        }
        by_start.entry(r.start()).or_default().push(r.clone());
        by_end.entry(r.end()).or_default().push(r.clone());
        let mut fresh = vec![Route::constant(r.start()), Route::constant(r.end())];
        for p in 0..=r.len() {
            fresh.push(r.insert_dwell(p).unwrap());
        }
        for s in by_start.get(&r.end()).into_iter().flatten() {
            if r.len() + s.len() <= max {
                fresh.push(join(&r, s, g));
            }
        }
        for s in by_end.get(&r.start()).into_iter().flatten() {
            if r.len() + s.len() <= max {
                fresh.push(join(s, &r, g));
            }
        }
        for f in fresh {
            if !seen.contains(&f) {
                work.push_back(f);
            }
        }
    }
    seen
}

/// Classes of realizable labels, found by comparing every pair of labels
/// in a hom for a single cell move and taking connected components.
pub fn brute_classes(x: &Complex, closure: &HashSet<Route>, bound: usize) -> BTreeMap<(VertexId, VertexId), BTreeSet<BTreeSet<Vec<EdgeId>>>> {
    let g = x.graph();
    let mut homs: BTreeMap<(VertexId, VertexId), BTreeSet<Vec<EdgeId>>> = BTreeMap::new();
    for r in closure.iter().filter(|r| r.len() <= bound) {
        homs.entry((r.start(), r.end())).or_default().insert(r.edges().to_vec());
    }
    let moves = |a: &[EdgeId], b: &[EdgeId], start: VertexId| -> bool {
        let vertices = Route::path(g, start, a.to_vec()).unwrap();
        for c in x.cells() {
            for (s, t) in [(c.left(), c.right()), (c.right(), c.left())] {
                for p in 0..=a.len() {
                    if p + s.len() > a.len() || vertices.vertices()[p] != c.start() {
                        continue;
                    }
                    if a[p..p + s.len()] != *s {
                        continue;
                    }
                    let mut w = a[..p].to_vec();
                    w.extend_from_slice(t);
                    w.extend_from_slice(&a[p + s.len()..]);
                    if w == b {
                        return true;
                    }
                }
            }
        }
        false
    };
    let mut out = BTreeMap::new();
    for ((x0, y0), labels) in homs {
        let labels: Vec<Vec<EdgeId>> = labels.into_iter().collect();
        let n = labels.len();
        let mut comp = vec![usize::MAX; n];
        let mut classes = BTreeSet::new();
        for i in 0..n {
            if comp[i] != usize::MAX {
                continue;
            }
            comp[i] = i;
            let mut members = BTreeSet::new();
            let mut queue = VecDeque::from([i]);
            while let Some(a) = queue.pop_front() {
                members.insert(labels[a].clone());
                for b in 0..n {
                    if comp[b] == usize::MAX
                        && (moves(&labels[a], &labels[b], x0) || moves(&labels[b], &labels[a], x0))
                    {
                        comp[b] = i;
                        queue.push_back(b);
                    }
                }
            }
            classes.insert(members);
        }
        out.insert((x0, y0), classes);
    }
    out
}

pub fn engine_classes(x: &Complex, bound: usize) -> BTreeMap<(VertexId, VertexId), BTreeSet<BTreeSet<Vec<EdgeId>>>> {
    pi1(x, bound)
        .homs
        .iter()
        .map(|(&k, cs)| {
            (k, cs.iter().map(|c| c.members.iter().map(|m| m.edges.clone()).collect()).collect())
        })
        .collect()
}

/// A random finitely presented complex: at most 4 vertices, 5 edges, 3
/// generators and 2 cells.
pub fn random_complex(seed: u64) -> Complex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new();
    let nv = rng.gen_range(1..=4);
    let vs: Vec<VertexId> = (0..nv).map(|i| g.add_vertex(format!("v{i}")).unwrap()).collect();
    let ne = rng.gen_range(0..=5);
    for i in 0..ne {
        let s = *vs.choose(&mut rng).unwrap();
        let d = *vs.choose(&mut rng).unwrap();
        g.add_edge(format!("e{i}"), s, d).unwrap();
    }
    let mut gens = Vec::new();
    for _ in 0..rng.gen_range(0..=3).max(rng.gen_range(0..=3)) {
        let mut at = *vs.choose(&mut rng).unwrap();
        let start = at;
        let mut edges = Vec::new();
        for _ in 0..rng.gen_range(0..=3).min(rng.gen_range(1..=3)) {
            let out = g.out_edges(at);
            if out.is_empty() {
                break;
            }
            let e = *out.choose(&mut rng).unwrap();
            edges.push(e);
            at = g.dst(e);
        }
        let n = edges.len();
        let dwells: Vec<usize> = (0..=n).filter(|_| rng.gen_bool(0.25)).collect();
        gens.push(Route::new(&g, start, edges, dwells).unwrap());
    }
    let bare = Complex::generated(g.clone(), gens.clone(), Vec::new()).unwrap();
    let mut words: Vec<Route> = brute_closure(&bare, 3).iter().map(Route::without_dwells).collect();
    for &v in &vs {
        words.extend(walks_from(&g, v, 2, |_| true));
    }
    words.sort();
    words.dedup();
    let mut cells = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let a = words.choose(&mut rng).unwrap().clone();
        let partners: Vec<&Route> = words
            .iter()
            .filter(|b| b.start() == a.start() && b.end() == a.end() && b.edges() != a.edges())
            .filter(|b| a.start() == a.end() || (!a.is_constant() && !b.is_constant()))
            .collect();
        if let Some(b) = partners.choose(&mut rng) {
            cells.push(SquareCell::new(&g, a.start(), a.edges().to_vec(), b.edges().to_vec()).unwrap());
        }
    }
    Complex::generated(g, gens, cells).unwrap()
}

/// Same graph and cells, every generator stripped of its pauses.
pub fn strip_generator_dwells(x: &Complex) -> Complex {
    let gens = x.generators().unwrap().iter().map(Route::without_dwells).collect();
    Complex::generated(x.graph().clone(), gens, x.cells().to_vec()).unwrap()
}

pub type Check = Result<(), String>;

fn show(x: &Complex, r: &Route) -> String {
    r.display(x.graph()).to_string()
}

pub fn oracle_agreement(seed: u64) -> Check {
    let x = random_complex(seed);
    let closure = brute_closure(&x, 5);
    for r in all_routes(&x, 5) {
        if x.is_controlled(&r) != closure.contains(&r) {
            return Err(format!("seed {seed}: {} decided {}", show(&x, &r), x.is_controlled(&r)));
        }
    }
    Ok(())
}

pub fn closure_soundness(seed: u64) -> Check {
    let x = random_complex(seed);
    let controlled = ctop::enumerate::controlled_routes(&x, 3);
    for r in &controlled {
        for v in [r.start(), r.end()] {
            if !x.is_controlled(&Route::constant(v)) {
                return Err(format!("seed {seed}: end constant of {} missing", show(&x, r)));
            }
        }
        for p in 0..=r.len() {
            if !x.is_controlled(&r.insert_dwell(p).unwrap()) {
                return Err(format!("seed {seed}: pausing {} at {p} leaves the structure", show(&x, r)));
            }
        }
    }
    for a in &controlled {
        for b in controlled.iter().filter(|b| b.start() == a.end()) {
            let ab = a.concat(b).unwrap();
            if !x.is_controlled(&ab) {
                return Err(format!("seed {seed}: {} not controlled", show(&x, &ab)));
            }
        }
    }
    Ok(())
}

pub fn endpoint_flexibility(seed: u64) -> Check {
    let x = random_complex(seed);
    for r in all_routes(&x, 4) {
        if x.is_controlled(&r) && !(x.is_flexible(r.start()) && x.is_flexible(r.end())) {
            return Err(format!("seed {seed}: {} has a rigid end", show(&x, &r)));
        }
    }
    Ok(())
}

pub fn dwell_monotonicity(seed: u64) -> Check {
    let x = random_complex(seed);
    for r in all_routes(&x, 4) {
        if !x.is_controlled(&r) {
            continue;
        }
        for p in 0..=r.len() {
            if !x.is_controlled(&r.insert_dwell(p).unwrap()) {
                return Err(format!("seed {seed}: {} loses control when paused at {p}", show(&x, &r)));
            }
        }
    }
    Ok(())
}

pub fn reflector_ordering(seed: u64) -> Check {
    let x = random_complex(seed);
    let (d, p, f) = (dhat(&x), pf(&x), fl(&x));
    for r in all_routes(&x, 3) {
        let cx = x.is_controlled(&r);
        let cp = p.is_controlled(&r);
        let cd = d.is_controlled(&r);
        if (cx && !cp) || (cp && !cd) {
            return Err(format!("seed {seed}: {} breaks X <= pf <= dhat ({cx},{cp},{cd})", show(&x, &r)));
        }
    }
    let fg = f.graph();
    for r in all_routes(&f, 3) {
        if !f.is_controlled(&r) {
            continue;
        }
        let inner = x
            .route(
                fg.vertex_name(r.start()),
                &r.edges().iter().map(|&e| fg.edge_name(e)).collect::<Vec<_>>(),
                &r.dwells().iter().copied().collect::<Vec<_>>(),
            )
            .unwrap();
        if !x.is_controlled(&inner) {
            return Err(format!("seed {seed}: flexible-part route {} not controlled", show(&f, &r)));
        }
    }
    Ok(())
}

pub fn pi1_dwell_invariance(seed: u64) -> Check {
    let x = random_complex(seed);
    let y = strip_generator_dwells(&x);
    if engine_classes(&x, 4) != engine_classes(&y, 4) {
        return Err(format!("seed {seed}: pausing generators changed the fundamental category"));
    }
    if x.flexible_vertices() != y.flexible_vertices() {
        return Err(format!("seed {seed}: pausing generators changed the objects"));
    }
    Ok(())
}

pub fn opposite_duality(seed: u64) -> Check {
    let x = random_complex(seed);
    let o = opposite(&x);
    let (cx, co) = (engine_classes(&x, 4), engine_classes(&o, 4));
    let reverse = |c: &BTreeSet<BTreeSet<Vec<EdgeId>>>| -> BTreeSet<BTreeSet<Vec<EdgeId>>> {
        c.iter()
            .map(|class| class.iter().map(|w| w.iter().rev().copied().collect()).collect())
            .collect()
    };
    let flipped: BTreeMap<_, _> = cx.iter().map(|(&(a, b), c)| ((b, a), reverse(c))).collect();
    if flipped != co {
        return Err(format!("seed {seed}: opposite homs do not match reversed homs"));
    }
    Ok(())
}

pub fn pi1_agreement(seed: u64) -> Check {
    let x = random_complex(seed);
    let closure = brute_closure(&x, 5);
    let brute = brute_classes(&x, &closure, 5);
    let engine = engine_classes(&x, 5);
    if brute != engine {
        return Err(format!("seed {seed}: classes differ\n brute {brute:?}\n engine {engine:?}"));
    }
    Ok(())
}

pub fn lift_uniqueness(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(3..=5);
    let p = exponential_cover(n, m).unwrap();
    let gb = p.base.graph();
    let start = VertexId(rng.gen_range(0..n as u32));
    let len = rng.gen_range(0..=m as usize);
    let walks = walks_from(gb, start, len, |_| true);
    let walk = walks.choose(&mut rng).unwrap().clone();
    let decorated: Vec<Route> = decorations(&walk).collect();
    let b = decorated.choose(&mut rng).unwrap().clone();
    let gt = p.total.graph();
    for x0 in p.fibre(b.start()) {
        let all: Vec<Route> = walks_from(gt, x0, b.len(), |_| true)
            .into_iter()
            .filter(|w| w.len() == b.len() && p.project(w).edges() == b.edges())
            .collect();
        match p.lift_route(&b, x0) {
            Ok(lift) => {
                if all.len() != 1 || all[0].edges() != lift.edges() {
                    return Err(format!("seed {seed}: lift from {} is not unique", gt.vertex_name(x0)));
                }
                if p.project(&lift) != b {
                    return Err(format!("seed {seed}: projection of lift differs"));
                }
                if p.base.is_controlled(&b) && !p.total.is_controlled(&lift) {
                    return Err(format!("seed {seed}: lift of a controlled route is not controlled"));
                }
            }
            Err(_) => {
                if !all.is_empty() {
                    return Err(format!("seed {seed}: lift refused although one exists"));
                }
            }
        }
    }
    Ok(())
}

pub fn run_cases(name: &str, check: fn(u64) -> Check) -> Check {
    for seed in 0..CASES {
        check(seed).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

/// Bounded oracle equality on every route up to `max`.
pub fn same_oracle(a: &Complex, b: &Complex, max: usize) -> Option<Route> {
    all_routes(a, max).into_iter().find(|r| a.is_controlled(r) != b.is_controlled(r))
}

/// The dwell-insensitive product check: a pause-free product walk is in
/// the generated d-space of the product exactly when it is in the product
/// of the generated d-spaces.
pub fn product_commutes_with_dhat(x: &Complex, y: &Complex, max: usize) -> Option<Route> {
    let lhs = dhat(&product(x, y));
    let rhs = product(&dhat(x), &dhat(y));
    let g = lhs.graph();
    for v in g.vertices() {
        for w in walks_from(g, v, max, |_| true) {
            if lhs.is_controlled(&w) != rhs.is_controlled(&w) {
                return Some(w);
            }
        }
    }
    None
}

pub fn labels_of(x: &Complex, words: &[&[&str]], start: &str) -> Vec<Label> {
    words
        .iter()
        .map(|w| Label::of_route(&x.route(start, w, &[]).unwrap()))
        .collect()
}
