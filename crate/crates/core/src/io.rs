//! The `.ctop` JSON document format for complexes and covering maps.
//!
//! Finitely presented complexes are stored by their graph, generators and
//! cells. Derived complexes (products, reflections, ...) are stored as a
//! recipe over inline operand documents; their `vertices` and `edges` are
//! written for reference, and `cells` lists only the cells added on top of
//! the recipe.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cell::SquareCell;
use crate::complex::{Complex, Reflector, Structure};
use crate::constructors::{full_substructure, opposite, product, sum};
use crate::covering::CoveringMap;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::reflect::reflect;
use crate::route::Route;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub start: String,
    pub edges: Vec<String>,
    #[serde(default)]
    pub dwells: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub start: String,
    pub left: Vec<String>,
    pub right: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecipeDoc {
    pub op: String,
    pub operands: Vec<ComplexDocument>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub keep: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(default)]
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
    #[serde(default)]
    pub generators: Vec<GeneratorDoc>,
    #[serde(default)]
    pub cells: Vec<CellDoc>,
    /// Written for reference; ignored when reading.
    #[serde(default)]
    pub flexible: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipe: Option<Box<RecipeDoc>>,
}

fn word_names(g: &Graph, w: &[EdgeId]) -> Vec<String> {
    w.iter().map(|&e| g.edge_name(e).to_string()).collect()
}

fn cell_doc(g: &Graph, c: &SquareCell) -> CellDoc {
    CellDoc {
        start: g.vertex_name(c.start()).to_string(),
        left: word_names(g, c.left()),
        right: word_names(g, c.right()),
    }
}

pub fn to_document(x: &Complex) -> ComplexDocument {
    let g = x.graph();
    let vertices = g.vertices().map(|v| g.vertex_name(v).to_string()).collect();
    let edges = g
        .edge_ids()
        .map(|e| EdgeDoc {
            id: g.edge_name(e).to_string(),
            src: g.vertex_name(g.src(e)).to_string(),
            dst: g.vertex_name(g.dst(e)).to_string(),
        })
        .collect();
    let flexible = x.flexible_vertices().into_iter().map(|v| g.vertex_name(v).to_string()).collect();
    let (generators, cells, recipe) = match x.generators() {
        Some(gens) => {
            let mut gs: Vec<GeneratorDoc> = gens
                .iter()
                .map(|r| GeneratorDoc {
                    start: g.vertex_name(r.start()).to_string(),
                    edges: word_names(g, r.edges()),
                    dwells: r.dwells().iter().copied().collect(),
                })
                .collect();
            gs.sort();
            let mut cs: Vec<CellDoc> = x.cells().iter().map(|c| cell_doc(g, c)).collect();
            cs.sort();
            (gs, cs, None)
        }
        None => {
            let mut cs: Vec<CellDoc> = x.extra_cells().iter().map(|c| cell_doc(g, c)).collect();
            cs.sort();
            (Vec::new(), cs, Some(Box::new(recipe_of(x))))
        }
    };
    ComplexDocument {
        schema: SCHEMA,
        name: x.name().map(str::to_string),
        provenance: None,
        vertices,
        edges,
        generators,
        cells,
        flexible,
        recipe,
    }
}

fn recipe_of(x: &Complex) -> RecipeDoc {
    let one = |op: &str, inner: &Complex| RecipeDoc { op: op.into(), operands: vec![to_document(inner)], keep: Vec::new() };
    match x.structure() {
        Structure::Generated { .. } => unreachable!("finitely presented complexes have no recipe"),
        Structure::Product(a, b) => RecipeDoc {
            op: "product".into(),
            operands: vec![to_document(a), to_document(b)],
            keep: Vec::new(),
        },
        Structure::Sum(a, b) => RecipeDoc {
            op: "sum".into(),
            operands: vec![to_document(a), to_document(b)],
            keep: Vec::new(),
        },
        Structure::Opposite(inner) => one("opposite", inner),
        Structure::Reflected { reflector, inner, .. } => one(reflector.name(), inner),
        Structure::Restricted { inner, keep } => RecipeDoc {
            op: "restrict".into(),
            operands: vec![to_document(inner)],
            keep: keep.iter().map(|&v| inner.graph().vertex_name(v).to_string()).collect(),
        },
    }
}

/// Canonical JSON text: sorted keys, two-space indentation, trailing newline.
pub fn serialize_complex(x: &Complex) -> String {
    document_to_string(&to_document(x))
}

pub fn document_to_string(doc: &ComplexDocument) -> String {
    let value = serde_json::to_value(doc).expect("documents are serializable");
    let mut s = serde_json::to_string_pretty(&value).expect("values are serializable");
    s.push('\n');
    s
}

pub fn parse_complex(text: &str) -> Result<Complex> {
    let doc: ComplexDocument = serde_json::from_str(text)?;
    from_document(&doc)
}

pub fn read_complex(path: impl AsRef<Path>) -> Result<Complex> {
    parse_complex(&std::fs::read_to_string(path)?)
}

pub fn write_complex(path: impl AsRef<Path>, x: &Complex) -> Result<()> {
    std::fs::write(path, serialize_complex(x))?;
    Ok(())
}

pub fn from_document(doc: &ComplexDocument) -> Result<Complex> {
    from_document_at(doc, "")
}

fn from_document_at(doc: &ComplexDocument, prefix: &str) -> Result<Complex> {
    let p = |s: String| format!("{prefix}{s}");
    if doc.schema != SCHEMA {
        return Err(Error::doc(p("schema".into()), format!("unsupported schema version {}", doc.schema)));
    }
    let x = match &doc.recipe {
        Some(recipe) => {
            let base = build_recipe(recipe, &p("recipe.".into()))?;
            let cells = parse_cells(base.graph(), &doc.cells, prefix)?;
            if cells.is_empty() {
                base
            } else {
                base.with_extra_cells(cells)?
            }
        }
        None => {
            let g = parse_graph(doc, prefix)?;
            let mut gens = Vec::new();
            for (i, gd) in doc.generators.iter().enumerate() {
                let at = p(format!("generators[{i}]"));
                let start = lookup_vertex(&g, &gd.start, &format!("{at}.start"))?;
                let edges = lookup_word(&g, &gd.edges, &format!("{at}.edges"))?;
                g.walk_end(start, &edges)
                    .map_err(|e| Error::doc(format!("{at}.edges"), e.to_string()))?;
                for (j, &d) in gd.dwells.iter().enumerate() {
                    if d > edges.len() {
                        return Err(Error::doc(
                            format!("{at}.dwells[{j}]"),
                            format!("position {d} out of range for a route of length {}", edges.len()),
                        ));
                    }
                }
                gens.push(Route::new(&g, start, edges, gd.dwells.iter().copied())?);
            }
            let cells = parse_cells(&g, &doc.cells, prefix)?;
            Complex::generated(g, gens, cells)?
        }
    };
    Ok(match &doc.name {
        Some(n) => x.with_name(n.clone()),
        None => x,
    })
}

fn parse_graph(doc: &ComplexDocument, prefix: &str) -> Result<Graph> {
    let mut g = Graph::new();
    for (i, v) in doc.vertices.iter().enumerate() {
        if g.vertex(v).is_some() {
            return Err(Error::doc(format!("{prefix}vertices[{i}]"), format!("duplicate vertex '{v}'")));
        }
        g.add_vertex(v.clone())?;
    }
    for (i, e) in doc.edges.iter().enumerate() {
        let at = format!("{prefix}edges[{i}]");
        if g.edge_named(&e.id).is_some() {
            return Err(Error::doc(format!("{at}.id"), format!("duplicate edge '{}'", e.id)));
        }
        let s = lookup_vertex(&g, &e.src, &format!("{at}.src"))?;
        let d = lookup_vertex(&g, &e.dst, &format!("{at}.dst"))?;
        g.add_edge(e.id.clone(), s, d)?;
    }
    Ok(g)
}

fn parse_cells(g: &Graph, cells: &[CellDoc], prefix: &str) -> Result<Vec<SquareCell>> {
    cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let at = format!("{prefix}cells[{i}]");
            let start = lookup_vertex(g, &c.start, &format!("{at}.start"))?;
            let left = lookup_word(g, &c.left, &format!("{at}.left"))?;
            let right = lookup_word(g, &c.right, &format!("{at}.right"))?;
            SquareCell::new(g, start, left, right).map_err(|e| Error::doc(at, e.to_string()))
        })
        .collect()
}

fn lookup_vertex(g: &Graph, name: &str, at: &str) -> Result<VertexId> {
    g.vertex(name).ok_or_else(|| Error::doc(at, format!("unknown vertex '{name}'")))
}

fn lookup_word(g: &Graph, names: &[String], at: &str) -> Result<Vec<EdgeId>> {
    names
        .iter()
        .enumerate()
        .map(|(i, n)| g.edge_named(n).ok_or_else(|| Error::doc(format!("{at}[{i}]"), format!("unknown edge '{n}'"))))
        .collect()
}

fn build_recipe(r: &RecipeDoc, at: &str) -> Result<Complex> {
    let operands = r
        .operands
        .iter()
        .enumerate()
        .map(|(i, d)| from_document_at(d, &format!("{at}operands[{i}].")))
        .collect::<Result<Vec<_>>>()?;
    let arity = |n: usize| {
        if operands.len() == n {
            Ok(())
        } else {
            Err(Error::doc(
                format!("{at}operands"),
                format!("'{}' takes {n} operand(s), found {}", r.op, operands.len()),
            ))
        }
    };
    Ok(match r.op.as_str() {
        "product" => {
            arity(2)?;
            product(&operands[0], &operands[1])
        }
        "sum" => {
            arity(2)?;
            sum(&operands[0], &operands[1])
        }
        "opposite" => {
            arity(1)?;
            opposite(&operands[0])
        }
        "dhat" | "fl" | "pf" | "bf" => {
            arity(1)?;
            let which = match r.op.as_str() {
                "dhat" => Reflector::Dhat,
                "fl" => Reflector::Fl,
                "pf" => Reflector::Pf,
                _ => Reflector::Bf,
            };
            reflect(&operands[0], which)
        }
        "restrict" => {
            arity(1)?;
            let inner = &operands[0];
            let keep = r
                .keep
                .iter()
                .enumerate()
                .map(|(i, n)| lookup_vertex(inner.graph(), n, &format!("{at}keep[{i}]")))
                .collect::<Result<BTreeSet<_>>>()?;
            full_substructure(inner, &keep).map_err(|e| Error::doc(format!("{at}keep"), e.to_string()))?
        }
        other => return Err(Error::doc(format!("{at}op"), format!("unknown operation '{other}'"))),
    })
}

/// A covering map stored with both complexes inline and the maps by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveringDocument {
    pub schema: u32,
    pub total: ComplexDocument,
    pub base: ComplexDocument,
    pub vmap: BTreeMap<String, String>,
    pub emap: BTreeMap<String, String>,
    #[serde(default)]
    pub boundary: Vec<String>,
}

pub fn serialize_covering(p: &CoveringMap) -> String {
    let (gt, gb) = (p.total.graph(), p.base.graph());
    let doc = CoveringDocument {
        schema: SCHEMA,
        total: to_document(&p.total),
        base: to_document(&p.base),
        vmap: gt
            .vertices()
            .map(|v| (gt.vertex_name(v).to_string(), gb.vertex_name(p.vmap[v.index()]).to_string()))
            .collect(),
        emap: gt
            .edge_ids()
            .map(|e| (gt.edge_name(e).to_string(), gb.edge_name(p.emap[e.index()]).to_string()))
            .collect(),
        boundary: p.boundary.iter().map(|&v| gt.vertex_name(v).to_string()).collect(),
    };
    let value = serde_json::to_value(&doc).expect("documents are serializable");
    let mut s = serde_json::to_string_pretty(&value).expect("values are serializable");
    s.push('\n');
    s
}

pub fn parse_covering(text: &str) -> Result<CoveringMap> {
    let doc: CoveringDocument = serde_json::from_str(text)?;
    if doc.schema != SCHEMA {
        return Err(Error::doc("schema", format!("unsupported schema version {}", doc.schema)));
    }
    let total = from_document_at(&doc.total, "total.")?;
    let base = from_document_at(&doc.base, "base.")?;
    covering_from_names(total, base, &doc.vmap, &doc.emap, &doc.boundary)
}

/// Builds a covering from name-to-name maps.
pub fn covering_from_names(
    total: Complex,
    base: Complex,
    vmap: &BTreeMap<String, String>,
    emap: &BTreeMap<String, String>,
    boundary: &[String],
) -> Result<CoveringMap> {
    let (gt, gb) = (total.graph(), base.graph());
    let mut vs = Vec::new();
    for v in gt.vertices() {
        let name = gt.vertex_name(v);
        let image = vmap.get(name).ok_or_else(|| Error::doc(format!("vmap.{name}"), "missing image"))?;
        vs.push(lookup_vertex(gb, image, &format!("vmap.{name}"))?);
    }
    let mut es = Vec::new();
    for e in gt.edge_ids() {
        let name = gt.edge_name(e);
        let image = emap.get(name).ok_or_else(|| Error::doc(format!("emap.{name}"), "missing image"))?;
        es.push(gb.edge_named(image).ok_or_else(|| Error::doc(format!("emap.{name}"), format!("unknown edge '{image}'")))?);
    }
    for k in vmap.keys() {
        lookup_vertex(gt, k, &format!("vmap.{k}"))?;
    }
    for k in emap.keys() {
        if gt.edge_named(k).is_none() {
            return Err(Error::doc(format!("emap.{k}"), format!("unknown edge '{k}'")));
        }
    }
    let boundary = boundary
        .iter()
        .enumerate()
        .map(|(i, n)| lookup_vertex(gt, n, &format!("boundary[{i}]")))
        .collect::<Result<BTreeSet<_>>>()?;
    CoveringMap::new(total, base, vs, es, boundary)
}
