//! Python bindings. Vertices and edges are addressed by name; a route is a
//! `(start, edges, dwells)` triple.

use std::collections::{BTreeMap, BTreeSet};

use ctop::classify::{has_total_path_support, is_border_flexible, is_flexible_space, is_preflexible, Verdict};
use ctop::constructors::{self, QuotientSpec, StandardSpaceKind};
use ctop::covering::{self, CoveringMap};
use ctop::pi1::{self as engine, is_one_simple};
use ctop::{io, Reflector, Route};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

type RouteTuple = (String, Vec<String>, Vec<usize>);
type ClassList = Vec<(Vec<String>, usize)>;

fn err(e: ctop::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn route_tuple(x: &ctop::Complex, r: &Route) -> RouteTuple {
    let g = x.graph();
    (
        g.vertex_name(r.start()).to_string(),
        r.edges().iter().map(|&e| g.edge_name(e).to_string()).collect(),
        r.dwells().iter().copied().collect(),
    )
}

fn make_route(x: &ctop::Complex, start: &str, edges: &[String], dwells: &[usize]) -> PyResult<Route> {
    let refs: Vec<&str> = edges.iter().map(String::as_str).collect();
    x.route(start, &refs, dwells).map_err(err)
}

fn words(x: &ctop::Complex, label: &engine::Label) -> Vec<String> {
    label.edges.iter().map(|&e| x.graph().edge_name(e).to_string()).collect()
}

/// A controlled complex.
#[pyclass(name = "Complex", frozen, module = "ctop", skip_from_py_object)]
#[derive(Clone)]
struct PyComplex {
    inner: ctop::Complex,
}

#[pymethods]
impl PyComplex {
    /// Parses a `.ctop` document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyComplex { inner: io::parse_complex(text).map_err(err)? })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(PyComplex { inner: io::read_complex(path).map_err(err)? })
    }

    fn to_json(&self) -> String {
        io::serialize_complex(&self.inner)
    }

    fn save(&self, path: &str) -> PyResult<()> {
        io::write_complex(path, &self.inner).map_err(err)
    }

    #[getter]
    fn name(&self) -> Option<String> {
        self.inner.name().map(str::to_string)
    }

    fn vertices(&self) -> Vec<String> {
        let g = self.inner.graph();
        g.vertices().map(|v| g.vertex_name(v).to_string()).collect()
    }

    /// `(name, src, dst)` for every edge.
    fn edges(&self) -> Vec<(String, String, String)> {
        let g = self.inner.graph();
        g.edge_ids()
            .map(|e| {
                (
                    g.edge_name(e).to_string(),
                    g.vertex_name(g.src(e)).to_string(),
                    g.vertex_name(g.dst(e)).to_string(),
                )
            })
            .collect()
    }

    fn flexible_vertices(&self) -> Vec<String> {
        let g = self.inner.graph();
        self.inner.flexible_vertices().into_iter().map(|v| g.vertex_name(v).to_string()).collect()
    }

    #[pyo3(signature = (start, edges, dwells = Vec::new()))]
    fn is_controlled(&self, start: &str, edges: Vec<String>, dwells: Vec<usize>) -> PyResult<bool> {
        Ok(self.inner.is_controlled(&make_route(&self.inner, start, &edges, &dwells)?))
    }

    fn __repr__(&self) -> String {
        format!(
            "Complex({}, {} vertices, {} edges)",
            self.inner.name().unwrap_or("-"),
            self.inner.graph().vertex_count(),
            self.inner.graph().edge_count()
        )
    }
}

/// Builds a standard complex by kind name; `param` is the window, number of
/// stops or number of points where the kind needs one.
#[pyfunction]
#[pyo3(signature = (kind, param = None))]
fn std_space(kind: &str, param: Option<i64>) -> PyResult<PyComplex> {
    use StandardSpaceKind as K;
    let need = || param.ok_or_else(|| PyValueError::new_err(format!("'{kind}' needs a parameter")));
    let count = |p: i64| usize::try_from(p).map_err(|_| PyValueError::new_err("parameter must be positive"));
    let k = match kind {
        "interval" => K::IntervalC,
        "interval-j" => K::IntervalJ,
        "delayed-minus" => K::IntervalDelayedMinus,
        "delayed-plus" => K::IntervalDelayedPlus,
        "middle-delay" => K::IntervalMiddleDelay,
        "reversible" => K::IntervalReversible,
        "line" => K::LineC(need()?),
        "circle" => K::CircleNStop(count(need()?)?),
        "discrete" => K::Discrete(count(need()?)?),
        "diagonal-square" => return Ok(PyComplex { inner: constructors::diagonal_square().map_err(err)? }),
        "one-jump" => {
            return Ok(PyComplex { inner: constructors::one_jump_interval(count(need()?)?).map_err(err)? })
        }
        other => return Err(PyValueError::new_err(format!("unknown kind '{other}'"))),
    };
    Ok(PyComplex { inner: constructors::std_space(k).map_err(err)? })
}

#[pyfunction]
fn product(x: &PyComplex, y: &PyComplex) -> PyComplex {
    PyComplex { inner: constructors::product(&x.inner, &y.inner) }
}

#[pyfunction]
fn sum(x: &PyComplex, y: &PyComplex) -> PyComplex {
    PyComplex { inner: constructors::sum(&x.inner, &y.inner) }
}

#[pyfunction]
fn opposite(x: &PyComplex) -> PyComplex {
    PyComplex { inner: constructors::opposite(&x.inner) }
}

#[pyfunction]
fn symmetrize(x: &PyComplex) -> PyComplex {
    PyComplex { inner: constructors::symmetrize(&x.inner) }
}

#[pyfunction]
fn restrict(x: &PyComplex, keep: Vec<String>) -> PyResult<PyComplex> {
    let keep = keep.iter().map(|v| x.inner.vertex(v)).collect::<ctop::Result<BTreeSet<_>>>().map_err(err)?;
    Ok(PyComplex { inner: constructors::full_substructure(&x.inner, &keep).map_err(err)? })
}

#[pyfunction]
#[pyo3(signature = (x, blocks, collapse = Vec::new()))]
fn quotient(x: &PyComplex, blocks: Vec<Vec<String>>, collapse: Vec<String>) -> PyResult<PyComplex> {
    let blocks: Vec<Vec<&str>> = blocks.iter().map(|b| b.iter().map(String::as_str).collect()).collect();
    let block_refs: Vec<&[&str]> = blocks.iter().map(Vec::as_slice).collect();
    let collapse: Vec<&str> = collapse.iter().map(String::as_str).collect();
    let spec = QuotientSpec::by_names(&x.inner, &block_refs, &collapse).map_err(err)?;
    Ok(PyComplex { inner: constructors::quotient(&x.inner, &spec).map_err(err)? })
}

/// One of `dhat`, `fl`, `pf`, `bf`.
#[pyfunction]
fn reflect(x: &PyComplex, reflector: &str) -> PyResult<PyComplex> {
    let r = match reflector {
        "dhat" => Reflector::Dhat,
        "fl" => Reflector::Fl,
        "pf" => Reflector::Pf,
        "bf" => Reflector::Bf,
        other => return Err(PyValueError::new_err(format!("unknown reflector '{other}'"))),
    };
    Ok(PyComplex { inner: ctop::reflect::reflect(&x.inner, r) })
}

/// Decides `flexible`, `preflexible`, `border-flexible`, `one-simple` or
/// `total-support`. Returns `(holds, witness, bound)`; `bound` is `None`
/// when the answer is exact.
#[pyfunction]
#[pyo3(signature = (x, property, bound = 6))]
fn check(x: &PyComplex, property: &str, bound: usize) -> PyResult<(bool, Option<RouteTuple>, Option<usize>)> {
    let v: Verdict = match property {
        "flexible" => is_flexible_space(&x.inner, bound),
        "preflexible" => is_preflexible(&x.inner, bound),
        "border-flexible" => is_border_flexible(&x.inner, bound),
        "one-simple" => is_one_simple(&x.inner, bound),
        "total-support" => has_total_path_support(&x.inner),
        other => return Err(PyValueError::new_err(format!("unknown property '{other}'"))),
    };
    Ok((v.holds, v.witness.as_ref().map(|w| route_tuple(&x.inner, w)), v.bound))
}

/// Truncated fundamental category as a dict with `objects`, `arrows`,
/// `preorder`, `truncated` and `homs`, the latter mapping `(src, dst)` to a
/// list of `(representative, class size)`.
#[pyfunction]
#[pyo3(signature = (x, bound = 6))]
fn pi1<'py>(py: Python<'py>, x: &PyComplex, bound: usize) -> PyResult<Bound<'py, PyDict>> {
    let c = engine::pi1(&x.inner, bound);
    let g = x.inner.graph();
    let d = PyDict::new(py);
    let objects: Vec<String> = c.objects.iter().map(|&v| g.vertex_name(v).to_string()).collect();
    d.set_item("objects", objects)?;
    d.set_item("arrows", c.arrow_count())?;
    d.set_item("preorder", c.is_preorder())?;
    d.set_item("truncated", c.truncated)?;
    d.set_item("bound", bound)?;
    let mut homs: BTreeMap<(String, String), ClassList> = BTreeMap::new();
    for (&(a, b), classes) in &c.homs {
        homs.insert(
            (g.vertex_name(a).to_string(), g.vertex_name(b).to_string()),
            classes.iter().map(|k| (words(&x.inner, &k.representative), k.members.len())).collect(),
        );
    }
    d.set_item("homs", homs)?;
    Ok(d)
}

/// Classes of one hom as `(representative, class size)` pairs.
#[pyfunction]
#[pyo3(signature = (x, src, dst, bound = 6))]
fn hom(x: &PyComplex, src: &str, dst: &str, bound: usize) -> PyResult<ClassList> {
    let (a, b) = (x.inner.vertex(src).map_err(err)?, x.inner.vertex(dst).map_err(err)?);
    let classes = engine::hom_classes(&x.inner, a, b, bound).map_err(err)?;
    Ok(classes.iter().map(|k| (words(&x.inner, &k.representative), k.members.len())).collect())
}

/// Endomorphism monoid: class representatives and the composition table,
/// `None` where the product leaves the bound.
#[pyfunction]
#[pyo3(signature = (x, x0, bound = 6))]
#[allow(clippy::type_complexity)]
fn monoid(x: &PyComplex, x0: &str, bound: usize) -> PyResult<(Vec<Vec<String>>, Vec<Vec<Option<usize>>>)> {
    let m = engine::fundamental_monoid(&x.inner, x.inner.vertex(x0).map_err(err)?, bound).map_err(err)?;
    Ok((m.classes.iter().map(|k| words(&x.inner, &k.representative)).collect(), m.table))
}

/// A covering map between two complexes.
#[pyclass(name = "Covering", frozen, module = "ctop")]
struct PyCovering {
    inner: CoveringMap,
}

#[pymethods]
impl PyCovering {
    /// Builds a covering from name maps; `boundary` lists window ends of
    /// the total complex.
    #[new]
    #[pyo3(signature = (total, base, vmap, emap, boundary = Vec::new()))]
    fn new(
        total: &PyComplex,
        base: &PyComplex,
        vmap: BTreeMap<String, String>,
        emap: BTreeMap<String, String>,
        boundary: Vec<String>,
    ) -> PyResult<Self> {
        let inner = io::covering_from_names(total.inner.clone(), base.inner.clone(), &vmap, &emap, &boundary).map_err(err)?;
        Ok(PyCovering { inner })
    }

    /// The window `-m..=m` of the line wrapped onto the `n`-stop circle.
    #[staticmethod]
    fn exponential(n: usize, m: i64) -> PyResult<Self> {
        Ok(PyCovering { inner: covering::exponential_cover(n, m).map_err(err)? })
    }

    #[getter]
    fn total(&self) -> PyComplex {
        PyComplex { inner: self.inner.total.clone() }
    }

    #[getter]
    fn base(&self) -> PyComplex {
        PyComplex { inner: self.inner.base.clone() }
    }

    /// Returns `(passed, failures)`.
    #[pyo3(signature = (bound = 6))]
    fn validate(&self, bound: usize) -> (bool, Vec<String>) {
        let r = self.inner.validate(bound);
        (r.passed(), r.failures)
    }

    #[pyo3(signature = (start, edges, dwells, origin))]
    fn lift(&self, start: &str, edges: Vec<String>, dwells: Vec<usize>, origin: &str) -> PyResult<RouteTuple> {
        let b = make_route(&self.inner.base, start, &edges, &dwells)?;
        let x0 = self.inner.total.vertex(origin).map_err(err)?;
        let lift = self.inner.lift_route(&b, x0).map_err(err)?;
        Ok(route_tuple(&self.inner.total, &lift))
    }

    /// Returns `(holds, effective bound, base classes, total classes)`.
    #[pyo3(signature = (origin, target, bound = 6))]
    fn lifting_bijection(&self, origin: &str, target: &str, bound: usize) -> PyResult<(bool, usize, usize, usize)> {
        let x0 = self.inner.total.vertex(origin).map_err(err)?;
        let y = self.inner.base.vertex(target).map_err(err)?;
        let r = self.inner.check_lifting_bijection(x0, y, bound).map_err(err)?;
        Ok((r.holds(), r.effective_bound, r.base_classes, r.total_classes))
    }
}

#[pymodule(name = "ctop")]
pub fn ctop_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyComplex>()?;
    m.add_class::<PyCovering>()?;
    m.add_function(wrap_pyfunction!(std_space, m)?)?;
    m.add_function(wrap_pyfunction!(product, m)?)?;
    m.add_function(wrap_pyfunction!(sum, m)?)?;
    m.add_function(wrap_pyfunction!(opposite, m)?)?;
    m.add_function(wrap_pyfunction!(symmetrize, m)?)?;
    m.add_function(wrap_pyfunction!(restrict, m)?)?;
    m.add_function(wrap_pyfunction!(quotient, m)?)?;
    m.add_function(wrap_pyfunction!(reflect, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(pi1, m)?)?;
    m.add_function(wrap_pyfunction!(hom, m)?)?;
    m.add_function(wrap_pyfunction!(monoid, m)?)?;
    Ok(())
}
