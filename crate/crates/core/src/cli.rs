//! Command-line interface. [`run_command`] returns the exit status and the
//! report text so it can be driven from tests.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::classify::{has_total_path_support, is_border_flexible, is_flexible_space, is_preflexible, path_support, Verdict};
use crate::complex::{Complex, Reflector};
use crate::constructors::{
    diagonal_square, full_substructure, line_segment, one_jump_interval, one_stop_circle, opposite, product, quotient,
    std_space, sum, symmetrize, QuotientSpec, StandardSpaceKind,
};
use crate::covering::CoveringMap;
use crate::error::{Error, Result};
use crate::io::{covering_from_names, read_complex, serialize_complex};
use crate::pi1::{fundamental_monoid, hom_classes, is_one_simple, pi1};
use crate::reflect::reflect;
use crate::route::Route;

#[derive(Parser, Debug)]
#[command(name = "ctop", version, about = "Controlled complexes and their fundamental categories")]
struct Cli {
    /// Seed for randomized sampling (accepted for reproducibility).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Table,
    Machine,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReflectorArg {
    Dhat,
    Fl,
    Pf,
    Bf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Property {
    Flexible,
    Preflexible,
    BorderFlexible,
    OneSimple,
    TotalSupport,
}

#[derive(clap::Args, Debug)]
struct CoverArgs {
    total: PathBuf,
    base: PathBuf,
    /// Vertex map as `total=base` pairs separated by commas.
    #[arg(long, allow_hyphen_values = true)]
    vmap: String,
    /// Edge map as `total=base` pairs separated by commas.
    #[arg(long, allow_hyphen_values = true)]
    emap: String,
    /// Window boundary vertices of the total complex, exempt from the star check.
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    boundary: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a standard complex.
    New {
        kind: String,
        #[arg(allow_negative_numbers = true)]
        params: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Truncated fundamental category.
    Pi1 {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        bound: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Classes of one hom.
    Hom {
        file: PathBuf,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Endomorphism monoid of a flexible vertex.
    Monoid {
        file: PathBuf,
        #[arg(allow_hyphen_values = true)]
        x0: String,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Apply a reflection.
    Reflect {
        file: PathBuf,
        #[arg(value_enum)]
        reflector: ReflectorArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide a property; exit status 1 when it fails.
    Check {
        file: PathBuf,
        #[arg(value_enum)]
        property: Property,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Sum {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Opposite complex.
    Op {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Full substructure on the given flexible vertices.
    Restrict {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        keep: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Quotient by a JSON spec `{"blocks": [[..]], "collapse": [..]}`.
    Quotient {
        file: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Add reverses and cancellation cells.
    Symmetrize {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    CoverValidate {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    CoverLift {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, default_value = "")]
        edges: String,
        #[arg(long, default_value = "")]
        dwells: String,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
    },
    CoverBijection {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
    /// Classification and fundamental category summary.
    Report {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
}

/// Parses `argv` (without the program name) and runs the command.
/// Exit status: 0 success or property holds, 1 property fails, 2 usage,
/// parse or input error.
pub fn run_command<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("ctop")).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            return (code, e.to_string());
        }
    };
    match run(cli.command) {
        Ok(out) => out,
        Err(e) => (2, format!("error: {e}\n")),
    }
}

fn names(x: &Complex, vs: impl IntoIterator<Item = crate::graph::VertexId>) -> String {
    vs.into_iter().map(|v| x.graph().vertex_name(v).to_string()).collect::<Vec<_>>().join(",")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn emit(x: &Complex, output: Option<PathBuf>) -> Result<(i32, String)> {
    let text = serialize_complex(x);
    match output {
        Some(path) => {
            std::fs::write(&path, text)?;
            Ok((0, format!("wrote {}\n", path.display())))
        }
        None => Ok((0, text)),
    }
}

fn verdict_text(x: &Complex, what: &str, v: &Verdict) -> (i32, String) {
    let mut out = format!("{what}: {}\n", yes(v.holds));
    if let Some(w) = &v.witness {
        let _ = writeln!(out, "witness: {}", w.display(x.graph()));
    }
    match v.bound {
        Some(b) => {
            let _ = writeln!(out, "bound: {b}");
        }
        None => out.push_str("exact: yes\n"),
    }
    (if v.holds { 0 } else { 1 }, out)
}

fn parse_kind(kind: &str, params: &[String]) -> Result<Complex> {
    let int = |i: usize| -> Result<i64> {
        params
            .get(i)
            .ok_or_else(|| Error::InvalidParameter(format!("'{kind}' needs parameter {}", i + 1)))?
            .parse::<i64>()
            .map_err(|e| Error::InvalidParameter(format!("bad parameter: {e}")))
    };
    let count = |i: usize| -> Result<usize> {
        let v = int(i)?;
        usize::try_from(v).map_err(|_| Error::InvalidParameter(format!("parameter must be positive, got {v}")))
    };
    let arity = match kind {
        "line" | "circle" | "discrete" | "one-jump" | "one-stop-circle" => 1,
        "line-segment" => 2,
        _ => 0,
    };
    if params.len() > arity {
        return Err(Error::InvalidParameter(format!("'{kind}' takes {arity} parameter(s), got {}", params.len())));
    }
    use StandardSpaceKind as K;
    match kind {
        "interval" => std_space(K::IntervalC),
        "interval-j" => std_space(K::IntervalJ),
        "delayed-minus" => std_space(K::IntervalDelayedMinus),
        "delayed-plus" => std_space(K::IntervalDelayedPlus),
        "middle-delay" => std_space(K::IntervalMiddleDelay),
        "reversible" => std_space(K::IntervalReversible),
        "line" => std_space(K::LineC(int(0)?)),
        "circle" => std_space(K::CircleNStop(count(0)?)),
        "discrete" => std_space(K::Discrete(count(0)?)),
        "line-segment" => line_segment(int(0)?, int(1)?),
        "one-jump" => one_jump_interval(count(0)?),
        "one-stop-circle" => one_stop_circle(count(0)?),
        "diagonal-square" => diagonal_square(),
        other => Err(Error::InvalidParameter(format!("unknown kind '{other}'"))),
    }
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::to_string).collect()
}

fn parse_pairs(s: &str, what: &str) -> Result<BTreeMap<String, String>> {
    split_list(s)
        .into_iter()
        .map(|pair| match pair.split_once('=') {
            Some((a, b)) => Ok((a.to_string(), b.to_string())),
            None => Err(Error::InvalidParameter(format!("{what}: expected 'a=b', got '{pair}'"))),
        })
        .collect()
}

fn load_cover(c: &CoverArgs) -> Result<CoveringMap> {
    let total = read_complex(&c.total)?;
    let base = read_complex(&c.base)?;
    covering_from_names(
        total,
        base,
        &parse_pairs(&c.vmap, "--vmap")?,
        &parse_pairs(&c.emap, "--emap")?,
        &split_list(&c.boundary),
    )
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuotientSpecDoc {
    #[serde(default)]
    blocks: Vec<Vec<String>>,
    #[serde(default)]
    collapse: Vec<String>,
}

fn run(command: Command) -> Result<(i32, String)> {
    match command {
        Command::New { kind, params, output } => emit(&parse_kind(&kind, &params)?, output),
        Command::Pi1 { file, bound, format } => {
            let x = read_complex(file)?;
            let cat = pi1(&x, bound);
            let g = x.graph();
            let mut out = String::new();
            match format {
                Format::Table => {
                    let _ = writeln!(out, "objects: {}", names(&x, cat.objects.iter().copied()));
                    let _ = writeln!(out, "arrows: {}", cat.arrow_count());
                    let _ = writeln!(out, "preorder: {}", yes(cat.is_preorder()));
                    let _ = writeln!(out, "truncated: {} (bound {bound})", yes(cat.truncated));
                    for (&(a, b), classes) in &cat.homs {
                        let reps: Vec<String> = classes
                            .iter()
                            .map(|c| format!("{} [{}]", c.representative.display(g), c.members.len()))
                            .collect();
                        let _ = writeln!(out, "hom {} -> {}: {}", g.vertex_name(a), g.vertex_name(b), reps.join(", "));
                    }
                }
                Format::Machine => {
                    for (&(a, b), classes) in &cat.homs {
                        for c in classes {
                            let record = serde_json::json!({
                                "src": g.vertex_name(a),
                                "dst": g.vertex_name(b),
                                "representative": c.representative.edges.iter().map(|&e| g.edge_name(e)).collect::<Vec<_>>(),
                                "size": c.members.len(),
                                "truncated": cat.truncated,
                            });
                            let _ = writeln!(out, "{record}");
                        }
                    }
                }
            }
            Ok((0, out))
        }
        Command::Hom { file, x: a, y: b, bound } => {
            let x = read_complex(file)?;
            let (va, vb) = (x.vertex(&a)?, x.vertex(&b)?);
            let classes = hom_classes(&x, va, vb, bound)?;
            let mut out = format!("hom {a} -> {b}: {} class(es) (bound {bound})\n", classes.len());
            for c in &classes {
                let _ = writeln!(out, "  {} [{}]", c.representative.display(x.graph()), c.members.len());
            }
            Ok((0, out))
        }
        Command::Monoid { file, x0, bound } => {
            let x = read_complex(file)?;
            let m = fundamental_monoid(&x, x.vertex(&x0)?, bound)?;
            let g = x.graph();
            let mut out = format!("monoid at {x0}: {} class(es)\n", m.classes.len());
            let _ = writeln!(out, "truncated: {} (bound {bound})", yes(m.truncated));
            for (i, c) in m.classes.iter().enumerate() {
                let _ = writeln!(out, "  {i}: {}", c.representative.display(g));
            }
            out.push_str("table:\n");
            for row in &m.table {
                let cells: Vec<String> = row.iter().map(|c| c.map_or("-".to_string(), |k| k.to_string())).collect();
                let _ = writeln!(out, "  {}", cells.join(" "));
            }
            Ok((0, out))
        }
        Command::Reflect { file, reflector, output } => {
            let x = read_complex(file)?;
            let r = match reflector {
                ReflectorArg::Dhat => Reflector::Dhat,
                ReflectorArg::Fl => Reflector::Fl,
                ReflectorArg::Pf => Reflector::Pf,
                ReflectorArg::Bf => Reflector::Bf,
            };
            emit(&reflect(&x, r), output)
        }
        Command::Check { file, property, bound } => {
            let x = read_complex(file)?;
            Ok(match property {
                Property::Flexible => verdict_text(&x, "flexible", &is_flexible_space(&x, bound)),
                Property::Preflexible => verdict_text(&x, "preflexible", &is_preflexible(&x, bound)),
                Property::BorderFlexible => verdict_text(&x, "border-flexible", &is_border_flexible(&x, bound)),
                Property::OneSimple => verdict_text(&x, "one-simple", &is_one_simple(&x, bound)),
                Property::TotalSupport => verdict_text(&x, "total-support", &has_total_path_support(&x)),
            })
        }
        Command::Product { a, b, output } => emit(&product(&read_complex(a)?, &read_complex(b)?), output),
        Command::Sum { a, b, output } => emit(&sum(&read_complex(a)?, &read_complex(b)?), output),
        Command::Op { file, output } => emit(&opposite(&read_complex(file)?), output),
        Command::Restrict { file, keep, output } => {
            let x = read_complex(file)?;
            let keep = split_list(&keep).iter().map(|n| x.vertex(n)).collect::<Result<BTreeSet<_>>>()?;
            emit(&full_substructure(&x, &keep)?, output)
        }
        Command::Quotient { file, spec, output } => {
            let x = read_complex(file)?;
            let doc: QuotientSpecDoc = serde_json::from_str(&std::fs::read_to_string(spec)?)?;
            let blocks: Vec<Vec<&str>> = doc.blocks.iter().map(|b| b.iter().map(String::as_str).collect()).collect();
            let block_refs: Vec<&[&str]> = blocks.iter().map(Vec::as_slice).collect();
            let collapse: Vec<&str> = doc.collapse.iter().map(String::as_str).collect();
            let spec = QuotientSpec::by_names(&x, &block_refs, &collapse)?;
            emit(&quotient(&x, &spec)?, output)
        }
        Command::Symmetrize { file, output } => emit(&symmetrize(&read_complex(file)?), output),
        Command::CoverValidate { cover, bound } => {
            let p = load_cover(&cover)?;
            let r = p.validate(bound);
            let mut out = format!("covering: {}\n", yes(r.passed()));
            let _ = writeln!(out, "star bijections: {}", yes(r.star_bijective));
            let _ = writeln!(out, "lifts controlled: {} ({} lifts, bound {bound})", yes(r.lifts_controlled), r.routes_checked);
            let _ = writeln!(out, "flexible preimage: {}", yes(r.flexible_is_preimage));
            if !r.excluded.is_empty() {
                let _ = writeln!(out, "excluded from star check: {}", names(&p.total, r.excluded.iter().copied()));
            }
            for f in &r.failures {
                let _ = writeln!(out, "failure: {f}");
            }
            Ok((if r.passed() { 0 } else { 1 }, out))
        }
        Command::CoverLift { cover, start, edges, dwells, from } => {
            let p = load_cover(&cover)?;
            let edge_names = split_list(&edges);
            let edge_refs: Vec<&str> = edge_names.iter().map(String::as_str).collect();
            let dwells = split_list(&dwells)
                .iter()
                .map(|d| d.parse::<usize>().map_err(|e| Error::InvalidParameter(format!("--dwells: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            let b: Route = p.base.route(&start, &edge_refs, &dwells)?;
            let lift = p.lift_route(&b, p.total.vertex(&from)?)?;
            Ok((0, format!("lift: {}\ncontrolled: {}\n", lift.display(p.total.graph()), yes(p.total.is_controlled(&lift)))))
        }
        Command::CoverBijection { cover, from, to, bound } => {
            let p = load_cover(&cover)?;
            let r = p.check_lifting_bijection(p.total.vertex(&from)?, p.base.vertex(&to)?, bound)?;
            let mut out = format!("bijection: {}\n", yes(r.holds()));
            let _ = writeln!(out, "effective bound: {}", r.effective_bound);
            let _ = writeln!(out, "base classes: {}", r.base_classes);
            let _ = writeln!(out, "total classes: {}", r.total_classes);
            for (b, t) in &r.pairs {
                let _ = writeln!(
                    out,
                    "  {} -> {} ending at {}",
                    b.display(p.base.graph()),
                    t.display(p.total.graph()),
                    p.total.graph().vertex_name(t.end)
                );
            }
            Ok((if r.holds() { 0 } else { 1 }, out))
        }
        Command::Report { file, bound } => {
            let x = read_complex(file)?;
            let g = x.graph();
            let mut out = String::new();
            let _ = writeln!(out, "name: {}", x.name().unwrap_or("-"));
            let _ = writeln!(out, "vertices: {}", g.vertex_count());
            let _ = writeln!(out, "edges: {}", g.edge_count());
            let _ = writeln!(out, "cells: {}", x.cells().len());
            let _ = writeln!(out, "flexible: {}", names(&x, x.flexible_vertices()));
            let (sv, se) = path_support(&x);
            let _ = writeln!(
                out,
                "path support: {} vertices, {} edges",
                sv.len(),
                se.len()
            );
            let line = |out: &mut String, what: &str, v: Verdict| {
                let _ = write!(out, "{what}: {}", yes(v.holds));
                if let Some(w) = &v.witness {
                    let _ = write!(out, " (witness {})", w.display(g));
                }
                if let Some(b) = v.bound {
                    let _ = write!(out, " (bound {b})");
                }
                out.push('\n');
            };
            line(&mut out, "flexible", is_flexible_space(&x, bound));
            line(&mut out, "preflexible", is_preflexible(&x, bound));
            line(&mut out, "border-flexible", is_border_flexible(&x, bound));
            line(&mut out, "total-support", has_total_path_support(&x));
            let cat = pi1(&x, bound);
            let _ = writeln!(out, "objects: {}", names(&x, cat.objects.iter().copied()));
            let _ = writeln!(out, "arrows: {}", cat.arrow_count());
            let _ = writeln!(out, "preorder: {}", yes(cat.is_preorder()));
            let _ = writeln!(out, "truncated: {} (bound {bound})", yes(cat.truncated));
            Ok((0, out))
        }
    }
}
