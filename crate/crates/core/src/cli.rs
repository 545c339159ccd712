//! The `tropcurve` command line.
//!
//! Exit status 0 on success, 1 on a domain, JSON or schema error (one line
//! on stderr), 2 on a usage error. JSON output is key-sorted.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::divisors::{
    is_principal, jacobian_group, laplacian, principal_divisor, spanning_tree_count, Divisor,
    GraphFunction,
};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::homology::{
    boundary_matrix, canonical_cycle_basis, check_boundary_identity, coboundary_matrix,
    component_group, jacobian_torus, period_matrix, Orientation,
};
use crate::io::{
    graph_to_dot, graph_to_value, hex, int_map_from_value, length_to_json,
    parse_graph, parse_json, specialization_poset_to_dot, specialization_poset_to_value,
    support_poset_to_dot, support_poset_to_value, to_json_text, GraphDocument,
};
use crate::iso::{canonical_code, find_isomorphism};
use crate::length::{format_rational, Length};
use crate::metric::{
    find_metric_isomorphism, is_pure, tropicalize, DegenerationDescriptor, MetricGraph, TropicalCurve,
};
use crate::moduli::{
    enumerate_stable_graphs, expand_to_maximal, max_edge_trichotomy, specialization_poset,
    stratum_dimension,
};
use crate::strata::{codimension_one_elements, support_poset};
use crate::torelli::{
    c1_sets, jacobians_isomorphic_tropical, jacobians_isomorphic_weighted,
    lattice_isometry_witness, three_edge_connectization, two_edge_connectization,
};

/// Every library operation and the subcommand that reaches it.
pub const OP_REGISTRY: &[(&str, &str)] = &[
    ("first_betti", "genus"),
    ("genus", "genus"),
    ("valency", "genus"),
    ("is_stable", "genus"),
    ("bridges", "genus"),
    ("contract_edge", "contract"),
    ("contract_edge_set", "contract"),
    ("stabilize", "stabilize"),
    ("find_isomorphism", "torelli"),
    ("canonical_code", "export"),
    ("stabilize_metric", "stabilize"),
    ("tropicalize", "tropicalize"),
    ("find_metric_isomorphism", "torelli"),
    ("is_pure", "genus"),
    ("enumerate_stable_graphs", "enum"),
    ("max_edge_trichotomy", "genus"),
    ("expand_to_maximal", "export"),
    ("specialization_poset", "enum"),
    ("stratum_dimension", "genus"),
    ("degree", "div"),
    ("principal_divisor", "div"),
    ("laplacian", "jac-group"),
    ("jacobian_group", "jac-group"),
    ("is_principal", "div"),
    ("spanning_tree_count", "jac-group"),
    ("boundary_matrix", "jac-group"),
    ("coboundary_matrix", "jac-group"),
    ("check_boundary_identity", "jac-group"),
    ("cycle_basis", "period"),
    ("period_matrix", "period"),
    ("jacobian_torus", "period"),
    ("component_group", "jac-group"),
    ("two_edge_connectization", "torelli"),
    ("c1_sets", "sp-poset"),
    ("three_edge_connectization", "torelli"),
    ("cyclic_equivalence", "torelli"),
    ("jacobians_isomorphic_tropical", "torelli"),
    ("jacobians_isomorphic_weighted", "torelli"),
    ("lattice_isometry_witness", "torelli"),
    ("support_poset", "sp-poset"),
    ("codimension_one_elements", "sp-poset"),
];

#[derive(Debug, Parser)]
#[command(name = "tropcurve", version, about = "Weighted graphs, tropical curves and their Jacobians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Plain,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Strata of genus g and their specialization poset
    Enum {
        #[arg(long)]
        genus: u64,
        /// keep only strata with this many edges
        #[arg(long)]
        edges: Option<usize>,
        /// print the number of strata only
        #[arg(long)]
        count: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Stabilize a graph, or a curve when lengths are given
    Stabilize {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Contract the listed edges in order
    Contract {
        input: PathBuf,
        #[arg(long = "edge", required = true)]
        edges: Vec<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Genus, or a structural summary with --format json
    Genus {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Jacobian group of the underlying graph
    JacGroup {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Principal divisor of a function, or principality of a divisor
    Div {
        input: PathBuf,
        #[arg(long, conflicts_with = "divisor", required_unless_present = "divisor")]
        function: Option<PathBuf>,
        #[arg(long)]
        divisor: Option<PathBuf>,
    },
    /// Period matrix of a curve in its canonical cycle basis
    Period {
        input: PathBuf,
        /// print the determinant
        #[arg(long)]
        det: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Decide whether two curves (or weighted graphs) have isomorphic Jacobians
    Torelli {
        first: PathBuf,
        second: PathBuf,
        /// compare as weighted graphs, ignoring lengths
        #[arg(long)]
        weighted_graphs: bool,
    },
    /// Support poset of a bridgeless graph
    SpPoset {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Extended tropical curve of a degeneration (edges carry "valuation")
    Tropicalize {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Re-emit a graph; plain prints its canonical code in hex
    Export {
        input: PathBuf,
        /// expand to a maximal stratum first
        #[arg(long)]
        maximal: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

/// Names of all subcommands.
pub fn subcommands() -> Vec<String> {
    Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect()
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = std::result::Result<String, Failure>;

/// Runs one invocation; `argv[0]` is the program name.
/// Returns (exit status, stdout, stderr).
pub fn run<I, S>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => (0, text, String::new()),
                _ => (2, String::new(), text),
            };
        }
    };
    let threads = std::env::var("TROPCURVE_THREADS").ok().and_then(|t| t.parse::<usize>().ok());
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build();
    let result = match pool {
        Ok(pool) => pool.install(|| dispatch(cli.command)),
        Err(e) => Err(Failure::Domain(Error::Internal(e.to_string()))),
    };
    match result {
        Ok(out) => (0, out, String::new()),
        Err(Failure::Usage(m)) => (2, String::new(), format!("error: {m}\n")),
        Err(Failure::Domain(e)) => (1, String::new(), format!("error: {}\n", e.to_string().replace('\n', " "))),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<GraphDocument> {
    parse_graph(&read(path)?)
}

fn require_lengths(doc: &GraphDocument, key: &str) -> Result<Vec<Length>> {
    let found = if key == "valuation" { &doc.valuations } else { &doc.lengths };
    found.clone().ok_or_else(|| Error::Schema(format!("edges[0].{key}: required by this command")))
}

fn curve(doc: &GraphDocument) -> Result<TropicalCurve> {
    TropicalCurve::new(doc.graph.clone(), require_lengths(doc, "length")?)
}

fn unsupported(format: Format, command: &str) -> Failure {
    let name = format.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    Failure::Usage(format!("--format {name} is not supported by `{command}`"))
}

fn emit_graph(g: &WeightedGraph, lengths: Option<&[Length]>, format: Format, command: &str) -> Outcome {
    match format {
        Format::Json => Ok(to_json_text(&graph_to_value(g, lengths))),
        Format::Dot => Ok(graph_to_dot(g, lengths)),
        Format::Plain => Err(unsupported(format, command)),
    }
}

fn matrix_value(m: &[Vec<i64>]) -> Value {
    json!(m)
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Enum { genus, edges, count, format } => cmd_enum(genus, edges, count, format),
        Command::Stabilize { input, format } => {
            let doc = load(&input)?;
            match doc.lengths {
                Some(_) => {
                    let c = curve(&doc)?.stabilize()?;
                    emit_graph(c.graph(), Some(c.lengths()), format, "stabilize")
                }
                None => emit_graph(&doc.graph.stabilize()?, None, format, "stabilize"),
            }
        }
        Command::Contract { input, edges, format } => {
            let doc = load(&input)?;
            let by_id: Option<BTreeMap<String, Length>> = doc.lengths.as_ref().map(|l| {
                doc.graph.edges().iter().map(|e| e.id.clone()).zip(l.iter().cloned()).collect()
            });
            let mut g = doc.graph.clone();
            if let [only] = edges.as_slice() {
                g = g.contract_edge(only)?.0;
            } else {
                g = g.contract_edge_set(&edges)?;
            }
            let lengths: Option<Vec<Length>> =
                by_id.map(|m| g.edges().iter().map(|e| m[&e.id].clone()).collect());
            emit_graph(&g, lengths.as_deref(), format, "contract")
        }
        Command::Genus { input, format } => cmd_genus(&load(&input)?, format),
        Command::JacGroup { input, format } => cmd_jac_group(&load(&input)?.graph, format),
        Command::Div { input, function, divisor } => cmd_div(&load(&input)?.graph, function, divisor),
        Command::Period { input, det, format } => cmd_period(&load(&input)?, det, format),
        Command::Torelli { first, second, weighted_graphs } => {
            cmd_torelli(&load(&first)?, &load(&second)?, weighted_graphs)
        }
        Command::SpPoset { input, format } => {
            let g = load(&input)?.graph;
            let p = support_poset(&g)?;
            match format {
                Format::Json => {
                    let codim_one = codimension_one_elements(&g)?;
                    debug_assert_eq!(codim_one, c1_sets(&g)?.block_ids(&g));
                    Ok(to_json_text(&support_poset_to_value(&g, &p, &codim_one)))
                }
                Format::Dot => Ok(support_poset_to_dot(&g, &p)),
                Format::Plain => Ok(p
                    .element_ids(&g)
                    .iter()
                    .map(|s| format!("{{{}}}\n", s.join(",")))
                    .collect()),
            }
        }
        Command::Tropicalize { input, format } => {
            let doc = load(&input)?;
            let d = DegenerationDescriptor::new(doc.graph.clone(), require_lengths(&doc, "valuation")?);
            let c = tropicalize(&d)?;
            emit_graph(c.graph(), Some(c.lengths()), format, "tropicalize")
        }
        Command::Export { input, maximal, format } => {
            let doc = load(&input)?;
            if maximal {
                let (g, set) = expand_to_maximal(&doc.graph)?;
                return match format {
                    Format::Json => Ok(to_json_text(&json!({
                        "graph": graph_to_value(&g, None),
                        "contraction_set": set,
                    }))),
                    Format::Dot => Ok(graph_to_dot(&g, None)),
                    Format::Plain => Ok(format!("{}\n", hex(&canonical_code(&g)))),
                };
            }
            match format {
                Format::Plain => Ok(format!("{}\n", hex(&canonical_code(&doc.graph)))),
                _ => emit_graph(&doc.graph, doc.lengths.as_deref(), format, "export"),
            }
        }
    }
}

fn cmd_enum(genus: u64, edges: Option<usize>, count: bool, format: Format) -> Outcome {
    let catalog = enumerate_stable_graphs(genus)?;
    let keep: Vec<usize> = match edges {
        Some(k) => catalog.with_edges(k),
        None => (0..catalog.len()).collect(),
    };
    if count {
        return Ok(format!("{}\n", keep.len()));
    }
    let poset = specialization_poset(&catalog)?;
    Ok(match format {
        Format::Json => to_json_text(&specialization_poset_to_value(&catalog, &poset, &keep)),
        Format::Dot => specialization_poset_to_dot(&catalog, &poset, &keep),
        Format::Plain => keep
            .iter()
            .map(|&i| format!("{i}\t{}\t{}\n", catalog.strata[i].edge_count(), hex(&catalog.codes[i])))
            .collect(),
    })
}

fn cmd_genus(doc: &GraphDocument, format: Format) -> Outcome {
    let g = &doc.graph;
    let genus = g.genus()?;
    match format {
        Format::Plain => Ok(format!("{genus}\n")),
        Format::Dot => Err(unsupported(format, "genus")),
        Format::Json => {
            let stable = g.is_stable()?;
            let mut valencies = BTreeMap::new();
            for v in g.vertices() {
                valencies.insert(v.id.clone(), g.valency(&v.id)?);
            }
            let trichotomy = if stable {
                let t = max_edge_trichotomy(g)?;
                json!({
                    "edges": t.edges,
                    "bound": t.bound,
                    "weightless_trivalent": t.weightless_trivalent,
                    "weightless_with_2g_minus_2_vertices": t.weightless_with_2g_minus_2_vertices,
                })
            } else {
                Value::Null
            };
            let pure = match &doc.lengths {
                Some(l) => match TropicalCurve::new(g.clone(), l.clone()) {
                    Ok(c) => is_pure(&c),
                    Err(_) => g.is_pure(),
                },
                None => g.is_pure(),
            };
            Ok(to_json_text(&json!({
                "genus": genus,
                "betti": g.first_betti(),
                "bridges": g.bridges(),
                "valencies": valencies,
                "stable": stable,
                "pure": pure,
                "dimension": if stable { json!(stratum_dimension(g)?) } else { Value::Null },
                "trichotomy": trichotomy,
            })))
        }
    }
}

fn cmd_jac_group(g: &WeightedGraph, format: Format) -> Outcome {
    let group = jacobian_group(g)?;
    match format {
        Format::Plain => Ok(format!("{group}\n")),
        Format::Dot => Err(unsupported(format, "jac-group")),
        Format::Json => {
            let o = Orientation::canonical(g);
            let phi = component_group(g)?;
            Ok(to_json_text(&json!({
                "group": group.to_string(),
                "invariant_factors": group.invariant_factors,
                "order": group.order().to_string(),
                "spanning_trees": spanning_tree_count(g)?.to_string(),
                "component_group": phi.to_string(),
                "laplacian": matrix_value(&laplacian(g)),
                "boundary": matrix_value(&boundary_matrix(g, &o)?),
                "coboundary": matrix_value(&coboundary_matrix(g, &o)?),
                "boundary_identity": check_boundary_identity(g, &o),
            })))
        }
    }
}

fn cmd_div(g: &WeightedGraph, function: Option<PathBuf>, divisor: Option<PathBuf>) -> Outcome {
    if let Some(path) = function {
        let map = int_map_from_value(&parse_json(&read(&path)?)?, "function")?;
        let f = GraphFunction::from_map(g, &map)?;
        let d = principal_divisor(g, &f);
        return Ok(to_json_text(&json!({"degree": d.degree(), "divisor": d.to_map(g)})));
    }
    let path = divisor.ok_or_else(|| Failure::Usage("one of --function or --divisor is required".into()))?;
    let map = int_map_from_value(&parse_json(&read(&path)?)?, "divisor")?;
    let d = Divisor::from_map(g, &map)?;
    let witness = is_principal(g, &d)?;
    Ok(to_json_text(&json!({
        "degree": d.degree(),
        "principal": witness.is_some(),
        "witness": witness.map(|f| json!(f.to_map(g))).unwrap_or(Value::Null),
    })))
}

fn cmd_period(doc: &GraphDocument, det: bool, format: Format) -> Outcome {
    let lengths = require_lengths(doc, "length")?;
    let g = &doc.graph;
    let basis = canonical_cycle_basis(g)?;
    let q = period_matrix(&lengths, &basis);
    let dimension = if lengths.iter().all(|l| !l.is_infinite()) {
        jacobian_torus(&curve(doc)?)?.dimension
    } else {
        g.require_connected()?;
        if basis.is_empty() {
            return Err(Error::GenusZero.into());
        }
        g.genus()?
    };
    let determinant = if det {
        let d = q.determinant().ok_or_else(|| Error::InvalidLength {
            edge: g.edges()[lengths.iter().position(Length::is_infinite).unwrap()].id.clone(),
            reason: "infinite length leaves the determinant undefined".into(),
        })?;
        Some(format_rational(&d))
    } else {
        None
    };
    match format {
        Format::Dot => Err(unsupported(format, "period")),
        Format::Plain => Ok(match determinant {
            Some(d) => format!("{d}\n"),
            None => q
                .gram
                .iter()
                .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ") + "\n")
                .collect(),
        }),
        Format::Json => {
            let gram: Vec<Vec<Value>> =
                q.gram.iter().map(|row| row.iter().map(length_to_json).collect()).collect();
            let cycles: Vec<BTreeMap<String, i64>> = basis
                .cycles
                .iter()
                .map(|c| {
                    c.iter()
                        .enumerate()
                        .filter(|(_, &x)| x != 0)
                        .map(|(e, &x)| (g.edges()[e].id.clone(), x))
                        .collect()
                })
                .collect();
            let mut out = json!({
                "dimension": dimension,
                "rank": q.size(),
                "gram": gram,
                "cycles": cycles,
            });
            if let Some(d) = determinant {
                out["determinant"] = json!(d);
            }
            Ok(to_json_text(&out))
        }
    }
}

fn pairs_value(pairs: Vec<(String, String)>) -> Value {
    json!(pairs.into_iter().map(|(a, b)| [a, b]).collect::<Vec<_>>())
}

fn cmd_torelli(a: &GraphDocument, b: &GraphDocument, weighted: bool) -> Outcome {
    if weighted {
        let (g1, g2) = (&a.graph, &b.graph);
        let v = jacobians_isomorphic_weighted(g1, g2)?;
        let (h1, h2) = (two_edge_connectization(g1)?, two_edge_connectization(g2)?);
        return Ok(to_json_text(&json!({
            "verdict": v.verdict,
            "witness": v.witness.map(|w| pairs_value(w.id_pairs(&h1, &h2))).unwrap_or(Value::Null),
            "graphs_isomorphic": find_isomorphism(g1, g2).is_some(),
        })));
    }
    let (c1, c2) = (curve(a)?, curve(b)?);
    let v = jacobians_isomorphic_tropical(&c1, &c2)?;
    let (t1, t2) = (three_edge_connectization(&c1)?, three_edge_connectization(&c2)?);
    let (witness, isometry) = match &v.witness {
        Some(w) => (
            pairs_value(w.id_pairs(t1.graph(), t2.graph())),
            matrix_value(&lattice_isometry_witness(&c1, &c2, w)?),
        ),
        None => (Value::Null, Value::Null),
    };
    Ok(to_json_text(&json!({
        "verdict": v.verdict,
        "witness": witness,
        "isometry": isometry,
        "curves_isomorphic": find_metric_isomorphism(&c1, &c2).is_some(),
    })))
}
