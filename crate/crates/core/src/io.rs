//! JSON and DOT encodings of graphs, curves and posets.
//!
//! Graph schema:
//! `{"vertices": [{"id", "weight"}], "edges": [{"id", "ends": [u, v], "length"}]}`
//! where `length` is a positive number, `"p/q"`, `"inf"`, or null for a
//! purely combinatorial graph. Degeneration descriptors add `valuation`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Map, Number, Value};

use crate::cycles::EdgeMask;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::length::Length;
use crate::moduli::{SpecializationPoset, StratumCatalog};
use crate::strata::{mask_ids, SupportPoset};

/// A graph read from JSON with its optional per-edge lengths and valuations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDocument {
    pub graph: WeightedGraph,
    pub lengths: Option<Vec<Length>>,
    pub valuations: Option<Vec<Length>>,
}

fn schema(field: impl Into<String>, what: &str) -> Error {
    Error::Schema(format!("{}: {what}", field.into()))
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| Error::Json(format!("{e} (line {}, column {})", e.line(), e.column())))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(format!("{path}.{key}"), "missing"))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(path, "expected a string"))
}

/// A length-like value: number, `"p/q"`, `"inf"`; null maps to `None`.
pub fn length_from_json(v: &Value, path: &str) -> Result<Option<Length>> {
    let text = match v {
        Value::Null => return Ok(None),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(schema(path, "expected a number, \"p/q\", \"inf\" or null")),
    };
    Length::from_str(&text)
        .map(Some)
        .map_err(|_| schema(path, &format!("cannot parse `{text}` as a length")))
}

pub fn length_to_json(l: &Length) -> Value {
    match l {
        Length::Finite(r) if r.is_integer() => {
            Value::Number(Number::from_str(&r.to_integer().to_string()).expect("integer literal"))
        }
        other => Value::String(other.to_string()),
    }
}

/// All-or-nothing per-edge attribute.
fn collect_lengths(values: Vec<Option<Length>>, key: &str) -> Result<Option<Vec<Length>>> {
    let present = values.iter().filter(|l| l.is_some()).count();
    if present == 0 {
        return Ok(None);
    }
    if present < values.len() {
        let i = values.iter().position(|l| l.is_none()).unwrap();
        return Err(schema(format!("edges[{i}].{key}"), "must be set on every edge or on none"));
    }
    Ok(Some(values.into_iter().map(Option::unwrap).collect()))
}

pub fn graph_from_value(v: &Value) -> Result<GraphDocument> {
    let top = as_object(v, "$")?;
    let mut vertices = Vec::new();
    for (i, x) in as_array(field(top, "vertices", "$")?, "vertices")?.iter().enumerate() {
        let path = format!("vertices[{i}]");
        let obj = as_object(x, &path)?;
        let id = as_str(field(obj, "id", &path)?, &format!("{path}.id"))?;
        let weight = match obj.get("weight") {
            None | Some(Value::Null) => 0,
            Some(w) => w
                .as_u64()
                .and_then(|w| u32::try_from(w).ok())
                .ok_or_else(|| schema(format!("{path}.weight"), "expected a nonnegative integer"))?,
        };
        vertices.push((id.to_string(), weight));
    }
    let mut edges = Vec::new();
    let mut lengths = Vec::new();
    let mut valuations = Vec::new();
    for (i, x) in as_array(field(top, "edges", "$")?, "edges")?.iter().enumerate() {
        let path = format!("edges[{i}]");
        let obj = as_object(x, &path)?;
        let id = as_str(field(obj, "id", &path)?, &format!("{path}.id"))?;
        let ends = as_array(field(obj, "ends", &path)?, &format!("{path}.ends"))?;
        if ends.len() != 2 {
            return Err(schema(format!("{path}.ends"), "expected two vertex ids"));
        }
        let a = as_str(&ends[0], &format!("{path}.ends[0]"))?;
        let b = as_str(&ends[1], &format!("{path}.ends[1]"))?;
        edges.push((id.to_string(), a.to_string(), b.to_string()));
        let attr = |key: &str| match obj.get(key) {
            None => Ok(None),
            Some(v) => length_from_json(v, &format!("{path}.{key}")),
        };
        lengths.push(attr("length")?);
        valuations.push(attr("valuation")?);
    }
    Ok(GraphDocument {
        graph: WeightedGraph::new(vertices, edges)?,
        lengths: collect_lengths(lengths, "length")?,
        valuations: collect_lengths(valuations, "valuation")?,
    })
}

pub fn parse_graph(text: &str) -> Result<GraphDocument> {
    graph_from_value(&parse_json(text)?)
}

pub fn graph_to_value(g: &WeightedGraph, lengths: Option<&[Length]>) -> Value {
    let vertices: Vec<Value> = g
        .vertices()
        .iter()
        .map(|v| json!({"id": v.id, "weight": v.weight}))
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            json!({
                "id": e.id,
                "ends": [g.vertices()[e.ends.0].id, g.vertices()[e.ends.1].id],
                "length": lengths.map_or(Value::Null, |l| length_to_json(&l[i])),
            })
        })
        .collect();
    json!({"vertices": vertices, "edges": edges})
}

/// Pretty-printed, key-sorted, newline-terminated.
pub fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

fn quote(s: &str) -> String {
    format!("{s:?}")
}

/// Vertices labeled `id:weight`, edges `id` or `id:length`, both sorted by id.
pub fn graph_to_dot(g: &WeightedGraph, lengths: Option<&[Length]>) -> String {
    let mut out = String::from("graph G {\n");
    let mut vs: Vec<_> = g.vertices().iter().collect();
    vs.sort_by(|a, b| a.id.cmp(&b.id));
    for v in vs {
        let _ = writeln!(out, "  {} [label={}];", quote(&v.id), quote(&format!("{}:{}", v.id, v.weight)));
    }
    let mut es: Vec<usize> = (0..g.edge_count()).collect();
    es.sort_by(|&a, &b| g.edges()[a].id.cmp(&g.edges()[b].id));
    for i in es {
        let e = &g.edges()[i];
        let label = match lengths {
            Some(l) => format!("{}:{}", e.id, l[i]),
            None => e.id.clone(),
        };
        let _ = writeln!(
            out,
            "  {} -- {} [label={}];",
            quote(&g.vertices()[e.ends.0].id),
            quote(&g.vertices()[e.ends.1].id),
            quote(&label)
        );
    }
    out.push_str("}\n");
    out
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Integer map keyed by vertex id, e.g. a divisor or a function.
pub fn int_map_from_value(v: &Value, path: &str) -> Result<BTreeMap<String, i64>> {
    as_object(v, path)?
        .iter()
        .map(|(k, x)| {
            x.as_i64()
                .map(|n| (k.clone(), n))
                .ok_or_else(|| schema(format!("{path}.{k}"), "expected an integer"))
        })
        .collect()
}

/// Catalog nodes restricted to `keep`, with the covers among them.
pub fn specialization_poset_to_value(
    catalog: &StratumCatalog,
    poset: &SpecializationPoset,
    keep: &[usize],
) -> Value {
    let nodes: Vec<Value> = keep
        .iter()
        .map(|&i| {
            let g = &catalog.strata[i];
            json!({
                "index": i,
                "edges": g.edge_count(),
                "vertices": g.vertex_count(),
                "code": hex(&catalog.codes[i]),
                "graph": graph_to_value(g, None),
            })
        })
        .collect();
    let covers: Vec<Value> = poset
        .covers
        .iter()
        .filter(|(a, b)| keep.contains(a) && keep.contains(b))
        .map(|&(a, b)| json!([a, b]))
        .collect();
    json!({"genus": catalog.genus, "nodes": nodes, "covers": covers})
}

/// Nodes labeled with edge count and a canonical-code prefix.
pub fn specialization_poset_to_dot(
    catalog: &StratumCatalog,
    poset: &SpecializationPoset,
    keep: &[usize],
) -> String {
    let mut out = format!("digraph M{} {{\n  rankdir=TB;\n", catalog.genus);
    for &i in keep {
        let code = hex(&catalog.codes[i]);
        let prefix = &code[8..code.len().min(24)];
        let _ = writeln!(
            out,
            "  s{i} [label=\"|E|={} {}\"];",
            catalog.strata[i].edge_count(),
            prefix
        );
    }
    for &(a, b) in &poset.covers {
        if keep.contains(&a) && keep.contains(&b) {
            let _ = writeln!(out, "  s{a} -> s{b};");
        }
    }
    out.push_str("}\n");
    out
}

fn mask_label(g: &WeightedGraph, m: EdgeMask) -> String {
    format!("{{{}}}", mask_ids(g, m).join(","))
}

pub fn support_poset_to_value(g: &WeightedGraph, p: &SupportPoset, codim_one: &[Vec<String>]) -> Value {
    let covers: Vec<Value> = p.covers().into_iter().map(|(a, b)| json!([a, b])).collect();
    json!({
        "elements": p.element_ids(g),
        "covers": covers,
        "codimension_one": codim_one,
    })
}

pub fn support_poset_to_dot(g: &WeightedGraph, p: &SupportPoset) -> String {
    let mut out = String::from("digraph SP {\n");
    for (i, &m) in p.elements.iter().enumerate() {
        let _ = writeln!(out, "  p{i} [label={}];", quote(&mask_label(g, m)));
    }
    for (a, b) in p.covers() {
        let _ = writeln!(out, "  p{a} -> p{b};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn round_trip_with_lengths() {
        let text = r#"{"vertices":[{"id":"u","weight":0},{"id":"v","weight":0}],
            "edges":[{"id":"a","ends":["u","v"],"length":2},
                     {"id":"b","ends":["u","v"],"length":"3/2"},
                     {"id":"c","ends":["u","v"],"length":0.25}]}"#;
        let doc = parse_graph(text).unwrap();
        assert_eq!(doc.graph, theta((0, 0)));
        let l = doc.lengths.unwrap();
        assert_eq!(l, vec![Length::integer(2), Length::ratio(3, 2), Length::ratio(1, 4)]);
        let v = graph_to_value(&doc.graph, Some(&l));
        let back = graph_from_value(&v).unwrap();
        assert_eq!(back.lengths.unwrap(), l);
        assert_eq!(v["edges"][1]["length"], json!("3/2"));
        assert_eq!(v["edges"][0]["length"].to_string(), "2");
    }

    #[test]
    fn schema_errors_name_the_field() {
        let e = parse_graph(r#"{"vertices":[{"id":"u","weight":-1}],"edges":[]}"#).unwrap_err();
        assert!(e.to_string().contains("vertices[0].weight"));
        let e = parse_graph(r#"{"vertices":[{"id":"u"}],"edges":[{"id":"a","ends":["u"]}]}"#).unwrap_err();
        assert!(e.to_string().contains("edges[0].ends"));
        let e = parse_graph(
            r#"{"vertices":[{"id":"u"}],"edges":[{"id":"a","ends":["u","u"],"length":1},{"id":"b","ends":["u","u"]}]}"#,
        )
        .unwrap_err();
        assert!(e.to_string().contains("edges[1].length"));
        let e = parse_graph("{\"vertices\": [").unwrap_err();
        assert!(matches!(e, Error::Json(ref m) if m.contains("line 1")));
    }

    #[test]
    fn dot_labels() {
        let dot = graph_to_dot(&theta((1, 0)), Some(&[Length::integer(1), Length::ratio(1, 2), Length::Infinite]));
        assert!(dot.contains("\"u\" [label=\"u:1\"];"));
        assert!(dot.contains("\"u\" -- \"v\" [label=\"b:1/2\"];"));
        assert!(dot.contains("[label=\"c:inf\"]"));
    }
}
