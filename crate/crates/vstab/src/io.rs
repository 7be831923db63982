//! JSON file formats for graphs, degeneracy subsets, stabilities and upper sets.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::curve::CurveModel;
use crate::degeneracy::DegeneracySubset;
use crate::error::{Error, Result};
use crate::graph::{set_from_slice, set_to_vec, Graph, VertexSet};
use crate::orbit::{OrbitElement, UpperSet};
use crate::vstability::VStability;
use crate::Int;

/// Which side of the graph/curve dictionary a stability file is written on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Graph,
    Curve,
}

/// How to fill in complements missing from a stability file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InferComplements {
    Degenerate,
    Nondegenerate,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    vertices: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    genera: Option<Vec<u32>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DegeneracyFile {
    subsets: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StabilityEntry {
    subset: Vec<usize>,
    value: Int,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StabilityFile {
    degree: Int,
    values: Vec<StabilityEntry>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn subset(g: &Graph, vs: &[usize]) -> Result<VertexSet> {
    if let Some(&v) = vs.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(Error::Parse(format!("vertex {v} out of range")));
    }
    Ok(set_from_slice(vs))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let file: GraphFile = serde_json::from_str(text).map_err(parse_err)?;
    let g = Graph::new(file.vertices, file.edges.iter().map(|&[u, v]| (u, v)).collect())?;
    match file.genera {
        Some(genera) => g.with_genera(genera),
        None => Ok(g),
    }
}

pub fn graph_to_json(g: &Graph) -> String {
    let file = GraphFile {
        vertices: g.vertex_count(),
        edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
        genera: g.genera().iter().any(|&x| x != 0).then(|| g.genera().to_vec()),
    };
    serde_json::to_string(&file).expect("graph serializes")
}

/// Reads `{"subsets": [...]}`, adding omitted complements before validating.
pub fn parse_degeneracy(g: &Graph, text: &str) -> Result<DegeneracySubset> {
    let file: DegeneracyFile = serde_json::from_str(text).map_err(parse_err)?;
    let mut sets = BTreeSet::new();
    for s in &file.subsets {
        let w = subset(g, s)?;
        sets.insert(w);
        sets.insert(g.complement(w));
    }
    DegeneracySubset::validate(g, sets)
}

/// Reads a stability file. On the curve side the `degree` field is the
/// characteristic and the values are the curve-side `s_W`.
pub fn parse_stability(
    g: &Graph,
    text: &str,
    side: Side,
    infer: Option<InferComplements>,
) -> Result<VStability> {
    let file: StabilityFile = serde_json::from_str(text).map_err(parse_err)?;
    let mut values = BTreeMap::new();
    for e in &file.values {
        let w = subset(g, &e.subset)?;
        if values.insert(w, e.value).is_some() {
            return Err(Error::Parse(format!("subset {:?} listed twice", e.subset)));
        }
    }
    let (degree, values) = match side {
        Side::Graph => (file.degree, values),
        Side::Curve => {
            let c = CurveModel::new(g.clone())?;
            let values = values
                .into_iter()
                .map(|(w, s)| (w, s + c.subcurve_genus(w) - 1))
                .collect();
            (c.degree_for(file.degree), values)
        }
    };
    match infer {
        None => VStability::validate(g, degree, values),
        Some(mode) => {
            VStability::validate_inferring(g, degree, values, mode == InferComplements::Degenerate)
        }
    }
}

pub fn stability_to_json(n: &VStability) -> String {
    let file = StabilityFile {
        degree: n.degree(),
        values: n
            .values()
            .iter()
            .map(|(&w, &value)| StabilityEntry {
                subset: set_to_vec(w),
                value,
            })
            .collect(),
    };
    serde_json::to_string(&file).expect("stability serializes")
}

/// JSON array of orbit elements in text form.
pub fn upper_set_to_json(p: &UpperSet) -> serde_json::Value {
    serde_json::Value::from(p.to_strings())
}

pub fn parse_upper_set(g: &Graph, degree: Int, text: &str) -> Result<UpperSet> {
    let items: Vec<String> = serde_json::from_str(text).map_err(parse_err)?;
    let elements = items
        .iter()
        .map(|s| s.parse::<OrbitElement>())
        .collect::<Result<BTreeSet<_>>>()?;
    UpperSet::new(g.clone(), degree, elements)
}
