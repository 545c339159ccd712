//! Weighted multigraphs: genus, stability, weighted contraction,
//! stabilization and bridges.
//!
//! Vertices and edges are kept in declaration order; every tie-break in
//! the crate ("smallest id", "vertex-id order") refers to that order.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::length::Length;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: String,
    pub weight: u32,
}

/// An edge between two vertex positions. `ends.0 == ends.1` is a loop.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub ends: (usize, usize),
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }

    pub fn other_end(&self, v: usize) -> usize {
        if self.ends.0 == v {
            self.ends.1
        } else {
            self.ends.0
        }
    }
}

/// A finite multigraph with nonnegative integer vertex weights. Loops and
/// parallel edges are allowed; connectivity is not enforced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

/// Bookkeeping for one weighted contraction `(G,w) → (G',w')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeContractionRecord {
    pub contracted: String,
    /// old vertex id → new vertex id (surjective)
    pub vertex_map: BTreeMap<String, String>,
    /// surviving old edge id → new edge id (ids are kept, so this is the identity)
    pub edge_map: BTreeMap<String, String>,
}

impl WeightedGraph {
    /// Builds a graph from `(id, weight)` vertices and `(id, end, end)` edges,
    /// where ends are vertex ids.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = (String, u32)>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let mut vs = Vec::new();
        let mut index = HashMap::new();
        for (id, weight) in vertices {
            if index.insert(id.clone(), vs.len()).is_some() {
                return Err(Error::DuplicateVertex(id));
            }
            vs.push(Vertex { id, weight });
        }
        let mut es = Vec::new();
        let mut seen = HashSet::new();
        for (id, a, b) in edges {
            if !seen.insert(id.clone()) {
                return Err(Error::DuplicateEdge(id));
            }
            let a = *index.get(&a).ok_or(Error::UnknownVertex(a))?;
            let b = *index.get(&b).ok_or(Error::UnknownVertex(b))?;
            es.push(Edge { id, ends: (a, b) });
        }
        Ok(WeightedGraph { vertices: vs, edges: es })
    }

    /// Convenience constructor for literals: `&[("u", 0)]`, `&[("e", "u", "v")]`.
    pub fn build(vertices: &[(&str, u32)], edges: &[(&str, &str, &str)]) -> Result<Self> {
        Self::new(
            vertices.iter().map(|(id, w)| (id.to_string(), *w)),
            edges
                .iter()
                .map(|(id, a, b)| (id.to_string(), a.to_string(), b.to_string())),
        )
    }

    /// Builds from positional data; vertex ids `v0..`, edge ids `e0..`.
    pub fn from_indexed(weights: &[u32], edges: &[(usize, usize)]) -> Self {
        let vertices = weights
            .iter()
            .enumerate()
            .map(|(i, &weight)| Vertex { id: format!("v{i}"), weight })
            .collect();
        let edges = edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                assert!(a < weights.len() && b < weights.len(), "edge end out of range");
                Edge { id: format!("e{i}"), ends: (a, b) }
            })
            .collect();
        WeightedGraph { vertices, edges }
    }

    pub(crate) fn from_parts(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Self {
        debug_assert!(edges
            .iter()
            .all(|e| e.ends.0 < vertices.len() && e.ends.1 < vertices.len()));
        WeightedGraph { vertices, edges }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    pub fn weights(&self) -> Vec<u32> {
        self.vertices.iter().map(|v| v.weight).collect()
    }

    pub fn total_weight(&self) -> u64 {
        self.vertices.iter().map(|v| v.weight as u64).sum()
    }

    pub fn with_weights(&self, weights: &[u32]) -> Self {
        assert_eq!(weights.len(), self.vertices.len());
        let mut g = self.clone();
        for (v, &w) in g.vertices.iter_mut().zip(weights) {
            v.weight = w;
        }
        g
    }

    /// Valency by position; loops contribute 2.
    pub fn valency_at(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.ends.0 == v) as usize + (e.ends.1 == v) as usize)
            .sum()
    }

    pub fn valency(&self, id: &str) -> Result<usize> {
        Ok(self.valency_at(self.vertex_index(id)?))
    }

    pub fn valencies(&self) -> Vec<usize> {
        let mut val = vec![0; self.vertices.len()];
        for e in &self.edges {
            val[e.ends.0] += 1;
            val[e.ends.1] += 1;
        }
        val
    }

    pub fn loops_at(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.is_loop() && e.ends.0 == v).count()
    }

    /// Number of edges joining two distinct vertices.
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| (e.ends == (u, v) || e.ends == (v, u)) && u != v)
            .count()
    }

    /// Component label per vertex, labels assigned in vertex order.
    pub fn components(&self) -> Vec<usize> {
        components_of(self.vertices.len(), self.edges.iter().map(|e| e.ends))
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    /// A graph with no vertices is not connected.
    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// `|E| - |V| + c`.
    pub fn first_betti(&self) -> u64 {
        (self.edges.len() + self.component_count()) as u64 - self.vertices.len() as u64
    }

    pub fn genus(&self) -> Result<u64> {
        self.require_connected()?;
        Ok(self.first_betti() + self.total_weight())
    }

    pub fn is_stable(&self) -> Result<bool> {
        let genus = self.genus()?;
        Ok(genus >= 2 && self.weight_zero_valencies_at_least_three())
    }

    fn weight_zero_valencies_at_least_three(&self) -> bool {
        let val = self.valencies();
        self.vertices
            .iter()
            .zip(val)
            .all(|(v, d)| v.weight > 0 || d >= 3)
    }

    pub(crate) fn require_stable(&self) -> Result<()> {
        if self.is_stable()? {
            Ok(())
        } else {
            Err(Error::Unstable)
        }
    }

    pub fn is_pure(&self) -> bool {
        self.vertices.iter().all(|v| v.weight == 0)
    }

    pub fn contract_edge(&self, id: &str) -> Result<(WeightedGraph, EdgeContractionRecord)> {
        let idx = self.edge_index(id)?;
        let (g, vertex_map) = self.contract_at(idx);
        let record = EdgeContractionRecord {
            contracted: id.to_string(),
            vertex_map: vertex_map
                .iter()
                .enumerate()
                .map(|(old, &new)| (self.vertices[old].id.clone(), g.vertices[new].id.clone()))
                .collect(),
            edge_map: g.edges.iter().map(|e| (e.id.clone(), e.id.clone())).collect(),
        };
        Ok((g, record))
    }

    /// Weighted contraction of the edge at position `idx`. Returns the new
    /// graph and the old→new vertex position map. A merged vertex keeps the
    /// id and position of the earlier endpoint.
    pub(crate) fn contract_at(&self, idx: usize) -> (WeightedGraph, Vec<usize>) {
        let (a, b) = self.edges[idx].ends;
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        edges.remove(idx);
        if a == b {
            vertices[a].weight += 1;
            let map = (0..vertices.len()).collect();
            return (WeightedGraph { vertices, edges }, map);
        }
        let (keep, gone) = (a.min(b), a.max(b));
        vertices[keep].weight += vertices[gone].weight;
        vertices.remove(gone);
        let map: Vec<usize> = (0..self.vertices.len())
            .map(|v| match v.cmp(&gone) {
                std::cmp::Ordering::Less => v,
                std::cmp::Ordering::Equal => keep,
                std::cmp::Ordering::Greater => v - 1,
            })
            .collect();
        for e in &mut edges {
            e.ends = (map[e.ends.0], map[e.ends.1]);
        }
        (WeightedGraph { vertices, edges }, map)
    }

    /// Contracts every listed edge (order is irrelevant up to vertex naming).
    pub fn contract_edge_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<WeightedGraph> {
        for id in ids {
            self.edge_index(id.as_ref())?;
        }
        let mut g = self.clone();
        for id in ids {
            let idx = g.edge_index(id.as_ref())?;
            g = g.contract_at(idx).0;
        }
        Ok(g)
    }

    /// Edges whose removal disconnects their component. Loops never qualify.
    pub fn bridges(&self) -> Vec<String> {
        self.bridge_indices()
            .into_iter()
            .map(|i| self.edges[i].id.clone())
            .collect()
    }

    pub fn bridge_indices(&self) -> Vec<usize> {
        bridges_among(self.vertices.len(), &self.edges, |_| true)
    }

    /// The graph with the given edge positions deleted (vertices kept).
    pub fn without_edges(&self, removed: &[usize]) -> WeightedGraph {
        let drop: HashSet<usize> = removed.iter().copied().collect();
        WeightedGraph {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .filter(|(i, _)| !drop.contains(i))
                .map(|(_, e)| e.clone())
                .collect(),
        }
    }

    pub fn stabilize(&self) -> Result<WeightedGraph> {
        Ok(stabilize_by(self, None, first_reduction)?.0)
    }
}

/// Component labels for an edge list over `n` vertices.
pub(crate) fn components_of(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut label = HashMap::new();
    (0..n)
        .map(|v| {
            let r = find(&mut parent, v);
            let next = label.len();
            *label.entry(r).or_insert(next)
        })
        .collect()
}

/// Bridge positions among the edges accepted by `keep`, via low-link DFS.
pub(crate) fn bridges_among(n: usize, edges: &[Edge], keep: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        if keep(i) && !e.is_loop() {
            adj[e.ends.0].push((e.ends.1, i));
            adj[e.ends.1].push((e.ends.0, i));
        }
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut out = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // (vertex, parent edge, next adjacency position)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        while let Some(&(v, pe, pos)) = stack.last() {
            if pos < adj[v].len() {
                let (w, ei) = adj[v][pos];
                stack.last_mut().unwrap().2 += 1;
                if ei == pe {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, ei, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] > disc[u] {
                        out.push(pe);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// One step of stabilization at a vertex position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    /// remove a weight-0 valency-1 vertex with its edge
    Prune(usize),
    /// replace a weight-0 valency-2 vertex and its two edges by one edge
    Smooth(usize),
}

/// All reductions currently applicable, prunes first, in vertex order.
pub fn admissible_reductions(g: &WeightedGraph) -> Vec<Reduction> {
    let val = g.valencies();
    let zero = |v: usize| g.vertices[v].weight == 0;
    let prunes = (0..g.vertex_count()).filter(|&v| zero(v) && val[v] == 1).map(Reduction::Prune);
    let smooths = (0..g.vertex_count()).filter(|&v| zero(v) && val[v] == 2).map(Reduction::Smooth);
    prunes.chain(smooths).collect()
}

fn first_reduction(_: &[Reduction]) -> usize {
    0
}

/// Stabilization with a caller-chosen reduction order. `choose` receives
/// the admissible reductions and returns the index of the one to apply.
/// Optional per-edge lengths are carried along: a smoothing merges two
/// lengths into their sum, a prune drops the pendant edge's length.
pub fn stabilize_by<F>(
    g: &WeightedGraph,
    lengths: Option<Vec<Length>>,
    mut choose: F,
) -> Result<(WeightedGraph, Option<Vec<Length>>)>
where
    F: FnMut(&[Reduction]) -> usize,
{
    let genus = g.genus()?;
    if genus < 2 {
        return Err(Error::GenusTooSmall(genus));
    }
    let mut g = g.clone();
    let mut lengths = lengths;
    loop {
        let options = admissible_reductions(&g);
        if options.is_empty() {
            break;
        }
        let pick = choose(&options);
        let step = *options
            .get(pick)
            .ok_or_else(|| Error::Internal("reduction choice out of range".into()))?;
        match step {
            Reduction::Prune(v) => {
                let e = g
                    .edges
                    .iter()
                    .position(|e| e.ends.0 == v || e.ends.1 == v)
                    .ok_or_else(|| Error::Internal("pendant vertex without edge".into()))?;
                g.edges.remove(e);
                if let Some(l) = lengths.as_mut() {
                    l.remove(e);
                }
                remove_vertex(&mut g, v);
            }
            Reduction::Smooth(v) => {
                let incident: Vec<usize> = (0..g.edges.len())
                    .filter(|&i| g.edges[i].ends.0 == v || g.edges[i].ends.1 == v)
                    .collect();
                if incident.len() != 2 || g.edges[incident[0]].is_loop() {
                    return Err(Error::Internal(
                        "smoothing a vertex carrying a loop in a genus >= 2 graph".into(),
                    ));
                }
                let (a, b) = (incident[0], incident[1]);
                let x = g.edges[a].other_end(v);
                let y = g.edges[b].other_end(v);
                g.edges[a].ends = (x, y);
                g.edges.remove(b);
                if let Some(l) = lengths.as_mut() {
                    let lb = l.remove(b);
                    l[a] = &l[a] + &lb;
                }
                remove_vertex(&mut g, v);
            }
        }
    }
    Ok((g, lengths))
}

fn remove_vertex(g: &mut WeightedGraph, v: usize) {
    g.vertices.remove(v);
    for e in &mut g.edges {
        debug_assert!(e.ends.0 != v && e.ends.1 != v);
        if e.ends.0 > v {
            e.ends.0 -= 1;
        }
        if e.ends.1 > v {
            e.ends.1 -= 1;
        }
    }
}
