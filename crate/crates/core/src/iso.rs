//! Weight-preserving multigraph isomorphism and canonical codes.
//!
//! Two independent routes: [`find_isomorphism`] is a direct backtracking
//! search over signature-compatible vertex images, while [`canonical_code`]
//! runs individualization/refinement to a lexicographically minimal
//! adjacency encoding.

use std::collections::BTreeMap;

use crate::graph::WeightedGraph;
use crate::length::Length;

/// Positional bijections `g1 → g2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

impl Isomorphism {
    pub fn identity(g: &WeightedGraph) -> Self {
        Isomorphism {
            vertex_map: (0..g.vertex_count()).collect(),
            edge_map: (0..g.edge_count()).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        Isomorphism {
            vertex_map: invert(&self.vertex_map),
            edge_map: invert(&self.edge_map),
        }
    }

    /// `(id in g1, id in g2)` pairs for vertices and edges.
    #[allow(clippy::type_complexity)]
    pub fn id_pairs(
        &self,
        g1: &WeightedGraph,
        g2: &WeightedGraph,
    ) -> (Vec<(String, String)>, Vec<(String, String)>) {
        let vs = self
            .vertex_map
            .iter()
            .enumerate()
            .map(|(a, &b)| (g1.vertices()[a].id.clone(), g2.vertices()[b].id.clone()))
            .collect();
        let es = self
            .edge_map
            .iter()
            .enumerate()
            .map(|(a, &b)| (g1.edges()[a].id.clone(), g2.edges()[b].id.clone()))
            .collect();
        (vs, es)
    }

    /// Checks incidence, weights and (if given) edge labels.
    pub fn verify<L: PartialEq>(
        &self,
        g1: &WeightedGraph,
        g2: &WeightedGraph,
        labels: Option<(&[L], &[L])>,
    ) -> bool {
        if self.vertex_map.len() != g1.vertex_count()
            || self.edge_map.len() != g1.edge_count()
            || g1.vertex_count() != g2.vertex_count()
            || g1.edge_count() != g2.edge_count()
            || !is_permutation(&self.vertex_map)
            || !is_permutation(&self.edge_map)
        {
            return false;
        }
        let weights_ok = g1
            .vertices()
            .iter()
            .enumerate()
            .all(|(v, x)| x.weight == g2.vertices()[self.vertex_map[v]].weight);
        let edges_ok = g1.edges().iter().enumerate().all(|(i, e)| {
            let f = &g2.edges()[self.edge_map[i]];
            let (a, b) = (self.vertex_map[e.ends.0], self.vertex_map[e.ends.1]);
            (f.ends == (a, b) || f.ends == (b, a))
                && labels.is_none_or(|(l1, l2)| l1[i] == l2[self.edge_map[i]])
        });
        weights_ok && edges_ok
    }
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&j| j < p.len() && !std::mem::replace(&mut seen[j], true))
}

/// A weight- and incidence-preserving bijection pair, if one exists.
pub fn find_isomorphism(g1: &WeightedGraph, g2: &WeightedGraph) -> Option<Isomorphism> {
    let l1 = vec![(); g1.edge_count()];
    let l2 = vec![(); g2.edge_count()];
    find_labeled_isomorphism(g1, &l1, g2, &l2)
}

/// Isomorphism that additionally maps each edge to an edge with an equal label.
pub fn find_labeled_isomorphism<L: Ord + Clone>(
    g1: &WeightedGraph,
    l1: &[L],
    g2: &WeightedGraph,
    l2: &[L],
) -> Option<Isomorphism> {
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let s1 = LabeledView::new(g1, l1);
    let s2 = LabeledView::new(g2, l2);
    let mut a: Vec<_> = s1.signature.clone();
    let mut b: Vec<_> = s2.signature.clone();
    a.sort();
    b.sort();
    if a != b {
        return None;
    }
    let order = search_order(g1);
    let n = g1.vertex_count();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if !extend(&s1, &s2, &order, 0, &mut map, &mut used) {
        return None;
    }
    // Match edges inside each mapped vertex pair by sorted label.
    let mut groups1: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, e) in g1.edges().iter().enumerate() {
        let (x, y) = (map[e.ends.0], map[e.ends.1]);
        groups1.entry((x.min(y), x.max(y))).or_default().push(i);
    }
    let mut groups2: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, e) in g2.edges().iter().enumerate() {
        let (x, y) = e.ends;
        groups2.entry((x.min(y), x.max(y))).or_default().push(i);
    }
    let mut edge_map = vec![usize::MAX; g1.edge_count()];
    for (key, mut e1) in groups1 {
        let mut e2 = groups2.remove(&key)?;
        e1.sort_by(|&x, &y| l1[x].cmp(&l1[y]).then(x.cmp(&y)));
        e2.sort_by(|&x, &y| l2[x].cmp(&l2[y]).then(x.cmp(&y)));
        if e1.len() != e2.len() {
            return None;
        }
        for (x, y) in e1.into_iter().zip(e2) {
            if l1[x] != l2[y] {
                return None;
            }
            edge_map[x] = y;
        }
    }
    let iso = Isomorphism { vertex_map: map, edge_map };
    debug_assert!(iso.verify(g1, g2, Some((l1, l2))));
    Some(iso)
}

type Signature<L> = (u32, usize, Vec<L>, Vec<L>);

struct LabeledView<L> {
    /// (weight, valency, sorted loop labels, sorted non-loop incident labels)
    signature: Vec<Signature<L>>,
    /// sorted labels of edges between each unordered pair of distinct vertices
    between: BTreeMap<(usize, usize), Vec<L>>,
}

impl<L: Ord + Clone> LabeledView<L> {
    fn new(g: &WeightedGraph, labels: &[L]) -> Self {
        let val = g.valencies();
        let mut signature: Vec<Signature<L>> = g
            .vertices()
            .iter()
            .zip(&val)
            .map(|(v, &d)| (v.weight, d, Vec::new(), Vec::new()))
            .collect();
        let mut between: BTreeMap<(usize, usize), Vec<L>> = BTreeMap::new();
        for (i, e) in g.edges().iter().enumerate() {
            let (a, b) = e.ends;
            if a == b {
                signature[a].2.push(labels[i].clone());
            } else {
                signature[a].3.push(labels[i].clone());
                signature[b].3.push(labels[i].clone());
                between.entry((a.min(b), a.max(b))).or_default().push(labels[i].clone());
            }
        }
        for s in &mut signature {
            s.2.sort();
            s.3.sort();
        }
        for l in between.values_mut() {
            l.sort();
        }
        LabeledView { signature, between }
    }

    fn pair(&self, a: usize, b: usize) -> &[L] {
        self.between
            .get(&(a.min(b), a.max(b)))
            .map_or(&[], |v| v.as_slice())
    }
}

/// BFS order so each vertex after the first in a component has a placed neighbour.
fn search_order(g: &WeightedGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.ends.0].push(e.ends.1);
        adj[e.ends.1].push(e.ends.0);
    }
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

fn extend<L: Ord + Clone>(
    s1: &LabeledView<L>,
    s2: &LabeledView<L>,
    order: &[usize],
    k: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if k == order.len() {
        return true;
    }
    let v = order[k];
    for c in 0..used.len() {
        if used[c] || s1.signature[v] != s2.signature[c] {
            continue;
        }
        let consistent = order[..k]
            .iter()
            .all(|&u| s1.pair(v, u) == s2.pair(c, map[u]));
        if !consistent {
            continue;
        }
        map[v] = c;
        used[c] = true;
        if extend(s1, s2, order, k + 1, map, used) {
            return true;
        }
        used[c] = false;
        map[v] = usize::MAX;
    }
    false
}

/// Metric variant: lengths must match exactly under the edge bijection.
pub fn find_metric_isomorphism(
    g1: &WeightedGraph,
    l1: &[Length],
    g2: &WeightedGraph,
    l2: &[Length],
) -> Option<Isomorphism> {
    find_labeled_isomorphism(g1, l1, g2, l2)
}

/// Canonical form of a weighted multigraph.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    /// byte encoding; equal iff the graphs are isomorphic
    pub code: Vec<u8>,
    /// canonical position → vertex position in the input
    pub order: Vec<usize>,
}

pub fn canonical_code(g: &WeightedGraph) -> Vec<u8> {
    canonical_form(g).code
}

pub fn canonical_form(g: &WeightedGraph) -> CanonicalForm {
    let n = g.vertex_count();
    let mut mult = vec![vec![0u32; n]; n];
    let mut loops = vec![0u32; n];
    for e in g.edges() {
        let (a, b) = e.ends;
        if a == b {
            loops[a] += 1;
        } else {
            mult[a][b] += 1;
            mult[b][a] += 1;
        }
    }
    let weights: Vec<u32> = g.weights();
    let val = g.valencies();
    let mut keys: Vec<(u32, u32, usize, usize)> =
        (0..n).map(|v| (weights[v], loops[v], val[v], v)).collect();
    keys.sort();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for w in keys.chunk_by(|x, y| (x.0, x.1, x.2) == (y.0, y.1, y.2)) {
        cells.push(w.iter().map(|k| k.3).collect());
    }
    let ctx = Canon { mult, loops, weights };
    let cells = ctx.refine(cells);
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    ctx.search(cells, &mut best);
    let (words, order) = best.unwrap_or_default();
    let mut code = Vec::with_capacity(words.len() * 4 + 4);
    code.extend_from_slice(&(n as u32).to_be_bytes());
    for w in words {
        code.extend_from_slice(&w.to_be_bytes());
    }
    CanonicalForm { code, order }
}

struct Canon {
    mult: Vec<Vec<u32>>,
    loops: Vec<u32>,
    weights: Vec<u32>,
}

impl Canon {
    /// Equitable refinement of an ordered partition; cell order is derived
    /// from invariant signatures only.
    fn refine(&self, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        let n = self.weights.len();
        loop {
            let mut color = vec![0usize; n];
            for (c, cell) in cells.iter().enumerate() {
                for &v in cell {
                    color[v] = c;
                }
            }
            let mut next = Vec::with_capacity(cells.len());
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut sigs: Vec<(Vec<(usize, u32)>, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let mut s: Vec<(usize, u32)> = (0..n)
                            .filter(|&w| w != v && self.mult[v][w] > 0)
                            .map(|w| (color[w], self.mult[v][w]))
                            .collect();
                        s.sort();
                        (s, v)
                    })
                    .collect();
                sigs.sort();
                for group in sigs.chunk_by(|a, b| a.0 == b.0) {
                    next.push(group.iter().map(|x| x.1).collect());
                }
            }
            if next.len() == cells.len() {
                return next;
            }
            cells = next;
        }
    }

    fn encode(&self, order: &[usize]) -> Vec<u32> {
        let mut out = Vec::with_capacity(order.len() * (order.len() + 3) / 2);
        for &v in order {
            out.push(self.weights[v]);
            out.push(self.loops[v]);
        }
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                out.push(self.mult[order[i]][order[j]]);
            }
        }
        out
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        (0..self.weights.len())
            .filter(|&w| w != u && w != v)
            .all(|w| self.mult[u][w] == self.mult[v][w])
    }

    fn search(&self, cells: Vec<Vec<usize>>, best: &mut Option<(Vec<u32>, Vec<usize>)>) {
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
            let code = self.encode(&order);
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                *best = Some((code, order));
            }
            return;
        };
        let cell = &cells[target];
        let mut tried: Vec<usize> = Vec::new();
        for &v in cell {
            // Swapping twins is an automorphism; their branches give equal codes.
            if tried.iter().any(|&u| self.twins(u, v)) {
                continue;
            }
            tried.push(v);
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend_from_slice(&cells[..target]);
            next.push(vec![v]);
            next.push(cell.iter().copied().filter(|&w| w != v).collect());
            next.extend_from_slice(&cells[target + 1..]);
            self.search(self.refine(next), best);
        }
    }
}

/// Rebuilds `g` in canonical vertex order with ids `v0..` and `e0..`;
/// isomorphic inputs give identical outputs.
pub fn canonical_graph(g: &WeightedGraph) -> WeightedGraph {
    let form = canonical_form(g);
    let n = g.vertex_count();
    let mut pos = vec![0; n];
    for (i, &v) in form.order.iter().enumerate() {
        pos[v] = i;
    }
    let weights: Vec<u32> = form.order.iter().map(|&v| g.vertices()[v].weight).collect();
    let mut ends: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (pos[e.ends.0], pos[e.ends.1]);
            (a.min(b), a.max(b))
        })
        .collect();
    ends.sort();
    WeightedGraph::from_indexed(&weights, &ends)
}
