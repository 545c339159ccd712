//! Circuits (simple cycles as edge sets) by walking the GF(2) cycle space.

use crate::graph::{components_of, WeightedGraph};

/// Edge-set bitmask; graphs handled here have at most 64 edges.
pub type EdgeMask = u64;

const MAX_EDGES: usize = 64;
const MAX_BETTI: u64 = 24;

/// Every circuit of `g` as a bitmask over edge positions, ascending.
///
/// # Panics
/// If `g` has more than 64 edges or first Betti number above 24.
pub fn circuit_masks(g: &WeightedGraph) -> Vec<EdgeMask> {
    assert!(g.edge_count() <= MAX_EDGES, "circuit enumeration limited to 64 edges");
    assert!(g.first_betti() <= MAX_BETTI, "circuit enumeration limited to b1 <= 24");
    let basis = fundamental_masks(g);
    let mut out = Vec::new();
    let mut current: EdgeMask = 0;
    // Gray code walk over all nonzero combinations of the basis.
    for i in 1u64..(1u64 << basis.len()) {
        current ^= basis[i.trailing_zeros() as usize];
        if is_circuit(g, current) {
            out.push(current);
        }
    }
    out.sort_unstable();
    out
}

/// Every circuit as ascending edge positions.
pub fn circuits(g: &WeightedGraph) -> Vec<Vec<usize>> {
    circuit_masks(g).into_iter().map(mask_to_edges).collect()
}

pub fn mask_to_edges(mut m: EdgeMask) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// GF(2) fundamental cycles of a BFS spanning forest.
fn fundamental_masks(g: &WeightedGraph) -> Vec<EdgeMask> {
    let n = g.vertex_count();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        if !e.is_loop() {
            adj[e.ends.0].push((e.ends.1, i));
            adj[e.ends.1].push((e.ends.0, i));
        }
    }
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut tree = vec![false; g.edge_count()];
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &adj[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = Some((v, e));
                    tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let mut out = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        if tree[i] {
            continue;
        }
        let mut m: EdgeMask = 1 << i;
        let (mut x, mut y) = e.ends;
        while x != y {
            if depth[x] >= depth[y] {
                let (p, f) = parent[x].expect("non-root has a parent");
                m ^= 1 << f;
                x = p;
            } else {
                let (p, f) = parent[y].expect("non-root has a parent");
                m ^= 1 << f;
                y = p;
            }
        }
        out.push(m);
    }
    out
}

/// Nonempty, connected, and every touched vertex has degree 2.
pub fn is_circuit(g: &WeightedGraph, mask: EdgeMask) -> bool {
    if mask == 0 {
        return false;
    }
    let mut deg = vec![0u32; g.vertex_count()];
    for i in mask_to_edges(mask) {
        let (a, b) = g.edges()[i].ends;
        deg[a] += 1;
        deg[b] += 1;
    }
    if deg.iter().any(|&d| d != 0 && d != 2) {
        return false;
    }
    let touched: Vec<usize> = (0..g.vertex_count()).filter(|&v| deg[v] > 0).collect();
    let labels = components_of(
        g.vertex_count(),
        mask_to_edges(mask).into_iter().map(|i| g.edges()[i].ends),
    );
    touched.iter().all(|&v| labels[v] == labels[touched[0]])
}
