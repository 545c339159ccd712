//! The support poset `SP_G`: edge sets whose removal leaves no bridge,
//! ordered by reverse inclusion.

use rayon::prelude::*;

use crate::cycles::{mask_to_edges, EdgeMask};
use crate::error::{Error, Result};
use crate::graph::{bridges_among, WeightedGraph};
use crate::torelli::c1_sets;

const MAX_EDGES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportPoset {
    /// Members as bitmasks over edge positions, sorted by size then value.
    pub elements: Vec<EdgeMask>,
}

impl SupportPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, s: EdgeMask) -> bool {
        self.elements.binary_search_by_key(&key(s), |&m| key(m)).is_ok()
    }

    /// `S ≥ S′` iff `S ⊆ S′`.
    pub fn geq(s: EdgeMask, t: EdgeMask) -> bool {
        s & !t == 0
    }

    /// Hasse diagram as index pairs `(upper, lower)`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.elements.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let (s, t) = (self.elements[i], self.elements[j]);
                if i == j || !Self::geq(s, t) {
                    continue;
                }
                let between = self.elements.iter().any(|&u| {
                    u != s && u != t && Self::geq(s, u) && Self::geq(u, t)
                });
                if !between {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn element_ids(&self, g: &WeightedGraph) -> Vec<Vec<String>> {
        self.elements.iter().map(|&m| mask_ids(g, m)).collect()
    }
}

fn key(m: EdgeMask) -> (u32, EdgeMask) {
    (m.count_ones(), m)
}

pub(crate) fn mask_ids(g: &WeightedGraph, m: EdgeMask) -> Vec<String> {
    mask_to_edges(m).into_iter().map(|i| g.edges()[i].id.clone()).collect()
}

fn require_bridgeless(g: &WeightedGraph) -> Result<()> {
    g.require_connected()?;
    if !g.bridge_indices().is_empty() {
        return Err(Error::HasBridges);
    }
    Ok(())
}

/// Whether `G − S` has no bridge in any component.
pub fn is_support(g: &WeightedGraph, s: EdgeMask) -> bool {
    bridges_among(g.vertex_count(), g.edges(), |i| s >> i & 1 == 0).is_empty()
}

/// # Panics
/// Above 24 edges.
pub fn support_poset(g: &WeightedGraph) -> Result<SupportPoset> {
    require_bridgeless(g)?;
    assert!(g.edge_count() <= MAX_EDGES, "support poset limited to 24 edges");
    let mut elements: Vec<EdgeMask> = (0..1u64 << g.edge_count())
        .into_par_iter()
        .filter(|&s| is_support(g, s))
        .collect();
    elements.sort_by_key(|&m| key(m));
    Ok(SupportPoset { elements })
}

/// The C1-sets, each checked to lie in `SP_G`; edge ids per set.
pub fn codimension_one_elements(g: &WeightedGraph) -> Result<Vec<Vec<String>>> {
    require_bridgeless(g)?;
    let partition = c1_sets(g)?;
    for block in &partition.blocks {
        let m: EdgeMask = block.iter().fold(0, |m, &e| m | 1 << e);
        if !is_support(g, m) {
            return Err(Error::Internal("C1-set outside the support poset".into()));
        }
    }
    Ok(partition.block_ids(g))
}
