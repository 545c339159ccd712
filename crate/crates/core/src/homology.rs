//! Chains on a graph: orientations, boundary and coboundary maps, cycle
//! bases, period matrices, tropical Jacobians and the component group.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::divisors::{principal_divisor, FiniteAbelianGroup, GraphFunction};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::length::Length;
use crate::linalg::{det_rational, smith_diagonal, to_big, ColumnLattice, IntMatrix};
use crate::metric::{MetricGraph, TropicalCurve};

/// Source and target vertex positions for each edge position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
}

impl Orientation {
    /// Each edge points from its earlier endpoint to its later one.
    pub fn canonical(g: &WeightedGraph) -> Self {
        let (source, target) = g
            .edges()
            .iter()
            .map(|e| (e.ends.0.min(e.ends.1), e.ends.0.max(e.ends.1)))
            .unzip();
        Orientation { source, target }
    }

    /// From `edge id → (source id, target id)`; every edge must be listed.
    pub fn from_ids(g: &WeightedGraph, map: &BTreeMap<String, (String, String)>) -> Result<Self> {
        let mut source = Vec::with_capacity(g.edge_count());
        let mut target = Vec::with_capacity(g.edge_count());
        for e in g.edges() {
            let (s, t) = map
                .get(&e.id)
                .ok_or_else(|| Error::InvalidOrientation(format!("edge `{}` not oriented", e.id)))?;
            source.push(g.vertex_index(s)?);
            target.push(g.vertex_index(t)?);
        }
        let o = Orientation { source, target };
        o.validate(g)?;
        Ok(o)
    }

    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        if self.source.len() != g.edge_count() || self.target.len() != g.edge_count() {
            return Err(Error::InvalidOrientation("wrong number of edges".into()));
        }
        for (i, e) in g.edges().iter().enumerate() {
            let (s, t) = (self.source[i], self.target[i]);
            if !((s, t) == e.ends || (t, s) == e.ends) {
                return Err(Error::InvalidOrientation(format!(
                    "edge `{}` oriented between non-endpoints",
                    e.id
                )));
            }
        }
        Ok(())
    }

    /// Orientation with the given edges reversed.
    pub fn flipped(&self, edges: &[usize]) -> Self {
        let mut o = self.clone();
        for &e in edges {
            std::mem::swap(&mut o.source[e], &mut o.target[e]);
        }
        o
    }
}

/// `V × E`: column `e` is `t(e) − s(e)`.
pub fn boundary_matrix(g: &WeightedGraph, o: &Orientation) -> Result<IntMatrix> {
    o.validate(g)?;
    let mut m = vec![vec![0i64; g.edge_count()]; g.vertex_count()];
    for e in 0..g.edge_count() {
        m[o.target[e]][e] += 1;
        m[o.source[e]][e] -= 1;
    }
    Ok(m)
}

/// `E × V`: entry `(e, v)` is `1` if `v = t(e)`, `−1` if `v = s(e)`, and `0`
/// otherwise; loop rows vanish.
pub fn coboundary_matrix(g: &WeightedGraph, o: &Orientation) -> Result<IntMatrix> {
    o.validate(g)?;
    let mut m = vec![vec![0i64; g.vertex_count()]; g.edge_count()];
    for (e, row) in m.iter_mut().enumerate() {
        if o.source[e] != o.target[e] {
            row[o.target[e]] = 1;
            row[o.source[e]] = -1;
        }
    }
    Ok(m)
}

/// `a·b` where `b` has `cols` columns (kept explicit for empty inner dimension).
fn mat_mul(a: &IntMatrix, b: &IntMatrix, cols: usize) -> IntMatrix {
    let inner = b.len();
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Whether `∂δ(v) = −div(f_v)` for every vertex `v`.
pub fn check_boundary_identity(g: &WeightedGraph, o: &Orientation) -> bool {
    let (Ok(b), Ok(c)) = (boundary_matrix(g, o), coboundary_matrix(g, o)) else {
        return false;
    };
    let bd = mat_mul(&b, &c, g.vertex_count());
    (0..g.vertex_count()).all(|v| {
        let div = principal_divisor(g, &GraphFunction::indicator(g, v));
        (0..g.vertex_count()).all(|w| bd[w][v] == -div.0[w])
    })
}

/// Fundamental cycles of a spanning tree, as integer edge vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleBasis {
    /// tree edge positions, ascending
    pub spanning_tree: Vec<usize>,
    /// non-tree edge positions, ascending; `cycles[i]` is the fundamental
    /// cycle of `non_tree[i]`
    pub non_tree: Vec<usize>,
    pub cycles: Vec<Vec<i64>>,
}

impl CycleBasis {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Coordinates of a cycle vector: its coefficients on the non-tree edges.
    pub fn coordinates(&self, z: &[i64]) -> Vec<i64> {
        self.non_tree.iter().map(|&e| z[e]).collect()
    }
}

/// Tree from an edge-ordered depth-first search at the first vertex; one
/// fundamental cycle per non-tree edge, carrying `+1` on that edge.
pub fn cycle_basis(g: &WeightedGraph, o: &Orientation) -> Result<CycleBasis> {
    g.require_connected()?;
    o.validate(g)?;
    let n = g.vertex_count();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        incident[e.ends.0].push(i);
        if !e.is_loop() {
            incident[e.ends.1].push(i);
        }
    }
    let mut parent_edge = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    let mut in_tree = vec![false; g.edge_count()];
    depth[0] = 0;
    let mut stack = vec![(0usize, 0usize)];
    while let Some(&(v, pos)) = stack.last() {
        if pos == incident[v].len() {
            stack.pop();
            continue;
        }
        stack.last_mut().unwrap().1 += 1;
        let e = incident[v][pos];
        let w = g.edges()[e].other_end(v);
        if depth[w] == usize::MAX {
            depth[w] = depth[v] + 1;
            parent_edge[w] = e;
            in_tree[e] = true;
            stack.push((w, 0));
        }
    }
    let parent = |v: usize| g.edges()[parent_edge[v]].other_end(v);
    let spanning_tree: Vec<usize> = (0..g.edge_count()).filter(|&e| in_tree[e]).collect();
    let non_tree: Vec<usize> = (0..g.edge_count()).filter(|&e| !in_tree[e]).collect();
    let mut cycles = Vec::with_capacity(non_tree.len());
    for &e in &non_tree {
        let mut z = vec![0i64; g.edge_count()];
        z[e] = 1;
        // Close up with the tree path from t(e) back to s(e).
        let (mut x, mut y) = (o.target[e], o.source[e]);
        while x != y {
            if depth[x] >= depth[y] {
                let f = parent_edge[x];
                let p = parent(x);
                z[f] += if o.source[f] == x && o.target[f] == p { 1 } else { -1 };
                x = p;
            } else {
                let f = parent_edge[y];
                let p = parent(y);
                z[f] += if o.source[f] == p && o.target[f] == y { 1 } else { -1 };
                y = p;
            }
        }
        cycles.push(z);
    }
    let basis = CycleBasis { spanning_tree, non_tree, cycles };
    debug_assert!(basis.cycles.iter().all(|z| in_kernel(g, o, z)));
    Ok(basis)
}

fn in_kernel(g: &WeightedGraph, o: &Orientation, z: &[i64]) -> bool {
    let mut b = vec![0i64; g.vertex_count()];
    for (e, &c) in z.iter().enumerate() {
        b[o.target[e]] += c;
        b[o.source[e]] -= c;
    }
    b.iter().all(|&x| x == 0)
}

/// Whether an edge vector lies in `ker ∂`.
pub fn is_cycle(g: &WeightedGraph, o: &Orientation, z: &[i64]) -> bool {
    z.len() == g.edge_count() && in_kernel(g, o, z)
}

pub fn canonical_cycle_basis(g: &WeightedGraph) -> Result<CycleBasis> {
    cycle_basis(g, &Orientation::canonical(g))
}

/// Gram matrix of a cycle basis under `(e, e')_ℓ = κ_{e,e'}·ℓ(e)`.
///
/// An entry touching an infinitely long edge is `Length::Infinite`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodMatrix {
    pub gram: Vec<Vec<Length>>,
}

impl PeriodMatrix {
    pub fn size(&self) -> usize {
        self.gram.len()
    }

    pub fn is_finite(&self) -> bool {
        self.gram.iter().flatten().all(|x| !x.is_infinite())
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.gram.len();
        (0..n).all(|i| (0..n).all(|j| self.gram[i][j] == self.gram[j][i]))
    }

    pub fn rational(&self) -> Option<Vec<Vec<BigRational>>> {
        self.gram
            .iter()
            .map(|row| row.iter().map(|x| x.finite().cloned()).collect())
            .collect()
    }

    /// `None` when some entry is infinite.
    pub fn determinant(&self) -> Option<BigRational> {
        self.rational().map(|m| det_rational(&m))
    }

    /// `Mᵀ·Q·M` for an integer matrix `M`, in exact arithmetic.
    pub fn congruent(&self, m: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
        let q = self.rational()?;
        let cols = m.first().map_or(0, Vec::len);
        let n = q.len();
        let big = |x: i64| BigRational::from_integer(BigInt::from(x));
        let mut out = vec![vec![BigRational::from_integer(BigInt::from(0)); cols]; cols];
        for i in 0..cols {
            for j in 0..cols {
                let mut acc = BigRational::from_integer(BigInt::from(0));
                for a in 0..n {
                    if m[a][i] == 0 {
                        continue;
                    }
                    for b in 0..n {
                        if m[b][j] != 0 {
                            acc += big(m[a][i]) * &q[a][b] * big(m[b][j]);
                        }
                    }
                }
                out[i][j] = acc;
            }
        }
        Some(out)
    }
}

/// `gram[i][j] = Σ_e cᵢ(e)·cⱼ(e)·ℓ(e)`.
pub fn period_matrix(lengths: &[Length], basis: &CycleBasis) -> PeriodMatrix {
    let k = basis.cycles.len();
    let mut gram = vec![vec![Length::zero(); k]; k];
    for i in 0..k {
        for j in i..k {
            let mut acc = Length::zero();
            for (e, l) in lengths.iter().enumerate() {
                let c = basis.cycles[i][e] * basis.cycles[j][e];
                if c == 0 {
                    continue;
                }
                acc = match l {
                    Length::Infinite => Length::Infinite,
                    Length::Finite(x) => acc + Length::Finite(x * BigRational::from_integer(BigInt::from(c))),
                };
            }
            gram[i][j] = acc.clone();
            gram[j][i] = acc;
        }
    }
    PeriodMatrix { gram }
}

pub fn period_matrix_of<C: MetricGraph>(c: &C, basis: &CycleBasis) -> PeriodMatrix {
    period_matrix(c.lengths(), basis)
}

/// The polarized torus `(H₁(G,ℝ) ⊕ ℝ^{g−b₁}) / (H₁(G,ℤ) ⊕ ℤ^{g−b₁})` with the
/// period form on the first summand and zero on the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalPAV {
    pub dimension: u64,
    pub rank: usize,
    pub gram: PeriodMatrix,
}

pub fn jacobian_torus(c: &TropicalCurve) -> Result<TropicalPAV> {
    let genus = c.genus();
    if genus == 0 {
        return Err(Error::GenusZero);
    }
    let basis = canonical_cycle_basis(c.graph())?;
    Ok(TropicalPAV {
        dimension: genus,
        rank: basis.len(),
        gram: period_matrix(c.lengths(), &basis),
    })
}

/// `∂C₁(G,ℤ) / ∂δC₀(G,ℤ)`, computed from the boundary lattice directly.
pub fn component_group(g: &WeightedGraph) -> Result<FiniteAbelianGroup> {
    g.require_connected()?;
    let o = Orientation::canonical(g);
    let b = boundary_matrix(g, &o)?;
    let c = coboundary_matrix(g, &o)?;
    let image = ColumnLattice::new(&to_big(&b));
    let bd = to_big(&mat_mul(&b, &c, g.vertex_count()));
    let n = g.vertex_count();
    let mut coords = vec![Vec::with_capacity(n); image.rank()];
    for v in 0..n {
        let col: Vec<BigInt> = bd.iter().map(|row| row[v].clone()).collect();
        let x = image
            .coordinates(&col)
            .ok_or_else(|| Error::Internal("∂δ(v) outside ∂C₁".into()))?;
        for (row, xi) in coords.iter_mut().zip(x) {
            row.push(xi);
        }
    }
    let diag = smith_diagonal(coords);
    if diag.iter().any(num_traits::Zero::is_zero) {
        return Err(Error::Internal("quotient ∂C₁/∂δC₀ is infinite".into()));
    }
    Ok(FiniteAbelianGroup::from_smith_diagonal(&diag))
}
