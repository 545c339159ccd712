//! Divisor theory on graphs: principal divisors, the Laplacian and the
//! Jacobian (critical) group.
//!
//! Vertex weights play no role here.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::{det_int, smith_diagonal, solve_rational, to_big, IntMatrix};

/// Integer coefficients indexed by vertex position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Divisor(pub Vec<i64>);

/// Integer values indexed by vertex position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphFunction(pub Vec<i64>);

fn vector_from_map(g: &WeightedGraph, map: &BTreeMap<String, i64>) -> Result<Vec<i64>> {
    let mut v = vec![0; g.vertex_count()];
    for (id, &x) in map {
        v[g.vertex_index(id)?] = x;
    }
    Ok(v)
}

fn vector_to_map(g: &WeightedGraph, v: &[i64]) -> BTreeMap<String, i64> {
    g.vertices().iter().zip(v).map(|(x, &c)| (x.id.clone(), c)).collect()
}

impl Divisor {
    /// Missing vertices get coefficient 0.
    pub fn from_map(g: &WeightedGraph, map: &BTreeMap<String, i64>) -> Result<Self> {
        vector_from_map(g, map).map(Divisor)
    }

    pub fn to_map(&self, g: &WeightedGraph) -> BTreeMap<String, i64> {
        vector_to_map(g, &self.0)
    }

    pub fn zero(g: &WeightedGraph) -> Self {
        Divisor(vec![0; g.vertex_count()])
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl GraphFunction {
    /// Missing vertices get value 0.
    pub fn from_map(g: &WeightedGraph, map: &BTreeMap<String, i64>) -> Result<Self> {
        vector_from_map(g, map).map(GraphFunction)
    }

    pub fn to_map(&self, g: &WeightedGraph) -> BTreeMap<String, i64> {
        vector_to_map(g, &self.0)
    }

    /// The indicator function `f_v`.
    pub fn indicator(g: &WeightedGraph, v: usize) -> Self {
        let mut f = vec![0; g.vertex_count()];
        f[v] = 1;
        GraphFunction(f)
    }

    pub fn constant(g: &WeightedGraph, c: i64) -> Self {
        GraphFunction(vec![c; g.vertex_count()])
    }
}

pub fn degree(d: &Divisor) -> i64 {
    d.degree()
}

/// A finite abelian group `Z/d₁ × Z/d₂ × …` with `d₁ | d₂ | …`, all `dᵢ ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    pub invariant_factors: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup { invariant_factors: Vec::new() }
    }

    /// Keeps the diagonal entries `≥ 2`, which already form a divisibility chain.
    pub(crate) fn from_smith_diagonal(diag: &[BigInt]) -> Self {
        let invariant_factors = diag
            .iter()
            .filter(|d| *d > &BigInt::one())
            .map(|d| d.to_u64().expect("invariant factor exceeds u64"))
            .collect();
        FiniteAbelianGroup { invariant_factors }
    }

    pub fn order(&self) -> u128 {
        self.invariant_factors.iter().map(|&d| d as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Diagonal `val(v) − 2·loop(v)`, off-diagonal `−(v,w)`.
pub fn laplacian(g: &WeightedGraph) -> IntMatrix {
    let n = g.vertex_count();
    let mut l = vec![vec![0i64; n]; n];
    for e in g.edges() {
        let (a, b) = e.ends;
        if a != b {
            l[a][a] += 1;
            l[b][b] += 1;
            l[a][b] -= 1;
            l[b][a] -= 1;
        }
    }
    l
}

/// `div(f) = −L·f`.
pub fn principal_divisor(g: &WeightedGraph, f: &GraphFunction) -> Divisor {
    assert_eq!(f.0.len(), g.vertex_count(), "function must be total on the vertex set");
    let l = laplacian(g);
    Divisor(
        l.iter()
            .map(|row| -row.iter().zip(&f.0).map(|(a, b)| a * b).sum::<i64>())
            .collect(),
    )
}

/// `Div⁰(G)/Prin(G)`, from the Smith form of the full Laplacian.
pub fn jacobian_group(g: &WeightedGraph) -> Result<FiniteAbelianGroup> {
    g.require_connected()?;
    let diag = smith_diagonal(to_big(&laplacian(g)));
    let zeros = diag.iter().filter(|d| d.is_zero()).count();
    if zeros != 1 {
        return Err(Error::Internal(format!("laplacian corank {zeros} on a connected graph")));
    }
    let group = FiniteAbelianGroup::from_smith_diagonal(&diag);
    debug_assert_eq!(group, reduced_laplacian_group(g));
    Ok(group)
}

/// Cross-check route: Smith form of the Laplacian with the last row and
/// column removed.
fn reduced_laplacian_group(g: &WeightedGraph) -> FiniteAbelianGroup {
    let l = reduced_laplacian(g);
    FiniteAbelianGroup::from_smith_diagonal(&smith_diagonal(to_big(&l)))
}

fn reduced_laplacian(g: &WeightedGraph) -> IntMatrix {
    let mut l = laplacian(g);
    l.pop();
    for row in &mut l {
        row.pop();
    }
    l
}

/// Returns a witness `f` with `div(f) = d` when `d` is principal.
pub fn is_principal(g: &WeightedGraph, d: &Divisor) -> Result<Option<GraphFunction>> {
    g.require_connected()?;
    let deg = d.degree();
    if deg != 0 {
        return Err(Error::NonZeroDegree(deg));
    }
    let n = g.vertex_count();
    if n == 1 {
        return Ok(Some(GraphFunction(vec![0])));
    }
    // Fix f(last) = 0; the reduced system L̃·f̃ = −d̃ has a unique rational
    // solution, and d is principal iff it is integral.
    let l: Vec<Vec<BigRational>> = reduced_laplacian(g)
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let rhs: Vec<BigRational> = d.0[..n - 1]
        .iter()
        .map(|&x| BigRational::from_integer(BigInt::from(-x)))
        .collect();
    let sol = solve_rational(&l, &rhs)
        .ok_or_else(|| Error::Internal("singular reduced laplacian".into()))?;
    if !sol.iter().all(|x| x.is_integer()) {
        return Ok(None);
    }
    let mut f: Vec<i64> = sol
        .iter()
        .map(|x| x.to_integer().to_i64().expect("witness fits in i64"))
        .collect();
    f.push(0);
    let f = GraphFunction(f);
    debug_assert_eq!(&principal_divisor(g, &f), d);
    Ok(Some(f))
}

/// Matrix-tree theorem on the reduced Laplacian.
pub fn spanning_tree_count(g: &WeightedGraph) -> Result<u128> {
    g.require_connected()?;
    let det = det_int(&to_big(&reduced_laplacian(g)));
    det.to_u128()
        .filter(|&c| c > 0)
        .ok_or_else(|| Error::Internal(format!("tree count {det} out of range")))
}
