#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use tropcurve::iso::canonical_code;
use tropcurve::{Length, TropicalCurve, WeightedGraph};

pub fn theta(w: (u32, u32)) -> WeightedGraph {
    WeightedGraph::build(
        &[("u", w.0), ("v", w.1)],
        &[("a", "u", "v"), ("b", "u", "v"), ("c", "u", "v")],
    )
    .unwrap()
}

pub fn dumbbell() -> WeightedGraph {
    WeightedGraph::build(
        &[("u", 0), ("v", 0)],
        &[("a", "u", "u"), ("b", "u", "v"), ("c", "v", "v")],
    )
    .unwrap()
}

pub fn point(w: u32) -> WeightedGraph {
    WeightedGraph::build(&[("p", w)], &[]).unwrap()
}

pub fn triangle() -> WeightedGraph {
    WeightedGraph::build(
        &[("u", 0), ("v", 0), ("w", 0)],
        &[("a", "u", "v"), ("b", "v", "w"), ("c", "w", "u")],
    )
    .unwrap()
}

pub fn looped_banana() -> WeightedGraph {
    WeightedGraph::build(
        &[("u", 0), ("v", 0)],
        &[("a", "u", "v"), ("b", "u", "v"), ("c", "u", "v"), ("lu", "u", "u"), ("lv", "v", "v")],
    )
    .unwrap()
}

pub fn k4() -> WeightedGraph {
    WeightedGraph::from_indexed(&[0; 4], &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

pub fn ints(xs: &[i64]) -> Vec<Length> {
    xs.iter().map(|&x| Length::integer(x)).collect()
}

/// The separating-pair curve: A(1)≡C triple, A–e1–B, B(3)=D double, C–e2–D.
/// Unmarked edges have length 1.
pub fn fig8_gamma(l1: i64, l2: i64) -> TropicalCurve {
    let g = WeightedGraph::build(
        &[("A", 1), ("B", 3), ("C", 0), ("D", 0)],
        &[
            ("e1", "A", "B"),
            ("e2", "C", "D"),
            ("t1", "A", "C"),
            ("t2", "A", "C"),
            ("t3", "A", "C"),
            ("d1", "B", "D"),
            ("d2", "B", "D"),
        ],
    )
    .unwrap();
    TropicalCurve::new(g, ints(&[l1, l2, 1, 1, 1, 1, 1])).unwrap()
}

/// `e1` contracted (merged weight 4), `e'` of length `l1 + l2`.
pub fn fig8_gamma_prime(l1: i64, l2: i64) -> TropicalCurve {
    let g = WeightedGraph::build(
        &[("T", 4), ("L", 0), ("R", 0)],
        &[
            ("e'", "L", "R"),
            ("t1", "T", "L"),
            ("t2", "T", "L"),
            ("t3", "T", "L"),
            ("d1", "T", "R"),
            ("d2", "T", "R"),
        ],
    )
    .unwrap();
    TropicalCurve::new(g, ints(&[l1 + l2, 1, 1, 1, 1, 1])).unwrap()
}

/// Two 4-cycles through `p`, `q` with one doubled edge each; `flipped`
/// reflects the second cycle so its doubled edge meets `q` instead of `p`.
pub fn whitney_pair_member(flipped: bool) -> WeightedGraph {
    let near = if flipped { "q" } else { "p" };
    let far = if flipped { "p" } else { "q" };
    WeightedGraph::build(
        &[("p", 0), ("q", 0), ("a1", 0), ("a2", 0), ("b1", 0), ("b2", 0)],
        &[
            ("x1", "p", "a1"),
            ("x2", "p", "a1"),
            ("x3", "a1", "q"),
            ("x4", "q", "a2"),
            ("x5", "a2", "p"),
            ("y1", near, "b1"),
            ("y2", near, "b1"),
            ("y3", "b1", far),
            ("y4", far, "b2"),
            ("y5", "b2", near),
        ],
    )
    .unwrap()
}

/// Random connected weighted multigraph: a random tree plus extra edges
/// (loops and parallels allowed), shuffled edge order.
pub fn random_connected(rng: &mut StdRng, max_vertices: usize, max_edges: usize, max_weight: u32) -> WeightedGraph {
    let n = rng.gen_range(1..=max_vertices.min(max_edges + 1));
    let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    let extra = rng.gen_range(0..=max_edges - edges.len());
    for _ in 0..extra {
        edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    edges.shuffle(rng);
    let weights: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max_weight)).collect();
    WeightedGraph::from_indexed(&weights, &edges)
}

pub fn random_lengths(rng: &mut StdRng, m: usize) -> Vec<Length> {
    (0..m).map(|_| Length::ratio(rng.gen_range(1..=9), rng.gen_range(1..=4))).collect()
}

/// Same graph with vertex and edge declaration order permuted.
pub fn shuffled(rng: &mut StdRng, g: &WeightedGraph) -> (WeightedGraph, Vec<usize>) {
    let mut vperm: Vec<usize> = (0..g.vertex_count()).collect();
    vperm.shuffle(rng);
    let mut eperm: Vec<usize> = (0..g.edge_count()).collect();
    eperm.shuffle(rng);
    let vertices = vperm.iter().map(|&v| {
        let x = &g.vertices()[v];
        (x.id.clone(), x.weight)
    });
    let edges = eperm.iter().map(|&e| {
        let x = &g.edges()[e];
        let (a, b) = x.ends;
        let (a, b) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        (x.id.clone(), g.vertices()[a].id.clone(), g.vertices()[b].id.clone())
    });
    let edges: Vec<_> = edges.collect();
    (WeightedGraph::new(vertices.collect::<Vec<_>>(), edges).unwrap(), eperm)
}

/// Connected weighted multigraphs as a proptest strategy.
pub fn arb_connected(max_vertices: usize, max_extra: usize, max_weight: u32) -> impl Strategy<Value = WeightedGraph> {
    (1..=max_vertices).prop_flat_map(move |n| {
        (
            prop::collection::vec(0..=max_weight, n),
            prop::collection::vec(any::<prop::sample::Index>(), n - 1),
            prop::collection::vec((0..n, 0..n), 0..=max_extra),
        )
            .prop_map(move |(weights, parents, extra)| {
                let mut edges: Vec<(usize, usize)> =
                    parents.iter().enumerate().map(|(i, p)| (p.index(i + 1), i + 1)).collect();
                edges.extend(extra);
                WeightedGraph::from_indexed(&weights, &edges)
            })
    })
}

// ---- independent oracles -------------------------------------------------

/// Union-find component count over `n` vertices.
pub fn component_count(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut count = n;
    for &(a, b) in edges {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            count -= 1;
        }
    }
    count
}

pub fn ends(g: &WeightedGraph) -> Vec<(usize, usize)> {
    g.edges().iter().map(|e| e.ends).collect()
}

/// Spanning trees by deletion–contraction on an edge list.
pub fn tree_count_dc(n: usize, edges: &[(usize, usize)]) -> u128 {
    let edges: Vec<(usize, usize)> = edges.iter().copied().filter(|(a, b)| a != b).collect();
    if component_count(n, &edges) != 1 {
        return 0;
    }
    let Some(&(a, b)) = edges.first() else {
        return 1;
    };
    let rest = &edges[1..];
    let deleted = tree_count_dc(n, rest);
    // merge b into a, renumber the last vertex to b
    let relabel = |v: usize| {
        let v = if v == b { a } else { v };
        if v == n - 1 { b } else { v }
    };
    let contracted: Vec<(usize, usize)> = rest.iter().map(|&(x, y)| (relabel(x), relabel(y))).collect();
    deleted + tree_count_dc(n - 1, &contracted)
}

/// Bridges by deleting each edge and recounting components.
pub fn bridges_brute(g: &WeightedGraph) -> Vec<usize> {
    let e = ends(g);
    let base = component_count(g.vertex_count(), &e);
    (0..e.len())
        .filter(|&i| {
            let rest: Vec<_> = e.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| *x).collect();
            component_count(g.vertex_count(), &rest) > base
        })
        .collect()
}

/// Circuits by testing every edge subset: nonempty, connected, all
/// degrees exactly two.
pub fn circuits_brute(g: &WeightedGraph) -> BTreeSet<u64> {
    let e = ends(g);
    let mut out = BTreeSet::new();
    for s in 1u64..(1 << e.len()) {
        let chosen: Vec<(usize, usize)> = (0..e.len()).filter(|i| s >> i & 1 == 1).map(|i| e[i]).collect();
        let mut deg = vec![0; g.vertex_count()];
        for &(a, b) in &chosen {
            deg[a] += 1;
            deg[b] += 1;
        }
        if deg.iter().any(|&d| d != 0 && d != 2) {
            continue;
        }
        let touched = deg.iter().filter(|&&d| d > 0).count();
        let isolated = g.vertex_count() - touched;
        if component_count(g.vertex_count(), &chosen) == isolated + 1 {
            out.insert(s);
        }
    }
    out
}

fn is_spanning_tree(n: usize, edges: &[(usize, usize)]) -> bool {
    edges.len() + 1 == n && edges.iter().all(|(a, b)| a != b) && component_count(n, edges) == 1
}

/// `Σ_T Π_{e ∉ T} ℓ(e)` over spanning trees `T`, by subset enumeration.
pub fn weighted_tree_sum(g: &WeightedGraph, lengths: &[BigRational]) -> BigRational {
    let e = ends(g);
    let n = g.vertex_count();
    let mut total = BigRational::zero();
    for s in 0u64..(1 << e.len()) {
        if s.count_ones() as usize + 1 != n {
            continue;
        }
        let tree: Vec<_> = (0..e.len()).filter(|i| s >> i & 1 == 1).map(|i| e[i]).collect();
        if !is_spanning_tree(n, &tree) {
            continue;
        }
        let mut prod = BigRational::one();
        for (i, l) in lengths.iter().enumerate() {
            if s >> i & 1 == 0 {
                prod *= l;
            }
        }
        total += prod;
    }
    total
}

pub fn rat(l: &Length) -> BigRational {
    l.finite().cloned().unwrap()
}

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Stability straight from the definition `2w(v) − 2 + val(v) > 0`.
pub fn stable_by_definition(weights: &[u32], edges: &[(usize, usize)]) -> bool {
    let mut val = vec![0i64; weights.len()];
    for &(a, b) in edges {
        val[a] += 1;
        val[b] += 1;
    }
    weights.iter().zip(&val).all(|(&w, &d)| 2 * w as i64 - 2 + d > 0)
}

/// Every multigraph on at most `2g − 2` vertices with at most `3g − 3`
/// edges, with every weight assignment, filtered to connected stable
/// genus-`g` graphs; canonical codes of the survivors.
pub fn stable_graph_oracle(g: u64) -> HashSet<Vec<u8>> {
    let max_v = (2 * g - 2) as usize;
    let max_e = (3 * g - 3) as usize;
    let mut out = HashSet::new();
    for n in 1..=max_v {
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        for_each_multiset(&slots, max_e, &mut Vec::new(), &mut |edges| {
            if component_count(n, edges) != 1 {
                return;
            }
            let b1 = (edges.len() + 1 - n) as u64;
            if b1 > g {
                return;
            }
            for weights in weight_assignments(n, (g - b1) as u32) {
                if stable_by_definition(&weights, edges) {
                    out.insert(canonical_code(&WeightedGraph::from_indexed(&weights, edges)));
                }
            }
        });
    }
    out
}

/// Every multiset of at most `budget` elements of `slots`.
fn for_each_multiset(
    slots: &[(usize, usize)],
    budget: usize,
    acc: &mut Vec<(usize, usize)>,
    f: &mut impl FnMut(&[(usize, usize)]),
) {
    let Some((&first, rest)) = slots.split_first() else {
        f(acc);
        return;
    };
    let before = acc.len();
    for k in 0..=budget {
        if k > 0 {
            acc.push(first);
        }
        for_each_multiset(rest, budget - k, acc, f);
    }
    acc.truncate(before);
}

/// All weight vectors of length `n` summing to `total`.
pub fn weight_assignments(n: usize, total: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            weight_assignments(n - 1, total - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Isomorphism by trying every vertex permutation and comparing
/// weights and multiplicity matrices.
pub fn isomorphic_brute(g1: &WeightedGraph, g2: &WeightedGraph) -> bool {
    let n = g1.vertex_count();
    if n != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return false;
    }
    let matrix = |g: &WeightedGraph| {
        let mut m = vec![vec![0usize; n]; n];
        for &(a, b) in &ends(g) {
            m[a][b] += 1;
            if a != b {
                m[b][a] += 1;
            }
        }
        m
    };
    let (m1, m2) = (matrix(g1), matrix(g2));
    let (w1, w2) = (g1.weights(), g2.weights());
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        (0..n).all(|i| w1[i] == w2[p[i]] && (0..n).all(|j| m1[i][j] == m2[p[i]][p[j]]))
    })
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k == p.len() {
        return f(p);
    }
    for i in k..p.len() {
        p.swap(k, i);
        if permutations(p, k + 1, f) {
            p.swap(k, i);
            return true;
        }
        p.swap(k, i);
    }
    false
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    let inner = b.len();
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}
