//! Finite multigraphs with loops, vertex and edge subsets as bitmasks.

use crate::error::{Error, Result};
use crate::{linalg, Wide, MAX_ENUM_VERTICES};

/// Bitmask over vertex indices.
pub type VertexSet = u64;
/// Bitmask over edge indices. A spanning subgraph is the set of its kept edges.
pub type EdgeSet = u64;

pub const MAX_VERTICES: usize = 63;
pub const MAX_EDGES: usize = 64;

/// Iterator over the set bits of a mask, lowest first.
#[derive(Clone, Copy, Debug)]
pub struct Bits(u64);

impl Iterator for Bits {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

pub fn bits(mask: u64) -> Bits {
    Bits(mask)
}

pub fn popcount(mask: u64) -> usize {
    mask.count_ones() as usize
}

pub fn singleton(i: usize) -> u64 {
    1u64 << i
}

/// Mask with the lowest `k` bits set.
pub fn low_mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

pub fn set_from_slice(items: &[usize]) -> u64 {
    items.iter().fold(0, |m, &i| m | (1u64 << i))
}

pub fn set_to_vec(mask: u64) -> Vec<usize> {
    bits(mask).collect()
}

/// Finite multigraph. Edge identity is positional, so parallel edges are distinct.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    genera: Vec<u32>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        if n > MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "vertex count",
                actual: n,
                limit: MAX_VERTICES,
            });
        }
        if edges.len() > MAX_EDGES {
            return Err(Error::TooLarge {
                what: "edge count",
                actual: edges.len(),
                limit: MAX_EDGES,
            });
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {i} = ({u},{v}) references a vertex outside 0..{n}"
                )));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        Ok(Graph {
            n,
            edges: normalized,
            genera: vec![0; n],
        })
    }

    pub fn with_genera(mut self, genera: Vec<u32>) -> Result<Self> {
        if genera.len() != self.n {
            return Err(Error::InvalidGraph(format!(
                "{} genera given for {} vertices",
                genera.len(),
                self.n
            )));
        }
        self.genera = genera;
        Ok(self)
    }

    /// Two vertices joined by `k` parallel edges.
    pub fn vine(k: usize) -> Self {
        Graph::new(2, vec![(0, 1); k]).expect("vine graph")
    }

    /// Cycle with edge `i` joining `i` and `i + 1 mod n`. `n = 1` is a loop.
    pub fn cycle(n: usize) -> Self {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("cycle graph")
    }

    /// Path with edge `i` joining `i` and `i + 1`.
    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i)).collect()).expect("path graph")
    }

    /// Star with center 0 and `k` leaves.
    pub fn star(k: usize) -> Self {
        Graph::new(k + 1, (1..=k).map(|i| (0, i)).collect()).expect("star graph")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (u, v) = self.edges[e];
        u == v
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    pub fn all_vertices(&self) -> VertexSet {
        low_mask(self.n)
    }

    pub fn all_edges(&self) -> EdgeSet {
        low_mask(self.edges.len())
    }

    pub fn loops(&self) -> EdgeSet {
        (0..self.edges.len())
            .filter(|&e| self.is_loop(e))
            .fold(0, |m, e| m | singleton(e))
    }

    pub fn complement(&self, w: VertexSet) -> VertexSet {
        self.all_vertices() & !w
    }

    /// Edges of `es` with both endpoints in `w`, loops included.
    pub fn edges_within(&self, es: EdgeSet, w: VertexSet) -> EdgeSet {
        let mut out = 0;
        for e in bits(es) {
            let (u, v) = self.edges[e];
            if w >> u & 1 == 1 && w >> v & 1 == 1 {
                out |= singleton(e);
            }
        }
        out
    }

    /// Edges of `es` with one endpoint in `w1` and the other in `w2`.
    pub fn edges_between(&self, es: EdgeSet, w1: VertexSet, w2: VertexSet) -> EdgeSet {
        let mut out = 0;
        for e in bits(es) {
            let (u, v) = self.edges[e];
            if u == v {
                continue;
            }
            let (a, b) = (singleton(u), singleton(v));
            if (w1 & a != 0 && w2 & b != 0) || (w1 & b != 0 && w2 & a != 0) {
                out |= singleton(e);
            }
        }
        out
    }

    /// S-valence of a disjoint pair: edges of `s` joining `w1` to `w2`.
    pub fn valence(&self, s: EdgeSet, w1: VertexSet, w2: VertexSet) -> Result<usize> {
        if w1 & w2 != 0 {
            return Err(Error::Overlap(w1, w2));
        }
        Ok(self.val(s, w1, w2))
    }

    /// Unchecked valence; callers guarantee disjointness.
    pub fn val(&self, s: EdgeSet, w1: VertexSet, w2: VertexSet) -> usize {
        popcount(self.edges_between(s, w1, w2))
    }

    /// Valence of the cut between `w` and its complement.
    pub fn cut(&self, s: EdgeSet, w: VertexSet) -> usize {
        self.val(s, w, self.complement(w))
    }

    /// `e_S(W)`: edges of `s` with both endpoints in `w`.
    pub fn interior_edges(&self, s: EdgeSet, w: VertexSet) -> usize {
        popcount(self.edges_within(s, w))
    }

    /// Connected components of the subgraph with vertex set `w` and edges `es`
    /// (edges leaving `w` ignored), ordered by smallest vertex.
    pub fn components(&self, es: EdgeSet, w: VertexSet) -> Vec<VertexSet> {
        let mut parent: [u8; 64] = [0; 64];
        for (v, p) in parent.iter_mut().enumerate().take(self.n) {
            *p = v as u8;
        }
        fn find(parent: &mut [u8; 64], mut x: usize) -> usize {
            while parent[x] as usize != x {
                parent[x] = parent[parent[x] as usize];
                x = parent[x] as usize;
            }
            x
        }
        for e in bits(es) {
            let (u, v) = self.edges[e];
            if u != v && w >> u & 1 == 1 && w >> v & 1 == 1 {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a != b {
                    parent[a.max(b)] = a.min(b) as u8;
                }
            }
        }
        let mut comps: Vec<(usize, VertexSet)> = Vec::new();
        for v in bits(w) {
            let r = find(&mut parent, v);
            match comps.iter_mut().find(|(root, _)| *root == r) {
                Some((_, m)) => *m |= singleton(v),
                None => comps.push((r, singleton(v))),
            }
        }
        comps.into_iter().map(|(_, m)| m).collect()
    }

    /// True when `w` is nonempty and connected using edges of `es`.
    pub fn is_connected_in(&self, es: EdgeSet, w: VertexSet) -> bool {
        w != 0 && self.components(es, w).len() == 1
    }

    /// `Γ[W]` connected and nonempty.
    pub fn is_connected_set(&self, w: VertexSet) -> bool {
        self.is_connected_in(self.all_edges(), w)
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_set(self.all_vertices())
    }

    pub fn ensure_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    pub fn ensure_enumerable(&self) -> Result<()> {
        if self.n > MAX_ENUM_VERTICES {
            return Err(Error::TooLarge {
                what: "vertex count for subset enumeration",
                actual: self.n,
                limit: MAX_ENUM_VERTICES,
            });
        }
        Ok(())
    }

    /// `W` nontrivial with `Γ[W]` and `Γ[W^c]` both connected.
    pub fn is_biconnected(&self, w: VertexSet) -> bool {
        let c = self.complement(w);
        w & !self.all_vertices() == 0
            && w != 0
            && c != 0
            && self.is_connected_set(w)
            && self.is_connected_set(c)
    }

    /// All nontrivial biconnected subsets, ascending by bitmask.
    pub fn biconnected_subsets(&self) -> Result<Vec<VertexSet>> {
        self.ensure_connected()?;
        self.ensure_enumerable()?;
        Ok((1..self.all_vertices())
            .filter(|&w| self.is_biconnected(w))
            .collect())
    }

    /// All nonempty `W` with `Γ[W]` connected, `V` included, ascending.
    pub fn connected_subsets(&self) -> Result<Vec<VertexSet>> {
        self.ensure_enumerable()?;
        Ok((1..=self.all_vertices())
            .filter(|&w| self.is_connected_set(w))
            .collect())
    }

    /// Number of connected components of the spanning subgraph `es`.
    pub fn b0(&self, es: EdgeSet) -> usize {
        self.components(es, self.all_vertices()).len()
    }

    /// First Betti number of the spanning subgraph `es`.
    pub fn b1(&self, es: EdgeSet) -> usize {
        popcount(es) + self.b0(es) - self.n
    }

    /// First Betti number of `Γ[W]`.
    pub fn b1_induced(&self, w: VertexSet) -> usize {
        let inner = self.edges_within(self.all_edges(), w);
        popcount(inner) + self.components(inner, w).len() - popcount(w)
    }

    pub fn genus(&self) -> usize {
        self.b1(self.all_edges())
    }

    pub fn is_forest(&self, es: EdgeSet) -> bool {
        es & self.loops() == 0 && self.b1(es) == 0
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.is_forest(self.all_edges())
    }

    /// Acyclic edge subsets of `within`, ascending by bitmask.
    pub fn forests_within(&self, within: EdgeSet) -> Vec<EdgeSet> {
        let candidates: Vec<usize> = bits(within & !self.loops()).collect();
        let mut out = Vec::new();
        let mut label: Vec<usize> = (0..self.n).collect();
        self.forest_rec(&candidates, 0, 0, &mut label, &mut out);
        out.sort_unstable();
        out
    }

    fn forest_rec(
        &self,
        cand: &[usize],
        i: usize,
        acc: EdgeSet,
        label: &mut Vec<usize>,
        out: &mut Vec<EdgeSet>,
    ) {
        if i == cand.len() {
            out.push(acc);
            return;
        }
        self.forest_rec(cand, i + 1, acc, label, out);
        let (u, v) = self.edges[cand[i]];
        let (a, b) = (label[u], label[v]);
        if a != b {
            let saved = label.clone();
            for l in label.iter_mut() {
                if *l == b {
                    *l = a;
                }
            }
            self.forest_rec(cand, i + 1, acc | singleton(cand[i]), label, out);
            *label = saved;
        }
    }

    pub fn spanning_forests(&self) -> Vec<EdgeSet> {
        self.forests_within(self.all_edges())
    }

    /// Spanning trees, ascending by bitmask; empty when disconnected.
    pub fn spanning_trees(&self) -> Vec<EdgeSet> {
        let target = self.n - 1;
        self.spanning_forests()
            .into_iter()
            .filter(|&f| popcount(f) == target)
            .collect()
    }

    /// Laplacian of the spanning subgraph `es`; loops contribute nothing.
    pub fn laplacian(&self, es: EdgeSet) -> Vec<Vec<Wide>> {
        let mut l = vec![vec![0 as Wide; self.n]; self.n];
        for e in bits(es) {
            let (u, v) = self.edges[e];
            if u != v {
                l[u][u] += 1;
                l[v][v] += 1;
                l[u][v] -= 1;
                l[v][u] -= 1;
            }
        }
        l
    }

    /// Kirchhoff count: determinant of the Laplacian with row and column 0 removed.
    pub fn tree_count(&self) -> u64 {
        let l = self.laplacian(self.all_edges());
        let reduced: Vec<Vec<Wide>> = l[1..].iter().map(|row| row[1..].to_vec()).collect();
        linalg::determinant(reduced) as u64
    }

    /// The subgraph on `w` with edges `keep` (restricted to `w`), reindexed.
    /// Returns the graph, its vertices in the ambient graph and its edges in
    /// the ambient graph.
    pub fn subgraph(&self, w: VertexSet, keep: EdgeSet) -> (Graph, Vec<usize>, Vec<usize>) {
        let verts: Vec<usize> = bits(w).collect();
        let mut index = [usize::MAX; 64];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let es: Vec<usize> = bits(self.edges_within(keep, w)).collect();
        let edges = es
            .iter()
            .map(|&e| {
                let (u, v) = self.edges[e];
                (index[u], index[v])
            })
            .collect();
        let genera = verts.iter().map(|&v| self.genera[v]).collect();
        let g = Graph::new(verts.len(), edges)
            .and_then(|g| g.with_genera(genera))
            .expect("subgraph of a valid graph");
        (g, verts, es)
    }

    /// Contraction of the edge set `t`.
    pub fn contract(&self, t: EdgeSet) -> GraphMorphism {
        let t = t & self.all_edges();
        let comps = self.components(t, self.all_vertices());
        let mut vmap = vec![0; self.n];
        for (i, &c) in comps.iter().enumerate() {
            for v in bits(c) {
                vmap[v] = i;
            }
        }
        let emap: Vec<usize> = (0..self.edges.len())
            .filter(|&e| t >> e & 1 == 0)
            .collect();
        let edges = emap
            .iter()
            .map(|&e| {
                let (u, v) = self.edges[e];
                (vmap[u], vmap[v])
            })
            .collect();
        let genera = comps
            .iter()
            .map(|&c| {
                let inner = self.edges_within(t, c);
                let loops_b1 = popcount(inner) + 1 - popcount(c);
                bits(c).map(|v| self.genera[v]).sum::<u32>() + loops_b1 as u32
            })
            .collect();
        let target = Graph::new(comps.len(), edges)
            .and_then(|g| g.with_genera(genera))
            .expect("contraction of a valid graph");
        GraphMorphism {
            source: self.clone(),
            target,
            contracted: t,
            vmap,
            emap,
        }
    }
}

/// Contraction morphism `Γ → Γ/T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMorphism {
    pub source: Graph,
    pub target: Graph,
    pub contracted: EdgeSet,
    /// Vertex surjection.
    pub vmap: Vec<usize>,
    /// Target edge index to source edge index.
    pub emap: Vec<usize>,
}

impl GraphMorphism {
    pub fn identity(g: &Graph) -> Self {
        g.contract(0)
    }

    /// `f_V^{-1}(Z)`.
    pub fn preimage(&self, z: VertexSet) -> VertexSet {
        self.vmap
            .iter()
            .enumerate()
            .filter(|(_, &t)| z >> t & 1 == 1)
            .fold(0, |m, (v, _)| m | singleton(v))
    }

    /// `f_V(W)`.
    pub fn image(&self, w: VertexSet) -> VertexSet {
        bits(w).fold(0, |m, v| m | singleton(self.vmap[v]))
    }

    /// Target edges whose source edge lies in `s`.
    pub fn pull_edges(&self, s: EdgeSet) -> EdgeSet {
        self.emap
            .iter()
            .enumerate()
            .filter(|(_, &e)| s >> e & 1 == 1)
            .fold(0, |m, (i, _)| m | singleton(i))
    }

    /// Source edges of a set of target edges.
    pub fn push_edges(&self, s: EdgeSet) -> EdgeSet {
        bits(s).fold(0, |m, i| m | singleton(self.emap[i]))
    }

    /// Whether the first Betti number is preserved (the contracted set is a forest).
    pub fn preserves_genus(&self) -> bool {
        self.source.is_forest(self.contracted)
    }
}
