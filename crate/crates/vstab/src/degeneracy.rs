//! Degeneracy subsets, admissible spanning subgraphs and D-complexity.

use std::collections::BTreeSet;

use crate::error::{DegeneracyViolation, Error, Result};
use crate::graph::{bits, singleton, EdgeSet, Graph, GraphMorphism, VertexSet};

/// Complement- and union-closed family of biconnected subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracySubset {
    graph: Graph,
    sets: Vec<VertexSet>,
    extended: Vec<VertexSet>,
}

impl DegeneracySubset {
    /// Checks membership in BCon and both closure axioms.
    pub fn validate(g: &Graph, sets: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        g.ensure_connected()?;
        g.ensure_enumerable()?;
        let set: BTreeSet<VertexSet> = sets.into_iter().collect();
        for &w in &set {
            if !g.is_biconnected(w) {
                return Err(Error::Degeneracy(DegeneracyViolation::NotBiconnected(w)));
            }
            if !set.contains(&g.complement(w)) {
                return Err(Error::Degeneracy(DegeneracyViolation::MissingComplement(w)));
            }
        }
        for &a in &set {
            for &b in set.range(a + 1..) {
                let u = a | b;
                if a & b == 0 && g.is_biconnected(u) && !set.contains(&u) {
                    return Err(Error::Degeneracy(DegeneracyViolation::MissingUnion(a, b)));
                }
            }
        }
        Ok(Self::unchecked(g, set))
    }

    /// Builds the value without checking the axioms.
    pub fn unchecked(g: &Graph, sets: impl IntoIterator<Item = VertexSet>) -> Self {
        let sets: BTreeSet<VertexSet> = sets.into_iter().collect();
        let all = g.all_edges();
        let extended = (1..=g.all_vertices())
            .filter(|&w| {
                g.is_connected_set(w)
                    && g
                        .components(all, g.complement(w))
                        .iter()
                        .all(|z| sets.contains(z))
            })
            .collect();
        DegeneracySubset {
            graph: g.clone(),
            sets: sets.into_iter().collect(),
            extended,
        }
    }

    pub fn empty(g: &Graph) -> Result<Self> {
        Self::validate(g, [])
    }

    /// The maximal degeneracy subset, all of BCon.
    pub fn maximal(g: &Graph) -> Result<Self> {
        Self::validate(g, g.biconnected_subsets()?)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Members, ascending.
    pub fn sets(&self) -> &[VertexSet] {
        &self.sets
    }

    pub fn contains(&self, w: VertexSet) -> bool {
        self.sets.binary_search(&w).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// The extended subset `D̂`, ascending.
    pub fn extended(&self) -> &[VertexSet] {
        &self.extended
    }

    pub fn in_extended(&self, w: VertexSet) -> bool {
        self.extended.binary_search(&w).is_ok()
    }

    /// Every component of the spanning subgraph `es` lies in `D̂`.
    pub fn is_admissible(&self, es: EdgeSet) -> bool {
        let g = &self.graph;
        g.components(es, g.all_vertices())
            .into_iter()
            .all(|c| self.in_extended(c))
    }

    /// Admissible spanning forests contained in `es`, ascending.
    pub fn admissible_forests_within(&self, es: EdgeSet) -> Vec<EdgeSet> {
        self.graph
            .forests_within(es)
            .into_iter()
            .filter(|&f| self.is_admissible(f))
            .collect()
    }

    /// `c_D(G)`, the number of admissible spanning forests inside `G`.
    pub fn complexity(&self, es: EdgeSet) -> Result<u64> {
        self.ensure_admissible(es)?;
        Ok(self.admissible_forests_within(es).len() as u64)
    }

    pub fn ensure_admissible(&self, es: EdgeSet) -> Result<()> {
        if self.is_admissible(es) {
            Ok(())
        } else {
            Err(Error::NotAdmissible(format!(
                "spanning subgraph {es:#x} has a component outside the extended degeneracy"
            )))
        }
    }

    /// Minimal admissible spanning subgraphs, ascending. They are all forests.
    pub fn minimal_admissible(&self) -> Vec<EdgeSet> {
        let forests = self.admissible_forests_within(self.graph.all_edges());
        forests
            .iter()
            .copied()
            .filter(|&f| !forests.iter().any(|&h| h != f && h & !f == 0))
            .collect()
    }

    /// `c_D(G)` by deletion and contraction.
    pub fn complexity_recursive(&self, es: EdgeSet) -> Result<u64> {
        self.ensure_admissible(es)?;
        Ok(self.dc_rec(es & !self.graph.loops()))
    }

    fn dc_rec(&self, es: EdgeSet) -> u64 {
        let g = &self.graph;
        let es = es & !g.loops();
        let Some(e) = bits(es).find(|&e| self.is_admissible(es & !singleton(e))) else {
            return 1;
        };
        let m = g.contract(singleton(e));
        let pushed = self
            .pushforward(&m)
            .expect("push-forward of a degeneracy subset");
        let rest = es & !singleton(e);
        self.dc_rec(rest) + pushed.dc_rec(m.pull_edges(rest))
    }

    /// Both sides of the deletion/contraction identity at the edge `e` of `es`.
    pub fn deletion_contraction_check(&self, es: EdgeSet, e: usize) -> Result<DeletionContraction> {
        let g = &self.graph;
        if es >> e & 1 == 0 {
            return Err(Error::Precondition(format!("edge {e} is not in the subgraph")));
        }
        if g.is_loop(e) {
            return Err(Error::Precondition(format!("edge {e} is a loop")));
        }
        let rest = es & !singleton(e);
        if !self.is_admissible(rest) {
            return Err(Error::Precondition(format!(
                "removing edge {e} leaves a non-admissible subgraph"
            )));
        }
        let whole = self.complexity(es)?;
        let deleted = self.complexity(rest)?;
        let m = g.contract(singleton(e));
        let pushed = self.pushforward(&m)?;
        let contracted = pushed.complexity(m.pull_edges(rest))?;
        Ok(DeletionContraction {
            whole,
            deleted,
            contracted,
        })
    }

    /// `f_*D = {Z : f_V^{-1}(Z) ∈ D}`.
    pub fn pushforward(&self, m: &GraphMorphism) -> Result<Self> {
        if m.source != self.graph {
            return Err(Error::Mismatch("morphism source differs".into()));
        }
        let sets: Vec<VertexSet> = m
            .target
            .biconnected_subsets()?
            .into_iter()
            .filter(|&z| self.contains(m.preimage(z)))
            .collect();
        Self::validate(&m.target, sets)
    }

    /// `D(G) = {Z ∈ BCon(G) : Z ∈ D̂}` on the connected subgraph with vertex set
    /// `w` and edges `es` (restricted to `w`). Returns the reindexed subgraph too.
    pub fn restrict(&self, w: VertexSet, es: EdgeSet) -> Result<(Self, Graph, Vec<usize>)> {
        let g = &self.graph;
        if !g.is_connected_in(es, w) || !self.in_extended(w) {
            return Err(Error::NotAdmissible(format!(
                "subgraph on {w:#x} is not a connected admissible subgraph"
            )));
        }
        let (h, verts, _) = g.subgraph(w, es);
        let lift = |z: VertexSet| bits(z).fold(0, |m, i| m | singleton(verts[i]));
        let sets: Vec<VertexSet> = if h.vertex_count() == 1 {
            Vec::new()
        } else {
            h.biconnected_subsets()?
                .into_iter()
                .filter(|&z| self.in_extended(lift(z)))
                .collect()
        };
        Ok((Self::validate(&h, sets)?, h, verts))
    }

    /// Number of members, for reports.
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    /// Admissible spanning subgraphs, ascending.
    pub fn admissible_subgraphs(&self) -> Vec<EdgeSet> {
        let all = self.graph.all_edges();
        (0..=all).filter(|&es| self.is_admissible(es)).collect()
    }
}

/// The three complexities in the deletion/contraction identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeletionContraction {
    pub whole: u64,
    pub deleted: u64,
    pub contracted: u64,
}

impl DeletionContraction {
    pub fn holds(&self) -> bool {
        self.whole == self.deleted + self.contracted
    }
}
