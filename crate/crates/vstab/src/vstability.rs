//! V-stability conditions and numerical polarizations.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::degeneracy::DegeneracySubset;
use crate::error::{Error, Result, StabilityViolation};
use crate::graph::{bits, singleton, EdgeSet, Graph, GraphMorphism, VertexSet};
use crate::{Int, Rational};

/// Validated V-stability condition of a fixed degree on a connected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VStability {
    graph: Graph,
    degree: Int,
    values: BTreeMap<VertexSet, Int>,
    degeneracy: DegeneracySubset,
}

fn violation(v: StabilityViolation) -> Error {
    Error::Stability(v)
}

impl VStability {
    /// Checks the sum axiom on every biconnected subset and the triple axiom on
    /// every biconnected three-part partition.
    pub fn validate(g: &Graph, degree: Int, values: BTreeMap<VertexSet, Int>) -> Result<Self> {
        g.ensure_connected()?;
        g.ensure_enumerable()?;
        let bcon = g.biconnected_subsets()?;
        for &w in values.keys() {
            if !g.is_biconnected(w) {
                return Err(violation(StabilityViolation::NotBiconnected(w)));
            }
        }
        if let Some(&w) = bcon.iter().find(|w| !values.contains_key(w)) {
            return Err(violation(StabilityViolation::Missing(w)));
        }
        let all = g.all_edges();
        let mut degenerate = Vec::new();
        for &w in &bcon {
            let wc = g.complement(w);
            let excess = values[&w] + values[&wc] + g.cut(all, w) as Int - degree;
            if excess != 0 && excess != 1 {
                return Err(violation(StabilityViolation::Sum { w, excess }));
            }
            if excess == 0 {
                degenerate.push(w);
            }
        }
        let is_deg = |w: VertexSet| degenerate.binary_search(&w).is_ok();
        for (i, &a) in bcon.iter().enumerate() {
            for &b in &bcon[i + 1..] {
                let c = g.complement(a | b);
                if a & b != 0 || c == 0 || c <= b || !g.is_biconnected(c) {
                    continue;
                }
                let parts = [a, b, c];
                let count = parts.iter().filter(|&&w| is_deg(w)).count();
                if count == 2 {
                    return Err(violation(StabilityViolation::TwoOfThree(parts)));
                }
                let excess = values[&a] + values[&b] + values[&c]
                    + (g.val(all, a, b) + g.val(all, a, c) + g.val(all, b, c)) as Int
                    - degree;
                let ok = match count {
                    0 => excess == 1 || excess == 2,
                    1 => excess == 1,
                    _ => excess == 0,
                };
                if !ok {
                    return Err(violation(StabilityViolation::Triple { parts, excess }));
                }
            }
        }
        let degeneracy = DegeneracySubset::validate(g, degenerate)?;
        Ok(VStability {
            graph: g.clone(),
            degree,
            values,
            degeneracy,
        })
    }

    /// Fills in missing complements through the sum axiom, declaring each
    /// inferred pair degenerate or not, then validates.
    pub fn validate_inferring(
        g: &Graph,
        degree: Int,
        mut values: BTreeMap<VertexSet, Int>,
        degenerate: bool,
    ) -> Result<Self> {
        g.ensure_connected()?;
        let all = g.all_edges();
        let given: Vec<(VertexSet, Int)> = values.iter().map(|(&w, &v)| (w, v)).collect();
        for (w, v) in given {
            let excess = if degenerate { 0 } else { 1 };
            values
                .entry(g.complement(w))
                .or_insert(degree + excess - v - g.cut(all, w) as Int);
        }
        Self::validate(g, degree, values)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn degree(&self) -> Int {
        self.degree
    }

    /// Values on BCon, ascending by subset.
    pub fn values(&self) -> &BTreeMap<VertexSet, Int> {
        &self.values
    }

    pub fn value(&self, w: VertexSet) -> Option<Int> {
        self.values.get(&w).copied()
    }

    pub fn degeneracy(&self) -> &DegeneracySubset {
        &self.degeneracy
    }

    pub fn is_degenerate(&self, w: VertexSet) -> bool {
        self.degeneracy.contains(w)
    }

    pub fn is_general(&self) -> bool {
        self.degeneracy.is_empty()
    }

    /// The extended V-function, defined on every vertex subset.
    pub fn extended_value(&self, w: VertexSet) -> Int {
        let g = &self.graph;
        let all = g.all_edges();
        if w == 0 {
            return 0;
        }
        let comps = g.components(all, w);
        if comps.len() > 1 {
            return comps.into_iter().map(|c| self.extended_value(c)).sum();
        }
        if let Some(v) = self.value(w) {
            return v;
        }
        let mut n = self.degree - g.cut(all, w) as Int;
        for z in g.components(all, g.complement(w)) {
            n -= self.values[&z];
            if !self.is_degenerate(z) {
                n += 1;
            }
        }
        n
    }

    /// `n(φ)_W = ⌈φ_W − val(W)/2⌉`.
    pub fn from_polarization(phi: &Polarization) -> Result<Self> {
        let g = &phi.graph;
        let d = phi.degree();
        if !d.is_integer() {
            return Err(Error::Mismatch(format!("polarization degree {d} is not integral")));
        }
        let values = g
            .biconnected_subsets()?
            .into_iter()
            .map(|w| (w, phi.shifted(w).ceil().to_integer()))
            .collect();
        Self::validate(g, d.to_integer(), values)
    }

    /// `f_*(n)_Z = n_{f_V^{-1}(Z)}`.
    pub fn pushforward(&self, m: &GraphMorphism) -> Result<Self> {
        if m.source != self.graph {
            return Err(Error::Mismatch("morphism source differs".into()));
        }
        let values = m
            .target
            .biconnected_subsets()?
            .into_iter()
            .map(|z| (z, self.values[&m.preimage(z)]))
            .collect();
        Self::validate(&m.target, self.degree, values)
    }

    /// Restriction to the connected admissible subgraph `Γ[w] ∖ S`, where `es`
    /// lists its kept edges. Returns the stability on the reindexed subgraph and
    /// the ambient index of each of its vertices.
    pub fn restrict(&self, w: VertexSet, es: EdgeSet) -> Result<(Self, Vec<usize>)> {
        let g = &self.graph;
        let kept = g.edges_within(es, w);
        if !g.is_connected_in(kept, w) || !self.degeneracy.in_extended(w) {
            return Err(Error::NotAdmissible(format!(
                "subgraph on {w:#x} is not connected and admissible"
            )));
        }
        let removed = g.edges_within(g.all_edges(), w) & !kept;
        let (h, verts, _) = g.subgraph(w, kept);
        let lift = |z: VertexSet| bits(z).fold(0, |m, i| m | singleton(verts[i]));
        let degree = self.extended_value(w) - g.interior_edges(removed, w) as Int;
        let values = if h.vertex_count() == 1 {
            BTreeMap::new()
        } else {
            h.biconnected_subsets()?
                .into_iter()
                .map(|z| {
                    let lz = lift(z);
                    (z, self.extended_value(lz) - g.interior_edges(removed, lz) as Int)
                })
                .collect()
        };
        Ok((Self::validate(&h, degree, values)?, verts))
    }

    /// `self ≥ other`: pointwise comparison. When it holds, the two agree off
    /// `D(other)` and differ by at most one on it; a breach of that is an error.
    pub fn geq(&self, other: &Self) -> Result<bool> {
        if self.graph != other.graph || self.degree != other.degree {
            return Err(Error::Mismatch("stabilities on different graphs or degrees".into()));
        }
        let ge = self.values.iter().all(|(w, &v)| v >= other.values[w]);
        if ge {
            for (&w, &v) in &self.values {
                let diff = v - other.values[&w];
                let allowed = if other.is_degenerate(w) { diff <= 1 } else { diff == 0 };
                if !allowed {
                    return Err(Error::Mismatch(format!(
                        "comparable stabilities differ by {diff} at {w:#x}"
                    )));
                }
            }
        }
        Ok(ge)
    }

    /// `a ≤ b`.
    pub fn leq(a: &Self, b: &Self) -> Result<bool> {
        b.geq(a)
    }
}

/// Rational numerical polarization on the vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarization {
    graph: Graph,
    values: Vec<Rational>,
}

impl Polarization {
    pub fn new(graph: &Graph, values: Vec<Rational>) -> Result<Self> {
        if values.len() != graph.vertex_count() {
            return Err(Error::Mismatch("one value per vertex required".into()));
        }
        Ok(Polarization {
            graph: graph.clone(),
            values,
        })
    }

    pub fn from_integers(graph: &Graph, values: &[Int]) -> Result<Self> {
        Self::new(graph, values.iter().map(|&v| Rational::from_integer(v)).collect())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn degree(&self) -> Rational {
        self.values.iter().copied().sum()
    }

    /// `φ_W`.
    pub fn on(&self, w: VertexSet) -> Rational {
        bits(w).map(|v| self.values[v]).fold(Rational::zero(), |a, b| a + b)
    }

    /// `φ_W − val(W)/2`.
    pub fn shifted(&self, w: VertexSet) -> Rational {
        let val = self.graph.cut(self.graph.all_edges(), w) as Int;
        self.on(w) - Rational::new(val, 2)
    }

    /// Off every wall `φ_W − val(W)/2 ∈ ℤ`.
    pub fn is_general(&self) -> Result<bool> {
        Ok(self
            .graph
            .biconnected_subsets()?
            .into_iter()
            .all(|w| !self.shifted(w).is_integer()))
    }

    /// `f_*φ` summing over fibres.
    pub fn pushforward(&self, m: &GraphMorphism) -> Result<Self> {
        if m.source != self.graph {
            return Err(Error::Mismatch("morphism source differs".into()));
        }
        let mut values = vec![Rational::zero(); m.target.vertex_count()];
        for (v, &t) in m.vmap.iter().enumerate() {
            values[t] += self.values[v];
        }
        Self::new(&m.target, values)
    }
}
