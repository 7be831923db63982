//! Nodal curves seen through their dual graphs, and the dictionary between
//! curve-side and graph-side stability data.

use std::collections::BTreeMap;

use crate::error::{Error, Result, StabilityViolation};
use crate::graph::{bits, Graph, VertexSet};
use crate::vstability::{Polarization, VStability};
use crate::{Int, Rational};

/// Dual graph together with the geometric genus of each component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveModel {
    graph: Graph,
}

impl CurveModel {
    pub fn new(graph: Graph) -> Result<Self> {
        graph.ensure_connected()?;
        Ok(CurveModel { graph })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// `g(X) = b1(Γ) + Σ g_v`.
    pub fn arithmetic_genus(&self) -> Int {
        self.subcurve_genus(self.graph.all_vertices())
    }

    /// `g(Y)` of the subcurve on the connected vertex set `w`.
    pub fn subcurve_genus(&self, w: VertexSet) -> Int {
        let g = &self.graph;
        g.b1_induced(w) as Int + bits(w).map(|v| g.genera()[v] as Int).sum::<Int>()
    }

    /// `deg_Y(ω_X) = 2g(Y) − 2 + val(W)`.
    pub fn canonical_degree(&self, w: VertexSet) -> Int {
        let g = &self.graph;
        2 * self.subcurve_genus(w) - 2 + g.cut(g.all_edges(), w) as Int
    }

    /// Graph degree for characteristic `chi`.
    pub fn degree_for(&self, chi: Int) -> Int {
        chi + self.arithmetic_genus() - 1
    }

    /// Checks the curve-side axioms directly: `s_Y + s_{Y^c} − χ ∈ {0,1}` and the
    /// triple condition on `Σ s_{Y_i} − χ`.
    pub fn validate_curve(&self, s: &BTreeMap<VertexSet, Int>, chi: Int) -> Result<()> {
        let g = &self.graph;
        let bcon = g.biconnected_subsets()?;
        if let Some(&w) = bcon.iter().find(|w| !s.contains_key(w)) {
            return Err(Error::Stability(StabilityViolation::Missing(w)));
        }
        if let Some(&w) = s.keys().find(|&&w| !g.is_biconnected(w)) {
            return Err(Error::Stability(StabilityViolation::NotBiconnected(w)));
        }
        let excess = |w: VertexSet| s[&w] + s[&g.complement(w)] - chi;
        for &w in &bcon {
            let e = excess(w);
            if e != 0 && e != 1 {
                return Err(Error::Stability(StabilityViolation::Sum { w, excess: e }));
            }
        }
        for (i, &a) in bcon.iter().enumerate() {
            for &b in &bcon[i + 1..] {
                let c = g.complement(a | b);
                if a & b != 0 || c <= b || !g.is_biconnected(c) {
                    continue;
                }
                let parts = [a, b, c];
                let count = parts.iter().filter(|&&w| excess(w) == 0).count();
                if count == 2 {
                    return Err(Error::Stability(StabilityViolation::TwoOfThree(parts)));
                }
                let e = s[&a] + s[&b] + s[&c] - chi;
                let ok = match count {
                    0 => e == 1 || e == 2,
                    1 => e == 1,
                    _ => e == 0,
                };
                if !ok {
                    return Err(Error::Stability(StabilityViolation::Triple { parts, excess: e }));
                }
            }
        }
        Ok(())
    }

    /// `n_W = s_W + g(Y) − 1` in degree `χ + g(X) − 1`.
    pub fn curve_to_graph(&self, s: &BTreeMap<VertexSet, Int>, chi: Int) -> Result<VStability> {
        let values = s
            .iter()
            .map(|(&w, &v)| (w, v + self.subcurve_genus(w) - 1))
            .collect();
        VStability::validate(&self.graph, self.degree_for(chi), values)
    }

    /// Inverse of [`CurveModel::curve_to_graph`]: returns `(s, χ)`.
    pub fn graph_to_curve(&self, n: &VStability) -> (BTreeMap<VertexSet, Int>, Int) {
        let chi = n.degree() - self.arithmetic_genus() + 1;
        let s = n
            .values()
            .iter()
            .map(|(&w, &v)| (w, v - self.subcurve_genus(w) + 1))
            .collect();
        (s, chi)
    }

    /// `s(ψ)_Y = ⌈ψ_Y⌉` for a curve polarization given per component.
    pub fn curve_from_polarization(&self, psi: &[Rational]) -> Result<BTreeMap<VertexSet, Int>> {
        Ok(self
            .graph
            .biconnected_subsets()?
            .into_iter()
            .map(|w| {
                let total: Rational = bits(w).map(|v| psi[v]).sum();
                (w, total.ceil().to_integer())
            })
            .collect())
    }

    /// `φ_v = ψ_v + deg_{X_v}(ω_X)/2`.
    pub fn polarization_to_graph(&self, psi: &[Rational]) -> Result<Polarization> {
        let values = (0..self.graph.vertex_count())
            .map(|v| psi[v] + Rational::new(self.canonical_degree(1 << v), 2))
            .collect();
        Polarization::new(&self.graph, values)
    }
}
