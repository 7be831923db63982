//! Semistable, polystable and stable sets of a V-stability condition.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::divisor::{self, degree_on};
use crate::error::{Error, Result};
use crate::graph::{bits, popcount, singleton, EdgeSet, Graph, GraphMorphism, VertexSet};
use crate::orbit::{
    normalize_per_component, pushforward_orbit, upper_closure, OrbitElement, OrderedPartition,
    UpperSet,
};
use crate::ptbd::ForestFunction;
use crate::vstability::VStability;
use crate::Int;

/// Default cap on the number of candidate divisors the oracle may inspect.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// `D_Z + e_S(Z) ≥ n_Z` for every biconnected `Z`, at the right degree.
pub fn is_semistable(n: &VStability, x: &OrbitElement) -> bool {
    let g = n.graph();
    if x.divisor.len() != g.vertex_count() || x.ambient_degree(g) != n.degree() {
        return false;
    }
    let s = x.removed(g);
    n.values()
        .iter()
        .all(|(&z, &v)| degree_on(&x.divisor, z) + g.interior_edges(s, z) as Int >= v)
}

/// Polystability: equality at a degenerate `Z` forces the whole cut of `Z` out of `G`.
pub fn is_polystable(n: &VStability, x: &OrbitElement) -> bool {
    let g = n.graph();
    is_semistable(n, x)
        && n.degeneracy().sets().iter().all(|&z| {
            let lhs = degree_on(&x.divisor, z) + g.interior_edges(x.removed(g), z) as Int;
            lhs != n.values()[&z] || g.cut(x.subgraph, z) == 0
        })
}

/// Stability: strict inequality at every degenerate `Z`.
pub fn is_stable(n: &VStability, x: &OrbitElement) -> bool {
    let g = n.graph();
    is_semistable(n, x)
        && n.degeneracy().sets().iter().all(|&z| {
            degree_on(&x.divisor, z) + g.interior_edges(x.removed(g), z) as Int > n.values()[&z]
        })
}

/// Per-vertex box `[lo, lo + val_G(v)]` with `lo = n_{v} − e_S(v)`.
fn vertex_box(n: &VStability, es: EdgeSet) -> Vec<(Int, Int)> {
    let g = n.graph();
    let s = g.all_edges() & !es;
    (0..g.vertex_count())
        .map(|v| {
            let w = singleton(v);
            let lo = n.extended_value(w) - g.interior_edges(s, w) as Int;
            (lo, lo + g.cut(es, w) as Int)
        })
        .collect()
}

/// Enumeration of `P_n` straight from its inequalities.
pub fn semistable_oracle(n: &VStability) -> Result<UpperSet> {
    semistable_oracle_with_budget(n, DEFAULT_BUDGET)
}

pub fn semistable_oracle_with_budget(n: &VStability, budget: u64) -> Result<UpperSet> {
    let g = n.graph();
    if g.edge_count() > 24 {
        return Err(Error::TooLarge {
            what: "edge count for subgraph enumeration",
            actual: g.edge_count(),
            limit: 24,
        });
    }
    let subgraphs: Vec<EdgeSet> = (0..=g.all_edges()).collect();
    let volume: u128 = subgraphs
        .iter()
        .map(|&es| {
            vertex_box(n, es)
                .iter()
                .map(|(lo, hi)| (hi - lo + 1) as u128)
                .product::<u128>()
        })
        .sum();
    if volume > budget as u128 {
        return Err(Error::Budget(budget));
    }
    let found: Vec<Vec<OrbitElement>> = subgraphs
        .par_iter()
        .map(|&es| semistable_on(n, es))
        .collect();
    let elements: BTreeSet<OrbitElement> = found.into_iter().flatten().collect();
    Ok(UpperSet::from_raw(g.clone(), n.degree(), elements))
}

/// `P_n(G)` for the spanning subgraph `es`, by box enumeration.
pub fn semistable_on(n: &VStability, es: EdgeSet) -> Vec<OrbitElement> {
    let g = n.graph();
    let bx = vertex_box(n, es);
    let target = n.degree() - popcount(g.all_edges() & !es) as Int;
    let mut out = Vec::new();
    let mut d = vec![0; g.vertex_count()];
    let suffix_lo: Vec<Int> = (0..=bx.len()).map(|i| bx[i..].iter().map(|b| b.0).sum()).collect();
    let suffix_hi: Vec<Int> = (0..=bx.len()).map(|i| bx[i..].iter().map(|b| b.1).sum()).collect();
    fn rec(
        n: &VStability,
        es: EdgeSet,
        bx: &[(Int, Int)],
        lo: &[Int],
        hi: &[Int],
        i: usize,
        left: Int,
        d: &mut Vec<Int>,
        out: &mut Vec<OrbitElement>,
    ) {
        if i == bx.len() {
            let x = OrbitElement::new(es, d.clone());
            if left == 0 && is_semistable(n, &x) {
                out.push(x);
            }
            return;
        }
        for val in bx[i].0..=bx[i].1 {
            let rest = left - val;
            if rest < lo[i + 1] || rest > hi[i + 1] {
                continue;
            }
            d[i] = val;
            rec(n, es, bx, lo, hi, i + 1, rest, d, out);
        }
    }
    rec(n, es, &bx, &suffix_lo, &suffix_hi, 0, target, &mut d, &mut out);
    out
}

/// `P_n` as the BD-set of the forest function `I_n`.
pub fn semistable_fast(n: &VStability) -> Result<UpperSet> {
    ForestFunction::of_stability(n)?.bd_set()
}

pub fn polystable_set(n: &VStability, p: &UpperSet) -> Vec<OrbitElement> {
    p.elements()
        .iter()
        .filter(|x| is_polystable(n, x))
        .cloned()
        .collect()
}

pub fn stable_set(n: &VStability, p: &UpperSet) -> Vec<OrbitElement> {
    p.elements()
        .iter()
        .filter(|x| is_stable(n, x))
        .cloned()
        .collect()
}

/// `n_W = min_{(Γ∖S, D) ∈ P} D_W + e_S(W)` over biconnected `W`.
pub fn reconstruct_values(p: &UpperSet) -> Result<Vec<(VertexSet, Int)>> {
    let g = p.graph();
    let bcon = g.biconnected_subsets()?;
    bcon.into_iter()
        .map(|w| {
            p.elements()
                .iter()
                .map(|x| degree_on(&x.divisor, w) + g.interior_edges(x.removed(g), w) as Int)
                .min()
                .map(|m| (w, m))
                .ok_or_else(|| Error::Precondition("empty semistable set".into()))
        })
        .collect()
}

/// Ordered partition linking two equivalent semistable divisors on `es`:
/// `d1 − D(O_G(V_•)) = d2 − D(O_G(V̄_•))`, with the common value in `P_n`.
pub fn equivalence_partition(
    n: &VStability,
    es: EdgeSet,
    d1: &[Int],
    d2: &[Int],
) -> Result<OrderedPartition> {
    let g = n.graph();
    for d in [d1, d2] {
        if !is_semistable(n, &OrbitElement::new(es, d.to_vec())) {
            return Err(Error::Precondition(format!(
                "{} is not semistable",
                OrbitElement::new(es, d.to_vec())
            )));
        }
    }
    let diff = divisor::sub(d1, d2);
    let f = match divisor::is_principal(g, es, &diff) {
        Ok(Some(f)) => f,
        _ => {
            return Err(Error::Precondition(
                "divisors are not linearly equivalent".into(),
            ))
        }
    };
    let mut f = f;
    normalize_per_component(g, es, &mut f);
    let levels: BTreeSet<Int> = f.iter().copied().collect();
    let mut blocks = Vec::new();
    for &level in levels.iter().rev() {
        let set = (0..g.vertex_count())
            .filter(|&v| f[v] == level)
            .fold(0, |m, v| m | singleton(v));
        blocks.extend(g.components(es, set));
    }
    let p = OrderedPartition::new(g, blocks)?;
    let o = p.orientation(g, es);
    let down1 = divisor::sub(d1, &o.outgoing_divisor(g));
    let down2 = divisor::sub(d2, &o.reversed(g).outgoing_divisor(g));
    if down1 != down2 {
        return Err(Error::Mismatch("level partition does not link the divisors".into()));
    }
    let x = OrbitElement::new(es, d1.to_vec());
    if !degeneration_check(n, &x, &p)? {
        return Err(Error::Mismatch(
            "level partition degenerates outside the semistable set".into(),
        ));
    }
    Ok(p)
}

/// Predicts whether degenerating `x` along `O_G(W_•)` stays semistable, and
/// cross-checks the prediction against direct membership.
pub fn degeneration_check(n: &VStability, x: &OrbitElement, w: &OrderedPartition) -> Result<bool> {
    let g = n.graph();
    for &b in &w.blocks {
        if !g.is_connected_in(x.subgraph, b) {
            return Err(Error::Precondition(format!("block {b:#x} is disconnected")));
        }
    }
    let s = x.removed(g);
    let mut before = 0;
    let mut predicted = true;
    for &b in &w.blocks {
        let lhs = degree_on(&x.divisor, b) + g.interior_edges(s, b) as Int;
        let rhs = n.extended_value(b) + g.val(x.subgraph, b, before) as Int;
        if !n.degeneracy().in_extended(b) || lhs != rhs {
            predicted = false;
        }
        before |= b;
    }
    let o = w.orientation(g, x.subgraph);
    let down = o.apply(g, x).expect("partition orientation lies in G");
    if predicted != is_semistable(n, &down) {
        return Err(Error::Mismatch(format!(
            "degeneration criterion disagrees with membership at {x}"
        )));
    }
    Ok(predicted)
}

/// `f_*(P_n) ⊆ P_{f_*n}`.
pub fn pushforward_inclusion_check(m: &GraphMorphism, n: &VStability, p: &UpperSet) -> Result<bool> {
    let pushed = n.pushforward(m)?;
    for x in p.elements() {
        if !is_semistable(&pushed, &pushforward_orbit(m, x)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `ι_G^{-1}(P_n) = ∏ P_{n(G_i)}` for the admissible spanning subgraph `es`.
pub fn restriction_product_check(n: &VStability, es: EdgeSet, p: &UpperSet) -> Result<bool> {
    let g = n.graph();
    n.degeneracy().ensure_admissible(es)?;
    let lhs: BTreeSet<OrbitElement> = p
        .elements()
        .iter()
        .filter(|x| x.subgraph & !es == 0)
        .cloned()
        .collect();
    let mut product: Vec<OrbitElement> = vec![OrbitElement::new(0, vec![0; g.vertex_count()])];
    for comp in g.components(es, g.all_vertices()) {
        let (ni, verts) = n.restrict(comp, es)?;
        let (_, _, edge_ids) = g.subgraph(comp, es);
        let local = semistable_oracle(&ni)?;
        let mut next = Vec::new();
        for base in &product {
            for y in local.elements() {
                let mut x = base.clone();
                for e in bits(y.subgraph) {
                    x.subgraph |= singleton(edge_ids[e]);
                }
                for (i, &v) in verts.iter().enumerate() {
                    x.divisor[v] = y.divisor[i];
                }
                next.push(x);
            }
        }
        product = next;
    }
    let rhs: BTreeSet<OrbitElement> = product.into_iter().collect();
    Ok(lhs == rhs)
}

/// Upper closure of a single element; used by the tree model.
pub fn up_set(g: &Graph, degree: Int, x: &OrbitElement) -> Result<UpperSet> {
    upper_closure(g, degree, std::slice::from_ref(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vstability::Polarization;
    use crate::Rational;
    use std::collections::BTreeMap;

    fn v2(d: Int, a: Int, b: Int) -> VStability {
        VStability::validate(&Graph::vine(2), d, BTreeMap::from([(1, a), (2, b)])).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let p = semistable_oracle(&v2(1, 0, 0)).unwrap();
        assert_eq!(p.len(), 4);
        let p = semistable_oracle(&v2(0, -1, -1)).unwrap();
        assert_eq!(p.len(), 8);
        assert!(p.contains(&OrbitElement::new(0, vec![-1, -1])));
        let c3 = Graph::cycle(3);
        let n = VStability::from_polarization(&Polarization::from_integers(&c3, &[0, 0, 0]).unwrap())
            .unwrap();
        let p = semistable_oracle(&n).unwrap();
        let mut tops = p.maximal_elements();
        tops.sort();
        assert_eq!(tops.len(), 7);
        assert!(tops.contains(&vec![0, 0, 0]) && tops.contains(&vec![-1, 0, 1]));
        assert_eq!(semistable_fast(&n).unwrap(), p);
    }

    #[test]
    fn single_vertex_is_unconstrained() {
        let g = Graph::new(1, vec![(0, 0), (0, 0)]).unwrap();
        let n = VStability::validate(&g, 3, BTreeMap::new()).unwrap();
        let p = semistable_oracle(&n).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(semistable_fast(&n).unwrap(), p);
    }

    #[test]
    fn poly_and_stable() {
        let n = v2(0, -1, -1);
        let p = semistable_oracle(&n).unwrap();
        let poly = polystable_set(&n, &p);
        let stable = stable_set(&n, &p);
        let bottom = OrbitElement::new(0, vec![-1, -1]);
        assert!(poly.contains(&bottom) && !stable.contains(&bottom));
        assert!(stable.iter().all(|x| poly.contains(x)));
        let general = v2(1, 0, 0);
        let p = semistable_oracle(&general).unwrap();
        assert_eq!(stable_set(&general, &p).len(), p.len());
        assert_eq!(polystable_set(&general, &p).len(), p.len());
    }

    #[test]
    fn equivalence_examples() {
        let n = v2(0, -1, -1);
        let p = equivalence_partition(&n, 0b11, &[-1, 1], &[1, -1]).unwrap();
        assert_eq!(p.blocks, vec![1, 2]);
        let p = equivalence_partition(&n, 0b11, &[0, 0], &[0, 0]).unwrap();
        assert_eq!(p.blocks, vec![3]);
        let g = v2(1, 0, 0);
        assert!(matches!(
            equivalence_partition(&g, 0b11, &[1, 0], &[0, 1]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn degeneration_examples() {
        let n = v2(0, -1, -1);
        let v2g = Graph::vine(2);
        let split = OrderedPartition::new(&v2g, vec![1, 2]).unwrap();
        let x = OrbitElement::new(0b11, vec![0, 0]);
        assert_eq!(degeneration_check(&n, &x, &split), Ok(false));
        let x = OrbitElement::new(0b11, vec![-1, 1]);
        assert_eq!(degeneration_check(&n, &x, &split), Ok(true));
        let triv = OrderedPartition::trivial(&v2g);
        assert_eq!(degeneration_check(&n, &x, &triv), Ok(true));
    }

    #[test]
    fn functoriality_examples() {
        let c3 = Graph::cycle(3);
        let n = VStability::from_polarization(&Polarization::from_integers(&c3, &[0, 0, 0]).unwrap())
            .unwrap();
        let p = semistable_oracle(&n).unwrap();
        assert!(pushforward_inclusion_check(&c3.contract(1), &n, &p).unwrap());
        assert!(pushforward_inclusion_check(&GraphMorphism::identity(&c3), &n, &p).unwrap());
        let m = v2(0, -1, -1);
        let q = semistable_oracle(&m).unwrap();
        assert!(restriction_product_check(&m, 0, &q).unwrap());
        assert!(restriction_product_check(&m, 0b11, &q).unwrap());
        let half = Rational::new(1, 2);
        let phi = Polarization::new(&c3, vec![half, half, Rational::from_integer(0)]).unwrap();
        let general = VStability::from_polarization(&phi).unwrap();
        let r = semistable_oracle(&general).unwrap();
        assert!(restriction_product_check(&general, 0b011, &r).unwrap());
    }
}
