//! Closed-form families: cycles, trees, vines, irreducible and maximally
//! degenerate curves.
//!
//! Cycle conventions: `C_n` has vertices `0..n` and edge `e_i` joins `i` and
//! `i + 1 mod n`. Edge labels double as the indices of ordered partitions, and
//! the arc `V_ab` is the vertex run `a+1, …, b` (mod `n`) cut out by `e_a`, `e_b`.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::CurveModel;
use crate::divisor::{self, Divisor};
use crate::error::{Error, Result};
use crate::graph::{bits, popcount, set_to_vec, singleton, EdgeSet, Graph, VertexSet};
use crate::orbit::{poset_leq, upper_closure, OrbitElement, UpperSet};
use crate::semistable::semistable_fast;
use crate::vstability::{Polarization, VStability};
use crate::{Int, Rational};

/// Largest cycle length accepted by [`classify_cycle`].
pub const MAX_CYCLE: usize = 6;

/// `(n, I_•, f)`: an ordered partition of the edge labels and a vertex function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicStabilityDatum {
    pub n: usize,
    /// Blocks as bitmasks over edge labels.
    pub partition: Vec<u64>,
    pub f: Vec<Int>,
}

impl CyclicStabilityDatum {
    pub fn new(n: usize, partition: Vec<u64>, f: Vec<Int>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGraph("cycles need at least two vertices".into()));
        }
        let mut seen = 0;
        for &b in &partition {
            if b == 0 || b & seen != 0 || b >> n != 0 {
                return Err(Error::Mismatch(format!("bad block {b:#b}")));
            }
            seen |= b;
        }
        if seen != (1 << n) - 1 || f.len() != n {
            return Err(Error::Mismatch("partition or f does not match the cycle".into()));
        }
        Ok(CyclicStabilityDatum { n, partition, f })
    }

    fn position(&self, label: usize) -> usize {
        self.partition
            .iter()
            .position(|&b| b >> label & 1 == 1)
            .expect("partition covers every label")
    }

    pub fn degree(&self) -> Int {
        self.f.iter().sum()
    }

    /// `p(i)` for every label.
    pub fn positions(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.position(i)).collect()
    }
}

/// `V_ab` for labels `a ≠ b`.
pub fn arc(n: usize, a: usize, b: usize) -> VertexSet {
    let mut w = 0;
    let mut v = (a + 1) % n;
    loop {
        w |= singleton(v);
        if v == b {
            return w;
        }
        v = (v + 1) % n;
    }
}

fn arc_values(n: usize, value: impl Fn(usize, usize) -> Int) -> BTreeMap<VertexSet, Int> {
    let mut out = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            if a != b {
                out.insert(arc(n, a, b), value(a, b));
            }
        }
    }
    out
}

/// `n(I_•, f)_{V_ab} = f(V_ab) − 1` when `a ≤_I b`, else `f(V_ab)`.
pub fn cycle_vstability(datum: &CyclicStabilityDatum) -> Result<VStability> {
    let n = datum.n;
    let p = datum.positions();
    let values = arc_values(n, |a, b| {
        let fv = divisor::degree_on(&datum.f, arc(n, a, b));
        if p[a] <= p[b] {
            fv - 1
        } else {
            fv
        }
    });
    let stab = VStability::validate(&Graph::cycle(n), datum.degree(), values)?;
    let expected: Vec<VertexSet> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && p[a] == p[b])
        .map(|(a, b)| arc(n, a, b))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if stab.degeneracy().sets() != expected {
        return Err(Error::Mismatch("degeneracy differs from the tied label pairs".into()));
    }
    Ok(stab)
}

/// `φ(I_•, f)_v = (p(v−1) − p(v)) / l(I_•) + f(v)`.
pub fn cycle_classical_witness(datum: &CyclicStabilityDatum) -> Result<Polarization> {
    let n = datum.n;
    let p = datum.positions();
    let l = datum.partition.len() as Int;
    let values = (0..n)
        .map(|v| {
            let prev = (v + n - 1) % n;
            Rational::new(p[prev] as Int - p[v] as Int, l) + Rational::from_integer(datum.f[v])
        })
        .collect();
    Polarization::new(&Graph::cycle(n), values)
}

/// All ordered partitions of `{0, …, n−1}`, as block bitmasks.
pub fn ordered_partitions(n: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rest: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        let mut sub = rest;
        while sub != 0 {
            cur.push(sub);
            rec(rest & !sub, cur, out);
            cur.pop();
            sub = (sub - 1) & rest;
        }
    }
    rec((1u64 << n) - 1, &mut cur, &mut out);
    out
}

/// Rotation of the blocks that starts with the block holding label 0.
pub fn cyclic_canonical(partition: &[u64]) -> Vec<u64> {
    let k = partition.iter().position(|&b| b & 1 == 1).unwrap_or(0);
    partition[k..].iter().chain(&partition[..k]).copied().collect()
}

/// The translate with `n_{v} = −1` for `v < n−1`.
fn normalized_f(n: usize, partition: &[u64], degree: Int) -> Vec<Int> {
    let p: Vec<usize> = (0..n)
        .map(|i| partition.iter().position(|&b| b >> i & 1 == 1).unwrap())
        .collect();
    let mut f: Vec<Int> = (0..n)
        .map(|v| if p[(v + n - 1) % n] <= p[v] { 0 } else { -1 })
        .collect();
    f[n - 1] = degree - f[..n - 1].iter().sum::<Int>();
    f
}

/// One stability in a classification, with the data recovered from it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleItem {
    /// `(V_ab as a vertex list, value)`, ascending by bitmask.
    pub values: Vec<(Vec<usize>, Int)>,
    pub partition: Vec<Vec<usize>>,
    pub f: Vec<Int>,
    pub classical_witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleClassification {
    pub n: usize,
    pub degree: Int,
    pub count: usize,
    pub translation_classes: usize,
    pub items: Vec<CycleItem>,
}

/// Recovers `(I_•, f)` from a stability on `C_n` via the equivalence `∼`, the
/// cyclic relation `R`, and the functions `F`, `f`.
pub fn recover_cycle_datum(stab: &VStability) -> Result<CyclicStabilityDatum> {
    let g = stab.graph();
    let n = g.vertex_count();
    let d = stab.degree();
    let val = |a: usize, b: usize| stab.values()[&arc(n, a, b)];
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<u64> = Vec::new();
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        let mut c = singleton(i);
        for j in i + 1..n {
            if stab.is_degenerate(arc(n, i, j)) {
                c |= singleton(j);
            }
        }
        for j in bits(c) {
            class_of[j] = classes.len();
        }
        classes.push(c);
    }
    let cyclic = |i: usize, j: usize, k: usize| (i < j && j < k) || (j < k && k < i) || (k < i && i < j);
    let r = |i: usize, j: usize, k: usize| {
        if cyclic(i, j, k) {
            val(i, j) + val(j, k) + val(k, i) + 3 - d == 1
        } else {
            val(i, k) + val(k, j) + val(j, i) + 3 - d == 2
        }
    };
    let reps: Vec<usize> = classes.iter().map(|c| c.trailing_zeros() as usize).collect();
    let m = classes.len();
    let mut order: Vec<usize> = (0..m).collect();
    let mut chosen = None;
    permutations(&mut order, 0, &mut |perm| {
        if chosen.is_some() {
            return;
        }
        let pos: Vec<usize> = {
            let mut pos = vec![0; m];
            for (k, &c) in perm.iter().enumerate() {
                pos[c] = k;
            }
            pos
        };
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if x == y || y == z || x == z {
                        continue;
                    }
                    let (px, py, pz) = (pos[x], pos[y], pos[z]);
                    let r_i = (px < py && py < pz) || (py < pz && pz < px) || (pz < px && px < py);
                    if r_i != r(reps[x], reps[y], reps[z]) {
                        return;
                    }
                }
            }
        }
        chosen = Some(perm.iter().map(|&c| classes[c]).collect::<Vec<u64>>());
    });
    let partition = chosen
        .ok_or_else(|| Error::Mismatch("no linear preorder induces the cyclic relation".into()))?;
    let p: Vec<usize> = (0..n)
        .map(|i| partition.iter().position(|&b| b >> i & 1 == 1).unwrap())
        .collect();
    let big_f = |a: usize, b: usize| if p[a] <= p[b] { val(a, b) + 1 } else { val(a, b) };
    let f: Vec<Int> = (0..n).map(|v| big_f((v + n - 1) % n, v)).collect();
    let datum = CyclicStabilityDatum::new(n, partition, f)?;
    if datum.degree() != d || cycle_vstability(&datum)? != *stab {
        return Err(Error::Mismatch("recovered cyclic datum does not reproduce the stability".into()));
    }
    Ok(datum)
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Degree-`d` stabilities on `C_n` with `n_{v} = −1` for `v < n−1`, found by
/// backtracking over arc values inside the window forced by the axioms.
pub fn cycle_window_enumeration(n: usize, d: Int) -> Result<Vec<VStability>> {
    if !(2..=MAX_CYCLE).contains(&n) {
        return Err(Error::TooLarge {
            what: "cycle length for exhaustive classification",
            actual: n,
            limit: MAX_CYCLE,
        });
    }
    let g = Graph::cycle(n);
    let spread = 2 * n as Int + 2;
    let lasts: Vec<Int> = (d - spread..=d + spread).collect();
    let found: Vec<Vec<BTreeMap<VertexSet, Int>>> = lasts
        .par_iter()
        .map(|&last| window_search(n, d, last))
        .collect();
    let edge_hits = found[0].len() + found[found.len() - 1].len();
    if edge_hits != 0 {
        return Err(Error::Mismatch("enumeration window is not closed".into()));
    }
    found
        .into_iter()
        .flatten()
        .map(|values| VStability::validate(&g, d, values))
        .collect()
}

fn window_search(n: usize, d: Int, last: Int) -> Vec<BTreeMap<VertexSet, Int>> {
    let idx = |a: usize, b: usize| a * n + b;
    let mut val: Vec<Option<Int>> = vec![None; n * n];
    for v in 0..n {
        val[idx((v + n - 1) % n, v)] = Some(if v == n - 1 { last } else { -1 });
    }
    let mut order = Vec::new();
    for len in 2..n {
        for a in 0..n {
            order.push((a, (a + len) % n));
        }
    }
    let mut out = Vec::new();
    fn consistent(n: usize, d: Int, val: &[Option<Int>], a: usize, b: usize) -> bool {
        let get = |x: usize, y: usize| val[x * n + y];
        let x = get(a, b).unwrap();
        if let Some(y) = get(b, a) {
            let e = x + y + 2 - d;
            if e != 0 && e != 1 {
                return false;
            }
        }
        for c in 0..n {
            if c == a || c == b {
                continue;
            }
            // (a, b, c) and (b, a, c) in cyclic position: the arcs ab, bc, ca
            // partition the cycle exactly when a, b, c are cyclically ordered.
            let (i, j, k) = if (a < b && b < c) || (b < c && c < a) || (c < a && a < b) {
                (a, b, c)
            } else {
                continue;
            };
            if let (Some(y), Some(z)) = (get(j, k), get(k, i)) {
                let e = x + y + z + 3 - d;
                if !(0..=2).contains(&e) {
                    return false;
                }
            }
        }
        true
    }
    fn rec(
        n: usize,
        d: Int,
        order: &[(usize, usize)],
        i: usize,
        val: &mut Vec<Option<Int>>,
        out: &mut Vec<BTreeMap<VertexSet, Int>>,
    ) {
        if i == order.len() {
            let g = Graph::cycle(n);
            let values: BTreeMap<VertexSet, Int> = arc_values(n, |a, b| val[a * n + b].unwrap());
            if VStability::validate(&g, d, values.clone()).is_ok() {
                out.push(values);
            }
            return;
        }
        let (a, b) = order[i];
        let prev = (b + n - 1) % n;
        let base = val[a * n + prev].unwrap() + val[prev * n + b].unwrap();
        for x in base - 1..=base + 2 {
            val[a * n + b] = Some(x);
            if consistent(n, d, val, a, b) {
                rec(n, d, order, i + 1, val, out);
            }
        }
        val[a * n + b] = None;
    }
    if n == 2 {
        let values = arc_values(n, |a, b| val[a * n + b].unwrap());
        if VStability::validate(&Graph::cycle(2), d, values.clone()).is_ok() {
            out.push(values);
        }
        return out;
    }
    rec(n, d, &order, 0, &mut val, &mut out);
    out
}

/// Classifies degree-`d` stabilities on `C_n` up to translation and checks the
/// duplicate law and classical witnesses along the way.
pub fn classify_cycle(n: usize, d: Int) -> Result<CycleClassification> {
    let enumerated = cycle_window_enumeration(n, d)?;
    let partitions = ordered_partitions(n);
    let constructed: Vec<VStability> = partitions
        .iter()
        .map(|p| {
            let datum = CyclicStabilityDatum::new(n, p.clone(), normalized_f(n, p, d))?;
            cycle_vstability(&datum)
        })
        .collect::<Result<_>>()?;
    let a: BTreeSet<Vec<(VertexSet, Int)>> = enumerated
        .iter()
        .map(|s| s.values().iter().map(|(&w, &v)| (w, v)).collect())
        .collect();
    let b: BTreeSet<Vec<(VertexSet, Int)>> = constructed
        .iter()
        .map(|s| s.values().iter().map(|(&w, &v)| (w, v)).collect())
        .collect();
    if a != b {
        return Err(Error::Mismatch(format!(
            "window enumeration found {} stabilities, construction gives {}",
            a.len(),
            b.len()
        )));
    }
    check_duplicate_law(n, d, &partitions, &constructed)?;
    let mut classes = BTreeSet::new();
    let mut items = Vec::new();
    for stab in &enumerated {
        let datum = recover_cycle_datum(stab)?;
        let witness = cycle_classical_witness(&datum)?;
        if VStability::from_polarization(&witness)? != *stab {
            return Err(Error::Mismatch("classical witness gives another stability".into()));
        }
        classes.insert(cyclic_canonical(&datum.partition));
        items.push(CycleItem {
            values: stab.values().iter().map(|(&w, &v)| (set_to_vec(w), v)).collect(),
            partition: datum.partition.iter().map(|&b| set_to_vec(b)).collect(),
            f: datum.f.clone(),
            classical_witness: witness.values().iter().map(|q| q.to_string()).collect(),
        });
    }
    items.sort_by(|x, y| x.values.cmp(&y.values));
    if classes.len() != items.len() {
        return Err(Error::Mismatch(format!(
            "{} stabilities but {} cyclic partitions",
            items.len(),
            classes.len()
        )));
    }
    Ok(CycleClassification {
        n,
        degree: d,
        count: items.len(),
        translation_classes: classes.len(),
        items,
    })
}

/// `n(I,f) = n(I',f')` exactly for rotations `I = J ⊔ K`, `I' = K ⊔ J` with the
/// boundary shift of `f` at vertices between a label of `J` and one of `K`.
fn check_duplicate_law(n: usize, d: Int, partitions: &[Vec<u64>], stabs: &[VStability]) -> Result<()> {
    let canon: Vec<Vec<u64>> = partitions.iter().map(|p| cyclic_canonical(p)).collect();
    for i in 0..partitions.len() {
        for j in 0..partitions.len() {
            let equal = stabs[i] == stabs[j];
            if equal != (canon[i] == canon[j]) {
                return Err(Error::Mismatch(format!(
                    "duplicate law fails for {:?} and {:?}",
                    partitions[i], partitions[j]
                )));
            }
        }
    }
    for p in partitions {
        let f = normalized_f(n, p, d);
        let base = cycle_vstability(&CyclicStabilityDatum::new(n, p.clone(), f.clone())?)?;
        for t in 1..p.len() {
            let j_set: u64 = p[..t].iter().fold(0, |m, b| m | b);
            let rotated: Vec<u64> = p[t..].iter().chain(&p[..t]).copied().collect();
            let f2: Vec<Int> = (0..n)
                .map(|v| {
                    let prev = (v + n - 1) % n;
                    let (pj, vj) = (j_set >> prev & 1 == 1, j_set >> v & 1 == 1);
                    match (pj, vj) {
                        (true, false) => f[v] - 1,
                        (false, true) => f[v] + 1,
                        _ => f[v],
                    }
                })
                .collect();
            let other = cycle_vstability(&CyclicStabilityDatum::new(n, rotated, f2)?)?;
            if other != base {
                return Err(Error::Mismatch(format!("boundary shift fails for {p:?} at {t}")));
            }
        }
    }
    Ok(())
}

/// Refinements of an ordered partition: each block split into an ordered
/// partition of its own, in place.
pub fn refinements(partition: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &b in partition {
        let labels = set_to_vec(b);
        let local = ordered_partitions(labels.len());
        let lifted: Vec<Vec<u64>> = local
            .iter()
            .map(|q| {
                q.iter()
                    .map(|&blk| bits(blk).fold(0, |m, i| m | singleton(labels[i])))
                    .collect()
            })
            .collect();
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u64>| {
                lifted.iter().map(move |tail| {
                    let mut v = prefix.clone();
                    v.extend(tail);
                    v
                })
            })
            .collect();
    }
    out
}

/// `other ≥ n(I, f)`, decided pointwise and by searching refinements of `I`;
/// the two answers must agree.
pub fn cycle_refinement_leq(datum: &CyclicStabilityDatum, other: &VStability) -> Result<bool> {
    let base = cycle_vstability(datum)?;
    let pointwise = other.geq(&base)?;
    let mut found = false;
    for j in refinements(&datum.partition) {
        let refined = CyclicStabilityDatum::new(datum.n, j, datum.f.clone())?;
        if cycle_vstability(&refined)? == *other {
            found = true;
            break;
        }
    }
    if pointwise != found {
        return Err(Error::Mismatch(format!(
            "pointwise order says {pointwise}, refinement search says {found}"
        )));
    }
    Ok(found)
}

/// `φ(G,D)_v = D_v + e_S(v) + val_S(v)/2` on a tree, with its semistable set,
/// checked against the up-set of `(G, D)`.
pub fn tree_model(t: &Graph, x: &OrbitElement) -> Result<(Polarization, UpperSet)> {
    if !t.is_tree() || t.loops() != 0 {
        return Err(Error::InvalidGraph("not a tree".into()));
    }
    let s = x.removed(t);
    let values = (0..t.vertex_count())
        .map(|v| {
            Rational::from_integer(x.divisor[v] + t.interior_edges(s, singleton(v)) as Int)
                + Rational::new(t.cut(s, singleton(v)) as Int, 2)
        })
        .collect();
    let phi = Polarization::new(t, values)?;
    let n = VStability::from_polarization(&phi)?;
    let p = semistable_fast(&n)?;
    let up = upper_closure(t, x.ambient_degree(t), std::slice::from_ref(x))?;
    if p != up {
        return Err(Error::Mismatch(format!("semistable set differs from the up-set of {x}")));
    }
    if p.maximal_elements().len() != 1 << popcount(s) {
        return Err(Error::Mismatch("wrong number of maximal elements".into()));
    }
    let expected: Vec<VertexSet> = t
        .biconnected_subsets()?
        .into_iter()
        .filter(|&w| t.cut(s, w) == 1)
        .collect();
    if n.degeneracy().sets() != expected {
        return Err(Error::Mismatch("degeneracy differs from the removed edges".into()));
    }
    Ok((phi, p))
}

/// Elements of `O^d(T)` with every divisor entry in `-window..=window`.
pub fn orbit_window(g: &Graph, d: Int, window: Int) -> Vec<OrbitElement> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for es in 0..=g.all_edges() {
        let target = d - popcount(g.all_edges() & !es) as Int;
        let mut div = vec![-window; n];
        loop {
            if divisor::degree(&div) == target {
                out.push(OrbitElement::new(es, div.clone()));
            }
            let mut i = 0;
            while i < n && div[i] == window {
                div[i] = -window;
                i += 1;
            }
            if i == n {
                break;
            }
            div[i] += 1;
        }
    }
    out
}

/// `x ≤ y` exactly when the semistable set of `y` sits inside that of `x`, over
/// a window of `O^d(T)`.
pub fn tree_anti_order_check(t: &Graph, d: Int, window: Int) -> Result<bool> {
    let elements = orbit_window(t, d, window);
    let sets: Vec<BTreeSet<OrbitElement>> = elements
        .par_iter()
        .map(|x| tree_model(t, x).map(|(_, p)| p.into_elements()))
        .collect::<Result<_>>()?;
    for (i, x) in elements.iter().enumerate() {
        for (j, y) in elements.iter().enumerate() {
            let leq = poset_leq(t, x, y)?.is_some();
            if leq != sets[i].is_superset(&sets[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `n^deg_W = g(X[W]) − 1` in degree `g(X) − 1`, with its semistable set
/// checked against outdegree sequences and forest counts.
pub fn max_degenerate_model(c: &CurveModel) -> Result<(VStability, UpperSet)> {
    let g = c.graph();
    let values = g
        .biconnected_subsets()?
        .into_iter()
        .map(|w| (w, c.subcurve_genus(w) - 1))
        .collect();
    let n = VStability::validate(g, c.arithmetic_genus() - 1, values)?;
    if n.degeneracy().len() != g.biconnected_subsets()?.len() {
        return Err(Error::Mismatch("canonical stability is not maximally degenerate".into()));
    }
    let p = semistable_fast(&n)?;
    let base = max_degenerate_divisor(g);
    for es in 0..=g.all_edges() {
        let fiber: BTreeSet<Divisor> = p.fiber(es).into_iter().cloned().collect();
        let outdegrees: BTreeSet<Divisor> = outdegree_sequences(g, es)
            .into_iter()
            .map(|o| divisor::add(&base, &o))
            .collect();
        if fiber != outdegrees {
            return Err(Error::Mismatch(format!("fiber over {es:#x} is not a shifted outdegree set")));
        }
        if fiber.len() != g.forests_within(es).len() {
            return Err(Error::Mismatch(format!("fiber over {es:#x} misses the forest count")));
        }
    }
    Ok((n, p))
}

/// `D^deg = Σ (g_v − 1) v`.
pub fn max_degenerate_divisor(g: &Graph) -> Divisor {
    g.genera().iter().map(|&x| x as Int - 1).collect()
}

/// Outdegree (head-count) vectors of all full orientations of `es`.
pub fn outdegree_sequences(g: &Graph, es: EdgeSet) -> BTreeSet<Divisor> {
    let edges: Vec<usize> = bits(es).collect();
    let free: Vec<usize> = edges.iter().copied().filter(|&e| !g.is_loop(e)).collect();
    let mut base = vec![0; g.vertex_count()];
    for &e in &edges {
        if g.is_loop(e) {
            base[g.edge(e).0] += 1;
        }
    }
    let mut out = BTreeSet::new();
    for mask in 0..(1u64 << free.len()) {
        let mut d = base.clone();
        for (k, &e) in free.iter().enumerate() {
            let (u, v) = g.edge(e);
            d[if mask >> k & 1 == 1 { v } else { u }] += 1;
        }
        out.insert(d);
    }
    out
}

/// `q = p + τ` for a constant vertex function `τ`, if one exists.
pub fn translation_between(p: &UpperSet, q: &UpperSet) -> Option<Vec<Int>> {
    if p.graph() != q.graph() || p.len() != q.len() {
        return None;
    }
    let a = p.elements().iter().next()?;
    let b = q.elements().iter().find(|y| y.subgraph == a.subgraph)?;
    let tau = divisor::sub(&b.divisor, &a.divisor);
    let shifted: BTreeSet<OrbitElement> = p
        .elements()
        .iter()
        .map(|x| OrbitElement::new(x.subgraph, divisor::add(&x.divisor, &tau)))
        .collect();
    (shifted == *q.elements()).then_some(tau)
}

/// One stability of a vine, with its classical witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VineEntry {
    /// Curve-side pair `(s_{C_1}, s_{C_2})`.
    pub s: (Int, Int),
    pub general: bool,
    pub stability: VStability,
    /// `ψ` with `s(ψ) = s`, using `ε = 1/2` in the general case.
    pub witness: Vec<Rational>,
}

/// Stabilities of characteristic `chi` on the vine with `k` edges and rational
/// components, for `s_{C_1}` in `window`.
pub fn vine_classification(k: usize, chi: Int, window: RangeInclusive<Int>) -> Result<Vec<VineEntry>> {
    if k == 0 {
        return Err(Error::InvalidGraph("a vine needs at least one edge".into()));
    }
    let c = CurveModel::new(Graph::vine(k))?;
    let half = Rational::new(1, 2);
    let mut out = Vec::new();
    for s1 in window {
        for general in [true, false] {
            let s2 = chi + Int::from(general) - s1;
            let s = BTreeMap::from([(1, s1), (2, s2)]);
            c.validate_curve(&s, chi)?;
            let stability = c.curve_to_graph(&s, chi)?;
            if stability.is_general() != general {
                return Err(Error::Mismatch("generality does not match the sum".into()));
            }
            let witness = if general {
                vec![Rational::from_integer(s1) - half, Rational::from_integer(s2) - half]
            } else {
                vec![Rational::from_integer(s1), Rational::from_integer(s2)]
            };
            if c.curve_from_polarization(&witness)? != s {
                return Err(Error::Mismatch("witness gives another curve-side stability".into()));
            }
            let phi = c.polarization_to_graph(&witness)?;
            if VStability::from_polarization(&phi)? != stability {
                return Err(Error::Mismatch("witness gives another graph-side stability".into()));
            }
            out.push(VineEntry {
                s: (s1, s2),
                general,
                stability,
                witness,
            });
        }
    }
    Ok(out)
}

/// On a single vertex every divisor of the right degree is semistable, on
/// every spanning subgraph.
pub fn irreducible_check(g: &Graph, d: Int) -> Result<bool> {
    if g.vertex_count() != 1 {
        return Err(Error::InvalidGraph("not a one-vertex graph".into()));
    }
    let n = VStability::validate(g, d, BTreeMap::new())?;
    let p = semistable_fast(&n)?;
    Ok(p.len() == 1 << g.edge_count()
        && p.elements().iter().all(|x| x.ambient_degree(g) == d))
}
