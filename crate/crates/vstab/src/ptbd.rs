//! Forest functions, their BD-sets, and PT-assignment checks on upper sets.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::degeneracy::DegeneracySubset;
use crate::divisor::{self, degree_on, Divisor};
use crate::error::{Error, Result};
use crate::graph::{bits, singleton, EdgeSet, Graph, GraphMorphism, VertexSet};
use crate::orbit::{covers, pushforward_orbit, upper_closure, OrbitElement, OrderedPartition, UpperSet, CLOSURE_CAP};
use crate::semistable::{equivalence_partition, semistable_fast};
use crate::vstability::VStability;
use crate::Int;

/// Largest vertex count for the partition search behind the linking check.
pub const LINK_SEARCH_VERTICES: usize = 8;

/// A divisor `I(F)` for every minimal admissible spanning forest `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestFunction {
    degeneracy: DegeneracySubset,
    degree: Int,
    values: BTreeMap<EdgeSet, Divisor>,
}

impl ForestFunction {
    /// Checks the domain is exactly the minimal admissible forests and that
    /// each `(F, I(F))` has ambient degree `degree`.
    pub fn new(
        degeneracy: &DegeneracySubset,
        degree: Int,
        values: BTreeMap<EdgeSet, Divisor>,
    ) -> Result<Self> {
        let g = degeneracy.graph();
        let domain: Vec<EdgeSet> = values.keys().copied().collect();
        if domain != degeneracy.minimal_admissible() {
            return Err(Error::Mismatch(
                "domain is not the set of minimal admissible forests".into(),
            ));
        }
        for (&f, d) in &values {
            let x = OrbitElement::new(f, d.clone());
            if d.len() != g.vertex_count() || x.ambient_degree(g) != degree {
                return Err(Error::Mismatch(format!("{x} has the wrong shape or degree")));
            }
        }
        Ok(ForestFunction {
            degeneracy: degeneracy.clone(),
            degree,
            values,
        })
    }

    /// `I_n`: on each tree of `F`, the chips below every vertex are forced by
    /// the values of `n` on the subtree hanging from it.
    pub fn of_stability(n: &VStability) -> Result<Self> {
        let g = n.graph();
        let deg = n.degeneracy();
        let mut values = BTreeMap::new();
        for f in deg.minimal_admissible() {
            let s = g.all_edges() & !f;
            let mut d = vec![0; g.vertex_count()];
            for comp in g.components(f, g.all_vertices()) {
                let root = comp.trailing_zeros() as usize;
                let (parent, order) = tree_order(g, f, comp, root);
                let mut below: Vec<VertexSet> = (0..g.vertex_count()).map(singleton).collect();
                for &v in order.iter().rev() {
                    if v != root {
                        below[parent[v]] |= below[v];
                    }
                }
                let total = |w: VertexSet| n.extended_value(w) - g.interior_edges(s, w) as Int;
                let sub: Vec<Int> = (0..g.vertex_count())
                    .map(|v| {
                        if v == root {
                            total(comp)
                        } else if comp >> v & 1 == 1 {
                            total(below[v])
                        } else {
                            0
                        }
                    })
                    .collect();
                for &v in &order {
                    d[v] = sub[v];
                    for &c in &order {
                        if c != root && parent[c] == v {
                            d[v] -= sub[c];
                        }
                    }
                }
            }
            let x = OrbitElement::new(f, d);
            if !crate::semistable::is_semistable(n, &x) {
                return Err(Error::Mismatch(format!("forest value {x} is not semistable")));
            }
            values.insert(f, x.divisor);
        }
        Self::new(deg, n.degree(), values)
    }

    pub fn graph(&self) -> &Graph {
        self.degeneracy.graph()
    }

    pub fn degeneracy(&self) -> &DegeneracySubset {
        &self.degeneracy
    }

    pub fn degree(&self) -> Int {
        self.degree
    }

    pub fn values(&self) -> &BTreeMap<EdgeSet, Divisor> {
        &self.values
    }

    pub fn value(&self, f: EdgeSet) -> Option<&Divisor> {
        self.values.get(&f)
    }

    fn seeds(&self) -> Vec<OrbitElement> {
        self.values
            .iter()
            .map(|(&f, d)| OrbitElement::new(f, d.clone()))
            .collect()
    }

    /// `BD_I`: the upper set generated by the `(F, I(F))`.
    pub fn bd_set(&self) -> Result<UpperSet> {
        upper_closure(self.graph(), self.degree, &self.seeds())
    }

    /// `BD_{I_{Γ∖S}}`, seen inside `O^d(Γ)`.
    pub fn restricted_bd_set(&self, s: EdgeSet) -> Result<BTreeSet<OrbitElement>> {
        let g = self.graph();
        let allowed = g.all_edges() & !s;
        self.degeneracy.ensure_admissible(allowed)?;
        let seeds: Vec<OrbitElement> = self
            .seeds()
            .into_iter()
            .filter(|x| x.subgraph & s == 0)
            .collect();
        closure_within(g, &seeds, allowed)
    }

    /// `BD_{I_{Γ∖S}} = BD_I ∩ O^{d−|S|}_D(Γ∖S)`.
    pub fn restriction_check(&self, s: EdgeSet) -> Result<bool> {
        let lhs = self.restricted_bd_set(s)?;
        let bd = self.bd_set()?;
        let rhs: BTreeSet<OrbitElement> = bd
            .elements()
            .iter()
            .filter(|x| x.subgraph & s == 0 && self.degeneracy.is_admissible(x.subgraph))
            .cloned()
            .collect();
        Ok(lhs == rhs)
    }

    /// `f_*(I)(F') = f_*(I(f^*F'))` along a genus-preserving contraction.
    pub fn pushforward(&self, m: &GraphMorphism) -> Result<Self> {
        if m.source != *self.graph() {
            return Err(Error::Mismatch("morphism source differs".into()));
        }
        if !m.preserves_genus() {
            return Err(Error::Precondition("contracted edges contain a cycle".into()));
        }
        let target_deg = self.degeneracy.pushforward(m)?;
        let mut values = BTreeMap::new();
        for fp in target_deg.minimal_admissible() {
            let kept = m.push_edges(fp);
            let lift = kept | m.contracted;
            let candidates: Vec<EdgeSet> = self
                .values
                .keys()
                .copied()
                .filter(|&f| f & !lift == 0 && kept & !f == 0)
                .collect();
            let [f] = candidates[..] else {
                return Err(Error::Mismatch(format!(
                    "{} minimal forests lie over {fp:#x}",
                    candidates.len()
                )));
            };
            let y = pushforward_orbit(m, &OrbitElement::new(f, self.values[&f].clone()))?;
            if y.subgraph != fp {
                return Err(Error::Mismatch(format!("pulled-back forest maps to {:#x}", y.subgraph)));
            }
            values.insert(fp, y.divisor);
        }
        Self::new(&target_deg, self.degree, values)
    }

    /// `BD_{f_*I} ⊆ f_*(BD_I)`.
    pub fn pushforward_check(&self, m: &GraphMorphism) -> Result<bool> {
        let pushed = self.pushforward(m)?.bd_set()?;
        let image: BTreeSet<OrbitElement> = self
            .bd_set()?
            .elements()
            .iter()
            .map(|x| pushforward_orbit(m, x))
            .collect::<Result<_>>()?;
        Ok(pushed.elements().iter().all(|x| image.contains(x)))
    }

    /// `n^I`, read off on forests adapted to each biconnected `W`.
    pub fn to_stability(&self) -> Result<VStability> {
        let g = self.graph();
        let deg = &self.degeneracy;
        let bd = self.bd_set()?;
        let full = bd.fiber(g.all_edges()).len() as u64;
        let c = deg.complexity(g.all_edges())?;
        if full != c {
            return Err(Error::Precondition(format!(
                "BD-set has {full} divisors on the whole graph, complexity is {c}"
            )));
        }
        let mut values = BTreeMap::new();
        for w in g.biconnected_subsets()? {
            let want = if deg.contains(w) { 0 } else { 1 };
            let mut found: Option<Int> = None;
            for (&f, d) in &self.values {
                if g.cut(f, w) != want {
                    continue;
                }
                let s = g.all_edges() & !f;
                let v = degree_on(d, w) + g.interior_edges(s, w) as Int;
                match found {
                    None => found = Some(v),
                    Some(u) if u != v => {
                        return Err(Error::Mismatch(format!(
                            "adapted forests disagree on {w:#x}: {u} vs {v}"
                        )))
                    }
                    _ => {}
                }
            }
            let v = found.ok_or_else(|| {
                Error::Precondition(format!("no adapted forest for {w:#x}"))
            })?;
            values.insert(w, v);
        }
        let n = VStability::validate(g, self.degree, values)?;
        if n.degeneracy().sets() != deg.sets() {
            return Err(Error::Mismatch(
                "recovered stability has a different degeneracy subset".into(),
            ));
        }
        Ok(n)
    }
}

/// Parent pointers and a BFS order of the tree of `f` on `comp`.
fn tree_order(g: &Graph, f: EdgeSet, comp: VertexSet, root: usize) -> (Vec<usize>, Vec<usize>) {
    let mut parent = vec![usize::MAX; g.vertex_count()];
    let mut order = vec![root];
    let mut seen = singleton(root);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for e in bits(f) {
            let (a, b) = g.edge(e);
            let w = if a == u { b } else if b == u { a } else { continue };
            if seen >> w & 1 == 0 {
                seen |= singleton(w);
                parent[w] = u;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    debug_assert_eq!(seen, comp);
    (parent, order)
}

/// Upward closure that never adds edges outside `allowed`.
fn closure_within(g: &Graph, seeds: &[OrbitElement], allowed: EdgeSet) -> Result<BTreeSet<OrbitElement>> {
    let mut set: BTreeSet<OrbitElement> = seeds.iter().cloned().collect();
    let mut queue: VecDeque<OrbitElement> = set.iter().cloned().collect();
    while let Some(x) = queue.pop_front() {
        for y in covers(g, &x) {
            if y.subgraph & !allowed == 0 && !set.contains(&y) {
                if set.len() >= CLOSURE_CAP {
                    return Err(Error::Budget(CLOSURE_CAP as u64));
                }
                set.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(set)
}

/// Facts about one admissible spanning subgraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PtRecord {
    pub edge_mask: EdgeSet,
    pub count: u64,
    pub complexity: u64,
    pub surjective: bool,
    pub fiber_linked: bool,
    /// The multidegree hitting every class, per component by least vertex.
    pub delta: Option<Vec<Int>>,
    pub induced_union: bool,
}

/// Per-subgraph records, ascending by edge mask.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PtReport {
    pub records: Vec<PtRecord>,
}

impl PtReport {
    pub fn is_pt(&self) -> bool {
        self.records.iter().all(|r| r.surjective && r.fiber_linked)
    }

    pub fn is_weak_pt(&self) -> bool {
        self.records
            .iter()
            .filter(|r| r.induced_union && r.count > 0)
            .all(|r| r.surjective && r.fiber_linked)
    }

    pub fn is_numerical(&self) -> bool {
        self.records.iter().all(|r| r.count == r.complexity)
    }

    /// `|P(Γ)| = c_D(Γ)`; the last record is always the whole graph.
    pub fn is_weak_numerical(&self) -> bool {
        self.records.last().is_some_and(|r| r.count == r.complexity)
    }

    pub fn record(&self, es: EdgeSet) -> Option<&PtRecord> {
        self.records.iter().find(|r| r.edge_mask == es)
    }
}

/// Checks the PT conditions on every admissible spanning subgraph of `p`.
pub fn pt_report(p: &UpperSet, deg: &DegeneracySubset) -> Result<PtReport> {
    build_report(p, deg, None)
}

/// [`pt_report`] on `P_n`, linking fibers through level-set partitions.
pub fn pt_report_for_stability(n: &VStability) -> Result<PtReport> {
    let p = semistable_fast(n)?;
    build_report(&p, n.degeneracy(), Some(n))
}

fn build_report(p: &UpperSet, deg: &DegeneracySubset, n: Option<&VStability>) -> Result<PtReport> {
    let g = p.graph();
    if deg.graph() != g {
        return Err(Error::Mismatch("degeneracy lives on another graph".into()));
    }
    if g.edge_count() > 24 {
        return Err(Error::TooLarge {
            what: "edge count for subgraph enumeration",
            actual: g.edge_count(),
            limit: 24,
        });
    }
    let good = good_blocks(g, deg);
    let mut records = Vec::new();
    for es in deg.admissible_subgraphs() {
        let fiber = p.fiber(es);
        let comps = g.components(es, g.all_vertices());
        let mut by_multidegree: BTreeMap<Vec<Int>, BTreeSet<Divisor>> = BTreeMap::new();
        let mut classes: HashMap<Divisor, Vec<&Divisor>> = HashMap::new();
        for &d in &fiber {
            let md = comps.iter().map(|&c| degree_on(d, c)).collect();
            let class = divisor::pic_class(g, es, d);
            by_multidegree.entry(md).or_default().insert(class.clone());
            classes.entry(class).or_default().push(d);
        }
        let order = divisor::pic_order(g, es) as usize;
        let full: Vec<&Vec<Int>> = by_multidegree
            .iter()
            .filter(|(_, c)| c.len() == order)
            .map(|(md, _)| md)
            .collect();
        let delta = match full[..] {
            [md] => Some(md.clone()),
            _ => None,
        };
        let fiber_linked = fiber_linked(p, es, &classes, n, &good)?;
        records.push(PtRecord {
            edge_mask: es,
            count: fiber.len() as u64,
            complexity: deg.complexity(es)?,
            surjective: delta.is_some(),
            fiber_linked,
            delta,
            induced_union: comps
                .iter()
                .all(|&c| g.edges_within(g.all_edges(), c) & !es == 0),
        });
    }
    Ok(PtReport { records })
}

/// `good[B]`: `B` is a disjoint union of members of `D̂`.
fn good_blocks(g: &Graph, deg: &DegeneracySubset) -> Vec<bool> {
    let n = g.vertex_count();
    if n > LINK_SEARCH_VERTICES {
        return Vec::new();
    }
    let mut good = vec![false; 1 << n];
    good[0] = true;
    for b in 1..(1usize << n) {
        let low = b & b.wrapping_neg();
        good[b] = deg
            .extended()
            .iter()
            .any(|&z| z as usize & low != 0 && z as usize & !b == 0 && good[b & !(z as usize)]);
    }
    good
}

fn fiber_linked(
    p: &UpperSet,
    es: EdgeSet,
    classes: &HashMap<Divisor, Vec<&Divisor>>,
    n: Option<&VStability>,
    good: &[bool],
) -> Result<bool> {
    let g = p.graph();
    let pairs: Vec<(&Divisor, &Divisor)> = classes
        .values()
        .flat_map(|ds| {
            ds.iter()
                .enumerate()
                .flat_map(move |(i, a)| ds[i + 1..].iter().map(move |b| (*a, *b)))
        })
        .collect();
    if pairs.is_empty() {
        return Ok(true);
    }
    if let Some(n) = n {
        for (a, b) in pairs {
            match equivalence_partition(n, es, a, b) {
                Ok(_) => {}
                Err(Error::Mismatch(_)) => return Ok(false),
                Err(e) => return Err(e),
            }
        }
        return Ok(true);
    }
    if g.vertex_count() > LINK_SEARCH_VERTICES {
        return Err(Error::TooLarge {
            what: "vertex count for the linking search",
            actual: g.vertex_count(),
            limit: LINK_SEARCH_VERTICES,
        });
    }
    // Difference D(O) − D(Ō) of each good partition, with its orientation.
    let mut shifts: HashMap<Divisor, Vec<OrderedPartition>> = HashMap::new();
    for part in OrderedPartition::all(g) {
        if part.blocks.iter().any(|&b| !good[b as usize]) {
            continue;
        }
        let o = part.orientation(g, es);
        let delta = divisor::sub(&o.outgoing_divisor(g), &o.reversed(g).outgoing_divisor(g));
        shifts.entry(delta).or_default().push(part);
    }
    let linked = |d1: &Divisor, d2: &Divisor| {
        shifts.get(&divisor::sub(d1, d2)).is_some_and(|parts| {
            parts.iter().any(|part| {
                part.orientation(g, es)
                    .apply(g, &OrbitElement::new(es, d1.clone()))
                    .is_some_and(|y| p.contains(&y))
            })
        })
    };
    Ok(pairs.into_iter().all(|(a, b)| linked(a, b)))
}
