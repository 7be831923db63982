//! The poset `O^d(Γ)` of divisors on spanning subgraphs, its upper sets and
//! the orientation combinatorics that acts on them.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::degeneracy::DegeneracySubset;
use crate::divisor::{self, Divisor};
use crate::error::{Error, Result};
use crate::graph::{bits, popcount, singleton, EdgeSet, Graph, GraphMorphism, VertexSet};
use crate::Int;

/// Closure searches stop with [`Error::Budget`] beyond this many elements.
pub const CLOSURE_CAP: usize = 1_000_000;

/// A pair `(G, D)` with `G` a spanning subgraph given by its kept edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitElement {
    pub subgraph: EdgeSet,
    pub divisor: Divisor,
}

impl OrbitElement {
    pub fn new(subgraph: EdgeSet, divisor: Divisor) -> Self {
        OrbitElement { subgraph, divisor }
    }

    /// The ambient degree `deg D + |E(G)^c|`.
    pub fn ambient_degree(&self, g: &Graph) -> Int {
        divisor::degree(&self.divisor) + popcount(g.all_edges() & !self.subgraph) as Int
    }

    /// Removed edges `S`.
    pub fn removed(&self, g: &Graph) -> EdgeSet {
        g.all_edges() & !self.subgraph
    }
}

impl fmt::Display for OrbitElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.divisor.iter().map(|x| x.to_string()).collect();
        write!(f, "G={:x}; D=[{}]", self.subgraph, d.join(","))
    }
}

impl FromStr for OrbitElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed orbit element {s:?}"));
        let (g, d) = s.split_once(';').ok_or_else(bad)?;
        let g = g.trim().strip_prefix("G=").ok_or_else(bad)?;
        let subgraph = u64::from_str_radix(g.trim_start_matches("0x"), 16).map_err(|_| bad())?;
        let d = d.trim().strip_prefix("D=[").and_then(|d| d.strip_suffix(']'));
        let d = d.ok_or_else(bad)?;
        let divisor = if d.trim().is_empty() {
            Vec::new()
        } else {
            d.split(',')
                .map(|x| x.trim().parse::<Int>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        };
        Ok(OrbitElement { subgraph, divisor })
    }
}

/// Orientation of a subset of edges. A set bit in `toward_second` puts the head
/// at the larger endpoint; loops always have their head at their vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PartialOrientation {
    pub support: EdgeSet,
    pub toward_second: EdgeSet,
}

impl PartialOrientation {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds an orientation from `(edge, head)` pairs.
    pub fn from_heads(g: &Graph, heads: &[(usize, usize)]) -> Result<Self> {
        let mut o = PartialOrientation::empty();
        for &(e, h) in heads {
            if e >= g.edge_count() {
                return Err(Error::Mismatch(format!("edge {e} out of range")));
            }
            let (u, v) = g.edge(e);
            if h != u && h != v {
                return Err(Error::Mismatch(format!("vertex {h} is not an end of edge {e}")));
            }
            o.support |= singleton(e);
            if h == v && u != v {
                o.toward_second |= singleton(e);
            }
        }
        Ok(o)
    }

    pub fn head(&self, g: &Graph, e: usize) -> usize {
        let (u, v) = g.edge(e);
        if self.toward_second >> e & 1 == 1 {
            v
        } else {
            u
        }
    }

    pub fn tail(&self, g: &Graph, e: usize) -> usize {
        let (u, v) = g.edge(e);
        if self.toward_second >> e & 1 == 1 {
            u
        } else {
            v
        }
    }

    pub fn heads(&self, g: &Graph) -> Vec<(usize, usize)> {
        bits(self.support).map(|e| (e, self.head(g, e))).collect()
    }

    /// Same support with every non-loop edge reversed.
    pub fn reversed(&self, g: &Graph) -> Self {
        PartialOrientation {
            support: self.support,
            toward_second: self.support & !self.toward_second & !g.loops(),
        }
    }

    /// Agreement on the common support.
    pub fn concordant(&self, other: &Self) -> bool {
        (self.toward_second ^ other.toward_second) & self.support & other.support == 0
    }

    /// Union of two concordant orientations.
    pub fn union(&self, other: &Self) -> Self {
        PartialOrientation {
            support: self.support | other.support,
            toward_second: (self.toward_second & self.support)
                | (other.toward_second & other.support),
        }
    }

    /// The outgoing divisor: one chip at the head of each oriented edge.
    pub fn outgoing_divisor(&self, g: &Graph) -> Divisor {
        let mut d = vec![0; g.vertex_count()];
        for e in bits(self.support) {
            d[self.head(g, e)] += 1;
        }
        d
    }

    /// The target of `x ≥_O y`, or `None` when the support is not inside `x.G`.
    pub fn apply(&self, g: &Graph, x: &OrbitElement) -> Option<OrbitElement> {
        if self.support & !x.subgraph != 0 {
            return None;
        }
        Some(OrbitElement {
            subgraph: x.subgraph & !self.support,
            divisor: divisor::sub(&x.divisor, &self.outgoing_divisor(g)),
        })
    }

    /// Whether the orientation equals `O_G(W_•)` for some ordered partition,
    /// where `G` is the spanning subgraph `es` containing the support.
    pub fn is_partition_induced(&self, g: &Graph, es: EdgeSet) -> bool {
        let rest = es & !self.support;
        let comps = g.components(rest, g.all_vertices());
        let comp_of = |v: usize| comps.iter().position(|&c| c >> v & 1 == 1).unwrap();
        let k = comps.len();
        let mut succ = vec![0u64; k];
        for e in bits(self.support) {
            let (t, h) = (comp_of(self.tail(g, e)), comp_of(self.head(g, e)));
            if t == h {
                return false;
            }
            succ[t] |= singleton(h);
        }
        // Kahn's algorithm on the quotient digraph.
        let mut indeg = vec![0; k];
        for s in &succ {
            for h in bits(*s) {
                indeg[h] += 1;
            }
        }
        let mut queue: Vec<usize> = (0..k).filter(|&c| indeg[c] == 0).collect();
        let mut done = 0;
        while let Some(c) = queue.pop() {
            done += 1;
            for h in bits(succ[c]) {
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    queue.push(h);
                }
            }
        }
        done == k
    }
}

/// Ordered list of disjoint nonempty blocks covering the vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedPartition {
    pub blocks: Vec<VertexSet>,
}

impl OrderedPartition {
    pub fn new(g: &Graph, blocks: Vec<VertexSet>) -> Result<Self> {
        let mut seen = 0;
        for &b in &blocks {
            if b == 0 || b & !g.all_vertices() != 0 {
                return Err(Error::Mismatch(format!("bad block {b:#x}")));
            }
            if b & seen != 0 {
                return Err(Error::Overlap(b, seen));
            }
            seen |= b;
        }
        if seen != g.all_vertices() {
            return Err(Error::Mismatch("blocks do not cover the vertex set".into()));
        }
        Ok(OrderedPartition { blocks })
    }

    pub fn trivial(g: &Graph) -> Self {
        OrderedPartition {
            blocks: vec![g.all_vertices()],
        }
    }

    pub fn reversed(&self) -> Self {
        OrderedPartition {
            blocks: self.blocks.iter().rev().copied().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    fn block_of(&self, v: usize) -> usize {
        self.blocks.iter().position(|&b| b >> v & 1 == 1).unwrap()
    }

    /// `E_G(V_•)`: edges of `es` joining different blocks.
    pub fn crossing_edges(&self, g: &Graph, es: EdgeSet) -> EdgeSet {
        bits(es)
            .filter(|&e| {
                let (u, v) = g.edge(e);
                self.block_of(u) != self.block_of(v)
            })
            .fold(0, |m, e| m | singleton(e))
    }

    /// `O_G(V_•)`: crossing edges oriented towards the later block.
    pub fn orientation(&self, g: &Graph, es: EdgeSet) -> PartialOrientation {
        let mut o = PartialOrientation::empty();
        for e in bits(self.crossing_edges(g, es)) {
            let (u, v) = g.edge(e);
            o.support |= singleton(e);
            if self.block_of(v) > self.block_of(u) {
                o.toward_second |= singleton(e);
            }
        }
        o
    }

    /// All ordered partitions of the vertex set, in a fixed order.
    pub fn all(g: &Graph) -> Vec<OrderedPartition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(rest: VertexSet, cur: &mut Vec<VertexSet>, out: &mut Vec<OrderedPartition>) {
            if rest == 0 {
                out.push(OrderedPartition {
                    blocks: cur.clone(),
                });
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
        rec(g.all_vertices(), &mut cur, &mut out);
        out
    }
}

/// Decides `lower ≤ upper` and returns an orientation witnessing it.
/// Witnesses need not be unique; the first one in edge order is returned.
pub fn poset_leq(
    g: &Graph,
    lower: &OrbitElement,
    upper: &OrbitElement,
) -> Result<Option<PartialOrientation>> {
    let n = g.vertex_count();
    if lower.divisor.len() != n || upper.divisor.len() != n {
        return Err(Error::Mismatch("divisor length differs from vertex count".into()));
    }
    if lower.ambient_degree(g) != upper.ambient_degree(g) {
        return Err(Error::Mismatch("elements have different ambient degrees".into()));
    }
    if lower.subgraph & !upper.subgraph != 0 {
        return Ok(None);
    }
    let supp = upper.subgraph & !lower.subgraph;
    let mut need = divisor::sub(&upper.divisor, &lower.divisor);
    if need.iter().any(|&x| x < 0) {
        return Ok(None);
    }
    let edges: Vec<usize> = bits(supp).collect();
    let mut room = vec![0 as Int; n];
    for &e in &edges {
        let (u, v) = g.edge(e);
        room[u] += 1;
        if u != v {
            room[v] += 1;
        }
    }
    if need.iter().zip(&room).any(|(a, b)| a > b) {
        return Ok(None);
    }
    let mut o = PartialOrientation {
        support: supp,
        toward_second: 0,
    };
    fn rec(
        g: &Graph,
        edges: &[usize],
        i: usize,
        need: &mut [Int],
        room: &mut [Int],
        o: &mut PartialOrientation,
    ) -> bool {
        if i == edges.len() {
            return need.iter().all(|&x| x == 0);
        }
        let e = edges[i];
        let (u, v) = g.edge(e);
        room[u] -= 1;
        if u != v {
            room[v] -= 1;
        }
        let choices: &[(usize, bool)] = if u == v {
            &[(0, false)]
        } else {
            &[(0, false), (1, true)]
        };
        for &(side, second) in choices {
            let h = if side == 0 { u } else { v };
            if need[h] == 0 {
                continue;
            }
            need[h] -= 1;
            if need[u] <= room[u] && need[v] <= room[v] {
                if second {
                    o.toward_second |= singleton(e);
                }
                if rec(g, edges, i + 1, need, room, o) {
                    return true;
                }
                o.toward_second &= !singleton(e);
            }
            need[h] += 1;
        }
        room[u] += 1;
        if u != v {
            room[v] += 1;
        }
        false
    }
    Ok(rec(g, &edges, 0, &mut need, &mut room, &mut o).then_some(o))
}

/// `f_*(Γ∖S, D) = (Γ'∖(f^E)^{-1}(S), f_*D)`.
pub fn pushforward_orbit(m: &GraphMorphism, x: &OrbitElement) -> Result<OrbitElement> {
    if x.divisor.len() != m.source.vertex_count() || x.subgraph & !m.source.all_edges() != 0 {
        return Err(Error::Mismatch("element does not live on the source graph".into()));
    }
    let removed_contracted = m.contracted & !x.subgraph;
    let mut d = vec![0; m.target.vertex_count()];
    for (v, &t) in m.vmap.iter().enumerate() {
        d[t] += x.divisor[v];
    }
    for e in bits(removed_contracted) {
        let (u, _) = m.source.edge(e);
        d[m.vmap[u]] += 1;
    }
    Ok(OrbitElement {
        subgraph: m.pull_edges(x.subgraph),
        divisor: d,
    })
}

/// Elements covering `x`: one more edge, with a chip at one of its ends.
pub fn covers(g: &Graph, x: &OrbitElement) -> Vec<OrbitElement> {
    let mut out = Vec::new();
    for e in bits(g.all_edges() & !x.subgraph) {
        let (u, v) = g.edge(e);
        let heads: &[usize] = if u == v { &[u] } else { &[u, v] };
        for &h in heads {
            let mut d = x.divisor.clone();
            d[h] += 1;
            out.push(OrbitElement {
                subgraph: x.subgraph | singleton(e),
                divisor: d,
            });
        }
    }
    out
}

/// Finite upward-closed subset of `O^d(Γ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperSet {
    graph: Graph,
    degree: Int,
    elements: BTreeSet<OrbitElement>,
}

impl UpperSet {
    /// Validates shape, degrees and upward closure.
    pub fn new(graph: Graph, degree: Int, elements: BTreeSet<OrbitElement>) -> Result<Self> {
        let p = UpperSet::from_raw(graph, degree, elements);
        for x in &p.elements {
            p.check_element(x)?;
            for y in covers(&p.graph, x) {
                if !p.elements.contains(&y) {
                    return Err(Error::Mismatch(format!("not upward closed: {x} < {y}")));
                }
            }
        }
        Ok(p)
    }

    /// No validation; used to build deliberately broken sets.
    pub fn from_raw(graph: Graph, degree: Int, elements: BTreeSet<OrbitElement>) -> Self {
        UpperSet {
            graph,
            degree,
            elements,
        }
    }

    fn check_element(&self, x: &OrbitElement) -> Result<()> {
        if x.divisor.len() != self.graph.vertex_count()
            || x.subgraph & !self.graph.all_edges() != 0
        {
            return Err(Error::Mismatch(format!("{x} does not live on the graph")));
        }
        if x.ambient_degree(&self.graph) != self.degree {
            return Err(Error::Mismatch(format!("{x} has the wrong degree")));
        }
        Ok(())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn degree(&self) -> Int {
        self.degree
    }

    pub fn elements(&self) -> &BTreeSet<OrbitElement> {
        &self.elements
    }

    pub fn into_elements(self) -> BTreeSet<OrbitElement> {
        self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &OrbitElement) -> bool {
        self.elements.contains(x)
    }

    /// `P(G)`: divisors sitting on the spanning subgraph `es`.
    pub fn fiber(&self, es: EdgeSet) -> Vec<&Divisor> {
        self.elements
            .iter()
            .filter(|x| x.subgraph == es)
            .map(|x| &x.divisor)
            .collect()
    }

    /// Distinct subgraphs occurring, ascending.
    pub fn subgraphs(&self) -> BTreeSet<EdgeSet> {
        self.elements.iter().map(|x| x.subgraph).collect()
    }

    /// `{D : (Γ, D) ∈ P}`.
    pub fn maximal_elements(&self) -> Vec<Divisor> {
        self.fiber(self.graph.all_edges()).into_iter().cloned().collect()
    }

    /// Minimal elements, i.e. those covering nothing inside the set.
    pub fn minimal_elements(&self) -> Vec<OrbitElement> {
        let g = &self.graph;
        self.elements
            .iter()
            .filter(|x| {
                bits(x.subgraph).all(|e| {
                    let (u, v) = g.edge(e);
                    let heads: &[usize] = if u == v { &[u] } else { &[u, v] };
                    heads.iter().all(|&h| {
                        let mut d = x.divisor.clone();
                        d[h] -= 1;
                        !self.elements.contains(&OrbitElement {
                            subgraph: x.subgraph & !singleton(e),
                            divisor: d,
                        })
                    })
                })
            })
            .cloned()
            .collect()
    }

    /// Elements as text, in set order.
    pub fn to_strings(&self) -> Vec<String> {
        self.elements.iter().map(|x| x.to_string()).collect()
    }
}

/// Smallest upper set containing the seeds, built by single-edge steps.
pub fn upper_closure(g: &Graph, degree: Int, seeds: &[OrbitElement]) -> Result<UpperSet> {
    let mut set = BTreeSet::new();
    let mut queue = VecDeque::new();
    let probe = UpperSet::from_raw(g.clone(), degree, BTreeSet::new());
    for s in seeds {
        probe
            .check_element(s)
            .map_err(|e| Error::Mismatch(format!("inconsistent seed: {e}")))?;
        if set.insert(s.clone()) {
            queue.push_back(s.clone());
        }
    }
    while let Some(x) = queue.pop_front() {
        for y in covers(g, &x) {
            if !set.contains(&y) {
                if set.len() >= CLOSURE_CAP {
                    return Err(Error::Budget(CLOSURE_CAP as u64));
                }
                set.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(UpperSet::from_raw(g.clone(), degree, set))
}

/// If `D(O_G(V_•)) − D(O_G(V̄_•))` is principal on `es`, returns the partition
/// `W_•` read off from the level sets of a chip-firing witness.
pub fn partition_difference_principal(
    g: &Graph,
    es: EdgeSet,
    p: &OrderedPartition,
) -> Result<Option<OrderedPartition>> {
    let o = p.orientation(g, es);
    let diff = divisor::sub(&o.outgoing_divisor(g), &o.reversed(g).outgoing_divisor(g));
    let Some(mut f) = divisor::is_principal(g, es, &diff)? else {
        return Ok(None);
    };
    normalize_per_component(g, es, &mut f);
    let w = levels_descending(g, &f);
    let wo = w.orientation(g, es);
    if wo != o {
        return Err(Error::Mismatch(
            "principal difference but level sets induce another orientation".into(),
        ));
    }
    for e in bits(es) {
        let (u, v) = g.edge(e);
        if (f[u] - f[v]).abs() > 1 {
            return Err(Error::Mismatch(
                "principal difference but level sets are not consecutive".into(),
            ));
        }
    }
    Ok(Some(w))
}

/// Shifts `f` on each component of `es` so that its minimum there is zero.
pub fn normalize_per_component(g: &Graph, es: EdgeSet, f: &mut [Int]) {
    for c in g.components(es, g.all_vertices()) {
        let m = bits(c).map(|v| f[v]).min().unwrap();
        for v in bits(c) {
            f[v] -= m;
        }
    }
}

/// Nonempty level sets of `f`, highest value first.
pub fn levels_descending(g: &Graph, f: &[Int]) -> OrderedPartition {
    let values: BTreeSet<Int> = f.iter().copied().collect();
    let blocks = values
        .iter()
        .rev()
        .map(|&val| {
            (0..g.vertex_count())
                .filter(|&v| f[v] == val)
                .fold(0, |m, v| m | singleton(v))
        })
        .collect();
    OrderedPartition { blocks }
}

/// Biconnected `W` such that some element of `p` keeps no edge across `W`.
pub fn degeneracy_of_upper_set(p: &UpperSet) -> Result<DegeneracySubset> {
    let g = p.graph();
    let subgraphs = p.subgraphs();
    let sets: Vec<VertexSet> = g
        .biconnected_subsets()?
        .into_iter()
        .filter(|&w| subgraphs.iter().any(|&es| g.cut(es, w) == 0))
        .collect();
    DegeneracySubset::validate(g, sets)
}

/// A failure of the concordance criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaViolation {
    pub element: OrbitElement,
    pub partition_orientation: PartialOrientation,
    pub other: PartialOrientation,
    pub concordant: bool,
}

/// Checks, for every `(G, D) ∈ p`, every partition-induced degeneration `A` and
/// every degeneration `B` inside `p`, that `A` and `B` agree on common edges and
/// that `A ∪ B` also lands in `p`.
pub fn theta_complete_check(p: &UpperSet) -> std::result::Result<(), ThetaViolation> {
    let g = p.graph();
    for x in p.elements() {
        let targets = degenerations_in(p, x);
        for a in targets.iter().filter(|a| a.is_partition_induced(g, x.subgraph)) {
            for b in &targets {
                let concordant = a.concordant(b);
                let ok = concordant
                    && a.union(b)
                        .apply(g, x)
                        .is_some_and(|y| p.contains(&y));
                if !ok {
                    return Err(ThetaViolation {
                        element: x.clone(),
                        partition_orientation: *a,
                        other: *b,
                        concordant,
                    });
                }
            }
        }
    }
    Ok(())
}

/// All partial orientations `O` of `x.G` with `x ≥_O y` for some `y ∈ p`.
pub fn degenerations_in(p: &UpperSet, x: &OrbitElement) -> Vec<PartialOrientation> {
    let g = p.graph();
    let edges: Vec<usize> = bits(x.subgraph).collect();
    let mut out = Vec::new();
    let mut d = x.divisor.clone();
    fn rec(
        p: &UpperSet,
        x: &OrbitElement,
        edges: &[usize],
        i: usize,
        o: PartialOrientation,
        d: &mut Divisor,
        out: &mut Vec<PartialOrientation>,
    ) {
        let g = p.graph();
        if i == edges.len() {
            let y = OrbitElement {
                subgraph: x.subgraph & !o.support,
                divisor: d.clone(),
            };
            if p.contains(&y) {
                out.push(o);
            }
            return;
        }
        let e = edges[i];
        rec(p, x, edges, i + 1, o, d, out);
        let (u, v) = g.edge(e);
        let mut with = o;
        with.support |= singleton(e);
        d[u] -= 1;
        rec(p, x, edges, i + 1, with, d, out);
        d[u] += 1;
        if u != v {
            with.toward_second |= singleton(e);
            d[v] -= 1;
            rec(p, x, edges, i + 1, with, d, out);
            d[v] += 1;
        }
    }
    rec(p, x, &edges, 0, PartialOrientation::empty(), &mut d, &mut out);
    let _ = g;
    out
}
