//! Brute-force oracles built from edge lists and definitions only.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use vstab::graph::Graph;
use vstab::orbit::OrbitElement;
use vstab::{Int, VStability};

pub fn ones(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// Vertex sets of the components of `(w, es ∩ edges inside w)`.
pub fn components(g: &Graph, es: u64, w: u64) -> Vec<u64> {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    for e in ones(es) {
        let (u, v) = g.edges()[e];
        if w >> u & 1 == 1 && w >> v & 1 == 1 {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
        }
    }
    let mut by_root: BTreeMap<usize, u64> = BTreeMap::new();
    for v in ones(w) {
        let r = find(&mut parent, v);
        *by_root.entry(r).or_default() |= 1 << v;
    }
    let mut out: Vec<u64> = by_root.into_values().collect();
    out.sort();
    out
}

pub fn all_vertices(g: &Graph) -> u64 {
    (1u64 << g.vertex_count()) - 1
}

pub fn all_edges(g: &Graph) -> u64 {
    if g.edge_count() == 64 {
        u64::MAX
    } else {
        (1u64 << g.edge_count()) - 1
    }
}

pub fn connected(g: &Graph, es: u64, w: u64) -> bool {
    w != 0 && components(g, es, w).len() == 1
}

/// Nontrivial `W` with `Γ[W]` and `Γ[W^c]` connected.
pub fn bcon(g: &Graph) -> Vec<u64> {
    let all = all_vertices(g);
    (1..all)
        .filter(|&w| connected(g, all_edges(g), w) && connected(g, all_edges(g), all & !w))
        .collect()
}

/// Connected `W` whose complement splits into members of `d`, plus `V`.
pub fn extended(g: &Graph, d: &BTreeSet<u64>) -> BTreeSet<u64> {
    let all = all_vertices(g);
    (1..=all)
        .filter(|&w| {
            connected(g, all_edges(g), w)
                && components(g, all_edges(g), all & !w).iter().all(|z| d.contains(z))
        })
        .collect()
}

/// Degenerate subsets read off the sum axiom directly.
pub fn degenerate_sets(n: &VStability) -> BTreeSet<u64> {
    let g = n.graph();
    let all = all_vertices(g);
    n.values()
        .iter()
        .filter(|(&w, &v)| v + n.values()[&(all & !w)] + cut(g, all_edges(g), w) as Int == n.degree())
        .map(|(&w, _)| w)
        .collect()
}

pub fn cut(g: &Graph, es: u64, w: u64) -> usize {
    ones(es)
        .filter(|&e| {
            let (u, v) = g.edges()[e];
            (w >> u & 1) != (w >> v & 1)
        })
        .count()
}

/// Edges of `s` with both ends in `w`, loops included.
pub fn inside(g: &Graph, s: u64, w: u64) -> usize {
    ones(s)
        .filter(|&e| {
            let (u, v) = g.edges()[e];
            w >> u & 1 == 1 && w >> v & 1 == 1
        })
        .count()
}

pub fn acyclic(g: &Graph, es: u64) -> bool {
    let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
    for e in ones(es) {
        let (u, v) = g.edges()[e];
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

pub fn submasks(m: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(m);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & m) };
        Some(cur)
    })
}

/// Spanning trees inside `es`, by subset enumeration.
pub fn tree_count(g: &Graph, es: u64) -> u64 {
    let k = g.vertex_count() - 1;
    submasks(es)
        .filter(|f| f.count_ones() as usize == k && acyclic(g, *f))
        .count() as u64
}

pub fn forest_count(g: &Graph, es: u64) -> u64 {
    submasks(es).filter(|&f| acyclic(g, f)).count() as u64
}

pub fn admissible(g: &Graph, ext: &BTreeSet<u64>, es: u64) -> bool {
    components(g, es, all_vertices(g)).iter().all(|c| ext.contains(c))
}

/// Admissible spanning forests inside `es`.
pub fn admissible_forests(g: &Graph, ext: &BTreeSet<u64>, es: u64) -> Vec<u64> {
    let mut out: Vec<u64> = submasks(es)
        .filter(|&f| acyclic(g, f) && admissible(g, ext, f))
        .collect();
    out.sort();
    out
}

/// Admissible forests with no admissible proper subforest.
pub fn minimal_admissible_forests(g: &Graph, ext: &BTreeSet<u64>) -> Vec<u64> {
    admissible_forests(g, ext, all_edges(g))
        .into_iter()
        .filter(|&f| ones(f).all(|e| !admissible(g, ext, f & !(1 << e))))
        .collect()
}

/// Semistable elements by enumeration over a box derived from the inequalities.
pub fn brute_semistable(n: &VStability) -> BTreeSet<OrbitElement> {
    let g = n.graph();
    let nv = g.vertex_count();
    let all = all_edges(g);
    let allv = all_vertices(g);
    let vals = n.values();
    let mut out = BTreeSet::new();
    for es in 0..=all {
        if es & !all != 0 {
            continue;
        }
        let s = all & !es;
        let target = n.degree() - s.count_ones() as Int;
        if nv == 1 {
            out.insert(OrbitElement::new(es, vec![target]));
            continue;
        }
        let lower_bound = |z: u64| vals[&z] - inside(g, s, z) as Int;
        let hi: Vec<Int> = (0..nv)
            .map(|v| {
                let rest = components(g, all, allv & !(1 << v));
                target - rest.iter().map(|&z| lower_bound(z)).sum::<Int>()
            })
            .collect();
        let lo: Vec<Int> = (0..nv)
            .map(|v| {
                if vals.contains_key(&(1 << v)) {
                    lower_bound(1 << v)
                } else {
                    target - (0..nv).filter(|&u| u != v).map(|u| hi[u]).sum::<Int>()
                }
            })
            .collect();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            continue;
        }
        let mut d = lo.clone();
        loop {
            if d.iter().sum::<Int>() == target
                && vals.iter().all(|(&z, &v)| {
                    ones(z).map(|i| d[i]).sum::<Int>() + inside(g, s, z) as Int >= v
                })
            {
                out.insert(OrbitElement::new(es, d.clone()));
            }
            let mut i = 0;
            while i < nv && d[i] == hi[i] {
                d[i] = lo[i];
                i += 1;
            }
            if i == nv {
                break;
            }
            d[i] += 1;
        }
    }
    out
}

pub fn fiber(p: &BTreeSet<OrbitElement>, es: u64) -> Vec<Vec<Int>> {
    p.iter().filter(|x| x.subgraph == es).map(|x| x.divisor.clone()).collect()
}

type Q = Ratio<i128>;

/// Whether `d` is the principal divisor of an integer function on `(V, es)`.
pub fn principal(g: &Graph, es: u64, d: &[Int]) -> bool {
    let nv = g.vertex_count();
    let comps = components(g, es, all_vertices(g));
    if comps.iter().any(|&c| ones(c).map(|v| d[v]).sum::<Int>() != 0) {
        return false;
    }
    let fixed: Vec<usize> = comps.iter().map(|&c| c.trailing_zeros() as usize).collect();
    let free: Vec<usize> = (0..nv).filter(|v| !fixed.contains(v)).collect();
    if free.is_empty() {
        return true;
    }
    let idx: BTreeMap<usize, usize> = free.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let k = free.len();
    let mut a = vec![vec![Q::from_integer(0); k + 1]; k];
    for e in ones(es) {
        let (u, v) = g.edges()[e];
        if u == v {
            continue;
        }
        for (x, y) in [(u, v), (v, u)] {
            if let Some(&r) = idx.get(&x) {
                a[r][r] += 1;
                if let Some(&c) = idx.get(&y) {
                    a[r][c] -= 1;
                }
            }
        }
    }
    for (r, &v) in free.iter().enumerate() {
        a[r][k] = Q::from_integer(d[v] as i128);
    }
    for col in 0..k {
        let piv = (col..k).find(|&r| a[r][col] != Q::from_integer(0)).expect("reduced Laplacian is invertible");
        a.swap(col, piv);
        let p = a[col][col];
        for c in col..=k {
            a[col][c] /= p;
        }
        for r in 0..k {
            if r != col && a[r][col] != Q::from_integer(0) {
                let factor = a[r][col];
                for c in col..=k {
                    let delta = factor * a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    a.iter().all(|row| row[k].is_integer())
}

/// Number of linear-equivalence classes among `divs` on `(V, es)`.
pub fn class_count(g: &Graph, es: u64, divs: &[Vec<Int>]) -> usize {
    let mut reps: Vec<&Vec<Int>> = Vec::new();
    for d in divs {
        if !reps.iter().any(|r| {
            let diff: Vec<Int> = d.iter().zip(r.iter()).map(|(a, b)| a - b).collect();
            principal(g, es, &diff)
        }) {
            reps.push(d);
        }
    }
    reps.len()
}

/// Product of the component tree counts: the order of the Picard group.
pub fn pic_order(g: &Graph, es: u64) -> u64 {
    components(g, es, all_vertices(g))
        .iter()
        .map(|&c| {
            let inner: u64 = ones(es)
                .filter(|&e| {
                    let (u, v) = g.edges()[e];
                    c >> u & 1 == 1 && c >> v & 1 == 1
                })
                .fold(0, |m, e| m | 1 << e);
            let k = c.count_ones() as usize - 1;
            submasks(inner)
                .filter(|f| f.count_ones() as usize == k && acyclic(g, *f))
                .count() as u64
        })
        .product()
}

/// Multidegree of `d` on the components of `es`.
pub fn multidegree(g: &Graph, es: u64, d: &[Int]) -> Vec<Int> {
    components(g, es, all_vertices(g))
        .iter()
        .map(|&c| ones(c).map(|v| d[v]).sum())
        .collect()
}

/// Some multidegree class whose members hit every Picard class.
pub fn surjective(g: &Graph, es: u64, divs: &[Vec<Int>]) -> bool {
    let mut groups: BTreeMap<Vec<Int>, Vec<Vec<Int>>> = BTreeMap::new();
    for d in divs {
        groups.entry(multidegree(g, es, d)).or_default().push(d.clone());
    }
    let order = pic_order(g, es) as usize;
    groups.values().any(|ds| class_count(g, es, ds) == order)
}

/// Every arc of a cycle is cut by exactly two edges.
const ARC_CUT: Int = 2;

fn cyc_arc(n: usize, start: usize, len: usize) -> u64 {
    (0..len).fold(0, |m, i| m | 1 << ((start + i) % n))
}

/// Every V-stability on `C_n` of degree `d` normalized by `n_{v} = -1` for
/// `v < n - 1`, with `n_{n-1}` searched in `[d - 3n - 3, d + 3n + 3]`.
/// Values are assigned pair by pair (an arc and its complement) and every
/// axiom is checked as soon as its sets carry values.
pub fn cycle_stabilities(n: usize, d: Int) -> Vec<BTreeMap<u64, Int>> {
    let full = (1u64 << n) - 1;
    let mut arcs: Vec<u64> = Vec::new();
    for len in 1..n {
        for start in 0..n {
            let a = cyc_arc(n, start, len);
            if !arcs.contains(&a) {
                arcs.push(a);
            }
        }
    }
    // One representative per complementary pair: the shorter arc, or the one
    // holding vertex 0 at half length.
    let mut pairs: Vec<u64> = arcs
        .iter()
        .copied()
        .filter(|&a| {
            let (la, lc) = (a.count_ones(), n as u32 - a.count_ones());
            la < lc || (la == lc && a & 1 == 1)
        })
        .collect();
    pairs.sort_by_key(|a| (a.count_ones(), *a));


    let mut triples: Vec<[u64; 3]> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                triples.push([
                    cyc_arc(n, i + 1, j - i),
                    cyc_arc(n, j + 1, k - j),
                    cyc_arc(n, k + 1, n - k + i),
                ]);
            }
        }
    }
    let adjacent = |a: u64, b: u64| -> Int {
        (0..n)
            .filter(|&i| {
                let j = (i + 1) % n;
                (a >> i & 1 == 1 && b >> j & 1 == 1) || (b >> i & 1 == 1 && a >> j & 1 == 1)
            })
            .count() as Int
    };
    let triple_ok = |vals: &BTreeMap<u64, Int>, t: &[u64; 3]| -> Option<bool> {
        let v: Vec<Int> = t.iter().map(|w| vals.get(w).copied()).collect::<Option<_>>()?;
        let degen = |w: u64| vals[&w] + vals[&(full & !w)] + ARC_CUT - d == 0;
        let count = t.iter().filter(|&&w| degen(w)).count();
        let excess = v.iter().sum::<Int>() + adjacent(t[0], t[1]) + adjacent(t[0], t[2]) + adjacent(t[1], t[2]) - d;
        Some(match count {
            0 => excess == 1 || excess == 2,
            1 => excess == 1,
            2 => false,
            _ => excess == 0,
        })
    };
    let mut out = Vec::new();
    let window = 3 * n as Int + 3;
    fn rec(
        i: usize,
        pairs: &[u64],
        full: u64,
        d: Int,
        vals: &mut BTreeMap<u64, Int>,
        range: &dyn Fn(u64, &BTreeMap<u64, Int>) -> Vec<Int>,
        check: &dyn Fn(&BTreeMap<u64, Int>) -> bool,
        out: &mut Vec<BTreeMap<u64, Int>>,
    ) {
        if i == pairs.len() {
            out.push(vals.clone());
            return;
        }
        let w = pairs[i];
        let c = full & !w;
        for v in range(w, vals) {
            for eps in 0..=1 {
                vals.insert(w, v);
                vals.insert(c, d - ARC_CUT - v + eps);
                if check(vals) {
                    rec(i + 1, pairs, full, d, vals, range, check, out);
                }
                vals.remove(&w);
                vals.remove(&c);
            }
        }
    }
    let range = |w: u64, vals: &BTreeMap<u64, Int>| -> Vec<Int> {
        if w.count_ones() == 1 {
            let v = w.trailing_zeros() as usize;
            if v < n - 1 {
                vec![-1]
            } else {
                (d - window..=d + window).collect()
            }
        } else {
            // W = {first} ∪ rest, both shorter arcs; the triple with W^c pins n_W.
            let first = (0..n).find(|&s| cyc_arc(n, s, w.count_ones() as usize) == w).unwrap();
            let a = 1u64 << first;
            let b = w & !a;
            let base = vals[&a] + vals[&b];
            (base - 1..=base + 2).collect()
        }
    };
    let check = |vals: &BTreeMap<u64, Int>| triples.iter().all(|t| triple_ok(vals, t) != Some(false));
    let mut vals = BTreeMap::new();
    rec(0, &pairs, full, d, &mut vals, &range, &check, &mut out);
    for sol in &out {
        let last = sol[&(1u64 << (n - 1))];
        assert!(last > d - window && last < d + window, "search window reached");
    }
    out
}
