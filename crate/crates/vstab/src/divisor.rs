//! Divisors, chip-firing, principality and Picard classes.

use crate::error::{Error, Result};
use crate::graph::{bits, singleton, EdgeSet, Graph, VertexSet};
use crate::{linalg, Int, Wide};

/// Integer per vertex.
pub type Divisor = Vec<Int>;

pub fn degree(d: &[Int]) -> Int {
    d.iter().sum()
}

/// `D_W`.
pub fn degree_on(d: &[Int], w: VertexSet) -> Int {
    bits(w).map(|v| d[v]).sum()
}

pub fn add(a: &[Int], b: &[Int]) -> Divisor {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Int], b: &[Int]) -> Divisor {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `div(f)` on the spanning subgraph `es`.
pub fn principal_divisor(g: &Graph, es: EdgeSet, f: &[Int]) -> Divisor {
    let mut d = vec![0; g.vertex_count()];
    for e in bits(es) {
        let (u, v) = g.edge(e);
        d[u] += f[v] - f[u];
        d[v] += f[u] - f[v];
    }
    d
}

/// Fires the set `u` `times` times on `es`: every edge leaving `u` moves a chip out.
fn fire(g: &Graph, es: EdgeSet, u: VertexSet, times: Int, d: &mut [Int]) {
    for e in bits(g.edges_between(es, u, g.complement(u))) {
        let (a, b) = g.edge(e);
        let (inside, outside) = if u >> a & 1 == 1 { (a, b) } else { (b, a) };
        d[inside] -= times;
        d[outside] += times;
    }
}

/// Witness `f` with `div(f) = d` on `es`, if one exists. The witness vanishes
/// at the smallest vertex of every component.
pub fn is_principal(g: &Graph, es: EdgeSet, d: &[Int]) -> Result<Option<Vec<Int>>> {
    let mut f = vec![0; g.vertex_count()];
    let lap = g.laplacian(es);
    for comp in g.components(es, g.all_vertices()) {
        let deg = degree_on(d, comp);
        if deg != 0 {
            return Err(Error::Mismatch(format!(
                "divisor has degree {deg} on component {comp:#x}"
            )));
        }
        let verts: Vec<usize> = bits(comp).collect();
        if verts.len() == 1 {
            continue;
        }
        // div(f) = -L f, with the base vertex pinned to zero.
        let a: Vec<Vec<Wide>> = verts[1..]
            .iter()
            .map(|&r| verts[1..].iter().map(|&c| lap[r][c]).collect())
            .collect();
        let b: Vec<Wide> = verts[1..].iter().map(|&r| -(d[r] as Wide)).collect();
        match linalg::solve_integral(&a, &b) {
            Some(x) => {
                for (&v, val) in verts[1..].iter().zip(x) {
                    f[v] = val as Int;
                }
            }
            None => return Ok(None),
        }
    }
    Ok(Some(f))
}

/// Canonical representative of the class of `d` modulo principal divisors on
/// `es`: the reduced divisor of each component with respect to its smallest vertex.
pub fn pic_class(g: &Graph, es: EdgeSet, d: &[Int]) -> Divisor {
    let mut d = d.to_vec();
    for comp in g.components(es, g.all_vertices()) {
        reduce_component(g, es, comp, &mut d);
    }
    d
}

fn reduce_component(g: &Graph, es: EdgeSet, comp: VertexSet, d: &mut [Int]) {
    let q = comp.trailing_zeros() as usize;
    if comp == singleton(q) {
        return;
    }
    // Breadth-first levels from the base.
    let mut levels: Vec<VertexSet> = vec![singleton(q)];
    let mut seen = singleton(q);
    loop {
        let last = *levels.last().unwrap();
        let next = bits(g.edges_between(es, last, comp & !seen))
            .map(|e| {
                let (a, b) = g.edge(e);
                singleton(a) | singleton(b)
            })
            .fold(0, |m, x| m | x)
            & !seen;
        if next == 0 {
            break;
        }
        seen |= next;
        levels.push(next);
    }
    // Make every non-base vertex nonnegative, deepest level first.
    for k in (0..levels.len() - 1).rev() {
        let inner: VertexSet = levels[..=k].iter().fold(0, |m, &l| m | l);
        let mut times = 0;
        for v in bits(levels[k + 1]) {
            if d[v] < 0 {
                let incoming = g.val(es, singleton(v), inner) as Int;
                times = times.max((-d[v] + incoming - 1) / incoming);
            }
        }
        if times > 0 {
            fire(g, es, inner, times, d);
        }
    }
    // Dhar burning until the whole component burns.
    loop {
        let mut burnt = singleton(q);
        loop {
            let mut grew = false;
            for v in bits(comp & !burnt) {
                if g.val(es, singleton(v), burnt) as Int > d[v] {
                    burnt |= singleton(v);
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        if burnt == comp {
            break;
        }
        fire(g, es, comp & !burnt, 1, d);
    }
}

/// Order of the Picard group: product of the component tree counts.
pub fn pic_order(g: &Graph, es: EdgeSet) -> u64 {
    g.components(es, g.all_vertices())
        .into_iter()
        .map(|c| g.subgraph(c, es).0.tree_count())
        .product()
}
