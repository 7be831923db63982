//! Seeded random instances, the curated instance list, and the verification
//! battery run by the `suite` command.
//!
//! Random graphs come from `ChaCha8Rng::seed_from_u64(seed)`: a random
//! recursive tree (vertex `v` hangs off a uniform earlier vertex) followed by
//! uniform extra edges, parallel edges and loops allowed.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::CurveModel;
use crate::degeneracy::DegeneracySubset;
use crate::error::Result;
use crate::graph::{bits, singleton, EdgeSet, Graph};
use crate::models::{self, CyclicStabilityDatum};
use crate::orbit::{theta_complete_check, OrbitElement, UpperSet};
use crate::ptbd::{pt_report, ForestFunction};
use crate::semistable::{
    pushforward_inclusion_check, restriction_product_check, semistable_fast, semistable_oracle,
};
use crate::vstability::{Polarization, VStability};
use crate::{Int, Rational};

/// A named stability used by the battery.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub stability: VStability,
}

/// Random connected multigraph with `vertices` vertices and `edges` edges.
pub fn random_graph(rng: &mut ChaCha8Rng, vertices: usize, edges: usize, loops: bool) -> Graph {
    assert!(vertices >= 1 && edges + 1 >= vertices);
    let mut list = Vec::with_capacity(edges);
    for v in 1..vertices {
        list.push((rng.gen_range(0..v), v));
    }
    while list.len() < edges {
        let u = rng.gen_range(0..vertices);
        let v = rng.gen_range(0..vertices);
        if u == v && (!loops || rng.gen_bool(0.7)) {
            continue;
        }
        list.push((u, v));
    }
    Graph::new(vertices, list).expect("generated graph is valid")
}

/// Random polarization of integral degree with denominators dividing `q`.
pub fn random_polarization(rng: &mut ChaCha8Rng, g: &Graph, q: Int) -> Polarization {
    let n = g.vertex_count();
    let d: Int = rng.gen_range(-2..=2);
    let mut num: Vec<Int> = (0..n).map(|_| rng.gen_range(-3 * q..=3 * q)).collect();
    num[n - 1] = d * q - num[..n - 1].iter().sum::<Int>();
    let values = num.into_iter().map(|a| Rational::new(a, q)).collect();
    Polarization::new(g, values).expect("polarization on a valid graph")
}

/// A general polarization, redrawn until no biconnected subset is degenerate.
pub fn random_general_polarization(rng: &mut ChaCha8Rng, g: &Graph) -> Polarization {
    loop {
        let phi = random_polarization(rng, g, 101);
        if phi.is_general().expect("enumerable graph") {
            return phi;
        }
    }
}

/// Random classical stability with half-integral polarization, so that
/// degenerate subsets are common.
pub fn random_classical(rng: &mut ChaCha8Rng, g: &Graph) -> VStability {
    let q = if rng.gen_bool(0.75) { 2 } else { 6 };
    VStability::from_polarization(&random_polarization(rng, g, q)).expect("classical stability")
}

fn from_values(g: &Graph, degree: Int, values: &[(Vec<usize>, Int)]) -> VStability {
    let map = values
        .iter()
        .map(|(w, v)| (crate::graph::set_from_slice(w), *v))
        .collect();
    VStability::validate(g, degree, map).expect("curated stability is valid")
}

/// The curated list: vine, cycles, a tree family, `K_4` and seeded randoms.
pub fn curated_suite(seed: u64, randoms: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    let v2 = Graph::vine(2);
    out.push(Instance {
        name: "V2 general".into(),
        stability: from_values(&v2, 1, &[(vec![0], 0), (vec![1], 0)]),
    });
    out.push(Instance {
        name: "V2 degenerate".into(),
        stability: from_values(&v2, 0, &[(vec![0], -1), (vec![1], -1)]),
    });
    let c3 = Graph::cycle(3);
    let c3_values: BTreeMap<_, _> = c3
        .biconnected_subsets()
        .expect("small graph")
        .into_iter()
        .map(|w| (w, -1))
        .collect();
    out.push(Instance {
        name: "C3 all -1".into(),
        stability: VStability::validate(&c3, 0, c3_values).expect("valid"),
    });
    for (name, blocks, f) in [
        ("C4 mixed", vec![0b0101u64, 0b1010], vec![0, 0, 0, 0]),
        ("C4 general", vec![0b0001, 0b0010, 0b0100, 0b1000], vec![1, 0, 0, 0]),
    ] {
        let datum = CyclicStabilityDatum::new(4, blocks, f).expect("valid datum");
        out.push(Instance {
            name: name.into(),
            stability: models::cycle_vstability(&datum).expect("valid"),
        });
    }
    let p3 = Graph::path(3);
    for (es, d) in [(0b11u64, vec![0, 0, 0]), (0b10, vec![0, 0, 0]), (0, vec![0, 1, -1])] {
        let x = OrbitElement::new(es, d);
        let (phi, _) = models::tree_model(&p3, &x).expect("tree model");
        out.push(Instance {
            name: format!("P3 tree {x}"),
            stability: VStability::from_polarization(&phi).expect("valid"),
        });
    }
    let k4 = Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).expect("K4");
    out.push(Instance {
        name: "K4 zero".into(),
        stability: VStability::from_polarization(
            &Polarization::from_integers(&k4, &[0, 0, 0, 0]).expect("valid"),
        )
        .expect("valid"),
    });
    let genus = Graph::vine(2).with_genera(vec![1, 0]).expect("valid");
    let (n, _) = models::max_degenerate_model(&CurveModel::new(genus).expect("connected"))
        .expect("canonical model");
    out.push(Instance {
        name: "V2 genus (1,0) canonical".into(),
        stability: n,
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..randoms {
        let edges = rng.gen_range(5..=7);
        let g = random_graph(&mut rng, 5, edges, true);
        out.push(Instance {
            name: format!("random 5-vertex #{i}"),
            stability: random_classical(&mut rng, &g),
        });
    }
    out
}

/// Outcome of one criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub checked: u64,
    pub passed: u64,
    pub ok: bool,
    /// First few failures, for diagnosis.
    pub failures: Vec<String>,
}

impl CriterionResult {
    fn from_checks(id: u32, name: &str, checks: Vec<(String, Result<bool>)>) -> Self {
        let checked = checks.len() as u64;
        let mut passed = 0;
        let mut failures = Vec::new();
        for (label, r) in checks {
            match r {
                Ok(true) => passed += 1,
                Ok(false) => failures.push(label),
                Err(e) => failures.push(format!("{label}: {e}")),
            }
        }
        failures.truncate(5);
        CriterionResult {
            id,
            name: name.into(),
            checked,
            passed,
            ok: passed == checked && checked > 0,
            failures,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub size: String,
    pub criteria: Vec<CriterionResult>,
    pub all_passed: bool,
}

/// Suite size: number of random graphs for the Kirchhoff criteria and of
/// random 5-vertex instances in the curated list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteSize {
    Small,
    Medium,
}

impl SuiteSize {
    fn randoms(self) -> (usize, usize) {
        match self {
            SuiteSize::Small => (25, 3),
            SuiteSize::Medium => (60, 8),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SuiteSize::Small => "small",
            SuiteSize::Medium => "medium",
        }
    }
}

/// Spanning-tree count of the spanning subgraph `es`.
pub fn subgraph_tree_count(g: &Graph, es: EdgeSet) -> u64 {
    let edges = bits(es).map(|e| g.edge(e)).collect();
    Graph::new(g.vertex_count(), edges)
        .expect("subgraph of a valid graph")
        .tree_count()
}

/// Random Kirchhoff instances: `(graph, general stability)`.
pub fn kirchhoff_instances(seed: u64, count: usize) -> Vec<VStability> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4b49_5243);
    (0..count)
        .map(|_| {
            let v = rng.gen_range(2..=6);
            let e = rng.gen_range(v - 1..=9);
            let g = random_graph(&mut rng, v, e, true);
            VStability::from_polarization(&random_general_polarization(&mut rng, &g))
                .expect("general stability")
        })
        .collect()
}

/// Random classical (possibly degenerate) instances.
pub fn classical_instances(seed: u64, count: usize) -> Vec<VStability> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4745_4e4b);
    (0..count)
        .map(|_| {
            let v = rng.gen_range(2..=6);
            let e = rng.gen_range(v - 1..=9);
            let g = random_graph(&mut rng, v, e, true);
            random_classical(&mut rng, &g)
        })
        .collect()
}

/// `|P(G)| = c_D(G)` on every admissible `G`; with `trees`, also against the
/// spanning-tree count.
fn counts_match(n: &VStability, trees: bool) -> Result<bool> {
    let p = semistable_fast(n)?;
    let g = n.graph();
    let deg = n.degeneracy();
    for es in deg.admissible_subgraphs() {
        let count = p.fiber(es).len() as u64;
        if count != deg.complexity(es)? {
            return Ok(false);
        }
        if trees && count != subgraph_tree_count(g, es) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn minimal_forests_single(n: &VStability, p: &UpperSet) -> bool {
    n.degeneracy()
        .minimal_admissible()
        .into_iter()
        .all(|f| p.fiber(f).len() == 1)
}

fn round_trip(n: &VStability) -> Result<bool> {
    let i = ForestFunction::of_stability(n)?;
    let p = semistable_oracle(n)?;
    Ok(i.to_stability()? == *n && i.bd_set()? == p)
}

fn pt_battery(n: &VStability) -> Result<bool> {
    let p = semistable_fast(n)?;
    let report = pt_report(&p, n.degeneracy())?;
    if !(report.is_pt() && report.is_numerical()) {
        return Ok(false);
    }
    let g = n.graph();
    for top in p.maximal_elements() {
        let mut elements = p.elements().clone();
        elements.remove(&OrbitElement::new(g.all_edges(), top));
        let broken = UpperSet::from_raw(g.clone(), p.degree(), elements);
        let r = pt_report(&broken, n.degeneracy())?;
        let whole = r.record(g.all_edges()).expect("whole graph is admissible");
        if whole.surjective && whole.count == whole.complexity {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every legal deletion/contraction triple for `deg`.
pub fn deletion_contraction_all(deg: &DegeneracySubset) -> Result<bool> {
    let g = deg.graph();
    for es in deg.admissible_subgraphs() {
        for e in bits(es & !g.loops()) {
            if !deg.is_admissible(es & !singleton(e)) {
                continue;
            }
            if !deg.deletion_contraction_check(es, e)?.holds() {
                return Ok(false);
            }
        }
        if deg.complexity_recursive(es)? != deg.complexity(es)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Push-forward inclusion along every forest contraction and the product rule
/// on every admissible subgraph.
pub fn functoriality_all(n: &VStability) -> Result<bool> {
    let g = n.graph();
    let p = semistable_oracle(n)?;
    for t in 1..=g.all_edges() {
        if t & g.loops() != 0 || !g.is_forest(t) {
            continue;
        }
        if !pushforward_inclusion_check(&g.contract(t), n, &p)? {
            return Ok(false);
        }
    }
    for es in n.degeneracy().admissible_subgraphs() {
        if !restriction_product_check(n, es, &p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Forest count at the whole graph for the canonical maximally degenerate model.
pub fn max_degenerate_count(g: &Graph) -> Result<bool> {
    let (_, p) = models::max_degenerate_model(&CurveModel::new(g.clone())?)?;
    Ok(p.fiber(g.all_edges()).len() == g.spanning_forests().len())
}

fn dc_degeneracies(seed: u64) -> Vec<DegeneracySubset> {
    let mut out = Vec::new();
    let mut graphs = vec![Graph::vine(2), Graph::vine(3), Graph::cycle(3), Graph::cycle(4), Graph::path(3)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4443);
    for _ in 0..4 {
        let v = rng.gen_range(3..=6);
        let e = rng.gen_range(v - 1..=8);
        graphs.push(random_graph(&mut rng, v, e, true));
    }
    for g in graphs {
        out.push(DegeneracySubset::empty(&g).expect("small graph"));
        out.push(DegeneracySubset::maximal(&g).expect("small graph"));
        out.push(random_classical(&mut rng, &g).degeneracy().clone());
    }
    out
}

/// Runs all twelve criteria.
pub fn run_suite(seed: u64, size: SuiteSize) -> SuiteReport {
    let (kirchhoff, randoms) = size.randoms();
    let suite = curated_suite(seed, randoms);
    let per_instance = |f: &(dyn Fn(&VStability) -> Result<bool> + Sync)| -> Vec<(String, Result<bool>)> {
        suite
            .par_iter()
            .map(|inst| (inst.name.clone(), f(&inst.stability)))
            .collect()
    };
    let mut criteria = Vec::new();

    let k = kirchhoff_instances(seed, kirchhoff);
    criteria.push(CriterionResult::from_checks(
        1,
        "kirchhoff baseline",
        k.par_iter()
            .enumerate()
            .map(|(i, n)| (format!("random general #{i}"), counts_match(n, true)))
            .collect(),
    ));
    let c = classical_instances(seed, kirchhoff);
    criteria.push(CriterionResult::from_checks(
        2,
        "generalized kirchhoff",
        c.par_iter()
            .enumerate()
            .map(|(i, n)| (format!("random classical #{i}"), counts_match(n, false)))
            .collect(),
    ));
    criteria.push(CriterionResult::from_checks(
        3,
        "oracle equivalence",
        per_instance(&|n| Ok(semistable_fast(n)? == semistable_oracle(n)?)),
    ));
    criteria.push(CriterionResult::from_checks(4, "round trips", per_instance(&round_trip)));
    criteria.push(CriterionResult::from_checks(
        5,
        "minimal forest uniqueness",
        per_instance(&|n| Ok(minimal_forests_single(n, &semistable_fast(n)?))),
    ));
    criteria.push(CriterionResult::from_checks(6, "pt battery", per_instance(&pt_battery)));
    criteria.push(CriterionResult::from_checks(
        7,
        "deletion contraction",
        dc_degeneracies(seed)
            .par_iter()
            .enumerate()
            .map(|(i, d)| (format!("degeneracy #{i}"), deletion_contraction_all(d)))
            .collect(),
    ));
    criteria.push(CriterionResult::from_checks(
        8,
        "functoriality",
        suite
            .par_iter()
            .filter(|inst| inst.stability.graph().vertex_count() <= 5)
            .map(|inst| (inst.name.clone(), functoriality_all(&inst.stability)))
            .collect(),
    ));
    criteria.push(CriterionResult::from_checks(
        9,
        "theta criterion",
        per_instance(&|n| Ok(theta_complete_check(&semistable_fast(n)?).is_ok())),
    ));
    let mut md_graphs = vec![
        ("C3".to_string(), Graph::cycle(3)),
        ("V2".to_string(), Graph::vine(2)),
        ("C4".to_string(), Graph::cycle(4)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4d44);
    for i in 0..10 {
        let v = rng.gen_range(2..=5);
        let e = rng.gen_range(v - 1..=7);
        md_graphs.push((format!("random #{i}"), random_graph(&mut rng, v, e, true)));
    }
    criteria.push(CriterionResult::from_checks(
        10,
        "maximally degenerate counts",
        md_graphs
            .par_iter()
            .map(|(name, g)| (name.clone(), max_degenerate_count(g)))
            .collect(),
    ));
    let cycle_cases: Vec<(usize, Int)> = (3..=5).flat_map(|n| (-1..=1).map(move |d| (n, d))).collect();
    criteria.push(CriterionResult::from_checks(
        11,
        "cycle classification",
        cycle_cases
            .par_iter()
            .map(|&(n, d)| {
                let r = models::classify_cycle(n, d).map(|c| n != 3 || c.translation_classes == 6);
                (format!("C{n} degree {d}"), r)
            })
            .collect(),
    ));
    let trees = [("P3", Graph::path(3)), ("star4", Graph::star(3))];
    criteria.push(CriterionResult::from_checks(
        12,
        "tree classification",
        trees
            .iter()
            .flat_map(|(name, t)| {
                (-1..=1).map(move |d| (format!("{name} degree {d}"), models::tree_anti_order_check(t, d, 1)))
            })
            .collect(),
    ));
    let all_passed = criteria.iter().all(|c| c.ok);
    SuiteReport {
        seed,
        size: size.name().into(),
        criteria,
        all_passed,
    }
}
