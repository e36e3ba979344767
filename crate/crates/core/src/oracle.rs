//! Brute-force references for the test suites and the `check` command.
//!
//! Nothing here uses scripts, component levels or the super-stabilization
//! loop: the critical set comes from adding chips to `a_max` one at a time,
//! minimal scripts and super-stability come from scanning whole boxes, and
//! components come from a reachability matrix.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{stabilize, Configuration, Script};
use crate::error::{Error, Result};
use crate::graph::Digraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphGenSpec {
    /// Upper bound on the number of non-sink vertices; at least 2.
    pub max_vertices: usize,
    pub max_multiplicity: u64,
    pub seed: u64,
}

impl GraphGenSpec {
    pub fn new(max_vertices: usize, max_multiplicity: u64, seed: u64) -> Self {
        GraphGenSpec { max_vertices, max_multiplicity, seed }
    }
}

impl Default for GraphGenSpec {
    fn default() -> Self {
        GraphGenSpec { max_vertices: 5, max_multiplicity: 3, seed: 0 }
    }
}

/// Probability that an ordered vertex pair receives edges.
const EDGE_PROBABILITY: f64 = 0.3;

/// Random sink digraph with `2..=max_vertices` non-sink vertices. Vertices
/// are attached in random order to the sink or to an earlier vertex, so the
/// sink is always reachable; further edges are sprinkled on top.
pub fn generate_graph(spec: GraphGenSpec) -> Result<Digraph> {
    if spec.max_vertices < 2 || spec.max_multiplicity == 0 {
        return Err(Error::Invariant(format!("invalid generator spec {spec:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = rng.gen_range(2..=spec.max_vertices);
    let sink = n + 1;
    let mut mult = vec![vec![0u64; n + 2]; n + 2];

    for u in 1..=n {
        for v in 1..=n + 1 {
            if u != v && rng.gen_bool(EDGE_PROBABILITY) {
                mult[u][v] = rng.gen_range(1..=spec.max_multiplicity);
            }
        }
    }
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(&mut rng);
    for (k, &v) in order.iter().enumerate() {
        let parent = match rng.gen_range(0..=k) {
            0 => sink,
            j => order[j - 1],
        };
        if mult[v][parent] == 0 {
            mult[v][parent] = 1;
        }
    }

    let edges = (1..=n).flat_map(|u| {
        let row = mult[u].clone();
        (1..=n + 1).map(move |v| (u, v, row[v]))
    });
    Digraph::new(n + 1, sink, edges)
}

fn check_budget(g: &Digraph, budget: u128) -> Result<()> {
    let size = g.stable_count();
    if size > budget {
        Err(Error::BudgetExceeded { size, budget })
    } else {
        Ok(())
    }
}

/// Critical configurations as the closure of `{a_max}` under
/// `a -> (a + e_v)^o`.
pub fn closure_critical(g: &Digraph, budget: u128) -> Result<BTreeSet<Configuration>> {
    check_budget(g, budget)?;
    let start = Configuration::new(g.a_max());
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(a) = queue.pop_front() {
        for v in 0..g.n() {
            let mut bumped = a.clone().into_vec();
            bumped[v] += 1;
            let next = stabilize(g, &Configuration::new(bumped))?.stable;
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

/// Row vector times the reduced Laplacian, from the edge multiplicities.
fn times_laplacian(g: &Digraph, s: &[i64]) -> Vec<i64> {
    (0..g.n())
        .map(|j| {
            let out = s[j] * g.out_degree(j) as i64;
            let incoming: i64 = (0..g.n()).map(|i| s[i] * g.multiplicity(i, j) as i64).sum();
            out - incoming
        })
        .collect()
}

/// Non-sink strongly connected components via the reachability matrix.
pub fn components_by_reachability(g: &Digraph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut reach = vec![vec![false; n]; n];
    for (u, row) in reach.iter_mut().enumerate() {
        row[u] = true;
        for (v, r) in row.iter_mut().enumerate() {
            if g.multiplicity(u, v) > 0 {
                *r = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for u in 0..n {
        if assigned[u] {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&v| reach[u][v] && reach[v][u]).collect();
        for &v in &comp {
            assigned[v] = true;
        }
        out.push(comp);
    }
    out
}

/// Calls `visit` on every script in `[0, bound]^n` except zero.
fn scan_box<F: FnMut(&[i64])>(n: usize, bound: i64, mut visit: F) {
    let mut s = vec![0i64; n];
    loop {
        let mut j = n;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            if s[j] < bound {
                s[j] += 1;
                break;
            }
            s[j] = 0;
        }
        visit(&s);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// No G-strongly positive script inside the box.
    NotFound,
    /// The componentwise least G-strongly positive script in the box.
    Least(Script),
    /// The box has G-strongly positive scripts but no least one; these are
    /// the minimal ones.
    Incomparable(Vec<Script>),
}

/// Exhaustive scan of `[0, bound]^n` for G-strongly positive scripts.
pub fn min_strongly_positive_search(g: &Digraph, bound: i64) -> SearchOutcome {
    let n = g.n();
    let components = components_by_reachability(g);
    let mut found: Vec<Vec<i64>> = Vec::new();
    scan_box(n, bound.max(0), |s| {
        let sd = times_laplacian(g, s);
        let positive = sd.iter().all(|&x| x >= 0) && sd.iter().any(|&x| x > 0);
        if positive && components.iter().all(|c| c.iter().any(|&v| sd[v] > 0)) {
            found.push(s.to_vec());
        }
    });
    if found.is_empty() {
        return SearchOutcome::NotFound;
    }
    found.sort_by_key(|s| (s.iter().sum::<i64>(), s.clone()));
    let meet: Vec<i64> = (0..n).map(|i| found.iter().map(|s| s[i]).min().unwrap_or(0)).collect();
    if found[0] == meet {
        return SearchOutcome::Least(Script::new(meet).expect("non-negative"));
    }
    let dominates = |a: &[i64], b: &[i64]| a.iter().zip(b).all(|(x, y)| x <= y);
    let mut minimal: Vec<Script> = Vec::new();
    for s in &found {
        if !minimal.iter().any(|m| dominates(m, s)) {
            minimal.push(Script::new(s.clone()).expect("non-negative"));
        }
    }
    SearchOutcome::Incomparable(minimal)
}

/// First script `0 ≺ σ ⪯ (bound, ..., bound)` with `a - σΔ ⪰ 0`, if any.
pub fn superstable_box_witness(g: &Digraph, a: &Configuration, bound: i64) -> Option<Script> {
    let mut found = None;
    scan_box(g.n(), bound.max(0), |s| {
        if found.is_none() {
            let sd = times_laplacian(g, s);
            if a.iter().zip(&sd).all(|(x, d)| x >= d) {
                found = Some(Script::new(s.to_vec()).expect("non-negative"));
            }
        }
    });
    found
}

/// Definition-level super-stability check inside a cube of side `bound`.
pub fn superstable_box_search(g: &Digraph, a: &Configuration, bound: i64) -> bool {
    superstable_box_witness(g, a, bound).is_none()
}

/// [`superstable_box_search`] for every stable configuration of one graph:
/// the cube is scanned once and only images `σΔ ⪯ a_max` are kept.
#[derive(Debug, Clone)]
pub struct SuperstableBoxOracle {
    images: Vec<Vec<i64>>,
}

impl SuperstableBoxOracle {
    pub fn new(g: &Digraph, bound: i64) -> Self {
        let a_max = g.a_max();
        let mut images = Vec::new();
        scan_box(g.n(), bound.max(0), |s| {
            let sd = times_laplacian(g, s);
            if sd.iter().zip(&a_max).all(|(d, m)| d <= m) {
                images.push(sd);
            }
        });
        SuperstableBoxOracle { images }
    }

    /// Verdict for a stable configuration.
    pub fn is_superstable(&self, a: &[i64]) -> bool {
        !self.images.iter().any(|sd| a.iter().zip(sd).all(|(x, d)| x >= d))
    }
}
