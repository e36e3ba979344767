//! Configurations, scripts and the firing rule.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::linalg::solve_row_i64;

/// Single firings allowed in one stabilization before giving up.
pub const STEP_LIMIT: u64 = 1_000_000_000;

/// Chip counts on the non-sink vertices. Entries may be negative; being
/// non-negative or stable is a property checked against a graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration(Vec<i64>);

impl Configuration {
    pub fn new(chips: Vec<i64>) -> Self {
        Configuration(chips)
    }

    pub fn zeros(n: usize) -> Self {
        Configuration(vec![0; n])
    }

    pub fn chips(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_non_negative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    /// `self + other`, componentwise.
    pub fn plus(&self, other: &[i64]) -> Configuration {
        Configuration(self.0.iter().zip(other).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, componentwise.
    pub fn minus(&self, other: &[i64]) -> Configuration {
        Configuration(self.0.iter().zip(other).map(|(a, b)| a - b).collect())
    }
}

impl Deref for Configuration {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for Configuration {
    fn from(v: Vec<i64>) -> Self {
        Configuration(v)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_vector(&self.0))
    }
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_vector(s).map(Configuration)
    }
}

/// Per-vertex firing counts; every entry is non-negative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Script(Vec<i64>);

impl Script {
    pub fn new(counts: Vec<i64>) -> Result<Self> {
        match counts.iter().position(|&c| c < 0) {
            Some(i) => Err(Error::NegativeEntry(i + 1)),
            None => Ok(Script(counts)),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Script(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Script(v)
    }

    pub fn counts(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Componentwise `self <= other`.
    pub fn precedes(&self, other: &Script) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub(crate) fn increment(&mut self, i: usize) {
        self.0[i] += 1;
    }
}

impl Deref for Script {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_vector(&self.0))
    }
}

impl FromStr for Script {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Script::new(parse_vector(s)?)
    }
}

/// Comma-separated integers, e.g. `4,0,-1`.
pub fn format_vector(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

pub fn parse_vector(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<i64>().map_err(|_| Error::Syntax {
                line: 1,
                message: format!("`{part}` is not an integer in `{s}`"),
            })
        })
        .collect()
}

fn check_len(g: &Digraph, len: usize) -> Result<()> {
    if len != g.n() {
        Err(Error::LengthMismatch { expected: g.n(), got: len })
    } else {
        Ok(())
    }
}

/// `a + script * Δ`: inverse firing of every vertex by its script count.
pub fn inverse_fire(g: &Digraph, a: &Configuration, script: &[i64]) -> Result<Configuration> {
    check_len(g, a.len())?;
    check_len(g, script.len())?;
    Ok(a.plus(&g.laplacian().apply(script)))
}

/// `0 <= a_i <= d^+_i - 1` for every vertex.
pub fn is_stable(g: &Digraph, a: &Configuration) -> Result<bool> {
    check_len(g, a.len())?;
    Ok(stable_unchecked(g, a))
}

pub(crate) fn stable_unchecked(g: &Digraph, a: &[i64]) -> bool {
    let lap = g.laplacian();
    a.iter().enumerate().all(|(i, &x)| x >= 0 && x < lap.get(i, i))
}

/// Fires the active vertex at position `i`: returns `a - Δ_i`.
pub fn fire(g: &Digraph, a: &Configuration, i: usize) -> Result<Configuration> {
    check_len(g, a.len())?;
    if i >= g.n() {
        return Err(Error::IndexOutOfRange { index: i + 1, max: g.n() });
    }
    let row = g.laplacian().row(i);
    if a[i] < row[i] {
        return Err(Error::InactiveVertex(g.label(i)));
    }
    Ok(a.minus(row))
}

/// Outcome of a stabilization: the stable configuration and how often each
/// vertex fired on the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizationResult {
    pub stable: Configuration,
    pub script: Script,
}

fn check_stabilizable(g: &Digraph, a: &Configuration) -> Result<()> {
    check_len(g, a.len())?;
    match a.iter().position(|&x| x < 0) {
        Some(i) => Err(Error::NegativeEntry(g.label(i))),
        None => Ok(()),
    }
}

/// Stabilizes a non-negative configuration. The active vertex of lowest
/// position is fired, as many times in a row as its chips allow, until no
/// vertex is active.
pub fn stabilize(g: &Digraph, a: &Configuration) -> Result<StabilizationResult> {
    check_stabilizable(g, a)?;
    let lap = g.laplacian();
    let n = g.n();
    let lower_neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..i).filter(|&j| lap.get(i, j) < 0).collect())
        .collect();

    let mut chips = a.chips().to_vec();
    let mut script = vec![0i64; n];
    let mut steps = 0u64;
    let active = |chips: &[i64], j: usize| chips[j] >= lap.get(j, j);
    let mut next = (0..n).find(|&j| active(&chips, j));

    while let Some(i) = next {
        let times = chips[i] / lap.get(i, i);
        steps += times as u64;
        if steps > STEP_LIMIT {
            return Err(Error::StepLimit { what: "stabilization", limit: STEP_LIMIT });
        }
        for (c, d) in chips.iter_mut().zip(lap.row(i)) {
            *c -= times * d;
        }
        script[i] += times;
        // everything below i was inactive; only out-neighbours of i gained chips
        next = lower_neighbors[i]
            .iter()
            .copied()
            .find(|&j| active(&chips, j))
            .or_else(|| (i + 1..n).find(|&j| active(&chips, j)));
    }

    Ok(StabilizationResult { stable: Configuration(chips), script: Script(script) })
}

/// Stabilizes with a caller-chosen firing order: `choose` receives the
/// active positions in increasing order and returns an index into that slice.
pub fn stabilize_with<F>(g: &Digraph, a: &Configuration, mut choose: F) -> Result<StabilizationResult>
where
    F: FnMut(&[usize]) -> usize,
{
    check_stabilizable(g, a)?;
    let lap = g.laplacian();
    let n = g.n();
    let mut chips = a.chips().to_vec();
    let mut script = vec![0i64; n];
    let mut steps = 0u64;
    loop {
        let active: Vec<usize> = (0..n).filter(|&j| chips[j] >= lap.get(j, j)).collect();
        if active.is_empty() {
            break;
        }
        steps += 1;
        if steps > STEP_LIMIT {
            return Err(Error::StepLimit { what: "stabilization", limit: STEP_LIMIT });
        }
        let i = active[choose(&active).min(active.len() - 1)];
        for (c, d) in chips.iter_mut().zip(lap.row(i)) {
            *c -= d;
        }
        script[i] += 1;
    }
    Ok(StabilizationResult { stable: Configuration(chips), script: Script(script) })
}

/// Every stable configuration in lexicographic order, provided there are at
/// most `budget` of them.
pub fn stable_configurations(g: &Digraph, budget: u128) -> Result<Vec<Configuration>> {
    let size = g.stable_count();
    if size > budget {
        return Err(Error::BudgetExceeded { size, budget });
    }
    let bound = g.a_max();
    let n = g.n();
    let mut out = Vec::with_capacity(size as usize);
    let mut cur = vec![0i64; n];
    loop {
        out.push(Configuration(cur.clone()));
        let mut j = n;
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            if cur[j] < bound[j] {
                cur[j] += 1;
                break;
            }
            cur[j] = 0;
        }
    }
}

pub fn weight(a: &Configuration) -> i64 {
    a.weight()
}

/// Returns the integer `tau` with `b = a + tau * Δ` when `a ~ b`.
pub fn linear_equivalent(g: &Digraph, a: &Configuration, b: &Configuration) -> Result<Option<Vec<i64>>> {
    check_len(g, a.len())?;
    check_len(g, b.len())?;
    let diff = b.minus(a);
    solve_row_i64(&diff, &g.laplacian().to_matrix())?.to_i64s()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::fixtures::{g1, g_star};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(v: &[i64]) -> Configuration {
        Configuration::new(v.to_vec())
    }

    #[test]
    fn stability() {
        let g = g_star();
        assert!(is_stable(&g, &c(&[4, 1, 1])).unwrap());
        assert!(!is_stable(&g, &c(&[5, 1, 1])).unwrap());
        assert!(!is_stable(&g, &c(&[-1, 0, 0])).unwrap());
        assert!(matches!(is_stable(&g, &c(&[0, 0])), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn firing() {
        assert_eq!(fire(&g1(), &c(&[1, 1, 3]), 2).unwrap(), c(&[1, 1, 1]));
        assert_eq!(fire(&g_star(), &c(&[5, 0, 0]), 0).unwrap(), c(&[0, 3, 2]));
        assert_eq!(fire(&g_star(), &c(&[0, 0, 0]), 0), Err(Error::InactiveVertex(1)));
    }

    #[test]
    fn stabilization_examples() {
        let r = stabilize(&g1(), &c(&[1, 1, 3])).unwrap();
        assert_eq!((r.stable, r.script.counts().to_vec()), (c(&[1, 1, 1]), vec![0, 0, 1]));

        let r = stabilize(&g_star(), &c(&[4, 1, 1])).unwrap();
        assert_eq!(r.stable, c(&[4, 1, 1]));
        assert!(r.script.is_zero());

        // printed in the source as (6,3,3), which still has v3 active
        let r = stabilize(&g1(), &c(&[6, 3, 3])).unwrap();
        assert_eq!((r.stable, r.script.counts().to_vec()), (c(&[6, 3, 1]), vec![0, 0, 1]));
    }

    #[test]
    fn stabilize_rejects_negative() {
        assert_eq!(stabilize(&g_star(), &c(&[0, -1, 0])), Err(Error::NegativeEntry(2)));
    }

    #[test]
    fn stabilization_matches_script() {
        let g = g_star();
        let a = c(&[40, 3, 17]);
        let r = stabilize(&g, &a).unwrap();
        assert_eq!(r.stable, a.minus(&g.laplacian().apply(&r.script)));
        assert!(is_stable(&g, &r.stable).unwrap());
    }

    #[test]
    fn weights() {
        assert_eq!(weight(&c(&[4, 1, 1])), 6);
        assert_eq!(weight(&c(&[0, 0, 0])), 0);
        assert_eq!(weight(&c(&[2, 0, 1])), 3);
    }

    #[test]
    fn equivalence_examples() {
        let g = g_star();
        assert_eq!(linear_equivalent(&g, &c(&[3, 0, 0]), &c(&[2, 1, 1])).unwrap(), Some(vec![0, 1, 1]));
        assert_eq!(linear_equivalent(&g, &c(&[0, 0, 0]), &c(&[0, 0, 0])).unwrap(), Some(vec![0, 0, 0]));
        assert_eq!(linear_equivalent(&g, &c(&[4, 0, 0]), &c(&[3, 0, 0])).unwrap(), None);
    }

    #[test]
    fn equivalence_is_an_equivalence() {
        let g = g_star();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = c(&[rng.gen_range(0..6), rng.gen_range(0..6), rng.gen_range(0..6)]);
            let b = c(&[rng.gen_range(0..6), rng.gen_range(0..6), rng.gen_range(0..6)]);
            let d = c(&[rng.gen_range(0..6), rng.gen_range(0..6), rng.gen_range(0..6)]);
            assert_eq!(linear_equivalent(&g, &a, &a).unwrap(), Some(vec![0; 3]));
            let ab = linear_equivalent(&g, &a, &b).unwrap();
            let ba = linear_equivalent(&g, &b, &a).unwrap();
            assert_eq!(ab.as_ref().map(|t| t.iter().map(|x| -x).collect::<Vec<_>>()), ba);
            if let (Some(ab), Some(bd)) = (ab, linear_equivalent(&g, &b, &d).unwrap()) {
                let ad: Vec<i64> = ab.iter().zip(&bd).map(|(x, y)| x + y).collect();
                assert_eq!(linear_equivalent(&g, &a, &d).unwrap(), Some(ad));
            }
        }
    }

    #[test]
    fn chips_leave_only_through_the_sink() {
        let g = g1();
        let a = c(&[30, 11, 9]);
        let r = stabilize(&g, &a).unwrap();
        let lost: i64 = (0..g.n()).map(|i| r.script[i] * g.sink_edges(i) as i64).sum();
        assert_eq!(r.stable.weight(), a.weight() - lost);
    }

    #[test]
    fn random_order_agrees() {
        let g = parse_graph("vertices 4\nsink 4\nedge 1 2 2\nedge 2 1 1\nedge 2 3 1\nedge 3 1 2\nedge 3 4 1\n").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = c(&[rng.gen_range(0..20), rng.gen_range(0..20), rng.gen_range(0..20)]);
            let canonical = stabilize(&g, &a).unwrap();
            let shuffled = stabilize_with(&g, &a, |act| rng.gen_range(0..act.len())).unwrap();
            assert_eq!(canonical, shuffled);
        }
    }

    #[test]
    fn stable_enumeration() {
        let all = stable_configurations(&g_star(), 100).unwrap();
        assert_eq!(all.len(), 20);
        assert_eq!(all[0], c(&[0, 0, 0]));
        assert_eq!(all[1], c(&[0, 0, 1]));
        assert_eq!(all[19], c(&[4, 1, 1]));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(
            stable_configurations(&g_star(), 19),
            Err(Error::BudgetExceeded { size: 20, budget: 19 })
        );
    }

    #[test]
    fn vector_syntax() {
        assert_eq!("4, 0,-1".parse::<Configuration>().unwrap(), c(&[4, 0, -1]));
        assert_eq!(c(&[4, 0, -1]).to_string(), "4,0,-1");
        assert!("4,,1".parse::<Configuration>().is_err());
        assert_eq!("1,-2".parse::<Script>(), Err(Error::NegativeEntry(2)));
        assert_eq!(Script::unit(3, 1).to_string(), "0,1,0");
    }
}
