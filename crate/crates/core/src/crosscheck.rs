//! Exhaustive cross-checks of the library against the oracles on a single
//! graph, grouped by the property family they exercise.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{linear_equivalent, stabilize, stable_configurations, Configuration, Script};
use crate::criticality::{is_critical, CriticalRep, NonstabilityTester};
use crate::error::{Error, Result};
use crate::graph::{extended_graph, Digraph};
use crate::linalg::{abs_u128, determinant, solve_row_i64};
use crate::oracle::{
    closure_critical, generate_graph, min_strongly_positive_search, GraphGenSpec, SearchOutcome,
    SuperstableBoxOracle,
};
use crate::script::{a_script_with, is_g_strongly_positive, sigma_min, strongly_positive_from_inverse, AScriptOptions, Pick};
use crate::superstable::{superstabilize, RowOrder, SuperstableTester};

/// Property families of the cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// Criticality procedures agree with each other and with the closure oracle.
    Criticality,
    /// Critical and super-stable configurations are dual.
    Duality,
    /// Class structure: one critical and one super-stable per class.
    Classes,
    /// Firing-script domination and weight monotonicity on random pairs.
    ScriptBounds,
    /// Weight extremality of the class representatives.
    Extremality,
    /// Shape and minimality of `σ^M`.
    MinimalScript,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Criticality,
        Family::Duality,
        Family::Classes,
        Family::ScriptBounds,
        Family::Extremality,
        Family::MinimalScript,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Criticality => "criticality",
            Family::Duality => "duality",
            Family::Classes => "classes",
            Family::ScriptBounds => "script-bounds",
            Family::Extremality => "extremality",
            Family::MinimalScript => "minimal-script",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The oracle was too expensive for this graph.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub family: Family,
    pub name: &'static str,
    pub status: Status,
    /// Number of individual assertions made.
    pub cases: u64,
    /// First counterexample, or the reason for skipping.
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        };
        write!(f, "{status} {}/{} cases={}", self.family.name(), self.name, self.cases)?;
        if !self.detail.is_empty() {
            write!(f, " {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossCheckOptions {
    /// Cap on the number of stable configurations.
    pub budget: u128,
    /// Random `(a, σ)` pairs per property.
    pub pairs: usize,
    pub seed: u64,
    /// Cap on the number of scripts a box oracle may scan.
    pub box_limit: u128,
}

impl Default for CrossCheckOptions {
    fn default() -> Self {
        CrossCheckOptions { budget: 200_000, pairs: 50, seed: 0, box_limit: 5_000_000 }
    }
}

/// Accumulates one named check.
struct Check {
    family: Family,
    name: &'static str,
    cases: u64,
    failure: Option<String>,
}

impl Check {
    fn new(family: Family, name: &'static str) -> Self {
        Check { family, name, cases: 0, failure: None }
    }

    fn assert(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
    }

    fn finish(self) -> CheckResult {
        let (status, detail) = match self.failure {
            None => (Status::Pass, String::new()),
            Some(d) => (Status::Fail, d),
        };
        CheckResult { family: self.family, name: self.name, status, cases: self.cases, detail }
    }
}

fn skipped(family: Family, name: &'static str, why: String) -> CheckResult {
    CheckResult { family, name, status: Status::Skipped, cases: 0, detail: why }
}

/// Class key independent of the firing rule: `a * adj(Δ) mod |det Δ|`.
struct ClassKey {
    det: i64,
    adjugate: Vec<Vec<i64>>,
}

impl ClassKey {
    fn new(g: &Digraph) -> Result<Self> {
        let m = g.laplacian().to_matrix();
        let det = determinant(&m)?;
        let n = g.n();
        let mut adjugate = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            let row = solve_row_i64(&e, &m)?.scale(&det);
            adjugate.push(row.to_i64s()?.ok_or_else(|| Error::Invariant("adjugate not integral".into()))?);
        }
        let det = det.to_i64().ok_or(Error::Overflow)?;
        Ok(ClassKey { det, adjugate })
    }

    fn key(&self, a: &[i64]) -> Vec<i64> {
        let n = a.len();
        (0..n)
            .map(|j| {
                let v: i128 = (0..n).map(|i| a[i] as i128 * self.adjugate[i][j] as i128).sum();
                v.rem_euclid(self.det.abs() as i128) as i64
            })
            .collect()
    }
}

fn fmt_v(v: &[i64]) -> String {
    crate::config::format_vector(v)
}

/// Runs every check on one graph.
pub fn cross_check(g: &Digraph, options: &CrossCheckOptions) -> Result<Vec<CheckResult>> {
    let configs = stable_configurations(g, options.budget)?;
    let lap = g.laplacian();
    let n = g.n();
    let a_max = Configuration::new(g.a_max());
    let report = sigma_min(g)?;
    let sigma = report.sigma.clone();
    let det = determinant(&lap.to_matrix())?;
    let det_abs = abs_u128(&det)? as usize;

    let inverse_script = strongly_positive_from_inverse(g, &vec![1; n])?;
    let nonstability = NonstabilityTester::with_bound(g, &sigma);
    let super_tester = SuperstableTester::new(g)?;
    let closure = closure_critical(g, options.budget)?;
    let reducer = CriticalRep::new(g)?;
    let keys = ClassKey::new(g)?;
    let mut out = Vec::new();

    // criticality procedures
    let mut agree = Check::new(Family::Criticality, "procedures-agree");
    let mut fires_sigma = Check::new(Family::Criticality, "critical-fires-exactly-sigma");
    let mut certificates = Check::new(Family::Criticality, "certificates-recheck");
    let mut critical = BTreeSet::new();
    for a in &configs {
        let by_sigma = is_critical(g, a, &sigma)?;
        let by_inverse = is_critical(g, a, &inverse_script)?.critical;
        let by_box = nonstability.certify(a);
        let by_closure = closure.contains(a);
        let verdicts = [by_sigma.critical, by_inverse, by_box.critical, by_closure];
        agree.assert(verdicts.iter().all(|&v| v == verdicts[0]), || {
            format!("a={} sigma/inverse/nonstability/closure={verdicts:?}", a)
        });
        certificates.assert(by_sigma.recheck(g)?, || format!("recurrence certificate of {a}"));
        if by_sigma.critical {
            critical.insert(a.clone());
            let r = stabilize(g, &a.plus(&lap.apply(&sigma)))?;
            fires_sigma.assert(r.script == sigma, || format!("a={a} fired {}", r.script));
        }
    }
    let mut count = Check::new(Family::Criticality, "critical-count-is-det");
    count.assert(critical.len() == det_abs, || format!("{} critical, |det|={det_abs}", critical.len()));
    let mut upward = Check::new(Family::Criticality, "upward-closure");
    for a in &critical {
        for i in 0..n {
            if a[i] < a_max[i] {
                let mut b = a.clone().into_vec();
                b[i] += 1;
                let b = Configuration::new(b);
                upward.assert(critical.contains(&b), || format!("{a} critical but {b} is not"));
            }
        }
    }
    out.extend([agree.finish(), fires_sigma.finish(), certificates.finish(), count.finish(), upward.finish()]);

    // duality
    let mut superstable = BTreeSet::new();
    let mut dual = Check::new(Family::Duality, "critical-iff-dual-superstable");
    for a in &configs {
        let d = a_max.minus(a);
        let ss = super_tester.certify(&d).superstable;
        dual.assert(critical.contains(a) == ss, || format!("a={a} critical={} dual {d} superstable={ss}", critical.contains(a)));
        if super_tester.certify(a).superstable {
            superstable.insert(a.clone());
        }
    }
    let mut sets = Check::new(Family::Duality, "superstable-set-is-dual-of-critical");
    let duals: BTreeSet<Configuration> = critical.iter().map(|a| a_max.minus(a)).collect();
    sets.assert(duals == superstable, || format!("{} duals vs {} super-stable", duals.len(), superstable.len()));

    let mut downward = Check::new(Family::Duality, "downward-closure");
    for a in &superstable {
        for i in 0..n {
            if a[i] > 0 {
                let mut b = a.clone().into_vec();
                b[i] -= 1;
                let b = Configuration::new(b);
                downward.assert(superstable.contains(&b), || format!("{a} super-stable but {b} is not"));
            }
        }
    }

    // not non-negative vs not stable inside the σ^M box
    let mut variants = Check::new(Family::Duality, "box-variants-agree");
    let unstable_box = NonstabilityTester::with_bound(g, &sigma);
    for a in &configs {
        let not_nonneg = superstable.contains(a);
        // a - σΔ stable  <=>  a + σΔ' with the roles of the box mirrored; test directly
        let mut any_stable = false;
        crate::criticality::for_each_in_box(lap, &sigma, |_, image| {
            let b: Vec<i64> = a.iter().zip(image).map(|(x, d)| x - d).collect();
            if crate::config::stable_unchecked(g, &b) {
                any_stable = true;
                return false;
            }
            true
        });
        variants.assert(not_nonneg == !any_stable, || format!("a={a} (ii)={not_nonneg} (iii)={}", !any_stable));
    }
    drop(unstable_box);

    let side = 2 * sigma.iter().copied().max().unwrap_or(1);
    let cube = (side as u128 + 1).pow(n as u32);
    let box_oracle = if cube <= options.box_limit {
        let oracle = SuperstableBoxOracle::new(g, side);
        let mut c = Check::new(Family::Duality, "box-oracle-agrees");
        for a in &configs {
            let o = oracle.is_superstable(a);
            c.assert(o == superstable.contains(a), || format!("a={a} oracle={o}"));
        }
        c.finish()
    } else {
        skipped(Family::Duality, "box-oracle-agrees", format!("cube of {cube} scripts"))
    };
    out.extend([dual.finish(), sets.finish(), downward.finish(), variants.finish(), box_oracle]);

    // classes
    let mut classes: BTreeMap<Vec<i64>, Vec<&Configuration>> = BTreeMap::new();
    for a in &configs {
        classes.entry(keys.key(a)).or_default().push(a);
    }
    let mut class_count = Check::new(Family::Classes, "class-count-is-det");
    class_count.assert(classes.len() == det_abs, || format!("{} classes, |det|={det_abs}", classes.len()));
    let mut one_each = Check::new(Family::Classes, "one-critical-one-superstable");
    let mut rep_const = Check::new(Family::Classes, "critical-rep-constant-on-class");
    let mut ss_rep = Check::new(Family::Classes, "superstable-rep");
    let mut order = Check::new(Family::Classes, "row-order-independent");
    let mut reps: BTreeMap<Configuration, Configuration> = BTreeMap::new();
    for members in classes.values() {
        let crit: Vec<_> = members.iter().filter(|a| critical.contains(**a)).collect();
        let ss: Vec<_> = members.iter().filter(|a| superstable.contains(**a)).collect();
        one_each.assert(crit.len() == 1 && ss.len() == 1, || {
            format!("class of {} has {} critical, {} super-stable", members[0], crit.len(), ss.len())
        });
        for a in members {
            let rep = reducer.apply(a)?;
            rep_const.assert(crit.first().map(|c| ***c == rep).unwrap_or(false), || format!("crit_rep({a})={rep}"));
            reps.insert((*a).clone(), rep);

            let run = superstabilize(g, a, RowOrder::LowestNegative)?;
            let high = superstabilize(g, a, RowOrder::HighestNegative)?.result;
            order.assert(run.result == high, || format!("a={a}: {} vs {high}", run.result));
            let r = &run.result;
            let equiv = linear_equivalent(g, a, r)?.is_some();
            let again = superstabilize(g, r, RowOrder::LowestNegative)?.result;
            let matches = ss.first().map(|s| ***s == *r).unwrap_or(false);
            ss_rep.assert(equiv && again == *r && matches, || {
                format!("ss_rep({a})={r} equivalent={equiv} idempotent={} in-class={matches}", again == *r)
            });
        }
    }
    out.extend([class_count.finish(), one_each.finish(), rep_const.finish(), ss_rep.finish(), order.finish()]);

    // random pairs
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let max_sigma = sigma.iter().copied().max().unwrap_or(1);
    let mut domination = Check::new(Family::ScriptBounds, "firing-script-dominated");
    let mut monotone = Check::new(Family::ScriptBounds, "weight-monotone");
    let mut conservation = Check::new(Family::ScriptBounds, "chips-leave-through-sink");
    for _ in 0..options.pairs {
        let a = &configs[rng.gen_range(0..configs.len())];
        let mut s = None;
        for _ in 0..100 {
            let cand: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max_sigma)).collect();
            if a.plus(&lap.apply(&cand)).is_non_negative() {
                s = Some(cand);
                break;
            }
        }
        let s = s.unwrap_or_else(|| {
            let k = rng.gen_range(1..=3);
            sigma.iter().map(|x| k * x).collect()
        });
        let start = a.plus(&lap.apply(&s));
        let r = stabilize(g, &start)?;
        let s = Script::new(s)?;
        domination.assert(r.script.precedes(&s), || format!("a={a} sigma={s} fired {}", r.script));
        let lost: i64 = (0..n).map(|i| r.script[i] * g.sink_edges(i) as i64).sum();
        conservation.assert(r.stable.weight() == start.weight() - lost, || format!("start {start}"));

        // the weight bound rests on script domination, which needs a stable start
        let b = &configs[rng.gen_range(0..configs.len())];
        let k = rng.gen_range(1..=3);
        let mut p: Vec<i64> = sigma.iter().map(|x| k * x + rng.gen_range(0..=2)).collect();
        if !lap.apply(&p).iter().all(|&x| x >= 0) {
            p = sigma.iter().map(|x| k * x).collect();
        }
        let r = stabilize(g, &b.plus(&lap.apply(&p)))?;
        monotone.assert(r.stable.weight() >= b.weight(), || format!("b={b} sigma={}", fmt_v(&p)));
    }
    out.extend([domination.finish(), monotone.finish(), conservation.finish()]);

    // extremality
    let mut max_weight = Check::new(Family::Extremality, "critical-has-max-weight");
    let mut min_weight = Check::new(Family::Extremality, "superstable-has-min-weight");
    for members in classes.values() {
        let heaviest = members.iter().map(|a| a.weight()).max().unwrap_or(0);
        let lightest = members.iter().map(|a| a.weight()).min().unwrap_or(0);
        for a in members {
            let rep = &reps[*a];
            max_weight.assert(rep.weight() >= a.weight() && rep.weight() == heaviest, || format!("crit_rep({a})={rep}"));
        }
        if let Some(s) = members.iter().find(|a| superstable.contains(**a)) {
            min_weight.assert(s.weight() == lightest, || format!("super-stable {s} weighs more than {lightest}"));
        }
    }
    out.extend([max_weight.finish(), min_weight.finish()]);

    // σ^M
    let sd = &report.sigma_delta;
    let degrees = g.out_degrees();
    let mut shape = Check::new(Family::MinimalScript, "sigma-at-least-ones");
    shape.assert(sigma.iter().all(|&x| x >= 1), || format!("sigma={sigma}"));
    let mut bounded = Check::new(Family::MinimalScript, "sigma-delta-at-most-degree");
    let mut sources = Check::new(Family::MinimalScript, "source-reaches-degree");
    let mut equality = Check::new(Family::MinimalScript, "degree-equality-characterized");
    for i in 0..n {
        bounded.assert(sd[i] <= degrees[i], || format!("vertex {} sigma_delta={} d={}", g.label(i), sd[i], degrees[i]));
        if g.in_degree(i) == 0 {
            sources.assert(sd[i] == degrees[i], || format!("source {} sigma_delta={}", g.label(i), sd[i]));
        }
        // equality exactly for singleton components whose incoming deficit is a multiple of d^+
        let comp = report.per_component.iter().find(|c| c.vertices.contains(&i)).expect("covered");
        let expected = comp.vertices.len() == 1 && comp.target[0] % degrees[i] == 0;
        equality.assert((sd[i] == degrees[i]) == expected, || {
            format!("vertex {} sigma_delta={} d={} target={}", g.label(i), sd[i], degrees[i], comp.target[0])
        });
    }
    let mut strongly = Check::new(Family::MinimalScript, "sigma-strongly-positive");
    strongly.assert(is_g_strongly_positive(g, &sigma)?, || format!("sigma={sigma}"));
    strongly.assert(is_g_strongly_positive(g, &inverse_script)?, || format!("inverse script {inverse_script}"));
    let mut orders = Check::new(Family::MinimalScript, "a-script-order-independent");
    for comp in &report.per_component {
        let ext = extended_graph(g, &comp.vertices)?;
        for seed in 0..comp.vertices.len() {
            for pick in [Pick::Lowest, Pick::Highest] {
                let other = a_script_with(&ext, &comp.target, true, AScriptOptions { seed, pick })?;
                orders.assert(other == comp.script, || format!("seed {seed} {pick:?}: {other} vs {}", comp.script));
            }
        }
    }
    let search_size = (max_sigma as u128 + 1).pow(n as u32);
    let search = if search_size <= options.box_limit {
        let mut c = Check::new(Family::MinimalScript, "sigma-matches-exhaustive-search");
        match min_strongly_positive_search(g, max_sigma) {
            SearchOutcome::Least(s) => c.assert(s == sigma, || format!("search {s} vs sigma {sigma}")),
            other => c.assert(false, || format!("search gave {other:?}")),
        }
        c.finish()
    } else {
        skipped(Family::MinimalScript, "sigma-matches-exhaustive-search", format!("box of {search_size} scripts"))
    };
    out.extend([shape.finish(), bounded.finish(), sources.finish(), equality.finish(), strongly.finish(), orders.finish(), search]);

    Ok(out)
}

/// Outcome of [`cross_check`] on one generated graph.
#[derive(Debug, Clone)]
pub struct SeedReport {
    pub seed: u64,
    pub graph: Result<Digraph>,
    pub results: Result<Vec<CheckResult>>,
}

/// Runs [`cross_check`] on generated graphs for each seed, in parallel;
/// the output is ordered by seed.
pub fn cross_check_random(template: GraphGenSpec, seeds: &[u64], options: &CrossCheckOptions) -> Vec<SeedReport> {
    seeds
        .par_iter()
        .map(|&seed| {
            let graph = generate_graph(GraphGenSpec { seed, ..template });
            let results = match &graph {
                Ok(g) => cross_check(g, &CrossCheckOptions { seed, ..*options }),
                Err(e) => Err(e.clone()),
            };
            SeedReport { seed, graph, results }
        })
        .collect()
}
