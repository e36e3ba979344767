//! Super-stable configurations, their duality with critical ones, and
//! super-stabilization by row additions.

use std::collections::BTreeMap;

use crate::config::{stabilize, stable_configurations, stable_unchecked, Configuration, Script};
use crate::criticality::{box_size, for_each_in_box, CriticalRep};
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::script::sigma_min;

/// Row additions allowed in one super-stabilization.
pub const ROW_ADDITION_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperstableCertificate {
    pub config: Configuration,
    pub superstable: bool,
    /// For a negative verdict, a script `0 ≺ σ ⪯ σ^M` with `config - σΔ ⪰ 0`.
    pub witness: Option<Script>,
}

impl SuperstableCertificate {
    pub fn recheck(&self, g: &Digraph) -> bool {
        match &self.witness {
            None => self.superstable,
            Some(s) => {
                !self.superstable
                    && !s.is_zero()
                    && self.config.minus(&g.laplacian().apply(s)).is_non_negative()
            }
        }
    }
}

fn require_non_negative(g: &Digraph, a: &Configuration) -> Result<()> {
    if a.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: a.len() });
    }
    match a.iter().position(|&x| x < 0) {
        Some(i) => Err(Error::NegativeEntry(g.label(i))),
        None => Ok(()),
    }
}

fn first_deductible(g: &Digraph, a: &[i64], bound: &[i64]) -> Option<Script> {
    let mut found = None;
    for_each_in_box(g.laplacian(), bound, |tau, image| {
        if a.iter().zip(image).all(|(x, d)| x >= d) {
            found = Some(Script::new(tau.to_vec()).expect("box scripts are non-negative"));
            false
        } else {
            true
        }
    });
    found
}

/// A non-negative `a` is super-stable iff `a - σΔ` has a negative entry for
/// every `0 ≺ σ ⪯ σ^M`. The witness is the lexicographically first `σ`
/// that fails.
pub fn is_superstable(g: &Digraph, a: &Configuration) -> Result<SuperstableCertificate> {
    require_non_negative(g, a)?;
    let sigma = sigma_min(g)?.sigma;
    let witness = first_deductible(g, a, &sigma);
    Ok(SuperstableCertificate { config: a.clone(), superstable: witness.is_none(), witness })
}

/// The `σ` box of the super-stability test, pre-filtered to scripts with
/// `σΔ ⪯ a_max`; only valid for stable inputs.
#[derive(Debug, Clone)]
pub struct SuperstableTester {
    candidates: u64,
    moves: Vec<(Vec<i64>, Vec<i64>)>,
}

impl SuperstableTester {
    pub fn new(g: &Digraph) -> Result<Self> {
        let sigma = sigma_min(g)?.sigma;
        let a_max = g.a_max();
        let mut moves = Vec::new();
        for_each_in_box(g.laplacian(), &sigma, |tau, image| {
            if image.iter().zip(&a_max).all(|(d, m)| d <= m) {
                moves.push((tau.to_vec(), image.to_vec()));
            }
            true
        });
        Ok(SuperstableTester { candidates: box_size(&sigma), moves })
    }

    pub fn candidates(&self) -> u64 {
        self.candidates
    }

    /// Certificate for a stable configuration.
    pub fn certify(&self, a: &Configuration) -> SuperstableCertificate {
        let witness = self
            .moves
            .iter()
            .find(|(_, image)| a.iter().zip(image).all(|(x, d)| x >= d))
            .map(|(tau, _)| Script::new(tau.clone()).expect("box scripts are non-negative"));
        SuperstableCertificate { config: a.clone(), superstable: witness.is_none(), witness }
    }
}

/// `a_max - a`.
pub fn dual(g: &Digraph, a: &Configuration) -> Result<Configuration> {
    if a.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: a.len() });
    }
    if !stable_unchecked(g, a) {
        return Err(Error::NotStable);
    }
    Ok(Configuration::new(g.a_max()).minus(a))
}

/// Which negative coordinate receives the next row addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RowOrder {
    #[default]
    LowestNegative,
    HighestNegative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowAddition {
    /// Position of the row `Δ_i` that was added.
    pub row: usize,
    pub after: Configuration,
}

/// Removal of a deductible script from a non-negative result that the row
/// additions left short of super-stable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descent {
    /// `0 ≺ σ ⪯ σ^M` with `b - σΔ ⪰ 0`.
    pub script: Script,
    /// `(b - σΔ)^o`.
    pub after: Configuration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Superstabilization {
    /// `a^o`.
    pub stabilized: Configuration,
    /// `a^o - σ^M Δ`.
    pub start: Configuration,
    pub steps: Vec<RowAddition>,
    /// Configuration the row additions ended on.
    pub rows_result: Configuration,
    /// Empty whenever the row additions already reach a super-stable
    /// configuration.
    pub descents: Vec<Descent>,
    pub result: Configuration,
}

/// Super-stabilization: from `a^o - σ^MΔ`, add the row `Δ_i` of a negative
/// coordinate `i` until nothing is negative. The row additions can stop on
/// a configuration that is not super-stable (on `1 -> 2` with multiplicity
/// 3, `1 -> s` and `2 -> 1`, `(2,0)` ends on `(1,0)` while the only
/// super-stable configuration is `(0,0)`); the result is then stabilized
/// and a deductible `σ ⪯ σ^M` removed until none is left.
pub fn superstabilize(g: &Digraph, a: &Configuration, order: RowOrder) -> Result<Superstabilization> {
    require_non_negative(g, a)?;
    let stabilized = stabilize(g, a)?.stable;
    let sigma = sigma_min(g)?;
    let start = stabilized.minus(&sigma.sigma_delta);
    let lap = g.laplacian();

    let mut cur = start.clone();
    let mut steps = Vec::new();
    loop {
        let mut negatives = cur.iter().enumerate().filter(|(_, &x)| x < 0).map(|(i, _)| i);
        let next = match order {
            RowOrder::LowestNegative => negatives.next(),
            RowOrder::HighestNegative => negatives.next_back(),
        };
        let Some(i) = next else { break };
        if steps.len() as u64 >= ROW_ADDITION_LIMIT {
            return Err(Error::StepLimit { what: "super-stabilization", limit: ROW_ADDITION_LIMIT });
        }
        cur = cur.plus(lap.row(i));
        steps.push(RowAddition { row: i, after: cur.clone() });
    }

    let rows_result = cur.clone();
    let mut descents = Vec::new();
    let mut cur = stabilize(g, &cur)?.stable;
    while let Some(script) = first_deductible(g, &cur, &sigma.sigma) {
        if descents.len() as u64 >= ROW_ADDITION_LIMIT {
            return Err(Error::StepLimit { what: "super-stabilization", limit: ROW_ADDITION_LIMIT });
        }
        cur = stabilize(g, &cur.minus(&lap.apply(&script)))?.stable;
        descents.push(Descent { script, after: cur.clone() });
    }
    Ok(Superstabilization { stabilized, start, steps, rows_result, descents, result: cur })
}

/// The unique super-stable configuration equivalent to `a`.
pub fn superstable_rep(g: &Digraph, a: &Configuration) -> Result<Configuration> {
    Ok(superstabilize(g, a, RowOrder::LowestNegative)?.result)
}

/// All super-stable configurations, sorted.
pub fn enumerate_superstable(g: &Digraph, budget: u128) -> Result<Vec<Configuration>> {
    let tester = SuperstableTester::new(g)?;
    Ok(stable_configurations(g, budget)?
        .into_iter()
        .filter(|a| tester.certify(a).superstable)
        .collect())
}

/// One linear-equivalence class restricted to stable configurations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceClass {
    pub critical: Configuration,
    pub superstable: Configuration,
    /// All stable members, sorted; includes both representatives.
    pub members: Vec<Configuration>,
}

/// Stable configurations grouped by their critical representative, classes
/// sorted by that representative.
pub fn equivalence_classes(g: &Digraph, budget: u128) -> Result<Vec<EquivalenceClass>> {
    let reducer = CriticalRep::new(g)?;
    let mut groups: BTreeMap<Configuration, Vec<Configuration>> = BTreeMap::new();
    for a in stable_configurations(g, budget)? {
        groups.entry(reducer.apply(&a)?).or_default().push(a);
    }
    groups
        .into_iter()
        .map(|(critical, members)| {
            let superstable = superstable_rep(g, &critical)?;
            Ok(EquivalenceClass { critical, superstable, members })
        })
        .collect()
}
