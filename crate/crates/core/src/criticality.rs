//! Recognition of critical (recurrent) configurations and the canonical
//! critical representative of a linear-equivalence class.

use std::collections::BTreeSet;

use crate::config::{stabilize, stable_configurations, stable_unchecked, Configuration, Script, StabilizationResult};
use crate::error::{Error, Result};
use crate::graph::{Digraph, ReducedLaplacian};
use crate::script::{is_g_strongly_positive, sigma_min};

/// Default cap on the number of stable configurations an enumeration visits.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// `(a + σΔ)^o = a` for a G-strongly positive `σ`.
    Recurrence,
    /// No `a + τΔ` is stable for `0 ≺ τ ⪯ σ^M`.
    Nonstability,
    /// Membership in the add-and-stabilize closure of `a_max`.
    ClosureOracle,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Recurrence => "recurrence",
            Method::Nonstability => "nonstability",
            Method::ClosureOracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Critical by recurrence: the stabilization of `a + σΔ` fired exactly `σ`.
    FiringScript(Script),
    /// Not critical by recurrence: stabilizing `a + σΔ` did not return to `a`.
    Stabilization { script: Script, result: StabilizationResult },
    /// Critical by non-stability: this many scripts `τ` were examined.
    Exhausted { candidates: u64 },
    /// Not critical: `a + τΔ` is stable.
    StableNeighbor { tau: Script, stable: Configuration },
    /// Oracle verdict; size of the closure that was searched.
    Closure { size: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalCertificate {
    pub config: Configuration,
    pub method: Method,
    pub critical: bool,
    pub witness: Witness,
}

impl CriticalCertificate {
    /// Re-derives the verdict from the witness with the firing primitives.
    pub fn recheck(&self, g: &Digraph) -> Result<bool> {
        let lap = g.laplacian();
        let a = &self.config;
        Ok(match &self.witness {
            Witness::FiringScript(s) => {
                let r = stabilize(g, &a.plus(&lap.apply(s)))?;
                self.critical && r.stable == *a && r.script == *s
            }
            Witness::Stabilization { script, result } => {
                let r = stabilize(g, &a.plus(&lap.apply(script)))?;
                !self.critical && r == *result && r.stable != *a
            }
            Witness::Exhausted { candidates } => {
                let tester = NonstabilityTester::new(g)?;
                self.critical && *candidates == tester.candidates() && tester.find(a).is_none()
            }
            Witness::StableNeighbor { tau, stable } => {
                let b = a.plus(&lap.apply(tau));
                !self.critical && !tau.is_zero() && b == *stable && stable_unchecked(g, &b)
            }
            Witness::Closure { .. } => {
                let tester = NonstabilityTester::new(g)?;
                tester.find(a).is_none() == self.critical
            }
        })
    }
}

fn require_stable(g: &Digraph, a: &Configuration) -> Result<()> {
    if a.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: a.len() });
    }
    if !stable_unchecked(g, a) {
        return Err(Error::NotStable);
    }
    Ok(())
}

/// Recurrence test: a stable `a` is critical iff `(a + sΔ)^o = a`, for any
/// G-strongly positive `s`.
pub fn is_critical(g: &Digraph, a: &Configuration, s: &Script) -> Result<CriticalCertificate> {
    require_stable(g, a)?;
    if !is_g_strongly_positive(g, s)? {
        return Err(Error::NotStronglyPositive);
    }
    recurrence_unchecked(g, a, s)
}

fn recurrence_unchecked(g: &Digraph, a: &Configuration, s: &Script) -> Result<CriticalCertificate> {
    let result = stabilize(g, &a.plus(&g.laplacian().apply(s)))?;
    if result.stable == *a {
        if result.script != *s {
            return Err(Error::Invariant(format!(
                "critical configuration {a} fired {} instead of {s}",
                result.script
            )));
        }
        Ok(CriticalCertificate {
            config: a.clone(),
            method: Method::Recurrence,
            critical: true,
            witness: Witness::FiringScript(s.clone()),
        })
    } else {
        Ok(CriticalCertificate {
            config: a.clone(),
            method: Method::Recurrence,
            critical: false,
            witness: Witness::Stabilization { script: s.clone(), result },
        })
    }
}

/// Recurrence test with `σ^M`.
pub fn is_critical_min(g: &Digraph, a: &Configuration) -> Result<CriticalCertificate> {
    let sigma = sigma_min(g)?.sigma;
    is_critical(g, a, &sigma)
}

/// Visits `τ` with `0 ≺ τ ⪯ bound` in lexicographic order together with
/// `τΔ`, stopping when `visit` returns `false`.
pub(crate) fn for_each_in_box<F>(lap: &ReducedLaplacian, bound: &[i64], mut visit: F)
where
    F: FnMut(&[i64], &[i64]) -> bool,
{
    let n = bound.len();
    let mut tau = vec![0i64; n];
    let mut image = vec![0i64; n];
    loop {
        let mut j = n;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            if tau[j] < bound[j] {
                break;
            }
            let k = tau[j];
            tau[j] = 0;
            for (x, d) in image.iter_mut().zip(lap.row(j)) {
                *x -= k * d;
            }
        }
        tau[j] += 1;
        for (x, d) in image.iter_mut().zip(lap.row(j)) {
            *x += d;
        }
        if !visit(&tau, &image) {
            return;
        }
    }
}

pub(crate) fn box_size(bound: &[i64]) -> u64 {
    bound.iter().map(|&b| b as u64 + 1).product::<u64>() - 1
}

/// The `τ` box of the non-stability test, filtered once per graph: only
/// scripts with `|τΔ| ⪯ a_max` can move a stable configuration to another
/// stable one.
#[derive(Debug, Clone)]
pub struct NonstabilityTester {
    a_max: Vec<i64>,
    candidates: u64,
    moves: Vec<(Vec<i64>, Vec<i64>)>,
}

impl NonstabilityTester {
    pub fn new(g: &Digraph) -> Result<Self> {
        let sigma = sigma_min(g)?.sigma;
        Ok(Self::with_bound(g, &sigma))
    }

    pub fn with_bound(g: &Digraph, bound: &[i64]) -> Self {
        let a_max = g.a_max();
        let mut moves = Vec::new();
        for_each_in_box(g.laplacian(), bound, |tau, image| {
            if image.iter().zip(&a_max).all(|(x, m)| x.abs() <= *m) {
                moves.push((tau.to_vec(), image.to_vec()));
            }
            true
        });
        NonstabilityTester { a_max, candidates: box_size(bound), moves }
    }

    /// Number of scripts in the box, `prod (σ^M_i + 1) - 1`.
    pub fn candidates(&self) -> u64 {
        self.candidates
    }

    /// First `τ` (lexicographically) with `a + τΔ` stable.
    pub fn find(&self, a: &[i64]) -> Option<(Script, Configuration)> {
        self.moves.iter().find_map(|(tau, image)| {
            let stable = a
                .iter()
                .zip(image)
                .zip(&self.a_max)
                .all(|((x, d), m)| (0..=*m).contains(&(x + d)));
            stable.then(|| {
                let b: Vec<i64> = a.iter().zip(image).map(|(x, d)| x + d).collect();
                (Script::new(tau.clone()).expect("box scripts are non-negative"), Configuration::new(b))
            })
        })
    }

    pub fn certify(&self, a: &Configuration) -> CriticalCertificate {
        match self.find(a) {
            None => CriticalCertificate {
                config: a.clone(),
                method: Method::Nonstability,
                critical: true,
                witness: Witness::Exhausted { candidates: self.candidates },
            },
            Some((tau, stable)) => CriticalCertificate {
                config: a.clone(),
                method: Method::Nonstability,
                critical: false,
                witness: Witness::StableNeighbor { tau, stable },
            },
        }
    }
}

/// Non-stability test: a stable `a` is critical iff `a + τΔ` is unstable
/// for every `0 ≺ τ ⪯ σ^M`.
pub fn is_critical_nonstability(g: &Digraph, a: &Configuration) -> Result<CriticalCertificate> {
    require_stable(g, a)?;
    Ok(NonstabilityTester::new(g)?.certify(a))
}

/// Maps configurations to the unique critical configuration of their class:
/// `(a + (2a_max + 2) - (2a_max + 2)^o)^o`.
#[derive(Debug, Clone)]
pub struct CriticalRep<'g> {
    g: &'g Digraph,
    offset: Vec<i64>,
}

impl<'g> CriticalRep<'g> {
    pub fn new(g: &'g Digraph) -> Result<Self> {
        let doubled = Configuration::new(g.out_degrees().iter().map(|d| 2 * d).collect());
        let settled = stabilize(g, &doubled)?.stable;
        Ok(CriticalRep { g, offset: doubled.minus(&settled).into_vec() })
    }

    pub fn apply(&self, a: &Configuration) -> Result<Configuration> {
        if a.len() != self.g.n() {
            return Err(Error::LengthMismatch { expected: self.g.n(), got: a.len() });
        }
        if let Some(i) = a.iter().position(|&x| x < 0) {
            return Err(Error::NegativeEntry(self.g.label(i)));
        }
        Ok(stabilize(self.g, &a.plus(&self.offset))?.stable)
    }
}

pub fn critical_rep(g: &Digraph, a: &Configuration) -> Result<Configuration> {
    CriticalRep::new(g)?.apply(a)
}

/// All critical configurations, sorted, found by running the recurrence
/// test with `σ^M` on every stable configuration.
pub fn enumerate_critical(g: &Digraph, budget: u128) -> Result<Vec<Configuration>> {
    let sigma = sigma_min(g)?.sigma;
    let mut out = BTreeSet::new();
    for a in stable_configurations(g, budget)? {
        if recurrence_unchecked(g, &a, &sigma)?.critical {
            out.insert(a);
        }
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g1, g_star, single};
    use crate::script::strongly_positive_from_inverse;

    fn c(v: &[i64]) -> Configuration {
        Configuration::new(v.to_vec())
    }

    fn s(v: &[i64]) -> Script {
        Script::new(v.to_vec()).unwrap()
    }

    #[test]
    fn recurrence_examples() {
        let g = g_star();
        let sigma = s(&[1, 3, 3]);
        let cert = is_critical(&g, &c(&[4, 1, 1]), &sigma).unwrap();
        assert!(cert.critical);
        assert_eq!(cert.witness, Witness::FiringScript(sigma.clone()));
        assert!(cert.recheck(&g).unwrap());

        let cert = is_critical(&g, &c(&[0, 0, 0]), &sigma).unwrap();
        assert!(!cert.critical);
        assert!(cert.recheck(&g).unwrap());

        let cert = is_critical(&g1(), &c(&[1, 1, 1]), &s(&[1, 2, 4])).unwrap();
        assert!(!cert.critical);
        match &cert.witness {
            Witness::Stabilization { result, .. } => assert_eq!(result.stable, c(&[6, 3, 1])),
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn positive_but_not_strongly_positive_is_refused() {
        // (0,0,1) would wrongly report (1,1,1) as recurrent
        let g = g1();
        let r = stabilize(&g, &c(&[1, 1, 1]).plus(&g.laplacian().apply(&[0, 0, 1]))).unwrap();
        assert_eq!(r.stable, c(&[1, 1, 1]));
        assert_eq!(is_critical(&g, &c(&[1, 1, 1]), &s(&[0, 0, 1])), Err(Error::NotStronglyPositive));
    }

    #[test]
    fn recurrence_preconditions() {
        let g = g_star();
        assert_eq!(is_critical(&g, &c(&[5, 0, 0]), &s(&[1, 3, 3])), Err(Error::NotStable));
    }

    #[test]
    fn nonstability_examples() {
        let g = g_star();
        let cert = is_critical_nonstability(&g, &c(&[2, 0, 1])).unwrap();
        assert!(cert.critical);
        assert_eq!(cert.witness, Witness::Exhausted { candidates: 31 });
        assert!(cert.recheck(&g).unwrap());

        let cert = is_critical_nonstability(&g, &c(&[1, 1, 0])).unwrap();
        assert!(!cert.critical);
        assert!(cert.recheck(&g).unwrap());

        let cert = is_critical_nonstability(&single(2), &c(&[1])).unwrap();
        assert!(cert.critical);
        assert_eq!(cert.witness, Witness::Exhausted { candidates: 1 });
    }

    #[test]
    fn representatives() {
        let g = g_star();
        assert_eq!(critical_rep(&g, &c(&[0, 0, 0])).unwrap(), c(&[2, 0, 1]));
        assert_eq!(critical_rep(&g, &c(&[4, 0, 0])).unwrap(), c(&[3, 1, 1]));
        assert_eq!(critical_rep(&g, &c(&[4, 1, 1])).unwrap(), c(&[4, 1, 1]));
        assert_eq!(critical_rep(&g, &c(&[0, -1, 0])), Err(Error::NegativeEntry(2)));
    }

    #[test]
    fn enumerations() {
        let crit = enumerate_critical(&g_star(), DEFAULT_BUDGET).unwrap();
        let expected: Vec<Configuration> = [
            [2, 0, 1], [2, 1, 1], [3, 0, 1], [3, 1, 0], [3, 1, 1], [4, 0, 1], [4, 1, 0], [4, 1, 1],
        ]
        .iter()
        .map(|v| c(v))
        .collect();
        assert_eq!(crit, expected);

        assert_eq!(enumerate_critical(&single(3), DEFAULT_BUDGET).unwrap(), vec![c(&[0]), c(&[1]), c(&[2])]);
        assert_eq!(enumerate_critical(&g1(), DEFAULT_BUDGET).unwrap().len(), 44);
        assert!(matches!(enumerate_critical(&g1(), 10), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn any_strongly_positive_script_gives_the_same_verdict() {
        let g = g1();
        let big = strongly_positive_from_inverse(&g, &[1, 1, 1]).unwrap();
        let sigma = sigma_min(&g).unwrap().sigma;
        for a in stable_configurations(&g, DEFAULT_BUDGET).unwrap() {
            let x = is_critical(&g, &a, &sigma).unwrap().critical;
            let y = is_critical(&g, &a, &big).unwrap().critical;
            let z = is_critical_nonstability(&g, &a).unwrap().critical;
            assert_eq!((x, x), (y, z), "{a}");
        }
    }
}
