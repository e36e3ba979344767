//! Positive and strongly positive scripts, and the construction of the
//! minimum G-strongly positive script `σ^M`.
//!
//! A script `σ` is G-positive when `σΔ ⪰ 0` and `σΔ ≠ 0`; it is G-strongly
//! positive when in addition the support of `σΔ` meets every non-sink
//! strongly connected component. `σ^M` is assembled component by component
//! in level order: each component runs the target-script loop on its
//! extended graph against the deficit left by inverse firing of the
//! components upstream of it.

use crate::config::Script;
use crate::error::{Error, Result};
use crate::graph::{extended_graph, Digraph};
use crate::linalg::solve_row_i64;

/// Increments allowed in one run of the target-script loop.
pub const A_SCRIPT_LIMIT: u64 = 100_000_000;

fn check_script(g: &Digraph, s: &[i64]) -> Result<()> {
    if s.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), got: s.len() });
    }
    Ok(())
}

/// `σΔ ⪰ 0` and `σΔ ≠ 0`.
pub fn is_g_positive(g: &Digraph, s: &Script) -> Result<bool> {
    check_script(g, s)?;
    let sd = g.laplacian().apply(s);
    Ok(positive(&sd))
}

fn positive(sd: &[i64]) -> bool {
    sd.iter().all(|&x| x >= 0) && sd.iter().any(|&x| x != 0)
}

/// G-positive, and `supp(σΔ)` meets every non-sink component.
pub fn is_g_strongly_positive(g: &Digraph, s: &Script) -> Result<bool> {
    check_script(g, s)?;
    let sd = g.laplacian().apply(s);
    Ok(strongly_positive(g, &sd))
}

pub(crate) fn strongly_positive(g: &Digraph, sd: &[i64]) -> bool {
    positive(sd)
        && g
            .scc()
            .components()
            .iter()
            .all(|c| c.iter().any(|&v| sd[v] != 0))
}

/// Which deficient vertex the target-script loop raises next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pick {
    #[default]
    Lowest,
    Highest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AScriptOptions {
    /// Position of the coordinate set to 1 before the loop starts; also the
    /// coordinate raised when a strict run lands exactly on the target.
    pub seed: usize,
    pub pick: Pick,
}

/// Smallest script `σ ⪰ e_1` with `σΔ ⪰ target` on a graph whose non-sink
/// part is one strongly connected component.
///
/// Starting from `e_1`, any vertex `i` with `(σΔ)_i < target_i` is raised by
/// one until none is left. With `require_strict`, a result with
/// `σΔ = target` is not accepted: coordinate 1 is raised once more and the
/// loop resumes.
pub fn a_script(cg: &Digraph, target: &[i64], require_strict: bool) -> Result<Script> {
    a_script_with(cg, target, require_strict, AScriptOptions::default())
}

pub fn a_script_with(
    cg: &Digraph,
    target: &[i64],
    require_strict: bool,
    options: AScriptOptions,
) -> Result<Script> {
    check_script(cg, target)?;
    if cg.scc().len() != 1 {
        return Err(Error::NotStronglyConnected);
    }
    if let Some(i) = target.iter().position(|&t| t < 0) {
        return Err(Error::NegativeEntry(cg.label(i)));
    }
    let n = cg.n();
    if options.seed >= n {
        return Err(Error::IndexOutOfRange { index: options.seed + 1, max: n });
    }

    let lap = cg.laplacian();
    let mut sigma = Script::unit(n, options.seed);
    let mut sd = lap.row(options.seed).to_vec();
    let mut steps = 0u64;
    let mut raise = |sigma: &mut Script, sd: &mut [i64], i: usize| -> Result<()> {
        steps += 1;
        if steps > A_SCRIPT_LIMIT {
            return Err(Error::StepLimit { what: "script algorithm", limit: A_SCRIPT_LIMIT });
        }
        sigma.increment(i);
        for (x, d) in sd.iter_mut().zip(lap.row(i)) {
            *x += d;
        }
        Ok(())
    };

    loop {
        let deficient = |sd: &[i64], i: &usize| sd[*i] < target[*i];
        let next = match options.pick {
            Pick::Lowest => (0..n).find(|i| deficient(&sd, i)),
            Pick::Highest => (0..n).rev().find(|i| deficient(&sd, i)),
        };
        match next {
            Some(i) => raise(&mut sigma, &mut sd, i)?,
            None if require_strict && sd == target => raise(&mut sigma, &mut sd, options.seed)?,
            None => return Ok(sigma),
        }
    }
}

/// Script found for one component while assembling `σ^M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentScript {
    /// Internal positions of the component's vertices.
    pub vertices: Vec<usize>,
    pub level: usize,
    /// Deficit the component had to cover, restricted to its vertices.
    pub target: Vec<i64>,
    pub script: Script,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaReport {
    pub sigma: Script,
    /// `σ^M Δ`.
    pub sigma_delta: Vec<i64>,
    /// One entry per component, in the order they were processed.
    pub per_component: Vec<ComponentScript>,
}

/// The minimum G-strongly positive script `σ^M`.
///
/// Components are visited level by level. After a level is done the running
/// update `u = σΔ` is refreshed; a component downstream then needs
/// `σ_C Δ_C ⪰ -u|_C` with at least one strict coordinate.
pub fn sigma_min(g: &Digraph) -> Result<SigmaReport> {
    let n = g.n();
    let scc = g.scc();
    let lap = g.laplacian();
    let mut sigma = vec![0i64; n];
    let mut update = vec![0i64; n];
    let mut per_component = Vec::with_capacity(scc.len());

    for group in scc.by_level() {
        for k in group {
            let vertices = scc.component(k).to_vec();
            let ext = extended_graph(g, &vertices)?;
            let target: Vec<i64> = vertices.iter().map(|&v| (-update[v]).max(0)).collect();
            let local = a_script(&ext, &target, true)?;
            for (&v, &s) in vertices.iter().zip(local.iter()) {
                sigma[v] = s;
            }
            per_component.push(ComponentScript { vertices, level: scc.level(k), target, script: local });
        }
        update = lap.apply(&sigma);
    }

    Ok(SigmaReport { sigma: Script::new(sigma)?, sigma_delta: update, per_component })
}

/// The least positive integer multiple of `target * Δ^{-1}`, a G-strongly
/// positive script whenever every target entry is positive.
pub fn strongly_positive_from_inverse(g: &Digraph, target: &[i64]) -> Result<Script> {
    check_script(g, target)?;
    if target.iter().any(|&t| t <= 0) {
        return Err(Error::NonPositiveTarget);
    }
    let rho = solve_row_i64(target, &g.laplacian().to_matrix())?;
    let scaled = rho.scale(&rho.denominator_lcm());
    let ints = scaled
        .to_i64s()?
        .ok_or_else(|| Error::Invariant("scaled inverse is not integral".into()))?;
    Script::new(ints)
}
