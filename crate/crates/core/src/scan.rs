//! Exhaustive scans over small split systems.
//!
//! Grounds are enumerated by multiplicity profile (elements named `a`, `b`,
//! ... in order of decreasing multiplicity), and systems over each ground up
//! to renaming of equal-multiplicity elements. Every system is run through
//! [`checks_with`]; counterexamples are recorded verbatim.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{checks_with, SubsetBudget, SubsetLattice, CHECK_NAMES};
use crate::error::{Error, Result};
use crate::multiset::Multiset;
use crate::scg::ContainmentGraph;
use crate::split::{Split, SplitSystem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanBudget {
    pub max_delta: usize,
    pub max_ground_size: usize,
    pub max_splits: usize,
    /// Allowed split sizes; `None` allows all.
    pub sizes: Option<Vec<usize>>,
    /// Only systems whose splits all have the same size.
    pub equal_size: bool,
    /// Only systems without repeated splits.
    pub distinct: bool,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
    /// Representations examined per system by the terminal-leaf check.
    pub census_limit: usize,
}

impl Default for ScanBudget {
    fn default() -> Self {
        ScanBudget {
            max_delta: 2,
            max_ground_size: 5,
            max_splits: 3,
            sizes: None,
            equal_size: false,
            distinct: false,
            jobs: None,
            census_limit: 1_000,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub name: String,
    pub applied: usize,
    pub held: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanViolation {
    pub check: String,
    pub ground: String,
    pub system: Vec<String>,
    pub detail: String,
}

/// Minimal incompatible systems of at least three splits without
/// superterminal sets, by split count `k` and excess multiplicity `delta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenCaseCount {
    pub k: usize,
    pub delta: usize,
    pub count: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub grounds: usize,
    pub systems: usize,
    pub compatible: usize,
    pub minimal_incompatible: usize,
    pub checks: Vec<CheckTally>,
    pub open_cases: Vec<OpenCaseCount>,
    pub violations: Vec<ScanViolation>,
    pub elapsed_ms: u128,
}

impl ScanReport {
    pub fn tally(&self, name: &str) -> Option<&CheckTally> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Multiplicity profiles (non-increasing) of grounds with at most
/// `max_size` elements and excess at most `max_delta`.
pub fn ground_profiles(max_delta: usize, max_size: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for m in (1..=cap.min(left)).rev() {
            cur.push(m);
            rec(left - m, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for size in 2..=max_size as u32 {
        let mut all = Vec::new();
        rec(size, size, &mut Vec::new(), &mut all);
        out.extend(
            all.into_iter()
                .filter(|p| size as usize - p.len() <= max_delta),
        );
    }
    out
}

fn element_name(i: usize) -> String {
    let letters = b"abcdefghijklmnopqrstuvwxyz";
    if i < letters.len() {
        (letters[i] as char).to_string()
    } else {
        format!("e{i}")
    }
}

pub fn ground_from_profile(profile: &[u32]) -> Multiset {
    Multiset::from_counts(
        profile
            .iter()
            .enumerate()
            .map(|(i, &m)| (element_name(i), m)),
    )
    .expect("generated names are valid")
}

/// Every split of `ground`, sorted.
pub fn all_splits(ground: &Multiset) -> Vec<Split> {
    let names: Vec<&str> = ground.support().collect();
    let caps: Vec<u32> = names.iter().map(|x| ground.multiplicity(x)).collect();
    let mut counts = vec![0u32; caps.len()];
    let mut out = BTreeSet::new();
    loop {
        let part = Multiset::from_counts(names.iter().zip(&counts).map(|(x, &c)| (x.to_string(), c)))
            .expect("valid names");
        if !part.is_empty() && part.len() < ground.len() {
            out.insert(Split::from_part(ground, part).expect("proper nonempty part"));
        }
        let mut k = 0;
        loop {
            if k == counts.len() {
                return out.into_iter().collect();
            }
            counts[k] += 1;
            if counts[k] <= caps[k] {
                break;
            }
            counts[k] = 0;
            k += 1;
        }
    }
}

/// Permutations of element positions that preserve multiplicities.
fn symmetries(profile: &[u32]) -> Vec<Vec<usize>> {
    let mut perms = vec![(0..profile.len()).collect::<Vec<_>>()];
    let mut start = 0;
    while start < profile.len() {
        let mut end = start;
        while end < profile.len() && profile[end] == profile[start] {
            end += 1;
        }
        let block: Vec<usize> = (start..end).collect();
        let block_perms = permutations(&block);
        perms = perms
            .iter()
            .flat_map(|p| {
                block_perms.iter().map(move |bp| {
                    let mut q = p.clone();
                    q[start..end].copy_from_slice(bp);
                    q
                })
            })
            .collect();
        start = end;
    }
    perms
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// For each symmetry, the induced permutation of split indices.
fn split_actions(profile: &[u32], ground: &Multiset, splits: &[Split]) -> Vec<Vec<usize>> {
    let names: Vec<String> = (0..profile.len()).map(element_name).collect();
    let index: BTreeMap<&Split, usize> = splits.iter().enumerate().map(|(i, s)| (s, i)).collect();
    symmetries(profile)
        .into_iter()
        .filter(|p| p.iter().enumerate().any(|(i, &j)| i != j))
        .map(|perm| {
            splits
                .iter()
                .map(|s| {
                    let image = Multiset::from_counts(
                        names
                            .iter()
                            .zip(&perm)
                            .map(|(x, &j)| (names[j].clone(), s.small().multiplicity(x))),
                    )
                    .expect("valid names");
                    let t = Split::from_part(ground, image).expect("images are splits");
                    index[&t]
                })
                .collect()
        })
        .collect()
}

/// Index tuples (non-decreasing, or increasing when `distinct`) of length
/// `1..=max_len` that are lexicographically least in their orbit.
fn orbit_representatives(
    split_count: usize,
    max_len: usize,
    distinct: bool,
    actions: &[Vec<usize>],
    keep: &dyn Fn(&[usize]) -> bool,
) -> Vec<Vec<usize>> {
    fn rec(
        start: usize,
        cur: &mut Vec<usize>,
        ctx: &(usize, usize, bool),
        actions: &[Vec<usize>],
        keep: &dyn Fn(&[usize]) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        let (count, max_len, distinct) = *ctx;
        if !cur.is_empty() && keep(cur) && is_least(cur, actions) {
            out.push(cur.clone());
        }
        if cur.len() == max_len {
            return;
        }
        for i in start..count {
            cur.push(i);
            rec(if distinct { i + 1 } else { i }, cur, ctx, actions, keep, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(
        0,
        &mut Vec::new(),
        &(split_count, max_len, distinct),
        actions,
        keep,
        &mut out,
    );
    out
}

fn is_least(tuple: &[usize], actions: &[Vec<usize>]) -> bool {
    let mut image = Vec::with_capacity(tuple.len());
    actions.iter().all(|act| {
        image.clear();
        image.extend(tuple.iter().map(|&i| act[i]));
        image.sort_unstable();
        tuple <= image.as_slice()
    })
}

/// Orbit representatives of every system within the budget, grouped by
/// ground. Grounds without an admissible split are skipped.
pub fn universe(budget: &ScanBudget) -> Result<Vec<(Multiset, Vec<SplitSystem>)>> {
    let mut out = Vec::new();
    for profile in ground_profiles(budget.max_delta, budget.max_ground_size) {
        let ground = ground_from_profile(&profile);
        let splits: Vec<Split> = all_splits(&ground)
            .into_iter()
            .filter(|s| budget.sizes.as_ref().is_none_or(|z| z.contains(&s.size())))
            .collect();
        if splits.is_empty() {
            continue;
        }
        let actions = split_actions(&profile, &ground, &splits);
        let sizes: Vec<usize> = splits.iter().map(Split::size).collect();
        let equal_size = budget.equal_size;
        let keep = move |t: &[usize]| !equal_size || t.iter().all(|&i| sizes[i] == sizes[t[0]]);
        let systems = orbit_representatives(
            splits.len(),
            budget.max_splits,
            budget.distinct,
            &actions,
            &keep,
        )
        .into_iter()
        .map(|t| SplitSystem::new(ground.clone(), t.iter().map(|&i| splits[i].clone()).collect()))
        .collect::<Result<Vec<_>>>()?;
        out.push((ground, systems));
    }
    Ok(out)
}

struct SystemOutcome {
    compatible: bool,
    minimal_incompatible: bool,
    open_case: Option<(usize, usize)>,
    checks: Vec<(bool, bool)>,
    violations: Vec<ScanViolation>,
}

fn run_system(system: &SplitSystem, census_limit: usize) -> Result<SystemOutcome> {
    let lattice = SubsetLattice::compute(
        system,
        SubsetBudget {
            max_splits: 24,
            max_subset_size: usize::MAX,
        },
    )?;
    let graph = ContainmentGraph::build(system)?;
    let checks = checks_with(system, &graph, &lattice, census_limit)?;
    let minimal_incompatible = lattice.is_minimal_incompatible();
    let report = crate::analysis::terminal_report_with_graph(&graph);
    let open_case = (minimal_incompatible && system.len() >= 3 && report.superterminal_sets.is_empty())
        .then(|| (system.len(), system.ground().delta()));
    let violations = checks
        .iter()
        .filter(|c| c.violated())
        .map(|c| ScanViolation {
            check: c.name.to_string(),
            ground: system.ground().to_string(),
            system: system.splits().iter().map(|s| s.to_string()).collect(),
            detail: c.detail.clone(),
        })
        .collect();
    Ok(SystemOutcome {
        compatible: lattice.system_compatible() == Some(true),
        minimal_incompatible,
        open_case,
        checks: checks.iter().map(|c| (c.applies, c.applies && c.holds)).collect(),
        violations,
    })
}

/// Runs every structural check on every system within the budget.
pub fn scan(budget: &ScanBudget) -> Result<ScanReport> {
    if budget.max_splits == 0 || budget.max_splits > 20 {
        return Err(Error::BudgetExceeded(format!(
            "scan supports 1 to 20 splits per system, got {}",
            budget.max_splits
        )));
    }
    match budget.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?
            .install(|| scan_inner(budget)),
        None => scan_inner(budget),
    }
}

fn scan_inner(budget: &ScanBudget) -> Result<ScanReport> {
    let started = Instant::now();
    let mut report = ScanReport {
        checks: CHECK_NAMES
            .iter()
            .map(|n| CheckTally {
                name: n.to_string(),
                ..CheckTally::default()
            })
            .collect(),
        ..ScanReport::default()
    };
    let mut open: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (_, systems) in universe(budget)? {
        report.grounds += 1;
        let outcomes: Vec<Result<SystemOutcome>> = systems
            .par_iter()
            .map(|system| run_system(system, budget.census_limit))
            .collect();
        for outcome in outcomes {
            let o = outcome?;
            report.systems += 1;
            report.compatible += o.compatible as usize;
            report.minimal_incompatible += o.minimal_incompatible as usize;
            if let Some(key) = o.open_case {
                *open.entry(key).or_default() += 1;
            }
            for (tally, (applied, held)) in report.checks.iter_mut().zip(o.checks) {
                tally.applied += applied as usize;
                tally.held += held as usize;
            }
            report.violations.extend(o.violations);
        }
    }
    report.open_cases = open
        .into_iter()
        .map(|((k, delta), count)| OpenCaseCount { k, delta, count })
        .collect();
    report.elapsed_ms = started.elapsed().as_millis();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_respect_limits() {
        let p = ground_profiles(1, 3);
        assert_eq!(p, vec![vec![2], vec![1, 1], vec![2, 1], vec![1, 1, 1]]);
        assert!(ground_profiles(2, 5).iter().all(|p| p.iter().sum::<u32>() as usize - p.len() <= 2));
    }

    #[test]
    fn splits_of_small_grounds() {
        // a|bc, b|ac, c|ab
        assert_eq!(all_splits(&ground_from_profile(&[1, 1, 1])).len(), 3);
        // a|abc, aa|bc, b|aac, c|aab, ab|ac
        assert_eq!(all_splits(&ground_from_profile(&[2, 1, 1])).len(), 5);
    }

    #[test]
    fn orbits_collapse_renamings() {
        let profile = [1, 1, 1];
        let ground = ground_from_profile(&profile);
        let splits = all_splits(&ground);
        let actions = split_actions(&profile, &ground, &splits);
        let reps = orbit_representatives(splits.len(), 2, true, &actions, &|_| true);
        // one single split, one pair of distinct splits
        assert_eq!(reps.len(), 2);
    }

    #[test]
    fn small_scan_has_no_violations() {
        let report = scan(&ScanBudget {
            max_delta: 1,
            max_ground_size: 4,
            max_splits: 3,
            jobs: Some(2),
            ..ScanBudget::default()
        })
        .unwrap();
        assert!(report.systems > 0);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        // the pairwise-compatible triple ab, ac, ad needs a^2 b c d (size 5)
        assert!(report.minimal_incompatible > 0);
    }
}
