//! Structural analyses: terminal and superterminal sets, minimal
//! incompatible subsets, subset-size bounds on compatibility and the
//! checks built on them.
//!
//! A part `A` of split `S_i` is *terminal* when the vertex `(A, S_i)` has
//! no incoming arc in the containment graph, and *superterminal* when in
//! addition every other split has exactly one part strictly containing `A`.
//!
//! The bound conditions compare the size `k` of inclusion-minimal
//! incompatible subsets with the excess multiplicity `Δ` of the ground:
//!
//! | flag          | every minimal incompatible subset has size at most |
//! |---------------|-----------------------------------------------------|
//! | `star_holds`  | `Δ + 2`                                             |
//! | `star3_holds` | `Δ + 3`                                             |
//! | `ref43_holds` | `max(2Δ, Δ + 2)`                                    |

use serde::Serialize;

use crate::engine::{census_with_graph, is_compatible};
use crate::error::{Error, Result};
use crate::multiset::Multiset;
use crate::scg::{split_of, vertex, ContainmentGraph, PairClass, VertexId};
use crate::split::{Side, SplitSystem};

/// A part of one split, addressed by its 1-based split index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexedPart {
    pub part: Multiset,
    pub split: usize,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContainingSide {
    /// Index into `superterminal_sets`.
    pub superterminal: usize,
    /// 1-based split index.
    pub split: usize,
    /// The part of that split containing the superterminal set, when there
    /// is exactly one.
    pub part: Option<Multiset>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TerminalReport {
    pub terminal_sets: Vec<IndexedPart>,
    pub superterminal_sets: Vec<IndexedPart>,
    pub containing_side: Vec<ContainingSide>,
}

fn indexed(graph: &ContainmentGraph, v: VertexId) -> IndexedPart {
    IndexedPart {
        part: graph.part(v).clone(),
        split: split_of(v) + 1,
        side: crate::scg::side_of(v),
    }
}

fn terminal_vertices(graph: &ContainmentGraph) -> Vec<VertexId> {
    (0..graph.vertex_count())
        .filter(|&v| graph.indegree(v) == 0)
        .collect()
}

/// Terminal vertices with `n - 1` out-arcs, one into each other split.
fn superterminal_vertices(graph: &ContainmentGraph) -> Vec<VertexId> {
    let n = graph.split_count();
    terminal_vertices(graph)
        .into_iter()
        .filter(|&v| {
            graph.outdegree(v) + 1 == n
                && (0..n).filter(|&j| j != split_of(v)).all(|j| {
                    graph.has_arc(v, vertex(j, Side::Small)) != graph.has_arc(v, vertex(j, Side::Large))
                })
        })
        .collect()
}

/// Terminal and superterminal sets, read off vertex degrees.
pub fn terminal_report(system: &SplitSystem) -> Result<TerminalReport> {
    let graph = ContainmentGraph::build(system)?;
    Ok(terminal_report_with_graph(&graph))
}

pub fn terminal_report_with_graph(graph: &ContainmentGraph) -> TerminalReport {
    let terminal_sets = terminal_vertices(graph)
        .into_iter()
        .map(|v| indexed(graph, v))
        .collect();
    let supers = superterminal_vertices(graph);
    let mut containing_side = Vec::new();
    for (k, &v) in supers.iter().enumerate() {
        let a = graph.part(v);
        for j in 0..graph.split_count() {
            let part = if j == split_of(v) {
                Some(a.clone())
            } else {
                let holders: Vec<&Multiset> = [Side::Small, Side::Large]
                    .into_iter()
                    .map(|s| graph.part(vertex(j, s)))
                    .filter(|p| a.is_submultiset_of(p))
                    .collect();
                (holders.len() == 1).then(|| holders[0].clone())
            };
            containing_side.push(ContainingSide {
                superterminal: k,
                split: j + 1,
                part,
            });
        }
    }
    TerminalReport {
        terminal_sets,
        superterminal_sets: supers.into_iter().map(|v| indexed(graph, v)).collect(),
        containing_side,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupcoreEntry {
    pub terminal: IndexedPart,
    /// Some element has all of its copies inside the terminal set.
    pub hypothesis: bool,
    pub superterminal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupcoreRecord {
    /// Every pair of splits is compatible on its own; otherwise the check
    /// is skipped.
    pub applicable: bool,
    pub entries: Vec<SupcoreEntry>,
    pub violations: Vec<String>,
}

/// In a system whose pairs are all compatible, a terminal set holding every
/// copy of some element must be superterminal.
///
/// Pair compatibility here means the pair's containment graph has arcs,
/// which excludes duplicated splits that merely pass
/// [`crate::split::pairwise_compatible`].
pub fn check_supcore(system: &SplitSystem) -> Result<SupcoreRecord> {
    let graph = ContainmentGraph::build(system)?;
    Ok(check_supcore_with_graph(&graph))
}

pub fn check_supcore_with_graph(graph: &ContainmentGraph) -> SupcoreRecord {
    if graph.has_incompatible_pair() {
        return SupcoreRecord {
            applicable: false,
            entries: vec![],
            violations: vec![],
        };
    }
    let ground = graph.system().ground();
    let supers = superterminal_vertices(graph);
    let mut entries = Vec::new();
    let mut violations = Vec::new();
    for v in terminal_vertices(graph) {
        let a = graph.part(v);
        let hypothesis = a.iter().any(|(x, c)| c == ground.multiplicity(x));
        let superterminal = supers.contains(&v);
        if hypothesis && !superterminal {
            violations.push(format!(
                "terminal set {} of S{} holds every copy of an element but is not superterminal",
                a,
                split_of(v) + 1
            ));
        }
        entries.push(SupcoreEntry {
            terminal: indexed(graph, v),
            hypothesis,
            superterminal,
        });
    }
    SupcoreRecord {
        applicable: true,
        entries,
        violations,
    }
}

/// Limits for subset-lattice work.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetBudget {
    /// Systems with more splits are refused.
    pub max_splits: usize,
    /// Subsets larger than this are not examined; results are then flagged
    /// as truncated.
    pub max_subset_size: usize,
}

impl Default for SubsetBudget {
    fn default() -> Self {
        SubsetBudget {
            max_splits: 20,
            max_subset_size: usize::MAX,
        }
    }
}

/// Compatibility of every subset (by index bitmask) up to a size cap.
#[derive(Clone, Debug)]
pub struct SubsetLattice {
    n: usize,
    max_size: usize,
    /// 0 = not examined, 1 = compatible, 2 = incompatible.
    state: Vec<u8>,
    minimal: Vec<u64>,
}

impl SubsetLattice {
    /// Examines subsets by increasing size. A subset containing an
    /// incompatible subset is incompatible without a search; the rest are
    /// decided by the engine, and those found incompatible are minimal.
    pub fn compute(system: &SplitSystem, budget: SubsetBudget) -> Result<SubsetLattice> {
        let n = system.len();
        if n > budget.max_splits || n > 24 {
            return Err(Error::BudgetExceeded(format!(
                "subset lattice limited to {} splits, system has {n}",
                budget.max_splits.min(24)
            )));
        }
        let max_size = budget.max_subset_size.min(n);
        let mut state = vec![0u8; 1 << n];
        let mut masks: Vec<u64> = (0..1u64 << n)
            .filter(|m| m.count_ones() as usize <= max_size)
            .collect();
        masks.sort_by_key(|&m| (m.count_ones(), index_key(m)));
        let mut minimal = Vec::new();
        for mask in masks {
            let size = mask.count_ones();
            let compatible = if size <= 1 {
                true
            } else {
                let below_ok = (0..n)
                    .filter(|&i| mask >> i & 1 == 1)
                    .all(|i| state[(mask & !(1 << i)) as usize] == 1);
                if below_ok {
                    let ok = is_compatible(&system.subsystem_mask(mask))?;
                    if !ok {
                        minimal.push(mask);
                    }
                    ok
                } else {
                    false
                }
            };
            state[mask as usize] = if compatible { 1 } else { 2 };
        }
        Ok(SubsetLattice {
            n,
            max_size,
            state,
            minimal,
        })
    }

    pub fn split_count(&self) -> usize {
        self.n
    }

    /// `None` when the subset was beyond the size cap.
    pub fn is_compatible(&self, mask: u64) -> Option<bool> {
        match self.state.get(mask as usize) {
            Some(1) => Some(true),
            Some(2) => Some(false),
            _ => None,
        }
    }

    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Compatibility of the whole system, when examined.
    pub fn system_compatible(&self) -> Option<bool> {
        self.is_compatible(self.full_mask())
    }

    pub fn truncated(&self) -> bool {
        self.max_size < self.n
    }

    /// Inclusion-minimal incompatible subsets, by size then index order.
    pub fn minimal_masks(&self) -> &[u64] {
        &self.minimal
    }

    /// Minimal incompatible subsets as 1-based index lists.
    pub fn minimal_sets(&self) -> Vec<Vec<usize>> {
        self.minimal.iter().map(|&m| mask_to_indices(m)).collect()
    }

    /// Incompatible, with every proper subset compatible.
    pub fn is_minimal_incompatible(&self) -> bool {
        self.minimal.last() == Some(&self.full_mask()) && self.n > 0
    }

    /// Smallest size of an incompatible subset.
    pub fn smallest_witness(&self) -> Option<usize> {
        self.minimal.first().map(|m| m.count_ones() as usize)
    }

    /// Whether every minimal incompatible subset has size at most `bound`.
    pub fn minimal_sizes_at_most(&self, bound: usize) -> bool {
        self.minimal.iter().all(|m| m.count_ones() as usize <= bound)
    }
}

fn index_key(mask: u64) -> Vec<u32> {
    let mut v = Vec::new();
    let mut m = mask;
    while m != 0 {
        v.push(m.trailing_zeros());
        m &= m - 1;
    }
    v
}

/// 1-based indices of the set bits.
pub fn mask_to_indices(mask: u64) -> Vec<usize> {
    index_key(mask).into_iter().map(|i| i as usize + 1).collect()
}

/// Inclusion-minimal incompatible subsets as 1-based index lists.
pub fn minimal_incompatible_subsets(
    system: &SplitSystem,
    budget: SubsetBudget,
) -> Result<(Vec<Vec<usize>>, bool)> {
    let lattice = SubsetLattice::compute(system, budget)?;
    Ok((lattice.minimal_sets(), lattice.truncated()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub delta: usize,
    pub n: usize,
    pub compatible: Option<bool>,
    pub minimal_incompatible_subsets: Vec<Vec<usize>>,
    pub star_holds: bool,
    pub star3_holds: bool,
    pub ref43_holds: bool,
    /// Subsets above the size cap were not examined.
    pub truncated: bool,
}

pub fn bound_report(system: &SplitSystem, budget: SubsetBudget) -> Result<BoundReport> {
    let lattice = SubsetLattice::compute(system, budget)?;
    Ok(bound_report_from(system, &lattice))
}

pub fn bound_report_from(system: &SplitSystem, lattice: &SubsetLattice) -> BoundReport {
    let delta = system.ground().delta();
    BoundReport {
        delta,
        n: system.len(),
        compatible: lattice.system_compatible(),
        minimal_incompatible_subsets: lattice.minimal_sets(),
        star_holds: lattice.minimal_sizes_at_most(delta + 2),
        star3_holds: lattice.minimal_sizes_at_most(delta + 3),
        ref43_holds: lattice.minimal_sizes_at_most((2 * delta).max(delta + 2)),
        truncated: lattice.truncated(),
    }
}

/// Outcome of one structural check on one system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremCheck {
    pub name: &'static str,
    pub applies: bool,
    /// Meaningful only when `applies`; a `false` here is a counterexample.
    pub holds: bool,
    pub detail: String,
}

impl TheoremCheck {
    pub fn violated(&self) -> bool {
        self.applies && !self.holds
    }
}

/// Names of the checks run by [`check_special_theorems`], in report order.
pub const CHECK_NAMES: [&str; 11] = [
    "subset-bound-2delta",
    "star-bound",
    "equal-size-star",
    "thin-star",
    "superterminal-star",
    "superterminal-delta",
    "two-three-delta",
    "two-three-star3",
    "unique-part-split",
    "supcore",
    "terminal-leaves",
];

/// Limits for [`check_special_theorems`].
#[derive(Clone, Copy, Debug)]
pub struct CheckBudget {
    pub subsets: SubsetBudget,
    /// Representations examined by the terminal-leaf check.
    pub census_limit: usize,
}

impl Default for CheckBudget {
    fn default() -> Self {
        CheckBudget {
            subsets: SubsetBudget::default(),
            census_limit: 10_000,
        }
    }
}

/// Runs every structural check whose hypotheses can be decided on this
/// system and reports applicability and outcome.
pub fn check_special_theorems(system: &SplitSystem, budget: CheckBudget) -> Result<Vec<TheoremCheck>> {
    let lattice = SubsetLattice::compute(system, budget.subsets)?;
    let graph = ContainmentGraph::build(system)?;
    checks_with(system, &graph, &lattice, budget.census_limit)
}

/// As [`check_special_theorems`], reusing a computed lattice and graph.
pub fn checks_with(
    system: &SplitSystem,
    graph: &ContainmentGraph,
    lattice: &SubsetLattice,
    census_limit: usize,
) -> Result<Vec<TheoremCheck>> {
    let n = system.len();
    let ground = system.ground();
    let delta = ground.delta();
    let full = lattice.full_mask();
    let exhaustive = !lattice.truncated();
    let compatible = lattice.system_compatible();
    // compatible, or some incompatible subset of size at most `bound`
    let equivalence = |bound: usize| -> bool {
        compatible == Some(true) || lattice.smallest_witness().is_some_and(|k| k <= bound)
    };
    let star = equivalence(delta + 2);
    let minimal_incompatible = lattice.is_minimal_incompatible();
    let sizes: Vec<usize> = system.splits().iter().map(|s| s.size()).collect();
    let equal_size = n > 0 && sizes.iter().all(|&s| s == sizes[0]);
    let two_three = n > 0 && sizes.iter().all(|&s| s == 2 || s == 3);
    let duplicate_free = system.is_duplicate_free();
    let supers = superterminal_vertices(graph);

    let mut checks = Vec::new();
    checks.push(TheoremCheck {
        name: "subset-bound-2delta",
        applies: exhaustive,
        holds: equivalence((2 * delta).max(delta + 2)),
        detail: format!(
            "compatible iff all subsets of size <= {} are",
            (2 * delta).max(delta + 2)
        ),
    });
    checks.push(TheoremCheck {
        name: "star-bound",
        applies: exhaustive,
        holds: star,
        detail: format!("compatible iff all subsets of size <= {} are", delta + 2),
    });
    checks.push(TheoremCheck {
        name: "equal-size-star",
        applies: exhaustive && equal_size,
        holds: star,
        detail: "all splits have the same size".to_string(),
    });
    checks.push(TheoremCheck {
        name: "thin-star",
        applies: exhaustive && graph.is_thin(),
        holds: star,
        detail: "the system is thin".to_string(),
    });

    let superterminal_everywhere = exhaustive && {
        let mut ok = true;
        for mask in 1..=full {
            if (mask.count_ones() as usize) < delta + 3 {
                continue;
            }
            let sub = ContainmentGraph::build(&system.subsystem_mask(mask))?;
            if superterminal_vertices(&sub).is_empty() {
                ok = false;
                break;
            }
        }
        ok
    };
    checks.push(TheoremCheck {
        name: "superterminal-star",
        applies: superterminal_everywhere,
        holds: star,
        detail: format!(
            "every subset of size >= {} has a superterminal set",
            delta + 3
        ),
    });
    checks.push(TheoremCheck {
        name: "superterminal-delta",
        applies: minimal_incompatible && n >= 3 && !supers.is_empty(),
        holds: delta + 2 >= n,
        detail: format!("minimal incompatible, k = {n}, delta = {delta}, needs delta >= k - 2"),
    });
    checks.push(TheoremCheck {
        name: "two-three-delta",
        applies: minimal_incompatible && n >= 3 && two_three && duplicate_free,
        holds: delta + 3 >= n,
        detail: format!("minimal incompatible 2,3-system, k = {n}, delta = {delta}, needs delta >= k - 3"),
    });
    checks.push(TheoremCheck {
        name: "two-three-star3",
        applies: exhaustive && two_three && duplicate_free,
        holds: equivalence(delta + 3),
        detail: format!("compatible iff all subsets of size <= {} are", delta + 3),
    });
    let unique_part = system.splits().iter().any(|s| {
        s.parts()
            .iter()
            .any(|p| p.unique_part(ground).map(|u| &u == *p).unwrap_or(false))
    });
    let proper_subsets_compatible = minimal_incompatible || compatible == Some(true);
    checks.push(TheoremCheck {
        name: "unique-part-split",
        applies: n >= 3 && unique_part && proper_subsets_compatible && exhaustive,
        holds: compatible == Some(true),
        detail: "all proper subsets compatible and some part has only single-copy elements"
            .to_string(),
    });
    let supcore = check_supcore_with_graph(graph);
    checks.push(TheoremCheck {
        name: "supcore",
        applies: supcore.applicable,
        holds: supcore.violations.is_empty(),
        detail: supcore.violations.join("; "),
    });

    let terminal = terminal_vertices(graph);
    let (applies, holds, detail) = if compatible == Some(true) {
        let census = census_with_graph(graph, census_limit)?;
        let mut missing = Vec::new();
        for class in &census.iso_classes {
            for &v in &terminal {
                let a = graph.part(v);
                if !class.tree.leaves().any(|l| class.tree.label(l) == a) {
                    missing.push(format!("{} has no leaf labelled {}", class.tree, a));
                }
            }
        }
        (true, missing.is_empty(), missing.join("; "))
    } else {
        (false, true, String::new())
    };
    checks.push(TheoremCheck {
        name: "terminal-leaves",
        applies,
        holds,
        detail,
    });
    debug_assert_eq!(
        checks.iter().map(|c| c.name).collect::<Vec<_>>(),
        CHECK_NAMES.to_vec()
    );
    Ok(checks)
}

/// Pair classification summary used by reports.
pub fn pair_classes(graph: &ContainmentGraph) -> Vec<(usize, usize, PairClass)> {
    let n = graph.split_count();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((i + 1, j + 1, graph.classify_pair(i, j).expect("valid pair")));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionBound {
    pub parts: usize,
    pub components: usize,
    pub delta: usize,
    pub holds: bool,
}

/// For parts partitioning a multiset and a graph whose edges join parts
/// sharing an element: the excess multiplicity is at least
/// `parts - components`.
pub fn intersection_graph_bound(parts: &[Multiset], edges: &[(usize, usize)]) -> Result<IntersectionBound> {
    let k = parts.len();
    if k < 2 {
        return Err(Error::InvalidPartition("at least two parts are required".into()));
    }
    if parts.iter().any(Multiset::is_empty) {
        return Err(Error::InvalidPartition("parts must be nonempty".into()));
    }
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while parent[r] != r {
            r = parent[r];
        }
        parent[v] = r;
        r
    }
    let mut components = k;
    for &(a, b) in edges {
        if a >= k || b >= k || a == b {
            return Err(Error::InvalidPartition(format!("bad edge ({a}, {b})")));
        }
        if !parts[a].shares_element(&parts[b]) {
            return Err(Error::InvalidPartition(format!(
                "edge ({a}, {b}) joins parts with no common element"
            )));
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    let ground = parts.iter().fold(Multiset::new(), |acc, p| acc.sum(p));
    let delta = ground.delta();
    Ok(IntersectionBound {
        parts: k,
        components,
        delta,
        holds: delta + components >= k,
    })
}
