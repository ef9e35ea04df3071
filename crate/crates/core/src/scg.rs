//! The split-containment graph of a split system and its thin subgraphs.
//!
//! Every split `S_i = A | Ā` contributes two vertices, `(A, S_i)` and
//! `(Ā, S_i)`. There is an arc `(A, S_i) -> (B, S_j)` whenever `i != j` and
//! `A` is a proper submultiset of `B`.
//!
//! Vertices are numbered `2 * i` (small side of split `i`) and `2 * i + 1`
//! (large side), so a vertex's partner in the same split is `v ^ 1` and the
//! complement of arc `(u, v)` is `(v ^ 1, u ^ 1)`. Adjacency is kept in
//! `u64` bitmasks, which caps systems at [`MAX_SPLITS`] splits.

use std::fmt::Write as _;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiset::Multiset;
use crate::split::{Side, SplitSystem};

pub const MAX_SPLITS: usize = 32;

pub type VertexId = usize;
pub type DirectedArc = (VertexId, VertexId);

pub fn vertex(split: usize, side: Side) -> VertexId {
    2 * split + usize::from(side == Side::Large)
}

pub fn split_of(v: VertexId) -> usize {
    v / 2
}

pub fn side_of(v: VertexId) -> Side {
    if v & 1 == 0 {
        Side::Small
    } else {
        Side::Large
    }
}

pub fn partner(v: VertexId) -> VertexId {
    v ^ 1
}

/// The complement-symmetric twin of an arc.
pub fn mirror(arc: DirectedArc) -> DirectedArc {
    (partner(arc.1), partner(arc.0))
}

fn bits(mut mask: u64) -> impl Iterator<Item = VertexId> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

/// Shape of the four-vertex restriction of the graph to a pair of splits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairClass {
    /// No arcs: the two splits are incompatible.
    NoEdges,
    /// Two arcs `X -> Y`, `Ȳ -> X̄`: exactly one tree represents the pair.
    D1,
    /// Four arcs `v -> p -> w`, `v -> q -> w`: two trees represent the pair.
    D2,
}

#[derive(Clone, Debug)]
struct PairInfo {
    class: PairClass,
    /// Each option is a complement-symmetric arc pair; D1 has one option,
    /// D2 two (ordered), NoEdges none.
    options: Vec<[DirectedArc; 2]>,
}

/// Index of the unordered pair `{i, j}` in the colexicographic pair order
/// `{0,1}, {0,2}, {1,2}, {0,3}, ...`.
fn pair_index(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    j * (j - 1) / 2 + i
}

/// The split-containment digraph.
#[derive(Clone, Debug)]
pub struct ContainmentGraph {
    system: SplitSystem,
    parts: Vec<Multiset>,
    /// Part multiplicities over the ground's support, vertex by vertex.
    counts: Vec<Vec<u32>>,
    out: Vec<u64>,
    inn: Vec<u64>,
    /// Vertices by decreasing part size: every arc goes against this order.
    by_size_desc: Vec<VertexId>,
    pairs: Vec<PairInfo>,
}

impl ContainmentGraph {
    pub fn build(system: &SplitSystem) -> Result<ContainmentGraph> {
        let n = system.len();
        if n > MAX_SPLITS {
            return Err(Error::TooManySplits { n, max: MAX_SPLITS });
        }
        let support: Vec<&str> = system.ground().support().collect();
        let parts: Vec<Multiset> = system
            .splits()
            .iter()
            .flat_map(|s| [s.small().clone(), s.large().clone()])
            .collect();
        let counts: Vec<Vec<u32>> = parts
            .iter()
            .map(|p| support.iter().map(|x| p.multiplicity(x)).collect())
            .collect();
        let nv = 2 * n;
        let mut out = vec![0u64; nv];
        let mut inn = vec![0u64; nv];
        for u in 0..nv {
            for v in 0..nv {
                if split_of(u) != split_of(v) && proper_sub(&counts[u], &counts[v]) {
                    out[u] |= 1 << v;
                    inn[v] |= 1 << u;
                }
            }
        }
        let mut by_size_desc: Vec<VertexId> = (0..nv).collect();
        by_size_desc.sort_by_key(|&v| std::cmp::Reverse(parts[v].len()));

        let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for j in 1..n {
            for i in 0..j {
                pairs.push(classify(&out, i, j));
            }
        }
        Ok(ContainmentGraph {
            system: system.clone(),
            parts,
            counts,
            out,
            inn,
            by_size_desc,
            pairs,
        })
    }

    pub fn system(&self) -> &SplitSystem {
        &self.system
    }

    pub fn split_count(&self) -> usize {
        self.system.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.parts.len()
    }

    pub fn part(&self, v: VertexId) -> &Multiset {
        &self.parts[v]
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.out[u] >> v & 1 == 1
    }

    pub fn arcs(&self) -> Vec<DirectedArc> {
        arcs_of(&self.out)
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|m| m.count_ones() as usize).sum()
    }

    pub fn out_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> {
        bits(self.out[v])
    }

    pub fn in_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> {
        bits(self.inn[v])
    }

    pub fn indegree(&self, v: VertexId) -> usize {
        self.inn[v].count_ones() as usize
    }

    pub fn outdegree(&self, v: VertexId) -> usize {
        self.out[v].count_ones() as usize
    }

    /// Classification of the restriction to splits `i` and `j`.
    pub fn classify_pair(&self, i: usize, j: usize) -> Result<PairClass> {
        let n = self.split_count();
        for idx in [i, j] {
            if idx >= n {
                return Err(Error::IndexOutOfRange { index: idx, len: n });
            }
        }
        if i == j {
            return Err(Error::SameSplitIndex(i));
        }
        Ok(self.pairs[pair_index(i, j)].class)
    }

    /// Whether the graph is a thin subgraph of itself.
    pub fn is_thin(&self) -> bool {
        self.pairs.iter().all(|p| p.class == PairClass::D1)
    }

    /// Number of pairs classified D2 (the branching factor of thin subgraphs).
    pub fn d2_pair_count(&self) -> usize {
        self.pairs
            .iter()
            .filter(|p| p.class == PairClass::D2)
            .count()
    }

    pub fn has_incompatible_pair(&self) -> bool {
        self.pairs.iter().any(|p| p.class == PairClass::NoEdges)
    }

    /// All thin subgraphs, consistent or not, in branch order.
    ///
    /// Empty when some pair has no arcs; otherwise yields
    /// `2^(number of D2 pairs)` subgraphs.
    pub fn thin_subgraphs(&self) -> ThinSubgraphs<'_> {
        ThinSubgraphs::new(self)
    }

    /// Visits every consistent thin subgraph in branch order.
    ///
    /// Branches are decided split by split: once all pairs among the first
    /// `t` splits are fixed, the partial selection must already be
    /// consistent as a thin subgraph of those `t` splits, otherwise the
    /// branch is cut.
    pub fn for_each_consistent<'g, F>(&'g self, mut visit: F) -> ControlFlow<()>
    where
        F: FnMut(ThinSubgraph<'g>) -> ControlFlow<()>,
    {
        let n = self.split_count();
        if self.has_incompatible_pair() {
            return ControlFlow::Continue(());
        }
        if n <= 1 {
            return visit(ThinSubgraph::from_out(self, vec![0; 2 * n], vec![]));
        }
        let mut state = SearchState {
            graph: self,
            out: vec![0; 2 * n],
            choices: vec![0; self.pairs.len()],
            scratch: vec![0; self.counts.first().map_or(0, Vec::len)],
        };
        state.stage(1, &mut visit)
    }

    /// Renders the graph in DOT.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph containment {\n  rankdir=BT;\n");
        for v in 0..self.vertex_count() {
            let _ = writeln!(s, "  v{v} [label=\"{}\"];", self.vertex_label(v));
        }
        for (u, v) in self.arcs() {
            let _ = writeln!(s, "  v{u} -> v{v};");
        }
        s.push_str("}\n");
        s
    }

    pub fn vertex_label(&self, v: VertexId) -> String {
        format!("{} / S{}", self.parts[v], split_of(v) + 1)
    }
}

fn proper_sub(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a != b
}

fn arcs_of(out: &[u64]) -> Vec<DirectedArc> {
    out.iter()
        .enumerate()
        .flat_map(|(u, &m)| bits(m).map(move |v| (u, v)))
        .collect()
}

fn classify(out: &[u64], i: usize, j: usize) -> PairInfo {
    let mut arcs = Vec::new();
    for u in [2 * i, 2 * i + 1, 2 * j, 2 * j + 1] {
        for v in [2 * i, 2 * i + 1, 2 * j, 2 * j + 1] {
            if out[u] >> v & 1 == 1 {
                arcs.push((u, v));
            }
        }
    }
    let mut options: Vec<[DirectedArc; 2]> = Vec::new();
    for &a in &arcs {
        let m = mirror(a);
        let pair = if a <= m { [a, m] } else { [m, a] };
        if !options.contains(&pair) {
            options.push(pair);
        }
    }
    options.sort();
    let class = match options.len() {
        0 => PairClass::NoEdges,
        1 => PairClass::D1,
        2 => PairClass::D2,
        k => unreachable!("a split pair cannot carry {k} complement-symmetric arc pairs"),
    };
    PairInfo { class, options }
}

/// Critical arcs of the arc set `out` restricted to the vertices in `keep`:
/// an arc is critical when no other directed path joins its endpoints.
fn critical_out(graph: &ContainmentGraph, out: &[u64], keep: u64) -> Vec<u64> {
    let nv = out.len();
    let mut reach = vec![0u64; nv];
    for &v in &graph.by_size_desc {
        if keep >> v & 1 == 0 {
            continue;
        }
        let direct = out[v] & keep;
        let mut r = direct;
        for w in bits(direct) {
            r |= reach[w];
        }
        reach[v] = r;
    }
    (0..nv)
        .map(|u| {
            if keep >> u & 1 == 0 {
                return 0;
            }
            let direct = out[u] & keep;
            let bypass = bits(direct).fold(0u64, |acc, w| acc | reach[w]);
            direct & !bypass
        })
        .collect()
}

fn transpose(out: &[u64]) -> Vec<u64> {
    let mut inn = vec![0u64; out.len()];
    for (u, &m) in out.iter().enumerate() {
        for v in bits(m) {
            inn[v] |= 1 << u;
        }
    }
    inn
}

/// Checks that at every kept vertex the critical in-neighbours' parts sum
/// to a submultiset of its own part.
fn consistent_on(graph: &ContainmentGraph, crit_in: &[u64], keep: u64, scratch: &mut [u32]) -> bool {
    bits(keep).all(|v| {
        let sources = crit_in[v] & keep;
        if sources.count_ones() < 2 {
            // a single source is a proper submultiset by construction
            return true;
        }
        scratch.iter_mut().for_each(|x| *x = 0);
        for u in bits(sources) {
            for (acc, c) in scratch.iter_mut().zip(&graph.counts[u]) {
                *acc += c;
            }
        }
        scratch.iter().zip(&graph.counts[v]).all(|(a, b)| a <= b)
    })
}

struct SearchState<'g> {
    graph: &'g ContainmentGraph,
    out: Vec<u64>,
    choices: Vec<u8>,
    scratch: Vec<u32>,
}

impl<'g> SearchState<'g> {
    fn set_option(&mut self, pair: usize, option: usize) {
        self.choices[pair] = option as u8;
        for (u, v) in self.graph.pairs[pair].options[option] {
            self.out[u] |= 1 << v;
        }
    }

    fn clear_option(&mut self, pair: usize, option: usize) {
        for (u, v) in self.graph.pairs[pair].options[option] {
            self.out[u] &= !(1 << v);
        }
    }

    fn prefix_consistent(&mut self, splits: usize) -> bool {
        let keep = if splits >= 32 {
            u64::MAX
        } else {
            (1u64 << (2 * splits)) - 1
        };
        let crit = critical_out(self.graph, &self.out, keep);
        let crit_in = transpose(&crit);
        consistent_on(self.graph, &crit_in, keep, &mut self.scratch)
    }

    /// Decides all pairs `{i, t}` with `i < t`, then recurses on `t + 1`.
    fn stage<F>(&mut self, t: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(ThinSubgraph<'g>) -> ControlFlow<()>,
    {
        let n = self.graph.split_count();
        if t == n {
            let sub = ThinSubgraph::from_out(self.graph, self.out.clone(), self.choices.clone());
            debug_assert!(sub.is_consistent());
            if !sub.is_consistent() {
                // pruning only ever cuts inconsistent branches; never emit one
                return ControlFlow::Continue(());
            }
            return visit(sub);
        }
        let first = pair_index(0, t);
        let stage_pairs: Vec<usize> = (first..first + t).collect();
        let mut branching = Vec::new();
        for &p in &stage_pairs {
            match self.graph.pairs[p].class {
                PairClass::D1 => self.set_option(p, 0),
                PairClass::D2 => branching.push(p),
                PairClass::NoEdges => unreachable!("checked before the search"),
            }
        }
        let flow = self.branch(&branching, 0, t, visit);
        for &p in &stage_pairs {
            if self.graph.pairs[p].class == PairClass::D1 {
                self.clear_option(p, 0);
            }
        }
        flow
    }

    fn branch<F>(&mut self, branching: &[usize], k: usize, t: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(ThinSubgraph<'g>) -> ControlFlow<()>,
    {
        if k == branching.len() {
            if !self.prefix_consistent(t + 1) {
                return ControlFlow::Continue(());
            }
            return self.stage(t + 1, visit);
        }
        let p = branching[k];
        for option in 0..2 {
            self.set_option(p, option);
            let flow = self.branch(branching, k + 1, t, visit);
            self.clear_option(p, option);
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Iterator over all thin subgraphs of a containment graph.
pub struct ThinSubgraphs<'g> {
    graph: &'g ContainmentGraph,
    d2: Vec<usize>,
    counter: Option<Vec<u8>>,
}

impl<'g> ThinSubgraphs<'g> {
    fn new(graph: &'g ContainmentGraph) -> Self {
        let d2 = (0..graph.pairs.len())
            .filter(|&p| graph.pairs[p].class == PairClass::D2)
            .collect::<Vec<_>>();
        let counter = (!graph.has_incompatible_pair()).then(|| vec![0u8; d2.len()]);
        ThinSubgraphs { graph, d2, counter }
    }
}

impl<'g> Iterator for ThinSubgraphs<'g> {
    type Item = ThinSubgraph<'g>;

    fn next(&mut self) -> Option<ThinSubgraph<'g>> {
        let counter = self.counter.as_mut()?;
        let mut choices = vec![0u8; self.graph.pairs.len()];
        for (k, &p) in self.d2.iter().enumerate() {
            choices[p] = counter[k];
        }
        let item = ThinSubgraph::from_choices(self.graph, &choices);
        // odometer, first D2 pair most significant
        let mut k = counter.len();
        loop {
            if k == 0 {
                self.counter = None;
                break;
            }
            k -= 1;
            if counter[k] == 0 {
                counter[k] = 1;
                break;
            }
            counter[k] = 0;
        }
        Some(item)
    }
}

/// A spanning arc selection restricting to D1 on every pair of splits,
/// together with its derived critical arcs.
#[derive(Clone, Debug)]
pub struct ThinSubgraph<'g> {
    graph: &'g ContainmentGraph,
    out: Vec<u64>,
    critical_out: Vec<u64>,
    critical_in: Vec<u64>,
    choices: Vec<u8>,
}

impl<'g> ThinSubgraph<'g> {
    fn from_out(graph: &'g ContainmentGraph, out: Vec<u64>, choices: Vec<u8>) -> Self {
        let critical_out = critical_out(graph, &out, u64::MAX);
        let critical_in = transpose(&critical_out);
        ThinSubgraph {
            graph,
            out,
            critical_out,
            critical_in,
            choices,
        }
    }

    /// Builds the subgraph from one option index per pair (pair order).
    fn from_choices(graph: &'g ContainmentGraph, choices: &[u8]) -> Self {
        let mut out = vec![0u64; graph.vertex_count()];
        for (p, &c) in choices.iter().enumerate() {
            for (u, v) in graph.pairs[p].options[c as usize] {
                out[u] |= 1 << v;
            }
        }
        Self::from_out(graph, out, choices.to_vec())
    }

    /// Validates an explicit arc selection.
    pub fn from_arcs(graph: &'g ContainmentGraph, arcs: &[DirectedArc]) -> Result<Self> {
        let nv = graph.vertex_count();
        let mut out = vec![0u64; nv];
        for &(u, v) in arcs {
            if u >= nv || v >= nv || !graph.has_arc(u, v) {
                return Err(Error::NotThin(format!(
                    "({u}, {v}) is not an arc of the containment graph"
                )));
            }
            out[u] |= 1 << v;
        }
        let n = graph.split_count();
        let mut choices = Vec::with_capacity(graph.pairs.len());
        for j in 1..n {
            for i in 0..j {
                let info = &graph.pairs[pair_index(i, j)];
                let selected: Vec<DirectedArc> = arcs_of(&out)
                    .into_iter()
                    .filter(|&(u, v)| {
                        let (a, b) = (split_of(u), split_of(v));
                        (a == i && b == j) || (a == j && b == i)
                    })
                    .collect();
                let option = info
                    .options
                    .iter()
                    .position(|opt| {
                        let mut sel = selected.clone();
                        sel.sort();
                        sel == opt.to_vec()
                    })
                    .ok_or_else(|| {
                        Error::NotThin(format!(
                            "restriction to S{} and S{} is not D1",
                            i + 1,
                            j + 1
                        ))
                    })?;
                choices.push(option as u8);
            }
        }
        Ok(Self::from_out(graph, out, choices))
    }

    pub fn graph(&self) -> &'g ContainmentGraph {
        self.graph
    }

    pub fn arcs(&self) -> Vec<DirectedArc> {
        arcs_of(&self.out)
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.out[u] >> v & 1 == 1
    }

    pub fn critical_arcs(&self) -> Vec<DirectedArc> {
        arcs_of(&self.critical_out)
    }

    pub fn is_critical(&self, u: VertexId, v: VertexId) -> bool {
        self.critical_out[u] >> v & 1 == 1
    }

    /// Sources of critical arcs into `v`.
    pub fn critical_sources(&self, v: VertexId) -> impl Iterator<Item = VertexId> {
        bits(self.critical_in[v])
    }

    /// Targets of critical arcs out of `v`.
    pub fn critical_targets(&self, v: VertexId) -> impl Iterator<Item = VertexId> {
        bits(self.critical_out[v])
    }

    pub(crate) fn out_masks(&self) -> &[u64] {
        &self.out
    }

    /// Per-pair option indices in pair order; a stable branch-order key.
    pub fn choices(&self) -> &[u8] {
        &self.choices
    }

    pub fn is_consistent(&self) -> bool {
        let nv = self.graph.vertex_count();
        let keep = if nv >= 64 { u64::MAX } else { (1u64 << nv) - 1 };
        let mut scratch = vec![0u32; self.graph.counts.first().map_or(0, Vec::len)];
        consistent_on(self.graph, &self.critical_in, keep, &mut scratch)
    }

    /// Renders the subgraph in DOT; critical arcs solid, the rest dashed.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph thin {\n  rankdir=BT;\n");
        for v in 0..self.graph.vertex_count() {
            let _ = writeln!(s, "  v{v} [label=\"{}\"];", self.graph.vertex_label(v));
        }
        for (u, v) in self.arcs() {
            if self.is_critical(u, v) {
                let _ = writeln!(s, "  v{u} -> v{v} [style=solid, penwidth=2];");
            } else {
                let _ = writeln!(s, "  v{u} -> v{v} [style=dashed];");
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Builds the containment graph and tests whether it is thin.
pub fn is_thin(system: &SplitSystem) -> Result<bool> {
    Ok(ContainmentGraph::build(system)?.is_thin())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system(ground: &str, parts: &[&str]) -> SplitSystem {
        let g: Multiset = ground.parse().unwrap();
        SplitSystem::from_parts(&g, parts.iter().map(|p| p.parse().unwrap())).unwrap()
    }

    fn graph(ground: &str, parts: &[&str]) -> ContainmentGraph {
        ContainmentGraph::build(&system(ground, parts)).unwrap()
    }

    #[test]
    fn single_split_has_no_arcs() {
        let g = graph("a b c", &["a"]);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.arc_count(), 0);
        assert!(g.is_thin());
    }

    #[test]
    fn duplicated_set_split_has_no_arcs() {
        let g = graph("a b c d", &["a b", "a b"]);
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.arc_count(), 0);
        assert_eq!(g.classify_pair(0, 1).unwrap(), PairClass::NoEdges);
    }

    #[test]
    fn fig3_graph_arcs() {
        // S1-S2 and S2-S3 are D2 (4 arcs each), S1-S3 is D1 (2 arcs)
        let g = graph("a^2 b^2 c d", &["a", "a b c", "b"]);
        assert_eq!(g.arc_count(), 10);
        assert_eq!(g.classify_pair(0, 1).unwrap(), PairClass::D2);
        assert_eq!(g.classify_pair(1, 2).unwrap(), PairClass::D2);
        assert_eq!(g.classify_pair(0, 2).unwrap(), PairClass::D1);
        assert_eq!(g.thin_subgraphs().count(), 4);
    }

    #[test]
    fn classify_examples() {
        let g = graph("x^3 y z", &["x^2", "x y"]);
        assert_eq!(g.classify_pair(0, 1).unwrap(), PairClass::D1);
        let g = graph("a b c d", &["a b", "a c"]);
        assert_eq!(g.classify_pair(0, 1).unwrap(), PairClass::NoEdges);
        let g = graph("a b c", &["a", "a b"]);
        assert_eq!(g.classify_pair(1, 0).unwrap(), PairClass::D1);
        assert_eq!(g.classify_pair(0, 0), Err(Error::SameSplitIndex(0)));
        assert!(g.classify_pair(0, 5).is_err());
    }

    #[test]
    fn thin_examples() {
        let thin = graph("x^3 y z", &["x^2", "x y", "x z"]);
        assert!(thin.is_thin());
        let subs: Vec<_> = thin.thin_subgraphs().collect();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].arcs(), thin.arcs());
        assert!(!subs[0].is_consistent());

        let fig1 = graph("a^2 b^2 c^2 x y", &["a b", "a c", "c x", "a b c x"]);
        assert!(!fig1.is_thin());
        assert!(fig1.thin_subgraphs().next().is_some());
        assert_eq!(
            fig1.thin_subgraphs().count(),
            1usize << fig1.d2_pair_count()
        );

        let quartet = graph("a b c d", &["a b", "a c"]);
        assert_eq!(quartet.thin_subgraphs().count(), 0);
    }

    #[test]
    fn critical_arcs_on_a_chain() {
        // a ⊊ ab ⊊ abc on {a,b,c,d}: a -> abc has a two-arc bypass
        let g = graph("a b c d", &["a", "a b", "a b c"]);
        assert!(g.is_thin());
        let t = g.thin_subgraphs().next().unwrap();
        let a = vertex(0, Side::Small);
        let abc = vertex(2, Side::Large);
        assert_eq!(g.part(abc), &"a b c".parse::<Multiset>().unwrap());
        assert!(t.has_arc(a, abc));
        assert!(!t.is_critical(a, abc));
        assert!(t.is_critical(a, vertex(1, Side::Small)));
        // mirror arcs share criticality
        for (u, v) in t.arcs() {
            let (mu, mv) = mirror((u, v));
            assert_eq!(t.is_critical(u, v), t.is_critical(mu, mv));
        }
        assert!(t.is_consistent());
    }

    #[test]
    fn two_split_arcs_are_critical() {
        let g = graph("a b c", &["a", "a b"]);
        let t = g.thin_subgraphs().next().unwrap();
        assert_eq!(t.arcs().len(), 2);
        assert_eq!(t.critical_arcs(), t.arcs());
        assert!(t.is_consistent());
    }

    #[test]
    fn from_arcs_rejects_non_thin() {
        let g = graph("a b c", &["a", "a b"]);
        assert!(ThinSubgraph::from_arcs(&g, &[]).is_err());
        let t = g.thin_subgraphs().next().unwrap();
        let rebuilt = ThinSubgraph::from_arcs(&g, &t.arcs()).unwrap();
        assert_eq!(rebuilt.arcs(), t.arcs());
    }

    #[test]
    fn dot_labels() {
        let g = graph("a b c", &["a", "a b"]);
        let dot = g.to_dot();
        assert!(dot.contains("label=\"a / S1\""));
        assert!(dot.contains("label=\"a b / S2\""));
    }
}
