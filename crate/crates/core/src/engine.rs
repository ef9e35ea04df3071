//! Compatibility decisions and tree representations.
//!
//! A split system is compatible exactly when its containment graph has a
//! consistent thin subgraph. From such a subgraph `G` a representing tree
//! is assembled directly:
//!
//! * vertices `(A, S_i)` and `(B, S_j)` are merged when `(Ā, S_i) -> (B, S_j)`
//!   is a critical arc; each merged class becomes one tree vertex;
//! * the class of `(A, S_i)` is labelled `A` minus the parts of its critical
//!   in-neighbours;
//! * split `S_i` becomes the edge joining the classes of `(A, S_i)` and
//!   `(Ā, S_i)`.
//!
//! Distinct consistent thin subgraphs, taken up to isomorphisms that only
//! exchange vertices carrying equal parts, correspond one to one with the
//! non-isomorphic representations. [`census_representations`] counts both
//! sides and reports any mismatch instead of assuming it away.

use std::ops::ControlFlow;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mtree::{trivial_tree, CanonicalTreeForm, MTree, RawTree};
use crate::multiset::Multiset;
use crate::scg::{partner, split_of, ContainmentGraph, DirectedArc, ThinSubgraph, VertexId};
use crate::split::SplitSystem;

impl Serialize for MTree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

/// Owned snapshot of a thin subgraph, for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// `(from, to)` vertex ids; vertex `2i` / `2i+1` is the small / large part of split `i`.
    pub arcs: Vec<DirectedArc>,
    pub critical_arcs: Vec<DirectedArc>,
    /// Human-readable critical arcs, `part / S_i -> part / S_j`.
    pub critical_labels: Vec<String>,
}

impl Witness {
    pub fn of(t: &ThinSubgraph<'_>) -> Witness {
        let g = t.graph();
        let critical_arcs = t.critical_arcs();
        let critical_labels = critical_arcs
            .iter()
            .map(|&(u, v)| format!("{} -> {}", g.vertex_label(u), g.vertex_label(v)))
            .collect();
        Witness {
            arcs: t.arcs(),
            critical_arcs,
            critical_labels,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompatibilityResult {
    pub compatible: bool,
    pub witness: Option<Witness>,
    pub representation: Option<MTree>,
}

/// Assembles the tree of a consistent thin subgraph.
pub fn build_tree(t: &ThinSubgraph<'_>) -> Result<MTree> {
    let g = t.graph();
    let ground = g.system().ground();
    if g.split_count() == 0 {
        return Ok(trivial_tree(ground));
    }
    if !t.is_consistent() {
        return Err(Error::Inconsistent);
    }
    let nv = g.vertex_count();
    let mut class = UnionFind::new(nv);
    for (u, v) in t.critical_arcs() {
        class.union(partner(u), v);
    }
    // tree vertices numbered by their smallest member
    let mut tree_id = vec![usize::MAX; nv];
    let mut next = 0;
    for v in 0..nv {
        let root = class.find(v);
        if tree_id[root] == usize::MAX {
            tree_id[root] = next;
            next += 1;
        }
        tree_id[v] = tree_id[root];
    }
    let mut labels: Vec<Option<Multiset>> = vec![None; next];
    let mut class_size = vec![0usize; next];
    for v in 0..nv {
        let label = vertex_label(t, v)?;
        let slot = &mut labels[tree_id[v]];
        class_size[tree_id[v]] += 1;
        match slot {
            None => *slot = Some(label),
            Some(existing) if *existing == label => {}
            Some(existing) => {
                return Err(Error::Internal(format!(
                    "merged vertices disagree on their label: {} vs {}",
                    existing.to_label(),
                    label.to_label()
                )))
            }
        }
    }
    let edges: Vec<(usize, usize)> = (0..g.split_count())
        .map(|i| (tree_id[2 * i], tree_id[2 * i + 1]))
        .collect();
    let raw = RawTree {
        labels: labels.into_iter().map(|l| l.unwrap_or_default()).collect(),
        edges,
    };
    let tree = MTree::validate(raw, ground)
        .map_err(|e| Error::Internal(format!("assembled tree is invalid: {e}")))?;
    if let Some(v) = (0..next).find(|&v| tree.degree(v) != class_size[v]) {
        return Err(Error::Internal(format!(
            "tree vertex {v} has degree {} but its class has {} members",
            tree.degree(v),
            class_size[v]
        )));
    }
    Ok(tree)
}

/// `A` minus the sum of the parts of `A`'s critical in-neighbours.
fn vertex_label(t: &ThinSubgraph<'_>, v: VertexId) -> Result<Multiset> {
    let g = t.graph();
    let inflow = t
        .critical_sources(v)
        .fold(Multiset::new(), |acc, u| acc.sum(g.part(u)));
    g.part(v).checked_sub(&inflow).ok_or(Error::Inconsistent)
}

/// Searches for a consistent thin subgraph; the first one in branch order
/// is returned together with its tree.
pub fn check_compatibility(system: &SplitSystem) -> Result<CompatibilityResult> {
    let graph = ContainmentGraph::build(system)?;
    check_with_graph(&graph)
}

pub fn check_with_graph(graph: &ContainmentGraph) -> Result<CompatibilityResult> {
    let mut found: Option<(Witness, Result<MTree>)> = None;
    let _ = graph.for_each_consistent(|t| {
        found = Some((Witness::of(&t), build_tree(&t)));
        ControlFlow::Break(())
    });
    match found {
        None => Ok(CompatibilityResult {
            compatible: false,
            witness: None,
            representation: None,
        }),
        Some((witness, tree)) => Ok(CompatibilityResult {
            compatible: true,
            witness: Some(witness),
            representation: Some(tree?),
        }),
    }
}

/// Just the yes/no answer.
pub fn is_compatible(system: &SplitSystem) -> Result<bool> {
    let graph = ContainmentGraph::build(system)?;
    let mut any = false;
    let _ = graph.for_each_consistent(|_| {
        any = true;
        ControlFlow::Break(())
    });
    Ok(any)
}

/// One isomorphism class of consistent thin subgraphs.
#[derive(Clone, Debug, Serialize)]
pub struct IsoClass {
    /// Critical arcs of the class representative.
    pub descriptor: Vec<String>,
    /// Number of distinct consistent thin subgraphs in the class.
    pub members: usize,
    pub tree: MTree,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepresentationCensus {
    pub thin_subgraph_count: usize,
    pub iso_classes: Vec<IsoClass>,
    pub unique: bool,
    /// The enumeration stopped at the limit; counts are lower bounds.
    pub truncated: bool,
    /// Failures of the class/tree correspondence; expected to stay empty.
    pub violations: Vec<String>,
}

pub const DEFAULT_CENSUS_LIMIT: usize = 100_000;

/// Enumerates consistent thin subgraphs (up to `limit`), groups them up to
/// part-preserving isomorphism and builds one tree per class.
pub fn census_representations(system: &SplitSystem, limit: usize) -> Result<RepresentationCensus> {
    let graph = ContainmentGraph::build(system)?;
    census_with_graph(&graph, limit)
}

pub fn census_with_graph(graph: &ContainmentGraph, limit: usize) -> Result<RepresentationCensus> {
    let mut subgraphs: Vec<ThinSubgraph<'_>> = Vec::new();
    let mut truncated = false;
    let _ = graph.for_each_consistent(|t| {
        if subgraphs.len() == limit {
            truncated = true;
            return ControlFlow::Break(());
        }
        subgraphs.push(t);
        ControlFlow::Continue(())
    });

    let mut violations = Vec::new();
    // (representative index, member count, tree)
    let mut classes: Vec<(usize, usize, MTree)> = Vec::new();
    for (k, t) in subgraphs.iter().enumerate() {
        let tree = build_tree(t)?;
        match classes
            .iter_mut()
            .find(|(rep, _, _)| thin_isomorphic(&subgraphs[*rep], t))
        {
            Some((rep, members, rep_tree)) => {
                *members += 1;
                if !rep_tree.is_isomorphic(&tree) {
                    violations.push(format!(
                        "isomorphic thin subgraphs #{} and #{} give non-isomorphic trees {} and {}",
                        *rep + 1,
                        k + 1,
                        rep_tree,
                        tree
                    ));
                }
            }
            None => classes.push((k, 1, tree)),
        }
    }
    let forms: Vec<CanonicalTreeForm> = classes.iter().map(|c| c.2.canonical_form()).collect();
    for a in 0..forms.len() {
        for b in a + 1..forms.len() {
            if forms[a] == forms[b] {
                violations.push(format!(
                    "non-isomorphic thin subgraphs #{} and #{} give isomorphic trees {}",
                    classes[a].0 + 1,
                    classes[b].0 + 1,
                    forms[a]
                ));
            }
        }
    }
    let iso_classes: Vec<IsoClass> = classes
        .into_iter()
        .map(|(rep, members, tree)| IsoClass {
            descriptor: Witness::of(&subgraphs[rep]).critical_labels,
            members,
            tree,
        })
        .collect();
    Ok(RepresentationCensus {
        thin_subgraph_count: subgraphs.len(),
        unique: iso_classes.len() == 1 && !truncated,
        iso_classes,
        truncated,
        violations,
    })
}

/// Digraph isomorphism between two thin subgraphs of the same graph that
/// maps every vertex to one carrying an equal part.
pub fn thin_isomorphic(a: &ThinSubgraph<'_>, b: &ThinSubgraph<'_>) -> bool {
    let g = a.graph();
    let nv = g.vertex_count();
    if a.arcs().len() != b.arcs().len() {
        return false;
    }
    let (ao, bo) = (a.out_masks(), b.out_masks());
    if ao == bo {
        return true;
    }
    let candidates: Vec<Vec<VertexId>> = (0..nv)
        .map(|v| (0..nv).filter(|&w| g.part(w) == g.part(v)).collect())
        .collect();
    let mut map = vec![usize::MAX; nv];
    let mut used = vec![false; nv];
    fn extend(
        v: usize,
        nv: usize,
        candidates: &[Vec<VertexId>],
        ao: &[u64],
        bo: &[u64],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if v == nv {
            return true;
        }
        for &w in &candidates[v] {
            if used[w] {
                continue;
            }
            let fits = (0..v).all(|u| {
                let fwd = (ao[u] >> v & 1) == (bo[map[u]] >> w & 1);
                let back = (ao[v] >> u & 1) == (bo[w] >> map[u] & 1);
                fwd && back
            });
            if !fits {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if extend(v + 1, nv, candidates, ao, bo, map, used) {
                return true;
            }
            used[w] = false;
        }
        false
    }
    extend(0, nv, &candidates, ao, bo, &mut map, &mut used)
}

/// The thin subgraph read off a representing tree: `(A, S_i) -> (B, S_j)`
/// whenever the side of `S_i`'s edge carrying `A` lies inside the side of
/// `S_j`'s edge carrying `B`.
pub fn thin_subgraph_from_tree<'g>(
    graph: &'g ContainmentGraph,
    tree: &MTree,
) -> Result<ThinSubgraph<'g>> {
    let system = graph.system();
    if !tree.represents(system) {
        return Err(Error::Internal(
            "tree does not represent the split system".to_string(),
        ));
    }
    if tree.vertex_count() > 64 {
        return Err(Error::TooManySplits {
            n: system.len(),
            max: 63,
        });
    }
    let induced = tree.induced_splits();
    let mut used = vec![false; induced.len()];
    let nv = graph.vertex_count();
    let mut component = vec![0u64; nv];
    for (i, split) in system.splits().iter().enumerate() {
        let e = (0..induced.len())
            .find(|&e| !used[e] && &induced[e] == split)
            .ok_or_else(|| Error::Internal("edge matching failed".to_string()))?;
        used[e] = true;
        let (x, y) = tree.edges()[e];
        let xs = tree.side_of_edge(x, y);
        let ys = tree.side_of_edge(y, x);
        let x_label = xs
            .iter()
            .fold(Multiset::new(), |acc, &v| acc.sum(tree.label(v)));
        let mask = |vs: &[usize]| vs.iter().fold(0u64, |m, &v| m | 1 << v);
        let (small, large) = if &x_label == split.small() {
            (mask(&xs), mask(&ys))
        } else {
            (mask(&ys), mask(&xs))
        };
        component[2 * i] = small;
        component[2 * i + 1] = large;
    }
    let mut arcs = Vec::new();
    for u in 0..nv {
        for v in 0..nv {
            if split_of(u) != split_of(v) && component[u] & !component[v] == 0 {
                arcs.push((u, v));
            }
        }
    }
    ThinSubgraph::from_arcs(graph, &arcs)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, v: usize) -> usize {
        let mut r = v;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = v;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(s: &str) -> Multiset {
        s.parse().unwrap()
    }

    fn system(ground: &str, parts: &[&str]) -> SplitSystem {
        SplitSystem::from_parts(&ms(ground), parts.iter().map(|p| ms(p))).unwrap()
    }

    #[test]
    fn single_split_is_an_edge() {
        let s = system("a^2 b c", &["a b"]);
        let r = check_compatibility(&s).unwrap();
        assert!(r.compatible);
        let t = r.representation.unwrap();
        assert_eq!(t.vertex_count(), 2);
        assert!(t.represents(&s));
        assert_eq!(t.to_text(), "({a,b}:({a,c}))");
    }

    #[test]
    fn empty_system_is_a_lone_vertex() {
        let s = SplitSystem::empty(ms("a b"));
        let r = check_compatibility(&s).unwrap();
        assert!(r.compatible);
        assert_eq!(r.representation.unwrap().to_text(), "({a,b})");
        assert_eq!(r.witness.unwrap().arcs, vec![]);
    }

    #[test]
    fn worked_examples() {
        let pairwise = system("a^2 b c d", &["a b", "a c", "a d"]);
        assert!(!check_compatibility(&pairwise).unwrap().compatible);

        let thin = system("x^3 y z", &["x^2", "x y", "x z"]);
        assert!(!check_compatibility(&thin).unwrap().compatible);

        let fig1 = system("a^2 b^2 c^2 x y", &["a b", "a c", "c x", "a b c x"]);
        let r = check_compatibility(&fig1).unwrap();
        let expected = MTree::parse(
            "({}:({a,b}),({c,x}),({b,y}:({a,c})))",
            fig1.ground(),
        )
        .unwrap();
        assert!(r.representation.unwrap().is_isomorphic(&expected));
        let census = census_representations(&fig1, DEFAULT_CENSUS_LIMIT).unwrap();
        assert_eq!(census.thin_subgraph_count, 1);
        assert!(census.unique);
    }

    #[test]
    fn fig3_census() {
        let s = system("a^2 b^2 c d", &["a", "a b c", "b"]);
        let c = census_representations(&s, DEFAULT_CENSUS_LIMIT).unwrap();
        assert_eq!(c.thin_subgraph_count, 4);
        assert_eq!(c.iso_classes.len(), 4);
        assert!(!c.unique);
        assert!(c.violations.is_empty());
        for class in &c.iso_classes {
            assert!(class.tree.represents(&s));
        }
    }

    #[test]
    fn duplicate_split_with_nested_sides_is_compatible() {
        // a ⊊ abc, so {S, S} has a consistent thin subgraph: a - bc - a
        let s = system("a^2 b c", &["a", "a"]);
        let r = check_compatibility(&s).unwrap();
        assert!(r.compatible);
        assert!(r.representation.unwrap().represents(&s));
        let set = system("a b c d", &["a b", "a b"]);
        assert!(!check_compatibility(&set).unwrap().compatible);
    }

    #[test]
    fn round_trip_through_forward_construction() {
        let s = system("a^2 b^2 c d", &["a", "a b c", "b"]);
        let g = ContainmentGraph::build(&s).unwrap();
        let c = census_with_graph(&g, DEFAULT_CENSUS_LIMIT).unwrap();
        for class in &c.iso_classes {
            let t = thin_subgraph_from_tree(&g, &class.tree).unwrap();
            assert!(t.is_consistent());
            assert!(build_tree(&t).unwrap().is_isomorphic(&class.tree));
        }
    }

    #[test]
    fn build_tree_rejects_inconsistent() {
        let s = system("x^3 y z", &["x^2", "x y", "x z"]);
        let g = ContainmentGraph::build(&s).unwrap();
        let t = g.thin_subgraphs().next().unwrap();
        assert!(matches!(build_tree(&t), Err(Error::Inconsistent)));
    }
}
