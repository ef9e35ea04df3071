//! Brute-force compatibility oracle.
//!
//! Enumerates every tree shape with the required number of edges (labelled
//! trees from Prüfer sequences, deduplicated by an unlabelled canonical
//! code) and every way of distributing each element's copies over the
//! vertices. Shares nothing with the containment-graph engine beyond the
//! data model; found trees are deduplicated with [`MTree::canonical_form`].

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::mtree::{CanonicalTreeForm, MTree, RawTree};
use crate::multiset::Multiset;
use crate::split::{Split, SplitSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_splits: usize,
    pub max_ground: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_splits: 4,
            max_ground: 8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleVerdict {
    pub compatible: bool,
    /// All representations up to isomorphism, sorted by canonical form.
    pub representations: Vec<MTree>,
}

/// Decides compatibility by exhaustive search over labelled trees.
pub fn oracle_compatible(system: &SplitSystem, budget: OracleBudget) -> Result<OracleVerdict> {
    let ground = system.ground();
    if system.len() > budget.max_splits || ground.len() > budget.max_ground {
        return Err(Error::BudgetExceeded(format!(
            "oracle is limited to {} splits over {} elements, got {} splits over {}",
            budget.max_splits,
            budget.max_ground,
            system.len(),
            ground.len()
        )));
    }
    let support: Vec<&str> = ground.support().collect();
    let ground_counts: Vec<u32> = support.iter().map(|x| ground.multiplicity(x)).collect();
    let mut target: Vec<Vec<u32>> = system
        .splits()
        .iter()
        .map(|s| {
            let c: Vec<u32> = support.iter().map(|x| s.small().multiplicity(x)).collect();
            unordered_key(c, &ground_counts)
        })
        .collect();
    target.sort();

    let mut found: BTreeMap<CanonicalTreeForm, MTree> = BTreeMap::new();
    for_each_labelled_tree(&ground_counts, system.len(), |shape, counts| {
        let mut keys: Vec<Vec<u32>> = Vec::with_capacity(shape.sides.len());
        for side in &shape.sides {
            let key = unordered_key(side_counts(side, counts, ground_counts.len()), &ground_counts);
            if target.binary_search(&key).is_err() {
                return;
            }
            keys.push(key);
        }
        keys.sort();
        if keys == target {
            let tree = to_mtree(shape, counts, &support, ground);
            found.entry(tree.canonical_form()).or_insert(tree);
        }
    });
    let representations: Vec<MTree> = found.into_values().collect();
    Ok(OracleVerdict {
        compatible: !representations.is_empty(),
        representations,
    })
}

/// Every tree over `ground` with at most `max_edges` edges, indexed by the
/// split system it represents (splits sorted), with all its trees up to
/// isomorphism. A batch form of [`oracle_compatible`] for exhaustive tests.
pub fn representation_index(
    ground: &Multiset,
    max_edges: usize,
) -> BTreeMap<Vec<Split>, BTreeSet<CanonicalTreeForm>> {
    let support: Vec<&str> = ground.support().collect();
    let ground_counts: Vec<u32> = support.iter().map(|x| ground.multiplicity(x)).collect();
    let mut index: BTreeMap<Vec<Split>, BTreeSet<CanonicalTreeForm>> = BTreeMap::new();
    for edges in 0..=max_edges {
        for_each_labelled_tree(&ground_counts, edges, |shape, counts| {
            let tree = to_mtree(shape, counts, &support, ground);
            let mut splits = tree.induced_splits();
            splits.sort();
            index.entry(splits).or_default().insert(tree.canonical_form());
        });
    }
    index
}

fn unordered_key(part: Vec<u32>, ground: &[u32]) -> Vec<u32> {
    let rest: Vec<u32> = ground.iter().zip(&part).map(|(g, p)| g - p).collect();
    part.min(rest)
}

fn side_counts(side: &[usize], counts: &[Vec<u32>], k: usize) -> Vec<u32> {
    let mut acc = vec![0u32; k];
    for &v in side {
        for (a, c) in acc.iter_mut().zip(&counts[v]) {
            *a += c;
        }
    }
    acc
}

fn to_mtree(shape: &Shape, counts: &[Vec<u32>], support: &[&str], ground: &Multiset) -> MTree {
    let labels = counts
        .iter()
        .map(|row| {
            Multiset::from_counts(support.iter().zip(row).map(|(x, &c)| (x.to_string(), c)))
                .expect("names come from a valid multiset")
        })
        .collect();
    MTree::validate(
        RawTree {
            labels,
            edges: shape.edges.clone(),
        },
        ground,
    )
    .expect("enumerated trees satisfy (M1) and (M2)")
}

struct Shape {
    edges: Vec<(usize, usize)>,
    degree: Vec<usize>,
    /// For each edge, the vertices on the side of its first endpoint.
    sides: Vec<Vec<usize>>,
}

/// Unlabelled tree shapes with `edges` edges, one per isomorphism class.
fn shapes(edges: usize) -> Vec<Shape> {
    let n = edges + 1;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut add = |edge_list: Vec<(usize, usize)>| {
        let code = unlabelled_code(n, &edge_list);
        if seen.insert(code) {
            out.push(make_shape(n, edge_list));
        }
    };
    match n {
        1 => add(vec![]),
        2 => add(vec![(0, 1)]),
        _ => {
            let mut seq = vec![0usize; n - 2];
            loop {
                add(prufer_decode(&seq, n));
                // next sequence in lexicographic order
                let mut k = seq.len();
                loop {
                    if k == 0 {
                        return out;
                    }
                    k -= 1;
                    seq[k] += 1;
                    if seq[k] < n {
                        break;
                    }
                    seq[k] = 0;
                }
            }
        }
    }
    out
}

fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf always remains");
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

fn make_shape(n: usize, edges: Vec<(usize, usize)>) -> Shape {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let sides = edges
        .iter()
        .map(|&(u, v)| {
            let mut side = vec![u];
            let mut stack = vec![(u, v)];
            while let Some((x, from)) = stack.pop() {
                for &w in &adj[x] {
                    if w != from {
                        side.push(w);
                        stack.push((w, x));
                    }
                }
            }
            side
        })
        .collect();
    Shape {
        degree: adj.iter().map(Vec::len).collect(),
        edges,
        sides,
    }
}

/// Minimum over all roots of the sorted-children parenthesis code.
fn unlabelled_code(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    fn code(v: usize, parent: usize, adj: &[Vec<usize>]) -> String {
        let mut kids: Vec<String> = adj[v]
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| code(w, v, adj))
            .collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    (0..n)
        .map(|r| code(r, usize::MAX, &adj))
        .min()
        .unwrap_or_default()
}

/// Calls `visit` for every shape with `edges` edges and every assignment of
/// element copies to vertices that satisfies (M2). `counts[v][x]` is the
/// number of copies of element `x` on vertex `v`.
fn for_each_labelled_tree<F>(ground_counts: &[u32], edges: usize, mut visit: F)
where
    F: FnMut(&Shape, &[Vec<u32>]),
{
    let n = edges + 1;
    for shape in shapes(edges) {
        let mut counts = vec![vec![0u32; ground_counts.len()]; n];
        distribute(&shape, ground_counts, 0, &mut counts, &mut visit);
    }
}

fn distribute<F>(shape: &Shape, ground: &[u32], element: usize, counts: &mut [Vec<u32>], visit: &mut F)
where
    F: FnMut(&Shape, &[Vec<u32>]),
{
    if element == ground.len() {
        let m2 = (0..counts.len())
            .all(|v| shape.degree[v] > 2 || counts[v].iter().any(|&c| c > 0));
        if m2 {
            visit(shape, counts);
        }
        return;
    }
    compositions(shape, ground, element, 0, ground[element], counts, visit);
}

/// Places `left` copies of `element` on vertices `v..`.
fn compositions<F>(
    shape: &Shape,
    ground: &[u32],
    element: usize,
    v: usize,
    left: u32,
    counts: &mut [Vec<u32>],
    visit: &mut F,
) where
    F: FnMut(&Shape, &[Vec<u32>]),
{
    if v + 1 == counts.len() {
        counts[v][element] = left;
        distribute(shape, ground, element + 1, counts, visit);
        counts[v][element] = 0;
        return;
    }
    for here in 0..=left {
        counts[v][element] = here;
        compositions(shape, ground, element, v + 1, left - here, counts, visit);
    }
    counts[v][element] = 0;
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
    fn shape_counts_match_unlabelled_tree_numbers() {
        // unlabelled trees on 1..=7 vertices: 1, 1, 1, 2, 3, 6, 11
        let counts: Vec<usize> = (0..7).map(|e| shapes(e).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11]);
    }

    #[test]
    fn pair_from_the_pairwise_example() {
        let s = system("a^2 b c d", &["a b", "a c"]);
        let v = oracle_compatible(&s, OracleBudget::default()).unwrap();
        assert!(v.compatible);
        assert_eq!(v.representations.len(), 1);
        // ab - {d} - ac; a middle {a} would induce a^2 b | c d instead
        assert_eq!(v.representations[0].to_text(), "({d}:({a,b}),({a,c}))");
    }

    #[test]
    fn duplicated_set_split_is_incompatible() {
        let s = system("a b c d", &["a b", "a b"]);
        assert!(!oracle_compatible(&s, OracleBudget::default()).unwrap().compatible);
    }

    #[test]
    fn buneman_pair_is_unique() {
        let s = system("a b c", &["a", "a b"]);
        let v = oracle_compatible(&s, OracleBudget::default()).unwrap();
        assert!(v.compatible);
        assert_eq!(v.representations.len(), 1);
    }

    #[test]
    fn refuses_beyond_budget() {
        let s = system("a b c d e f g h i", &["a"]);
        assert!(matches!(
            oracle_compatible(&s, OracleBudget::default()),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn index_agrees_with_direct_oracle() {
        let g = ms("a^2 b c");
        let index = representation_index(&g, 2);
        for (splits, forms) in &index {
            let s = SplitSystem::new(g.clone(), splits.clone()).unwrap();
            let v = oracle_compatible(&s, OracleBudget::default()).unwrap();
            let direct: BTreeSet<_> = v.representations.iter().map(|t| t.canonical_form()).collect();
            assert_eq!(&direct, forms);
        }
    }
}
