//! Vertex-labelled trees over a multiset.
//!
//! An [`MTree`] is a tree whose vertex labels sum to the ground multiset
//! (M1) and whose vertices of degree 1 or 2 carry nonempty labels (M2).
//! A single vertex labelled with the whole ground is also accepted; it is
//! the representation of the empty split system.
//!
//! Text format, also used as the canonical form:
//!
//! ```text
//! tree  = "(" label [ ":" tree { "," tree } ] ")"
//! label = "{" [ token { "," token } ] "}"
//! token = name [ "^" multiplicity ]
//! ```
//!
//! e.g. `({}:({a,b}),({c,x}),({b,y}:({a,c})))`.

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::multiset::Multiset;
use crate::split::{Split, SplitSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("a tree needs at least one vertex")]
    Empty,
    #[error("edge ({0}, {1}) refers to a missing vertex or is a loop")]
    BadEdge(usize, usize),
    #[error("not a tree: {vertices} vertices and {edges} edges")]
    EdgeCount { vertices: usize, edges: usize },
    #[error("not a tree: the graph is disconnected")]
    Disconnected,
    #[error("(M1) violated: labels sum to `{found}` instead of `{expected}`")]
    M1 { found: String, expected: String },
    #[error("(M2) violated: vertex {vertex} has degree {degree} and an empty label")]
    M2 { vertex: usize, degree: usize },
    #[error("malformed tree text at byte {offset}: {reason}")]
    Syntax { offset: usize, reason: String },
}

/// An unvalidated labelled graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTree {
    pub labels: Vec<Multiset>,
    pub edges: Vec<(usize, usize)>,
}

impl RawTree {
    /// Parses the parenthesised text format (vertices numbered in preorder).
    pub fn parse(text: &str) -> Result<RawTree, TreeError> {
        let mut p = Parser {
            src: text.as_bytes(),
            text,
            pos: 0,
        };
        let mut raw = RawTree::default();
        p.skip_ws();
        p.tree(&mut raw, None)?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(raw)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> TreeError {
        TreeError::Syntax {
            offset: self.pos,
            reason: reason.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), TreeError> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn tree(&mut self, raw: &mut RawTree, parent: Option<usize>) -> Result<(), TreeError> {
        self.expect(b'(')?;
        self.skip_ws();
        let start = self.pos;
        let end = self.text[start..]
            .find('}')
            .map(|k| start + k + 1)
            .ok_or_else(|| self.error("unterminated label"))?;
        let label = Multiset::parse_label(&self.text[start..end]).map_err(|e| TreeError::Syntax {
            offset: start,
            reason: e.to_string(),
        })?;
        self.pos = end;
        let id = raw.labels.len();
        raw.labels.push(label);
        if let Some(p) = parent {
            raw.edges.push((p, id));
        }
        if self.peek() == Some(b':') {
            self.pos += 1;
            loop {
                self.tree(raw, Some(id))?;
                if self.peek() == Some(b',') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.expect(b')')
    }
}

/// A validated tree over a ground multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MTree {
    ground: Multiset,
    labels: Vec<Multiset>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

/// Isomorphism-invariant text encoding of an [`MTree`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalTreeForm(pub String);

impl fmt::Display for CanonicalTreeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl MTree {
    /// Checks tree structure, (M1) and (M2).
    pub fn validate(raw: RawTree, ground: &Multiset) -> Result<MTree, TreeError> {
        let n = raw.labels.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if raw.edges.len() + 1 != n {
            return Err(TreeError::EdgeCount {
                vertices: n,
                edges: raw.edges.len(),
            });
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &raw.edges {
            if u >= n || v >= n || u == v {
                return Err(TreeError::BadEdge(u, v));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(TreeError::Disconnected);
        }
        let total = raw
            .labels
            .iter()
            .fold(Multiset::new(), |acc, l| acc.sum(l));
        if &total != ground {
            return Err(TreeError::M1 {
                found: total.to_string(),
                expected: ground.to_string(),
            });
        }
        for (v, nbrs) in adj.iter().enumerate() {
            if nbrs.len() <= 2 && raw.labels[v].is_empty() {
                return Err(TreeError::M2 {
                    vertex: v,
                    degree: nbrs.len(),
                });
            }
        }
        Ok(MTree {
            ground: ground.clone(),
            labels: raw.labels,
            edges: raw.edges,
            adj,
        })
    }

    /// Parses the text format and validates against `ground`.
    pub fn parse(text: &str, ground: &Multiset) -> Result<MTree, TreeError> {
        MTree::validate(RawTree::parse(text)?, ground)
    }

    pub fn ground(&self) -> &Multiset {
        &self.ground
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> &Multiset {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[Multiset] {
        &self.labels
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(|&v| self.degree(v) == 1)
    }

    /// Vertices on the `from` side of the edge `{from, to}`.
    pub fn side_of_edge(&self, from: usize, to: usize) -> Vec<usize> {
        let mut out = vec![from];
        let mut stack = vec![(from, to)];
        while let Some((u, parent)) = stack.pop() {
            for &w in &self.adj[u] {
                if w != parent {
                    out.push(w);
                    stack.push((w, u));
                }
            }
        }
        out
    }

    /// Label sum on the `from` side of the edge `{from, to}`.
    fn side_label(&self, from: usize, to: usize) -> Multiset {
        self.side_of_edge(from, to)
            .iter()
            .fold(Multiset::new(), |acc, &v| acc.sum(&self.labels[v]))
    }

    /// One split per edge, in edge order.
    pub fn induced_splits(&self) -> Vec<Split> {
        self.edges
            .iter()
            .map(|&(u, v)| {
                let a = self.side_label(u, v);
                let b = self.side_label(v, u);
                Split::new(&self.ground, a, b).expect("(M2) keeps both sides of every edge nonempty")
            })
            .collect()
    }

    /// The split system represented by this tree, in edge order.
    pub fn split_system(&self) -> SplitSystem {
        SplitSystem::new(self.ground.clone(), self.induced_splits())
            .expect("induced splits share the tree's ground")
    }

    /// Whether the induced splits equal `system` as a multiset of splits.
    pub fn represents(&self, system: &SplitSystem) -> bool {
        if system.ground() != &self.ground || system.len() != self.edges.len() {
            return false;
        }
        let mut mine = self.induced_splits();
        mine.sort();
        mine == system.sorted_splits()
    }

    fn centroids(&self) -> Vec<usize> {
        let n = self.vertex_count();
        if n <= 2 {
            return (0..n).collect();
        }
        let mut order = Vec::with_capacity(n);
        let mut parent = vec![usize::MAX; n];
        let mut stack = vec![0];
        parent[0] = 0;
        while let Some(u) = stack.pop() {
            order.push(u);
            for &w in &self.adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    stack.push(w);
                }
            }
        }
        let mut size = vec![1usize; n];
        for &u in order.iter().rev().filter(|&&u| u != 0) {
            size[parent[u]] += size[u];
        }
        let heaviest = |u: usize| {
            self.adj[u]
                .iter()
                .map(|&w| if w == parent[u] && u != 0 { n - size[u] } else { size[w] })
                .max()
                .unwrap_or(0)
        };
        let best = (0..n).map(heaviest).min().unwrap_or(0);
        (0..n).filter(|&u| heaviest(u) == best).collect()
    }

    fn encode(&self, v: usize, parent: Option<usize>, out: &mut String) {
        out.push('(');
        out.push_str(&self.labels[v].to_label());
        let mut children: Vec<String> = self.adj[v]
            .iter()
            .filter(|&&w| Some(w) != parent)
            .map(|&w| {
                let mut s = String::new();
                self.encode(w, Some(v), &mut s);
                s
            })
            .collect();
        if !children.is_empty() {
            children.sort();
            out.push(':');
            out.push_str(&children.join(","));
        }
        out.push(')');
    }

    /// Encoding rooted at the centroid; with two centroids, the smaller of
    /// the two rooted encodings.
    pub fn canonical_form(&self) -> CanonicalTreeForm {
        let best = self
            .centroids()
            .into_iter()
            .map(|c| {
                let mut s = String::new();
                self.encode(c, None, &mut s);
                s
            })
            .min()
            .expect("trees are nonempty");
        CanonicalTreeForm(best)
    }

    pub fn is_isomorphic(&self, other: &MTree) -> bool {
        self.ground == other.ground && self.canonical_form() == other.canonical_form()
    }

    /// Text form (the canonical form).
    pub fn to_text(&self) -> String {
        self.canonical_form().0
    }

    /// Undirected DOT with labels drawn inside the vertex shapes.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph mtree {\n  node [shape=ellipse];\n");
        for (v, l) in self.labels.iter().enumerate() {
            let text = if l.is_empty() { "∅".to_string() } else { l.to_string() };
            let _ = writeln!(s, "  t{v} [label=\"{text}\"];");
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "  t{u} -- t{v};");
        }
        s.push_str("}\n");
        s
    }

    /// The same tree with vertex `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> MTree {
        let n = self.vertex_count();
        let mut labels = vec![Multiset::new(); n];
        for v in 0..n {
            labels[perm[v]] = self.labels[v].clone();
        }
        let edges = self.edges.iter().map(|&(u, v)| (perm[v], perm[u])).collect();
        MTree::validate(RawTree { labels, edges }, &self.ground).expect("relabelling preserves validity")
    }
}

impl fmt::Display for MTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Single-vertex tree labelled with the whole ground.
pub fn trivial_tree(ground: &Multiset) -> MTree {
    MTree::validate(
        RawTree {
            labels: vec![ground.clone()],
            edges: vec![],
        },
        ground,
    )
    .expect("a lone vertex carrying the ground is a valid tree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ms(s: &str) -> Multiset {
        s.parse().unwrap()
    }

    fn fig1() -> MTree {
        MTree::parse(
            "({}:({a,b}),({c,x}),({b,y}:({a,c})))",
            &ms("a^2 b^2 c^2 x y"),
        )
        .unwrap()
    }

    #[test]
    fn fig1_tree_is_valid_and_induces_its_system() {
        let t = fig1();
        let g = ms("a^2 b^2 c^2 x y");
        let sys = SplitSystem::from_parts(
            &g,
            ["a b", "a c", "c x", "a b c x"].iter().map(|p| ms(p)),
        )
        .unwrap();
        assert!(t.represents(&sys));
        assert_eq!(t.leaves().count(), 3);
    }

    #[test]
    fn lone_vertex_is_valid() {
        let g = ms("a b");
        let t = trivial_tree(&g);
        assert!(t.induced_splits().is_empty());
        assert_eq!(t.to_text(), "({a,b})");
    }

    #[test]
    fn validation_errors() {
        let g = ms("a b");
        let raw = RawTree {
            labels: vec![ms("a b"), Multiset::new()],
            edges: vec![(0, 1)],
        };
        assert_eq!(
            MTree::validate(raw, &g),
            Err(TreeError::M2 { vertex: 1, degree: 1 })
        );
        let raw = RawTree {
            labels: vec![ms("a"), ms("a")],
            edges: vec![(0, 1)],
        };
        assert!(matches!(MTree::validate(raw, &g), Err(TreeError::M1 { .. })));
        let raw = RawTree {
            labels: vec![ms("a"), ms("b"), Multiset::new()],
            edges: vec![(0, 1), (1, 0)],
        };
        assert_eq!(MTree::validate(raw, &g), Err(TreeError::Disconnected));
        let raw = RawTree {
            labels: vec![ms("a"), ms("b")],
            edges: vec![],
        };
        assert!(matches!(MTree::validate(raw, &g), Err(TreeError::EdgeCount { .. })));
        assert_eq!(MTree::validate(RawTree::default(), &g), Err(TreeError::Empty));
    }

    #[test]
    fn path_induced_splits() {
        // v1{a,b} - v2{a} - v3{c,d}
        let g = ms("a^2 b c d");
        let t = MTree::validate(
            RawTree {
                labels: vec![ms("a b"), ms("a"), ms("c d")],
                edges: vec![(0, 1), (1, 2)],
            },
            &g,
        )
        .unwrap();
        let splits = t.induced_splits();
        assert_eq!(splits[0], Split::from_part(&g, ms("a b")).unwrap());
        assert_eq!(splits[1], Split::from_part(&g, ms("a^2 b")).unwrap());
        assert_eq!(splits[1].small(), &ms("c d"));
    }

    #[test]
    fn single_edge_tree() {
        let g = ms("a^2 b");
        let t = MTree::parse("({a}:({a,b}))", &g).unwrap();
        assert_eq!(t.induced_splits(), vec![Split::from_part(&g, ms("a")).unwrap()]);
    }

    #[test]
    fn swapped_labels_break_isomorphism() {
        let g = ms("a^2 b^2 c d");
        let t = MTree::parse("({a,d}:({a}),({b,c}:({b})))", &g).unwrap();
        let swapped = MTree::parse("({a,c}:({a}),({b,d}:({b})))", &g).unwrap();
        assert!(!t.is_isomorphic(&swapped));
        assert!(t.is_isomorphic(&t.relabeled(&[3, 1, 0, 2])));
    }

    #[test]
    fn parse_errors() {
        let g = ms("a b");
        assert!(matches!(MTree::parse("({a}", &g), Err(TreeError::Syntax { .. })));
        assert!(matches!(MTree::parse("({a}:({b})) x", &g), Err(TreeError::Syntax { .. })));
        assert!(matches!(MTree::parse("(a)", &g), Err(TreeError::Syntax { .. })));
    }

    fn arb_tree() -> impl Strategy<Value = (MTree, Vec<usize>)> {
        (2usize..9)
            .prop_flat_map(|n| {
                (
                    proptest::collection::vec(any::<proptest::sample::Index>(), n - 1),
                    proptest::collection::vec(0u32..3, n),
                    Just(n),
                    Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                )
            })
            .prop_map(|(parents, sizes, n, perm)| {
                let edges: Vec<(usize, usize)> = parents
                    .iter()
                    .enumerate()
                    .map(|(k, p)| (p.index(k + 1), k + 1))
                    .collect();
                let mut deg = vec![0; n];
                for &(u, v) in &edges {
                    deg[u] += 1;
                    deg[v] += 1;
                }
                let labels: Vec<Multiset> = (0..n)
                    .map(|v| {
                        let k = if deg[v] <= 2 { sizes[v].max(1) } else { sizes[v] };
                        Multiset::from_counts([(["p", "q", "r"][v % 3], k)]).unwrap()
                    })
                    .collect();
                let ground = labels.iter().fold(Multiset::new(), |a, l| a.sum(l));
                (MTree::validate(RawTree { labels, edges }, &ground).unwrap(), perm)
            })
    }

    proptest! {
        #[test]
        fn canonical_form_ignores_vertex_numbering((t, perm) in arb_tree()) {
            let r = t.relabeled(&perm);
            prop_assert_eq!(r.canonical_form(), t.canonical_form());
            let mut reordered = RawTree { labels: r.labels().to_vec(), edges: r.edges().to_vec() };
            reordered.edges.reverse();
            let r2 = MTree::validate(reordered, t.ground()).unwrap();
            prop_assert_eq!(r2.canonical_form(), t.canonical_form());
        }

        #[test]
        fn text_round_trip((t, _perm) in arb_tree()) {
            let back = MTree::parse(&t.to_text(), t.ground()).unwrap();
            prop_assert_eq!(back.canonical_form(), t.canonical_form());
            prop_assert_eq!(back.to_text(), t.to_text());
        }

        #[test]
        fn induced_splits_cover_every_edge((t, _perm) in arb_tree()) {
            let splits = t.induced_splits();
            prop_assert_eq!(splits.len(), t.edges().len());
            for s in &splits {
                prop_assert!(!s.small().is_empty() && !s.large().is_empty());
                prop_assert_eq!(&s.small().sum(s.large()), t.ground());
            }
        }
    }
}
