//! Exact compatibility analysis for split systems on multisets.
//!
//! * [`multiset`] and [`split`]: the data model.
//! * [`scg`]: the split-containment graph, thin subgraphs, critical arcs.
//! * [`mtree`]: labelled trees, induced splits, canonical forms.
//! * [`engine`]: compatibility, tree assembly, representation census.
//! * [`oracle`]: brute-force tree enumeration, independent of the engine.
//! * [`analysis`]: terminal sets, minimal incompatible subsets, bound checks.
//! * [`scan`]: exhaustive enumeration of small split systems.

pub mod analysis;
pub mod engine;
pub mod error;
pub mod mtree;
pub mod multiset;
pub mod oracle;
pub mod scan;
pub mod scg;
pub mod split;

pub use engine::{
    build_tree, census_representations, check_compatibility, CompatibilityResult,
    RepresentationCensus,
};
pub use error::{Error, Result};
pub use mtree::{CanonicalTreeForm, MTree, RawTree, TreeError};
pub use multiset::Multiset;
pub use scg::{ContainmentGraph, PairClass, ThinSubgraph};
pub use split::{pairwise_compatible, Side, Split, SplitSystem};
