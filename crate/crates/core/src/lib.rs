//! Universal rooted tree shapes and tanglegrams.
//!
//! A shape is a rooted unordered tree whose internal vertices have between
//! 2 and `d` children, with white leaves and at most one red leaf. A shape
//! is n-universal when every shape with `n` white leaves is an induced
//! subtree of it. The crate enumerates shapes, decides induced-subtree
//! containment, builds universal shapes and tanglegrams, evaluates bounds on
//! their minimum size and searches exhaustively for the minimum.
//!
//! Integer bound tables and coefficient sequences are generic over the
//! integer type; the aliases below fix `u64` or [`num_bigint::BigUint`].

pub use num_bigint::BigUint;

pub mod bounds;
pub mod constructions;
pub mod decomposition;
pub mod embedding;
pub mod error;
pub mod search;
pub mod shape;
pub mod tanglegram;

pub use constructions::{
    build_redleaf_comb, build_universal, build_universal_redleaf, build_universal_tanglegram, embed_composition,
    svec, CoeffSequences, SVec, UniversalBuilder,
};
pub use decomposition::{split_dary, split_for_redleaf, split_for_universal, white_leaf_centroid, Split, SplitKind};
pub use embedding::{is_induced_subtree, jellyfish_mast, mast, EmbedTable};
pub use error::{Error, Result};
pub use search::{check_depth_conjecture, find_min_universal, is_universal, SearchConfig, SearchReport};
pub use shape::{
    caterpillar, complete, enumerate_shapes, jellyfish, parse_code, parse_newick, wedderburn_etherington,
    CanonicalCode, Color, Enumerator, JellyfishSpec, Shape, BINARY,
};
pub use tanglegram::{
    enumerate_tanglegrams, is_induced_subtanglegram, is_universal_tanglegram, Tanglegram, TanglegramCode,
};

pub type BoundTable64 = bounds::BoundTable<u64>;
pub type BigBoundTable = bounds::BoundTable<num_bigint::BigUint>;
pub type CoeffSequences64 = constructions::CoeffSequences<u64>;
pub type BigCoeffSequences = constructions::CoeffSequences<num_bigint::BigUint>;
