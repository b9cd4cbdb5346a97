//! Generalized progressions in the free group `F_k` on generators
//! `a_1, …, a_k`.
//!
//! `gP(N̄)` is the set of `x` with `d_i(g, x) ≤ N_i` for every `i`, where
//! `d_i(x, y)` counts the `a_i^{±1}` letters of the reduced word `x⁻¹y`.
//! The Cayley graph of `F_k` is a tree, and these sets are connected in it;
//! the decision procedures below lean on that geometry.

mod fixture;
mod progression;
mod search;
mod tree;
mod word;

pub use fixture::{ExampleCheck, ExampleDistance, ExampleRow, F2Example, F2_EXAMPLE_JSON};
pub use progression::{
    cuts_out_free, generator_shatter_witness, is_shattered_free, is_shattered_free_with_cap,
    normalize_entry_point, progression_contains, CutSearch, FProgressionSpec,
    DEFAULT_FREE_SHATTER_CAP,
};
pub use search::{
    random_reduced_word, sample_point_set, search_shattered, SearchConfig, SearchReport,
};
pub use tree::{
    branches, dominating_sequence, leaves, minimal_tree, path, tripod_profile,
    tripod_profile_with_arm, Branches, DominatingSequence, TreeSlice, Tripod,
};
pub use word::{dist, dist_i, dist_vector, FWord, Letter};
