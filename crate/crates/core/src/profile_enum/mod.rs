//! Degree profiles and the exact counts built on them: `M(r)`, `N(k)` (by
//! direct summation and by series coefficient extraction), `S_n(k)` and
//! `m_n(k)`.

mod counts;
mod profile;
mod series;
mod stream;

pub use counts::{
    count_trees_with_profile, expected_twin_pairs, expected_twin_pairs_unreduced, factorial, host_pair_count,
    host_pair_count_with, rooted_tree_count, twin_profile_count_direct, twin_profile_count_direct_range, ExactCount,
    ExactRational, FactorialTable,
};
pub(crate) use counts::ratio_to_f64;
pub use profile::{DegreeCap, DegreeProfile};
pub use series::twin_profile_count_series;
pub use stream::{enumerate_profiles, ProfileIter, ProfileStream};
