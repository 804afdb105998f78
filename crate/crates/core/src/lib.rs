//! Desk-scale laboratory for graph tilings: exact solvers for maximum
//! F-tilings, r-independence and r-partite hole numbers, absorption
//! machinery with checkable certificates, and extremal constructions.

pub mod absorption;
pub mod bits;
pub mod constructions;
pub mod graph;
pub mod independence;
pub mod pattern;
pub mod spectral;
pub mod tiling;

pub use absorption::{
    build_absorbing_set, build_fan, concatenate_reachability, find_disjoint_absorbers,
    find_disjoint_connectors, index_vector, initial_partition, merge_partition,
    montgomery_template, robust_vector_certificate, verify_absorber, verify_absorption,
    verify_connector, AbsorberLedger, AbsorbingSet, AbsorptionError, AbsorptionReport,
    IndexVector, MergeRecord, ReachabilityCertificate, RobustnessCertificate, Template,
    VertexPartition,
};
pub use bits::VertexSet;
pub use constructions::{
    clique_free_low_alpha, disjoint_cliques, g0, high_girth_bihole_free, perturb,
    triangle_factor_blocker, ConstructionError, ConstructionRecord, ConstructionSpec,
};
pub use independence::{
    alpha_r, alpha_r_with_budget, alpha_star_r, alpha_star_r_with_budget, is_hole, kr_free,
    IndependenceError, IndependenceReport,
};
pub use graph::{petersen, Girth, Graph, GraphError};
pub use pattern::{
    embed_pattern_at, enumerate_copies, enumerate_copy_sets, CopyStream, Pattern, PatternCopy,
    PatternError, PatternKind,
};
pub use spectral::{
    expander_mixing_check, second_eigenvalue, second_eigenvalue_with, MixingReport, SpectralError,
    SpectralMethod,
    SpectralReport,
};
pub use tiling::{
    factor_verdict, has_factor, max_tiling, max_tiling_with_budget, quasiperfect_gap,
    verify_tiling, QuasiperfectReport, SolveOutcome, Tiling, TilingError, Verdict,
};

/// Exact rational used for all thresholds and fractions.
pub type Frac = num_rational::Ratio<i64>;
