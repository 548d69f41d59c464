//! Finite-ball geometry of relatively hyperbolic groups.
//!
//! Exact group arithmetic for a small catalog of groups, Cayley balls,
//! coned-off and cusped spaces, hyperbolicity estimates, and word-metric
//! diagnostics for relative quasiconvexity and subgroup distortion.

pub mod ball;
pub mod catalog;
pub mod cayley;
pub mod coned;
pub mod cusped;
pub mod delta;
pub mod distortion;
pub mod error;
pub mod export;
pub mod graph;
pub mod group;
pub mod horoball;
pub mod lattice;
pub mod qc;
pub mod spec;
pub mod stallings;
pub mod subgroup;
pub mod word;

pub use ball::ElementBall;
pub use cayley::{CayleyBall, CosetDistances, GeodesicPath};
pub use coned::{
    bcp_probe, fineness_probe, BcpLevel, BcpParams, BcpReport, ConedBall, ConedVertex, Half,
    Penetration, RelStep, RelativePath, DEFAULT_MARGIN,
};
pub use cusped::{horoball_lemma_probe, qc3_probe, CuspedBall, CuspedPath, CuspedVertex, LemmaProbe};
pub use delta::{delta_estimate, triangle_defect, DeltaEstimate, DeltaMethod, DeltaMode};
pub use distortion::{
    distortion_by_matching, distortion_sandwich_check, distortion_table, dominance_check,
    embedding_profile, superadditive_closure, Dominance, DistortionTable, EmbeddingProfile,
    GrowthFunction, Provenance, SandwichReport,
};
pub use error::{Error, Result};
pub use graph::Graph;
pub use group::{Element, GroupKind, MarkedGroup};
pub use horoball::{FiniteMetric, HoroballGraph};
pub use qc::{
    coset_intersection_bound, deep_decomposition, induced_peripheral_probe, qc5_profile,
    saturation, transition_criterion_check, transition_points, CloseCosetReport, CosetRef,
    DeepComponent, InducedReport, IntersectionClass, LeftCoset, QcReport, Saturation,
    TransitionDecomposition, Verdict, WordMetric,
};
pub use spec::{GroupSpec, Params, RunSpec, SubgroupEntry};
pub use subgroup::{
    subgroup_membership, CosetId, Membership, Oracle, PeripheralStructure, SubgroupSpec,
};
pub use word::{free_reduce, parse_word, Letter, Word};
