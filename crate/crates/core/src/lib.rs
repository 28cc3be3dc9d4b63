//! Exact integral homology of independence complexes of finite simple graphs.
//!
//! The crate is organised as a pipeline:
//!
//! * [`graph`] — labeled simple graphs, tensor (categorical) products,
//!   disjoint unions, complements, induced subgraphs, and isomorphism
//!   testing by canonical forms; [`family`] builds the named parametric
//!   families the rest of the crate studies.
//! * [`reduce`] — homotopy-preserving graph reductions (neighborhood
//!   folds, cofiber pruning, star-cluster splitting) that shrink a graph
//!   before its complex is ever enumerated.
//! * [`complex`] — explicit independence complexes, f-vectors, Euler
//!   characteristics, and integer boundary matrices.
//! * [`homology`] — sparse Smith normal form over arbitrary-precision
//!   integers, reduced homology profiles, and the wedge/suspension/join
//!   algebra on profiles.
//! * [`predict`] — closed-form wedge-of-spheres predictions for the
//!   supported families, with proven ranges enforced.
//! * [`campaign`] — resumable batch verification of predictions against
//!   computed homology, torsion hunting, and report emission.

pub mod bitset;
pub mod campaign;
pub mod complex;
pub mod error;
pub mod family;
pub mod graph;
pub mod homology;
pub mod iso;
pub mod matrix;
pub mod predict;
pub mod reduce;

pub use campaign::{
    hunt_torsion, instance_key, load_log, report_emit, verify_sweep, FamilyRange, HuntSpec,
    InstanceRecord, ReportFormat, SweepOptions, SweepSpec,
};
pub use complex::{boundary_matrix, independence_complex, Complex, EnumLimits, FVector};
pub use error::Error;
pub use family::{build_atomic, build_family, Family, FamilySpec};
pub use graph::{Atom, Graph, VertexLabel};
pub use homology::{
    homology_of_graph, join, reduced_homology, run_pipeline, suspend, wedge, HomologyProfile,
    PipelineOptions, PipelineReport, ReductionSummary,
};
pub use iso::{canonical_form, isomorphic};
pub use matrix::{rational_rank, smith_normal_form, SmithForm, SparseIntMatrix};
pub use predict::{
    h_value, predict, union_profile, vanishing_window, PredictOptions, Prediction, Provenance,
    UnionInput, VanishingWindow, WedgeProfile,
};
pub use reduce::{
    auto_reduce, cofiber_prune, contractibility_probe, fold_reduce, star_cluster_complex, Probe,
    ReducedForm, ReductionStatus,
};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
