//! Higher-dimensional minimum spanning trees and homologically persistent
//! skeletons of weighted simplices.
//!
//! The usual pipeline: build a [`WeightedComplex`] from a [`PointCloud`]
//! with [`vr_weights`] or [`cech_weights`], take a
//! [`minimal_spanning_tree`], then [`build_hopes`] to label the tree and the
//! critical faces with their lifetimes. [`oracle`] holds slow exhaustive
//! checks for small instances.

pub mod algebra;
pub mod cli;
pub mod complex;
pub mod error;
pub mod filtration;
pub mod homology;
pub mod oracle;
pub mod skeleton;
pub mod spanning;

pub use algebra::{leading_sets, FieldMatrix, FieldSpec, IncrementalBasis, Scalar};
pub use complex::{full_simplex, is_spanning, Face, SimplicialComplex};
pub use error::{Error, Result};
pub use filtration::{
    cech_weights, complete_to_simplex, critical_values, reduced_complex, vr_weights, PointCloud, WeightedComplex,
};
pub use homology::{betti, is_fitting, is_forest, is_tree, persistence_diagram, Dot, PersistenceDiagram};
pub use skeleton::{assign_deaths, build_hopes, critical_faces, diagram_correspondence, reduced_hopes, Label, LabeledSkeleton};
pub use spanning::{minimal_spanning_tree, reduced_mst, SpanningTree, TieOrder};
