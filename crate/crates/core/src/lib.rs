//! Transductive node classification by weightless graph convolution and
//! hyperdimensional bundling.
//!
//! The pipeline has no trainable parameters:
//!
//! 1. [`graph::build_graph`] symmetrizes the raw edges and adds self-loops.
//! 2. [`propagation::encode`] runs `L` rounds of `D^-1/2 A D^-1/2 H`
//!    (or logical-OR aggregation when features are binary) and blends the
//!    result with the input features.
//! 3. [`classifier::fit_centers`] sums the training hypervectors of each
//!    class; [`classifier::predict`] assigns every node to the most
//!    cosine-similar center.
//!
//! [`experiment::run_experiment`] drives the whole protocol over a dataset
//! directory and produces a [`experiment::RunReport`].

pub mod benchmarks;
pub mod classifier;
pub mod dataset;
pub mod error;
pub mod experiment;
pub mod features;
pub mod graph;
pub mod hdc;
pub mod parallel;
pub mod propagation;
pub mod split;
pub mod synthetic;

pub use classifier::{accuracy, fit_centers, predict, ClassCenters, LabeledSplit, Which};
pub use dataset::{load_dataset, load_geomgcn_raw, DatasetBundle, FeatureKind};
pub use error::{Error, ErrorClass, Result};
pub use features::{BitFeatureMatrix, FeatureMatrix};
pub use graph::{build_graph, AdjacencyStructure, EdgeList};
pub use hdc::{bind, bundle_bipolar, cosine_similarity, or_reduce, BitHypervector, Hypervector, Similarity};
pub use propagation::{alpha_blend, encode, propagate_binary, propagate_real, EncodeConfig, Mode};
pub use split::{generate_splits, load_splits, SplitIndices, SplitKind, SplitSpec};
