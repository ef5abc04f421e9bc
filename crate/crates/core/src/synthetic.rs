//! Seeded synthetic graphs with class-correlated features.
//!
//! A planted-partition graph: each edge joins two nodes of the same class
//! with probability `homophily`, otherwise two nodes of different classes.
//! Every class owns a block of "topic" feature columns that its members
//! switch on more often than background columns.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{DatasetBundle, FeatureKind};
use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::graph::EdgeList;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub name: String,
    pub nodes: usize,
    pub edges: usize,
    pub features: usize,
    pub classes: usize,
    /// Probability that an edge stays within one class.
    pub homophily: f64,
    /// Probability that a background feature is on.
    pub background: f64,
    /// Probability that one of the node's own class topic features is on.
    pub signal: f64,
    pub kind: FeatureKind,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            name: "synthetic".into(),
            nodes: 200,
            edges: 600,
            features: 64,
            classes: 4,
            homophily: 0.8,
            background: 0.02,
            signal: 0.15,
            kind: FeatureKind::Binary,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    /// Same node/edge/feature/class counts as a published benchmark.
    pub fn shaped_like(b: &crate::benchmarks::Benchmark, kind: FeatureKind, seed: u64) -> Self {
        SyntheticSpec {
            name: format!("{}-shaped", b.name),
            nodes: b.nodes,
            edges: b.edges,
            features: b.features,
            classes: b.classes,
            kind,
            seed,
            ..Default::default()
        }
    }
}

pub fn generate(spec: &SyntheticSpec) -> Result<DatasetBundle> {
    if spec.classes < 2 || spec.nodes < spec.classes || spec.features < spec.classes {
        return Err(Error::Config(format!(
            "need classes >= 2, nodes >= classes and features >= classes (got {} nodes, {} features, {} classes)",
            spec.nodes, spec.features, spec.classes
        )));
    }
    for (what, p) in [("homophily", spec.homophily), ("background", spec.background), ("signal", spec.signal)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Config(format!("{what} probability {p} is outside [0, 1]")));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let labels: Vec<usize> = (0..spec.nodes).map(|v| v % spec.classes).collect();
    let members: Vec<Vec<usize>> = (0..spec.classes)
        .map(|c| (c..spec.nodes).step_by(spec.classes).collect())
        .collect();

    let mut edges = Vec::with_capacity(spec.edges);
    while edges.len() < spec.edges {
        let u = rng.random_range(0..spec.nodes);
        let cu = labels[u];
        let cv = if rng.random_bool(spec.homophily) {
            cu
        } else {
            (cu + rng.random_range(1..spec.classes)) % spec.classes
        };
        let v = members[cv][rng.random_range(0..members[cv].len())];
        if u != v {
            edges.push((u, v));
        }
    }

    let block = spec.features / spec.classes;
    let mut data = Vec::with_capacity(spec.nodes * spec.features);
    for &c in &labels {
        let topic = c * block..(c + 1) * block;
        for j in 0..spec.features {
            let p = if topic.contains(&j) { spec.signal } else { spec.background };
            let on = rng.random_bool(p);
            data.push(match (on, spec.kind) {
                (false, _) => 0.0,
                (true, FeatureKind::Binary) => 1.0,
                (true, FeatureKind::Real) => rng.random_range(0.01f32..0.2),
            });
        }
    }

    Ok(DatasetBundle {
        name: spec.name.clone(),
        edge_list: EdgeList::new(spec.nodes, edges),
        features: FeatureMatrix::new(spec.nodes, spec.features, data)?,
        labels,
        num_classes: spec.classes,
        feature_kind: spec.kind,
        notes: Vec::new(),
    })
}
