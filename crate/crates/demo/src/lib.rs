//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Three operations are exposed:
//! * `propagate`: encode a small hand-built graph and return the feature matrix,
//! * `alphaCurve`: test accuracy against alpha on a synthetic planted-partition graph,
//! * `classify`: per-node predictions on the same kind of graph.
//!
//! Each binding is a thin wrapper over a plain Rust function so the logic can
//! be tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use hdconv::classifier::{accuracy, fit_centers, predict, Which};
use hdconv::dataset::FeatureKind;
use hdconv::graph::{build_graph, EdgeList};
use hdconv::propagation::{alpha_blend, propagate_layers, EncodeConfig, Mode};
use hdconv::split::{generate_splits, SplitKind, SplitSpec};
use hdconv::synthetic::{generate, SyntheticSpec};
use hdconv::FeatureMatrix;

#[derive(Debug, Clone, Copy)]
pub struct SyntheticParams {
    pub nodes: usize,
    pub classes: usize,
    pub avg_degree: f64,
    pub homophily: f64,
    pub signal: f64,
    pub binary: bool,
    pub layers: usize,
    pub seed: u64,
}

impl SyntheticParams {
    fn spec(&self) -> SyntheticSpec {
        SyntheticSpec {
            name: "demo".into(),
            nodes: self.nodes,
            edges: ((self.nodes as f64 * self.avg_degree) / 2.0).round() as usize,
            features: 96,
            classes: self.classes,
            homophily: self.homophily,
            background: 0.03,
            signal: self.signal,
            kind: if self.binary { FeatureKind::Binary } else { FeatureKind::Real },
            seed: self.seed,
        }
    }
}

/// Encodes `features` (`n x d`, row-major) over the graph given by flat
/// `[u0, v0, u1, v1, ..]` pairs. Returns the encoded matrix, row-major.
pub fn propagate_flat(
    n: usize,
    edges: &[u32],
    features: &[f32],
    d: usize,
    layers: usize,
    alpha: f32,
    mode: &str,
) -> Result<Vec<f32>, String> {
    if !edges.len().is_multiple_of(2) {
        return Err("edge list must hold an even number of ids".into());
    }
    let pairs = edges.chunks_exact(2).map(|p| (p[0] as usize, p[1] as usize)).collect();
    let graph = build_graph(&EdgeList::new(n, pairs)).map_err(|e| e.to_string())?;
    let x = FeatureMatrix::new(n, d, features.to_vec()).map_err(|e| e.to_string())?;
    let cfg = EncodeConfig {
        layers,
        alpha,
        mode: mode.parse::<Mode>().map_err(|e| e.to_string())?,
    };
    let h = hdconv::encode(&graph, &x, &cfg).map_err(|e| e.to_string())?;
    Ok(h.as_slice().to_vec())
}

#[derive(Debug, Serialize)]
pub struct CurvePoint {
    pub alpha: f32,
    pub val_accuracy: f64,
    pub test_accuracy: f64,
}

/// Mean accuracy over three 60/20/20 splits for alpha = 0, 0.05, .., 1.
pub fn alpha_curve_points(p: &SyntheticParams) -> Result<Vec<CurvePoint>, String> {
    let bundle = generate(&p.spec()).map_err(|e| e.to_string())?;
    let graph = build_graph(&bundle.edge_list).map_err(|e| e.to_string())?;
    let (propagated, _) =
        propagate_layers(&graph, &bundle.features, p.layers, Mode::Auto).map_err(|e| e.to_string())?;
    let spec = SplitSpec { kind: SplitKind::RATIO_622, n_splits: 3, seed: p.seed };
    let splits = generate_splits(&bundle.labels, bundle.num_classes, &spec).map_err(|e| e.to_string())?;

    (0..=20)
        .map(|i| {
            let alpha = i as f32 / 20.0;
            let h = alpha_blend(&bundle.features, &propagated, alpha).map_err(|e| e.to_string())?;
            let (mut val, mut test) = (0.0, 0.0);
            for s in &splits {
                let centers = fit_centers(&h, s, bundle.num_classes).map_err(|e| e.to_string())?;
                let pv = predict(&h, &centers, &s.val).map_err(|e| e.to_string())?;
                let pt = predict(&h, &centers, &s.test).map_err(|e| e.to_string())?;
                val += accuracy(&pv, s, Which::Val).map_err(|e| e.to_string())?;
                test += accuracy(&pt, s, Which::Test).map_err(|e| e.to_string())?;
            }
            let k = splits.len() as f64;
            Ok(CurvePoint { alpha, val_accuracy: val / k, test_accuracy: test / k })
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct Classification {
    pub labels: Vec<usize>,
    pub predictions: Vec<usize>,
    pub train: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub test_accuracy: f64,
}

/// Fits on one 60/20/20 split and predicts every node.
pub fn classify_nodes(p: &SyntheticParams, alpha: f32) -> Result<Classification, String> {
    let bundle = generate(&p.spec()).map_err(|e| e.to_string())?;
    let graph = build_graph(&bundle.edge_list).map_err(|e| e.to_string())?;
    let cfg = EncodeConfig { layers: p.layers, alpha, mode: Mode::Auto };
    let h = hdconv::encode(&graph, &bundle.features, &cfg).map_err(|e| e.to_string())?;
    let spec = SplitSpec { kind: SplitKind::RATIO_622, n_splits: 1, seed: p.seed };
    let split = generate_splits(&bundle.labels, bundle.num_classes, &spec)
        .map_err(|e| e.to_string())?
        .remove(0);
    let centers = fit_centers(&h, &split, bundle.num_classes).map_err(|e| e.to_string())?;
    let all: Vec<usize> = (0..bundle.num_nodes()).collect();
    let predictions = predict(&h, &centers, &all).map_err(|e| e.to_string())?;
    let test_pred: Vec<usize> = split.test.iter().map(|&v| predictions[v]).collect();
    Ok(Classification {
        test_accuracy: accuracy(&test_pred, &split, Which::Test).map_err(|e| e.to_string())?,
        labels: bundle.labels,
        predictions,
        train: split.train,
        edges: bundle.edge_list.edges,
    })
}

#[wasm_bindgen]
pub fn propagate(
    n: usize,
    edges: &[u32],
    features: &[f32],
    d: usize,
    layers: usize,
    alpha: f32,
    mode: &str,
) -> Result<Vec<f32>, JsValue> {
    propagate_flat(n, edges, features, d, layers, alpha, mode).map_err(|e| JsValue::from_str(&e))
}

#[allow(clippy::too_many_arguments)]
fn params(
    nodes: usize,
    classes: usize,
    avg_degree: f64,
    homophily: f64,
    signal: f64,
    binary: bool,
    layers: usize,
    seed: u32,
) -> SyntheticParams {
    SyntheticParams { nodes, classes, avg_degree, homophily, signal, binary, layers, seed: u64::from(seed) }
}

/// JSON array of `{alpha, val_accuracy, test_accuracy}`.
#[wasm_bindgen(js_name = alphaCurve)]
#[allow(clippy::too_many_arguments)]
pub fn alpha_curve(
    nodes: usize,
    classes: usize,
    avg_degree: f64,
    homophily: f64,
    signal: f64,
    binary: bool,
    layers: usize,
    seed: u32,
) -> Result<String, JsValue> {
    let p = params(nodes, classes, avg_degree, homophily, signal, binary, layers, seed);
    alpha_curve_points(&p)
        .and_then(|pts| serde_json::to_string(&pts).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

/// JSON object with labels, predictions, training nodes, edges and test accuracy.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn classify(
    nodes: usize,
    classes: usize,
    avg_degree: f64,
    homophily: f64,
    signal: f64,
    binary: bool,
    layers: usize,
    seed: u32,
    alpha: f32,
) -> Result<String, JsValue> {
    let p = params(nodes, classes, avg_degree, homophily, signal, binary, layers, seed);
    classify_nodes(&p, alpha)
        .and_then(|c| serde_json::to_string(&c).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}
