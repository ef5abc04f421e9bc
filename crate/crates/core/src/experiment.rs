//! End-to-end experiment runner: load, encode, fit, predict, report.
//!
//! "Training" time is graph construction plus encoding plus fitting the class
//! centers. Dataset loading is excluded; prediction is timed separately.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::benchmarks::{self, Family};
use crate::classifier::{accuracy, fit_centers, predict, LabeledSplit, Which};
use crate::dataset::{self, DatasetBundle, Layout};
use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::graph::build_graph;
use crate::parallel::with_workers;
use crate::propagation::{alpha_blend, check_alpha, propagate_layers, EncodeConfig, Path};
use crate::split::{generate_splits, load_splits, SplitKind, SplitSpec};

/// Where the evaluation splits come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum SplitSource {
    /// `splits.json` in the dataset directory if present; otherwise generate
    /// 20-per-class splits for citation graphs and 60/20/20 for the rest.
    Auto,
    /// Load from a file (`None` means the dataset's own `splits.json`).
    File { path: Option<PathBuf> },
    Generate { kind: SplitKind },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub data: PathBuf,
    pub encode: EncodeConfig,
    pub splits: SplitSource,
    pub n_splits: usize,
    pub seed: u64,
    pub alpha_sweep: Option<Vec<f32>>,
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn new(data: impl Into<PathBuf>) -> Self {
        RunConfig {
            data: data.into(),
            encode: EncodeConfig::default(),
            splits: SplitSource::Auto,
            n_splits: 10,
            seed: 0,
            alpha_sweep: None,
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.encode.validate()?;
        if self.n_splits == 0 {
            return Err(Error::Config("n_splits must be positive".into()));
        }
        if let Some(alphas) = &self.alpha_sweep {
            if alphas.is_empty() {
                return Err(Error::Config("alpha sweep list is empty".into()));
            }
            alphas.iter().try_for_each(|&a| check_alpha(a))?;
        }
        if self.workers == Some(0) {
            return Err(Error::Config("worker count must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub data: PathBuf,
    pub mode: crate::propagation::Mode,
    pub layers: usize,
    pub alpha: f32,
    pub split_source: String,
    pub n_splits: usize,
    pub seed: u64,
    pub alpha_sweep: Option<Vec<f32>>,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitOutcome {
    pub index: usize,
    pub train_size: usize,
    pub val_size: usize,
    pub test_size: usize,
    pub val_accuracy: f64,
    pub test_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub alpha: f32,
    pub mean_val_accuracy: f64,
    pub mean_test_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub grid: Vec<SweepPoint>,
    pub selected_alpha: f32,
    pub selected_test_accuracy: f64,
}

/// Wall-clock seconds. Fit and predict are means over splits.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Timing {
    pub graph_seconds: f64,
    pub encode_seconds: f64,
    pub fit_seconds: f64,
    pub predict_seconds: f64,
    pub training_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub dataset: String,
    pub layout: Layout,
    pub num_nodes: usize,
    pub num_edges: usize,
    pub num_features: usize,
    pub num_classes: usize,
    pub path: Path,
    pub config: ConfigEcho,
    /// Alpha actually used for `splits` (differs from the configured one after a sweep).
    pub alpha_used: f32,
    pub splits: Vec<SplitOutcome>,
    pub mean_val_accuracy: f64,
    pub mean_test_accuracy: f64,
    /// Sample standard deviation over splits (0 for a single split).
    pub std_test_accuracy: f64,
    pub reference_test_accuracy: Option<f64>,
    pub sweep: Option<SweepReport>,
    pub timing: Timing,
    pub notes: Vec<String>,
}

impl RunReport {
    /// The report with all timing fields zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> RunReport {
        RunReport {
            timing: Timing::default(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<RunReport> {
        Ok(serde_json::from_str(s)?)
    }
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

fn resolve_splits(cfg: &RunConfig, bundle: &DatasetBundle) -> Result<(Vec<LabeledSplit>, String)> {
    let from_file = |path: PathBuf| -> Result<(Vec<LabeledSplit>, String)> {
        let splits = load_splits(&path, bundle.num_nodes())?
            .into_iter()
            .map(|s| LabeledSplit::new(bundle.labels.clone(), bundle.num_classes, s))
            .collect::<Result<Vec<_>>>()?;
        Ok((splits, format!("file:{}", path.display())))
    };
    let generate = |kind: SplitKind| -> Result<(Vec<LabeledSplit>, String)> {
        let spec = SplitSpec {
            kind,
            n_splits: cfg.n_splits,
            seed: cfg.seed,
        };
        let label = match kind {
            SplitKind::Ratio { train, val, test } => format!("generated:ratio {train}/{val}/{test}"),
            SplitKind::PerClassCount { per_class, val, test } => {
                format!("generated:{per_class} per class, {val} val, {test} test")
            }
            SplitKind::Fixed => "fixed".into(),
        };
        Ok((generate_splits(&bundle.labels, bundle.num_classes, &spec)?, label))
    };

    match &cfg.splits {
        SplitSource::File { path: Some(p) } => from_file(p.clone()),
        SplitSource::File { path: None } | SplitSource::Generate { kind: SplitKind::Fixed } => {
            from_file(dataset::fixed_splits_path(&cfg.data))
        }
        SplitSource::Generate { kind } => generate(*kind),
        SplitSource::Auto => {
            let fixed = dataset::fixed_splits_path(&cfg.data);
            if fixed.exists() {
                from_file(fixed)
            } else {
                match benchmarks::lookup(&bundle.name).map(|b| b.family) {
                    Some(Family::Homophilic) => generate(SplitKind::PLANETOID),
                    _ => generate(SplitKind::RATIO_622),
                }
            }
        }
    }
}

struct Evaluation {
    outcomes: Vec<SplitOutcome>,
    fit_seconds: Vec<f64>,
    predict_seconds: Vec<f64>,
}

fn evaluate(h: &FeatureMatrix, splits: &[LabeledSplit], num_classes: usize) -> Result<Evaluation> {
    let mut eval = Evaluation {
        outcomes: Vec::with_capacity(splits.len()),
        fit_seconds: Vec::with_capacity(splits.len()),
        predict_seconds: Vec::with_capacity(splits.len()),
    };
    for (i, split) in splits.iter().enumerate() {
        let ctx = |e: Error| e.context(format!("split {i}"));
        let t = Instant::now();
        let centers = fit_centers(h, split, num_classes).map_err(ctx)?;
        eval.fit_seconds.push(t.elapsed().as_secs_f64());

        let t = Instant::now();
        let val_pred = predict(h, &centers, &split.val).map_err(ctx)?;
        let test_pred = predict(h, &centers, &split.test).map_err(ctx)?;
        eval.predict_seconds.push(t.elapsed().as_secs_f64());

        eval.outcomes.push(SplitOutcome {
            index: i,
            train_size: split.train.len(),
            val_size: split.val.len(),
            test_size: split.test.len(),
            val_accuracy: accuracy(&val_pred, split, Which::Val)?,
            test_accuracy: accuracy(&test_pred, split, Which::Test)?,
        });
    }
    Ok(eval)
}

/// Evaluates every alpha in `alphas` over `splits` given the propagated
/// features; picks the best mean validation accuracy, ties toward smaller alpha.
pub fn sweep_alpha(
    x: &FeatureMatrix,
    propagated: &FeatureMatrix,
    splits: &[LabeledSplit],
    num_classes: usize,
    alphas: &[f32],
) -> Result<SweepReport> {
    if alphas.is_empty() {
        return Err(Error::Config("alpha sweep list is empty".into()));
    }
    if splits.iter().any(|s| s.val.is_empty()) {
        return Err(Error::Config("alpha sweep needs a non-empty validation set".into()));
    }
    let mut grid = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let h = alpha_blend(x, propagated, alpha)?;
        let eval = evaluate(&h, splits, num_classes)?;
        let vals: Vec<f64> = eval.outcomes.iter().map(|o| o.val_accuracy).collect();
        let tests: Vec<f64> = eval.outcomes.iter().map(|o| o.test_accuracy).collect();
        grid.push(SweepPoint {
            alpha,
            mean_val_accuracy: mean(&vals),
            mean_test_accuracy: mean(&tests),
        });
    }
    let mut best = &grid[0];
    for p in &grid[1..] {
        if p.mean_val_accuracy > best.mean_val_accuracy
            || (p.mean_val_accuracy == best.mean_val_accuracy && p.alpha < best.alpha)
        {
            best = p;
        }
    }
    Ok(SweepReport {
        selected_alpha: best.alpha,
        selected_test_accuracy: best.mean_test_accuracy,
        grid,
    })
}

/// Runs the full protocol on the dataset directory named by `cfg.data`.
pub fn run_experiment(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    let (bundle, layout) = dataset::load_any(&cfg.data)?;
    run_on_bundle(cfg, &bundle, layout)
}

/// Runs the protocol on an already loaded dataset.
pub fn run_on_bundle(cfg: &RunConfig, bundle: &DatasetBundle, layout: Layout) -> Result<RunReport> {
    cfg.validate()?;
    with_workers(cfg.workers, || run_inner(cfg, bundle, layout))?
        .map_err(|e| e.context(format!("dataset {}", bundle.name)))
}

fn run_inner(cfg: &RunConfig, bundle: &DatasetBundle, layout: Layout) -> Result<RunReport> {
    let (splits, split_source) = resolve_splits(cfg, bundle)?;
    let x = &bundle.features;

    let t = Instant::now();
    let graph = build_graph(&bundle.edge_list)?;
    let graph_seconds = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let (propagated, path) = propagate_layers(&graph, x, cfg.encode.layers, cfg.encode.mode)?;
    let propagate_seconds = t.elapsed().as_secs_f64();

    let sweep = match &cfg.alpha_sweep {
        Some(alphas) => Some(sweep_alpha(x, &propagated, &splits, bundle.num_classes, alphas)?),
        None => None,
    };
    let alpha_used = sweep.as_ref().map_or(cfg.encode.alpha, |s| s.selected_alpha);

    let t = Instant::now();
    let h = alpha_blend(x, &propagated, alpha_used)?;
    let encode_seconds = propagate_seconds + t.elapsed().as_secs_f64();

    let eval = evaluate(&h, &splits, bundle.num_classes)?;
    let vals: Vec<f64> = eval.outcomes.iter().map(|o| o.val_accuracy).collect();
    let tests: Vec<f64> = eval.outcomes.iter().map(|o| o.test_accuracy).collect();
    let fit_seconds = mean(&eval.fit_seconds);

    let mut notes = bundle.notes.clone();
    if matches!(cfg.splits, SplitSource::File { .. } | SplitSource::Auto) && split_source.starts_with("file:") && splits.len() != cfg.n_splits {
        notes.push(format!("split file holds {} splits; all were evaluated", splits.len()));
    }

    Ok(RunReport {
        dataset: bundle.name.clone(),
        layout,
        num_nodes: bundle.num_nodes(),
        num_edges: bundle.edge_list.edges.len(),
        num_features: x.num_cols(),
        num_classes: bundle.num_classes,
        path,
        config: ConfigEcho {
            data: cfg.data.clone(),
            mode: cfg.encode.mode,
            layers: cfg.encode.layers,
            alpha: cfg.encode.alpha,
            split_source,
            n_splits: cfg.n_splits,
            seed: cfg.seed,
            alpha_sweep: cfg.alpha_sweep.clone(),
            workers: cfg.workers,
        },
        alpha_used,
        splits: eval.outcomes,
        mean_val_accuracy: mean(&vals),
        mean_test_accuracy: mean(&tests),
        std_test_accuracy: sample_std(&tests),
        reference_test_accuracy: benchmarks::lookup(&bundle.name).map(|b| b.reference_accuracy),
        sweep,
        timing: Timing {
            graph_seconds,
            encode_seconds,
            fit_seconds,
            predict_seconds: mean(&eval.predict_seconds),
            training_seconds: graph_seconds + encode_seconds + fit_seconds,
        },
        notes,
    })
}

/// Aligned plain-text table: one row per split plus a mean row.
pub fn render_table(report: &RunReport, show_timing: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} ({} nodes, {} edges, {} features, {} classes, {:?} path, L={}, alpha={})",
        report.dataset,
        report.num_nodes,
        report.num_edges,
        report.num_features,
        report.num_classes,
        report.path,
        report.config.layers,
        report.alpha_used
    );
    let _ = writeln!(out, "splits: {}", report.config.split_source);
    let _ = writeln!(
        out,
        "{:>6}  {:>6}  {:>6}  {:>6}  {:>8}  {:>8}",
        "split", "train", "val", "test", "val_acc", "test_acc"
    );
    for s in &report.splits {
        let _ = writeln!(
            out,
            "{:>6}  {:>6}  {:>6}  {:>6}  {:>8.3}  {:>8.3}",
            s.index, s.train_size, s.val_size, s.test_size, s.val_accuracy, s.test_accuracy
        );
    }
    let _ = writeln!(
        out,
        "{:>6}  {:>6}  {:>6}  {:>6}  {:>8.3}  {:>8.3} +/- {:.3}",
        "mean", "", "", "", report.mean_val_accuracy, report.mean_test_accuracy, report.std_test_accuracy
    );
    if let Some(r) = report.reference_test_accuracy {
        let _ = writeln!(out, "{:>6}  {:>6}  {:>6}  {:>6}  {:>8}  {:>8.3}", "ref", "", "", "", "", r);
    }
    if let Some(sweep) = &report.sweep {
        let _ = writeln!(out, "\n{:>6}  {:>8}  {:>8}", "alpha", "val_acc", "test_acc");
        for p in &sweep.grid {
            let mark = if p.alpha == sweep.selected_alpha { " *" } else { "" };
            let _ = writeln!(
                out,
                "{:>6.2}  {:>8.3}  {:>8.3}{mark}",
                p.alpha, p.mean_val_accuracy, p.mean_test_accuracy
            );
        }
    }
    if show_timing {
        let t = &report.timing;
        let _ = writeln!(
            out,
            "\ntiming (s): graph {:.6}  encode {:.6}  fit {:.6}  predict {:.6}  training {:.6}",
            t.graph_seconds, t.encode_seconds, t.fit_seconds, t.predict_seconds, t.training_seconds
        );
    }
    for note in &report.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

/// Writes `contents` to `path` through a temporary sibling file and a rename.
pub fn write_atomic(path: &FsPath, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(FsPath::new("."));
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::Config(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", file_name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{write_dataset, FeatureEncoding};
    use crate::synthetic::{generate, SyntheticSpec};

    fn synthetic_dir(homophily: f64) -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        let bundle = generate(&SyntheticSpec { homophily, ..Default::default() }).unwrap();
        write_dataset(&bundle, dir.path(), FeatureEncoding::Tsv).unwrap();
        dir
    }

    #[test]
    fn runs_and_reports() {
        let dir = synthetic_dir(0.9);
        let mut cfg = RunConfig::new(dir.path());
        cfg.n_splits = 3;
        let report = run_experiment(&cfg).unwrap();
        assert_eq!(report.splits.len(), 3);
        assert_eq!(report.path, Path::Binary);
        assert!(report.mean_test_accuracy > 0.5, "{}", report.mean_test_accuracy);
        let tests: Vec<f64> = report.splits.iter().map(|s| s.test_accuracy).collect();
        assert!((report.mean_test_accuracy - mean(&tests)).abs() < 1e-15);
        assert!(report.timing.encode_seconds > 0.0);
        assert!(report.timing.training_seconds > 0.0);

        let table = render_table(&report, true);
        assert!(table.contains("mean"));
        assert!(table.contains("timing"));
        assert_eq!(RunReport::from_json(&report.to_json().unwrap()).unwrap(), report);
    }

    #[test]
    fn alpha_one_equals_feature_only_baseline() {
        let dir = synthetic_dir(0.5);
        let mut cfg = RunConfig::new(dir.path());
        cfg.n_splits = 2;
        cfg.encode.alpha = 1.0;
        let with_graph = run_experiment(&cfg).unwrap();

        // same features with all edges removed: propagation is the identity
        let (mut bundle, layout) = dataset::load_any(dir.path()).unwrap();
        bundle.edge_list.edges.clear();
        let no_graph = run_on_bundle(&cfg, &bundle, layout).unwrap();
        assert_eq!(with_graph.splits, no_graph.splits);
    }

    #[test]
    fn sweep_selection_rules() {
        let dir = synthetic_dir(0.9);
        let mut cfg = RunConfig::new(dir.path());
        cfg.n_splits = 2;
        cfg.alpha_sweep = Some(vec![0.5]);
        let r = run_experiment(&cfg).unwrap();
        assert_eq!(r.sweep.as_ref().unwrap().selected_alpha, 0.5);

        cfg.alpha_sweep = Some(vec![]);
        assert!(matches!(run_experiment(&cfg), Err(Error::Config(_))));

        let grid: Vec<f32> = (0..=10).map(|i| i as f32 / 10.0).collect();
        cfg.alpha_sweep = Some(grid);
        let r = run_experiment(&cfg).unwrap();
        let sweep = r.sweep.unwrap();
        let best_val = sweep.grid.iter().map(|p| p.mean_val_accuracy).fold(f64::MIN, f64::max);
        let first_best = sweep.grid.iter().find(|p| p.mean_val_accuracy == best_val).unwrap();
        assert_eq!(sweep.selected_alpha, first_best.alpha);
        assert_eq!(r.alpha_used, sweep.selected_alpha);
    }

    #[test]
    fn sweep_prefers_features_when_graph_is_noise() {
        // propagation has washed out every distinction between nodes
        let x = FeatureMatrix::from_rows(&[
            vec![1.0f32, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 1.0],
        ])
        .unwrap();
        let propagated = FeatureMatrix::from_rows(&vec![vec![1.0f32, 1.0]; 4])
        .unwrap();
        let split = LabeledSplit {
            labels: vec![0, 0, 1, 1],
            num_classes: 2,
            train: vec![0, 2],
            val: vec![1, 3],
            test: vec![],
        };
        let r = sweep_alpha(&x, &propagated, &[split], 2, &[0.0, 1.0]).unwrap();
        assert_eq!(r.selected_alpha, 1.0);
    }

    #[test]
    fn explicit_split_file_and_errors() {
        let dir = synthetic_dir(0.8);
        let path = dir.path().join("mine.json");
        std::fs::write(&path, r#"{"splits":[{"train":[0,1,2,3,4,5,6,7],"val":[8,9],"test":[10,11,12]}]}"#).unwrap();
        let mut cfg = RunConfig::new(dir.path());
        cfg.splits = SplitSource::File { path: Some(path) };
        let r = run_experiment(&cfg).unwrap();
        assert_eq!(r.splits.len(), 1);
        assert_eq!(r.splits[0].test_size, 3);

        cfg.splits = SplitSource::File { path: None };
        let err = run_experiment(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);

        let mut cfg = RunConfig::new(dir.path().join("nope"));
        cfg.n_splits = 1;
        assert_eq!(run_experiment(&cfg).unwrap_err().exit_code(), 3);

        let mut cfg = RunConfig::new(dir.path());
        cfg.encode.alpha = 2.0;
        assert_eq!(run_experiment(&cfg).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn atomic_write() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("report.json");
        write_atomic(&p, "{}").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "{}");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
