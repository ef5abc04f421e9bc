//! Train/validation/test partitions: generation, validation and the
//! `splits.json` file format.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classifier::LabeledSplit;
use crate::error::{Error, Result};

/// One partition of node ids. Sets are disjoint and need not cover every node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

impl SplitIndices {
    pub fn validate(&self, num_nodes: usize) -> Result<()> {
        let mut seen = HashSet::with_capacity(self.train.len() + self.val.len() + self.test.len());
        for (name, set) in [("train", &self.train), ("val", &self.val), ("test", &self.test)] {
            for &v in set {
                if v >= num_nodes {
                    return Err(Error::CorruptSplit(format!(
                        "{name} index {v} out of range for {num_nodes} nodes"
                    )));
                }
                if !seen.insert(v) {
                    return Err(Error::CorruptSplit(format!(
                        "node {v} appears more than once across train/val/test"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SplitsFile {
    splits: Vec<SplitIndices>,
}

/// Reads and validates a `{"splits": [{"train": [..], "val": [..], "test": [..]}, ..]}` file.
pub fn load_splits(file: &Path, num_nodes: usize) -> Result<Vec<SplitIndices>> {
    let text = fs::read_to_string(file).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::NotFound(file.to_path_buf()),
        _ => Error::Io(e),
    })?;
    let parsed: SplitsFile = serde_json::from_str(&text)
        .map_err(|e| Error::CorruptSplit(format!("{}: {e}", file.display())))?;
    if parsed.splits.is_empty() {
        return Err(Error::CorruptSplit(format!("{}: no splits", file.display())));
    }
    for (i, s) in parsed.splits.iter().enumerate() {
        s.validate(num_nodes)
            .map_err(|e| e.context(format!("{} split {i}", file.display())))?;
    }
    Ok(parsed.splits)
}

pub fn write_splits(file: &Path, splits: &[SplitIndices]) -> Result<()> {
    let body = serde_json::to_string(&SplitsFile {
        splits: splits.to_vec(),
    })?;
    fs::write(file, body)?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SplitKind {
    /// Splits come from a file; nothing is generated.
    Fixed,
    /// `per_class` training nodes per class, then `val` and `test` nodes
    /// drawn from the remainder.
    PerClassCount { per_class: usize, val: usize, test: usize },
    /// Stratified per-class fractions.
    Ratio { train: f64, val: f64, test: f64 },
}

impl SplitKind {
    /// 20 labeled nodes per class, 500 validation, 1000 test.
    pub const PLANETOID: SplitKind = SplitKind::PerClassCount {
        per_class: 20,
        val: 500,
        test: 1000,
    };

    /// Stratified 60/20/20.
    pub const RATIO_622: SplitKind = SplitKind::Ratio {
        train: 0.6,
        val: 0.2,
        test: 0.2,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub kind: SplitKind,
    pub n_splits: usize,
    pub seed: u64,
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_splits == 0 {
            return Err(Error::Config("n_splits must be positive".into()));
        }
        match self.kind {
            SplitKind::Fixed => Ok(()),
            SplitKind::PerClassCount { per_class: 0, .. } => {
                Err(Error::Config("per-class training count must be positive".into()))
            }
            SplitKind::PerClassCount { .. } => Ok(()),
            SplitKind::Ratio { train, val, test } => {
                if [train, val, test].iter().any(|r| !(0.0..=1.0).contains(r)) {
                    return Err(Error::Config("split ratios must lie in [0, 1]".into()));
                }
                if ((train + val + test) - 1.0).abs() > 1e-9 {
                    return Err(Error::Config(format!(
                        "split ratios {train}:{val}:{test} do not sum to 1"
                    )));
                }
                Ok(())
            }
        }
    }
}

fn by_class(labels: &[usize], num_classes: usize) -> Result<Vec<Vec<usize>>> {
    let mut groups = vec![Vec::new(); num_classes];
    for (v, &l) in labels.iter().enumerate() {
        groups
            .get_mut(l)
            .ok_or(Error::Label {
                label: l,
                classes: num_classes,
            })?
            .push(v);
    }
    Ok(groups)
}

// floor with slack for products like 0.6 * 5 landing just below an integer
fn floor_share(ratio: f64, k: usize) -> usize {
    (ratio * k as f64 + 1e-9).floor() as usize
}

/// Draws `spec.n_splits` partitions; split `i` uses seed `spec.seed + i`.
pub fn generate_splits(labels: &[usize], num_classes: usize, spec: &SplitSpec) -> Result<Vec<LabeledSplit>> {
    spec.validate()?;
    let groups = by_class(labels, num_classes)?;

    (0..spec.n_splits)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(i as u64));
            let indices = match spec.kind {
                SplitKind::Fixed => {
                    return Err(Error::Config(
                        "fixed splits are loaded from a file, not generated".into(),
                    ))
                }
                SplitKind::Ratio { train, val, .. } => ratio_split(&groups, train, val, &mut rng),
                SplitKind::PerClassCount { per_class, val, test } => {
                    per_class_split(&groups, per_class, val, test, &mut rng)?
                }
            };
            LabeledSplit::new(labels.to_vec(), num_classes, indices)
        })
        .collect()
}

fn ratio_split(groups: &[Vec<usize>], train: f64, val: f64, rng: &mut ChaCha8Rng) -> SplitIndices {
    let mut out = SplitIndices {
        train: Vec::new(),
        val: Vec::new(),
        test: Vec::new(),
    };
    for members in groups {
        let mut members = members.clone();
        members.shuffle(rng);
        let k = members.len();
        let n_train = floor_share(train, k);
        let n_val = floor_share(val, k).min(k - n_train);
        out.train.extend_from_slice(&members[..n_train]);
        out.val.extend_from_slice(&members[n_train..n_train + n_val]);
        out.test.extend_from_slice(&members[n_train + n_val..]);
    }
    out.train.sort_unstable();
    out.val.sort_unstable();
    out.test.sort_unstable();
    out
}

fn per_class_split(
    groups: &[Vec<usize>],
    per_class: usize,
    val: usize,
    test: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SplitIndices> {
    let mut train = Vec::new();
    let mut rest = Vec::new();
    for (c, members) in groups.iter().enumerate() {
        if members.len() < per_class {
            return Err(Error::InfeasibleSplit(format!(
                "class {c} has {} nodes, fewer than the {per_class} requested for training",
                members.len()
            )));
        }
        let mut members = members.clone();
        members.shuffle(rng);
        train.extend_from_slice(&members[..per_class]);
        rest.extend_from_slice(&members[per_class..]);
    }
    if rest.len() < val + test {
        return Err(Error::InfeasibleSplit(format!(
            "{} nodes remain after training selection, need {val} validation + {test} test",
            rest.len()
        )));
    }
    rest.sort_unstable();
    rest.shuffle(rng);
    let mut val_set = rest[..val].to_vec();
    let mut test_set = rest[val..val + test].to_vec();
    train.sort_unstable();
    val_set.sort_unstable();
    test_set.sort_unstable();
    Ok(SplitIndices {
        train,
        val: val_set,
        test: test_set,
    })
}
