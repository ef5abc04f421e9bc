//! Nearest-class-center inference.
//!
//! Each class center is the sum of the training hypervectors of that class.
//! A node is assigned to the center with the highest cosine similarity; ties
//! go to the lowest class id.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::features::FeatureMatrix;
use crate::hdc::{cosine_with_norms, norm, Hypervector, Similarity};
use crate::split::SplitIndices;

/// Class labels for every node together with one train/val/test partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSplit {
    pub labels: Vec<usize>,
    pub num_classes: usize,
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Train,
    Val,
    Test,
}

impl LabeledSplit {
    pub fn new(labels: Vec<usize>, num_classes: usize, indices: SplitIndices) -> Result<Self> {
        let split = LabeledSplit {
            labels,
            num_classes,
            train: indices.train,
            val: indices.val,
            test: indices.test,
        };
        split.validate()?;
        Ok(split)
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn indices(&self, which: Which) -> &[usize] {
        match which {
            Which::Train => &self.train,
            Which::Val => &self.val,
            Which::Test => &self.test,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(&label) = self.labels.iter().find(|&&l| l >= self.num_classes) {
            return Err(Error::Label {
                label,
                classes: self.num_classes,
            });
        }
        SplitIndices {
            train: self.train.clone(),
            val: self.val.clone(),
            test: self.test.clone(),
        }
        .validate(self.labels.len())
    }
}

/// Per-class prototype sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassCenters {
    pub centers: Vec<Hypervector>,
    pub counts: Vec<usize>,
}

impl ClassCenters {
    pub fn num_classes(&self) -> usize {
        self.centers.len()
    }

    /// Class with the most training samples, lowest id on ties.
    pub fn majority_class(&self) -> usize {
        let mut best = 0;
        for (c, &n) in self.counts.iter().enumerate() {
            if n > self.counts[best] {
                best = c;
            }
        }
        best
    }

    /// Centers divided by their counts; zero-count centers stay zero.
    pub fn means(&self) -> ClassCenters {
        let centers = self
            .centers
            .iter()
            .zip(&self.counts)
            .map(|(c, &n)| {
                let k = if n == 0 { 1.0 } else { n as f32 };
                Hypervector::new(c.as_slice().iter().map(|v| v / k).collect())
            })
            .collect();
        ClassCenters {
            centers,
            counts: self.counts.clone(),
        }
    }
}

/// Bundles the training rows of `h` into one summed center per class.
pub fn fit_centers(h: &FeatureMatrix, split: &LabeledSplit, num_classes: usize) -> Result<ClassCenters> {
    let d = h.num_cols();
    let mut sums = vec![vec![0f64; d]; num_classes];
    let mut counts = vec![0usize; num_classes];
    for &v in &split.train {
        if v >= h.num_rows() || v >= split.labels.len() {
            return Err(Error::Index {
                index: v,
                len: h.num_rows().min(split.labels.len()),
            });
        }
        let label = split.labels[v];
        if label >= num_classes {
            return Err(Error::Label {
                label,
                classes: num_classes,
            });
        }
        counts[label] += 1;
        for (s, &x) in sums[label].iter_mut().zip(h.row(v)) {
            *s += f64::from(x);
        }
    }
    let centers = sums
        .into_iter()
        .map(|s| Hypervector::new(s.into_iter().map(|x| x as f32).collect()))
        .collect();
    Ok(ClassCenters { centers, counts })
}

/// Predicts a class for every node in `idx`, in the same order.
pub fn predict(h: &FeatureMatrix, centers: &ClassCenters, idx: &[usize]) -> Result<Vec<usize>> {
    for c in &centers.centers {
        check_len(h.num_cols(), c.dim())?;
    }
    if let Some(&v) = idx.iter().find(|&&v| v >= h.num_rows()) {
        return Err(Error::Index {
            index: v,
            len: h.num_rows(),
        });
    }
    if centers.num_classes() == 0 {
        return Err(Error::Config("no classes to predict".into()));
    }
    let center_norms: Vec<f64> = centers.centers.iter().map(|c| norm(c.as_slice())).collect();
    let fallback = centers.majority_class();

    let classify = |v: usize| {
        let row = h.row(v);
        let row_norm = norm(row);
        if row_norm == 0.0 {
            return fallback;
        }
        let mut best = 0;
        let mut best_sim = Similarity::Undefined;
        for (c, center) in centers.centers.iter().enumerate() {
            let sim = cosine_with_norms(row, row_norm, center.as_slice(), center_norms[c]);
            if sim > best_sim {
                best = c;
                best_sim = sim;
            }
        }
        best
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        Ok(idx.par_iter().map(|&v| classify(v)).collect())
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok(idx.iter().map(|&v| classify(v)).collect())
    }
}

/// Fraction of `split.indices(which)` whose prediction matches the label.
///
/// `pred` is aligned with that index set. An empty set scores 0.0.
pub fn accuracy(pred: &[usize], split: &LabeledSplit, which: Which) -> Result<f64> {
    let idx = split.indices(which);
    check_len(idx.len(), pred.len())?;
    if idx.is_empty() {
        return Ok(0.0);
    }
    let correct = idx
        .iter()
        .zip(pred)
        .filter(|(&v, &p)| split.labels[v] == p)
        .count();
    Ok(correct as f64 / idx.len() as f64)
}
