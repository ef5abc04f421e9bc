//! Weightless graph convolution and the residual blend with the input features.
//!
//! One propagation layer maps `H` to `D^-1/2 A D^-1/2 H` on the augmented
//! graph (real path) or ORs each closed neighborhood together (binary path).
//! After `L` layers the result is blended with the input:
//! `alpha * H0 + (1 - alpha) * HL`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::features::{BitFeatureMatrix, FeatureMatrix};
use crate::graph::AdjacencyStructure;
use crate::parallel::for_each_row;

/// Which aggregation path `encode` uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Binary path iff every input entry is exactly 0.0 or 1.0.
    #[default]
    Auto,
    Real,
    Binary,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Mode::Auto),
            "real" => Ok(Mode::Real),
            "binary" => Ok(Mode::Binary),
            other => Err(Error::Config(format!(
                "unknown mode {other:?} (expected auto, real or binary)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Auto => "auto",
            Mode::Real => "real",
            Mode::Binary => "binary",
        })
    }
}

/// The path actually taken once `Mode::Auto` is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Path {
    Real,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EncodeConfig {
    pub layers: usize,
    pub alpha: f32,
    pub mode: Mode,
}

impl Default for EncodeConfig {
    fn default() -> Self {
        EncodeConfig {
            layers: 1,
            alpha: 0.5,
            mode: Mode::Auto,
        }
    }
}

impl EncodeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.layers == 0 {
            return Err(Error::Config("layers must be at least 1".into()));
        }
        check_alpha(self.alpha)
    }
}

pub(crate) fn check_alpha(alpha: f32) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::Config(format!("alpha {alpha} is outside [0, 1]")))
    }
}

fn check_rows(g: &AdjacencyStructure, rows: usize) -> Result<()> {
    check_len(g.num_nodes(), rows)
}

/// One real-valued layer: `out[v] = sum_{u in N(v)} H[u] / sqrt(d_u d_v)`.
///
/// Each output row is accumulated in `f64` in CSR order and owned by a single
/// worker, so the result is identical for any worker count.
pub fn propagate_real(g: &AdjacencyStructure, h: &FeatureMatrix) -> Result<FeatureMatrix> {
    check_rows(g, h.num_rows())?;
    let d = h.num_cols();
    let inv_sqrt_deg: Vec<f64> = g
        .degrees()
        .into_iter()
        .map(|k| 1.0 / (k as f64).sqrt())
        .collect();

    let mut out = FeatureMatrix::zeros(g.num_nodes(), d);
    for_each_row(
        out.as_mut_slice(),
        d,
        || vec![0f64; d],
        |acc, v, row| {
            acc.fill(0.0);
            for &u in g.row(v) {
                let w = inv_sqrt_deg[u] * inv_sqrt_deg[v];
                for (a, &x) in acc.iter_mut().zip(h.row(u)) {
                    *a += w * f64::from(x);
                }
            }
            for (o, a) in row.iter_mut().zip(acc.iter()) {
                *o = *a as f32;
            }
        },
    );
    Ok(out)
}

/// One binary layer: `out[v] = OR_{u in N(v)} B[u]`. Since `v` is in its own
/// neighborhood, `out[v]` always contains `B[v]`.
pub fn propagate_binary(g: &AdjacencyStructure, b: &BitFeatureMatrix) -> Result<BitFeatureMatrix> {
    check_rows(g, b.num_rows())?;
    let mut out = BitFeatureMatrix::zeros(b.num_rows(), b.num_cols());
    let wpr = out.words_per_row();
    for_each_row(
        out.words_mut(),
        wpr,
        || (),
        |_, v, row| {
            for &u in g.row(v) {
                for (o, &w) in row.iter_mut().zip(b.row_words(u)) {
                    *o |= w;
                }
            }
        },
    );
    out.clear_padding();
    Ok(out)
}

/// `out = alpha * h0 + (1 - alpha) * hl`, element-wise.
pub fn alpha_blend(h0: &FeatureMatrix, hl: &FeatureMatrix, alpha: f32) -> Result<FeatureMatrix> {
    check_len(h0.num_rows(), hl.num_rows())?;
    check_len(h0.num_cols(), hl.num_cols())?;
    check_alpha(alpha)?;
    let beta = 1.0 - alpha;
    let data = h0
        .as_slice()
        .iter()
        .zip(hl.as_slice())
        .map(|(&a, &b)| alpha * a + beta * b)
        .collect();
    FeatureMatrix::new(h0.num_rows(), h0.num_cols(), data)
}

/// Resolves `mode` against the actual feature values.
pub fn resolve_path(x: &FeatureMatrix, mode: Mode) -> Result<Path> {
    match mode {
        Mode::Real => Ok(Path::Real),
        Mode::Binary => match x.first_non_binary() {
            None => Ok(Path::Binary),
            Some((row, value)) => Err(Error::Mode { row, value }),
        },
        Mode::Auto if x.is_binary() => Ok(Path::Binary),
        Mode::Auto => Ok(Path::Real),
    }
}

/// Runs `layers` propagation rounds over `x` without the residual blend.
///
/// The binary path packs `x`, ORs over closed neighborhoods, and unpacks.
pub fn propagate_layers(g: &AdjacencyStructure, x: &FeatureMatrix, layers: usize, mode: Mode) -> Result<(FeatureMatrix, Path)> {
    check_rows(g, x.num_rows())?;
    let path = resolve_path(x, mode)?;
    let propagated = match path {
        Path::Real => {
            let mut h = x.clone();
            for _ in 0..layers {
                h = propagate_real(g, &h)?;
            }
            h
        }
        Path::Binary => {
            let mut b = BitFeatureMatrix::pack(x)?;
            for _ in 0..layers {
                b = propagate_binary(g, &b)?;
            }
            b.unpack()
        }
    };
    Ok((propagated, path))
}

/// Runs `cfg.layers` propagation rounds over `x` and blends the result with `x`.
pub fn encode(g: &AdjacencyStructure, x: &FeatureMatrix, cfg: &EncodeConfig) -> Result<FeatureMatrix> {
    cfg.validate()?;
    let (propagated, _) = propagate_layers(g, x, cfg.layers, cfg.mode)?;
    alpha_blend(x, &propagated, cfg.alpha)
}
