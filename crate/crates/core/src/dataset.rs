//! Dataset loading.
//!
//! Two on-disk layouts are understood:
//!
//! * the neutral directory (`meta.json`, `edges.tsv`, `labels.tsv`, and
//!   `features.bin` or `features.tsv`, plus an optional `splits.json`);
//! * the raw two-file text layout used by the WebKB / Wikipedia heterophilic
//!   benchmarks (`out1_graph_edges.txt`, `out1_node_feature_label.txt`).
//!
//! `features.bin` is a 16-byte header (`"HGXF"`, `u32` rows, `u32` cols,
//! `u32` reserved) followed by row-major little-endian `f32` values.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::benchmarks;
use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::graph::EdgeList;

pub const META_FILE: &str = "meta.json";
pub const EDGES_FILE: &str = "edges.tsv";
pub const LABELS_FILE: &str = "labels.tsv";
pub const FEATURES_TSV: &str = "features.tsv";
pub const FEATURES_BIN: &str = "features.bin";
pub const SPLITS_FILE: &str = "splits.json";
pub const RAW_EDGES_FILE: &str = "out1_graph_edges.txt";
pub const RAW_NODES_FILE: &str = "out1_node_feature_label.txt";

const BIN_MAGIC: &[u8; 4] = b"HGXF";
const BIN_HEADER_LEN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Binary,
    Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub name: String,
    pub num_nodes: usize,
    pub num_features: usize,
    pub num_classes: usize,
    pub feature_kind: FeatureKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetBundle {
    pub name: String,
    pub edge_list: EdgeList,
    pub features: FeatureMatrix,
    pub labels: Vec<usize>,
    pub num_classes: usize,
    pub feature_kind: FeatureKind,
    /// Loader observations worth surfacing in a run report (id remapping,
    /// shape differences from the published benchmark statistics).
    pub notes: Vec<String>,
}

impl DatasetBundle {
    pub fn num_nodes(&self) -> usize {
        self.edge_list.num_nodes
    }

    pub fn meta(&self) -> Meta {
        Meta {
            name: self.name.clone(),
            num_nodes: self.num_nodes(),
            num_features: self.features.num_cols(),
            num_classes: self.num_classes,
            feature_kind: self.feature_kind,
        }
    }

    /// Checks internal consistency.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_nodes();
        if self.features.num_rows() != n {
            return Err(Error::CorruptDataset(format!(
                "{} feature rows for {n} nodes",
                self.features.num_rows()
            )));
        }
        if self.labels.len() != n {
            return Err(Error::CorruptDataset(format!("{} labels for {n} nodes", self.labels.len())));
        }
        if self.num_classes < 2 {
            return Err(Error::CorruptDataset(format!(
                "need at least 2 classes, found {}",
                self.num_classes
            )));
        }
        if let Some((v, &l)) = self.labels.iter().enumerate().find(|(_, &l)| l >= self.num_classes) {
            return Err(Error::CorruptDataset(format!(
                "node {v} has label {l} but only {} classes are declared",
                self.num_classes
            )));
        }
        self.edge_list
            .validate()
            .map_err(|e| Error::CorruptDataset(e.to_string()))?;
        if self.feature_kind == FeatureKind::Binary {
            if let Some((row, value)) = self.features.first_non_binary() {
                return Err(Error::CorruptDataset(format!(
                    "declared binary but row {row} holds {value}"
                )));
            }
        }
        Ok(())
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::NotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn parse_usize(path: &Path, line: usize, tok: &str) -> Result<usize> {
    tok.trim()
        .parse()
        .map_err(|_| parse_err(path, line, format!("expected a non-negative integer, got {tok:?}")))
}

fn parse_f32(path: &Path, line: usize, tok: &str) -> Result<f32> {
    let v: f32 = tok
        .trim()
        .parse()
        .map_err(|_| parse_err(path, line, format!("expected a number, got {tok:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(path, line, format!("non-finite value {tok:?}")));
    }
    Ok(v)
}

/// Non-blank lines with 1-based line numbers, optionally skipping a header.
fn data_lines(text: &str, skip_header: bool) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .skip(usize::from(skip_header))
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
}

fn parse_edge_pairs(path: &Path, text: &str, skip_header: bool) -> Result<Vec<(usize, usize)>> {
    data_lines(text, skip_header)
        .map(|(ln, line)| {
            let mut toks = line.split_whitespace();
            match (toks.next(), toks.next(), toks.next()) {
                (Some(u), Some(v), None) => Ok((parse_usize(path, ln, u)?, parse_usize(path, ln, v)?)),
                _ => Err(parse_err(path, ln, "expected two node ids")),
            }
        })
        .collect()
}

/// Loads a neutral dataset directory.
pub fn load_dataset(dir: &Path) -> Result<DatasetBundle> {
    let meta_path = dir.join(META_FILE);
    let meta: Meta = serde_json::from_str(&read_text(&meta_path)?)
        .map_err(|e| Error::CorruptDataset(format!("{}: {e}", meta_path.display())))?;

    let edges_path = dir.join(EDGES_FILE);
    let edges = parse_edge_pairs(&edges_path, &read_text(&edges_path)?, false)?;

    let labels_path = dir.join(LABELS_FILE);
    let labels = data_lines(&read_text(&labels_path)?, false)
        .map(|(ln, l)| parse_usize(&labels_path, ln, l))
        .collect::<Result<Vec<_>>>()?;

    let bin_path = dir.join(FEATURES_BIN);
    let features = if bin_path.exists() {
        read_features_bin(&bin_path)?
    } else {
        read_features_tsv(&dir.join(FEATURES_TSV), meta.num_features)?
    };

    if features.num_rows() != meta.num_nodes || features.num_cols() != meta.num_features {
        return Err(Error::CorruptDataset(format!(
            "features are {}x{}, meta.json declares {}x{}",
            features.num_rows(),
            features.num_cols(),
            meta.num_nodes,
            meta.num_features
        )));
    }

    let mut bundle = DatasetBundle {
        name: meta.name,
        edge_list: EdgeList::new(meta.num_nodes, edges),
        features,
        labels,
        num_classes: meta.num_classes,
        feature_kind: meta.feature_kind,
        notes: Vec::new(),
    };
    bundle.validate()?;
    bundle.notes.extend(benchmarks::shape_notes(&bundle));
    Ok(bundle)
}

fn read_features_tsv(path: &Path, cols: usize) -> Result<FeatureMatrix> {
    let text = read_text(path)?;
    let mut data = Vec::new();
    let mut rows = 0;
    for (ln, line) in data_lines(&text, false) {
        let before = data.len();
        for tok in line.split_whitespace() {
            data.push(parse_f32(path, ln, tok)?);
        }
        if data.len() - before != cols {
            return Err(parse_err(
                path,
                ln,
                format!("expected {cols} values, found {}", data.len() - before),
            ));
        }
        rows += 1;
    }
    FeatureMatrix::new(rows, cols, data).map_err(|e| Error::CorruptDataset(e.to_string()))
}

fn read_features_bin(path: &Path) -> Result<FeatureMatrix> {
    let bytes = fs::read(path)?;
    if bytes.len() < BIN_HEADER_LEN || &bytes[..4] != BIN_MAGIC {
        return Err(Error::CorruptDataset(format!("{}: missing HGXF header", path.display())));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4-byte slice")) as usize;
    let (rows, cols) = (word(4), word(8));
    let body = &bytes[BIN_HEADER_LEN..];
    if body.len() != rows * cols * 4 {
        return Err(Error::CorruptDataset(format!(
            "{}: header declares {rows}x{cols} but body holds {} bytes",
            path.display(),
            body.len()
        )));
    }
    let data = body
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().expect("4-byte chunk")))
        .collect();
    FeatureMatrix::new(rows, cols, data).map_err(|e| Error::CorruptDataset(format!("{}: {e}", path.display())))
}

/// How `write_dataset` stores features.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureEncoding {
    Tsv,
    Bin,
}

/// Writes `bundle` as a neutral dataset directory, creating `dir` if needed.
pub fn write_dataset(bundle: &DatasetBundle, dir: &Path, encoding: FeatureEncoding) -> Result<()> {
    bundle.validate()?;
    fs::create_dir_all(dir)?;
    fs::write(dir.join(META_FILE), serde_json::to_string_pretty(&bundle.meta())?)?;

    let mut edges = BufWriter::new(fs::File::create(dir.join(EDGES_FILE))?);
    for (u, v) in &bundle.edge_list.edges {
        writeln!(edges, "{u}\t{v}")?;
    }
    edges.flush()?;

    let mut labels = BufWriter::new(fs::File::create(dir.join(LABELS_FILE))?);
    for l in &bundle.labels {
        writeln!(labels, "{l}")?;
    }
    labels.flush()?;

    match encoding {
        FeatureEncoding::Tsv => {
            let mut out = BufWriter::new(fs::File::create(dir.join(FEATURES_TSV))?);
            for row in bundle.features.rows() {
                let mut first = true;
                for v in row {
                    if !first {
                        out.write_all(b" ")?;
                    }
                    write!(out, "{v}")?;
                    first = false;
                }
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
        FeatureEncoding::Bin => {
            let f = &bundle.features;
            let mut out = BufWriter::new(fs::File::create(dir.join(FEATURES_BIN))?);
            out.write_all(BIN_MAGIC)?;
            for n in [f.num_rows(), f.num_cols(), 0] {
                let n = u32::try_from(n)
                    .map_err(|_| Error::Config(format!("dimension {n} does not fit features.bin")))?;
                out.write_all(&n.to_le_bytes())?;
            }
            for v in f.as_slice() {
                out.write_all(&v.to_le_bytes())?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

/// Loads the raw heterophilic-benchmark text layout.
///
/// Node lines are `id<TAB>comma-separated features<TAB>label`; edge lines are
/// `u<TAB>v`. Both files start with a header line.
pub fn load_geomgcn_raw(dir: &Path) -> Result<DatasetBundle> {
    let nodes_path = dir.join(RAW_NODES_FILE);
    let nodes_text = read_text(&nodes_path)?;
    let mut rows: BTreeMap<usize, (Vec<f32>, usize)> = BTreeMap::new();
    let mut width = None;
    for (ln, line) in data_lines(&nodes_text, true) {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(parse_err(&nodes_path, ln, format!("expected 3 tab-separated fields, found {}", fields.len())));
        }
        let id = parse_usize(&nodes_path, ln, fields[0])?;
        let feats = fields[1]
            .split(',')
            .map(|t| parse_f32(&nodes_path, ln, t))
            .collect::<Result<Vec<_>>>()?;
        let label = parse_usize(&nodes_path, ln, fields[2])?;
        match width {
            None => width = Some(feats.len()),
            Some(w) if w != feats.len() => {
                return Err(parse_err(&nodes_path, ln, format!("expected {w} features, found {}", feats.len())));
            }
            _ => {}
        }
        if rows.insert(id, (feats, label)).is_some() {
            return Err(parse_err(&nodes_path, ln, format!("duplicate node id {id}")));
        }
    }
    if rows.is_empty() {
        return Err(Error::CorruptDataset(format!("{}: no nodes", nodes_path.display())));
    }

    let n = rows.len();
    let mut notes = Vec::new();
    let contiguous = rows.keys().next_back() == Some(&(n - 1));
    let remap: BTreeMap<usize, usize> = rows.keys().enumerate().map(|(i, &id)| (id, i)).collect();
    if !contiguous {
        notes.push(format!("node ids are not 0..{n}; remapped {n} ids to their sorted positions"));
    }

    let edges_path = dir.join(RAW_EDGES_FILE);
    let raw_edges = parse_edge_pairs(&edges_path, &read_text(&edges_path)?, true)?;
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (i, (u, v)) in raw_edges.into_iter().enumerate() {
        match (remap.get(&u), remap.get(&v)) {
            (Some(&a), Some(&b)) => edges.push((a, b)),
            _ => {
                return Err(Error::CorruptDataset(format!(
                    "{}: edge {} ({u}, {v}) references an unknown node",
                    edges_path.display(),
                    i + 1
                )))
            }
        }
    }

    let mut data = Vec::with_capacity(n * width.unwrap_or(0));
    let mut labels = Vec::with_capacity(n);
    for (feats, label) in rows.into_values() {
        data.extend(feats);
        labels.push(label);
    }
    let features = FeatureMatrix::new(n, width.unwrap_or(0), data)?;
    let num_classes = labels.iter().max().map_or(0, |m| m + 1);
    let feature_kind = if features.is_binary() { FeatureKind::Binary } else { FeatureKind::Real };
    let name = dir
        .file_name()
        .map(|s| s.to_string_lossy().to_lowercase())
        .unwrap_or_else(|| "raw".to_string());

    let mut bundle = DatasetBundle {
        name,
        edge_list: EdgeList::new(n, edges),
        features,
        labels,
        num_classes,
        feature_kind,
        notes,
    };
    bundle.validate()?;
    bundle.notes.extend(benchmarks::shape_notes(&bundle));
    Ok(bundle)
}

/// Which layout a directory holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    Neutral,
    GeomGcnRaw,
}

pub fn detect_layout(dir: &Path) -> Result<Layout> {
    if dir.join(META_FILE).exists() {
        Ok(Layout::Neutral)
    } else if dir.join(RAW_NODES_FILE).exists() {
        Ok(Layout::GeomGcnRaw)
    } else if !dir.exists() {
        Err(Error::NotFound(dir.to_path_buf()))
    } else {
        Err(Error::NotFound(dir.join(META_FILE)))
    }
}

/// Loads whichever layout `dir` holds.
pub fn load_any(dir: &Path) -> Result<(DatasetBundle, Layout)> {
    let layout = detect_layout(dir)?;
    let bundle = match layout {
        Layout::Neutral => load_dataset(dir)?,
        Layout::GeomGcnRaw => load_geomgcn_raw(dir)?,
    };
    Ok((bundle, layout))
}

pub fn fixed_splits_path(dir: &Path) -> PathBuf {
    dir.join(SPLITS_FILE)
}
