//! Independent reference implementations shared by the integration tests.
//!
//! Nothing here goes through the CSR structure or the bit-packed kernels:
//! graphs are dense boolean matrices and neighborhoods come from BFS.

#![allow(dead_code)]

use std::collections::VecDeque;

use hdconv::{EdgeList, FeatureMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random raw edge list with `n <= max_nodes`. Includes duplicates, both
/// orientations and explicit self-loops now and then.
pub fn random_edge_list(rng: &mut ChaCha8Rng, max_nodes: usize) -> EdgeList {
    let n = rng.random_range(1..=max_nodes);
    let p: f64 = rng.random_range(0.0..0.3);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u..n {
            if rng.random_bool(p) {
                if rng.random_bool(0.5) {
                    edges.push((u, v));
                } else {
                    edges.push((v, u));
                }
                if rng.random_bool(0.1) {
                    edges.push((v, u));
                }
            }
        }
    }
    EdgeList::new(n, edges)
}

pub fn random_real_features(rng: &mut ChaCha8Rng, n: usize, d: usize) -> FeatureMatrix {
    let data = (0..n * d).map(|_| rng.random_range(-1.0f32..1.0)).collect();
    FeatureMatrix::new(n, d, data).unwrap()
}

pub fn random_binary_features(rng: &mut ChaCha8Rng, n: usize, d: usize, density: f64) -> FeatureMatrix {
    let data = (0..n * d)
        .map(|_| if rng.random_bool(density) { 1.0 } else { 0.0 })
        .collect();
    FeatureMatrix::new(n, d, data).unwrap()
}

/// Symmetric adjacency with every diagonal entry set.
pub fn dense_adjacency(edges: &EdgeList) -> Vec<Vec<bool>> {
    let n = edges.num_nodes;
    let mut a = vec![vec![false; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(u, v) in &edges.edges {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// `D^-1/2 A D^-1/2 H` by explicit dense matrix products in f64.
pub fn dense_normalized_product(edges: &EdgeList, h: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let a = dense_adjacency(edges);
    let n = a.len();
    let deg: Vec<f64> = a
        .iter()
        .map(|row| row.iter().filter(|&&x| x).count() as f64)
        .collect();
    let norm: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if a[i][j] { 1.0 / (deg[i].sqrt() * deg[j].sqrt()) } else { 0.0 })
                .collect()
        })
        .collect();
    let d = h.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..d)
                .map(|k| (0..n).map(|j| norm[i][j] * h[j][k]).sum())
                .collect()
        })
        .collect()
}

pub fn to_f64_rows(x: &FeatureMatrix) -> Vec<Vec<f64>> {
    x.rows().map(|r| r.iter().map(|&v| f64::from(v)).collect()).collect()
}

/// Hop distance from `source` to every node, `None` when unreachable.
pub fn bfs_distances(a: &[Vec<bool>], source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; a.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for (v, &adj) in a[u].iter().enumerate() {
            if adj && dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Row `v` is the OR of the rows of all nodes within `hops` of `v`.
pub fn or_closure(edges: &EdgeList, x: &FeatureMatrix, hops: usize) -> Vec<Vec<bool>> {
    let a = dense_adjacency(edges);
    (0..a.len())
        .map(|v| {
            let dist = bfs_distances(&a, v);
            (0..x.num_cols())
                .map(|k| {
                    dist.iter()
                        .enumerate()
                        .any(|(u, d)| matches!(d, Some(d) if *d <= hops) && x.row(u)[k] == 1.0)
                })
                .collect()
        })
        .collect()
}
