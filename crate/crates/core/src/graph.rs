//! Symmetrized, self-looped adjacency in CSR form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Raw, possibly directed and duplicated edge pairs over `0..num_nodes`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeList {
    pub num_nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

impl EdgeList {
    pub fn new(num_nodes: usize, edges: Vec<(usize, usize)>) -> Self {
        EdgeList { num_nodes, edges }
    }

    pub fn validate(&self) -> Result<()> {
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if u >= self.num_nodes || v >= self.num_nodes {
                return Err(Error::Malformed(format!(
                    "edge {i} ({u}, {v}) has an endpoint outside 0..{}",
                    self.num_nodes
                )));
            }
        }
        Ok(())
    }
}

/// The augmented graph: every edge in both directions plus a self-loop at
/// every node, duplicates removed. Rows are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyStructure {
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
}

/// Builds the symmetric closure of `raw` with self-loops added.
pub fn build_graph(raw: &EdgeList) -> Result<AdjacencyStructure> {
    raw.validate()?;
    let n = raw.num_nodes;

    let mut pairs = Vec::with_capacity(2 * raw.edges.len() + n);
    pairs.extend((0..n).map(|v| (v, v)));
    for &(u, v) in &raw.edges {
        pairs.push((u, v));
        pairs.push((v, u));
    }
    pairs.sort_unstable();
    pairs.dedup();

    let mut row_offsets = vec![0usize; n + 1];
    for &(u, _) in &pairs {
        row_offsets[u + 1] += 1;
    }
    for v in 0..n {
        row_offsets[v + 1] += row_offsets[v];
    }
    let col_indices = pairs.into_iter().map(|(_, v)| v).collect();

    Ok(AdjacencyStructure {
        row_offsets,
        col_indices,
    })
}

impl AdjacencyStructure {
    pub fn num_nodes(&self) -> usize {
        self.row_offsets.len() - 1
    }

    /// Number of stored (directed) entries, self-loops included.
    pub fn num_entries(&self) -> usize {
        self.col_indices.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    /// Degree of `v` in the augmented graph (self-loop counted).
    pub fn degree(&self, v: usize) -> usize {
        self.row_offsets[v + 1] - self.row_offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.row_offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Closed neighborhood of `v` (contains `v`), sorted ascending.
    pub fn neighbors(&self, v: usize) -> Result<&[usize]> {
        if v >= self.num_nodes() {
            return Err(Error::Index {
                index: v,
                len: self.num_nodes(),
            });
        }
        Ok(self.row(v))
    }

    pub(crate) fn row(&self, v: usize) -> &[usize] {
        &self.col_indices[self.row_offsets[v]..self.row_offsets[v + 1]]
    }

    /// Every stored entry as a directed pair, in CSR order.
    pub fn to_edge_list(&self) -> EdgeList {
        let edges = (0..self.num_nodes())
            .flat_map(|u| self.row(u).iter().map(move |&v| (u, v)))
            .collect();
        EdgeList::new(self.num_nodes(), edges)
    }
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rows(g: &AdjacencyStructure) -> Vec<Vec<usize>> {
        (0..g.num_nodes()).map(|v| g.neighbors(v).unwrap().to_vec()).collect()
    }

    #[test]
    fn single_edge() {
        let g = build_graph(&EdgeList::new(2, vec![(0, 1)])).unwrap();
        assert_eq!(rows(&g), vec![vec![0, 1], vec![0, 1]]);
        assert_eq!(g.degrees(), vec![2, 2]);
    }

    #[test]
    fn empty_graph_has_only_self_loops() {
        let g = build_graph(&EdgeList::new(3, vec![])).unwrap();
        assert_eq!(rows(&g), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(g.degrees(), vec![1, 1, 1]);
    }

    #[test]
    fn duplicates_and_loops_collapse() {
        let raw = EdgeList::new(3, vec![(0, 1), (1, 0), (0, 1), (2, 2)]);
        let g = build_graph(&raw).unwrap();
        // set-based oracle
        let mut set = std::collections::BTreeSet::new();
        for v in 0..3 {
            set.insert((v, v));
        }
        for &(u, v) in &raw.edges {
            set.insert((u, v));
            set.insert((v, u));
        }
        let expected: Vec<(usize, usize)> = set.into_iter().collect();
        assert_eq!(g.to_edge_list().edges, expected);
        assert_eq!(g.degrees(), vec![2, 2, 1]);
    }

    #[test]
    fn rejects_out_of_range_endpoint() {
        let err = build_graph(&EdgeList::new(2, vec![(0, 2)])).unwrap_err();
        assert!(matches!(err, Error::Malformed(_)));
    }

    #[test]
    fn neighbors_examples() {
        let path = build_graph(&EdgeList::new(3, vec![(0, 1), (1, 2)])).unwrap();
        assert_eq!(path.neighbors(1).unwrap(), &[0, 1, 2]);
        let iso = build_graph(&EdgeList::new(4, vec![(0, 1)])).unwrap();
        assert_eq!(iso.neighbors(3).unwrap(), &[3]);
        assert!(matches!(iso.neighbors(4), Err(Error::Index { index: 4, len: 4 })));
    }

    #[test]
    fn neighbors_match_dense_matrix() {
        let n = 50;
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let mut dense = vec![vec![false; n]; n];
        let mut edges = Vec::new();
        for u in 0..n {
            dense[u][u] = true;
            for v in (u + 1)..n {
                if rng.random_bool(0.1) {
                    edges.push((u, v));
                    dense[u][v] = true;
                    dense[v][u] = true;
                }
            }
        }
        let g = build_graph(&EdgeList::new(n, edges)).unwrap();
        for _ in 0..10 {
            let v = rng.random_range(0..n);
            let expected: Vec<usize> = (0..n).filter(|&u| dense[v][u]).collect();
            assert_eq!(g.neighbors(v).unwrap(), expected.as_slice());
        }
    }

    fn edge_lists() -> impl Strategy<Value = EdgeList> {
        (1usize..30).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n), 0..80).prop_map(move |e| EdgeList::new(n, e))
        })
    }

    proptest! {
        #[test]
        fn structure_invariants(raw in edge_lists()) {
            let g = build_graph(&raw).unwrap();
            let n = g.num_nodes();
            let mut undirected = std::collections::BTreeSet::new();
            for &(u, v) in &raw.edges {
                if u != v {
                    undirected.insert((u.min(v), u.max(v)));
                }
            }
            prop_assert_eq!(g.degrees().iter().sum::<usize>(), g.num_entries());
            prop_assert_eq!(g.num_entries(), 2 * undirected.len() + n);
            for v in 0..n {
                let row = g.neighbors(v).unwrap();
                prop_assert!(row.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(row.binary_search(&v).is_ok());
                prop_assert!(g.degree(v) >= 1);
                for &u in row {
                    prop_assert!(g.neighbors(u).unwrap().binary_search(&v).is_ok());
                }
            }
            let again = build_graph(&g.to_edge_list()).unwrap();
            prop_assert_eq!(again, g);
        }
    }
}
