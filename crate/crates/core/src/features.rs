//! Dense and bit-packed node feature matrices.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::hdc::{mask_tail, words_for, BitHypervector, Hypervector, WORD_BITS};

/// Row-major `rows x cols` matrix of finite `f32` values, one hypervector per node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f32>,
}

impl FeatureMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f32>) -> Result<Self> {
        check_len(rows * cols, data.len())?;
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Malformed(format!(
                "non-finite feature at row {}, column {}",
                i / cols.max(1),
                i % cols.max(1)
            )));
        }
        Ok(FeatureMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        FeatureMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows<R: AsRef<[f32]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_len(cols, r.as_ref().len())?;
            data.extend_from_slice(r.as_ref());
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> Hypervector {
        Hypervector::new(self.row(i).to_vec())
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f32] {
        &mut self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f32]> {
        // chunks_exact panics on a zero chunk size
        (0..self.rows).map(move |i| self.row(i))
    }

    /// First entry that is neither 0.0 nor 1.0, as `(row, value)`.
    pub fn first_non_binary(&self) -> Option<(usize, f32)> {
        self.data
            .iter()
            .position(|&v| v != 0.0 && v != 1.0)
            .map(|i| (i / self.cols.max(1), self.data[i]))
    }

    pub fn is_binary(&self) -> bool {
        self.first_non_binary().is_none()
    }

    /// Multiplies every entry by `c`.
    pub fn scaled(&self, c: f32) -> Result<Self> {
        Self::new(self.rows, self.cols, self.data.iter().map(|v| v * c).collect())
    }
}

/// Bit-packed binary feature matrix; each row occupies `words_per_row` words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitFeatureMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BitFeatureMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = words_for(cols);
        BitFeatureMatrix {
            rows,
            cols,
            words_per_row,
            words: vec![0; rows * words_per_row],
        }
    }

    /// Packs a {0,1}-valued matrix; fails with a mode error otherwise.
    pub fn pack(x: &FeatureMatrix) -> Result<Self> {
        let mut out = Self::zeros(x.num_rows(), x.num_cols());
        let wpr = out.words_per_row;
        for (r, row) in x.rows().enumerate() {
            let words = &mut out.words[r * wpr..(r + 1) * wpr];
            for (i, &v) in row.iter().enumerate() {
                if v == 1.0 {
                    words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
                } else if v != 0.0 {
                    return Err(Error::Mode { row: r, value: v });
                }
            }
        }
        Ok(out)
    }

    pub fn from_rows(rows: &[BitHypervector]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut out = Self::zeros(rows.len(), cols);
        let wpr = out.words_per_row;
        for (r, v) in rows.iter().enumerate() {
            check_len(cols, v.len())?;
            out.words[r * wpr..(r + 1) * wpr].copy_from_slice(v.words());
        }
        Ok(out)
    }

    pub fn unpack(&self) -> FeatureMatrix {
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for r in 0..self.rows {
            let words = self.row_words(r);
            data.extend((0..self.cols).map(|i| {
                if words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1 {
                    1.0
                } else {
                    0.0
                }
            }));
        }
        FeatureMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    pub fn row_vector(&self, r: usize) -> BitHypervector {
        BitHypervector::from_words(self.row_words(r).to_vec(), self.cols)
            .expect("row width is consistent by construction")
    }

    pub(crate) fn clear_padding(&mut self) {
        if self.words_per_row == 0 {
            return;
        }
        for row in self.words.chunks_exact_mut(self.words_per_row) {
            mask_tail(row, self.cols);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_and_non_finite() {
        assert!(FeatureMatrix::from_rows(&[vec![1.0f32, 2.0], vec![3.0]]).is_err());
        assert!(FeatureMatrix::new(1, 2, vec![1.0, f32::NAN]).is_err());
        assert!(FeatureMatrix::new(1, 2, vec![1.0]).is_err());
    }

    #[test]
    fn binary_detection() {
        let x = FeatureMatrix::from_rows(&[vec![0.0f32, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(x.is_binary());
        let y = FeatureMatrix::from_rows(&[vec![0.0f32, 1.0], vec![0.5, 1.0]]).unwrap();
        assert_eq!(y.first_non_binary(), Some((1, 0.5)));
    }

    #[test]
    fn pack_round_trip_and_errors() {
        let x = FeatureMatrix::from_rows(&[
            (0..130).map(|i| (i % 3 == 0) as u8 as f32).collect::<Vec<_>>(),
            vec![1.0; 130],
        ])
        .unwrap();
        let b = BitFeatureMatrix::pack(&x).unwrap();
        assert_eq!(b.words_per_row(), 3);
        assert_eq!(b.unpack(), x);
        assert_eq!(b.row_vector(1).count_ones(), 130);

        let bad = FeatureMatrix::from_rows(&[vec![0.0f32], vec![2.0]]).unwrap();
        assert!(matches!(
            BitFeatureMatrix::pack(&bad),
            Err(Error::Mode { row: 1, .. })
        ));
    }
}
