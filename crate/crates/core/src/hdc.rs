//! Hypervectors and the elementary HDC algebra.
//!
//! Two representations are used by the pipeline: real-valued [`Hypervector`]s
//! (one per node, at the native feature width) and bit-packed
//! [`BitHypervector`]s for the logical-OR aggregation path.
//!
//! * binding: element-wise product
//! * bundling: sign of the element-wise sum (bipolar) or logical OR (binary)
//! * similarity: cosine, with a distinguished value for zero-norm inputs

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};

pub(crate) const WORD_BITS: usize = u64::BITS as usize;

/// A real-valued hypervector of fixed width `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hypervector(Vec<f32>);

impl Hypervector {
    pub fn new(values: Vec<f32>) -> Self {
        Hypervector(values)
    }

    pub fn zeros(dim: usize) -> Self {
        Hypervector(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f32> {
        self.0
    }
}

impl AsRef<[f32]> for Hypervector {
    fn as_ref(&self) -> &[f32] {
        &self.0
    }
}

impl From<Vec<f32>> for Hypervector {
    fn from(values: Vec<f32>) -> Self {
        Hypervector(values)
    }
}

/// Binds two hypervectors by element-wise multiplication.
pub fn bind(x: impl AsRef<[f32]>, y: impl AsRef<[f32]>) -> Result<Hypervector> {
    let (x, y) = (x.as_ref(), y.as_ref());
    check_len(x.len(), y.len())?;
    Ok(Hypervector(x.iter().zip(y).map(|(a, b)| a * b).collect()))
}

/// Bundles bipolar hypervectors: `sign(sum_j v_j)` per coordinate, with `sign(0) = 0`.
pub fn bundle_bipolar<V: AsRef<[f32]>>(vs: &[V]) -> Result<Hypervector> {
    let first = vs.first().ok_or(Error::EmptyInput)?.as_ref();
    let mut sums = vec![0f64; first.len()];
    for v in vs {
        let v = v.as_ref();
        check_len(first.len(), v.len())?;
        for (s, &x) in sums.iter_mut().zip(v) {
            *s += f64::from(x);
        }
    }
    let signs = sums
        .into_iter()
        .map(|s| match s.partial_cmp(&0.0) {
            Some(Ordering::Greater) => 1.0,
            Some(Ordering::Less) => -1.0,
            _ => 0.0,
        })
        .collect();
    Ok(Hypervector(signs))
}

/// Result of a similarity comparison.
///
/// `Undefined` (either operand has zero norm) orders strictly below every
/// defined value, so it can never win an argmax against a defined similarity.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub enum Similarity {
    Undefined,
    Defined(f64),
}

impl Similarity {
    pub fn value(self) -> Option<f64> {
        match self {
            Similarity::Undefined => None,
            Similarity::Defined(v) => Some(v),
        }
    }
}

pub(crate) fn dot(x: &[f32], y: &[f32]) -> f64 {
    x.iter().zip(y).map(|(&a, &b)| f64::from(a) * f64::from(b)).sum()
}

pub(crate) fn norm(x: &[f32]) -> f64 {
    dot(x, x).sqrt()
}

/// Cosine similarity with 64-bit accumulation.
pub fn cosine_similarity(x: impl AsRef<[f32]>, y: impl AsRef<[f32]>) -> Result<Similarity> {
    let (x, y) = (x.as_ref(), y.as_ref());
    check_len(x.len(), y.len())?;
    Ok(cosine_with_norms(x, norm(x), y, norm(y)))
}

/// Cosine similarity when both norms are already known.
pub(crate) fn cosine_with_norms(x: &[f32], nx: f64, y: &[f32], ny: f64) -> Similarity {
    if nx == 0.0 || ny == 0.0 {
        return Similarity::Undefined;
    }
    Similarity::Defined((dot(x, y) / (nx * ny)).clamp(-1.0, 1.0))
}

/// A binary hypervector packed into 64-bit words, least significant bit first.
///
/// Bits beyond the logical length are always zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitHypervector {
    words: Vec<u64>,
    len: usize,
}

pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

impl BitHypervector {
    pub fn zeros(len: usize) -> Self {
        BitHypervector {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Packs a {0,1}-valued real vector. Any other value is rejected.
    pub fn pack(values: &[f32]) -> Result<Self> {
        let mut v = Self::zeros(values.len());
        for (i, &x) in values.iter().enumerate() {
            if x == 1.0 {
                v.set(i, true);
            } else if x != 0.0 {
                return Err(Error::Mode { row: 0, value: x });
            }
        }
        Ok(v)
    }

    pub fn unpack(&self) -> Vec<f32> {
        (0..self.len)
            .map(|i| if self.get(i) { 1.0 } else { 0.0 })
            .collect()
    }

    /// Rebuilds a vector from raw words, clearing any padding bits.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Result<Self> {
        check_len(words_for(len), words.len())?;
        mask_tail(&mut words, len);
        Ok(BitHypervector { words, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if bit {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True when every set bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BitHypervector) -> bool {
        self.len == other.len
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn or_assign(&mut self, other: &BitHypervector) -> Result<()> {
        check_len(self.len, other.len)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        Ok(())
    }
}

pub(crate) fn mask_tail(words: &mut [u64], len: usize) {
    let rem = len % WORD_BITS;
    if rem != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

/// Bundles binary hypervectors by bitwise OR.
pub fn or_reduce(vs: &[BitHypervector]) -> Result<BitHypervector> {
    let (first, rest) = vs.split_first().ok_or(Error::EmptyInput)?;
    let mut out = first.clone();
    for v in rest {
        out.or_assign(v)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bind_examples() {
        let z = bind([1.0f32, 2.0, 3.0], [2.0f32, 0.0, 1.0]).unwrap();
        assert_eq!(z.as_slice(), &[2.0, 0.0, 3.0]);

        let x = [0.5f32, -3.0, 7.25];
        assert_eq!(bind(x, [1.0f32; 3]).unwrap().as_slice(), &x);
    }

    #[test]
    fn bind_matches_scalar_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x: Vec<f32> = (0..64).map(|_| rng.random_range(-2.0..2.0)).collect();
        let y: Vec<f32> = (0..64).map(|_| rng.random_range(-2.0..2.0)).collect();
        let z = bind(&x, &y).unwrap();
        for i in 0..64 {
            assert_eq!(z.as_slice()[i], x[i] * y[i]);
        }
    }

    #[test]
    fn bind_rejects_length_mismatch() {
        assert!(matches!(
            bind([1.0f32], [1.0f32, 2.0]),
            Err(Error::Dimension { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn bundle_examples() {
        let vs = [vec![1.0f32, -1.0], vec![1.0, 1.0], vec![1.0, -1.0]];
        assert_eq!(bundle_bipolar(&vs).unwrap().as_slice(), &[1.0, -1.0]);

        let v = vec![1.0f32, -1.0, -1.0, 1.0];
        assert_eq!(bundle_bipolar(std::slice::from_ref(&v)).unwrap().as_slice(), v.as_slice());

        // sign(0) = 0
        let tie = [vec![1.0f32], vec![-1.0]];
        assert_eq!(bundle_bipolar(&tie).unwrap().as_slice(), &[0.0]);
    }

    #[test]
    fn bundle_matches_majority_vote() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let vs: Vec<Vec<f32>> = (0..5)
            .map(|_| {
                (0..32)
                    .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
                    .collect()
            })
            .collect();
        let out = bundle_bipolar(&vs).unwrap();
        for i in 0..32 {
            let plus = vs.iter().filter(|v| v[i] > 0.0).count();
            let minus = vs.len() - plus;
            let expected = match plus.cmp(&minus) {
                Ordering::Greater => 1.0,
                Ordering::Less => -1.0,
                Ordering::Equal => 0.0,
            };
            assert_eq!(out.as_slice()[i], expected, "coordinate {i}");
        }
    }

    #[test]
    fn bundle_rejects_empty() {
        let empty: [Vec<f32>; 0] = [];
        assert!(matches!(bundle_bipolar(&empty), Err(Error::EmptyInput)));
    }

    #[test]
    fn cosine_examples() {
        let v = [0.3f32, -1.2, 4.0];
        let s = cosine_similarity(v, v).unwrap().value().unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        assert_eq!(
            cosine_similarity([1.0f32, 0.0], [0.0f32, 1.0]).unwrap(),
            Similarity::Defined(0.0)
        );
        let v3: Vec<f32> = v.iter().map(|x| 3.0 * x).collect();
        let s = cosine_similarity(v, &v3).unwrap().value().unwrap();
        assert!((s - 1.0).abs() < 1e-6);
    }

    #[test]
    fn zero_norm_is_undefined_and_ranks_lowest() {
        let s = cosine_similarity([0.0f32, 0.0], [1.0f32, 0.0]).unwrap();
        assert_eq!(s, Similarity::Undefined);
        assert!(Similarity::Undefined < Similarity::Defined(-1.0));
        assert!(cosine_similarity([1.0f32], [1.0f32, 2.0]).is_err());
    }

    #[test]
    fn or_reduce_examples() {
        let a = BitHypervector::from_bools(&[true, false, false]);
        let b = BitHypervector::from_bools(&[false, true, false]);
        let out = or_reduce(&[a.clone(), b]).unwrap();
        assert_eq!(out, BitHypervector::from_bools(&[true, true, false]));
        assert_eq!(or_reduce(&[a.clone(), a.clone()]).unwrap(), a);
        assert!(matches!(or_reduce(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn or_reduce_matches_bool_loop_across_word_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let raw: Vec<Vec<bool>> = (0..4)
            .map(|_| (0..70).map(|_| rng.random_bool(0.3)).collect())
            .collect();
        let packed: Vec<_> = raw.iter().map(|b| BitHypervector::from_bools(b)).collect();
        let out = or_reduce(&packed).unwrap();
        for i in 0..70 {
            assert_eq!(out.get(i), raw.iter().any(|b| b[i]), "bit {i}");
        }
        // padding of the second word stays clear
        assert_eq!(out.words()[1] >> 6, 0);
    }

    #[test]
    fn pack_rejects_non_binary() {
        assert!(BitHypervector::pack(&[0.0, 0.5]).is_err());
    }

    #[test]
    fn from_words_clears_padding() {
        let v = BitHypervector::from_words(vec![u64::MAX], 3).unwrap();
        assert_eq!(v.words(), &[0b111]);
        assert_eq!(v.count_ones(), 3);
    }

    fn small_ints(d: usize) -> impl Strategy<Value = Vec<f32>> {
        prop::collection::vec((-8i32..8).prop_map(|x| x as f32), d)
    }

    fn bits(d: usize) -> impl Strategy<Value = Vec<bool>> {
        prop::collection::vec(any::<bool>(), d)
    }

    proptest! {
        #[test]
        fn bind_commutes_and_associates(
            (x, y, z) in (1usize..40).prop_flat_map(|d| (small_ints(d), small_ints(d), small_ints(d)))
        ) {
            prop_assert_eq!(bind(&x, &y).unwrap(), bind(&y, &x).unwrap());
            let left = bind(bind(&x, &y).unwrap(), &z).unwrap();
            let right = bind(&x, bind(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            prop_assert_eq!(bind(&x, vec![1.0; x.len()]).unwrap().into_inner(), x);
        }

        #[test]
        fn bundle_output_is_ternary(
            vs in (1usize..20).prop_flat_map(|d| prop::collection::vec(small_ints(d), 1..8))
        ) {
            let out = bundle_bipolar(&vs).unwrap();
            prop_assert!(out.as_slice().iter().all(|&v| v == -1.0 || v == 0.0 || v == 1.0));
        }

        #[test]
        fn or_reduce_is_idempotent_commutative_monotone(
            (a, b) in (1usize..200).prop_flat_map(|d| (bits(d), bits(d)))
        ) {
            let a = BitHypervector::from_bools(&a);
            let b = BitHypervector::from_bools(&b);
            prop_assert_eq!(or_reduce(&[a.clone(), a.clone()]).unwrap(), a.clone());
            let ab = or_reduce(&[a.clone(), b.clone()]).unwrap();
            prop_assert_eq!(&ab, &or_reduce(&[b.clone(), a.clone()]).unwrap());
            prop_assert!(a.is_subset_of(&ab));
            prop_assert!(b.is_subset_of(&ab));
        }

        #[test]
        fn cosine_is_scale_invariant(
            (x, y) in (1usize..30).prop_flat_map(|d| (
                prop::collection::vec(-10.0f32..10.0, d),
                prop::collection::vec(-10.0f32..10.0, d),
            )),
            c in 0.01f32..100.0,
        ) {
            let scaled: Vec<f32> = y.iter().map(|v| c * v).collect();
            let a = cosine_similarity(&x, &y).unwrap();
            let b = cosine_similarity(&x, &scaled).unwrap();
            match (a.value(), b.value()) {
                (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-6),
                (None, None) => {}
                _ => prop_assert!(false, "definedness changed under scaling"),
            }
        }

        #[test]
        fn pack_unpack_round_trip(
            v in prop::sample::select(vec![1usize, 63, 64, 65, 1433]).prop_flat_map(bits)
        ) {
            let dense: Vec<f32> = v.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
            let packed = BitHypervector::pack(&dense).unwrap();
            prop_assert_eq!(packed.unpack(), dense);
            let rem = v.len() % WORD_BITS;
            if rem != 0 {
                prop_assert_eq!(packed.words().last().unwrap() >> rem, 0);
            }
        }
    }
}
