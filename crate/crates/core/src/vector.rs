//! Sparse and dense feature vectors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Sorted-index sparse vector. Explicit zeros are never stored.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    dim: usize,
    indices: Vec<u32>,
    values: Vec<f64>,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        SparseVector {
            dim,
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds from `(index, value)` pairs; repeated indices are summed in input order.
    pub fn from_pairs(dim: usize, pairs: impl IntoIterator<Item = (u32, f64)>) -> Self {
        let mut acc: BTreeMap<u32, f64> = BTreeMap::new();
        for (i, v) in pairs {
            assert!((i as usize) < dim, "index {i} out of range for dim {dim}");
            *acc.entry(i).or_insert(0.0) += v;
        }
        let (indices, values) = acc.into_iter().filter(|&(_, v)| v != 0.0).unzip();
        SparseVector {
            dim,
            indices,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.indices
            .iter()
            .copied()
            .zip(self.values.iter().copied())
    }

    pub fn get(&self, index: u32) -> f64 {
        match self.indices.binary_search(&index) {
            Ok(p) => self.values[p],
            Err(_) => 0.0,
        }
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (small, large) = if self.nnz() <= other.nnz() {
            (self, other)
        } else {
            (other, self)
        };
        if small.nnz() == 0 {
            return 0.0;
        }
        // Binary search pays off when one side is much shorter.
        if small.nnz() * 8 < large.nnz() {
            let mut sum = 0.0;
            let mut lo = 0;
            for (i, v) in small.iter() {
                match large.indices[lo..].binary_search(&i) {
                    Ok(p) => {
                        sum += v * large.values[lo + p];
                        lo += p + 1;
                    }
                    Err(p) => lo += p,
                }
            }
            return sum;
        }
        let (mut a, mut b, mut sum) = (0, 0, 0.0);
        while a < self.nnz() && b < other.nnz() {
            match self.indices[a].cmp(&other.indices[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    sum += self.values[a] * other.values[b];
                    a += 1;
                    b += 1;
                }
            }
        }
        sum
    }

    /// `self += other`, merging index sets.
    pub fn add_assign(&mut self, other: &SparseVector) {
        let mut indices = Vec::with_capacity(self.nnz() + other.nnz());
        let mut values = Vec::with_capacity(self.nnz() + other.nnz());
        let (mut a, mut b) = (0, 0);
        while a < self.nnz() || b < other.nnz() {
            let take_a = b >= other.nnz() || (a < self.nnz() && self.indices[a] < other.indices[b]);
            let take_b = a >= self.nnz() || (b < other.nnz() && other.indices[b] < self.indices[a]);
            let (i, v) = if take_a {
                a += 1;
                (self.indices[a - 1], self.values[a - 1])
            } else if take_b {
                b += 1;
                (other.indices[b - 1], other.values[b - 1])
            } else {
                a += 1;
                b += 1;
                (
                    self.indices[a - 1],
                    self.values[a - 1] + other.values[b - 1],
                )
            };
            if v != 0.0 {
                indices.push(i);
                values.push(v);
            }
        }
        self.indices = indices;
        self.values = values;
    }
}

/// An ingredient or query representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FeatureVector {
    Sparse(SparseVector),
    Dense { values: Vec<f64> },
}

impl FeatureVector {
    pub fn dense(values: Vec<f64>) -> Self {
        FeatureVector::Dense { values }
    }

    /// Zero vector of the same kind and dimensionality as `self`.
    pub fn zeros_like(&self) -> Self {
        match self {
            FeatureVector::Sparse(s) => FeatureVector::Sparse(SparseVector::zeros(s.dim())),
            FeatureVector::Dense { values } => FeatureVector::dense(vec![0.0; values.len()]),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FeatureVector::Sparse(s) => s.dim(),
            FeatureVector::Dense { values } => values.len(),
        }
    }

    pub fn get(&self, index: usize) -> f64 {
        match self {
            FeatureVector::Sparse(s) => s.get(index as u32),
            FeatureVector::Dense { values } => values[index],
        }
    }

    /// Nonzero entries in ascending index order.
    pub fn nonzeros(&self) -> Box<dyn Iterator<Item = (usize, f64)> + '_> {
        match self {
            FeatureVector::Sparse(s) => Box::new(s.iter().map(|(i, v)| (i as usize, v))),
            FeatureVector::Dense { values } => Box::new(
                values
                    .iter()
                    .copied()
                    .enumerate()
                    .filter(|&(_, v)| v != 0.0),
            ),
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        match self {
            FeatureVector::Sparse(s) => {
                let mut out = vec![0.0; s.dim()];
                for (i, v) in s.iter() {
                    out[i as usize] = v;
                }
                out
            }
            FeatureVector::Dense { values } => values.clone(),
        }
    }

    pub fn dot(&self, other: &FeatureVector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        match (self, other) {
            (FeatureVector::Sparse(a), FeatureVector::Sparse(b)) => a.dot(b),
            (FeatureVector::Dense { values: a }, FeatureVector::Dense { values: b }) => {
                a.iter().zip(b).map(|(x, y)| x * y).sum()
            }
            (FeatureVector::Sparse(s), FeatureVector::Dense { values: d })
            | (FeatureVector::Dense { values: d }, FeatureVector::Sparse(s)) => {
                s.iter().map(|(i, v)| v * d[i as usize]).sum()
            }
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            FeatureVector::Sparse(s) => s.values().iter().map(|v| v * v).sum::<f64>().sqrt(),
            FeatureVector::Dense { values } => values.iter().map(|v| v * v).sum::<f64>().sqrt(),
        }
    }

    pub fn l1_norm(&self) -> f64 {
        match self {
            FeatureVector::Sparse(s) => s.values().iter().map(|v| v.abs()).sum(),
            FeatureVector::Dense { values } => values.iter().map(|v| v.abs()).sum(),
        }
    }

    /// Cosine similarity, defined as 0 when either side is the zero vector.
    pub fn cosine(&self, other: &FeatureVector) -> f64 {
        let denom = self.norm() * other.norm();
        if denom == 0.0 {
            0.0
        } else {
            self.dot(other) / denom
        }
    }

    pub fn add_assign(&mut self, other: &FeatureVector) {
        debug_assert_eq!(self.dim(), other.dim());
        match (self, other) {
            (FeatureVector::Sparse(a), FeatureVector::Sparse(b)) => a.add_assign(b),
            (FeatureVector::Dense { values: a }, FeatureVector::Dense { values: b }) => {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            }
            (FeatureVector::Dense { values: a }, FeatureVector::Sparse(b)) => {
                for (i, v) in b.iter() {
                    a[i as usize] += v;
                }
            }
            (this @ FeatureVector::Sparse(_), FeatureVector::Dense { values: b }) => {
                let mut dense = this.to_dense();
                dense.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                *this = FeatureVector::dense(dense);
            }
        }
    }

    pub fn scaled(&self, factor: f64) -> FeatureVector {
        match self {
            FeatureVector::Sparse(s) => FeatureVector::Sparse(SparseVector::from_pairs(
                s.dim(),
                s.iter().map(|(i, v)| (i, v * factor)),
            )),
            FeatureVector::Dense { values } => {
                FeatureVector::dense(values.iter().map(|v| v * factor).collect())
            }
        }
    }

    /// `Σ weight · vector` over `terms`, summed in term order.
    ///
    /// The result is sparse only if every term is sparse.
    pub fn weighted_sum<'a>(
        dim: usize,
        terms: impl IntoIterator<Item = (f64, &'a FeatureVector)>,
    ) -> FeatureVector {
        let terms: Vec<(f64, &FeatureVector)> =
            terms.into_iter().filter(|(w, _)| *w != 0.0).collect();
        if terms
            .iter()
            .all(|(_, v)| matches!(v, FeatureVector::Sparse(_)))
        {
            let pairs = terms.iter().flat_map(|(w, v)| match v {
                FeatureVector::Sparse(s) => s.iter().map(move |(i, x)| (i, w * x)),
                FeatureVector::Dense { .. } => unreachable!(),
            });
            FeatureVector::Sparse(SparseVector::from_pairs(dim, pairs))
        } else {
            let mut out = vec![0.0; dim];
            for (w, v) in terms {
                for (i, x) in v.nonzeros() {
                    out[i] += w * x;
                }
            }
            FeatureVector::dense(out)
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            FeatureVector::Sparse(s) => s.values().iter().all(|v| v.is_finite()),
            FeatureVector::Dense { values } => values.iter().all(|v| v.is_finite()),
        }
    }
}

impl From<SparseVector> for FeatureVector {
    fn from(s: SparseVector) -> Self {
        FeatureVector::Sparse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sparse(dim: usize, pairs: &[(u32, f64)]) -> FeatureVector {
        SparseVector::from_pairs(dim, pairs.iter().copied()).into()
    }

    #[test]
    fn zeros_are_dropped() {
        let v = SparseVector::from_pairs(4, [(1, 1.0), (1, -1.0), (2, 0.0), (3, 2.0)]);
        assert_eq!(v.indices(), &[3]);
    }

    #[test]
    fn cosine_with_zero_vector_is_zero() {
        let z = sparse(3, &[]);
        let a = sparse(3, &[(0, 1.0)]);
        assert_eq!(z.cosine(&a), 0.0);
        assert_eq!(a.cosine(&a), 1.0);
    }

    #[test]
    fn mixed_add_promotes_to_dense() {
        let mut a = sparse(3, &[(0, 1.0)]);
        a.add_assign(&FeatureVector::dense(vec![0.5, 0.5, 0.5]));
        assert_eq!(a, FeatureVector::dense(vec![1.5, 0.5, 0.5]));
    }

    fn arb_pairs(dim: u32) -> impl Strategy<Value = Vec<(u32, f64)>> {
        prop::collection::vec(
            (0..dim, -4i32..5).prop_map(|(i, v)| (i, v as f64 * 0.5)),
            0..40,
        )
    }

    proptest! {
        #[test]
        fn sparse_ops_agree_with_dense(a in arb_pairs(64), b in arb_pairs(64)) {
            let sa = sparse(64, &a);
            let sb = sparse(64, &b);
            let (da, db) = (sa.to_dense(), sb.to_dense());
            let dense_dot: f64 = da.iter().zip(&db).map(|(x, y)| x * y).sum();
            prop_assert_eq!(sa.dot(&sb), dense_dot);
            prop_assert_eq!(sa.dot(&FeatureVector::dense(db.clone())), dense_dot);

            let mut sum = sa.clone();
            sum.add_assign(&sb);
            let expected: Vec<f64> = da.iter().zip(&db).map(|(x, y)| x + y).collect();
            prop_assert_eq!(sum.to_dense(), expected);
            if let FeatureVector::Sparse(s) = &sum {
                prop_assert!(s.values().iter().all(|&v| v != 0.0));
                prop_assert!(s.indices().windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}
