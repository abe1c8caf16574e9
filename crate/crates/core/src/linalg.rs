//! Sparse exact linear algebra over the rationals.

use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Zero};

use crate::rational::{self, Rational};

/// Sorted `(column, value)` pairs with no zero values.
pub type SparseRow = Vec<(usize, Rational)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    cols: usize,
    data: Vec<SparseRow>,
}

impl SparseMatrix {
    pub fn new(cols: usize) -> Self {
        SparseMatrix {
            cols,
            data: Vec::new(),
        }
    }

    pub fn from_dense(cols: usize, rows: &[Vec<Rational>]) -> Self {
        let mut m = SparseMatrix::new(cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            m.push_row(r.iter().cloned().enumerate());
        }
        m
    }

    /// Appends a row; repeated columns are summed and zeros dropped.
    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (usize, Rational)>) {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (c, v) in entries {
            assert!(
                c < self.cols,
                "column {c} out of bounds ({} columns)",
                self.cols
            );
            *acc.entry(c).or_insert_with(Rational::zero) += v;
        }
        self.data
            .push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
    }

    pub fn rows(&self) -> usize {
        self.data.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, Rational)] {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.data[r]
            .binary_search_by_key(&c, |(col, _)| *col)
            .map(|i| self.data[r][i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .fold(Rational::zero(), |acc, (c, x)| acc + x * &v[*c])
            })
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.data
            .iter()
            .map(|row| {
                let mut d = vec![Rational::zero(); self.cols];
                for (c, x) in row {
                    d[*c] = x.clone();
                }
                d
            })
            .collect()
    }
}

/// `row - factor * pivot`, both sorted.
fn sub_scaled(
    row: &[(usize, Rational)],
    pivot: &[(usize, Rational)],
    factor: &Rational,
) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_pivot = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_pivot {
            out.push((pivot[j].0, -(factor * &pivot[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - factor * &pivot[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Reduced row-echelon form and the (strictly increasing) pivot columns.
///
/// Within each column the pivot is the candidate entry with the smallest
/// combined numerator/denominator bit-length. Zero rows are moved to the
/// bottom, so the result has the same shape as the input.
pub fn rref(m: &SparseMatrix) -> (SparseMatrix, Vec<usize>) {
    // Remaining rows bucketed by leading column; every row in the bucket
    // for column c has already been reduced against all pivots before c.
    // Rows are kept monic so that repeated equations collapse.
    let mut buckets: BTreeMap<usize, HashSet<SparseRow>> = BTreeMap::new();
    let file = |buckets: &mut BTreeMap<usize, HashSet<SparseRow>>, mut row: SparseRow| {
        let Some((c, lead)) = row.first().cloned() else {
            return;
        };
        if !lead.is_one() {
            let inv = Rational::one() / lead;
            for (_, v) in row.iter_mut() {
                *v *= &inv;
            }
        }
        buckets.entry(c).or_default().insert(row);
    };
    for row in &m.data {
        file(&mut buckets, row.clone());
    }
    let mut pivots: Vec<(usize, SparseRow)> = Vec::new();

    while let Some((col, rows)) = buckets.pop_first() {
        let mut rows: Vec<SparseRow> = rows.into_iter().collect();
        let best = rows
            .iter()
            .enumerate()
            .min_by_key(|(_, r)| {
                (
                    r.len(),
                    r.iter().map(|(_, v)| rational::bit_len(v)).sum::<u64>(),
                )
            })
            .map(|(i, _)| i)
            .expect("bucket is nonempty");
        let pivot = rows.swap_remove(best);
        for row in rows {
            file(&mut buckets, sub_scaled(&row, &pivot, &Rational::one()));
        }
        for (_, prev) in pivots.iter_mut() {
            if let Ok(i) = prev.binary_search_by_key(&col, |(c, _)| *c) {
                let f = prev[i].1.clone();
                *prev = sub_scaled(prev, &pivot, &f);
            }
        }
        pivots.push((col, pivot));
    }

    let cols: Vec<usize> = pivots.iter().map(|(c, _)| *c).collect();
    let mut data: Vec<SparseRow> = pivots.into_iter().map(|(_, r)| r).collect();
    data.resize(m.rows(), Vec::new());
    (SparseMatrix { cols: m.cols, data }, cols)
}

pub fn rank(m: &SparseMatrix) -> usize {
    rref(m).1.len()
}

/// A list of dense vectors in a common ambient space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorBasis {
    ambient_dim: usize,
    vectors: Vec<Vec<Rational>>,
}

impl VectorBasis {
    /// Panics if the vectors are dependent or have the wrong length.
    pub fn new(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Self {
        let b = VectorBasis {
            ambient_dim,
            vectors,
        };
        assert!(b.vectors.iter().all(|v| v.len() == ambient_dim));
        assert_eq!(
            b.rank(),
            b.vectors.len(),
            "basis vectors are linearly dependent"
        );
        b
    }

    pub fn empty(ambient_dim: usize) -> Self {
        VectorBasis {
            ambient_dim,
            vectors: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Number of basis vectors.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    pub fn rank(&self) -> usize {
        rank(&SparseMatrix::from_dense(self.ambient_dim, &self.vectors))
    }

    /// Whether `v` lies in the span.
    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut rows = self.vectors.clone();
        rows.push(v.to_vec());
        rank(&SparseMatrix::from_dense(self.ambient_dim, &rows)) == self.vectors.len()
    }
}

/// Basis of `{v : m v = 0}`, one vector per free column, each scaled to a
/// primitive integer vector with positive leading entry.
pub fn nullspace(m: &SparseMatrix) -> VectorBasis {
    let (r, pivots) = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut vectors = Vec::new();
    for free in (0..m.cols).filter(|c| !is_pivot[*c]) {
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -r.get(i, free);
        }
        let v = rational::primitive(&v);
        assert!(
            m.mul_vec(&v).iter().all(Zero::is_zero),
            "nullspace vector failed verification"
        );
        vectors.push(v);
    }
    VectorBasis {
        ambient_dim: m.cols,
        vectors,
    }
}

/// Canonical basis (primitive RREF rows) of the span of `b` restricted to
/// `coords`.
pub fn project(b: &VectorBasis, coords: &[usize]) -> VectorBasis {
    assert!(coords.iter().all(|&c| c < b.ambient_dim));
    let rows: Vec<Vec<Rational>> = b
        .vectors
        .iter()
        .map(|v| coords.iter().map(|&c| v[c].clone()).collect())
        .collect();
    let (r, pivots) = rref(&SparseMatrix::from_dense(coords.len(), &rows));
    let dense = r.to_dense();
    VectorBasis {
        ambient_dim: coords.len(),
        vectors: dense
            .into_iter()
            .take(pivots.len())
            .map(|v| rational::primitive(&v))
            .collect(),
    }
}

pub fn rank_of_projection(b: &VectorBasis, coords: &[usize]) -> usize {
    project(b, coords).len()
}
