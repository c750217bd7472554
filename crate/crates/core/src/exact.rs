//! Exact integer linear algebra for witness certificates.
//!
//! The uncontrollability witnesses are small-integer matrices, so their rank
//! deficiency and left-null products can be certified without floating point.

use nalgebra::DMatrix;

/// Row-major integer matrix view used by the exact routines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i128>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i128>) -> Self {
        assert_eq!(data.len(), rows * cols);
        IntMatrix { rows, cols, data }
    }

    pub fn at(&self, r: usize, c: usize) -> i128 {
        self.data[r * self.cols + c]
    }

    /// Horizontal concatenation `[self other]`.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(&self.data[r * self.cols..(r + 1) * self.cols]);
            data.extend_from_slice(&other.data[r * other.cols..(r + 1) * other.cols]);
        }
        IntMatrix::new(self.rows, cols, data)
    }
}

/// Converts a float matrix with integer-valued entries to an [`IntMatrix`].
/// Returns `None` if any entry is not an exact integer.
pub fn as_integer_matrix(m: &DMatrix<f64>) -> Option<IntMatrix> {
    let mut data = Vec::with_capacity(m.nrows() * m.ncols());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let v = m[(r, c)];
            if !v.is_finite() || v.fract() != 0.0 || v.abs() > 9e15 {
                return None;
            }
            data.push(v as i128);
        }
    }
    Some(IntMatrix::new(m.nrows(), m.ncols(), data))
}

/// Exact rank over the rationals via Bareiss fraction-free elimination.
///
/// # Panics
/// Panics on i128 overflow, which cannot happen for the desk-scale witness
/// matrices this crate produces.
pub fn integer_rank(m: &IntMatrix) -> usize {
    let mut a = m.data.clone();
    let (rows, cols) = (m.rows, m.cols);
    let idx = |r: usize, c: usize| r * cols + c;

    let mut rank = 0;
    let mut prev_pivot: i128 = 1;
    let mut col = 0;
    while rank < rows && col < cols {
        // Find a pivot row for this column.
        let pivot_row = (rank..rows).find(|&r| a[idx(r, col)] != 0);
        let Some(p) = pivot_row else {
            col += 1;
            continue;
        };
        if p != rank {
            for c in 0..cols {
                a.swap(idx(p, c), idx(rank, c));
            }
        }
        let pivot = a[idx(rank, col)];
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let num = a[idx(r, c)]
                    .checked_mul(pivot)
                    .and_then(|x| x.checked_sub(a[idx(r, col)].checked_mul(a[idx(rank, c)])?))
                    .expect("integer rank overflow");
                a[idx(r, c)] = num / prev_pivot;
            }
            a[idx(r, col)] = 0;
        }
        prev_pivot = pivot;
        rank += 1;
        col += 1;
    }
    rank
}

/// The exact product `z^T M` for an integer vector and matrix.
pub fn left_multiply(z: &[i64], m: &IntMatrix) -> Vec<i128> {
    assert_eq!(z.len(), m.rows);
    (0..m.cols)
        .map(|c| {
            (0..m.rows)
                .map(|r| i128::from(z[r]) * m.at(r, c))
                .sum::<i128>()
        })
        .collect()
}
