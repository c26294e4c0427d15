//! Multi-index matrices and blow matrices.
//!
//! A `MultiIndexMatrix` is the d x n exponent matrix of a polynomial: column
//! j holds the exponents of term j. Column order is the input order and is
//! never sorted (term-position counters in the local-normal-crossing
//! algorithm refer to it).

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{Int, Nat, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiIndexMatrix {
    d: usize,
    cols: Vec<Vec<Nat>>,
}

impl MultiIndexMatrix {
    /// Builds from columns (one per term). Columns must be pairwise distinct.
    pub fn new(d: usize, cols: Vec<Vec<Nat>>) -> Result<Self> {
        for c in &cols {
            if c.len() != d {
                return Err(Error::Invalid(format!(
                    "column of length {} in a {d}-variable matrix",
                    c.len()
                )));
            }
        }
        for j in 0..cols.len() {
            for j2 in j + 1..cols.len() {
                if cols[j] == cols[j2] {
                    return Err(Error::Invalid(format!(
                        "columns {} and {} coincide; multi-indexes must be pairwise distinct",
                        j + 1,
                        j2 + 1
                    )));
                }
            }
        }
        Ok(Self { d, cols })
    }

    pub fn from_u64(cols: &[&[u64]]) -> Result<Self> {
        let d = cols.first().map_or(0, |c| c.len());
        Self::new(
            d,
            cols.iter()
                .map(|c| c.iter().map(|&e| Nat::from(e)).collect())
                .collect(),
        )
    }

    /// Builds from rows (one per variable), the layout used when writing a
    /// d x n matrix out longhand.
    pub fn from_rows_u64(rows: &[&[u64]]) -> Result<Self> {
        let d = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("ragged rows".into()));
        }
        Self::new(
            d,
            (0..n)
                .map(|j| (0..d).map(|h| Nat::from(rows[h][j])).collect())
                .collect(),
        )
    }

    pub fn var_count(&self) -> usize {
        self.d
    }

    pub fn term_count(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &[Nat] {
        &self.cols[j]
    }

    pub fn cols(&self) -> &[Vec<Nat>] {
        &self.cols
    }

    pub fn entry(&self, h: usize, j: usize) -> &Nat {
        &self.cols[j][h]
    }

    /// Componentwise `col(j) <= col(j2)`.
    pub fn col_le(&self, j: usize, j2: usize) -> bool {
        self.cols[j]
            .iter()
            .zip(&self.cols[j2])
            .all(|(a, b)| a <= b)
    }

    /// Componentwise minimum over all columns (the common monomial factor).
    pub fn min_column(&self) -> Vec<Nat> {
        let mut m = self.cols[0].clone();
        for c in &self.cols[1..] {
            for (mh, ch) in m.iter_mut().zip(c) {
                if ch < mh {
                    *mh = ch.clone();
                }
            }
        }
        m
    }

    /// Index of a column that is componentwise <= every other column.
    pub fn dominated_column(&self) -> Option<usize> {
        (0..self.cols.len()).find(|&j| (0..self.cols.len()).all(|j2| self.col_le(j, j2)))
    }

    /// `col(j) - col(j2)` as signed integers.
    pub fn col_diff(&self, j: usize, j2: usize) -> Vec<Int> {
        self.cols[j]
            .iter()
            .zip(&self.cols[j2])
            .map(|(a, b)| Int::from(a.clone()) - Int::from(b.clone()))
            .collect()
    }

    /// In-place substitution `w_i <- w_i * w_j`: row j += row i.
    pub fn substitute(&mut self, i: usize, j: usize) {
        for c in &mut self.cols {
            let add = c[i].clone();
            c[j] += add;
        }
    }

    /// `B^T * self`.
    pub fn transformed(&self, b: &BlowMatrix) -> Self {
        let d = self.d;
        let cols = self
            .cols
            .iter()
            .map(|c| {
                (0..d)
                    .map(|h| {
                        let mut acc = Nat::zero();
                        for (i, ci) in c.iter().enumerate() {
                            acc += b.entry(i, h).clone() * ci.clone();
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        // B^T is injective on columns, so distinctness is preserved.
        Self { d, cols }
    }

    /// Supports of each row: true where some column has a positive entry.
    pub fn row_support(&self) -> Vec<bool> {
        let mut sup = vec![false; self.d];
        for c in &self.cols {
            for (h, e) in c.iter().enumerate() {
                if !e.is_zero() {
                    sup[h] = true;
                }
            }
        }
        sup
    }
}

/// A d x d matrix of naturals with determinant 1, the product of elementary
/// matrices `R_{ij}` (identity plus a single off-diagonal 1). It records the
/// cumulative variable transformation of a chain of blow-ups: `log w = B log w'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowMatrix {
    d: usize,
    rows: Vec<Vec<Nat>>,
}

impl BlowMatrix {
    pub fn identity(d: usize) -> Self {
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i == j { Nat::one() } else { Nat::zero() })
                    .collect()
            })
            .collect();
        Self { d, rows }
    }

    /// `R_{ij}`: identity plus a 1 in position (i, j). This is the blow
    /// matrix of the substitution `w_i <- w_i * w_j`.
    pub fn elementary(d: usize, i: usize, j: usize) -> Self {
        let mut m = Self::identity(d);
        m.rows[i][j] += Nat::one();
        m
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entry(&self, i: usize, j: usize) -> &Nat {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Nat>] {
        &self.rows
    }

    /// `self * other`.
    pub fn mul(&self, other: &BlowMatrix) -> BlowMatrix {
        let d = self.d;
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut acc = Nat::zero();
                        for k in 0..d {
                            acc += self.rows[i][k].clone() * other.rows[k][j].clone();
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        BlowMatrix { d, rows }
    }

    /// `self * R_{ij}` in place: column j += column i.
    pub fn right_mul_elementary(&mut self, i: usize, j: usize) {
        for r in &mut self.rows {
            let add = r[i].clone();
            r[j] += add;
        }
    }

    /// `B^T s` for a rational vector `s`.
    pub fn transpose_apply(&self, s: &[Rat]) -> Vec<Rat> {
        (0..self.d)
            .map(|h| {
                let mut acc = Rat::zero();
                for (i, si) in s.iter().enumerate() {
                    acc += Rat::from_integer(Int::from(self.rows[i][h].clone())) * si;
                }
                acc
            })
            .collect()
    }

    /// Exact determinant (fraction-free Gaussian elimination).
    pub fn det(&self) -> Int {
        let d = self.d;
        let mut m: Vec<Vec<Rat>> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| Rat::from_integer(Int::from(e.clone())))
                    .collect()
            })
            .collect();
        let mut det = Rat::one();
        for col in 0..d {
            let Some(p) = (col..d).find(|&r| !m[r][col].is_zero()) else {
                return Int::zero();
            };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            let pivot = m[col][col].clone();
            det *= &pivot;
            for r in col + 1..d {
                let factor = &m[r][col] / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for c in col..d {
                    let sub = &factor * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
        debug_assert!(det.is_integer());
        det.to_integer()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::nat;

    #[test]
    fn distinct_columns_enforced() {
        assert!(MultiIndexMatrix::from_u64(&[&[2, 4], &[2, 4]]).is_err());
        assert!(MultiIndexMatrix::from_u64(&[&[2, 4], &[2, 5]]).is_ok());
    }

    #[test]
    fn substitution_matches_transform_by_elementary() {
        // w1 <- w1*w2 on w1^2 + w2^4 (columns (2,0) and (0,4)).
        let a = MultiIndexMatrix::from_u64(&[&[2, 0], &[0, 4]]).unwrap();
        let mut sub = a.clone();
        sub.substitute(0, 1);
        let b = BlowMatrix::elementary(2, 0, 1);
        assert_eq!(sub, a.transformed(&b));
        assert_eq!(sub.col(0), &[nat(2), nat(2)]);
        assert_eq!(sub.col(1), &[nat(0), nat(4)]);
    }

    #[test]
    fn blow_matrix_composition_and_det() {
        let r1 = BlowMatrix::elementary(3, 0, 1);
        let r2 = BlowMatrix::elementary(3, 2, 0);
        let prod = r1.mul(&r2);
        assert_eq!(prod.det(), Int::one());
        let mut inc = r1.clone();
        inc.right_mul_elementary(2, 0);
        assert_eq!(inc, prod);
    }

    #[test]
    fn transform_composes() {
        let a = MultiIndexMatrix::from_u64(&[&[2, 0, 1], &[0, 4, 1], &[1, 1, 3]]).unwrap();
        let b1 = BlowMatrix::elementary(3, 0, 1);
        let b2 = BlowMatrix::elementary(3, 1, 2);
        let step = a.transformed(&b1).transformed(&b2);
        let once = a.transformed(&b1.mul(&b2));
        assert_eq!(step, once);
    }
}
