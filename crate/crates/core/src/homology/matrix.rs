use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::HomologyError;

/// Dense row-major integer matrix with overflow-checked arithmetic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, HomologyError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(HomologyError::Ragged);
        }
        Ok(Self { rows: rows.len(), cols, data: rows.concat() })
    }

    /// Shape-explicit constructor, so that empty matrices keep their shape.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self, HomologyError> {
        if data.len() != rows * cols {
            return Err(HomologyError::Ragged);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == i64::from(i == j)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, HomologyError> {
        if self.cols != other.rows {
            return Err(HomologyError::Shape {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    let term = self[(i, k)].checked_mul(other[(k, j)]).ok_or(HomologyError::Overflow)?;
                    acc = acc.checked_add(term).ok_or(HomologyError::Overflow)?;
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HomologyError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(HomologyError::Shape {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.checked_sub(*b).ok_or(HomologyError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i64, HomologyError> {
        if self.rows != self.cols {
            return Err(HomologyError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|r| self.row(r).iter().map(|&x| i128::from(x)).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                let Some(swap) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                    return Ok(0);
                };
                a.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i][j]
                        .checked_mul(a[k][k])
                        .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                        .ok_or(HomologyError::Overflow)?;
                    a[i][j] = num / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| HomologyError::Overflow)
    }

    /// Appends an identity block of size `extra` in the lower-right corner.
    pub fn extend_identity(&self, extra: usize) -> Self {
        let n = self.rows + extra;
        let mut out = Self::zeros(n, self.cols + extra);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..extra {
            out[(self.rows + i, self.cols + i)] = 1;
        }
        out
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += factor * row[source]`
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, factor: i64) -> Result<(), HomologyError> {
        for j in 0..self.cols {
            let v = self[(source, j)]
                .checked_mul(factor)
                .and_then(|x| x.checked_add(self[(target, j)]))
                .ok_or(HomologyError::Overflow)?;
            self[(target, j)] = v;
        }
        Ok(())
    }

    /// `col[target] += factor * col[source]`
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, factor: i64) -> Result<(), HomologyError> {
        for i in 0..self.rows {
            let v = self[(i, source)]
                .checked_mul(factor)
                .and_then(|x| x.checked_add(self[(i, target)]))
                .ok_or(HomologyError::Overflow)?;
            self[(i, target)] = v;
        }
        Ok(())
    }

    pub(crate) fn negate_row(&mut self, r: usize) -> Result<(), HomologyError> {
        for j in 0..self.cols {
            self[(r, j)] = self[(r, j)].checked_neg().ok_or(HomologyError::Overflow)?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = i64;
    fn index(&self, (r, c): (usize, usize)) -> &i64 {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut i64 {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}{:?}", self.rows, self.cols, self.to_rows())
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, x) in self.row(r).iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

// Serialized as a list of rows; only square matrices travel through documents.
impl Serialize for IntegerMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntegerMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        Self::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(m(&[&[1, 1], &[0, 1]]).determinant().unwrap(), 1);
        assert_eq!(m(&[&[1, 1], &[0, -1]]).determinant().unwrap(), -1);
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant().unwrap(), -1);
        assert_eq!(m(&[&[2, 4], &[6, 8]]).determinant().unwrap(), -8);
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).determinant().unwrap(), 0);
        assert_eq!(m(&[&[0, 2, 1], &[3, 0, 0], &[1, 1, 1]]).determinant().unwrap(), -3);
        assert_eq!(IntegerMatrix::identity(0).determinant().unwrap(), 1);
    }

    #[test]
    fn multiplication_checks_overflow() {
        let big = m(&[&[i64::MAX]]);
        assert_eq!(big.mul(&m(&[&[2]])), Err(HomologyError::Overflow));
        assert_eq!(m(&[&[1, 2]]).mul(&m(&[&[3], &[4]])).unwrap(), m(&[&[11]]));
    }

    #[test]
    fn identity_extension() {
        let e = m(&[&[1, 1], &[0, 1]]).extend_identity(1);
        assert_eq!(e, m(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert!(IntegerMatrix::identity(3).is_identity());
    }
}
