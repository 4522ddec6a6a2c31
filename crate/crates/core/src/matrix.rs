//! Small dense matrices over [`TruncatedSeries`].

use std::fmt;

use crate::error::Result;
use crate::series::{Rational, TruncatedSeries};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    data: Vec<TruncatedSeries>,
}

impl SeriesMatrix {
    pub fn zeros(rows: usize, cols: usize, order: usize) -> Self {
        SeriesMatrix {
            rows,
            cols,
            data: vec![TruncatedSeries::zero(order); rows * cols],
        }
    }

    pub fn identity(size: usize, order: usize) -> Self {
        Self::scalar(size, &TruncatedSeries::one(order))
    }

    pub fn scalar(size: usize, s: &TruncatedSeries) -> Self {
        let mut m = Self::zeros(size, size, s.order());
        for i in 0..size {
            m.set(i, i, s.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<TruncatedSeries>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        SeriesMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// 2×2 matrix from row-major entries.
    pub fn two_by_two(
        a: TruncatedSeries,
        b: TruncatedSeries,
        c: TruncatedSeries,
        d: TruncatedSeries,
    ) -> Self {
        SeriesMatrix {
            rows: 2,
            cols: 2,
            data: vec![a, b, c, d],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> usize {
        self.data[0].order()
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncatedSeries {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: TruncatedSeries) {
        self.data[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[TruncatedSeries] {
        &self.data
    }

    pub fn mul(&self, other: &SeriesMatrix) -> SeriesMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let order = self.order();
        let mut out = SeriesMatrix::zeros(self.rows, other.cols, order);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = TruncatedSeries::zero(order);
                for l in 0..self.cols {
                    let a = self.get(i, l);
                    let b = other.get(l, j);
                    if (a.is_exact() && a.is_zero()) || (b.is_exact() && b.is_zero()) {
                        continue;
                    }
                    acc += &(a * b);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn add(&self, other: &SeriesMatrix) -> SeriesMatrix {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SeriesMatrix) -> SeriesMatrix {
        self.zip(other, |a, b| a - b)
    }

    fn zip(
        &self,
        other: &SeriesMatrix,
        f: impl Fn(&TruncatedSeries, &TruncatedSeries) -> TruncatedSeries,
    ) -> SeriesMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&TruncatedSeries) -> TruncatedSeries) -> SeriesMatrix {
        SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map(
        &self,
        f: impl Fn(&TruncatedSeries) -> Result<TruncatedSeries>,
    ) -> Result<SeriesMatrix> {
        Ok(SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn neg(&self) -> SeriesMatrix {
        self.map(|a| -a)
    }

    pub fn scale(&self, s: &TruncatedSeries) -> SeriesMatrix {
        self.map(|a| a * s)
    }

    pub fn scale_rational(&self, c: &Rational) -> SeriesMatrix {
        self.map(|a| a.scale(c))
    }

    pub fn divide_exact(&self, a: usize) -> Result<SeriesMatrix> {
        self.try_map(|x| x.divide_exact(a))
    }

    pub fn with_order(&self, order: usize) -> SeriesMatrix {
        self.map(|a| a.with_order(order))
    }

    pub fn lift_exact(&self) -> SeriesMatrix {
        self.map(TruncatedSeries::lift_exact)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(TruncatedSeries::is_zero)
    }

    pub fn precision(&self) -> usize {
        self.data
            .iter()
            .map(TruncatedSeries::precision)
            .min()
            .unwrap_or(usize::MAX)
    }

    pub fn agrees_with(&self, other: &SeriesMatrix) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols)
            && self.data.iter().zip(&other.data).all(|(a, b)| a.agrees_with(b))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    pub fn transpose(&self) -> SeriesMatrix {
        let mut out = SeriesMatrix::zeros(self.cols, self.rows, self.order());
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> SeriesMatrix {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != skip_row) {
            for j in (0..self.cols).filter(|&j| j != skip_col) {
                data.push(self.get(i, j).clone());
            }
        }
        SeriesMatrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }

    /// Determinant by cofactor expansion; meant for the small sizes used here.
    pub fn det(&self) -> TruncatedSeries {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        match self.rows {
            0 => TruncatedSeries::one(1),
            1 => self.data[0].clone(),
            2 => &(self.get(0, 0) * self.get(1, 1)) - &(self.get(0, 1) * self.get(1, 0)),
            n => {
                let mut acc = TruncatedSeries::zero(self.order());
                for j in 0..n {
                    let a = self.get(0, j);
                    if a.is_exact() && a.is_zero() {
                        continue;
                    }
                    let term = a * &self.minor(0, j).det();
                    if j % 2 == 0 {
                        acc += &term;
                    } else {
                        acc -= &term;
                    }
                }
                acc
            }
        }
    }

    pub fn adjugate(&self) -> SeriesMatrix {
        assert_eq!(self.rows, self.cols, "adjugate of a non-square matrix");
        let n = self.rows;
        if n == 1 {
            return SeriesMatrix::identity(1, self.order());
        }
        let mut out = SeriesMatrix::zeros(n, n, self.order());
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(i, j).det();
                let c = if (i + j) % 2 == 0 { c } else { -c };
                out.set(j, i, c);
            }
        }
        out
    }

    pub fn block_diag(a: &SeriesMatrix, b: &SeriesMatrix) -> SeriesMatrix {
        let mut out = SeriesMatrix::zeros(a.rows + b.rows, a.cols + b.cols, a.order());
        for i in 0..a.rows {
            for j in 0..a.cols {
                out.set(i, j, a.get(i, j).clone());
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                out.set(a.rows + i, a.cols + j, b.get(i, j).clone());
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<TruncatedSeries> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_literals(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_literal()).collect())
            .collect()
    }
}

impl fmt::Display for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .to_literals()
            .into_iter()
            .map(|r| format!("[{}]", r.join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(entries: [&str; 4]) -> SeriesMatrix {
        let e: Vec<_> = entries
            .iter()
            .map(|s| TruncatedSeries::parse(s, 6).unwrap())
            .collect();
        SeriesMatrix::two_by_two(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone())
    }

    #[test]
    fn adjugate_times_matrix_is_det() {
        let a = m(["t", "-2", "0", "1"]);
        let prod = a.mul(&a.adjugate());
        assert_eq!(prod, SeriesMatrix::scalar(2, &a.det()));
        assert_eq!(a.det().to_literal(), "t");
    }

    #[test]
    fn three_by_three_det() {
        let z = TruncatedSeries::zero(4);
        let one = TruncatedSeries::one(4);
        let t = TruncatedSeries::t_power(1, 4);
        let a = SeriesMatrix::from_rows(vec![
            vec![t.clone(), one.clone(), z.clone()],
            vec![z.clone(), one.clone(), t.clone()],
            vec![one.clone(), z.clone(), one.clone()],
        ]);
        assert_eq!(a.det().to_literal(), "2t");
        let prod = a.adjugate().mul(&a);
        assert_eq!(prod, SeriesMatrix::scalar(3, &a.det()));
    }
}
