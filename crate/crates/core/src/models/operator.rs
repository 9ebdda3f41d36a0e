use super::basis::GradedBasis;
use crate::error::{Error, Result};
use crate::symbol::{coeff_to_c64, Coeff};
use crate::to_f64;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Sparse operator in monomial (non-normalized) coordinates of a truncated basis.
///
/// Column `j` lists `(i, A[i][j])` for the image of basis monomial `j`.
/// Rows and columns of degree at most `valid_degree` agree with the
/// untruncated operator; `shift` bounds `deg(row) - deg(col)` on the support.
#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    basis: Arc<GradedBasis>,
    cols: Vec<Vec<(usize, Coeff)>>,
    valid_degree: i64,
    shift: (i32, i32),
}

fn accumulate(entries: impl IntoIterator<Item = (usize, Coeff)>) -> Vec<(usize, Coeff)> {
    let mut acc: BTreeMap<usize, Coeff> = BTreeMap::new();
    for (i, c) in entries {
        *acc.entry(i).or_insert_with(Coeff::zero) += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl TruncatedOperator {
    pub fn from_columns(
        basis: Arc<GradedBasis>,
        cols: Vec<Vec<(usize, Coeff)>>,
        valid_degree: i64,
        shift: (i32, i32),
    ) -> Self {
        assert_eq!(cols.len(), basis.len(), "one column per basis element");
        let cols = cols.into_iter().map(accumulate).collect();
        TruncatedOperator { basis, cols, valid_degree, shift }
    }

    pub fn zero(basis: Arc<GradedBasis>) -> Self {
        let n = basis.len();
        let v = basis.truncation() as i64;
        TruncatedOperator { basis, cols: vec![Vec::new(); n], valid_degree: v, shift: (0, 0) }
    }

    /// Diagonal operator acting by `f(m)` on level `m`.
    pub fn level_diagonal(basis: Arc<GradedBasis>, f: impl Fn(u32) -> BigRational) -> Self {
        let cols = (0..basis.len())
            .map(|j| {
                let c = f(basis.element(j).degree);
                vec![(j, Coeff::new(c, BigRational::zero()))]
            })
            .collect();
        let v = basis.truncation() as i64;
        Self::from_columns(basis, cols, v, (0, 0))
    }

    pub fn identity(basis: Arc<GradedBasis>) -> Self {
        Self::level_diagonal(basis, |_| BigRational::one())
    }

    pub fn basis(&self) -> &Arc<GradedBasis> {
        &self.basis
    }

    pub fn valid_degree(&self) -> i64 {
        self.valid_degree
    }

    pub fn with_valid_degree(mut self, v: i64) -> Self {
        self.valid_degree = v;
        self
    }

    pub fn shift(&self) -> (i32, i32) {
        self.shift
    }

    pub fn column(&self, j: usize) -> &[(usize, Coeff)] {
        &self.cols[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> Coeff {
        self.cols[j]
            .binary_search_by_key(&i, |(r, _)| *r)
            .map(|k| self.cols[j][k].1.clone())
            .unwrap_or_else(|_| Coeff::zero())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    /// Number of basis elements inside the valid block.
    pub fn valid_dimension(&self) -> usize {
        self.basis.count_up_to(self.valid_degree)
    }

    fn same_basis(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.basis, &other.basis) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_basis(other)?;
        let cols = self
            .cols
            .par_iter()
            .zip(other.cols.par_iter())
            .map(|(a, b)| accumulate(a.iter().cloned().chain(b.iter().cloned())))
            .collect();
        Ok(TruncatedOperator {
            basis: self.basis.clone(),
            cols,
            valid_degree: self.valid_degree.min(other.valid_degree),
            shift: (self.shift.0.min(other.shift.0), self.shift.1.max(other.shift.1)),
        })
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let cols = self
            .cols
            .par_iter()
            .map(|col| col.iter().map(|(i, x)| (*i, x * c)).filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        TruncatedOperator { basis: self.basis.clone(), cols, valid_degree: self.valid_degree, shift: self.shift }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Coeff::one()))
    }

    /// Composition `self * other` (apply `other` first).
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.same_basis(other)?;
        let cols = other
            .cols
            .par_iter()
            .map(|col| {
                accumulate(col.iter().flat_map(|(k, b)| self.cols[*k].iter().map(move |(i, a)| (*i, a * b))))
            })
            .collect();
        let max_shift = [self.shift.0, self.shift.1, other.shift.0, other.shift.1]
            .iter()
            .map(|s| s.abs())
            .max()
            .unwrap_or(0);
        Ok(TruncatedOperator {
            basis: self.basis.clone(),
            cols,
            valid_degree: self.valid_degree.min(other.valid_degree) - max_shift as i64,
            shift: (self.shift.0 + other.shift.0, self.shift.1 + other.shift.1),
        })
    }

    /// Hilbert-space adjoint: `A*[b][a] = conj(A[a][b]) n_a / n_b`.
    pub fn adjoint(&self) -> Self {
        let n = self.basis.len();
        let mut cols: Vec<Vec<(usize, Coeff)>> = vec![Vec::new(); n];
        for (b, col) in self.cols.iter().enumerate() {
            for (a, x) in col {
                let ratio = &self.basis.element(*a).norm_sq / &self.basis.element(b).norm_sq;
                cols[*a].push((b, x.conj() * Coeff::new(ratio, BigRational::zero())));
            }
        }
        for col in &mut cols {
            col.sort_by_key(|(i, _)| *i);
        }
        TruncatedOperator {
            basis: self.basis.clone(),
            cols,
            valid_degree: self.valid_degree,
            shift: (-self.shift.1, -self.shift.0),
        }
    }

    /// `[self, other] = self other - other self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    /// Exact equality of matrices (ignores validity metadata).
    pub fn matrix_eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.basis, &other.basis) && self.cols == other.cols
    }

    /// Exact equality restricted to rows and columns of degree at most `v`.
    pub fn block_eq(&self, other: &Self, v: i64) -> bool {
        let n = self.basis.count_up_to(v);
        (0..n).all(|j| {
            let a: Vec<_> = self.cols[j].iter().filter(|(i, _)| *i < n).collect();
            let b: Vec<_> = other.cols[j].iter().filter(|(i, _)| *i < n).collect();
            a == b
        })
    }

    pub fn is_hermitian(&self) -> bool {
        self.matrix_eq(&self.adjoint())
    }

    /// Entries of `D^{1/2} A D^{-1/2}` (orthonormal frame) in the valid block,
    /// as `(row, col, value)` triples.
    pub fn orthonormal_triplets(&self) -> Vec<(usize, usize, Complex64)> {
        let n = self.valid_dimension();
        let norms: Vec<f64> = (0..n).map(|i| to_f64(&self.basis.element(i).norm_sq)).collect();
        let mut out = Vec::new();
        for (j, col) in self.cols.iter().enumerate().take(n) {
            for (i, x) in col {
                if *i < n {
                    out.push((*i, j, coeff_to_c64(x) * (norms[*i] / norms[j]).sqrt()));
                }
            }
        }
        out
    }

    /// Dense orthonormal-frame matrix of the valid block.
    pub fn to_dense_orthonormal(&self) -> nalgebra::DMatrix<Complex64> {
        let n = self.valid_dimension();
        let mut m = nalgebra::DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for (i, j, v) in self.orthonormal_triplets() {
            m[(i, j)] = v;
        }
        m
    }
}
