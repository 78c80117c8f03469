//! Dense symmetric matrices, a cyclic Jacobi eigensolver and the spectral
//! functional calculus on SPD matrices.
//!
//! Dimensions are small (at most 64), so everything is stored as a flat
//! row-major `Vec<f64>` and all kernels are straightforward loops. Every
//! operation that produces a symmetric matrix symmetrizes its output.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 64;

/// Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Stop once the off-diagonal Frobenius norm falls below this fraction of `‖A‖_F`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Largest condition number accepted by the power functions.
pub const MAX_CONDITION: f64 = 1e12;

/// Relative asymmetry tolerated when parsing external matrices.
pub const PARSE_SYMMETRY_TOL: f64 = 1e-9;

/// General square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        check_shape(dim, &data)?;
        Ok(SquareMatrix { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        SquareMatrix { dim, data: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let data: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(dim, data)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> SquareMatrix {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    pub fn matmul(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        same_dim(self.dim, other.dim)?;
        Ok(SquareMatrix { dim: self.dim, data: matmul(self.dim, &self.data, &other.data) })
    }

    pub fn scaled(&self, s: f64) -> SquareMatrix {
        SquareMatrix { dim: self.dim, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.data)
    }

    /// `(M + Mᵀ)/2`
    pub fn symmetric_part(&self) -> SymMatrix {
        SymMatrix::symmetrized(self.dim, self.data.clone())
    }
}

/// Real symmetric matrix. Construction symmetrizes the input.
#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[f64]> = self.data.chunks(self.dim.max(1)).collect();
        f.debug_struct("SymMatrix").field("dim", &self.dim).field("rows", &rows).finish()
    }
}

impl SymMatrix {
    /// Symmetrizes `data` and rejects non-finite entries.
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        check_shape(dim, &data)?;
        if let Some(&v) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite { context: "matrix entry", value: v });
        }
        Ok(Self::symmetrized(dim, data))
    }

    /// Like [`SymMatrix::new`] but first rejects asymmetry above
    /// `1e-9 · max|a_ij|`.
    pub fn new_checked(dim: usize, data: Vec<f64>) -> Result<Self> {
        check_shape(dim, &data)?;
        let max_entry = data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let limit = PARSE_SYMMETRY_TOL * max_entry;
        let mut asym = 0.0f64;
        for i in 0..dim {
            for j in (i + 1)..dim {
                asym = asym.max((data[i * dim + j] - data[j * dim + i]).abs());
            }
        }
        if asym > limit {
            return Err(Error::NotSymmetric { asymmetry: asym, limit });
        }
        Self::new(dim, data)
    }

    pub(crate) fn symmetrized(dim: usize, mut data: Vec<f64>) -> Self {
        for i in 0..dim {
            for j in (i + 1)..dim {
                let v = 0.5 * (data[i * dim + j] + data[j * dim + i]);
                data[i * dim + j] = v;
                data[j * dim + i] = v;
            }
        }
        SymMatrix { dim, data }
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::BadShape { dim, len: r.len() * dim, expected: dim * dim });
        }
        Self::new(dim, rows.iter().flat_map(|r| r.iter().copied()).collect())
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diag(&vec![1.0; dim])
    }

    pub fn zeros(dim: usize) -> Self {
        SymMatrix { dim, data: vec![0.0; dim * dim] }
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn as_square(&self) -> SquareMatrix {
        SquareMatrix { dim: self.dim, data: self.data.clone() }
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        same_dim(self.dim, other.dim)?;
        Ok(SymMatrix { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        same_dim(self.dim, other.dim)?;
        Ok(SymMatrix { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() })
    }

    pub fn scaled(&self, s: f64) -> SymMatrix {
        SymMatrix { dim: self.dim, data: self.data.iter().map(|v| v * s).collect() }
    }

    /// `(1-t)·self + t·other`
    pub fn lerp(&self, other: &SymMatrix, t: f64) -> Result<SymMatrix> {
        same_dim(self.dim, other.dim)?;
        Ok(SymMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| (1.0 - t) * a + t * b).collect(),
        })
    }

    /// Plain product; symmetric only when the factors commute.
    pub fn matmul(&self, other: &SymMatrix) -> Result<SquareMatrix> {
        same_dim(self.dim, other.dim)?;
        Ok(SquareMatrix { dim: self.dim, data: matmul(self.dim, &self.data, &other.data) })
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.data)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn eig(&self) -> Result<EigPair> {
        eig_sym(self)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eig_sym(self)?.values[0])
    }

    /// `max |λ|`
    pub fn spectral_norm(&self) -> Result<f64> {
        let e = eig_sym(self)?;
        Ok(e.values.iter().fold(0.0f64, |m, v| m.max(v.abs())))
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson { dim: self.dim, data: self.data.clone() }
    }
}

/// Symmetric positive-definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix(SymMatrix);

impl SpdMatrix {
    /// Accepts `m` if `λ_min > 1e-12 · λ_max` and `λ_min > 0`.
    pub fn new(m: SymMatrix) -> Result<Self> {
        let e = eig_sym(&m)?;
        let (min, max) = (e.min(), e.max());
        if !(min > 0.0 && min > max / MAX_CONDITION) {
            return Err(Error::NotPositiveDefinite { min, max });
        }
        Ok(SpdMatrix(m))
    }

    /// Wraps a matrix known to be SPD by construction (e.g. a mean of SPD
    /// matrices); skips the eigenvalue check.
    pub(crate) fn assume(m: SymMatrix) -> Self {
        SpdMatrix(m)
    }

    pub fn identity(dim: usize) -> Self {
        SpdMatrix(SymMatrix::identity(dim))
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        Self::new(SymMatrix::from_diag(diag))
    }

    pub fn as_sym(&self) -> &SymMatrix {
        &self.0
    }

    pub fn into_sym(self) -> SymMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn scaled(&self, s: f64) -> Result<SpdMatrix> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::NotPositive(s));
        }
        Ok(SpdMatrix(self.0.scaled(s)))
    }

    pub fn inverse(&self) -> Result<SpdMatrix> {
        power_spd(self, -1.0)
    }
}

impl std::ops::Deref for SpdMatrix {
    type Target = SymMatrix;
    fn deref(&self) -> &SymMatrix {
        &self.0
    }
}

impl AsRef<SymMatrix> for SpdMatrix {
    fn as_ref(&self) -> &SymMatrix {
        &self.0
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigPair {
    pub values: Vec<f64>,
    pub vectors: SquareMatrix,
}

impl EigPair {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn condition(&self) -> f64 {
        self.max() / self.min()
    }

    /// `Q diag(f(λ)) Qᵀ`, failing on the first eigenvalue where `f` is not finite.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Result<SymMatrix> {
        let fv = self
            .values
            .iter()
            .map(|&l| {
                let v = f(l);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NonFiniteSpectral { eigenvalue: l, value: v })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(weighted_outer_sum(&self.vectors, &fv))
    }

    pub fn reconstruct(&self) -> SymMatrix {
        weighted_outer_sum(&self.vectors, &self.values)
    }
}

/// `Σ_k c_k w_k w_kᵀ` over the columns `w_k` of `w`.
pub(crate) fn weighted_outer_sum(w: &SquareMatrix, coeffs: &[f64]) -> SymMatrix {
    let n = w.dim;
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            for (k, &c) in coeffs.iter().enumerate() {
                acc += c * w.data[i * n + k] * w.data[j * n + k];
            }
            out[i * n + j] = acc;
            out[j * n + i] = acc;
        }
    }
    SymMatrix { dim: n, data: out }
}

/// Cyclic Jacobi eigendecomposition.
pub fn eig_sym(m: &SymMatrix) -> Result<EigPair> {
    let n = m.dim;
    let mut a = m.data.clone();
    let mut v = SquareMatrix::identity(n).data;
    let norm = frobenius(&a);
    let threshold = OFF_DIAGONAL_TOL * norm;

    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    let mut current = off(&a);
    while current > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off: current });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau.is_infinite() { 0.0 } else { tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt()) };
                if t == 0.0 {
                    continue;
                }
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        sweeps += 1;
        current = off(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = SquareMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors.data[k * n + col] = v[k * n + src];
        }
    }
    Ok(EigPair { values, vectors })
}

/// `f(A)` through the eigendecomposition of `A`.
pub fn apply_spectral<F: Fn(f64) -> f64>(f: F, a: &SymMatrix) -> Result<SymMatrix> {
    eig_sym(a)?.map(f)
}

fn guarded_eig(a: &SpdMatrix) -> Result<EigPair> {
    let e = eig_sym(a)?;
    if !(e.min() > 0.0) {
        return Err(Error::NotPositiveDefinite { min: e.min(), max: e.max() });
    }
    let cond = e.condition();
    if cond > MAX_CONDITION {
        return Err(Error::IllConditioned { cond });
    }
    Ok(e)
}

/// `A^s` for real `s`.
pub fn power_spd(a: &SpdMatrix, s: f64) -> Result<SpdMatrix> {
    let e = guarded_eig(a)?;
    if s == 0.0 {
        return Ok(SpdMatrix::identity(a.dim()));
    }
    Ok(SpdMatrix(e.map(|l| l.powf(s))?))
}

pub fn sqrt_spd(a: &SpdMatrix) -> Result<SpdMatrix> {
    let e = guarded_eig(a)?;
    Ok(SpdMatrix(e.map(f64::sqrt)?))
}

pub fn inv_sqrt_spd(a: &SpdMatrix) -> Result<SpdMatrix> {
    let e = guarded_eig(a)?;
    Ok(SpdMatrix(e.map(|l| 1.0 / l.sqrt())?))
}

/// `A^{1/2}` and `A^{-1/2}` from a single decomposition.
pub fn sqrt_and_inv_sqrt(a: &SpdMatrix) -> Result<(SpdMatrix, SpdMatrix)> {
    let e = guarded_eig(a)?;
    Ok((SpdMatrix(e.map(f64::sqrt)?), SpdMatrix(e.map(|l| 1.0 / l.sqrt())?)))
}

/// `Cᵀ A C`, symmetrized.
pub fn conjugate(c: &SquareMatrix, a: &SymMatrix) -> Result<SymMatrix> {
    same_dim(c.dim, a.dim)?;
    let n = c.dim;
    let ac = matmul(n, &a.data, &c.data);
    let ct = c.transpose();
    Ok(SymMatrix::symmetrized(n, matmul(n, &ct.data, &ac)))
}

/// `X Y X` for symmetric `X`, `Y`, symmetrized.
pub fn sandwich(x: &SymMatrix, y: &SymMatrix) -> Result<SymMatrix> {
    same_dim(x.dim, y.dim)?;
    let n = x.dim;
    let xy = matmul(n, &x.data, &y.data);
    Ok(SymMatrix::symmetrized(n, matmul(n, &xy, &x.data)))
}

/// The matrix file schema `{"dim": n, "data": [n² row-major numbers]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub data: Vec<f64>,
}

impl MatrixJson {
    pub fn into_sym(self) -> Result<SymMatrix> {
        SymMatrix::new_checked(self.dim, self.data)
    }

    pub fn into_spd(self) -> Result<SpdMatrix> {
        SpdMatrix::new(self.into_sym()?)
    }
}

/// Parses the matrix schema; errors carry serde's line and column.
pub fn parse_matrix_json(text: &str) -> Result<SymMatrix> {
    let raw: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    raw.into_sym()
}

pub fn parse_spd_json(text: &str) -> Result<SpdMatrix> {
    SpdMatrix::new(parse_matrix_json(text)?)
}

fn check_shape(dim: usize, data: &[f64]) -> Result<()> {
    if dim == 0 || dim > MAX_DIM || data.len() != dim * dim {
        return Err(Error::BadShape { dim, len: data.len(), expected: dim * dim });
    }
    Ok(())
}

fn same_dim(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

pub(crate) fn matmul(n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

fn frobenius(data: &[f64]) -> f64 {
    data.iter().map(|v| v * v).sum::<f64>().sqrt()
}
