use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense complex square matrix.
#[derive(Clone, PartialEq)]
pub struct SquareMatrixC {
    m: DMatrix<C64>,
}

impl SquareMatrixC {
    pub fn zeros(dim: usize) -> Self {
        Self {
            m: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self {
            m: DMatrix::from_fn(dim, dim, f),
        }
    }

    pub fn from_diag(d: &[C64]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i] } else { C64::new(0.0, 0.0) })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidParameter("empty matrix".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("matrix is not square".into()));
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_nalgebra(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::InvalidParameter(format!(
                "expected a non-empty square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self { m })
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_nalgebra(self) -> DMatrix<C64> {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.m[(i, j)] = v;
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.m[(i, j)]).collect())
            .collect()
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    pub fn det(&self) -> C64 {
        self.m.determinant()
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn transpose(&self) -> Self {
        Self { m: self.m.transpose() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { m: &self.m * s }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Induced 1-norm (max column sum), used for exponential scaling.
    pub fn norm1(&self) -> f64 {
        (0..self.dim())
            .map(|j| (0..self.dim()).map(|i| self.m[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn inverse(&self) -> Result<Self> {
        self.m
            .clone()
            .try_inverse()
            .map(|m| Self { m })
            .ok_or_else(|| Error::Numerical("singular matrix".into()))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            m: self.m.kronecker(&other.m),
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self - &self.adjoint()).norm() <= tol * (1.0 + self.norm())
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        (self + &self.adjoint()).norm() <= tol * (1.0 + self.norm())
    }

    pub fn is_normal(&self, tol: f64) -> bool {
        let a = self.adjoint();
        (&(self * &a) - &(&a * self)).norm() <= tol * (1.0 + self.norm() * self.norm())
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (self - other).norm()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.m[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn powi(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::identity(self.dim());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Eigenvalues via the complex Schur form, sorted by (re, im).
    pub fn eigenvalues(&self) -> Vec<C64> {
        let t = nalgebra::Schur::new(self.m.clone()).unpack().1;
        let mut ev: Vec<C64> = (0..self.dim()).map(|i| t[(i, i)]).collect();
        sort_complex(&mut ev);
        ev
    }

    /// Eigen-decomposition of a Hermitian matrix: real eigenvalues
    /// ascending, with the unitary whose columns are the eigenvectors.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, Self) {
        let herm = (&self.m + self.m.adjoint()) * C64::new(0.5, 0.0);
        let eig = nalgebra::SymmetricEigen::new(herm);
        let mut idx: Vec<usize> = (0..self.dim()).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vecs = DMatrix::from_fn(self.dim(), self.dim(), |r, k| eig.eigenvectors[(r, idx[k])]);
        (vals, Self { m: vecs })
    }

    /// Complex Schur decomposition `M = Q T Q^†`.
    pub fn schur(&self) -> (Self, Self) {
        let (q, t) = nalgebra::Schur::new(self.m.clone()).unpack();
        (Self { m: q }, Self { m: t })
    }
}

/// Sort complex numbers by real part then imaginary part.
pub fn sort_complex(v: &mut [C64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Greedy matching distance between two eigenvalue multisets: the largest
/// distance from each element of `a` to its nearest unused element of `b`.
pub fn spectrum_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("equal lengths");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

impl fmt::Debug for SquareMatrixC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SquareMatrixC({}x{})", self.dim(), self.dim())?;
        for r in self.rows() {
            let cells: Vec<String> = r.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Mul for &SquareMatrixC {
    type Output = SquareMatrixC;
    fn mul(self, rhs: &SquareMatrixC) -> SquareMatrixC {
        SquareMatrixC { m: &self.m * &rhs.m }
    }
}

impl Mul for SquareMatrixC {
    type Output = SquareMatrixC;
    fn mul(self, rhs: SquareMatrixC) -> SquareMatrixC {
        &self * &rhs
    }
}

impl Add for &SquareMatrixC {
    type Output = SquareMatrixC;
    fn add(self, rhs: &SquareMatrixC) -> SquareMatrixC {
        SquareMatrixC { m: &self.m + &rhs.m }
    }
}

impl Add for SquareMatrixC {
    type Output = SquareMatrixC;
    fn add(self, rhs: SquareMatrixC) -> SquareMatrixC {
        &self + &rhs
    }
}

impl Sub for &SquareMatrixC {
    type Output = SquareMatrixC;
    fn sub(self, rhs: &SquareMatrixC) -> SquareMatrixC {
        SquareMatrixC { m: &self.m - &rhs.m }
    }
}

impl Sub for SquareMatrixC {
    type Output = SquareMatrixC;
    fn sub(self, rhs: SquareMatrixC) -> SquareMatrixC {
        &self - &rhs
    }
}

impl Neg for &SquareMatrixC {
    type Output = SquareMatrixC;
    fn neg(self) -> SquareMatrixC {
        SquareMatrixC { m: -self.m.clone() }
    }
}

/// Row-major `[[re, im], ...]` rows.
impl Serialize for SquareMatrixC {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SquareMatrixC {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let rows: Vec<Vec<C64>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|[a, b]| C64::new(a, b)).collect())
            .collect();
        SquareMatrixC::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}
