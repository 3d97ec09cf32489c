//! Dense complex linear algebra on small matrices.
//!
//! Storage is row-major. Tensor products use big-endian subsystem ordering:
//! the first factor is the most significant index.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar type used for every matrix entry.
pub type ComplexScalar = Complex64;

/// Tolerance for Hermiticity, positivity and trace checks.
pub const HERMITIAN_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Dense rectangular complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from a row-major entry buffer, rejecting non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::BadLength {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::BadLength {
                expected: r * c,
                found: rows.iter().map(Vec::len).sum(),
            });
        }
        Self::new(r, c, rows.concat())
    }

    /// Builds a matrix from nested rows of real numbers.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_vec_unchecked(rows, cols, vec![ZERO; rows * cols])
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let diag: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diagonal(&diag)
    }

    /// Column vector `v` as a `len x 1` matrix.
    pub fn column_vector(v: &[Complex64]) -> Self {
        Self::from_vec_unchecked(v.len(), 1, v.to_vec())
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let mut data = Vec::with_capacity(u.len() * v.len());
        for a in u {
            for b in v {
                data.push(a * b.conj());
            }
        }
        Self::from_vec_unchecked(u.len(), v.len(), data)
    }

    /// Projector `|k><k|` onto the `k`-th basis vector of a `dim`-dimensional space.
    pub fn basis_projector(dim: usize, k: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        m[(k, k)] = ONE;
        m
    }

    /// The single-qubit Hadamard gate.
    pub fn hadamard() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real_rows(&[vec![s, s], vec![s, -s]]).expect("static matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        self.diagonal().into_iter().sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_vec_unchecked(self.rows, self.cols, self.data.iter().map(|z| z * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Matrix product, or `None` when inner dimensions differ.
    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        if self.cols != other.rows {
            return None;
        }
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * p];
        for i in 0..n {
            let out_row = &mut out[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == ZERO {
                    continue;
                }
                let other_row = &other.data[k * p..(k + 1) * p];
                for (o, b) in out_row.iter_mut().zip(other_row) {
                    *o += a * b;
                }
            }
        }
        Some(Self::from_vec_unchecked(n, p, out))
    }

    /// `self * rho * self^dagger`.
    pub fn conjugate(&self, rho: &Self) -> Self {
        let left = self * rho;
        left.mul_adjoint(self)
    }

    /// `self * other^dagger` without materialising the adjoint.
    pub fn mul_adjoint(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "mul_adjoint: inner dimension mismatch");
        let (n, m, p) = (self.rows, self.cols, other.rows);
        let mut out = vec![ZERO; n * p];
        for i in 0..n {
            let a = &self.data[i * m..(i + 1) * m];
            for j in 0..p {
                let b = &other.data[j * m..(j + 1) * m];
                out[i * p + j] = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
            }
        }
        Self::from_vec_unchecked(n, p, out)
    }

    /// `self^dagger * other` without materialising the adjoint.
    pub fn adjoint_mul(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "adjoint_mul: inner dimension mismatch");
        let (n, m, p) = (self.cols, self.rows, other.cols);
        let mut out = vec![ZERO; n * p];
        for k in 0..m {
            for i in 0..n {
                let a = self.data[k * n + i].conj();
                if a == ZERO {
                    continue;
                }
                let b = &other.data[k * p..(k + 1) * p];
                for (o, y) in out[i * p..(i + 1) * p].iter_mut().zip(b) {
                    *o += a * y;
                }
            }
        }
        Self::from_vec_unchecked(n, p, out)
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entrywise `max |m - m^dagger|`, infinite for non-square input.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(m + m^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.rows;
        let mut out = self.clone();
        for i in 0..n {
            out[(i, i)] = Complex64::new(self[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let z = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        out
    }

    /// Entrywise `max |m^dagger m - I|`; infinite for non-square input.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.adjoint_mul(self).max_abs_diff(&Self::identity(self.rows))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.checked_mul(rhs).unwrap_or_else(|| {
            panic!(
                "matrix product dimension mismatch: {}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )
        })
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        ComplexMatrix::from_vec_unchecked(self.rows, self.cols, data)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        ComplexMatrix::from_vec_unchecked(self.rows, self.cols, data)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Local dimensions of a multipartite system, most significant factor first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsystemShape {
    dims: Vec<usize>,
}

impl SubsystemShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::BadSubsystems(format!(
                "local dimensions must be a nonempty list of positive integers, got {dims:?}"
            )));
        }
        Ok(Self { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Product of the local dimensions.
    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Dimension of the subsystems selected by `indices`.
    pub fn dim_of(&self, indices: &[usize]) -> usize {
        indices.iter().map(|&i| self.dims[i]).product()
    }

    /// Indices in `0..len` not contained in `indices`, in increasing order.
    pub fn complement(&self, indices: &[usize]) -> Vec<usize> {
        (0..self.dims.len()).filter(|i| !indices.contains(i)).collect()
    }

    fn check_indices(&self, indices: &[usize]) -> Result<()> {
        for (pos, &i) in indices.iter().enumerate() {
            if i >= self.dims.len() {
                return Err(Error::BadSubsystems(format!(
                    "subsystem index {i} out of range for {} factors",
                    self.dims.len()
                )));
            }
            if indices[..pos].contains(&i) {
                return Err(Error::BadSubsystems(format!("subsystem index {i} repeated")));
            }
        }
        Ok(())
    }
}

/// Kronecker product: `(a (x) b)[i*rb + k, j*cb + l] = a[i,j] * b[k,l]`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca, rb, cb) = (a.rows, a.cols, b.rows, b.cols);
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let x = a[(i, j)];
            if x == ZERO {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = x * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Tensor product of a nonempty list of matrices, left to right.
pub fn tensor_all<'a, I>(factors: I) -> Option<ComplexMatrix>
where
    I: IntoIterator<Item = &'a ComplexMatrix>,
{
    let mut iter = factors.into_iter();
    let first = iter.next()?.clone();
    Some(iter.fold(first, |acc, m| tensor(&acc, m)))
}

/// Splits a flat index into per-subsystem digits (big-endian).
pub(crate) fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

/// Joins per-subsystem digits back into a flat index (big-endian).
pub(crate) fn flat_index(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// Partial trace keeping the subsystems listed in `keep`.
///
/// The kept factors appear in the output in their original order.
pub fn partial_trace(m: &ComplexMatrix, shape: &SubsystemShape, keep: &[usize]) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    if shape.total() != n {
        return Err(Error::ShapeMismatch {
            dims: shape.dims.clone(),
            dim: n,
        });
    }
    if keep.is_empty() {
        return Err(Error::BadSubsystems("keep set is empty".into()));
    }
    shape.check_indices(keep)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    Ok(trace_out_unchecked(m, shape.dims(), &kept))
}

/// Partial trace keeping the (sorted, valid) factors in `kept`; an empty
/// list yields the 1x1 full trace.
pub(crate) fn trace_out_unchecked(m: &ComplexMatrix, dims: &[usize], kept: &[usize]) -> ComplexMatrix {
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&i| dims[i]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = traced_dims.iter().product();

    // full_index[kept_flat][traced_flat]
    let mut lookup = vec![0usize; dk * dt];
    let mut full_digits = vec![0usize; dims.len()];
    for a in 0..dk {
        let kd = digits(a, &kept_dims);
        for (&slot, &x) in kept.iter().zip(&kd) {
            full_digits[slot] = x;
        }
        for t in 0..dt {
            let td = digits(t, &traced_dims);
            for (&slot, &x) in traced.iter().zip(&td) {
                full_digits[slot] = x;
            }
            lookup[a * dt + t] = flat_index(&full_digits, dims);
        }
    }

    let mut out = ComplexMatrix::zeros(dk, dk);
    for a in 0..dk {
        for b in 0..dk {
            let mut acc = ZERO;
            for t in 0..dt {
                acc += m[(lookup[a * dt + t], lookup[b * dt + t])];
            }
            out[(a, b)] = acc;
        }
    }
    out
}

/// Spectrum and eigenvectors of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of the pivot,
/// then applies a real Givens rotation that zeroes it.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = m.require_square()?;
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let frob: f64 = a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = (f64::EPSILON * frob).max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let bn = b.norm();
                if bn <= threshold * 1e-3 {
                    continue;
                }
                let phase = b / bn;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * bn);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let g00 = Complex64::new(c, 0.0);
                let g01 = Complex64::new(s, 0.0);
                let g10 = -phase.conj() * s;
                let g11 = phase.conj() * c;

                // a <- a * G
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g00 + akq * g10;
                    a[(k, q)] = akp * g01 + akq * g11;
                }
                // a <- G^dagger * a
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g00.conj() * apk + g10.conj() * aqk;
                    a[(q, k)] = g01.conj() * apk + g11.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                // v <- v * G
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g00 + vkq * g10;
                    v[(k, q)] = vkp * g01 + vkq * g11;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, new_col)] = v[(k, old_col)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Real spectrum of a Hermitian matrix, sorted descending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(m).map(|e| e.values)
}

/// Induced 1->1 norm: largest absolute column sum.
pub fn one_to_one_norm(m: &ComplexMatrix) -> f64 {
    (0..m.cols)
        .map(|j| (0..m.rows).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Unitary factor of the polar decomposition `m = W P`, computed as
/// `W = m (m^dagger m)^{-1/2}`.
pub fn nearest_unitary(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    let gram = m.adjoint_mul(m).hermitian_part();
    let eig = hermitian_eigen(&gram)?;
    let largest = eig.values.first().copied().unwrap_or(0.0);
    let smallest = eig.values.last().copied().unwrap_or(0.0);
    if largest <= 0.0 || smallest <= largest * 1e-24 {
        return Err(Error::Singular);
    }
    let inv_sqrt: Vec<Complex64> = eig
        .values
        .iter()
        .map(|&l| Complex64::new(1.0 / l.sqrt(), 0.0))
        .collect();
    let vecs = &eig.vectors;
    let scaled = vecs * &ComplexMatrix::from_diagonal(&inv_sqrt);
    let p_inv = scaled.mul_adjoint(vecs);
    let mut w = m * &p_inv;
    // One Newton-Schulz step, W <- W (3I - W^dagger W) / 2.
    let wtw = w.adjoint_mul(&w);
    let correction = &ComplexMatrix::identity(n).scale_real(1.5) - &wtw.scale_real(0.5);
    w = &w * &correction;
    Ok(w)
}

/// Orthonormalizes the columns of `m` (modified Gram-Schmidt, applied twice).
/// Returns `None` when the columns are numerically dependent.
pub(crate) fn orthonormalize_columns(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let (rows, cols) = (m.rows, m.cols);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = m.column(j);
        let original = norm(&v);
        if original == 0.0 {
            return None;
        }
        for _pass in 0..2 {
            for q in &basis {
                let overlap = inner(q, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= overlap * y;
                }
            }
        }
        let nv = norm(&v);
        if nv <= original * 1e-10 {
            return None;
        }
        v.iter_mut().for_each(|x| *x /= nv);
        basis.push(v);
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for (j, col) in basis.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            out[(i, j)] = z;
        }
    }
    Some(out)
}

/// `<a|b>`.
pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
