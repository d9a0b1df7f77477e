//! Dense complex linear algebra on small square matrices.
//!
//! Everything here works on [`ComplexMatrix`], a row-major `dim × dim` array of
//! [`C64`]. Hermitian eigenproblems are solved with cyclic complex Jacobi
//! rotations, which are accurate to a few ulps on the matrix sizes this crate
//! deals with and give deterministic eigenvectors.
//!
//! Tolerances are relative to the Frobenius norm with a floor of one:
//! a check `‖X‖_F ≤ tol` is applied as `‖X‖_F ≤ tol · max(1, scale)`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = num_complex::Complex64;

/// Hermiticity tolerance applied to inputs of the eigen routines.
pub const HERMITIAN_TOL: f64 = 1e-8;
/// Eigenvalues in `[-PSD_TOL, 0)` are roundoff and are clipped to zero.
pub const PSD_TOL: f64 = 1e-8;
/// Default relative singular-value cutoff for support projectors.
pub const SUPPORT_TOL: f64 = 1e-8;

const POLAR_RANK_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 64;

#[inline]
pub(crate) fn scale_floor(x: f64) -> f64 {
    x.max(1.0)
}

/// A dense square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries. Fails unless the length is a
    /// positive perfect square and every entry is finite.
    pub fn from_vec(data: Vec<C64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != data.len() {
            return Err(Error::NotSquare(data.len()));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare(rows.iter().map(Vec::len).sum()));
        }
        Self::from_vec(rows.concat())
    }

    /// Convenience constructor for real matrices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// `|u⟩⟨v|`
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    /// `|v⟩⟨v|`
    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `(M + M†) / 2`
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// `‖M − M†‖_F`
    pub fn hermiticity_residual(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `A X A†`
    pub fn conjugate(&self, x: &ComplexMatrix) -> Self {
        &(self * x) * &self.adjoint()
    }

    /// `M v`
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let row = &self.data[i * self.dim..(i + 1) * self.dim];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// `⟨v|M|v⟩`, real part.
    pub fn expectation(&self, v: &[C64]) -> f64 {
        inner(v, &self.apply(v)).re
    }

    /// `Tr[self · other]` without forming the product.
    pub fn trace_product(&self, other: &ComplexMatrix) -> C64 {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn check_same_dim(&self, other: &ComplexMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let brow = &rhs.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    rows: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.dim == 0 || j.rows.len() != j.dim || j.rows.iter().any(|r| r.len() != j.dim) {
            return Err(Error::NotSquare(j.rows.iter().map(Vec::len).sum()));
        }
        Self::from_vec(
            j.rows
                .iter()
                .flatten()
                .map(|&[re, im]| C64::new(re, im))
                .collect(),
        )
    }
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        MatrixJson {
            dim: m.dim,
            rows: m
                .data
                .chunks(m.dim)
                .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}

/// `⟨u|v⟩`
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vector_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigen-decomposition `M = V diag(λ) V†` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigensystem {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigensystem {
    /// `V f(diag(λ)) V†`
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.dim();
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| v[(i, k)] * v[(j, k)].conj() * fl[k]).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let r = m.hermiticity_residual();
    if r > HERMITIAN_TOL * scale_floor(m.frobenius_norm()) {
        return Err(Error::NotHermitian(r));
    }
    Ok(())
}

/// One-sided cyclic Jacobi on a Hermitian working copy. Returns the diagonal
/// (unsorted) and, when requested, the accumulated rotations.
fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));

    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let g = 100.0 * mag;
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                let phase = apq / mag;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta.is_infinite() {
                    1.0 / (2.0 * theta)
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J = [[c, s·e^{iφ}], [−s·e^{−iφ}, c]] on (p, q); A ← J† A J.
                let jpq = phase * s;
                let jqp = -phase.conj() * s;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * c;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * jqp.conj();
                    a[(q, k)] = apk * jpq.conj() + aqk * c;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c + vkq * jqp;
                        v[(k, q)] = vkp * jpq + vkq * c;
                    }
                }
            }
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigensystem> {
    check_hermitian(m)?;
    let n = m.dim();
    let (diag, v) = jacobi(m, true);
    let v = v.expect("eigenvectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigensystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Ascending eigenvalues of a Hermitian matrix, skipping eigenvector accumulation.
pub fn eigvals_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let (mut diag, _) = jacobi(m, false);
    diag.sort_by(f64::total_cmp);
    Ok(diag)
}

fn clip_psd(eigenvalues: &[f64], scale: f64) -> Result<Vec<f64>> {
    let floor = -PSD_TOL * scale_floor(scale);
    eigenvalues
        .iter()
        .map(|&l| {
            if l < floor {
                Err(Error::NotPsd(l))
            } else {
                Ok(l.max(0.0))
            }
        })
        .collect()
}

/// Principal square root of a positive semidefinite matrix.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let es = eig_hermitian(m)?;
    let clipped = clip_psd(&es.eigenvalues, m.frobenius_norm())?;
    let es = HermitianEigensystem {
        eigenvalues: clipped,
        eigenvectors: es.eigenvectors,
    };
    Ok(es.map_spectrum(f64::sqrt))
}

/// Pseudo-inverse square root `M^{+1/2}`: eigenvalues at or below
/// `rel_tol · λ_max` are treated as zero.
pub fn inv_sqrt_psd(m: &ComplexMatrix, rel_tol: f64) -> Result<ComplexMatrix> {
    let es = eig_hermitian(m)?;
    let clipped = clip_psd(&es.eigenvalues, m.frobenius_norm())?;
    let max = clipped.last().copied().unwrap_or(0.0);
    if max <= 0.0 {
        return Err(Error::ZeroOperator);
    }
    let es = HermitianEigensystem {
        eigenvalues: clipped,
        eigenvectors: es.eigenvectors,
    };
    Ok(es.map_spectrum(|l| if l > rel_tol * max { 1.0 / l.sqrt() } else { 0.0 }))
}

/// Orthogonalizes `v` against `basis` (assumed orthonormal) twice, for stability.
fn orthogonalize(v: &mut [C64], basis: &[Vec<C64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = inner(b, v);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
}

/// Right singular system of `A` from one-sided (Hestenes) Jacobi: columns of
/// `A V` are made mutually orthogonal. Singular values come out ascending with
/// absolute accuracy near `ε · σ_max`, so small ones are not polluted by
/// squaring as they would be through `A†A`.
struct RightSvd {
    sigma: Vec<f64>,
    /// `A V`; column `k` has norm `sigma[k]`.
    av: ComplexMatrix,
    v: ComplexMatrix,
}

fn right_svd(a: &ComplexMatrix) -> RightSvd {
    let n = a.dim();
    let mut b = a.clone();
    let mut v = ComplexMatrix::identity(n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = C64::new(0.0, 0.0);
                for k in 0..n {
                    alpha += b[(k, p)].norm_sqr();
                    beta += b[(k, q)].norm_sqr();
                    gamma += b[(k, p)].conj() * b[(k, q)];
                }
                let mag = gamma.norm();
                if mag == 0.0 || mag <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / mag;
                let theta = (beta - alpha) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let jpq = phase * s;
                let jqp = -phase.conj() * s;
                for m in [&mut b, &mut v] {
                    for k in 0..n {
                        let xp = m[(k, p)];
                        let xq = m[(k, q)];
                        m[(k, p)] = xp * c + xq * jqp;
                        m[(k, q)] = xp * jpq + xq * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|k| vector_norm(&b.column(k))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[i].total_cmp(&norms[j]));
    RightSvd {
        sigma: order.iter().map(|&k| norms[k]).collect(),
        av: ComplexMatrix::from_fn(n, |i, j| b[(i, order[j])]),
        v: ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]),
    }
}

/// Singular values of `A`, ascending.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    right_svd(a).sigma
}

/// Polar decomposition `A = U P` with `P = √(A†A)` and `U` unitary.
///
/// Where `A` is rank deficient, `U` maps the kernel of `P` onto the
/// orthogonal complement of the range of `A`, completed by Gram–Schmidt over
/// the standard basis in index order.
pub fn polar_decompose(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.dim();
    let svd = right_svd(a);
    let sigma_max = svd.sigma.last().copied().unwrap_or(0.0);

    // Retained singular directions, largest first.
    let mut left: Vec<Option<Vec<C64>>> = vec![None; n];
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(n);
    for k in (0..n).rev() {
        if sigma_max > 0.0 && svd.sigma[k] > POLAR_RANK_TOL * sigma_max {
            let mut u = svd.av.column(k);
            orthogonalize(&mut u, &basis);
            let norm = vector_norm(&u);
            u.iter_mut().for_each(|z| *z /= norm);
            basis.push(u.clone());
            left[k] = Some(u);
        }
    }
    // Complete on the kernel, kernel directions in ascending index order.
    let mut candidates = 0..n;
    for slot in left.iter_mut().filter(|s| s.is_none()) {
        for e in candidates.by_ref() {
            let mut u = vec![C64::new(0.0, 0.0); n];
            u[e] = C64::new(1.0, 0.0);
            orthogonalize(&mut u, &basis);
            let norm = vector_norm(&u);
            if norm > 1e-6 {
                u.iter_mut().for_each(|z| *z /= norm);
                basis.push(u.clone());
                *slot = Some(u);
                break;
            }
        }
    }

    let mut unitary = ComplexMatrix::zeros(n);
    for (k, u) in left.iter().enumerate() {
        let u = u.as_ref().expect("polar completion exhausted the basis");
        let v = svd.v.column(k);
        for i in 0..n {
            for j in 0..n {
                unitary[(i, j)] += u[i] * v[j].conj();
            }
        }
    }
    let es = HermitianEigensystem {
        eigenvalues: svd.sigma,
        eigenvectors: svd.v,
    };
    Ok((unitary, es.map_spectrum(|s| s)))
}

/// Projector onto the support of `A`: the span of right-singular vectors whose
/// singular value exceeds `tol · σ_max`.
pub fn support_projector(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("support tolerance {tol}")));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let svd = right_svd(a);
    let sigma_max = svd.sigma.last().copied().unwrap_or(0.0);
    if sigma_max <= 0.0 {
        return Err(Error::ZeroOperator);
    }
    let es = HermitianEigensystem {
        eigenvalues: svd.sigma,
        eigenvectors: svd.v,
    };
    Ok(es.map_spectrum(|s| if s > tol * sigma_max { 1.0 } else { 0.0 }))
}

/// Rank of a projector returned by [`support_projector`].
pub fn projector_rank(p: &ComplexMatrix) -> usize {
    p.trace().re.round() as usize
}

/// `‖AB − BA‖_F ≤ tol · max(1, ‖A‖_F‖B‖_F)`
pub fn commutes(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    assert_eq!(a.dim(), b.dim(), "dimension mismatch in commutator");
    let comm = &(a * b) - &(b * a);
    comm.frobenius_norm() <= tol * scale_floor(a.frobenius_norm() * b.frobenius_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn plus() -> Vec<C64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        vec![c(h), c(h)]
    }

    fn assert_close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) {
        let d = (a - b).frobenius_norm();
        assert!(d <= tol, "matrices differ by {d:e}\n{a:?}\n{b:?}");
    }

    #[test]
    fn eig_of_diagonal_is_sorted_permutation() {
        let es = eig_hermitian(&ComplexMatrix::from_diag(&[2.0, 1.0])).unwrap();
        assert_eq!(es.eigenvalues, vec![1.0, 2.0]);
        assert_close(
            &es.eigenvectors,
            &ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap(),
            0.0,
        );
    }

    #[test]
    fn eig_of_identity() {
        let es = eig_hermitian(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(es.eigenvalues, vec![1.0; 3]);
    }

    #[test]
    fn eig_of_two_state_average() {
        let m = ComplexMatrix::from_real_rows(&[&[0.75, 0.25], &[0.25, 0.25]]).unwrap();
        let es = eig_hermitian(&m).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(es.eigenvalues[0], (1.0 - r) / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(es.eigenvalues[1], (1.0 + r) / 2.0, epsilon = 1e-14);
        assert_close(&es.reconstruct(), &m, 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn eig_handles_complex_offdiagonals() {
        // σ_y has eigenvalues ±1.
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0), C64::new(0.0, -1.0)],
            vec![C64::new(0.0, 1.0), c(0.0)],
        ])
        .unwrap();
        let es = eig_hermitian(&m).unwrap();
        assert_abs_diff_eq!(es.eigenvalues[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(es.eigenvalues[1], 1.0, epsilon = 1e-15);
        assert_close(&es.reconstruct(), &m, 1e-14);
    }

    #[test]
    fn sqrt_examples() {
        let r = sqrt_psd(&ComplexMatrix::from_diag(&[4.0, 9.0])).unwrap();
        assert_close(&r, &ComplexMatrix::from_diag(&[2.0, 3.0]), 1e-14);

        let r = sqrt_psd(&ComplexMatrix::identity(2).scale(0.5)).unwrap();
        assert_close(&r, &ComplexMatrix::identity(2).scale(0.5f64.sqrt()), 1e-14);

        let p = ComplexMatrix::projector(&plus());
        assert_close(&sqrt_psd(&p).unwrap(), &p, 1e-14);
    }

    #[test]
    fn sqrt_clips_roundoff_and_rejects_negative() {
        let r = sqrt_psd(&ComplexMatrix::from_diag(&[1.0, -5e-9])).unwrap();
        assert_eq!(r[(1, 1)], c(0.0));
        assert!(matches!(
            sqrt_psd(&ComplexMatrix::from_diag(&[1.0, -1e-6])),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn sqrt_keeps_exact_zero_eigenvalue() {
        let r = sqrt_psd(&ComplexMatrix::from_diag(&[0.0, 0.3])).unwrap();
        let ev = eigvals_hermitian(&r).unwrap();
        assert_eq!(ev[0], 0.0);
    }

    #[test]
    fn polar_of_unitary_and_diagonal() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let hadamard = ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]).unwrap();
        let (u, p) = polar_decompose(&hadamard).unwrap();
        assert_close(&u, &hadamard, 1e-14);
        assert_close(&p, &ComplexMatrix::identity(2), 1e-14);

        let d = ComplexMatrix::from_diag(&[2.0, 3.0]);
        let (u, p) = polar_decompose(&d).unwrap();
        assert_close(&u, &ComplexMatrix::identity(2), 1e-14);
        assert_close(&p, &d, 1e-14);
    }

    #[test]
    fn polar_of_nilpotent_completes_kernel() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let (u, p) = polar_decompose(&a).unwrap();
        assert_close(&p, &ComplexMatrix::from_diag(&[0.0, 1.0]), 1e-14);
        assert_close(
            &u,
            &ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap(),
            1e-14,
        );
        assert_close(&(&u * &p), &a, 1e-14);
        assert_close(&(&u.adjoint() * &u), &ComplexMatrix::identity(2), 1e-14);
    }

    #[test]
    fn polar_of_zero_matrix_is_identity_completion() {
        let (u, p) = polar_decompose(&ComplexMatrix::zeros(3)).unwrap();
        assert_close(&u, &ComplexMatrix::identity(3), 0.0);
        assert_close(&p, &ComplexMatrix::zeros(3), 0.0);
    }

    #[test]
    fn support_examples() {
        let p = support_projector(&ComplexMatrix::from_diag(&[1.0, 0.0]), SUPPORT_TOL).unwrap();
        assert_close(&p, &ComplexMatrix::from_diag(&[1.0, 0.0]), 1e-14);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let hadamard = ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]).unwrap();
        let p = support_projector(&hadamard, SUPPORT_TOL).unwrap();
        assert_close(&p, &ComplexMatrix::identity(2), 1e-14);

        let a = ComplexMatrix::outer(&[c(1.0), c(0.0)], &plus());
        let p = support_projector(&a, SUPPORT_TOL).unwrap();
        assert_close(&p, &ComplexMatrix::projector(&plus()), 1e-14);
        assert_eq!(projector_rank(&p), 1);

        assert_eq!(
            support_projector(&ComplexMatrix::zeros(2), SUPPORT_TOL),
            Err(Error::ZeroOperator)
        );
    }

    #[test]
    fn commutation_examples() {
        let d1 = ComplexMatrix::from_diag(&[1.0, 2.0]);
        let d2 = ComplexMatrix::from_diag(&[-3.0, 0.5]);
        assert!(commutes(&d1, &d2, 1e-12));
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let z = ComplexMatrix::from_diag(&[1.0, -1.0]);
        assert!(!commutes(&x, &z, 1e-8));
        assert!(commutes(&x, &ComplexMatrix::identity(2), 1e-15));
    }

    #[test]
    fn json_layout() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0), C64::new(0.0, -0.5)],
            vec![C64::new(0.0, 0.5), c(0.0)],
        ])
        .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"dim":2,"rows":[[[1.0,0.0],[0.0,-0.5]],[[0.0,0.5],[0.0,0.0]]]}"#);
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<ComplexMatrix>(r#"{"dim":2,"rows":[[[1,0]]]}"#).is_err());
    }
}
