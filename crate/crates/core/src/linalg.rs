//! Small dense linear-algebra helpers on top of nalgebra.

use std::collections::HashMap;

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::scalar::Real;

/// Largest absolute entry.
pub fn max_abs<T: Real>(m: &DMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
}

pub fn max_abs_vec<T: Real>(v: &DVector<T>) -> T {
    v.iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
}

/// `x^T B y`.
#[inline]
pub fn bilinear<T: Real>(form: &DMatrix<T>, x: &DVector<T>, y: &DVector<T>) -> T {
    (x.transpose() * form * y)[(0, 0)]
}

/// Sesquilinear extension `z1^T B conj(z2)`.
pub fn sesquilinear<T: Real>(
    form: &DMatrix<T>,
    z1: &DVector<Complex<T>>,
    z2: &DVector<Complex<T>>,
) -> Complex<T> {
    let formc = form.map(|x| Complex::new(x, T::zero()));
    let z2c = z2.map(|z| z.conj());
    (z1.transpose() * formc * z2c)[(0, 0)]
}

/// Thin singular value decomposition `A = U diag(s) Vᵀ` by one-sided Jacobi.
///
/// nalgebra's bidiagonal SVD loses accuracy on nearly rank-deficient input
/// (a 3×2 matrix with two almost equal columns recomposes with error 0.1),
/// which is exactly the case kernels and images of Jordan blocks produce.
/// Jacobi rotations keep every column accurate relative to its own norm.
/// Values come sorted in decreasing order; `U` has `max(m, n)` rows when
/// `A` is wide (zero rows are appended).
pub struct Svd<T: Real> {
    pub u: DMatrix<T>,
    pub singular_values: Vec<T>,
    pub v: DMatrix<T>,
}

pub fn svd<T: Real>(a: &DMatrix<T>) -> Svd<T> {
    let n = a.ncols();
    let rows = a.nrows().max(n);
    let mut w = DMatrix::zeros(rows, n);
    w.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
    let mut v = DMatrix::<T>::identity(n, n);
    let eps = T::epsilon();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dot(&w.column(q));
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (gamma + gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<T> = (0..n).map(|k| w.column(k).norm()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite matrix"));
    let mut u = DMatrix::zeros(rows, n);
    let mut vs = DMatrix::zeros(n, n);
    for (dst, &k) in order.iter().enumerate() {
        if norms[k] > T::zero() {
            u.set_column(dst, &(w.column(k) / norms[k]));
        }
        vs.set_column(dst, &v.column(k));
    }
    Svd {
        u,
        singular_values: order.iter().map(|&k| norms[k]).collect(),
        v: vs,
    }
}

fn rotate<T: Real>(m: &mut DMatrix<T>, p: usize, q: usize, c: T, s: T) {
    for i in 0..m.nrows() {
        let (x, y) = (m[(i, p)], m[(i, q)]);
        m[(i, p)] = c * x - s * y;
        m[(i, q)] = s * x + c * y;
    }
}

/// Orthonormal basis of the right null space of `a`.
///
/// A singular value counts as zero when it is at most `rel_tol` times the
/// largest one (or `rel_tol` itself for a zero matrix).
pub fn null_space<T: Real>(a: &DMatrix<T>, rel_tol: T) -> Vec<DVector<T>> {
    let d = svd(a);
    let smax = d.singular_values.first().copied().unwrap_or(T::zero());
    let thr = rel_tol * smax.max(T::one());
    (0..a.ncols())
        .filter(|&k| d.singular_values[k] <= thr)
        .map(|k| d.v.column(k).into_owned())
        .collect()
}

/// Orthonormal basis of the column space of `a`, with the same rank rule as
/// [`null_space`].
pub fn column_space<T: Real>(a: &DMatrix<T>, rel_tol: T) -> Vec<DVector<T>> {
    if a.ncols() == 0 {
        return Vec::new();
    }
    let d = svd(a);
    let smax = d.singular_values[0];
    if smax == T::zero() {
        return Vec::new();
    }
    let thr = rel_tol * smax;
    (0..a.ncols())
        .filter(|&k| d.singular_values[k] > thr)
        .map(|k| d.u.column(k).rows(0, a.nrows()).into_owned())
        .collect()
}

/// Orthonormalizes a spanning set, dropping directions below `rel_tol`.
pub fn orthonormal_basis<T: Real>(vectors: &[DVector<T>], rel_tol: T) -> Vec<DVector<T>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    column_space(&DMatrix::from_columns(vectors), rel_tol)
}

/// Sine of the largest principal angle between two subspaces given by
/// orthonormal bases. Subspaces of different dimension are at angle π/2.
pub fn max_principal_sine<T: Real>(a: &[DVector<T>], b: &[DVector<T>]) -> T {
    if a.len() != b.len() {
        return T::one();
    }
    if a.is_empty() {
        return T::zero();
    }
    let qa = DMatrix::from_columns(a);
    let qb = DMatrix::from_columns(b);
    let residual = &qa - &qb * (qb.transpose() * &qa);
    svd(&residual).singular_values[0]
}

/// Eigenvalues of a general real square matrix.
pub fn complex_eigenvalues<T: Real>(m: &DMatrix<T>) -> Vec<Complex<T>> {
    m.clone().complex_eigenvalues().iter().copied().collect()
}

/// Modulus of a complex scalar.
#[inline]
pub fn cabs<T: Real>(z: Complex<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}

/// Symmetric eigenvalues in ascending order.
pub fn symmetric_eigenvalues<T: Real>(m: &DMatrix<T>) -> Vec<T> {
    let mut e: Vec<T> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    e.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    e
}

/// Hash index for approximate lookup of float data.
///
/// Items are bucketed by `asinh(f)` of a non-negative scalar summary `f`
/// on a grid of width `width`, so bucket sizes are absolute near zero and
/// relative for large values. Lookups probe the two neighbouring buckets,
/// so items whose summaries differ by much less than the bucket width are
/// never missed.
#[derive(Clone, Debug)]
pub struct FuzzyIndex {
    width: f64,
    buckets: HashMap<i64, Vec<usize>>,
}

impl FuzzyIndex {
    pub fn new(width: f64) -> Self {
        Self {
            width,
            buckets: HashMap::new(),
        }
    }

    fn bucket(&self, summary: f64) -> i64 {
        (summary.asinh() / self.width).floor() as i64
    }

    pub fn insert(&mut self, summary: f64, id: usize) {
        let b = self.bucket(summary);
        self.buckets.entry(b).or_default().push(id);
    }

    /// Candidate ids whose summary may be close to `summary`.
    pub fn candidates(&self, summary: f64) -> impl Iterator<Item = usize> + '_ {
        let b = self.bucket(summary);
        (b - 1..=b + 1).flat_map(move |k| self.buckets.get(&k).into_iter().flatten().copied())
    }

    pub fn len(&self) -> usize {
        self.buckets.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }
}

/// Deterministic positive weights in `[0.5, 1.5)` used for scalar summaries.
pub fn summary_weights(len: usize) -> Vec<f64> {
    const PHI: f64 = 0.618_033_988_749_894_9;
    (1..=len).map(|k| 0.5 + (k as f64 * PHI).fract()).collect()
}

/// Weighted sum of absolute values; stable under sign patterns.
pub fn summary<T: Real>(data: impl IntoIterator<Item = T>, weights: &[f64]) -> f64 {
    data.into_iter()
        .zip(weights)
        .map(|(x, w)| x.abs().as_f64() * w)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_matrix() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let k = null_space(&a, 1e-10);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((a.clone() * v).norm() < 1e-12);
        }
    }

    #[test]
    fn jacobi_svd_handles_nearly_parallel_columns() {
        let v = [0.23570226039551756, 0.23570226039551467, 0.9428090415820631];
        let w = [0.23570226039551612, 0.2357022603955159, 0.9428090415820636];
        let a = DMatrix::from_column_slice(3, 2, &[v, w].concat());
        let d = svd(&a);
        let back = d.u.columns(0, 2) * DMatrix::from_diagonal(&DVector::from_vec(d.singular_values.clone())) * d.v.transpose();
        assert!((back - &a).norm() < 1e-14);
        assert!((d.singular_values[0] - 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(column_space(&a, 1e-8).len(), 1);
    }

    #[test]
    fn principal_sine_detects_equal_spans() {
        let a = vec![DVector::from_vec(vec![1.0, 0.0, 0.0])];
        let b = vec![DVector::from_vec(vec![-1.0, 0.0, 0.0])];
        assert!(max_principal_sine(&a, &b) < 1e-15);
        let c = vec![DVector::from_vec(vec![0.0, 1.0, 0.0])];
        assert!((max_principal_sine(&a, &c) - 1.0f64).abs() < 1e-15);
    }

    #[test]
    fn fuzzy_index_finds_neighbours_across_bucket_edges() {
        let mut idx = FuzzyIndex::new(1e-7);
        // Straddle a bucket boundary on purpose.
        let edge = (3.0e-7f64).sinh();
        idx.insert(edge - 1e-15, 0);
        assert!(idx.candidates(edge + 1e-15).any(|id| id == 0));
    }
}
