//! Spectral type of Lorentz transformations: elliptic, parabolic or
//! hyperbolic, with their light-like eigendirections and unimodular
//! subspaces.

use std::fmt;

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::element::{height, GroupElement};
use crate::error::{Error, Result};
use crate::linalg::{self, cabs};
use crate::projective::{to_chart, ProjectivePoint};
use crate::scalar::Real;
use crate::system::GeometricSystem;

#[derive(Clone, Debug)]
pub struct SpectralOptions {
    /// Spectral radius above `1 + hyperbolic_tol` may be hyperbolic.
    pub hyperbolic_tol: f64,
    /// Modulus within this of one counts as unimodular.
    pub unimodular_tol: f64,
    /// Multiplier on the eigenvalue noise of a size-3 Jordan block,
    /// `(ε_mach · ‖M‖)^{1/3}`, which widens the hyperbolicity band.
    pub jordan_factor: f64,
    /// Largest power tried when looking for a finite order.
    pub k_max: usize,
    /// Relative eigenvector residual above which extraction fails.
    pub residual_tol: f64,
    /// Relative singular-value threshold for numerical rank.
    pub rank_tol: f64,
    /// Relative tolerance for `(M - εI)²` annihilating `U^⊥`.
    pub annihilation_tol: f64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            hyperbolic_tol: 1e-9,
            unimodular_tol: 1e-9,
            jordan_factor: 10.0,
            k_max: 1000,
            residual_tol: 1e-6,
            rank_tol: 1e-8,
            annihilation_tol: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Kind {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Elliptic => "elliptic",
            Kind::Parabolic => "parabolic",
            Kind::Hyperbolic => "hyperbolic",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Non-unimodular eigenpair of a hyperbolic element.
#[derive(Clone, Debug)]
pub struct HyperbolicPair<T: Real> {
    /// Eigenvalue of modulus greater than one.
    pub lambda: T,
    /// Unit eigenvector for `lambda`.
    pub x_plus: DVector<T>,
    /// Unit eigenvector for `1 / lambda`.
    pub x_minus: DVector<T>,
}

#[derive(Clone, Debug)]
pub struct ParabolicData<T: Real> {
    /// Eigenvalue `±1` of the size-3 Jordan block.
    pub epsilon: i8,
    /// Unit light-like eigenvector.
    pub x: DVector<T>,
}

#[derive(Clone, Debug)]
pub struct SpectralClass<T: Real> {
    pub kind: Kind,
    pub eigenvalues: Vec<Complex<T>>,
    pub spectral_radius: T,
    pub hyperbolic: Option<HyperbolicPair<T>>,
    pub parabolic: Option<ParabolicData<T>>,
    /// Euclidean-orthonormal basis of the `(n-2)`-dimensional unimodular
    /// subspace; absent for elliptic elements.
    pub unimodular_basis: Option<Vec<DVector<T>>>,
    /// Order of an elliptic element.
    pub order: Option<usize>,
}

impl<T: Real> SpectralClass<T> {
    /// Light-like eigenvectors: `x⁺, x⁻` or the parabolic `x`.
    pub fn light_like_vectors(&self) -> Vec<&DVector<T>> {
        match (&self.hyperbolic, &self.parabolic) {
            (Some(h), _) => vec![&h.x_plus, &h.x_minus],
            (_, Some(p)) => vec![&p.x],
            _ => Vec::new(),
        }
    }

    pub fn is_infinite_order(&self) -> bool {
        self.kind != Kind::Elliptic
    }
}

pub fn classify<T: Real>(sys: &GeometricSystem<T>, elem: &GroupElement<T>) -> Result<SpectralClass<T>> {
    classify_matrix(sys, elem.matrix(), &SpectralOptions::default())
}

/// Classifies a `B`-isometry of a Lorentzian system.
///
/// A spectral radius beyond the hyperbolicity band is hyperbolic. Otherwise
/// the element is elliptic if some power up to `k_max` is the identity, and
/// parabolic if some `ε = ±1` has algebraic multiplicity at least three with
/// `(M - εI)²` annihilating `U^⊥` while `M - εI` does not.
///
/// The band is `max(hyperbolic_tol, jordan_factor · (ε_mach‖M‖)^{1/3})`:
/// eigenvalues of a defective size-3 block are only computable to that
/// accuracy, so a tighter band would call every parabolic element hyperbolic.
pub fn classify_matrix<T: Real>(
    sys: &GeometricSystem<T>,
    m: &DMatrix<T>,
    opts: &SpectralOptions,
) -> Result<SpectralClass<T>> {
    sys.require_lorentzian()?;
    let eigenvalues = linalg::complex_eigenvalues(m);
    let rho = eigenvalues.iter().fold(T::zero(), |a, z| a.max(cabs(*z)));
    let scale = m.norm().max(T::one());
    let noise = (T::epsilon() * scale).powf(T::lit(1.0 / 3.0)) * T::lit(opts.jordan_factor);
    let band = T::tol(opts.hyperbolic_tol).max(noise);

    if rho > T::one() + band {
        return hyperbolic(sys, m, eigenvalues, rho, band, opts);
    }
    if let Some(order) = finite_order(m, opts.k_max) {
        return Ok(SpectralClass {
            kind: Kind::Elliptic,
            eigenvalues,
            spectral_radius: rho,
            hyperbolic: None,
            parabolic: None,
            unimodular_basis: None,
            order: Some(order),
        });
    }
    if let Some(p) = parabolic(sys, m, &eigenvalues, band, opts)? {
        let (x, basis, epsilon) = p;
        return Ok(SpectralClass {
            kind: Kind::Parabolic,
            eigenvalues,
            spectral_radius: rho,
            hyperbolic: None,
            parabolic: Some(ParabolicData { epsilon, x }),
            unimodular_basis: Some(basis),
            order: None,
        });
    }
    if rho > T::one() + T::tol(opts.hyperbolic_tol) {
        Err(Error::BorderlineSpectrum { rho: rho.as_f64() })
    } else {
        Err(Error::Unresolved { k_max: opts.k_max })
    }
}

/// Smallest `k ≤ k_max` with `M^k = I`, giving up once powers grow.
fn finite_order<T: Real>(m: &DMatrix<T>, k_max: usize) -> Option<usize> {
    let n = m.nrows();
    let id = DMatrix::identity(n, n);
    let scale = linalg::max_abs(m).max(T::one());
    let tol = T::tol(1e-8) * scale;
    let growth = T::lit(1e4) * scale * scale;
    let mut p = m.clone();
    for k in 1..=k_max {
        if linalg::max_abs(&(&p - &id)) <= tol {
            return Some(k);
        }
        if linalg::max_abs(&p) > growth {
            return None;
        }
        p = &p * m;
    }
    None
}

/// Unit eigenvector for a real eigenvalue: smallest right singular vector of
/// `M - λI`, then one inverse-iteration step. Returns the Rayleigh quotient
/// with the vector, oriented to positive height.
fn real_eigenvector<T: Real>(m: &DMatrix<T>, lambda: T, opts: &SpectralOptions) -> Result<(T, DVector<T>)> {
    let n = m.nrows();
    let id = DMatrix::<T>::identity(n, n);
    let shifted = m - &id * lambda;
    let d = linalg::svd(&shifted);
    let mut v: DVector<T> = d.v.column(n - 1).into_owned();
    let mu = lambda * (T::one() + T::lit(1e-10)) + T::lit(1e-14);
    if let Some(y) = (m - &id * mu).lu().solve(&v) {
        let norm = y.norm();
        if norm.is_finite() && norm > T::zero() {
            v = y / norm;
        }
    }
    let lam = (v.transpose() * m * &v)[(0, 0)] / v.norm_squared();
    let residual = (m * &v - &v * lam).norm() / (v.norm() * linalg::max_abs(m).max(T::one()));
    if residual > T::tol(opts.residual_tol) {
        return Err(Error::IllConditioned(residual.as_f64()));
    }
    Ok((lam, orient(v)))
}

/// Unit vector with positive height (or first non-zero entry positive).
fn orient<T: Real>(v: DVector<T>) -> DVector<T> {
    let v = &v / v.norm();
    let h = height(&v);
    let flip = if h.abs() > T::tol(1e-12) {
        h < T::zero()
    } else {
        v.iter().find(|x| x.abs() > T::tol(1e-12)).is_some_and(|x| *x < T::zero())
    };
    if flip {
        -v
    } else {
        v
    }
}

fn hyperbolic<T: Real>(
    sys: &GeometricSystem<T>,
    m: &DMatrix<T>,
    eigenvalues: Vec<Complex<T>>,
    rho: T,
    band: T,
    opts: &SpectralOptions,
) -> Result<SpectralClass<T>> {
    let n = m.nrows();
    let big: Vec<_> = eigenvalues.iter().filter(|z| cabs(**z) > T::one() + band).collect();
    let small: Vec<_> = eigenvalues
        .iter()
        .filter(|z| cabs(**z) * (T::one() + band) < T::one())
        .collect();
    if big.len() != 1 || small.len() != 1 || big[0].im.abs() > band * cabs(*big[0]) {
        return Err(Error::BorderlineSpectrum { rho: rho.as_f64() });
    }
    let (lambda, x_plus) = real_eigenvector(m, big[0].re, opts)?;
    let (_, x_minus) = real_eigenvector(m, T::one() / lambda, opts)?;
    let constraints = DMatrix::from_rows(&[
        (sys.form() * &x_plus).transpose(),
        (sys.form() * &x_minus).transpose(),
    ]);
    let basis = linalg::null_space(&constraints, T::tol(opts.rank_tol));
    if basis.len() != n - 2 {
        return Err(Error::SubspaceDimension {
            got: basis.len(),
            expected: n - 2,
        });
    }
    Ok(SpectralClass {
        kind: Kind::Hyperbolic,
        eigenvalues,
        spectral_radius: rho,
        hyperbolic: Some(HyperbolicPair {
            lambda,
            x_plus,
            x_minus,
        }),
        parabolic: None,
        unimodular_basis: Some(basis),
        order: None,
    })
}

type ParabolicParts<T> = (DVector<T>, Vec<DVector<T>>, i8);

fn parabolic<T: Real>(
    sys: &GeometricSystem<T>,
    m: &DMatrix<T>,
    eigenvalues: &[Complex<T>],
    band: T,
    opts: &SpectralOptions,
) -> Result<Option<ParabolicParts<T>>> {
    let n = m.nrows();
    let rank_tol = T::tol(opts.rank_tol);
    for epsilon in [1i8, -1] {
        let e = T::lit(f64::from(epsilon));
        let near = eigenvalues
            .iter()
            .filter(|z| cabs(**z - Complex::new(e, T::zero())) <= band)
            .count();
        if near < 3 {
            continue;
        }
        let nil = m - DMatrix::<T>::identity(n, n) * e;
        let nil2 = &nil * &nil;
        let nil_scale = linalg::max_abs(&nil).max(T::one());
        if linalg::max_abs(&nil2) <= rank_tol * nil_scale * nil_scale {
            continue;
        }
        let kernel = linalg::null_space(&nil, rank_tol);
        let mut span = kernel.clone();
        span.extend(linalg::column_space(&nil2, rank_tol));
        let basis = linalg::orthonormal_basis(&span, rank_tol);
        if basis.len() != n - 2 {
            continue;
        }
        let rows: Vec<_> = basis.iter().map(|u| (sys.form() * u).transpose()).collect();
        let perp = linalg::null_space(&DMatrix::from_rows(&rows), rank_tol);
        let nil2_norm = nil2.norm();
        let annihilated = perp
            .iter()
            .all(|y| (&nil2 * y).norm() <= T::tol(opts.annihilation_tol) * nil2_norm);
        let nil_acts = perp
            .iter()
            .any(|y| (&nil * y).norm() > T::tol(opts.annihilation_tol) * nil.norm());
        if !(annihilated && nil_acts) {
            continue;
        }
        let x = light_like_radical(sys.form(), &kernel, rank_tol)?;
        return Ok(Some((x, basis, epsilon)));
    }
    Ok(None)
}

/// The unique isotropic direction of a positive-semidefinite restriction.
fn light_like_radical<T: Real>(form: &DMatrix<T>, kernel: &[DVector<T>], tol: T) -> Result<DVector<T>> {
    let k = DMatrix::from_columns(kernel);
    let gram = k.transpose() * form * &k;
    let eig = SymmetricEigen::new(gram);
    let scale = eig.eigenvalues.iter().fold(T::one(), |a, x| a.max(x.abs()));
    let zeros: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&i| eig.eigenvalues[i].abs() <= tol * scale)
        .collect();
    let negative = eig.eigenvalues.iter().any(|x| *x < -tol * scale);
    if zeros.len() != 1 || negative {
        return Err(Error::ParabolicExtraction(zeros.len()));
    }
    let r = eig.eigenvectors.column(zeros[0]).into_owned();
    Ok(orient(k * r))
}

/// Chart points of `x⁺` and `x⁻`.
pub fn hyperbolic_directions<T: Real>(
    sys: &GeometricSystem<T>,
    sc: &SpectralClass<T>,
) -> Result<(ProjectivePoint<T>, ProjectivePoint<T>)> {
    let h = sc.hyperbolic.as_ref().ok_or(Error::WrongKind {
        expected: "hyperbolic",
        got: sc.kind.name(),
    })?;
    Ok((to_chart(sys.form(), &h.x_plus)?, to_chart(sys.form(), &h.x_minus)?))
}

/// Chart point of the light-like eigendirection of a parabolic element.
pub fn parabolic_direction<T: Real>(sys: &GeometricSystem<T>, sc: &SpectralClass<T>) -> Result<ProjectivePoint<T>> {
    let p = sc.parabolic.as_ref().ok_or(Error::WrongKind {
        expected: "parabolic",
        got: sc.kind.name(),
    })?;
    to_chart(sys.form(), &p.x)
}

pub fn unimodular_subspace<T: Real>(sc: &SpectralClass<T>) -> Result<&[DVector<T>]> {
    sc.unimodular_basis.as_deref().ok_or(Error::WrongKind {
        expected: "infinite-order",
        got: sc.kind.name(),
    })
}

/// Whether `λ μ̄ ≠ 1` implies `B(z1, z2) = 0` for the given eigenpairs, the
/// sesquilinear form and all comparisons taken relative to `tol`.
pub fn orthogonality_check<T: Real>(
    form: &DMatrix<T>,
    z1: &DVector<Complex<T>>,
    lambda: Complex<T>,
    z2: &DVector<Complex<T>>,
    mu: Complex<T>,
    tol: T,
) -> bool {
    let product = lambda * mu.conj();
    if cabs(product - Complex::new(T::one(), T::zero())) <= tol {
        return true;
    }
    let b = linalg::sesquilinear(form, z1, z2);
    cabs(b) <= tol * z1.norm() * z2.norm()
}
