//! The bilinear form of a Coxeter graph and its geometric representation.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::CoxeterGraph;
use crate::linalg;
use crate::scalar::Real;

/// Inertia of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero == 0 {
            write!(f, "({},{})", self.positive, self.negative)
        } else {
            write!(f, "({},{},{})", self.positive, self.negative, self.zero)
        }
    }
}

/// Coarse type of a geometric Coxeter system, read off the signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormType {
    Finite,
    Affine,
    Lorentzian(Signature),
    Other(Signature),
}

impl fmt::Display for FormType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormType::Finite => f.write_str("finite"),
            FormType::Affine => f.write_str("affine"),
            FormType::Lorentzian(s) => write!(f, "Lorentzian {s}"),
            FormType::Other(s) => write!(f, "other {s}"),
        }
    }
}

/// Symmetric matrix with unit diagonal, `-cos(π/m)` on finite edges and
/// `-c` on infinite ones.
pub fn build_form<T: Real>(graph: &CoxeterGraph) -> DMatrix<T> {
    let n = graph.rank();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            T::one()
        } else {
            T::lit(graph.label(i, j).pairing())
        }
    })
}

/// Relative zero tolerance used by [`signature`].
pub const SIGNATURE_TOL: f64 = 1e-9;

/// Counts positive, negative and zero eigenvalues of a symmetric matrix.
///
/// An eigenvalue is zero when within `τ = 1e-9 · max|λ|`. If the zero count
/// changes when the band shrinks to `τ/10` the signature is reported as
/// borderline instead of guessed.
pub fn signature<T: Real>(form: &DMatrix<T>) -> Result<Signature> {
    let eig = linalg::symmetric_eigenvalues(form);
    let scale = eig.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let tau = T::tol(SIGNATURE_TOL) * scale;
    let narrow = tau / T::lit(10.0);
    let zero = eig.iter().filter(|x| x.abs() <= tau).count();
    let zero_narrow = eig.iter().filter(|x| x.abs() <= narrow).count();
    if zero != zero_narrow {
        return Err(Error::BorderlineSignature {
            tau: tau.as_f64(),
            tau_narrow: narrow.as_f64(),
            zero_wide: zero,
            zero_narrow,
        });
    }
    Ok(Signature {
        positive: eig.iter().filter(|x| **x > tau).count(),
        negative: eig.iter().filter(|x| **x < -tau).count(),
        zero,
    })
}

/// Matrix of the reflection `x ↦ x - 2 B(x, α_s) α_s` in the basis of simple
/// roots. Column `t` is `α_t - 2 B(α_t, α_s) α_s`.
pub fn generator_matrix<T: Real>(form: &DMatrix<T>, s: usize) -> DMatrix<T> {
    let n = form.nrows();
    let mut m = DMatrix::identity(n, n);
    for t in 0..n {
        m[(s, t)] -= T::lit(2.0) * form[(t, s)];
    }
    m
}

/// A Coxeter graph together with its bilinear form and simple reflections.
#[derive(Clone, Debug)]
pub struct GeometricSystem<T: Real> {
    graph: CoxeterGraph,
    form: DMatrix<T>,
    signature: Signature,
    gens: Vec<DMatrix<T>>,
}

impl<T: Real> GeometricSystem<T> {
    pub fn new(graph: CoxeterGraph) -> Result<Self> {
        let form = build_form::<T>(&graph);
        let signature = signature(&form)?;
        let gens = (0..graph.rank()).map(|s| generator_matrix(&form, s)).collect();
        Ok(Self {
            graph,
            form,
            signature,
            gens,
        })
    }

    pub fn graph(&self) -> &CoxeterGraph {
        &self.graph
    }

    pub fn rank(&self) -> usize {
        self.graph.rank()
    }

    pub fn form(&self) -> &DMatrix<T> {
        &self.form
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn generators(&self) -> &[DMatrix<T>] {
        &self.gens
    }

    pub fn generator(&self, s: usize) -> Result<&DMatrix<T>> {
        self.gens.get(s).ok_or(Error::GeneratorOutOfRange {
            index: s,
            rank: self.rank(),
        })
    }

    pub fn is_lorentzian(&self) -> bool {
        let n = self.rank();
        self.signature
            == Signature {
                positive: n - 1,
                negative: 1,
                zero: 0,
            }
    }

    pub fn require_lorentzian(&self) -> Result<()> {
        if self.is_lorentzian() {
            Ok(())
        } else {
            Err(Error::NotLorentzian(self.signature))
        }
    }

    pub fn form_type(&self) -> FormType {
        let s = self.signature;
        if s.negative == 0 && s.zero == 0 {
            FormType::Finite
        } else if s.negative == 0 {
            FormType::Affine
        } else if self.is_lorentzian() {
            FormType::Lorentzian(s)
        } else {
            FormType::Other(s)
        }
    }

    #[inline]
    pub fn bilinear(&self, x: &DVector<T>, y: &DVector<T>) -> T {
        linalg::bilinear(&self.form, x, y)
    }

    pub fn simple_root(&self, s: usize) -> DVector<T> {
        let mut v = DVector::zeros(self.rank());
        v[s] = T::one();
        v
    }

    /// Matrix of the reflection in an arbitrary non-isotropic vector.
    pub fn reflection(&self, root: &DVector<T>) -> DMatrix<T> {
        let n = self.rank();
        let b_root = &self.form * root;
        let scale = T::lit(2.0) / self.bilinear(root, root);
        DMatrix::identity(n, n) - root * b_root.transpose() * scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::CoxeterGraph;

    #[test]
    fn form_entries_follow_labels() {
        let g = CoxeterGraph::new(3).unwrap().with_edge(0, 1, 3).unwrap();
        let b = build_form::<f64>(&g);
        assert_eq!(b[(0, 0)], 1.0);
        assert!((b[(0, 1)] + 0.5).abs() < 1e-15);
        assert!(b[(0, 2)].abs() < 1e-15);
        let u = build_form::<f64>(&CoxeterGraph::universal(3, 1.1).unwrap());
        assert_eq!(u[(1, 2)], -1.1);
        assert_eq!(u, u.transpose());
    }

    #[test]
    fn signatures_of_reference_forms() {
        let sys = |name: &str| GeometricSystem::<f64>::new(CoxeterGraph::builtin(name).unwrap()).unwrap();
        // {2, 2, -1} for the c = 1 universal form
        let u = sys("universal3:1");
        assert_eq!(u.signature(), Signature { positive: 2, negative: 1, zero: 0 });
        assert!(u.is_lorentzian());
        assert_eq!(sys("a2").form_type(), FormType::Finite);
        assert_eq!(sys("fig8").form_type().to_string(), "other (3,2)");
        assert_eq!(u.form_type().to_string(), "Lorentzian (2,1)");
        assert!(sys("fig1a").is_lorentzian());
        assert!(sys("fig1b").is_lorentzian());
    }

    #[test]
    fn affine_triangle_has_one_zero_eigenvalue() {
        let g = CoxeterGraph::new(3)
            .unwrap()
            .with_edge(0, 1, 3)
            .unwrap()
            .with_edge(1, 2, 3)
            .unwrap()
            .with_edge(0, 2, 3)
            .unwrap();
        let s = GeometricSystem::<f64>::new(g).unwrap();
        assert_eq!(s.form_type(), FormType::Affine);
        assert_eq!(s.signature().zero, 1);
    }

    #[test]
    fn borderline_signature_is_reported() {
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 5e-10]);
        assert!(matches!(signature(&b), Err(Error::BorderlineSignature { .. })));
    }

    #[test]
    fn generator_matrices_match_hand_values() {
        let b = DMatrix::from_row_slice(2, 2, &[1.0, -1.5, -1.5, 1.0]);
        let m = generator_matrix(&b, 0);
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[-1.0, 3.0, 0.0, 1.0]));
        let u = GeometricSystem::<f64>::new(CoxeterGraph::universal(3, 1.0).unwrap()).unwrap();
        let expected = DMatrix::from_row_slice(3, 3, &[-1.0, 2.0, 2.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(u.generators()[0], expected);
    }

    #[test]
    fn generators_are_isometric_involutions() {
        for name in ["fig1a", "fig1b", "fig8", "universal3:1.1", "a2"] {
            let s = GeometricSystem::<f64>::new(CoxeterGraph::builtin(name).unwrap()).unwrap();
            let n = s.rank();
            for m in s.generators() {
                assert!(linalg::max_abs(&(m * m - DMatrix::identity(n, n))) < 1e-12);
                assert!(linalg::max_abs(&(m.transpose() * s.form() * m - s.form())) < 1e-12);
            }
        }
    }

    #[test]
    fn single_precision_system_builds() {
        let s = GeometricSystem::<f32>::new(CoxeterGraph::universal(3, 1.0).unwrap()).unwrap();
        assert!(s.is_lorentzian());
        assert!(s.generator(3).is_err());
    }
}
