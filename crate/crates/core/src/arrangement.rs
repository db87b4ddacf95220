//! The projective Coxeter arrangement: positive roots by depth, fundamental
//! weights, codimension-2 intersections and sign vectors.

use std::fmt;

use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use crate::element::{height, Word};
use crate::error::{Error, Result};
use crate::linalg::{self, FuzzyIndex};
use crate::projective::{to_chart, CausalCharacter, ProjectivePoint};
use crate::scalar::Real;
use crate::spectral::{classify_matrix, unimodular_subspace, SpectralOptions};
use crate::system::GeometricSystem;

/// Absolute band around `-1` separating transversal from tangent pairs.
pub const TANGENCY_TOL: f64 = 1e-9;
/// Principal-angle sine under which two subspaces are equal.
pub const SUBSPACE_TOL: f64 = 1e-7;

/// A positive root `γ = w(α_s)`.
#[derive(Clone, Debug)]
pub struct Root<T: Real> {
    pub vector: DVector<T>,
    pub depth: usize,
    /// Letters of `w` followed by `s`; its length is the depth.
    pub word: Word,
}

impl<T: Real> Root<T> {
    pub fn simple(&self) -> usize {
        *self.word.last().expect("roots have non-empty words")
    }
}

/// Positive roots of depth at most `max_depth`, in discovery order.
///
/// Depth `k + 1` roots are `σ_s(γ)` for depth-`k` roots `γ` with
/// `B(γ, α_s) < 0`, the only case in which a simple reflection deepens a
/// root. A root is kept at its first (smallest) depth.
pub fn roots_by_depth<T: Real>(sys: &GeometricSystem<T>, max_depth: usize) -> Vec<Root<T>> {
    let n = sys.rank();
    let weights = linalg::summary_weights(n);
    let mut index = FuzzyIndex::new(1e-7);
    let mut roots: Vec<Root<T>> = Vec::new();
    let seen = |roots: &[Root<T>], index: &FuzzyIndex, v: &DVector<T>| {
        let key = linalg::summary(v.iter().copied(), &weights);
        index.candidates(key).any(|id| {
            let scale = linalg::max_abs_vec(v).max(T::one());
            linalg::max_abs_vec(&(&roots[id].vector - v)) <= T::tol(1e-9) * scale
        })
    };
    let simple = if max_depth == 0 { 0 } else { n };
    for s in 0..simple {
        let v = sys.simple_root(s);
        index.insert(linalg::summary(v.iter().copied(), &weights), roots.len());
        roots.push(Root {
            vector: v,
            depth: 1,
            word: vec![s],
        });
    }
    let mut frontier = 0..roots.len();
    for depth in 2..=max_depth {
        let start = roots.len();
        for i in frontier.clone() {
            for s in 0..n {
                let b = linalg::bilinear(sys.form(), &roots[i].vector, &sys.simple_root(s));
                if b >= -T::tol(1e-12) {
                    continue;
                }
                let v = &sys.generators()[s] * &roots[i].vector;
                if seen(&roots, &index, &v) {
                    continue;
                }
                let mut word = vec![s];
                word.extend_from_slice(&roots[i].word);
                index.insert(linalg::summary(v.iter().copied(), &weights), roots.len());
                roots.push(Root { vector: v, depth, word });
            }
        }
        frontier = start..roots.len();
    }
    roots
}

/// `ω_s` with `B(α_t, ω_s) = δ_st`.
#[derive(Clone, Debug)]
pub struct Weight<T: Real> {
    pub vector: DVector<T>,
    pub index: usize,
}

/// Fundamental weights: the columns of `B⁻¹`.
pub fn fundamental_weights<T: Real>(sys: &GeometricSystem<T>) -> Result<Vec<Weight<T>>> {
    let form = sys.form();
    let sv = linalg::svd(form).singular_values;
    let (smax, smin) = (sv[0], sv[sv.len() - 1]);
    if smin <= T::tol(1e-12) * smax {
        return Err(Error::SingularForm);
    }
    let inv = form.clone().try_inverse().ok_or(Error::SingularForm)?;
    Ok((0..sys.rank())
        .map(|s| Weight {
            vector: inv.column(s).into_owned(),
            index: s,
        })
        .collect())
}

/// `H_{γ₁} ∩ H_{γ₂}` for a pair of roots.
#[derive(Clone, Debug)]
pub struct Codim2Intersection<T: Real> {
    pub pair: (Root<T>, Root<T>),
    /// Euclidean-orthonormal basis of the intersection.
    pub basis: Vec<DVector<T>>,
    pub kind: CausalCharacter,
    pub pairing: T,
}

impl<T: Real> Codim2Intersection<T> {
    /// In rank 3 the intersection is a single projective point.
    pub fn point(&self, sys: &GeometricSystem<T>) -> Option<ProjectivePoint<T>> {
        match self.basis.as_slice() {
            [v] => to_chart(sys.form(), v).ok(),
            _ => None,
        }
    }
}

/// Kind of `H_{γ₁} ∩ H_{γ₂}` from the pairing `b = B(γ₁, γ₂)` of unit roots.
///
/// `|b| > 1` means the span of the roots is Lorentzian, so its complement is
/// space-like; this includes `b > 1`, which is `b < -1` for the pair
/// `(γ₁, -γ₂)`. `|b| = 1` is tangent to the light cone and `|b| < 1` cuts
/// through it.
pub fn pair_kind<T: Real>(pairing: T) -> CausalCharacter {
    let gap = pairing.abs() - T::one();
    if gap.abs() <= T::tol(TANGENCY_TOL) {
        CausalCharacter::LightLike
    } else if gap > T::zero() {
        CausalCharacter::SpaceLike
    } else {
        CausalCharacter::TimeLike
    }
}

/// Codimension-2 intersections of the hyperplanes of `roots`.
///
/// Space-like and light-like pairs are returned; time-like ones only when
/// `include_all` is set. Order follows the pair indices.
pub fn codim2_intersections<T: Real>(
    sys: &GeometricSystem<T>,
    roots: &[Root<T>],
    include_all: bool,
) -> Vec<Codim2Intersection<T>> {
    let form = sys.form();
    (0..roots.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = Vec::new();
            for j in i + 1..roots.len() {
                let (a, b) = (&roots[i], &roots[j]);
                let pairing = linalg::bilinear(form, &a.vector, &b.vector);
                let kind = pair_kind(pairing);
                if kind == CausalCharacter::TimeLike && !include_all {
                    continue;
                }
                let rows = nalgebra::DMatrix::from_rows(&[
                    (form * &a.vector).transpose(),
                    (form * &b.vector).transpose(),
                ]);
                let basis = linalg::null_space(&rows, T::tol(1e-10));
                out.push(Codim2Intersection {
                    pair: (a.clone(), b.clone()),
                    basis,
                    kind,
                    pairing,
                });
            }
            out
        })
        .collect()
}

/// Space-like intersections only: the sample of `L_hyp`.
pub fn codim2_spacelike<T: Real>(sys: &GeometricSystem<T>, roots: &[Root<T>]) -> Vec<Codim2Intersection<T>> {
    codim2_intersections(sys, roots, false)
        .into_iter()
        .filter(|c| c.kind == CausalCharacter::SpaceLike)
        .collect()
}

/// Largest principal-angle sine between a space-like intersection and the
/// unimodular subspace of `σ_{γ₁} σ_{γ₂}`.
pub fn unimodular_mismatch<T: Real>(sys: &GeometricSystem<T>, ci: &Codim2Intersection<T>) -> Result<T> {
    if ci.kind != CausalCharacter::SpaceLike {
        return Err(Error::NotSpaceLike(ci.kind.name()));
    }
    let m = sys.reflection(&ci.pair.0.vector) * sys.reflection(&ci.pair.1.vector);
    let sc = classify_matrix(sys, &m, &SpectralOptions::default())?;
    let u = unimodular_subspace(&sc)?;
    Ok(linalg::max_principal_sine(&ci.basis, u))
}

pub fn intersection_equals_unimodular<T: Real>(sys: &GeometricSystem<T>, ci: &Codim2Intersection<T>) -> Result<bool> {
    Ok(unimodular_mismatch(sys, ci)? < T::tol(SUBSPACE_TOL))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
            Sign::Zero => "0",
        })
    }
}

/// Signs of `B(x, γ)`, zero within `1e-9 · ‖x‖ · ‖γ‖`.
pub fn sign_vector<T: Real>(sys: &GeometricSystem<T>, x: &DVector<T>, roots: &[Root<T>]) -> Vec<Sign> {
    roots
        .iter()
        .map(|r| {
            let b = sys.bilinear(x, &r.vector);
            if b.abs() <= T::tol(1e-9) * x.norm() * r.vector.norm() {
                Sign::Zero
            } else if b > T::zero() {
                Sign::Plus
            } else {
                Sign::Minus
            }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Descent<T: Real> {
    /// Element `u` with `u(x)` the final vector.
    pub word: Word,
    /// Final vector, rescaled to unit length.
    pub vector: DVector<T>,
    /// Every `B(u(x), α_s) ≥ 0`: `x` lies in the Tits cone.
    pub in_chamber: bool,
}

/// Greedy descent into the fundamental chamber by reflecting in the first
/// simple root that pairs negatively with the point.
pub fn descend_to_fundamental<T: Real>(sys: &GeometricSystem<T>, x: &DVector<T>, max_steps: usize) -> Descent<T> {
    let mut v = x / x.norm();
    let mut applied = Vec::new();
    let tol = T::tol(1e-12);
    for _ in 0..max_steps {
        let neg = (0..sys.rank()).find(|&s| sys.bilinear(&v, &sys.simple_root(s)) < -tol);
        match neg {
            None => {
                applied.reverse();
                return Descent {
                    word: applied,
                    vector: v,
                    in_chamber: true,
                };
            }
            Some(s) => {
                v = &sys.generators()[s] * v;
                v /= v.norm();
                applied.push(s);
            }
        }
    }
    let in_chamber = (0..sys.rank()).all(|s| sys.bilinear(&v, &sys.simple_root(s)) >= -tol);
    applied.reverse();
    Descent {
        word: applied,
        vector: v,
        in_chamber,
    }
}

/// Whether a vector is a positive root up to rounding.
pub fn is_positive<T: Real>(v: &DVector<T>) -> bool {
    height(v) > T::zero() && v.iter().all(|x| *x >= -T::tol(1e-9))
}
