//! Samples of limit roots and limit directions: conjugated eigendirections,
//! orbit accumulation, power dynamics and limits of infinite reduced words.

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::element::{height, word_matrix, GroupElement, Word};
use crate::enumerate::ElementStore;
use crate::error::{Error, Result};
use crate::linalg;
use crate::projective::{to_chart, Chart, ProjectivePoint};
use crate::scalar::Real;
use crate::spectral::{classify_matrix, Kind, SpectralClass, SpectralOptions};
use crate::system::GeometricSystem;

/// Where a point came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PointKind {
    ParabolicEig,
    HyperbolicEig,
    Orbit,
    Intersection,
    Weight,
}

impl PointKind {
    pub const ALL: [PointKind; 5] = [
        PointKind::ParabolicEig,
        PointKind::HyperbolicEig,
        PointKind::Orbit,
        PointKind::Intersection,
        PointKind::Weight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PointKind::ParabolicEig => "parabolic-eig",
            PointKind::HyperbolicEig => "hyperbolic-eig",
            PointKind::Orbit => "orbit",
            PointKind::Intersection => "intersection",
            PointKind::Weight => "weight",
        }
    }
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PointKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PointKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown point kind '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub kind: PointKind,
    pub source_word: Word,
    pub conjugator_word: Word,
}

/// Points of PV that are pairwise at least `dedup_eps` apart in the chart.
///
/// Affine points are compared in chart coordinates, points at infinity by
/// their unit directions; the two kinds never merge. A point closer than
/// `dedup_eps` to a stored one is dropped, so the first occurrence (and its
/// provenance) wins.
#[derive(Clone, Debug)]
pub struct PointSet<T: Real> {
    points: Vec<ProjectivePoint<T>>,
    provenance: Vec<Provenance>,
    dedup_eps: f64,
    cells: HashMap<(bool, Vec<i64>), Vec<usize>>,
}

impl<T: Real> PointSet<T> {
    pub fn new(dedup_eps: f64) -> Self {
        assert!(dedup_eps > 0.0, "dedup_eps must be positive");
        Self {
            points: Vec::new(),
            provenance: Vec::new(),
            dedup_eps,
            cells: HashMap::new(),
        }
    }

    fn cell(&self, p: &ProjectivePoint<T>) -> (bool, Vec<i64>) {
        let key = p
            .coords()
            .iter()
            .map(|x| (x.as_f64() / self.dedup_eps).floor() as i64)
            .collect();
        (p.is_affine(), key)
    }

    fn neighbours(key: &[i64]) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::with_capacity(key.len())];
        for &k in key {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (k - 1..=k + 1).map(move |c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// Index of a stored point within `dedup_eps` of `p`.
    pub fn nearby(&self, p: &ProjectivePoint<T>) -> Option<usize> {
        let (affine, key) = self.cell(p);
        let eps = T::lit(self.dedup_eps);
        Self::neighbours(&key).into_iter().find_map(|k| {
            self.cells.get(&(affine, k)).and_then(|ids| {
                ids.iter()
                    .copied()
                    .find(|&id| (self.points[id].coords() - p.coords()).norm() < eps)
            })
        })
    }

    /// Inserts unless a point within `dedup_eps` exists; returns whether the
    /// point was new.
    pub fn insert(&mut self, p: ProjectivePoint<T>, prov: Provenance) -> bool {
        if let Some(first) = self.points.first() {
            assert_eq!(first.rank(), p.rank(), "rank mismatch in point set");
        }
        if self.nearby(&p).is_some() {
            return false;
        }
        let key = self.cell(&p);
        self.cells.entry(key).or_default().push(self.points.len());
        self.points.push(p);
        self.provenance.push(prov);
        true
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dedup_eps(&self) -> f64 {
        self.dedup_eps
    }

    pub fn rank(&self) -> Option<usize> {
        self.points.first().map(ProjectivePoint::rank)
    }

    pub fn points(&self) -> &[ProjectivePoint<T>] {
        &self.points
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ProjectivePoint<T>, &Provenance)> {
        self.points.iter().zip(&self.provenance)
    }

    pub fn count(&self, kind: PointKind) -> usize {
        self.provenance.iter().filter(|p| p.kind == kind).count()
    }

    /// Sub-set of points of one kind, with the same tolerance.
    pub fn of_kind(&self, kind: PointKind) -> Self {
        let mut out = Self::new(self.dedup_eps);
        for (p, prov) in self.iter().filter(|(_, prov)| prov.kind == kind) {
            out.insert(p.clone(), prov.clone());
        }
        out
    }

    /// Inserts every point of `other` in order.
    pub fn extend_from(&mut self, other: &Self) {
        for (p, prov) in other.iter() {
            self.insert(p.clone(), prov.clone());
        }
    }

    /// Largest `|B(x,x)|` over affine points.
    pub fn max_abs_bnorm(&self) -> T {
        self.points
            .iter()
            .filter(|p| p.is_affine())
            .fold(T::zero(), |a, p| a.max(p.bnorm().abs()))
    }
}

#[derive(Clone, Debug)]
pub struct SampleOptions {
    /// Chart distance under which points merge.
    pub dedup_eps: f64,
    /// Only use core elements of this type.
    pub only: Option<Kind>,
    pub spectral: SpectralOptions,
}

impl Default for SampleOptions {
    fn default() -> Self {
        Self {
            dedup_eps: 1e-6,
            only: None,
            spectral: SpectralOptions::default(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SampleStats {
    pub core_elements: usize,
    pub elliptic: usize,
    pub parabolic: usize,
    pub hyperbolic: usize,
    /// Core elements whose classification failed; they are skipped.
    pub unresolved: usize,
    pub conjugators: usize,
    /// Points before deduplication.
    pub raw_points: usize,
}

#[derive(Clone, Debug)]
pub struct Sample<T: Real> {
    pub points: PointSet<T>,
    pub stats: SampleStats,
}

struct CoreDirections<T: Real> {
    word: Word,
    kind: PointKind,
    vectors: Vec<DVector<T>>,
}

/// Limit roots from conjugated eigendirections.
///
/// Each infinite-order element `w` with length in `core` is eigensolved once;
/// the conjugate `g w g⁻¹` has eigendirections `g · x`, so every conjugator
/// `g` with length in `conj` maps the stored directions without another
/// eigensolve. Points are inserted in ShortLex order of `(w, g)`, so the
/// output is deterministic.
pub fn sample_limit_roots<T: Real>(
    sys: &GeometricSystem<T>,
    store: &ElementStore<T>,
    core: RangeInclusive<usize>,
    conj: RangeInclusive<usize>,
    opts: &SampleOptions,
) -> Result<Sample<T>> {
    sys.require_lorentzian()?;
    store.require_length((*core.end()).max(*conj.end()))?;
    let elements = store.in_range(core.clone());
    let classified: Vec<Result<SpectralClass<T>>> = elements
        .par_iter()
        .map(|w| classify_matrix(sys, w.matrix(), &opts.spectral))
        .collect();

    let mut stats = SampleStats {
        core_elements: elements.len(),
        ..Default::default()
    };
    let mut cores = Vec::new();
    for (w, sc) in elements.iter().zip(classified) {
        let sc = match sc {
            Ok(sc) => sc,
            Err(e) => {
                log::warn!("skipping {}: {e}", crate::element::format_word(w.word()));
                stats.unresolved += 1;
                continue;
            }
        };
        match sc.kind {
            Kind::Elliptic => stats.elliptic += 1,
            Kind::Parabolic => stats.parabolic += 1,
            Kind::Hyperbolic => stats.hyperbolic += 1,
        }
        if sc.kind == Kind::Elliptic || opts.only.is_some_and(|k| k != sc.kind) {
            continue;
        }
        let kind = if sc.kind == Kind::Parabolic {
            PointKind::ParabolicEig
        } else {
            PointKind::HyperbolicEig
        };
        cores.push(CoreDirections {
            word: w.word().to_vec(),
            kind,
            vectors: sc.light_like_vectors().into_iter().cloned().collect(),
        });
    }
    if cores.is_empty() {
        return Err(Error::EmptyCore(*core.start(), *core.end()));
    }

    let conjugators = store.in_range(conj);
    stats.conjugators = conjugators.len();
    let form = sys.form();
    let images: Vec<Vec<(ProjectivePoint<T>, usize, usize)>> = cores
        .par_iter()
        .enumerate()
        .map(|(ci, c)| {
            let mut out = Vec::with_capacity(conjugators.len() * c.vectors.len());
            for (gi, g) in conjugators.iter().enumerate() {
                for x in &c.vectors {
                    let p = to_chart(form, &(g.matrix() * x)).expect("isometries keep vectors non-zero");
                    out.push((p, ci, gi));
                }
            }
            out
        })
        .collect();

    let mut points = PointSet::new(opts.dedup_eps);
    for (p, ci, gi) in images.into_iter().flatten() {
        stats.raw_points += 1;
        points.insert(
            p,
            Provenance {
                kind: cores[ci].kind,
                source_word: cores[ci].word.clone(),
                conjugator_word: conjugators[gi].word().to_vec(),
            },
        );
    }
    Ok(Sample { points, stats })
}

/// The orbit `{w · base : min ≤ ℓ(w) ≤ max}`, deduplicated.
pub fn orbit_accumulate<T: Real>(
    sys: &GeometricSystem<T>,
    base: &DVector<T>,
    store: &ElementStore<T>,
    lengths: RangeInclusive<usize>,
    dedup_eps: f64,
) -> Result<PointSet<T>> {
    store.require_length(*lengths.end())?;
    let elements = store.in_range(lengths);
    let images: Vec<ProjectivePoint<T>> = elements
        .par_iter()
        .map(|w| to_chart(sys.form(), &(w.matrix() * base)))
        .collect::<Result<_>>()?;
    let mut set = PointSet::new(dedup_eps);
    for (p, w) in images.into_iter().zip(elements) {
        set.insert(
            p,
            Provenance {
                kind: PointKind::Orbit,
                source_word: Vec::new(),
                conjugator_word: w.word().to_vec(),
            },
        );
    }
    if set.len() < 2 {
        return Err(Error::DegenerateOrbit(set.len()));
    }
    Ok(set)
}

/// The trajectory `w^k · base` for `k = 0..=k_max`. Vectors are rescaled to
/// unit length at each step, which leaves the projective points unchanged.
pub fn power_dynamics<T: Real>(
    sys: &GeometricSystem<T>,
    w: &DMatrix<T>,
    base: &DVector<T>,
    k_max: usize,
) -> Result<Vec<ProjectivePoint<T>>> {
    let mut v = base / base.norm();
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(to_chart(sys.form(), &v)?);
    for _ in 0..k_max {
        v = w * v;
        v /= v.norm();
        out.push(to_chart(sys.form(), &v)?);
    }
    Ok(out)
}

/// `y = a⁺ x⁺ + a⁻ x⁻ + y°` with `y°` in the unimodular subspace.
#[derive(Clone, Debug)]
pub struct HyperbolicDecomposition<T: Real> {
    /// Obstruction coefficient: `w^k y → x⁺` exactly when it is non-zero.
    pub a_plus: T,
    pub a_minus: T,
    pub rest: DVector<T>,
}

pub fn hyperbolic_decomposition<T: Real>(
    sys: &GeometricSystem<T>,
    sc: &SpectralClass<T>,
    y: &DVector<T>,
) -> Result<HyperbolicDecomposition<T>> {
    let h = sc.hyperbolic.as_ref().ok_or(Error::WrongKind {
        expected: "hyperbolic",
        got: sc.kind.name(),
    })?;
    let pm = sys.bilinear(&h.x_plus, &h.x_minus);
    let a_plus = sys.bilinear(y, &h.x_minus) / pm;
    let a_minus = sys.bilinear(y, &h.x_plus) / pm;
    let rest = y - &h.x_plus * a_plus - &h.x_minus * a_minus;
    Ok(HyperbolicDecomposition { a_plus, a_minus, rest })
}

/// The trajectory `w^k · base` of a hyperbolic element evaluated through
/// `w^k(y) = a⁺λ^k x⁺ + a⁻λ^{-k} x⁻ + w^k(y°)`.
///
/// Only `y°` is iterated by matrix products, and it is projected back onto
/// the invariant subspace `U_w` after each step. `w` is a `B`-isometry of the
/// space-like `U_w`, so no rounding is amplified; direct multiplication
/// instead grows rounding along `x⁺` by `λ` per step, which swamps the
/// trajectory within a few steps when `λ` is large and `a⁺ = 0`. A base
/// with `|B(y, x⁻)| ≤ 1e-12 · ‖y‖ ‖x⁻‖ ‖B‖` is treated as `a⁺ = 0`.
pub fn hyperbolic_power_dynamics<T: Real>(
    sys: &GeometricSystem<T>,
    sc: &SpectralClass<T>,
    w: &DMatrix<T>,
    base: &DVector<T>,
    k_max: usize,
) -> Result<Vec<ProjectivePoint<T>>> {
    let d = hyperbolic_decomposition(sys, sc, base)?;
    let h = sc.hyperbolic.as_ref().expect("decomposition checked the kind");
    let (mut p, mut q, mut rest) = (d.a_plus, d.a_minus, d.rest);
    // a base in H_{x⁻} up to rounding is taken to lie in it exactly
    let pairing = sys.bilinear(base, &h.x_minus).abs();
    if pairing <= T::tol(1e-12) * base.norm() * h.x_minus.norm() * linalg::max_abs(sys.form()) {
        p = T::zero();
    }
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let v = &h.x_plus * p + &h.x_minus * q + &rest;
        out.push(to_chart(sys.form(), &v)?);
        if k == k_max {
            break;
        }
        p *= h.lambda;
        q /= h.lambda;
        let next = w * &rest;
        let drift = hyperbolic_decomposition(sys, sc, &next)?;
        rest = drift.rest;
        // common positive rescaling keeps the projective point
        let scale = p.abs().max(q.abs()).max(rest.norm());
        if scale > T::lit(1e100) || (scale < T::lit(1e-100) && scale > T::zero()) {
            p /= scale;
            q /= scale;
            rest /= scale;
        }
    }
    Ok(out)
}

/// A periodic infinite word `prefix · period · period · …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicWord {
    pub prefix: Word,
    pub period: Word,
}

/// Default number of periods over which reducedness is certified.
pub const HORIZON: usize = 50;

impl PeriodicWord {
    pub fn new(prefix: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Parse("period must be non-empty".into()));
        }
        Ok(Self { prefix, period })
    }

    /// The finite prefix `prefix · period^k`.
    pub fn unrolled(&self, k: usize) -> Word {
        let mut w = self.prefix.clone();
        for _ in 0..k {
            w.extend_from_slice(&self.period);
        }
        w
    }

    /// Checks that `prefix · period^horizon` is reduced.
    pub fn certify<T: Real>(&self, sys: &GeometricSystem<T>, horizon: usize) -> Result<()> {
        inversion_roots(sys, &self.unrolled(horizon)).map(|_| ())
    }
}

/// Inversion roots `w_{k-1}(α_{s_k})`, each rescaled by a positive factor.
/// Errors with the offending letter if the word is not reduced.
fn inversion_roots<T: Real>(sys: &GeometricSystem<T>, word: &[usize]) -> Result<Vec<DVector<T>>> {
    let n = sys.rank();
    let mut m = DMatrix::<T>::identity(n, n);
    let mut out = Vec::with_capacity(word.len());
    for (k, &s) in word.iter().enumerate() {
        let g = sys.generator(s)?;
        let root: DVector<T> = m.column(s).into_owned();
        if height(&root) <= T::zero() {
            return Err(Error::NotReduced(k));
        }
        out.push(root);
        m *= g;
        // rescaling by a positive factor keeps every sign, and the chart
        let scale = linalg::max_abs(&m);
        if scale > T::lit(1e6) {
            m /= scale;
        }
    }
    Ok(out)
}

/// Inversion set of a reduced word: `ℓ(w)` distinct positive roots.
pub fn inversion_set<T: Real>(sys: &GeometricSystem<T>, word: &[usize]) -> Result<Vec<DVector<T>>> {
    let n = sys.rank();
    let mut m = DMatrix::<T>::identity(n, n);
    let mut out: Vec<DVector<T>> = Vec::with_capacity(word.len());
    for (k, &s) in word.iter().enumerate() {
        let root: DVector<T> = m.column(s).into_owned();
        let tol = T::tol(1e-9) * root.norm().max(T::one());
        if height(&root) <= T::zero() || out.iter().any(|r| (r - &root).norm() <= tol) {
            return Err(Error::NotReduced(k));
        }
        out.push(root);
        m *= sys.generator(s)?;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct WordLimit<T: Real> {
    pub point: ProjectivePoint<T>,
    /// Type of the period element.
    pub kind: Kind,
    /// Dominant eigenvalue for a hyperbolic period.
    pub lambda: Option<T>,
    /// Chart distance from the last inversion root at the horizon to `point`.
    pub residual: T,
    pub horizon: usize,
}

/// Limit root of an infinite reduced word with eventually periodic letters.
///
/// The word's prefixes `q p^k` have limit `q · x` where `x` is the dominant
/// (hyperbolic) or light-like (parabolic) eigendirection of the period `p`.
/// The residual compares against the inversion roots along the word, whose
/// accumulation point is the limit root; it shrinks geometrically for a
/// hyperbolic period and like `1/k` for a parabolic one.
pub fn word_limit_root<T: Real>(
    sys: &GeometricSystem<T>,
    pw: &PeriodicWord,
    horizon: usize,
    opts: &SpectralOptions,
) -> Result<WordLimit<T>> {
    sys.require_lorentzian()?;
    let roots = inversion_roots(sys, &pw.unrolled(horizon))?;
    let q = word_matrix(sys, &pw.prefix)?;
    let p = word_matrix(sys, &pw.period)?;
    let sc = classify_matrix(sys, &p, opts)?;
    let (x, lambda) = match (&sc.hyperbolic, &sc.parabolic) {
        (Some(h), _) => (&h.x_plus, Some(h.lambda)),
        (_, Some(par)) => (&par.x, None),
        _ => return Err(Error::EllipticPeriod),
    };
    let point = to_chart(sys.form(), &(&q * x))?;
    let last = to_chart(sys.form(), roots.last().expect("horizon ≥ 1 gives roots"))?;
    let residual = last.distance(&point).unwrap_or_else(|| T::lit(f64::INFINITY));
    Ok(WordLimit {
        point,
        kind: sc.kind,
        lambda,
        residual,
        horizon,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Hausdorff {
    pub distance: f64,
    /// Points at infinity left out of the comparison.
    pub excluded: usize,
}

/// Symmetric Hausdorff distance between the affine parts of two sets.
pub fn hausdorff<T: Real>(a: &PointSet<T>, b: &PointSet<T>) -> Result<Hausdorff> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let (ra, rb) = (a.rank().unwrap_or(0), b.rank().unwrap_or(0));
    if ra != rb {
        return Err(Error::RankMismatch(ra, rb));
    }
    let affine = |s: &PointSet<T>| -> Vec<DVector<f64>> {
        s.points()
            .iter()
            .filter_map(|p| match p.chart() {
                Chart::Affine(v) => Some(v.map(|x| x.as_f64())),
                Chart::AtInfinity(_) => None,
            })
            .collect()
    };
    let (pa, pb) = (affine(a), affine(b));
    let excluded = a.len() - pa.len() + b.len() - pb.len();
    if excluded > 0 {
        log::warn!("hausdorff: {excluded} point(s) at infinity excluded");
    }
    if pa.is_empty() || pb.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let distance = directed(&pa, &pb).max(directed(&pb, &pa));
    Ok(Hausdorff { distance, excluded })
}

fn directed(from: &[DVector<f64>], to: &[DVector<f64>]) -> f64 {
    from.par_iter()
        .map(|x| to.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
        .reduce(|| 0.0, f64::max)
}

/// Minimal chart distance from a trajectory to a point.
pub fn closest_approach<T: Real>(trajectory: &[ProjectivePoint<T>], target: &ProjectivePoint<T>) -> Option<T> {
    trajectory
        .iter()
        .filter_map(|p| p.distance(target))
        .reduce(|a, b| a.min(b))
}

/// Chart point of the conjugate direction `g · x`.
pub fn conjugate_direction<T: Real>(
    sys: &GeometricSystem<T>,
    g: &GroupElement<T>,
    x: &DVector<T>,
) -> Result<ProjectivePoint<T>> {
    to_chart(sys.form(), &(g.matrix() * x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::element_of;
    use crate::enumerate::enumerate;
    use crate::graph::CoxeterGraph;
    use crate::spectral::{classify, hyperbolic_directions};

    fn sys(name: &str) -> GeometricSystem<f64> {
        GeometricSystem::new(CoxeterGraph::builtin(name).unwrap()).unwrap()
    }

    fn pt(v: &[f64]) -> DVector<f64> {
        DVector::from_vec(v.to_vec())
    }

    #[test]
    fn point_set_merges_close_points() {
        let s = sys("universal3:1");
        let mut set = PointSet::new(1e-6);
        let prov = Provenance {
            kind: PointKind::Orbit,
            source_word: vec![],
            conjugator_word: vec![],
        };
        let a = to_chart(s.form(), &pt(&[0.5, 0.5, 0.0])).unwrap();
        let b = to_chart(s.form(), &pt(&[0.5 + 4e-7, 0.5 - 4e-7, 0.0])).unwrap();
        let c = to_chart(s.form(), &pt(&[0.5 + 4e-6, 0.5 - 4e-6, 0.0])).unwrap();
        assert!(set.insert(a, prov.clone()));
        assert!(!set.insert(b, prov.clone()));
        assert!(set.insert(c, prov));
        assert_eq!(set.len(), 2);
        assert_eq!("hyperbolic-eig".parse::<PointKind>().unwrap(), PointKind::HyperbolicEig);
    }

    #[test]
    fn parabolic_midpoints_from_length_two() {
        let s = sys("universal3:1");
        let store = enumerate(&s, 2).unwrap();
        let sample = sample_limit_roots(&s, &store, 2..=2, 0..=0, &SampleOptions::default()).unwrap();
        assert_eq!(sample.points.len(), 3);
        assert_eq!(sample.stats.parabolic, 6);
        for target in [[0.5, 0.5, 0.0], [0.5, 0.0, 0.5], [0.0, 0.5, 0.5]] {
            let t = to_chart(s.form(), &pt(&target)).unwrap();
            assert!(sample.points.nearby(&t).is_some());
        }
    }

    #[test]
    fn empty_core_is_reported() {
        let s = sys("universal3:1");
        let store = enumerate(&s, 2).unwrap();
        let r = sample_limit_roots(&s, &store, 0..=1, 0..=0, &SampleOptions::default());
        assert!(matches!(r, Err(Error::EmptyCore(0, 1))));
        let r = sample_limit_roots(&s, &store, 2..=3, 0..=0, &SampleOptions::default());
        assert!(matches!(r, Err(Error::StoreTooShort { .. })));
    }

    #[test]
    fn power_dynamics_converge_to_eigendirections() {
        let r2 = GeometricSystem::<f64>::new(CoxeterGraph::universal(2, 1.5).unwrap()).unwrap();
        let st = element_of(&r2, &[0, 1]).unwrap();
        let traj = power_dynamics(&r2, st.matrix(), &r2.simple_root(0), 40).unwrap();
        let last = traj.last().unwrap().coords();
        assert!((last[0] - 0.723607).abs() < 1e-6);

        let s = sys("universal3:1");
        let st = element_of(&s, &[0, 1]).unwrap();
        let traj = power_dynamics(&s, st.matrix(), &s.simple_root(2), 100_000).unwrap();
        let last = traj.last().unwrap();
        assert!(last.distance(&to_chart(s.form(), &pt(&[0.5, 0.5, 0.0])).unwrap()).unwrap() < 1e-4);
    }

    #[test]
    fn base_in_repelling_hyperplane_stays_off_dominant_direction() {
        let s = sys("universal3:1");
        let stu = element_of(&s, &[0, 1, 2]).unwrap();
        let sc = classify(&s, &stu).unwrap();
        let h = sc.hyperbolic.as_ref().unwrap();
        // x⁻ is fixed, though repelling: rounding grows like λ^{2k}
        let traj = power_dynamics(&s, stu.matrix(), &h.x_minus, 3).unwrap();
        assert!(traj.iter().all(|p| p.distance(&traj[0]).unwrap() < 1e-7));
        // y in H_{x⁻} with y° ≠ 0 accumulates on the unimodular line
        let y = s.simple_root(0);
        let d = hyperbolic_decomposition(&s, &sc, &y).unwrap();
        let y2 = &y - &h.x_plus * d.a_plus;
        let d2 = hyperbolic_decomposition(&s, &sc, &y2).unwrap();
        assert!(d2.a_plus.abs() < 1e-12 && d2.rest.norm() > 1e-3);
        let traj = power_dynamics(&s, stu.matrix(), &y2, 30).unwrap();
        let u = to_chart(s.form(), &sc.unimodular_basis.as_ref().unwrap()[0]).unwrap();
        // rounding in a⁺ grows like λ^k, so the approach bottoms out near √ε
    assert!(closest_approach(&traj, &u).unwrap() < 1e-6);
    }

    #[test]
    fn word_limits() {
        let s = sys("universal3:1");
        let opts = SpectralOptions::default();
        let stu = word_limit_root(&s, &PeriodicWord::new(vec![], vec![0, 1, 2]).unwrap(), HORIZON, &opts).unwrap();
        assert_eq!(stu.kind, Kind::Hyperbolic);
        assert!((stu.lambda.unwrap() - (9.0 + 4.0 * 5f64.sqrt())).abs() < 1e-8);
        assert!(stu.residual < 1e-6);
        let sc = classify(&s, &element_of(&s, &[0, 1, 2]).unwrap()).unwrap();
        assert!(hyperbolic_directions(&s, &sc).unwrap().0.distance(&stu.point).unwrap() < 1e-12);

        let st = word_limit_root(&s, &PeriodicWord::new(vec![], vec![0, 1]).unwrap(), HORIZON, &opts).unwrap();
        let ts = word_limit_root(&s, &PeriodicWord::new(vec![], vec![1, 0]).unwrap(), HORIZON, &opts).unwrap();
        assert_eq!(st.kind, Kind::Parabolic);
        assert!(st.point.distance(&ts.point).unwrap() < 1e-12);
        assert!((st.point.coords() - pt(&[0.5, 0.5, 0.0])).norm() < 1e-12);

        let ust = word_limit_root(&s, &PeriodicWord::new(vec![2], vec![0, 1]).unwrap(), HORIZON, &opts).unwrap();
        let expected = to_chart(s.form(), &(s.generators()[2].clone() * pt(&[0.5, 0.5, 0.0]))).unwrap();
        assert!(ust.point.distance(&expected).unwrap() < 1e-12);

        let ss = PeriodicWord::new(vec![], vec![0, 0]).unwrap();
        assert!(matches!(word_limit_root(&s, &ss, HORIZON, &opts), Err(Error::NotReduced(1))));
        let a2 = GeometricSystem::<f64>::new(CoxeterGraph::universal(3, 1.0).unwrap()).unwrap();
        assert!(PeriodicWord::new(vec![], vec![]).is_err());
        assert!(PeriodicWord::new(vec![0], vec![1, 2]).unwrap().certify(&a2, HORIZON).is_ok());
    }

    #[test]
    fn inversion_sets() {
        let s = sys("universal3:1");
        let one = inversion_set(&s, &[0]).unwrap();
        assert_eq!(one, vec![s.simple_root(0)]);
        let two = inversion_set(&s, &[0, 1]).unwrap();
        assert_eq!(two[1], pt(&[2.0, 1.0, 0.0]));
        assert_eq!(inversion_set(&s, &[0, 1, 2, 0, 1]).unwrap().len(), 5);
        assert!(matches!(inversion_set(&s, &[0, 1, 1]), Err(Error::NotReduced(2))));
    }

    #[test]
    fn hausdorff_basics() {
        let s = sys("universal3:1");
        let store = enumerate(&s, 4).unwrap();
        let small = sample_limit_roots(&s, &store, 2..=2, 0..=0, &SampleOptions::default())
            .unwrap()
            .points;
        let big = sample_limit_roots(&s, &store, 2..=2, 0..=2, &SampleOptions::default())
            .unwrap()
            .points;
        assert_eq!(hausdorff(&small, &small).unwrap().distance, 0.0);
        let h = hausdorff(&small, &big).unwrap().distance;
        let one_sided = directed(
            &big.points().iter().map(|p| p.coords().clone()).collect::<Vec<_>>(),
            &small.points().iter().map(|p| p.coords().clone()).collect::<Vec<_>>(),
        );
        assert_eq!(h, one_sided);
        assert!(matches!(hausdorff(&small, &PointSet::new(1e-6)), Err(Error::EmptyPointSet)));
    }

    #[test]
    fn orbit_of_time_like_point_approaches_cone() {
        let s = sys("universal3:1");
        let store = enumerate(&s, 8).unwrap();
        let base = pt(&[1.0, 1.0, 1.0]);
        let near = orbit_accumulate(&s, &base, &store, 2..=3, 1e-9).unwrap();
        let far = orbit_accumulate(&s, &base, &store, 7..=8, 1e-9).unwrap();
        assert!(far.max_abs_bnorm() < near.max_abs_bnorm());
    }
}
