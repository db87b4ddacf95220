//! Named verification suites with measured quantities and thresholds.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use serde::Serialize;

use crate::arrangement::{codim2_spacelike, fundamental_weights, roots_by_depth, unimodular_mismatch};
use crate::element::{element_of, format_word, Word};
use crate::enumerate::enumerate;
use crate::error::{Error, Result};
use crate::limits::{hausdorff, hyperbolic_power_dynamics, sample_limit_roots, PointKind, SampleOptions};
use crate::linalg;
use crate::projective::{causal_character, to_chart, CausalCharacter};
use crate::scalar::Real;
use crate::spectral::{classify_matrix, unimodular_subspace, Kind, SpectralOptions};
use crate::system::GeometricSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Suite {
    Isotropy,
    Density,
    Sandwich,
    Spectra,
    Weights,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Isotropy, Suite::Density, Suite::Sandwich, Suite::Spectra, Suite::Weights];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Isotropy => "isotropy",
            Suite::Density => "density",
            Suite::Sandwich => "sandwich",
            Suite::Spectra => "spectra",
            Suite::Weights => "weights",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}' (expected isotropy, density, sandwich, spectra or weights)")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Check {
    pub fn at_most(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            threshold,
            passed: measured <= threshold,
            note: String::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {:e} (threshold {:e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.threshold
        )?;
        if !self.note.is_empty() {
            write!(f, " [{}]", self.note)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    fn new(suite: Suite, checks: Vec<Check>) -> Self {
        let passed = !checks.is_empty() && checks.iter().all(|c| c.passed);
        Self { suite, checks, passed }
    }
}

#[derive(Clone, Debug)]
pub struct Budgets {
    /// Core lengths `min_core..=core` and conjugator lengths `0..=conj`.
    pub min_core: usize,
    pub core: usize,
    pub conj: usize,
    /// Root depth for arrangement suites.
    pub depth: usize,
    /// Hyperbolic budgets `(core = conj = b)` compared by the density suite.
    pub density: [usize; 3],
    /// Length bound for the parabolic versus hyperbolic comparison.
    pub pair_length: usize,
    /// Element whose spectrum is checked; defaults per graph.
    pub word: Option<Word>,
    /// Expected eigenvalue moduli for `word`, with multiplicity.
    pub expected: Option<Vec<f64>>,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            min_core: 2,
            core: 4,
            conj: 4,
            depth: 5,
            density: [2, 4, 6],
            pair_length: 8,
            word: None,
            expected: None,
        }
    }
}

pub fn run<T: Real>(sys: &GeometricSystem<T>, suite: Suite, budgets: &Budgets) -> Result<Report> {
    match suite {
        Suite::Isotropy => isotropy(sys, budgets),
        Suite::Density => density(sys, budgets),
        Suite::Sandwich => sandwich(sys, budgets.depth),
        Suite::Spectra => spectra(sys, budgets),
        Suite::Weights => weights(sys, budgets.depth),
    }
}

/// Limit-root samples are isotropic and inside the simplex.
pub fn isotropy<T: Real>(sys: &GeometricSystem<T>, b: &Budgets) -> Result<Report> {
    let store = enumerate(sys, b.core.max(b.conj))?;
    let sample = sample_limit_roots(sys, &store, b.min_core..=b.core, 0..=b.conj, &SampleOptions::default())?;
    let points = sample.points.points();
    let bnorm = points.iter().fold(0.0f64, |a, p| a.max(p.bnorm().as_f64().abs()));
    let outside = points
        .iter()
        .map(|p| p.coords().iter().fold(0.0f64, |a, x| a.max(-x.as_f64()).max(x.as_f64() - 1.0)))
        .fold(0.0f64, f64::max);
    let note = format!("{} points", points.len());
    Ok(Report::new(
        Suite::Isotropy,
        vec![
            Check::at_most("max |B(x,x)|", bnorm, 1e-7).with_note(note.clone()),
            Check::at_most("max distance outside conv(Δ)", outside, 1e-9).with_note(note),
        ],
    ))
}

/// Hausdorff distance, with the empty set at infinite distance.
fn distance_or_inf<T: Real>(a: &crate::limits::PointSet<T>, b: &crate::limits::PointSet<T>) -> f64 {
    hausdorff(a, b).map_or(f64::INFINITY, |h| h.distance)
}

/// Hyperbolic samples get closer as budgets grow, and parabolic and
/// hyperbolic samples approximate each other.
pub fn density<T: Real>(sys: &GeometricSystem<T>, b: &Budgets) -> Result<Report> {
    let [small, mid, big] = b.density;
    let store = enumerate(sys, big.max(b.pair_length))?;
    let opts = SampleOptions {
        only: Some(Kind::Hyperbolic),
        ..Default::default()
    };
    let hyp = |n: usize| {
        sample_limit_roots(sys, &store, 0..=n, 0..=n, &opts)
            .map(|s| s.points)
            .or_else(|e| match e {
                Error::EmptyCore(..) => Ok(crate::limits::PointSet::new(opts.dedup_eps)),
                e => Err(e),
            })
    };
    let (s_small, s_mid, s_big) = (hyp(small)?, hyp(mid)?, hyp(big)?);
    let d_small = distance_or_inf(&s_small, &s_big);
    let d_mid = distance_or_inf(&s_mid, &s_big);
    let mut checks = vec![Check::at_most(format!("d_H(S{mid}, S{big}) vs d_H(S{small}, S{big})"), d_mid, d_small).with_note(
        format!("{} / {} / {} hyperbolic points", s_small.len(), s_mid.len(), s_big.len()),
    )];
    if s_small.is_empty() && small + 1 < mid {
        let s_next = hyp(small + 1)?;
        let d_next = distance_or_inf(&s_next, &s_big);
        checks.push(
            Check::at_most(format!("d_H(S{mid}, S{big}) vs d_H(S{}, S{big})", small + 1), d_mid, d_next)
                .with_note(format!("S{small} is empty; next budget has {} points", s_next.len())),
        );
    }
    let all = sample_limit_roots(sys, &store, 0..=b.pair_length, 0..=0, &SampleOptions::default())?.points;
    let par = all.of_kind(PointKind::ParabolicEig);
    let hy = all.of_kind(PointKind::HyperbolicEig);
    checks.push(
        Check::at_most(format!("d_H(parabolic, hyperbolic) at length {}", b.pair_length), distance_or_inf(&par, &hy), 0.15)
            .with_note(format!("{} parabolic, {} hyperbolic", par.len(), hy.len())),
    );
    Ok(Report::new(Suite::Density, checks))
}

/// Results of the sandwich check for one root pair.
#[derive(Clone, Debug)]
pub struct SandwichPair {
    pub words: (Word, Word),
    pub pairing: f64,
    pub mismatch: f64,
    pub approach: f64,
}

/// For every space-like pair of roots up to `depth`: the intersection equals
/// the unimodular subspace of `σ_{γ₁}σ_{γ₂}`, and the power dynamics from a
/// base in the hyperplane `B(·, x⁻) = 0` accumulate on it. The approach is
/// the least chart distance from a trajectory point to its projection on the
/// intersection.
pub fn sandwich_pairs<T: Real>(sys: &GeometricSystem<T>, depth: usize) -> Result<Vec<SandwichPair>> {
    sys.require_lorentzian()?;
    let roots = roots_by_depth(sys, depth);
    let pairs = codim2_spacelike(sys, &roots);
    pairs
        .iter()
        .map(|ci| {
            let mismatch = unimodular_mismatch(sys, ci)?.as_f64();
            let m = sys.reflection(&ci.pair.0.vector) * sys.reflection(&ci.pair.1.vector);
            let sc = classify_matrix(sys, &m, &SpectralOptions::default())?;
            let h = sc.hyperbolic.as_ref().ok_or(Error::WrongKind {
                expected: "hyperbolic",
                got: sc.kind.name(),
            })?;
            // y = x⁻ + y° lies in the hyperplane B(·, x⁻) = 0 with y° ≠ 0
            let rest = unimodular_subspace(&sc)?.iter().fold(DVector::zeros(sys.rank()), |a, u| a + u);
            let base = &h.x_minus + rest;
            let traj = hyperbolic_power_dynamics(sys, &sc, &m, &base, 60)?;
            let approach = traj
                .iter()
                .map(|p| {
                    let target = projection_onto(&ci.basis, p.coords());
                    match to_chart(sys.form(), &target).ok().and_then(|t| p.distance(&t)) {
                        Some(d) => d.as_f64(),
                        // intersection at infinity: fall back to the angle
                        None => {
                            let v = p.coords() / p.coords().norm();
                            (&v - projection_onto(&ci.basis, &v)).norm().as_f64()
                        }
                    }
                })
                .fold(f64::INFINITY, f64::min);
            Ok(SandwichPair {
                words: (ci.pair.0.word.clone(), ci.pair.1.word.clone()),
                pairing: ci.pairing.as_f64(),
                mismatch,
                approach,
            })
        })
        .collect()
}

fn projection_onto<T: Real>(basis: &[DVector<T>], v: &DVector<T>) -> DVector<T> {
    basis.iter().fold(DVector::zeros(v.len()), |acc, b| acc + b * b.dot(v))
}

pub fn sandwich<T: Real>(sys: &GeometricSystem<T>, depth: usize) -> Result<Report> {
    let pairs = sandwich_pairs(sys, depth)?;
    let worst_angle = pairs.iter().max_by(|a, b| a.mismatch.total_cmp(&b.mismatch));
    let worst_approach = pairs.iter().max_by(|a, b| a.approach.total_cmp(&b.approach));
    let describe = |p: Option<&SandwichPair>| {
        p.map_or(String::from("no space-like pairs"), |p| {
            format!("{} pairs; worst ({}, {})", pairs.len(), format_word(&p.words.0), format_word(&p.words.1))
        })
    };
    Ok(Report::new(
        Suite::Sandwich,
        vec![
            Check::at_most("max principal sine, intersection vs unimodular", worst_angle.map_or(f64::INFINITY, |p| p.mismatch), 1e-7)
                .with_note(describe(worst_angle)),
            Check::at_most("max closest approach from repelling hyperplane", worst_approach.map_or(f64::INFINITY, |p| p.approach), 1e-5)
                .with_note(describe(worst_approach)),
        ],
    ))
}

/// Word and expected spectrum used by default: the counterexample element
/// of the rank-5 built-in, or the Coxeter element `0.1…(n-1)`.
pub fn default_spectrum_word<T: Real>(sys: &GeometricSystem<T>) -> (Word, Option<Vec<f64>>) {
    let fig8 = crate::graph::CoxeterGraph::builtin("fig8").expect("built-in");
    if sys.graph() == &fig8 {
        let r = 3f64.sqrt() * 4.0;
        (vec![0, 1, 3, 4], Some(vec![1.0, 7.0 + r, 7.0 + r, 7.0 - r, 7.0 - r]))
    } else {
        ((0..sys.rank()).collect(), None)
    }
}

/// Eigenvalues of one element: `B`-isometry, inversion symmetry of the
/// spectrum, and an optional expected list.
pub fn spectra<T: Real>(sys: &GeometricSystem<T>, b: &Budgets) -> Result<Report> {
    let (default_word, default_expected) = default_spectrum_word(sys);
    let word = b.word.clone().unwrap_or(default_word);
    let expected = b.expected.clone().or(if b.word.is_none() { default_expected } else { None });
    let w = element_of(sys, &word)?;
    let m = w.matrix();
    let iso = linalg::max_abs(&(m.transpose() * sys.form() * m - sys.form())).as_f64();
    let mut eig: Vec<(f64, f64)> = linalg::complex_eigenvalues(m)
        .iter()
        .map(|z| (z.re.as_f64(), z.im.as_f64()))
        .collect();
    eig.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let inversion = eig
        .iter()
        .map(|&(re, im)| {
            let r2 = re * re + im * im;
            let inv = (re / r2, -im / r2);
            eig.iter()
                .map(|&(a, b)| ((a - inv.0).powi(2) + (b - inv.1).powi(2)).sqrt() / (1.0 + r2.sqrt()))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0f64, f64::max);
    let listing = eig
        .iter()
        .map(|(re, im)| if im.abs() > 1e-12 { format!("{re:.9}{im:+.9}i") } else { format!("{re:.9}") })
        .collect::<Vec<_>>()
        .join(", ");
    let mut checks = vec![
        Check::at_most(format!("|MᵀBM - B| for {}", format_word(w.word())), iso, 1e-9).with_note(format!("signature {}", sys.signature())),
        Check::at_most("spectrum closed under λ ↦ 1/λ̄", inversion, 1e-6).with_note(listing),
    ];
    if let Some(mut exp) = expected {
        exp.sort_by(f64::total_cmp);
        let err = if exp.len() == eig.len() {
            eig.iter()
                .zip(&exp)
                .map(|(&(re, im), e)| ((re - e).powi(2) + im * im).sqrt())
                .fold(0.0f64, f64::max)
        } else {
            f64::INFINITY
        };
        checks.push(Check::at_most("max eigenvalue error vs expected", err, 1e-8));
    }
    Ok(Report::new(Suite::Spectra, checks))
}

/// `B(α_s, ω_t) = δ_st`; in rank 3 every space-like weight is also a sampled
/// space-like intersection point.
pub fn weights<T: Real>(sys: &GeometricSystem<T>, depth: usize) -> Result<Report> {
    let ws = fundamental_weights(sys)?;
    let n = sys.rank();
    let mut delta = 0.0f64;
    for s in 0..n {
        for w in &ws {
            let target = if s == w.index { 1.0 } else { 0.0 };
            delta = delta.max((sys.bilinear(&sys.simple_root(s), &w.vector).as_f64() - target).abs());
        }
    }
    let characters = ws
        .iter()
        .map(|w| format!("ω{}: {} ({:.6})", w.index, causal_character(sys.form(), &w.vector).name(), sys.bilinear(&w.vector, &w.vector).as_f64()))
        .collect::<Vec<_>>()
        .join(", ");
    let mut checks = vec![Check::at_most("max |B(α_s, ω_t) - δ_st|", delta, 1e-10).with_note(characters)];
    if n == 3 && sys.is_lorentzian() {
        let points: Vec<_> = codim2_spacelike(sys, &roots_by_depth(sys, depth))
            .iter()
            .filter_map(|c| c.point(sys))
            .collect();
        let mut worst = 0.0f64;
        let mut count = 0;
        for w in ws.iter().filter(|w| causal_character(sys.form(), &w.vector) == CausalCharacter::SpaceLike) {
            count += 1;
            let p = to_chart(sys.form(), &w.vector)?;
            let d = points
                .iter()
                .filter_map(|q| q.distance(&p))
                .map(|x| x.as_f64())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
        if count > 0 {
            checks.push(
                Check::at_most("max distance from space-like weight to an intersection", worst, 1e-7)
                    .with_note(format!("{count} space-like weights, {} intersection points", points.len())),
            );
        }
    }
    Ok(Report::new(Suite::Weights, checks))
}
