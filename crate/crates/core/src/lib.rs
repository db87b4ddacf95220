//! Limit roots of Lorentzian Coxeter systems.
//!
//! A Coxeter graph with a symmetric bilinear form `B` of signature `(n-1, 1)`
//! acts on `R^n` by reflections. Its roots accumulate on the light cone, and
//! the accumulation set can be sampled through light-like eigendirections of
//! infinite-order elements and their conjugates. This crate enumerates group
//! elements, classifies them as elliptic, parabolic or hyperbolic, samples
//! limit roots, and explores the projective Coxeter arrangement.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the aliases below fix `f64`, with `F32*` variants.
//!
//! ```
//! use limitroots::{enumerate, sample_limit_roots, CoxeterGraph, SampleOptions, System};
//!
//! let sys = System::new(CoxeterGraph::builtin("universal3:1")?)?;
//! let store = enumerate(&sys, 2)?;
//! let sample = sample_limit_roots(&sys, &store, 2..=2, 0..=0, &SampleOptions::default())?;
//! assert_eq!(sample.points.len(), 3);
//! # Ok::<(), limitroots::Error>(())
//! ```

pub mod arrangement;
pub mod element;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod io;
pub mod limits;
pub mod linalg;
pub mod projective;
pub mod scalar;
pub mod spectral;
pub mod svg;
pub mod system;
pub mod verify;

pub use arrangement::{
    codim2_intersections, codim2_spacelike, descend_to_fundamental, fundamental_weights, intersection_equals_unimodular,
    roots_by_depth, sign_vector, Codim2Intersection, Root, Sign, Weight,
};
pub use element::{element_of, format_word, parse_word, GroupElement, Word};
pub use enumerate::{enumerate, enumerate_with, ElementStore, EnumerateOptions};
pub use error::{Error, Result};
pub use graph::{CoxeterGraph, EdgeLabel};
pub use limits::{
    hausdorff, hyperbolic_power_dynamics, inversion_set, orbit_accumulate, power_dynamics, sample_limit_roots,
    word_limit_root, PeriodicWord, PointKind, PointSet, Provenance, Sample, SampleOptions, WordLimit,
};
pub use projective::{causal_character, light_conic, to_chart, CausalCharacter, Chart, ProjectivePoint};
pub use scalar::Real;
pub use spectral::{
    classify, classify_matrix, hyperbolic_directions, parabolic_direction, unimodular_subspace, Kind, SpectralClass,
    SpectralOptions,
};
pub use system::{FormType, GeometricSystem, Signature};

pub type System = GeometricSystem<f64>;
pub type Element = GroupElement<f64>;
pub type Store = ElementStore<f64>;
pub type Point = ProjectivePoint<f64>;
pub type Points = PointSet<f64>;
pub type Spectrum = SpectralClass<f64>;

pub type F32System = GeometricSystem<f32>;
pub type F32Element = GroupElement<f32>;
pub type F32Store = ElementStore<f32>;
pub type F32Point = ProjectivePoint<f32>;
pub type F32Points = PointSet<f32>;
pub type F32Spectrum = SpectralClass<f32>;
