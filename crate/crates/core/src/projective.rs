//! Points of the projective space PV, stored in the affine chart of the
//! simple roots, and the light cone seen through that chart.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::element::height;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Real;
use crate::system::GeometricSystem;

/// Relative height below which a vector is treated as lying at infinity.
pub const HEIGHT_TOL: f64 = 1e-12;
/// Relative band around zero for the causal character.
pub const ISO_TOL: f64 = 1e-9;

/// Position in the chart `{x : h(x) = 1}` or on the hyperplane at infinity.
#[derive(Clone, Debug, PartialEq)]
pub enum Chart<T: Real> {
    /// Coordinates summing to one.
    Affine(DVector<T>),
    /// Unit direction with zero coordinate sum; first non-zero entry positive.
    AtInfinity(DVector<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectivePoint<T: Real> {
    chart: Chart<T>,
    bnorm: T,
}

impl<T: Real> ProjectivePoint<T> {
    pub fn chart(&self) -> &Chart<T> {
        &self.chart
    }

    /// Representative vector: affine coordinates or the unit direction.
    pub fn coords(&self) -> &DVector<T> {
        match &self.chart {
            Chart::Affine(v) | Chart::AtInfinity(v) => v,
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self.chart, Chart::Affine(_))
    }

    /// `B(x, x)` of the stored representative.
    pub fn bnorm(&self) -> T {
        self.bnorm
    }

    pub fn rank(&self) -> usize {
        self.coords().len()
    }

    /// Euclidean distance in the chart; `None` if either point is at infinity.
    pub fn distance(&self, other: &Self) -> Option<T> {
        match (&self.chart, &other.chart) {
            (Chart::Affine(a), Chart::Affine(b)) => Some((a - b).norm()),
            _ => None,
        }
    }

    /// Image under a linear map preserving the form.
    pub fn act(&self, form: &DMatrix<T>, m: &DMatrix<T>) -> Result<Self> {
        to_chart(form, &(m * self.coords()))
    }

    /// Whether the affine coordinates are all at least `-tol` (so the point
    /// lies in the convex hull of the simple roots up to `tol`).
    pub fn in_simplex(&self, tol: T) -> bool {
        match &self.chart {
            Chart::Affine(a) => a.iter().all(|x| *x >= -tol && *x <= T::one() + tol),
            Chart::AtInfinity(_) => false,
        }
    }
}

/// Projectivizes a non-zero vector into the chart.
pub fn to_chart<T: Real>(form: &DMatrix<T>, v: &DVector<T>) -> Result<ProjectivePoint<T>> {
    let norm = v.norm();
    if norm == T::zero() || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let h = height(v);
    if h.abs() > T::tol(HEIGHT_TOL) * norm {
        let a = v / h;
        let bnorm = linalg::bilinear(form, &a, &a);
        return Ok(ProjectivePoint {
            chart: Chart::Affine(a),
            bnorm,
        });
    }
    let mut d = v / norm;
    let cut = T::tol(HEIGHT_TOL);
    if let Some(first) = d.iter().find(|x| x.abs() > cut).copied() {
        if first < T::zero() {
            d.neg_mut();
        }
    }
    let bnorm = linalg::bilinear(form, &d, &d);
    Ok(ProjectivePoint {
        chart: Chart::AtInfinity(d),
        bnorm,
    })
}

/// Rebuilds a point from stored chart coordinates without renormalizing,
/// so that serialized points read back bit for bit. Coordinates summing to
/// zero are taken as a direction at infinity.
pub fn from_chart_coords<T: Real>(form: &DMatrix<T>, coords: DVector<T>) -> Result<ProjectivePoint<T>> {
    let norm = coords.norm();
    if norm == T::zero() || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let bnorm = linalg::bilinear(form, &coords, &coords);
    let chart = if height(&coords).abs() > T::tol(HEIGHT_TOL) * norm {
        Chart::Affine(coords)
    } else {
        Chart::AtInfinity(coords)
    };
    Ok(ProjectivePoint { chart, bnorm })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CausalCharacter {
    SpaceLike,
    TimeLike,
    LightLike,
}

impl CausalCharacter {
    pub fn name(self) -> &'static str {
        match self {
            CausalCharacter::SpaceLike => "space-like",
            CausalCharacter::TimeLike => "time-like",
            CausalCharacter::LightLike => "light-like",
        }
    }
}

/// Sign of `B(v, v)` with a zero band of `1e-9 · ‖v‖²`.
pub fn causal_character<T: Real>(form: &DMatrix<T>, v: &DVector<T>) -> CausalCharacter {
    let q = linalg::bilinear(form, v, v);
    let band = T::tol(ISO_TOL) * v.norm_squared();
    if q > band {
        CausalCharacter::SpaceLike
    } else if q < -band {
        CausalCharacter::TimeLike
    } else {
        CausalCharacter::LightLike
    }
}

/// The light cone cut by the affine chart.
#[derive(Clone, Debug)]
pub struct ConicSection<T: Real> {
    /// Homogeneous quadric in chart coordinates `(x_1, …, x_{n-1}, 1)`,
    /// where the last simple-root coordinate is `1 - Σ x_i`.
    pub quadric: DMatrix<T>,
    /// Center of the section: the time-like point polar to the hyperplane
    /// at infinity.
    pub center: DVector<T>,
    /// Polylines of points on the cone, as full coordinates of height one.
    /// Rank 3: one closed loop. Rank 4: latitude rings then meridians.
    pub polylines: Vec<Vec<DVector<T>>>,
}

impl<T: Real> ConicSection<T> {
    pub fn vertices(&self) -> impl Iterator<Item = &DVector<T>> {
        self.polylines.iter().flatten()
    }

    /// Evaluates the chart quadric at full coordinates of height one.
    pub fn eval(&self, x: &DVector<T>) -> T {
        let n = x.len();
        let mut y = DVector::zeros(n);
        y.rows_mut(0, n - 1).copy_from(&x.rows(0, n - 1));
        y[n - 1] = T::one();
        linalg::bilinear(&self.quadric, &y, &y)
    }
}

/// Discretizes the light cone in the chart at the given resolution.
///
/// Requires a Lorentzian form whose polar point of the hyperplane at
/// infinity, `t = B⁻¹(1, …, 1)`, is time-like; the section is then an
/// ellipse (rank 3) or ellipsoid (rank 4). Each vertex is found exactly on
/// the cone along a ray from the center, since `B(center, d) = 0` for every
/// chart direction `d`.
pub fn light_conic<T: Real>(sys: &GeometricSystem<T>, resolution: usize) -> Result<ConicSection<T>> {
    let n = sys.rank();
    if n != 3 && n != 4 {
        return Err(Error::UnsupportedRank(n));
    }
    sys.require_lorentzian()?;
    let form = sys.form();
    let inv = form.clone().try_inverse().ok_or(Error::SingularForm)?;
    let polar = &inv * DVector::from_element(n, T::one());
    let q = linalg::bilinear(form, &polar, &polar);
    if q >= T::zero() {
        return Err(Error::UnboundedConic);
    }
    let center = &polar / height(&polar);
    let bcc = linalg::bilinear(form, &center, &center);
    let dirs = linalg::null_space(&DMatrix::from_element(1, n, T::one()), T::tol(1e-12));
    let on_cone = |d: DVector<T>| -> DVector<T> {
        let s = (-bcc / linalg::bilinear(form, &d, &d)).sqrt();
        &center + d * s
    };
    let res = resolution.max(8);
    let tau = T::two_pi();
    let mut polylines = Vec::new();
    if n == 3 {
        let ring = (0..res)
            .map(|k| {
                let th = tau * T::lit(k as f64) / T::lit(res as f64);
                on_cone(&dirs[0] * th.cos() + &dirs[1] * th.sin())
            })
            .collect();
        polylines.push(ring);
    } else {
        let lat = (res / 2).max(4);
        let sphere = |phi: T, th: T| -> DVector<T> {
            &dirs[0] * (phi.sin() * th.cos()) + &dirs[1] * (phi.sin() * th.sin()) + &dirs[2] * phi.cos()
        };
        for i in 1..lat {
            let phi = T::pi() * T::lit(i as f64) / T::lit(lat as f64);
            polylines.push(
                (0..res)
                    .map(|k| on_cone(sphere(phi, tau * T::lit(k as f64) / T::lit(res as f64))))
                    .collect(),
            );
        }
        for k in 0..res / 2 {
            let th = tau * T::lit(k as f64) / T::lit(res as f64);
            polylines.push(
                (0..=2 * lat)
                    .map(|i| on_cone(sphere(T::pi() * T::lit(i as f64) / T::lit(lat as f64), th)))
                    .collect(),
            );
        }
    }
    // chart parametrization x = e_n + Σ y_i (e_i - e_n)
    let mut p = DMatrix::zeros(n, n);
    for i in 0..n - 1 {
        p[(i, i)] = T::one();
        p[(n - 1, i)] = -T::one();
    }
    p[(n - 1, n - 1)] = T::one();
    let quadric = p.transpose() * form * &p;
    Ok(ConicSection {
        quadric,
        center,
        polylines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::CoxeterGraph;

    fn sys(name: &str) -> GeometricSystem<f64> {
        GeometricSystem::new(CoxeterGraph::builtin(name).unwrap()).unwrap()
    }

    #[test]
    fn simple_root_is_its_own_chart_point() {
        let s = sys("universal3:1");
        let p = to_chart(s.form(), &s.simple_root(1)).unwrap();
        assert_eq!(p.coords(), &s.simple_root(1));
        assert!(p.is_affine());
        assert_eq!(p.bnorm(), 1.0);
    }

    #[test]
    fn scaling_does_not_move_points() {
        let s = sys("universal3:1");
        let v = DVector::from_vec(vec![0.3, -1.2, 2.0]);
        let a = to_chart(s.form(), &v).unwrap();
        let b = to_chart(s.form(), &(&v * -3.0)).unwrap();
        assert!(a.distance(&b).unwrap() < 1e-15);
    }

    #[test]
    fn zero_height_goes_to_infinity() {
        let s = sys("universal3:1");
        let v = DVector::from_vec(vec![-1.0, 1.0, 0.0]);
        let p = to_chart(s.form(), &v).unwrap();
        let q = to_chart(s.form(), &(-&v)).unwrap();
        assert!(!p.is_affine());
        assert_eq!(p, q);
        assert!((p.coords().norm() - 1.0).abs() < 1e-15);
        assert!(p.coords()[0] > 0.0);
        assert!(to_chart(s.form(), &DVector::zeros(3)).is_err());
    }

    #[test]
    fn causal_characters() {
        let s = sys("universal3:1");
        assert_eq!(causal_character(s.form(), &s.simple_root(0)), CausalCharacter::SpaceLike);
        let mid = DVector::from_vec(vec![0.5, 0.5, 0.0]);
        assert_eq!(causal_character(s.form(), &mid), CausalCharacter::LightLike);
        // sum of fundamental weights for c = 1.1: B^{-1} applied to (1,1,1)
        let s11 = sys("universal3:1.1");
        let inv = s11.form().clone().try_inverse().unwrap();
        let w = inv * DVector::from_element(3, 1.0);
        assert_eq!(causal_character(s11.form(), &w), CausalCharacter::TimeLike);
    }

    #[test]
    fn conic_passes_through_edge_midpoints_for_c_one() {
        let s = sys("universal3:1");
        let c = light_conic(&s, 720).unwrap();
        for v in c.vertices() {
            assert!(s.bilinear(v, v).abs() < 1e-6);
            assert!((c.eval(v) - s.bilinear(v, v)).abs() < 1e-12);
        }
        for mid in [[0.5, 0.5, 0.0], [0.5, 0.0, 0.5], [0.0, 0.5, 0.5]] {
            let m = DVector::from_row_slice(&mid);
            let closest = c.vertices().map(|v| (v - &m).norm()).fold(f64::INFINITY, f64::min);
            assert!(closest < 5e-3, "midpoint {mid:?} is {closest} from the conic");
        }
    }

    #[test]
    fn conic_crosses_edges_for_c_above_one() {
        // Along the edge α_0 α_1 the form is 1 - 2c t(1-t)... it has two roots in (0,1).
        let s = sys("universal3:1.1");
        let c = light_conic(&s, 2000).unwrap();
        let outside = c.vertices().filter(|v| v.iter().any(|x| *x < 0.0)).count();
        assert!(outside > 0);
        let rank4 = light_conic(&sys("fig1a"), 64).unwrap();
        assert!(rank4.vertices().all(|v| sys("fig1a").bilinear(v, v).abs() < 1e-6));
        assert!(matches!(light_conic(&sys("fig8"), 10), Err(Error::UnsupportedRank(5))));
    }
}
