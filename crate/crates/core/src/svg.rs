//! Deterministic SVG pictures of the affine chart.
//!
//! Rank 3 draws the chart triangle directly; rank 4 shows the chart
//! tetrahedron under a fixed orthographic projection.

use std::fmt::Write as _;

use nalgebra::{DVector, Matrix2x3, Vector2, Vector3};

use crate::arrangement::Root;
use crate::element::height;
use crate::error::{Error, Result};
use crate::limits::{PointKind, PointSet};
use crate::projective::{Chart, ConicSection, ProjectivePoint};
use crate::scalar::Real;
use crate::system::GeometricSystem;

#[derive(Clone, Debug)]
pub struct PlotOptions {
    /// Width and height in pixels.
    pub size: f64,
    /// Padding around the content, as a fraction of its extent.
    pub margin: f64,
    pub point_radius: f64,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self {
            size: 800.0,
            margin: 0.05,
            point_radius: 1.2,
        }
    }
}

pub fn kind_color(kind: PointKind) -> &'static str {
    match kind {
        PointKind::ParabolicEig => "#d62728",
        PointKind::HyperbolicEig => "#1f77b4",
        PointKind::Orbit => "#7f7f7f",
        PointKind::Intersection => "#2ca02c",
        PointKind::Weight => "#9467bd",
    }
}

type P2 = (f64, f64);

/// Things to draw, already projected to the plane.
#[derive(Clone, Debug)]
pub struct Scene {
    rank: usize,
    simplex: Vec<(P2, P2)>,
    conic: Vec<Vec<P2>>,
    lines: Vec<(P2, P2)>,
    points: Vec<(P2, PointKind)>,
    dots: Vec<P2>,
    diamonds: Vec<P2>,
}

fn vertices(rank: usize) -> Vec<[f64; 3]> {
    if rank == 3 {
        vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, 3f64.sqrt() / 2.0, 0.0]]
    } else {
        vec![[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
    }
}

impl Scene {
    pub fn new(rank: usize) -> Result<Self> {
        if rank != 3 && rank != 4 {
            return Err(Error::UnsupportedRank(rank));
        }
        let v: Vec<P2> = (0..rank)
            .map(|i| {
                let mut e = vec![0.0; rank];
                e[i] = 1.0;
                project_f64(rank, &e)
            })
            .collect();
        let simplex = (0..rank)
            .flat_map(|i| (i + 1..rank).map(move |j| (i, j)))
            .map(|(i, j)| (v[i], v[j]))
            .collect();
        Ok(Self {
            rank,
            simplex,
            conic: Vec::new(),
            lines: Vec::new(),
            points: Vec::new(),
            dots: Vec::new(),
            diamonds: Vec::new(),
        })
    }

    fn check(&self, rank: usize) -> Result<()> {
        if rank == self.rank {
            Ok(())
        } else {
            Err(Error::RankMismatch(rank, self.rank))
        }
    }

    pub fn conic<T: Real>(&mut self, conic: &ConicSection<T>) -> Result<&mut Self> {
        self.check(conic.center.len())?;
        for line in &conic.polylines {
            let mut poly: Vec<P2> = line.iter().map(|x| project(self.rank, x)).collect();
            if self.rank == 3 {
                poly.push(poly[0]);
            }
            self.conic.push(poly);
        }
        Ok(self)
    }

    /// Affine points of a set, coloured by kind; points at infinity are skipped.
    pub fn points<T: Real>(&mut self, set: &PointSet<T>) -> Result<&mut Self> {
        if let Some(r) = set.rank() {
            self.check(r)?;
        }
        for (p, prov) in set.iter() {
            if let Chart::Affine(a) = p.chart() {
                self.points.push((project(self.rank, a), prov.kind));
            }
        }
        Ok(self)
    }

    /// Lines `H_γ ∩ aff(Δ)`; only drawn in rank 3.
    pub fn hyperplanes<T: Real>(&mut self, sys: &GeometricSystem<T>, roots: &[Root<T>]) -> Result<&mut Self> {
        self.check(sys.rank())?;
        if self.rank != 3 {
            return Ok(self);
        }
        for r in roots {
            let bg = sys.form() * &r.vector;
            let normal = Vector3::new(bg[0].as_f64(), bg[1].as_f64(), bg[2].as_f64());
            // the chart line {x : normal·x = 0, Σx = 1}
            let ones = Vector3::new(1.0, 1.0, 1.0);
            let dir = normal.cross(&ones);
            if dir.norm() < 1e-12 {
                continue;
            }
            let rows = Matrix2x3::from_rows(&[normal.transpose(), ones.transpose()]);
            let gram = (rows * rows.transpose()).try_inverse().expect("independent rows");
            let base = rows.transpose() * gram * Vector2::new(0.0, 1.0);
            let dir = dir / dir.norm() * 100.0;
            let (a, b) = (base - dir, base + dir);
            self.lines.push((project_f64(3, a.as_slice()), project_f64(3, b.as_slice())));
        }
        Ok(self)
    }

    pub fn dots<'a, T: Real + 'a>(&mut self, pts: impl IntoIterator<Item = &'a ProjectivePoint<T>>) -> Result<&mut Self> {
        for p in pts {
            self.check(p.rank())?;
            if let Chart::Affine(a) = p.chart() {
                self.dots.push(project(self.rank, a));
            }
        }
        Ok(self)
    }

    /// Diamonds at the chart points of vectors with non-zero height.
    pub fn diamonds<'a, T: Real + 'a>(&mut self, vs: impl IntoIterator<Item = &'a DVector<T>>) -> Result<&mut Self> {
        for v in vs {
            self.check(v.len())?;
            let h = height(v);
            if h.abs() > T::tol(1e-12) * v.norm() {
                self.diamonds.push(project(self.rank, &(v / h)));
            }
        }
        Ok(self)
    }

    pub fn render(&self, opts: &PlotOptions) -> String {
        let mut xs: Vec<P2> = self.simplex.iter().flat_map(|(a, b)| [*a, *b]).collect();
        xs.extend(self.conic.iter().flatten());
        xs.extend(self.points.iter().map(|(p, _)| *p));
        xs.extend(&self.dots);
        xs.extend(&self.diamonds);
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in xs.iter().filter(|(x, y)| x.is_finite() && y.is_finite()) {
            x0 = x0.min(*x);
            x1 = x1.max(*x);
            y0 = y0.min(*y);
            y1 = y1.max(*y);
        }
        let extent = (x1 - x0).max(y1 - y0).max(1e-9);
        let pad = extent * opts.margin;
        let scale = opts.size / (extent + 2.0 * pad);
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        let s = opts.size;
        let map = |(x, y): P2| -> P2 { (s / 2.0 + (x - cx) * scale, s / 2.0 - (y - cy) * scale) };

        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#
        );
        let _ = writeln!(out, r#"<clipPath id="view"><rect x="0" y="0" width="{s}" height="{s}"/></clipPath>"#);
        let _ = writeln!(out, r#"<rect width="{s}" height="{s}" fill="white"/>"#);
        let _ = writeln!(out, r##"<g clip-path="url(#view)" stroke="#bbbbbb" stroke-width="0.6">"##);
        for (a, b) in &self.lines {
            line(&mut out, map(*a), map(*b));
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(out, r#"<g stroke="black" stroke-width="1.2">"#);
        for (a, b) in &self.simplex {
            line(&mut out, map(*a), map(*b));
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(out, r##"<g fill="none" stroke="#444444" stroke-width="0.8">"##);
        for poly in &self.conic {
            let pts: Vec<String> = poly
                .iter()
                .map(|p| {
                    let (x, y) = map(*p);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let _ = writeln!(out, r#"<polyline points="{}"/>"#, pts.join(" "));
        }
        let _ = writeln!(out, "</g>");
        for kind in PointKind::ALL {
            let members: Vec<P2> = self.points.iter().filter(|(_, k)| *k == kind).map(|(p, _)| map(*p)).collect();
            if members.is_empty() {
                continue;
            }
            let _ = writeln!(out, r#"<g class="{}" fill="{}">"#, kind.name(), kind_color(kind));
            for (x, y) in members {
                let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{}"/>"#, opts.point_radius);
            }
            let _ = writeln!(out, "</g>");
        }
        if !self.dots.is_empty() {
            let _ = writeln!(out, r#"<g class="intersections" fill="black">"#);
            for p in &self.dots {
                let (x, y) = map(*p);
                let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{}"/>"#, opts.point_radius * 2.5);
            }
            let _ = writeln!(out, "</g>");
        }
        if !self.diamonds.is_empty() {
            let _ = writeln!(out, r#"<g class="weights" fill="black">"#);
            let r = opts.point_radius * 4.0;
            for p in &self.diamonds {
                let (x, y) = map(*p);
                let _ = writeln!(
                    out,
                    r#"<polygon points="{:.3},{:.3} {:.3},{:.3} {:.3},{:.3} {:.3},{:.3}"/>"#,
                    x,
                    y - r,
                    x + r,
                    y,
                    x,
                    y + r,
                    x - r,
                    y
                );
            }
            let _ = writeln!(out, "</g>");
        }
        out.push_str("</svg>\n");
        out
    }
}

fn line(out: &mut String, (x1, y1): P2, (x2, y2): P2) {
    let _ = writeln!(out, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
}

fn project<T: Real>(rank: usize, coords: &DVector<T>) -> P2 {
    let c: Vec<f64> = coords.iter().map(|x| x.as_f64()).collect();
    project_f64(rank, &c)
}

/// Barycentric coordinates to the plane.
fn project_f64(rank: usize, coords: &[f64]) -> P2 {
    let v = vertices(rank);
    let mut p = [0.0; 3];
    for (c, vert) in coords.iter().zip(&v) {
        for k in 0..3 {
            p[k] += c * vert[k];
        }
    }
    if rank == 3 {
        return (p[0], p[1]);
    }
    // rotate 35° about the vertical axis, then tilt 20°
    let (a, b) = (35f64.to_radians(), 20f64.to_radians());
    let x = a.cos() * p[0] + a.sin() * p[2];
    let z = -a.sin() * p[0] + a.cos() * p[2];
    let y = b.cos() * p[1] - b.sin() * z;
    (x, y)
}
