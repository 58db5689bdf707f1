//! Phase-space regions, contours and points, with quadrature decompositions
//! realizing `∫_S dq dp`, `∫_C dl` and point evaluation.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::fock::PhasePoint;
use crate::specfun::{self, QuadratureRule};
use crate::{Error, Result};

/// Geometric description of a set in phase space.
///
/// Areas (dimension 2), contours (1), points (0), or a tensor product of
/// single-degree-of-freedom factors in a higher-dimensional phase space.
#[derive(Debug, Clone, PartialEq)]
pub enum RegionSpec {
    Disk {
        center: PhasePoint,
        radius: f64,
    },
    Annulus {
        center: PhasePoint,
        inner: f64,
        outer: f64,
    },
    /// Axis-aligned rectangle given by opposite corners.
    Rectangle {
        min: PhasePoint,
        max: PhasePoint,
    },
    /// Simple polygon; either orientation.
    Polygon {
        vertices: Vec<PhasePoint>,
    },
    CircleContour {
        center: PhasePoint,
        radius: f64,
    },
    SegmentContour {
        from: PhasePoint,
        to: PhasePoint,
    },
    PolylineContour {
        vertices: Vec<PhasePoint>,
    },
    Point(PhasePoint),
    TensorProduct(Vec<RegionSpec>),
}

/// Weighted nodes whose weights sum to the exact measure of the region.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureDecomposition {
    pub points: Vec<(PhasePoint, f64)>,
    pub exact_measure: f64,
}

impl QuadratureDecomposition {
    pub fn total_weight(&self) -> f64 {
        self.points.iter().map(|(_, w)| w).sum()
    }

    pub fn integrate<F: FnMut(PhasePoint) -> f64>(&self, mut f: F) -> f64 {
        self.points.iter().map(|&(pt, w)| w * f(pt)).sum()
    }
}

impl RegionSpec {
    pub fn disk(radius: f64) -> Self {
        RegionSpec::Disk {
            center: PhasePoint::ORIGIN,
            radius,
        }
    }

    pub fn circle(radius: f64) -> Self {
        RegionSpec::CircleContour {
            center: PhasePoint::ORIGIN,
            radius,
        }
    }

    /// Segment of the given length along the `p` axis, centered at the origin.
    pub fn p_axis_segment(length: f64) -> Self {
        RegionSpec::SegmentContour {
            from: PhasePoint::new(0.0, -0.5 * length),
            to: PhasePoint::new(0.0, 0.5 * length),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RegionSpec::Disk { .. } => "disk",
            RegionSpec::Annulus { .. } => "annulus",
            RegionSpec::Rectangle { .. } => "rectangle",
            RegionSpec::Polygon { .. } => "polygon",
            RegionSpec::CircleContour { .. } => "circle_contour",
            RegionSpec::SegmentContour { .. } => "segment_contour",
            RegionSpec::PolylineContour { .. } => "polyline_contour",
            RegionSpec::Point(_) => "point",
            RegionSpec::TensorProduct(_) => "tensor_product",
        }
    }

    /// 2 for areas, 1 for contours, 0 for points; tensor products sum.
    pub fn dimension(&self) -> usize {
        match self {
            RegionSpec::Disk { .. }
            | RegionSpec::Annulus { .. }
            | RegionSpec::Rectangle { .. }
            | RegionSpec::Polygon { .. } => 2,
            RegionSpec::CircleContour { .. }
            | RegionSpec::SegmentContour { .. }
            | RegionSpec::PolylineContour { .. } => 1,
            RegionSpec::Point(_) => 0,
            RegionSpec::TensorProduct(factors) => factors.iter().map(|f| f.dimension()).sum(),
        }
    }

    /// Number of degrees of freedom of the phase space the region lives in.
    pub fn degrees_of_freedom(&self) -> usize {
        match self {
            RegionSpec::TensorProduct(factors) => factors.len(),
            _ => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidRegion(msg));
        let finite = |pts: &[PhasePoint]| pts.iter().all(|p| p.is_finite());
        match self {
            RegionSpec::Disk { center, radius } | RegionSpec::CircleContour { center, radius } => {
                if !center.is_finite() {
                    return bad(format!("{}: center is not finite", self.kind()));
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return bad(format!(
                        "{}: radius must be positive, got {radius}",
                        self.kind()
                    ));
                }
            }
            RegionSpec::Annulus {
                center,
                inner,
                outer,
            } => {
                if !center.is_finite() {
                    return bad("annulus: center is not finite".into());
                }
                if !(inner.is_finite() && outer.is_finite() && *inner > 0.0 && inner < outer) {
                    return bad(format!(
                        "annulus: need 0 < inner < outer, got inner {inner}, outer {outer}"
                    ));
                }
            }
            RegionSpec::Rectangle { min, max } => {
                if !finite(&[*min, *max]) {
                    return bad("rectangle: corners are not finite".into());
                }
                if !(min.q < max.q && min.p < max.p) {
                    return bad("rectangle: min corner must lie strictly below max corner".into());
                }
            }
            RegionSpec::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return bad(format!(
                        "polygon: need at least 3 vertices, got {}",
                        vertices.len()
                    ));
                }
                if !finite(vertices) {
                    return bad("polygon: vertices are not finite".into());
                }
                if signed_area(vertices).abs() <= 0.0 {
                    return bad("polygon: zero area".into());
                }
                if let Some((i, j)) = self_intersection(vertices) {
                    return bad(format!("polygon: edges {i} and {j} intersect"));
                }
            }
            RegionSpec::SegmentContour { from, to } => {
                if !finite(&[*from, *to]) {
                    return bad("segment_contour: endpoints are not finite".into());
                }
                if from == to {
                    return bad("segment_contour: endpoints coincide".into());
                }
            }
            RegionSpec::PolylineContour { vertices } => {
                if vertices.len() < 2 {
                    return bad("polyline_contour: need at least 2 vertices".into());
                }
                if !finite(vertices) {
                    return bad("polyline_contour: vertices are not finite".into());
                }
                if vertices.windows(2).any(|w| w[0] == w[1]) {
                    return bad("polyline_contour: consecutive vertices coincide".into());
                }
            }
            RegionSpec::Point(pt) => {
                if !pt.is_finite() {
                    return bad("point: coordinates are not finite".into());
                }
            }
            RegionSpec::TensorProduct(factors) => {
                if factors.len() < 2 {
                    return bad("tensor_product: need at least 2 factors".into());
                }
                for f in factors {
                    if matches!(f, RegionSpec::TensorProduct(_)) {
                        return bad("tensor_product: factors must be single-DOF regions".into());
                    }
                    f.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Area, length, or 1 for a point. Tensor products multiply.
    pub fn measure(&self) -> f64 {
        match self {
            RegionSpec::Disk { radius, .. } => PI * radius * radius,
            RegionSpec::Annulus { inner, outer, .. } => PI * (outer * outer - inner * inner),
            RegionSpec::Rectangle { min, max } => (max.q - min.q) * (max.p - min.p),
            RegionSpec::Polygon { vertices } => signed_area(vertices).abs(),
            RegionSpec::CircleContour { radius, .. } => 2.0 * PI * radius,
            RegionSpec::SegmentContour { from, to } => from.dist(*to),
            RegionSpec::PolylineContour { vertices } => {
                vertices.windows(2).map(|w| w[0].dist(w[1])).sum()
            }
            RegionSpec::Point(_) => 1.0,
            RegionSpec::TensorProduct(factors) => factors.iter().map(|f| f.measure()).product(),
        }
    }

    /// Boundary length of an area.
    pub fn perimeter(&self) -> Result<f64> {
        match self {
            RegionSpec::Disk { radius, .. } => Ok(2.0 * PI * radius),
            RegionSpec::Annulus { inner, outer, .. } => Ok(2.0 * PI * (inner + outer)),
            RegionSpec::Rectangle { min, max } => Ok(2.0 * ((max.q - min.q) + (max.p - min.p))),
            RegionSpec::Polygon { vertices } => {
                Ok(closed_edges(vertices).map(|(a, b)| a.dist(b)).sum())
            }
            _ => Err(not_an_area(self)),
        }
    }

    /// Axis-aligned bounding box `(min, max)` of a single-DOF region.
    pub fn bounding_box(&self) -> Result<(PhasePoint, PhasePoint)> {
        let around = |c: PhasePoint, r: f64| {
            (
                PhasePoint::new(c.q - r, c.p - r),
                PhasePoint::new(c.q + r, c.p + r),
            )
        };
        let hull = |pts: &[PhasePoint]| {
            let mut lo = pts[0];
            let mut hi = pts[0];
            for p in pts {
                lo.q = lo.q.min(p.q);
                lo.p = lo.p.min(p.p);
                hi.q = hi.q.max(p.q);
                hi.p = hi.p.max(p.p);
            }
            (lo, hi)
        };
        Ok(match self {
            RegionSpec::Disk { center, radius } | RegionSpec::CircleContour { center, radius } => {
                around(*center, *radius)
            }
            RegionSpec::Annulus { center, outer, .. } => around(*center, *outer),
            RegionSpec::Rectangle { min, max } => (*min, *max),
            RegionSpec::Polygon { vertices } | RegionSpec::PolylineContour { vertices } => {
                hull(vertices)
            }
            RegionSpec::SegmentContour { from, to } => hull(&[*from, *to]),
            RegionSpec::Point(pt) => (*pt, *pt),
            RegionSpec::TensorProduct(_) => {
                return Err(Error::Unsupported(
                    "bounding box of a tensor_product region".into(),
                ))
            }
        })
    }

    /// Closed-set membership for areas (the boundary counts as inside).
    pub fn contains(&self, pt: PhasePoint) -> Result<bool> {
        match self {
            RegionSpec::Disk { center, radius } => Ok((pt - *center).norm_sqr() <= radius * radius),
            RegionSpec::Annulus {
                center,
                inner,
                outer,
            } => {
                let r2 = (pt - *center).norm_sqr();
                Ok(r2 >= inner * inner && r2 <= outer * outer)
            }
            RegionSpec::Rectangle { min, max } => {
                Ok(pt.q >= min.q && pt.q <= max.q && pt.p >= min.p && pt.p <= max.p)
            }
            RegionSpec::Polygon { vertices } => Ok(polygon_contains(vertices, pt)),
            _ => Err(not_an_area(self)),
        }
    }

    /// Quadrature decomposition at the given resolution (≥ 4).
    ///
    /// - disk, annulus: Gauss–Legendre in the radius × trapezoid in the angle
    ///   (`4·resolution` angles, spectrally accurate on the periodic variable);
    /// - rectangle: Gauss–Legendre product;
    /// - polygon: fan of triangles from the area centroid, each mapped from
    ///   a square Gauss–Legendre product (signed weights, so non-convex
    ///   simple polygons are handled exactly);
    /// - circle: trapezoid rule in the angle with `4·resolution` nodes;
    /// - segment, polyline: Gauss–Legendre in arclength on each edge;
    /// - point: one node of unit weight.
    ///
    /// Tensor products are decomposed per factor and are rejected here.
    pub fn decompose(&self, resolution: usize) -> Result<QuadratureDecomposition> {
        self.validate()?;
        if resolution < 4 {
            return Err(Error::InvalidRegion(format!(
                "resolution must be at least 4, got {resolution}"
            )));
        }
        let mut points = Vec::new();
        match self {
            RegionSpec::Disk { center, radius } => {
                polar(&mut points, *center, 0.0, *radius, resolution)?;
            }
            RegionSpec::Annulus {
                center,
                inner,
                outer,
            } => {
                polar(&mut points, *center, *inner, *outer, resolution)?;
            }
            RegionSpec::Rectangle { min, max } => {
                let rq = specfun::gauss_legendre(resolution, min.q, max.q)?;
                let rp = specfun::gauss_legendre(resolution, min.p, max.p)?;
                for (q, wq) in rq.iter() {
                    for (p, wp) in rp.iter() {
                        points.push((PhasePoint::new(q, p), wq * wp));
                    }
                }
            }
            RegionSpec::Polygon { vertices } => {
                let unit = specfun::gauss_legendre(resolution, 0.0, 1.0)?;
                let c = area_centroid(vertices);
                let orientation = signed_area(vertices).signum();
                for (a, b) in closed_edges(vertices) {
                    triangle(&mut points, &unit, c, a, b, orientation);
                }
            }
            RegionSpec::CircleContour { center, radius } => {
                let m = 4 * resolution;
                let w = 2.0 * PI * radius / m as f64;
                for j in 0..m {
                    let theta = 2.0 * PI * j as f64 / m as f64;
                    let (s, co) = libm::sincos(theta);
                    points.push((
                        PhasePoint::new(center.q + radius * co, center.p + radius * s),
                        w,
                    ));
                }
            }
            RegionSpec::SegmentContour { from, to } => {
                segment(&mut points, *from, *to, resolution)?;
            }
            RegionSpec::PolylineContour { vertices } => {
                for w in vertices.windows(2) {
                    segment(&mut points, w[0], w[1], resolution)?;
                }
            }
            RegionSpec::Point(pt) => points.push((*pt, 1.0)),
            RegionSpec::TensorProduct(_) => {
                return Err(Error::Unsupported(
                    "tensor_product regions are decomposed per factor".into(),
                ))
            }
        }
        Ok(QuadratureDecomposition {
            points,
            exact_measure: self.measure(),
        })
    }

    /// The region translated by `offset`.
    pub fn translated(&self, offset: PhasePoint) -> RegionSpec {
        self.map_points(&|p| p + offset)
    }

    /// The region rotated counter-clockwise about the origin.
    ///
    /// Rectangles are axis-aligned and turn into polygons.
    pub fn rotated(&self, angle: f64) -> RegionSpec {
        if let RegionSpec::Rectangle { min, max } = self {
            let corners = [
                *min,
                PhasePoint::new(max.q, min.p),
                *max,
                PhasePoint::new(min.q, max.p),
            ];
            return RegionSpec::Polygon {
                vertices: corners.iter().map(|c| c.rotated(angle)).collect(),
            };
        }
        self.map_points(&|p| p.rotated(angle))
    }

    fn map_points(&self, f: &dyn Fn(PhasePoint) -> PhasePoint) -> RegionSpec {
        match self {
            RegionSpec::Disk { center, radius } => RegionSpec::Disk {
                center: f(*center),
                radius: *radius,
            },
            RegionSpec::Annulus {
                center,
                inner,
                outer,
            } => RegionSpec::Annulus {
                center: f(*center),
                inner: *inner,
                outer: *outer,
            },
            RegionSpec::Rectangle { min, max } => RegionSpec::Rectangle {
                min: f(*min),
                max: f(*max),
            },
            RegionSpec::Polygon { vertices } => RegionSpec::Polygon {
                vertices: vertices.iter().map(|&v| f(v)).collect(),
            },
            RegionSpec::CircleContour { center, radius } => RegionSpec::CircleContour {
                center: f(*center),
                radius: *radius,
            },
            RegionSpec::SegmentContour { from, to } => RegionSpec::SegmentContour {
                from: f(*from),
                to: f(*to),
            },
            RegionSpec::PolylineContour { vertices } => RegionSpec::PolylineContour {
                vertices: vertices.iter().map(|&v| f(v)).collect(),
            },
            RegionSpec::Point(pt) => RegionSpec::Point(f(*pt)),
            RegionSpec::TensorProduct(fs) => {
                RegionSpec::TensorProduct(fs.iter().map(|r| r.map_points(f)).collect())
            }
        }
    }
}

fn not_an_area(region: &RegionSpec) -> Error {
    Error::Unsupported(format!(
        "{} has dimension {}; only areas have interior points",
        region.kind(),
        region.dimension()
    ))
}

fn polar(
    out: &mut Vec<(PhasePoint, f64)>,
    center: PhasePoint,
    r0: f64,
    r1: f64,
    resolution: usize,
) -> Result<()> {
    let radial = specfun::gauss_legendre(resolution, r0, r1)?;
    let m = 4 * resolution;
    let dtheta = 2.0 * PI / m as f64;
    let angles: Vec<(f64, f64)> = (0..m).map(|j| libm::sincos(dtheta * j as f64)).collect();
    for (r, wr) in radial.iter() {
        let w = wr * r * dtheta;
        for &(s, c) in &angles {
            out.push((PhasePoint::new(center.q + r * c, center.p + r * s), w));
        }
    }
    Ok(())
}

fn segment(
    out: &mut Vec<(PhasePoint, f64)>,
    from: PhasePoint,
    to: PhasePoint,
    resolution: usize,
) -> Result<()> {
    let len = from.dist(to);
    let rule = specfun::gauss_legendre(resolution, 0.0, 1.0)?;
    for (t, w) in rule.iter() {
        out.push((from + t * (to - from), w * len));
    }
    Ok(())
}

// Collapsed square: x = c + u (a − c) + u v (b − a), Jacobian u · det(a − c, b − c).
fn triangle(
    out: &mut Vec<(PhasePoint, f64)>,
    unit: &QuadratureRule,
    c: PhasePoint,
    a: PhasePoint,
    b: PhasePoint,
    orientation: f64,
) {
    let ea = a - c;
    let eb = b - a;
    let det = cross(ea, b - c) * orientation;
    for (u, wu) in unit.iter() {
        for (v, wv) in unit.iter() {
            let pt = c + u * ea + (u * v) * eb;
            out.push((pt, wu * wv * u * det));
        }
    }
}

fn cross(a: PhasePoint, b: PhasePoint) -> f64 {
    a.q * b.p - a.p * b.q
}

fn closed_edges(vertices: &[PhasePoint]) -> impl Iterator<Item = (PhasePoint, PhasePoint)> + '_ {
    let n = vertices.len();
    (0..n).map(move |i| (vertices[i], vertices[(i + 1) % n]))
}

fn signed_area(vertices: &[PhasePoint]) -> f64 {
    0.5 * closed_edges(vertices)
        .map(|(a, b)| cross(a, b))
        .sum::<f64>()
}

fn area_centroid(vertices: &[PhasePoint]) -> PhasePoint {
    let a = signed_area(vertices);
    let mut cq = 0.0;
    let mut cp = 0.0;
    for (u, v) in closed_edges(vertices) {
        let k = cross(u, v);
        cq += (u.q + v.q) * k;
        cp += (u.p + v.p) * k;
    }
    PhasePoint::new(cq / (6.0 * a), cp / (6.0 * a))
}

/// First pair of non-adjacent edges that intersect, if any.
fn self_intersection(vertices: &[PhasePoint]) -> Option<(usize, usize)> {
    let n = vertices.len();
    let edge = |i: usize| (vertices[i], vertices[(i + 1) % n]);
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (a, b) = edge(i);
            let (c, d) = edge(j);
            if adjacent {
                // Adjacent edges share one vertex; they may only overlap if collinear
                // and folding back.
                let shared_back = if j == i + 1 { b } else { a };
                let (other_i, other_j) = if j == i + 1 { (a, d) } else { (b, c) };
                if cross(other_i - shared_back, other_j - shared_back) == 0.0
                    && dot(other_i - shared_back, other_j - shared_back) > 0.0
                {
                    return Some((i, j));
                }
                continue;
            }
            if segments_intersect(a, b, c, d) {
                return Some((i, j));
            }
        }
    }
    None
}

fn dot(a: PhasePoint, b: PhasePoint) -> f64 {
    a.q * b.q + a.p * b.p
}

fn orient(a: PhasePoint, b: PhasePoint, c: PhasePoint) -> f64 {
    cross(b - a, c - a)
}

fn on_segment(a: PhasePoint, b: PhasePoint, p: PhasePoint) -> bool {
    p.q >= a.q.min(b.q) && p.q <= a.q.max(b.q) && p.p >= a.p.min(b.p) && p.p <= a.p.max(b.p)
}

fn segments_intersect(a: PhasePoint, b: PhasePoint, c: PhasePoint, d: PhasePoint) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

fn polygon_contains(vertices: &[PhasePoint], pt: PhasePoint) -> bool {
    let mut inside = false;
    for (a, b) in closed_edges(vertices) {
        if orient(a, b, pt) == 0.0 && on_segment(a, b, pt) {
            return true;
        }
        if (a.p > pt.p) != (b.p > pt.p) {
            let q_cross = a.q + (pt.p - a.p) * (b.q - a.q) / (b.p - a.p);
            if pt.q < q_cross {
                inside = !inside;
            }
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pentagon() -> RegionSpec {
        RegionSpec::Polygon {
            vertices: (0..5)
                .map(|k| {
                    PhasePoint::new(1.2, 0.0).rotated(2.0 * PI * k as f64 / 5.0)
                        + PhasePoint::new(0.3, -0.2)
                })
                .collect(),
        }
    }

    #[test]
    fn disk_area_identity() {
        let d = RegionSpec::disk(2.0).decompose(32).unwrap();
        assert!((d.total_weight() - 4.0 * PI).abs() < 1e-10);
        assert!((d.exact_measure - 4.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn segment_length_identity() {
        let d = RegionSpec::p_axis_segment(3.0).decompose(16).unwrap();
        assert!((d.total_weight() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_measure() {
        let regions = vec![
            RegionSpec::Annulus {
                center: PhasePoint::new(1.0, 2.0),
                inner: 0.5,
                outer: 1.5,
            },
            RegionSpec::Rectangle {
                min: PhasePoint::new(-1.0, -0.5),
                max: PhasePoint::new(1.0, 0.5),
            },
            pentagon(),
            // non-convex "L"
            RegionSpec::Polygon {
                vertices: vec![
                    PhasePoint::new(0.0, 0.0),
                    PhasePoint::new(2.0, 0.0),
                    PhasePoint::new(2.0, 1.0),
                    PhasePoint::new(1.0, 1.0),
                    PhasePoint::new(1.0, 2.0),
                    PhasePoint::new(0.0, 2.0),
                ],
            },
            RegionSpec::circle(1.3),
            RegionSpec::PolylineContour {
                vertices: vec![
                    PhasePoint::new(0.0, 0.0),
                    PhasePoint::new(3.0, 4.0),
                    PhasePoint::new(3.0, 0.0),
                ],
            },
            RegionSpec::Point(PhasePoint::new(0.2, 0.1)),
        ];
        for r in regions {
            let d = r.decompose(12).unwrap();
            assert!(
                (d.total_weight() - d.exact_measure).abs() < 1e-10,
                "{}: {} vs {}",
                r.kind(),
                d.total_weight(),
                d.exact_measure
            );
        }
    }

    #[test]
    fn non_convex_polygon_integrates_exactly() {
        // ∫∫ q² over the L-shape = ∫_0^2 q² dq ∫_0^1 dp + ∫_0^1 q² dq ∫_1^2 dp = 8/3 + 1/3
        let l = RegionSpec::Polygon {
            vertices: vec![
                PhasePoint::new(0.0, 0.0),
                PhasePoint::new(2.0, 0.0),
                PhasePoint::new(2.0, 1.0),
                PhasePoint::new(1.0, 1.0),
                PhasePoint::new(1.0, 2.0),
                PhasePoint::new(0.0, 2.0),
            ],
        };
        let v = l.decompose(8).unwrap().integrate(|p| p.q * p.q);
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn disk_decomposition_converges() {
        let f = |p: PhasePoint| libm::exp(-p.norm_sqr());
        for radius in [0.5, 1.0, 3.0] {
            let disk = RegionSpec::disk(radius);
            let coarse = disk.decompose(32).unwrap().integrate(f);
            let fine = disk.decompose(64).unwrap().integrate(f);
            assert!((coarse - fine).abs() < 1e-10);
            let exact = PI * (1.0 - libm::exp(-radius * radius));
            assert!((fine - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn rigid_motion_preserves_weights() {
        let sort = |mut w: Vec<f64>| {
            w.sort_by(|a, b| a.partial_cmp(b).unwrap());
            w
        };
        for region in [
            RegionSpec::disk(1.5),
            pentagon(),
            RegionSpec::p_axis_segment(2.0),
            RegionSpec::circle(0.7),
        ] {
            let base = region.decompose(16).unwrap();
            let moved_region = region.rotated(0.7).translated(PhasePoint::new(1.5, -2.0));
            let moved = moved_region.decompose(16).unwrap();
            let a = sort(base.points.iter().map(|p| p.1).collect());
            let b = sort(moved.points.iter().map(|p| p.1).collect());
            assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12, "{}", region.kind());
            }
            // nodes move with the region, except where the shape is itself
            // rotation invariant and keeps its angular nodes
            if matches!(
                region,
                RegionSpec::Disk { .. } | RegionSpec::CircleContour { .. }
            ) {
                continue;
            }
            for ((p, _), (m, _)) in base.points.iter().zip(&moved.points) {
                let expect = p.rotated(0.7) + PhasePoint::new(1.5, -2.0);
                assert!(expect.dist(*m) < 1e-12);
            }
        }
    }

    #[test]
    fn membership() {
        let d = RegionSpec::disk(1.0);
        assert!(d.contains(PhasePoint::new(0.5, 0.0)).unwrap());
        assert!(d.contains(PhasePoint::new(1.0, 0.0)).unwrap());
        assert!(!d.contains(PhasePoint::new(1.0, 0.1)).unwrap());
        let ring = RegionSpec::Annulus {
            center: PhasePoint::ORIGIN,
            inner: 1.0,
            outer: 2.0,
        };
        assert!(!ring.contains(PhasePoint::ORIGIN).unwrap());
        assert!(ring.contains(PhasePoint::new(0.0, 1.0)).unwrap());
        let square = RegionSpec::Polygon {
            vertices: vec![
                PhasePoint::new(0.0, 0.0),
                PhasePoint::new(1.0, 0.0),
                PhasePoint::new(1.0, 1.0),
                PhasePoint::new(0.0, 1.0),
            ],
        };
        assert!(square.contains(PhasePoint::new(1.0, 0.5)).unwrap());
        assert!(square.contains(PhasePoint::new(0.0, 0.0)).unwrap());
        assert!(!square.contains(PhasePoint::new(1.01, 0.5)).unwrap());
        assert!(square.contains(PhasePoint::new(0.3, 0.9)).unwrap());
    }

    #[test]
    fn membership_rejects_lower_dimensions() {
        assert!(matches!(
            RegionSpec::circle(1.0).contains(PhasePoint::ORIGIN),
            Err(Error::Unsupported(_))
        ));
        assert!(RegionSpec::Point(PhasePoint::ORIGIN)
            .contains(PhasePoint::ORIGIN)
            .is_err());
    }

    #[test]
    fn validation() {
        let bow = RegionSpec::Polygon {
            vertices: vec![
                PhasePoint::new(0.0, 0.0),
                PhasePoint::new(1.0, 1.0),
                PhasePoint::new(1.0, 0.0),
                PhasePoint::new(0.0, 1.0),
            ],
        };
        assert!(matches!(bow.decompose(8), Err(Error::InvalidRegion(_))));
        assert!(RegionSpec::disk(0.0).validate().is_err());
        assert!(RegionSpec::Annulus {
            center: PhasePoint::ORIGIN,
            inner: 2.0,
            outer: 1.0
        }
        .validate()
        .is_err());
        assert!(RegionSpec::SegmentContour {
            from: PhasePoint::ORIGIN,
            to: PhasePoint::ORIGIN
        }
        .validate()
        .is_err());
        let nested = RegionSpec::TensorProduct(vec![
            RegionSpec::disk(1.0),
            RegionSpec::TensorProduct(vec![RegionSpec::disk(1.0), RegionSpec::disk(1.0)]),
        ]);
        assert!(nested.validate().is_err());
        let cyl =
            RegionSpec::TensorProduct(vec![RegionSpec::disk(1.0), RegionSpec::p_axis_segment(3.0)]);
        assert!(cyl.validate().is_ok());
        assert_eq!(cyl.dimension(), 3);
        assert!(matches!(cyl.decompose(8), Err(Error::Unsupported(_))));
        assert!(RegionSpec::disk(1.0).decompose(3).is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(RegionSpec::disk(1.0).dimension(), 2);
        assert_eq!(RegionSpec::circle(1.0).dimension(), 1);
        assert_eq!(RegionSpec::Point(PhasePoint::ORIGIN).dimension(), 0);
        let rect_in_section = RegionSpec::TensorProduct(vec![
            RegionSpec::SegmentContour {
                from: PhasePoint::new(-0.5, 0.0),
                to: PhasePoint::new(0.5, 0.0),
            },
            RegionSpec::SegmentContour {
                from: PhasePoint::new(-1.0, 0.0),
                to: PhasePoint::new(1.0, 0.0),
            },
        ]);
        assert_eq!(rect_in_section.dimension(), 2);
        assert_eq!(rect_in_section.degrees_of_freedom(), 2);
    }
}
