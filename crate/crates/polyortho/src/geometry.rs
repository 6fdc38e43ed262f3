//! Polygons, triangulations, barycentric coordinates and domain points.
//!
//! All types are immutable after construction and safe to share across
//! threads. Orientation is normalized on input: outer rings
//! counter-clockwise, holes clockwise, triangles counter-clockwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dist(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Signed area of a closed ring (shoelace). Positive for counter-clockwise.
pub fn ring_signed_area(ring: &[Point2]) -> f64 {
    let n = ring.len();
    let mut s = 0.0;
    for i in 0..n {
        let p = ring[i];
        let q = ring[(i + 1) % n];
        s += p.x * q.y - q.x * p.y;
    }
    0.5 * s
}

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn segments_properly_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

fn ring_is_simple(ring: &[Point2]) -> bool {
    let n = ring.len();
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        for j in i + 1..n {
            // skip adjacent segments (sharing an endpoint)
            if j == i || (j + 1) % n == i || j == (i + 1) % n {
                continue;
            }
            let (c, d) = (ring[j], ring[(j + 1) % n]);
            if segments_properly_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// A polygonal domain: one outer ring, optional holes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Polygon {
    /// Counter-clockwise boundary.
    pub outer: Vec<Point2>,
    /// Clockwise hole rings, strictly inside the outer ring.
    #[serde(default)]
    pub holes: Vec<Vec<Point2>>,
}

impl Polygon {
    /// Build from raw rings, normalizing orientation and validating.
    pub fn new(outer: Vec<Point2>, holes: Vec<Vec<Point2>>) -> Result<Self> {
        let mut p = Polygon { outer, holes };
        p.normalize_and_validate()?;
        Ok(p)
    }

    pub fn from_coords(outer: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            outer.iter().map(|&(x, y)| Point2::new(x, y)).collect(),
            vec![],
        )
    }

    fn normalize_and_validate(&mut self) -> Result<()> {
        let check_ring = |ring: &[Point2], what: &str| -> Result<()> {
            if ring.len() < 3 {
                return Err(Error::InvalidInput(format!(
                    "{what} ring has {} vertices, need at least 3",
                    ring.len()
                )));
            }
            if ring.iter().any(|p| !p.is_finite()) {
                return Err(Error::InvalidInput(format!("{what} ring has non-finite vertex")));
            }
            let area = ring_signed_area(ring).abs();
            let scale: f64 = ring
                .iter()
                .map(|p| p.x.abs().max(p.y.abs()))
                .fold(0.0, f64::max)
                .max(1e-300);
            if area <= 1e-14 * scale * scale {
                return Err(Error::InvalidInput(format!("{what} ring has zero area")));
            }
            if !ring_is_simple(ring) {
                return Err(Error::InvalidInput(format!("{what} ring self-intersects")));
            }
            Ok(())
        };
        check_ring(&self.outer, "outer")?;
        if ring_signed_area(&self.outer) < 0.0 {
            self.outer.reverse();
        }
        for (i, h) in self.holes.iter_mut().enumerate() {
            check_ring(h, &format!("hole {i}"))?;
            if ring_signed_area(h) > 0.0 {
                h.reverse();
            }
        }
        Ok(())
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        let mut min = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in self.outer.iter().chain(self.holes.iter().flatten()) {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        (min, max)
    }

    /// All boundary segments (outer plus holes).
    pub fn segments(&self) -> Vec<(Point2, Point2)> {
        let mut segs = Vec::new();
        let mut push_ring = |ring: &[Point2]| {
            for i in 0..ring.len() {
                segs.push((ring[i], ring[(i + 1) % ring.len()]));
            }
        };
        push_ring(&self.outer);
        for h in &self.holes {
            push_ring(h);
        }
        segs
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Triangle {
    pub v1: Point2,
    pub v2: Point2,
    pub v3: Point2,
}

impl Triangle {
    /// Counter-clockwise triangle; rejects degenerate input.
    pub fn new(v1: Point2, v2: Point2, v3: Point2) -> Result<Self> {
        let t = Triangle { v1, v2, v3 };
        if t.signed_area() <= 0.0 {
            let t = Triangle { v1, v2: v3, v3: v2 };
            if t.signed_area() <= 0.0 {
                return Err(Error::InvalidInput("degenerate triangle".into()));
            }
            return Ok(t);
        }
        Ok(t)
    }

    pub fn signed_area(&self) -> f64 {
        0.5 * cross(self.v1, self.v2, self.v3)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn diameter(&self) -> f64 {
        self.v1
            .dist(&self.v2)
            .max(self.v2.dist(&self.v3))
            .max(self.v3.dist(&self.v1))
    }

    pub fn centroid(&self) -> Point2 {
        Point2::new(
            (self.v1.x + self.v2.x + self.v3.x) / 3.0,
            (self.v1.y + self.v2.y + self.v3.y) / 3.0,
        )
    }
}

/// Barycentric coordinates of `p` with respect to `t`.
///
/// Defined for points outside the triangle as well (the affine extension).
pub fn barycentric(t: &Triangle, p: &Point2) -> Result<(f64, f64, f64)> {
    let det = cross(t.v1, t.v2, t.v3);
    let scale = t.diameter();
    if det.abs() <= 1e-14 * scale * scale {
        return Err(Error::InvalidInput("zero-area triangle in barycentric".into()));
    }
    let b1 = cross(*p, t.v2, t.v3) / det;
    let b2 = cross(t.v1, *p, t.v3) / det;
    let b3 = 1.0 - b1 - b2;
    Ok((b1, b2, b3))
}

/// Domain points xi_ijk = (i*v1 + j*v2 + k*v3)/d over i+j+k=d, in the
/// canonical multi-index order of the `bb` module.
pub fn domain_points(t: &Triangle, d: u32) -> Vec<Point2> {
    let d = d.max(1);
    let mut pts = Vec::with_capacity(((d + 1) * (d + 2) / 2) as usize);
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            let k = d - i - j;
            let (fi, fj, fk) = (i as f64, j as f64, k as f64);
            pts.push(Point2::new(
                (fi * t.v1.x + fj * t.v2.x + fk * t.v3.x) / d as f64,
                (fi * t.v1.y + fj * t.v2.y + fk * t.v3.y) / d as f64,
            ));
        }
    }
    pts
}

/// Edge shared by two triangles of a triangulation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct InteriorEdge {
    /// Endpoint vertex indices.
    pub a: usize,
    pub b: usize,
    /// Indices of the two incident triangles.
    pub left: usize,
    pub right: usize,
}

/// A conforming triangulation: triangles meet in shared vertices or full
/// shared edges, every triangle counter-clockwise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Triangulation {
    pub points: Vec<Point2>,
    pub tris: Vec<[usize; 3]>,
    #[serde(skip)]
    pub interior_edges: Vec<InteriorEdge>,
}

impl Triangulation {
    pub fn from_parts(points: Vec<Point2>, tris: Vec<[usize; 3]>) -> Result<Self> {
        if tris.is_empty() {
            return Err(Error::InvalidInput("empty triangulation".into()));
        }
        let n = points.len();
        let mut tris = tris;
        for t in tris.iter_mut() {
            if t.iter().any(|&i| i >= n) {
                return Err(Error::InvalidInput("triangle index out of range".into()));
            }
            let tri = Triangle {
                v1: points[t[0]],
                v2: points[t[1]],
                v3: points[t[2]],
            };
            let sa = tri.signed_area();
            let scale = tri.diameter();
            if sa.abs() <= 1e-14 * scale * scale {
                return Err(Error::InvalidInput("degenerate triangle in triangulation".into()));
            }
            if sa < 0.0 {
                t.swap(1, 2);
            }
        }
        let mut out = Triangulation {
            points,
            tris,
            interior_edges: Vec::new(),
        };
        out.rebuild_interior_edges()?;
        Ok(out)
    }

    /// Recompute `interior_edges` from `points`/`tris` (also used after
    /// deserialization, where the field is skipped).
    pub fn rebuild_interior_edges(&mut self) -> Result<()> {
        use std::collections::HashMap;
        let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (ti, t) in self.tris.iter().enumerate() {
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                let key = (a.min(b), a.max(b));
                by_edge.entry(key).or_default().push(ti);
            }
        }
        let mut edges = Vec::new();
        for (&(a, b), owners) in &by_edge {
            match owners.len() {
                1 => {}
                2 => edges.push(InteriorEdge {
                    a,
                    b,
                    left: owners[0].min(owners[1]),
                    right: owners[0].max(owners[1]),
                }),
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "edge ({a},{b}) shared by {} triangles; not conforming",
                        owners.len()
                    )))
                }
            }
        }
        // deterministic order
        edges.sort_by_key(|e| (e.a, e.b));
        self.interior_edges = edges;
        Ok(())
    }

    pub fn triangle(&self, i: usize) -> Triangle {
        let t = self.tris[i];
        Triangle {
            v1: self.points[t[0]],
            v2: self.points[t[1]],
            v3: self.points[t[2]],
        }
    }

    pub fn num_triangles(&self) -> usize {
        self.tris.len()
    }

    pub fn total_area(&self) -> f64 {
        (0..self.tris.len()).map(|i| self.triangle(i).area()).sum()
    }

    /// Boundary edges (owned by exactly one triangle), as vertex index pairs
    /// oriented the way they appear in their triangle's cycle.
    pub fn boundary_edges(&self) -> Vec<(usize, usize)> {
        use std::collections::HashMap;
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.tris {
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                *count.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        let mut out = Vec::new();
        for t in &self.tris {
            for e in 0..3 {
                let (a, b) = (t[e], t[(e + 1) % 3]);
                if count[&(a.min(b), a.max(b))] == 1 {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Ear-clipping triangulation of a simply connected polygon.
///
/// Polygons with holes are not handled here; supply an explicit
/// triangulation instead.
pub fn triangulate(polygon: &Polygon) -> Result<Triangulation> {
    if !polygon.holes.is_empty() {
        return Err(Error::UnsupportedTopology(
            "polygon has holes; pass an explicit triangulation (points + tris) instead".into(),
        ));
    }
    let pts = polygon.outer.clone();
    let n = pts.len();
    if n < 3 {
        return Err(Error::InvalidInput("fewer than 3 vertices".into()));
    }
    let scale: f64 = pts
        .iter()
        .map(|p| p.x.abs().max(p.y.abs()))
        .fold(0.0, f64::max);
    let eps = 1e-12 * scale * scale;

    let mut idx: Vec<usize> = (0..n).collect();
    let mut tris: Vec<[usize; 3]> = Vec::with_capacity(n - 2);

    let is_ear = |idx: &[usize], at: usize| -> bool {
        let m = idx.len();
        let (ip, ic, inx) = (idx[(at + m - 1) % m], idx[at], idx[(at + 1) % m]);
        let (a, b, c) = (pts[ip], pts[ic], pts[inx]);
        if cross(a, b, c) <= eps {
            return false; // reflex or degenerate corner
        }
        // no other vertex inside the candidate ear
        for &other in idx {
            if other == ip || other == ic || other == inx {
                continue;
            }
            let p = pts[other];
            let d1 = cross(a, b, p);
            let d2 = cross(b, c, p);
            let d3 = cross(c, a, p);
            if d1 >= -eps && d2 >= -eps && d3 >= -eps {
                return false;
            }
        }
        true
    };

    let mut guard = 0usize;
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for at in 0..m {
            if is_ear(&idx, at) {
                let (ip, ic, inx) = (idx[(at + m - 1) % m], idx[at], idx[(at + 1) % m]);
                tris.push([ip, ic, inx]);
                idx.remove(at);
                clipped = true;
                break;
            }
        }
        if !clipped {
            return Err(Error::InvalidInput(
                "ear clipping failed; polygon may be degenerate or self-intersecting".into(),
            ));
        }
        guard += 1;
        if guard > 4 * n {
            return Err(Error::InvalidInput("ear clipping did not terminate".into()));
        }
    }
    tris.push([idx[0], idx[1], idx[2]]);

    let tri = Triangulation::from_parts(pts, tris)?;
    let poly_area = ring_signed_area(&polygon.outer).abs();
    if (tri.total_area() - poly_area).abs() > 1e-9 * poly_area.max(1e-300) {
        return Err(Error::NumericalFailure(format!(
            "triangulation area {} does not match polygon area {}",
            tri.total_area(),
            poly_area
        )));
    }
    Ok(tri)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointLocation {
    Inside,
    Boundary,
    Outside,
}

fn dist_to_segment(p: Point2, a: Point2, b: Point2) -> f64 {
    let (vx, vy) = (b.x - a.x, b.y - a.y);
    let len2 = vx * vx + vy * vy;
    if len2 == 0.0 {
        return p.dist(&a);
    }
    let t = ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2;
    let t = t.clamp(0.0, 1.0);
    p.dist(&Point2::new(a.x + t * vx, a.y + t * vy))
}

fn ray_crossings(ring: &[Point2], p: Point2) -> usize {
    // half-open even-odd rule, ray towards +x
    let mut crossings = 0usize;
    let n = ring.len();
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if x > p.x {
                crossings += 1;
            }
        }
    }
    crossings
}

/// Classify a point against the polygon; boundary is detected within
/// 1e-12 * diameter.
pub fn point_in_domain(polygon: &Polygon, p: &Point2) -> PointLocation {
    let metrics = polygon_metrics(polygon);
    point_in_domain_tol(polygon, p, 1e-12 * metrics.diameter)
}

/// Same with an explicit boundary tolerance (callers in grid loops
/// precompute the tolerance once).
pub fn point_in_domain_tol(polygon: &Polygon, p: &Point2, tol: f64) -> PointLocation {
    for (a, b) in polygon.segments() {
        if dist_to_segment(*p, a, b) <= tol {
            return PointLocation::Boundary;
        }
    }
    let mut inside = ray_crossings(&polygon.outer, *p) % 2 == 1;
    if inside {
        for h in &polygon.holes {
            if ray_crossings(h, *p) % 2 == 1 {
                inside = false;
                break;
            }
        }
    }
    if inside {
        PointLocation::Inside
    } else {
        PointLocation::Outside
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DomainMetrics {
    pub area: f64,
    pub diameter: f64,
    pub bbox_min: Point2,
    pub bbox_max: Point2,
    pub centroid: Point2,
}

pub fn polygon_metrics(polygon: &Polygon) -> DomainMetrics {
    let outer_area = ring_signed_area(&polygon.outer); // positive (normalized)
    let hole_area: f64 = polygon.holes.iter().map(|h| ring_signed_area(h)).sum(); // negative
    let area = outer_area + hole_area;

    let mut verts: Vec<Point2> = polygon.outer.clone();
    for h in &polygon.holes {
        verts.extend_from_slice(h);
    }
    let mut diameter: f64 = 0.0;
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            diameter = diameter.max(verts[i].dist(&verts[j]));
        }
    }
    let (bbox_min, bbox_max) = polygon.bbox();

    // area-weighted centroid over outer minus holes
    let ring_centroid_x_area = |ring: &[Point2]| -> (f64, f64) {
        let n = ring.len();
        let (mut cx, mut cy) = (0.0, 0.0);
        for i in 0..n {
            let p = ring[i];
            let q = ring[(i + 1) % n];
            let w = p.x * q.y - q.x * p.y;
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
        }
        (cx / 6.0, cy / 6.0)
    };
    let (mut cx, mut cy) = ring_centroid_x_area(&polygon.outer);
    for h in &polygon.holes {
        let (hx, hy) = ring_centroid_x_area(h); // negative orientation subtracts
        cx += hx;
        cy += hy;
    }
    DomainMetrics {
        area,
        diameter,
        bbox_min,
        bbox_max,
        centroid: Point2::new(cx / area, cy / area),
    }
}

/// Signed area of ring ∩ [x0,x1]×[y0,y1] by Sutherland-Hodgman clipping.
/// Holes keep their (negative) orientation, so summing over all rings
/// yields the polygon-minus-holes overlap area.
pub(crate) fn clipped_ring_signed_area(ring: &[Point2], x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    // clip successively against the four half-planes of the rectangle
    let mut pts: Vec<Point2> = ring.to_vec();
    let clip = |pts: &[Point2], inside: &dyn Fn(Point2) -> bool, cross_at: &dyn Fn(Point2, Point2) -> Point2| -> Vec<Point2> {
        let mut out = Vec::with_capacity(pts.len() + 4);
        let n = pts.len();
        for i in 0..n {
            let cur = pts[i];
            let next = pts[(i + 1) % n];
            let (ci, ni) = (inside(cur), inside(next));
            if ci {
                out.push(cur);
                if !ni {
                    out.push(cross_at(cur, next));
                }
            } else if ni {
                out.push(cross_at(cur, next));
            }
        }
        out
    };
    let planes: [(&dyn Fn(Point2) -> bool, &dyn Fn(Point2, Point2) -> Point2); 4] = [
        (&|p| p.x >= x0, &|a: Point2, b: Point2| {
            let t = (x0 - a.x) / (b.x - a.x);
            Point2::new(x0, a.y + t * (b.y - a.y))
        }),
        (&|p| p.x <= x1, &|a: Point2, b: Point2| {
            let t = (x1 - a.x) / (b.x - a.x);
            Point2::new(x1, a.y + t * (b.y - a.y))
        }),
        (&|p| p.y >= y0, &|a: Point2, b: Point2| {
            let t = (y0 - a.y) / (b.y - a.y);
            Point2::new(a.x + t * (b.x - a.x), y0)
        }),
        (&|p| p.y <= y1, &|a: Point2, b: Point2| {
            let t = (y1 - a.y) / (b.y - a.y);
            Point2::new(a.x + t * (b.x - a.x), y1)
        }),
    ];
    for (inside, cross_at) in planes {
        if pts.is_empty() {
            return 0.0;
        }
        pts = clip(&pts, inside, cross_at);
    }
    if pts.len() < 3 {
        return 0.0;
    }
    ring_signed_area(&pts)
}

/// Area of polygon ∩ cell (outer minus holes).
pub(crate) fn polygon_cell_overlap(polygon: &Polygon, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let mut area = clipped_ring_signed_area(&polygon.outer, x0, x1, y0, y1);
    for h in &polygon.holes {
        area += clipped_ring_signed_area(h, x0, x1, y0, y1);
    }
    area.max(0.0)
}

/// Even-odd inside test without boundary detection (fast path for points
/// known to be away from the boundary).
pub(crate) fn point_strictly_inside(polygon: &Polygon, p: &Point2) -> bool {
    if ray_crossings(&polygon.outer, *p) % 2 == 0 {
        return false;
    }
    for h in &polygon.holes {
        if ray_crossings(h, *p) % 2 == 1 {
            return false;
        }
    }
    true
}

/// Grid cells (i, j) crossed by the segment a-b on an n x n grid over the
/// given bounding box; conservative 3x3 dilation is the caller's job.
pub(crate) fn segment_cells(
    a: Point2,
    b: Point2,
    bbox_min: Point2,
    hx: f64,
    hy: f64,
    n: usize,
    mark: &mut dyn FnMut(usize, usize),
) {
    let steps = {
        let dx = ((b.x - a.x) / hx).abs();
        let dy = ((b.y - a.y) / hy).abs();
        ((dx + dy).ceil() as usize * 2).max(1)
    };
    let clampi = |v: f64| -> usize { (v.floor() as isize).clamp(0, n as isize - 1) as usize };
    for s in 0..=steps {
        let t = s as f64 / steps as f64;
        let x = a.x + t * (b.x - a.x);
        let y = a.y + t * (b.y - a.y);
        let i = clampi((x - bbox_min.x) / hx);
        let j = clampi((y - bbox_min.y) / hy);
        mark(i, j);
    }
}

/// Convenience constructors for the domains used throughout the tests and
/// the paper's examples.
pub mod shapes {
    use super::{Point2, Polygon};

    pub fn unit_square() -> Polygon {
        Polygon::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap()
    }

    pub fn square_pm1() -> Polygon {
        Polygon::from_coords(&[(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]).unwrap()
    }

    /// Right triangle (0,0), (1,0), (1,1).
    pub fn unit_right_triangle() -> Polygon {
        Polygon::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]).unwrap()
    }

    /// L-shaped domain [0,0; 2,0; 2,1; 1,1; 1,2; 0,2].
    pub fn l_domain() -> Polygon {
        Polygon::from_coords(&[
            (0.0, 0.0),
            (2.0, 0.0),
            (2.0, 1.0),
            (1.0, 1.0),
            (1.0, 2.0),
            (0.0, 2.0),
        ])
        .unwrap()
    }

    /// Regular n-gon with vertices on the unit circle, first vertex at angle 0.
    pub fn regular_ngon(n: usize) -> Polygon {
        let pts: Vec<Point2> = (0..n)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                Point2::new(th.cos(), th.sin())
            })
            .collect();
        Polygon::new(pts, vec![]).unwrap()
    }

    pub fn hexagon() -> Polygon {
        regular_ngon(6)
    }

    pub fn octagon() -> Polygon {
        regular_ngon(8)
    }
}
