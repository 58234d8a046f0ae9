//! Exact integer planar predicates.
//!
//! Every predicate here works on `i64` coordinates without any rounding.
//! Coordinates are kept within [`COORD_LIMIT`] so that doubled coordinates
//! (used for midpoint tests) and their cross products stay inside `i64`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest admissible absolute coordinate value.
///
/// Midpoint tests double coordinates, so differences reach `2^26` and cross
/// products `2^53`, comfortably inside `i64`.
pub const COORD_LIMIT: i64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("duplicate point {0}")]
    DuplicatePoint(Point),
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex sequence is not a simple polygon")]
    NotSimple,
    #[error("empty point set")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    pub fn in_range(&self) -> bool {
        self.x.abs() <= COORD_LIMIT && self.y.abs() <= COORD_LIMIT
    }

    pub fn scaled(self, k: i64) -> Point {
        Point::new(self.x * k, self.y * k)
    }

    pub fn translated(self, dx: i64, dy: i64) -> Point {
        Point::new(self.x + dx, self.y + dy)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

/// Closed segment with unordered endpoints.
///
/// Endpoints are stored lexicographically sorted, so `Segment::new(a, b)`
/// and `Segment::new(b, a)` are the same value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(p: Point, q: Point) -> Self {
        if p <= q {
            Segment { a: p, b: q }
        } else {
            Segment { a: q, b: p }
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn is_axis_parallel(&self) -> bool {
        self.a.x == self.b.x || self.a.y == self.b.y
    }

    pub fn has_endpoint(&self, p: Point) -> bool {
        self.a == p || self.b == p
    }

    /// The other endpoint, if `p` is one of them.
    pub fn partner(&self, p: Point) -> Option<Point> {
        if self.a == p {
            Some(self.b)
        } else if self.b == p {
            Some(self.a)
        } else {
            None
        }
    }

    pub fn reflected(&self) -> Segment {
        Segment::new(-self.a, -self.b)
    }

    pub fn translated(&self, dx: i64, dy: i64) -> Segment {
        Segment::new(self.a.translated(dx, dy), self.b.translated(dx, dy))
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

impl Orientation {
    pub fn reversed(self) -> Orientation {
        match self {
            Orientation::Ccw => Orientation::Cw,
            Orientation::Cw => Orientation::Ccw,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// Twice the signed area of triangle `pqr`, i.e. `(q - p) x (r - p)`.
#[inline]
pub fn cross(p: Point, q: Point, r: Point) -> i64 {
    (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
}

#[inline]
pub fn orientation(p: Point, q: Point, r: Point) -> Orientation {
    match cross(p, q, r).cmp(&0) {
        Ordering::Greater => Orientation::Ccw,
        Ordering::Less => Orientation::Cw,
        Ordering::Equal => Orientation::Collinear,
    }
}

/// `p` lies on the closed segment `ab`.
#[inline]
pub fn on_segment(a: Point, b: Point, p: Point) -> bool {
    cross(a, b, p) == 0 && p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// `p` lies on segment `ab` but is neither endpoint.
#[inline]
pub fn in_relative_interior(a: Point, b: Point, p: Point) -> bool {
    p != a && p != b && on_segment(a, b, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Intersection {
    Disjoint,
    /// Exactly one common point, which is an endpoint of at least one input.
    Touch,
    /// One common point interior to both inputs.
    ProperCross,
    /// The common set is a segment of positive length.
    CollinearOverlap,
}

/// Classifies how two closed segments meet. Degenerate inputs are treated as points.
pub fn segment_intersection(s: &Segment, t: &Segment) -> Intersection {
    seg_seg(s.a, s.b, t.a, t.b)
}

/// Same as [`segment_intersection`] on raw endpoint pairs (orientation ignored).
pub fn seg_seg(p1: Point, p2: Point, q1: Point, q2: Point) -> Intersection {
    let o1 = orientation(p1, p2, q1);
    let o2 = orientation(p1, p2, q2);
    let o3 = orientation(q1, q2, p1);
    let o4 = orientation(q1, q2, p2);

    if o1 == Orientation::Collinear
        && o2 == Orientation::Collinear
        && o3 == Orientation::Collinear
        && o4 == Orientation::Collinear
    {
        // All four collinear: compare along the common line using lexicographic order.
        let (s0, s1) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        let (t0, t1) = if q1 <= q2 { (q1, q2) } else { (q2, q1) };
        let lo = s0.max(t0);
        let hi = s1.min(t1);
        return match lo.cmp(&hi) {
            Ordering::Less => Intersection::CollinearOverlap,
            Ordering::Equal => Intersection::Touch,
            Ordering::Greater => Intersection::Disjoint,
        };
    }

    if o1 != o2
        && o3 != o4
        && o1 != Orientation::Collinear
        && o2 != Orientation::Collinear
        && o3 != Orientation::Collinear
        && o4 != Orientation::Collinear
    {
        return Intersection::ProperCross;
    }

    if on_segment(p1, p2, q1) || on_segment(p1, p2, q2) || on_segment(q1, q2, p1) || on_segment(q1, q2, p2) {
        Intersection::Touch
    } else {
        Intersection::Disjoint
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HullEntry {
    pub point: Point,
    pub corner: bool,
}

/// Counterclockwise boundary of a convex hull, including points lying in the
/// relative interior of hull edges (flagged as non-corners).
///
/// The sequence starts at the lexicographically smallest input point. For a
/// collinear input the hull is a segment; each point is then listed once,
/// in order from one extreme to the other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullSequence {
    pub boundary: Vec<HullEntry>,
}

impl HullSequence {
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.boundary.iter().map(|e| e.point)
    }

    pub fn corners(&self) -> Vec<Point> {
        self.boundary.iter().filter(|e| e.corner).map(|e| e.point).collect()
    }

    pub fn position(&self, p: Point) -> Option<usize> {
        self.boundary.iter().position(|e| e.point == p)
    }

    pub fn is_corner(&self, p: Point) -> bool {
        self.boundary.iter().any(|e| e.point == p && e.corner)
    }

    /// Whether `p` and `q` are neighbours in the cyclic boundary order.
    pub fn consecutive(&self, p: Point, q: Point) -> bool {
        let n = self.len();
        match (self.position(p), self.position(q)) {
            (Some(i), Some(j)) if n >= 2 => (i + 1) % n == j || (j + 1) % n == i,
            _ => false,
        }
    }
}

/// Convex hull with collinear boundary points retained.
pub fn convex_hull(points: &[Point]) -> Result<HullSequence, GeomError> {
    if points.is_empty() {
        return Err(GeomError::Empty);
    }
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(GeomError::DuplicatePoint(w[0]));
    }

    let corners = strict_hull(&sorted);
    if corners.len() <= 1 {
        return Ok(HullSequence {
            boundary: vec![HullEntry {
                point: sorted[0],
                corner: true,
            }],
        });
    }
    if corners.len() == 2 {
        // Collinear input: all points lie between the two extremes.
        let boundary = sorted
            .iter()
            .map(|&p| HullEntry {
                point: p,
                corner: p == corners[0] || p == corners[1],
            })
            .collect();
        return Ok(HullSequence { boundary });
    }

    let mut boundary = Vec::with_capacity(sorted.len());
    let h = corners.len();
    for i in 0..h {
        let a = corners[i];
        let b = corners[(i + 1) % h];
        boundary.push(HullEntry { point: a, corner: true });
        let mut between: Vec<Point> = sorted
            .iter()
            .copied()
            .filter(|&p| in_relative_interior(a, b, p))
            .collect();
        between.sort_by_key(|p| {
            let d = *p - a;
            d.x.abs() + d.y.abs()
        });
        boundary.extend(between.into_iter().map(|p| HullEntry {
            point: p,
            corner: false,
        }));
    }
    Ok(HullSequence { boundary })
}

/// Andrew's monotone chain on sorted distinct points, dropping collinear
/// points. Returns corners counterclockwise starting at the smallest point.
fn strict_hull(sorted: &[Point]) -> Vec<Point> {
    if sorted.len() < 3 {
        return sorted.to_vec();
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in sorted {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in sorted.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the signed area of the closed ring.
pub fn signed_area2(vertices: &[Point]) -> i64 {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let p = vertices[i];
            let q = vertices[(i + 1) % n];
            p.x * q.y - q.x * p.y
        })
        .sum()
}

/// Distinct vertices, no vertex inside another edge, adjacent edges meeting
/// only at their shared vertex, non-adjacent edges disjoint.
pub fn is_simple_polygon(vertices: &[Point]) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    for i in 0..n {
        let p = vertices[i];
        let q = vertices[(i + 1) % n];
        let r = vertices[(i + 2) % n];
        // adjacent edges pq, qr: fold-back along a line
        if cross(p, q, r) == 0 && (on_segment(p, q, r) || on_segment(q, r, p)) {
            return false;
        }
    }
    if n == 3 {
        return true;
    }
    for i in 0..n {
        let a1 = vertices[i];
        let a2 = vertices[(i + 1) % n];
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let b1 = vertices[j];
            let b2 = vertices[(j + 1) % n];
            if seg_seg(a1, a2, b1, b2) != Intersection::Disjoint {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// Simple polygon, stored counterclockwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Validates simplicity and normalizes to counterclockwise order, keeping
    /// the first vertex in place.
    pub fn new(mut vertices: Vec<Point>) -> Result<Polygon, GeomError> {
        if vertices.len() < 3 {
            return Err(GeomError::TooFewVertices(vertices.len()));
        }
        if !is_simple_polygon(&vertices) {
            return Err(GeomError::NotSimple);
        }
        if signed_area2(&vertices) < 0 {
            vertices[1..].reverse();
        }
        Ok(Polygon { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn index_of(&self, p: Point) -> Option<usize> {
        self.vertices.iter().position(|&v| v == p)
    }

    pub fn area2(&self) -> i64 {
        signed_area2(&self.vertices)
    }

    pub fn reflected(&self) -> Polygon {
        // point reflection preserves orientation
        Polygon {
            vertices: self.vertices.iter().map(|&p| -p).collect(),
        }
    }
}

pub fn point_in_polygon(p: Point, poly: &Polygon) -> Location {
    locate_scaled(p, poly.vertices(), 1)
}

/// Locates `p` against the ring whose vertices are multiplied by `scale`.
///
/// With `scale = 2` and `p = a + b` this classifies the midpoint of `ab`
/// exactly.
pub fn locate_scaled(p: Point, ring: &[Point], scale: i64) -> Location {
    let n = ring.len();
    let mut winding = 0i32;
    for i in 0..n {
        let a = ring[i].scaled(scale);
        let b = ring[(i + 1) % n].scaled(scale);
        if on_segment(a, b, p) {
            return Location::Boundary;
        }
        if a.y <= p.y {
            if b.y > p.y && cross(a, b, p) > 0 {
                winding += 1;
            }
        } else if b.y <= p.y && cross(a, b, p) < 0 {
            winding -= 1;
        }
    }
    if winding != 0 {
        Location::Inside
    } else {
        Location::Outside
    }
}

/// Location of the midpoint of `ab` relative to `poly`, computed on doubled
/// coordinates.
pub fn midpoint_location(a: Point, b: Point, poly: &Polygon) -> Location {
    locate_scaled(Point::new(a.x + b.x, a.y + b.y), poly.vertices(), 2)
}

/// Orders directions counterclockwise starting from `reference` (which sorts
/// first). All vectors must be nonzero.
pub fn angle_cmp(reference: Point, u: Point, v: Point) -> Ordering {
    let hu = half(reference, u);
    let hv = half(reference, v);
    hu.cmp(&hv).then_with(|| {
        let c = u.x * v.y - u.y * v.x;
        0.cmp(&c)
    })
}

// 0: same direction as reference, 1: strictly left half-turn, 2: opposite, 3: right.
fn half(r: Point, u: Point) -> u8 {
    let c = r.x * u.y - r.y * u.x;
    let d = r.x * u.x + r.y * u.y;
    if c == 0 {
        if d > 0 {
            0
        } else {
            2
        }
    } else if c > 0 {
        1
    } else {
        3
    }
}
