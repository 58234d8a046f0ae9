//! Certificate checking.
//!
//! A vertex sequence circumscribes a family when it is a simple polygon on
//! exactly the family's endpoints and every segment is a polygon edge or an
//! internal diagonal. This module decides that from scratch and also hosts
//! the hull-order predicate and sub-polygon closure that the solver and the
//! proof replay build on.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{
    in_relative_interior, is_simple_polygon, midpoint_location, seg_seg, signed_area2, HullSequence, Intersection,
    Location, Point, Polygon,
};
use crate::instance::SegmentFamily;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChordClass {
    Edge,
    Internal,
    External,
    /// Meets the boundary somewhere other than its two endpoints.
    Blocked,
}

impl fmt::Display for ChordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ChordClass::Edge => "edge",
            ChordClass::Internal => "internal",
            ChordClass::External => "external",
            ChordClass::Blocked => "blocked",
        };
        f.write_str(s)
    }
}

/// How a family segment sits in a circumscribing polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentRole {
    Edge,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("{0} is not a polygon vertex")]
    NotAVertex(Point),
    #[error("{0} is not on the hull boundary")]
    NotOnHull(Point),
    #[error("path must start at `from` and end at `to`")]
    PathEnds,
    #[error("path needs at least 3 points, got {0}")]
    PathTooShort(usize),
    #[error("closed path has zero area")]
    ZeroArea,
    #[error("path is not a simple polyline")]
    PathNotSimple,
    #[error("closing edge meets the path away from its endpoints")]
    ClosingEdgeIntersects,
}

/// Classifies the chord `ab` between two vertices of `poly`.
pub fn classify_chord(poly: &Polygon, a: Point, b: Point) -> Result<ChordClass, VerifyError> {
    let n = poly.len();
    let ia = poly.index_of(a).ok_or(VerifyError::NotAVertex(a))?;
    let ib = poly.index_of(b).ok_or(VerifyError::NotAVertex(b))?;
    if (ia + 1) % n == ib || (ib + 1) % n == ia {
        return Ok(ChordClass::Edge);
    }
    for (u, v) in poly.edges() {
        let blocked = if u == a || u == b || v == a || v == b {
            // incident edge: only its far endpoint or a collinear overlap can block
            let far = if u == a || u == b { v } else { u };
            in_relative_interior(a, b, far) || seg_seg(a, b, u, v) == Intersection::CollinearOverlap
        } else {
            seg_seg(a, b, u, v) != Intersection::Disjoint
        };
        if blocked {
            return Ok(ChordClass::Blocked);
        }
    }
    Ok(match midpoint_location(a, b, poly) {
        Location::Inside => ChordClass::Internal,
        Location::Outside => ChordClass::External,
        Location::Boundary => ChordClass::Blocked,
    })
}

/// A verified circumscribing polygon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub polygon: Polygon,
    /// Role of each family segment, indexed like `SegmentFamily::segments`.
    pub classification: Vec<SegmentRole>,
}

impl Certificate {
    /// The certificate for `f.reflected()` obtained by reflecting the
    /// polygon through the origin; roles follow their segments.
    pub fn reflected(&self, f: &SegmentFamily) -> Certificate {
        let rf = f.reflected();
        let mut classification = self.classification.clone();
        for (s, &role) in f.segments().iter().zip(&self.classification) {
            let i = rf.index_of(&s.reflected()).expect("mirror of a family segment");
            classification[i] = role;
        }
        Certificate {
            polygon: self.polygon.reflected(),
            classification,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum Violation {
    #[error("not simple: the vertex sequence is not a simple polygon")]
    NotSimple,
    #[error("vertex set mismatch: endpoint {0} is not a polygon vertex")]
    MissingEndpoint(Point),
    #[error("vertex set mismatch: {0} is not a segment endpoint")]
    ExtraVertex(Point),
    #[error("segment {index} is {class}, expected edge or internal diagonal")]
    BadSegment { index: usize, class: ChordClass },
}

/// Checks every condition for `vertices` to circumscribe `f`.
pub fn circumscribes(vertices: &[Point], f: &SegmentFamily) -> Result<Certificate, Violation> {
    let polygon = Polygon::new(vertices.to_vec()).map_err(|_| Violation::NotSimple)?;
    let want: BTreeSet<Point> = f.endpoints().into_iter().collect();
    let have: BTreeSet<Point> = vertices.iter().copied().collect();
    if let Some(&p) = want.difference(&have).next() {
        return Err(Violation::MissingEndpoint(p));
    }
    if let Some(&p) = have.difference(&want).next() {
        return Err(Violation::ExtraVertex(p));
    }
    let mut classification = Vec::with_capacity(f.len());
    for (index, s) in f.segments().iter().enumerate() {
        let class = classify_chord(&polygon, s.a, s.b).expect("endpoints are vertices");
        classification.push(match class {
            ChordClass::Edge => SegmentRole::Edge,
            ChordClass::Internal => SegmentRole::Internal,
            class => return Err(Violation::BadSegment { index, class }),
        });
    }
    Ok(Certificate {
        polygon,
        classification,
    })
}

/// Whether `seq` visits hull boundary points in hull order.
///
/// Open sequences (partial paths) must follow the counterclockwise order;
/// closed sequences may also follow the reversed order.
pub fn hull_order_consistent(seq: &[Point], hull: &HullSequence, closed: bool) -> Result<bool, VerifyError> {
    let pos: Vec<usize> = seq
        .iter()
        .map(|&p| hull.position(p).ok_or(VerifyError::NotOnHull(p)))
        .collect::<Result<_, _>>()?;
    let m = hull.len();
    let forward = cyclically_increasing(&pos, m);
    if forward || !closed {
        return Ok(forward);
    }
    let rev: Vec<usize> = pos.iter().rev().copied().collect();
    Ok(cyclically_increasing(&rev, m))
}

fn cyclically_increasing(pos: &[usize], m: usize) -> bool {
    let Some(&p0) = pos.first() else {
        return true;
    };
    let mut last = 0;
    for &p in &pos[1..] {
        let d = (p + m - p0) % m;
        if d <= last {
            return false;
        }
        last = d;
    }
    true
}

/// Closes the open path `from -> ... -> to` with the edge `to -> from`.
pub fn close_path(path: &[Point], from: Point, to: Point) -> Result<Polygon, VerifyError> {
    if path.len() < 3 {
        return Err(VerifyError::PathTooShort(path.len()));
    }
    if path[0] != from || path[path.len() - 1] != to {
        return Err(VerifyError::PathEnds);
    }
    if signed_area2(path) == 0 {
        return Err(VerifyError::ZeroArea);
    }
    if is_simple_polygon(path) {
        return Ok(Polygon::new(path.to_vec()).expect("checked simple"));
    }
    // Distinguish a bad path from a bad closing edge.
    let open_ok = {
        let n = path.len();
        let mut ok = path.iter().collect::<BTreeSet<_>>().len() == n;
        for i in 0..n - 1 {
            for j in (i + 1)..n - 1 {
                let kind = seg_seg(path[i], path[i + 1], path[j], path[j + 1]);
                let fine = if j == i + 1 {
                    kind == Intersection::Touch
                        && !in_relative_interior(path[i], path[i + 1], path[j + 1])
                        && !in_relative_interior(path[j], path[j + 1], path[i])
                } else {
                    kind == Intersection::Disjoint
                };
                ok &= fine;
            }
        }
        ok
    };
    Err(if open_ok {
        VerifyError::ClosingEdgeIntersects
    } else {
        VerifyError::PathNotSimple
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// Raw content of a certificate file, before checking it against a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateText {
    pub vertices: Vec<Point>,
    pub classification: Vec<(usize, SegmentRole)>,
}

pub fn serialize_certificate(cert: &Certificate) -> String {
    let mut out = String::new();
    writeln!(out, "polygon {}", cert.polygon.len()).unwrap();
    for p in cert.polygon.vertices() {
        writeln!(out, "{} {}", p.x, p.y).unwrap();
    }
    out.push_str("classify\n");
    for (i, role) in cert.classification.iter().enumerate() {
        let r = match role {
            SegmentRole::Edge => "edge",
            SegmentRole::Internal => "internal",
        };
        writeln!(out, "{i} {r}").unwrap();
    }
    out
}

pub fn parse_certificate(text: &str) -> Result<CertificateText, CertificateParseError> {
    let err = |line: usize, message: &str| CertificateParseError::Syntax {
        line,
        message: message.to_string(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or_else(|| err(1, "missing `polygon <n>` header"))?;
    let n = header
        .strip_prefix("polygon ")
        .and_then(|r| r.trim().parse::<usize>().ok())
        .ok_or_else(|| err(ln, "expected `polygon <n>`"))?;
    let mut vertices = Vec::with_capacity(n);
    for _ in 0..n {
        let (ln, l) = lines.next().ok_or_else(|| err(ln, "too few vertex lines"))?;
        let v: Vec<i64> = l
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| err(ln, "expected `<x> <y>`"))?;
        if v.len() != 2 {
            return Err(err(ln, "expected `<x> <y>`"));
        }
        vertices.push(Point::new(v[0], v[1]));
    }
    let mut classification = Vec::new();
    if let Some((ln, l)) = lines.next() {
        if l != "classify" {
            return Err(err(ln, "expected `classify`"));
        }
        for (ln, l) in lines {
            let mut it = l.split_whitespace();
            let idx = it
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| err(ln, "expected segment index"))?;
            let role = match it.next() {
                Some("edge") => SegmentRole::Edge,
                Some("internal") => SegmentRole::Internal,
                _ => return Err(err(ln, "expected `edge` or `internal`")),
            };
            if it.next().is_some() {
                return Err(err(ln, "trailing tokens"));
            }
            classification.push((idx, role));
        }
    }
    Ok(CertificateText {
        vertices,
        classification,
    })
}
