//! Segment families: validation, the text instance format, labels.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{orientation, segment_intersection, Intersection, Orientation, Point, Segment};

/// Axis-aligned integer rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundingBox {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

impl BoundingBox {
    pub fn new(x0: i64, y0: i64, x1: i64, y1: i64) -> Self {
        BoundingBox { x0, y0, x1, y1 }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    pub fn width(&self) -> i64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> i64 {
        self.y1 - self.y0
    }

    pub fn of_points(points: impl IntoIterator<Item = Point>) -> Option<BoundingBox> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut b = BoundingBox::new(first.x, first.y, first.x, first.y);
        for p in it {
            b.x0 = b.x0.min(p.x);
            b.y0 = b.y0.min(p.y);
            b.x1 = b.x1.max(p.x);
            b.y1 = b.y1.max(p.y);
        }
        Some(b)
    }
}

impl fmt::Display for BoundingBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]x[{},{}]", self.x0, self.x1, self.y0, self.y1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("segment {0} is degenerate")]
    DegenerateSegment(usize),
    #[error("segments {0} and {1} are not disjoint ({2:?})")]
    PairNotDisjoint(usize, usize, Intersection),
    #[error("endpoints {0} and {1} coincide")]
    DuplicateEndpoint(usize, usize),
    #[error("all endpoints are collinear")]
    AllCollinear,
    #[error("family is empty")]
    Empty,
    #[error("coordinate out of range in segment {0}")]
    CoordinateOutOfRange(usize),
}

/// A validated family of pairwise-disjoint closed segments.
///
/// Segments are kept in canonical (sorted) order, so two families with the
/// same segment set compare equal regardless of input order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentFamily {
    segments: Vec<Segment>,
    bounds: Option<BoundingBox>,
}

impl SegmentFamily {
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// V(S): every endpoint, two per segment, in segment order.
    pub fn endpoints(&self) -> Vec<Point> {
        self.segments.iter().flat_map(|s| [s.a, s.b]).collect()
    }

    pub fn bounds(&self) -> Option<BoundingBox> {
        self.bounds
    }

    /// Declared bounds, or the bounding box of the endpoints.
    pub fn extent(&self) -> BoundingBox {
        self.bounds
            .or_else(|| BoundingBox::of_points(self.endpoints()))
            .expect("validated family is nonempty")
    }

    pub fn with_bounds(mut self, bounds: Option<BoundingBox>) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn index_of(&self, s: &Segment) -> Option<usize> {
        self.segments.binary_search(s).ok()
    }

    /// Segment having `p` as an endpoint.
    pub fn segment_at(&self, p: Point) -> Option<(usize, Segment)> {
        self.segments
            .iter()
            .enumerate()
            .find(|(_, s)| s.has_endpoint(p))
            .map(|(i, s)| (i, *s))
    }

    pub fn reflected(&self) -> SegmentFamily {
        let mut segments: Vec<Segment> = self.segments.iter().map(Segment::reflected).collect();
        segments.sort_unstable();
        SegmentFamily {
            segments,
            bounds: self.bounds.map(|b| BoundingBox::new(-b.x1, -b.y1, -b.x0, -b.y0)),
        }
    }
}

/// Checks degeneracy, pairwise closed-set disjointness, distinct endpoints
/// and non-collinearity. Error indices refer to the input order.
pub fn validate_family(segments: &[Segment]) -> Result<SegmentFamily, FamilyError> {
    if segments.is_empty() {
        return Err(FamilyError::Empty);
    }
    for (i, s) in segments.iter().enumerate() {
        if !s.a.in_range() || !s.b.in_range() {
            return Err(FamilyError::CoordinateOutOfRange(i));
        }
        if s.is_degenerate() {
            return Err(FamilyError::DegenerateSegment(i));
        }
    }
    for i in 0..segments.len() {
        for j in (i + 1)..segments.len() {
            let kind = segment_intersection(&segments[i], &segments[j]);
            if kind != Intersection::Disjoint {
                return Err(FamilyError::PairNotDisjoint(i, j, kind));
            }
        }
    }
    let mut seen: BTreeMap<Point, usize> = BTreeMap::new();
    for (i, s) in segments.iter().enumerate() {
        for p in [s.a, s.b] {
            if let Some(&j) = seen.get(&p) {
                return Err(FamilyError::DuplicateEndpoint(j, i));
            }
            seen.insert(p, i);
        }
    }
    let pts: Vec<Point> = seen.keys().copied().collect();
    let (p0, p1) = (pts[0], pts[1]);
    if pts[2..]
        .iter()
        .all(|&q| orientation(p0, p1, q) == Orientation::Collinear)
    {
        return Err(FamilyError::AllCollinear);
    }
    let mut segments = segments.to_vec();
    segments.sort_unstable();
    Ok(SegmentFamily { segments, bounds: None })
}

/// True iff `p -> -p` maps the segment set onto itself.
pub fn is_centrally_symmetric(f: &SegmentFamily) -> bool {
    segments_centrally_symmetric(f.segments())
}

pub fn segments_centrally_symmetric(segments: &[Segment]) -> bool {
    let set: HashSet<Segment> = segments.iter().copied().collect();
    segments.iter().all(|s| set.contains(&s.reflected()))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("label {0:?} does not name an endpoint")]
    NotAnEndpoint(String),
    #[error("labels {0:?} and {1:?} name the same point")]
    Duplicate(String, String),
    #[error("missing label {0:?}")]
    Missing(String),
    #[error("invalid label name {0:?}")]
    BadName(String),
}

/// A family with named endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledFamily {
    family: SegmentFamily,
    labels: BTreeMap<String, Point>,
}

impl LabeledFamily {
    pub fn new(family: SegmentFamily, labels: BTreeMap<String, Point>) -> Result<Self, LabelError> {
        let endpoints: BTreeSet<Point> = family.endpoints().into_iter().collect();
        let mut owner: BTreeMap<Point, &str> = BTreeMap::new();
        for (name, p) in &labels {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(LabelError::BadName(name.clone()));
            }
            if !endpoints.contains(p) {
                return Err(LabelError::NotAnEndpoint(name.clone()));
            }
            if let Some(prev) = owner.insert(*p, name) {
                return Err(LabelError::Duplicate(prev.to_string(), name.clone()));
            }
        }
        Ok(LabeledFamily { family, labels })
    }

    pub fn family(&self) -> &SegmentFamily {
        &self.family
    }

    pub fn labels(&self) -> &BTreeMap<String, Point> {
        &self.labels
    }

    pub fn point(&self, name: &str) -> Result<Point, LabelError> {
        self.labels
            .get(name)
            .copied()
            .ok_or_else(|| LabelError::Missing(name.to_string()))
    }

    pub fn label_of(&self, p: Point) -> Option<&str> {
        self.labels.iter().find(|(_, &q)| q == p).map(|(n, _)| n.as_str())
    }

    /// The segment joining two labelled points, if they are partners.
    pub fn segment(&self, u: &str, v: &str) -> Result<Option<Segment>, LabelError> {
        let (pu, pv) = (self.point(u)?, self.point(v)?);
        let s = Segment::new(pu, pv);
        Ok(self.family.index_of(&s).map(|_| s))
    }

    /// Replaces segment `old` by its translate, carrying the labels of the
    /// old endpoints along.
    pub fn with_segment_moved(&self, old: Segment, dx: i64, dy: i64) -> Result<LabeledFamily, MutationError> {
        self.with_segments_moved(&[(old, dx, dy)])
    }

    /// Translates several segments at once; the family is validated only
    /// after all moves.
    pub fn with_segments_moved(&self, moves: &[(Segment, i64, i64)]) -> Result<LabeledFamily, MutationError> {
        let shift = |p: Point| {
            moves
                .iter()
                .find(|(s, _, _)| s.has_endpoint(p))
                .map_or(p, |&(_, dx, dy)| p.translated(dx, dy))
        };
        let segs: Vec<Segment> = self
            .family
            .segments()
            .iter()
            .map(|&s| Segment::new(shift(s.a), shift(s.b)))
            .collect();
        let family = validate_family(&segs)?.with_bounds(self.family.bounds());
        let labels = self.labels.iter().map(|(n, &p)| (n.clone(), shift(p))).collect();
        Ok(LabeledFamily::new(family, labels)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Label(#[from] LabelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid family: {0}")]
    Invalid(#[from] FamilyError),
    #[error("invalid labels: {0}")]
    Labels(#[from] LabelError),
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Tokens of one line with their 1-based columns, comments stripped.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices() {
        match (c == ' ' || c == '\t' || c == '\r', start) {
            (true, Some(s)) => {
                out.push((s + 1, &body[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &body[s..]));
    }
    out
}

fn int(tok: (usize, &str), line: usize) -> Result<i64, ParseError> {
    tok.1
        .parse::<i64>()
        .map_err(|_| syntax(line, tok.0, format!("expected integer, found {:?}", tok.1)))
}

struct Parsed {
    segments: Vec<Segment>,
    labels: Option<BTreeMap<String, Point>>,
}

fn parse_raw(text: &str) -> Result<Parsed, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokens(l)))
        .filter(|(_, t)| !t.is_empty());

    let (hline, header) = lines
        .next()
        .ok_or_else(|| syntax(1, 1, "missing `segments <n>` header"))?;
    if header[0].1 != "segments" {
        return Err(syntax(hline, header[0].0, "expected `segments`"));
    }
    if header.len() != 2 {
        let col = header.get(2).map_or(header[0].0, |t| t.0);
        return Err(syntax(hline, col, "expected `segments <n>`"));
    }
    let n = header[1]
        .1
        .parse::<usize>()
        .map_err(|_| syntax(hline, header[1].0, "expected segment count"))?;

    let mut segments = Vec::with_capacity(n);
    for k in 0..n {
        let (ln, toks) = lines.next().ok_or_else(|| {
            syntax(
                text.lines().count().max(1),
                1,
                format!("expected {n} segments, found {k}"),
            )
        })?;
        if toks.len() != 4 {
            let col = toks.get(4).map_or(toks[0].0, |t| t.0);
            return Err(syntax(ln, col, "expected `<x1> <y1> <x2> <y2>`"));
        }
        let v: Vec<i64> = toks.iter().map(|&t| int(t, ln)).collect::<Result<_, _>>()?;
        segments.push(Segment::new(Point::new(v[0], v[1]), Point::new(v[2], v[3])));
    }

    let mut labels = None;
    if let Some((ln, toks)) = lines.next() {
        if toks[0].1 != "labels" || toks.len() != 1 {
            return Err(syntax(ln, toks[0].0, "expected `labels` or end of input"));
        }
        let mut map = BTreeMap::new();
        for (ln, toks) in lines.by_ref() {
            if toks.len() != 3 {
                return Err(syntax(ln, toks[0].0, "expected `<name> <x> <y>`"));
            }
            let p = Point::new(int(toks[1], ln)?, int(toks[2], ln)?);
            if map.insert(toks[0].1.to_string(), p).is_some() {
                return Err(syntax(ln, toks[0].0, format!("label {:?} repeated", toks[0].1)));
            }
        }
        labels = Some(map);
    }
    Ok(Parsed { segments, labels })
}

/// Parses the instance format. A `labels` section, if present, is ignored.
pub fn parse_family(text: &str) -> Result<SegmentFamily, ParseError> {
    let parsed = parse_raw(text)?;
    Ok(validate_family(&parsed.segments)?)
}

/// Parses an instance that must carry a `labels` section.
pub fn parse_labeled(text: &str) -> Result<LabeledFamily, ParseError> {
    let parsed = parse_raw(text)?;
    let family = validate_family(&parsed.segments)?;
    let labels = parsed
        .labels
        .ok_or_else(|| syntax(text.lines().count().max(1), 1, "missing `labels` section"))?;
    Ok(LabeledFamily::new(family, labels)?)
}

/// Canonical text: sorted segments, each written `a` then `b` with `a < b`.
pub fn serialize_family(f: &SegmentFamily) -> String {
    let mut out = String::new();
    writeln!(out, "segments {}", f.len()).unwrap();
    for s in f.segments() {
        writeln!(out, "{} {} {} {}", s.a.x, s.a.y, s.b.x, s.b.y).unwrap();
    }
    out
}

pub fn serialize_labeled(lf: &LabeledFamily) -> String {
    let mut out = serialize_family(lf.family());
    out.push_str("labels\n");
    for (name, p) in lf.labels() {
        writeln!(out, "{} {} {}", name, p.x, p.y).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(x1: i64, y1: i64, x2: i64, y2: i64) -> Segment {
        Segment::new(Point::new(x1, y1), Point::new(x2, y2))
    }

    #[test]
    fn parse_two_horizontal() {
        let f = parse_family("segments 2\n0 0 2 0\n0 2 2 2\n").unwrap();
        assert_eq!(f.segments(), &[seg(0, 0, 2, 0), seg(0, 2, 2, 2)]);
    }

    #[test]
    fn parse_rejects_touching() {
        let err = parse_family("segments 2\n0 0 2 0\n1 0 1 2\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::Invalid(FamilyError::PairNotDisjoint(0, 1, Intersection::Touch))
        );
    }

    #[test]
    fn parse_rejects_degenerate() {
        let err = parse_family("segments 1\n0 0 0 0\n").unwrap_err();
        assert_eq!(err, ParseError::Invalid(FamilyError::DegenerateSegment(0)));
    }

    #[test]
    fn parse_reports_position() {
        let err = parse_family("# header\nsegments 2\n0 0 2 0\n0 x 2 2\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 4,
                column: 3,
                message: "expected integer, found \"x\"".into()
            }
        );
        assert!(matches!(
            parse_family("segment 1\n"),
            Err(ParseError::Syntax { line: 1, column: 1, .. })
        ));
        assert!(matches!(
            parse_family("segments 2\n0 0 1 0\n"),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn comments_and_labels() {
        let text = "segments 2 # two\n0 0 2 0\n\n0 2 2 2\nlabels\na 0 0\nb 2 2 # top right\n";
        let lf = parse_labeled(text).unwrap();
        assert_eq!(lf.point("b").unwrap(), Point::new(2, 2));
        assert_eq!(parse_family(text).unwrap(), *lf.family());
        let back = parse_labeled(&serialize_labeled(&lf)).unwrap();
        assert_eq!(back, lf);
    }

    #[test]
    fn label_must_be_endpoint() {
        let text = "segments 2\n0 0 2 0\n0 2 2 2\nlabels\na 1 1\n";
        assert!(matches!(
            parse_labeled(text),
            Err(ParseError::Labels(LabelError::NotAnEndpoint(_)))
        ));
    }

    #[test]
    fn validate_examples() {
        assert!(validate_family(&[seg(0, 0, 2, 0), seg(0, 2, 2, 2)]).is_ok());
        assert_eq!(
            validate_family(&[seg(0, 0, 2, 0), seg(3, 0, 5, 0)]),
            Err(FamilyError::AllCollinear)
        );
        assert_eq!(
            validate_family(&[seg(0, 0, 2, 0), seg(1, -1, 1, 1)]),
            Err(FamilyError::PairNotDisjoint(0, 1, Intersection::ProperCross))
        );
        assert_eq!(
            validate_family(&[seg(0, 0, 2, 0), seg(1, 0, 3, 0), seg(0, 5, 1, 5)]),
            Err(FamilyError::PairNotDisjoint(0, 1, Intersection::CollinearOverlap))
        );
        assert_eq!(validate_family(&[]), Err(FamilyError::Empty));
        assert_eq!(
            validate_family(&[seg(0, 0, 1 << 30, 0), seg(0, 1, 1, 1)]),
            Err(FamilyError::CoordinateOutOfRange(0))
        );
    }

    #[test]
    fn serialize_is_canonical() {
        let f1 = validate_family(&[seg(0, 2, 2, 2), seg(2, 0, 0, 0)]).unwrap();
        let f2 = validate_family(&[seg(0, 0, 2, 0), seg(2, 2, 0, 2)]).unwrap();
        assert_eq!(serialize_family(&f1), "segments 2\n0 0 2 0\n0 2 2 2\n");
        assert_eq!(serialize_family(&f1), serialize_family(&f2));
    }

    #[test]
    fn central_symmetry() {
        let f = validate_family(&[seg(-2, 0, -1, 0), seg(1, 0, 2, 0), seg(0, 1, 0, 2), seg(0, -1, 0, -2)]).unwrap();
        assert!(is_centrally_symmetric(&f));
        let g = validate_family(&[seg(0, 1, 0, 3), seg(1, 0, 2, 1)]).unwrap();
        assert!(!is_centrally_symmetric(&g));
        assert!(!segments_centrally_symmetric(&[seg(0, 1, 0, 3)]));
        assert!(segments_centrally_symmetric(&[seg(-2, 0, -1, 0), seg(1, 0, 2, 0)]));
        assert_eq!(f.reflected().reflected(), f);
    }
}
