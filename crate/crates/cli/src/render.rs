//! SVG drawing of a segment family, optionally with a circumscribing polygon.

use std::collections::BTreeMap;
use std::fmt::Write;

use circumpoly::{circumscribes, BoundingBox, Certificate, Point, SegmentFamily, Violation};
use thiserror::Error;

/// Largest pixels-per-unit; wide families are drawn smaller.
const MAX_SCALE: i64 = 24;
const TARGET_SIZE: i64 = 800;
const MARGIN: i64 = 32;
/// Grid lines are drawn only up to this many units across.
const GRID_SPAN: i64 = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("certificate does not match the family: {0}")]
    Mismatch(#[from] Violation),
    #[error("certificate gives segment {0} the wrong role")]
    Role(usize),
}

/// Renders `f` with one `<line>` per segment and one dot per endpoint,
/// named from `labels` when given. A certificate is re-verified and drawn
/// as a closed path beneath the segments. The y axis points up.
pub fn render_svg(
    f: &SegmentFamily,
    labels: Option<&BTreeMap<String, Point>>,
    cert: Option<&Certificate>,
) -> Result<String, RenderError> {
    if let Some(c) = cert {
        let again = circumscribes(c.polygon.vertices(), f)?;
        if let Some(index) = again
            .classification
            .iter()
            .zip(&c.classification)
            .position(|(a, b)| a != b)
        {
            return Err(RenderError::Role(index));
        }
    }
    let bbox = f.bounds().unwrap_or_else(|| f.extent());
    let view = Viewport::new(bbox);
    let names: BTreeMap<Point, &str> = labels
        .map(|l| l.iter().map(|(n, &p)| (p, n.as_str())).collect())
        .unwrap_or_default();

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = view.width,
        h = view.height
    )
    .unwrap();
    svg.push_str(concat!(
        "<style>",
        ".grid{stroke:#e4e4e4;stroke-width:1;fill:none}",
        ".bounds{stroke:#999;stroke-width:1;fill:none}",
        ".polygon{fill:#cfe3f7;stroke:#3a78b5;stroke-width:2;stroke-linejoin:round}",
        ".segment{stroke:#111;stroke-width:3;stroke-linecap:round}",
        ".endpoint{fill:#c0392b}",
        "text{font:11px sans-serif;fill:#333}",
        "</style>\n"
    ));

    let mut grid = String::new();
    let gridded = bbox.width().max(bbox.height()) <= GRID_SPAN;
    for x in (bbox.x0..=bbox.x1).filter(|_| gridded) {
        let (sx, top) = view.map(Point::new(x, bbox.y1));
        let (_, bottom) = view.map(Point::new(x, bbox.y0));
        write!(grid, "M{sx} {top}V{bottom}").unwrap();
    }
    for y in (bbox.y0..=bbox.y1).filter(|_| gridded) {
        let (left, sy) = view.map(Point::new(bbox.x0, y));
        let (right, _) = view.map(Point::new(bbox.x1, y));
        write!(grid, "M{left} {sy}H{right}").unwrap();
    }
    writeln!(svg, r#"<path class="grid" d="{grid}"/>"#).unwrap();
    let (x0, y0) = view.map(Point::new(bbox.x0, bbox.y1));
    writeln!(
        svg,
        r#"<rect class="bounds" x="{x0}" y="{y0}" width="{}" height="{}"/>"#,
        bbox.width() * view.scale,
        bbox.height() * view.scale
    )
    .unwrap();

    if let Some(c) = cert {
        let mut d = String::new();
        for (i, &p) in c.polygon.vertices().iter().enumerate() {
            let (x, y) = view.map(p);
            write!(d, "{}{x} {y}", if i == 0 { "M" } else { "L" }).unwrap();
        }
        d.push('Z');
        writeln!(svg, r#"<path class="polygon" d="{d}"/>"#).unwrap();
    }

    for s in f.segments() {
        let (x1, y1) = view.map(s.a);
        let (x2, y2) = view.map(s.b);
        writeln!(
            svg,
            r#"<line class="segment" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#
        )
        .unwrap();
    }
    for p in f.segments().iter().flat_map(|s| [s.a, s.b]) {
        let (x, y) = view.map(p);
        writeln!(svg, r#"<circle class="endpoint" cx="{x}" cy="{y}" r="4"/>"#).unwrap();
        if let Some(name) = names.get(&p) {
            writeln!(svg, r#"<text x="{}" y="{}">{}</text>"#, x + 6, y - 6, escape(name)).unwrap();
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

struct Viewport {
    bbox: BoundingBox,
    scale: i64,
    width: i64,
    height: i64,
}

impl Viewport {
    fn new(bbox: BoundingBox) -> Self {
        let span = bbox.width().max(bbox.height()).max(1);
        let scale = (TARGET_SIZE / span).clamp(1, MAX_SCALE);
        Viewport {
            bbox,
            scale,
            width: bbox.width() * scale + 2 * MARGIN,
            height: bbox.height() * scale + 2 * MARGIN,
        }
    }

    fn map(&self, p: Point) -> (i64, i64) {
        (
            MARGIN + (p.x - self.bbox.x0) * self.scale,
            MARGIN + (self.bbox.y1 - p.y) * self.scale,
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
