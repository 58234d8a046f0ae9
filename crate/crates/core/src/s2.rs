//! The built-in 17-segment axis-parallel family that admits no
//! circumscribing polygon.
//!
//! The family is centrally symmetric. Its named endpoints follow the labels
//! used by the replay: `a..h` on the four outer segments, `ij`, `kl` and the
//! self-symmetric `mn` in the middle, and `p..y` on the right with their
//! mirror images named `m_p..m_y`.

use std::collections::BTreeMap;

use crate::geom::{Point, Segment};
use crate::instance::{validate_family, BoundingBox, FamilyError, LabelError, LabeledFamily};

/// Each row is one segment: two named endpoints.
pub type LabelRow<'a> = (&'a str, (i64, i64), &'a str, (i64, i64));
pub type LabelTable<'a> = [LabelRow<'a>];

pub const S2_TABLE: [LabelRow<'static>; 17] = [
    ("h", (10, 8), "a", (-10, 8)),
    ("b", (-11, 5), "c", (-11, -7)),
    ("d", (-10, -8), "e", (10, -8)),
    ("f", (11, -5), "g", (11, 7)),
    ("i", (-1, 4), "j", (-1, -7)),
    ("k", (1, -4), "l", (1, 7)),
    ("m", (0, 2), "n", (0, -2)),
    ("p", (7, 3), "q", (7, 6)),
    ("r", (5, 4), "s", (4, 4)),
    ("t", (2, 2), "u", (10, 2)),
    ("v", (9, -1), "w", (2, -1)),
    ("x", (8, 0), "y", (3, 0)),
    ("m_p", (-7, -3), "m_q", (-7, -6)),
    ("m_r", (-5, -4), "m_s", (-4, -4)),
    ("m_t", (-2, -2), "m_u", (-10, -2)),
    ("m_v", (-9, 1), "m_w", (-2, 1)),
    ("m_x", (-8, 0), "m_y", (-3, 0)),
];

pub const S2_BOUNDS: BoundingBox = BoundingBox {
    x0: -11,
    y0: -8,
    x1: 11,
    y1: 8,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Label(#[from] LabelError),
}

/// Builds a labelled family from a table of named segments.
pub fn labeled_from_table(table: &LabelTable<'_>) -> Result<LabeledFamily, TableError> {
    let mut segments = Vec::with_capacity(table.len());
    let mut labels = BTreeMap::new();
    for &(u, (ux, uy), v, (vx, vy)) in table {
        let (pu, pv) = (Point::new(ux, uy), Point::new(vx, vy));
        segments.push(Segment::new(pu, pv));
        for (name, p) in [(u, pu), (v, pv)] {
            if labels.insert(name.to_string(), p).is_some() {
                return Err(LabelError::Duplicate(name.to_string(), name.to_string()).into());
            }
        }
    }
    let family = validate_family(&segments)?;
    let bounds = BoundingBox::of_points(family.endpoints());
    Ok(LabeledFamily::new(family.with_bounds(bounds), labels)?)
}

pub fn build_s2() -> LabeledFamily {
    let lf = labeled_from_table(&S2_TABLE).expect("built-in table is valid");
    let family = lf.family().clone().with_bounds(Some(S2_BOUNDS));
    LabeledFamily::new(family, lf.labels().clone()).expect("labels unchanged")
}
