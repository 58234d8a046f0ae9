//! Circumscribing polygons for families of disjoint planar segments.
//!
//! A simple polygon circumscribes a family of disjoint closed segments when
//! its vertex set is exactly the set of segment endpoints and every segment
//! is either a polygon edge or an internal diagonal. This crate provides:
//!
//! * [`geom`]: exact integer predicates (orientation, segment intersection,
//!   convex hull with collinear boundary points, point location);
//! * [`instance`]: validated segment families and their text format;
//! * [`verify`]: certificate checking and the hull-order predicate;
//! * [`solver`]: an exhaustive pruned search, a brute-force oracle and a
//!   seeded instance generator;
//! * [`s2`]: the built-in 17-segment axis-parallel family with no
//!   circumscribing polygon;
//! * [`replay`]: step-by-step re-checking of the geometric facts behind that
//!   family's impossibility argument.

pub mod geom;
pub mod instance;
pub mod replay;
pub mod s2;
pub mod solver;
pub mod verify;

pub use geom::{
    convex_hull, is_simple_polygon, orientation, point_in_polygon, segment_intersection, HullSequence, Intersection,
    Location, Orientation, Point, Polygon, Segment,
};
pub use instance::{
    is_centrally_symmetric, parse_family, parse_labeled, serialize_family, serialize_labeled, validate_family,
    BoundingBox, FamilyError, LabeledFamily, ParseError, SegmentFamily,
};
pub use replay::{forced_hull_edges, replay_s2, ProofReport, ProofStep};
pub use s2::build_s2;
pub use solver::{
    brute_force_count, brute_force_solve, count_circumscribing, random_family, solve, solve_segments, CountOutcome,
    PruneRule, SearchStats, SolveConfig, SolveError, SolveOutcome, Verdict,
};
pub use verify::{
    circumscribes, classify_chord, close_path, hull_order_consistent, Certificate, ChordClass, Violation,
};
