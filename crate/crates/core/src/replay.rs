//! Replays the geometric facts behind the impossibility argument for the
//! built-in 17-segment family.
//!
//! The argument fixes the four segments on the outer hull as polygon
//! edges, splits the polygon into four pockets between them, and then rules
//! out every way of distributing the inner segments among the pockets. Each
//! contradiction has the same shape: a pocket would have to contain some
//! point `z` beyond a segment `xy`, and in the hull of the pocket's two
//! corners, `x`, `y` and `z`, the endpoints `x` and `y` separate `z` from
//! the corners. Since a simple polygon visits its hull points in hull
//! order, `xy` would be a diagonal inside the pocket, i.e. outside the
//! polygon.
//!
//! Each step below evaluates one such fact on the actual coordinates.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{convex_hull, Point, Segment};
use crate::instance::{is_centrally_symmetric, LabelError, LabeledFamily, SegmentFamily};
use crate::verify::hull_order_consistent;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckKind {
    HullMembership,
    ForcedHullEdge,
    HullOrderFact,
    SymmetryFact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    pub id: String,
    pub description: String,
    pub points: Vec<String>,
    pub check: CheckKind,
    pub passed: bool,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofReport {
    pub steps: Vec<ProofStep>,
    pub overall: bool,
}

impl ProofReport {
    pub fn step(&self, id: &str) -> Option<&ProofStep> {
        self.steps.iter().find(|s| s.id == id)
    }

    pub fn failed_ids(&self) -> Vec<&str> {
        self.steps.iter().filter(|s| !s.passed).map(|s| s.id.as_str()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.steps).expect("report serializes")
    }
}

impl fmt::Display for ProofReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(
                f,
                "{:<4} {} [{}] {}",
                s.id,
                if s.passed { "PASS" } else { "FAIL" },
                s.points.join(","),
                s.witness
            )?;
        }
        write!(f, "overall: {}", if self.overall { "PASS" } else { "FAIL" })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error(transparent)]
    Label(#[from] LabelError),
}

/// Family segments whose endpoints are neighbours on the hull boundary of
/// all endpoints. Any circumscribing polygon must use them as edges.
pub fn forced_hull_edges(f: &SegmentFamily) -> Vec<Segment> {
    let hull = convex_hull(&f.endpoints()).expect("validated family has distinct endpoints");
    let pts: Vec<Point> = hull.points().collect();
    let m = pts.len();
    let mut out: Vec<Segment> = (0..m)
        .map(|i| Segment::new(pts[i], pts[(i + 1) % m]))
        .filter(|s| f.index_of(s).is_some())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Labels the replay needs.
pub const REQUIRED_LABELS: [&str; 24] = [
    "a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m", "n", "p", "q", "r", "s", "t", "u", "v", "w", "x",
    "y",
];

/// Labels whose mirror images carry the `m_` prefix.
pub const MIRRORED_LABELS: [&str; 10] = ["p", "q", "r", "s", "t", "u", "v", "w", "x", "y"];

pub fn mirror_label(name: &str) -> String {
    format!("m_{name}")
}

/// Runs every step in order; a failing step never stops the replay.
pub fn replay_s2(lf: &LabeledFamily) -> Result<ProofReport, ReplayError> {
    for name in REQUIRED_LABELS {
        lf.point(name)?;
    }
    let ctx = Ctx { lf };
    let steps = vec![
        ctx.step(
            "S1",
            "the eight outer endpoints are hull corners, in order, paired by the four outer segments",
            &["a", "b", "c", "d", "e", "f", "g", "h"],
            CheckKind::HullMembership,
            Ctx::hull_membership,
        ),
        ctx.step(
            "S2",
            "the segments forced onto the polygon boundary are exactly ha, bc, de, fg",
            &["h", "a", "b", "c", "d", "e", "f", "g"],
            CheckKind::ForcedHullEdge,
            Ctx::forced_edges,
        ),
        ctx.step(
            "S3",
            "point reflection through the origin maps the labelled family onto itself",
            &["a", "e", "b", "f", "c", "g", "d", "h", "m", "n", "i", "j", "k", "l"],
            CheckKind::SymmetryFact,
            Ctx::symmetry,
        ),
        ctx.step(
            "S4",
            "with both ij endpoints and any of m, n on the pocket a-b, ij separates them from a, b",
            &["a", "b", "i", "j", "m", "n"],
            CheckKind::HullOrderFact,
            |c| {
                for others in [&["m"][..], &["n"], &["m", "n"]] {
                    c.separates(&["a", "b"], ("i", "j"), others)?;
                }
                Ok("ij separates {m},{n},{m,n} from a,b".into())
            },
        ),
        ctx.step(
            "S5",
            "kl is a vertical barrier between the mn/ij region and everything to its right",
            &["k", "l", "m", "n", "i", "j"],
            CheckKind::HullOrderFact,
            Ctx::barrier,
        ),
        ctx.step(
            "S6",
            "a pocket a-b through i, j, k but not l makes ij external",
            &["a", "b", "j", "k", "i"],
            CheckKind::HullOrderFact,
            |c| {
                c.separates(&["a", "b"], ("i", "j"), &["k"])?;
                Ok("ij separates k from a,b".into())
            },
        ),
        ctx.step(
            "S7",
            "a pocket a-b reaching past kl makes kl external",
            &["a", "b", "k", "l", "p", "q", "r", "s", "t", "u", "v", "w", "x", "y"],
            CheckKind::HullOrderFact,
            |c| {
                c.separates_each(
                    &["a", "b"],
                    ("k", "l"),
                    &["p", "q", "r", "s", "t", "u", "v", "w", "x", "y"],
                )
            },
        ),
        ctx.step(
            "S8",
            "a pocket g-h reaching below tu makes ut external",
            &["g", "h", "u", "t", "x", "y", "w", "v", "k"],
            CheckKind::HullOrderFact,
            |c| c.separates_each(&["g", "h"], ("u", "t"), &["x", "y", "w", "v", "k"]),
        ),
        ctx.step(
            "S9",
            "a pocket e-f reaching above wv without u makes wv external",
            &["e", "f", "w", "v", "x", "y", "t"],
            CheckKind::HullOrderFact,
            |c| c.separates_each(&["e", "f"], ("w", "v"), &["x", "y", "t"]),
        ),
        ctx.step(
            "S10",
            "a pocket e-f reaching above tu makes tu external",
            &["e", "f", "t", "u", "p", "q", "r", "s"],
            CheckKind::HullOrderFact,
            |c| c.separates_each(&["e", "f"], ("t", "u"), &["p", "q", "r", "s"]),
        ),
        ctx.step(
            "S11",
            "a pocket g-h reaching left of pq makes pq external",
            &["g", "h", "p", "q", "r", "s", "t"],
            CheckKind::HullOrderFact,
            |c| c.separates_each(&["g", "h"], ("p", "q"), &["r", "s", "t"]),
        ),
    ];
    let overall = steps.iter().all(|s| s.passed);
    Ok(ProofReport { steps, overall })
}

type Check = Result<String, String>;

struct Ctx<'a> {
    lf: &'a LabeledFamily,
}

impl<'a> Ctx<'a> {
    fn p(&self, name: &str) -> Result<Point, String> {
        self.lf.point(name).map_err(|e| e.to_string())
    }

    fn step(
        &self,
        id: &str,
        description: &str,
        points: &[&str],
        check: CheckKind,
        run: impl Fn(&Self) -> Check,
    ) -> ProofStep {
        let (passed, witness) = match run(self) {
            Ok(w) => (true, w),
            Err(w) => (false, w),
        };
        ProofStep {
            id: id.to_string(),
            description: description.to_string(),
            points: points.iter().map(|s| s.to_string()).collect(),
            check,
            passed,
            witness,
        }
    }

    fn name_of(&self, p: Point) -> String {
        self.lf.label_of(p).map_or_else(|| p.to_string(), str::to_string)
    }

    fn hull_membership(&self) -> Check {
        let names = ["a", "b", "c", "d", "e", "f", "g", "h"];
        let hull = convex_hull(&self.lf.family().endpoints()).expect("valid family");
        let pts: Vec<Point> = names.iter().map(|n| self.p(n)).collect::<Result<_, _>>()?;
        for (n, &p) in names.iter().zip(&pts) {
            if !hull.is_corner(p) {
                return Err(format!("{n} is not a hull corner"));
            }
        }
        if !hull_order_consistent(&pts, &hull, true).expect("corners are on the hull") {
            return Err("a..h are not in cyclic hull order".into());
        }
        for (u, v) in [("h", "a"), ("b", "c"), ("d", "e"), ("f", "g")] {
            if !hull.consecutive(self.p(u)?, self.p(v)?) {
                return Err(format!("{u} and {v} are not hull neighbours"));
            }
        }
        Ok(format!(
            "hull has {} boundary points; a..h corners in order",
            hull.len()
        ))
    }

    fn forced_edges(&self) -> Check {
        let mut want = BTreeSet::new();
        for (u, v) in [("h", "a"), ("b", "c"), ("d", "e"), ("f", "g")] {
            let s = Segment::new(self.p(u)?, self.p(v)?);
            if self.lf.family().index_of(&s).is_none() {
                return Err(format!("{u}{v} is not a segment"));
            }
            want.insert(s);
        }
        let got: BTreeSet<Segment> = forced_hull_edges(self.lf.family()).into_iter().collect();
        if got == want {
            return Ok("forced = {ha, bc, de, fg}".into());
        }
        let extra: Vec<String> = got
            .difference(&want)
            .map(|s| format!("{}{}", self.name_of(s.a), self.name_of(s.b)))
            .collect();
        let missing: Vec<String> = want
            .difference(&got)
            .map(|s| format!("{}{}", self.name_of(s.a), self.name_of(s.b)))
            .collect();
        Err(format!("extra forced {:?}, missing {:?}", extra, missing))
    }

    fn symmetry(&self) -> Check {
        if !is_centrally_symmetric(self.lf.family()) {
            return Err("segment set is not centrally symmetric".into());
        }
        let mirror = |u: &str, v: &str| -> Result<(), String> {
            if self.p(u)? == -self.p(v)? {
                Ok(())
            } else {
                Err(format!("{u} is not the mirror of {v}"))
            }
        };
        for (u, v) in [("a", "e"), ("b", "f"), ("c", "g"), ("d", "h"), ("m", "n")] {
            mirror(u, v)?;
        }
        // ij is the mirror of kl
        if !((mirror("i", "k").is_ok() && mirror("j", "l").is_ok())
            || (mirror("i", "l").is_ok() && mirror("j", "k").is_ok()))
        {
            return Err("ij is not the mirror of kl".into());
        }
        for name in MIRRORED_LABELS {
            mirror(&mirror_label(name), name)?;
        }
        Ok("family and labels invariant under p -> -p".into())
    }

    fn barrier(&self) -> Check {
        let (k, l) = (self.p("k")?, self.p("l")?);
        if k.x != l.x {
            return Err("kl is not vertical".into());
        }
        let x0 = k.x;
        for n in ["i", "j", "m", "n"] {
            if self.p(n)?.x >= x0 {
                return Err(format!("{n} is not left of kl"));
            }
        }
        for n in MIRRORED_LABELS {
            if self.p(n)?.x <= x0 {
                return Err(format!("{n} is not right of kl"));
            }
        }
        let (lo, hi) = (k.y.min(l.y), k.y.max(l.y));
        for n in ["m", "n"] {
            let y = self.p(n)?.y;
            if y <= lo || y >= hi {
                return Err(format!("kl does not span {n} vertically"));
            }
        }
        Ok(format!("kl at x = {x0} spans y in [{lo}, {hi}]"))
    }

    /// In the hull of `corners`, the chord endpoints and `others`, every
    /// point is on the boundary and the chord splits `corners` from `others`.
    fn separates(&self, corners: &[&str], chord: (&str, &str), others: &[&str]) -> Result<(), String> {
        let names: Vec<&str> = corners
            .iter()
            .chain([&chord.0, &chord.1])
            .chain(others.iter())
            .copied()
            .collect();
        let pts: Vec<Point> = names.iter().map(|n| self.p(n)).collect::<Result<_, _>>()?;
        let hull = convex_hull(&pts).map_err(|e| e.to_string())?;
        let order: Vec<&str> = hull
            .points()
            .map(|p| names[pts.iter().position(|&q| q == p).unwrap()])
            .collect();
        let show = || order.join(",");
        if order.len() != names.len() {
            let missing: Vec<&str> = names.iter().filter(|n| !order.contains(n)).copied().collect();
            return Err(format!("{} not on hull ({})", missing.join(","), show()));
        }
        let m = order.len();
        let ia = order.iter().position(|&n| n == chord.0).unwrap();
        let ib = order.iter().position(|&n| n == chord.1).unwrap();
        let arc = |from: usize, to: usize| -> BTreeSet<&str> {
            let mut set = BTreeSet::new();
            let mut i = (from + 1) % m;
            while i != to {
                set.insert(order[i]);
                i = (i + 1) % m;
            }
            set
        };
        let (arc1, arc2) = (arc(ia, ib), arc(ib, ia));
        let cs: BTreeSet<&str> = corners.iter().copied().collect();
        let os: BTreeSet<&str> = others.iter().copied().collect();
        if (arc1 == cs && arc2 == os) || (arc1 == os && arc2 == cs) {
            Ok(())
        } else {
            Err(format!(
                "{}{} does not separate {} from {} (hull order {})",
                chord.0,
                chord.1,
                others.join(","),
                corners.join(","),
                show()
            ))
        }
    }

    fn separates_each(&self, corners: &[&str], chord: (&str, &str), zs: &[&str]) -> Check {
        for z in zs {
            self.separates(corners, chord, &[z])
                .map_err(|e| format!("z={z}: {e}"))?;
        }
        Ok(format!(
            "{}{} separates each of {} from {}",
            chord.0,
            chord.1,
            zs.join(","),
            corners.join(",")
        ))
    }
}
