//! Helpers shared by the integration tests: seeded instance corpora and
//! oracles written independently of the library's own predicates.
#![allow(dead_code)]

use circumpoly::geom::is_simple_polygon;
use circumpoly::{random_family, BoundingBox, Location, Point, SegmentFamily};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The seeded axis-parallel corpus: 3 to 5 segments in [-10,10]^2.
pub fn oracle_corpus(count: u64) -> Vec<SegmentFamily> {
    let bbox = BoundingBox::new(-10, -10, 10, 10);
    (0..count)
        .map(|seed| random_family(3 + (seed % 3) as usize, bbox, true, seed).expect("corpus family"))
        .collect()
}

/// Random simple polygon on `n` distinct grid points: a random order is
/// untangled by 2-opt moves until no two edges meet improperly.
pub fn random_simple_polygon(rng: &mut ChaCha8Rng, n: usize, half: i64) -> Vec<Point> {
    'retry: loop {
        let mut pts: Vec<Point> = Vec::with_capacity(n);
        while pts.len() < n {
            let p = Point::new(rng.gen_range(-half..=half), rng.gen_range(-half..=half));
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        if pts.iter().all(|p| cross(pts[0], pts[1], *p) == 0) {
            continue;
        }
        for _ in 0..10_000 {
            match first_bad_pair(&pts) {
                None => {
                    assert!(is_simple_polygon(&pts));
                    return pts;
                }
                Some(Move::Reverse(i, j)) => pts[i + 1..=j].reverse(),
                Some(Move::Swap(i, j)) => pts.swap(i, j),
            }
        }
        continue 'retry;
    }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn cross(o: Point, a: Point, b: Point) -> i128 {
    (a.x - o.x) as i128 * (b.y - o.y) as i128 - (a.y - o.y) as i128 * (b.x - o.x) as i128
}

fn on_closed(a: Point, b: Point, p: Point) -> bool {
    cross(a, b, p) == 0 && p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segments `ab` and `cd` share at least one point.
pub fn closed_meet(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (d1, d2) = (cross(a, b, c).signum(), cross(a, b, d).signum());
    let (d3, d4) = (cross(c, d, a).signum(), cross(c, d, b).signum());
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    on_closed(a, b, c) || on_closed(a, b, d) || on_closed(c, d, a) || on_closed(c, d, b)
}

enum Move {
    /// Reverse the chain between two crossing edges.
    Reverse(usize, usize),
    /// Swap a vertex with the neighbour it folds back over.
    Swap(usize, usize),
}

fn first_bad_pair(pts: &[Point]) -> Option<Move> {
    let n = pts.len();
    for s in 0..n {
        let (prev, next) = ((s + n - 1) % n, (s + 1) % n);
        let (y, x) = (pts[prev], pts[next]);
        if cross(pts[s], x, y) == 0 {
            if on_closed(pts[s], y, x) {
                return Some(Move::Swap(s, next));
            }
            if on_closed(pts[s], x, y) {
                return Some(Move::Swap(s, prev));
            }
        }
    }
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if closed_meet(pts[i], pts[i + 1], pts[j], pts[(j + 1) % n]) {
                return Some(Move::Reverse(i, j));
            }
        }
    }
    None
}

/// Crossing-number point location with the half-open rule (a symbolic
/// upward shift of the test ray), boundary detected separately.
pub fn ray_cast(p: Point, ring: &[Point]) -> Location {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        if on_closed(a, b, p) {
            return Location::Boundary;
        }
        if (a.y > p.y) != (b.y > p.y) {
            // x-coordinate of the crossing compared with p.x, exactly
            let lhs = (p.x - a.x) as i128 * (b.y - a.y) as i128;
            let rhs = (b.x - a.x) as i128 * (p.y - a.y) as i128;
            let right = if b.y > a.y { lhs < rhs } else { lhs > rhs };
            if right {
                inside = !inside;
            }
        }
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

/// Chord class by first principles: blocked if it meets the boundary away
/// from its endpoints, otherwise decided by the parity of its midpoint.
pub fn chord_oracle(ring: &[Point], i: usize, j: usize) -> &'static str {
    let n = ring.len();
    if (i + 1) % n == j || (j + 1) % n == i {
        return "edge";
    }
    let (a, b) = (ring[i], ring[j]);
    for (k, &p) in ring.iter().enumerate() {
        if k == i || k == j {
            continue;
        }
        if on_closed(a, b, p) {
            return "blocked";
        }
    }
    for k in 0..n {
        let (u, v) = (ring[k], ring[(k + 1) % n]);
        let incident = [i, j].contains(&k) || [i, j].contains(&((k + 1) % n));
        if incident {
            continue;
        }
        if closed_meet(a, b, u, v) {
            return "blocked";
        }
    }
    let doubled: Vec<Point> = ring.iter().map(|p| Point::new(2 * p.x, 2 * p.y)).collect();
    match ray_cast(Point::new(a.x + b.x, a.y + b.y), &doubled) {
        Location::Inside => "internal",
        Location::Outside => "external",
        Location::Boundary => "blocked",
    }
}

/// A translation of one labelled segment of the built-in family, optionally
/// together with its mirror image, aimed at one replay step.
pub struct Mutation {
    pub target: &'static str,
    pub segment: (&'static str, &'static str),
    pub shift: (i64, i64),
    pub with_mirror: bool,
    /// Every step the mutated family fails.
    pub fails: &'static [&'static str],
}

impl Mutation {
    pub fn apply(&self, lf: &circumpoly::LabeledFamily) -> circumpoly::LabeledFamily {
        let (u, v) = self.segment;
        let (dx, dy) = self.shift;
        let s = lf.segment(u, v).unwrap().expect("labelled segment");
        let mut moves = vec![(s, dx, dy)];
        if self.with_mirror {
            let m = lf
                .family()
                .segments()
                .iter()
                .copied()
                .find(|t| *t == s.reflected())
                .unwrap();
            moves.push((m, -dx, -dy));
        }
        lf.with_segments_moved(&moves).expect("mutation keeps the family valid")
    }

    pub fn isolates(&self) -> bool {
        self.fails == [self.target]
    }
}

/// The smallest failure sets reachable by translating a segment or a
/// segment orbit of the built-in family. No translation fails S2.
pub const MUTATIONS: [Mutation; 10] = [
    Mutation {
        target: "S1",
        segment: ("h", "a"),
        shift: (1, 0),
        with_mirror: true,
        fails: &["S1"],
    },
    Mutation {
        target: "S3",
        segment: ("b", "c"),
        shift: (0, 1),
        with_mirror: false,
        fails: &["S3"],
    },
    Mutation {
        target: "S4",
        segment: ("m", "n"),
        shift: (0, 2),
        with_mirror: false,
        fails: &["S3", "S4"],
    },
    Mutation {
        target: "S5",
        segment: ("m", "n"),
        shift: (0, -2),
        with_mirror: false,
        fails: &["S3", "S5"],
    },
    Mutation {
        target: "S6",
        segment: ("k", "l"),
        shift: (0, -3),
        with_mirror: true,
        fails: &["S6", "S7"],
    },
    Mutation {
        target: "S7",
        segment: ("k", "l"),
        shift: (0, -1),
        with_mirror: true,
        fails: &["S7"],
    },
    Mutation {
        target: "S8",
        segment: ("v", "w"),
        shift: (1, 0),
        with_mirror: true,
        fails: &["S8"],
    },
    Mutation {
        target: "S9",
        segment: ("v", "w"),
        shift: (0, -1),
        with_mirror: true,
        fails: &["S9"],
    },
    Mutation {
        target: "S10",
        segment: ("r", "s"),
        shift: (0, -3),
        with_mirror: true,
        fails: &["S10"],
    },
    Mutation {
        target: "S11",
        segment: ("p", "q"),
        shift: (1, 0),
        with_mirror: true,
        fails: &["S11"],
    },
];
