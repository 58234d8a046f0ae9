//! Exhaustive search for circumscribing polygons.
//!
//! The search grows a vertex path from a fixed hull corner and only ever
//! prunes branches that provably cannot be completed into a circumscribing
//! polygon. Every completed cycle is re-checked with [`circumscribes`], so
//! a `Feasible` verdict always carries a verified certificate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{
    angle_cmp, convex_hull, in_relative_interior, is_simple_polygon, locate_scaled, on_segment, seg_seg, signed_area2,
    Intersection, Location, Point, Segment,
};
use crate::instance::{validate_family, BoundingBox, FamilyError, SegmentFamily};
use crate::verify::{circumscribes, Certificate};

/// Largest supported number of endpoints (vertex sets are `u64` masks).
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PruneRule {
    /// New edge crosses a committed edge or runs through another vertex.
    EdgeCross,
    /// New edge properly crosses a family segment.
    SegmentCross,
    /// Hull boundary points must be visited in counterclockwise hull order.
    HullOrder,
    /// Segments joining consecutive hull boundary points must be edges.
    ForcedEdge,
    /// A closed pocket (path between consecutive hull points plus the hull
    /// edge) lies outside the polygon: nothing may be left inside it.
    Pocket,
    /// Every unvisited vertex needs two usable neighbours.
    Degree,
    /// A segment closed off by the path (its partner already visited) splits
    /// the polygon; the loop it closes must turn counterclockwise and hold
    /// no other vertex, or the segment lies outside.
    Diagonal,
}

impl PruneRule {
    pub const ALL: [PruneRule; 7] = [
        PruneRule::EdgeCross,
        PruneRule::SegmentCross,
        PruneRule::HullOrder,
        PruneRule::ForcedEdge,
        PruneRule::Pocket,
        PruneRule::Degree,
        PruneRule::Diagonal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PruneRule::EdgeCross => "edge-cross",
            PruneRule::SegmentCross => "segment-cross",
            PruneRule::HullOrder => "hull-order",
            PruneRule::ForcedEdge => "forced-edge",
            PruneRule::Pocket => "pocket",
            PruneRule::Degree => "degree",
            PruneRule::Diagonal => "diagonal",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for PruneRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PruneRule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        PruneRule::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| {
            let names: Vec<_> = PruneRule::ALL.iter().map(|r| r.name()).collect();
            format!("unknown prune rule {s:?} (expected one of {})", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub prune_hull_order: bool,
    pub prune_segment_cross: bool,
    pub prune_edge_cross: bool,
    pub prune_forced_edge: bool,
    pub prune_pocket: bool,
    pub prune_degree: bool,
    pub prune_diagonal: bool,
    pub node_limit: u64,
    pub time_limit: Duration,
    pub workers: usize,
    pub deterministic: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            prune_hull_order: true,
            prune_segment_cross: true,
            prune_edge_cross: true,
            prune_forced_edge: true,
            prune_pocket: true,
            prune_degree: true,
            prune_diagonal: true,
            node_limit: 1_000_000_000,
            time_limit: Duration::from_secs(3600),
            workers: 1,
            deterministic: true,
        }
    }
}

impl SolveConfig {
    pub fn enabled(&self, rule: PruneRule) -> bool {
        match rule {
            PruneRule::EdgeCross => self.prune_edge_cross,
            PruneRule::SegmentCross => self.prune_segment_cross,
            PruneRule::HullOrder => self.prune_hull_order,
            PruneRule::ForcedEdge => self.prune_forced_edge,
            PruneRule::Pocket => self.prune_pocket,
            PruneRule::Degree => self.prune_degree,
            PruneRule::Diagonal => self.prune_diagonal,
        }
    }

    pub fn set(&mut self, rule: PruneRule, on: bool) {
        let slot = match rule {
            PruneRule::EdgeCross => &mut self.prune_edge_cross,
            PruneRule::SegmentCross => &mut self.prune_segment_cross,
            PruneRule::HullOrder => &mut self.prune_hull_order,
            PruneRule::ForcedEdge => &mut self.prune_forced_edge,
            PruneRule::Pocket => &mut self.prune_pocket,
            PruneRule::Degree => &mut self.prune_degree,
            PruneRule::Diagonal => &mut self.prune_diagonal,
        };
        *slot = on;
    }

    pub fn without(mut self, rule: PruneRule) -> Self {
        self.set(rule, false);
        self
    }

    pub fn with_no_prunes(mut self) -> Self {
        for r in PruneRule::ALL {
            self.set(r, false);
        }
        self
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        if self.node_limit == 0 {
            return Err(SolveError::Config("node limit must be positive".into()));
        }
        if self.time_limit.is_zero() {
            return Err(SolveError::Config("time limit must be positive".into()));
        }
        if self.workers == 0 {
            return Err(SolveError::Config("need at least one worker".into()));
        }
        if self.deterministic && self.workers > 1 {
            return Err(SolveError::Config("deterministic mode runs a single worker".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("invalid family: {0}")]
    InvalidFamily(#[from] FamilyError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("family has {0} endpoints, more than the supported {MAX_VERTICES}")]
    TooLarge(usize),
    #[error("family has {have} endpoints, brute force cap is {cap}")]
    CapExceeded { have: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AbortReason {
    NodeLimit,
    TimeLimit,
}

impl fmt::Display for AbortReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbortReason::NodeLimit => f.write_str("node limit reached"),
            AbortReason::TimeLimit => f.write_str("time limit reached"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Feasible(Certificate),
    Infeasible,
    Aborted(AbortReason),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Feasible(_) => "feasible",
            Verdict::Infeasible => "infeasible",
            Verdict::Aborted(_) => "aborted",
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Feasible(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub pruned_by_rule: BTreeMap<String, u64>,
    pub elapsed_secs: f64,
    pub peak_depth: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub verdict: Verdict,
    pub stats: SearchStats,
}

impl SolveOutcome {
    /// One-line JSON record: verdict plus statistics.
    pub fn stats_json(&self) -> String {
        #[derive(Serialize)]
        struct Record<'a> {
            verdict: &'a str,
            #[serde(skip_serializing_if = "Option::is_none")]
            reason: Option<AbortReason>,
            #[serde(flatten)]
            stats: &'a SearchStats,
        }
        let reason = match self.verdict {
            Verdict::Aborted(r) => Some(r),
            _ => None,
        };
        serde_json::to_string(&Record {
            verdict: self.verdict.name(),
            reason,
            stats: &self.stats,
        })
        .expect("stats serialize")
    }
}

/// Validates raw segments, then runs [`solve`].
pub fn solve_segments(segments: &[Segment], cfg: &SolveConfig) -> Result<SolveOutcome, SolveError> {
    let f = validate_family(segments)?;
    solve(&f, cfg)
}

/// Decides whether `f` admits a circumscribing polygon.
pub fn solve(f: &SegmentFamily, cfg: &SolveConfig) -> Result<SolveOutcome, SolveError> {
    let (shared, stats) = search(f, cfg, false)?;
    let verdict = if let Some(cert) = shared.found.into_inner().unwrap() {
        Verdict::Feasible(cert)
    } else if let Some(reason) = shared.abort.into_inner().unwrap() {
        Verdict::Aborted(reason)
    } else {
        Verdict::Infeasible
    };
    Ok(SolveOutcome { verdict, stats })
}

/// Result of [`count_circumscribing`].
#[derive(Debug, Clone, PartialEq)]
pub struct CountOutcome {
    /// Distinct circumscribing polygons found (as vertex cycles).
    pub count: u64,
    /// Set when a limit stopped the enumeration early.
    pub aborted: Option<AbortReason>,
    pub stats: SearchStats,
}

/// Enumerates all circumscribing polygons of `f` with the same search as
/// [`solve`], counting each vertex cycle once.
pub fn count_circumscribing(f: &SegmentFamily, cfg: &SolveConfig) -> Result<CountOutcome, SolveError> {
    let (shared, stats) = search(f, cfg, true)?;
    Ok(CountOutcome {
        count: shared.count.into_inner(),
        aborted: shared.abort.into_inner().unwrap(),
        stats,
    })
}

fn search(f: &SegmentFamily, cfg: &SolveConfig, count_all: bool) -> Result<(Shared, SearchStats), SolveError> {
    cfg.validate()?;
    let n = 2 * f.len();
    if n > MAX_VERTICES {
        return Err(SolveError::TooLarge(n));
    }
    let start = Instant::now();
    let inst = Instance::new(f);
    let shared = Shared {
        start,
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        abort: Mutex::new(None),
        found: Mutex::new(None),
        count_all,
        count: AtomicU64::new(0),
    };

    let root = Search::root(&inst, cfg);
    let mut totals = Totals::default();
    if cfg.workers <= 1 {
        let mut s = root;
        s.run(&shared);
        totals.absorb(&s);
    } else {
        let (frontier, prefix_totals) = root.frontier(&shared, 8 * cfg.workers);
        totals.merge(&prefix_totals);
        let next = AtomicUsize::new(0);
        let per_worker: Vec<Totals> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..cfg.workers)
                .map(|_| {
                    scope.spawn(|| {
                        let mut t = Totals::default();
                        loop {
                            let i = next.fetch_add(1, AtomicOrdering::Relaxed);
                            if i >= frontier.len() || shared.stop.load(AtomicOrdering::Relaxed) {
                                break;
                            }
                            let mut s = frontier[i].clone();
                            s.run(&shared);
                            t.absorb(&s);
                        }
                        t
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        });
        for t in &per_worker {
            totals.merge(t);
        }
    }

    let stats = SearchStats {
        nodes_expanded: totals.nodes,
        pruned_by_rule: PruneRule::ALL
            .iter()
            .map(|r| (r.name().to_string(), totals.pruned[r.index()]))
            .collect(),
        elapsed_secs: start.elapsed().as_secs_f64(),
        peak_depth: totals.peak_depth,
    };
    Ok((shared, stats))
}

struct Shared {
    start: Instant,
    nodes: AtomicU64,
    stop: AtomicBool,
    abort: Mutex<Option<AbortReason>>,
    found: Mutex<Option<Certificate>>,
    count_all: bool,
    count: AtomicU64,
}

impl Shared {
    fn set_abort(&self, reason: AbortReason) {
        let mut a = self.abort.lock().unwrap();
        if a.is_none() {
            *a = Some(reason);
        }
        self.stop.store(true, AtomicOrdering::Relaxed);
    }

    fn set_found(&self, cert: Certificate) {
        let mut f = self.found.lock().unwrap();
        if f.is_none() {
            *f = Some(cert);
        }
        self.stop.store(true, AtomicOrdering::Relaxed);
    }
}

#[derive(Default)]
struct Totals {
    nodes: u64,
    pruned: [u64; PruneRule::ALL.len()],
    peak_depth: usize,
}

impl Totals {
    fn absorb(&mut self, s: &Search<'_>) {
        self.nodes += s.nodes;
        for (a, b) in self.pruned.iter_mut().zip(s.pruned) {
            *a += b;
        }
        self.peak_depth = self.peak_depth.max(s.peak_depth);
    }

    fn merge(&mut self, o: &Totals) {
        self.nodes += o.nodes;
        for (a, b) in self.pruned.iter_mut().zip(o.pruned) {
            *a += b;
        }
        self.peak_depth = self.peak_depth.max(o.peak_depth);
    }
}

/// Precomputed, immutable view of the family for the search.
struct Instance<'f> {
    family: &'f SegmentFamily,
    n: usize,
    pts: Vec<Point>,
    partner: Vec<usize>,
    /// Position in counterclockwise hull boundary order, starting at the anchor.
    hull_pos: Vec<Option<usize>>,
    hull_len: usize,
    /// Segment partner must be the polygon neighbour (hull-consecutive segment).
    forced: Vec<bool>,
    /// Edge passes through a third vertex.
    through_vertex: Vec<bool>,
    /// Edge properly crosses a family segment.
    crosses_segment: Vec<bool>,
    /// Per edge: bitset of edges it cannot coexist with in a simple polygon.
    conflict: Vec<Vec<u64>>,
    edge_words: usize,
    edge_ends: Vec<(usize, usize)>,
    /// Candidate order per (prev, cur); row `cur * n + cur` holds the root order.
    order: Vec<Vec<u8>>,
}

impl<'f> Instance<'f> {
    fn new(family: &'f SegmentFamily) -> Self {
        let pts = family.endpoints();
        let n = pts.len();
        let partner: Vec<usize> = (0..n).map(|i| i ^ 1).collect();

        let hull = convex_hull(&pts).expect("validated family has distinct endpoints");
        let hull_len = hull.len();
        let mut hull_pos = vec![None; n];
        for (k, e) in hull.boundary.iter().enumerate() {
            let v = pts.iter().position(|&p| p == e.point).unwrap();
            hull_pos[v] = Some(k);
        }
        let forced: Vec<bool> = (0..n).map(|v| hull.consecutive(pts[v], pts[partner[v]])).collect();

        let ne = n * (n - 1) / 2;
        let mut edge_ends = Vec::with_capacity(ne);
        for u in 0..n {
            for v in (u + 1)..n {
                edge_ends.push((u, v));
            }
        }
        let through_vertex: Vec<bool> = edge_ends
            .iter()
            .map(|&(u, v)| (0..n).any(|w| w != u && w != v && in_relative_interior(pts[u], pts[v], pts[w])))
            .collect();
        let crosses_segment: Vec<bool> = edge_ends
            .iter()
            .map(|&(u, v)| {
                family
                    .segments()
                    .iter()
                    .any(|s| seg_seg(pts[u], pts[v], s.a, s.b) == Intersection::ProperCross)
            })
            .collect();

        let edge_words = ne.div_ceil(64);
        let mut conflict = vec![vec![0u64; edge_words]; ne];
        for i in 0..ne {
            let (a, b) = edge_ends[i];
            for j in (i + 1)..ne {
                let (c, d) = edge_ends[j];
                let clash = if a == c || a == d || b == c || b == d {
                    let (shared, x) = if a == c || a == d { (a, b) } else { (b, a) };
                    let y = if c == shared { d } else { c };
                    on_segment(pts[shared], pts[x], pts[y]) || on_segment(pts[shared], pts[y], pts[x])
                } else {
                    seg_seg(pts[a], pts[b], pts[c], pts[d]) != Intersection::Disjoint
                };
                if clash {
                    conflict[i][j / 64] |= 1 << (j % 64);
                    conflict[j][i / 64] |= 1 << (i % 64);
                }
            }
        }

        let mut inst = Instance {
            family,
            n,
            pts,
            partner,
            hull_pos,
            hull_len,
            forced,
            through_vertex,
            crosses_segment,
            conflict,
            edge_words,
            edge_ends,
            order: Vec::new(),
        };
        inst.order = inst.build_orders(&hull);
        inst
    }

    fn anchor(&self) -> usize {
        self.hull_pos.iter().position(|&p| p == Some(0)).unwrap()
    }

    #[inline]
    fn edge_id(&self, u: usize, v: usize) -> usize {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        // row offset for u in the upper triangle
        u * (2 * self.n - u - 1) / 2 + (v - u - 1)
    }

    fn build_orders(&self, hull: &crate::geom::HullSequence) -> Vec<Vec<u8>> {
        let n = self.n;
        let mut order = vec![Vec::new(); n * n];
        for prev in 0..n {
            for cur in 0..n {
                let reference = if prev == cur {
                    // root: start from the direction of the next hull point
                    let next = hull.boundary[1 % hull.len()].point;
                    next - self.pts[cur]
                } else {
                    self.pts[prev] - self.pts[cur]
                };
                let mut cand: Vec<u8> = (0..n).filter(|&w| w != cur && w != prev).map(|w| w as u8).collect();
                let c = self.pts[cur];
                cand.sort_by(|&u, &w| {
                    angle_cmp(reference, self.pts[u as usize] - c, self.pts[w as usize] - c).then(u.cmp(&w))
                });
                order[prev * n + cur] = cand;
            }
        }
        order
    }
}

/// Depth-first search state; cloneable so subtrees can be handed to workers.
#[derive(Clone)]
struct Search<'i> {
    inst: &'i Instance<'i>,
    cfg: SolveConfig,
    path: Vec<usize>,
    visited: u64,
    /// Committed edges.
    committed: Vec<u64>,
    /// Edges killed by a conflict with a committed edge.
    dead: Vec<u64>,
    /// Per vertex: neighbours reachable by an edge that is still usable.
    live: Vec<u64>,
    /// Path indices at which hull boundary points were reached.
    hull_arrivals: Vec<usize>,
    nodes: u64,
    pruned: [u64; PruneRule::ALL.len()],
    peak_depth: usize,
}

enum Step {
    Continue,
    Stop,
}

impl<'i> Search<'i> {
    fn root(inst: &'i Instance<'i>, cfg: &SolveConfig) -> Self {
        let n = inst.n;
        let mut live = vec![0u64; n];
        for (e, &(u, v)) in inst.edge_ends.iter().enumerate() {
            if !inst.through_vertex[e] && !inst.crosses_segment[e] {
                live[u] |= 1 << v;
                live[v] |= 1 << u;
            }
        }
        let anchor = inst.anchor();
        Search {
            inst,
            cfg: cfg.clone(),
            path: vec![anchor],
            visited: 1 << anchor,
            committed: vec![0; inst.edge_words],
            dead: vec![0; inst.edge_words],
            live,
            hull_arrivals: vec![0],
            nodes: 0,
            pruned: [0; PruneRule::ALL.len()],
            peak_depth: 1,
        }
    }

    /// Expands the tree breadth-first (in search order) until at least
    /// `target` open nodes exist, returning them as independent subtrees.
    fn frontier(self, shared: &Shared, target: usize) -> (Vec<Search<'i>>, Totals) {
        let mut totals = Totals::default();
        let mut level = vec![self];
        loop {
            if level.len() >= target || level.is_empty() {
                return (level, totals);
            }
            if level[0].path.len() >= level[0].inst.n {
                return (level, totals);
            }
            let mut next = Vec::new();
            for mut s in level {
                s.nodes += 1;
                let children = s.children(shared);
                totals.absorb(&s);
                next.extend(children);
            }
            if shared.stop.load(AtomicOrdering::Relaxed) {
                return (Vec::new(), totals);
            }
            level = next;
        }
    }

    fn children(&mut self, shared: &Shared) -> Vec<Search<'i>> {
        let mut out = Vec::new();
        let cur = *self.path.last().unwrap();
        let prev = if self.path.len() >= 2 {
            self.path[self.path.len() - 2]
        } else {
            cur
        };
        let order = &self.inst.order[prev * self.inst.n + cur];
        if self.path.len() == self.inst.n {
            return out;
        }
        for &w in order.iter() {
            let w = w as usize;
            if self.visited >> w & 1 == 1 {
                continue;
            }
            if let Some(saved) = self.try_push(w) {
                let mut child = self.clone();
                child.nodes = 0;
                child.pruned = [0; PruneRule::ALL.len()];
                out.push(child);
                self.pop(saved);
            }
        }
        let _ = shared;
        out
    }

    fn run(&mut self, shared: &Shared) {
        let _ = self.dfs(shared);
    }

    fn tick(&mut self, shared: &Shared) -> Step {
        self.nodes += 1;
        self.peak_depth = self.peak_depth.max(self.path.len());
        if self.nodes.is_multiple_of(1024) {
            let total = shared.nodes.fetch_add(1024, AtomicOrdering::Relaxed) + 1024;
            if shared.stop.load(AtomicOrdering::Relaxed) {
                return Step::Stop;
            }
            if total >= self.cfg.node_limit {
                shared.set_abort(AbortReason::NodeLimit);
                return Step::Stop;
            }
            if shared.start.elapsed() >= self.cfg.time_limit {
                shared.set_abort(AbortReason::TimeLimit);
                return Step::Stop;
            }
        } else if self.cfg.node_limit < 1024 && self.nodes >= self.cfg.node_limit {
            shared.set_abort(AbortReason::NodeLimit);
            return Step::Stop;
        }
        Step::Continue
    }

    fn dfs(&mut self, shared: &Shared) -> Step {
        if let Step::Stop = self.tick(shared) {
            return Step::Stop;
        }
        let n = self.inst.n;
        if self.path.len() == n {
            self.try_close(shared);
            return if shared.stop.load(AtomicOrdering::Relaxed) {
                Step::Stop
            } else {
                Step::Continue
            };
        }
        let cur = *self.path.last().unwrap();
        let prev = if self.path.len() >= 2 {
            self.path[self.path.len() - 2]
        } else {
            cur
        };
        let inst = self.inst;
        let order = &inst.order[prev * n + cur];
        for &w in order.iter() {
            let w = w as usize;
            if self.visited >> w & 1 == 1 {
                continue;
            }
            if let Some(saved) = self.try_push(w) {
                let step = self.dfs(shared);
                self.pop(saved);
                if let Step::Stop = step {
                    return Step::Stop;
                }
            }
        }
        Step::Continue
    }

    fn prune(&mut self, rule: PruneRule) -> Option<Saved> {
        self.pruned[rule.index()] += 1;
        None
    }

    /// Attempts to extend the path by `w`; on success returns the state
    /// needed to undo the extension.
    fn try_push(&mut self, w: usize) -> Option<Saved> {
        let inst = self.inst;
        let cfg = &self.cfg;
        let n = inst.n;
        let cur = *self.path.last().unwrap();
        let e = inst.edge_id(cur, w);

        if cfg.prune_edge_cross && (inst.through_vertex[e] || bit(&self.dead, e)) {
            return self.prune(PruneRule::EdgeCross);
        }
        if cfg.prune_segment_cross && inst.crosses_segment[e] {
            return self.prune(PruneRule::SegmentCross);
        }
        let next_hull = inst.hull_pos[self.path[*self.hull_arrivals.last().unwrap()]].unwrap() + 1;
        if cfg.prune_hull_order {
            if let Some(k) = inst.hull_pos[w] {
                if k != next_hull {
                    return self.prune(PruneRule::HullOrder);
                }
            }
        }
        if cfg.prune_forced_edge {
            // cur's forced partner must come next, unless cur is the anchor
            // and the partner closes the cycle
            let pc = inst.partner[cur];
            let closes = self.path.len() == 1 && inst.hull_pos[pc] != Some(1);
            if inst.forced[cur] && !closes && self.visited >> pc & 1 == 0 && pc != w {
                return self.prune(PruneRule::ForcedEdge);
            }
            // w's forced partner, if already placed, must be cur or (when w is last) the anchor
            let pw = inst.partner[w];
            if inst.forced[w] && self.visited >> pw & 1 == 1 && pw != cur {
                let last = self.path.len() + 1 == n;
                if !(last && pw == self.path[0]) {
                    return self.prune(PruneRule::ForcedEdge);
                }
            }
        }

        // commit
        let saved = Saved {
            live: self.live.clone(),
            dead: self.dead.clone(),
            hull_arrivals: self.hull_arrivals.len(),
        };
        self.path.push(w);
        self.visited |= 1 << w;
        self.committed[e / 64] |= 1 << (e % 64);
        for k in 0..inst.edge_words {
            let mut fresh = inst.conflict[e][k] & !self.dead[k];
            self.dead[k] |= fresh;
            while fresh != 0 {
                let b = fresh.trailing_zeros() as usize;
                fresh &= fresh - 1;
                let (x, y) = inst.edge_ends[k * 64 + b];
                self.live[x] &= !(1 << y);
                self.live[y] &= !(1 << x);
            }
        }
        if inst.hull_pos[w].is_some() {
            self.hull_arrivals.push(self.path.len() - 1);
        }

        if cfg.prune_pocket && !self.pocket_ok() {
            self.pop(saved);
            return self.prune(PruneRule::Pocket);
        }
        if cfg.prune_degree && !self.degree_ok() {
            self.pop(saved);
            return self.prune(PruneRule::Degree);
        }
        if cfg.prune_diagonal && !self.diagonal_ok() {
            self.pop(saved);
            return self.prune(PruneRule::Diagonal);
        }
        Some(saved)
    }

    fn pop(&mut self, saved: Saved) {
        let w = self.path.pop().unwrap();
        let cur = *self.path.last().unwrap();
        let e = self.inst.edge_id(cur, w);
        self.visited &= !(1 << w);
        self.committed[e / 64] &= !(1 << (e % 64));
        self.live = saved.live;
        self.dead = saved.dead;
        self.hull_arrivals.truncate(saved.hull_arrivals);
    }

    /// After arriving at a hull point directly following the previous one,
    /// the region enclosed by the path since then and the hull edge between
    /// them is exterior to any completion.
    fn pocket_ok(&self) -> bool {
        let inst = self.inst;
        let k = self.hull_arrivals.len();
        if k < 2 || *self.hull_arrivals.last().unwrap() != self.path.len() - 1 {
            return true;
        }
        let from = self.hull_arrivals[k - 2];
        let to = self.path.len() - 1;
        if to - from < 2 {
            return true;
        }
        let a = inst.hull_pos[self.path[from]].unwrap();
        let b = inst.hull_pos[self.path[to]].unwrap();
        if (a + 1) % inst.hull_len != b {
            return true;
        }
        let ring_ids = &self.path[from..=to];
        let ring: Vec<Point> = ring_ids.iter().map(|&v| inst.pts[v]).collect();
        if !self.cfg.prune_edge_cross && !is_simple_polygon(&ring) {
            return true;
        }
        let bbox = BoundingBox::of_points(ring.iter().copied()).unwrap();
        // unvisited vertices must stay outside
        let mut rest = !self.visited & mask(inst.n);
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let p = inst.pts[u];
            if bbox.contains(p) && locate_scaled(p, &ring, 1) == Location::Inside {
                return false;
            }
        }
        // segments with both ends on the pocket must not pass through its interior
        let mut on_ring = 0u64;
        for &v in ring_ids {
            on_ring |= 1 << v;
        }
        for (i, &v) in ring_ids.iter().enumerate() {
            let p = inst.partner[v];
            if p < v || on_ring >> p & 1 == 0 {
                continue;
            }
            let j = ring_ids.iter().position(|&x| x == p).unwrap();
            if i.abs_diff(j) == 1 {
                continue;
            }
            let (x, y) = (inst.pts[v], inst.pts[p]);
            let mid = Point::new(x.x + y.x, x.y + y.y);
            if locate_scaled(mid, &ring, 2) == Location::Inside {
                return false;
            }
        }
        true
    }

    fn diagonal_ok(&self) -> bool {
        let inst = self.inst;
        let end = self.path.len() - 1;
        let w = self.path[end];
        let pw = inst.partner[w];
        if self.visited >> pw & 1 == 0 || end < 2 || self.path[end - 1] == pw {
            return true;
        }
        let start = self.path.iter().position(|&v| v == pw).unwrap();
        if start == 0 && end + 1 == inst.n {
            return true;
        }
        let ring: Vec<Point> = self.path[start..].iter().map(|&v| inst.pts[v]).collect();
        if !is_simple_polygon(&ring) {
            return true;
        }
        if signed_area2(&ring) < 0 {
            return false;
        }
        let bbox = BoundingBox::of_points(ring.iter().copied()).unwrap();
        let mut rest = !self.visited & mask(inst.n);
        for &v in &self.path[..start] {
            rest |= 1 << v;
        }
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let p = inst.pts[u];
            if bbox.contains(p) && locate_scaled(p, &ring, 1) == Location::Inside {
                return false;
            }
        }
        true
    }

    fn degree_ok(&self) -> bool {
        let inst = self.inst;
        let n = inst.n;
        let cur = *self.path.last().unwrap();
        let anchor = self.path[0];
        let unvisited = !self.visited & mask(n);
        if unvisited == 0 {
            return true;
        }
        let ends = (1u64 << cur) | (1u64 << anchor);
        if self.live[cur] & unvisited == 0 || self.live[anchor] & unvisited == 0 {
            return false;
        }
        let open = unvisited | ends;
        let mut rest = unvisited;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let avail = self.live[u] & open & !(1 << u);
            if avail.count_ones() < 2 {
                return false;
            }
        }
        true
    }

    fn try_close(&mut self, shared: &Shared) {
        let inst = self.inst;
        let cur = *self.path.last().unwrap();
        let anchor = self.path[0];
        let e = inst.edge_id(cur, anchor);
        if self.cfg.prune_edge_cross && (inst.through_vertex[e] || bit(&self.dead, e)) {
            self.pruned[PruneRule::EdgeCross.index()] += 1;
            return;
        }
        if self.cfg.prune_segment_cross && inst.crosses_segment[e] {
            self.pruned[PruneRule::SegmentCross.index()] += 1;
            return;
        }
        let vertices: Vec<Point> = self.path.iter().map(|&v| inst.pts[v]).collect();
        if let Ok(cert) = circumscribes(&vertices, inst.family) {
            if shared.count_all {
                shared.count.fetch_add(1, AtomicOrdering::Relaxed);
            } else {
                shared.set_found(cert);
            }
        }
    }
}

struct Saved {
    live: Vec<u64>,
    dead: Vec<u64>,
    hull_arrivals: usize,
}

#[inline]
fn bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Default endpoint cap for [`brute_force_solve`].
pub const BRUTE_FORCE_CAP: usize = 12;

/// Enumerates every cyclic vertex order (first vertex fixed, reflections
/// identified) and checks each with [`circumscribes`]. No pruning.
pub fn brute_force_solve(f: &SegmentFamily, cap: usize) -> Result<SolveOutcome, SolveError> {
    let start = Instant::now();
    let mut found = None;
    let checked = brute_force(f, cap, &mut |cert| {
        found = Some(cert);
        true
    })?;
    let verdict = match found {
        Some(c) => Verdict::Feasible(c),
        None => Verdict::Infeasible,
    };
    Ok(SolveOutcome {
        verdict,
        stats: SearchStats {
            nodes_expanded: checked,
            pruned_by_rule: BTreeMap::new(),
            elapsed_secs: start.elapsed().as_secs_f64(),
            peak_depth: 2 * f.len(),
        },
    })
}

/// Number of circumscribing polygons of `f`, by exhaustive enumeration.
pub fn brute_force_count(f: &SegmentFamily, cap: usize) -> Result<u64, SolveError> {
    let mut count = 0;
    brute_force(f, cap, &mut |_| {
        count += 1;
        false
    })?;
    Ok(count)
}

/// Feeds every circumscribing polygon to `hit` until it returns true;
/// returns the number of orders examined.
fn brute_force(f: &SegmentFamily, cap: usize, hit: &mut impl FnMut(Certificate) -> bool) -> Result<u64, SolveError> {
    let pts = f.endpoints();
    let n = pts.len();
    if n > cap {
        return Err(SolveError::CapExceeded { have: n, cap });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut checked = 0u64;
    let mut buf = vec![pts[0]; n];
    permute(&mut order, 1, &mut |perm| {
        // reflection quotient: second vertex precedes the last one
        if perm[1] > perm[n - 1] {
            return false;
        }
        checked += 1;
        for (slot, &i) in buf.iter_mut().zip(perm.iter()) {
            *slot = pts[i];
        }
        if !is_simple_polygon(&buf) {
            return false;
        }
        match circumscribes(&buf, f) {
            Ok(cert) => hit(cert),
            Err(_) => false,
        }
    });
    Ok(checked)
}

/// Lexicographic permutations of `v[k..]`; stops once `visit` returns true.
fn permute(v: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k + 1 >= v.len() {
        return visit(v);
    }
    for i in k..v.len() {
        v[k..=i].rotate_right(1);
        let stop = permute(v, k + 1, visit);
        v[k..=i].rotate_left(1);
        if stop {
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("need at least 2 segments, got {0}")]
    TooFewSegments(usize),
    #[error("box {bbox} offers {have} grid points, need at least {need}")]
    BoxTooSmall { bbox: BoundingBox, have: i64, need: i64 },
    #[error("could not place segment {placed} of {wanted} after {attempts} attempts")]
    PlacementFailed {
        placed: usize,
        wanted: usize,
        attempts: usize,
    },
}

const PLACEMENT_ATTEMPTS: usize = 2000;

/// Seeded random family of `n` pairwise-disjoint segments inside `bbox`.
pub fn random_family(
    n: usize,
    bbox: BoundingBox,
    axis_parallel: bool,
    seed: u64,
) -> Result<SegmentFamily, GenerateError> {
    if n < 2 {
        return Err(GenerateError::TooFewSegments(n));
    }
    let have = (bbox.width() + 1).max(0) * (bbox.height() + 1).max(0);
    let need = (2 * n as i64).pow(2);
    if have < need {
        return Err(GenerateError::BoxTooSmall { bbox, have, need });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_len = (bbox.width().min(bbox.height()) / 2).max(1);
    loop {
        let mut segs: Vec<Segment> = Vec::with_capacity(n);
        while segs.len() < n {
            let mut attempts = 0;
            let s = loop {
                attempts += 1;
                if attempts > PLACEMENT_ATTEMPTS {
                    return Err(GenerateError::PlacementFailed {
                        placed: segs.len(),
                        wanted: n,
                        attempts: PLACEMENT_ATTEMPTS,
                    });
                }
                let a = Point::new(rng.gen_range(bbox.x0..=bbox.x1), rng.gen_range(bbox.y0..=bbox.y1));
                let (dx, dy) = if axis_parallel {
                    let len = rng.gen_range(1..=max_len) * if rng.gen_bool(0.5) { 1 } else { -1 };
                    if rng.gen_bool(0.5) {
                        (len, 0)
                    } else {
                        (0, len)
                    }
                } else {
                    (rng.gen_range(-max_len..=max_len), rng.gen_range(-max_len..=max_len))
                };
                let b = a.translated(dx, dy);
                if a == b || !bbox.contains(b) {
                    continue;
                }
                let s = Segment::new(a, b);
                if segs
                    .iter()
                    .all(|t| seg_seg(s.a, s.b, t.a, t.b) == Intersection::Disjoint)
                {
                    break s;
                }
            };
            segs.push(s);
        }
        match validate_family(&segs) {
            Ok(f) => return Ok(f.with_bounds(None)),
            // collinear draw: try again from the current RNG state
            Err(FamilyError::AllCollinear) => continue,
            Err(e) => unreachable!("generator produced invalid family: {e}"),
        }
    }
}
