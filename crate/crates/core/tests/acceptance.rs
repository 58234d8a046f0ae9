//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any
//! criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use circumpoly::s2::S2_BOUNDS;
use circumpoly::solver::BRUTE_FORCE_CAP;
use circumpoly::*;
use common::{oracle_corpus, random_simple_polygon, seeded, MUTATIONS};

type Outcome = (bool, String);

fn hull_order_property() -> Outcome {
    let mut rng = seeded(1);
    for round in 0..1000 {
        let ring = random_simple_polygon(&mut rng, 6 + round % 7, 6);
        if !is_simple_polygon(&ring) {
            return (false, format!("polygon {round} is not simple"));
        }
        let hull = convex_hull(&ring).unwrap();
        let seq: Vec<Point> = ring.iter().copied().filter(|&p| hull.position(p).is_some()).collect();
        if !hull_order_consistent(&seq, &hull, true).unwrap() {
            return (false, format!("polygon {round} visits its hull out of order"));
        }
    }
    (true, "1000 polygons".into())
}

fn oracle_equivalence() -> Outcome {
    let mut feasible = 0;
    for (seed, f) in oracle_corpus(200).iter().enumerate() {
        let fast = solve(f, &SolveConfig::default()).unwrap();
        let slow = brute_force_solve(f, BRUTE_FORCE_CAP).unwrap();
        if fast.verdict.is_feasible() != slow.verdict.is_feasible() || matches!(fast.verdict, Verdict::Aborted(_)) {
            return (
                false,
                format!("seed {seed}: {} vs {}", fast.verdict.name(), slow.verdict.name()),
            );
        }
        if let Some(cert) = fast.verdict.certificate() {
            if circumscribes(cert.polygon.vertices(), f).as_ref() != Ok(cert) {
                return (false, format!("seed {seed}: certificate does not re-verify"));
            }
            feasible += 1;
        }
    }
    (true, format!("200 families, {feasible} feasible"))
}

fn prune_soundness() -> Outcome {
    for (seed, f) in oracle_corpus(200).iter().enumerate() {
        let want = solve(f, &SolveConfig::default()).unwrap().verdict;
        for rule in PruneRule::ALL {
            let got = solve(f, &SolveConfig::default().without(rule)).unwrap().verdict;
            if got.name() != want.name() {
                return (
                    false,
                    format!("seed {seed} without {}: {} vs {}", rule.name(), got.name(), want.name()),
                );
            }
        }
    }
    (true, format!("200 families x {} rules", PruneRule::ALL.len()))
}

fn fixture_sanity() -> Outcome {
    let lf = build_s2();
    let f = lf.family();
    let points: BTreeSet<Point> = f.endpoints().into_iter().collect();
    let checks = [
        ("17 segments", f.len() == 17),
        ("34 distinct endpoints", points.len() == 34),
        ("axis-parallel", f.segments().iter().all(Segment::is_axis_parallel)),
        ("pairwise disjoint", validate_family(f.segments()).is_ok()),
        ("centrally symmetric", is_centrally_symmetric(f)),
        ("inside [-11,11]x[-8,8]", points.iter().all(|&p| S2_BOUNDS.contains(p))),
    ];
    match checks.iter().find(|c| !c.1) {
        Some((what, _)) => (false, format!("not {what}")),
        None => (true, "17 segments, 34 endpoints".into()),
    }
}

fn proof_replay() -> Outcome {
    let lf = build_s2();
    let report = replay_s2(&lf).unwrap();
    if !report.overall {
        return (false, format!("fixture fails {:?}", report.failed_ids()));
    }
    let mut exact = Vec::new();
    let mut loose = Vec::new();
    for id in report.steps.iter().map(|s| s.id.as_str()) {
        match MUTATIONS.iter().find(|m| m.target == id) {
            None => loose.push(format!("{id} no failing mutation")),
            Some(m) => {
                let failed = replay_s2(&m.apply(&lf)).unwrap().failed_ids().join("+");
                if failed == id {
                    exact.push(id);
                } else {
                    loose.push(format!("{id} fails {failed}"));
                }
            }
        }
    }
    let detail = format!(
        "fixture 11/11 steps; mutations isolate {}/11; {}",
        exact.len(),
        loose.join(", ")
    );
    (loose.is_empty(), detail)
}

fn headline() -> Outcome {
    let out = solve(build_s2().family(), &SolveConfig::default()).unwrap();
    let detail = format!("{} after {} nodes", out.verdict.name(), out.stats.nodes_expanded);
    (out.verdict == Verdict::Infeasible, detail)
}

fn positive_control() -> Outcome {
    let f = validate_family(&[
        Segment::new(Point::new(0, 0), Point::new(2, 0)),
        Segment::new(Point::new(0, 2), Point::new(2, 2)),
    ])
    .unwrap();
    let out = solve(&f, &SolveConfig::default()).unwrap();
    match out.verdict.certificate() {
        Some(c) if c.polygon.len() == 4 && c.polygon.area2() == 8 => (true, "rectangle certificate".into()),
        _ => (false, out.verdict.name().into()),
    }
}

type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("hull order on 1000 simple polygons", None, hull_order_property),
        ("solve agrees with brute force", None, oracle_equivalence),
        ("no single prune changes a verdict", None, prune_soundness),
        ("S2 fixture sanity", Some(Duration::from_secs(1)), fixture_sanity),
        ("proof replay and mutations", Some(Duration::from_secs(1)), proof_replay),
        ("S2 solves Infeasible with all prunes", None, headline),
        ("two parallel segments", Some(Duration::from_secs(1)), positive_control),
    ];
    let mut all = true;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (mut ok, mut detail) = run();
        let took = start.elapsed();
        if let Some(b) = budget.filter(|&b| took > b) {
            ok = false;
            detail = format!("{detail}; over the {b:?} budget");
        }
        all &= ok;
        println!(
            "criterion {}: {} {name} ({detail}; {:.2}s)",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
