mod common;

use std::collections::BTreeSet;

use circumpoly::replay::{ReplayError, MIRRORED_LABELS, REQUIRED_LABELS};
use circumpoly::s2::S2_BOUNDS;
use circumpoly::*;
use common::MUTATIONS;

const STEP_IDS: [&str; 11] = ["S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8", "S9", "S10", "S11"];

fn seg(ax: i64, ay: i64, bx: i64, by: i64) -> Segment {
    Segment::new(Point::new(ax, ay), Point::new(bx, by))
}

#[test]
fn fixture_passes_every_step_in_order() {
    let report = replay_s2(&build_s2()).unwrap();
    let ids: Vec<&str> = report.steps.iter().map(|s| s.id.as_str()).collect();
    assert_eq!(ids, STEP_IDS);
    assert!(report.overall, "{report}");
    let text = report.to_string();
    assert_eq!(text.lines().count(), 12);
    assert!(text.ends_with("overall: PASS"));
}

#[test]
fn fixture_shape() {
    let lf = build_s2();
    let f = lf.family();
    assert_eq!(f.len(), 17);
    let points: BTreeSet<Point> = f.endpoints().into_iter().collect();
    assert_eq!(points.len(), 34);
    assert!(f.segments().iter().all(Segment::is_axis_parallel));
    assert!(validate_family(f.segments()).is_ok());
    assert!(is_centrally_symmetric(f));
    assert!(points.iter().all(|&p| S2_BOUNDS.contains(p)));
    assert_eq!(f.bounds(), Some(S2_BOUNDS));
    for name in REQUIRED_LABELS {
        assert!(lf.point(name).is_ok(), "label {name}");
    }
    for name in MIRRORED_LABELS {
        let p = lf.point(name).unwrap();
        assert_eq!(lf.point(&replay::mirror_label(name)).unwrap(), -p);
    }
}

#[test]
fn forced_edges_of_the_fixture_are_the_outer_four() {
    let lf = build_s2();
    let forced: BTreeSet<Segment> = forced_hull_edges(lf.family()).into_iter().collect();
    let want: BTreeSet<Segment> = [("h", "a"), ("b", "c"), ("d", "e"), ("f", "g")]
        .iter()
        .map(|(u, v)| lf.segment(u, v).unwrap().unwrap())
        .collect();
    assert_eq!(forced, want);
}

#[test]
fn forced_edges_small_cases() {
    let two = validate_family(&[seg(0, 0, 2, 0), seg(0, 2, 2, 2)]).unwrap();
    assert_eq!(forced_hull_edges(&two).len(), 2);

    let inner = seg(4, 3, 4, 5);
    let f = validate_family(&[seg(0, 0, 8, 0), seg(0, 8, 8, 8), inner]).unwrap();
    let forced = forced_hull_edges(&f);
    assert_eq!(forced.len(), 2);
    assert!(!forced.contains(&inner));
    // oracle: a segment is forced iff both endpoints are hull-adjacent
    let hull = convex_hull(&f.endpoints()).unwrap();
    for s in f.segments() {
        assert_eq!(forced.contains(s), hull.consecutive(s.a, s.b));
    }
}

#[test]
fn mutations_fail_their_recorded_steps() {
    let lf = build_s2();
    for m in &MUTATIONS {
        let report = replay_s2(&m.apply(&lf)).unwrap();
        assert!(!report.overall);
        assert_eq!(report.failed_ids(), m.fails, "mutation aimed at {}", m.target);
        assert!(m.fails.contains(&m.target));
    }
}

#[test]
fn every_step_except_s2_has_a_failing_mutation() {
    let targeted: BTreeSet<&str> = MUTATIONS.iter().map(|m| m.target).collect();
    let missing: Vec<&str> = STEP_IDS.iter().copied().filter(|id| !targeted.contains(id)).collect();
    assert_eq!(missing, ["S2"]);
}

#[test]
fn mirror_free_moves_break_symmetry() {
    let lf = build_s2();
    for m in MUTATIONS.iter().filter(|m| m.with_mirror) {
        let single = common::Mutation {
            with_mirror: false,
            fails: &[],
            ..*m
        };
        let report = replay_s2(&single.apply(&lf)).unwrap();
        assert!(!report.step("S3").unwrap().passed, "{:?} alone", m.segment);
    }
}

#[test]
fn moving_xy_right_breaks_s8_after_a_passing_prefix() {
    let lf = build_s2();
    let xy = common::Mutation {
        target: "S8",
        segment: ("x", "y"),
        shift: (2, 0),
        with_mirror: true,
        fails: &[],
    };
    let report = replay_s2(&xy.apply(&lf)).unwrap();
    let first_fail = report.steps.iter().position(|s| !s.passed).unwrap();
    assert_eq!(report.steps[first_fail].id, "S8");
    assert!(report.steps[..first_fail].iter().all(|s| s.passed));
}

#[test]
fn missing_label_is_an_error() {
    let lf = build_s2();
    let mut labels = lf.labels().clone();
    labels.remove("k");
    let partial = LabeledFamily::new(lf.family().clone(), labels).unwrap();
    assert!(matches!(replay_s2(&partial), Err(ReplayError::Label(_))));
}

#[test]
fn replay_is_pure_and_survives_text_round_trip() {
    let lf = build_s2();
    let a = replay_s2(&lf).unwrap();
    let b = replay_s2(&lf).unwrap();
    assert_eq!(a, b);
    let back = parse_labeled(&serialize_labeled(&lf)).unwrap();
    assert_eq!(replay_s2(&back).unwrap().failed_ids(), a.failed_ids());
    let json: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 11);
}

#[test]
fn hull_facts_survive_a_half_turn() {
    // a half turn preserves orientation, so only the coordinate-anchored
    // barrier step can notice it
    let lf = build_s2();
    let labels = lf.labels().iter().map(|(n, &p)| (n.clone(), -p)).collect();
    let flipped = LabeledFamily::new(lf.family().reflected(), labels).unwrap();
    assert_eq!(replay_s2(&flipped).unwrap().failed_ids(), ["S5"]);
}
