use circumpoly::geom::{cross, midpoint_location};
use circumpoly::*;
use circumpoly_bench::{corpus, scattered_points};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn predicates(c: &mut Criterion) {
    let pts = scattered_points(300);
    c.bench_function("orientation x100", |b| {
        b.iter(|| {
            pts.windows(3)
                .take(100)
                .map(|w| orientation(black_box(w[0]), w[1], w[2]) as i32)
                .sum::<i32>()
        })
    });
    let segs: Vec<Segment> = pts.chunks(2).map(|w| Segment::new(w[0], w[1])).collect();
    c.bench_function("segment_intersection x100", |b| {
        b.iter(|| {
            segs.windows(2)
                .take(100)
                .filter(|w| segment_intersection(black_box(&w[0]), &w[1]) != Intersection::Disjoint)
                .count()
        })
    });
    c.bench_function("cross x100", |b| {
        b.iter(|| {
            pts.windows(3)
                .take(100)
                .map(|w| cross(w[0], w[1], black_box(w[2])))
                .sum::<i64>()
        })
    });
}

fn hulls(c: &mut Criterion) {
    let s2 = build_s2();
    let endpoints = s2.family().endpoints();
    c.bench_function("convex_hull S2 endpoints", |b| {
        b.iter(|| convex_hull(black_box(&endpoints)).unwrap())
    });
    let many = scattered_points(1000);
    c.bench_function("convex_hull 1000 points", |b| {
        b.iter(|| convex_hull(black_box(&many)).unwrap())
    });
    c.bench_function("forced_hull_edges S2", |b| {
        b.iter(|| forced_hull_edges(black_box(s2.family())))
    });
}

fn polygons(c: &mut Criterion) {
    let fams = corpus(5, 20);
    let certs: Vec<(SegmentFamily, Certificate)> = fams
        .into_iter()
        .filter_map(|f| {
            let cert = solve(&f, &SolveConfig::default()).ok()?.verdict.certificate()?.clone();
            Some((f, cert))
        })
        .collect();
    c.bench_function("circumscribes 5 segments", |b| {
        b.iter(|| {
            certs
                .iter()
                .filter(|(f, cert)| circumscribes(cert.polygon.vertices(), f).is_ok())
                .count()
        })
    });
    let queries = scattered_points(64);
    let poly = &certs[0].1.polygon;
    c.bench_function("point_in_polygon x64", |b| {
        b.iter(|| {
            queries
                .iter()
                .filter(|&&q| point_in_polygon(q, poly) == Location::Inside)
                .count()
        })
    });
    let verts = poly.vertices();
    c.bench_function("midpoint_location all chords", |b| {
        b.iter(|| {
            let mut inside = 0;
            for (i, &p) in verts.iter().enumerate() {
                for &q in &verts[i + 1..] {
                    inside += (midpoint_location(p, q, poly) == Location::Inside) as usize;
                }
            }
            inside
        })
    });
}

criterion_group!(benches, predicates, hulls, polygons);
criterion_main!(benches);
