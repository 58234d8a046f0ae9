//! Seeded inputs shared by the benchmarks under `benches/`.

use std::collections::HashSet;

use circumpoly::{random_family, BoundingBox, Point, SegmentFamily};

/// `count` axis-parallel families of `n` segments in [-10,10]^2.
pub fn corpus(n: usize, count: u64) -> Vec<SegmentFamily> {
    let bbox = BoundingBox::new(-10, -10, 10, 10);
    (0..count)
        .map(|seed| random_family(n, bbox, true, seed).expect("bench family"))
        .collect()
}

/// Distinct points on a 64x64 grid, scattered by a fixed linear congruence.
pub fn scattered_points(count: usize) -> Vec<Point> {
    assert!(count <= 64 * 64, "grid holds 4096 points");
    let mut state = 0x2545_f491_u64;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1);
        let p = Point::new((state >> 33) as i64 % 64, (state >> 45) as i64 % 64);
        if seen.insert(p) {
            out.push(p);
        }
    }
    out
}
