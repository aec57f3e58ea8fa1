#![allow(dead_code)]

use vispart_core::geometry::{Similarity, Vec2};
use vispart_core::ifs::IfsSystem;

pub fn squares(cells: &[(usize, usize)], n: usize) -> IfsSystem {
    let r = 1.0 / n as f64;
    let maps = cells
        .iter()
        .map(|&(row, col)| {
            Similarity::homothety(r, Vec2::new(col as f64 * r, row as f64 * r)).unwrap()
        })
        .collect();
    IfsSystem::new(maps).unwrap()
}

pub fn carpet() -> IfsSystem {
    let cells: Vec<_> = (0..3)
        .flat_map(|r| (0..3).map(move |c| (r, c)))
        .filter(|&c| c != (1, 1))
        .collect();
    squares(&cells, 3)
}

pub fn corner_dust() -> IfsSystem {
    squares(&[(0, 0), (0, 2), (2, 0), (2, 2)], 3)
}

pub fn full_square(n: usize) -> IfsSystem {
    let cells: Vec<_> = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).collect();
    squares(&cells, n)
}

/// Generalised von Koch curve on the unit segment with base angle `alpha`.
pub fn koch(alpha: f64) -> IfsSystem {
    let r = 1.0 / (2.0 * (1.0 + alpha.sin()));
    let beta = std::f64::consts::FRAC_PI_2 - alpha;
    let maps = vec![
        Similarity::new(r, 0.0, false, Vec2::ZERO).unwrap(),
        Similarity::new(r, beta, false, Vec2::new(r, 0.0)).unwrap(),
        Similarity::new(
            r,
            -beta,
            false,
            Vec2::new(r + r * beta.cos(), r * beta.sin()),
        )
        .unwrap(),
        Similarity::new(r, 0.0, false, Vec2::new(1.0 - r, 0.0)).unwrap(),
    ];
    IfsSystem::new(maps).unwrap()
}

pub fn sierpinski() -> IfsSystem {
    let h = 3f64.sqrt() / 2.0;
    let v = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.5, h)];
    let maps = v
        .iter()
        .map(|&p| Similarity::homothety(0.5, p * 0.5).unwrap())
        .collect();
    IfsSystem::new(maps).unwrap()
}

pub fn examples() -> Vec<(&'static str, IfsSystem)> {
    vec![
        ("carpet", carpet()),
        ("koch", koch(std::f64::consts::FRAC_PI_6)),
        ("sierpinski", sierpinski()),
    ]
}

use rand::Rng;
use vispart_core::geometry::{convex_hull, ConvexPolygon};

/// Hull of `n` uniform points in the disc of radius `r` around `c`.
pub fn random_polygon<R: Rng>(rng: &mut R, n: usize, c: Vec2, r: f64) -> ConvexPolygon {
    loop {
        let pts: Vec<Vec2> = (0..n).map(|_| random_in_disc(rng, c, r)).collect();
        if let Ok(p) = convex_hull(&pts) {
            return p;
        }
    }
}

pub fn random_in_disc<R: Rng>(rng: &mut R, c: Vec2, r: f64) -> Vec2 {
    loop {
        let p = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if p.norm() <= 1.0 {
            return c + p * r;
        }
    }
}

/// Top of the fiber `{x·θ⊥ = t}` by intersecting every edge with it.
pub fn fiber_top_by_edges(
    p: &ConvexPolygon,
    d: &vispart_core::geometry::Direction,
    t: f64,
) -> Option<f64> {
    let mut best: Option<f64> = None;
    for (a, b) in p.edges() {
        let (ca, cb) = (d.coord(a), d.coord(b));
        let (lo, hi) = if ca <= cb { (ca, cb) } else { (cb, ca) };
        if t < lo || t > hi {
            continue;
        }
        let h = if hi - lo < 1e-15 {
            d.height(a).max(d.height(b))
        } else {
            let s = (t - ca) / (cb - ca);
            d.height(a) + (d.height(b) - d.height(a)) * s
        };
        best = Some(best.map_or(h, |x: f64| x.max(h)));
    }
    best
}
