//! Largest inscribed and smallest enclosing discs of a convex polygon.

use super::polygon::ConvexPolygon;
use super::vec2::Vec2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disc {
    pub center: Vec2,
    pub radius: f64,
}

/// Radii `(a1, a2)`: the polygon contains a disc of radius `a1` and is
/// contained in one of radius `a2`.
pub fn inscribed_enclosing(p: &ConvexPolygon) -> (f64, f64) {
    (
        chebyshev_disc(p).radius,
        min_enclosing_disc(p.vertices()).radius,
    )
}

/// Chebyshev centre: maximise `r` subject to `n_e · c + r ≤ n_e · v_e` for
/// every edge, with unit outward normals `n_e`.
///
/// The centre is written as `g + (x⁺ − x⁻, y⁺ − y⁻)` around the area
/// centroid `g`, which is interior, so the origin of the LP is feasible.
pub fn chebyshev_disc(p: &ConvexPolygon) -> Disc {
    let g = p.centroid();
    let mut rows = Vec::with_capacity(p.len());
    let mut rhs = Vec::with_capacity(p.len());
    for (a, b) in p.edges() {
        let e = b - a;
        let n = Vec2::new(e.y, -e.x) / e.norm();
        rows.push(vec![n.x, -n.x, n.y, -n.y, 1.0]);
        rhs.push((n.dot(a) - n.dot(g)).max(0.0));
    }
    let x = simplex_max(&[0.0, 0.0, 0.0, 0.0, 1.0], &rows, &rhs);
    Disc {
        center: g + Vec2::new(x[0] - x[1], x[2] - x[3]),
        radius: x[4],
    }
}

/// Dense tableau simplex for `max c·x  s.t.  A x ≤ b, x ≥ 0` with `b ≥ 0`,
/// using Bland's rule. Bounded problems only.
fn simplex_max(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        t[i][..n].copy_from_slice(&a[i]);
        t[i][n + i] = 1.0;
        t[i][width - 1] = b[i];
    }
    for j in 0..n {
        t[m][j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    const EPS: f64 = 1e-13;
    for _ in 0..10_000 {
        let Some(col) = (0..n + m).find(|&j| t[m][j] < -EPS) else {
            break;
        };
        let mut pivot: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][col] > EPS {
                let ratio = t[i][width - 1] / t[i][col];
                let better = match pivot {
                    None => true,
                    Some((pi, pr)) => {
                        ratio < pr - EPS || (ratio <= pr + EPS && basis[i] < basis[pi])
                    }
                };
                if better {
                    pivot = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = pivot else {
            break;
        };
        let pv = t[row][col];
        for v in t[row].iter_mut() {
            *v /= pv;
        }
        let pivot_row = t[row].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f != 0.0 {
                for (v, pv) in r.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        basis[row] = col;
    }
    let mut x = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1];
        }
    }
    x
}

/// Smallest disc containing `points` (incremental Welzl construction).
pub fn min_enclosing_disc(points: &[Vec2]) -> Disc {
    let Some(&first) = points.first() else {
        return Disc {
            center: Vec2::ZERO,
            radius: 0.0,
        };
    };
    let scale = points.iter().map(|p| p.dist(first)).fold(0.0, f64::max);
    let slack = 1e-12 * scale;
    let outside = |d: &Disc, p: Vec2| p.dist(d.center) > d.radius + slack;

    let mut disc = Disc {
        center: first,
        radius: 0.0,
    };
    for i in 1..points.len() {
        if !outside(&disc, points[i]) {
            continue;
        }
        disc = Disc {
            center: points[i],
            radius: 0.0,
        };
        for j in 0..i {
            if !outside(&disc, points[j]) {
                continue;
            }
            disc = diametral(points[i], points[j]);
            for k in 0..j {
                if outside(&disc, points[k]) {
                    disc = circumdisc(points[i], points[j], points[k])
                        .unwrap_or_else(|| widest_pair(points[i], points[j], points[k]));
                }
            }
        }
    }
    disc
}

fn diametral(a: Vec2, b: Vec2) -> Disc {
    Disc {
        center: (a + b) * 0.5,
        radius: 0.5 * a.dist(b),
    }
}

fn circumdisc(a: Vec2, b: Vec2, c: Vec2) -> Option<Disc> {
    let ab = b - a;
    let ac = c - a;
    let d = 2.0 * ab.cross(ac);
    if d.abs() < 1e-300 {
        return None;
    }
    let ux = (ac.y * ab.norm_sq() - ab.y * ac.norm_sq()) / d;
    let uy = (ab.x * ac.norm_sq() - ac.x * ab.norm_sq()) / d;
    let center = a + Vec2::new(ux, uy);
    Some(Disc {
        center,
        radius: center.dist(a),
    })
}

fn widest_pair(a: Vec2, b: Vec2, c: Vec2) -> Disc {
    [diametral(a, b), diametral(a, c), diametral(b, c)]
        .into_iter()
        .max_by(|x, y| x.radius.total_cmp(&y.radius))
        .unwrap()
}
