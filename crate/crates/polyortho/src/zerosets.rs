//! Zero curves of basis members (marching squares) and common-zero
//! detection across a degree level, with grid-resolution witnesses.

use serde::{Deserialize, Serialize};

use crate::bb::{power_eval, PowerPoly2};
use crate::geometry::{point_in_domain_tol, Point2, PointLocation};
use crate::orthobasis::Domain;
use crate::par;

/// Zero-curve polylines of one polynomial inside the domain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContourSet {
    pub polylines: Vec<Vec<Point2>>,
}

/// Common zeros of a family, plus the grid minimum of S = sum P_j^2 as a
/// witness for "no common zero" claims at grid resolution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CommonZeroReport {
    pub zeros: Vec<Point2>,
    /// Residual S at each reported zero.
    pub residuals: Vec<f64>,
    pub global_min_point: Point2,
    pub global_min_value: f64,
}

fn grid_values(
    p: &PowerPoly2,
    domain: &Domain,
    n: usize,
) -> (Vec<f64>, Vec<bool>, f64, f64, Point2) {
    let (bmin, bmax) = (domain.metrics.bbox_min, domain.metrics.bbox_max);
    let hx = (bmax.x - bmin.x) / (n - 1) as f64;
    let hy = (bmax.y - bmin.y) / (n - 1) as f64;
    let tol = 1e-12 * domain.metrics.diameter;
    let rows = par::map_indexed(n, |j| {
        let y = bmin.y + j as f64 * hy;
        let mut vals = Vec::with_capacity(n);
        let mut inside = Vec::with_capacity(n);
        for i in 0..n {
            let q = Point2::new(bmin.x + i as f64 * hx, y);
            vals.push(power_eval(p, &q));
            inside.push(point_in_domain_tol(&domain.polygon, &q, tol) != PointLocation::Outside);
        }
        (vals, inside)
    });
    let mut vals = Vec::with_capacity(n * n);
    let mut inside = Vec::with_capacity(n * n);
    for (v, ins) in rows {
        vals.extend(v);
        inside.extend(ins);
    }
    (vals, inside, hx, hy, bmin)
}

/// Marching squares on the bounding-box grid restricted to cells whose
/// corners all lie inside the closed domain; linear edge interpolation
/// refined by bisection along the crossing edge until the vertex residual
/// meets the contract |p| <= 1e-6 ||p||_inf.
pub fn zero_contours(p: &PowerPoly2, domain: &Domain, grid_n: usize) -> ContourSet {
    let n = grid_n.max(8);
    let (vals, inside, hx, hy, bmin) = grid_values(p, domain, n);
    let sup: f64 = vals
        .iter()
        .zip(&inside)
        .filter(|(_, &ins)| ins)
        .fold(0.0f64, |m, (v, _)| m.max(v.abs()));
    if sup == 0.0 {
        return ContourSet { polylines: vec![] };
    }
    let target = 1e-7 * sup;

    // crossing point on the segment a-b (requires opposite signs)
    let refine = |mut a: Point2, mut b: Point2, mut fa: f64, mut fb: f64| -> Point2 {
        for _ in 0..60 {
            // interleave bisection with the linear-interpolation guess
            let t = fa / (fa - fb);
            let lin = Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
            let fl = power_eval(p, &lin);
            if fl.abs() <= target {
                return lin;
            }
            let mid = Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
            let fm = power_eval(p, &mid);
            if fm.abs() <= target {
                return mid;
            }
            if (fa < 0.0) != (fm < 0.0) {
                b = mid;
                fb = fm;
            } else {
                a = mid;
                fa = fm;
            }
        }
        Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y))
    };

    // per-cell segments; vertices keyed by (edge kind, i, j) for chaining
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum EdgeKey {
        H(usize, usize), // horizontal edge from grid point (i, j) to (i+1, j)
        V(usize, usize), // vertical edge from (i, j) to (i, j+1)
    }
    use std::collections::HashMap;
    let mut verts: HashMap<EdgeKey, usize> = HashMap::new();
    let mut points: Vec<Point2> = Vec::new();
    let mut segments: Vec<(usize, usize)> = Vec::new();

    let at = |i: usize, j: usize| j * n + i;
    let pt = |i: usize, j: usize| Point2::new(bmin.x + i as f64 * hx, bmin.y + j as f64 * hy);

    for j in 0..n - 1 {
        for i in 0..n - 1 {
            let corners = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            if corners.iter().any(|&c| !inside[c]) {
                continue;
            }
            let f = [
                vals[corners[0]],
                vals[corners[1]],
                vals[corners[2]],
                vals[corners[3]],
            ];
            let neg = [f[0] < 0.0, f[1] < 0.0, f[2] < 0.0, f[3] < 0.0];
            let case = (neg[0] as u8) | (neg[1] as u8) << 1 | (neg[2] as u8) << 2 | (neg[3] as u8) << 3;
            if case == 0 || case == 15 {
                continue;
            }
            // crossing vertex on each cut edge, shared between cells
            let mut edge_vertex = |key: EdgeKey, a: Point2, b: Point2, fa: f64, fb: f64| -> usize {
                *verts.entry(key).or_insert_with(|| {
                    let v = refine(a, b, fa, fb);
                    points.push(v);
                    points.len() - 1
                })
            };
            let bottom = || EdgeKey::H(i, j);
            let top = || EdgeKey::H(i, j + 1);
            let left = || EdgeKey::V(i, j);
            let right = || EdgeKey::V(i + 1, j);
            let mut cut = Vec::with_capacity(4);
            if neg[0] != neg[1] {
                cut.push(edge_vertex(bottom(), pt(i, j), pt(i + 1, j), f[0], f[1]));
            }
            if neg[1] != neg[2] {
                cut.push(edge_vertex(right(), pt(i + 1, j), pt(i + 1, j + 1), f[1], f[2]));
            }
            if neg[3] != neg[2] {
                cut.push(edge_vertex(top(), pt(i, j + 1), pt(i + 1, j + 1), f[3], f[2]));
            }
            if neg[0] != neg[3] {
                cut.push(edge_vertex(left(), pt(i, j), pt(i, j + 1), f[0], f[3]));
            }
            match cut.len() {
                2 => segments.push((cut[0], cut[1])),
                4 => {
                    // ambiguous saddle: resolve by the center sign
                    let c = Point2::new(
                        bmin.x + (i as f64 + 0.5) * hx,
                        bmin.y + (j as f64 + 0.5) * hy,
                    );
                    let fc = power_eval(p, &c);
                    // cut order: bottom, right, top, left
                    if (fc < 0.0) == neg[0] {
                        segments.push((cut[0], cut[1]));
                        segments.push((cut[2], cut[3]));
                    } else {
                        segments.push((cut[0], cut[3]));
                        segments.push((cut[1], cut[2]));
                    }
                }
                _ => {}
            }
        }
    }

    // chain segments into polylines by shared endpoints
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for (s, (a, b)) in segments.iter().enumerate() {
        adj.entry(*a).or_default().push(s);
        adj.entry(*b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();
    for start_seg in 0..segments.len() {
        if used[start_seg] {
            continue;
        }
        // walk both directions from this segment
        used[start_seg] = true;
        let (a0, b0) = segments[start_seg];
        let mut chain = vec![a0, b0];
        for dir in 0..2 {
            loop {
                let tip = if dir == 0 {
                    *chain.last().unwrap()
                } else {
                    chain[0]
                };
                let next = adj
                    .get(&tip)
                    .and_then(|segs| segs.iter().find(|&&s| !used[s]).copied());
                let Some(s) = next else { break };
                used[s] = true;
                let (a, b) = segments[s];
                let other = if a == tip { b } else { a };
                if dir == 0 {
                    chain.push(other);
                } else {
                    chain.insert(0, other);
                }
            }
        }
        polylines.push(chain.into_iter().map(|v| points[v]).collect());
    }
    ContourSet { polylines }
}

/// Scan S(q) = sum_j P_j(q)^2 on the grid, run damped Newton descents from
/// the most promising cells, and accept zeros with S <= tol^2.
pub fn common_zeros(
    family: &[PowerPoly2],
    domain: &Domain,
    tol: f64,
    grid_n: usize,
) -> CommonZeroReport {
    common_zeros_impl(family, domain, tol, grid_n, false)
}

/// Always-sequential twin of [`common_zeros`] (benchmark baseline).
pub fn common_zeros_seq(
    family: &[PowerPoly2],
    domain: &Domain,
    tol: f64,
    grid_n: usize,
) -> CommonZeroReport {
    common_zeros_impl(family, domain, tol, grid_n, true)
}

fn common_zeros_impl(
    family: &[PowerPoly2],
    domain: &Domain,
    tol: f64,
    grid_n: usize,
    force_seq: bool,
) -> CommonZeroReport {
    assert!(!family.is_empty(), "common_zeros needs a nonempty family");
    let n = grid_n.max(16);
    let (bmin, bmax) = (domain.metrics.bbox_min, domain.metrics.bbox_max);
    let hx = (bmax.x - bmin.x) / (n - 1) as f64;
    let hy = (bmax.y - bmin.y) / (n - 1) as f64;
    let diam = domain.metrics.diameter;
    let btol = 1e-12 * diam;

    let s_of = |q: &Point2| -> f64 { family.iter().map(|p| power_eval(p, q).powi(2)).sum() };

    // first and second derivatives of S from the family's derivatives
    let grads: Vec<(PowerPoly2, PowerPoly2)> =
        family.iter().map(|p| (p.dx(), p.dy())).collect();
    let hessians: Vec<[PowerPoly2; 3]> = grads
        .iter()
        .map(|(gx, gy)| [gx.dx(), gx.dy(), gy.dy()])
        .collect();

    // grid scan (parallel rows): collect per-row minima candidates
    let scan_row = |j: usize| {
        let y = bmin.y + j as f64 * hy;
        let mut best: Vec<(f64, Point2)> = Vec::new();
        for i in 0..n {
            let q = Point2::new(bmin.x + i as f64 * hx, y);
            if point_in_domain_tol(&domain.polygon, &q, btol) == PointLocation::Outside {
                continue;
            }
            let s = s_of(&q);
            best.push((s, q));
        }
        best.sort_by(|a, b| a.0.total_cmp(&b.0));
        best.truncate(4);
        best
    };
    let row_scan = if force_seq {
        par::map_indexed_seq(n, scan_row)
    } else {
        par::map_indexed(n, scan_row)
    };
    let mut candidates: Vec<(f64, Point2)> = row_scan.into_iter().flatten().collect();
    if candidates.is_empty() {
        return CommonZeroReport {
            zeros: vec![],
            residuals: vec![],
            global_min_point: Point2::new(f64::NAN, f64::NAN),
            global_min_value: f64::INFINITY,
        };
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (gmin_v, gmin_p) = (candidates[0].0, candidates[0].1);
    candidates.truncate(40);

    // damped Newton on grad S with an Armijo fallback along -grad
    let descend = |start: Point2| -> (Point2, f64) {
        let mut q = start;
        let mut s = s_of(&q);
        for _ in 0..50 {
            if s <= 0.0 {
                break;
            }
            let mut g = [0.0f64; 2];
            let mut h = [0.0f64; 3]; // xx, xy, yy
            for (k, p) in family.iter().enumerate() {
                let v = power_eval(p, &q);
                let gx = power_eval(&grads[k].0, &q);
                let gy = power_eval(&grads[k].1, &q);
                g[0] += 2.0 * v * gx;
                g[1] += 2.0 * v * gy;
                h[0] += 2.0 * (gx * gx + v * power_eval(&hessians[k][0], &q));
                h[1] += 2.0 * (gx * gy + v * power_eval(&hessians[k][1], &q));
                h[2] += 2.0 * (gy * gy + v * power_eval(&hessians[k][2], &q));
            }
            let det = h[0] * h[2] - h[1] * h[1];
            let (mut dx, mut dy);
            if det.abs() > 1e-300 {
                dx = -(h[2] * g[0] - h[1] * g[1]) / det;
                dy = -(h[0] * g[1] - h[1] * g[0]) / det;
            } else {
                dx = -g[0];
                dy = -g[1];
            }
            // keep steps bounded; fall back to steepest descent when the
            // Newton step fails to decrease S (Armijo halving)
            let step_len = dx.hypot(dy);
            if step_len > 0.25 * diam {
                let sc = 0.25 * diam / step_len;
                dx *= sc;
                dy *= sc;
            }
            let mut alpha = 1.0;
            let mut improved = false;
            for _ in 0..30 {
                let cand = Point2::new(q.x + alpha * dx, q.y + alpha * dy);
                let sc = s_of(&cand);
                if sc < s * (1.0 - 1e-4 * alpha) {
                    q = cand;
                    s = sc;
                    improved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !improved {
                break;
            }
            if s <= (tol * tol) * 1e-6 {
                break;
            }
        }
        (q, s)
    };

    let results = par::map_indexed(candidates.len(), |c| descend(candidates[c].1));
    let mut zeros: Vec<(Point2, f64)> = Vec::new();
    for (q, s) in results {
        if s > tol * tol {
            continue;
        }
        if point_in_domain_tol(&domain.polygon, &q, btol) == PointLocation::Outside {
            continue;
        }
        if zeros.iter().all(|(z, _)| z.dist(&q) > 1e-6 * diam) {
            zeros.push((q, s));
        }
    }
    zeros.sort_by(|a, b| a.0.x.total_cmp(&b.0.x).then(a.0.y.total_cmp(&b.0.y)));
    CommonZeroReport {
        residuals: zeros.iter().map(|&(_, s)| s).collect(),
        zeros: zeros.into_iter().map(|(q, _)| q).collect(),
        global_min_point: gmin_p,
        global_min_value: gmin_v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes;
    use crate::orthobasis::build_graded;

    fn dom(p: crate::geometry::Polygon) -> std::sync::Arc<Domain> {
        Domain::from_polygon(p).unwrap()
    }

    #[test]
    fn contour_of_x_is_the_vertical_axis() {
        let d = dom(shapes::square_pm1());
        let p = PowerPoly2::new(1, vec![0.0, 1.0, 0.0]).unwrap();
        let cs = zero_contours(&p, &d, 512);
        assert_eq!(cs.polylines.len(), 1);
        let line = &cs.polylines[0];
        let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in line {
            assert!(v.x.abs() < 1e-6);
            ymin = ymin.min(v.y);
            ymax = ymax.max(v.y);
        }
        assert!(ymin < -0.99 && ymax > 0.99, "span [{ymin}, {ymax}]");
    }

    #[test]
    fn contour_of_circle_is_closed_with_small_radial_deviation() {
        let d = dom(shapes::square_pm1());
        // x^2 + y^2 - 1/4
        let p = PowerPoly2::new(2, vec![-0.25, 0.0, 0.0, 1.0, 0.0, 1.0]).unwrap();
        let cs = zero_contours(&p, &d, 512);
        assert_eq!(cs.polylines.len(), 1);
        let line = &cs.polylines[0];
        assert!(line.len() > 100);
        for v in line {
            let r = v.x.hypot(v.y);
            assert!((r - 0.5).abs() <= 1e-4, "radial deviation {}", (r - 0.5).abs());
        }
        // closed: endpoints coincide within a cell
        let gap = line.first().unwrap().dist(line.last().unwrap());
        assert!(gap < 0.02, "gap {gap}");
    }

    #[test]
    fn contour_empty_without_sign_change() {
        let d = dom(shapes::square_pm1());
        let p = PowerPoly2::new(2, vec![1.0, 0.0, 0.0, 1.0, 0.0, 1.0]).unwrap();
        let cs = zero_contours(&p, &d, 256);
        assert!(cs.polylines.is_empty());
    }

    #[test]
    fn contour_vertices_meet_residual_contract() {
        let d = dom(shapes::hexagon());
        let b = build_graded(&d, 4).unwrap();
        for m in &b.members {
            if m.level == 0 {
                continue;
            }
            let cs = zero_contours(&m.power, &d, 256);
            // sup of |p| over the domain grid
            let (vals, inside, _, _, _) = super::grid_values(&m.power, &d, 256);
            let sup = vals
                .iter()
                .zip(&inside)
                .filter(|(_, &i)| i)
                .fold(0.0f64, |mx, (v, _)| mx.max(v.abs()));
            for line in &cs.polylines {
                for v in line {
                    let pv = power_eval(&m.power, v).abs();
                    assert!(pv <= 1e-6 * sup, "level {}: |p| = {pv}, sup {sup}", m.level);
                }
            }
        }
    }

    #[test]
    fn common_zero_of_level1_on_square() {
        let d = dom(shapes::square_pm1());
        let b = build_graded(&d, 1).unwrap();
        let rep = common_zeros(&b.level_powers(1), &d, 1e-8, 256);
        assert_eq!(rep.zeros.len(), 1);
        assert!(rep.zeros[0].dist(&Point2::new(0.0, 0.0)) < 1e-8);
    }

    #[test]
    fn hexagon_level3_origin_and_level2_empty() {
        let d = dom(shapes::hexagon());
        let b = build_graded(&d, 3).unwrap();
        let rep = common_zeros(&b.level_powers(3), &d, 1e-8, 256);
        assert_eq!(rep.zeros.len(), 1, "zeros: {:?}", rep.zeros);
        assert!(rep.zeros[0].dist(&Point2::new(0.0, 0.0)) < 1e-8);

        let rep = common_zeros(&b.level_powers(2), &d, 1e-8, 256);
        assert!(rep.zeros.is_empty());
        assert!(rep.global_min_value > 1e-4, "min {}", rep.global_min_value);
    }

    #[test]
    fn rotation_covariance_of_common_zeros() {
        // rotate the domain and the family; the reported zero rotates along
        let d = dom(shapes::unit_right_triangle());
        let b = build_graded(&d, 1).unwrap();
        let rep = common_zeros(&b.level_powers(1), &d, 1e-8, 256);
        assert_eq!(rep.zeros.len(), 1);
        let z = rep.zeros[0];

        let th = 0.6f64;
        let (c, s) = (th.cos(), th.sin());
        let rot = |p: &Point2| Point2::new(c * p.x - s * p.y, s * p.x + c * p.y);
        let rotated_poly = crate::geometry::Polygon::new(
            d.polygon.outer.iter().map(|p| rot(p)).collect(),
            vec![],
        )
        .unwrap();
        let rd = dom(rotated_poly);
        // compose each member with the inverse rotation
        let fam: Vec<PowerPoly2> = b
            .level_powers(1)
            .iter()
            .map(|p| p.compose_affine([[c, s], [-s, c]], [0.0, 0.0]))
            .collect();
        let rep2 = common_zeros(&fam, &rd, 1e-8, 256);
        assert_eq!(rep2.zeros.len(), 1);
        assert!(rep2.zeros[0].dist(&rot(&z)) < 1e-8);
    }
}
