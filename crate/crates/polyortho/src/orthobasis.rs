//! Orthonormal polynomial bases over polygonal domains: the full
//! construction, the iterative complement P_{d+1} minus P_d, graded bases,
//! deterministic canonicalization, and the Riemann-sum verification.
//!
//! The construction runs entirely on exact integrals: mass matrix M,
//! per-block Cholesky M = R^T R, smoothness matrix H at r = d (whose
//! kernel is the global polynomial space), then an orthonormal null-space
//! basis C1 of H R^{-1} and C = R^{-1} C1, so that C^T M C = I holds
//! identically.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::assembly::{gram_exact, mass_matrix, smoothness_matrix};
use crate::bb::{
    bb_dim, bb_to_power, power_mul, raise_spline, spline_from_power, PowerPoly2, SplineVector,
};
use crate::error::{Error, Result};
use crate::geometry::{
    point_strictly_inside, polygon_cell_overlap, polygon_metrics, segment_cells, triangulate,
    DomainMetrics, Point2, Polygon, Triangulation,
};
use crate::numkernels::{factor_blocks, orthonormal_nullspace};
use crate::par;

/// A polygonal domain together with a conforming triangulation of it.
#[derive(Debug, Clone)]
pub struct Domain {
    pub polygon: Polygon,
    pub triangulation: Arc<Triangulation>,
    pub metrics: DomainMetrics,
}

impl Domain {
    pub fn from_polygon(polygon: Polygon) -> Result<Arc<Self>> {
        let tri = triangulate(&polygon)?;
        Self::from_parts(polygon, tri)
    }

    pub fn from_parts(polygon: Polygon, triangulation: Triangulation) -> Result<Arc<Self>> {
        let metrics = polygon_metrics(&polygon);
        if (triangulation.total_area() - metrics.area).abs() > 1e-9 * metrics.area.abs() {
            return Err(Error::InvalidInput(format!(
                "triangulation area {} does not match polygon area {}",
                triangulation.total_area(),
                metrics.area
            )));
        }
        Ok(Arc::new(Domain {
            polygon,
            triangulation: Arc::new(triangulation),
            metrics,
        }))
    }

    /// Derive the boundary polygon of an explicit triangulation (largest
    /// loop is the outer ring, the rest are holes).
    pub fn from_triangulation(triangulation: Triangulation) -> Result<Arc<Self>> {
        use std::collections::HashMap;
        let mut next: HashMap<usize, usize> = HashMap::new();
        for (a, b) in triangulation.boundary_edges() {
            if next.insert(a, b).is_some() {
                return Err(Error::InvalidInput(
                    "boundary is not a disjoint union of simple loops".into(),
                ));
            }
        }
        let mut loops: Vec<Vec<Point2>> = Vec::new();
        let mut seen: std::collections::HashSet<usize> = Default::default();
        let starts: Vec<usize> = {
            let mut s: Vec<usize> = next.keys().cloned().collect();
            s.sort_unstable();
            s
        };
        for start in starts {
            if seen.contains(&start) {
                continue;
            }
            let mut ring = Vec::new();
            let mut v = start;
            loop {
                ring.push(triangulation.points[v]);
                seen.insert(v);
                v = *next
                    .get(&v)
                    .ok_or_else(|| Error::InvalidInput("open boundary loop".into()))?;
                if v == start {
                    break;
                }
                if ring.len() > triangulation.points.len() {
                    return Err(Error::InvalidInput("boundary loop does not close".into()));
                }
            }
            loops.push(ring);
        }
        if loops.is_empty() {
            return Err(Error::InvalidInput("triangulation has no boundary".into()));
        }
        loops.sort_by(|a, b| {
            crate::geometry::ring_signed_area(b)
                .abs()
                .total_cmp(&crate::geometry::ring_signed_area(a).abs())
        });
        let outer = loops.remove(0);
        let polygon = Polygon::new(outer, loops)?;
        Self::from_parts(polygon, triangulation)
    }

    pub fn area(&self) -> f64 {
        self.metrics.area
    }

    /// Exact integral of a power-form polynomial over the domain, via its
    /// Bernstein-Bezier spline representation.
    pub fn integrate_power(&self, p: &PowerPoly2) -> Result<f64> {
        let s = spline_from_power(p, &self.triangulation, p.degree)?;
        Ok(crate::assembly::integrate_spline(&s))
    }

    /// Exact integral of x^a y^b over the domain.
    pub fn monomial_integral(&self, a: u32, b: u32) -> Result<f64> {
        let mut p = PowerPoly2::zero(a + b);
        p.set_coeff(a, b, 1.0);
        self.integrate_power(&p)
    }

    /// Exact L2 inner product of two power polynomials over the domain.
    pub fn inner_power(&self, f: &PowerPoly2, g: &PowerPoly2) -> Result<f64> {
        self.integrate_power(&power_mul(f, g))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Full,
    Complement,
    Graded,
}

#[derive(Debug, Clone)]
pub struct BasisMember {
    /// Degree level: for graded bases the level this member completes;
    /// for full bases the basis degree.
    pub level: u32,
    pub spline: SplineVector,
    pub power: PowerPoly2,
}

/// An orthonormal set of polynomials over a domain, in both spline and
/// power form.
#[derive(Debug, Clone)]
pub struct OrthoBasis {
    pub domain: Arc<Domain>,
    pub degree: u32,
    pub kind: BasisKind,
    pub members: Vec<BasisMember>,
    /// max |G - I| from the exact Gram of the members.
    pub gram_residual: f64,
}

impl OrthoBasis {
    pub fn level_members(&self, level: u32) -> Vec<&BasisMember> {
        self.members.iter().filter(|m| m.level == level).collect()
    }

    pub fn level_powers(&self, level: u32) -> Vec<PowerPoly2> {
        self.level_members(level)
            .iter()
            .map(|m| m.power.clone())
            .collect()
    }

    /// Exact Gram matrix of all members (raised to a common degree).
    pub fn exact_gram(&self) -> Result<DMatrix<f64>> {
        let d = self.degree;
        let m = mass_matrix(&self.domain.triangulation, d)?;
        let cols: Vec<SplineVector> = self
            .members
            .iter()
            .map(|mem| raise_to(&mem.spline, d))
            .collect();
        gram_exact(&cols, &m)
    }

    /// Relative residual of projecting `f` onto the span of `members`
    /// (orthonormal), under the exact domain inner product.
    pub fn projection_residual(&self, members: &[&BasisMember], f: &PowerPoly2) -> Result<f64> {
        let n2 = self.domain.inner_power(f, f)?;
        if n2 <= 0.0 {
            return Err(Error::InvalidInput("cannot project the zero polynomial".into()));
        }
        let mut acc = 0.0;
        for m in members {
            let c = self.domain.inner_power(f, &m.power)?;
            acc += c * c;
        }
        Ok(((n2 - acc).max(0.0) / n2).sqrt())
    }

    /// Span projector of one level in monomial coordinates: P = V V^T G,
    /// where G is the monomial Gram over the domain. Depends only on the
    /// level's span, so it is comparable across triangulations.
    pub fn level_projector(&self, level: u32, maxdeg: u32) -> Result<DMatrix<f64>> {
        let monos = crate::bb::monomials(maxdeg);
        let mdim = monos.len();
        let mut g = DMatrix::<f64>::zeros(mdim, mdim);
        for (p, &(a1, b1)) in monos.iter().enumerate() {
            for (q, &(a2, b2)) in monos.iter().enumerate().skip(p) {
                let v = self.domain.monomial_integral(a1 + a2, b1 + b2)?;
                g[(p, q)] = v;
                g[(q, p)] = v;
            }
        }
        let members = self.level_members(level);
        let mut v = DMatrix::<f64>::zeros(mdim, members.len());
        for (c, m) in members.iter().enumerate() {
            for (r, &(a, b)) in monos.iter().enumerate() {
                v[(r, c)] = m.power.coeff(a, b);
            }
        }
        Ok(&v * v.transpose() * g)
    }
}

fn raise_to(s: &SplineVector, degree: u32) -> SplineVector {
    let mut cur = s.clone();
    while cur.degree < degree {
        cur = raise_spline(&cur);
    }
    cur
}

/// Shared core of Algorithms 1 and 2: orthonormal null-space construction
/// with optional extra orthogonality rows against previously built members.
fn construct_members(
    domain: &Arc<Domain>,
    degree: u32,
    level: u32,
    prev_raised: &[SplineVector],
) -> Result<Vec<BasisMember>> {
    let tri = &domain.triangulation;
    let m = mass_matrix(tri, degree)?;
    let f = factor_blocks(&m)?;
    let h = smoothness_matrix(tri, degree, degree)?;

    let ncols = tri.num_triangles() * bb_dim(degree);
    let nrows = h.nrows() + prev_raised.len();
    let mut script_h = DMatrix::<f64>::zeros(nrows, ncols);
    // script_H = H R^{-1}, computed row-by-row on the rows' blocks
    let transformed = par::map_indexed(h.rows.len(), |r| f.row_times_r_inv(&h.rows[r]));
    for (r, row) in transformed.iter().enumerate() {
        for &(c, v) in row {
            script_h[(r, c)] = v;
        }
    }
    // orthogonality against previous members: C_prev M R^{-1} = (R c_prev)^T
    for (e, prev) in prev_raised.iter().enumerate() {
        if prev.degree != degree {
            return Err(Error::InvalidInput(
                "previous members must be raised to the construction degree".into(),
            ));
        }
        let row = f.apply_r(&prev.coeffs);
        for (c, v) in row.iter().enumerate() {
            script_h[(h.nrows() + e, c)] = *v;
        }
    }

    let c1 = orthonormal_nullspace(&script_h, None);
    let expected = bb_dim(degree) - prev_raised.len();
    if c1.ncols() != expected {
        return Err(Error::NumericalFailure(format!(
            "null space dimension {} differs from expected {} at degree {degree}",
            c1.ncols(),
            expected
        )));
    }

    let mut members = Vec::with_capacity(expected);
    for col in 0..expected {
        let c1col: Vec<f64> = (0..ncols).map(|r| c1[(r, col)]).collect();
        let coeffs = f.solve_r(&c1col);
        let spline = SplineVector::new(Arc::clone(tri), degree, coeffs)?;
        let power = extract_power(&spline)?;
        members.push(BasisMember {
            level,
            spline,
            power,
        });
    }
    Ok(members)
}

/// Power form from the first triangle, cross-checked on every other one.
fn extract_power(s: &SplineVector) -> Result<PowerPoly2> {
    let p0 = bb_to_power(&s.patch(0))?;
    let scale = p0.max_abs_coeff().max(1.0);
    for t in 1..s.tri.num_triangles() {
        let pt = bb_to_power(&s.patch(t))?;
        for ((a, b), c0) in crate::bb::monomials(p0.degree).iter().zip(&p0.coeffs) {
            let diff = (pt.coeff(*a, *b) - c0).abs();
            if diff > 1e-9 * scale {
                return Err(Error::NumericalFailure(format!(
                    "member is not a single global polynomial: triangle {t} deviates by {diff:.3e}"
                )));
            }
        }
    }
    Ok(p0)
}

fn gram_residual_of(members: &[BasisMember], domain: &Arc<Domain>, degree: u32) -> Result<f64> {
    let m = mass_matrix(&domain.triangulation, degree)?;
    let cols: Vec<SplineVector> = members.iter().map(|mem| raise_to(&mem.spline, degree)).collect();
    let g = gram_exact(&cols, &m)?;
    let mut dev: f64 = 0.0;
    for p in 0..g.nrows() {
        for q in 0..g.ncols() {
            let target = if p == q { 1.0 } else { 0.0 };
            dev = dev.max((g[(p, q)] - target).abs());
        }
    }
    Ok(dev)
}

/// Full orthonormal basis of P_d over the domain.
pub fn build_basis(domain: &Arc<Domain>, d: u32) -> Result<OrthoBasis> {
    let mut members = construct_members(domain, d, d, &[])?;
    canonicalize_level(&mut members)?;
    let gram_residual = gram_residual_of(&members, domain, d)?;
    if gram_residual > 1e-9 {
        return Err(Error::NumericalFailure(format!(
            "gram residual {gram_residual:.3e} exceeds 1e-9"
        )));
    }
    Ok(OrthoBasis {
        domain: Arc::clone(domain),
        degree: d,
        kind: BasisKind::Full,
        members,
        gram_residual,
    })
}

/// Orthonormal basis of P_{d+1} minus P_d, orthogonal to every member of
/// `prev` (a full or graded basis of P_d on the same triangulation).
pub fn build_complement(prev: &OrthoBasis) -> Result<OrthoBasis> {
    let d = prev.degree;
    if prev.members.len() != bb_dim(d) {
        return Err(Error::InvalidInput(format!(
            "complement needs a full basis of P_{d} ({} members), got {}",
            bb_dim(d),
            prev.members.len()
        )));
    }
    let domain = &prev.domain;
    let raised: Vec<SplineVector> = prev
        .members
        .iter()
        .map(|m| raise_to(&m.spline, d + 1))
        .collect();
    let mut members = construct_members(domain, d + 1, d + 1, &raised)?;
    canonicalize_level(&mut members)?;

    // orthonormal among themselves and orthogonal to prev
    let mut all: Vec<BasisMember> = prev.members.clone();
    all.extend(members.iter().cloned());
    let residual_all = gram_residual_of(&all, domain, d + 1)?;
    if residual_all > 1e-10 {
        return Err(Error::NumericalFailure(format!(
            "complement orthogonality residual {residual_all:.3e} exceeds 1e-10"
        )));
    }
    let gram_residual = gram_residual_of(&members, domain, d + 1)?;
    Ok(OrthoBasis {
        domain: Arc::clone(domain),
        degree: d + 1,
        kind: BasisKind::Complement,
        members,
        gram_residual,
    })
}

/// Graded orthonormal basis: levels 0..=d, each level orthogonal to all
/// lower levels, built by iterating the complement construction.
pub fn build_graded(domain: &Arc<Domain>, d: u32) -> Result<OrthoBasis> {
    let mut members = build_basis(domain, 0)?.members;
    for level in 1..=d {
        let raised: Vec<SplineVector> = members
            .iter()
            .map(|m| raise_to(&m.spline, level))
            .collect();
        let mut new_members = construct_members(domain, level, level, &raised)?;
        canonicalize_level(&mut new_members)?;
        members.extend(new_members);
    }
    let gram_residual = gram_residual_of(&members, domain, d)?;
    if gram_residual > 1e-9 {
        return Err(Error::NumericalFailure(format!(
            "graded gram residual {gram_residual:.3e} exceeds 1e-9"
        )));
    }
    Ok(OrthoBasis {
        domain: Arc::clone(domain),
        degree: d,
        kind: BasisKind::Graded,
        members,
        gram_residual,
    })
}

/// Deterministic rotation within one level: orthogonal staircase reduction
/// of the power-coefficient matrix with positive pivots. Span and Gram are
/// unchanged (the transform is orthogonal).
fn canonicalize_level(members: &mut [BasisMember]) -> Result<()> {
    let k = members.len();
    if k == 0 {
        return Ok(());
    }
    let deg = members.iter().map(|m| m.power.degree).max().unwrap();
    let mdim = bb_dim(deg);
    let mut p = DMatrix::<f64>::zeros(k, mdim);
    for (r, m) in members.iter().enumerate() {
        for (c, &(a, b)) in crate::bb::monomials(deg).iter().enumerate() {
            p[(r, c)] = m.power.coeff(a, b);
        }
    }
    let scale = p.abs().max().max(1e-300);
    let mut u = DMatrix::<f64>::identity(k, k);
    let mut pivot_row = 0usize;
    for col in 0..mdim {
        if pivot_row >= k {
            break;
        }
        let seg_norm: f64 = (pivot_row..k).map(|r| p[(r, col)] * p[(r, col)]).sum::<f64>().sqrt();
        if seg_norm <= 1e-10 * scale {
            continue;
        }
        // Givens rotations pushing the column weight into pivot_row
        for r in pivot_row + 1..k {
            let (a, b) = (p[(pivot_row, col)], p[(r, col)]);
            if b == 0.0 {
                continue;
            }
            let h = a.hypot(b);
            let (c, s) = (a / h, b / h);
            for j in 0..mdim {
                let (x, y) = (p[(pivot_row, j)], p[(r, j)]);
                p[(pivot_row, j)] = c * x + s * y;
                p[(r, j)] = -s * x + c * y;
            }
            for j in 0..k {
                let (x, y) = (u[(pivot_row, j)], u[(r, j)]);
                u[(pivot_row, j)] = c * x + s * y;
                u[(r, j)] = -s * x + c * y;
            }
        }
        if p[(pivot_row, col)] < 0.0 {
            for j in 0..mdim {
                p[(pivot_row, j)] = -p[(pivot_row, j)];
            }
            for j in 0..k {
                u[(pivot_row, j)] = -u[(pivot_row, j)];
            }
        }
        pivot_row += 1;
    }
    // apply the same orthogonal transform to splines and power forms
    let old: Vec<BasisMember> = members.to_vec();
    for (r, m) in members.iter_mut().enumerate() {
        let mut coeffs = vec![0.0; old[0].spline.coeffs.len()];
        for (j, o) in old.iter().enumerate() {
            let w = u[(r, j)];
            if w == 0.0 {
                continue;
            }
            for (slot, &v) in coeffs.iter_mut().zip(&o.spline.coeffs) {
                *slot += w * v;
            }
        }
        m.spline = SplineVector::new(
            Arc::clone(&old[0].spline.tri),
            old[0].spline.degree,
            coeffs,
        )?;
        let mut power = PowerPoly2::zero(deg);
        for (c, &(a, b)) in crate::bb::monomials(deg).iter().enumerate() {
            power.set_coeff(a, b, p[(r, c)]);
        }
        m.power = power;
    }
    Ok(())
}

/// Re-canonicalize a basis (kept as a separate entry point; construction
/// already canonicalizes each level).
pub fn canonicalize(basis: &OrthoBasis) -> Result<OrthoBasis> {
    let mut out = basis.clone();
    let levels: Vec<u32> = {
        let mut l: Vec<u32> = out.members.iter().map(|m| m.level).collect();
        l.dedup();
        l
    };
    for level in levels {
        let idx: Vec<usize> = out
            .members
            .iter()
            .enumerate()
            .filter(|(_, m)| m.level == level)
            .map(|(i, _)| i)
            .collect();
        let mut level_members: Vec<BasisMember> =
            idx.iter().map(|&i| out.members[i].clone()).collect();
        canonicalize_level(&mut level_members)?;
        for (slot, m) in idx.into_iter().zip(level_members) {
            out.members[slot] = m;
        }
    }
    Ok(out)
}

/// Riemann-sum verification of orthonormality on an n x n grid over the
/// bounding box: cell midpoint sampling, each cell weighted by its exact
/// overlap area with the domain (boundary cells clipped). Returns
/// max |G_hat - I|.
pub fn verify_gram_riemann(basis: &OrthoBasis, n: usize) -> f64 {
    riemann_gram_deviation(basis, n, false)
}

/// Always-sequential twin of [`verify_gram_riemann`] (benchmark baseline).
pub fn verify_gram_riemann_seq(basis: &OrthoBasis, n: usize) -> f64 {
    riemann_gram_deviation(basis, n, true)
}

fn riemann_gram_deviation(basis: &OrthoBasis, n: usize, force_seq: bool) -> f64 {
    let polygon = &basis.domain.polygon;
    let (bmin, bmax) = (basis.domain.metrics.bbox_min, basis.domain.metrics.bbox_max);
    let hx = (bmax.x - bmin.x) / n as f64;
    let hy = (bmax.y - bmin.y) / n as f64;
    let k = basis.members.len();
    let powers: Vec<&PowerPoly2> = basis.members.iter().map(|m| &m.power).collect();

    // mark cells crossed by boundary segments (with a 1-cell dilation)
    let mut boundary = vec![false; n * n];
    for (a, b) in polygon.segments() {
        let mut mark = |i: usize, j: usize| {
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if ii >= 0 && jj >= 0 && (ii as usize) < n && (jj as usize) < n {
                        boundary[jj as usize * n + ii as usize] = true;
                    }
                }
            }
        };
        segment_cells(a, b, bmin, hx, hy, n, &mut mark);
    }
    let boundary = &boundary;

    let row_gram = |j: usize| -> DMatrix<f64> {
        let mut g = DMatrix::<f64>::zeros(k, k);
        let y0 = bmin.y + j as f64 * hy;
        let yc = y0 + 0.5 * hy;
        let mut vals = vec![0.0; k];
        for i in 0..n {
            let x0 = bmin.x + i as f64 * hx;
            let xc = x0 + 0.5 * hx;
            let w = if boundary[j * n + i] {
                polygon_cell_overlap(polygon, x0, x0 + hx, y0, y0 + hy)
            } else if point_strictly_inside(polygon, &Point2::new(xc, yc)) {
                hx * hy
            } else {
                0.0
            };
            if w <= 0.0 {
                continue;
            }
            let q = Point2::new(xc, yc);
            for (v, p) in vals.iter_mut().zip(&powers) {
                *v = crate::bb::power_eval(p, &q);
            }
            for p in 0..k {
                let wv = w * vals[p];
                for q2 in p..k {
                    g[(p, q2)] += wv * vals[q2];
                }
            }
        }
        g
    };

    let g = if force_seq {
        par::fold_indexed_seq(n, || DMatrix::<f64>::zeros(k, k), row_gram, |a, b| a + b)
    } else {
        par::fold_indexed(n, || DMatrix::<f64>::zeros(k, k), row_gram, |a, b| a + b)
    };

    let mut dev: f64 = 0.0;
    for p in 0..k {
        for q in p..k {
            let target = if p == q { 1.0 } else { 0.0 };
            dev = dev.max((g[(p, q)] - target).abs());
        }
    }
    dev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geometry::shapes;

    fn domain(p: Polygon) -> Arc<Domain> {
        Domain::from_polygon(p).unwrap()
    }

    #[test]
    fn degree_zero_is_normalized_constant() {
        for poly in [shapes::unit_square(), shapes::l_domain(), shapes::hexagon()] {
            let dom = domain(poly);
            let b = build_basis(&dom, 0).unwrap();
            assert_eq!(b.members.len(), 1);
            let expect = 1.0 / dom.area().sqrt();
            assert!((b.members[0].power.coeff(0, 0) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn unit_square_d1_reproduces_printed_pair() {
        let dom = domain(shapes::unit_square());
        let b = build_basis(&dom, 1).unwrap();
        assert_eq!(b.members.len(), 3);
        let all: Vec<&BasisMember> = b.members.iter().collect();
        let one = PowerPoly2::constant(1.0);
        assert!(b.projection_residual(&all, &one).unwrap() < 1e-9);
        for row in fixtures::opd1_unit_square() {
            let r = b.projection_residual(&all, &row).unwrap();
            assert!(r < 1e-6, "opd1 residual {r}");
        }
    }

    #[test]
    fn paper_triangle_d1_span() {
        let poly = Polygon::from_coords(&[(0.0, 0.0), (1.0, 0.0), (0.5, 1.0)]).unwrap();
        let dom = domain(poly);
        let b = build_graded(&dom, 1).unwrap();
        let level1: Vec<&BasisMember> = b.level_members(1);
        for row in fixtures::triangle_d1_pair() {
            let r = b.projection_residual(&level1, &row).unwrap();
            assert!(r < 1e-9, "triangle d1 residual {r}");
        }
        // the triangle's level-2 fixtures (Table rows) also live in the
        // graded level-2 span
        let b2 = build_graded(&dom, 2).unwrap();
        let level2: Vec<&BasisMember> = b2.level_members(2);
        for row in fixtures::triangle_d2_rows() {
            let r = b2.projection_residual(&level2, &row).unwrap();
            assert!(r < 1e-6, "tab2 residual {r}");
        }
    }

    #[test]
    fn complement_of_constants_on_unit_square() {
        let dom = domain(shapes::unit_square());
        let b0 = build_basis(&dom, 0).unwrap();
        let b1 = build_complement(&b0).unwrap();
        assert_eq!(b1.members.len(), 2);
        assert_eq!(b1.kind, BasisKind::Complement);
        // span is {x - 1/2, y - 1/2}
        let x_half = PowerPoly2::new(1, vec![-0.5, 1.0, 0.0]).unwrap();
        let members: Vec<&BasisMember> = b1.members.iter().collect();
        let mut basis_for_proj = b1.clone();
        basis_for_proj.domain = Arc::clone(&dom);
        let r = basis_for_proj.projection_residual(&members, &x_half).unwrap();
        assert!(r < 1e-10, "residual {r}");
    }

    #[test]
    fn square_pm1_x_matrix_span() {
        let dom = domain(shapes::square_pm1());
        let b = build_graded(&dom, 2).unwrap();
        assert_eq!(b.level_members(2).len(), 3);
        let level2 = b.level_members(2);
        for row in fixtures::square_pm1_x_matrix() {
            let r = b.projection_residual(&level2, &row).unwrap();
            assert!(r < 1e-2, "X matrix residual {r}");
        }
    }

    #[test]
    fn hexagon_tables_span() {
        let dom = domain(shapes::hexagon());
        let b = build_graded(&dom, 3).unwrap();
        assert_eq!(b.level_members(3).len(), 4);
        let level1 = b.level_members(1);
        for row in fixtures::hexagon_level1() {
            let r = b.projection_residual(&level1, &row).unwrap();
            assert!(r < 1e-2, "Hd1 residual {r}");
        }
        let level3 = b.level_members(3);
        for row in fixtures::hexagon_level3() {
            let r = b.projection_residual(&level3, &row).unwrap();
            assert!(r < 1e-2, "Hd3 residual {r}");
        }
    }

    #[test]
    fn graded_structure_and_gram() {
        let dom = domain(shapes::unit_square());
        let b = build_graded(&dom, 2).unwrap();
        assert_eq!(b.members.len(), 6);
        assert_eq!(b.level_members(0).len(), 1);
        assert_eq!(b.level_members(1).len(), 2);
        assert_eq!(b.level_members(2).len(), 3);
        assert!(b.gram_residual <= 1e-9);

        let dom = domain(shapes::l_domain());
        let b = build_graded(&dom, 3).unwrap();
        assert_eq!(b.members.len(), 10);
        assert!(b.gram_residual <= 1e-9);
    }

    #[test]
    fn members_are_global_polynomials() {
        let dom = domain(shapes::l_domain());
        let b = build_graded(&dom, 3).unwrap();
        let h = smoothness_matrix(&dom.triangulation, 3, 3).unwrap();
        for m in &b.members {
            let raised = raise_to(&m.spline, 3);
            let resid: f64 = h
                .apply(&raised.coeffs)
                .iter()
                .fold(0.0f64, |acc, v| acc.max(v.abs()));
            let norm: f64 = raised.coeffs.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            assert!(resid <= 1e-9 * norm.max(1.0));
        }
    }

    #[test]
    fn complement_property_against_low_monomials() {
        let dom = domain(shapes::l_domain());
        let b = build_graded(&dom, 3).unwrap();
        for m in &b.members {
            for (a, bb_) in crate::bb::monomials(3) {
                if a + bb_ >= m.level {
                    continue;
                }
                let mut mono = PowerPoly2::zero(a + bb_);
                mono.set_coeff(a, bb_, 1.0);
                let ip = dom.inner_power(&m.power, &mono).unwrap();
                assert!(
                    ip.abs() < 1e-9,
                    "level {} member not orthogonal to x^{a} y^{bb_}: {ip}",
                    m.level
                );
            }
        }
    }

    #[test]
    fn central_symmetry_parity() {
        for poly in [shapes::square_pm1(), shapes::hexagon()] {
            let dom = domain(poly);
            let b = build_graded(&dom, 3).unwrap();
            for m in &b.members {
                let scale = m.power.max_abs_coeff();
                for (a, bb_) in crate::bb::monomials(m.power.degree) {
                    if (a + bb_) % 2 != m.level % 2 {
                        assert!(
                            m.power.coeff(a, bb_).abs() <= 1e-8 * scale,
                            "level {} has off-parity monomial x^{a}y^{bb_}",
                            m.level
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn triangulation_independence_of_spans() {
        // the square's two diagonal splits
        let poly = shapes::unit_square();
        let pts = poly.outer.clone();
        let t1 = Triangulation::from_parts(pts.clone(), vec![[0, 1, 2], [0, 2, 3]]).unwrap();
        let t2 = Triangulation::from_parts(pts, vec![[0, 1, 3], [1, 2, 3]]).unwrap();
        let d1 = Domain::from_parts(poly.clone(), t1).unwrap();
        let d2 = Domain::from_parts(poly, t2).unwrap();
        let b1 = build_graded(&d1, 3).unwrap();
        let b2 = build_graded(&d2, 3).unwrap();
        for level in 0..=3u32 {
            let p1 = b1.level_projector(level, 3).unwrap();
            let p2 = b2.level_projector(level, 3).unwrap();
            assert!((p1 - p2).abs().max() < 1e-8, "level {level}");
        }
    }

    #[test]
    fn canonicalize_contract() {
        let dom = domain(shapes::l_domain());
        let b = build_graded(&dom, 2).unwrap();
        let c1 = canonicalize(&b).unwrap();
        let c2 = canonicalize(&c1).unwrap();
        for (m1, m2) in c1.members.iter().zip(&c2.members) {
            for (a, b2) in m1.power.coeffs.iter().zip(&m2.power.coeffs) {
                assert!((a - b2).abs() < 1e-13);
            }
        }
        // sign flip of a member is normalized away
        let mut flipped = b.clone();
        flipped.members[3].power = crate::bb::power_scale(&flipped.members[3].power, -1.0);
        flipped.members[3].spline.coeffs.iter_mut().for_each(|v| *v = -*v);
        let c3 = canonicalize(&flipped).unwrap();
        for (m1, m2) in c1.members.iter().zip(&c3.members) {
            for (a, b2) in m1.power.coeffs.iter().zip(&m2.power.coeffs) {
                assert!((a - b2).abs() < 1e-12);
            }
        }
        // span projector unchanged
        let p1 = b.level_projector(2, 2).unwrap();
        let p2 = c1.level_projector(2, 2).unwrap();
        assert!((p1 - p2).abs().max() < 1e-13 * 10.0);
    }

    #[test]
    fn riemann_verification_behaviour() {
        let dom = domain(shapes::unit_square());
        let b = build_graded(&dom, 2).unwrap();
        // certified basis: small deviation at a moderate grid
        let dev = verify_gram_riemann(&b, 301);
        assert!(dev <= 5e-3, "deviation {dev}");
        // grid refinement improves the estimate (at least first order)
        let d1 = verify_gram_riemann(&b, 150);
        let d2 = verify_gram_riemann(&b, 300);
        assert!(d2 < 0.8 * d1, "d1={d1} d2={d2}");
        // single constant member reduces to an area estimate
        let b0 = build_basis(&dom, 0).unwrap();
        let dev0 = verify_gram_riemann(&b0, 100);
        assert!(dev0 < 1e-12, "constant-member deviation {dev0}");
        // seq twin agrees
        let devs = verify_gram_riemann_seq(&b, 150);
        assert!((devs - d1).abs() < 1e-12);
    }

    #[test]
    fn domain_from_triangulation_derives_boundary() {
        let tri = triangulate(&shapes::l_domain()).unwrap();
        let dom = Domain::from_triangulation(tri).unwrap();
        assert!((dom.area() - 3.0).abs() < 1e-12);
        assert!(dom.polygon.holes.is_empty());
    }
}
