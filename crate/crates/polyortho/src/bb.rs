//! Bernstein-Bezier polynomial representation on triangles: multi-indices,
//! evaluation, degree raising, and conversion to power (Taylor) form.
//!
//! Canonical multi-index order is lexicographic descending in i, then
//! descending in j: (d,0,0) first, (0,0,d) last. Every coefficient vector
//! and matrix in the crate uses this order.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{barycentric, domain_points, Point2, Triangle, Triangulation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

impl MultiIndex {
    pub fn degree(&self) -> u32 {
        self.i + self.j + self.k
    }
}

/// Dimension of P_d: (d+1)(d+2)/2.
pub fn bb_dim(d: u32) -> usize {
    ((d + 1) * (d + 2) / 2) as usize
}

/// Multi-indices of degree d in canonical order.
pub fn multi_indices(d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(bb_dim(d));
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push(MultiIndex { i, j, k: d - i - j });
        }
    }
    out
}

/// Position of (i,j,k) in the canonical order of its degree.
pub fn multi_index_position(m: MultiIndex) -> usize {
    let d = m.degree();
    // indices with first component > i come first: sum_{p=i+1..=d} (d-p+1)
    let before_i: u32 = (0..(d - m.i)).map(|t| t + 1).sum();
    (before_i + (d - m.i - m.j)) as usize
}

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.c += (self.sum - t) + v;
        } else {
            self.c += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Polynomial on a triangle in Bernstein-Bezier form.
#[derive(Debug, Clone)]
pub struct BBPatch {
    pub tri: Triangle,
    pub degree: u32,
    /// Length (d+1)(d+2)/2, canonical order.
    pub coeffs: Vec<f64>,
}

impl BBPatch {
    pub fn new(tri: Triangle, degree: u32, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != bb_dim(degree) {
            return Err(Error::InvalidInput(format!(
                "BB coefficient vector has length {}, expected {}",
                coeffs.len(),
                bb_dim(degree)
            )));
        }
        Ok(BBPatch { tri, degree, coeffs })
    }

    pub fn constant(tri: Triangle, degree: u32, value: f64) -> Self {
        BBPatch {
            tri,
            degree,
            coeffs: vec![value; bb_dim(degree)],
        }
    }
}

/// Evaluate a patch at `q` by de Casteljau on barycentric coordinates.
/// Defined for `q` outside the triangle too (polynomial extension).
pub fn bb_eval(p: &BBPatch, q: &Point2) -> Result<f64> {
    let (b1, b2, b3) = barycentric(&p.tri, q)?;
    Ok(de_casteljau(p.degree, &p.coeffs, b1, b2, b3))
}

pub(crate) fn de_casteljau(d: u32, coeffs: &[f64], b1: f64, b2: f64, b3: f64) -> f64 {
    if d == 0 {
        return coeffs[0];
    }
    let mut level = coeffs.to_vec();
    for deg in (1..=d).rev() {
        let lower = multi_indices(deg - 1);
        let mut next = vec![0.0; lower.len()];
        for (pos, m) in lower.iter().enumerate() {
            let up = |i, j, k| level[multi_index_position(MultiIndex { i, j, k })];
            next[pos] = b1 * up(m.i + 1, m.j, m.k) + b2 * up(m.i, m.j + 1, m.k)
                + b3 * up(m.i, m.j, m.k + 1);
        }
        level = next;
    }
    level[0]
}

/// Raise the patch degree by one, representing the identical polynomial:
/// c'_{ijk} = (i c_{i-1,j,k} + j c_{i,j-1,k} + k c_{i,j,k-1}) / (d+1).
pub fn degree_raise(p: &BBPatch) -> BBPatch {
    let d = p.degree;
    let raised = multi_indices(d + 1);
    let mut coeffs = vec![0.0; raised.len()];
    let get = |i: u32, j: u32, k: u32| p.coeffs[multi_index_position(MultiIndex { i, j, k })];
    for (pos, m) in raised.iter().enumerate() {
        let mut v = 0.0;
        if m.i > 0 {
            v += m.i as f64 * get(m.i - 1, m.j, m.k);
        }
        if m.j > 0 {
            v += m.j as f64 * get(m.i, m.j - 1, m.k);
        }
        if m.k > 0 {
            v += m.k as f64 * get(m.i, m.j, m.k - 1);
        }
        coeffs[pos] = v / (d + 1) as f64;
    }
    BBPatch {
        tri: p.tri,
        degree: d + 1,
        coeffs,
    }
}

/// Piecewise polynomial over a triangulation, one BB coefficient block per
/// triangle in triangle order.
#[derive(Debug, Clone)]
pub struct SplineVector {
    pub tri: Arc<Triangulation>,
    pub degree: u32,
    /// N * (d+1)(d+2)/2 coefficients.
    pub coeffs: Vec<f64>,
}

impl SplineVector {
    pub fn new(tri: Arc<Triangulation>, degree: u32, coeffs: Vec<f64>) -> Result<Self> {
        let expect = tri.num_triangles() * bb_dim(degree);
        if coeffs.len() != expect {
            return Err(Error::InvalidInput(format!(
                "spline vector has length {}, expected {}",
                coeffs.len(),
                expect
            )));
        }
        Ok(SplineVector { tri, degree, coeffs })
    }

    pub fn block(&self, t: usize) -> &[f64] {
        let d = bb_dim(self.degree);
        &self.coeffs[t * d..(t + 1) * d]
    }

    pub fn patch(&self, t: usize) -> BBPatch {
        BBPatch {
            tri: self.tri.triangle(t),
            degree: self.degree,
            coeffs: self.block(t).to_vec(),
        }
    }
}

/// Blockwise degree raise of a spline vector.
pub fn raise_spline(s: &SplineVector) -> SplineVector {
    let n = s.tri.num_triangles();
    let dim_out = bb_dim(s.degree + 1);
    let mut coeffs = Vec::with_capacity(n * dim_out);
    for t in 0..n {
        let raised = degree_raise(&s.patch(t));
        coeffs.extend_from_slice(&raised.coeffs);
    }
    SplineVector {
        tri: Arc::clone(&s.tri),
        degree: s.degree + 1,
        coeffs,
    }
}

/// Bivariate polynomial in power (Taylor) form, coefficients in
/// graded-lexicographic monomial order 1, x, y, x^2, xy, y^2, x^3, ...
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerPoly2 {
    pub degree: u32,
    pub coeffs: Vec<f64>,
}

/// Monomial exponent pairs (a,b) of total degree <= d in graded-lex order.
pub fn monomials(d: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity(bb_dim(d));
    for t in 0..=d {
        for a in (0..=t).rev() {
            out.push((a, t - a));
        }
    }
    out
}

/// Position of x^a y^b in graded-lex order.
pub fn monomial_position(a: u32, b: u32) -> usize {
    let t = a + b;
    (t * (t + 1) / 2 + (t - a)) as usize
}

impl PowerPoly2 {
    pub fn new(degree: u32, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != bb_dim(degree) {
            return Err(Error::InvalidInput(format!(
                "power coefficient vector has length {}, expected {}",
                coeffs.len(),
                bb_dim(degree)
            )));
        }
        Ok(PowerPoly2 { degree, coeffs })
    }

    pub fn zero(degree: u32) -> Self {
        PowerPoly2 {
            degree,
            coeffs: vec![0.0; bb_dim(degree)],
        }
    }

    pub fn constant(v: f64) -> Self {
        PowerPoly2 {
            degree: 0,
            coeffs: vec![v],
        }
    }

    /// Coefficient of x^a y^b (zero beyond stored degree).
    pub fn coeff(&self, a: u32, b: u32) -> f64 {
        if a + b > self.degree {
            0.0
        } else {
            self.coeffs[monomial_position(a, b)]
        }
    }

    pub fn set_coeff(&mut self, a: u32, b: u32, v: f64) {
        let pos = monomial_position(a, b);
        self.coeffs[pos] = v;
    }

    /// Largest total degree with a coefficient above `tol` in magnitude.
    pub fn effective_degree(&self, tol: f64) -> Option<u32> {
        let mut best = None;
        for ((a, b), &c) in monomials(self.degree).iter().zip(&self.coeffs) {
            if c.abs() > tol {
                best = Some(best.map_or(a + b, |v: u32| v.max(a + b)));
            }
        }
        best
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Re-embed at a (possibly) higher degree.
    pub fn with_degree(&self, degree: u32) -> PowerPoly2 {
        assert!(degree >= self.degree);
        let mut out = PowerPoly2::zero(degree);
        out.coeffs[..self.coeffs.len()].copy_from_slice(&self.coeffs);
        out
    }

    /// Truncate trailing all-zero degree layers (within tol).
    pub fn compress(&self, tol: f64) -> PowerPoly2 {
        let d = self.effective_degree(tol).unwrap_or(0);
        let mut out = PowerPoly2::zero(d);
        for (a, b) in monomials(d) {
            out.set_coeff(a, b, self.coeff(a, b));
        }
        out
    }

    /// Partial derivative in x.
    pub fn dx(&self) -> PowerPoly2 {
        let d = self.degree.saturating_sub(1);
        let mut out = PowerPoly2::zero(d);
        for (a, b) in monomials(self.degree) {
            if a > 0 {
                let v = self.coeff(a, b) * a as f64;
                out.set_coeff(a - 1, b, out.coeff(a - 1, b) + v);
            }
        }
        out
    }

    /// Partial derivative in y.
    pub fn dy(&self) -> PowerPoly2 {
        let d = self.degree.saturating_sub(1);
        let mut out = PowerPoly2::zero(d);
        for (a, b) in monomials(self.degree) {
            if b > 0 {
                let v = self.coeff(a, b) * b as f64;
                out.set_coeff(a, b - 1, out.coeff(a, b - 1) + v);
            }
        }
        out
    }

    /// Substitute an affine map: returns p(m00 x + m01 y + t0, m10 x + m11 y + t1).
    pub fn compose_affine(&self, m: [[f64; 2]; 2], t: [f64; 2]) -> PowerPoly2 {
        let xa = PowerPoly2::new(1, vec![t[0], m[0][0], m[0][1]]).unwrap();
        let ya = PowerPoly2::new(1, vec![t[1], m[1][0], m[1][1]]).unwrap();
        let mut xpow: Vec<PowerPoly2> = vec![PowerPoly2::constant(1.0)];
        let mut ypow: Vec<PowerPoly2> = vec![PowerPoly2::constant(1.0)];
        for i in 1..=self.degree {
            xpow.push(power_mul(&xpow[i as usize - 1], &xa));
            ypow.push(power_mul(&ypow[i as usize - 1], &ya));
        }
        let mut acc = PowerPoly2::zero(self.degree);
        for (a, b) in monomials(self.degree) {
            let c = self.coeff(a, b);
            if c == 0.0 {
                continue;
            }
            let term = power_scale(&power_mul(&xpow[a as usize], &ypow[b as usize]), c);
            acc = power_add(&acc, &term);
        }
        acc
    }
}

/// Evaluate in power form with compensated accumulation; exact on constants.
pub fn power_eval(p: &PowerPoly2, q: &Point2) -> f64 {
    let d = p.degree as usize;
    let mut xp = vec![1.0; d + 1];
    let mut yp = vec![1.0; d + 1];
    for i in 1..=d {
        xp[i] = xp[i - 1] * q.x;
        yp[i] = yp[i - 1] * q.y;
    }
    let mut acc = Compensated::default();
    for ((a, b), &c) in monomials(p.degree).iter().zip(&p.coeffs) {
        if c != 0.0 {
            acc.add(c * xp[*a as usize] * yp[*b as usize]);
        }
    }
    acc.value()
}

pub fn power_add(a: &PowerPoly2, b: &PowerPoly2) -> PowerPoly2 {
    let d = a.degree.max(b.degree);
    let mut out = PowerPoly2::zero(d);
    for (i, j) in monomials(d) {
        out.set_coeff(i, j, a.coeff(i, j) + b.coeff(i, j));
    }
    out
}

pub fn power_scale(a: &PowerPoly2, s: f64) -> PowerPoly2 {
    PowerPoly2 {
        degree: a.degree,
        coeffs: a.coeffs.iter().map(|c| c * s).collect(),
    }
}

/// Convolution product; degree deg(a) + deg(b).
pub fn power_mul(a: &PowerPoly2, b: &PowerPoly2) -> PowerPoly2 {
    let d = a.degree + b.degree;
    let mut acc = vec![Compensated::default(); bb_dim(d)];
    for (ia, ja) in monomials(a.degree) {
        let ca = a.coeff(ia, ja);
        if ca == 0.0 {
            continue;
        }
        for (ib, jb) in monomials(b.degree) {
            let cb = b.coeff(ib, jb);
            if cb == 0.0 {
                continue;
            }
            acc[monomial_position(ia + ib, ja + jb)].add(ca * cb);
        }
    }
    PowerPoly2 {
        degree: d,
        coeffs: acc.iter().map(|c| c.value()).collect(),
    }
}

fn multinomial(d: u32, i: u32, j: u32, k: u32) -> f64 {
    // d!/(i!j!k!) for d <= 20 fits f64 exactly via integer accumulation
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for v in 1..=d as u128 {
        num *= v;
    }
    for v in 1..=i as u128 {
        den *= v;
    }
    for v in 1..=j as u128 {
        den *= v;
    }
    for v in 1..=k as u128 {
        den *= v;
    }
    (num / den) as f64
}

/// Expand a BB patch into power form by multiplying out the barycentric
/// affine functions. Coefficients accumulate with compensated summation;
/// the monomial basis conditioning degrades quickly past degree 10.
pub fn bb_to_power(p: &BBPatch) -> Result<PowerPoly2> {
    if p.degree > 10 {
        log::warn!(
            "bb_to_power at degree {}: monomial-basis conditioning is poor above degree 10",
            p.degree
        );
    }
    let t = &p.tri;
    let det = 2.0 * t.signed_area();
    let scale = t.diameter();
    if det.abs() <= 1e-14 * scale * scale {
        return Err(Error::InvalidInput("degenerate triangle in bb_to_power".into()));
    }
    // barycentric coordinates as affine polynomials of (x, y)
    let affine = |p1: Point2, p2: Point2| -> PowerPoly2 {
        // b(x,y) = ((p2.x - p1.x)(y - p1.y) - (p2.y - p1.y)(x - p1.x)) / det
        let dx = p2.x - p1.x;
        let dy = p2.y - p1.y;
        PowerPoly2::new(
            1,
            vec![(dy * p1.x - dx * p1.y) / det, -dy / det, dx / det],
        )
        .unwrap()
    };
    let b1 = affine(t.v2, t.v3);
    let b2 = affine(t.v3, t.v1);
    let b3 = affine(t.v1, t.v2);

    let d = p.degree;
    let pow_of = |base: &PowerPoly2| -> Vec<PowerPoly2> {
        let mut v = vec![PowerPoly2::constant(1.0)];
        for i in 1..=d {
            v.push(power_mul(&v[i as usize - 1], base));
        }
        v
    };
    let (p1, p2, p3) = (pow_of(&b1), pow_of(&b2), pow_of(&b3));

    let mut acc = vec![Compensated::default(); bb_dim(d)];
    for (pos, m) in multi_indices(d).iter().enumerate() {
        let c = p.coeffs[pos];
        if c == 0.0 {
            continue;
        }
        let w = c * multinomial(d, m.i, m.j, m.k);
        let term = power_mul(
            &power_mul(&p1[m.i as usize], &p2[m.j as usize]),
            &p3[m.k as usize],
        );
        let term = term.with_degree(d);
        for (slot, tc) in acc.iter_mut().zip(&term.coeffs) {
            if *tc != 0.0 {
                slot.add(w * tc);
            }
        }
    }
    Ok(PowerPoly2 {
        degree: d,
        coeffs: acc.iter().map(|c| c.value()).collect(),
    })
}

/// Interpolate a power-form polynomial back into BB form on a triangle by
/// collocation at the domain points.
pub fn power_to_bb(p: &PowerPoly2, tri: &Triangle, degree: u32) -> Result<BBPatch> {
    if p.degree > degree {
        return Err(Error::InvalidInput(format!(
            "cannot represent degree {} polynomial as degree {} patch",
            p.degree, degree
        )));
    }
    if degree == 0 {
        return BBPatch::new(*tri, 0, vec![p.coeff(0, 0)]);
    }
    let nodes = domain_points(tri, degree);
    let dim = bb_dim(degree);
    let mut a = nalgebra::DMatrix::<f64>::zeros(dim, dim);
    let mut rhs = nalgebra::DVector::<f64>::zeros(dim);
    let mis = multi_indices(degree);
    for (r, q) in nodes.iter().enumerate() {
        let (b1, b2, b3) = barycentric(tri, q)?;
        for (c, m) in mis.iter().enumerate() {
            a[(r, c)] = multinomial(degree, m.i, m.j, m.k)
                * b1.powi(m.i as i32)
                * b2.powi(m.j as i32)
                * b3.powi(m.k as i32);
        }
        rhs[r] = power_eval(p, q);
    }
    let lu = a.lu();
    let sol = lu
        .solve(&rhs)
        .ok_or_else(|| Error::NumericalFailure("Bernstein collocation solve failed".into()))?;
    BBPatch::new(*tri, degree, sol.as_slice().to_vec())
}

/// Represent a power-form polynomial as a spline vector over a
/// triangulation (exact per-triangle interpolation).
pub fn spline_from_power(
    p: &PowerPoly2,
    tri: &Arc<Triangulation>,
    degree: u32,
) -> Result<SplineVector> {
    let n = tri.num_triangles();
    let mut coeffs = Vec::with_capacity(n * bb_dim(degree));
    for t in 0..n {
        let patch = power_to_bb(p, &tri.triangle(t), degree)?;
        coeffs.extend_from_slice(&patch.coeffs);
    }
    SplineVector::new(Arc::clone(tri), degree, coeffs)
}
