//! Constructive polynomial reduction against degree-level families,
//! cascaded odd/even reductions, domain moments, and
//! integration-by-reduction.
//!
//! A reduction rewrites p as sum_j q_j P_{L,j} + residual against a family
//! whose leading homogeneous forms span degree L; cascades repeat this down
//! the odd (or even) levels of a graded basis, leaving a constant (odd) or
//! linear (even) residual whose integral is known from precomputed moments.

use nalgebra::{DMatrix, DVector};

use crate::bb::{monomials, power_add, power_mul, power_scale, PowerPoly2};
use crate::error::{Error, Result};
use crate::numkernels::lstsq_min_norm;
use crate::orthobasis::OrthoBasis;

/// Precomputed exact moments of a domain: area, first moments, the six
/// quadratic monomial integrals I_0..I_5 (order 1, x, y, x^2, xy, y^2), and
/// alpha_j = int x P_{1,j}, beta_j = int y P_{1,j} for the two level-1
/// members.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct MomentTable {
    pub area: f64,
    pub mx: f64,
    pub my: f64,
    pub quad: [f64; 6],
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
}

/// Exact moment table from a graded basis with levels 0 and 1.
pub fn moments(basis: &OrthoBasis) -> Result<MomentTable> {
    let dom = &basis.domain;
    let level1 = basis.level_powers(1);
    if basis.level_members(0).len() != 1 || level1.len() != 2 {
        return Err(Error::InvalidInput(
            "moment table needs a graded basis with levels 0 and 1".into(),
        ));
    }
    let mono = |a: u32, b: u32| -> Result<f64> { dom.monomial_integral(a, b) };
    let x = PowerPoly2::new(1, vec![0.0, 1.0, 0.0]).unwrap();
    let y = PowerPoly2::new(1, vec![0.0, 0.0, 1.0]).unwrap();
    let mut alpha = [0.0; 2];
    let mut beta = [0.0; 2];
    for (j, p1) in level1.iter().enumerate() {
        alpha[j] = dom.integrate_power(&power_mul(&x, p1))?;
        beta[j] = dom.integrate_power(&power_mul(&y, p1))?;
    }
    Ok(MomentTable {
        area: mono(0, 0)?,
        mx: mono(1, 0)?,
        my: mono(0, 1)?,
        quad: [
            mono(0, 0)?,
            mono(1, 0)?,
            mono(0, 1)?,
            mono(2, 0)?,
            mono(1, 1)?,
            mono(0, 2)?,
        ],
        alpha,
        beta,
    })
}

/// Quotients of one reduction level.
#[derive(Debug, Clone)]
pub struct LevelQuotients {
    pub level: u32,
    pub quotients: Vec<PowerPoly2>,
}

/// Result of a reduction: per-level quotients plus the residual.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub levels: Vec<LevelQuotients>,
    pub residual: PowerPoly2,
}

impl ReductionResult {
    pub fn max_quotient_degree(&self) -> u32 {
        self.levels
            .iter()
            .flat_map(|l| l.quotients.iter())
            .filter_map(|q| q.effective_degree(1e-12 * q.max_abs_coeff().max(1e-300)))
            .max()
            .unwrap_or(0)
    }

    pub fn residual_degree(&self) -> u32 {
        self.residual
            .effective_degree(1e-12 * self.residual.max_abs_coeff().max(1e-300))
            .unwrap_or(0)
    }

    /// Rebuild sum_levels sum_j q_j P_{level,j} + residual.
    pub fn reconstruct(&self, families: &dyn Fn(u32) -> Vec<PowerPoly2>) -> PowerPoly2 {
        let mut acc = self.residual.clone();
        for level in &self.levels {
            let fam = families(level.level);
            for (q, p) in level.quotients.iter().zip(&fam) {
                acc = power_add(&acc, &power_mul(q, p));
            }
        }
        acc
    }
}

/// Homogeneous layer of total degree `t` as a coefficient vector (t+1 long,
/// exponents (t,0), (t-1,1), ..., (0,t)).
fn layer_of(p: &PowerPoly2, t: u32) -> Vec<f64> {
    (0..=t).map(|b| p.coeff(t - b, b)).collect()
}

/// Reduce `p` against a family of d+1 polynomials of degree d whose leading
/// homogeneous forms are linearly independent; residual degree <= d-1.
///
/// The degree descent solves one layer at a time; each underdetermined
/// layer system takes its minimal-norm solution, which makes the quotients
/// deterministic.
pub fn reduce_by_level(p: &PowerPoly2, family: &[PowerPoly2]) -> Result<ReductionResult> {
    if family.is_empty() {
        return Err(Error::InvalidFamily("empty family".into()));
    }
    let lvl = family[0].degree;
    for f in family {
        if f.degree != lvl {
            return Err(Error::InvalidFamily("family members have mixed degrees".into()));
        }
    }
    // leading-form rank check
    let k = family.len();
    let lead = DMatrix::from_fn(k, (lvl + 1) as usize, |r, c| family[r].coeff(lvl - c as u32, c as u32));
    let svd = nalgebra::SVD::new(lead.clone(), false, false);
    let smax = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > 1e-10 * smax)
        .count();
    if rank < (lvl + 1) as usize {
        return Err(Error::InvalidFamily(format!(
            "leading forms of the degree-{lvl} family have rank {rank} < {}",
            lvl + 1
        )));
    }

    let pdeg = p.degree.max(lvl);
    let mut rem = p.with_degree(pdeg);
    let mut quotients: Vec<PowerPoly2> =
        vec![PowerPoly2::zero(pdeg.saturating_sub(lvl)); k];

    let mut t = pdeg;
    while t >= lvl {
        let target = layer_of(&rem, t);
        if target.iter().any(|c| c.abs() > 0.0) {
            // unknowns: homogeneous multipliers h_j of degree t - lvl
            let hdeg = t - lvl;
            let nh = (hdeg + 1) as usize;
            let rows = (t + 1) as usize;
            let mut a = DMatrix::<f64>::zeros(rows, k * nh);
            for (j, f) in family.iter().enumerate() {
                for hb in 0..nh as u32 {
                    // multiplier monomial x^{hdeg-hb} y^{hb} times the
                    // leading form of f lands in layer t
                    for c in 0..=lvl {
                        let fcoef = f.coeff(lvl - c, c);
                        if fcoef == 0.0 {
                            continue;
                        }
                        let b_total = hb + c;
                        a[(b_total as usize, j * nh + hb as usize)] += fcoef;
                    }
                }
            }
            let sol = lstsq_min_norm(&a, &DVector::from_vec(target.clone()), 1e-12);
            // residual of the layer solve must vanish (leading forms span)
            let resid = (&a * &sol - DVector::from_vec(target)).amax();
            let scale = rem.max_abs_coeff().max(1.0);
            if resid > 1e-9 * scale {
                return Err(Error::NumericalFailure(format!(
                    "layer {t} solve residual {resid:.3e}"
                )));
            }
            // subtract sum h_j f_j and accumulate quotients
            for (j, f) in family.iter().enumerate() {
                let mut h = PowerPoly2::zero(hdeg);
                for hb in 0..nh as u32 {
                    h.set_coeff(hdeg - hb, hb, sol[j * nh + hb as usize]);
                }
                quotients[j] = power_add(&quotients[j], &h);
                let term = power_mul(&h, f);
                rem = power_add(&rem, &power_scale(&term, -1.0));
            }
            // the processed layer is eliminated exactly up to rounding
            for b in 0..=t {
                rem.set_coeff(t - b, b, 0.0);
            }
        }
        if t == lvl {
            break;
        }
        t -= 1;
    }

    let res_deg = lvl.saturating_sub(1);
    let mut residual = PowerPoly2::zero(res_deg);
    for (a, b) in monomials(res_deg) {
        residual.set_coeff(a, b, rem.coeff(a, b));
    }
    Ok(ReductionResult {
        levels: vec![LevelQuotients {
            level: lvl,
            quotients,
        }],
        residual,
    })
}

pub use crate::legendre1d::Parity;

/// Cascade reduction by the odd (levels 2d-1, 2d-3, ..., 1) or even
/// (levels 2d, ..., 2) families of a graded basis. Quotients at every
/// level are linear; the residual is constant (odd) or linear (even).
pub fn cascade_reduce(
    p: &PowerPoly2,
    basis: &OrthoBasis,
    parity: Parity,
) -> Result<ReductionResult> {
    let n = p
        .effective_degree(1e-14 * p.max_abs_coeff().max(1e-300))
        .unwrap_or(0);
    let (top, lowest) = match parity {
        Parity::Odd => {
            let d = n.div_ceil(2);
            (if d == 0 { 0 } else { 2 * d - 1 }, 1u32)
        }
        Parity::Even => (2 * (n / 2), 2u32),
    };
    if top > basis.degree {
        return Err(Error::InvalidInput(format!(
            "cascade needs basis level {top}, basis has degree {}",
            basis.degree
        )));
    }

    let mut levels = Vec::new();
    let mut rem = p.clone();
    let mut level = top;
    while level >= lowest {
        let family = basis.level_powers(level as u32);
        if family.len() != level as usize + 1 {
            return Err(Error::InvalidFamily(format!(
                "graded basis level {level} has {} members, expected {}",
                family.len(),
                level + 1
            )));
        }
        let one = reduce_by_level(&rem, &family)?;
        rem = one.residual.clone();
        levels.push(LevelQuotients {
            level,
            quotients: one.levels[0].quotients.clone(),
        });
        if level < lowest + 2 {
            break;
        }
        level -= 2;
    }

    // residual bound: constant after an odd cascade, linear after an even one
    let residual = match parity {
        Parity::Odd => {
            if !levels.is_empty() {
                debug_assert!(rem.effective_degree(1e-9 * rem.max_abs_coeff().max(1e-300)).unwrap_or(0) == 0);
            }
            PowerPoly2::constant(rem.coeff(0, 0))
        }
        Parity::Even => {
            let mut r = PowerPoly2::zero(1);
            for (a, b) in monomials(1) {
                r.set_coeff(a, b, rem.coeff(a, b));
            }
            r
        }
    };
    Ok(ReductionResult { levels, residual })
}

/// Outcome of integration by reduction.
#[derive(Debug, Clone, Copy)]
pub struct ReductionIntegral {
    pub value: f64,
    /// Odd mode only: true when the level-1 quotients came out constant, so
    /// the strict one-point form integral = p(common zero) * area applied.
    pub one_point_exact: bool,
}

/// Integrate `p` over the basis domain through a cascade reduction:
/// odd mode uses the level-1 quotient moments (alpha_j, beta_j) plus the
/// constant residual; even mode integrates the linear residual directly.
pub fn integrate_via_reduction(
    p: &PowerPoly2,
    basis: &OrthoBasis,
    mt: &MomentTable,
    parity: Parity,
) -> Result<ReductionIntegral> {
    let red = cascade_reduce(p, basis, parity)?;
    match parity {
        Parity::Odd => {
            let mut corr = 0.0;
            let mut one_point = true;
            let scale = p.max_abs_coeff().max(1.0);
            if let Some(l1) = red.levels.iter().find(|l| l.level == 1) {
                for (j, q) in l1.quotients.iter().enumerate() {
                    let a = q.coeff(1, 0);
                    let b = q.coeff(0, 1);
                    if a.abs() > 1e-10 * scale || b.abs() > 1e-10 * scale {
                        one_point = false;
                    }
                    corr += a * mt.alpha[j] + b * mt.beta[j];
                }
            }
            Ok(ReductionIntegral {
                value: red.residual.coeff(0, 0) * mt.area + corr,
                one_point_exact: one_point,
            })
        }
        Parity::Even => {
            let a = red.residual.coeff(1, 0);
            let b = red.residual.coeff(0, 1);
            let c = red.residual.coeff(0, 0);
            Ok(ReductionIntegral {
                value: a * mt.mx + b * mt.my + c * mt.area,
                one_point_exact: false,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes;
    use crate::orthobasis::{build_graded, Domain};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn graded(poly: crate::geometry::Polygon, d: u32) -> OrthoBasis {
        let dom = Domain::from_polygon(poly).unwrap();
        build_graded(&dom, d).unwrap()
    }

    fn mono(a: u32, b: u32) -> PowerPoly2 {
        let mut p = PowerPoly2::zero(a + b);
        p.set_coeff(a, b, 1.0);
        p
    }

    #[test]
    fn moments_square_pm1_and_unit() {
        let b = graded(shapes::square_pm1(), 1);
        let mt = moments(&b).unwrap();
        assert!((mt.area - 4.0).abs() < 1e-12);
        assert!(mt.mx.abs() < 1e-12 && mt.my.abs() < 1e-12);
        assert!((mt.quad[3] - 4.0 / 3.0).abs() < 1e-12); // int x^2

        let b = graded(shapes::unit_square(), 1);
        let mt = moments(&b).unwrap();
        assert!((mt.mx - 0.5).abs() < 1e-12 && (mt.my - 0.5).abs() < 1e-12);
        assert!((mt.quad[3] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn hexagon_beta1_fixture() {
        // with the printed level-1 fixture as the P_1 family, beta_1 must
        // come out near -431/619
        let dom = Domain::from_polygon(shapes::hexagon()).unwrap();
        let fix = crate::fixtures::hexagon_level1();
        let y = mono(0, 1);
        let beta1 = dom.integrate_power(&power_mul(&y, &fix[1])).unwrap();
        assert!((beta1 - (-431.0 / 619.0)).abs() < 1e-2, "beta1 {beta1}");
    }

    #[test]
    fn reduce_by_level_homogeneous_family() {
        let fam = [mono(3, 0), mono(2, 1), mono(1, 2), mono(0, 3)];
        let red = reduce_by_level(&mono(3, 0), &fam).unwrap();
        let q: Vec<f64> = red.levels[0]
            .quotients
            .iter()
            .map(|q| q.coeff(0, 0))
            .collect();
        assert!((q[0] - 1.0).abs() < 1e-12);
        assert!(q[1].abs() < 1e-12 && q[2].abs() < 1e-12 && q[3].abs() < 1e-12);
        assert!(red.residual.max_abs_coeff() < 1e-12);
    }

    #[test]
    fn reduce_x_cubed_by_quadratic_monomials() {
        let fam = [mono(2, 0), mono(1, 1), mono(0, 2)];
        let red = reduce_by_level(&mono(3, 0), &fam).unwrap();
        // x^3 = x * x^2
        assert!((red.levels[0].quotients[0].coeff(1, 0) - 1.0).abs() < 1e-12);
        assert!(red.residual.max_abs_coeff() < 1e-12);
        let back = red.reconstruct(&|_| fam.to_vec());
        assert!((back.coeff(3, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduce_rejects_rank_deficient_family() {
        let fam = [mono(2, 0), mono(2, 0), mono(0, 2)];
        assert!(matches!(
            reduce_by_level(&mono(3, 0), &fam),
            Err(Error::InvalidFamily(_))
        ));
    }

    #[test]
    fn reduce_by_top_level_of_graded_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let b = graded(shapes::l_domain(), 3);
        let fam = b.level_powers(3);
        // random degree 2*3-1 = 5 polynomial
        let mut p = PowerPoly2::zero(5);
        for (a, bb) in monomials(5) {
            p.set_coeff(a, bb, rng.gen_range(-1.0..1.0));
        }
        let red = reduce_by_level(&p, &fam).unwrap();
        assert!(red.residual_degree() <= 2);
        let back = red.reconstruct(&|_| fam.clone());
        for (a, bb) in monomials(5) {
            assert!((back.coeff(a, bb) - p.coeff(a, bb)).abs() < 1e-9 * p.max_abs_coeff());
        }
    }

    #[test]
    fn cascade_linear_odd() {
        let b = graded(shapes::unit_square(), 1);
        let p = PowerPoly2::new(1, vec![0.7, -0.3, 0.2]).unwrap();
        let red = cascade_reduce(&p, &b, Parity::Odd).unwrap();
        assert_eq!(red.levels.len(), 1);
        assert_eq!(red.levels[0].level, 1);
        assert_eq!(red.residual.degree, 0);
        // the constant residual integrates to the exact mean contribution:
        // int p = residual * area  (level-1 quotients are constants here)
        let exact = b.domain.integrate_power(&p).unwrap();
        assert!((red.residual.coeff(0, 0) * b.domain.area() - exact).abs() < 1e-12);
    }

    #[test]
    fn cascade_even_x_squared_on_square_pm1() {
        let b = graded(shapes::square_pm1(), 2);
        let red = cascade_reduce(&mono(2, 0), &b, Parity::Even).unwrap();
        // residual a x + b y + c with a = b = 0, c = 1/3
        assert!(red.residual.coeff(1, 0).abs() < 1e-12);
        assert!(red.residual.coeff(0, 1).abs() < 1e-12);
        assert!((red.residual.coeff(0, 0) - 1.0 / 3.0).abs() < 1e-12);
        // Eq-style integral: c * area = 4/3
        let mt = moments(&b).unwrap();
        let v = integrate_via_reduction(&mono(2, 0), &b, &mt, Parity::Even).unwrap();
        assert!((v.value - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn integrate_constant_and_random_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for poly in [shapes::hexagon(), shapes::l_domain()] {
            let b = graded(poly, 6);
            let mt = moments(&b).unwrap();
            // constants
            let v = integrate_via_reduction(&PowerPoly2::constant(1.0), &b, &mt, Parity::Odd)
                .unwrap();
            assert!((v.value - b.domain.area()).abs() < 1e-12);
            // random polynomials of degree <= 6, both parities
            for deg in 1..=6u32 {
                let mut p = PowerPoly2::zero(deg);
                for (a, bb) in monomials(deg) {
                    p.set_coeff(a, bb, rng.gen_range(-1.0..1.0));
                }
                let exact = b.domain.integrate_power(&p).unwrap();
                for parity in [Parity::Odd, Parity::Even] {
                    let v = integrate_via_reduction(&p, &b, &mt, parity).unwrap();
                    assert!(
                        (v.value - exact).abs() < 1e-9 * b.domain.area(),
                        "deg {deg} {parity:?}: {} vs {exact}",
                        v.value
                    );
                }
            }
        }
    }

    #[test]
    fn reconstruction_invariant_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let b = graded(shapes::hexagon(), 5);
        let mut p = PowerPoly2::zero(5);
        for (a, bb) in monomials(5) {
            p.set_coeff(a, bb, rng.gen_range(-1.0..1.0));
        }
        let red = cascade_reduce(&p, &b, Parity::Odd).unwrap();
        let back = red.reconstruct(&|l| b.level_powers(l));
        let scale = p.max_abs_coeff();
        for _ in 0..30 {
            let q = crate::geometry::Point2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let pv = crate::bb::power_eval(&p, &q);
            let bv = crate::bb::power_eval(&back, &q);
            assert!((pv - bv).abs() < 1e-9 * scale);
        }
        // degree-structure flags
        assert!(red.max_quotient_degree() <= 1);
        assert_eq!(red.residual_degree(), 0);
    }

    #[test]
    fn strict_one_point_on_symmetric_domain() {
        // build p from odd-level members with constant quotients plus a
        // constant; the odd cascade then has constant level-1 quotients and
        // int p = p(0) * area on the centrally symmetric square
        let b = graded(shapes::square_pm1(), 3);
        let l3 = b.level_powers(3);
        let l1 = b.level_powers(1);
        let mut p = PowerPoly2::constant(0.8);
        p = power_add(&p, &power_scale(&l3[1], 1.7));
        p = power_add(&p, &power_scale(&l1[0], -0.9));
        let mt = moments(&b).unwrap();
        let v = integrate_via_reduction(&p, &b, &mt, Parity::Odd).unwrap();
        assert!(v.one_point_exact);
        let origin = crate::geometry::Point2::new(0.0, 0.0);
        let expect = crate::bb::power_eval(&p, &origin) * b.domain.area();
        assert!((v.value - expect).abs() < 1e-10);
        let exact = b.domain.integrate_power(&p).unwrap();
        assert!((v.value - exact).abs() < 1e-10);
    }

    #[test]
    fn residual_consistency_identity_on_hexagon() {
        // the constant residual of an odd cascade satisfies
        // R = (int p - sum_j (a_j alpha_j + b_j beta_j)) / area
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let b = graded(shapes::hexagon(), 3);
        let mt = moments(&b).unwrap();
        let mut p = PowerPoly2::zero(4);
        for (a, bb) in monomials(4) {
            p.set_coeff(a, bb, rng.gen_range(-1.0..1.0));
        }
        let red = cascade_reduce(&p, &b, Parity::Odd).unwrap();
        let l1 = red.levels.iter().find(|l| l.level == 1).unwrap();
        let mut corr = 0.0;
        for (j, q) in l1.quotients.iter().enumerate() {
            corr += q.coeff(1, 0) * mt.alpha[j] + q.coeff(0, 1) * mt.beta[j];
        }
        let exact = b.domain.integrate_power(&p).unwrap();
        let expect_residual = (exact - corr) / mt.area;
        assert!((red.residual.coeff(0, 0) - expect_residual).abs() < 1e-10);
        let _ = Arc::clone(&b.domain);
    }
}
