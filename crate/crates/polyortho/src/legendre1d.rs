//! Monic Legendre polynomials on [-1, 1], polynomial reduction by the odd-
//! and even-degree Legendre families, the one-point rule, and the
//! even-function interpolation quadrature.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numkernels::solve_linear;

/// Univariate polynomial, coefficients in ascending power order.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly1 {
    pub coeffs: Vec<f64>,
}

impl Poly1 {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Poly1 { coeffs }
    }

    pub fn zero() -> Self {
        Poly1 { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Poly1 { coeffs: vec![c] }
    }

    pub fn degree(&self) -> usize {
        let mut d = 0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0.0 {
                d = i;
            }
        }
        d
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn add_scaled(&mut self, other: &Poly1, s: f64) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), 0.0);
        }
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }

    pub fn mul(&self, other: &Poly1) -> Poly1 {
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly1::new(out)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Exact integral over [-1, 1]: odd powers drop, even powers give
    /// 2/(k+1).
    pub fn integral_pm1(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| k % 2 == 0)
            .map(|(k, &c)| 2.0 * c / (k as f64 + 1.0))
            .sum()
    }
}

/// Monic Legendre polynomials up to a requested degree.
#[derive(Debug, Clone)]
pub struct LegendreFamily {
    pub polys: Vec<Poly1>,
}

impl LegendreFamily {
    /// Three-term recurrence P_{n+1} = x P_n - n^2/(4n^2-1) P_{n-1}.
    pub fn up_to(n: usize) -> Self {
        let mut polys = vec![Poly1::constant(1.0)];
        if n >= 1 {
            polys.push(Poly1::new(vec![0.0, 1.0]));
        }
        for k in 1..n {
            let kk = k as f64;
            let beta = kk * kk / (4.0 * kk * kk - 1.0);
            let mut next = polys[k].mul(&Poly1::new(vec![0.0, 1.0]));
            next.add_scaled(&polys[k - 1], -beta);
            polys.push(next);
        }
        LegendreFamily { polys }
    }

    pub fn get(&self, n: usize) -> &Poly1 {
        &self.polys[n]
    }
}

/// Monic Legendre polynomial of degree n.
pub fn legendre_monic(n: usize) -> Poly1 {
    LegendreFamily::up_to(n).polys.swap_remove(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// Result of reducing against the odd (or even) Legendre family:
/// quotients q with p = sum q_i P_{deg_i} + residual, each q linear.
#[derive(Debug, Clone)]
pub struct LegendreReduction {
    /// (Legendre degree, linear quotient), descending by degree.
    pub quotients: Vec<(usize, Poly1)>,
    /// Linear residual.
    pub residual: Poly1,
}

impl LegendreReduction {
    /// The quotient attached to the lowest-degree family member (P_1 in odd
    /// mode, P_2 in even mode), if any level was used.
    pub fn lowest_quotient(&self) -> Option<&Poly1> {
        self.quotients.last().map(|(_, q)| q)
    }

    pub fn reconstruct(&self) -> Poly1 {
        let fam = LegendreFamily::up_to(self.quotients.first().map(|&(d, _)| d).unwrap_or(0));
        let mut acc = self.residual.clone();
        for (deg, q) in &self.quotients {
            let term = q.mul(fam.get(*deg));
            acc.add_scaled(&term, 1.0);
        }
        acc
    }
}

/// Reduce `p` by Legendre polynomials of odd (resp. even) degree via
/// leading-coefficient elimination, two coefficients per step. Quotients
/// and the residual are linear.
pub fn reduce_legendre(p: &Poly1, parity: Parity) -> Result<LegendreReduction> {
    if p.coeffs.iter().all(|&c| c == 0.0) {
        return Err(Error::InvalidInput("cannot reduce the zero polynomial".into()));
    }
    let n = p.degree();
    // family degrees used, descending: odd 2m-1 >= max(n-1, 1); even 2m
    let top = match parity {
        Parity::Odd => {
            let d = n.div_ceil(2); // 2d-1 <= n <= 2d
            if d == 0 {
                0
            } else {
                2 * d - 1
            }
        }
        Parity::Even => 2 * (n / 2),
    };
    let fam = LegendreFamily::up_to(top.max(1));
    let mut rem = p.clone();
    let mut quotients = Vec::new();
    let mut level = top;
    let lowest = match parity {
        Parity::Odd => 1,
        Parity::Even => 2,
    };
    while level >= lowest {
        let pl = fam.get(level);
        // linear quotient a x + b removes coefficients at level+1 and level
        let a = rem.coeff(level + 1);
        let b = rem.coeff(level);
        let mut q = Poly1::new(vec![b, a]);
        // subtract (a x + b) P_level
        let mut term = q.mul(pl);
        term.coeffs.iter_mut().for_each(|c| *c = -*c);
        rem.add_scaled(&term, 1.0);
        // clean the eliminated coefficients exactly
        if rem.coeffs.len() > level + 1 {
            rem.coeffs[level + 1] = 0.0;
        }
        if rem.coeffs.len() > level {
            rem.coeffs[level] = 0.0;
        }
        if q.coeffs[1] == 0.0 {
            q.coeffs.truncate(1);
        }
        quotients.push((level, q));
        if level < lowest + 2 {
            break;
        }
        level -= 2;
    }
    rem.coeffs.truncate(2.min(rem.coeffs.len()).max(1));
    Ok(LegendreReduction {
        quotients,
        residual: rem,
    })
}

/// Outcome of the one-point integral on [-1, 1].
#[derive(Debug, Clone, Copy)]
pub struct OnePointIntegral {
    pub value: f64,
    /// True when the final quotient was constant, so the plain one-point
    /// formula 2 p(0) applied without correction.
    pub one_point_exact: bool,
}

/// Integrate over [-1, 1] by odd-Legendre reduction: 2 p(0) when the P_1
/// quotient is constant, otherwise with the 2 q_1 / 3 correction.
pub fn one_point_integral(p: &Poly1) -> Result<OnePointIntegral> {
    let red = reduce_legendre(p, Parity::Odd)?;
    let scale = p.max_abs_coeff();
    let q1_linear = red
        .lowest_quotient()
        .map(|q| q.coeff(1))
        .unwrap_or(0.0);
    if q1_linear.abs() <= 1e-12 * scale {
        Ok(OnePointIntegral {
            value: 2.0 * p.eval(0.0),
            one_point_exact: true,
        })
    } else {
        Ok(OnePointIntegral {
            value: 2.0 / 3.0 * q1_linear + 2.0 * p.eval(0.0),
            one_point_exact: false,
        })
    }
}

fn validate_nodes(nodes: &[f64]) -> Result<()> {
    if nodes.is_empty() {
        return Err(Error::InvalidInput("empty node set".into()));
    }
    for &x in nodes {
        if !(x > 0.0 && x <= 1.0) {
            return Err(Error::InvalidInput(format!("node {x} outside (0, 1]")));
        }
    }
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if (nodes[i] - nodes[j]).abs() < 1e-14 {
                return Err(Error::NonUnisolvent(format!(
                    "coincident nodes {} and {}",
                    nodes[i], nodes[j]
                )));
            }
        }
    }
    Ok(())
}

fn odd_legendre_matrix(nodes: &[f64]) -> DMatrix<f64> {
    let d = nodes.len();
    let fam = LegendreFamily::up_to(2 * d - 1);
    DMatrix::from_fn(d, d, |i, j| fam.get(2 * j + 1).eval(nodes[i]))
}

/// Quadrature for even functions from d samples on (0, 1] plus f(0):
/// solve sum_j q_j P_{2j-1}(x_i) = (f(x_i) - f(0)) / x_i and return
/// (2/3) q_1 + 2 f(0). Exact for even polynomials of degree <= 2d.
pub fn even_quadrature(nodes: &[f64], fvals: &[f64], f0: f64) -> Result<f64> {
    validate_nodes(nodes)?;
    if fvals.len() != nodes.len() {
        return Err(Error::InvalidInput("fvals length != nodes length".into()));
    }
    let a = odd_legendre_matrix(nodes);
    let b = DVector::from_iterator(
        nodes.len(),
        nodes.iter().zip(fvals).map(|(&x, &f)| (f - f0) / x),
    );
    let sol = solve_linear(&a, &b)?;
    Ok(2.0 / 3.0 * sol.x[0] + 2.0 * f0)
}

/// The same functional as explicit weights: (w_0 at 0, w_i at the nodes).
pub fn even_quadrature_weights(nodes: &[f64]) -> Result<(f64, Vec<f64>)> {
    validate_nodes(nodes)?;
    let a = odd_legendre_matrix(nodes);
    // q_1 = e_1^T A^{-1} b, so the node weights are (2/3) (A^{-T} e_1)_i / x_i
    let sol = solve_linear(&a.transpose(), &DVector::from_fn(nodes.len(), |i, _| {
        if i == 0 {
            1.0
        } else {
            0.0
        }
    }))?;
    let w: Vec<f64> = sol
        .x
        .iter()
        .zip(nodes)
        .map(|(&r, &x)| 2.0 / 3.0 * r / x)
        .collect();
    let w0 = 2.0 - w.iter().sum::<f64>();
    Ok((w0, w))
}

/// Apply the even quadrature to a general f by sampling its even part
/// f_e(x) = (f(x) + f(-x)) / 2 at the nodes.
pub fn integrate_even_part(nodes: &[f64], f: impl Fn(f64) -> f64) -> Result<f64> {
    let fvals: Vec<f64> = nodes.iter().map(|&x| 0.5 * (f(x) + f(-x))).collect();
    even_quadrature(nodes, &fvals, f(0.0))
}
