//! Exact integration of Bernstein products, block mass matrices, C^r
//! smoothness constraint rows, and exact spline integrals.

use nalgebra::{DMatrix, DVector};

use crate::bb::{bb_dim, multi_index_position, multi_indices, MultiIndex, SplineVector};
use crate::error::{Error, Result};
use crate::geometry::{barycentric, Triangulation};
use crate::par;

/// Binomial coefficient, exact through Pascal-triangle integers for
/// n <= 34 (covers degree 15), log-gamma beyond.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= 34 {
        let mut row = [0u128; 35];
        row[0] = 1;
        for i in 1..=n as usize {
            for j in (1..=i).rev() {
                row[j] += row[j - 1];
            }
        }
        row[k as usize] as f64
    } else {
        (ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0))
            .exp()
    }
}

/// Lanczos approximation of ln Gamma(x) for x > 0.
fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, &c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Exact integral of B_a * B_b over a triangle of the given area:
/// C(i+i',i) C(j+j',j) C(k+k',k) / (C(2d,d) C(2d+2,2)) * area.
pub fn bernstein_pair_integral(d: u32, a: MultiIndex, b: MultiIndex, area: f64) -> Result<f64> {
    if a.degree() != d || b.degree() != d {
        return Err(Error::InvalidInput(format!(
            "multi-index degrees ({}, {}) do not match d={d}",
            a.degree(),
            b.degree()
        )));
    }
    if area <= 0.0 {
        return Err(Error::InvalidInput("non-positive triangle area".into()));
    }
    let num = binomial(a.i + b.i, a.i) * binomial(a.j + b.j, a.j) * binomial(a.k + b.k, a.k);
    let den = binomial(2 * d, d) * binomial(2 * d + 2, 2);
    Ok(num / den * area)
}

/// Block-diagonal Gram matrix of the BB basis over a triangulation: one
/// dense symmetric positive definite block per triangle.
#[derive(Debug, Clone)]
pub struct MassMatrix {
    pub degree: u32,
    pub blocks: Vec<DMatrix<f64>>,
}

impl MassMatrix {
    pub fn dim_per_block(&self) -> usize {
        bb_dim(self.degree)
    }

    pub fn ncols(&self) -> usize {
        self.blocks.len() * self.dim_per_block()
    }

    /// y = M c, blockwise.
    pub fn apply(&self, c: &[f64]) -> Vec<f64> {
        let d = self.dim_per_block();
        let mut out = vec![0.0; c.len()];
        for (t, block) in self.blocks.iter().enumerate() {
            let x = DVector::from_column_slice(&c[t * d..(t + 1) * d]);
            let y = block * x;
            out[t * d..(t + 1) * d].copy_from_slice(y.as_slice());
        }
        out
    }

    /// Exact L2 inner product of two coefficient vectors.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        let mb = self.apply(b);
        a.iter().zip(&mb).map(|(x, y)| x * y).sum()
    }
}

/// Assemble the mass matrix; per-triangle blocks fill independently.
pub fn mass_matrix(tri: &Triangulation, d: u32) -> Result<MassMatrix> {
    let mis = multi_indices(d);
    let dim = mis.len();
    // the unit block (area 1) is shared by every triangle up to scaling
    let mut unit = DMatrix::<f64>::zeros(dim, dim);
    for p in 0..dim {
        for q in p..dim {
            let v = bernstein_pair_integral(d, mis[p], mis[q], 1.0)?;
            unit[(p, q)] = v;
            unit[(q, p)] = v;
        }
    }
    let blocks = par::try_map_indexed(tri.num_triangles(), |t| {
        let area = tri.triangle(t).signed_area();
        if area <= 0.0 {
            return Err(Error::InvalidInput(format!("triangle {t} has non-positive area")));
        }
        Ok(&unit * area)
    })?;
    Ok(MassMatrix { degree: d, blocks })
}

/// One sparse smoothness-constraint row: (column, coefficient) pairs.
pub type SparseRow = Vec<(usize, f64)>;

/// Linear constraints on BB coefficients equivalent to C^r continuity
/// across every interior edge. Rows are scaled so the far-triangle
/// coefficient enters with +1.
#[derive(Debug, Clone)]
pub struct SmoothnessMatrix {
    pub degree: u32,
    pub order: u32,
    pub ncols: usize,
    pub rows: Vec<SparseRow>,
}

impl SmoothnessMatrix {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::<f64>::zeros(self.rows.len(), self.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                m[(r, c)] += v;
            }
        }
        m
    }

    /// Residual H c, for kernel checks.
    pub fn apply(&self, c: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(i, v)| v * c[i]).sum())
            .collect()
    }
}

/// Smoothness conditions across one interior edge for orders 0..=r.
///
/// With the two triangles locally reordered as T = <opp, a, b> and
/// Tt = <opp~, b, a> (the shared edge traversed forward in T, backward in
/// Tt), the conditions read, for each m = 0..=r and j + k = d - m:
///
///   ct_{m,j,k} = sum_{v+u+w=m} B^m_{vuw}(lambda) * c_{v, k+w, j+u},
///
/// where lambda is the barycentric coordinate vector of opp~ with respect
/// to <opp, a, b>.
fn edge_rows(
    tri: &Triangulation,
    d: u32,
    r: u32,
    edge: &crate::geometry::InteriorEdge,
) -> Result<Vec<SparseRow>> {
    let dim = bb_dim(d);
    let (t_idx, tt_idx) = (edge.left, edge.right);

    let verts_of = |ti: usize| tri.tris[ti];
    // position of each frame vertex inside the stored triple
    let frame_of = |ti: usize, frame: [usize; 3]| -> [usize; 3] {
        let stored = verts_of(ti);
        let mut pos = [usize::MAX; 3];
        for (fi, fv) in frame.iter().enumerate() {
            pos[fi] = stored
                .iter()
                .position(|sv| sv == fv)
                .expect("frame vertex not in triangle");
        }
        pos
    };
    // orient the edge forward in T's cycle
    let stored_t = verts_of(t_idx);
    let mut a = edge.a;
    let mut b = edge.b;
    let forward = (0..3).any(|e| stored_t[e] == a && stored_t[(e + 1) % 3] == b);
    if !forward {
        std::mem::swap(&mut a, &mut b);
    }
    let opp_t = *stored_t.iter().find(|&&v| v != a && v != b).unwrap();
    let stored_tt = verts_of(tt_idx);
    let opp_tt = *stored_tt.iter().find(|&&v| v != a && v != b).unwrap();

    let t_frame = frame_of(t_idx, [opp_t, a, b]);
    let tt_frame = frame_of(tt_idx, [opp_tt, b, a]);

    // stored coefficient index for a frame multi-index
    let stored_pos = |frame: [usize; 3], f: [u32; 3]| -> usize {
        let mut m = [0u32; 3];
        for fi in 0..3 {
            m[frame[fi]] = f[fi];
        }
        multi_index_position(MultiIndex {
            i: m[0],
            j: m[1],
            k: m[2],
        })
    };

    let frame_tri = crate::geometry::Triangle {
        v1: tri.points[opp_t],
        v2: tri.points[a],
        v3: tri.points[b],
    };
    let (l1, l2, l3) = barycentric(&frame_tri, &tri.points[opp_tt])?;

    let t_off = t_idx * dim;
    let tt_off = tt_idx * dim;
    let mut rows = Vec::new();
    for m in 0..=r {
        let bern: Vec<(MultiIndex, f64)> = multi_indices(m)
            .into_iter()
            .map(|mi| {
                let mult = {
                    let mut v = 1.0;
                    // m!/(v!u!w!) via binomials
                    v *= binomial(m, mi.i);
                    v *= binomial(m - mi.i, mi.j);
                    v
                };
                (
                    mi,
                    mult * l1.powi(mi.i as i32) * l2.powi(mi.j as i32) * l3.powi(mi.k as i32),
                )
            })
            .collect();
        for j in (0..=d - m).rev() {
            let k = d - m - j;
            let mut row: SparseRow = Vec::with_capacity(1 + bern.len());
            row.push((tt_off + stored_pos(tt_frame, [m, j, k]), 1.0));
            for (mi, bval) in &bern {
                row.push((
                    t_off + stored_pos(t_frame, [mi.i, k + mi.k, j + mi.j]),
                    -bval,
                ));
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Assemble the smoothness matrix H_r over all interior edges.
pub fn smoothness_matrix(tri: &Triangulation, d: u32, r: u32) -> Result<SmoothnessMatrix> {
    if r > d {
        return Err(Error::InvalidInput(format!(
            "smoothness order {r} exceeds degree {d}"
        )));
    }
    let per_edge = par::try_map_indexed(tri.interior_edges.len(), |e| {
        edge_rows(tri, d, r, &tri.interior_edges[e])
    })?;
    Ok(SmoothnessMatrix {
        degree: d,
        order: r,
        ncols: tri.num_triangles() * bb_dim(d),
        rows: per_edge.into_iter().flatten().collect(),
    })
}

/// Exact integral of a spline: sum over triangles of
/// A_T / C(d+2,2) * (sum of the block's coefficients).
pub fn integrate_spline(s: &SplineVector) -> f64 {
    let scale = 1.0 / binomial(s.degree + 2, 2);
    let mut acc = crate::bb::Compensated::default();
    for t in 0..s.tri.num_triangles() {
        let area = s.tri.triangle(t).area();
        let block_sum: f64 = s.block(t).iter().sum();
        acc.add(area * scale * block_sum);
    }
    acc.value()
}

/// Exact Gram matrix of a set of coefficient vectors: G_pq = c_p^T M c_q.
pub fn gram_exact(cols: &[SplineVector], m: &MassMatrix) -> Result<DMatrix<f64>> {
    let k = cols.len();
    for c in cols {
        if c.degree != m.degree {
            return Err(Error::InvalidInput(
                "gram_exact: spline degree does not match mass matrix".into(),
            ));
        }
        if c.coeffs.len() != m.ncols() {
            return Err(Error::InvalidInput("gram_exact: dimension mismatch".into()));
        }
    }
    let applied: Vec<Vec<f64>> = cols.iter().map(|c| m.apply(&c.coeffs)).collect();
    let mut g = DMatrix::<f64>::zeros(k, k);
    for p in 0..k {
        for q in p..k {
            let v: f64 = cols[p]
                .coeffs
                .iter()
                .zip(&applied[q])
                .map(|(a, b)| a * b)
                .sum();
            g[(p, q)] = v;
            g[(q, p)] = v;
        }
    }
    Ok(g)
}
