//! Bundled regression tables: printed coefficient sets, node lists, and
//! rule weights from the reference write-up. These are truncated decimals
//! or rationalized floats of one arbitrary orthonormal choice, so tests
//! treat them as span fixtures, never as coefficient ground truth.

use serde::Deserialize;

use crate::bb::PowerPoly2;
use crate::geometry::Point2;

const RAW: &str = include_str!("../data/fixtures.json");

#[derive(Deserialize)]
struct RowTable {
    #[serde(default)]
    rows: Vec<Vec<f64>>,
    #[serde(default)]
    rows_rational: Vec<Vec<[i64; 2]>>,
    #[serde(default)]
    order: Vec<String>,
}

#[derive(Deserialize)]
struct Nodes8 {
    x_rational: Vec<[i64; 2]>,
    y_rational: Vec<[i64; 2]>,
}

#[derive(Deserialize)]
struct EvenReduction {
    weights_rational: Vec<[i64; 2]>,
    beta1_rational: [i64; 2],
    area_rational: [i64; 2],
    cos_value_printed: f64,
    cos_exact: f64,
}

#[derive(Deserialize)]
struct InterpD3 {
    node_triangle: [[f64; 2]; 3],
    weights_rational: Vec<[i64; 2]>,
    nodes: Vec<[f64; 2]>,
    zero_weight_positions: Vec<usize>,
}

#[derive(Deserialize)]
struct QuinticRule {
    denominator: f64,
    entries: Vec<(f64, f64, f64)>,
}

#[derive(Deserialize)]
struct Tables {
    triangle_d1: RowTable,
    triangle_d2: RowTable,
    opd1_unit_square: RowTable,
    square_pm1_x_matrix: RowTable,
    l_domain_d2: RowTable,
    l_domain_d3: RowTable,
    hexagon_level1: RowTable,
    hexagon_level3: RowTable,
    hexagon_nodes8: Nodes8,
    hexagon_even_reduction: EvenReduction,
    hexagon_interp_d3: InterpD3,
    quintic_triangle_rule: QuinticRule,
}

fn tables() -> &'static Tables {
    use std::sync::OnceLock;
    static CELL: OnceLock<Tables> = OnceLock::new();
    CELL.get_or_init(|| serde_json::from_str(RAW).expect("bundled fixture table parses"))
}

fn rat(r: [i64; 2]) -> f64 {
    r[0] as f64 / r[1] as f64
}

impl RowTable {
    fn numeric_rows(&self) -> Vec<Vec<f64>> {
        if !self.rows.is_empty() {
            self.rows.clone()
        } else {
            self.rows_rational
                .iter()
                .map(|row| row.iter().map(|&r| rat(r)).collect())
                .collect()
        }
    }

    /// Interpret rows against the table's monomial order; `order` empty
    /// means the graded-lex prefix 1, x, y, ...
    fn polys(&self) -> Vec<PowerPoly2> {
        let rows = self.numeric_rows();
        let order: Vec<(u32, u32)> = if self.order.is_empty() {
            crate::bb::monomials(8)
                .into_iter()
                .take(rows[0].len())
                .collect()
        } else {
            self.order
                .iter()
                .map(|s| match s.as_str() {
                    "1" => (0, 0),
                    "x" => (1, 0),
                    "y" => (0, 1),
                    "x^2" => (2, 0),
                    "xy" => (1, 1),
                    "y^2" => (0, 2),
                    "x^3" => (3, 0),
                    "x^2y" => (2, 1),
                    "xy^2" => (1, 2),
                    "y^3" => (0, 3),
                    other => panic!("unknown monomial label {other}"),
                })
                .collect()
        };
        let deg = order.iter().map(|&(a, b)| a + b).max().unwrap();
        rows.iter()
            .map(|row| {
                let mut p = PowerPoly2::zero(deg);
                for (&(a, b), &v) in order.iter().zip(row) {
                    p.set_coeff(a, b, v);
                }
                p
            })
            .collect()
    }
}

/// The two linear members over the triangle (0,0),(1,0),(0.5,1).
pub fn triangle_d1_pair() -> Vec<PowerPoly2> {
    tables().triangle_d1.polys()
}

/// The three quadratic members over the same triangle.
pub fn triangle_d2_rows() -> Vec<PowerPoly2> {
    tables().triangle_d2.polys()
}

/// The linear pair over [0,1]^2 (orthogonal to constants).
pub fn opd1_unit_square() -> Vec<PowerPoly2> {
    tables().opd1_unit_square.polys()
}

/// The quadratic X-matrix rows over [-1,1]^2.
pub fn square_pm1_x_matrix() -> Vec<PowerPoly2> {
    tables().square_pm1_x_matrix.polys()
}

/// The six quadratic members over the L-domain.
pub fn l_domain_d2_rows() -> Vec<PowerPoly2> {
    tables().l_domain_d2.polys()
}

/// The ten cubic members over the L-domain.
pub fn l_domain_d3_rows() -> Vec<PowerPoly2> {
    tables().l_domain_d3.polys()
}

/// Hexagon degree-1 pair.
pub fn hexagon_level1() -> Vec<PowerPoly2> {
    tables().hexagon_level1.polys()
}

/// Hexagon degree-3 family (four members, odd-parity monomials).
pub fn hexagon_level3() -> Vec<PowerPoly2> {
    tables().hexagon_level3.polys()
}

/// The eight interpolation nodes inside the hexagon.
pub fn hexagon_nodes8() -> Vec<Point2> {
    let t = &tables().hexagon_nodes8;
    t.x_rational
        .iter()
        .zip(&t.y_rational)
        .map(|(&x, &y)| Point2::new(rat(x), rat(y)))
        .collect()
}

pub struct HexagonEvenReduction {
    pub weights: Vec<f64>,
    pub beta1: f64,
    pub area: f64,
    pub cos_value_printed: f64,
    pub cos_exact: f64,
}

/// Printed weights, beta_1 and area of the hexagon even-reduction rule.
pub fn hexagon_even_reduction() -> HexagonEvenReduction {
    let t = &tables().hexagon_even_reduction;
    HexagonEvenReduction {
        weights: t.weights_rational.iter().map(|&r| rat(r)).collect(),
        beta1: rat(t.beta1_rational),
        area: rat(t.area_rational),
        cos_value_printed: t.cos_value_printed,
        cos_exact: t.cos_exact,
    }
}

pub struct HexagonInterpD3 {
    pub node_triangle: [Point2; 3],
    pub nodes: Vec<Point2>,
    pub weights: Vec<f64>,
    pub zero_weight_positions: Vec<usize>,
}

/// The 10-node degree-3 interpolation rule over the hexagon (nodes listed
/// in the write-up's row-major order).
pub fn hexagon_interp_d3() -> HexagonInterpD3 {
    let t = &tables().hexagon_interp_d3;
    HexagonInterpD3 {
        node_triangle: [
            Point2::new(t.node_triangle[0][0], t.node_triangle[0][1]),
            Point2::new(t.node_triangle[1][0], t.node_triangle[1][1]),
            Point2::new(t.node_triangle[2][0], t.node_triangle[2][1]),
        ],
        nodes: t.nodes.iter().map(|&[x, y]| Point2::new(x, y)).collect(),
        weights: t.weights_rational.iter().map(|&r| rat(r)).collect(),
        zero_weight_positions: t.zero_weight_positions.clone(),
    }
}

/// The 21-node quintic rule over the triangle (0,0),(1,0),(1,1).
pub fn quintic_triangle_rule() -> (Vec<Point2>, Vec<f64>) {
    let t = &tables().quintic_triangle_rule;
    let nodes = t.entries.iter().map(|&(_, x, y)| Point2::new(x, y)).collect();
    let weights = t.entries.iter().map(|&(w, _, _)| w / t.denominator).collect();
    (nodes, weights)
}
