//! Artifact schemas shared by the CLI and the integration tests, plus a
//! JSON writer emitting reals with 17 significant digits (round-trip exact
//! for doubles, byte-deterministic).

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bb::PowerPoly2;
use crate::error::{Error, Result};
use crate::geometry::{Point2, Polygon, Triangulation};
use crate::orthobasis::{BasisKind, Domain, OrthoBasis};
use crate::quadrature::{QuadratureRule, RuleKind};

/// Polygon file: {"outer": [[x,y],...], "holes": [[[x,y],...],...]}.
#[derive(Debug, Serialize, Deserialize)]
pub struct PolygonFile {
    pub outer: Vec<[f64; 2]>,
    #[serde(default)]
    pub holes: Vec<Vec<[f64; 2]>>,
}

impl PolygonFile {
    pub fn to_polygon(&self) -> Result<Polygon> {
        Polygon::new(
            self.outer.iter().map(|&[x, y]| Point2::new(x, y)).collect(),
            self.holes
                .iter()
                .map(|h| h.iter().map(|&[x, y]| Point2::new(x, y)).collect())
                .collect(),
        )
    }

    pub fn from_polygon(p: &Polygon) -> Self {
        PolygonFile {
            outer: p.outer.iter().map(|q| [q.x, q.y]).collect(),
            holes: p
                .holes
                .iter()
                .map(|h| h.iter().map(|q| [q.x, q.y]).collect())
                .collect(),
        }
    }
}

/// Triangulation file: {"points": [[x,y],...], "tris": [[i,j,k],...]}.
#[derive(Debug, Serialize, Deserialize)]
pub struct TriangulationFile {
    pub points: Vec<[f64; 2]>,
    pub tris: Vec<[usize; 3]>,
}

impl TriangulationFile {
    pub fn to_triangulation(&self) -> Result<Triangulation> {
        Triangulation::from_parts(
            self.points.iter().map(|&[x, y]| Point2::new(x, y)).collect(),
            self.tris.clone(),
        )
    }

    pub fn from_triangulation(t: &Triangulation) -> Self {
        TriangulationFile {
            points: t.points.iter().map(|q| [q.x, q.y]).collect(),
            tris: t.tris.clone(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DomainFile {
    pub polygon: PolygonFile,
    pub triangulation: TriangulationFile,
}

impl DomainFile {
    pub fn from_domain(d: &Domain) -> Self {
        DomainFile {
            polygon: PolygonFile::from_polygon(&d.polygon),
            triangulation: TriangulationFile::from_triangulation(&d.triangulation),
        }
    }

    pub fn to_domain(&self) -> Result<std::sync::Arc<Domain>> {
        Domain::from_parts(self.polygon.to_polygon()?, self.to_triangulation()?)
    }

    fn to_triangulation(&self) -> Result<Triangulation> {
        self.triangulation.to_triangulation()
    }
}

/// Basis file: domain, degree, kind, members in power form, per-member
/// levels, and the exact-Gram residual.
#[derive(Debug, Serialize, Deserialize)]
pub struct BasisFile {
    pub domain: DomainFile,
    pub degree: u32,
    pub kind: BasisKind,
    pub members: Vec<PowerPoly2>,
    pub levels: Vec<u32>,
    pub gram_residual: f64,
}

impl BasisFile {
    pub fn from_basis(b: &OrthoBasis) -> Self {
        BasisFile {
            domain: DomainFile::from_domain(&b.domain),
            degree: b.degree,
            kind: b.kind,
            members: b.members.iter().map(|m| m.power.clone()).collect(),
            levels: b.members.iter().map(|m| m.level).collect(),
            gram_residual: b.gram_residual,
        }
    }

    /// Rebuild a full basis value (splines recovered by exact per-triangle
    /// interpolation of the power forms).
    pub fn to_basis(&self) -> Result<OrthoBasis> {
        use crate::orthobasis::BasisMember;
        let domain = self.domain.to_domain()?;
        if self.levels.len() != self.members.len() {
            return Err(Error::InvalidInput("levels/members length mismatch".into()));
        }
        let members = self
            .members
            .iter()
            .zip(&self.levels)
            .map(|(p, &level)| -> Result<BasisMember> {
                let spline =
                    crate::bb::spline_from_power(p, &domain.triangulation, p.degree.max(level))?;
                Ok(BasisMember {
                    level,
                    spline,
                    power: p.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OrthoBasis {
            domain,
            degree: self.degree,
            kind: self.kind,
            members,
            gram_residual: self.gram_residual,
        })
    }
}

/// Rule file: {"kind", "nodes", "weights", "exact_degree", "domain_hash"}.
#[derive(Debug, Serialize, Deserialize)]
pub struct RuleFile {
    pub kind: RuleKind,
    pub nodes: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    pub exact_degree: i32,
    pub domain_hash: String,
}

impl RuleFile {
    pub fn from_rule(r: &QuadratureRule, domain_hash: String) -> Self {
        RuleFile {
            kind: r.kind,
            nodes: r.nodes.iter().map(|p| [p.x, p.y]).collect(),
            weights: r.weights.clone(),
            exact_degree: r.exact_degree,
            domain_hash,
        }
    }
}

/// 1-D even-quadrature file.
#[derive(Debug, Serialize, Deserialize)]
pub struct Quad1dFile {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub even_exact_degree: u32,
}

/// Contour file: plot-ready polyline data.
#[derive(Debug, Serialize, Deserialize)]
pub struct ContoursFile {
    pub level: u32,
    pub polylines: Vec<Vec<[f64; 2]>>,
}

/// Serialize any value to JSON with floats printed at 17 significant
/// digits. Output is deterministic for identical inputs.
pub fn to_json_17<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Digits17Formatter::default());
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidInput(format!("serialize: {e}")))?;
    String::from_utf8(out).map_err(|e| Error::InvalidInput(format!("utf8: {e}")))
}

#[derive(Default)]
pub struct Digits17Formatter {
    pretty_depth: usize,
}

impl serde_json::ser::Formatter for Digits17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        if value == value.trunc() && value.abs() < 1e15 {
            // integral doubles print exactly without an exponent
            write!(writer, "{:.1}", value)
        } else {
            write!(writer, "{:.16e}", value)
        }
    }

    fn begin_array<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.pretty_depth += 1;
        writer.write_all(b"[")
    }

    fn end_array<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.pretty_depth -= 1;
        writer.write_all(b"]")
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.pretty_depth += 1;
        writer.write_all(b"{")
    }

    fn end_object<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        self.pretty_depth -= 1;
        if self.pretty_depth == 0 {
            writer.write_all(b"}\n")
        } else {
            writer.write_all(b"}")
        }
    }
}
