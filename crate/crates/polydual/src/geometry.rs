//! Polygons and the two functionals that drive everything else:
//! oriented area and perimeter, together with their exact first and
//! second derivatives, the isometry actions, and canonical forms.
//!
//! A polygon is an ordered tuple of planar points; vertices may coincide
//! (though not all of them), edges may cross. Nothing here quotients by
//! isometries: equality modulo orientation-preserving isometry is tested
//! by comparing [`Polygon::canonical_form`] outputs instead.

use nalgebra::{DMatrix, DVector, Vector2};
use serde::{Deserialize, Serialize};

use crate::config;
use crate::error::{Error, Result};

/// An ordered list of n >= 3 planar vertices with positive perimeter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolygonRepr", into = "PolygonRepr")]
pub struct Polygon {
    vertices: Vec<[f64; 2]>,
}

/// Wire shape: `{"n": 4, "vertices": [[x, y], ...]}`.
#[derive(Serialize, Deserialize)]
struct PolygonRepr {
    n: usize,
    vertices: Vec<[f64; 2]>,
}

impl From<Polygon> for PolygonRepr {
    fn from(p: Polygon) -> Self {
        PolygonRepr {
            n: p.vertices.len(),
            vertices: p.vertices,
        }
    }
}

impl TryFrom<PolygonRepr> for Polygon {
    type Error = Error;

    fn try_from(repr: PolygonRepr) -> Result<Self> {
        if repr.n != repr.vertices.len() {
            return Err(Error::Parse(format!(
                "declared n = {} but {} vertices given",
                repr.n,
                repr.vertices.len()
            )));
        }
        Polygon::new(repr.vertices)
    }
}

/// The pair (perimeter, oriented area) of a polygon: one point of the
/// half-plane the joint map lands in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CerfPoint {
    pub perimeter: f64,
    pub area: f64,
}

impl CerfPoint {
    pub fn new(perimeter: f64, area: f64) -> Result<Self> {
        if !(perimeter > 0.0) {
            return Err(Error::NonPositiveLevel(perimeter));
        }
        Ok(Self { perimeter, area })
    }

    /// The scale-invariant ratio a / pi^2 that indexes discriminant curves.
    pub fn ratio(&self) -> f64 {
        self.area / (self.perimeter * self.perimeter)
    }
}

/// Value, gradient, and Hessian of one functional at one polygon,
/// in flat coordinates (x_0, y_0, x_1, y_1, ...).
#[derive(Debug, Clone)]
pub struct JetReport {
    pub value: f64,
    pub gradient: DVector<f64>,
    pub hessian: DMatrix<f64>,
}

/// Tag selecting one of the two functionals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Functional {
    Area,
    Perimeter,
}

impl Functional {
    pub fn name(&self) -> &'static str {
        match self {
            Functional::Area => "area",
            Functional::Perimeter => "perimeter",
        }
    }

    pub fn value(&self, p: &Polygon) -> f64 {
        match self {
            Functional::Area => p.area(),
            Functional::Perimeter => p.perimeter(),
        }
    }

    pub fn jet(&self, p: &Polygon, edge_tol: f64) -> Result<JetReport> {
        match self {
            Functional::Area => Ok(p.jet_area()),
            Functional::Perimeter => p.jet_perimeter(edge_tol),
        }
    }
}

impl Polygon {
    /// Validates n >= 3 and that not all vertices coincide.
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::TooFewVertices(vertices.len()));
        }
        let p0 = vertices[0];
        if vertices.iter().all(|v| v[0] == p0[0] && v[1] == p0[1]) {
            return Err(Error::ZeroPerimeter);
        }
        Ok(Self { vertices })
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Vector2<f64> {
        let [x, y] = self.vertices[i % self.n()];
        Vector2::new(x, y)
    }

    /// Flat coordinate vector (x_0, y_0, ..., x_{n-1}, y_{n-1}).
    pub fn to_flat(&self) -> DVector<f64> {
        DVector::from_iterator(2 * self.n(), self.vertices.iter().flatten().copied())
    }

    pub fn from_flat(coords: &[f64]) -> Result<Self> {
        if coords.len() % 2 != 0 {
            return Err(Error::Parse("odd number of flat coordinates".into()));
        }
        Self::new(coords.chunks_exact(2).map(|c| [c[0], c[1]]).collect())
    }

    /// Oriented (signed) area by the shoelace sum; negative for clockwise
    /// traversal, zero when the signed contributions cancel.
    pub fn area(&self) -> f64 {
        let n = self.n();
        let mut twice = 0.0;
        for i in 0..n {
            let [xi, yi] = self.vertices[i];
            let [xj, yj] = self.vertices[(i + 1) % n];
            twice += xi * yj - xj * yi;
        }
        0.5 * twice
    }

    /// Sum of edge lengths, cyclically.
    pub fn perimeter(&self) -> f64 {
        let n = self.n();
        (0..n)
            .map(|i| (self.vertex(i + 1) - self.vertex(i)).norm())
            .sum()
    }

    /// The joint map: both functionals at once.
    pub fn phi(&self) -> CerfPoint {
        CerfPoint {
            perimeter: self.perimeter(),
            area: self.area(),
        }
    }

    /// Length of the shortest edge; 0 for coinciding consecutive vertices.
    pub fn min_edge_length(&self) -> f64 {
        let n = self.n();
        (0..n)
            .map(|i| (self.vertex(i + 1) - self.vertex(i)).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Exact gradient and Hessian of the oriented area.
    ///
    /// The gradient at vertex i is (y_{i+1} - y_{i-1}, x_{i-1} - x_{i+1}) / 2;
    /// the Hessian is the constant matrix coupling x_i with y_{i +/- 1}.
    pub fn jet_area(&self) -> JetReport {
        let n = self.n();
        let mut grad = DVector::zeros(2 * n);
        let mut hess = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            let prev = (i + n - 1) % n;
            let next = (i + 1) % n;
            grad[2 * i] = 0.5 * (self.vertices[next][1] - self.vertices[prev][1]);
            grad[2 * i + 1] = 0.5 * (self.vertices[prev][0] - self.vertices[next][0]);
            // d^2 A / dx_i dy_{i+1} = 1/2, d^2 A / dx_i dy_{i-1} = -1/2
            hess[(2 * i, 2 * next + 1)] += 0.5;
            hess[(2 * next + 1, 2 * i)] += 0.5;
            hess[(2 * i, 2 * prev + 1)] -= 0.5;
            hess[(2 * prev + 1, 2 * i)] -= 0.5;
        }
        JetReport {
            value: self.area(),
            gradient: grad,
            hessian: hess,
        }
    }

    /// Exact gradient and Hessian of the perimeter.
    ///
    /// Refuses to differentiate within `edge_tol` of a degenerate edge:
    /// the gradient at vertex i is u_{i-1} - u_i with u_k the unit vector
    /// along edge k, and each edge contributes (I - u u^T)/len blocks to
    /// the Hessian.
    pub fn jet_perimeter(&self, edge_tol: f64) -> Result<JetReport> {
        let n = self.n();
        let mut units = Vec::with_capacity(n);
        let mut lengths = Vec::with_capacity(n);
        for i in 0..n {
            let d = self.vertex(i + 1) - self.vertex(i);
            let len = d.norm();
            if len < edge_tol {
                return Err(Error::DegenerateEdge {
                    edge: i,
                    length: len,
                    tol: edge_tol,
                });
            }
            units.push(d / len);
            lengths.push(len);
        }

        let mut grad = DVector::zeros(2 * n);
        for i in 0..n {
            let prev = (i + n - 1) % n;
            let g = units[prev] - units[i];
            grad[2 * i] = g.x;
            grad[2 * i + 1] = g.y;
        }

        let mut hess = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            let j = (i + 1) % n;
            let u = units[i];
            // Hessian of |p_j - p_i| in the 2x2 block sense.
            let m = [
                [(1.0 - u.x * u.x) / lengths[i], (-u.x * u.y) / lengths[i]],
                [(-u.x * u.y) / lengths[i], (1.0 - u.y * u.y) / lengths[i]],
            ];
            for a in 0..2 {
                for b in 0..2 {
                    hess[(2 * i + a, 2 * i + b)] += m[a][b];
                    hess[(2 * j + a, 2 * j + b)] += m[a][b];
                    hess[(2 * i + a, 2 * j + b)] -= m[a][b];
                    hess[(2 * j + a, 2 * i + b)] -= m[a][b];
                }
            }
        }

        Ok(JetReport {
            value: lengths.iter().sum(),
            gradient: grad,
            hessian: hess,
        })
    }

    /// Rotate every vertex by `angle` about the origin, then translate.
    /// Leaves both functionals unchanged.
    pub fn isometry_apply(&self, angle: f64, translation: [f64; 2]) -> Polygon {
        let (s, c) = angle.sin_cos();
        let vertices = self
            .vertices
            .iter()
            .map(|&[x, y]| [c * x - s * y + translation[0], s * x + c * y + translation[1]])
            .collect();
        Polygon { vertices }
    }

    /// Reflect across the x-axis: preserves perimeter, negates area.
    pub fn reflect(&self) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|&[x, y]| [x, -y]).collect(),
        }
    }

    /// Rotate the vertex labels: (p_1, ..., p_n) -> (p_2, ..., p_n, p_1).
    pub fn cyclic_shift(&self) -> Polygon {
        let mut vertices = self.vertices.clone();
        vertices.rotate_left(1);
        Polygon { vertices }
    }

    /// Dilate by `factor > 0`; perimeter scales linearly, area quadratically.
    pub fn scale(&self, factor: f64) -> Result<Polygon> {
        if !(factor > 0.0) {
            return Err(Error::NonPositiveScale(factor));
        }
        Ok(Polygon {
            vertices: self
                .vertices
                .iter()
                .map(|&[x, y]| [factor * x, factor * y])
                .collect(),
        })
    }

    pub fn centroid(&self) -> Vector2<f64> {
        let n = self.n() as f64;
        let mut c = Vector2::zeros();
        for i in 0..self.n() {
            c += self.vertex(i);
        }
        c / n
    }

    /// Representative of the orbit under orientation-preserving isometries:
    /// centroid at the origin, first vertex of norm above `EDGE_TOL` on the
    /// positive x-axis. Two polygons differ by such an isometry exactly when
    /// their canonical forms agree entrywise.
    pub fn canonical_form(&self) -> Result<Polygon> {
        let c = self.centroid();
        let centered: Vec<Vector2<f64>> = (0..self.n()).map(|i| self.vertex(i) - c).collect();
        let anchor = centered
            .iter()
            .find(|v| v.norm() > config::EDGE_TOL)
            .ok_or(Error::Unnormalizable)?;
        let angle = anchor.y.atan2(anchor.x);
        let (s, co) = (-angle).sin_cos();
        Ok(Polygon {
            vertices: centered
                .iter()
                .map(|v| [co * v.x - s * v.y, s * v.x + co * v.y])
                .collect(),
        })
    }

    /// Entrywise comparison with absolute tolerance.
    pub fn approx_eq(&self, other: &Polygon, tol: f64) -> bool {
        self.n() == other.n()
            && self
                .vertices
                .iter()
                .zip(&other.vertices)
                .all(|(a, b)| (a[0] - b[0]).abs() <= tol && (a[1] - b[1]).abs() <= tol)
    }

    /// One `x,y` line per vertex.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for [x, y] in &self.vertices {
            out.push_str(&format!("{x},{y}\n"));
        }
        out
    }

    pub fn from_csv(body: &str) -> Result<Polygon> {
        let mut vertices = Vec::new();
        for line in body.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (x, y) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected 'x,y', got '{line}'")))?;
            let parse = |s: &str| -> Result<f64> {
                s.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coordinate '{s}'")))
            };
            vertices.push([parse(x)?, parse(y)?]);
        }
        Polygon::new(vertices)
    }
}

/// Gauge directions at a polygon: the two translations and the
/// infinitesimal rotation about the origin, in flat coordinates.
/// Both functionals are invariant along all three.
pub fn gauge_directions(p: &Polygon) -> [DVector<f64>; 3] {
    let n = p.n();
    let mut tx = DVector::zeros(2 * n);
    let mut ty = DVector::zeros(2 * n);
    let mut rot = DVector::zeros(2 * n);
    for i in 0..n {
        tx[2 * i] = 1.0;
        ty[2 * i + 1] = 1.0;
        rot[2 * i] = -p.vertices()[i][1];
        rot[2 * i + 1] = p.vertices()[i][0];
    }
    [tx, ty, rot]
}
