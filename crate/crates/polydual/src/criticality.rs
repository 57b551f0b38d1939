//! The critical families of the constrained extremal problems - regular
//! stars and complete folds - together with numerical certification:
//! Lagrange residuals, projected-Hessian inertia, Morse indices, and the
//! signed 0/±1 fold Hessian pattern with its exact rank.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::geometry::{gauge_directions, CerfPoint, Functional, Polygon};
use crate::linalg;

/// Discrete class of a critical configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StarKind {
    /// Regular star with the given nonzero winding number about its center.
    Winding(i32),
    /// Degenerate star of even n whose vertices alternate between two points.
    CompleteFold,
}

impl StarKind {
    pub fn label(&self) -> String {
        match self {
            StarKind::Winding(w) => format!("w={w}"),
            StarKind::CompleteFold => "fold".to_string(),
        }
    }
}

/// Descriptor (n, class, scale) generating one critical polygon.
///
/// `scale` is the circumradius for windings and half the distance between
/// the two fold points for complete folds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarSpec {
    pub n: usize,
    pub kind: StarKind,
    pub scale: f64,
}

impl StarSpec {
    pub fn new(n: usize, kind: StarKind, scale: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSpec(format!("need n >= 3, got {n}")));
        }
        if !(scale > 0.0) {
            return Err(Error::InvalidSpec(format!("scale must be positive, got {scale}")));
        }
        match kind {
            StarKind::Winding(w) => {
                let max_w = max_winding(n);
                if w == 0 || w.unsigned_abs() as usize > max_w {
                    return Err(Error::InvalidSpec(format!(
                        "winding must satisfy 1 <= |w| <= {max_w} for n = {n}, got {w}"
                    )));
                }
            }
            StarKind::CompleteFold => {
                if n % 2 != 0 {
                    return Err(Error::OddN(n));
                }
            }
        }
        Ok(Self { n, kind, scale })
    }

    pub fn winding(n: usize, w: i32, scale: f64) -> Result<Self> {
        Self::new(n, StarKind::Winding(w), scale)
    }

    pub fn fold(n: usize, scale: f64) -> Result<Self> {
        Self::new(n, StarKind::CompleteFold, scale)
    }
}

/// Largest admissible |w| for an n-gon: floor((n-1)/2).
pub fn max_winding(n: usize) -> usize {
    (n - 1) / 2
}

/// Vertices of the star: vertex k sits at angle 2 pi w k / n on the circle
/// of radius `scale`. The complete fold is the w = n/2 instance, so its
/// vertices alternate between two antipodal points.
pub fn make_star(spec: &StarSpec) -> Polygon {
    let n = spec.n;
    let w = match spec.kind {
        StarKind::Winding(w) => f64::from(w),
        StarKind::CompleteFold => n as f64 / 2.0,
    };
    let vertices = (0..n)
        .map(|k| {
            let angle = 2.0 * PI * w * k as f64 / n as f64;
            [spec.scale * angle.cos(), spec.scale * angle.sin()]
        })
        .collect();
    Polygon::new(vertices).expect("star specs always generate valid polygons")
}

/// Perimeter of the star from the closed form 2 n r sin(pi |w| / n).
pub fn star_perimeter(spec: &StarSpec) -> f64 {
    let n = spec.n as f64;
    match spec.kind {
        StarKind::Winding(w) => 2.0 * n * spec.scale * (PI * f64::from(w.abs()) / n).sin(),
        StarKind::CompleteFold => 2.0 * n * spec.scale,
    }
}

/// Oriented area of the star from the closed form (n/2) r^2 sin(2 pi w / n).
pub fn star_area(spec: &StarSpec) -> f64 {
    let n = spec.n as f64;
    match spec.kind {
        StarKind::Winding(w) => {
            0.5 * n * spec.scale * spec.scale * (2.0 * PI * f64::from(w) / n).sin()
        }
        StarKind::CompleteFold => 0.0,
    }
}

/// Morse index of the area on the fixed-perimeter space, per class:
/// 2n - 2w - 2 for positive windings, 2|w| - 2 for negative windings,
/// n - 2 for the complete fold. Over all classes the indices exhaust
/// {0, 2, ..., 2n - 4}, each exactly once.
pub fn index_table(n: usize) -> Result<BTreeMap<StarKind, usize>> {
    if n < 3 {
        return Err(Error::InvalidSpec(format!("need n >= 3, got {n}")));
    }
    let mut table = BTreeMap::new();
    for w in 1..=max_winding(n) as i32 {
        table.insert(StarKind::Winding(w), 2 * n - 2 * w as usize - 2);
        table.insert(StarKind::Winding(-w), 2 * w as usize - 2);
    }
    if n % 2 == 0 {
        table.insert(StarKind::CompleteFold, n - 2);
    }
    Ok(table)
}

/// One critical class scaled onto the fixed-perimeter space.
#[derive(Debug, Clone, Serialize)]
pub struct CriticalClassEntry {
    pub spec: StarSpec,
    pub phi: CerfPoint,
    pub predicted_index: usize,
}

/// All n - 1 critical classes at the given perimeter, sorted by area
/// ascending. Along that order the predicted indices read 0, 2, ..., 2n-4.
pub fn enumerate_critical(n: usize, perimeter: f64) -> Result<Vec<CriticalClassEntry>> {
    if !(perimeter > 0.0) {
        return Err(Error::NonPositiveLevel(perimeter));
    }
    let table = index_table(n)?;
    let mut entries: Vec<CriticalClassEntry> = table
        .iter()
        .map(|(&kind, &predicted_index)| {
            let scale = match kind {
                StarKind::Winding(w) => {
                    perimeter / (2.0 * n as f64 * (PI * f64::from(w.abs()) / n as f64).sin())
                }
                StarKind::CompleteFold => perimeter / (2.0 * n as f64),
            };
            let spec = StarSpec::new(n, kind, scale).expect("table kinds are valid");
            let phi = CerfPoint {
                perimeter,
                area: star_area(&spec),
            };
            CriticalClassEntry {
                spec,
                phi,
                predicted_index,
            }
        })
        .collect();
    entries.sort_by(|a, b| a.phi.area.partial_cmp(&b.phi.area).unwrap());
    Ok(entries)
}

/// Outcome of one constrained-critical-point certification.
///
/// The inertia is taken on the working space: the orthogonal complement of
/// the two translations, the infinitesimal rotation, and the constraint
/// gradient, which has dimension 2n - 4.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriticalReport {
    pub residual: f64,
    pub multiplier: f64,
    #[serde(rename = "index")]
    pub morse_index: usize,
    pub nullity: usize,
    pub coindex: usize,
    #[serde(rename = "dim")]
    pub working_dimension: usize,
    /// Restricted-Hessian spectrum, ascending.
    pub eigenvalues: Vec<f64>,
    /// Whether the residual passed the criticality threshold
    /// `crit_tol * (|grad f| + |grad g|)`.
    #[serde(skip)]
    pub certified_critical: bool,
}

impl CriticalReport {
    /// Certified Morse means certified critical with trivial nullity.
    pub fn certified_morse(&self) -> bool {
        self.certified_critical && self.nullity == 0
    }
}

/// Certify `p` as a critical point of `f` restricted to a level set of `g`.
///
/// Computes the least-squares multiplier, the Lagrange residual, and the
/// inertia of the Hessian of f - lambda g restricted to the working space.
/// A residual above threshold does not error; the report comes back with
/// `certified_critical == false`.
pub fn certify_critical(
    p: &Polygon,
    f: Functional,
    g: Functional,
    tol: &Tolerances,
) -> Result<CriticalReport> {
    if f == g {
        return Err(Error::InvalidSpec(
            "objective and constraint must differ".into(),
        ));
    }
    let jet_f = f.jet(p, tol.edge_tol)?;
    let jet_g = g.jet(p, tol.edge_tol)?;

    let gg = jet_g.gradient.dot(&jet_g.gradient);
    if gg <= tol.edge_tol * tol.edge_tol {
        return Err(Error::ZeroConstraintGradient);
    }
    let multiplier = jet_f.gradient.dot(&jet_g.gradient) / gg;
    let residual = (&jet_f.gradient - &jet_g.gradient * multiplier).norm();
    let grad_scale = jet_f.gradient.norm() + jet_g.gradient.norm();

    let lagrangian_hessian = &jet_f.hessian - &jet_g.hessian * multiplier;

    let [tx, ty, rot] = gauge_directions(p);
    let span: Vec<DVector<f64>> = vec![tx, ty, rot, jet_g.gradient.clone()];
    let basis = linalg::orthonormal_complement(&span, 2 * p.n());
    let restricted = linalg::restrict_form(&lagrangian_hessian, &basis);
    let eigenvalues = linalg::jacobi_eigenvalues(&restricted);

    let rho = eigenvalues.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
    let (morse_index, nullity, coindex) = linalg::inertia(&eigenvalues, tol.eig_tol * rho);

    Ok(CriticalReport {
        residual,
        multiplier,
        morse_index,
        nullity,
        coindex,
        working_dimension: basis.ncols(),
        eigenvalues,
        certified_critical: residual <= tol.crit_tol * grad_scale,
    })
}

/// The signed 0/±1 pattern of the area Hessian at a complete fold, in the
/// edge-displacement coordinates b_1, ..., b_{n-1} (so 2(n-1) rows). The
/// 2x2 block coupling b_i to b_{i+1} is the quarter-turn J = [[0,1],[-1,0]];
/// the block below the diagonal is -J; everything else vanishes.
///
/// Serializes as a bare JSON array of integer rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldHessian {
    pub n: usize,
    pub matrix: Vec<Vec<i64>>,
}

impl Serialize for FoldHessian {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(serializer)
    }
}

/// Build the fold Hessian pattern for even n >= 4.
pub fn fold_hessian_pattern(n: usize) -> Result<FoldHessian> {
    if n % 2 != 0 {
        return Err(Error::OddN(n));
    }
    if n < 4 {
        return Err(Error::InvalidSpec(format!("need even n >= 4, got {n}")));
    }
    let blocks = n - 1;
    let dim = 2 * blocks;
    let mut matrix = vec![vec![0i64; dim]; dim];
    for i in 0..blocks - 1 {
        // block (i, i+1) = J, block (i+1, i) = -J
        matrix[2 * i][2 * (i + 1) + 1] = 1;
        matrix[2 * i + 1][2 * (i + 1)] = -1;
        matrix[2 * (i + 1)][2 * i + 1] = -1;
        matrix[2 * (i + 1) + 1][2 * i] = 1;
    }
    Ok(FoldHessian { n, matrix })
}

/// Exact rank of the pattern over the rationals. Equals 2n - 4: the two
/// missing dimensions are the rotation and dilation directions that these
/// coordinates do not factor out.
pub fn fold_hessian_rank(fold: &FoldHessian) -> usize {
    linalg::integer_rank(&fold.matrix)
}
