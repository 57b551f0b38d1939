//! The Cerf diagram of the joint map: discriminant parabolas a = c_i pi^2
//! in the (perimeter, area) half-plane, the open chambers between them,
//! and classification of arbitrary points.
//!
//! Each critical scaling family traces one parabola; its constant c_i is
//! the scale-invariant ratio area / perimeter^2 of the family. Sorting the
//! curves by c reproduces the Morse-index order, so the chamber between
//! the curves of indices i - 1 and i + 1 carries the odd label i.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::criticality::{index_table, StarKind};
use crate::error::{Error, Result};
use crate::geometry::CerfPoint;

/// One discriminant parabola {(pi, c pi^2) : pi > 0}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscriminantCurve {
    pub morse_index: usize,
    pub c: f64,
    pub source: StarKind,
}

/// Stratum of a point in the half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    /// Outside the image of the joint map.
    Outside,
    /// On the discriminant curve with the given Morse index (even).
    Curve(usize),
    /// In the open chamber with the given odd label.
    Chamber(usize),
}

impl RegionLabel {
    pub fn label(&self) -> String {
        match self {
            RegionLabel::Outside => "outside".to_string(),
            RegionLabel::Curve(i) => format!("D{i}"),
            RegionLabel::Chamber(i) => format!("W{i}"),
        }
    }

    /// Parse "W3", "D4", "fold" (case-insensitive); "fold" needs n to
    /// resolve to its curve index n - 2.
    pub fn parse(text: &str, n: usize) -> Result<RegionLabel> {
        let t = text.trim().to_ascii_lowercase();
        let invalid = |reason: String| Error::InvalidLabel { n, reason };
        if t == "fold" {
            if n % 2 != 0 {
                return Err(invalid("complete folds exist for even n only".into()));
            }
            return Ok(RegionLabel::Curve(n - 2));
        }
        if t == "outside" {
            return Ok(RegionLabel::Outside);
        }
        let (head, tail) = t.split_at(1);
        let idx: usize = tail
            .parse()
            .map_err(|_| invalid(format!("cannot parse index in '{text}'")))?;
        match head {
            "w" => {
                if idx % 2 == 1 && idx <= 2 * n - 5 {
                    Ok(RegionLabel::Chamber(idx))
                } else {
                    Err(invalid(format!(
                        "chamber labels are odd integers in [1, {}]",
                        2 * n - 5
                    )))
                }
            }
            "d" => {
                if idx % 2 == 0 && idx <= 2 * n - 4 {
                    Ok(RegionLabel::Curve(idx))
                } else {
                    Err(invalid(format!(
                        "curve labels are even integers in [0, {}]",
                        2 * n - 4
                    )))
                }
            }
            _ => Err(invalid(format!("expected W<odd>, D<even>, or fold, got '{text}'"))),
        }
    }
}

/// Discriminant constant of a winding class:
/// c(w) = sin(2 pi w / n) / (8 n sin^2(pi |w| / n)); the fold sits at c = 0.
pub fn discriminant_constant(n: usize, kind: StarKind) -> f64 {
    match kind {
        StarKind::Winding(w) => {
            let nf = n as f64;
            let s = (PI * f64::from(w.abs()) / nf).sin();
            (2.0 * PI * f64::from(w) / nf).sin() / (8.0 * nf * s * s)
        }
        StarKind::CompleteFold => 0.0,
    }
}

/// All discriminant curves for an n-gon, sorted by c ascending; along that
/// order the Morse indices read 0, 2, ..., 2n - 4.
pub fn discriminant_constants(n: usize) -> Result<Vec<DiscriminantCurve>> {
    let table = index_table(n)?;
    let mut curves: Vec<DiscriminantCurve> = table
        .iter()
        .map(|(&kind, &morse_index)| DiscriminantCurve {
            morse_index,
            c: discriminant_constant(n, kind),
            source: kind,
        })
        .collect();
    curves.sort_by(|a, b| a.c.partial_cmp(&b.c).unwrap());
    Ok(curves)
}

/// Locate a point of the half-plane: on a curve (within `curve_tol` on the
/// ratio a / pi^2), in a chamber, or outside the image entirely.
pub fn classify(n: usize, point: &CerfPoint, curve_tol: f64) -> Result<RegionLabel> {
    if !(point.perimeter > 0.0) {
        return Err(Error::NonPositiveLevel(point.perimeter));
    }
    let curves = discriminant_constants(n)?;
    let c = point.ratio();

    let nearest = curves
        .iter()
        .min_by(|a, b| {
            let da = (a.c - c).abs();
            let db = (b.c - c).abs();
            da.partial_cmp(&db).unwrap()
        })
        .expect("at least two curves for n >= 3");
    if (nearest.c - c).abs() <= curve_tol {
        return Ok(RegionLabel::Curve(nearest.morse_index));
    }

    if c < curves.first().unwrap().c || c > curves.last().unwrap().c {
        return Ok(RegionLabel::Outside);
    }
    let below = curves
        .iter()
        .rfind(|curve| curve.c < c)
        .expect("interior point has a curve below");
    Ok(RegionLabel::Chamber(below.morse_index + 1))
}

/// Renderable model of the stratified half-plane over a perimeter window.
#[derive(Debug, Clone, Serialize)]
pub struct CerfDiagram {
    pub n: usize,
    pub pi_min: f64,
    pub pi_max: f64,
    pub curves: Vec<CurveModel>,
    pub chambers: Vec<ChamberBand>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveModel {
    pub index: usize,
    pub c: f64,
}

/// Chamber as the band of ratios between two consecutive curves.
#[derive(Debug, Clone, Serialize)]
pub struct ChamberBand {
    pub label: usize,
    pub c_low: f64,
    pub c_high: f64,
}

pub fn cerf_diagram(n: usize, pi_range: (f64, f64)) -> Result<CerfDiagram> {
    let (pi_min, pi_max) = pi_range;
    if !(pi_min > 0.0 && pi_max > pi_min) {
        return Err(Error::Parse(format!(
            "need 0 < pi_min < pi_max, got ({pi_min}, {pi_max})"
        )));
    }
    let constants = discriminant_constants(n)?;
    let curves: Vec<CurveModel> = constants
        .iter()
        .map(|d| CurveModel {
            index: d.morse_index,
            c: d.c,
        })
        .collect();
    let chambers: Vec<ChamberBand> = constants
        .windows(2)
        .map(|pair| ChamberBand {
            label: pair[0].morse_index + 1,
            c_low: pair[0].c,
            c_high: pair[1].c,
        })
        .collect();
    Ok(CerfDiagram {
        n,
        pi_min,
        pi_max,
        curves,
        chambers,
    })
}
