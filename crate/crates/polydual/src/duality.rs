//! The scaling duality between the two constrained extremal problems:
//! explicit inverse maps between fixed-area and fixed-perimeter spaces,
//! the induced level correspondence, the resulting index identities, and
//! a generic checker for mutually tangent ("kissing") hypersurfaces.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::config::{self, Tolerances};
use crate::criticality::{certify_critical, enumerate_critical, StarKind};
use crate::error::{Error, Result};
use crate::geometry::{Functional, Polygon};
use crate::linalg;
use crate::sampling;
use crate::Sign;

/// Rescale onto the fixed-perimeter space.
pub fn psi(p: &Polygon, target_perimeter: f64) -> Result<Polygon> {
    if !(target_perimeter > 0.0) {
        return Err(Error::NonPositiveLevel(target_perimeter));
    }
    p.scale(target_perimeter / p.perimeter())
}

/// Rescale onto the fixed-area space. The target must be nonzero and of
/// the same sign as the polygon's area; scaling cannot change the sign.
pub fn psi_inv(p: &Polygon, target_area: f64) -> Result<Polygon> {
    let area = p.area();
    let ratio = target_area / area;
    if area == 0.0 || !(ratio > 0.0) {
        return Err(Error::ZeroArea);
    }
    p.scale(ratio.sqrt())
}

/// Direction of the induced map between level lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// The bottom row of the duality square: perimeter levels on the fixed-area
/// space correspond to area levels on the fixed-perimeter space via
/// p -> a pi^2 / p^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelCorrespondence {
    pub perimeter: f64,
    pub area: f64,
}

impl LevelCorrespondence {
    pub fn new(perimeter: f64, area: f64) -> Result<Self> {
        if !(perimeter > 0.0) {
            return Err(Error::NonPositiveLevel(perimeter));
        }
        if area == 0.0 {
            return Err(Error::ZeroArea);
        }
        Ok(Self { perimeter, area })
    }

    /// Decreasing on the positive-area side, increasing on the negative.
    pub fn direction(&self) -> Monotonicity {
        if self.area > 0.0 {
            Monotonicity::Decreasing
        } else {
            Monotonicity::Increasing
        }
    }

    /// a pi^2 / p^2 for a perimeter level p > 0.
    pub fn level_map(&self, p: f64) -> Result<f64> {
        if !(p > 0.0) {
            return Err(Error::NonPositiveLevel(p));
        }
        Ok(self.area * self.perimeter * self.perimeter / (p * p))
    }
}

/// Sampled check that rescaling onto the fixed-perimeter space sends the
/// perimeter level of each polygon to exactly the corresponding area level.
#[derive(Debug, Clone, Serialize)]
pub struct LevelPreservationReport {
    pub n: usize,
    pub area: f64,
    pub perimeter: f64,
    pub samples: usize,
    pub max_rel_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

pub fn verify_level_preservation(
    n: usize,
    area: f64,
    perimeter: f64,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<LevelPreservationReport> {
    let corr = LevelCorrespondence::new(perimeter, area)?;
    let mut rng = sampling::seeded_rng(seed);
    let mut max_rel_deviation = 0.0f64;
    let mut done = 0;
    while done < samples {
        let mut p = sampling::random_polygon(n, &mut rng);
        if p.area().abs() < 1e-6 {
            continue;
        }
        if p.area().signum() != area.signum() {
            p = p.reflect();
        }
        let on_fixed_area = psi_inv(&p, area)?;
        let mapped = psi(&on_fixed_area, perimeter)?;
        let expected = corr.level_map(on_fixed_area.perimeter())?;
        let got = mapped.area();
        let rel = (got - expected).abs() / expected.abs().max(f64::MIN_POSITIVE);
        max_rel_deviation = max_rel_deviation.max(rel);
        done += 1;
    }
    Ok(LevelPreservationReport {
        n,
        area,
        perimeter,
        samples,
        max_rel_deviation,
        tol,
        pass: max_rel_deviation <= tol,
    })
}

/// Indices of one winding class on both sides of the duality.
///
/// `index_fixed_perimeter` is the Morse index of the area on the
/// fixed-perimeter space (M); `index_fixed_area` is the Morse index of the
/// perimeter on the fixed-area space (m).
#[derive(Debug, Clone, Serialize)]
pub struct DualIndexEntry {
    pub winding: i32,
    pub index_fixed_area: usize,
    pub index_fixed_perimeter: usize,
    pub residual_fixed_area: f64,
    pub residual_fixed_perimeter: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DualIndexReport {
    pub n: usize,
    pub sign: Sign,
    pub entries: Vec<DualIndexEntry>,
    /// m + M = 2n - 4 on the positive side, m = M on the negative side.
    pub identity_holds: bool,
    /// Every sampled star's area sign matched the requested side.
    pub sign_check: bool,
}

impl DualIndexReport {
    /// `w,m,M,residual_m,residual_M` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("w,m,M,residual_m,residual_M\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{:e},{:e}\n",
                e.winding,
                e.index_fixed_area,
                e.index_fixed_perimeter,
                e.residual_fixed_area,
                e.residual_fixed_perimeter
            ));
        }
        out
    }
}

/// Certify every star of the given winding sign both ways and check the
/// index identity: indices come from inertia counts, never from formulas.
pub fn dual_index_check(n: usize, sign: Sign, tol: &Tolerances) -> Result<DualIndexReport> {
    let mut entries = Vec::new();
    let mut identity_holds = true;
    let mut sign_check = true;
    for entry in enumerate_critical(n, 1.0)? {
        let StarKind::Winding(w) = entry.spec.kind else {
            continue;
        };
        if (w > 0) != (sign == Sign::Positive) {
            continue;
        }
        sign_check &= entry.phi.area.signum() == sign.as_f64().signum();
        let star = crate::criticality::make_star(&entry.spec);
        let on_perimeter =
            certify_critical(&star, Functional::Area, Functional::Perimeter, tol)?;
        let on_area = certify_critical(&star, Functional::Perimeter, Functional::Area, tol)?;
        let (m, m_cap) = (on_area.morse_index, on_perimeter.morse_index);
        identity_holds &= match sign {
            Sign::Positive => m + m_cap == 2 * n - 4,
            Sign::Negative => m == m_cap,
        };
        identity_holds &= on_area.certified_morse() && on_perimeter.certified_morse();
        entries.push(DualIndexEntry {
            winding: w,
            index_fixed_area: m,
            index_fixed_perimeter: m_cap,
            residual_fixed_area: on_area.residual,
            residual_fixed_perimeter: on_perimeter.residual,
        });
    }
    Ok(DualIndexReport {
        n,
        sign,
        entries,
        identity_holds,
        sign_check,
    })
}

/// A twice-differentiable scalar field given by an evaluator, with an
/// optional analytic jet as a fast path. Without one, gradients use
/// central differences with step 1e-6 and Hessians with step 1e-4.
pub struct ScalarField<'a> {
    value: &'a dyn Fn(&[f64]) -> f64,
    jet: Option<&'a JetFn>,
}

/// Analytic (gradient, Hessian) evaluator.
pub type JetFn = dyn Fn(&[f64]) -> (DVector<f64>, DMatrix<f64>);

const FD_GRAD_STEP: f64 = 1e-6;
const FD_HESS_STEP: f64 = 1e-4;

impl<'a> ScalarField<'a> {
    pub fn from_value(value: &'a dyn Fn(&[f64]) -> f64) -> Self {
        Self { value, jet: None }
    }

    pub fn with_jet(value: &'a dyn Fn(&[f64]) -> f64, jet: &'a JetFn) -> Self {
        Self {
            value,
            jet: Some(jet),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    fn gradient(&self, x: &[f64]) -> DVector<f64> {
        if let Some(jet) = self.jet {
            return jet(x).0;
        }
        let dim = x.len();
        let mut g = DVector::zeros(dim);
        let mut probe = x.to_vec();
        for k in 0..dim {
            probe[k] = x[k] + FD_GRAD_STEP;
            let plus = (self.value)(&probe);
            probe[k] = x[k] - FD_GRAD_STEP;
            let minus = (self.value)(&probe);
            probe[k] = x[k];
            g[k] = (plus - minus) / (2.0 * FD_GRAD_STEP);
        }
        g
    }

    fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        if let Some(jet) = self.jet {
            return jet(x).1;
        }
        let dim = x.len();
        let h = FD_HESS_STEP;
        let mut hess = DMatrix::zeros(dim, dim);
        let mut probe = x.to_vec();
        let eval = |probe: &mut Vec<f64>, i: usize, j: usize, si: f64, sj: f64| {
            probe[i] += si * h;
            probe[j] += sj * h;
            let v = (self.value)(probe);
            probe[i] = x[i];
            probe[j] = x[j];
            v
        };
        for i in 0..dim {
            for j in i..dim {
                let pp = eval(&mut probe, i, j, 1.0, 1.0);
                let pm = eval(&mut probe, i, j, 1.0, -1.0);
                let mp = eval(&mut probe, i, j, -1.0, 1.0);
                let mm = eval(&mut probe, i, j, -1.0, -1.0);
                let v = (pp - pm - mp + mm) / (4.0 * h * h);
                hess[(i, j)] = v;
                hess[(j, i)] = v;
            }
        }
        hess
    }
}

/// Mutual restricted Morse indices of two hypersurfaces tangent at `x0`.
#[derive(Debug, Clone, Serialize)]
pub struct KissingReport {
    /// Index of f restricted to {g = 0} (called M).
    pub index_f_on_g: usize,
    /// Index of g restricted to {f = 0} (called m).
    pub index_g_on_f: usize,
    pub codirected: bool,
}

/// Compute both restricted indices at a tangency of {f = 0} and {g = 0}.
///
/// Preconditions checked here: both values vanish at `x0` (to `tol`), both
/// gradients are nonzero and parallel (to `tol`), and both restricted
/// Hessians are nondegenerate. `gauge` lists extra null directions to
/// project out first (empty for generic fields; the isometry directions
/// for polygon functionals). The caller owns the identity to assert:
/// indices sum to the working dimension when codirected, agree otherwise.
pub fn kissing_index_check(
    f: &ScalarField,
    g: &ScalarField,
    x0: &[f64],
    gauge: &[DVector<f64>],
    tol: f64,
) -> Result<KissingReport> {
    let fv = f.value(x0);
    let gv = g.value(x0);
    if fv.abs() > tol || gv.abs() > tol {
        return Err(Error::NotTangent(format!(
            "levels do not vanish at the base point: f = {fv:.3e}, g = {gv:.3e}"
        )));
    }
    let grad_f = f.gradient(x0);
    let grad_g = g.gradient(x0);
    let (nf, ng) = (grad_f.norm(), grad_g.norm());
    if nf <= tol || ng <= tol {
        return Err(Error::NotTangent("a gradient vanishes".into()));
    }
    let uf = &grad_f / nf;
    let ug = &grad_g / ng;
    let cos = uf.dot(&ug);
    let transverse = (&uf - &ug * cos).norm();
    if transverse > tol {
        return Err(Error::NotTangent(format!(
            "gradients are not parallel (transverse component {transverse:.3e})"
        )));
    }

    let index_f_on_g = restricted_index(f, g, &grad_f, &grad_g, x0, gauge)?;
    let index_g_on_f = restricted_index(g, f, &grad_g, &grad_f, x0, gauge)?;
    Ok(KissingReport {
        index_f_on_g,
        index_g_on_f,
        codirected: cos > 0.0,
    })
}

fn restricted_index(
    objective: &ScalarField,
    constraint: &ScalarField,
    grad_obj: &DVector<f64>,
    grad_con: &DVector<f64>,
    x0: &[f64],
    gauge: &[DVector<f64>],
) -> Result<usize> {
    let multiplier = grad_obj.dot(grad_con) / grad_con.dot(grad_con);
    let lagrangian = objective.hessian(x0) - constraint.hessian(x0) * multiplier;
    let mut span: Vec<DVector<f64>> = gauge.to_vec();
    span.push(grad_con.clone());
    let basis = linalg::orthonormal_complement(&span, x0.len());
    let eigs = linalg::jacobi_eigenvalues(&linalg::restrict_form(&lagrangian, &basis));
    let rho = eigs.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
    let (neg, zero, _) = linalg::inertia(&eigs, config::EIG_TOL * rho);
    if zero > 0 {
        return Err(Error::DegenerateRestriction(zero));
    }
    Ok(neg)
}
