//! Acceptance suite: one test per release criterion, each printing a
//! PASS line on success. Run with `cargo test --test acceptance`.

use std::collections::BTreeMap;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::Rng;

use polydual::cli::run_capture;
use polydual::config::Tolerances;
use polydual::criticality::{
    certify_critical, enumerate_critical, fold_hessian_pattern, fold_hessian_rank, index_table,
    make_star, StarKind, StarSpec,
};
use polydual::duality::{
    dual_index_check, kissing_index_check, verify_level_preservation, ScalarField,
};
use polydual::geometry::Functional;
use polydual::report::run_report;
use polydual::sampling;
use polydual::stratification::{discriminant_constant, RegionLabel};
use polydual::topology::{
    ab_descriptors, all_labels, c_zero_area_betti, euler_characteristic, homology_closed_form,
    mv_solve, poincare_check,
};
use polydual::Sign;

fn ranks_of(v: &serde_json::Value) -> BTreeMap<usize, usize> {
    v["ranks"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, r)| (k.parse().unwrap(), r.as_u64().unwrap() as usize))
        .collect()
}

#[test]
fn criterion_01_reference_tables_reproduce() {
    let start = Instant::now();

    let (code, out) = run_capture(["polydual", "homology", "--n", "7", "--region", "W3", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["agree"], true);
    let expected: BTreeMap<usize, usize> = [(0, 1), (2, 1), (7, 1), (9, 1)].into();
    assert_eq!(ranks_of(&v["closed_form"]), expected);
    assert_eq!(ranks_of(&v["mayer_vietoris"]), expected);

    let (code, out) = run_capture([
        "polydual", "homology", "--n", "6", "--pi", "1", "--area", "0", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["label"], "D4");
    assert_eq!(v["agree"], true);
    let expected: BTreeMap<usize, usize> = [(0, 1), (2, 1), (4, 1), (5, 1), (7, 1)].into();
    assert_eq!(ranks_of(&v["closed_form"]), expected);
    assert_eq!(ranks_of(&v["mayer_vietoris"]), expected);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("ACCEPTANCE 1 (reference-table reproduction): PASS in {elapsed:?}");
}

#[test]
fn criterion_02_oracle_equivalence_all_labels() {
    let start = Instant::now();
    let mut compared = 0;
    for n in 3..=12 {
        for label in all_labels(n) {
            let (a, b, u) = ab_descriptors(n, &label).unwrap();
            let mv = mv_solve(&a, &b, &u).unwrap();
            let closed = homology_closed_form(n, &label).unwrap();
            assert_eq!(mv, closed, "n={n} {label:?}");
            compared += 1;
        }
        // the zero-area fiber routes through D_{n-2} or W_{n-2}
        let zero = c_zero_area_betti(n).unwrap();
        let label = if n % 2 == 0 {
            RegionLabel::Curve(n - 2)
        } else {
            RegionLabel::Chamber(n - 2)
        };
        assert_eq!(zero, homology_closed_form(n, &label).unwrap());
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("ACCEPTANCE 2 (oracle equivalence, {compared} labels): PASS in {elapsed:?}");
}

#[test]
fn criterion_03_critical_certification() {
    let start = Instant::now();
    let tol = Tolerances::default();
    for n in 3..=12 {
        let table = index_table(n).unwrap();
        assert_eq!(table.len(), n - 1);
        let mut certified = Vec::new();
        for (&kind, &expected_index) in &table {
            let star = make_star(&StarSpec::new(n, kind, 1.0).unwrap());
            let report =
                certify_critical(&star, Functional::Area, Functional::Perimeter, &tol).unwrap();
            let grad_scale = star.jet_area().gradient.norm()
                + star.jet_perimeter(tol.edge_tol).unwrap().gradient.norm();
            assert!(
                report.residual <= 1e-9 * grad_scale,
                "n={n} {kind:?} residual {}",
                report.residual
            );
            assert_eq!(report.nullity, 0, "n={n} {kind:?}");
            assert_eq!(report.working_dimension, 2 * n - 4);
            assert_eq!(report.morse_index, expected_index, "n={n} {kind:?}");
            // the implemented index table: 2n-2w-2, n-2, and 2|w|-2
            let formula = match kind {
                StarKind::Winding(w) if w > 0 => 2 * n - 2 * w as usize - 2,
                StarKind::Winding(w) => 2 * w.unsigned_abs() as usize - 2,
                StarKind::CompleteFold => n - 2,
            };
            assert_eq!(report.morse_index, formula);
            certified.push(report.morse_index);
        }
        certified.sort_unstable();
        let expected: Vec<usize> = (0..=(2 * n - 4)).step_by(2).collect();
        assert_eq!(certified, expected, "n={n}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("ACCEPTANCE 3 (critical certification, n = 3..12): PASS in {elapsed:?}");
}

#[test]
fn criterion_04_critical_values_ordered_by_index() {
    let tol = Tolerances::default();
    for n in 3..=12 {
        let entries = enumerate_critical(n, 1.0).unwrap();
        let mut previous: Option<(f64, usize)> = None;
        for entry in &entries {
            let star = make_star(&entry.spec);
            let report =
                certify_critical(&star, Functional::Area, Functional::Perimeter, &tol).unwrap();
            if let Some((prev_area, prev_index)) = previous {
                assert!(
                    entry.phi.area - prev_area > 1e-12,
                    "n={n}: areas too close"
                );
                assert!(report.morse_index > prev_index, "n={n}: index order broken");
            }
            previous = Some((entry.phi.area, report.morse_index));
        }
    }
    println!("ACCEPTANCE 4 (critical values ordered by Morse index): PASS");
}

#[test]
fn criterion_05_fold_hessian_pattern_and_rank() {
    let start = Instant::now();
    let printed: Vec<Vec<i64>> = vec![
        vec![0, 0, 0, 1, 0, 0, 0, 0, 0, 0],
        vec![0, 0, -1, 0, 0, 0, 0, 0, 0, 0],
        vec![0, -1, 0, 0, 0, 1, 0, 0, 0, 0],
        vec![1, 0, 0, 0, -1, 0, 0, 0, 0, 0],
        vec![0, 0, 0, -1, 0, 0, 0, 1, 0, 0],
        vec![0, 0, 1, 0, 0, 0, -1, 0, 0, 0],
        vec![0, 0, 0, 0, 0, -1, 0, 0, 0, 1],
        vec![0, 0, 0, 0, 1, 0, 0, 0, -1, 0],
        vec![0, 0, 0, 0, 0, 0, 0, -1, 0, 0],
        vec![0, 0, 0, 0, 0, 0, 1, 0, 0, 0],
    ];
    assert_eq!(fold_hessian_pattern(6).unwrap().matrix, printed);
    for n in [4usize, 6, 8, 10, 12] {
        let fold = fold_hessian_pattern(n).unwrap();
        assert_eq!(fold_hessian_rank(&fold), 2 * n - 4, "n={n}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("ACCEPTANCE 5 (fold Hessian pattern and exact rank): PASS in {elapsed:?}");
}

#[test]
fn criterion_06_duality_identities() {
    let tol = Tolerances::default();
    for n in 3..=12 {
        for sign in [Sign::Positive, Sign::Negative] {
            let report = dual_index_check(n, sign, &tol).unwrap();
            assert!(report.identity_holds, "n={n} {sign:?}");
            assert!(report.sign_check, "n={n} {sign:?}");
            assert_eq!(report.entries.len(), (n - 1) / 2);
            for e in &report.entries {
                match sign {
                    Sign::Positive => assert_eq!(
                        e.index_fixed_area + e.index_fixed_perimeter,
                        2 * n - 4,
                        "n={n} w={}",
                        e.winding
                    ),
                    Sign::Negative => assert_eq!(
                        e.index_fixed_area, e.index_fixed_perimeter,
                        "n={n} w={}",
                        e.winding
                    ),
                }
            }
        }
    }
    println!("ACCEPTANCE 6 (index duality m + M = 2n - 4 / m = M): PASS");
}

#[test]
fn criterion_07_level_preservation() {
    for n in [4usize, 5, 7] {
        for area in [1.0, -1.0] {
            let report = verify_level_preservation(n, area, 1.0, 500, 1e-12, 1000 + n as u64)
                .unwrap();
            assert!(
                report.pass,
                "n={n} a={area}: max deviation {:e}",
                report.max_rel_deviation
            );
        }
    }
    println!("ACCEPTANCE 7 (level preservation to 1e-12 over 500 samples): PASS");
}

/// Tangent quadratic pair at the origin of R^{n+1} with parallel gradients;
/// rebuilt here independently of the library's own test helpers.
fn random_tangent_pair(
    n: usize,
    rng: &mut impl Rng,
) -> (Vec<Vec<f64>>, Vec<Vec<f64>>, f64, f64) {
    loop {
        let alpha: f64 = if rng.gen_bool(0.5) { 1.0 } else { -1.0 } * rng.gen_range(0.5..2.0);
        let beta: f64 = if rng.gen_bool(0.5) { 1.0 } else { -1.0 } * rng.gen_range(0.5..2.0);
        let mut qf = vec![vec![0.0f64; n]; n];
        let mut qg = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            for j in i..n {
                let a = rng.gen_range(-1.0..1.0);
                let b = rng.gen_range(-1.0..1.0);
                qf[i][j] = a;
                qf[j][i] = a;
                qg[i][j] = b;
                qg[j][i] = b;
            }
        }
        let mixed = DMatrix::from_fn(n, n, |i, j| qg[i][j] - (beta / alpha) * qf[i][j]);
        let eigs = polydual::linalg::jacobi_eigenvalues(&mixed);
        let rho = eigs.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
        if eigs.iter().all(|e| e.abs() > 1e-3 * rho.max(1e-12)) {
            return (qf, qg, alpha, beta);
        }
    }
}

#[test]
fn criterion_08_kissing_surfaces_identity() {
    let mut rng = sampling::seeded_rng(2024);
    let mut checked = 0;
    while checked < 50 {
        let n = rng.gen_range(2..=6);
        let (qf, qg, alpha, beta) = random_tangent_pair(n, &mut rng);
        let quad = |q: &Vec<Vec<f64>>, x: &[f64]| -> f64 {
            let mut s = 0.0;
            for i in 0..q.len() {
                for j in 0..q.len() {
                    s += q[i][j] * x[i] * x[j];
                }
            }
            s
        };
        let f = |x: &[f64]| alpha * x[x.len() - 1] + quad(&qf, &x[..x.len() - 1]);
        let g = |x: &[f64]| beta * x[x.len() - 1] + quad(&qg, &x[..x.len() - 1]);
        let report = kissing_index_check(
            &ScalarField::from_value(&f),
            &ScalarField::from_value(&g),
            &vec![0.0; n + 1],
            &[],
            1e-6,
        )
        .unwrap();
        assert_eq!(report.codirected, alpha * beta > 0.0);
        if report.codirected {
            assert_eq!(
                report.index_f_on_g + report.index_g_on_f,
                n,
                "codirected pair must satisfy M + m = N"
            );
        } else {
            assert_eq!(
                report.index_f_on_g, report.index_g_on_f,
                "opposite pair must satisfy M = m"
            );
        }
        checked += 1;
    }
    println!("ACCEPTANCE 8 (kissing-surfaces identity on {checked} pairs): PASS");
}

#[test]
fn criterion_09_global_invariants() {
    // Euler characteristics and Poincare duality across every fiber type
    for n in 3..=12 {
        let dim = 2 * n - 5;
        for label in all_labels(n) {
            let t = homology_closed_form(n, &label).unwrap();
            match label {
                RegionLabel::Chamber(_) => {
                    assert_eq!(euler_characteristic(&t), 0, "n={n} {label:?}");
                    assert!(poincare_check(&t, dim), "n={n} {label:?}");
                }
                RegionLabel::Curve(_) => {
                    assert_eq!(euler_characteristic(&t), 1, "n={n} {label:?}");
                }
                RegionLabel::Outside => unreachable!(),
            }
        }
        let zero = c_zero_area_betti(n).unwrap();
        if n % 2 == 1 {
            assert_eq!(euler_characteristic(&zero), 0);
            assert!(poincare_check(&zero, dim));
        } else {
            assert_eq!(euler_characteristic(&zero), 1);
        }
    }

    // isoperimetric bound from the top discriminant constant
    for n in 4..=8 {
        let c_top = discriminant_constant(n, StarKind::Winding(1));
        let mut rng = sampling::seeded_rng(9000 + n as u64);
        for _ in 0..1000 {
            let p = sampling::random_polygon(n, &mut rng);
            let phi = p.phi();
            assert!(
                phi.area <= c_top * phi.perimeter * phi.perimeter + 1e-12,
                "n={n}: isoperimetric bound violated by {phi:?}"
            );
        }
    }
    println!("ACCEPTANCE 9 (Euler, duality, isoperimetric bound): PASS");
}

#[test]
fn criterion_10_range_deviation_flags_present() {
    let bundle = run_report(6, &Tolerances::default(), 7).unwrap();
    assert!(bundle.pass);
    let ids: Vec<&str> = bundle.notes.iter().map(|n| n.id.as_str()).collect();
    assert!(ids.contains(&"singular_fiber_odd_range"));
    assert!(ids.contains(&"zero_area_odd_n_range"));
    for note in &bundle.notes {
        assert_eq!(note.oracle, "mayer_vietoris");
        assert!(!note.used.is_empty() && !note.alternative.is_empty());
    }
    let singular = bundle
        .notes
        .iter()
        .find(|n| n.id == "singular_fiber_odd_range")
        .unwrap();
    assert!(singular.used.contains("2n-3-i"));
    assert!(singular.oracle_example.contains("[5]"));
    let zero = bundle
        .notes
        .iter()
        .find(|n| n.id == "zero_area_odd_n_range")
        .unwrap();
    assert!(zero.used.contains("n-2 <= j"));
    assert!(zero.oracle_example.contains("[5, 7, 9]"));

    // the flags also ride along in the CLI bundle
    let (code, out) = run_capture(["polydual", "report", "--n", "5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let note_ids: Vec<&str> = v["notes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| n["id"].as_str().unwrap())
        .collect();
    assert_eq!(
        note_ids,
        vec!["singular_fiber_odd_range", "zero_area_odd_n_range"]
    );
    println!("ACCEPTANCE 10 (range-deviation flags surfaced): PASS");
}
