//! The Sklyanin bracket on `GL(2,R)^+`, restricted dynamically to `SL(2,R)`
//! by the Casimir `det A`. Coordinates `(a11, a12, a21, a22)`.

use std::sync::Arc;

use nalgebra::DMatrix;

use super::{GroundTruth, Hamiltonian, ModelBundle, NamedFunction, PrintedField, SingularCurve, Structure};
use crate::bialgebra::LieBialgebra;
use crate::chart::PoissonChart;
use crate::error::Result;
use crate::field::{Guard, ScalarField, VectorField};
use crate::group::GroupModel;
use crate::lie::{standard_algebra, Multivector};
use crate::sampling::SampleBox;

fn det(a: &[f64]) -> f64 {
    a[0] * a[3] - a[1] * a[2]
}

pub fn sklyanin_chart() -> PoissonChart {
    PoissonChart::from_upper("sklyanin", 4, |a| {
        vec![
            a[0] * a[1],
            a[0] * a[2],
            2.0 * a[1] * a[2],
            0.0,
            a[1] * a[3],
            a[2] * a[3],
        ]
    })
    .with_guard(positive_det())
}

fn positive_det() -> Guard {
    Arc::new(|a: &[f64]| det(a) > 0.0)
}

pub fn gl2_group() -> Result<GroupModel> {
    let basis = DMatrix::from_column_slice(
        4,
        4,
        &[
            1.0, 0.0, 0.0, -1.0, // J3
            0.0, 1.0, 0.0, 0.0, // J+
            0.0, 0.0, 1.0, 0.0, // J-
            0.5, 0.0, 0.0, 0.5, // Id/2
        ],
    );
    GroupModel::new(
        "GL(2,R)+",
        vec![1.0, 0.0, 0.0, 1.0],
        |a, b| {
            vec![
                a[0] * b[0] + a[1] * b[2],
                a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3],
            ]
        },
        |a| {
            let d = det(a);
            vec![a[3] / d, -a[1] / d, -a[2] / d, a[0] / d]
        },
    )
    .with_guard(positive_det())
    .with_basis(basis)
}

/// `sum (a_ij - c δ_ij)^2 * k`.
fn shifted_square(c: f64, k: f64) -> ScalarField {
    let shift = move |a: &[f64]| [a[0] - c, a[1], a[2], a[3] - c];
    ScalarField::new(move |a| k * shift(a).iter().map(|v| v * v).sum::<f64>())
        .with_gradient(move |a| shift(a).iter().map(|v| 2.0 * k * v).collect())
}

pub fn sl2r_sklyanin() -> Result<ModelBundle> {
    let gl2 = standard_algebra("gl2", &[])?;
    // r = J- ^ J+
    let r = Multivector::bivector(4, &[(2, 1, 1.0)])?;
    let bialgebra = LieBialgebra::from_r(&gl2, r)?;
    let group = gl2_group()?;

    let hamiltonians = vec![
        Hamiltonian {
            name: "toda_svd".into(),
            field: shifted_square(0.0, 0.5),
            structure: 0,
        },
        Hamiltonian {
            name: "contrast".into(),
            field: shifted_square(1.0, 1.0),
            structure: 0,
        },
        Hamiltonian {
            name: "toda_svd_shifted".into(),
            field: shifted_square(1.0, 0.5),
            structure: 0,
        },
    ];
    let casimirs = vec![NamedFunction {
        name: "det".into(),
        field: ScalarField::new(det).with_gradient(|a| vec![a[3], -a[2], -a[1], a[0]]),
    }];

    // As printed, including the a22/a12 and a12/a21 slips in the second and
    // third components.
    let printed = VectorField::new(4, |a| {
        let (a11, a12, a21, a22) = (a[0], a[1], a[2], a[3]);
        vec![
            -a11 * (a12 * a12 + a21 * a21) - 2.0 * (a22 - 1.0) * a12 * a21,
            (a11 - 1.0) * a11 * a22 - (a22 - 1.0) * a12 * a22,
            (a11 - 1.0) * a11 * a12 - (a22 - 1.0) * a12 * a22,
            2.0 * (a11 - 1.0) * a12 * a21 + a22 * (a12 * a12 + a21 * a21),
        ]
    });

    let ground_truth = GroundTruth {
        unimodular: vec![false],
        dual_modular_character: vec![vec![2.0, 0.0, 0.0, 0.0]],
        f0: Some(ScalarField::constant(1.0)),
        invariant_density: Some(ScalarField::new(|a| 1.0 / (det(a) * det(a)))),
        symmetric_modular_field: Some(VectorField::new(4, |a| vec![2.0 * a[0], 0.0, 0.0, -2.0 * a[3]])),
        singular_curve: Some(SingularCurve {
            hamiltonian: "toda_svd_shifted".into(),
            point: Arc::new(|a| vec![a, 0.0, 0.0, 1.0 / a]),
            value: Arc::new(|a| 4.0 / (a * a) * (a * a - 1.0) * (a * a - a + 1.0)),
        }),
        printed_fields: vec![PrintedField {
            hamiltonian: "toda_svd_shifted".into(),
            sign: 1.0,
            field: printed,
        }],
        limit: None,
    };

    Ok(ModelBundle {
        id: "sl2r".into(),
        group: Some(group),
        structures: vec![Structure {
            name: "sklyanin".into(),
            chart: sklyanin_chart(),
            bialgebra: Some(bialgebra),
        }],
        hamiltonians,
        casimirs,
        ground_truth,
        sample_box: SampleBox::around(&[1.0, 0.0, 0.0, 1.0], 0.5)
            .with_accept(Arc::new(|a: &[f64]| det(a) > 0.2)),
        default_x0: vec![1.2, 0.1, 0.05, 0.85],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd;

    #[test]
    fn bracket_entries() {
        let m = sl2r_sklyanin().unwrap();
        let a = [1.3, 0.2, -0.4, 0.9];
        let pi = m.chart().pi(&a).unwrap();
        assert!((pi[(0, 3)] - 2.0 * a[1] * a[2]).abs() < 1e-15);
        assert_eq!(m.chart().pi(&[1.0, 0.0, 0.0, 1.0]).unwrap(), DMatrix::zeros(4, 4));
    }

    #[test]
    fn diagonal_is_an_equilibrium() {
        let m = sl2r_sklyanin().unwrap();
        let h = m.hamiltonian("toda_svd").unwrap();
        let v = m.chart().hamiltonian_field(&h.field).eval(&[2.0, 0.0, 0.0, 0.5]).unwrap();
        assert!(fd::max_abs(&v) < 1e-15);
    }

    #[test]
    fn left_field_of_j_plus() {
        let m = sl2r_sklyanin().unwrap();
        let gm = m.group.as_ref().unwrap();
        let f = gm.invariant_field(&[0.0, 1.0, 0.0, 0.0], crate::group::Side::Left).unwrap();
        let a = [1.1, 0.3, -0.2, 0.8];
        let v = f.eval(&a).unwrap();
        assert!(fd::max_abs_diff(&v, &[0.0, a[0], 0.0, a[2]]) < 1e-10);
    }

    #[test]
    fn printed_field_matches_except_two_components() {
        let m = sl2r_sklyanin().unwrap();
        let pts = m.sample(5, 20).unwrap();
        let w = m
            .printed_field_mismatch(&m.ground_truth.printed_fields[0], &pts)
            .unwrap();
        assert!(w[0] < 1e-12 && w[3] < 1e-12);
        assert!(w[1] > 1e-3 && w[2] > 1e-3);
    }
}
