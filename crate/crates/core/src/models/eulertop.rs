//! A bi-Hamiltonian deformation of the Euler top on the book group, in
//! coordinates where the group law is `(x + x', y + y' e^{-ηx}, z + z' e^{-ηx})`.
//! `η = 0` gives the undeformed top on the abelian group `R^3`.

use nalgebra::DMatrix;

use super::{
    cosh_m1_over_sq, expm1_over, sinh_over, GroundTruth, Hamiltonian, LimitData, ModelBundle,
    NamedFunction, PrintedField, Structure,
};
use crate::bialgebra::{Cobracket, LieBialgebra};
use crate::chart::PoissonChart;
use crate::error::{PlgError, Result};
use crate::field::{ScalarField, VectorField};
use crate::group::GroupModel;
use crate::lie::{standard_algebra, LieAlgebra, Multivector};
use crate::sampling::SampleBox;

pub fn book_group(eta: f64) -> GroupModel {
    GroupModel::new(
        "book",
        vec![0.0; 3],
        move |g, h| {
            let e = (-eta * g[0]).exp();
            vec![g[0] + h[0], g[1] + h[1] * e, g[2] + h[2] * e]
        },
        move |g| {
            let e = (eta * g[0]).exp();
            vec![-g[0], -g[1] * e, -g[2] * e]
        },
    )
    .with_left_jacobian(move |g| {
        let e = (-eta * g[0]).exp();
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, e, e]))
    })
    .with_right_jacobian(move |g| {
        DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, -eta * g[1], 1.0, 0.0, -eta * g[2], 0.0, 1.0])
    })
}

pub fn top_chart0(eta: f64) -> PoissonChart {
    PoissonChart::from_upper("Pi0", 3, move |g| {
        let (x, y, z) = (g[0], g[1], g[2]);
        vec![-z, y, 0.5 * (-eta * (y * y + z * z) + expm1_over(-2.0 * x, eta))]
    })
}

pub fn top_chart1(eta: f64) -> PoissonChart {
    PoissonChart::from_upper("Pi1", 3, move |g| {
        let (x, y, z) = (g[0], g[1], g[2]);
        vec![-y, z, -eta * y * z + expm1_over(-2.0 * x, eta)]
    })
}

pub fn top_h0(eta: f64) -> ScalarField {
    ScalarField::new(move |g| g[1] * g[2] * (eta * g[0]).exp() + 2.0 * cosh_m1_over_sq(g[0], eta))
        .with_gradient(move |g| {
            let e = (eta * g[0]).exp();
            vec![eta * g[1] * g[2] * e + 2.0 * sinh_over(g[0], eta), g[2] * e, g[1] * e]
        })
}

/// The second Hamiltonian, with the sign of the `cosh` term that makes both
/// structures generate the same field.
pub fn top_h1(eta: f64) -> ScalarField {
    ScalarField::new(move |g| {
        -0.5 * (g[1] * g[1] + g[2] * g[2]) * (eta * g[0]).exp() - cosh_m1_over_sq(g[0], eta)
    })
    .with_gradient(move |g| {
        let e = (eta * g[0]).exp();
        vec![
            -0.5 * eta * (g[1] * g[1] + g[2] * g[2]) * e - sinh_over(g[0], eta),
            -g[1] * e,
            -g[2] * e,
        ]
    })
}

fn bialgebra(alg: &LieAlgebra, delta: [(usize, usize, f64); 3]) -> Result<LieBialgebra> {
    let comps = delta
        .iter()
        .map(|t| Multivector::bivector(3, &[*t]))
        .collect::<Result<Vec<_>>>()?;
    LieBialgebra::new(Cobracket::from_components(alg.clone(), comps)?)
}

pub fn euler_top_deformed(eta: f64) -> Result<ModelBundle> {
    if !eta.is_finite() {
        return Err(PlgError::Invalid(format!("deformation parameter must be finite, got {eta}")));
    }
    let alg = standard_algebra("book", &[eta])?;
    let b0 = bialgebra(&alg, [(1, 2, -1.0), (0, 2, 1.0), (0, 1, -1.0)])?;
    let b1 = bialgebra(&alg, [(1, 2, -2.0), (0, 1, -1.0), (0, 2, 1.0)])?;

    // ẋ = {x, H}: -X_H for both pairs.
    let printed = VectorField::new(3, move |g| {
        let (x, y, z) = (g[0], g[1], g[2]);
        let e = (eta * x).exp();
        let s = sinh_over(x, eta);
        let q = y * y + z * z;
        vec![
            e * (y * y - z * z),
            eta * e * y * z * z - 0.5 * eta * e * y * q + s * (2.0 * z - y),
            -eta * e * y * y * z + 0.5 * eta * e * z * q + s * (z - 2.0 * y),
        ]
    });
    let limit_equations = VectorField::new(3, |g| {
        let (x, y, z) = (g[0], g[1], g[2]);
        vec![y * y - z * z, x * (2.0 * z - y), x * (z - 2.0 * y)]
    });

    Ok(ModelBundle {
        id: "eulertop".into(),
        group: Some(book_group(eta)),
        structures: vec![
            Structure {
                name: "Pi0".into(),
                chart: top_chart0(eta),
                bialgebra: Some(b0),
            },
            Structure {
                name: "Pi1".into(),
                chart: top_chart1(eta),
                bialgebra: Some(b1),
            },
        ],
        hamiltonians: vec![
            Hamiltonian {
                name: "H0".into(),
                field: top_h0(eta),
                structure: 0,
            },
            Hamiltonian {
                name: "H1".into(),
                field: top_h1(eta),
                structure: 1,
            },
        ],
        casimirs: Vec::new(),
        ground_truth: GroundTruth {
            unimodular: vec![true, true],
            dual_modular_character: vec![vec![0.0; 3], vec![0.0; 3]],
            f0: Some(ScalarField::new(move |g| (-2.0 * eta * g[0]).exp())),
            invariant_density: Some(ScalarField::new(move |g| (eta * g[0]).exp())),
            printed_fields: ["H0", "H1"]
                .iter()
                .map(|h| PrintedField {
                    hamiltonian: h.to_string(),
                    sign: -1.0,
                    field: printed.clone(),
                })
                .collect(),
            limit: Some(LimitData {
                charts: vec![top_chart0(0.0), top_chart1(0.0)],
                hamiltonians: vec![
                    NamedFunction {
                        name: "H0".into(),
                        field: top_h0(0.0),
                    },
                    NamedFunction {
                        name: "H1".into(),
                        field: top_h1(0.0),
                    },
                ],
                equations: PrintedField {
                    hamiltonian: "H0".into(),
                    sign: -1.0,
                    field: limit_equations,
                },
            }),
            ..GroundTruth::default()
        },
        sample_box: SampleBox::cube(3, 1.0),
        default_x0: vec![0.3, 0.5, -0.4],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd;
    use crate::group::Side;

    #[test]
    fn analytic_jacobians_match_group_law() {
        let gm = book_group(0.7);
        let fd_gm = gm.clone().without_analytic_jacobians();
        let g = [0.4, -0.3, 0.8];
        for side in [Side::Left, Side::Right] {
            let a = gm.translation_jacobian(&g, side).unwrap();
            let b = fd_gm.translation_jacobian(&g, side).unwrap();
            assert!((a - b).amax() < 1e-9);
        }
    }

    #[test]
    fn both_structures_give_the_printed_system() {
        for eta in [0.0, 0.3, 1.1] {
            let m = euler_top_deformed(eta).unwrap();
            let pts = m.sample(4, 30).unwrap();
            for p in &m.ground_truth.printed_fields {
                let w = m.printed_field_mismatch(p, &pts).unwrap();
                assert!(fd::max_abs(&w) < 1e-9, "eta {eta} {}: {w:?}", p.hamiltonian);
            }
        }
    }

    #[test]
    fn limit_hamiltonians_and_equations() {
        let m = euler_top_deformed(0.5).unwrap();
        let lim = m.ground_truth.limit.as_ref().unwrap();
        let x = [0.3, -0.7, 0.2];
        assert!((lim.hamiltonians[0].field.eval(&x) - (0.09 - 0.14)).abs() < 1e-15);
        assert!((lim.hamiltonians[1].field.eval(&x) + 0.5 * (0.09 + 0.49 + 0.04)).abs() < 1e-15);
        for (c, h) in lim.charts.iter().zip(&lim.hamiltonians) {
            let v = c.hamiltonian_field(&h.field).eval(&x).unwrap();
            let e = lim.equations.field.eval(&x).unwrap();
            let v: Vec<f64> = v.iter().map(|a| lim.equations.sign * a).collect();
            assert!(fd::max_abs_diff(&v, &e) < 1e-14);
        }
    }

    #[test]
    fn pencil_is_poisson() {
        let p = PoissonChart::pencil(&top_chart0(0.4), &top_chart1(0.4), 0.3).unwrap();
        assert!(p.jacobi_residual(&[0.2, 0.5, -0.1]).unwrap() < 1e-6);
    }
}
