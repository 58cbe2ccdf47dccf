//! Integrable deformation of a conservative Lorenz system on `B2 x B2`, in
//! exponential coordinates of the second kind `(x, y, z, w)`.

use std::f64::consts::SQRT_2;

use nalgebra::DMatrix;

use super::{expm1_over, GroundTruth, Hamiltonian, LimitData, ModelBundle, NamedFunction, PrintedField, Structure};
use crate::bialgebra::{Cobracket, LieBialgebra};
use crate::chart::PoissonChart;
use crate::error::{PlgError, Result};
use crate::field::{ScalarField, VectorField};
use crate::group::GroupModel;
use crate::lie::{standard_algebra, Multivector};
use crate::sampling::SampleBox;

pub fn lorenz_chart(eta: f64) -> PoissonChart {
    PoissonChart::from_upper("B2xB2", 4, move |g| {
        let (x, y, z, w) = (g[0], g[1], g[2], g[3]);
        let pxy = 0.25 * expm1_over(-2.0 * (z + w), eta) + 0.25 * eta * (2.0 * x * x - y * y);
        vec![pxy, 0.5 * y, 0.0, x, 0.0, 0.0]
    })
}

pub fn lorenz_group(eta: f64) -> GroupModel {
    GroupModel::new(
        "B2xB2",
        vec![0.0; 4],
        move |g, h| {
            let e = (-eta * (g[2] + g[3])).exp();
            let s = eta * g[3] / SQRT_2;
            let (ch, sh) = (s.cosh(), s.sinh());
            vec![
                g[0] + 0.5 * e * (2.0 * h[0] * ch - SQRT_2 * h[1] * sh),
                g[1] + e * (h[1] * ch - SQRT_2 * h[0] * sh),
                g[2] + h[2],
                g[3] + h[3],
            ]
        },
        move |g| {
            let e = (eta * (g[2] + g[3])).exp();
            let s = eta * g[3] / SQRT_2;
            let (ch, sh) = (s.cosh(), s.sinh());
            vec![
                -e * (ch * g[0] + sh / SQRT_2 * g[1]),
                -e * (SQRT_2 * sh * g[0] + ch * g[1]),
                -g[2],
                -g[3],
            ]
        },
    )
    .with_left_jacobian(move |g| {
        let e = (-eta * (g[2] + g[3])).exp();
        let s = eta * g[3] / SQRT_2;
        let (ch, sh) = (s.cosh(), s.sinh());
        DMatrix::from_row_slice(
            4,
            4,
            &[
                e * ch, -e * sh / SQRT_2, 0.0, 0.0,
                -SQRT_2 * e * sh, e * ch, 0.0, 0.0,
                0.0, 0.0, 1.0, 0.0,
                0.0, 0.0, 0.0, 1.0,
            ],
        )
    })
    .with_right_jacobian(move |g| {
        let (x, y) = (g[0], g[1]);
        DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, 0.0, -eta * x, -eta * x - 0.5 * eta * y,
                0.0, 1.0, -eta * y, -eta * x - eta * y,
                0.0, 0.0, 1.0, 0.0,
                0.0, 0.0, 0.0, 1.0,
            ],
        )
    })
}

fn hamiltonian() -> ScalarField {
    ScalarField::new(|g| 2.0 * (g[2] - g[3]) - g[0] * g[0])
        .with_gradient(|g| vec![-2.0 * g[0], 0.0, 2.0, -2.0])
}

/// The undeformed bivector `-1/2 (z + w) ∂x^∂y + y/2 ∂x^∂z + x ∂y^∂z`.
pub fn lorenz_limit_chart() -> PoissonChart {
    PoissonChart::from_upper("R4 limit", 4, |g| {
        vec![-0.5 * (g[2] + g[3]), 0.5 * g[1], 0.0, g[0], 0.0, 0.0]
    })
}

/// The undeformed bivector with the `x + w` coefficient as typeset.
pub fn lorenz_limit_chart_as_printed() -> PoissonChart {
    PoissonChart::from_upper("R4 limit (printed)", 4, |g| {
        vec![-0.5 * (g[0] + g[3]), 0.5 * g[1], 0.0, g[0], 0.0, 0.0]
    })
}

pub fn lorenz_deformed(eta: f64) -> Result<ModelBundle> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(PlgError::Invalid(format!("deformation parameter must be positive, got {eta}")));
    }
    let alg = standard_algebra("b2xb2", &[eta])?;
    let delta = vec![
        Multivector::bivector(4, &[(1, 2, 1.0)])?,
        Multivector::bivector(4, &[(0, 2, 0.5)])?,
        Multivector::bivector(4, &[(0, 1, -0.5)])?,
        Multivector::bivector(4, &[(0, 1, -0.5)])?,
    ];
    let bialgebra = LieBialgebra::new(Cobracket::from_components(alg, delta)?)?;

    // ẋ = {x, H}, i.e. -X_H in the sharp convention used here.
    let printed = VectorField::new(4, move |g| {
        let (x, y, z, w) = (g[0], g[1], g[2], g[3]);
        vec![
            y,
            0.5 * x * (4.0 + expm1_over(-2.0 * (z + w), eta) + eta * (2.0 * x * x - y * y)),
            x * y,
            0.0,
        ]
    });
    let limit_equations = VectorField::new(4, |g| {
        let (x, y, z, w) = (g[0], g[1], g[2], g[3]);
        vec![y, x * (2.0 - z - w), x * y, 0.0]
    });

    Ok(ModelBundle {
        id: "lorenz".into(),
        group: Some(lorenz_group(eta)),
        structures: vec![Structure {
            name: "B2xB2".into(),
            chart: lorenz_chart(eta),
            bialgebra: Some(bialgebra),
        }],
        hamiltonians: vec![Hamiltonian {
            name: "H".into(),
            field: hamiltonian(),
            structure: 0,
        }],
        casimirs: Vec::new(),
        ground_truth: GroundTruth {
            unimodular: vec![true],
            dual_modular_character: vec![vec![0.0; 4]],
            f0: Some(ScalarField::new(move |g| (-2.0 * eta * (g[2] + g[3])).exp())),
            invariant_density: Some(ScalarField::new(move |g| (eta * (g[2] + g[3])).exp())),
            printed_fields: vec![PrintedField {
                hamiltonian: "H".into(),
                sign: -1.0,
                field: printed,
            }],
            limit: Some(LimitData {
                charts: vec![lorenz_limit_chart()],
                hamiltonians: vec![NamedFunction {
                    name: "H".into(),
                    field: hamiltonian(),
                }],
                equations: PrintedField {
                    hamiltonian: "H".into(),
                    sign: -1.0,
                    field: limit_equations,
                },
            }),
            ..GroundTruth::default()
        },
        sample_box: SampleBox::cube(4, 1.0),
        // x = y = 0 is a line of saddles for η = 0.3; orbits starting near it stay
        // bounded on [0, 10].
        default_x0: vec![1e-3, -1e-3, 1.0, 3.0],
    })
}
