//! The standard Poisson-Lie structure on `S^3`, handled in the ambient
//! quaternion group `R^4 \ {0}` with the norm as Casimir.

use std::sync::Arc;

use super::{GroundTruth, Hamiltonian, ModelBundle, NamedFunction, Structure};
use crate::bialgebra::{Cobracket, LieBialgebra};
use crate::chart::PoissonChart;
use crate::error::Result;
use crate::field::{Guard, ScalarField, VectorField};
use crate::group::GroupModel;
use crate::lie::{standard_algebra, Multivector};
use crate::sampling::{Polynomial, SampleBox};

fn norm2(g: &[f64]) -> f64 {
    g.iter().map(|v| v * v).sum()
}

fn nonzero() -> Guard {
    Arc::new(|g: &[f64]| norm2(g) > 1e-12)
}

pub fn s3_chart() -> PoissonChart {
    PoissonChart::from_upper("standard S3", 4, |g| {
        let (x, y, z, t) = (g[0], g[1], g[2], g[3]);
        vec![-(z * z + t * t), y * z, y * t, -x * z, -x * t, 0.0]
    })
    .with_guard(nonzero())
}

pub fn quaternion_group() -> GroupModel {
    GroupModel::new(
        "H*",
        vec![1.0, 0.0, 0.0, 0.0],
        |a, b| {
            let (x, y, z, t) = (a[0], a[1], a[2], a[3]);
            let (x2, y2, z2, t2) = (b[0], b[1], b[2], b[3]);
            vec![
                x * x2 - y * y2 - z * z2 - t * t2,
                x * y2 + y * x2 - z * t2 + t * z2,
                z * x2 - t * y2 + x * z2 + y * t2,
                z * y2 + t * x2 + x * t2 - y * z2,
            ]
        },
        |g| {
            let n = norm2(g);
            vec![g[0] / n, -g[1] / n, -g[2] / n, -g[3] / n]
        },
    )
    .with_guard(nonzero())
}

/// The bundle with `H = P(z, t)`; `p` is a polynomial in the two variables
/// `(z, t)`.
pub fn s3_with_polynomial(p: &Polynomial) -> Result<ModelBundle> {
    let alg = standard_algebra("quaternion", &[])?;
    let delta = vec![
        Multivector::zero(4, 2),
        Multivector::zero(4, 2),
        Multivector::bivector(4, &[(1, 2, -1.0)])?,
        Multivector::bivector(4, &[(1, 3, -1.0)])?,
    ];
    let bialgebra = LieBialgebra::new(Cobracket::from_components(alg, delta)?)?;

    let (pa, pb) = (p.clone(), p.clone());
    let h = ScalarField::new(move |g| pa.eval(&g[2..4])).with_gradient(move |g| {
        let d = pb.gradient(&g[2..4]);
        vec![0.0, 0.0, d[0], d[1]]
    });

    Ok(ModelBundle {
        id: "s3".into(),
        group: Some(quaternion_group()),
        structures: vec![Structure {
            name: "standard".into(),
            chart: s3_chart(),
            bialgebra: Some(bialgebra),
        }],
        hamiltonians: vec![Hamiltonian {
            name: "P".into(),
            field: h,
            structure: 0,
        }],
        casimirs: vec![NamedFunction {
            name: "norm2".into(),
            field: ScalarField::new(norm2).with_gradient(|g| g.iter().map(|v| 2.0 * v).collect()),
        }],
        ground_truth: GroundTruth {
            unimodular: vec![false],
            dual_modular_character: vec![vec![0.0, -2.0, 0.0, 0.0]],
            f0: Some(ScalarField::constant(1.0)),
            invariant_density: Some(ScalarField::new(|g| 1.0 / (norm2(g) * norm2(g)))),
            symmetric_modular_field: Some(VectorField::new(4, |g| {
                vec![2.0 * g[1], -2.0 * g[0], 0.0, 0.0]
            })),
            ..GroundTruth::default()
        },
        sample_box: SampleBox::cube(4, 1.2).with_accept(Arc::new(|g: &[f64]| {
            let n = norm2(g).sqrt();
            (0.5..1.5).contains(&n)
        })),
        default_x0: {
            let v = [0.6, 0.3, 0.5, 0.4];
            let n = norm2(&v).sqrt();
            v.iter().map(|c| c / n).collect()
        },
    })
}

/// `H = z^2 + t^2`.
pub fn s3_standard() -> Result<ModelBundle> {
    s3_with_polynomial(&Polynomial {
        terms: vec![(1.0, vec![2, 0]), (1.0, vec![0, 2])],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{divergence, VolumeForm};

    #[test]
    fn bracket_and_identity() {
        let m = s3_standard().unwrap();
        let g = [0.3, -0.5, 0.7, 0.2];
        let pi = m.chart().pi(&g).unwrap();
        assert!((pi[(0, 1)] + (0.49 + 0.04)).abs() < 1e-15);
        let gm = m.group.as_ref().unwrap();
        assert_eq!(gm.multiply(&[1.0, 0.0, 0.0, 0.0], &g), g.to_vec());
    }

    #[test]
    fn su2_part_of_group_matches_algebra() {
        let m = s3_standard().unwrap();
        let gm = m.group.as_ref().unwrap();
        assert!(gm.algebra_mismatch(m.bialgebra().unwrap().primal()).unwrap() < 1e-8);
    }

    #[test]
    fn p_flow_preserves_left_volume() {
        let m = s3_standard().unwrap();
        let gm = m.group.as_ref().unwrap();
        let nu: VolumeForm = gm.left_volume_density(1.0).unwrap();
        let xh = m.chart().hamiltonian_field(&m.hamiltonians[0].field);
        for g in m.sample(9, 20).unwrap() {
            assert!(divergence(&xh, &nu, &g).unwrap().abs() < 1e-6);
        }
    }
}
