//! Linear Poisson structures on the dual of a Lie algebra, viewed as
//! Poisson-Lie structures on the abelian group.

use super::{GroundTruth, Hamiltonian, ModelBundle, Structure};
use crate::bialgebra::LieBialgebra;
use crate::chart::PoissonChart;
use crate::error::{PlgError, Result};
use crate::field::ScalarField;
use crate::group::GroupModel;
use crate::lie::LieAlgebra;
use crate::sampling::SampleBox;

pub fn quadratic_from_diagonal(diag: &[f64]) -> Vec<Vec<f64>> {
    (0..diag.len())
        .map(|i| (0..diag.len()).map(|j| if i == j { diag[i] } else { 0.0 }).collect())
        .collect()
}

/// `H = 1/2 x^T I x` on the dual of `alg`.
pub fn lie_poisson_model(alg: &LieAlgebra, inertia: &[Vec<f64>]) -> Result<ModelBundle> {
    let n = alg.dim();
    if inertia.len() != n || inertia.iter().any(|r| r.len() != n) {
        return Err(PlgError::DimensionMismatch {
            expected: n,
            got: inertia.len(),
        });
    }
    for i in 0..n {
        for j in 0..i {
            if (inertia[i][j] - inertia[j][i]).abs() > 1e-12 {
                return Err(PlgError::Invalid(format!("inertia matrix is not symmetric at ({i}, {j})")));
            }
        }
    }
    let bialgebra = LieBialgebra::lie_poisson(alg)?;
    Ok(ModelBundle {
        id: "liepoisson".into(),
        group: Some(GroupModel::abelian(n)),
        structures: vec![Structure {
            name: "lie-poisson".into(),
            chart: PoissonChart::lie_poisson(alg),
            bialgebra: Some(bialgebra),
        }],
        hamiltonians: vec![Hamiltonian {
            name: "H_I".into(),
            field: ScalarField::quadratic(inertia.to_vec()),
            structure: 0,
        }],
        casimirs: Vec::new(),
        ground_truth: GroundTruth {
            unimodular: vec![alg.is_unimodular(1e-10)],
            dual_modular_character: vec![alg.modular_character()],
            f0: Some(ScalarField::constant(1.0)),
            invariant_density: Some(ScalarField::constant(1.0)),
            ..GroundTruth::default()
        },
        sample_box: SampleBox::cube(n, 1.0),
        default_x0: (0..n).map(|i| 0.2 * (i + 1) as f64).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::standard_algebra;

    #[test]
    fn rejects_asymmetric_inertia() {
        let so3 = standard_algebra("so3", &[]).unwrap();
        let bad = vec![vec![1.0, 2.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        assert!(lie_poisson_model(&so3, &bad).is_err());
        assert!(lie_poisson_model(&so3, &quadratic_from_diagonal(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn affine_dual_is_not_unimodular() {
        let a = standard_algebra("affine2d", &[]).unwrap();
        let m = lie_poisson_model(&a, &quadratic_from_diagonal(&[1.0, 1.0])).unwrap();
        let v = m.bialgebra().unwrap().unimodularity();
        assert!(!v.is_unimodular);
        assert_eq!(v.dual_modular_character, a.modular_character());
    }
}
