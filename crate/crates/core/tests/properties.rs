use plg::{standard_algebra, LieAlgebra, Multivector};
use proptest::prelude::*;

fn algebras() -> Vec<LieAlgebra> {
    ["sl2", "so3", "su2_quaternion", "affine2d", "gl2"]
        .iter()
        .filter_map(|n| standard_algebra(n, &[]).ok())
        .chain([standard_algebra("book", &[0.7]).unwrap()])
        .collect()
}

fn vec3() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, 3)
}

proptest! {
    #[test]
    fn schouten_graded_antisymmetry(a in vec3(), b in vec3(), c in vec3(), d in vec3()) {
        let alg = standard_algebra("so3", &[]).unwrap();
        let p = Multivector::vector(&a);
        let q = Multivector::wedge_vectors(3, &[b, c]);
        // [P, Q] = -(-1)^{(p-1)(q-1)} [Q, P] for degrees 1 and 2
        let pq = alg.schouten(&p, &q).unwrap();
        let qp = alg.schouten(&q, &p).unwrap();
        let mut sum = pq.clone();
        sum.add_scaled(&qp, 1.0);
        prop_assert!(sum.max_abs() < 1e-10);

        let r = Multivector::vector(&d);
        let pr = alg.schouten(&p, &r).unwrap();
        let rp = alg.schouten(&r, &p).unwrap();
        let mut sum = pr;
        sum.add_scaled(&rp, 1.0);
        prop_assert!(sum.max_abs() < 1e-10);
    }

    #[test]
    fn modular_character_kills_brackets(a in vec3(), b in vec3()) {
        for alg in algebras().into_iter().filter(|g| g.dim() == 3) {
            let m = alg.modular_character();
            let br = alg.bracket(&a, &b).unwrap();
            let v: f64 = m.iter().zip(&br).map(|(x, y)| x * y).sum();
            prop_assert!(v.abs() < 1e-10, "{:?}", alg.labels());
        }
    }

    #[test]
    fn adjoint_is_a_homomorphism(g in vec3(), h in vec3()) {
        let gm = plg::models::eulertop::book_group(0.4);
        let gh = gm.multiply(&g, &h);
        let lhs = gm.adjoint_matrix(&gh).unwrap();
        let rhs = gm.adjoint_matrix(&g).unwrap() * gm.adjoint_matrix(&h).unwrap();
        prop_assert!((lhs - rhs).amax() < 1e-6);
    }

    #[test]
    fn poisson_bracket_leibniz(x in vec3(), a in vec3(), b in vec3()) {
        use plg::{PoissonChart, ScalarField};
        let chart = PoissonChart::lie_poisson(&standard_algebra("so3", &[]).unwrap());
        let lin = |c: Vec<f64>| ScalarField::new(move |x| c.iter().zip(x).map(|(u, v)| u * v).sum());
        let f = lin(a);
        let g = lin(b);
        let h = ScalarField::new(|x| x[0] * x[0] + x[1] * x[2]);
        let fg = f.product(&g);
        let lhs = chart.bracket(&fg, &h, &x).unwrap();
        let rhs = f.eval(&x) * chart.bracket(&g, &h, &x).unwrap() + g.eval(&x) * chart.bracket(&f, &h, &x).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-6 * (1.0 + lhs.abs()));
    }

    #[test]
    fn cobracket_from_r_is_a_cocycle(c in -2.0..2.0f64, d in -2.0..2.0f64) {
        let gl2 = standard_algebra("gl2", &[]).unwrap();
        let r = Multivector::bivector(4, &[(2, 1, c), (0, 3, d)]).unwrap();
        let cb = plg::Cobracket::from_r(&gl2, &r).unwrap();
        prop_assert!(cb.cocycle_residual().unwrap() < 1e-10);
    }
}
