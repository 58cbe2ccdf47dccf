//! Every example runs to completion.

macro_rules! example {
    ($name:ident, $file:literal) => {
        #[allow(dead_code)]
        #[path = $file]
        mod $name;

        #[test]
        fn $name() {
            $name::run_example().unwrap();
        }
    };
}

example!(lie_algebra, "../examples/lie_algebra.rs");
example!(r_matrix_bialgebra, "../examples/r_matrix_bialgebra.rs");
example!(poisson_chart, "../examples/poisson_chart.rs");
example!(group_geometry, "../examples/group_geometry.rs");
example!(modular_fields, "../examples/modular_fields.rs");
example!(morse_verdicts, "../examples/morse_verdicts.rs");
example!(volume_drift, "../examples/volume_drift.rs");
example!(deformed_euler_top, "../examples/deformed_euler_top.rs");
example!(deformed_lorenz, "../examples/deformed_lorenz.rs");
example!(user_config, "../examples/user_config.rs");
