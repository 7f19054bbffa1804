mod common;

use approx::assert_abs_diff_eq;
use nalgebra::DMatrix;
use pouspec::catalog;
use pouspec::operator::{norm_ratio, operator_power_apply_with};
use pouspec::sampling::FunctionSampler;
use pouspec::spectrum::{build_collocation_matrix, matrix_power};
use pouspec::{
    apply_adjoint, apply_operator, estimate_operator_norm, kernel_witness, operator_power_apply,
    verify_constant_reproduction, verify_positivity, Error, Functional, Interval, OperatorSpec,
};

fn sweep() -> Vec<OperatorSpec> {
    let mut r = common::rng(21);
    let mut ops = Vec::new();
    for n in [1, 2, 3, 5, 8] {
        ops.push(catalog::bernstein(n).unwrap());
        ops.push(catalog::kantorovich(n).unwrap());
    }
    for degree in 1..=3 {
        ops.push(catalog::schoenberg(&catalog::random_clamped_knots(&mut r, degree, 5), degree).unwrap());
    }
    ops.push(catalog::hat_dirac(&catalog::random_partition(&mut r, 7).unwrap()).unwrap());
    ops
}

#[test]
fn constants_are_reproduced() {
    for op in sweep() {
        let r = verify_constant_reproduction(&op, &op.grid(1001), 1e-12).unwrap();
        assert!(r.passed, "{}: {}", op.name(), r.measured);
    }
}

#[test]
fn positivity_over_random_nonnegative_inputs() {
    for op in sweep() {
        let r = verify_positivity(&op, 100, 1e-12, 42).unwrap();
        assert!(r.passed, "{}: {}", op.name(), r.measured);
    }
}

#[test]
fn norm_estimate_is_one() {
    for op in sweep() {
        let norm = estimate_operator_norm(&op, 200, 42).unwrap();
        assert!(
            (1.0 - 1e-12..=1.0 + 1e-10).contains(&norm),
            "{}: {norm}",
            op.name()
        );
    }
}

#[test]
fn no_single_ratio_exceeds_one() {
    let op = catalog::kantorovich(6).unwrap();
    let grid = op.grid(1001);
    let mut s = FunctionSampler::new(9, op.domain());
    for _ in 0..200 {
        assert!(norm_ratio(&op, &s.any(), &grid).unwrap() <= 1.0 + 1e-10);
    }
}

#[test]
fn adjoint_identity() {
    // (T* mu)(f) = mu(T f)
    let mut s = FunctionSampler::new(31, Interval::unit());
    for op in sweep() {
        for _ in 0..50 {
            let dual = match rand::Rng::gen_range(s.rng(), 0..2) {
                0 => Functional::dirac(s.point()),
                _ => {
                    let a = rand::Rng::gen_range(s.rng(), 0.0..0.8);
                    Functional::interval_average(a, a + 0.15).unwrap()
                }
            };
            let f = s.any();
            let lhs = apply_adjoint(&op, &dual, &f).unwrap();
            let rhs = dual.apply(&apply_operator(&op, &f).unwrap()).unwrap();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
        }
    }
}

#[test]
fn range_has_rank_at_most_basis_size() {
    let mut s = FunctionSampler::new(4, Interval::unit());
    for op in sweep() {
        let n = op.rank();
        let grid = op.grid(1001);
        let cols = 2 * n;
        let mut data = Vec::with_capacity(grid.len() * cols);
        for _ in 0..cols {
            data.extend(apply_operator(&op, &s.any()).unwrap().eval_grid(&grid).unwrap());
        }
        let a = DMatrix::from_column_slice(grid.len(), cols, &data);
        let sv = a.singular_values();
        let top = sv.max();
        let numeric_rank = sv.iter().filter(|&&v| v > 1e-8 * top).count();
        assert!(numeric_rank <= n, "{}: rank {numeric_rank} > {n}", op.name());
    }
}

#[test]
fn kernel_witnesses_are_annihilated() {
    let mut ops: Vec<OperatorSpec> = (1..=10).map(|n| catalog::bernstein(n).unwrap()).collect();
    ops.extend((1..=10).map(|n| catalog::kantorovich(n).unwrap()));
    let mut r = common::rng(12);
    ops.push(catalog::hat_dirac(&catalog::random_partition(&mut r, 5).unwrap()).unwrap());
    ops.push(catalog::schoenberg(&catalog::random_clamped_knots(&mut r, 2, 4), 2).unwrap());
    for op in ops {
        let w = kernel_witness(&op).unwrap();
        let grid = op.grid(1001);
        assert!(w.grid_sup(&grid).unwrap() >= 0.5, "{}", op.name());
        let tw = apply_operator(&op, &w).unwrap().grid_sup(&grid).unwrap();
        assert!(tw <= 1e-10, "{}: {tw}", op.name());
    }
}

#[test]
fn mixed_functionals_have_no_witness() {
    let basis = pouspec::BasisSystem::bernstein(1).unwrap();
    let op = OperatorSpec::new(
        "mixed",
        basis,
        vec![
            Functional::dirac(0.0),
            Functional::interval_average(0.5, 1.0).unwrap(),
        ],
    )
    .unwrap();
    assert!(matches!(kernel_witness(&op), Err(Error::NotConstructible(_))));
}

#[test]
fn powers_act_through_the_collocation_matrix() {
    // T^m f = sum_j (M^{m-1} c)_j e_j with c = alpha(f)
    let mut s = FunctionSampler::new(6, Interval::unit());
    for op in sweep() {
        let grid = op.grid(201);
        let m = build_collocation_matrix(&op).unwrap();
        for power in [1usize, 2, 5] {
            let f = s.any();
            let direct = operator_power_apply(&op, &f, power).unwrap();
            let c = op.coefficients(&f).unwrap();
            let c = matrix_power(&m, (power - 1) as u64).mul_vec(&c);
            let via = op.combine(c);
            for &x in &grid {
                assert_abs_diff_eq!(direct.eval(x).unwrap(), via.eval(x).unwrap(), epsilon = 1e-12);
            }
            let cached = operator_power_apply_with(&op, &m, &f, power).unwrap();
            for &x in &grid {
                assert_abs_diff_eq!(direct.eval(x).unwrap(), cached.eval(x).unwrap(), epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn zero_power_is_rejected() {
    let op = catalog::bernstein(2).unwrap();
    assert!(operator_power_apply(&op, &pouspec::FunctionHandle::one(), 0).is_err());
}
