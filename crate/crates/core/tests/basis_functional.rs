mod common;

use approx::assert_abs_diff_eq;
use pouspec::catalog::{random_clamped_knots, random_partition};
use pouspec::functional::check_functional_normalization;
use pouspec::sampling::FunctionSampler;
use pouspec::{
    check_nonnegativity, check_partition_of_unity, BasisSystem, FunctionHandle, Functional, Interval,
};
use proptest::prelude::*;

fn grid() -> Vec<f64> {
    Interval::unit().uniform_grid(1000)
}

fn catalog_bases() -> Vec<BasisSystem> {
    let mut out: Vec<BasisSystem> = (1..=15).map(|n| BasisSystem::bernstein(n).unwrap()).collect();
    let mut r = common::rng(11);
    for degree in 0..=3 {
        for _ in 0..3 {
            let knots = random_clamped_knots(&mut r, degree, 6);
            out.push(BasisSystem::bspline(&knots, degree).unwrap());
        }
    }
    for m in [2, 3, 8, 17] {
        out.push(BasisSystem::hat(&random_partition(&mut r, m).unwrap()).unwrap());
    }
    out
}

#[test]
fn catalog_bases_partition_unity_and_are_nonnegative() {
    let g = grid();
    for b in catalog_bases() {
        assert!(
            check_partition_of_unity(&b, &g, 1e-12).unwrap().passed,
            "{:?}",
            b.kind()
        );
        let r = check_nonnegativity(&b, &g, 0.0).unwrap();
        assert!(r.passed && r.measured >= 0.0, "{:?}", b.kind());
    }
}

#[test]
fn bernstein_matches_explicit_oracle() {
    for n in [1, 2, 7, 15, 30, 31, 45] {
        let b = BasisSystem::bernstein(n).unwrap();
        for &x in &[0.0, 0.013, 0.5, 0.77, 1.0] {
            for (k, v) in b.eval_all(x).unwrap().into_iter().enumerate() {
                assert_abs_diff_eq!(v, common::bernstein(n, k, x), epsilon = 1e-13);
            }
        }
    }
}

#[test]
fn linear_bspline_agrees_with_hat_on_same_nodes() {
    let mut r = common::rng(3);
    for m in [2, 3, 6, 12] {
        let nodes = random_partition(&mut r, m).unwrap();
        let mut knots = vec![nodes[0]];
        knots.extend_from_slice(&nodes);
        knots.push(nodes[m - 1]);
        let b = BasisSystem::bspline(&knots, 1).unwrap();
        let h = BasisSystem::hat(&nodes).unwrap();
        for x in grid() {
            for (u, v) in b.eval_all(x).unwrap().into_iter().zip(h.eval_all(x).unwrap()) {
                assert_abs_diff_eq!(u, v, epsilon = 1e-14);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cubic_bspline_sums_to_one(interior in prop::collection::vec(0.01f64..0.99, 1..10)) {
        let mut inner = interior;
        inner.sort_by(f64::total_cmp);
        inner.dedup();
        let mut knots = vec![0.0; 4];
        knots.extend(inner);
        knots.extend([1.0; 4]);
        let b = BasisSystem::bspline(&knots, 3).unwrap();
        let r = check_partition_of_unity(&b, &grid(), 1e-12).unwrap();
        prop_assert!(r.passed, "deviation {}", r.measured);
    }

    #[test]
    fn hat_sum_is_one(interior in prop::collection::vec(0.001f64..0.999, 0..20), x in 0.0f64..=1.0) {
        let mut nodes = interior;
        nodes.push(0.0);
        nodes.push(1.0);
        nodes.sort_by(f64::total_cmp);
        nodes.dedup();
        let h = BasisSystem::hat(&nodes).unwrap();
        prop_assert!((h.sum_at(x).unwrap() - 1.0).abs() <= 1e-15);
    }
}

fn random_functionals() -> Vec<Functional> {
    let mut r = common::rng(5);
    let mut out = Vec::new();
    for n in 1..=15 {
        out.extend(pouspec::make_kantorovich_functionals(n).unwrap());
    }
    for _ in 0..20 {
        let a: f64 = rand::Rng::gen_range(&mut r, 0.0..0.9);
        let b = rand::Rng::gen_range(&mut r, a + 0.01..=1.0);
        out.push(Functional::interval_average(a, b).unwrap());
        out.push(Functional::dirac(rand::Rng::gen_range(&mut r, 0.0..=1.0)));
        let k = rand::Rng::gen_range(&mut r, 1..6);
        let nodes: Vec<f64> = (0..k).map(|_| rand::Rng::gen_range(&mut r, 0.0..=1.0)).collect();
        let raw: Vec<f64> = (0..k).map(|_| rand::Rng::gen_range(&mut r, 0.1..1.0)).collect();
        let s: f64 = raw.iter().sum();
        out.push(Functional::weighted_quadrature(nodes, raw.iter().map(|w| w / s).collect()).unwrap());
    }
    out
}

#[test]
fn constructed_functionals_are_normalised_and_positive() {
    for a in random_functionals() {
        assert_abs_diff_eq!(a.apply(&FunctionHandle::one()).unwrap(), 1.0, epsilon = 1e-12);
        assert!(check_functional_normalization(&a, 1e-12).passed, "{a:?}");
    }
}

#[test]
fn functionals_are_monotone() {
    // f <= g pointwise with g = f + h, h >= 0
    let mut s = FunctionSampler::new(17, Interval::unit());
    let functionals = random_functionals();
    for _ in 0..60 {
        let f = s.any();
        let h = s.nonnegative();
        let g = FunctionHandle::closed(
            Interval::unit(),
            pouspec::ClosedForm::Combination {
                coefficients: vec![1.0, 1.0],
                terms: vec![f.clone(), h].into(),
            },
        );
        for a in &functionals {
            assert!(a.apply(&f).unwrap() <= a.apply(&g).unwrap() + 1e-12);
        }
    }
}

#[test]
fn interval_average_of_bernstein_is_exact() {
    let mut r = common::rng(8);
    for n in 1..=10 {
        let basis = BasisSystem::bernstein(n).unwrap();
        for _ in 0..10 {
            let a: f64 = rand::Rng::gen_range(&mut r, 0.0..0.95);
            let b: f64 = rand::Rng::gen_range(&mut r, a + 0.01..=1.0);
            let avg = Functional::interval_average(a, b).unwrap();
            for (j, e) in basis.functions().iter().enumerate() {
                let want = common::bernstein_integral(n, j, a, b) / (b - a);
                assert_abs_diff_eq!(avg.apply(e).unwrap(), want, epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn interval_average_oracle_example() {
    // 2 * integral_0^0.5 x dx = 0.25
    let avg = Functional::interval_average(0.0, 0.5).unwrap();
    let x = FunctionHandle::polynomial(vec![0.0, 1.0]);
    assert_abs_diff_eq!(avg.apply(&x).unwrap(), 0.25, epsilon = 1e-15);
}
