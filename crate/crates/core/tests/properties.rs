use proptest::prelude::*;

use gls_core::calculus::{combine_infimal_convolution, combine_product, combine_tensor, conjugate_split_min};
use gls_core::fenchel::{fenchel_conjugate, tail_bound};
use gls_core::oracle::corpus::{random_grid, seeded_rng};
use gls_core::oracle::{moments_table, Axis, LpNorm, Measure};
use gls_core::psi::{gls_norm, MomentTable, PsiFunction};

fn table(seed: u64) -> MomentTable {
    let f =
        random_grid(&mut seeded_rng(seed), vec![Axis::new(0.0, 1.0, 32).unwrap()], false, Measure::Lebesgue).unwrap();
    moments_table(&f, &[1.0, 1.5, 2.0, 3.0, 5.0, 8.0]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_homogeneous(seed in 0u64..1000, c in 0.01f64..100.0, gamma in 0.1f64..3.0) {
        let t = table(seed);
        let psi = PsiFunction::power(1.0, gamma).unwrap();
        let a = gls_norm(&t.scaled(c).unwrap(), &psi).unwrap();
        let b = c * gls_norm(&t, &psi).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b);
    }

    #[test]
    fn product_psi_multiplies(g1 in 0.1f64..4.0, g2 in 0.1f64..4.0, b in 0.5f64..3.0, p in 1.0f64..50.0) {
        let a = PsiFunction::power(b, g1).unwrap();
        let c = PsiFunction::power(1.0, g2).unwrap();
        let prod = PsiFunction::product(&a, &c).unwrap();
        let want = a.eval(p).to_f64() * c.eval(p).to_f64();
        prop_assert!((prod.eval(p).to_f64() - want).abs() <= 1e-12 * want);
        let tensor = combine_tensor(&a, &c).unwrap();
        prop_assert!((tensor.eval(p).to_f64() - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn tail_is_nonincreasing(gamma in 0.2f64..3.0, y in 1.0f64..50.0, dy in 0.01f64..10.0) {
        let psi = PsiFunction::power(1.0, gamma).unwrap();
        let a = tail_bound(&psi, 1.0, y).unwrap();
        let b = tail_bound(&psi, 1.0, y + dy).unwrap();
        prop_assert!(b <= a * (1.0 + 1e-9));
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn conjugate_is_convex(gamma in 0.2f64..3.0, v in 0.5f64..4.0, dv in 0.05f64..1.0) {
        let psi = PsiFunction::power(1.0, gamma).unwrap();
        let h = |v: f64| fenchel_conjugate(&psi, v).value.to_f64();
        let (a, m, b) = (h(v), h(v + dv), h(v + 2.0 * dv));
        prop_assert!(2.0 * m <= (a + b) * (1.0 + 1e-8));
    }

    #[test]
    fn layer_infimum_is_below_every_feasible_point(
        g1 in 0.1f64..4.0,
        g2 in 0.1f64..4.0,
        p in 1.0f64..20.0,
        t in 0.01f64..0.99,
    ) {
        let kappa = combine_product(&PsiFunction::power_type(g1).unwrap(), &PsiFunction::power_type(g2).unwrap())
            .unwrap()
            .eval(p)
            .to_f64();
        let (q1, q2) = (p / t, p / (1.0 - t));
        prop_assert!(kappa <= q1.powf(g1) * q2.powf(g2) * (1.0 + 1e-9));
        let closed = conjugate_split_min(g1, g2, p).unwrap().0;
        prop_assert!((kappa - closed).abs() <= 1e-6 * closed);
    }

    #[test]
    fn infimal_constants_compose(m1 in 1u32..6, m2 in 1u32..6, d in 1u32..4, p in 1.0f64..16.0) {
        let psi = PsiFunction::power_type(1.0).unwrap();
        let k = |m: u32| combine_infimal_convolution(&psi, d, m).unwrap().0.eval(p).to_f64() / p;
        let (a, b, ab) = (k(m1), k(m2), k(m1 * m2));
        prop_assert!((a * b - ab).abs() <= 1e-12 * ab);
    }

    #[test]
    fn natural_psi_has_unit_norm(seed in 0u64..1000) {
        let t = table(seed);
        let n = gls_norm(&t, &PsiFunction::natural(t.clone()).unwrap()).unwrap();
        prop_assert!((n - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn norm_is_monotone_in_p_on_probability_space(seed in 0u64..1000, p in 0.5f64..8.0, dp in 0.0f64..8.0) {
        let f = random_grid(&mut seeded_rng(seed), vec![Axis::new(0.0, 1.0, 50).unwrap()], false, Measure::UniformProbability)
            .unwrap();
        prop_assert!(f.lp_norm(p) <= f.lp_norm(p + dp) * (1.0 + 1e-12));
    }
}
