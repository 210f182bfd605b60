use golden_core::field::{rat, GoldenNum};
use golden_core::measures::{density_s, density_t_from, measure_j0, StepFunction};
use golden_core::words::enumerate_matching_words;
use proptest::prelude::*;

fn interior_points(max_len: usize) -> Vec<GoldenNum> {
    let atlas = enumerate_matching_words(max_len).unwrap();
    atlas
        .records
        .iter()
        .flat_map(|r| {
            let len = r.length();
            [rat(1, 3), rat(1, 2), rat(4, 5)].map(|t| &r.alpha_minus + &len.scale(&t))
        })
        .collect()
}

/// μ(A) for T from ν for S: ν((1/β)A)/ν(J_0).
fn jump_measure(f: &StepFunction, a: &GoldenNum, b: &GoldenNum) -> GoldenNum {
    f.integrate(&a.div_beta(), &b.div_beta()).checked_div(&measure_j0(f)).unwrap()
}

#[test]
fn jump_measure_identity() {
    let ib = GoldenNum::inv_beta();
    let one = GoldenNum::one();
    for alpha in interior_points(8) {
        let f = density_s(&alpha).unwrap();
        let g = density_t_from(&f).unwrap();
        for (a, b) in [(-&ib, ib.clone()), (ib.clone(), one.clone()), (GoldenNum::zero(), one.clone())] {
            assert_eq!(g.integrate(&a, &b), jump_measure(&f, &a, &b), "alpha {}", alpha.approx_sig(15));
        }
    }
}

#[test]
fn densities_are_even_positive_and_small() {
    for alpha in interior_points(10) {
        let f = density_s(&alpha).unwrap();
        let m = golden_core::dynamics::matching_index(&alpha, 100).unwrap().matched().unwrap().m;
        assert!(f.is_even());
        assert!(f.min_value().is_positive());
        assert!(f.breakpoints().len() <= 4 * m + 2, "alpha {}", alpha.approx_sig(15));
        let g = density_t_from(&f).unwrap();
        assert!(g.is_even());
        assert!(g.min_value().is_positive());
        let scaled: Vec<GoldenNum> = f.breakpoints().iter().map(GoldenNum::mul_beta).collect();
        for y in g.breakpoints() {
            assert!(y.abs() == GoldenNum::one() || scaled.contains(y));
        }
    }
}

#[test]
fn ten_interval_density_shape() {
    let alpha: GoldenNum = "3/2".parse().unwrap();
    let f = density_s(&alpha).unwrap();
    assert!(f.breakpoints().len() <= 4 * 2 + 2);
    let g = density_t_from(&f).unwrap();
    assert_eq!(g.total(), GoldenNum::one());
}

#[test]
fn markov_parameters_have_invariant_densities() {
    for k in [-3, -2] {
        let alpha = GoldenNum::one() + GoldenNum::beta_pow(k);
        let f = density_s(&alpha).unwrap();
        assert!(f.is_invariant_under_s(&alpha).unwrap());
        assert!(f.is_even());
        assert_eq!(density_t_from(&f).unwrap().total(), GoldenNum::one());
    }
    let g = density_t_from(&density_s(&GoldenNum::one()).unwrap()).unwrap();
    assert_eq!(g, StepFunction::constant("1/2".parse().unwrap()));
    assert_eq!(measure_j0(&g), GoldenNum::inv_beta());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn random_matching_parameters(k in 1i64..400) {
        let alpha = GoldenNum::one() + (GoldenNum::beta() - GoldenNum::one()).scale(&rat(k, 400));
        match density_s(&alpha) {
            Ok(f) => {
                prop_assert_eq!(f.total(), GoldenNum::one());
                prop_assert!(f.is_even());
                prop_assert!(f.is_invariant_under_s(&alpha).unwrap());
            }
            Err(golden_core::Error::NonMatchingExact(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
