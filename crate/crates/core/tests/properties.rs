use dowling::polynomials::BlockPolynomial;
use dowling::sampler::rng_stream;
use dowling::{
    count_table, moments_direct, moments_ratio, newton_inequalities, second_divided_difference,
    solve_saddle, ColorParams, ColoredPartition, SaddleParams, Sampler,
};
use num_bigint::BigUint;
use proptest::prelude::*;

fn palette() -> impl Strategy<Value = ColorParams> {
    (1u32..=5, 1u32..=5).prop_map(|(c, m)| ColorParams::new(c, m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_inverts_unrank(params in palette(), n in 0usize..40, seed in any::<u64>()) {
        let sampler = Sampler::new(params, n);
        let (rank, partition) = sampler.sample(n, &mut rng_stream(seed, 0)).unwrap();
        prop_assert!(partition.check(&params).is_ok());
        prop_assert_eq!(sampler.rank(&partition).unwrap(), rank);
    }

    #[test]
    fn text_form_round_trips(params in palette(), n in 1usize..30, seed in any::<u64>()) {
        let sampler = Sampler::new(params, n);
        let (_, partition) = sampler.sample(n, &mut rng_stream(seed, 3)).unwrap();
        let parsed: ColoredPartition = partition.to_string().parse().unwrap();
        prop_assert_eq!(parsed, partition);
    }

    #[test]
    fn moment_routes_agree(params in palette(), n in 0usize..80) {
        prop_assert!(moments_direct(params, n).exact_eq(&moments_ratio(params, n)));
    }

    #[test]
    fn newton_holds_on_every_row(params in palette(), n in 2usize..60) {
        let table = count_table(params, n);
        prop_assert!(newton_inequalities(&BlockPolynomial::from_table(&table, n).unwrap()));
    }

    #[test]
    fn saddle_is_monotone_in_x(c in 0u32..4, m in 1u32..4, x in 1.0f64..1e6, bump in 1e-3f64..10.0) {
        let params = SaddleParams::new(c, m).unwrap();
        let lo = solve_saddle(params, x).unwrap();
        let hi = solve_saddle(params, x * (1.0 + bump)).unwrap();
        prop_assert!(lo.r < hi.r);
        prop_assert!(lo.residual.abs() <= 1e-12 * x);
        prop_assert!(lo.iterations <= 60);
    }

    #[test]
    fn divided_difference_within_second_derivative_bounds(
        a in 0.05f64..4.0, width in 0.2f64..2.0, frac in 0.1f64..0.9, c in 0u32..3, m in 1u32..3,
    ) {
        let b = a + width;
        let mid = a + frac * width;
        let (cf, mf) = (c as f64, m as f64);
        // (h, h''/2 lower, h''/2 upper) with h'' increasing on [a, b].
        let half_second = |f: &dyn Fn(f64) -> f64| (f(a) / 2.0, f(b) / 2.0);
        type Case = (Box<dyn Fn(f64) -> f64>, (f64, f64));
        let cases: Vec<Case> = vec![
            (Box::new(f64::exp), half_second(&|x: f64| x.exp())),
            (Box::new(|x: f64| x * x.exp()), half_second(&|x: f64| (x + 2.0) * x.exp())),
            (
                Box::new(move |x: f64| x * ((mf * x).exp() + cf)),
                half_second(&|x: f64| (mf * mf * x + 2.0 * mf) * (mf * x).exp()),
            ),
        ];
        for (h, (lo, hi)) in cases {
            let dd = second_divided_difference(&h, a, b, mid).unwrap();
            let slack = 1e-7 * hi.abs().max(1.0);
            prop_assert!(dd >= lo - slack && dd <= hi + slack, "{dd} not in [{lo}, {hi}]");
        }
    }
}

#[test]
fn per_k_counts_match_table_under_unranking() {
    let params = ColorParams::new(2, 3).unwrap();
    let sampler = Sampler::new(params, 5);
    let size: u64 = sampler.table().total(5).unwrap().try_into().unwrap();
    let mut per_k = [0u64; 6];
    for r in 0..size {
        per_k[sampler.unrank(5, &BigUint::from(r)).unwrap().k()] += 1;
    }
    for (k, &count) in per_k.iter().enumerate() {
        assert_eq!(BigUint::from(count), sampler.table().get(5, k).unwrap());
    }
}
