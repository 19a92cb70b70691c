use ltfsm_core::fbm::fbm_path;
use ltfsm_core::localtime::{discretized_occupation, KernelBandwidth};
use ltfsm_core::ltfsm::{tune, SeriesConfig};
use ltfsm_core::shotnoise::{h_map, SeriesSum};
use ltfsm_core::stochastics::{poisson_arrivals, RandomStream};
use ltfsm_core::validation::{empirical_cf, ks_distance, linreg_r2};
use ltfsm_core::SamplePath;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn arrivals_strictly_increase(seed in any::<u64>(), n in 1usize..500) {
        let a = poisson_arrivals(n, &mut RandomStream::new(seed, 0)).unwrap();
        prop_assert_eq!(a.len(), n);
        prop_assert!(a.as_slice()[0] > 0.0);
        prop_assert!(a.as_slice().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn occupation_curves_are_nondecreasing(
        seed in any::<u64>(),
        hurst in 0.1f64..0.9,
        m in 2usize..200,
        k in 1u64..50,
        x in -1.0f64..1.0,
    ) {
        let p = fbm_path(hurst, 1.0, m, &mut RandomStream::new(seed, 1)).unwrap();
        let times: Vec<f64> = (0..=25).map(|i| i as f64 / 25.0).collect();
        let c = discretized_occupation(&p, KernelBandwidth::new(k).unwrap(), x, &times).unwrap();
        prop_assert!(c.values.iter().all(|&v| v >= 0.0));
        prop_assert!(c.values.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn linreg_invariant_under_affine_x(
        ys in prop::collection::vec(-10.0f64..10.0, 5..40),
        a in 0.1f64..10.0,
        b in -5.0f64..5.0,
    ) {
        let x: Vec<f64> = (0..ys.len()).map(|i| i as f64).collect();
        let xs: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let f = linreg_r2(&x, &ys).unwrap();
        let g = linreg_r2(&xs, &ys).unwrap();
        prop_assert!((f.r2 - g.r2).abs() < 1e-9);
        prop_assert!((f.slope - a * g.slope).abs() < 1e-9 * (1.0 + f.slope.abs()));
        prop_assert!(f.r2 <= 1.0 + 1e-12 && f.r2 >= -1e-12);
    }

    #[test]
    fn ks_symmetric_and_rank_invariant(
        a in prop::collection::vec(-5.0f64..5.0, 1..60),
        b in prop::collection::vec(-5.0f64..5.0, 1..60),
    ) {
        let d = ks_distance(&a, &b).unwrap();
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert_eq!(d, ks_distance(&b, &a).unwrap());
        let f = |v: &[f64]| v.iter().map(|x| x.exp()).collect::<Vec<_>>();
        prop_assert_eq!(d, ks_distance(&f(&a), &f(&b)).unwrap());
    }

    #[test]
    fn tuning_is_feasible(
        alpha in 0.2f64..1.95,
        hurst in 0.05f64..0.95,
        eps in 0.3f64..1.0,
        q_extra in 0.01f64..3.0,
    ) {
        let mut c = SeriesConfig::new(alpha, hurst);
        c.epsilon = eps;
        c.q = 2.0 + q_extra;
        c.delta = 0.5 * (1.0 / (2.0 * hurst) - 0.5);
        c.delta_prime = 0.5 * hurst;
        c.beta = 0.0;
        if let Ok(t) = tune(&c) {
            let (p, n) = (t.truncation as f64, t.crossover as f64);
            prop_assert!((p + 1.0) * alpha > (n + 1.0) * alpha);
            prop_assert!((n + 1.0) * alpha > c.q);
            for i in 1..=t.truncation.min(50) {
                let m = t.mesh.points(i, i as f64);
                prop_assert!(m >= 1 && m <= c.max_points);
            }
        }
    }

    #[test]
    fn series_sum_is_sum_of_h_maps(
        gammas in prop::collection::vec(0.01f64..50.0, 1..10),
        alpha in 0.1f64..2.0,
    ) {
        let inner = [0.0, 1.0, -2.0, 0.5];
        let mut sum = SeriesSum::new(alpha, inner.len()).unwrap();
        let mut direct = vec![0.0; inner.len()];
        for g in &gammas {
            sum.add(*g, 1.0, &inner).unwrap();
            for (d, v) in direct.iter_mut().zip(h_map(*g, alpha, &inner).unwrap()) {
                *d += v;
            }
        }
        for (a, b) in sum.values().iter().zip(&direct) {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn cf_modulus_bounded(seed in any::<u64>(), u in 0.01f64..5.0) {
        let mut s = RandomStream::new(seed, 3);
        use ltfsm_core::stochastics::Variates;
        let paths: Vec<SamplePath> = (0..200)
            .map(|_| SamplePath::new(vec![0.0, 1.0], vec![0.0, 3.0 * s.gaussian()]).unwrap())
            .collect();
        let e = empirical_cf(&paths, u).unwrap();
        for (m, se) in e.modulus().iter().zip(&e.stderr) {
            prop_assert!(*m <= 1.0 + 3.0 * se + 1e-12);
        }
    }
}
