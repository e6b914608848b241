use oemde::operators::{crossover, sample_scale_factors, select_parents};
use oemde::opposition::{merge_select_best, opposite_point};
use oemde::stats::wilcoxon_rank_sum;
use oemde::{Individual, Population, RngStream, SearchBounds};
use proptest::prelude::*;

fn bounds_and_point() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
    (1usize..12).prop_flat_map(|d| {
        prop::collection::vec((-1e3f64..1e3, 1e-3f64..1e3, 0.0f64..=1.0), d).prop_map(|axes| {
            let lo: Vec<f64> = axes.iter().map(|a| a.0).collect();
            let hi: Vec<f64> = axes.iter().map(|a| a.0 + a.1).collect();
            let x: Vec<f64> = axes.iter().map(|a| a.0 + a.2 * a.1).collect();
            (lo, hi, x)
        })
    })
}

proptest! {
    #[test]
    fn opposition_is_an_involution_and_closed((lo, hi, x) in bounds_and_point()) {
        let b = SearchBounds::new(lo, hi).unwrap();
        let mut x = x;
        b.clamp(&mut x);
        let o = opposite_point(&x, &b).unwrap();
        prop_assert!(b.contains(&o));
        let back = opposite_point(&o, &b).unwrap();
        for (p, q) in x.iter().zip(&back) {
            prop_assert!((p - q).abs() <= 1e-12 * p.abs().max(1.0));
        }
    }

    #[test]
    fn crossover_inherits_from_both(seed in any::<u64>(), d in 1usize..20, cr in 0.0f64..=1.0) {
        let mut rng = RngStream::new(seed);
        let x: Vec<f64> = (0..d).map(|k| k as f64).collect();
        let v: Vec<f64> = (0..d).map(|k| -(k as f64) - 1.0).collect();
        let u = crossover(&x, &v, cr, &mut rng);
        prop_assert!(u.iter().zip(&x).zip(&v).all(|((u, x), v)| u == x || u == v));
        prop_assert!(u.iter().zip(&v).any(|(u, v)| u == v));
    }

    #[test]
    fn parents_are_distinct_and_exclude_target(seed in any::<u64>(), np in 4usize..15, j in 1usize..4) {
        let mut rng = RngStream::new(seed);
        let target = (seed as usize) % np;
        let picks = select_parents(np, target, j, &mut rng).unwrap();
        let mut sorted = picks.clone();
        sorted.sort_unstable();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), j);
        prop_assert!(picks.iter().all(|&p| p < np && p != target));
    }

    #[test]
    fn scale_factors_stay_in_range(seed in any::<u64>(), d in 1usize..200) {
        let f = sample_scale_factors(d, &mut RngStream::new(seed));
        prop_assert!(f.values().iter().all(|v| (0.1..1.5).contains(v)));
    }

    #[test]
    fn merge_keeps_incumbent(
        a in prop::collection::vec(-1e6f64..1e6, 1..10),
        seed in any::<u64>(),
    ) {
        let mut rng = RngStream::new(seed);
        let p = Population::new(a.iter().map(|&f| Individual::evaluated(vec![f], f)).collect(), 0);
        let q = Population::new(a.iter().map(|_| { let f = rng.uniform_range(-1e6, 1e6); Individual::evaluated(vec![f], f) }).collect(), 0);
        let merged = merge_select_best(&p, &q).unwrap();
        prop_assert_eq!(merged.len(), a.len());
        let best_p = a.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert!(merged.best().unwrap().fitness().unwrap() <= best_p);
    }

    #[test]
    fn rank_sum_symmetry_and_scale(
        a in prop::collection::vec(-1e3f64..1e3, 2..20),
        b in prop::collection::vec(-1e3f64..1e3, 2..20),
        c in 1e-3f64..1e3,
    ) {
        let ab = wilcoxon_rank_sum(&a, &b, 0.05).unwrap();
        let ba = wilcoxon_rank_sum(&b, &a, 0.05).unwrap();
        prop_assert_eq!(ab.p_value, ba.p_value);
        prop_assert_eq!(ab.sign, ba.sign.flipped());
        prop_assert!((0.0..=1.0).contains(&ab.p_value));

        let ca: Vec<f64> = a.iter().map(|v| c * v).collect();
        let cb: Vec<f64> = b.iter().map(|v| c * v).collect();
        // scaling can only merge values closer than an ulp; skip those
        let order = |x: &[f64], y: &[f64]| {
            let mut idx: Vec<(f64, usize)> = x.iter().chain(y).copied().zip(0..).collect();
            idx.sort_by(|p, q| p.0.total_cmp(&q.0));
            idx.windows(2).map(|w| w[0].0 == w[1].0).collect::<Vec<_>>()
        };
        prop_assume!(order(&a, &b) == order(&ca, &cb));
        prop_assert_eq!(wilcoxon_rank_sum(&ca, &cb, 0.05).unwrap().sign, ab.sign);
    }
}
