use effdof_core::applications::{
    jackknife_df, mi_total_df, welch_corrected_df, MiVariance, PseudoValueSet, TwoSampleSummary,
};
use effdof_core::{
    boardman_df, corrected_df, design_effect, kish_neff, relvariance, satterthwaite_df,
    satterthwaite_df_harmonic, ComponentSet, WeightVector,
};
use proptest::prelude::*;

const REL: f64 = 1e-12;

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL * a.abs().max(b.abs())
}

fn triples(max_k: usize) -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((0.01f64..10.0, 0.01f64..10.0, 1.0f64..100.0), 1..=max_k)
}

fn set(t: &[(f64, f64, f64)]) -> ComponentSet {
    ComponentSet::from_triples(t.iter().copied()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn scale_invariance(t in triples(20), c in prop::sample::select(vec![1e-6, 0.5, 3.0, 1e6]), r in 1e-3f64..1e3) {
        let base = set(&t);
        for factor in [c, r] {
            let scaled = set(&t.iter().map(|&(w, s, nu)| (factor * w, s, nu)).collect::<Vec<_>>());
            prop_assert!(rel_close(satterthwaite_df(&base).unwrap().value, satterthwaite_df(&scaled).unwrap().value));
            prop_assert!(rel_close(corrected_df(&base).unwrap().value, corrected_df(&scaled).unwrap().value));
            prop_assert!(rel_close(boardman_df(&base).unwrap().value, boardman_df(&scaled).unwrap().value));
        }
    }

    #[test]
    fn harmonic_form_matches(t in triples(20)) {
        let s = set(&t);
        prop_assert!(rel_close(satterthwaite_df_harmonic(&s).unwrap(), satterthwaite_df(&s).unwrap().value));
    }

    #[test]
    fn single_component_fixed_point(w in 0.01f64..100.0, s in 1e-3f64..1e3, nu in 0.1f64..1000.0) {
        let one = set(&[(w, s, nu)]);
        prop_assert_eq!(satterthwaite_df(&one).unwrap().value, nu);
        prop_assert_eq!(corrected_df(&one).unwrap().value, nu);
        prop_assert_eq!(boardman_df(&one).unwrap().value, nu + 2.0);
        prop_assert!(rel_close(satterthwaite_df_harmonic(&one).unwrap(), nu));
    }

    #[test]
    fn equal_variances_reproduce_kish(
        w in prop::collection::vec(0.01f64..10.0, 1..=20),
        s0 in 0.01f64..100.0,
        nu in 1.0f64..100.0,
    ) {
        let s = set(&w.iter().map(|&w| (w, s0, nu)).collect::<Vec<_>>());
        let n_eff = kish_neff(&WeightVector::new(w.clone()).unwrap());
        prop_assert!(rel_close(satterthwaite_df(&s).unwrap().value, nu * n_eff));
        prop_assert!(rel_close(corrected_df(&s).unwrap().value, (nu + 2.0) * n_eff - 2.0));
    }

    #[test]
    fn design_effect_times_neff_is_n(w in prop::collection::vec(0.0f64..10.0, 1..=50)) {
        prop_assume!(w.iter().any(|x| *x > 0.0));
        let n = w.len() as f64;
        let wv = WeightVector::new(w).unwrap();
        let n_eff = kish_neff(&wv);
        prop_assert!(rel_close(design_effect(&wv) * n_eff, n));
        prop_assert!(n_eff >= 1.0 - 1e-12);
        prop_assert!(n_eff <= wv.positive_count() as f64 * (1.0 + 1e-12));
        prop_assert!(relvariance(&wv) >= 0.0);
    }

    #[test]
    fn boardman_is_corrected_plus_two(t in triples(20)) {
        let s = set(&t);
        prop_assert!(rel_close(boardman_df(&s).unwrap().value, corrected_df(&s).unwrap().value + 2.0));
    }

    #[test]
    fn equal_dof_orders_corrected_above_satterthwaite(
        ws in prop::collection::vec((0.01f64..10.0, 0.01f64..10.0), 1..=20),
        nu in 0.5f64..100.0,
    ) {
        let s = set(&ws.iter().map(|&(w, v)| (w, v, nu)).collect::<Vec<_>>());
        prop_assert!(corrected_df(&s).unwrap().value >= satterthwaite_df(&s).unwrap().value);
    }

    #[test]
    fn permutation_invariance(t in triples(20), seed in any::<u64>()) {
        let mut shuffled = t.clone();
        // Deterministic Fisher-Yates from the proptest-provided seed.
        let mut state = seed | 1;
        for i in (1..shuffled.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            shuffled.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let (a, b) = (set(&t), set(&shuffled));
        prop_assert!(rel_close(satterthwaite_df(&a).unwrap().value, satterthwaite_df(&b).unwrap().value));
        prop_assert!(rel_close(corrected_df(&a).unwrap().value, corrected_df(&b).unwrap().value));
        let wa = WeightVector::new(t.iter().map(|x| x.0).collect()).unwrap();
        let wb = WeightVector::new(shuffled.iter().map(|x| x.0).collect()).unwrap();
        prop_assert!(rel_close(kish_neff(&wa), kish_neff(&wb)));
        prop_assert!((relvariance(&wa) - relvariance(&wb)).abs() <= 1e-12 * (1.0 + relvariance(&wa)));
    }

    #[test]
    fn relvariance_zero_only_for_equal_weights(w0 in 0.01f64..10.0, n in 1usize..30, bump in 1e-3f64..1.0) {
        let equal = WeightVector::new(vec![w0; n]).unwrap();
        prop_assert!(relvariance(&equal) < 1e-24);
        let mut w = vec![w0; n + 1];
        w[0] += bump;
        prop_assert!(relvariance(&WeightVector::new(w).unwrap()) > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn estimates_bounded_below_by_min_dof(t in triples(20)) {
        let s = set(&t);
        let min_nu = s.min_dof();
        prop_assert!(satterthwaite_df(&s).unwrap().value >= min_nu);
        prop_assert!(corrected_df(&s).unwrap().value >= min_nu);
    }
}

fn pseudo_values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, 2..=30).prop_filter("not constant", |v| {
        v.iter().any(|x| (x - v[0]).abs() > 1e-3)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn jackknife_matches_direct_formula_and_bounds(t in pseudo_values()) {
        let pv = PseudoValueSet::new(t.clone()).unwrap();
        let mean = t.iter().sum::<f64>() / t.len() as f64;
        let d2: f64 = t.iter().map(|x| (x - mean).powi(2)).sum();
        let d4: f64 = t.iter().map(|x| (x - mean).powi(4)).sum();
        let direct = 3.0 * d2 * d2 / d4 - 2.0;
        let v = jackknife_df(&pv).unwrap();
        prop_assert!((v - direct).abs() <= 1e-9 * direct);
        prop_assert!(v >= 1.0);
    }

    #[test]
    fn jackknife_location_scale_invariance(t in pseudo_values(), shift in -1e3f64..1e3, c in prop_oneof![-10.0f64..-0.1, 0.1f64..10.0]) {
        let base = jackknife_df(&PseudoValueSet::new(t.clone()).unwrap()).unwrap();
        let moved = jackknife_df(&PseudoValueSet::new(t.iter().map(|x| c * x + shift).collect()).unwrap()).unwrap();
        prop_assert!((base - moved).abs() <= 1e-9 * base);
        let mut rev = t.clone();
        rev.reverse();
        let reversed = jackknife_df(&PseudoValueSet::new(rev).unwrap()).unwrap();
        prop_assert!((base - reversed).abs() <= 1e-12 * base);
    }

    #[test]
    fn delegation_to_corrected(
        t in pseudo_values(),
        vs in 0.0f64..10.0, nus in 1.0f64..500.0, vi in 0.0f64..10.0, m in 2u32..100,
        n1 in 2u64..1000, n2 in 2u64..1000, s1 in 0.0f64..10.0, s2 in 0.0f64..10.0,
    ) {
        let pv = PseudoValueSet::new(t).unwrap();
        let induced = ComponentSet::from_triples(pv.deviations().iter().map(|d| (1.0, d * d, 1.0))).unwrap();
        prop_assert!(rel_close(jackknife_df(&pv).unwrap(), corrected_df(&induced).unwrap().value));

        if vs + vi > 0.0 {
            let mi = MiVariance::new(vs, nus, vi, m).unwrap();
            let mf = f64::from(m);
            let induced = ComponentSet::from_triples([(1.0, vs, nus), ((mf + 1.0) / mf, vi, mf - 1.0)]).unwrap();
            prop_assert!(rel_close(mi_total_df(&mi).unwrap(), corrected_df(&induced).unwrap().value));
        }

        if s1 + s2 > 0.0 {
            let ts = TwoSampleSummary::new(n1, n2, s1, s2).unwrap();
            let (a, b) = (n1 as f64, n2 as f64);
            let induced = ComponentSet::from_triples([(1.0 / a, s1, a - 1.0), (1.0 / b, s2, b - 1.0)]).unwrap();
            let v = welch_corrected_df(&ts).unwrap();
            prop_assert!(rel_close(v, corrected_df(&induced).unwrap().value));
            prop_assert!(rel_close(v, welch_corrected_df(&ts.swapped()).unwrap()));
        }
    }

    #[test]
    fn mi_single_source_exact(v in 1e-3f64..10.0, nus in 1.0f64..500.0, m in 2u32..100) {
        prop_assert_eq!(mi_total_df(&MiVariance::new(v, nus, 0.0, m).unwrap()).unwrap(), nus);
        prop_assert_eq!(mi_total_df(&MiVariance::new(0.0, nus, v, m).unwrap()).unwrap(), f64::from(m) - 1.0);
    }
}
