use proptest::prelude::*;
use tailspace::codes::{macwilliams_tail, LinearCode};
use tailspace::formats::{function_from_json, function_to_json};
use tailspace::influence::{influence, pivotal_probabilities, total_pivotal};
use tailspace::verify::{
    check_heat_smoothing, check_lp_poincare, check_stroock_varopoulos, check_tail_contraction, kappa, HeatMode,
    Hypercube,
};
use tailspace::{fwht, heat, inverse_fwht, tail_certificate, tail_level, BooleanKind, CubeFunction, Dyadic};

fn real_function(max_n: usize) -> impl Strategy<Value = CubeFunction> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-4.0f64..4.0, 1usize << n).prop_map(move |v| CubeFunction::real(n, v).unwrap())
    })
}

fn mean_zero_function(max_n: usize) -> impl Strategy<Value = CubeFunction> {
    real_function(max_n).prop_map(|f| {
        let m = f.mean();
        CubeFunction::real(f.n(), f.values().iter().map(|v| v - m).collect()).unwrap()
    })
}

fn boolean_function(max_n: usize) -> impl Strategy<Value = CubeFunction> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), 1usize << n).prop_map(move |v| {
            let values = v.into_iter().map(|b| if b { -1.0 } else { 1.0 }).collect();
            CubeFunction::new(n, values, BooleanKind::PlusMinusOne).unwrap()
        })
    })
}

fn code() -> impl Strategy<Value = LinearCode> {
    (1usize..=10).prop_flat_map(|len| {
        prop::collection::vec(0u32..(1 << len), 0..=4).prop_map(move |rows| LinearCode::new(len, &rows).unwrap())
    })
}

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![1.01f64..1.99, 2.01f64..10.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval(f in real_function(8)) {
        let second = f.values().iter().map(|v| v * v).sum::<f64>() / f.len() as f64;
        prop_assert!((fwht(&f).energy() - second).abs() <= 1e-12 * second.max(1.0));
    }

    #[test]
    fn transform_round_trip(f in real_function(8)) {
        let back = inverse_fwht(&fwht(&f));
        for (a, b) in back.values().iter().zip(f.values()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn heat_is_a_semigroup(f in real_function(6), s in 0.0f64..2.0, t in 0.0f64..2.0) {
        let two_steps = heat(&heat(&f, s).unwrap(), t).unwrap();
        let one_step = heat(&f, s + t).unwrap();
        for (a, b) in two_steps.values().iter().zip(one_step.values()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn heat_keeps_the_tail(f in real_function(6), t in 0.0f64..3.0) {
        let before = tail_level(&f, false);
        let after = tail_level(&heat(&f, t).unwrap(), false);
        prop_assert!(after >= before);
    }

    #[test]
    fn heat_smoothing_holds(f in mean_zero_function(5), p in 1.05f64..8.0, t in 0.001f64..3.0) {
        let cube = Hypercube::new(f.n()).unwrap();
        for mode in [HeatMode::Base, HeatMode::Kappa] {
            let r = check_heat_smoothing(&cube, f.values(), p, t, mode).unwrap();
            prop_assert!(r.pass, "{r}");
        }
    }

    #[test]
    fn lp_poincare_holds(f in mean_zero_function(5), p in 1.05f64..8.0) {
        let r = check_lp_poincare(&Hypercube::new(f.n()).unwrap(), f.values(), p).unwrap();
        prop_assert!(r.pass, "{r}");
    }

    #[test]
    fn stroock_varopoulos_pointwise(a in -5.0f64..5.0, b in -5.0f64..5.0, p in 1.01f64..10.0) {
        let r = check_stroock_varopoulos(a, b, p).unwrap();
        prop_assert!(r.pass, "{r}");
    }

    #[test]
    fn stroock_varopoulos_is_an_identity_at_two(a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let r = check_stroock_varopoulos(a, b, 2.0).unwrap();
        prop_assert!((r.lhs - r.rhs).abs() <= 1e-12 * r.rhs.abs().max(1.0));
    }

    #[test]
    fn kappa_is_self_dual(p in exponent()) {
        let k = kappa(p).unwrap().value;
        let d = kappa(p / (p - 1.0)).unwrap().value;
        prop_assert!((k - d).abs() <= 1e-9 * k.max(1.0));
        prop_assert!(k >= (p / (p - 2.0)).abs() - 1e-12);
    }

    #[test]
    fn resampling_is_half_pivotal(f in boolean_function(6)) {
        let piv = pivotal_probabilities(&f).unwrap();
        let mut sum = Dyadic::zero();
        for (i, p) in piv.iter().enumerate() {
            prop_assert_eq!(influence(&f, i + 1).unwrap(), p.half());
            sum = &sum + p;
        }
        prop_assert_eq!(total_pivotal(&f).unwrap(), sum);
    }

    #[test]
    fn pivotal_matches_degree_weights(f in boolean_function(6)) {
        // Σ_i P[f(x) != f(x^i)] = Σ_S |S| f̂(S)²
        let spectrum = fwht(&f);
        let weighted: f64 = spectrum.coeffs().iter().enumerate().map(|(s, c)| s.count_ones() as f64 * c * c).sum();
        prop_assert!((total_pivotal(&f).unwrap().to_f64() - weighted).abs() <= 1e-12);
    }

    #[test]
    fn dual_is_an_involution(c in code()) {
        prop_assert_eq!(c.dual().dual(), c.clone());
        prop_assert_eq!(c.dim() + c.dual().dim(), c.length());
    }

    #[test]
    fn macwilliams_matches_certificates(c in code()) {
        let g = c.indicator01().unwrap();
        for k in 0..=c.length() {
            prop_assert_eq!(macwilliams_tail(&c, k).unwrap(), tail_certificate(&g, k, false).unwrap().member);
        }
    }

    #[test]
    fn function_files_round_trip(f in real_function(5)) {
        let text = function_to_json(&f, &Default::default()).unwrap();
        let (g, _) = function_from_json(&text).unwrap();
        prop_assert_eq!(g, f);
    }
}

/// For a character of degree `d >= k` the ratio of the two sides is
/// `e^{-(d - r)t}`, nonincreasing in `t`.
#[test]
fn eigenfunction_ratio_is_monotone_in_time() {
    let times = [0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 4.0];
    for n in 1..=6 {
        for s in 1usize..1 << n {
            let d = s.count_ones() as usize;
            let w = CubeFunction::character(n, s).unwrap();
            for k in 1..=d {
                for p in [1.1, 1.5, 2.0, 3.0, 6.0] {
                    let r = 2.0 * k as f64 * f64::min((p - 1.0) / p, 1.0 / p);
                    let mut last = f64::INFINITY;
                    for t in times {
                        let rep = check_tail_contraction(&w, k, p, t).unwrap();
                        assert!(rep.pass);
                        let ratio = rep.lhs / rep.rhs;
                        assert!((ratio - (-(d as f64 - r) * t).exp()).abs() < 1e-12, "n={n} s={s} k={k} p={p} t={t}");
                        assert!(ratio <= last + 1e-15);
                        last = ratio;
                    }
                }
            }
        }
    }
}
