use fracfact::ladder::{excited_state, local_energy_exact};
use fracfact::operators::{apply_a, apply_b, apply_eps, apply_h, factorization_residual};
use fracfact::powerexp::{Parity, PowerExpFunction, PowerSum, PowerTerm};
use fracfact::{LevyIndex, C64};
use proptest::prelude::*;

fn levy() -> impl Strategy<Value = LevyIndex> {
    (1.05f64..=2.0).prop_map(|a| LevyIndex::new(a).unwrap())
}

fn term() -> impl Strategy<Value = PowerTerm> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..3.0, any::<bool>()).prop_map(|(re, im, p, odd)| {
        PowerTerm::new(
            C64::new(re, im),
            p,
            if odd { Parity::Odd } else { Parity::Even },
        )
    })
}

fn member() -> impl Strategy<Value = PowerExpFunction> {
    (levy(), prop::collection::vec(term(), 0..6), any::<bool>())
        .prop_map(|(a, terms, env)| PowerExpFunction::new(a, PowerSum::from_terms(terms), env))
}

fn pair() -> impl Strategy<Value = (PowerExpFunction, PowerExpFunction)> {
    (
        levy(),
        prop::collection::vec(term(), 0..6),
        prop::collection::vec(term(), 0..6),
    )
        .prop_map(|(a, f, g)| {
            (
                PowerExpFunction::enveloped(a, PowerSum::from_terms(f)),
                PowerExpFunction::enveloped(a, PowerSum::from_terms(g)),
            )
        })
}

proptest! {
    #[test]
    fn normalize_is_idempotent(f in member()) {
        let once = f.normalize();
        prop_assert!(once.equals(&once.normalize(), 0.0));
        let twice = once.normalize();
        prop_assert_eq!(once.body().terms(), twice.body().terms());
    }

    #[test]
    fn canonical_keys_are_unique_and_sorted(f in member()) {
        let t = f.body().terms();
        for w in t.windows(2) {
            prop_assert!(w[0].power < w[1].power || (w[0].power == w[1].power && w[0].parity < w[1].parity));
        }
    }

    #[test]
    fn closure_preserves_envelope_flag(f in member(), p in -1.0f64..2.0, odd in any::<bool>()) {
        let parity = if odd { Parity::Odd } else { Parity::Even };
        for g in [f.differentiate(), f.mul_power(p, parity), f.scale(C64::new(0.5, 2.0)),
                  f.add(&f).unwrap(), apply_a(&f), apply_b(&f), apply_h(&f), apply_eps(&f)] {
            prop_assert_eq!(g.has_envelope(), f.has_envelope());
            prop_assert_eq!(g.alpha(), f.alpha());
        }
    }

    #[test]
    fn derivative_is_linear((f, g) in pair()) {
        let lhs = f.add(&g).unwrap().differentiate();
        let rhs = f.differentiate().add(&g.differentiate()).unwrap();
        prop_assert!(lhs.equals(&rhs, 1e-12));
    }

    #[test]
    fn derivative_matches_finite_difference(f in member(), k in 0.2f64..5.0, neg in any::<bool>()) {
        let k = if neg { -k } else { k };
        let h = 1e-5;
        let fd = (f.evaluate(k + h).unwrap() - f.evaluate(k - h).unwrap()) / (2.0 * h);
        let exact = f.differentiate().evaluate(k).unwrap();
        let scale = f.body().terms().iter()
            .map(|t| t.coeff.norm() * k.abs().powf(t.power) * (1.0 + t.power.abs() / k.abs() + k.abs().powf(f.alpha().half())))
            .sum::<f64>()
            .max(1e-300);
        prop_assert!((fd - exact).norm() <= 1e-6 * scale, "{} vs {}", fd, exact);
    }

    #[test]
    fn factorization_holds(f in member()) {
        prop_assert!(factorization_residual(&f).is_zero(), "{}", factorization_residual(&f));
    }

    #[test]
    fn eigen_identity_cross_multiplied(a in levy(), n in 0usize..=8) {
        let phi = excited_state(a, n).unwrap();
        let e = local_energy_exact(a, n).unwrap();
        let lhs = apply_h(&phi).mul_sum(&e.denominator);
        let rhs = phi.mul_sum(&e.numerator);
        prop_assert!(lhs.relative_mismatch(&rhs).unwrap() <= 1e-10);
    }
}
