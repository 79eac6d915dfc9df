use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;

use sbt_core::combinatorics::{poisson_type_moment, touchard};
use sbt_core::operator::{
    diff, katriel_check, raising_charlier, sheffer_s, sheffer_s_inv, shift, shift_by_taylor,
    PolyOperator,
};
use sbt_core::orthogonal::{charlier_recurrence, hermite_recurrence, hermite_tilde};
use sbt_core::rational::{factorial, int, pow, rat, to_f64};
use sbt_core::series::expm1_scaled;
use sbt_core::transform::{
    bargmann_inner, gaussian_transform_poly, inner_product_gaussian, inner_product_l2pi,
    inverse_transform, transform_apply, transform_poly, transform_unitarity_check,
    BargmannElement, GridFunction, PoissonTypeMeasure,
};
use sbt_core::{ModelParams, Poly, Rational};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=7).prop_map(|(n, d)| rat(n, d))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn params() -> impl Strategy<Value = ModelParams> {
    (positive_rational(), positive_rational()).prop_map(|(a, s)| ModelParams::new(a, s).unwrap())
}

fn poly(max_degree: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_rational(), 1..=max_degree + 1).prop_map(Poly::new)
}

#[test]
fn touchard_generating_function() {
    let order = 12;
    let g = expm1_scaled(&int(1), order);
    for z in [rat(1, 3), rat(-4, 5), int(2), rat(9, 7), rat(-1, 2)] {
        let series = g.scale(&z).exp().unwrap();
        for n in 0..=order {
            let lhs = series.coeff(n) * Rational::from_integer(factorial(n));
            assert_eq!(lhs, touchard(n).eval(&z), "z={z} n={n}");
        }
    }
}

#[test]
fn moments_match_floating_summation() {
    for p in ModelParams::standard_sets() {
        let measure = PoissonTypeMeasure::new(&p);
        let alpha = to_f64(p.alpha());
        for m in 0..=10 {
            let sum: f64 = (0..300)
                .map(|n| measure.weight(n) * (alpha * n as f64).powi(m as i32))
                .sum();
            let exact = to_f64(&poisson_type_moment(m, &p));
            assert!((sum - exact).abs() <= 1e-10 * exact, "{p} m={m}: {sum} vs {exact}");
        }
    }
}

#[test]
fn measure_mean_and_variance() {
    for p in ModelParams::standard_sets() {
        let m1 = poisson_type_moment(1, &p);
        let m2 = poisson_type_moment(2, &p);
        assert_eq!(m1, p.mean());
        assert_eq!(&m2 - &m1 * &m1, p.sigma().clone());
    }
}

#[test]
fn raising_operator_climbs_the_basis() {
    for p in ModelParams::standard_sets() {
        let basis = charlier_recurrence(&p, 13);
        let up = raising_charlier(&p, 12);
        for n in 0..=12 {
            assert_eq!(&up.apply(basis.poly(n)).unwrap(), basis.poly(n + 1));
        }
    }
}

#[test]
fn inverse_transform_round_trip() {
    let p = ModelParams::new(rat(1, 2), rat(3, 4)).unwrap();
    let q = Poly::new(vec![rat(1, 3), int(-2), rat(5, 4), int(1)]);
    let image = transform_poly(&q, &p);
    let element = BargmannElement::new(
        image.coeffs().iter().map(|c| Complex64::new(to_f64(c), 0.0)).collect(),
        p.sigma().clone(),
    );
    let grid = inverse_transform(&element, &p, 20).unwrap();
    let expected = GridFunction::sample(&q, &p, 20);
    for (a, b) in grid.values().iter().zip(expected.values()) {
        assert!((a - b).norm() <= 1e-9 * b.norm().max(1.0));
    }
}

#[test]
fn hermite_orthogonality_small() {
    let s = rat(3, 4);
    let basis = hermite_recurrence(&s, 6).unwrap();
    for m in 0..=6 {
        for n in 0..=6 {
            let v = inner_product_gaussian(basis.poly(m), basis.poly(n), &s);
            if m == n {
                assert_eq!(v, Rational::from_integer(factorial(n)) * pow(&s, n));
            } else {
                assert!(v.is_zero());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boole_series_is_exact(h in small_rational(), p in poly(10)) {
        let e = shift(&h, 10);
        prop_assert_eq!(e.apply(&p).unwrap(), p.shift(&h));
        prop_assert_eq!(shift_by_taylor(&h, 10).apply(&p).unwrap(), p.shift(&h));
    }

    #[test]
    fn shifts_compose_additively(a in small_rational(), b in small_rational()) {
        let lhs = shift(&a, 8).compose(&shift(&b, 8)).unwrap();
        prop_assert_eq!(lhs, shift(&(&a + &b), 8));
    }

    #[test]
    fn derivative_commutes_with_shift(h in small_rational()) {
        let d = diff(9);
        let e = shift(&h, 9);
        prop_assert_eq!(d.compose(&e).unwrap(), e.compose(&d).unwrap());
    }

    #[test]
    fn sheffer_pair_is_inverse(p in params()) {
        let id = PolyOperator::identity(8);
        prop_assert_eq!(sheffer_s(&p, 8).compose(&sheffer_s_inv(&p, 8)).unwrap(), id);
    }

    #[test]
    fn katriel_on_random_parameters(p in params(), n in 0usize..=5) {
        prop_assert!(katriel_check(&p, n, 10).unwrap().holds());
    }

    #[test]
    fn charlier_orthogonality(p in params(), m in 0usize..=7, n in 0usize..=7) {
        let basis = charlier_recurrence(&p, 7);
        let v = inner_product_l2pi(basis.poly(m), basis.poly(n), &p);
        if m == n {
            prop_assert_eq!(v, Rational::from_integer(factorial(n)) * pow(p.sigma(), n));
        } else {
            prop_assert!(v.is_zero());
        }
    }

    #[test]
    fn unitarity_on_random_polynomials(p in params(), a in poly(6), b in poly(6)) {
        let r = transform_unitarity_check(&a, &b, &p);
        prop_assert!(r.passed(), "{} vs {}", r.l2_side, r.bargmann_side);
    }

    #[test]
    fn routes_agree(a in poly(5), re in -1.5f64..1.5, im in -1.5f64..1.5) {
        let p = ModelParams::new(int(1), int(1)).unwrap();
        let z = Complex64::new(re, im);
        let exact = transform_poly(&a, &p).eval_complex(z);
        let summed = transform_apply(&GridFunction::sample(&a, &p, 80), &p, z).value;
        prop_assert!((exact - summed).norm() <= 1e-9 * exact.norm().max(1.0));
    }

    #[test]
    fn gaussian_transform_images(s in positive_rational(), n in 0usize..=10) {
        prop_assert_eq!(gaussian_transform_poly(&Poly::monomial(n), &s).unwrap(), hermite_tilde(&s, n).unwrap());
    }

    #[test]
    fn bargmann_inner_is_hermitian(
        f in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..8),
        g in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..8),
    ) {
        let to = |v: &[(f64, f64)]| BargmannElement::new(v.iter().map(|(a, b)| Complex64::new(*a, *b)).collect(), rat(3, 4));
        let (f, g) = (to(&f), to(&g));
        let fg = bargmann_inner(&f, &g).unwrap();
        let gf = bargmann_inner(&g, &f).unwrap();
        prop_assert!((fg - gf.conj()).norm() <= 1e-12 * fg.norm().max(1.0));
        prop_assert!(bargmann_inner(&f, &f).unwrap().re >= 0.0);
    }
}
