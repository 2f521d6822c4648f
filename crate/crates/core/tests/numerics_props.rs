mod common;

use common::*;
use gptlab::numerics::{LinearProgram, LpResult, Rational, Scalar, Sign, DEFAULT_PRECISION_BITS};
use proptest::prelude::*;

fn rational_lp(small: &SmallLp) -> LinearProgram<Rational> {
    let c = small.c.iter().map(|&v| q(v, 1)).collect();
    small.rows.iter().fold(LinearProgram::new(small.n).maximize(c), |lp, (a, rel, b)| {
        lp.with_constraint(a.iter().map(|&v| q(v, 1)).collect(), *rel, q(*b, 1))
    })
}

fn ball(v: i64) -> Scalar {
    Scalar::Approx(Scalar::from_int(v).to_ball(DEFAULT_PRECISION_BITS).unwrap())
}

fn enclosure_lp(small: &SmallLp) -> LinearProgram<Scalar> {
    let c = small.c.iter().map(|&v| ball(v)).collect();
    small.rows.iter().fold(LinearProgram::new(small.n).maximize(c), |lp, (a, rel, b)| {
        lp.with_constraint(a.iter().map(|&v| ball(v)).collect(), *rel, ball(*b))
    })
}

fn coefficients() -> impl Strategy<Value = (Rational, Rational)> {
    (-20i64..=20, 1i64..=7, -20i64..=20, 1i64..=7).prop_map(|(a, p, b, r)| (q(a, p), q(b, r)))
}

fn field_pair() -> impl Strategy<Value = (Scalar, Scalar)> {
    (prop::sample::select(vec![2u32, 3, 5, 7]), coefficients(), coefficients())
        .prop_map(|(k, (a, b), (c, d))| (Scalar::quad(a, b, k), Scalar::quad(c, d, k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn optimal_points_satisfy_every_constraint_exactly(seed in any::<u64>()) {
        let small = random_lp(&mut rng(seed), 5, 7);
        let lp = rational_lp(&small);
        match lp.solve().unwrap() {
            LpResult::Optimal { value, point } => {
                prop_assert!(lp.is_feasible_point(&point));
                prop_assert_eq!(lp.objective_value(&point), value.clone());
                prop_assert_eq!(lp_oracle(&small), LpOracle::Optimal(value));
            }
            LpResult::Infeasible { certificate } => {
                prop_assert!(lp.verify_certificate(&certificate));
                prop_assert_eq!(lp_oracle(&small), LpOracle::Infeasible);
            }
            LpResult::Unbounded { point, .. } => {
                prop_assert!(lp.is_feasible_point(&point));
                prop_assert_eq!(lp_oracle(&small), LpOracle::Unbounded);
            }
        }
    }

    #[test]
    fn solving_twice_gives_identical_output(seed in any::<u64>()) {
        let lp = rational_lp(&random_lp(&mut rng(seed), 6, 8));
        prop_assert_eq!(format!("{:?}", lp.solve()), format!("{:?}", lp.solve()));
    }

    #[test]
    fn feasibility_agrees_with_the_full_solve(seed in any::<u64>()) {
        let lp = rational_lp(&random_lp(&mut rng(seed), 5, 7));
        let full = lp.solve().unwrap();
        let feasible = lp.feasible().unwrap();
        prop_assert_eq!(full.is_infeasible(), feasible.is_infeasible());
        if let LpResult::Infeasible { certificate } = feasible {
            prop_assert!(lp.verify_certificate(&certificate));
        }
    }

    #[test]
    fn enclosure_data_reaches_the_exact_verdict(seed in any::<u64>()) {
        let small = random_lp(&mut rng(seed), 4, 6);
        let exact = rational_lp(&small).solve().unwrap();
        let approx = enclosure_lp(&small).solve().unwrap();
        match (&exact, &approx) {
            (LpResult::Optimal { value: a, .. }, LpResult::Optimal { value: b, .. }) => {
                let a = Scalar::rational(a.clone()).to_f64();
                prop_assert!((a - b.to_f64()).abs() <= 1e-9, "{} vs {}", a, b);
            }
            (LpResult::Infeasible { .. }, LpResult::Infeasible { .. }) => {}
            (LpResult::Unbounded { .. }, LpResult::Unbounded { .. }) => {}
            _ => prop_assert!(false, "exact {:?}, enclosure {:?}", exact, approx),
        }
    }

    #[test]
    fn quadratic_field_is_closed_and_signs_are_exact((x, y) in field_pair()) {
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert!((&x - &x).is_zero());
        if !y.is_zero() {
            prop_assert_eq!(&(&x * &y) / &y, x.clone());
        }
        let f = x.to_f64();
        if f.abs() > 1e-9 {
            prop_assert_eq!(x.sign(), if f > 0.0 { Sign::Positive } else { Sign::Negative });
        }
        prop_assert!(x.is_exact());
    }

    #[test]
    fn tokens_round_trip((x, _) in field_pair()) {
        let back = Scalar::parse_token(&x.to_token()).unwrap();
        prop_assert!(back.identical(&x), "{} became {}", x, back);
    }
}
