use proptest::prelude::*;
use sharppoly::exactpoly::{is_member, BivariatePoly, UnivariatePoly};
use sharppoly::{Monomial, Rational};

fn poly_strategy(max_deg: u32) -> impl Strategy<Value = BivariatePoly> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, -6i64..=6, 1i64..=4), 0..7).prop_map(move |ts| {
        BivariatePoly::from_terms(
            ts.into_iter()
                .filter(|(j, k, _, _)| j + k <= max_deg)
                .map(|(j, k, n, d)| (Monomial::new(j, k), Rational::new(n, d))),
        )
    })
}

/// Starting from `x + y`, replace terms `c m` by `c m (x + y)`; every step
/// stays a member for the new degree.
fn member_strategy() -> impl Strategy<Value = BivariatePoly> {
    prop::collection::vec((any::<prop::sample::Index>(), 1i64..=3, 1i64..=3), 0..8).prop_map(|steps| {
        let line = BivariatePoly::line_power(1);
        let mut p = line.clone();
        for (idx, num, den) in steps {
            let terms: Vec<(Monomial, Rational)> = p.terms().map(|(m, c)| (*m, c.clone())).collect();
            let (m, c) = &terms[idx.index(terms.len())];
            // Split off a fraction of the term, no more than all of it.
            let part = &Rational::new(num.min(den), den) * c;
            let piece = BivariatePoly::monomial(*m, part.clone());
            p = &(&p - &piece) + &(&piece * &line);
        }
        p
    })
}

fn eval_line(u: &UnivariatePoly, x: &Rational) -> Rational {
    u.coeffs().iter().rev().fold(Rational::zero(), |acc, c| &(&acc * x) + c)
}

proptest! {
    #[test]
    fn membership_matches_its_definition(p in poly_strategy(4)) {
        let Some(d) = p.degree() else { return Ok(()); };
        let by_definition = p.restrict_to_line().is_one() && p.terms().all(|(_, c)| !c.is_negative());
        prop_assert_eq!(is_member(&p, d).is_member(), by_definition);
    }

    #[test]
    fn split_members_are_members(p in member_strategy()) {
        let d = p.degree().unwrap();
        prop_assert!(is_member(&p, d).is_member(), "{}", p);
        if d > 1 {
            prop_assert!(!is_member(&p, d - 1).is_member());
        }
    }

    #[test]
    fn quotient_division_is_exact(q in poly_strategy(4)) {
        let p = &(&BivariatePoly::line() * &q) + &BivariatePoly::one();
        prop_assert_eq!(p.quotient_by_line().unwrap(), q);
    }

    #[test]
    fn quotient_rejects_off_line(p in poly_strategy(4)) {
        prop_assert_eq!(p.quotient_by_line().is_ok(), p.restrict_to_line().is_one());
    }

    #[test]
    fn restriction_is_a_ring_homomorphism(p in poly_strategy(3), q in poly_strategy(3), x in -5i64..=5) {
        let x = Rational::from_integer(x);
        let (rp, rq) = (p.restrict_to_line(), q.restrict_to_line());
        prop_assert_eq!((&p * &q).restrict_to_line(), rp.mul(&rq));
        prop_assert_eq!(eval_line(&(&p + &q).restrict_to_line(), &x), &eval_line(&rp, &x) + &eval_line(&rq, &x));
        let y = &Rational::one() - &x;
        prop_assert_eq!(eval_line(&rp, &x), p.eval(&x, &y));
    }

    #[test]
    fn canonical_form_is_idempotent_and_swap_invariant(p in poly_strategy(5)) {
        let c = p.canonical_form();
        prop_assert_eq!(c.canonical_form(), c.clone());
        prop_assert_eq!(p.swap_vars().canonical_form(), c.clone());
        prop_assert!(c == p || c == p.swap_vars());
    }

    #[test]
    fn text_round_trip(p in member_strategy()) {
        let back: BivariatePoly = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }
}
