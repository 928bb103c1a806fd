use chernalg::grr::chern_from_character;
use chernalg::{AmbientSpace, GradedElement, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn cd() -> AmbientSpace {
    AmbientSpace::symmetric_product(3, 4)
}

/// Random element of `Cd(3,4)` from a list of (coef, theta exp, x exp).
fn element(terms: &[(i64, i64, u32, u32)]) -> GradedElement {
    let sp = cd();
    terms.iter().fold(sp.zero(), |acc, &(n, d, a, b)| {
        let m = GradedElement::monomial(sp.ring(), &[("theta", a), ("x", b)], q(n, d)).unwrap();
        &acc + &m
    })
}

fn terms() -> impl Strategy<Value = Vec<(i64, i64, u32, u32)>> {
    prop::collection::vec((-9i64..10, 1i64..6, 0u32..4, 0u32..4), 0..6)
}

proptest! {
    #[test]
    fn ring_axioms(a in terms(), b in terms(), c in terms()) {
        let (a, b, c) = (element(&a), element(&b), element(&c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
    }

    #[test]
    fn units_invert(c0 in (1i64..9), sgn in prop::bool::ANY, rest in terms()) {
        let c0 = if sgn { c0 } else { -c0 };
        let tail = element(&rest);
        let tail = &tail - &tail.degree_part(0).unwrap();
        let u = &cd().constant(q(c0, 1)) + &tail;
        let inv = u.inverse().unwrap();
        prop_assert!((&u * &inv).is_one());
        prop_assert_eq!(u.pow_int(-3).unwrap(), inv.pow_int(3).unwrap());
    }

    #[test]
    fn exp_is_additive(a in terms(), b in terms()) {
        let strip = |e: GradedElement| &e - &e.degree_part(0).unwrap();
        let (a, b) = (strip(element(&a)), strip(element(&b)));
        prop_assert_eq!((&a + &b).exp().unwrap(), &a.exp().unwrap() * &b.exp().unwrap());
    }

    /// Chern roots as an oracle: `c = prod (1 + l_i)` and `ch = sum e^{l_i}`.
    #[test]
    fn newton_roundtrip(roots in prop::collection::vec((-3i64..4, -3i64..4), 0..6)) {
        let sp = cd();
        let theta = sp.generator("theta").unwrap();
        let x = sp.generator("x").unwrap();
        let mut c = sp.one();
        let mut ch = sp.zero();
        for &(s, t) in &roots {
            let l = &theta.scale(&q(s, 1)) + &x.scale(&q(t, 1));
            c = &c * &(&sp.one() + &l);
            ch = &ch + &l.exp().unwrap();
        }
        prop_assert_eq!(chern_from_character(&ch, sp.dim()).unwrap(), c);
    }
}
