use chernalg::expr::{eval_str, Value};
use chernalg::ring::factorial;
use chernalg::{AmbientSpace, Rational};
use num_bigint::BigInt;

fn scalar(src: &str, sp: &AmbientSpace) -> Rational {
    match eval_str(src, sp).unwrap() {
        Value::Scalar(q) => q,
        Value::Element(e) => panic!("{src}: expected a number, got class {e}"),
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[test]
fn integration_is_linear() {
    let sp = AmbientSpace::symmetric_product(5, 3);
    let a = "theta^2*x + 3*x^3 - 1/2*theta^3";
    let b = "theta*x^2 - x^3";
    let lhs = scalar(&format!("integrate(2*({a}) - 5*({b}))"), &sp);
    let rhs = int(2) * scalar(&format!("integrate({a})"), &sp) - int(5) * scalar(&format!("integrate({b})"), &sp);
    assert_eq!(lhs, rhs);
}

#[test]
fn monomial_rule_on_symmetric_products() {
    for g in 0..=6u32 {
        for d in 0..=5u32 {
            let sp = AmbientSpace::symmetric_product(g, d);
            for k in 0..=d {
                let v = scalar(&format!("integrate(theta^{k} * x^{})", d - k), &sp);
                let want = if k > g {
                    int(0)
                } else {
                    Rational::from_integer(factorial(g) / factorial(g - k))
                };
                assert_eq!(v, want, "g={g} d={d} k={k}");
            }
        }
    }
}

#[test]
fn products_factorize() {
    let sp = AmbientSpace::parse("P(2)xCd(3,2)").unwrap();
    // only the (2, 2) bidegree part survives
    let v = scalar("integrate((p1.h + p2.x + p2.theta)^4)", &sp);
    let p2 = AmbientSpace::symmetric_product(3, 2);
    let inner = scalar("integrate((x + theta)^2)", &p2);
    assert_eq!(v, int(6) * inner);
    assert_eq!(scalar("integrate(p1.h^3 * p2.x)", &sp), int(0));
}

#[test]
fn genus_zero_symmetric_product_is_projective() {
    for d in 0..=7u32 {
        let cd = AmbientSpace::symmetric_product(0, d);
        let p = AmbientSpace::projective(d);
        let a = scalar(&format!("integrate(degree((1+x)^{} * exp(-theta/(1+x)), {d}))", d + 1), &cd);
        let b = scalar(&format!("integrate(degree((1+h)^{}, {d}))", d + 1), &p);
        assert_eq!(a, b, "d={d}");
        assert_eq!(a, int(i64::from(d) + 1));
    }
}

#[test]
fn jacobian_top_power() {
    for g in 0..=8u32 {
        let jac = AmbientSpace::jacobian(g);
        assert_eq!(
            scalar(&format!("integrate(theta^{g})"), &jac),
            Rational::from_integer(factorial(g))
        );
    }
}
