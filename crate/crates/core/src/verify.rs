//! Verification sweeps over parameter ranges, shared by `verify --suite`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Pow;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grr::{chern_from_character, grr_pushforward, grr_pushforward_with_todd};
use crate::ring::{binom, rat, GradedElement, Monomial, Rational};
use crate::space::AmbientSpace;
use crate::sw::{
    castelnuovo_count, elliptic_closed_form, elliptic_pipeline, segre_w1d, segre_w1d_degree,
    sw_elliptic_regular, sw_ruled_b1, sw_ruled_b2_total, sw_section_invariant, EllipticSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Ring,
    Lemma45,
    Grr,
    Elliptic,
    Ruled,
    Segre,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Ring,
        Suite::Lemma45,
        Suite::Grr,
        Suite::Elliptic,
        Suite::Ruled,
        Suite::Segre,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ring => "ring",
            Suite::Lemma45 => "lemma45",
            Suite::Grr => "grr",
            Suite::Elliptic => "elliptic",
            Suite::Ruled => "ruled",
            Suite::Segre => "segre",
        }
    }

    /// `all` expands to every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Suite::ALL
            .iter()
            .find(|su| su.name() == s)
            .map(|su| vec![*su])
            .ok_or_else(|| Error::Argument(format!("unknown suite `{s}`")))
    }

    pub fn run(self) -> SuiteReport {
        let mut report = SuiteReport::new(self.name());
        match self {
            Suite::Ring => ring_suite(&mut report, 1000, 0x5eed),
            Suite::Lemma45 => lemma45_suite(&mut report),
            Suite::Grr => grr_suite(&mut report),
            Suite::Elliptic => elliptic_suite(&mut report),
            Suite::Ruled => ruled_suite(&mut report),
            Suite::Segre => segre_suite(&mut report),
        }
        report
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn new(name: &str) -> SuiteReport {
        SuiteReport {
            name: name.to_string(),
            cases: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn check_result<T>(&mut self, r: Result<T>, what: &str) {
        self.cases += 1;
        if let Err(e) = r {
            self.failures.push(format!("{what}: {e}"));
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} cases, {} failures)", self.name, self.cases, self.failures.len())
    }
}

/// Random element with small integer-over-small-denominator coefficients.
pub fn random_element<R: Rng>(rng: &mut R, space: &AmbientSpace, max_terms: usize) -> GradedElement {
    let ring = space.ring();
    let n = ring.generators().len();
    let trunc = ring.truncation();
    let terms = (0..rng.gen_range(0..=max_terms)).map(|_| {
        let mut exps = vec![0u32; n];
        let deg = rng.gen_range(0..=trunc);
        for _ in 0..deg {
            exps[rng.gen_range(0..n)] += 1;
        }
        let c = Rational::new(
            BigInt::from(rng.gen_range(-9i64..=9)),
            BigInt::from(rng.gen_range(1i64..=4)),
        );
        (Monomial::new(exps), c)
    });
    GradedElement::from_terms(ring, terms.collect::<Vec<_>>())
}

fn random_space<R: Rng>(rng: &mut R) -> AmbientSpace {
    match rng.gen_range(0..4) {
        0 => AmbientSpace::projective(rng.gen_range(0..=5)),
        1 => AmbientSpace::symmetric_product(rng.gen_range(0..=4), rng.gen_range(0..=4)),
        2 => AmbientSpace::jacobian(rng.gen_range(0..=5)),
        _ => AmbientSpace::product([
            AmbientSpace::projective(1),
            AmbientSpace::symmetric_product(rng.gen_range(0..=3), rng.gen_range(0..=3)),
        ])
        .expect("two factors"),
    }
}

/// Ring laws on `cases` random inputs per law.
pub fn ring_suite(report: &mut SuiteReport, cases: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let sp = random_space(&mut rng);
        let (u, v, w) = (
            random_element(&mut rng, &sp, 5),
            random_element(&mut rng, &sp, 5),
            random_element(&mut rng, &sp, 5),
        );
        report.check((&u + &v) + &w == &u + &(&v + &w), || format!("add assoc on {sp}"));
        report.check((&u * &v) * &w == &u * &(&v * &w), || format!("mul assoc on {sp}"));
        report.check(&u * &v == &v * &u, || format!("mul commutativity on {sp}"));
        report.check(&u * &(&v + &w) == &(&u * &v) + &(&u * &w), || {
            format!("distributivity on {sp}")
        });

        let c = Rational::new(BigInt::from(rng.gen_range(1..=7) * if rng.gen() { 1 } else { -1 }), BigInt::from(rng.gen_range(1..=3)));
        let unit = &sp.constant(c) + &augmented(&random_element(&mut rng, &sp, 4));
        report.check(
            unit.inverse().map(|i| (&unit * &i).is_one()).unwrap_or(false),
            || format!("unit inverse of `{unit}` on {sp}"),
        );

        let (a, b) = (augmented(&u), augmented(&v));
        let ok = match (a.exp(), b.exp(), (&a + &b).exp()) {
            (Ok(ea), Ok(eb), Ok(eab)) => &ea * &eb == eab,
            _ => false,
        };
        report.check(ok, || format!("exp additivity on {sp}"));

        let n = rng.gen_range(-12i64..=12);
        report.check(binomial_bridge(&sp, n), || format!("binomial theorem n={n} on {sp}"));
    }
}

fn augmented(u: &GradedElement) -> GradedElement {
    u - &GradedElement::constant(u.ring(), u.constant_term())
}

/// Coefficients of `(1+y)^n` against the generalized binomials.
fn binomial_bridge(space: &AmbientSpace, n: i64) -> bool {
    let Some(name) = space.ring().generators().first().cloned() else {
        return true;
    };
    let y = space.generator(&name).expect("listed generator");
    let Ok(p) = (&space.one() + &y).pow_int(n) else {
        return false;
    };
    (0..=space.dim()).all(|m| {
        p.coefficient_of(&[(&name, m)]).ok() == binom(n, i64::from(m)).ok()
    })
}

/// `sum_k binom(a+j+e, a-k) binom(-j, k) = binom(a+e, a)`, and the middle
/// form with `(-1)^k binom(j+k-1, k)`.
pub fn binomial_identity_holds(a: i64, j: i64, e: i64) -> Result<bool> {
    let rhs = binom(a + e, a)?;
    let mut first = rat(0);
    let mut second = rat(0);
    for k in 0..=a {
        let outer = binom(a + j + e, a - k)?;
        first += &outer * binom(-j, k)?;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        // binom(j+k-1, k) at j = 0 is binom(k-1, k): 1 for k = 0, else 0
        second += &outer * rat(sign) * binom(j + k - 1, k)?;
    }
    Ok(first == rhs && second == rhs)
}

fn lemma45_suite(report: &mut SuiteReport) {
    for a in 0..=8 {
        for j in 0..=8 {
            for e in -a..=8 {
                let ok = binomial_identity_holds(a, j, e).unwrap_or(false);
                report.check(ok, || format!("a={a} j={j} e={e}"));
            }
        }
    }
}

fn grr_suite(report: &mut SuiteReport) {
    let r = Rational::new(BigInt::from(5), BigInt::from(3));
    for chi in 0..=6i64 {
        for d in 0..=6u32 {
            for g in 0..=6u32 {
                let space = AmbientSpace::symmetric_product(g, d);
                let expect = (&space.one() + &space.generator("x").expect("x")).pow_int(chi);
                let base = grr_pushforward(chi, 0, &space);
                for n in [0i64, 1, 7] {
                    let got = grr_pushforward(chi, n, &space)
                        .and_then(|ch| chern_from_character(&ch, d));
                    report.check(
                        matches!((&got, &expect), (Ok(a), Ok(b)) if a == b),
                        || format!("chi={chi} g={g} d={d} n={n}: {got:?}"),
                    );
                    let with_r = grr_pushforward_with_todd(chi, n, &r, &space);
                    report.check(
                        matches!((&with_r, &base), (Ok(a), Ok(b)) if a == b),
                        || format!("Todd r-dependence at chi={chi} g={g} d={d} n={n}"),
                    );
                }
            }
        }
    }
}

fn elliptic_suite(report: &mut SuiteReport) {
    for chi in 1..=5 {
        for g in 0..=5 {
            for d in 0..=8 {
                let r = EllipticSpec::new(chi, g, d).and_then(|s| {
                    let p = elliptic_pipeline(&s)?;
                    let c = elliptic_closed_form(&s)?;
                    if p == c && p.is_integer() {
                        Ok(())
                    } else {
                        Err(Error::Mismatch(format!("pipeline {p} vs closed {c}")))
                    }
                });
                report.check_result(r, &format!("elliptic chi={chi} g={g} d={d}"));
            }
        }
    }
    for p_g in 0..=8 {
        for a in 0..=10 {
            report.check_result(sw_elliptic_regular(p_g, a), &format!("regular p_g={p_g} a={a}"));
        }
    }
    // genus-0 base against the regular computation with p_g = chi - 1
    for chi in 1..=6 {
        for d in 0..=6 {
            let lhs = EllipticSpec::new(chi, 0, d).and_then(|s| elliptic_pipeline(&s));
            let rhs = sw_elliptic_regular(chi - 1, d).map(|r| r.value);
            report.check(
                matches!((&lhs, &rhs), (Ok(a), Ok(b)) if a == b),
                || format!("genus-0 consistency chi={chi} d={d}"),
            );
        }
    }
}

fn ruled_suite(report: &mut SuiteReport) {
    for g in 1..=6 {
        for d in 0..=6 {
            report.check_result(sw_ruled_b1(g, d), &format!("b=1 g={g} d={d}"));
        }
    }
    for d in 1..=5i64 {
        for g in [2 * d + 1, 2 * d, 2 * d - 1, 2 * d - 2] {
            if g < 2 {
                continue;
            }
            let r = sw_ruled_b2_total(g, d);
            let ok = matches!(&r, Ok(res) if res.value == Rational::from_integer(BigInt::from(2).pow(g as u32)));
            report.check(ok, || format!("b=2 total g={g} d={d}: {r:?}"));
        }
    }
    for d in 2..=8 {
        report.check_result(castelnuovo_count(2 * d - 2, d), &format!("Castelnuovo d={d}"));
    }
}

fn segre_suite(report: &mut SuiteReport) {
    for g in 2..=12 {
        let r = sw_section_invariant(g);
        let ok = matches!(&r, Ok(res) if res.value == Rational::from_integer(BigInt::from(2).pow(g as u32)));
        report.check(ok, || format!("section invariant g={g}: {r:?}"));
    }
    for g in 0..=8i64 {
        for d in 0..=g {
            if 2 * g - 2 * d - 1 < 0 {
                continue;
            }
            report.check_result(segre_w1d(g, d), &format!("W_1,d class g={g} d={d}"));
        }
    }
    // zero-dimensional W_1,d against the component sum on the ruled surface
    for g in (3..=12).step_by(2) {
        let d = (g - 1) / 2;
        let segre = segre_w1d_degree(g, d);
        let section = sw_section_invariant(g).map(|r| r.value);
        let mut ok = matches!((&segre, &section), (Ok(a), Ok(b)) if a == b);
        if d <= 5 {
            let comp = sw_ruled_b2_total(g, d).map(|r| r.value);
            ok &= matches!((&segre, &comp), (Ok(a), Ok(b)) if a == b);
        }
        report.check(ok, || format!("Segre vs section g={g}"));
    }
}

/// Runs the requested suites in a fixed order.
pub fn run_suites(suites: &[Suite]) -> Vec<SuiteReport> {
    let mut sorted = suites.to_vec();
    sorted.sort();
    sorted.dedup();
    sorted.into_iter().map(Suite::run).collect()
}
