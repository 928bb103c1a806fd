//! Riemann-Roch pushforward along `C × C_d → C_d` and the Chern character
//! to Chern class conversion.
//!
//! Classes on `C × C_d` are modelled in the Künneth basis
//! `1⊗Q + [pt]⊗Q' + δ¹¹·(1⊗Q'')`, where `δ¹¹` is the mixed part of the
//! incidence class `δ = n[pt]⊗1 + δ¹¹ + 1⊗x`. The only relations needed are
//! `[pt]² = 0`, `δ¹¹·[pt] = 0` and `(δ¹¹)² = -2[pt]⊗θ`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::{factorial, rat, GradedElement, Rational};
use crate::space::{AmbientSpace, SpaceKind};

/// Element of the model ring of `C × C_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KunnethElement {
    space: AmbientSpace,
    one: GradedElement,
    pt: GradedElement,
    delta: GradedElement,
}

fn require_symmetric_product(space: &AmbientSpace) -> Result<()> {
    match space.kind() {
        SpaceKind::SymmetricProduct { .. } => Ok(()),
        _ => Err(Error::Argument(format!("{space} is not a symmetric product"))),
    }
}

fn require_member(space: &AmbientSpace, u: &GradedElement) -> Result<()> {
    if **u.ring() == **space.ring() {
        Ok(())
    } else {
        Err(Error::Incompatible {
            left: u.ring().label().to_string(),
            right: space.to_string(),
        })
    }
}

impl KunnethElement {
    /// `1⊗one + [pt]⊗pt + δ¹¹·(1⊗delta)`.
    pub fn new(
        space: &AmbientSpace,
        one: GradedElement,
        pt: GradedElement,
        delta: GradedElement,
    ) -> Result<KunnethElement> {
        require_symmetric_product(space)?;
        for u in [&one, &pt, &delta] {
            require_member(space, u)?;
        }
        Ok(KunnethElement {
            space: space.clone(),
            one,
            pt,
            delta,
        })
    }

    pub fn zero(space: &AmbientSpace) -> Result<KunnethElement> {
        KunnethElement::new(space, space.zero(), space.zero(), space.zero())
    }

    pub fn unit(space: &AmbientSpace) -> Result<KunnethElement> {
        KunnethElement::new(space, space.one(), space.zero(), space.zero())
    }

    /// `1⊗q`.
    pub fn base(q: GradedElement, space: &AmbientSpace) -> Result<KunnethElement> {
        KunnethElement::new(space, q, space.zero(), space.zero())
    }

    /// `[pt]⊗q`.
    pub fn point(q: GradedElement, space: &AmbientSpace) -> Result<KunnethElement> {
        KunnethElement::new(space, space.zero(), q, space.zero())
    }

    /// `δ¹¹·(1⊗q)`.
    pub fn mixed(q: GradedElement, space: &AmbientSpace) -> Result<KunnethElement> {
        KunnethElement::new(space, space.zero(), space.zero(), q)
    }

    pub fn space(&self) -> &AmbientSpace {
        &self.space
    }

    pub fn slot_one(&self) -> &GradedElement {
        &self.one
    }

    pub fn slot_pt(&self) -> &GradedElement {
        &self.pt
    }

    pub fn slot_delta(&self) -> &GradedElement {
        &self.delta
    }

    pub fn is_zero(&self) -> bool {
        self.one.is_zero() && self.pt.is_zero() && self.delta.is_zero()
    }

    fn check_same(&self, other: &KunnethElement) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::Incompatible {
                left: self.space.to_string(),
                right: other.space.to_string(),
            })
        }
    }

    pub fn add(&self, other: &KunnethElement) -> Result<KunnethElement> {
        self.check_same(other)?;
        Ok(KunnethElement {
            space: self.space.clone(),
            one: &self.one + &other.one,
            pt: &self.pt + &other.pt,
            delta: &self.delta + &other.delta,
        })
    }

    pub fn scale(&self, c: &Rational) -> KunnethElement {
        KunnethElement {
            space: self.space.clone(),
            one: self.one.scale(c),
            pt: self.pt.scale(c),
            delta: self.delta.scale(c),
        }
    }

    pub fn kunneth_mul(&self, other: &KunnethElement) -> Result<KunnethElement> {
        self.check_same(other)?;
        let theta = self.space.generator("theta")?;
        let (a, b) = (self, other);
        let delta_sq = (&a.delta * &b.delta) * &theta;
        Ok(KunnethElement {
            space: self.space.clone(),
            one: &a.one * &b.one,
            pt: &(&(&a.one * &b.pt) + &(&a.pt * &b.one)) - &delta_sq.scale(&rat(2)),
            delta: &(&a.one * &b.delta) + &(&a.delta * &b.one),
        })
    }

    /// `sum self^k / k!`; every element without a `1⊗1` component is nilpotent.
    pub fn exp(&self) -> Result<KunnethElement> {
        if !self.one.constant_term().is_zero() {
            return Err(Error::Domain("exp needs a nilpotent argument".into()));
        }
        let mut sum = KunnethElement::unit(&self.space)?;
        let mut term = sum.clone();
        for k in 1u32.. {
            term = term
                .kunneth_mul(self)?
                .scale(&Rational::new(BigInt::one(), BigInt::from(k)));
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term)?;
        }
        Ok(sum)
    }
}

/// The incidence class `δ = n[pt]⊗1 + δ¹¹ + 1⊗x`.
pub fn incidence_class(n: i64, space: &AmbientSpace) -> Result<KunnethElement> {
    require_symmetric_product(space)?;
    KunnethElement::new(
        space,
        space.generator("x")?,
        space.constant(rat(n)),
        space.one(),
    )
}

/// `e^δ` on `C × C_d`.
pub fn exp_delta(n: i64, space: &AmbientSpace) -> Result<KunnethElement> {
    if n < 0 {
        return Err(Error::Argument(format!("fiber degree n = {n} must be non-negative")));
    }
    incidence_class(n, space)?.exp()
}

/// Classes on `X × C_d` for an elliptic surface `p: X → C`, in the basis
/// `1, f, p*δ¹¹, [pt_X]` tensored with classes on `C_d`. Here `f = p*[pt]` is
/// the fiber class.
#[derive(Debug, Clone)]
struct SurfaceElement {
    one: GradedElement,
    fiber: GradedElement,
    delta: GradedElement,
    point: GradedElement,
}

impl SurfaceElement {
    fn pullback(k: &KunnethElement) -> SurfaceElement {
        SurfaceElement {
            one: k.one.clone(),
            fiber: k.pt.clone(),
            delta: k.delta.clone(),
            point: k.space.zero(),
        }
    }

    /// `1 + r f + chi [pt_X]`.
    fn todd(r: &Rational, chi: i64, space: &AmbientSpace) -> SurfaceElement {
        SurfaceElement {
            one: space.one(),
            fiber: space.constant(r.clone()),
            delta: space.zero(),
            point: space.constant(rat(chi)),
        }
    }

    /// `f² = f·δ¹¹ = 0`, `(δ¹¹)² = -2 f⊗θ`, and `[pt_X]` kills every class of
    /// positive degree on `X`.
    fn mul(&self, other: &SurfaceElement, theta: &GradedElement) -> SurfaceElement {
        let (a, b) = (self, other);
        let delta_sq = (&a.delta * &b.delta) * theta;
        SurfaceElement {
            one: &a.one * &b.one,
            fiber: &(&(&a.one * &b.fiber) + &(&a.fiber * &b.one)) - &delta_sq.scale(&rat(2)),
            delta: &(&a.one * &b.delta) + &(&a.delta * &b.one),
            point: &(&a.one * &b.point) + &(&a.point * &b.one),
        }
    }

    /// Integration along `X`.
    fn push_to_base(&self) -> GradedElement {
        self.point.clone()
    }
}

/// `ch(π₂! O(D))` for the universal divisor over `C_d` pulled back to an
/// elliptic surface with `χ(O_X) = chi`, with Todd class `1 + r f + χ pt`.
pub fn grr_pushforward_with_todd(
    chi: i64,
    n: i64,
    todd_r: &Rational,
    space: &AmbientSpace,
) -> Result<GradedElement> {
    if chi < 0 {
        return Err(Error::Argument(format!("chi = {chi} must be non-negative")));
    }
    let e_delta = exp_delta(n, space)?;
    let theta = space.generator("theta")?;
    let todd = SurfaceElement::todd(todd_r, chi, space);
    Ok(SurfaceElement::pullback(&e_delta).mul(&todd, &theta).push_to_base())
}

/// [`grr_pushforward_with_todd`] with `r = 0`.
pub fn grr_pushforward(chi: i64, n: i64, space: &AmbientSpace) -> Result<GradedElement> {
    grr_pushforward_with_todd(chi, n, &Rational::zero(), space)
}

/// Total Chern class from a Chern character via Newton's identities,
/// computed through degree `trunc`.
pub fn chern_from_character(ch: &GradedElement, trunc: u32) -> Result<GradedElement> {
    if trunc > ch.truncation() {
        return Err(Error::Argument(format!(
            "truncation {trunc} exceeds ring truncation {}",
            ch.truncation()
        )));
    }
    let rank = ch.constant_term();
    if !rank.is_integer() {
        return Err(Error::Domain(format!("virtual rank {rank} is not an integer")));
    }
    let ring = ch.ring();
    // power sums p_k = k! ch_k
    let power_sums: Vec<GradedElement> = (0..=trunc)
        .map(|k| {
            ch.degree_part(k)
                .map(|c| c.scale(&Rational::from_integer(factorial(k))))
        })
        .collect::<Result<_>>()?;
    let mut elementary = vec![GradedElement::one(ring)];
    for k in 1..=trunc as usize {
        let mut acc = GradedElement::zero(ring);
        for i in 1..=k {
            let term = &elementary[k - i] * &power_sums[i];
            acc = if i.is_odd() { &acc + &term } else { &acc - &term };
        }
        elementary.push(acc.scale(&Rational::new(BigInt::one(), BigInt::from(k))));
    }
    Ok(elementary
        .iter()
        .fold(GradedElement::zero(ring), |acc, e| &acc + e))
}

/// `c(π₂! O(D)) = (1+x)^χ`, computed through the full pushforward pipeline.
pub fn pushforward_chern(chi: i64, n: i64, space: &AmbientSpace) -> Result<GradedElement> {
    let ch = grr_pushforward(chi, n, space)?;
    chern_from_character(&ch, space.dim())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cd(g: u32, d: u32) -> AmbientSpace {
        AmbientSpace::symmetric_product(g, d)
    }

    #[test]
    fn relation_table() {
        let s = cd(3, 3);
        let delta = KunnethElement::mixed(s.one(), &s).unwrap();
        let pt = KunnethElement::point(s.one(), &s).unwrap();
        let sq = delta.kunneth_mul(&delta).unwrap();
        let theta = s.generator("theta").unwrap();
        assert_eq!(sq, KunnethElement::point(theta.scale(&rat(-2)), &s).unwrap());
        assert!(pt.kunneth_mul(&pt).unwrap().is_zero());
        assert!(delta.kunneth_mul(&pt).unwrap().is_zero());
        assert!(delta.kunneth_mul(&sq).unwrap().is_zero());

        let x = KunnethElement::base(s.generator("x").unwrap(), &s).unwrap();
        assert_eq!(
            x.kunneth_mul(&pt).unwrap(),
            KunnethElement::point(s.generator("x").unwrap(), &s).unwrap()
        );
    }

    #[test]
    fn exp_delta_closed_form() {
        // oracle: e^δ = e^x (1 + n[pt] + δ¹¹ - [pt]⊗θ) from δ¹¹² = -2[pt]⊗θ
        for (g, d, n) in [(0, 0, 0), (2, 3, 0), (3, 2, 4), (4, 4, 1)] {
            let s = cd(g, d);
            let ex = s.generator("x").unwrap().exp().unwrap();
            let theta = s.generator("theta").unwrap();
            let expect = KunnethElement::new(
                &s,
                ex.clone(),
                &ex * &(&s.constant(rat(n)) - &theta),
                ex.clone(),
            )
            .unwrap();
            assert_eq!(exp_delta(n, &s).unwrap(), expect, "g={g} d={d} n={n}");
        }
    }

    #[test]
    fn exp_delta_times_point() {
        let s = cd(3, 3);
        let pt = KunnethElement::point(s.one(), &s).unwrap();
        let prod = exp_delta(2, &s).unwrap().kunneth_mul(&pt).unwrap();
        let ex = s.generator("x").unwrap().exp().unwrap();
        assert_eq!(prod, KunnethElement::point(ex, &s).unwrap());
    }

    #[test]
    fn exp_of_zero_is_unit() {
        let s = cd(2, 2);
        let z = KunnethElement::zero(&s).unwrap();
        assert_eq!(z.exp().unwrap(), KunnethElement::unit(&s).unwrap());
        assert!(KunnethElement::unit(&s).unwrap().exp().is_err());
    }

    #[test]
    fn grr_examples() {
        let s = cd(3, 4);
        let ex = s.generator("x").unwrap().exp().unwrap();
        assert_eq!(grr_pushforward(3, 0, &s).unwrap(), ex.scale(&rat(3)));
        assert_eq!(grr_pushforward(3, 7, &s).unwrap(), ex.scale(&rat(3)));
        assert!(grr_pushforward(0, 2, &s).unwrap().is_zero());
        assert_eq!(grr_pushforward(1, 5, &s).unwrap(), grr_pushforward(1, 0, &s).unwrap());
        let r = Rational::new(7.into(), 3.into());
        assert_eq!(
            grr_pushforward_with_todd(2, 1, &r, &s).unwrap(),
            grr_pushforward(2, 1, &s).unwrap()
        );
        assert!(grr_pushforward(-1, 0, &s).is_err());
        assert!(grr_pushforward(1, 0, &AmbientSpace::jacobian(2)).is_err());
    }

    #[test]
    fn newton_examples() {
        let s = cd(2, 5);
        let x = s.generator("x").unwrap();
        for chi in 0..=10 {
            let ch = x.exp().unwrap().scale(&rat(chi));
            let c = chern_from_character(&ch, 5).unwrap();
            assert_eq!(c, (&s.one() + &x).pow_int(chi).unwrap());
        }
        assert!(chern_from_character(&s.zero(), 5).unwrap().is_one());

        // Chern roots ±x: c = 1 - x²
        let ch = &x.exp().unwrap() + &(-&x).exp().unwrap();
        let c = chern_from_character(&ch, 5).unwrap();
        assert_eq!(c, &s.one() - &(&x * &x));

        let half = s.constant(Rational::new(1.into(), 2.into()));
        assert!(matches!(chern_from_character(&half, 5), Err(Error::Domain(_))));
        assert!(chern_from_character(&ch, 6).is_err());
    }

    #[test]
    fn partial_truncation() {
        let s = cd(2, 4);
        let x = s.generator("x").unwrap();
        let c = chern_from_character(&x.exp().unwrap().scale(&rat(3)), 2).unwrap();
        assert_eq!(c.to_string(), "1 + 3 * x + 3 * x^2");
    }
}
