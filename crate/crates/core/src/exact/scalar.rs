use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::complex::Complex64;
use num::BigRational;

use super::context::Context;
use super::poly::{rational_sqrt, Polynomial};
use super::quadext::QuadExtScalar;
use super::ratfun::RationalFunction;
use crate::error::Result;

/// A scalar of the symbolic layer: either a rational function or an element
/// of one quadratic extension. All higher modules (forms, tensors, maps)
/// operate on this type so that radical-valued and rational computations
/// share one code path.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rat(RationalFunction),
    Ext(QuadExtScalar),
}

impl Scalar {
    pub fn zero(ctx: &Context) -> Self {
        Scalar::Rat(RationalFunction::zero(ctx))
    }

    pub fn one(ctx: &Context) -> Self {
        Scalar::Rat(RationalFunction::one(ctx))
    }

    pub fn int(ctx: &Context, n: i64) -> Self {
        Scalar::Rat(RationalFunction::from_poly(Polynomial::int(ctx, n)))
    }

    pub fn rational(ctx: &Context, num: i64, den: i64) -> Self {
        Scalar::Rat(RationalFunction::from_poly(Polynomial::rational(ctx, num, den)))
    }

    pub fn var(ctx: &Context, name: &str) -> Result<Self> {
        Ok(Scalar::Rat(RationalFunction::from_poly(Polynomial::var(
            ctx, name,
        )?)))
    }

    /// Normalizing constructor for `a + b*sqrt(d)`: collapses perfect-square
    /// discriminants, extracts square rational content, demotes when the
    /// radical part vanishes.
    pub fn ext(a: RationalFunction, mut b: RationalFunction, d: Polynomial) -> Self {
        if b.is_zero() {
            return Scalar::Rat(a);
        }
        if let Some(root) = d.sqrt_exact() {
            return Scalar::Rat(a.add_ref(&b.mul_ref(&RationalFunction::from_poly(root))));
        }
        let (c, prim) = d.primitive();
        let d = if let Some(k) = rational_sqrt(&c) {
            b = b.scale(&k);
            prim
        } else {
            d
        };
        Scalar::Ext(QuadExtScalar::new(a, b, d))
    }

    /// `sqrt` of a polynomial, introducing the extension when needed.
    pub fn sqrt_poly(p: &Polynomial) -> Self {
        let ctx = p.context();
        Scalar::ext(
            RationalFunction::zero(ctx),
            RationalFunction::one(ctx),
            p.clone(),
        )
    }

    /// `sqrt(n/m) = sqrt(n*m)/m`, keeping the discriminant polynomial.
    pub fn sqrt_rat(r: &RationalFunction) -> Result<Self> {
        if r.is_zero() {
            return Ok(Scalar::zero(r.context()));
        }
        let m = r.den_product();
        let nm = r.numerator().mul_ref(&m);
        let minv = RationalFunction::from_poly(m).inverse()?;
        Ok(Scalar::ext(RationalFunction::zero(r.context()), minv, nm))
    }

    pub fn context(&self) -> &Context {
        match self {
            Scalar::Rat(r) => r.context(),
            Scalar::Ext(e) => e.context(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Ext(e) => e.is_zero(),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn as_rat(&self) -> Option<&RationalFunction> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Ext(_) => None,
        }
    }

    pub fn as_ext(&self) -> Option<&QuadExtScalar> {
        match self {
            Scalar::Ext(e) => Some(e),
            Scalar::Rat(_) => None,
        }
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        self.as_rat().and_then(|r| r.as_constant())
    }

    pub fn discriminant(&self) -> Option<&Polynomial> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Ext(e) => Some(&e.d),
        }
    }

    /// Rational and radical components `(a, b)`; a plain rational has `b = 0`.
    pub fn components(&self) -> (RationalFunction, RationalFunction) {
        match self {
            Scalar::Rat(r) => (r.clone(), RationalFunction::zero(r.context())),
            Scalar::Ext(e) => (e.a.clone(), e.b.clone()),
        }
    }

    fn promote(&self, other: &Scalar) -> (QuadExtScalar, QuadExtScalar) {
        match (self, other) {
            (Scalar::Ext(a), Scalar::Ext(b)) => (a.clone(), b.clone()),
            (Scalar::Ext(a), Scalar::Rat(r)) => {
                (a.clone(), QuadExtScalar::from_rat(r.clone(), &a.d))
            }
            (Scalar::Rat(r), Scalar::Ext(b)) => {
                (QuadExtScalar::from_rat(r.clone(), &b.d), b.clone())
            }
            (Scalar::Rat(_), Scalar::Rat(_)) => unreachable!(),
        }
    }

    fn renormalize(e: QuadExtScalar) -> Scalar {
        if e.b.is_zero() {
            Scalar::Rat(e.a)
        } else {
            Scalar::Ext(e)
        }
    }

    pub fn add_ref(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a.add_ref(b)),
            _ => {
                let (a, b) = self.promote(other);
                Scalar::renormalize(a.add_ref(&b))
            }
        }
    }

    pub fn sub_ref(&self, other: &Scalar) -> Scalar {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.neg_ref()),
            Scalar::Ext(e) => Scalar::Ext(e.neg_ref()),
        }
    }

    pub fn mul_ref(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a.mul_ref(b)),
            _ => {
                let (a, b) = self.promote(other);
                Scalar::renormalize(a.mul_ref(&b))
            }
        }
    }

    pub fn div_ref(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Ok(Scalar::Rat(a.div_ref(b)?)),
            _ => {
                let (a, b) = self.promote(other);
                Ok(Scalar::renormalize(a.mul_ref(&b.inverse()?)))
            }
        }
    }

    pub fn inverse(&self) -> Result<Scalar> {
        match self {
            Scalar::Rat(r) => Ok(Scalar::Rat(r.inverse()?)),
            Scalar::Ext(e) => Ok(Scalar::renormalize(e.inverse()?)),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.scale(c)),
            Scalar::Ext(e) => Scalar::renormalize(QuadExtScalar::new(
                e.a.scale(c),
                e.b.scale(c),
                e.d.clone(),
            )),
        }
    }

    pub fn pow(&self, n: u32) -> Scalar {
        let mut acc = Scalar::one(self.context());
        for _ in 0..n {
            acc = acc.mul_ref(self);
        }
        acc
    }

    pub fn derivative(&self, idx: usize) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.derivative(idx)),
            Scalar::Ext(e) => Scalar::renormalize(e.derivative(idx)),
        }
    }

    pub fn depends_on(&self, idx: usize) -> bool {
        match self {
            Scalar::Rat(r) => r.depends_on(idx),
            Scalar::Ext(e) => e.depends_on(idx),
        }
    }

    pub fn equals(&self, other: &Scalar) -> bool {
        self.sub_ref(other).is_zero()
    }

    /// Zero test modulo a polynomial rewrite applied to the cross-multiplied
    /// numerators of both components.
    pub fn is_zero_mod<F>(&self, rewrite: F) -> bool
    where
        F: Fn(&Polynomial) -> Polynomial + Copy,
    {
        match self {
            Scalar::Rat(r) => r.is_zero_mod(rewrite),
            Scalar::Ext(e) => e.a.is_zero_mod(rewrite) && e.b.is_zero_mod(rewrite),
        }
    }

    pub fn eval_rational(&self, vals: &[BigRational], branch: i8) -> Result<BigRational> {
        match self {
            Scalar::Rat(r) => r.eval_rational(vals),
            Scalar::Ext(e) => e.eval_rational(vals, branch),
        }
    }

    pub fn eval_c64(&self, vals: &[Complex64], branch: i8) -> Result<(Complex64, f64)> {
        match self {
            Scalar::Rat(r) => r.eval_c64(vals),
            Scalar::Ext(e) => e.eval_c64(vals, branch),
        }
    }

    pub fn lift(&self, target: &Context) -> Result<Scalar> {
        match self {
            Scalar::Rat(r) => Ok(Scalar::Rat(r.lift(target)?)),
            Scalar::Ext(e) => Ok(Scalar::renormalize(e.lift(target)?)),
        }
    }

    /// Exact substitution of variables by rational functions. Discriminants
    /// are recomposed (`sqrt(n/m) = sqrt(n m)/m`) and collapse to rational
    /// values when the substituted discriminant becomes a perfect square;
    /// the positive root is taken for the collapsed radical.
    pub fn substitute(
        &self,
        target: &Context,
        map: &BTreeMap<usize, RationalFunction>,
    ) -> Result<Scalar> {
        match self {
            Scalar::Rat(r) => Ok(Scalar::Rat(r.compose(target, map)?)),
            Scalar::Ext(e) => {
                let a = e.a.compose(target, map)?;
                let b = e.b.compose(target, map)?;
                let dpoly = RationalFunction::from_poly(e.d.clone());
                let d = dpoly.compose(target, map)?;
                if d.is_zero() {
                    return Ok(Scalar::Rat(a));
                }
                let m = d.den_product();
                let nm = d.numerator().mul_ref(&m);
                let b_over_m = b.div_ref(&RationalFunction::from_poly(m))?;
                Ok(Scalar::ext(a, b_over_m, nm))
            }
        }
    }

    /// Substitution with scalar (possibly radical) images. Variables not in
    /// `map` pass through by name. The discriminant of an extension element
    /// must substitute to a rational-function value (no nested radicals).
    pub fn substitute_scalars(
        &self,
        target: &Context,
        map: &BTreeMap<usize, Scalar>,
    ) -> Result<Scalar> {
        let subst_poly = |p: &Polynomial| -> Result<Scalar> {
            let mut images: Vec<Scalar> = Vec::with_capacity(p.context().len());
            for i in 0..p.context().len() {
                match map.get(&i) {
                    Some(s) => {
                        s.context().ensure_same(target)?;
                        images.push(s.clone());
                    }
                    None => images.push(Scalar::var(target, p.context().name(i))?),
                }
            }
            let mut acc = Scalar::zero(target);
            for (m, c) in p.terms() {
                let mut t = Scalar::from(Polynomial::constant(target, c.clone()));
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        t = t.mul_ref(&images[i].pow(e as u32));
                    }
                }
                acc = acc.add_ref(&t);
            }
            Ok(acc)
        };
        let subst_rat = |r: &RationalFunction| -> Result<Scalar> {
            let mut acc = subst_poly(r.numerator())?;
            for (f, e) in r.den_factors() {
                let fv = subst_poly(f)?;
                acc = acc.div_ref(&fv.pow(*e))?;
            }
            Ok(acc)
        };
        match self {
            Scalar::Rat(r) => subst_rat(r),
            Scalar::Ext(e) => {
                let a = subst_rat(&e.a)?;
                let b = subst_rat(&e.b)?;
                let d = subst_poly(&e.d)?;
                let root = match d {
                    Scalar::Rat(dr) => Scalar::sqrt_rat(&dr)?,
                    Scalar::Ext(_) => {
                        return Err(crate::error::Error::MixedDiscriminant);
                    }
                };
                Ok(a.add_ref(&b.mul_ref(&root)))
            }
        }
    }

    pub fn cmp_canonical(&self, other: &Scalar) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp_canonical(b),
            (Scalar::Rat(_), Scalar::Ext(_)) => Ordering::Less,
            (Scalar::Ext(_), Scalar::Rat(_)) => Ordering::Greater,
            (Scalar::Ext(a), Scalar::Ext(b)) => a
                .d
                .cmp_canonical(&b.d)
                .then_with(|| a.a.cmp_canonical(&b.a))
                .then_with(|| a.b.cmp_canonical(&b.b)),
        }
    }
}

impl From<RationalFunction> for Scalar {
    fn from(r: RationalFunction) -> Self {
        Scalar::Rat(r)
    }
}

impl From<Polynomial> for Scalar {
    fn from(p: Polynomial) -> Self {
        Scalar::Rat(RationalFunction::from_poly(p))
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.add_ref(rhs)
    }
}
impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.sub_ref(rhs)
    }
}
impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.mul_ref(rhs)
    }
}
impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.div_ref(rhs).expect("scalar division by zero")
    }
}
impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Ext(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_square_discriminant_collapses() {
        let ctx = Context::new(&["q1", "q2"]).unwrap();
        let q1 = Polynomial::var(&ctx, "q1").unwrap();
        let q2 = Polynomial::var(&ctx, "q2").unwrap();
        let sum = &q1 + &q2;
        let s = Scalar::sqrt_poly(&sum.mul_ref(&sum));
        assert!(s.is_rational());
        assert!(s.equals(&Scalar::from(sum)));
    }

    #[test]
    fn square_content_extracted() {
        let ctx = Context::new(&["q1"]).unwrap();
        let q1 = Polynomial::var(&ctx, "q1").unwrap();
        // sqrt(4 + 4 q1^2) = 2 sqrt(1 + q1^2)
        let four = Polynomial::int(&ctx, 4);
        let d = &four + &q1.mul_ref(&q1).scale(&BigRational::from_integer(4.into()));
        let s = Scalar::sqrt_poly(&d);
        let e = s.as_ext().unwrap();
        let expect_d = &Polynomial::int(&ctx, 1) + &q1.mul_ref(&q1);
        assert_eq!(e.d, expect_d);
        assert!(e
            .b
            .equals(&RationalFunction::from_poly(Polynomial::int(&ctx, 2))));
    }

    #[test]
    fn radical_cancellation_demotes() {
        let ctx = Context::new(&["q1"]).unwrap();
        let q1 = Polynomial::var(&ctx, "q1").unwrap();
        let d = &Polynomial::int(&ctx, 1) + &(&q1 * &q1);
        let s = Scalar::sqrt_poly(&d);
        let diff = s.sub_ref(&s);
        assert!(diff.is_rational());
        assert!(diff.is_zero());
        // sqrt(d)^2 = d stays rational
        let sq = s.mul_ref(&s);
        assert!(sq.is_rational());
        assert!(sq.equals(&Scalar::from(d)));
    }

    #[test]
    fn substitution_collapses_radical() {
        // sqrt(1 + g q1^2) at g = 0 becomes 1
        let ctx = Context::new(&["q1", "g"]).unwrap();
        let q1 = Polynomial::var(&ctx, "q1").unwrap();
        let g = Polynomial::var(&ctx, "g").unwrap();
        let d = &Polynomial::int(&ctx, 1) + &(&g * &(&q1 * &q1));
        let s = Scalar::sqrt_poly(&d);
        let target = Context::new(&["q1"]).unwrap();
        let mut map = BTreeMap::new();
        map.insert(1usize, RationalFunction::zero(&target));
        let sub = s.substitute(&target, &map).unwrap();
        assert!(sub.equals(&Scalar::one(&target)));
    }
}
