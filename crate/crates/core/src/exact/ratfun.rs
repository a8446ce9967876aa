use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::complex::Complex64;
use num::{BigRational, One, Zero};

use super::context::Context;
use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Rational function kept as an expanded numerator over a multiset of
/// denominator factors. There is deliberately no multivariate gcd: factors
/// are merged syntactically and cancelled only by exact division, and all
/// equality testing goes through cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Vec<(Polynomial, u32)>,
}

impl RationalFunction {
    pub fn from_poly(num: Polynomial) -> Self {
        RationalFunction { num, den: Vec::new() }
    }

    pub fn zero(ctx: &Context) -> Self {
        Self::from_poly(Polynomial::zero(ctx))
    }

    pub fn one(ctx: &Context) -> Self {
        Self::from_poly(Polynomial::constant(ctx, BigRational::one()))
    }

    pub fn new(num: Polynomial, den: Vec<(Polynomial, u32)>) -> Self {
        let mut rf = RationalFunction { num, den };
        rf.normalize();
        rf
    }

    pub fn context(&self) -> &Context {
        self.num.context()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn den_factors(&self) -> &[(Polynomial, u32)] {
        &self.den
    }

    pub fn den_product(&self) -> Polynomial {
        let mut acc = Polynomial::constant(self.num.context(), BigRational::one());
        for (f, e) in &self.den {
            acc = acc.mul_ref(&f.pow(*e));
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&Polynomial> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        // fold each factor's content into the numerator, merge equal factors
        let mut factors: Vec<(Polynomial, u32)> = Vec::new();
        let mut scale = BigRational::one();
        for (f, e) in self.den.drain(..) {
            if e == 0 {
                continue;
            }
            assert!(!f.is_zero(), "zero denominator factor");
            let (c, prim) = f.primitive();
            for _ in 0..e {
                scale *= &c;
            }
            if prim.is_one() {
                continue;
            }
            match factors.iter_mut().find(|(g, _)| g == &prim) {
                Some((_, ge)) => *ge += e,
                None => factors.push((prim, e)),
            }
        }
        if !scale.is_one() {
            self.num = self.num.scale(&(BigRational::one() / scale));
        }
        // syntactic cancellation: divide out factors that divide exactly
        for (f, e) in factors.iter_mut() {
            while *e > 0 {
                match self.num.div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|(a, _), (b, _)| a.cmp_canonical(b));
        self.den = factors;
        if self.num.is_zero() {
            self.den.clear();
        }
    }

    pub fn add_ref(&self, other: &RationalFunction) -> RationalFunction {
        assert!(self.context().same(other.context()), "context mismatch");
        // union denominator with per-factor max exponents
        let mut union: Vec<(Polynomial, u32)> = self.den.clone();
        for (f, e) in &other.den {
            match union.iter_mut().find(|(g, _)| g == f) {
                Some((_, ue)) => *ue = (*ue).max(*e),
                None => union.push((f.clone(), *e)),
            }
        }
        let comp = |own: &[(Polynomial, u32)]| -> Polynomial {
            let mut acc = Polynomial::constant(self.context(), BigRational::one());
            for (f, ue) in &union {
                let oe = own
                    .iter()
                    .find(|(g, _)| g == f)
                    .map(|(_, e)| *e)
                    .unwrap_or(0);
                if *ue > oe {
                    acc = acc.mul_ref(&f.pow(*ue - oe));
                }
            }
            acc
        };
        let num = self
            .num
            .mul_ref(&comp(&self.den))
            .add_ref(&other.num.mul_ref(&comp(&other.den)));
        RationalFunction::new(num, union)
    }

    pub fn neg_ref(&self) -> RationalFunction {
        RationalFunction {
            num: self.num.neg_ref(),
            den: self.den.clone(),
        }
    }

    pub fn sub_ref(&self, other: &RationalFunction) -> RationalFunction {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &RationalFunction) -> RationalFunction {
        assert!(self.context().same(other.context()), "context mismatch");
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            match den.iter_mut().find(|(g, _)| g == f) {
                Some((_, ue)) => *ue += e,
                None => den.push((f.clone(), *e)),
            }
        }
        RationalFunction::new(self.num.mul_ref(&other.num), den)
    }

    pub fn scale(&self, c: &BigRational) -> RationalFunction {
        if c.is_zero() {
            return RationalFunction::zero(self.context());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inverse(&self) -> Result<RationalFunction> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (cont, prim) = self.num.primitive();
        let num = self.den_product().scale(&(BigRational::one() / cont));
        let den = if prim.is_one() {
            Vec::new()
        } else {
            vec![(prim, 1)]
        };
        Ok(RationalFunction::new(num, den))
    }

    pub fn div_ref(&self, other: &RationalFunction) -> Result<RationalFunction> {
        Ok(self.mul_ref(&other.inverse()?))
    }

    pub fn pow(&self, n: u32) -> RationalFunction {
        let mut acc = RationalFunction::one(self.context());
        for _ in 0..n {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// Quotient rule without expanding the denominator: factors that depend
    /// on the variable get their exponent raised by one, the rest are kept.
    pub fn derivative(&self, idx: usize) -> RationalFunction {
        let dep: Vec<&(Polynomial, u32)> =
            self.den.iter().filter(|(f, _)| f.depends_on(idx)).collect();
        if dep.is_empty() {
            return RationalFunction {
                num: self.num.derivative(idx),
                den: self.den.clone(),
            };
        }
        // product of the distinct dependent factors (first power each)
        let mut prod = Polynomial::constant(self.context(), BigRational::one());
        for (f, _) in &dep {
            prod = prod.mul_ref(f);
        }
        let mut num = self.num.derivative(idx).mul_ref(&prod);
        for (i, (f, e)) in dep.iter().enumerate() {
            let mut cof = Polynomial::constant(self.context(), BigRational::from_integer((*e).into()));
            for (j, (g, _)) in dep.iter().enumerate() {
                if i != j {
                    cof = cof.mul_ref(g);
                }
            }
            num = num.sub_ref(&self.num.mul_ref(&f.derivative(idx)).mul_ref(&cof));
        }
        let den = self
            .den
            .iter()
            .map(|(f, e)| {
                if f.depends_on(idx) {
                    (f.clone(), e + 1)
                } else {
                    (f.clone(), *e)
                }
            })
            .collect();
        RationalFunction::new(num, den)
    }

    pub fn depends_on(&self, idx: usize) -> bool {
        self.num.depends_on(idx) || self.den.iter().any(|(f, _)| f.depends_on(idx))
    }

    /// Cross-multiplied equality: `num_f * den_g - num_g * den_f` expands
    /// to zero. Implemented through the common-denominator subtraction.
    pub fn equals(&self, other: &RationalFunction) -> bool {
        self.sub_ref(other).is_zero()
    }

    pub fn eval_rational(&self, vals: &[BigRational]) -> Result<BigRational> {
        let mut acc = self.num.eval_rational(vals);
        for (f, e) in &self.den {
            let fv = f.eval_rational(vals);
            if fv.is_zero() {
                return Err(Error::ZeroDenominator(f.to_string()));
            }
            for _ in 0..*e {
                acc /= &fv;
            }
        }
        Ok(acc)
    }

    /// Complex floating evaluation; also returns the largest intermediate
    /// magnitude seen (numerator terms and denominator factor reciprocals).
    pub fn eval_c64(&self, vals: &[Complex64]) -> Result<(Complex64, f64)> {
        let (mut acc, mut max_mag) = self.num.eval_c64(vals);
        for (f, e) in &self.den {
            let (fv, m) = f.eval_c64(vals);
            max_mag = max_mag.max(m);
            if fv.norm() == 0.0 {
                return Err(Error::ZeroDenominator(f.to_string()));
            }
            for _ in 0..*e {
                acc /= fv;
            }
            max_mag = max_mag.max(acc.norm());
        }
        Ok((acc, max_mag))
    }

    pub fn lift(&self, target: &Context) -> Result<RationalFunction> {
        let num = self.num.lift(target)?;
        let mut den = Vec::with_capacity(self.den.len());
        for (f, e) in &self.den {
            den.push((f.lift(target)?, *e));
        }
        Ok(RationalFunction::new(num, den))
    }

    /// Substitute variables by rational functions over a target context.
    pub fn compose(
        &self,
        target: &Context,
        map: &std::collections::BTreeMap<usize, RationalFunction>,
    ) -> Result<RationalFunction> {
        let mut images: Vec<RationalFunction> = Vec::with_capacity(self.context().len());
        for i in 0..self.context().len() {
            match map.get(&i) {
                Some(r) => {
                    r.context().ensure_same(target)?;
                    images.push(r.clone());
                }
                None => images.push(RationalFunction::from_poly(Polynomial::var(
                    target,
                    self.context().name(i),
                )?)),
            }
        }
        let compose_poly = |p: &Polynomial| -> RationalFunction {
            let mut acc = RationalFunction::zero(target);
            for (m, c) in p.terms() {
                let mut t = RationalFunction::from_poly(Polynomial::constant(target, c.clone()));
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        t = t.mul_ref(&images[i].pow(e as u32));
                    }
                }
                acc = acc.add_ref(&t);
            }
            acc
        };
        let mut acc = compose_poly(&self.num);
        for (f, e) in &self.den {
            let fv = compose_poly(f);
            acc = acc.div_ref(&fv.pow(*e))?;
        }
        Ok(acc)
    }

    /// Apply a polynomial rewrite to the numerator (used for zero tests
    /// modulo a relation such as `k2^2 -> 1 - k1^2`). Denominator factors
    /// are checked not to collapse to zero under the same rewrite.
    pub fn is_zero_mod<F>(&self, rewrite: F) -> bool
    where
        F: Fn(&Polynomial) -> Polynomial,
    {
        for (f, _) in &self.den {
            assert!(
                !rewrite(f).is_zero(),
                "denominator factor vanishes under the rewrite"
            );
        }
        rewrite(&self.num).is_zero()
    }

    pub fn cmp_canonical(&self, other: &RationalFunction) -> Ordering {
        self.num.cmp_canonical(&other.num).then_with(|| {
            let mut a = self.den.iter();
            let mut b = other.den.iter();
            loop {
                match (a.next(), b.next()) {
                    (None, None) => return Ordering::Equal,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(_), None) => return Ordering::Greater,
                    (Some((fa, ea)), Some((fb, eb))) => {
                        let o = fa.cmp_canonical(fb).then_with(|| ea.cmp(eb));
                        if o != Ordering::Equal {
                            return o;
                        }
                    }
                }
            }
        })
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        self.add_ref(rhs)
    }
}
impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self.sub_ref(rhs)
    }
}
impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        self.mul_ref(rhs)
    }
}
impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.div_ref(rhs).expect("division by zero rational function")
    }
}
impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        self.neg_ref()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let dens: Vec<String> = self
            .den
            .iter()
            .map(|(p, e)| {
                if *e == 1 {
                    format!("({p})")
                } else {
                    format!("({p})^{e}")
                }
            })
            .collect();
        write!(f, "({}) / ({})", self.num, dens.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context::new(&["q1", "q2", "gamma2"]).unwrap()
    }

    fn v(c: &Context, n: &str) -> Polynomial {
        Polynomial::var(c, n).unwrap()
    }

    #[test]
    fn zero_test_with_denominator() {
        let c = ctx();
        let q1 = v(&c, "q1");
        let g2 = v(&c, "gamma2");
        let d = &Polynomial::int(&c, 1) + &(&g2 * &(&q1 * &q1));
        let f = RationalFunction::new(&(&q1 * &q1) - &(&q1 * &q1), vec![(d, 1)]);
        assert!(f.is_zero());
    }

    #[test]
    fn syntactic_cancellation() {
        let c = ctx();
        let q1 = v(&c, "q1");
        let d = &Polynomial::int(&c, 1) + &v(&c, "gamma2");
        let f = RationalFunction::new(q1.mul_ref(&d), vec![(d.clone(), 2)]);
        assert_eq!(f.den_factors().len(), 1);
        assert_eq!(f.den_factors()[0].1, 1);
        assert_eq!(f.numerator(), &q1);
    }

    #[test]
    fn derivative_quotient_rule() {
        // d/dq1 [q2 / (1 + gamma2 q1^2)] = -2 gamma2 q1 q2 / (1+gamma2 q1^2)^2
        let c = ctx();
        let q1 = v(&c, "q1");
        let q2 = v(&c, "q2");
        let g2 = v(&c, "gamma2");
        let d = &Polynomial::int(&c, 1) + &(&g2 * &(&q1 * &q1));
        let f = RationalFunction::new(q2.clone(), vec![(d.clone(), 1)]);
        let df = f.derivative(0);
        let expect = RationalFunction::new(
            (&(&g2 * &(&q1 * &q2)) * &Polynomial::int(&c, -2)).clone(),
            vec![(d, 2)],
        );
        assert!(df.equals(&expect));
        // q1-independence: d/dq2 keeps the denominator untouched
        let dq2 = f.derivative(1);
        assert_eq!(dq2.den_factors().len(), 1);
        assert_eq!(dq2.den_factors()[0].1, 1);
    }

    #[test]
    fn inverse_roundtrip() {
        let c = ctx();
        let q1 = v(&c, "q1");
        let d = &Polynomial::int(&c, 1) + &v(&c, "gamma2");
        let f = RationalFunction::new(q1, vec![(d, 1)]);
        let g = f.inverse().unwrap();
        assert!(f.mul_ref(&g).equals(&RationalFunction::one(&c)));
    }
}
