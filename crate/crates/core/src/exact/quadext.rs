use std::fmt;

use num::complex::Complex64;
use num::BigRational;

use super::context::Context;
use super::poly::{rational_sqrt, rational_to_f64, Polynomial};
use super::ratfun::RationalFunction;
use crate::error::{Error, Result};

/// Element `a + b*sqrt(d)` of a quadratic extension of the rational-function
/// field. Every element taking part in one computation must carry the same
/// discriminant polynomial `d`.
#[derive(Clone, Debug)]
pub struct QuadExtScalar {
    pub a: RationalFunction,
    pub b: RationalFunction,
    pub d: Polynomial,
}

impl QuadExtScalar {
    pub fn new(a: RationalFunction, b: RationalFunction, d: Polynomial) -> Self {
        assert!(a.context().same(b.context()) && a.context().same(d.context()));
        assert!(!d.is_zero(), "zero discriminant");
        QuadExtScalar { a, b, d }
    }

    pub fn context(&self) -> &Context {
        self.a.context()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn same_ext(&self, other: &QuadExtScalar) -> bool {
        self.d == other.d
    }

    fn check_ext(&self, other: &QuadExtScalar) {
        assert!(
            self.same_ext(other),
            "quadratic-extension elements carry different discriminants"
        );
    }

    pub fn from_rat(r: RationalFunction, d: &Polynomial) -> Self {
        let zero = RationalFunction::zero(r.context());
        QuadExtScalar::new(r, zero, d.clone())
    }

    pub fn conjugate(&self) -> Self {
        QuadExtScalar::new(self.a.clone(), self.b.neg_ref(), self.d.clone())
    }

    /// Field norm `a^2 - b^2 d`, a rational function.
    pub fn norm(&self) -> RationalFunction {
        let d = RationalFunction::from_poly(self.d.clone());
        self.a
            .mul_ref(&self.a)
            .sub_ref(&self.b.mul_ref(&self.b).mul_ref(&d))
    }

    pub fn add_ref(&self, other: &QuadExtScalar) -> QuadExtScalar {
        self.check_ext(other);
        QuadExtScalar::new(
            self.a.add_ref(&other.a),
            self.b.add_ref(&other.b),
            self.d.clone(),
        )
    }

    pub fn sub_ref(&self, other: &QuadExtScalar) -> QuadExtScalar {
        self.check_ext(other);
        QuadExtScalar::new(
            self.a.sub_ref(&other.a),
            self.b.sub_ref(&other.b),
            self.d.clone(),
        )
    }

    pub fn neg_ref(&self) -> QuadExtScalar {
        QuadExtScalar::new(self.a.neg_ref(), self.b.neg_ref(), self.d.clone())
    }

    pub fn mul_ref(&self, other: &QuadExtScalar) -> QuadExtScalar {
        self.check_ext(other);
        let d = RationalFunction::from_poly(self.d.clone());
        let a = self
            .a
            .mul_ref(&other.a)
            .add_ref(&self.b.mul_ref(&other.b).mul_ref(&d));
        let b = self.a.mul_ref(&other.b).add_ref(&self.b.mul_ref(&other.a));
        QuadExtScalar::new(a, b, self.d.clone())
    }

    pub fn inverse(&self) -> Result<QuadExtScalar> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = n.inverse()?;
        Ok(QuadExtScalar::new(
            self.a.mul_ref(&inv),
            self.b.neg_ref().mul_ref(&inv),
            self.d.clone(),
        ))
    }

    /// Derivation extended to the radical:
    /// `(a + b sqrt(d))' = a' + (b' + b d'/(2d)) sqrt(d)`.
    pub fn derivative(&self, idx: usize) -> QuadExtScalar {
        let da = self.a.derivative(idx);
        let mut db = self.b.derivative(idx);
        if self.d.depends_on(idx) {
            let half = BigRational::new(1.into(), 2.into());
            let corr = RationalFunction::new(self.d.derivative(idx), vec![(self.d.clone(), 1)])
                .scale(&half);
            db = db.add_ref(&self.b.mul_ref(&corr));
        }
        QuadExtScalar::new(da, db, self.d.clone())
    }

    pub fn depends_on(&self, idx: usize) -> bool {
        self.a.depends_on(idx) || self.b.depends_on(idx) || self.d.depends_on(idx)
    }

    /// Exact evaluation; requires the discriminant value to be the square
    /// of a rational. `branch` selects the sign of the square root.
    pub fn eval_rational(&self, vals: &[BigRational], branch: i8) -> Result<BigRational> {
        let dv = self.d.eval_rational(vals);
        let root = rational_sqrt(&dv).ok_or(Error::NegativeDiscriminant)?;
        let signed = if branch >= 0 { root } else { -root };
        Ok(self.a.eval_rational(vals)? + self.b.eval_rational(vals)? * signed)
    }

    pub fn eval_c64(&self, vals: &[Complex64], branch: i8) -> Result<(Complex64, f64)> {
        let (av, m1) = self.a.eval_c64(vals)?;
        let (bv, m2) = self.b.eval_c64(vals)?;
        let (dv, m3) = self.d.eval_c64(vals);
        let mut root = dv.sqrt();
        if branch < 0 {
            root = -root;
        }
        Ok((av + bv * root, m1.max(m2).max(m3)))
    }

    pub fn lift(&self, target: &Context) -> Result<QuadExtScalar> {
        Ok(QuadExtScalar::new(
            self.a.lift(target)?,
            self.b.lift(target)?,
            self.d.lift(target)?,
        ))
    }

    pub fn equals(&self, other: &QuadExtScalar) -> bool {
        self.sub_ref(other).is_zero()
    }
}

impl fmt::Display for QuadExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*sqrt({})", self.a, self.b, self.d)
    }
}

#[allow(unused)]
pub(crate) fn f64_of(c: &BigRational) -> f64 {
    rational_to_f64(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_squared_is_discriminant() {
        let ctx = Context::new(&["q1", "gamma2"]).unwrap();
        let q1 = Polynomial::var(&ctx, "q1").unwrap();
        let g2 = Polynomial::var(&ctx, "gamma2").unwrap();
        let d = &Polynomial::int(&ctx, 1) + &(&g2 * &(&q1 * &q1));
        let root = QuadExtScalar::new(
            RationalFunction::zero(&ctx),
            RationalFunction::one(&ctx),
            d.clone(),
        );
        let sq = root.mul_ref(&root);
        assert!(sq.b.is_zero());
        assert!(sq.a.equals(&RationalFunction::from_poly(d)));
    }

    #[test]
    fn inverse_of_radical() {
        let ctx = Context::new(&["q1"]).unwrap();
        let q1 = Polynomial::var(&ctx, "q1").unwrap();
        let d = &Polynomial::int(&ctx, 1) + &(&q1 * &q1);
        let x = QuadExtScalar::new(
            RationalFunction::from_poly(q1),
            RationalFunction::one(&ctx),
            d,
        );
        let xi = x.inverse().unwrap();
        let prod = x.mul_ref(&xi);
        assert!(prod.b.is_zero());
        assert!(prod.a.equals(&RationalFunction::one(&ctx)));
    }

    #[test]
    fn radical_derivative() {
        // d/dq1 sqrt(1+q1^2) = q1/sqrt(1+q1^2), i.e. radical part q1/(1+q1^2)
        let ctx = Context::new(&["q1"]).unwrap();
        let q1 = Polynomial::var(&ctx, "q1").unwrap();
        let d = &Polynomial::int(&ctx, 1) + &(&q1 * &q1);
        let root = QuadExtScalar::new(
            RationalFunction::zero(&ctx),
            RationalFunction::one(&ctx),
            d.clone(),
        );
        let dr = root.derivative(0);
        assert!(dr.a.is_zero());
        let expect = RationalFunction::new(q1, vec![(d, 1)]);
        assert!(dr.b.equals(&expect));
    }
}
