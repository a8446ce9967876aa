use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use super::context::Context;
use crate::error::Error;

/// Exponent vector aligned with the context's variable order.
/// Ordered graded-lex: first by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// Componentwise quotient, or `None` when not divisible.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}
impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over Q with a fixed variable context.
/// No zero coefficients are stored; terms are kept in graded-lex order by
/// the BTreeMap, which makes printing and hashing deterministic.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ctx: Context,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(ctx: &Context) -> Self {
        Polynomial {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Context, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(ctx.len()), c);
        }
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn int(ctx: &Context, n: i64) -> Self {
        Self::constant(ctx, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn rational(ctx: &Context, num: i64, den: i64) -> Self {
        Self::constant(
            ctx,
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        )
    }

    pub fn var(ctx: &Context, name: &str) -> Result<Self, Error> {
        let idx = ctx.index(name)?;
        Ok(Self::var_idx(ctx, idx))
    }

    pub fn var_idx(ctx: &Context, idx: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(ctx.len(), idx), BigRational::one());
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn from_terms(ctx: &Context, terms: Vec<(Monomial, BigRational)>) -> Self {
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.0.len(), ctx.len());
            if c.is_zero() {
                continue;
            }
            match map.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = e.get() + &c;
                    if s.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = s;
                    }
                }
            }
        }
        Polynomial { ctx: ctx.clone(), terms: map }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    /// The constant value when `is_constant`, else `None`.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    /// Highest exponent of one variable across all terms.
    pub fn degree_in(&self, idx: usize) -> u16 {
        self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0)
    }

    pub fn depends_on(&self, idx: usize) -> bool {
        self.terms.keys().any(|m| m.0[idx] > 0)
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn ensure_same_ctx(&self, other: &Polynomial) -> Result<(), Error> {
        self.ctx.ensure_same(&other.ctx)
    }

    pub fn add_ref(&self, other: &Polynomial) -> Polynomial {
        assert!(self.ctx.same(&other.ctx), "context mismatch");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.entry(m.clone()) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = e.get() + c;
                    if s.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = s;
                    }
                }
            }
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn sub_ref(&self, other: &Polynomial) -> Polynomial {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul_ref(&self, other: &Polynomial) -> Polynomial {
        assert!(self.ctx.same(&other.ctx), "context mismatch");
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match terms.entry(m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = e.get() + &c;
                        if s.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = s;
                        }
                    }
                }
            }
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::constant(&self.ctx, BigRational::one());
        for _ in 0..n {
            acc = acc.mul_ref(self);
        }
        acc
    }

    pub fn derivative(&self, idx: usize) -> Polynomial {
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut em = m.clone();
            em.0[idx] = e - 1;
            let ce = c * BigRational::from_integer(BigInt::from(e));
            terms.insert(em, ce);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    /// Exact evaluation at a full rational assignment (one value per variable).
    pub fn eval_rational(&self, vals: &[BigRational]) -> BigRational {
        assert_eq!(vals.len(), self.ctx.len());
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &vals[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Complex floating evaluation; tracks the largest intermediate term
    /// magnitude so callers can reject badly conditioned samples.
    pub fn eval_c64(&self, vals: &[Complex64]) -> (Complex64, f64) {
        assert_eq!(vals.len(), self.ctx.len());
        let mut acc = Complex64::new(0.0, 0.0);
        let mut max_term = 0.0f64;
        for (m, c) in &self.terms {
            let mut t = Complex64::new(rational_to_f64(c), 0.0);
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= vals[i];
                }
            }
            max_term = max_term.max(t.norm());
            acc += t;
        }
        (acc, max_term)
    }

    /// Map this polynomial into `target` by variable name. Every variable
    /// with a nonzero exponent must exist in the target context.
    pub fn lift(&self, target: &Context) -> Result<Polynomial, Error> {
        if self.ctx.same(target) {
            return Ok(self.clone());
        }
        let mut idx_map = Vec::with_capacity(self.ctx.len());
        for name in self.ctx.names() {
            idx_map.push(target.index(name).ok());
        }
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = vec![0u16; target.len()];
            for (i, &exp) in m.0.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                match idx_map[i] {
                    Some(j) => e[j] = exp,
                    None => return Err(Error::UnknownVariable(self.ctx.name(i).to_string())),
                }
            }
            terms.insert(Monomial(e), c.clone());
        }
        Ok(Polynomial {
            ctx: target.clone(),
            terms,
        })
    }

    /// Exact division; `None` when `self` is not a polynomial multiple of `d`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        assert!(self.ctx.same(&d.ctx), "context mismatch");
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&(BigRational::one() / c)));
        }
        let (dm, dc) = d.leading().unwrap();
        let mut rem = self.clone();
        let mut quo: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().unwrap();
            let qm = rm.div(dm)?;
            let qc = rc / dc;
            let term = Polynomial {
                ctx: self.ctx.clone(),
                terms: [(qm.clone(), qc.clone())].into_iter().collect(),
            };
            rem = rem.sub_ref(&term.mul_ref(d));
            quo.insert(qm, qc);
        }
        Some(Polynomial {
            ctx: self.ctx.clone(),
            terms: quo,
        })
    }

    /// Exact square root; `None` when `self` is not a perfect square.
    pub fn sqrt_exact(&self) -> Option<Polynomial> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lm, lc) = self.leading().unwrap();
        if lm.0.iter().any(|&e| e % 2 != 0) || lc.is_negative() {
            return None;
        }
        let root_m = Monomial(lm.0.iter().map(|&e| e / 2).collect());
        let root_c = rational_sqrt(lc)?;
        let mut root = Polynomial {
            ctx: self.ctx.clone(),
            terms: [(root_m, root_c)].into_iter().collect(),
        };
        loop {
            let rem = self.sub_ref(&root.mul_ref(&root));
            if rem.is_zero() {
                return Some(root);
            }
            // next correction term: lead(rem) / (2 lead(root))
            let (rm, rc) = rem.leading().unwrap();
            let (sm, sc) = root.leading().unwrap();
            let qm = rm.div(sm)?;
            let qc = rc / (sc * BigRational::from_integer(BigInt::from(2)));
            // the correction must be strictly below the current leading term
            let term = Polynomial {
                ctx: self.ctx.clone(),
                terms: [(qm.clone(), qc)].into_iter().collect(),
            };
            if term.leading().unwrap().0 >= root.leading().unwrap().0 {
                return None;
            }
            root = root.add_ref(&term);
        }
    }

    /// Substitute variables by polynomials of a target context. Variables
    /// missing from `map` must exist in the target context by name.
    pub fn compose(
        &self,
        target: &Context,
        map: &BTreeMap<usize, Polynomial>,
    ) -> Result<Polynomial, Error> {
        let mut images: Vec<Polynomial> = Vec::with_capacity(self.ctx.len());
        for i in 0..self.ctx.len() {
            match map.get(&i) {
                Some(p) => {
                    p.ctx.ensure_same(target)?;
                    images.push(p.clone());
                }
                None => images.push(Polynomial::var(target, self.ctx.name(i))?),
            }
        }
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul_ref(&images[i].pow(e as u32));
                }
            }
            acc = acc.add_ref(&t);
        }
        Ok(acc)
    }

    /// Positive integer content: gcd of coefficient numerators divided by
    /// lcm of denominators, with the sign of the leading coefficient.
    pub fn content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num::integer::gcd(num_gcd, c.numer().abs());
            den_lcm = num::integer::lcm(den_lcm, c.denom().clone());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.leading().unwrap().1.is_negative() {
            content = -content;
        }
        content
    }

    /// `(content, primitive part)` with the primitive part having positive
    /// leading coefficient and coprime integer coefficients.
    pub fn primitive(&self) -> (BigRational, Polynomial) {
        let c = self.content();
        if c.is_one() {
            return (c, self.clone());
        }
        let inv = BigRational::one() / c.clone();
        (c, self.scale(&inv))
    }

    /// Deterministic total order on polynomials (by term list).
    pub fn cmp_canonical(&self, other: &Polynomial) -> Ordering {
        let mut a = self.terms.iter();
        let mut b = other.terms.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ma, ca)), Some((mb, cb))) => {
                    let o = ma.cmp(mb).then_with(|| ca.cmp(cb));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
            }
        }
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same(&other.ctx) && self.terms == other.terms
    }
}
impl Eq for Polynomial {}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.add_ref(rhs)
    }
}
impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.sub_ref(rhs)
    }
}
impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.mul_ref(rhs)
    }
}
impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.neg_ref()
    }
}

pub fn rational_to_f64(c: &BigRational) -> f64 {
    c.to_f64()
        .unwrap_or_else(|| c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN))
}

/// Square root of a nonnegative rational, exact or `None`.
pub fn rational_sqrt(c: &BigRational) -> Option<BigRational> {
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) == c.numer() && &(&d * &d) == c.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl fmt::Display for Polynomial {
    /// Canonical printing: graded-lex descending, explicit `*` and `^`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                if mag.denom().is_one() {
                    parts.push(mag.numer().to_string());
                } else {
                    parts.push(format!("{}/{}", mag.numer(), mag.denom()));
                }
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 1 {
                    parts.push(self.ctx.name(i).to_string());
                } else if e > 1 {
                    parts.push(format!("{}^{}", self.ctx.name(i), e));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context::new(&["q1", "q2", "p1", "p2"]).unwrap()
    }

    fn v(c: &Context, n: &str) -> Polynomial {
        Polynomial::var(c, n).unwrap()
    }

    #[test]
    fn additive_identity() {
        let c = ctx();
        let f = &(&v(&c, "q1") * &v(&c, "q1")) + &(&v(&c, "q2") * &v(&c, "q2"));
        assert_eq!(&f + &Polynomial::zero(&c), f);
    }

    #[test]
    fn binomial_square() {
        let c = ctx();
        let qp = &(&v(&c, "q1") * &v(&c, "p1")) + &(&v(&c, "q2") * &v(&c, "p2"));
        let sq = &qp * &qp;
        // q1^2 p1^2 + 2 q1 q2 p1 p2 + q2^2 p2^2
        let expect = Polynomial::from_terms(
            &c,
            vec![
                (Monomial(vec![2, 0, 2, 0]), BigRational::from_integer(1.into())),
                (Monomial(vec![1, 1, 1, 1]), BigRational::from_integer(2.into())),
                (Monomial(vec![0, 2, 0, 2]), BigRational::from_integer(1.into())),
            ],
        );
        assert_eq!(sq, expect);
    }

    #[test]
    fn derivative_basic() {
        let c = ctx();
        let f = &(&v(&c, "q1") * &v(&c, "q1")) + &(&v(&c, "q2") * &v(&c, "q2"));
        let df = f.derivative(0);
        assert_eq!(df, v(&c, "q1").scale(&BigRational::from_integer(2.into())));
    }

    #[test]
    fn div_exact_and_sqrt() {
        let c = ctx();
        let q1 = v(&c, "q1");
        let q2 = v(&c, "q2");
        let s = &q1 + &q2;
        let prod = &s * &s;
        assert_eq!(prod.div_exact(&s).unwrap(), s);
        assert_eq!(prod.sqrt_exact().unwrap(), s);
        assert!((&prod + &q1).sqrt_exact().is_none());
        assert!(q1.div_exact(&q2).is_none());
    }

    #[test]
    fn display_graded_lex() {
        let c = ctx();
        let f = &(&v(&c, "q1") * &v(&c, "q1")) - &v(&c, "q2");
        assert_eq!(format!("{f}"), "q1^2 - q2");
    }
}
