//! Exact sparse multivariate arithmetic over the rationals, together with a
//! single quadratic extension for radical-valued coordinates.

pub mod context;
pub mod grammar;
pub mod poly;
pub mod quadext;
pub mod ratfun;
pub mod scalar;

pub use context::Context;
pub use grammar::{parse_poly, parse_ratfun, parse_scalar};
pub use poly::{rational_sqrt, Monomial, Polynomial};
pub use quadext::QuadExtScalar;
pub use ratfun::RationalFunction;
pub use scalar::Scalar;

use num::BigRational;

/// Rewrite every power `var^(2m+r)` as `rel^m * var^r`; used to test zero
/// modulo a relation such as `k2^2 = 1 - k1^2`.
pub fn rewrite_square(poly: &Polynomial, var: usize, rel: &Polynomial) -> Polynomial {
    let ctx = poly.context().clone();
    let mut acc = Polynomial::zero(&ctx);
    for (m, c) in poly.terms() {
        let e = m.0[var];
        if e < 2 {
            acc = acc.add_ref(&Polynomial::from_terms(&ctx, vec![(m.clone(), c.clone())]));
            continue;
        }
        let mut reduced = m.clone();
        reduced.0[var] = e % 2;
        let base = Polynomial::from_terms(&ctx, vec![(reduced, c.clone())]);
        acc = acc.add_ref(&base.mul_ref(&rel.pow((e / 2) as u32)));
    }
    acc
}

/// Fixed-point application of [`rewrite_square`]: the relation may itself
/// reintroduce low powers, so iterate until stable.
pub fn reduce_mod_square(poly: &Polynomial, var: usize, rel: &Polynomial) -> Polynomial {
    let mut cur = poly.clone();
    loop {
        let next = rewrite_square(&cur, var, rel);
        if next == cur {
            return next;
        }
        cur = next;
    }
}

/// Convenience: a rational from an `i64` pair.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_rewrite_applies_relation() {
        // k2^4 -> (1 - k1^2)^2 under k2^2 = 1 - k1^2
        let ctx = Context::new(&["k1", "k2"]).unwrap();
        let k1 = Polynomial::var(&ctx, "k1").unwrap();
        let k2 = Polynomial::var(&ctx, "k2").unwrap();
        let rel = &Polynomial::int(&ctx, 1) - &(&k1 * &k1);
        let reduced = reduce_mod_square(&k2.pow(4), ctx.index("k2").unwrap(), &rel);
        assert_eq!(reduced, rel.pow(2));
        // k1^2 + k2^2 - 1 reduces to zero
        let expr = &(&(&k1 * &k1) + &(&k2 * &k2)) - &Polynomial::int(&ctx, 1);
        assert!(reduce_mod_square(&expr, ctx.index("k2").unwrap(), &rel).is_zero());
    }
}
