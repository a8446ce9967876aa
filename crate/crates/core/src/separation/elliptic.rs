//! Confocal (elliptic) chart data: the quadratic whose roots are the
//! coordinates, the Stäckel weights, characteristic forms and the level-set
//! geometry.
//!
//! The interfocal parameters satisfy `k1^2 + k2^2 = 1`. With symbolic
//! `k1, k2` every polynomial here is kept in the normal form of the rewrite
//! `k2^2 -> 1 - k1^2` (the quotient ring has `k2`-degree at most one), and
//! zero tests reduce modulo the relation. Rational specializations satisfy
//! the relation exactly and skip the rewrite.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::exact::{reduce_mod_square, Context, Polynomial, RationalFunction, Scalar};
use crate::models::ParamEnv;
use crate::tensor::TensorField11;

/// Symmetric data of the confocal chart over a context containing
/// `q1, q2, gamma1, gamma2, k1, k2` (parameters possibly specialized):
/// `lambda^2 - T lambda + P` has roots `lambda_{1,2} = (T +- S)/2` with
/// `S = sqrt(T^2 - 4P)`.
pub struct ConfocalData {
    pub ctx: Context,
    pub t: Scalar,
    pub p: Scalar,
    pub s: Scalar,
    pub lambda1: Scalar,
    pub lambda2: Scalar,
    g1: Scalar,
    g2: Scalar,
    k1: Scalar,
    k2: Scalar,
    /// Indices for the rewrite; `None` when `k2` is specialized.
    relation: Option<(usize, usize)>,
}

impl ConfocalData {
    pub fn new(env: &ParamEnv) -> Result<Self> {
        Self::new_in(env, env.ctx())
    }

    /// Build the data over a different context sharing the variable names
    /// (e.g. the mixed context of the elliptic map).
    pub fn new_in(env: &ParamEnv, ctx: &Context) -> Result<Self> {
        let g1 = env.param("gamma1")?.lift(ctx)?;
        let g2 = env.param("gamma2")?.lift(ctx)?;
        let k1 = env.param("k1")?.lift(ctx)?;
        let k2 = env.param("k2")?.lift(ctx)?;
        let relation = match (ctx.index("k2"), ctx.index("k1")) {
            (Ok(i2), Ok(i1)) => Some((i2, i1)),
            _ => None,
        };
        let q1 = Scalar::var(ctx, "q1")?;
        let q2 = Scalar::var(ctx, "q2")?;
        let t = g2
            .mul_ref(&q1.pow(2).add_ref(&k1.pow(2).mul_ref(&q2.pow(2))))
            .add_ref(&k2.pow(2));
        let p = g2
            .mul_ref(&k1.pow(2))
            .mul_ref(&k2.pow(2))
            .mul_ref(&q2.pow(2));
        let mut data = ConfocalData {
            ctx: ctx.clone(),
            t: Scalar::zero(ctx),
            p: Scalar::zero(ctx),
            s: Scalar::zero(ctx),
            lambda1: Scalar::zero(ctx),
            lambda2: Scalar::zero(ctx),
            g1,
            g2,
            k1,
            k2,
            relation,
        };
        data.t = data.nf_scalar(&t);
        data.p = data.nf_scalar(&p);
        let disc = data.nf_scalar(
            &data
                .t
                .mul_ref(&data.t)
                .sub_ref(&data.p.scale(&crate::exact::rat(4, 1))),
        );
        data.s = Scalar::sqrt_rat(disc.as_rat().expect("polynomial discriminant"))?;
        let half = crate::exact::rat(1, 2);
        data.lambda1 = data.t.add_ref(&data.s).scale(&half);
        data.lambda2 = data.t.sub_ref(&data.s).scale(&half);
        Ok(data)
    }

    /// Normal form of a polynomial under `k2^2 -> 1 - k1^2`.
    pub fn nf(&self, p: &Polynomial) -> Polynomial {
        match self.relation {
            Some((k2_idx, k1_idx)) => {
                let one = Polynomial::int(p.context(), 1);
                let k1 = Polynomial::var_idx(p.context(), k1_idx);
                let rel = one.sub_ref(&k1.mul_ref(&k1));
                reduce_mod_square(p, k2_idx, &rel)
            }
            None => p.clone(),
        }
    }

    fn nf_rat(&self, r: &RationalFunction) -> RationalFunction {
        let den: Vec<(Polynomial, u32)> = r
            .den_factors()
            .iter()
            .map(|(f, e)| (self.nf(f), *e))
            .collect();
        RationalFunction::new(self.nf(r.numerator()), den)
    }

    /// Normal form of a scalar (numerators, denominator factors and the
    /// discriminant all reduced).
    pub fn nf_scalar(&self, s: &Scalar) -> Scalar {
        match s {
            Scalar::Rat(r) => Scalar::Rat(self.nf_rat(r)),
            Scalar::Ext(e) => Scalar::ext(self.nf_rat(&e.a), self.nf_rat(&e.b), self.nf(&e.d)),
        }
    }

    /// Zero test modulo the interfocal relation.
    pub fn is_zero_mod_relation(&self, s: &Scalar) -> bool {
        match self.relation {
            Some((k2_idx, k1_idx)) => s.is_zero_mod(|p: &Polynomial| {
                let one = Polynomial::int(p.context(), 1);
                let k1 = Polynomial::var_idx(p.context(), k1_idx);
                let rel = one.sub_ref(&k1.mul_ref(&k1));
                reduce_mod_square(p, k2_idx, &rel)
            }),
            None => s.is_zero(),
        }
    }

    /// Reduce every entry of a tensor to normal form.
    pub fn nf_tensor(&self, k: &TensorField11) -> TensorField11 {
        let rows = k
            .rows()
            .iter()
            .map(|row| row.iter().map(|e| self.nf_scalar(e)).collect())
            .collect();
        TensorField11::from_rows(&self.ctx, rows)
    }

    /// Stäckel weight `h(l) = 4 gamma2 l (l - k2^2)(l + k1^2)`.
    pub fn h_at(&self, l: &Scalar) -> Result<Scalar> {
        let four = crate::exact::rat(4, 1);
        Ok(self
            .g2
            .mul_ref(l)
            .mul_ref(&l.sub_ref(&self.nf_scalar(&self.k2.pow(2))))
            .mul_ref(&l.add_ref(&self.k1.pow(2)))
            .scale(&four))
    }

    /// Linear weight `g(l) = 2 gamma1 l (l - k2^2)`.
    pub fn g_at(&self, l: &Scalar) -> Result<Scalar> {
        let two = crate::exact::rat(2, 1);
        Ok(self
            .g1
            .mul_ref(l)
            .mul_ref(&l.sub_ref(&self.nf_scalar(&self.k2.pow(2))))
            .scale(&two))
    }

    /// Finite roots of the Stäckel weight: `{0, k2^2, -k1^2}`.
    pub fn weight_roots(&self) -> Vec<Scalar> {
        vec![
            Scalar::zero(&self.ctx),
            self.nf_scalar(&self.k2.pow(2)),
            self.k1.pow(2).neg_ref(),
        ]
    }

    /// The position block of `K_e` as printed (which presumes the
    /// interfocal relation):
    /// `[[-g2 k1^2 q2^2, g2 k1^2 q1 q2], [g2 q1 q2, -g2 q1^2 - k2^2]]`.
    pub fn a_block_printed(&self) -> [[Scalar; 2]; 2] {
        let q1 = Scalar::var(&self.ctx, "q1").unwrap();
        let q2 = Scalar::var(&self.ctx, "q2").unwrap();
        let g2 = &self.g2;
        let k1sq = self.k1.pow(2);
        [
            [
                g2.mul_ref(&k1sq).mul_ref(&q2.pow(2)).neg_ref(),
                g2.mul_ref(&k1sq).mul_ref(&q1).mul_ref(&q2),
            ],
            [
                g2.mul_ref(&q1).mul_ref(&q2),
                g2.mul_ref(&q1.pow(2))
                    .neg_ref()
                    .sub_ref(&self.nf_scalar(&self.k2.pow(2))),
            ],
        ]
    }

    /// Characteristic 1-forms of the position block: for each eigenvalue
    /// `lambda_i` of `A_e` (equal to `-lambda_{3-i}` of the chart
    /// coordinates), `sigma_i = g2 q1 q2 dq1 + (g2 k1^2 q2^2 + lambda_i) dq2`
    /// must solve `sigma A_e = lambda_i sigma`. Returns the row-residuals
    /// for both eigenvalues.
    pub fn sigma_residuals(&self) -> Vec<Scalar> {
        let a = self.a_block_printed();
        let q1 = Scalar::var(&self.ctx, "q1").unwrap();
        let q2 = Scalar::var(&self.ctx, "q2").unwrap();
        let g2 = &self.g2;
        let k1sq = self.k1.pow(2);
        let mut out = Vec::new();
        for lam in [self.lambda2.neg_ref(), self.lambda1.neg_ref()] {
            let sigma = [
                g2.mul_ref(&q1).mul_ref(&q2),
                g2.mul_ref(&k1sq).mul_ref(&q2.pow(2)).add_ref(&lam),
            ];
            for col in 0..2 {
                let lhs = sigma[0]
                    .mul_ref(&a[0][col])
                    .add_ref(&sigma[1].mul_ref(&a[1][col]));
                out.push(lhs.sub_ref(&lam.mul_ref(&sigma[col])));
            }
        }
        out
    }

    /// Level-set residual: substituting `lambda1` into
    /// `g2 q1^2/(l - k2^2) + g2 k1^2 q2^2 / l = 1` must give zero.
    pub fn level_set_residual(&self) -> Result<Scalar> {
        let q1 = Scalar::var(&self.ctx, "q1")?;
        let q2 = Scalar::var(&self.ctx, "q2")?;
        let l = &self.lambda1;
        let term1 = self
            .g2
            .mul_ref(&q1.pow(2))
            .div_ref(&l.sub_ref(&self.nf_scalar(&self.k2.pow(2))))?;
        let term2 = self
            .g2
            .mul_ref(&self.k1.pow(2))
            .mul_ref(&q2.pow(2))
            .div_ref(l)?;
        Ok(term1.add_ref(&term2).sub_ref(&Scalar::one(&self.ctx)))
    }

    /// Gnomonic-projection consistency: substituting `xi_i = q_i xi3` into
    /// the conic `xi1^2/A + k1^2 xi2^2/B = xi3^2` with
    /// `A = (lambda1 - k2^2)/g2`, `B = lambda1/g2` and dividing by `xi3^2`
    /// recovers the level-set equation; returns the difference.
    pub fn gnomonic_residual(&self) -> Result<Scalar> {
        let ext = self.ctx.extend(&["xi3"])?;
        let xi3 = Scalar::var(&ext, "xi3")?;
        let q1 = Scalar::var(&ext, "q1")?;
        let q2 = Scalar::var(&ext, "q2")?;
        let l1 = self.lambda1.lift(&ext)?;
        let g2 = self.g2.lift(&ext)?;
        let k1 = self.k1.lift(&ext)?;
        let k2sq = self.nf_scalar(&self.k2.pow(2)).lift(&ext)?;
        let a = l1.sub_ref(&k2sq).div_ref(&g2)?;
        let b = l1.div_ref(&g2)?;
        let xi1 = q1.mul_ref(&xi3);
        let xi2 = q2.mul_ref(&xi3);
        let conic = xi1
            .pow(2)
            .div_ref(&a)?
            .add_ref(&k1.pow(2).mul_ref(&xi2.pow(2)).div_ref(&b)?)
            .sub_ref(&xi3.pow(2));
        let projected = conic.div_ref(&xi3.pow(2))?;
        let level = self.level_set_residual()?.lift(&ext)?;
        Ok(projected.sub_ref(&level))
    }

    /// `S` evaluated at the focal point `(0, k2/(sqrt(gamma2) k1))`; callers
    /// use an environment with `gamma2 = g^2` so the point is rational.
    pub fn s_at_focal_point(&self) -> Result<Scalar> {
        let g = Scalar::var(&self.ctx, "g")?;
        let focal_q2 = self
            .k2
            .div_ref(&g.mul_ref(&self.k1))?
            .as_rat()
            .cloned()
            .expect("rational focal point");
        let mut map = BTreeMap::new();
        map.insert(
            self.ctx.index("q1")?,
            RationalFunction::zero(&self.ctx),
        );
        map.insert(self.ctx.index("q2")?, focal_q2);
        let v = self.s.substitute(&self.ctx, &map)?;
        Ok(self.nf_scalar(&v))
    }
}

/// Residual of the discriminant factorization under `gamma2 = g^2`:
/// `T^2 - 4P = [g^2 q1^2 + (g k1 q2 + k2)^2][g^2 q1^2 + (g k1 q2 - k2)^2]`.
/// This identity holds without the interfocal relation, so it is computed
/// from the unreduced `T`, `P`.
pub fn discriminant_factorization_residual(env: &ParamEnv) -> Result<Scalar> {
    let ctx = env.ctx();
    let g = Scalar::var(ctx, "g")?;
    let g1 = env.param("gamma2")?; // equals g^2 in the caller's environment
    let k1 = env.param("k1")?;
    let k2 = env.param("k2")?;
    let q1 = Scalar::var(ctx, "q1")?;
    let q2 = Scalar::var(ctx, "q2")?;
    let t = g1
        .mul_ref(&q1.pow(2).add_ref(&k1.pow(2).mul_ref(&q2.pow(2))))
        .add_ref(&k2.pow(2));
    let p = g1
        .mul_ref(&k1.pow(2))
        .mul_ref(&k2.pow(2))
        .mul_ref(&q2.pow(2));
    let disc = t.mul_ref(&t).sub_ref(&p.scale(&crate::exact::rat(4, 1)));
    let gsq_q1sq = g.pow(2).mul_ref(&q1.pow(2));
    let cross = g.mul_ref(&k1).mul_ref(&q2);
    let f_plus = gsq_q1sq.add_ref(&cross.add_ref(&k2).pow(2));
    let f_minus = gsq_q1sq.add_ref(&cross.sub_ref(&k2).pow(2));
    Ok(disc.sub_ref(&f_plus.mul_ref(&f_minus)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{ParamEnv, ParamValue};

    fn env() -> ParamEnv {
        ParamEnv::symbolic_elliptic()
    }

    #[test]
    fn vieta_identities() {
        let d = ConfocalData::new(&env()).unwrap();
        assert!(d.lambda1.add_ref(&d.lambda2).sub_ref(&d.t).is_zero());
        assert!(d.lambda1.mul_ref(&d.lambda2).sub_ref(&d.p).is_zero());
    }

    #[test]
    fn t_at_origin_is_k2_squared() {
        let e = env();
        let d = ConfocalData::new(&e).unwrap();
        let ctx = e.ctx();
        let mut map = BTreeMap::new();
        map.insert(0usize, RationalFunction::zero(ctx));
        map.insert(1usize, RationalFunction::zero(ctx));
        let t0 = d.t.substitute(ctx, &map).unwrap();
        let expect = d.nf_scalar(&e.param("k2").unwrap().pow(2));
        assert!(t0.equals(&expect));
    }

    #[test]
    fn level_set_and_sigma() {
        let d = ConfocalData::new(&env()).unwrap();
        assert!(d.is_zero_mod_relation(&d.level_set_residual().unwrap()));
        for r in d.sigma_residuals() {
            assert!(d.is_zero_mod_relation(&r));
        }
        assert!(d.is_zero_mod_relation(&d.gnomonic_residual().unwrap()));
    }

    #[test]
    fn discriminant_factorization_and_focal_point() {
        // gamma2 = g^2 with a fresh symbol g
        let e = ParamEnv::new_extended(
            &["q1", "q2", "p1", "p2"],
            &["g"],
            &[
                ("gamma1", ParamValue::Sym),
                ("gamma2", ParamValue::Expr("g^2".into())),
                ("k1", ParamValue::Sym),
                ("k2", ParamValue::Sym),
            ],
        )
        .unwrap();
        assert!(discriminant_factorization_residual(&e).unwrap().is_zero());
        let d = ConfocalData::new(&e).unwrap();
        assert!(d.is_zero_mod_relation(&d.s_at_focal_point().unwrap()));
    }

    #[test]
    fn weight_roots_deduplicate_at_k1_zero() {
        let e = ParamEnv::new(
            &["q1", "q2", "p1", "p2"],
            &[
                ("gamma1", ParamValue::Sym),
                ("gamma2", ParamValue::Sym),
                ("k1", ParamValue::rational(0, 1)),
                ("k2", ParamValue::rational(1, 1)),
            ],
        )
        .unwrap();
        let d = ConfocalData::new(&e).unwrap();
        let kind = crate::separation::SeparationKind::Elliptic(&d);
        let (n, class) = crate::separation::ode_singularity_count(&kind);
        assert_eq!(n, 3);
        assert_eq!(class, crate::separation::OdeClass::Hypergeometric);
    }

    #[test]
    fn generic_weight_has_four_singular_points() {
        let d = ConfocalData::new(&env()).unwrap();
        let kind = crate::separation::SeparationKind::Elliptic(&d);
        let (n, class) = crate::separation::ode_singularity_count(&kind);
        assert_eq!(n, 4);
        assert_eq!(class, crate::separation::OdeClass::Heun);
    }

    #[test]
    fn rational_interfocal_specialization() {
        // k1 = 3/5, k2 = 4/5: the relation holds exactly, no rewrite
        let e = ParamEnv::new(
            &["q1", "q2", "p1", "p2"],
            &[
                ("gamma1", ParamValue::Sym),
                ("gamma2", ParamValue::Sym),
                ("k1", ParamValue::rational(3, 5)),
                ("k2", ParamValue::rational(4, 5)),
            ],
        )
        .unwrap();
        let d = ConfocalData::new(&e).unwrap();
        assert!(d.level_set_residual().unwrap().is_zero());
        for r in d.sigma_residuals() {
            assert!(r.is_zero());
        }
    }
}
