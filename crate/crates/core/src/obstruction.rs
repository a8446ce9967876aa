//! The extended-point-transformation obstruction: for candidate position
//! maps `Q = Q(q)`, the separability cross-derivative
//! `2 (J J^T)_12 + v1 v2 sum_{n>=2} n(n-1) gamma_n (v.P)^{n-2}` with
//! `v = J q` must vanish identically in `P`. Beyond the quadratic family
//! the top coefficient forces `v1 v2 = 0`, which only polar-type
//! candidates satisfy.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{Context, Monomial, Polynomial, RationalFunction, Scalar};

/// A candidate extended point transformation, stored through its two
/// momentum-free position functions over a positions-and-parameters
/// context `(q1, q2, gamma...)`.
#[derive(Clone, Debug)]
pub struct EptCandidate {
    pub name: String,
    ctx: Context,
    pub q_new: [Scalar; 2],
}

impl EptCandidate {
    pub fn new(name: &str, ctx: &Context, q_new: [Scalar; 2]) -> Result<Self> {
        for q in &q_new {
            q.context().ensure_same(ctx)?;
        }
        let cand = EptCandidate {
            name: name.into(),
            ctx: ctx.clone(),
            q_new,
        };
        if cand.det_j().is_zero() {
            return Err(Error::SingularJacobian);
        }
        Ok(cand)
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    /// `J_{ij} = dQ_i/dq_j`.
    pub fn jacobian(&self) -> [[Scalar; 2]; 2] {
        [
            [self.q_new[0].derivative(0), self.q_new[0].derivative(1)],
            [self.q_new[1].derivative(0), self.q_new[1].derivative(1)],
        ]
    }

    pub fn det_j(&self) -> Scalar {
        let j = self.jacobian();
        j[0][0]
            .mul_ref(&j[1][1])
            .sub_ref(&j[0][1].mul_ref(&j[1][0]))
    }

    /// `v = J q`, the radial directional derivatives of the new positions.
    pub fn v(&self) -> [Scalar; 2] {
        let j = self.jacobian();
        let q1 = Scalar::var(&self.ctx, "q1").unwrap();
        let q2 = Scalar::var(&self.ctx, "q2").unwrap();
        [
            j[0][0].mul_ref(&q1).add_ref(&j[0][1].mul_ref(&q2)),
            j[1][0].mul_ref(&q1).add_ref(&j[1][1].mul_ref(&q2)),
        ]
    }

    pub fn v_product(&self) -> Scalar {
        let v = self.v();
        v[0].mul_ref(&v[1])
    }

    /// `(J J^T)_{12} = grad Q1 . grad Q2`.
    pub fn jjt_offdiag(&self) -> Scalar {
        let j = self.jacobian();
        j[0][0]
            .mul_ref(&j[1][0])
            .add_ref(&j[0][1].mul_ref(&j[1][1]))
    }
}

/// The fully expanded cross-derivative residual, a polynomial in
/// `(P1, P2)` with coefficients over the candidate's context. The context
/// of the result is `(q1, q2, P1, P2, params...)`.
pub struct CrossResidual {
    pub ctx: Context,
    pub expanded: Scalar,
}

impl CrossResidual {
    /// Coefficients by `(P1, P2)` exponent pair.
    pub fn p_coefficients(&self) -> BTreeMap<(u16, u16), Scalar> {
        let p1_idx = self.ctx.index("P1").unwrap();
        let p2_idx = self.ctx.index("P2").unwrap();
        let mut out: BTreeMap<(u16, u16), Scalar> = BTreeMap::new();
        let (a, b) = self.expanded.components();
        let disc = self.expanded.discriminant().cloned();
        let mut split = |r: &RationalFunction, radical: bool| {
            let mut groups: BTreeMap<(u16, u16), Vec<(Monomial, num::BigRational)>> =
                BTreeMap::new();
            for (m, c) in r.numerator().terms() {
                let key = (m.0[p1_idx], m.0[p2_idx]);
                let mut rest = m.clone();
                rest.0[p1_idx] = 0;
                rest.0[p2_idx] = 0;
                groups.entry(key).or_default().push((rest, c.clone()));
            }
            for (key, terms) in groups {
                let num = Polynomial::from_terms(&self.ctx, terms);
                let rf = RationalFunction::new(num, r.den_factors().to_vec());
                let s = if radical {
                    Scalar::ext(
                        RationalFunction::zero(&self.ctx),
                        rf,
                        disc.clone().expect("radical part carries a discriminant"),
                    )
                } else {
                    Scalar::Rat(rf)
                };
                out.entry(key)
                    .and_modify(|acc| *acc = acc.add_ref(&s))
                    .or_insert(s);
            }
        };
        split(&a, false);
        if !b.is_zero() {
            split(&b, true);
        }
        out
    }

    /// The part of highest total degree in `(P1, P2)`.
    pub fn top_degree_part(&self) -> (u16, Scalar) {
        let coeffs = self.p_coefficients();
        let top = coeffs.keys().map(|(a, b)| a + b).max().unwrap_or(0);
        let mut acc = Scalar::zero(&self.ctx);
        let p1 = Scalar::var(&self.ctx, "P1").unwrap();
        let p2 = Scalar::var(&self.ctx, "P2").unwrap();
        for ((e1, e2), c) in coeffs {
            if e1 + e2 == top {
                acc = acc.add_ref(&c.mul_ref(&p1.pow(e1 as u32)).mul_ref(&p2.pow(e2 as u32)));
            }
        }
        (top, acc)
    }
}

/// Expand `2 (J J^T)_12 + v1 v2 sum_{n=2}^N n(n-1) gamma_n (v.P)^{n-2}`.
/// The candidate context must contain `gamma2..gammaN` for the requested
/// order (`gamma1` never enters: the linear term has no cross-derivative).
pub fn cross_residual(cand: &EptCandidate, n: usize) -> Result<CrossResidual> {
    assert!(n >= 1);
    let base = cand.context();
    let mut names: Vec<String> = vec!["q1".into(), "q2".into(), "P1".into(), "P2".into()];
    names.extend(base.names().iter().filter(|s| *s != "q1" && *s != "q2").cloned());
    let ctx = Context::new(&names)?;
    let lift = |s: &Scalar| s.lift(&ctx);
    let v = cand.v();
    let v1 = lift(&v[0])?;
    let v2 = lift(&v[1])?;
    let vp = v1
        .mul_ref(&Scalar::var(&ctx, "P1")?)
        .add_ref(&v2.mul_ref(&Scalar::var(&ctx, "P2")?));
    let mut acc = lift(&cand.jjt_offdiag())?.scale(&crate::exact::rat(2, 1));
    let v1v2 = v1.mul_ref(&v2);
    for order in 2..=n {
        let g = Scalar::var(&ctx, &format!("gamma{order}"))?;
        let factor = crate::exact::rat((order * (order - 1)) as i64, 1);
        acc = acc.add_ref(
            &v1v2
                .mul_ref(&g)
                .mul_ref(&vp.pow((order - 2) as u32))
                .scale(&factor),
        );
    }
    Ok(CrossResidual { ctx, expanded: acc })
}

/// Verdict of the polar-type test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolarType {
    /// `Q1` is angular (radial derivative zero) and the gradients are
    /// orthogonal: `(Q1, Q2) = (f(phi), g(r))`.
    Pass { swapped: bool },
    Fail,
}

/// Checks that exactly one position function has vanishing radial
/// derivative and that the gradients are orthogonal.
pub fn polar_type_check(cand: &EptCandidate) -> PolarType {
    let v = cand.v();
    let ortho = cand.jjt_offdiag().is_zero();
    match (v[0].is_zero(), v[1].is_zero(), ortho) {
        (true, false, true) => PolarType::Pass { swapped: false },
        (false, true, true) => PolarType::Pass { swapped: true },
        _ => PolarType::Fail,
    }
}

/// The three shipped candidates over `(q1, q2, gamma1..gammaN)`.
pub fn builtin_candidates(n_gammas: usize) -> Result<Vec<EptCandidate>> {
    let mut names: Vec<String> = vec!["q1".into(), "q2".into()];
    for i in 1..=n_gammas.max(2) {
        names.push(format!("gamma{i}"));
    }
    let ctx = Context::new(&names)?;
    let q1 = Scalar::var(&ctx, "q1")?;
    let q2 = Scalar::var(&ctx, "q2")?;
    let polar = EptCandidate::new(
        "polar_type",
        &ctx,
        [q2.div_ref(&q1)?, q1.pow(2).add_ref(&q2.pow(2))],
    )?;
    let g2 = Scalar::var(&ctx, "gamma2")?;
    let d = Scalar::one(&ctx).add_ref(&g2.mul_ref(&q1.pow(2)));
    let d_poly = d.as_rat().and_then(|r| r.as_poly()).cloned().unwrap();
    let cartesian = EptCandidate::new(
        "cartesian_I2_positions",
        &ctx,
        [q1.clone(), q2.div_ref(&Scalar::sqrt_poly(&d_poly))?],
    )?;
    let identity = EptCandidate::new("identity", &ctx, [q1, q2])?;
    Ok(vec![polar, cartesian, identity])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polar_candidate_annihilates_cross_residual() {
        let cands = builtin_candidates(5).unwrap();
        let polar = &cands[0];
        assert!(polar.v_product().is_zero());
        for n in 1..=5 {
            let res = cross_residual(polar, n).unwrap();
            assert!(res.expanded.is_zero(), "nonzero for N = {n}");
        }
        assert_eq!(polar_type_check(polar), PolarType::Pass { swapped: false });
    }

    #[test]
    fn swapped_polar_candidate_sets_the_flag() {
        let ctx = Context::new(&["q1", "q2", "gamma1", "gamma2"]).unwrap();
        let q1 = Scalar::var(&ctx, "q1").unwrap();
        let q2 = Scalar::var(&ctx, "q2").unwrap();
        let cand = EptCandidate::new(
            "swapped",
            &ctx,
            [q1.pow(2).add_ref(&q2.pow(2)), q2.div_ref(&q1).unwrap()],
        )
        .unwrap();
        assert_eq!(polar_type_check(&cand), PolarType::Pass { swapped: true });
    }

    #[test]
    fn cartesian_candidate_saturates_quadratic_but_fails_cubic() {
        let cands = builtin_candidates(3).unwrap();
        let cart = &cands[1];
        assert!(!cart.v_product().is_zero());
        assert_eq!(polar_type_check(cart), PolarType::Fail);
        // N = 2: the single equation 2(JJ^T)_12 + 2 gamma2 v1 v2 = 0 holds
        let res2 = cross_residual(cart, 2).unwrap();
        assert!(res2.expanded.is_zero());
        // N = 3: the coefficient of (v.P)^1 is 6 gamma3 v1 v2 != 0
        let res3 = cross_residual(cart, 3).unwrap();
        assert!(!res3.expanded.is_zero());
        let coeffs = res3.p_coefficients();
        let g3 = Scalar::var(&res3.ctx, "gamma3").unwrap();
        let v = cart.v();
        let v1 = v[0].lift(&res3.ctx).unwrap();
        let v2 = v[1].lift(&res3.ctx).unwrap();
        let six = crate::exact::rat(6, 1);
        let base = g3.mul_ref(&v1).mul_ref(&v2).scale(&six);
        // P1 coefficient: 6 gamma3 v1^2 v2; P2 coefficient: 6 gamma3 v1 v2^2
        let c10 = coeffs.get(&(1, 0)).expect("P1 coefficient");
        assert!(c10.equals(&base.mul_ref(&v1)));
        let c01 = coeffs.get(&(0, 1)).expect("P2 coefficient");
        assert!(c01.equals(&base.mul_ref(&v2)));
        // top-degree invariant: degree-(k-2) part is k(k-1) gamma_k v1v2 (v.P)^{k-2}
        let (top, part) = res3.top_degree_part();
        assert_eq!(top, 1);
        let p1 = Scalar::var(&res3.ctx, "P1").unwrap();
        let p2 = Scalar::var(&res3.ctx, "P2").unwrap();
        let vp = v1.mul_ref(&p1).add_ref(&v2.mul_ref(&p2));
        assert!(part.equals(&base.mul_ref(&vp).div_ref(&g3).unwrap().mul_ref(&g3)));
    }

    #[test]
    fn identity_candidate_v_product() {
        let cands = builtin_candidates(2).unwrap();
        let id = &cands[2];
        let expect = crate::exact::parse_scalar(id.context(), "q1*q2").unwrap();
        assert!(id.v_product().equals(&expect));
    }

    #[test]
    fn n2_reduction_matches_single_equation() {
        // for every candidate, the N = 2 residual equals
        // 2 (JJ^T)_12 + 2 gamma2 v1 v2 with no momentum dependence
        for cand in builtin_candidates(2).unwrap() {
            let res = cross_residual(&cand, 2).unwrap();
            let coeffs = res.p_coefficients();
            assert!(coeffs.keys().all(|&(a, b)| a == 0 && b == 0));
            let g2 = Scalar::var(&res.ctx, "gamma2").unwrap();
            let expect = cand
                .jjt_offdiag()
                .lift(&res.ctx)
                .unwrap()
                .scale(&crate::exact::rat(2, 1))
                .add_ref(
                    &cand
                        .v_product()
                        .lift(&res.ctx)
                        .unwrap()
                        .mul_ref(&g2)
                        .scale(&crate::exact::rat(2, 1)),
                );
            assert!(res.expanded.equals(&expect));
        }
    }
}
