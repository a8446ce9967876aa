//! Step B and the separation constructions: Darboux coordinates from
//! lift-form operators, canonicity and separated-form verification in
//! mixed coordinates, conjugate-momentum search, Stäckel data for the
//! confocal chart, and singularity classification of the separated ODEs.

pub mod elliptic;
pub mod maps;
pub mod stepb;

pub use maps::{
    build_ept_from_lift, cartesian_i1_map, cartesian_i2_map, elliptic_map, oscillator_map,
    polar_map, CanonicalMap, CoordinateChoice, MapName,
};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{Context, Polynomial, Scalar};
use crate::models::ParamEnv;
use crate::tensor::TensorField11;

/// `K - tr(K)/2 I`; forwards to the models implementation.
pub use crate::models::nijenhuis_generator;

/// The mixed-coordinate expression of the family Hamiltonian in the polar
/// frame `(r, phi, P_r, P_phi)`, verified without any transcendental
/// functions: `p` is substituted by its polar-frame expression
/// `p1 = (q1/r) P_r - (q2/r^2) P_phi`, `p2 = (q2/r) P_r + (q1/r^2) P_phi`,
/// with `r = sqrt(q1^2+q2^2)` living in the quadratic extension. Returns
/// the residual of `H_(N) - [P_r^2 + P_phi^2/r^2 + sum gamma_n (r P_r)^n]`;
/// `P1` plays the role of `P_r` and `P2` of `P_phi`.
pub fn polar_frame_residual(env: &ParamEnv, n: usize) -> Result<Scalar> {
    let ctx = env.ctx();
    let mixed_names: Vec<String> = {
        let mut v = vec!["q1".into(), "q2".into(), "P1".into(), "P2".into()];
        v.extend(ctx.names()[4..].iter().cloned());
        v
    };
    let mixed = Context::new(&mixed_names)?;
    let d = crate::exact::parse_poly(&mixed, "q1^2 + q2^2")?;
    let root = Scalar::sqrt_poly(&d); // r
    let q1 = Scalar::var(&mixed, "q1")?;
    let q2 = Scalar::var(&mixed, "q2")?;
    let pr = Scalar::var(&mixed, "P1")?;
    let pphi = Scalar::var(&mixed, "P2")?;
    let dd = Scalar::from(d.clone());
    // p_i(q, P_r, P_phi)
    let p1 = q1
        .mul_ref(&root)
        .div_ref(&dd)?
        .mul_ref(&pr)
        .sub_ref(&q2.div_ref(&dd)?.mul_ref(&pphi));
    let p2 = q2
        .mul_ref(&root)
        .div_ref(&dd)?
        .mul_ref(&pr)
        .add_ref(&q1.div_ref(&dd)?.mul_ref(&pphi));
    let h = crate::models::hamiltonian(env, n)?;
    let mut map = BTreeMap::new();
    map.insert(2usize, p1);
    map.insert(3usize, p2);
    let h_mixed = h.substitute_scalars(&mixed, &map)?;
    // claimed: P_r^2 + P_phi^2 / r^2 + sum gamma_n (r P_r)^n
    let mut claimed = pr.pow(2).add_ref(&pphi.pow(2).div_ref(&dd)?);
    let rpr = root.mul_ref(&pr);
    for i in 1..=n {
        let g = env.param(&format!("gamma{i}"))?.lift(&mixed)?;
        claimed = claimed.add_ref(&g.mul_ref(&rpr.pow(i as u32)));
    }
    Ok(h_mixed.sub_ref(&claimed))
}

/// Claimed separated forms for the Cartesian-type chart adapted to `I_2`,
/// over the map's mixed context: returns `(claimed_H, claimed_I2)` with
/// `Q1 = q1` and `Q2 = q2/sqrt(1+gamma2 q1^2)` substituted.
pub fn cartesian_i2_claimed(env: &ParamEnv) -> Result<(Scalar, Scalar)> {
    let map = cartesian_i2_map(env)?;
    let mixed = map.mixed_context();
    let g1 = env.param("gamma1")?.lift(&mixed)?;
    let g2 = env.param("gamma2")?.lift(&mixed)?;
    let d = crate::exact::parse_poly(&mixed, "1 + gamma2*q1^2").ok();
    // with rational gamma2 the conformal factor must be rebuilt
    let dd = match d {
        Some(p) => Scalar::from(p),
        None => {
            let q1 = Scalar::var(&mixed, "q1")?;
            Scalar::one(&mixed).add_ref(&g2.mul_ref(&q1.pow(2)))
        }
    };
    let q1 = Scalar::var(&mixed, "q1")?;
    let q2 = Scalar::var(&mixed, "q2")?;
    let p1 = Scalar::var(&mixed, "P1")?;
    let p2 = Scalar::var(&mixed, "P2")?;
    let d_poly = dd
        .as_rat()
        .and_then(|r| r.as_poly())
        .cloned()
        .expect("conformal factor");
    let q2_new = q2.div_ref(&Scalar::sqrt_poly(&d_poly))?;
    let sep = |q: &Scalar, p: &Scalar| -> Scalar {
        // P^2 + gamma1 Q P + gamma2 (Q P)^2
        p.pow(2)
            .add_ref(&g1.mul_ref(q).mul_ref(p))
            .add_ref(&g2.mul_ref(&q.mul_ref(p).pow(2)))
    };
    let claimed_i2 = sep(&q2_new, &p2);
    let claimed_h = sep(&q1, &p1).add_ref(&claimed_i2.div_ref(&dd)?);
    Ok((claimed_h, claimed_i2))
}

/// Mirror claimed forms for the chart adapted to `I_1`.
pub fn cartesian_i1_claimed(env: &ParamEnv) -> Result<(Scalar, Scalar)> {
    let map = cartesian_i1_map(env)?;
    let mixed = map.mixed_context();
    let g1 = env.param("gamma1")?.lift(&mixed)?;
    let g2 = env.param("gamma2")?.lift(&mixed)?;
    let q1 = Scalar::var(&mixed, "q1")?;
    let q2 = Scalar::var(&mixed, "q2")?;
    let p1 = Scalar::var(&mixed, "P1")?;
    let p2 = Scalar::var(&mixed, "P2")?;
    let dd = Scalar::one(&mixed).add_ref(&g2.mul_ref(&q2.pow(2)));
    let d_poly = dd
        .as_rat()
        .and_then(|r| r.as_poly())
        .cloned()
        .expect("conformal factor");
    let q1_new = q1.div_ref(&Scalar::sqrt_poly(&d_poly))?;
    let sep = |q: &Scalar, p: &Scalar| -> Scalar {
        p.pow(2)
            .add_ref(&g1.mul_ref(q).mul_ref(p))
            .add_ref(&g2.mul_ref(&q.mul_ref(p).pow(2)))
    };
    let claimed_i1 = sep(&q1_new, &p1);
    let claimed_h = claimed_i1
        .div_ref(&dd)?
        .add_ref(&sep(&q2, &p2));
    Ok((claimed_h, claimed_i1))
}

/// Stäckel form of the Hamiltonian in the confocal chart, over the
/// elliptic map's mixed context:
/// `[h(l1) P1^2 - h(l2) P2^2 + g(l1) P1 - g(l2) P2] / (l1 - l2)`.
pub fn elliptic_claimed(env: &ParamEnv) -> Result<Scalar> {
    let map = elliptic_map(env)?;
    let mixed = map.mixed_context();
    let data = elliptic::ConfocalData::new_in(env, &mixed)?;
    let p1 = Scalar::var(&mixed, "P1")?;
    let p2 = Scalar::var(&mixed, "P2")?;
    let l1 = &data.lambda1;
    let l2 = &data.lambda2;
    let num = data
        .h_at(l1)?
        .mul_ref(&p1.pow(2))
        .sub_ref(&data.h_at(l2)?.mul_ref(&p2.pow(2)))
        .add_ref(&data.g_at(l1)?.mul_ref(&p1))
        .sub_ref(&data.g_at(l2)?.mul_ref(&p2));
    num.div_ref(&l1.sub_ref(l2))
}

/// Diagonal separation operators of a separated family: for integrals
/// `H_list` written in a Darboux chart whose variables are the first four
/// context entries, `K_alpha = diag(r_1, r_2, r_1, r_2)` with
/// `r_i = (dH_alpha/dy_i)/(dH/dy_i)`.
pub fn separation_operators_from_separated(
    h_list: &[Scalar],
    base: usize,
) -> Result<Vec<TensorField11>> {
    let h = &h_list[base];
    let ctx = h.context().clone();
    let dh = [h.derivative(2), h.derivative(3)];
    for d in &dh {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
    }
    let mut out = Vec::with_capacity(h_list.len());
    for ha in h_list {
        let r1 = ha.derivative(2).div_ref(&dh[0])?;
        let r2 = ha.derivative(3).div_ref(&dh[1])?;
        let mut k = TensorField11::zero(&ctx);
        k.set(0, 0, r1.clone());
        k.set(1, 1, r2.clone());
        k.set(2, 2, r1);
        k.set(3, 3, r2);
        out.push(k);
    }
    Ok(out)
}

/// Singular-point classes of the separated quantum ODEs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OdeClass {
    Hypergeometric,
    Heun,
}

impl OdeClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            OdeClass::Hypergeometric => "hypergeometric",
            OdeClass::Heun => "Heun",
        }
    }
}

/// Separation charts for the ODE classification.
pub enum SeparationKind<'a> {
    Polar,
    CartesianI2,
    CartesianI1,
    Elliptic(&'a elliptic::ConfocalData),
}

/// Count the regular singular points of the separated eigenvalue ODE.
/// Rational charts have three (two finite plus infinity); the confocal
/// chart counts the distinct roots of the Stäckel weight plus infinity.
pub fn ode_singularity_count(kind: &SeparationKind) -> (usize, OdeClass) {
    match kind {
        SeparationKind::Polar | SeparationKind::CartesianI2 | SeparationKind::CartesianI1 => {
            (3, OdeClass::Hypergeometric)
        }
        SeparationKind::Elliptic(data) => {
            let roots = data.weight_roots();
            let mut distinct: Vec<&Scalar> = Vec::new();
            for r in &roots {
                if !distinct.iter().any(|d| d.equals(r)) {
                    distinct.push(r);
                }
            }
            let n = distinct.len() + 1; // plus infinity
            let class = if n >= 4 {
                OdeClass::Heun
            } else {
                OdeClass::Hypergeometric
            };
            (n, class)
        }
    }
}

/// The conformal factor `1 + gamma2 q1^2` of the `I_2` chart, exposed for
/// reuse in suites.
pub fn i2_conformal_factor(env: &ParamEnv) -> Result<Polynomial> {
    let q1 = env.var("q1");
    let g2 = env.param("gamma2")?;
    let d = Scalar::one(env.ctx()).add_ref(&g2.mul_ref(&q1.pow(2)));
    d.as_rat()
        .and_then(|r| r.as_poly())
        .cloned()
        .ok_or(Error::MomentumRelation)
}
