//! The generalized Zernike family: Hamiltonians, integrals of motion, the
//! cubic symmetry algebra, and the catalog of Haantjes and Nijenhuis
//! operators attached to the integrals.

use std::collections::BTreeMap;

use num::BigRational;

use crate::error::{Error, Result};
use crate::exact::{Context, Polynomial, RationalFunction, Scalar};
use crate::phase::{differential, OneForm};
use crate::tensor::TensorField11;

/// One model parameter: either a symbol in the context or an exact
/// rational specialization.
#[derive(Clone, Debug)]
pub enum ParamValue {
    Sym,
    Rat(BigRational),
    /// Expression over the context (phase variables, extra symbols and the
    /// symbolic parameters), e.g. `gamma2 = g^2`.
    Expr(String),
}

impl ParamValue {
    pub fn rational(n: i64, d: i64) -> Self {
        ParamValue::Rat(BigRational::new(n.into(), d.into()))
    }
}

/// A phase-space context together with parameter bindings. Symbolic
/// parameters become trailing context variables; rational ones become
/// constants, so specialized runs never carry dead symbols.
#[derive(Clone, Debug)]
pub struct ParamEnv {
    ctx: Context,
    values: BTreeMap<String, Scalar>,
}

impl ParamEnv {
    pub fn new(phase_vars: &[&str], params: &[(&str, ParamValue)]) -> Result<Self> {
        Self::new_extended(phase_vars, &[], params)
    }

    /// Like [`ParamEnv::new`] with additional bare symbols in the context
    /// (used e.g. to put `gamma2 = g^2` with `g` a fresh symbol).
    pub fn new_extended(
        phase_vars: &[&str],
        extra_symbols: &[&str],
        params: &[(&str, ParamValue)],
    ) -> Result<Self> {
        let mut names: Vec<String> = phase_vars.iter().map(|s| s.to_string()).collect();
        names.extend(extra_symbols.iter().map(|s| s.to_string()));
        for (name, v) in params {
            if matches!(v, ParamValue::Sym) {
                names.push(name.to_string());
            }
        }
        let ctx = Context::new(&names)?;
        let mut values = BTreeMap::new();
        for (name, v) in params {
            let s = match v {
                ParamValue::Sym => Scalar::var(&ctx, name)?,
                ParamValue::Rat(r) => Scalar::from(Polynomial::constant(&ctx, r.clone())),
                ParamValue::Expr(e) => crate::exact::parse_scalar(&ctx, e)?,
            };
            values.insert(name.to_string(), s);
        }
        Ok(ParamEnv { ctx, values })
    }

    /// Fully symbolic environment on `(q1, q2, p1, p2)` with `gamma1..gammaN`.
    pub fn symbolic(n_gammas: usize) -> Self {
        let gammas: Vec<String> = (1..=n_gammas).map(|i| format!("gamma{i}")).collect();
        let params: Vec<(&str, ParamValue)> =
            gammas.iter().map(|g| (g.as_str(), ParamValue::Sym)).collect();
        ParamEnv::new(&["q1", "q2", "p1", "p2"], &params).expect("fixed names")
    }

    /// Symbolic environment with `gamma1, gamma2, k1, k2` (elliptic data).
    pub fn symbolic_elliptic() -> Self {
        ParamEnv::new(
            &["q1", "q2", "p1", "p2"],
            &[
                ("gamma1", ParamValue::Sym),
                ("gamma2", ParamValue::Sym),
                ("k1", ParamValue::Sym),
                ("k2", ParamValue::Sym),
            ],
        )
        .expect("fixed names")
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn param(&self, name: &str) -> Result<Scalar> {
        self.values
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn has_param(&self, name: &str) -> bool {
        self.values.contains_key(name)
    }

    pub fn var(&self, name: &str) -> Scalar {
        Scalar::var(&self.ctx, name).expect("phase variable")
    }

    fn poly_var(&self, name: &str) -> Polynomial {
        Polynomial::var(&self.ctx, name).expect("phase variable")
    }

    /// `q1 p1 + q2 p2`
    pub fn radial_momentum_product(&self) -> Scalar {
        let qp = &(&self.poly_var("q1") * &self.poly_var("p1"))
            + &(&self.poly_var("q2") * &self.poly_var("p2"));
        Scalar::from(qp)
    }

    /// `q1 p2 - q2 p1`
    pub fn angular_momentum(&self) -> Scalar {
        let j = &(&self.poly_var("q1") * &self.poly_var("p2"))
            - &(&self.poly_var("q2") * &self.poly_var("p1"));
        Scalar::from(j)
    }
}

/// `H_(N) = p1^2 + p2^2 + sum_{n=1}^N gamma_n (q1 p1 + q2 p2)^n`.
pub fn hamiltonian(env: &ParamEnv, n: usize) -> Result<Scalar> {
    assert!(n >= 1, "the family starts at N = 1");
    let p1 = env.var("p1");
    let p2 = env.var("p2");
    let mut h = p1.pow(2).add_ref(&p2.pow(2));
    let qp = env.radial_momentum_product();
    for i in 1..=n {
        let g = env.param(&format!("gamma{i}"))?;
        h = h.add_ref(&g.mul_ref(&qp.pow(i as u32)));
    }
    Ok(h)
}

/// The angular momentum and the two quadratic integrals
/// `I_k = (1 + gamma2 (q1^2+q2^2)) p_k^2 + gamma1 q_k p_k`.
pub fn integrals(env: &ParamEnv) -> Result<(Scalar, Scalar, Scalar)> {
    let g1 = env.param("gamma1")?;
    let g2 = env.param("gamma2")?;
    let q1 = env.var("q1");
    let q2 = env.var("q2");
    let p1 = env.var("p1");
    let p2 = env.var("p2");
    let r2 = q1.pow(2).add_ref(&q2.pow(2));
    let conf = Scalar::one(env.ctx()).add_ref(&g2.mul_ref(&r2));
    let i1 = conf.mul_ref(&p1.pow(2)).add_ref(&g1.mul_ref(&q1).mul_ref(&p1));
    let i2 = conf.mul_ref(&p2.pow(2)).add_ref(&g1.mul_ref(&q2).mul_ref(&p2));
    Ok((env.angular_momentum(), i1, i2))
}

/// Elliptic separation constant `I_e = -gamma2 k1^2 J^2 - k2^2 I2`.
pub fn integral_elliptic(env: &ParamEnv) -> Result<Scalar> {
    let (j, _, i2) = integrals(env)?;
    let g2 = env.param("gamma2")?;
    let k1 = env.param("k1")?;
    let k2 = env.param("k2")?;
    Ok(g2
        .mul_ref(&k1.pow(2))
        .mul_ref(&j.pow(2))
        .neg_ref()
        .sub_ref(&k2.pow(2).mul_ref(&i2)))
}

/// Generators of the cubic algebra: `X1 = J/2`, `X2 = (I1 - I2)/2`,
/// `X3 = {X1, X2}` (stored expanded).
pub fn algebra_generators(env: &ParamEnv) -> Result<(Scalar, Scalar, Scalar)> {
    let (j, i1, i2) = integrals(env)?;
    let half = crate::exact::rat(1, 2);
    let x1 = j.scale(&half);
    let x2 = i1.sub_ref(&i2).scale(&half);
    let x3 = crate::phase::poisson_bracket(&x1, &x2);
    Ok((x1, x2, x3))
}

/// The quartic Casimir as an abstract polynomial in `(X1, X2, X3, H)`:
/// `C = X2^2 + X3^2 - (gamma1^2 + 2 gamma2 H) X1^2 - 4 gamma2^2 X1^4`,
/// returned with its own context so callers can differentiate in the
/// generators before substituting the realization.
pub fn casimir_abstract() -> (Context, Scalar) {
    let ctx = Context::new(&["X1", "X2", "X3", "H", "gamma1", "gamma2"]).expect("fixed names");
    let v = |n: &str| Scalar::var(&ctx, n).unwrap();
    let (x1, x2, x3, h) = (v("X1"), v("X2"), v("X3"), v("H"));
    let (g1, g2) = (v("gamma1"), v("gamma2"));
    let coeff = g1.pow(2).add_ref(&g2.mul_ref(&h).scale(&crate::exact::rat(2, 1)));
    let c = x2
        .pow(2)
        .add_ref(&x3.pow(2))
        .sub_ref(&coeff.mul_ref(&x1.pow(2)))
        .sub_ref(&g2.pow(2).mul_ref(&x1.pow(4)).scale(&crate::exact::rat(4, 1)));
    (ctx, c)
}

/// Oscillator-chart data for the `gamma2 = 0` branch: generators and
/// Hamiltonian on the bar chart `(qb1, qb2, pb1, pb2)`, with the imaginary
/// frequency eliminated through `beta^2 = -gamma1^2`.
pub struct OscillatorChart {
    pub env: ParamEnv,
    pub x1: Scalar,
    pub x2: Scalar,
    pub x3: Scalar,
    pub hamiltonian: Scalar,
}

pub fn oscillator_chart() -> OscillatorChart {
    let env = ParamEnv::new(
        &["qb1", "qb2", "pb1", "pb2"],
        &[("gamma1", ParamValue::Sym)],
    )
    .expect("fixed names");
    let v = |n: &str| env.var(n);
    let g1sq = env.param("gamma1").unwrap().pow(2);
    let quarter = crate::exact::rat(1, 4);
    let half = crate::exact::rat(1, 2);
    // the beta^2 terms enter as -gamma1^2
    let x1 = v("qb1")
        .mul_ref(&v("pb2"))
        .sub_ref(&v("qb2").mul_ref(&v("pb1")))
        .scale(&half);
    let x2 = v("pb1")
        .pow(2)
        .sub_ref(&g1sq.mul_ref(&v("qb1").pow(2)))
        .sub_ref(&v("pb2").pow(2))
        .add_ref(&g1sq.mul_ref(&v("qb2").pow(2)))
        .scale(&quarter);
    let x3 = v("pb1")
        .mul_ref(&v("pb2"))
        .sub_ref(&g1sq.mul_ref(&v("qb1")).mul_ref(&v("qb2")))
        .scale(&half);
    let hamiltonian = v("pb1")
        .pow(2)
        .add_ref(&v("pb2").pow(2))
        .sub_ref(&g1sq.mul_ref(&v("qb1").pow(2).add_ref(&v("qb2").pow(2))))
        .scale(&half);
    OscillatorChart {
        env,
        x1,
        x2,
        x3,
        hamiltonian,
    }
}

/// Chain residual `K^T dH - dI`, componentwise.
pub fn chain_residual(k: &TensorField11, h: &Scalar, i: &Scalar) -> OneForm {
    k.transpose_apply(&differential(h)).sub(&differential(i))
}

/// Names of the shipped operator catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogName {
    KJ2,
    KI2,
    KI1,
    Ke,
    NI2,
    NI1,
    Ne,
    Identity,
}

impl CatalogName {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "K_J2" => CatalogName::KJ2,
            "K_I2" => CatalogName::KI2,
            "K_I1" => CatalogName::KI1,
            "K_e" => CatalogName::Ke,
            "N_I2" => CatalogName::NI2,
            "N_I1" => CatalogName::NI1,
            "N_e" => CatalogName::Ne,
            "identity" => CatalogName::Identity,
            other => return Err(Error::UnknownName(other.to_string())),
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CatalogName::KJ2 => "K_J2",
            CatalogName::KI2 => "K_I2",
            CatalogName::KI1 => "K_I1",
            CatalogName::Ke => "K_e",
            CatalogName::NI2 => "N_I2",
            CatalogName::NI1 => "N_I1",
            CatalogName::Ne => "N_e",
            CatalogName::Identity => "identity",
        }
    }
}

/// A catalog operator with its chain data. `chain_target` is the function
/// whose differential `K^T dH` must reproduce; Nijenhuis generators have
/// no chain target (they arise as trace shifts of chain members).
pub struct CatalogEntry {
    pub name: CatalogName,
    pub tensor: TensorField11,
    pub chain_target: Option<Scalar>,
    pub chain_note: &'static str,
    /// Whether the stronger Nijenhuis condition is asserted for the entry.
    pub nijenhuis: bool,
}

fn poly(ctx: &Context, s: &str) -> Scalar {
    crate::exact::parse_scalar(ctx, s).expect("catalog expression")
}

/// Build a catalog entry. The symplectic block structure is asserted on
/// construction; chain residuals, torsions and semisimplicity are verified
/// by the suites (and by the fixture tests).
pub fn catalog(name: CatalogName, env: &ParamEnv) -> Result<CatalogEntry> {
    let ctx = env.ctx();
    let entry = match name {
        CatalogName::KJ2 => {
            let j = env.angular_momentum();
            let rows = vec![
                vec![poly(ctx, "q2^2"), poly(ctx, "-q1*q2"), poly(ctx, "0"), poly(ctx, "0")],
                vec![poly(ctx, "-q1*q2"), poly(ctx, "q1^2"), poly(ctx, "0"), poly(ctx, "0")],
                vec![Scalar::zero(ctx), j.neg_ref(), poly(ctx, "q2^2"), poly(ctx, "-q1*q2")],
                vec![j.clone(), Scalar::zero(ctx), poly(ctx, "-q1*q2"), poly(ctx, "q1^2")],
            ];
            CatalogEntry {
                name,
                tensor: TensorField11::from_rows(ctx, rows),
                chain_target: Some(j.pow(2)),
                chain_note: "K^T dH_(N) = d(J^2): the chain member of this operator is J^2",
                nijenhuis: false,
            }
        }
        CatalogName::KI2 => {
            let g2 = env.param("gamma2")?;
            let q1 = env.var("q1");
            let q2 = env.var("q2");
            let p2 = env.var("p2");
            let one = Scalar::one(ctx);
            let d = one.add_ref(&g2.mul_ref(&q1.pow(2)));
            let g2q1q2 = g2.mul_ref(&q1).mul_ref(&q2);
            let g2q1p2 = g2.mul_ref(&q1).mul_ref(&p2);
            let z = Scalar::zero(ctx);
            let rows = vec![
                vec![z.clone(), z.clone(), z.clone(), z.clone()],
                vec![g2q1q2.neg_ref(), d.clone(), z.clone(), z.clone()],
                vec![z.clone(), g2q1p2.neg_ref(), z.clone(), g2q1q2.neg_ref()],
                vec![g2q1p2.clone(), z.clone(), z.clone(), d.clone()],
            ];
            let (_, _, i2) = integrals(env)?;
            CatalogEntry {
                name,
                tensor: TensorField11::from_rows(ctx, rows),
                chain_target: Some(i2),
                chain_note: "K^T dH_(2) = dI_2",
                nijenhuis: false,
            }
        }
        CatalogName::KI1 => {
            let base = catalog(CatalogName::KI2, env)?;
            let (_, i1, _) = integrals(env)?;
            CatalogEntry {
                name,
                tensor: base.tensor.swap_involution(),
                chain_target: Some(i1),
                chain_note: "image of K_I2 under the q1 <-> q2, p1 <-> p2 involution",
                nijenhuis: false,
            }
        }
        CatalogName::Ke => {
            let kj2 = catalog(CatalogName::KJ2, env)?.tensor;
            let ki2 = catalog(CatalogName::KI2, env)?.tensor;
            let g2 = env.param("gamma2")?;
            let k1 = env.param("k1")?;
            let k2 = env.param("k2")?;
            let tensor = kj2
                .scale(&g2.mul_ref(&k1.pow(2)).neg_ref())
                .sub(&ki2.scale(&k2.pow(2)));
            CatalogEntry {
                name,
                tensor,
                chain_target: Some(integral_elliptic(env)?),
                chain_note: "K_e = -gamma2 k1^2 K_J2 - k2^2 K_I2, chain by linearity",
                nijenhuis: false,
            }
        }
        CatalogName::NI2 | CatalogName::NI1 | CatalogName::Ne => {
            let base = match name {
                CatalogName::NI2 => CatalogName::KI2,
                CatalogName::NI1 => CatalogName::KI1,
                _ => CatalogName::Ke,
            };
            let k = catalog(base, env)?.tensor;
            CatalogEntry {
                name,
                tensor: nijenhuis_generator(&k),
                chain_target: None,
                chain_note: "trace-shifted generator N = K - tr(K)/2 I; no chain target",
                nijenhuis: true,
            }
        }
        CatalogName::Identity => CatalogEntry {
            name,
            tensor: TensorField11::identity(ctx),
            chain_target: None,
            chain_note: "identity; its chain target is the Hamiltonian itself",
            nijenhuis: true,
        },
    };
    debug_assert!(
        crate::tensor::symplectic_compatibility(&entry.tensor).is_zero(),
        "catalog entry violates the block structure"
    );
    Ok(entry)
}

/// `N = K - tr(K)/2 I`.
pub fn nijenhuis_generator(k: &TensorField11) -> TensorField11 {
    let half = crate::exact::rat(1, 2);
    let shift = k.trace().scale(&half);
    k.sub(&TensorField11::identity(k.context()).scale(&shift))
}

/// Substitute `gamma2 = 0` into a scalar over an environment that carries
/// `gamma2` symbolically.
pub fn at_gamma2_zero(env: &ParamEnv, s: &Scalar) -> Result<Scalar> {
    let ctx = env.ctx();
    let idx = ctx.index("gamma2")?;
    let mut map = BTreeMap::new();
    map.insert(idx, RationalFunction::zero(ctx));
    s.substitute(ctx, &map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::poisson_bracket;

    #[test]
    fn hamiltonian_specializations() {
        let env = ParamEnv::symbolic(2);
        let h2 = hamiltonian(&env, 2).unwrap();
        let expect = poly(
            env.ctx(),
            "p1^2 + p2^2 + gamma1*(q1*p1 + q2*p2) + gamma2*(q1*p1 + q2*p2)^2",
        );
        assert!(h2.equals(&expect));
        // free particle at gamma1 = gamma2 = 0
        let free_env = ParamEnv::new(
            &["q1", "q2", "p1", "p2"],
            &[
                ("gamma1", ParamValue::rational(0, 1)),
                ("gamma2", ParamValue::rational(0, 1)),
            ],
        )
        .unwrap();
        let h_free = hamiltonian(&free_env, 2).unwrap();
        assert!(h_free.equals(&poly(free_env.ctx(), "p1^2 + p2^2")));
    }

    #[test]
    fn integrals_commute_with_hamiltonian() {
        let env = ParamEnv::symbolic(2);
        let h = hamiltonian(&env, 2).unwrap();
        let (j, i1, i2) = integrals(&env).unwrap();
        assert!(poisson_bracket(&h, &j).is_zero());
        assert!(poisson_bracket(&h, &i1).is_zero());
        assert!(poisson_bracket(&h, &i2).is_zero());
    }

    #[test]
    fn dependence_relation() {
        let env = ParamEnv::symbolic(2);
        let h = hamiltonian(&env, 2).unwrap();
        let (j, i1, i2) = integrals(&env).unwrap();
        let g2 = env.param("gamma2").unwrap();
        let res = i1.add_ref(&i2).sub_ref(&g2.mul_ref(&j.pow(2))).sub_ref(&h);
        assert!(res.is_zero());
    }

    #[test]
    fn i2_at_gamma2_zero() {
        let env = ParamEnv::symbolic(2);
        let (_, _, i2) = integrals(&env).unwrap();
        let spec = at_gamma2_zero(&env, &i2).unwrap();
        assert!(spec.equals(&poly(env.ctx(), "p2^2 + gamma1*q2*p2")));
    }

    #[test]
    fn catalog_chain_residuals_vanish() {
        let env = ParamEnv::symbolic(2);
        let h2 = hamiltonian(&env, 2).unwrap();
        for name in [CatalogName::KJ2, CatalogName::KI2, CatalogName::KI1] {
            let e = catalog(name, &env).unwrap();
            let target = e.chain_target.clone().unwrap();
            let res = chain_residual(&e.tensor, &h2, &target);
            assert!(res.is_zero(), "chain residual nonzero for {:?}", name);
        }
        // identity: K^T dH - dH = 0
        let id = catalog(CatalogName::Identity, &env).unwrap();
        assert!(chain_residual(&id.tensor, &h2, &h2).is_zero());
    }

    #[test]
    fn kj2_chain_holds_for_all_orders() {
        let env = ParamEnv::symbolic(5);
        let e = catalog(CatalogName::KJ2, &env).unwrap();
        let target = e.chain_target.clone().unwrap();
        for n in 1..=5 {
            let h = hamiltonian(&env, n).unwrap();
            assert!(chain_residual(&e.tensor, &h, &target).is_zero());
        }
        // the operator itself carries no gamma symbols
        for i in 1..=5 {
            let idx = env.ctx().index(&format!("gamma{i}")).unwrap();
            for row in e.tensor.rows() {
                for s in row {
                    assert!(!s.depends_on(idx));
                }
            }
        }
    }

    #[test]
    fn ke_chain_residual() {
        let env = ParamEnv::symbolic_elliptic();
        let h2 = hamiltonian(&env, 2).unwrap();
        let e = catalog(CatalogName::Ke, &env).unwrap();
        let res = chain_residual(&e.tensor, &h2, &e.chain_target.clone().unwrap());
        assert!(res.is_zero());
    }

    #[test]
    fn ki2_at_gamma2_zero_is_diagonal() {
        let env = ParamEnv::new(
            &["q1", "q2", "p1", "p2"],
            &[
                ("gamma1", ParamValue::Sym),
                ("gamma2", ParamValue::rational(0, 1)),
            ],
        )
        .unwrap();
        let e = catalog(CatalogName::KI2, &env).unwrap();
        let mut expect = TensorField11::zero(env.ctx());
        expect.set(1, 1, Scalar::one(env.ctx()));
        expect.set(3, 3, Scalar::one(env.ctx()));
        assert!(e.tensor.equals(&expect));
    }

    #[test]
    fn involution_maps_ki2_to_ki1() {
        let env = ParamEnv::symbolic(2);
        let ki2 = catalog(CatalogName::KI2, &env).unwrap();
        let ki1 = catalog(CatalogName::KI1, &env).unwrap();
        assert!(ki2.tensor.swap_involution().equals(&ki1.tensor));
        assert!(ki1.tensor.swap_involution().equals(&ki2.tensor));
    }
}
