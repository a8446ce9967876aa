//! Canonical maps to separation coordinates: the catalog transformations,
//! the generic construction from lift-form operators, canonicity checks and
//! forward (mixed-coordinate) pullbacks.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{Context, Polynomial, Scalar};
use crate::models::ParamEnv;
use crate::phase::poisson_bracket;
use crate::tensor::TensorField11;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapName {
    Polar,
    CartesianI2,
    CartesianI1,
    Elliptic,
    OscillatorN1,
}

impl MapName {
    pub fn as_str(&self) -> &'static str {
        match self {
            MapName::Polar => "polar",
            MapName::CartesianI2 => "cartesian_I2",
            MapName::CartesianI1 => "cartesian_I1",
            MapName::Elliptic => "elliptic",
            MapName::OscillatorN1 => "oscillator_N1",
        }
    }
}

/// A canonical transformation stored through its forward expressions
/// `(Q1, Q2, P1, P2)` as functions of `(q, p)`. Transcendental charts are
/// represented by algebraic representatives (see the reparametrization
/// helpers); radical-valued coordinates live in the quadratic extension.
#[derive(Clone, Debug)]
pub struct CanonicalMap {
    pub name: MapName,
    ctx: Context,
    /// `[Q1, Q2, P1, P2]` in terms of `(q1, q2, p1, p2, params...)`.
    pub forward: [Scalar; 4],
    pub is_ept: bool,
    /// Polynomial factors whose zero sets bound the chart's validity.
    pub singular_locus: Vec<Polynomial>,
}

impl CanonicalMap {
    pub fn new(
        name: MapName,
        ctx: &Context,
        forward: [Scalar; 4],
        singular_locus: Vec<Polynomial>,
    ) -> Self {
        let is_ept = forward[..2]
            .iter()
            .all(|q| !q.depends_on(2) && !q.depends_on(3));
        CanonicalMap {
            name,
            ctx: ctx.clone(),
            forward,
            is_ept,
            singular_locus,
        }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    /// The ten brackets `{f_a, f_b}` for `a <= b` over the new coordinate
    /// functions, returned with their expected values.
    pub fn canonical_bracket_residuals(&self) -> Vec<(String, Scalar)> {
        let names = ["Q1", "Q2", "P1", "P2"];
        // expected[a][b]: {Q_i, P_j} = delta_ij, all else zero
        let expected = |a: usize, b: usize| -> i64 {
            match (a, b) {
                (0, 2) | (1, 3) => 1,
                _ => 0,
            }
        };
        let mut out = Vec::new();
        for a in 0..4 {
            for b in a..4 {
                let br = poisson_bracket(&self.forward[a], &self.forward[b]);
                let res = br.sub_ref(&Scalar::int(&self.ctx, expected(a, b)));
                out.push((format!("{{{}, {}}}", names[a], names[b]), res));
            }
        }
        out
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical_bracket_residuals()
            .iter()
            .all(|(_, r)| r.is_zero())
    }

    /// The mixed-coordinate context `(q1, q2, P1, P2, params...)`.
    pub fn mixed_context(&self) -> Context {
        let mut names: Vec<String> = vec!["q1".into(), "q2".into(), "P1".into(), "P2".into()];
        names.extend(self.ctx.names()[4..].iter().cloned());
        Context::new(&names).expect("mixed context")
    }

    /// Solve the (always linear) momentum relation `P = M(q) p + m0(q)` for
    /// `p`, giving `p_i(q, P1, P2)` over the mixed context.
    pub fn momentum_substitution(&self) -> Result<[Scalar; 2]> {
        let ctx = &self.ctx;
        let mixed = self.mixed_context();
        // M_{ij} = dP_i/dp_j must be momentum-free
        let mut m = [[Scalar::zero(ctx), Scalar::zero(ctx)], [Scalar::zero(ctx), Scalar::zero(ctx)]];
        for i in 0..2 {
            for j in 0..2 {
                let d = self.forward[2 + i].derivative(2 + j);
                if d.depends_on(2) || d.depends_on(3) {
                    return Err(Error::MomentumRelation);
                }
                m[i][j] = d;
            }
        }
        // m0 = P at p = 0
        let mut at_p0 = BTreeMap::new();
        at_p0.insert(2usize, Scalar::zero(ctx));
        at_p0.insert(3usize, Scalar::zero(ctx));
        let m0 = [
            self.forward[2].substitute_scalars(ctx, &at_p0)?,
            self.forward[3].substitute_scalars(ctx, &at_p0)?,
        ];
        let det = m[0][0]
            .mul_ref(&m[1][1])
            .sub_ref(&m[0][1].mul_ref(&m[1][0]));
        if det.is_zero() {
            return Err(Error::MomentumRelation);
        }
        // p = M^{-1} (P - m0), entries lifted into the mixed context
        let lift = |s: &Scalar| s.lift(&mixed);
        let inv = [
            [lift(&m[1][1])?, lift(&m[0][1])?.neg_ref()],
            [lift(&m[1][0])?.neg_ref(), lift(&m[0][0])?],
        ];
        let det_m = lift(&det)?;
        let pvar = [
            Scalar::var(&mixed, "P1")?,
            Scalar::var(&mixed, "P2")?,
        ];
        let rhs = [
            pvar[0].sub_ref(&lift(&m0[0])?),
            pvar[1].sub_ref(&lift(&m0[1])?),
        ];
        let mut out = Vec::with_capacity(2);
        for i in 0..2 {
            let num = inv[i][0]
                .mul_ref(&rhs[0])
                .add_ref(&inv[i][1].mul_ref(&rhs[1]));
            out.push(num.div_ref(&det_m)?);
        }
        Ok([out.remove(0), out.remove(0)])
    }

    /// Forward pullback in mixed coordinates: substitute `p = p(q, P)` into
    /// `f` and subtract `claimed` (an expression in `(q, P)` with the new
    /// positions already replaced by their `q`-expressions). A zero result
    /// proves `f = claimed` identically on the chart.
    pub fn pullback_residual(&self, f: &Scalar, claimed: &Scalar) -> Result<Scalar> {
        let mixed = self.mixed_context();
        claimed.context().ensure_same(&mixed)?;
        let subst = self.momentum_substitution()?;
        let mut map = BTreeMap::new();
        map.insert(2usize, subst[0].clone());
        map.insert(3usize, subst[1].clone());
        let f_mixed = f.substitute_scalars(&mixed, &map)?;
        Ok(f_mixed.sub_ref(claimed))
    }

    /// Express `f(q, p)` in mixed coordinates `(q, P)`.
    pub fn to_mixed(&self, f: &Scalar) -> Result<Scalar> {
        let mixed = self.mixed_context();
        let subst = self.momentum_substitution()?;
        let mut map = BTreeMap::new();
        map.insert(2usize, subst[0].clone());
        map.insert(3usize, subst[1].clone());
        f.substitute_scalars(&mixed, &map)
    }

    /// Substitute `gamma2 = 0` into every forward expression.
    pub fn at_gamma2_zero(&self) -> Result<[Scalar; 4]> {
        let idx = self.ctx.index("gamma2")?;
        let mut map = BTreeMap::new();
        map.insert(idx, Scalar::zero(&self.ctx));
        let mut out = Vec::with_capacity(4);
        for s in &self.forward {
            out.push(s.substitute_scalars(&self.ctx, &map)?);
        }
        Ok(out.try_into().unwrap())
    }
}

/// Per-coordinate choice when building a map from a lift-form operator.
#[derive(Clone, Debug)]
pub enum CoordinateChoice {
    /// Eigenvalue of the Nijenhuis generator `K - tr(K)/2 I`, `+sqrt` branch.
    GeneratorEigenvaluePlus,
    /// Same with the `-sqrt` branch.
    GeneratorEigenvalueMinus,
    /// An explicit position-only characteristic coordinate.
    Explicit(Scalar),
}

/// Build the extended point transformation generated by
/// `F2 = P1 Q1(q) + P2 Q2(q)` from a lift-form operator: the positions are
/// characteristic coordinates of the position block, the momenta follow
/// from `p = J^T P`.
pub fn build_ept_from_lift(
    name: MapName,
    k: &TensorField11,
    choices: [CoordinateChoice; 2],
) -> Result<CanonicalMap> {
    let ctx = k.context().clone();
    if !k.b_block_is_zero() {
        return Err(Error::NotLiftForm);
    }
    let a = k.block(0, 0);
    for row in &a {
        for e in row {
            if e.depends_on(2) || e.depends_on(3) {
                return Err(Error::MomentumRelation);
            }
        }
    }
    let tr = a[0][0].add_ref(&a[1][1]);
    let det = a[0][0]
        .mul_ref(&a[1][1])
        .sub_ref(&a[0][1].mul_ref(&a[1][0]));
    let disc = tr
        .mul_ref(&tr)
        .sub_ref(&det.scale(&crate::exact::rat(4, 1)));
    let root = Scalar::sqrt_rat(disc.as_rat().ok_or(Error::NonSquareCharPoly)?)?;
    let half = crate::exact::rat(1, 2);
    let lam_plus = tr.add_ref(&root).scale(&half);
    let lam_minus = tr.sub_ref(&root).scale(&half);
    // generator eigenvalues: lambda - tr(A) (trace shift of K halves to A)
    let gen_plus = lam_plus.sub_ref(&tr).neg_ref(); // tr - lambda_+ = lambda_-^A ... keep explicit below
    let _ = gen_plus;
    let resolve = |c: &CoordinateChoice| -> Result<Scalar> {
        match c {
            CoordinateChoice::GeneratorEigenvaluePlus => {
                // N = K - tr(K)/2 I has position block A - tr(A) I, so its
                // eigenvalues are lambda_A - tr(A) = -lambda_A(other)
                Ok(lam_minus.sub_ref(&tr).neg_ref())
            }
            CoordinateChoice::GeneratorEigenvalueMinus => Ok(lam_plus.sub_ref(&tr).neg_ref()),
            CoordinateChoice::Explicit(s) => {
                s.context().ensure_same(&ctx)?;
                Ok(s.clone())
            }
        }
    };
    let q_new = [resolve(&choices[0])?, resolve(&choices[1])?];
    for qn in &q_new {
        if qn.depends_on(2) || qn.depends_on(3) {
            return Err(Error::MomentumRelation);
        }
        let grad = [qn.derivative(0), qn.derivative(1)];
        if grad[0].is_zero() && grad[1].is_zero() {
            return Err(Error::ConstantCoordinate);
        }
        // characteristic check: (A^T - lambda) grad = 0 for some eigenvalue
        let is_char = |lam: &Scalar| {
            let r0 = a[0][0]
                .mul_ref(&grad[0])
                .add_ref(&a[1][0].mul_ref(&grad[1]))
                .sub_ref(&lam.mul_ref(&grad[0]));
            let r1 = a[0][1]
                .mul_ref(&grad[0])
                .add_ref(&a[1][1].mul_ref(&grad[1]))
                .sub_ref(&lam.mul_ref(&grad[1]));
            r0.is_zero() && r1.is_zero()
        };
        if !is_char(&lam_plus) && !is_char(&lam_minus) {
            return Err(Error::NotCharacteristic);
        }
    }
    // J_{ij} = dQ_i/dq_j, momenta P = (J^{-1})^T p
    let j = [
        [q_new[0].derivative(0), q_new[0].derivative(1)],
        [q_new[1].derivative(0), q_new[1].derivative(1)],
    ];
    let det_j = j[0][0]
        .mul_ref(&j[1][1])
        .sub_ref(&j[0][1].mul_ref(&j[1][0]));
    if det_j.is_zero() {
        return Err(Error::SingularJacobian);
    }
    let p1 = Scalar::var(&ctx, "p1")?;
    let p2 = Scalar::var(&ctx, "p2")?;
    let p_new_1 = j[1][1]
        .mul_ref(&p1)
        .sub_ref(&j[1][0].mul_ref(&p2))
        .div_ref(&det_j)?;
    let p_new_2 = j[0][0]
        .mul_ref(&p2)
        .sub_ref(&j[0][1].mul_ref(&p1))
        .div_ref(&det_j)?;
    // singular locus: denominator factors of the Jacobian determinant plus
    // the discriminant of the extension, if any
    let mut locus: Vec<Polynomial> = Vec::new();
    let mut push_factor = |p: &Polynomial| {
        let (_, prim) = p.primitive();
        if !prim.is_one() && !locus.contains(&prim) {
            locus.push(prim);
        }
    };
    match &det_j {
        Scalar::Rat(r) => {
            push_factor(r.numerator());
            for (f, _) in r.den_factors() {
                push_factor(f);
            }
        }
        Scalar::Ext(e) => {
            push_factor(&e.d);
            for (f, _) in e.a.den_factors().iter().chain(e.b.den_factors()) {
                push_factor(f);
            }
        }
    }
    Ok(CanonicalMap::new(
        name,
        &ctx,
        [q_new[0].clone(), q_new[1].clone(), p_new_1, p_new_2],
        locus,
    ))
}

/// The rational polar chart `(u, r^2, p_u, p_{r^2})` with `u = q2/q1`:
/// the algebraic representative of polar coordinates.
pub fn polar_map(env: &ParamEnv) -> Result<CanonicalMap> {
    let q1 = env.var("q1");
    let q2 = env.var("q2");
    let u = q2.div_ref(&q1)?;
    let r2 = q1.pow(2).add_ref(&q2.pow(2));
    let k = crate::models::catalog(crate::models::CatalogName::KJ2, env)?.tensor;
    build_ept_from_lift(
        MapName::Polar,
        &k,
        [
            CoordinateChoice::Explicit(u),
            CoordinateChoice::Explicit(r2),
        ],
    )
}

/// The extended point transformation separating `I_2`:
/// `Q1 = q1`, `Q2 = q2/sqrt(1+gamma2 q1^2)`,
/// `P1 = p1 + gamma2 q1 q2 p2/(1+gamma2 q1^2)`, `P2 = p2 sqrt(...)`.
pub fn cartesian_i2_map(env: &ParamEnv) -> Result<CanonicalMap> {
    let q1 = env.var("q1");
    let g2 = env.param("gamma2")?;
    let one = Scalar::one(env.ctx());
    let d = one.add_ref(&g2.mul_ref(&q1.pow(2)));
    let d_poly = d
        .as_rat()
        .and_then(|r| r.as_poly())
        .cloned()
        .expect("conformal factor is polynomial");
    let root = Scalar::sqrt_poly(&d_poly);
    let q2 = env.var("q2");
    let q2_new = q2.div_ref(&root)?;
    let k = crate::models::catalog(crate::models::CatalogName::KI2, env)?.tensor;
    build_ept_from_lift(
        MapName::CartesianI2,
        &k,
        [
            CoordinateChoice::Explicit(env.var("q1")),
            CoordinateChoice::Explicit(q2_new),
        ],
    )
}

/// Mirror image of [`cartesian_i2_map`] under `q1 <-> q2`, `p1 <-> p2`.
pub fn cartesian_i1_map(env: &ParamEnv) -> Result<CanonicalMap> {
    let q2 = env.var("q2");
    let g2 = env.param("gamma2")?;
    let one = Scalar::one(env.ctx());
    let d = one.add_ref(&g2.mul_ref(&q2.pow(2)));
    let d_poly = d.as_rat().and_then(|r| r.as_poly()).cloned().unwrap();
    let root = Scalar::sqrt_poly(&d_poly);
    let q1_new = env.var("q1").div_ref(&root)?;
    let k = crate::models::catalog(crate::models::CatalogName::KI1, env)?.tensor;
    build_ept_from_lift(
        MapName::CartesianI1,
        &k,
        [
            CoordinateChoice::Explicit(q1_new),
            CoordinateChoice::Explicit(env.var("q2")),
        ],
    )
}

/// Elliptic (confocal) coordinates: the two roots `(T +- S)/2` of the
/// confocal quadratic (the eigenvalue branches of the Nijenhuis generator
/// of `K_e`), ordered so that `Q1` carries `+sqrt(D)`. With symbolic
/// interfocal parameters the chart data is kept in the normal form of
/// `k2^2 -> 1 - k1^2`, so the discriminant matches the printed one.
pub fn elliptic_map(env: &ParamEnv) -> Result<CanonicalMap> {
    let data = crate::separation::elliptic::ConfocalData::new(env)?;
    let ctx = env.ctx().clone();
    let q_new = [data.lambda1.clone(), data.lambda2.clone()];
    let j = [
        [q_new[0].derivative(0), q_new[0].derivative(1)],
        [q_new[1].derivative(0), q_new[1].derivative(1)],
    ];
    let det_j = j[0][0]
        .mul_ref(&j[1][1])
        .sub_ref(&j[0][1].mul_ref(&j[1][0]));
    if det_j.is_zero() {
        return Err(Error::SingularJacobian);
    }
    let p1 = Scalar::var(&ctx, "p1")?;
    let p2 = Scalar::var(&ctx, "p2")?;
    let p_new_1 = j[1][1]
        .mul_ref(&p1)
        .sub_ref(&j[1][0].mul_ref(&p2))
        .div_ref(&det_j)?;
    let p_new_2 = j[0][0]
        .mul_ref(&p2)
        .sub_ref(&j[0][1].mul_ref(&p1))
        .div_ref(&det_j)?;
    let mut locus: Vec<Polynomial> = Vec::new();
    if let Some(d) = data.s.discriminant() {
        locus.push(d.clone());
    }
    Ok(CanonicalMap::new(
        MapName::Elliptic,
        &ctx,
        [q_new[0].clone(), q_new[1].clone(), p_new_1, p_new_2],
        locus,
    ))
}

/// The rescaling-and-shift map that brings `H_(1)` to oscillator form:
/// `Qb_i = q_i/sqrt(2)`, `Pb_i = sqrt(2) (p_i + gamma1 q_i / 2)`.
pub fn oscillator_map(env: &ParamEnv) -> Result<CanonicalMap> {
    let ctx = env.ctx();
    let two = Polynomial::int(ctx, 2);
    let s2 = Scalar::sqrt_poly(&two);
    let g1 = env.param("gamma1")?;
    let half = crate::exact::rat(1, 2);
    let q = [env.var("q1"), env.var("q2")];
    let p = [env.var("p1"), env.var("p2")];
    let fwd = [
        q[0].div_ref(&s2)?,
        q[1].div_ref(&s2)?,
        s2.mul_ref(&p[0].add_ref(&g1.mul_ref(&q[0]).scale(&half))),
        s2.mul_ref(&p[1].add_ref(&g1.mul_ref(&q[1]).scale(&half))),
    ];
    Ok(CanonicalMap::new(MapName::OscillatorN1, ctx, fwd, vec![]))
}
