//! Conjugate-momentum search (the second half of the coordinate
//! construction): given an exact characteristic form `dx` and an
//! independent form `tau` of the same co-distribution, find
//! `beta = h dx + r tau` with `d beta = 0` and `r = 1/<dx, P tau>`, then
//! integrate `beta` against a catalog of closed forms.

use num::{BigRational, Zero};

use crate::error::{Error, Result};
use crate::exact::{Context, Monomial, Polynomial, Scalar};
use crate::linalg::{solve_affine, SolveOutcome};
use crate::phase::{differential, poisson_pairing, OneForm};
use crate::solver::affine_rows;

/// Candidate space for the integrating factor `h` and the potential `y`:
/// monomials bounded in phase and parameter degree, divided by powers of
/// the chart's catalog factors, optionally times `sqrt(radical)`.
#[derive(Clone, Debug)]
pub struct StepBAnsatz {
    pub degree: u32,
    pub param_degree: u32,
    /// Restrict the phase variables entering the monomials (indices 0..4).
    pub phase_vars: Vec<usize>,
    pub den_factors: Vec<(Polynomial, u32)>,
    pub radical: Option<Polynomial>,
}

impl StepBAnsatz {
    pub fn new(degree: u32, param_degree: u32) -> Self {
        StepBAnsatz {
            degree,
            param_degree,
            phase_vars: vec![0, 1, 2, 3],
            den_factors: Vec::new(),
            radical: None,
        }
    }

    pub fn with_factor(mut self, f: Polynomial, max_exp: u32) -> Self {
        self.den_factors.push((f, max_exp));
        self
    }

    pub fn with_radical(mut self, d: Polynomial) -> Self {
        self.radical = Some(d);
        self
    }

    pub fn with_phase_vars(mut self, vars: Vec<usize>) -> Self {
        self.phase_vars = vars;
        self
    }

    fn monomials(&self, ctx: &Context) -> Vec<Monomial> {
        let nvars = ctx.len();
        let mut active = self.phase_vars.clone();
        for i in 4..nvars {
            active.push(i);
        }
        let mut out = Vec::new();
        let mut stack = vec![(0usize, vec![0u16; nvars], 0u32, 0u32)];
        while let Some((k, exps, phase_total, param_total)) = stack.pop() {
            if k == active.len() {
                out.push(Monomial(exps));
                continue;
            }
            let var = active[k];
            let limit = if var < 4 {
                self.degree - phase_total
            } else {
                self.param_degree - param_total
            };
            for e in 0..=limit {
                let mut next = exps.clone();
                next[var] = e as u16;
                let (pt, qt) = if var < 4 {
                    (phase_total + e, param_total)
                } else {
                    (phase_total, param_total + e)
                };
                stack.push((k + 1, next, pt, qt));
            }
        }
        out.sort();
        out
    }

    /// The full candidate list, deterministically ordered.
    pub fn candidates(&self, ctx: &Context) -> Vec<Scalar> {
        let monos = self.monomials(ctx);
        // denominator exponent combinations
        let mut den_combos: Vec<Vec<(Polynomial, u32)>> = vec![Vec::new()];
        for (f, max_e) in &self.den_factors {
            let mut next = Vec::new();
            for combo in &den_combos {
                for e in 0..=*max_e {
                    let mut c = combo.clone();
                    if e > 0 {
                        c.push((f.clone(), e));
                    }
                    next.push(c);
                }
            }
            den_combos = next;
        }
        let mut out = Vec::new();
        for mono in &monos {
            for den in &den_combos {
                let num = Polynomial::from_terms(
                    ctx,
                    vec![(mono.clone(), BigRational::from_integer(1.into()))],
                );
                let base = Scalar::Rat(crate::exact::RationalFunction::new(num, den.clone()));
                out.push(base.clone());
                if let Some(d) = &self.radical {
                    out.push(base.mul_ref(&Scalar::sqrt_poly(d)));
                }
            }
        }
        assert!(
            out.len() <= 800,
            "candidate space too large ({}); tighten the ansatz",
            out.len()
        );
        out
    }
}

/// Result of the conjugate-momentum construction.
pub struct ConjugateMomentum {
    /// Normalization `r = 1/<dx, P tau>`.
    pub r: Scalar,
    /// Integrating factor `h` (member of the ansatz space).
    pub h: Scalar,
    /// The closed form `beta = h dx + r tau`.
    pub beta: OneForm,
    /// Potential with `d(potential) = beta`, when the catalog contains one.
    pub potential: Option<Scalar>,
}

/// Numerator polynomials of both extension components of a scalar.
fn component_numerators(s: &Scalar) -> Vec<Polynomial> {
    let (a, b) = s.components();
    let mut out = Vec::new();
    if !a.is_zero() {
        out.push(a.numerator().clone());
    }
    if !b.is_zero() {
        out.push(b.numerator().clone());
    }
    out
}

/// Solve a stage of linear conditions: the `exprs` must vanish identically
/// and are affine in the trailing `n_unknowns` variables of their context.
fn solve_stage(
    exprs: &[Scalar],
    base_vars: usize,
    n_unknowns: usize,
) -> Result<Option<Vec<BigRational>>> {
    let mut polys: Vec<(usize, Polynomial)> = Vec::new();
    for (i, e) in exprs.iter().enumerate() {
        for (j, p) in component_numerators(e).into_iter().enumerate() {
            polys.push((2 * i + j, p));
        }
    }
    let rows = affine_rows(&polys, base_vars)?;
    match solve_affine(n_unknowns, rows) {
        SolveOutcome::Solved(sol) => Ok(Some(sol.particular)),
        SolveOutcome::Inconsistent(_) => Ok(None),
    }
}

/// Build `beta = h dx + r tau` with `d beta = 0`, solving for `h` in the
/// ansatz space, then integrate `beta` against the same candidate space.
pub fn conjugate_momentum(
    dx: &OneForm,
    tau: &OneForm,
    h_ansatz: &StepBAnsatz,
    y_ansatz: &StepBAnsatz,
) -> Result<ConjugateMomentum> {
    let ctx = dx.context().clone();
    if !dx.is_exact() {
        return Err(Error::AnsatzExhausted("dx is not exact".into()));
    }
    let pairing = poisson_pairing(dx, tau);
    if pairing.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let r = Scalar::one(&ctx).div_ref(&pairing)?;
    let r_tau = tau.scale(&r);

    // stage 1: h coefficients
    let h_cands = h_ansatz.candidates(&ctx);
    let nh = h_cands.len();
    let h_names: Vec<String> = (0..nh).map(|u| format!("h{u}")).collect();
    let big = ctx.extend(&h_names)?;
    let mut h_sym = Scalar::zero(&big);
    for (u, c) in h_cands.iter().enumerate() {
        let hv = Scalar::var(&big, &format!("h{u}"))?;
        h_sym = h_sym.add_ref(&hv.mul_ref(&c.lift(&big)?));
    }
    let mut beta_sym_coeffs: Vec<Scalar> = Vec::with_capacity(4);
    for i in 0..4 {
        beta_sym_coeffs.push(
            h_sym
                .mul_ref(&dx.coeffs[i].lift(&big)?)
                .add_ref(&r_tau.coeffs[i].lift(&big)?),
        );
    }
    let beta_sym = OneForm::new(beta_sym_coeffs.try_into().unwrap());
    let residuals: Vec<Scalar> = beta_sym
        .exterior_derivative()
        .into_iter()
        .map(|(_, r)| r)
        .collect();
    let h_sol = solve_stage(&residuals, ctx.len(), nh)?
        .ok_or_else(|| Error::AnsatzExhausted("no integrating factor h closes beta".into()))?;
    let mut h = Scalar::zero(&ctx);
    for (u, c) in h_cands.iter().enumerate() {
        if !h_sol[u].is_zero() {
            h = h.add_ref(&c.scale(&h_sol[u]));
        }
    }
    let beta = dx.scale(&h).add(&r_tau);
    debug_assert!(beta.is_exact());

    // stage 2: potential
    let y_cands = y_ansatz.candidates(&ctx);
    let ny = y_cands.len();
    let y_names: Vec<String> = (0..ny).map(|u| format!("y{u}")).collect();
    let big2 = ctx.extend(&y_names)?;
    let mut y_sym = Scalar::zero(&big2);
    for (u, c) in y_cands.iter().enumerate() {
        let yv = Scalar::var(&big2, &format!("y{u}"))?;
        y_sym = y_sym.add_ref(&yv.mul_ref(&c.lift(&big2)?));
    }
    let dy = differential(&y_sym);
    let residuals2: Vec<Scalar> = (0..4)
        .map(|i| dy.coeffs[i].sub_ref(&beta.coeffs[i].lift(&big2).unwrap()))
        .collect();
    let potential = match solve_stage(&residuals2, ctx.len(), ny)? {
        Some(sol) => {
            let mut y = Scalar::zero(&ctx);
            for (u, c) in y_cands.iter().enumerate() {
                if !sol[u].is_zero() {
                    y = y.add_ref(&c.scale(&sol[u]));
                }
            }
            Some(y)
        }
        None => None,
    };
    Ok(ConjugateMomentum {
        r,
        h,
        beta,
        potential,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{catalog, CatalogName, ParamEnv};
    use crate::tensor::codistribution_basis;

    /// The polar co-distribution of the nonzero eigenvalue: recover the
    /// angular momentum as the momentum conjugate to the angle.
    #[test]
    fn polar_recovers_angular_momentum() {
        let env = ParamEnv::symbolic(2);
        let ctx = env.ctx();
        // dphi = (-q2 dq1 + q1 dq2)/(q1^2+q2^2), exact representative
        let r2 = crate::exact::parse_poly(ctx, "q1^2 + q2^2").unwrap();
        let r2s = Scalar::from(r2.clone());
        let dphi = OneForm::new([
            env.var("q2").neg_ref().div_ref(&r2s).unwrap(),
            env.var("q1").div_ref(&r2s).unwrap(),
            Scalar::zero(ctx),
            Scalar::zero(ctx),
        ]);
        assert!(dphi.is_exact());
        // tau: the momentum-bearing basis form of the same co-distribution
        let k = catalog(CatalogName::KJ2, &env).unwrap().tensor;
        let lam = Scalar::from(r2.clone());
        let basis = codistribution_basis(&k, &lam).unwrap();
        let tau = basis
            .iter()
            .find(|f| f.coeffs[2..].iter().any(|c| !c.is_zero()))
            .expect("momentum-bearing basis form");
        let q1_poly = crate::exact::parse_poly(ctx, "q1").unwrap();
        let h_ansatz = StepBAnsatz::new(3, 0)
            .with_phase_vars(vec![0, 1, 2])
            .with_factor(q1_poly, 2)
            .with_factor(r2.clone(), 1);
        let y_ansatz = StepBAnsatz::new(2, 0).with_factor(r2.clone(), 1);
        let out = conjugate_momentum(&dphi, tau, &h_ansatz, &y_ansatz).unwrap();
        let y = out.potential.expect("p_phi is in the catalog space");
        // y must be conjugate to the angle and is exactly the angular
        // momentum up to sign (the basis orientation is not fixed)
        let j = env.angular_momentum();
        assert!(y.equals(&j) || y.equals(&j.neg_ref()), "got {y}");
    }

    /// Cartesian chart adapted to I2, zero-eigenvalue co-distribution:
    /// recover `P1 = p1 + gamma2 q1 q2 p2 / (1 + gamma2 q1^2)`.
    #[test]
    fn cartesian_recovers_p1() {
        let env = ParamEnv::symbolic(2);
        let ctx = env.ctx();
        let dq1 = OneForm::new([
            Scalar::one(ctx),
            Scalar::zero(ctx),
            Scalar::zero(ctx),
            Scalar::zero(ctx),
        ]);
        let n = catalog(CatalogName::NI2, &env).unwrap().tensor;
        // E1 is the kernel of N^T - lambda with lambda = -(1+gamma2 q1^2)
        let lam = crate::exact::parse_scalar(ctx, "-(1 + gamma2*q1^2)").unwrap();
        let basis = codistribution_basis(&n, &lam).unwrap();
        let tau = basis
            .iter()
            .find(|f| f.coeffs[2..].iter().any(|c| !c.is_zero()))
            .expect("momentum-bearing basis form");
        let d = crate::exact::parse_poly(ctx, "1 + gamma2*q1^2").unwrap();
        let h_ansatz = StepBAnsatz::new(3, 2)
            .with_phase_vars(vec![0, 1, 3])
            .with_factor(d.clone(), 2);
        let y_ansatz = StepBAnsatz::new(3, 1).with_factor(d.clone(), 1);
        let out = conjugate_momentum(&dq1, tau, &h_ansatz, &y_ansatz).unwrap();
        let y = out.potential.expect("P1 is in the catalog space");
        let expect = crate::exact::parse_scalar(
            ctx,
            "p1 + gamma2*q1*q2*p2 / (1 + gamma2*q1^2)",
        )
        .unwrap();
        // conjugacy fixes y up to a gauge term g(q1); the ansatz zeroes the
        // gauge, so the match is exact up to basis sign
        assert!(y.equals(&expect) || y.equals(&expect.neg_ref()), "got {y}");
    }
}
