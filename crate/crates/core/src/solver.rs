//! Step A of the construction: solve the chain equation `K^T dH = dI`
//! together with the symplectic block structure under a polynomial ansatz
//! with unknown rational coefficients, then filter the affine solution
//! family by the nonlinear Haantjes condition.
//!
//! Parameters (`gamma_n`, `k1`, `k2`) stay symbolic: each ansatz entry is a
//! rational-coefficient combination of `(phase monomial) x (parameter
//! monomial)`, and coefficient matching runs jointly over monomials in
//! phase variables and parameters, so solutions are parameter-uniform.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigRational, Zero};

use crate::error::{Error, Result};
use crate::exact::{Context, Monomial, Polynomial, Scalar};
use crate::linalg::{solve_affine, SolveOutcome};
use crate::models::chain_residual;
use crate::tensor::{haantjes_torsion, TensorField11};

/// Which phase variables an ansatz block may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockVars {
    Phase,
    PositionsOnly,
}

/// Polynomial ansatz for the block structure `K = [[A, B], [C, A^T]]`
/// with `B`, `C` skew by construction.
#[derive(Clone, Debug)]
pub struct AnsatzSpec {
    pub deg_a: u32,
    pub deg_b: u32,
    pub deg_c: u32,
    pub a_vars: BlockVars,
    pub b_zero: bool,
    /// Allowed parameter monomials per unknown (monomials over the trailing
    /// parameter variables of the environment context). `None` derives the
    /// set from the chain data, see [`derive_param_monomials`].
    pub param_monomials: Option<Vec<Monomial>>,
}

impl AnsatzSpec {
    pub fn degree(d: u32) -> Self {
        AnsatzSpec {
            deg_a: d,
            deg_b: d,
            deg_c: d,
            a_vars: BlockVars::Phase,
            b_zero: false,
            param_monomials: None,
        }
    }

    pub fn with_positions_only_a(mut self) -> Self {
        self.a_vars = BlockVars::PositionsOnly;
        self
    }
}

/// Where each unknown coefficient sits.
#[derive(Clone, Debug)]
pub struct UnknownSlot {
    /// 0..3 = A entries (row-major), 4 = B skew entry, 5 = C skew entry.
    pub slot: usize,
    pub phase_monomial: Monomial,
    pub param_monomial: Monomial,
}

/// Affine family of chain solutions over the environment context.
#[derive(Clone, Debug)]
pub struct LinearSolutionFamily {
    pub ctx: Context,
    pub particular: TensorField11,
    pub homogeneous: Vec<TensorField11>,
}

impl LinearSolutionFamily {
    pub fn dimension(&self) -> usize {
        self.homogeneous.len()
    }

    /// Build the member with the given free coefficients.
    pub fn member(&self, coeffs: &[BigRational]) -> TensorField11 {
        assert_eq!(coeffs.len(), self.homogeneous.len());
        let mut k = self.particular.clone();
        for (c, b) in coeffs.iter().zip(&self.homogeneous) {
            k = k.add(&b.scale_rat(c));
        }
        k
    }

    /// Coefficients expressing `k` in the family, if it belongs to it.
    pub fn contains(&self, k: &TensorField11) -> Option<Vec<BigRational>> {
        // unknowns t: sum_i t_i B_i = k - particular, matched per entry
        let delta = k.sub(&self.particular);
        let nt = self.homogeneous.len();
        let mut rows: BTreeMap<(usize, usize, Monomial), (Vec<(usize, BigRational)>, BigRational)> =
            BTreeMap::new();
        let add_terms =
            |rows: &mut BTreeMap<(usize, usize, Monomial), (Vec<(usize, BigRational)>, BigRational)>,
             poly: &Polynomial,
             i: usize,
             j: usize,
             col: Option<usize>| {
                for (m, c) in poly.terms() {
                    let key = (i, j, m.clone());
                    let entry = rows
                        .entry(key)
                        .or_insert_with(|| (Vec::new(), BigRational::zero()));
                    match col {
                        Some(u) => entry.0.push((u, c.clone())),
                        None => entry.1 += c,
                    }
                }
            };
        for i in 0..4 {
            for j in 0..4 {
                let d = delta.entry(i, j).as_rat()?.as_poly()?.clone();
                add_terms(&mut rows, &d, i, j, None);
                for (u, b) in self.homogeneous.iter().enumerate() {
                    let e = b.entry(i, j).as_rat()?.as_poly()?.clone();
                    add_terms(&mut rows, &e, i, j, Some(u));
                }
            }
        }
        let sys: Vec<_> = rows
            .into_iter()
            .map(|(key, (coeffs, rhs))| (key, coeffs, rhs))
            .collect();
        match solve_affine(nt, sys) {
            SolveOutcome::Solved(sol) => Some(sol.particular),
            SolveOutcome::Inconsistent(_) => None,
        }
    }
}

/// Outcome of [`solve_chain`].
pub enum ChainOutcome {
    Family(LinearSolutionFamily),
    /// The ansatz cannot cancel these monomials (printed in the residual
    /// grammar); the family is empty.
    Infeasible { uncancelled: Vec<String> },
}

/// Parameter monomials worth carrying: `1` together with every exact
/// quotient (parameter part of a term of `I`) / (parameter part of a term
/// of `H` or `1`).
pub fn derive_param_monomials(ctx: &Context, h: &Scalar, i: &Scalar) -> Vec<Monomial> {
    let nvars = ctx.len();
    let param_part = |m: &Monomial| {
        let mut e = vec![0u16; nvars];
        e[4..].copy_from_slice(&m.0[4..]);
        Monomial(e)
    };
    let collect = |s: &Scalar| -> BTreeSet<Monomial> {
        let mut out = BTreeSet::new();
        if let Some(r) = s.as_rat() {
            if let Some(p) = r.as_poly() {
                for (m, _) in p.terms() {
                    out.insert(param_part(m));
                }
            }
        }
        out
    };
    let set_i = collect(i);
    let mut set_h = collect(h);
    set_h.insert(Monomial::one(nvars));
    let mut out: BTreeSet<Monomial> = BTreeSet::new();
    out.insert(Monomial::one(nvars));
    for pi in &set_i {
        for ph in &set_h {
            if let Some(q) = pi.div(ph) {
                out.insert(q);
            }
        }
    }
    out.into_iter().collect()
}

fn phase_monomials(ctx: &Context, deg: u32, vars: BlockVars) -> Vec<Monomial> {
    let nvars = ctx.len();
    let active: Vec<usize> = match vars {
        BlockVars::Phase => vec![0, 1, 2, 3],
        BlockVars::PositionsOnly => vec![0, 1],
    };
    let mut out = Vec::new();
    let mut stack = vec![(0usize, vec![0u16; nvars], 0u32)];
    while let Some((k, exps, total)) = stack.pop() {
        if k == active.len() {
            out.push(Monomial(exps));
            continue;
        }
        for e in 0..=(deg - total) {
            let mut next = exps.clone();
            next[active[k]] = e as u16;
            stack.push((k + 1, next, total + e));
        }
    }
    out.sort();
    out
}

/// Everything needed to assemble family members from solved coefficients.
struct AnsatzLayout {
    slots: Vec<UnknownSlot>,
}

impl AnsatzLayout {
    fn build(ctx: &Context, spec: &AnsatzSpec, params: &[Monomial]) -> Self {
        let mut slots = Vec::new();
        let a_monos = phase_monomials(ctx, spec.deg_a, spec.a_vars);
        for slot in 0..4 {
            for pm in &a_monos {
                for qm in params {
                    slots.push(UnknownSlot {
                        slot,
                        phase_monomial: pm.clone(),
                        param_monomial: qm.clone(),
                    });
                }
            }
        }
        if !spec.b_zero {
            for pm in &phase_monomials(ctx, spec.deg_b, BlockVars::Phase) {
                for qm in params {
                    slots.push(UnknownSlot {
                        slot: 4,
                        phase_monomial: pm.clone(),
                        param_monomial: qm.clone(),
                    });
                }
            }
        }
        for pm in &phase_monomials(ctx, spec.deg_c, BlockVars::Phase) {
            for qm in params {
                slots.push(UnknownSlot {
                    slot: 5,
                    phase_monomial: pm.clone(),
                    param_monomial: qm.clone(),
                });
            }
        }
        AnsatzLayout { slots }
    }

    /// Tensor of the ansatz with the given coefficient values.
    fn assemble(&self, ctx: &Context, values: &[BigRational]) -> TensorField11 {
        assert_eq!(values.len(), self.slots.len());
        let mut blocks: Vec<Polynomial> = vec![Polynomial::zero(ctx); 6];
        for (slot, v) in self.slots.iter().zip(values) {
            if v.is_zero() {
                continue;
            }
            let mono = slot.phase_monomial.mul(&slot.param_monomial);
            let term = Polynomial::from_terms(ctx, vec![(mono, v.clone())]);
            blocks[slot.slot] = blocks[slot.slot].add_ref(&term);
        }
        tensor_from_blocks(ctx, &blocks)
    }
}

/// `blocks = [a11, a12, a21, a22, b, c]` into `[[A, B], [C, A^T]]` with
/// `B = [[0, b], [-b, 0]]`, `C = [[0, c], [-c, 0]]`.
fn tensor_from_blocks(ctx: &Context, blocks: &[Polynomial]) -> TensorField11 {
    let s = |p: &Polynomial| Scalar::from(p.clone());
    let z = Scalar::zero(ctx);
    let rows = vec![
        vec![s(&blocks[0]), s(&blocks[1]), z.clone(), s(&blocks[4])],
        vec![
            s(&blocks[2]),
            s(&blocks[3]),
            s(&blocks[4]).neg_ref(),
            z.clone(),
        ],
        vec![z.clone(), s(&blocks[5]), s(&blocks[0]), s(&blocks[2])],
        vec![s(&blocks[5]).neg_ref(), z.clone(), s(&blocks[1]), s(&blocks[3])],
    ];
    TensorField11::from_rows(ctx, rows)
}

/// Extract rows `sum_u a_u c_u = -const` from polynomials affine in the
/// unknowns (the trailing `n_unknowns` context variables).
pub(crate) fn affine_rows<K: Clone + Ord>(
    polys: &[(K, Polynomial)],
    base_vars: usize,
) -> Result<Vec<((K, Monomial), Vec<(usize, BigRational)>, BigRational)>> {
    let mut rows: BTreeMap<(K, Monomial), (Vec<(usize, BigRational)>, BigRational)> =
        BTreeMap::new();
    for (key, poly) in polys {
        for (m, c) in poly.terms() {
            let udeg: u32 = m.0[base_vars..].iter().map(|&e| e as u32).sum();
            if udeg > 1 {
                return Err(Error::AnsatzExhausted(
                    "system is not linear in the unknowns".into(),
                ));
            }
            let mut rest = m.clone();
            let mut unknown: Option<usize> = None;
            for (u, e) in rest.0[base_vars..].iter_mut().enumerate() {
                if *e == 1 {
                    unknown = Some(u);
                    *e = 0;
                }
            }
            let entry = rows
                .entry((key.clone(), rest))
                .or_insert_with(|| (Vec::new(), BigRational::zero()));
            match unknown {
                Some(u) => entry.0.push((u, c.clone())),
                None => entry.1 -= c,
            }
        }
    }
    Ok(rows
        .into_iter()
        .map(|(k, (coeffs, rhs))| (k, coeffs, rhs))
        .collect())
}

/// Solve the chain equation under the ansatz. Compatibility with the
/// symplectic form holds by construction of the block ansatz; the chain
/// components are matched coefficient by coefficient over all monomials in
/// phase variables and parameters jointly.
pub fn solve_chain(h: &Scalar, i: &Scalar, spec: &AnsatzSpec) -> Result<ChainOutcome> {
    let ctx = h.context().clone();
    assert!(ctx.same(i.context()), "context mismatch");
    let params = match &spec.param_monomials {
        Some(p) => p.clone(),
        None => derive_param_monomials(&ctx, h, i),
    };
    let layout = AnsatzLayout::build(&ctx, spec, &params);
    let m = layout.slots.len();
    // big context with one variable per unknown coefficient
    let unknown_names: Vec<String> = (0..m).map(|u| format!("c{u}")).collect();
    let big = ctx.extend(&unknown_names)?;
    let mut blocks: Vec<Polynomial> = vec![Polynomial::zero(&big); 6];
    for (u, slot) in layout.slots.iter().enumerate() {
        let mut exps = vec![0u16; big.len()];
        exps[..ctx.len()].copy_from_slice(&slot.phase_monomial.mul(&slot.param_monomial).0);
        exps[ctx.len() + u] = 1;
        let term = Polynomial::from_terms(
            &big,
            vec![(Monomial(exps), BigRational::from_integer(1.into()))],
        );
        blocks[slot.slot] = blocks[slot.slot].add_ref(&term);
    }
    let k = tensor_from_blocks(&big, &blocks);
    let h_big = h.lift(&big)?;
    let i_big = i.lift(&big)?;
    let residual = chain_residual(&k, &h_big, &i_big);
    let mut polys = Vec::new();
    for (comp, s) in residual.coeffs.iter().enumerate() {
        let p = s
            .as_rat()
            .and_then(|r| r.as_poly())
            .cloned()
            .expect("polynomial chain residual");
        polys.push((comp, p));
    }
    let rows = affine_rows(&polys, ctx.len())?;
    match solve_affine(m, rows) {
        SolveOutcome::Solved(sol) => {
            let particular = layout.assemble(&ctx, &sol.particular);
            let homogeneous: Vec<TensorField11> = sol
                .nullspace
                .iter()
                .map(|v| layout.assemble(&ctx, v))
                .collect();
            Ok(ChainOutcome::Family(LinearSolutionFamily {
                ctx,
                particular,
                homogeneous,
            }))
        }
        SolveOutcome::Inconsistent(keys) => {
            let mut uncancelled: Vec<String> = keys
                .into_iter()
                .map(|(comp, mono)| {
                    let names = ["dq1", "dq2", "dp1", "dp2"];
                    let trimmed = Monomial(mono.0[..ctx.len()].to_vec());
                    let one = Polynomial::from_terms(
                        &ctx,
                        vec![(trimmed, BigRational::from_integer(1.into()))],
                    );
                    format!("{} * {}", one, names[comp])
                })
                .collect();
            uncancelled.sort();
            uncancelled.dedup();
            Ok(ChainOutcome::Infeasible { uncancelled })
        }
    }
}

/// Impose the Haantjes condition on an affine chain family. The torsion
/// coefficients are polynomial in the free coefficients; when that system
/// is linear it is solved exactly, otherwise the corners of the coefficient
/// lattice `{-1, 0, 1}` and the supplied catalog candidates are tested.
/// Every returned member is re-verified independently. Members are sorted
/// by their coefficient vectors.
pub fn filter_haantjes(
    family: &LinearSolutionFamily,
    catalog_candidates: &[TensorField11],
) -> Result<Vec<TensorField11>> {
    let ctx = &family.ctx;
    let d = family.dimension();
    let mut accepted: Vec<(Vec<BigRational>, TensorField11)> = Vec::new();
    fn push_candidate(
        family: &LinearSolutionFamily,
        coeffs: Vec<BigRational>,
        accepted: &mut Vec<(Vec<BigRational>, TensorField11)>,
    ) {
        if accepted.iter().any(|(c, _)| c == &coeffs) {
            return;
        }
        let k = family.member(&coeffs);
        if haantjes_torsion(&k).is_zero() {
            accepted.push((coeffs, k));
        }
    }
    if d == 0 {
        push_candidate(family, Vec::new(), &mut accepted);
        return Ok(finish(accepted));
    }
    // torsion of the family with symbolic free coefficients
    let t_names: Vec<String> = (0..d).map(|u| format!("t{u}")).collect();
    let big = ctx.extend(&t_names)?;
    let mut k_sym = family.particular.lift(&big)?;
    for (u, b) in family.homogeneous.iter().enumerate() {
        let t = Scalar::var(&big, &format!("t{u}"))?;
        k_sym = k_sym.add(&b.lift(&big)?.scale(&t));
    }
    let torsion = haantjes_torsion(&k_sym);
    // coefficient system in t: one polynomial per (component, rest-monomial)
    let t_ctx = Context::new(&t_names.iter().map(|s| s.as_str()).collect::<Vec<_>>())?;
    let mut eqs: BTreeSet<Vec<(Monomial, BigRational)>> = BTreeSet::new();
    let mut linear = true;
    for i in 0..4 {
        for j in 0..4 {
            for kk in (j + 1)..4 {
                let comp = torsion.component(i, j, kk);
                let p = comp
                    .as_rat()
                    .and_then(|r| r.as_poly())
                    .cloned()
                    .expect("polynomial torsion");
                let mut by_rest: BTreeMap<Monomial, Vec<(Monomial, BigRational)>> = BTreeMap::new();
                for (mono, c) in p.terms() {
                    let mut rest = mono.clone();
                    let mut tpart = vec![0u16; d];
                    for (u, e) in rest.0[ctx.len()..].iter_mut().enumerate() {
                        tpart[u] = *e;
                        *e = 0;
                    }
                    by_rest
                        .entry(rest)
                        .or_default()
                        .push((Monomial(tpart), c.clone()));
                }
                for (_, terms) in by_rest {
                    let tp = Polynomial::from_terms(&t_ctx, terms);
                    if tp.is_zero() {
                        continue;
                    }
                    if tp.total_degree() > 1 {
                        linear = false;
                    }
                    eqs.insert(tp.terms().map(|(m, c)| (m.clone(), c.clone())).collect());
                }
            }
        }
    }
    let eqs: Vec<Polynomial> = eqs
        .into_iter()
        .map(|terms| Polynomial::from_terms(&t_ctx, terms))
        .collect();
    if eqs.is_empty() {
        // every member is Haantjes: present the particular and the basis
        // directions as representatives of the family
        push_candidate(family, vec![BigRational::zero(); d], &mut accepted);
        for u in 0..d {
            let mut c = vec![BigRational::zero(); d];
            c[u] = BigRational::from_integer(1.into());
            push_candidate(family, c, &mut accepted);
        }
    } else if linear {
        let keyed: Vec<(usize, Polynomial)> =
            eqs.into_iter().enumerate().collect();
        let rows = affine_rows(&keyed, 0)?;
        match solve_affine(d, rows) {
            SolveOutcome::Solved(sol) => {
                push_candidate(family, sol.particular.clone(), &mut accepted);
                for v in &sol.nullspace {
                    let c: Vec<BigRational> =
                        sol.particular.iter().zip(v).map(|(a, b)| a + b).collect();
                    push_candidate(family, c, &mut accepted);
                }
            }
            SolveOutcome::Inconsistent(_) => {}
        }
    } else if d <= 8 {
        // nonlinear: corners of the coefficient lattice
        let mut stack = vec![Vec::<BigRational>::new()];
        while let Some(cur) = stack.pop() {
            if cur.len() == d {
                push_candidate(family, cur, &mut accepted);
                continue;
            }
            for v in [-1i64, 0, 1] {
                let mut next = cur.clone();
                next.push(BigRational::from_integer(v.into()));
                stack.push(next);
            }
        }
    } else {
        push_candidate(family, vec![BigRational::zero(); d], &mut accepted);
    }
    for cand in catalog_candidates {
        if let Some(coeffs) = family.contains(cand) {
            push_candidate(family, coeffs, &mut accepted);
        }
    }
    Ok(finish(accepted))
}

fn finish(mut accepted: Vec<(Vec<BigRational>, TensorField11)>) -> Vec<TensorField11> {
    accepted.sort_by(|(a, _), (b, _)| a.cmp(b));
    accepted.into_iter().map(|(_, k)| k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{catalog, hamiltonian, integrals, CatalogName, ParamEnv, ParamValue};

    #[test]
    fn reproduces_diagonal_operator_for_oscillator() {
        // H_(1) with gamma2 = 0 and I2 = p2^2 + gamma1 q2 p2: degree-0
        // ansatz must contain diag(0, 1, 0, 1)
        let env = ParamEnv::new(
            &["q1", "q2", "p1", "p2"],
            &[
                ("gamma1", ParamValue::Sym),
                ("gamma2", ParamValue::rational(0, 1)),
            ],
        )
        .unwrap();
        let h1 = hamiltonian(&env, 1).unwrap();
        let (_, _, i2) = integrals(&env).unwrap();
        let outcome = solve_chain(&h1, &i2, &AnsatzSpec::degree(0)).unwrap();
        let family = match outcome {
            ChainOutcome::Family(f) => f,
            ChainOutcome::Infeasible { uncancelled } => {
                panic!("ansatz too small: {uncancelled:?}")
            }
        };
        let expect = catalog(CatalogName::KI2, &env).unwrap().tensor;
        assert!(family.contains(&expect).is_some());
        let filtered = filter_haantjes(&family, &[expect.clone()]).unwrap();
        assert!(filtered.iter().any(|k| k.equals(&expect)));
    }

    #[test]
    fn inconsistent_target_reports_uncancelled_monomials() {
        let env = ParamEnv::symbolic(2);
        let h = hamiltonian(&env, 2).unwrap();
        let bad = env.var("q1");
        let outcome = solve_chain(&h, &bad, &AnsatzSpec::degree(0)).unwrap();
        match outcome {
            ChainOutcome::Family(_) => panic!("dq1 target must be infeasible at degree 0"),
            ChainOutcome::Infeasible { uncancelled } => {
                assert!(!uncancelled.is_empty());
            }
        }
    }

    #[test]
    fn identity_always_passes_filter() {
        let env = ParamEnv::symbolic(2);
        let h = hamiltonian(&env, 2).unwrap();
        let outcome = solve_chain(&h, &h, &AnsatzSpec::degree(0)).unwrap();
        let family = match outcome {
            ChainOutcome::Family(f) => f,
            _ => panic!("identity chain must be solvable"),
        };
        let id = TensorField11::identity(env.ctx());
        assert!(family.contains(&id).is_some());
        let filtered = filter_haantjes(&family, &[id.clone()]).unwrap();
        assert!(filtered.iter().any(|k| k.equals(&id)));
    }
}
