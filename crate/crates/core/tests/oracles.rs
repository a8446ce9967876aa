//! Independent oracles for the derived expected values: naive term-by-term
//! multiplication, central finite differences for the radical derivative,
//! bracket expansions, block-determinant identities and the remaining
//! worked examples.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use haantjes::exact::{parse_poly, parse_scalar, Context, Monomial, Polynomial, Scalar};
use haantjes::models::{
    algebra_generators, catalog, hamiltonian, integrals, nijenhuis_generator, CatalogName,
    ParamEnv,
};
use haantjes::phase::{differential, poisson_bracket, OneForm};
use haantjes::separation::elliptic::ConfocalData;
use haantjes::tensor::{
    codistribution_basis, eigen_data, haantjes_torsion, in_span, nijenhuis_torsion,
    semisimplicity_residual, symplectic_compatibility, TensorField11,
};

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(7)
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigRational> {
    (0..n)
        .map(|_| BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=7).into()))
        .collect()
}

/// Naive multiplication: push every product term into a vector without the
/// canonical accumulation path, then merge by sorting.
fn naive_mul(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut raw: Vec<(Monomial, BigRational)> = Vec::new();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            raw.push((ma.mul(mb), ca * cb));
        }
    }
    raw.sort_by(|(x, _), (y, _)| x.cmp(y));
    Polynomial::from_terms(a.context(), raw)
}

#[test]
fn multiplication_matches_naive_oracle() {
    let ctx = Context::new(&["q1", "q2", "gamma2"]).unwrap();
    let a = parse_poly(&ctx, "1 + gamma2*q1^2").unwrap();
    let b = parse_poly(&ctx, "1 + gamma2*q2^2").unwrap();
    let product = a.mul_ref(&b);
    let expect = parse_poly(&ctx, "1 + gamma2*q1^2 + gamma2*q2^2 + gamma2^2*q1^2*q2^2").unwrap();
    assert_eq!(product, expect);
    assert_eq!(product, naive_mul(&a, &b));
    // spot-check by exact evaluation at five random rational points
    let mut r = rng();
    for _ in 0..5 {
        let pt = random_point(&mut r, 3);
        let lhs = product.eval_rational(&pt);
        let rhs = a.eval_rational(&pt) * b.eval_rational(&pt);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn evaluate_examples() {
    let ctx = Context::new(&["q1", "q2"]).unwrap();
    let f = parse_poly(&ctx, "q1^2 + q2^2").unwrap();
    let val = f.eval_rational(&[
        BigRational::from_integer(3.into()),
        BigRational::from_integer(4.into()),
    ]);
    assert_eq!(val, BigRational::from_integer(25.into()));
    // branch selection on a collapsible radical
    let s = Scalar::sqrt_poly(&parse_poly(&ctx, "q1^2 + 2*q1 + 1").unwrap());
    // collapses exactly to q1 + 1, so both branches agree with the value
    assert!(s.is_rational());
    let sq = Scalar::sqrt_poly(&parse_poly(&ctx, "q1^2 + q2^2").unwrap());
    let five = sq
        .eval_rational(
            &[
                BigRational::from_integer(3.into()),
                BigRational::from_integer(4.into()),
            ],
            1,
        )
        .unwrap();
    assert_eq!(five, BigRational::from_integer(5.into()));
    let minus_five = sq
        .eval_rational(
            &[
                BigRational::from_integer(3.into()),
                BigRational::from_integer(4.into()),
            ],
            -1,
        )
        .unwrap();
    assert_eq!(minus_five, BigRational::from_integer((-5).into()));
}

#[test]
fn radical_derivative_matches_finite_differences() {
    // d/dq1 sqrt(T^2 - 4P) against central differences at random points
    let env = ParamEnv::symbolic_elliptic();
    let data = ConfocalData::new(&env).unwrap();
    let ds = data.s.derivative(0);
    let n = env.ctx().len();
    let mut r = rng();
    let mut checked = 0;
    while checked < 10 {
        let pt = random_point(&mut r, n);
        let mut vals: Vec<Complex64> = pt
            .iter()
            .map(|x| Complex64::new(haantjes::exact::poly::rational_to_f64(x).abs() + 0.5, 0.0))
            .collect();
        // keep k1 in (0,1) so the discriminant stays positive
        vals[6] = Complex64::new(0.6, 0.0);
        let h = 1e-6;
        let mut vp = vals.clone();
        vp[0] += h;
        let mut vm = vals.clone();
        vm[0] -= h;
        let (fp, _) = data.s.eval_c64(&vp, 1).unwrap();
        let (fm, _) = data.s.eval_c64(&vm, 1).unwrap();
        let numeric = (fp - fm) / (2.0 * h);
        let (exact, mag) = ds.eval_c64(&vals, 1).unwrap();
        if mag > 1e6 {
            continue;
        }
        checked += 1;
        let rel = (numeric - exact).norm() / exact.norm().max(1.0);
        assert!(rel < 1e-8, "finite-difference mismatch: {rel}");
    }
}

#[test]
fn angular_bracket_expansion() {
    // X3 = {X1, X2} forces {J, I1} = 2 X3 and {J, I1} + {J, I2} = 0
    let env = ParamEnv::symbolic(2);
    let (j, i1, i2) = integrals(&env).unwrap();
    let (_, _, x3) = algebra_generators(&env).unwrap();
    let b1 = poisson_bracket(&j, &i1);
    let b2 = poisson_bracket(&j, &i2);
    assert!(b1.add_ref(&b2).is_zero());
    assert!(b1.sub_ref(&x3.scale(&haantjes::exact::rat(2, 1))).is_zero());
}

#[test]
fn eigenvalue_examples() {
    let env = ParamEnv::symbolic_elliptic();
    // K_J2: {q1^2 + q2^2 (x2), 0 (x2)}
    let kj2 = catalog(CatalogName::KJ2, &env).unwrap().tensor;
    let eig = eigen_data(&kj2).unwrap();
    let r2 = parse_scalar(env.ctx(), "q1^2 + q2^2").unwrap();
    assert_eq!(eig.len(), 2);
    assert!(eig[0].0.equals(&r2) && eig[0].1 == 2);
    assert!(eig[1].0.is_zero() && eig[1].1 == 2);
    // N_I2: {-(1 + gamma2 q1^2), 0}
    let ni2 = catalog(CatalogName::NI2, &env).unwrap().tensor;
    let eig = eigen_data(&ni2).unwrap();
    let lam = parse_scalar(env.ctx(), "-(1 + gamma2*q1^2)").unwrap();
    assert!(eig.iter().any(|(l, m)| l.equals(&lam) && *m == 2));
    assert!(eig.iter().any(|(l, m)| l.is_zero() && *m == 2));
    // K_e: the eigenvalue pair satisfies Vieta against the position block
    let ke = catalog(CatalogName::Ke, &env).unwrap().tensor;
    let eig = eigen_data(&ke).unwrap();
    assert_eq!(eig.len(), 2);
    let a = ke.block(0, 0);
    let tr = a[0][0].add_ref(&a[1][1]);
    let det = a[0][0].mul_ref(&a[1][1]).sub_ref(&a[0][1].mul_ref(&a[1][0]));
    assert!(eig[0].0.add_ref(&eig[1].0).sub_ref(&tr).is_zero());
    assert!(eig[0].0.mul_ref(&eig[1].0).sub_ref(&det).is_zero());
    assert!(!eig[0].0.is_rational());
    // semisimplicity of the catalog operators
    for k in [&kj2, &ke] {
        let e = eigen_data(k).unwrap();
        assert!(semisimplicity_residual(k, &e).is_zero());
    }
    let ki2 = catalog(CatalogName::KI2, &env).unwrap().tensor;
    let e = eigen_data(&ki2).unwrap();
    assert!(semisimplicity_residual(&ki2, &e).is_zero());
}

#[test]
fn codistribution_examples() {
    let env = ParamEnv::symbolic(2);
    let ctx = env.ctx();
    let kj2 = catalog(CatalogName::KJ2, &env).unwrap().tensor;
    let r2 = parse_scalar(ctx, "q1^2 + q2^2").unwrap();
    let basis = codistribution_basis(&kj2, &r2).unwrap();
    let angular = OneForm::new([
        parse_scalar(ctx, "-q2").unwrap(),
        parse_scalar(ctx, "q1").unwrap(),
        Scalar::zero(ctx),
        Scalar::zero(ctx),
    ]);
    assert!(in_span(&basis, &angular));
    let ni2 = catalog(CatalogName::NI2, &env).unwrap().tensor;
    let basis = codistribution_basis(&ni2, &Scalar::zero(ctx)).unwrap();
    let position_form = OneForm::new([
        parse_scalar(ctx, "-gamma2*q1*q2").unwrap(),
        parse_scalar(ctx, "1 + gamma2*q1^2").unwrap(),
        Scalar::zero(ctx),
        Scalar::zero(ctx),
    ]);
    assert!(in_span(&basis, &position_form));
}

#[test]
fn lift_form_block_identities() {
    // det(K - lambda I) = [det(A - lambda I)]^2 for the lift-form catalog
    let env = ParamEnv::symbolic_elliptic();
    for name in [CatalogName::KJ2, CatalogName::KI2, CatalogName::Ke] {
        let k = catalog(name, &env).unwrap().tensor;
        assert!(k.b_block_is_zero());
        let ext = env.ctx().extend(&["lambda_"]).unwrap();
        let lam = Scalar::var(&ext, "lambda_").unwrap();
        let mut shifted = k.lift(&ext).unwrap();
        for i in 0..4 {
            let d = shifted.entry(i, i).sub_ref(&lam);
            shifted.set(i, i, d);
        }
        let det_k = shifted.determinant();
        let a = shifted.block(0, 0);
        let det_a = a[0][0].mul_ref(&a[1][1]).sub_ref(&a[0][1].mul_ref(&a[1][0]));
        assert!(
            det_k.sub_ref(&det_a.pow(2)).is_zero(),
            "block determinant identity fails for {}",
            name.as_str()
        );
    }
}

#[test]
fn left_eigenvector_of_the_block_lifts() {
    // sigma A = lambda sigma with sigma = (-gamma2 q1 q2, 1 + gamma2 q1^2)
    // lifts to a position-only left eigenvector (sigma, 0) of K_I2
    let env = ParamEnv::symbolic(2);
    let ctx = env.ctx();
    let k = catalog(CatalogName::KI2, &env).unwrap().tensor;
    let lam = parse_scalar(ctx, "1 + gamma2*q1^2").unwrap();
    let sigma = [
        parse_scalar(ctx, "-gamma2*q1*q2").unwrap(),
        parse_scalar(ctx, "1 + gamma2*q1^2").unwrap(),
        Scalar::zero(ctx),
        Scalar::zero(ctx),
    ];
    // row-vector times matrix
    for col in 0..4 {
        let mut acc = Scalar::zero(ctx);
        for row in 0..4 {
            acc = acc.add_ref(&sigma[row].mul_ref(k.entry(row, col)));
        }
        assert!(acc.sub_ref(&lam.mul_ref(&sigma[col])).is_zero());
    }
}

#[test]
fn exactness_examples() {
    let env = ParamEnv::symbolic(2);
    let ctx = env.ctx();
    // d(J) is exact
    assert!(differential(&env.angular_momentum()).is_exact());
    // -q2 dq1 + q1 dq2 is not exact, but becomes exact after 1/q1^2
    let alpha = OneForm::new([
        parse_scalar(ctx, "-q2").unwrap(),
        parse_scalar(ctx, "q1").unwrap(),
        Scalar::zero(ctx),
        Scalar::zero(ctx),
    ]);
    assert!(!alpha.is_exact());
    let scaled = alpha.scale(&parse_scalar(ctx, "1/(q1^2)").unwrap());
    assert!(scaled.is_exact());
    // the confocal eigenforms are not exact as given
    let env_e = ParamEnv::symbolic_elliptic();
    let data = ConfocalData::new(&env_e).unwrap();
    let ctx_e = env_e.ctx();
    let lam_a = data.lambda2.neg_ref();
    let sigma = OneForm::new([
        parse_scalar(ctx_e, "gamma2*q1*q2").unwrap(),
        parse_scalar(ctx_e, "gamma2*k1^2*q2^2")
            .unwrap()
            .add_ref(&lam_a),
        Scalar::zero(ctx_e),
        Scalar::zero(ctx_e),
    ]);
    assert!(!sigma.is_exact());
}

#[test]
fn separation_operators_in_the_polar_chart() {
    // abstract polar chart (r, phi, pr, pphi): the quadratic Hamiltonian
    // and p_phi^2 give the diagonal operator diag(0, r^2, 0, r^2)
    let ctx = Context::new(&["r", "phi", "pr", "pphi", "gamma1", "gamma2"]).unwrap();
    let h = parse_scalar(&ctx, "(1 + gamma2*r^2)*pr^2 + pphi^2/(r^2) + gamma1*r*pr").unwrap();
    let pphi2 = parse_scalar(&ctx, "pphi^2").unwrap();
    let ops =
        haantjes::separation::separation_operators_from_separated(&[h.clone(), pphi2.clone()], 0)
            .unwrap();
    assert!(ops[0].equals(&TensorField11::identity(&ctx)));
    let r2 = parse_scalar(&ctx, "r^2").unwrap();
    assert!(ops[1].entry(1, 1).equals(&r2));
    assert!(ops[1].entry(0, 0).is_zero());
    // verified Haantjes, compatible and chain-consistent
    assert!(haantjes_torsion(&ops[1]).is_zero());
    assert!(symplectic_compatibility(&ops[1]).is_zero());
    assert!(haantjes::models::chain_residual(&ops[1], &h, &pphi2).is_zero());
}

#[test]
fn nijenhuis_generator_examples() {
    let env = ParamEnv::symbolic(2);
    // identity: I - tr(I)/2 I = -I
    let id = TensorField11::identity(env.ctx());
    let n = nijenhuis_generator(&id);
    assert!(n.equals(&id.scale_rat(&BigRational::from_integer((-1).into()))));
    // K_I2 gives the catalog generator
    let ki2 = catalog(CatalogName::KI2, &env).unwrap().tensor;
    let ni2 = catalog(CatalogName::NI2, &env).unwrap().tensor;
    assert!(nijenhuis_generator(&ki2).equals(&ni2));
    // every Nijenhuis fixture is also Haantjes
    for name in [CatalogName::NI2, CatalogName::NI1] {
        let t = catalog(name, &env).unwrap().tensor;
        assert!(nijenhuis_torsion(&t).is_zero());
        assert!(haantjes_torsion(&t).is_zero());
    }
}

#[test]
fn elliptic_radical_structure() {
    // both confocal coordinates carry the radical; their symmetric
    // functions are rational
    let env = ParamEnv::symbolic_elliptic();
    let map = haantjes::separation::elliptic_map(&env).unwrap();
    assert!(!map.forward[0].is_rational());
    assert!(!map.forward[1].is_rational());
    let sum = map.forward[0].add_ref(&map.forward[1]);
    let prod = map.forward[0].mul_ref(&map.forward[1]);
    assert!(sum.is_rational());
    assert!(prod.is_rational());
}

#[test]
fn chain_family_contains_only_admissible_combinations() {
    // the (H_(2), I2) chain family pins the operator: K_I2 belongs to it,
    // the identity and shifted combinations do not
    let env = ParamEnv::symbolic(2);
    let h = hamiltonian(&env, 2).unwrap();
    let (_, _, i2) = integrals(&env).unwrap();
    let spec = haantjes::solver::AnsatzSpec::degree(2).with_positions_only_a();
    let family = match haantjes::solver::solve_chain(&h, &i2, &spec).unwrap() {
        haantjes::solver::ChainOutcome::Family(f) => f,
        _ => panic!("solvable"),
    };
    let ki2 = catalog(CatalogName::KI2, &env).unwrap().tensor;
    let id = TensorField11::identity(env.ctx());
    assert!(family.contains(&ki2).is_some());
    assert!(family.contains(&id).is_none());
    assert!(family.contains(&ki2.add(&id)).is_none());
}

#[test]
fn stepb_recovers_the_normalized_cartesian_momentum() {
    // E2 co-distribution of N_I2: dx = dQ2 (radical), tau the
    // momentum-bearing form; the potential is P2 = p2 sqrt(1+gamma2 q1^2)
    let env = ParamEnv::symbolic(2);
    let ctx = env.ctx();
    let map = haantjes::separation::cartesian_i2_map(&env).unwrap();
    let dq2 = differential(&map.forward[1]);
    let ni2 = catalog(CatalogName::NI2, &env).unwrap().tensor;
    let basis = codistribution_basis(&ni2, &Scalar::zero(ctx)).unwrap();
    let tau = basis
        .iter()
        .find(|f| f.coeffs[2..].iter().any(|c| !c.is_zero()))
        .unwrap();
    let d = parse_poly(ctx, "1 + gamma2*q1^2").unwrap();
    let h_ansatz = haantjes::separation::stepb::StepBAnsatz::new(2, 1)
        .with_factor(d.clone(), 2)
        .with_radical(d.clone());
    let y_ansatz = haantjes::separation::stepb::StepBAnsatz::new(2, 1)
        .with_factor(d.clone(), 1)
        .with_radical(d.clone());
    let out =
        haantjes::separation::stepb::conjugate_momentum(&dq2, tau, &h_ansatz, &y_ansatz).unwrap();
    let y = out.potential.expect("P2 is in the catalog space");
    let expect = map.forward[3].clone();
    assert!(
        y.equals(&expect) || y.equals(&expect.neg_ref()),
        "recovered {y}"
    );
    // "already canonically normalized": {Q2, y} = +-1 with no extra factor
    let bracket = poisson_bracket(&map.forward[1], &y);
    assert!(
        bracket.equals(&Scalar::one(ctx)) || bracket.equals(&Scalar::one(ctx).neg_ref()),
        "{{Q2, y}} = {bracket}"
    );
}

#[test]
fn solver_output_is_deterministic() {
    let env = ParamEnv::symbolic(2);
    let h = hamiltonian(&env, 2).unwrap();
    let (_, _, i2) = integrals(&env).unwrap();
    let spec = haantjes::solver::AnsatzSpec::degree(1);
    let run = || match haantjes::solver::solve_chain(&h, &i2, &spec).unwrap() {
        haantjes::solver::ChainOutcome::Family(f) => {
            let mut s = String::new();
            for row in f.particular.rows() {
                for e in row {
                    s.push_str(&format!("{e};"));
                }
            }
            for b in &f.homogeneous {
                for row in b.rows() {
                    for e in row {
                        s.push_str(&format!("{e};"));
                    }
                }
            }
            s
        }
        haantjes::solver::ChainOutcome::Infeasible { uncancelled } => uncancelled.join(";"),
    };
    assert_eq!(run(), run());
}
