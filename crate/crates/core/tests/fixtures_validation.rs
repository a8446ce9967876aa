//! The checked-in fixture files must re-validate against the programmatic
//! constructions, entry by entry.

use haantjes::exact::Scalar;
use haantjes::fixtures::{parse_fixture, CATALOG_FIXTURE, MAPS_FIXTURE, OBSTRUCTION_FIXTURE};
use haantjes::models::{
    algebra_generators, catalog, hamiltonian, integral_elliptic, integrals, CatalogName, ParamEnv,
    ParamValue,
};
use haantjes::separation::{
    cartesian_i1_map, cartesian_i2_map, elliptic_map, oscillator_map, polar_map,
};

fn fixture_env() -> ParamEnv {
    ParamEnv::symbolic_elliptic()
}

#[test]
fn catalog_scalars_match() {
    let fx = parse_fixture(CATALOG_FIXTURE).unwrap();
    let env = fixture_env();
    let h2 = hamiltonian(&env, 2).unwrap();
    let (j, i1, i2) = integrals(&env).unwrap();
    let ie = integral_elliptic(&env).unwrap();
    let (x1, x2, x3) = algebra_generators(&env).unwrap();
    for (name, expect) in [
        ("H2", &h2),
        ("J", &j),
        ("I1", &i1),
        ("I2", &i2),
        ("I_e", &ie),
        ("X1", &x1),
        ("X2", &x2),
        ("X3", &x3),
    ] {
        let stored = &fx.scalars[name];
        assert!(stored.equals(expect), "fixture scalar {name} diverged");
    }
}

#[test]
fn catalog_tensors_match() {
    let fx = parse_fixture(CATALOG_FIXTURE).unwrap();
    let env = fixture_env();
    for name in [
        CatalogName::KJ2,
        CatalogName::KI2,
        CatalogName::KI1,
        CatalogName::Ke,
        CatalogName::NI2,
        CatalogName::NI1,
        CatalogName::Ne,
    ] {
        let built = catalog(name, &env).unwrap().tensor;
        let stored = &fx.tensors[name.as_str()];
        assert!(stored.equals(&built), "fixture tensor {} diverged", name.as_str());
    }
}

#[test]
fn map_fixtures_match() {
    let fx = parse_fixture(MAPS_FIXTURE).unwrap();
    let env = fixture_env();
    let built: Vec<(&str, [Scalar; 4])> = vec![
        ("polar", polar_map(&env).unwrap().forward),
        ("cartesian_I2", cartesian_i2_map(&env).unwrap().forward),
        ("cartesian_I1", cartesian_i1_map(&env).unwrap().forward),
        ("elliptic", elliptic_map(&env).unwrap().forward),
    ];
    for (name, fwd) in built {
        let stored = &fx.maps[name];
        for i in 0..4 {
            assert!(
                stored[i].equals(&fwd[i]),
                "map {name} entry {i} diverged"
            );
        }
    }
    // the oscillator map lives over (q, p, gamma1) only; lift to compare
    let env_osc = ParamEnv::new(
        &["q1", "q2", "p1", "p2"],
        &[("gamma1", ParamValue::Sym)],
    )
    .unwrap();
    let osc = oscillator_map(&env_osc).unwrap();
    let fctx = fx.ctx.as_ref().unwrap();
    let stored = &fx.maps["oscillator_N1"];
    for i in 0..4 {
        let lifted = osc.forward[i].lift(fctx).unwrap();
        assert!(stored[i].equals(&lifted), "oscillator entry {i} diverged");
    }
}

#[test]
fn obstruction_fixtures_match() {
    let fx = parse_fixture(OBSTRUCTION_FIXTURE).unwrap();
    let builtins = haantjes::obstruction::builtin_candidates(5).unwrap();
    for cand in &builtins {
        let stored = &fx.candidates[cand.name.as_str()];
        for i in 0..2 {
            let lifted = stored[i].lift(cand.context()).unwrap();
            assert!(
                lifted.equals(&cand.q_new[i]),
                "candidate {} entry {i} diverged",
                cand.name
            );
        }
    }
}
