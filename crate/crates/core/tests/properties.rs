use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use detmod_core::determinacy::{
    check_encoding, encoding_diagram, is_s_determined, is_s_determined_oracle, t_alpha_check,
};
use detmod_core::extgrid::{
    alpha, convex_projection, critical_grid, hat_closure, tilde_set, ExtCoord, ExtPoint, GridBox,
    PointSet,
};
use detmod_core::format::{parse_presentation, presentation_to_json};
use detmod_core::grid_module::{ExtModule, GridModule};
use detmod_core::linalg::find_isomorphism;
use detmod_core::presentation::{
    build_presentation, births_deaths, canonical_comparison, default_test_points, unzip, zip,
    verify_presentation,
};
use detmod_core::random::{
    random_box, random_ext_point, random_join_closed, random_module, random_set,
};
use detmod_core::{FieldSpec, PosetDiagram, DEFAULT_MARGIN};

const M: i64 = DEFAULT_MARGIN;

fn field(k: u64) -> FieldSpec {
    match k % 3 {
        0 => FieldSpec::prime(2).unwrap(),
        1 => FieldSpec::prime(3).unwrap(),
        _ => FieldSpec::Rational,
    }
}

/// `{−∞} ∪ [aᵢ+1, bᵢ]` on every axis; always determines a module on the box.
fn default_set(bx: &GridBox) -> PointSet {
    PointSet::cartesian(
        (0..bx.dim())
            .map(|i| {
                std::iter::once(ExtCoord::NegInf)
                    .chain((bx.a[i] + 1..=bx.b[i]).map(ExtCoord::Int))
                    .collect()
            })
            .collect(),
    )
}

fn instance(seed: u64, n: usize, side: i64, gens: usize) -> (GridModule, PointSet, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bx = random_box(&mut rng, n, side);
    let m = random_module(&mut rng, field(seed), &bx, gens, 2);
    let s = random_set(&mut rng, &bx, 4);
    (m, s, rng)
}

/// `res_α n` on the critical grid, for the full-grid isomorphism oracle.
fn pulled_back(n: &PosetDiagram, s: &PointSet, grid: &PointSet) -> PosetDiagram {
    PosetDiagram::from_fn(
        n.field(),
        grid,
        |c| n.dim_at(&alpha(s, c)).unwrap(),
        |c, d| n.map_between(&alpha(s, c), &alpha(s, d)),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn determinacy_conditions_agree(seed in any::<u64>(), n in 1usize..=3) {
        let (m, s, _) = instance(seed, n, 3, 2);
        let v = m.view();
        let c1 = is_s_determined(&v, &s, false, M).unwrap();
        let c2 = t_alpha_check(&v, &s, M).unwrap();
        let c3 = check_encoding(&v, &s, &encoding_diagram(&v, &s).unwrap(), M).unwrap();
        prop_assert_eq!(c1.holds, c2.holds);
        prop_assert_eq!(c1.holds, c3.holds);
        if let Some((c, d)) = c1.witness {
            prop_assert!(c.leq(&d));
            prop_assert_eq!(alpha(&s, &c), alpha(&s, &d));
        }
    }

    #[test]
    fn critical_grid_matches_window_oracle(seed in any::<u64>(), support in any::<bool>()) {
        let (m, s, _) = instance(seed, 2, 3, 2);
        let v = m.view();
        let fast = is_s_determined(&v, &s, support, M).unwrap();
        let slow = is_s_determined_oracle(&v, &s, m.grid_box(), M, support).unwrap();
        prop_assert_eq!(fast.holds, slow.holds);
    }

    #[test]
    fn encoding_check_matches_full_grid_isomorphism(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bx = random_box(&mut rng, n, if n == 1 { 4 } else { 2 });
        let m = random_module(&mut rng, FieldSpec::prime(2).unwrap(), &bx, 3 - n, 2);
        let s = random_set(&mut rng, &bx, 3);
        let v = m.view();
        let enc = encoding_diagram(&v, &s).unwrap();
        let grid = critical_grid(&bx, &s, M).unwrap();
        let oracle = find_isomorphism(&v.restrict_diagram(&grid).unwrap(), &pulled_back(&enc, &s, &grid))
            .unwrap()
            .is_some();
        prop_assert_eq!(check_encoding(&v, &s, &enc, M).unwrap().holds, oracle);
    }

    #[test]
    fn alpha_is_a_monotone_deflation(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bx = random_box(&mut rng, n, 3);
        let s = random_set(&mut rng, &bx, 4);
        let hat = hat_closure(&s);
        let c = random_ext_point(&mut rng, &bx);
        let d = c.join(&random_ext_point(&mut rng, &bx));
        let a = alpha(&s, &c);
        prop_assert!(a.leq(&c));
        prop_assert!(a.leq(&alpha(&s, &d)));
        prop_assert_eq!(alpha(&s, &a), a.clone());
        prop_assert_eq!(alpha(&hat, &c), a);
        // Same S-downset iff same Ŝ-downset.
        let same_s = s.below(&c) == s.below(&d);
        let same_hat = hat.below(&c) == hat.below(&d);
        prop_assert_eq!(same_s, same_hat);
    }

    #[test]
    fn closures_are_idempotent(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bx = random_box(&mut rng, n, 3);
        let s = random_set(&mut rng, &bx, 5);
        let hat = hat_closure(&s);
        prop_assert_eq!(hat_closure(&hat), hat.clone());
        prop_assert!(s.iter().all(|p| hat.contains(p)));
        let tilde = tilde_set(&s);
        prop_assert!(tilde.contains(&ExtPoint::min(n)));
        prop_assert_eq!(tilde_set(&tilde), tilde);
        let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
        let once = convex_projection(&bx, &ExtPoint::from_ints(&c)).unwrap();
        prop_assert!(bx.contains(&once.to_ints().unwrap()));
        prop_assert_eq!(convex_projection(&bx, &once).unwrap(), once);
    }

    #[test]
    fn extension_is_functorial(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bx = random_box(&mut rng, n, 3);
        let m = random_module(&mut rng, field(seed), &bx, 3, 3);
        let v = m.view();
        let c = random_ext_point(&mut rng, &bx);
        let d = c.join(&random_ext_point(&mut rng, &bx));
        let e = d.join(&random_ext_point(&mut rng, &bx));
        let direct = v.eval_map(&c, &e).unwrap();
        let composed = &v.eval_map(&d, &e).unwrap() * &v.eval_map(&c, &d).unwrap();
        prop_assert_eq!(direct, composed);
        prop_assert!(v.eval_map(&c, &c).unwrap().is_invertible());
    }

    #[test]
    fn unzip_is_supported_above_the_set(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bx = random_box(&mut rng, n, 3);
        let m = random_module(&mut rng, field(seed), &bx, 3, 2);
        let l = random_join_closed(&mut rng, &bx, 3);
        let v = m.view();
        let z = zip(&v, &l).unwrap();
        let u = unzip(&l, &z).unwrap();
        prop_assert_eq!(&u.restrict_diagram(&l).unwrap(), &z);
        for c in critical_grid(&bx, &l, M).unwrap().iter() {
            if u.eval_space(c) > 0 {
                prop_assert!(l.covers_from_below(c));
            }
        }
    }

    #[test]
    fn canonical_comparison_is_invertible_when_determined(seed in any::<u64>(), n in 1usize..=2) {
        let (m, s, _) = instance(seed, n, 3, 2);
        let v = m.view();
        prop_assume!(is_s_determined(&v, &s, true, M).unwrap().holds);
        for c in critical_grid(m.grid_box(), &s, M).unwrap().iter() {
            prop_assert!(canonical_comparison(&v, &s, c).unwrap().is_invertible(), "at {}", c);
        }
    }

    #[test]
    fn presentations_round_trip(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bx = random_box(&mut rng, n, 3);
        let m = random_module(&mut rng, field(seed), &bx, 3, 3);
        let s = default_set(&bx);
        let v = m.view();
        let p = build_presentation(&v, &s, M).unwrap();
        let mut tests = default_test_points(&v, &s, M).unwrap();
        for _ in 0..8 {
            tests.insert(random_ext_point(&mut rng, &bx)).unwrap();
        }
        let check = verify_presentation(&v, &p, &tests).unwrap();
        prop_assert!(check.holds, "{:?} at {:?}", check.reason, check.point);
        let back = parse_presentation(&presentation_to_json(&p)).unwrap();
        prop_assert_eq!(&back, &p);
        // Generators are exactly the births.
        let births = births_deaths(&v, &s, M).unwrap().births;
        let gens: std::collections::BTreeMap<ExtPoint, usize> =
            p.generators.iter().map(|g| (g.point.clone(), g.multiplicity)).collect();
        prop_assert_eq!(gens, births);
    }
}

#[test]
fn random_sets_determine_random_modules_sometimes() {
    // Guards against a generator that makes every instance trivially one-sided.
    let mut counts = [0usize; 2];
    for seed in 0..200u64 {
        let (m, s, _) = instance(seed, 2, 3, 2);
        counts[usize::from(is_s_determined(&m.view(), &s, false, M).unwrap().holds)] += 1;
    }
    assert!(counts[0] > 20 && counts[1] > 20, "{counts:?}");
}

#[test]
fn oracle_and_grid_agree_on_many_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for _ in 0..200 {
        let bx = random_box(&mut rng, 2, 3);
        let f = field(rng.gen());
        let m = random_module(&mut rng, f, &bx, 2, 2);
        let s = random_set(&mut rng, &bx, 4);
        let v = m.view();
        for support in [false, true] {
            let a = is_s_determined(&v, &s, support, M).unwrap();
            let b = is_s_determined_oracle(&v, &s, &bx, M, support).unwrap();
            assert_eq!(a.holds, b.holds, "box {bx:?}, set {s:?}");
        }
    }
}
