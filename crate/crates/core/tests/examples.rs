use detmod_core::determinacy::{finitely_determined_check, is_s_determined};
use detmod_core::extgrid::{hat_closure, mub, ExtCoord::*, ExtPoint, GridBox, PointSet};
use detmod_core::grid_module::ExtModule;
use detmod_core::presentation::{
    build_presentation, births_deaths, default_test_points, verify_presentation,
};
use detmod_core::{FieldSpec, GridModule, Matrix, DEFAULT_MARGIN};

const M: i64 = DEFAULT_MARGIN;

fn pt(c: &[detmod_core::ExtCoord]) -> ExtPoint {
    ExtPoint::new(c.to_vec())
}

fn indicator(field: FieldSpec, bx: GridBox, live: impl Fn(&[i64]) -> bool) -> GridModule {
    GridModule::from_fn(field, bx, |c| usize::from(live(c)), |c, axis| {
        let mut d = c.to_vec();
        d[axis] += 1;
        match (live(c), live(&d)) {
            (true, true) => Matrix::identity(field, 1),
            (a, b) => Matrix::zeros(field, usize::from(b), usize::from(a)),
        }
    })
    .unwrap()
}

/// `k` below `(0, 0)` and zero elsewhere, stored on `[(0,0), (1,1)]`.
fn corner(field: FieldSpec) -> GridModule {
    let bx = GridBox::new(vec![0, 0], vec![1, 1]).unwrap();
    indicator(field, bx, |c| c[0] <= 0 && c[1] <= 0)
}

#[test]
fn extended_interval_has_one_more_value_per_axis() {
    let bx = GridBox::new(vec![0, -1, 2], vec![1, 1, 2]).unwrap();
    assert_eq!(bx.extended().len(), 3 * 4 * 2);
    assert!(bx.extended().contains(&pt(&[NegInf, Int(1), NegInf])));
    assert!(!bx.extended().contains(&pt(&[Int(-1), Int(0), Int(2)])));
}

#[test]
fn corner_module_values() {
    for field in [FieldSpec::prime(2).unwrap(), FieldSpec::Rational] {
        let m = corner(field);
        let v = m.view();
        assert_eq!(v.eval_space(&pt(&[NegInf, NegInf])), 1);
        assert_eq!(v.eval_space(&pt(&[NegInf, Int(1)])), 0);
        assert_eq!(v.eval_space(&pt(&[Int(1), NegInf])), 0);
        assert_eq!(v.eval_space(&pt(&[Int(1), Int(1)])), 0);
        assert_eq!(v.eval_space(&pt(&[Int(-7), Int(0)])), 1);
    }
}

#[test]
fn corner_module_is_determined_by_the_shrunk_box() {
    let m = corner(FieldSpec::prime(3).unwrap());
    let candidate = GridBox::new(vec![0, 0], vec![1, 1]).unwrap();
    assert!(finitely_determined_check(&m, &candidate, M).unwrap().holds);
    let s = GridBox::new(vec![1, 1], vec![1, 1]).unwrap().extended();
    assert_eq!(s.len(), 4);
    assert!(is_s_determined(&m.view(), &s, true, M).unwrap().holds);
    // The minimum alone cannot see the deaths.
    let s = PointSet::from_points(2, [ExtPoint::min(2)]).unwrap();
    assert!(!is_s_determined(&m.view(), &s, false, M).unwrap().holds);
}

#[test]
fn corner_module_births_and_deaths() {
    let m = corner(FieldSpec::Rational);
    let s = GridBox::new(vec![1, 1], vec![1, 1]).unwrap().extended();
    let r = births_deaths(&m.view(), &s, M).unwrap();
    assert_eq!(r.births.into_iter().collect::<Vec<_>>(), vec![(ExtPoint::min(2), 1)]);
    let deaths: Vec<_> = r.deaths.into_iter().collect();
    assert_eq!(deaths, vec![(pt(&[NegInf, Int(1)]), 1), (pt(&[Int(1), NegInf]), 1)]);
}

#[test]
fn corner_module_presentation() {
    let f = FieldSpec::prime(2).unwrap();
    let m = corner(f);
    let v = m.view();
    let s = GridBox::new(vec![1, 1], vec![1, 1]).unwrap().extended();
    let p = build_presentation(&v, &s, M).unwrap();
    assert_eq!(p.generator_points(), vec![&ExtPoint::min(2)]);
    assert_eq!(p.relation_points(), vec![&pt(&[NegInf, Int(1)]), &pt(&[Int(1), NegInf])]);
    assert_eq!(p.rel_matrix, Matrix::from_i64(f, &[&[1, 1]]));
    let tests = default_test_points(&v, &s, M).unwrap();
    assert!(verify_presentation(&v, &p, &tests).unwrap().holds);
}

#[test]
fn joins_of_infinite_points() {
    let s = PointSet::from_points(2, [pt(&[Int(1), NegInf]), pt(&[NegInf, Int(1)])]).unwrap();
    assert_eq!(mub(&s), pt(&[Int(1), Int(1)]));
    assert_eq!(hat_closure(&s).len(), 3);
    assert_eq!(mub(&PointSet::empty(2)), ExtPoint::min(2));
}

#[test]
fn half_plane_needs_many_points() {
    // Below the antidiagonal, truncated to a box: every death sits on the
    // antidiagonal, so sets of one or two points never determine it.
    for n in [2, 3] {
        let bx = GridBox::new(vec![-n, -n], vec![n, n]).unwrap();
        let m = indicator(FieldSpec::prime(2).unwrap(), bx.clone(), |c| c[0] + c[1] < 0);
        let v = m.view();
        let pool = bx.extended().to_vec();
        for (i, p) in pool.iter().enumerate() {
            for q in &pool[i..] {
                let s = PointSet::from_points(2, [p.clone(), q.clone()]).unwrap();
                assert!(!is_s_determined(&v, &s, false, M).unwrap().holds, "{p} {q}");
            }
        }
        let whole = bx.shrink_lower().unwrap().extended();
        assert!(is_s_determined(&v, &whole, true, M).unwrap().holds);
    }
}
