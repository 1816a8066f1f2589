//! Random instances for property tests, the acceptance suite and benchmarks.
//!
//! Modules are sub-quotients of free modules: a few generators at random box
//! points and random relations among them, so every square commutes by
//! construction.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::extgrid::{hat_closure, ExtCoord, ExtPoint, GridBox, PointSet};
use crate::grid_module::GridModule;
use crate::linalg::{FieldSpec, Matrix, Scalar};

/// A uniformly random element; rationals are drawn from small integers.
pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec) -> Scalar {
    match field.order() {
        Some(p) => Scalar::Mod(rng.gen_range(0..p)),
        None => field.from_i64(rng.gen_range(-3..=3)),
    }
}

pub fn random_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    rows: usize,
    cols: usize,
) -> Matrix {
    let mut m = Matrix::zeros(field, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, random_scalar(rng, field));
        }
    }
    m
}

/// A box with corners in `[-2, 2]` and at most `max_side` points per axis.
pub fn random_box<R: Rng + ?Sized>(rng: &mut R, n: usize, max_side: i64) -> GridBox {
    let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
    let b = a.iter().map(|&ai| ai + rng.gen_range(0..max_side.max(1))).collect();
    GridBox::new(a, b).expect("b ≥ a")
}

fn random_box_point<R: Rng + ?Sized>(rng: &mut R, bx: &GridBox) -> Vec<i64> {
    (0..bx.dim()).map(|i| rng.gen_range(bx.a[i]..=bx.b[i])).collect()
}

/// A random commutative module on `bx` with between 1 and `max_gens`
/// generators, hence pointwise dimension at most `max_gens`, and at most
/// `max_rels` relations.
pub fn random_module<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    bx: &GridBox,
    max_gens: usize,
    max_rels: usize,
) -> GridModule {
    let gens: Vec<Vec<i64>> =
        (0..rng.gen_range(1..=max_gens.max(1))).map(|_| random_box_point(rng, bx)).collect();
    let mut rels: Vec<(Vec<i64>, Vec<Scalar>)> = Vec::new();
    for _ in 0..rng.gen_range(0..=max_rels) {
        // Above some generator, so the relation is not empty.
        let g = &gens[rng.gen_range(0..gens.len())];
        let at: Vec<i64> =
            random_box_point(rng, bx).iter().zip(g).map(|(x, y)| *x.max(y)).collect();
        let coeffs = gens
            .iter()
            .map(|g| {
                if leq(g, &at) { random_scalar(rng, field) } else { field.zero() }
            })
            .collect();
        rels.push((at, coeffs));
    }
    sub_quotient(field, bx, &gens, &rels)
}

fn leq(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// `c ↦ F^{generators ≤ c} / span(relations ≤ c)` on the box.
pub fn sub_quotient(
    field: FieldSpec,
    bx: &GridBox,
    gens: &[Vec<i64>],
    rels: &[(Vec<i64>, Vec<Scalar>)],
) -> GridModule {
    let points = bx.int_points();
    // Per point: generator indices, quotient map Q_c and a section L_c.
    let data: Vec<(Vec<usize>, Matrix, Matrix)> = points
        .iter()
        .map(|c| {
            let gi: Vec<usize> = (0..gens.len()).filter(|&i| leq(&gens[i], c)).collect();
            let active: Vec<&Vec<Scalar>> =
                rels.iter().filter(|(at, _)| leq(at, c)).map(|(_, v)| v).collect();
            let mut r = Matrix::zeros(field, gi.len(), active.len());
            for (j, v) in active.iter().enumerate() {
                for (k, &g) in gi.iter().enumerate() {
                    r.set(k, j, v[g].clone());
                }
            }
            let q = r.cokernel_projection();
            let l = q
                .solve(&Matrix::identity(field, q.rows()))
                .expect("shapes agree")
                .expect("a projection of full row rank has a section");
            (gi, q, l)
        })
        .collect();
    GridModule::from_fn(
        field,
        bx.clone(),
        |c| data[bx.index_of(c).expect("box point")].1.rows(),
        |c, axis| {
            let mut d = c.to_vec();
            d[axis] += 1;
            let (gc, _, lc) = &data[bx.index_of(c).expect("box point")];
            let (gd, qd, _) = &data[bx.index_of(&d).expect("box point")];
            let mut incl = Matrix::zeros(field, gd.len(), gc.len());
            for (k, g) in gc.iter().enumerate() {
                let row = gd.iter().position(|h| h == g).expect("generators persist");
                incl.set(row, k, field.one());
            }
            &(qd * &incl) * lc
        },
    )
    .expect("sub-quotient data has consistent shapes")
}

/// A point with coordinates in `{−∞} ∪ [aᵢ−1, bᵢ+1]`.
pub fn random_ext_point<R: Rng + ?Sized>(rng: &mut R, bx: &GridBox) -> ExtPoint {
    ExtPoint::new(
        (0..bx.dim())
            .map(|i| {
                let choices: Vec<ExtCoord> = std::iter::once(ExtCoord::NegInf)
                    .chain((bx.a[i] - 1..=bx.b[i] + 1).map(ExtCoord::Int))
                    .collect();
                *choices.choose(rng).expect("non-empty")
            })
            .collect(),
    )
}

/// Between 1 and `max_len` random extended points.
pub fn random_set<R: Rng + ?Sized>(rng: &mut R, bx: &GridBox, max_len: usize) -> PointSet {
    let k = rng.gen_range(1..=max_len.max(1));
    PointSet::from_points(bx.dim(), (0..k).map(|_| random_ext_point(rng, bx)))
        .expect("same dimension")
}

/// The join closure of a random set.
pub fn random_join_closed<R: Rng + ?Sized>(rng: &mut R, bx: &GridBox, max_gens: usize) -> PointSet {
    hat_closure(&random_set(rng, bx, max_gens))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn random_modules_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for field in [FieldSpec::prime(2).unwrap(), FieldSpec::prime(5).unwrap(), FieldSpec::Rational] {
            for n in 1..=3 {
                for _ in 0..20 {
                    let bx = random_box(&mut rng, n, 3);
                    let m = random_module(&mut rng, field, &bx, 3, 3);
                    assert_eq!(m.validate(), Ok(()));
                    assert!(m.dims().iter().all(|&d| d <= 3));
                }
            }
        }
    }

    #[test]
    fn free_module_dims_count_generators() {
        let f = FieldSpec::prime(3).unwrap();
        let bx = GridBox::new(vec![0, 0], vec![2, 2]).unwrap();
        let m = sub_quotient(f, &bx, &[vec![0, 0], vec![1, 1]], &[]);
        assert_eq!(m.dim_at(&[0, 2]), 1);
        assert_eq!(m.dim_at(&[2, 2]), 2);
        let killed = sub_quotient(f, &bx, &[vec![0, 0]], &[(vec![1, 0], vec![f.one()])]);
        assert_eq!(killed.dim_at(&[0, 2]), 1);
        assert_eq!(killed.dim_at(&[1, 0]), 0);
        assert_eq!(killed.validate(), Ok(()));
    }

    #[test]
    fn join_closed_sets_are_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let bx = GridBox::new(vec![0, 0], vec![2, 2]).unwrap();
        for _ in 0..50 {
            let l = random_join_closed(&mut rng, &bx, 3);
            assert_eq!(hat_closure(&l), l);
        }
    }
}
