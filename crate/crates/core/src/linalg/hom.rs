//! Morphisms between diagrams on the same finite poset, and a search for an
//! isomorphism among them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::diagram::PosetDiagram;
use super::field::{FieldSpec, Scalar};
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Exhaustive enumeration is used while `|F|^dim Hom` stays below this.
const EXHAUSTIVE_LIMIT: u64 = 4096;
const RANDOM_TRIALS: usize = 256;
const SEED: u64 = 0x5eed_d37e;

/// A natural transformation `φ: A → B`, one matrix per point.
pub type Morphism = Vec<Matrix>;

fn same_shape(a: &PosetDiagram, b: &PosetDiagram) -> Result<()> {
    if a.points() != b.points() {
        return Err(Error::Input("diagrams live on different posets".into()));
    }
    if a.field() != b.field() {
        return Err(Error::Input("diagrams are over different fields".into()));
    }
    Ok(())
}

/// A basis of `Hom(A, B)`: solutions of `φ_d A(c⋖d) = B(c⋖d) φ_c`.
pub fn hom_basis(a: &PosetDiagram, b: &PosetDiagram) -> Result<Vec<Morphism>> {
    same_shape(a, b)?;
    let f = a.field();
    let n = a.len();
    let mut off = Vec::with_capacity(n);
    let mut unknowns = 0;
    for p in 0..n {
        off.push(unknowns);
        unknowns += a.dims()[p] * b.dims()[p];
    }
    // φ_p is dims_b[p] × dims_a[p], stored row-major at off[p].
    let var = |p: usize, r: usize, c: usize| off[p] + r * a.dims()[p] + c;

    let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for (ca, da, ma) in a.cover_maps() {
        let i = a.index_of(ca).expect("own point");
        let j = a.index_of(da).expect("own point");
        let mb = b.cover_map(ca, da).expect("same poset has same covers");
        for r in 0..b.dims()[j] {
            for c in 0..a.dims()[i] {
                let mut eq = Vec::new();
                for k in 0..a.dims()[j] {
                    let v = ma.get(k, c);
                    if !v.is_zero() {
                        eq.push((var(j, r, k), v.clone()));
                    }
                }
                for k in 0..b.dims()[i] {
                    let v = mb.get(r, k);
                    if !v.is_zero() {
                        eq.push((var(i, k, c), f.neg(v)));
                    }
                }
                if !eq.is_empty() {
                    rows.push(eq);
                }
            }
        }
    }
    let mut system = Matrix::zeros(f, rows.len(), unknowns);
    for (r, eq) in rows.into_iter().enumerate() {
        for (c, v) in eq {
            let cur = system.get(r, c).clone();
            system.set(r, c, f.add(&cur, &v));
        }
    }
    let kernel = system.kernel_basis();
    Ok((0..kernel.cols())
        .map(|k| {
            (0..n)
                .map(|p| {
                    let mut m = Matrix::zeros(f, b.dims()[p], a.dims()[p]);
                    for r in 0..b.dims()[p] {
                        for c in 0..a.dims()[p] {
                            m.set(r, c, kernel.get(var(p, r, c), k).clone());
                        }
                    }
                    m
                })
                .collect()
        })
        .collect())
}

fn combine(f: FieldSpec, basis: &[Morphism], coeffs: &[Scalar]) -> Morphism {
    let n = basis[0].len();
    (0..n)
        .map(|p| {
            let mut acc = Matrix::zeros(f, basis[0][p].rows(), basis[0][p].cols());
            for (h, c) in basis.iter().zip(coeffs) {
                if !c.is_zero() {
                    acc = acc.add(&h[p].scale(c)).expect("same shapes");
                }
            }
            acc
        })
        .collect()
}

fn invertible(m: &Morphism) -> bool {
    m.iter().all(Matrix::is_invertible)
}

/// Searches `Hom(A, B)` for an isomorphism.
///
/// Over a small prime field the whole of `Hom(A, B)` is enumerated when it
/// has at most 4096 elements, so `None` is exact there. Otherwise a fixed-seed
/// random sample of 256 elements is tried; isomorphisms form a Zariski-open
/// subset, so a miss is overwhelmingly unlikely when one exists.
pub fn find_isomorphism(a: &PosetDiagram, b: &PosetDiagram) -> Result<Option<Morphism>> {
    same_shape(a, b)?;
    if a.dims() != b.dims() {
        return Ok(None);
    }
    let f = a.field();
    let basis = hom_basis(a, b)?;
    if basis.is_empty() {
        return Ok((a.total_dim() == 0).then(|| {
            a.dims().iter().map(|&d| Matrix::zeros(f, d, d)).collect()
        }));
    }
    // The most common case: one basis element is already invertible.
    if let Some(h) = basis.iter().find(|h| invertible(h)) {
        return Ok(Some(h.clone()));
    }
    let k = basis.len() as u32;
    match f.order() {
        Some(p) if p.checked_pow(k).is_some_and(|t| t <= EXHAUSTIVE_LIMIT) => {
            let total = p.pow(k);
            for code in 1..total {
                let mut rest = code;
                let coeffs: Vec<Scalar> = (0..k)
                    .map(|_| {
                        let c = rest % p;
                        rest /= p;
                        Scalar::Mod(c)
                    })
                    .collect();
                let m = combine(f, &basis, &coeffs);
                if invertible(&m) {
                    return Ok(Some(m));
                }
            }
            Ok(None)
        }
        order => {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            for _ in 0..RANDOM_TRIALS {
                let coeffs: Vec<Scalar> = (0..k)
                    .map(|_| match order {
                        Some(p) => Scalar::Mod(rng.gen_range(0..p)),
                        None => f.from_i64(rng.gen_range(-16..=16)),
                    })
                    .collect();
                let m = combine(f, &basis, &coeffs);
                if invertible(&m) {
                    return Ok(Some(m));
                }
            }
            Ok(None)
        }
    }
}

/// Checks that `φ` is a natural transformation `A → B`.
pub fn is_natural(a: &PosetDiagram, b: &PosetDiagram, phi: &Morphism) -> Result<bool> {
    same_shape(a, b)?;
    for (c, d, ma) in a.cover_maps() {
        let i = a.index_of(c).expect("own point");
        let j = a.index_of(d).expect("own point");
        let mb = b.cover_map(c, d).expect("same covers");
        if &phi[j] * ma != mb * &phi[i] {
            return Ok(false);
        }
    }
    Ok(true)
}
