//! Fixtures shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use detmod_core::extgrid::{ExtCoord, GridBox, PointSet};
use detmod_core::random::random_module;
use detmod_core::{FieldSpec, GridModule};

/// A reproducible random module on the cube `[0, side-1]ⁿ`.
pub fn module(n: usize, side: i64, gens: usize, rels: usize, seed: u64) -> GridModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bx = GridBox::new(vec![0; n], vec![side - 1; n]).expect("side ≥ 1");
    random_module(&mut rng, FieldSpec::prime(5).expect("prime"), &bx, gens, rels)
}

/// `{−∞} ∪ [aᵢ+1, bᵢ]` on every axis.
pub fn default_set(bx: &GridBox) -> PointSet {
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
