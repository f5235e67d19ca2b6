//! Seeded random values for property checks.

use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bifunctor::{ExtGroup, HomModule};
use crate::error::{Error, Result};
use crate::module::{realize_extension, FPModule, Morphism, ShortExactSequence};
use crate::ring::{Matrix, Ring};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Divisors `d > 1` of the modulus.
pub fn nontrivial_divisors(ring: Ring) -> Vec<u64> {
    ring.divisors().into_iter().filter(|&d| d > 1).collect()
}

/// A uniformly random element in normal coordinates, as generator
/// coordinates.
pub fn random_element(rng: &mut Rng, m: &FPModule) -> Vec<u64> {
    let y: Vec<u64> = m.invariants().iter().map(|&e| rng.gen_range(0..e)).collect();
    m.from_canonical(&y)
}

/// `⊕ Z/dᵢ` with up to `max_factors` random divisors, in normal form.
pub fn random_module(rng: &mut Rng, ring: Ring, max_factors: usize) -> FPModule {
    let divs = nontrivial_divisors(ring);
    let k = rng.gen_range(0..=max_factors);
    let ds: Vec<u64> = (0..k).map(|_| *divs.choose(rng).unwrap()).collect();
    FPModule::from_invariants(ring, &ds)
        .expect("divisors of n")
        .normalized()
        .0
}

/// A module on `gens` generators with `rels` uniformly random relations.
pub fn random_presented_module(rng: &mut Rng, ring: Ring, gens: usize, rels: usize) -> FPModule {
    let n = ring.modulus();
    let entries = (0..gens * rels).map(|_| rng.gen_range(0..n)).collect();
    FPModule::new(Matrix::from_vec(ring, rels, gens, entries).expect("sized"))
}

/// A uniformly random morphism `a → b`.
pub fn random_morphism(rng: &mut Rng, a: &FPModule, b: &FPModule) -> Result<Morphism> {
    let hom = HomModule::new(a, b)?;
    Ok(hom.to_morphism(&random_element(rng, hom.module())))
}

/// The extension of `d` by `x` for a uniformly random Ext¹ class.
pub fn random_extension(rng: &mut Rng, d: &FPModule, x: &FPModule) -> Result<ShortExactSequence> {
    let ext = ExtGroup::new(d, x)?;
    let h = random_element(rng, ext.module());
    realize_extension(d, x, &ext.representative(&h))
}

/// A random extension whose ends are drawn from the given lists.
pub fn random_extension_from(
    rng: &mut Rng,
    rights: &[FPModule],
    lefts: &[FPModule],
) -> Result<ShortExactSequence> {
    let d = rights
        .choose(rng)
        .ok_or_else(|| Error::InvalidArgument("empty class for the cokernel".into()))?
        .clone();
    let x = lefts
        .choose(rng)
        .ok_or_else(|| Error::InvalidArgument("empty class for the kernel".into()))?
        .clone();
    random_extension(rng, &d, &x)
}
