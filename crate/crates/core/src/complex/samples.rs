//! Seeded complex samples for the Quillen-type checks.

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::{ChainComplex, ChainMap, ComplexSes};
use crate::cotorsion::{ClassSpec, Universe};
use crate::error::{Error, Result};
use crate::gen::{random_extension, random_morphism, rng, Rng};
use crate::module::{FPModule, ShortExactSequence};

/// `Sⁿ(M)` and `Dⁿ(M)` for every module and degree given.
pub fn spheres_and_discs(modules: &[FPModule], degrees: &[i64]) -> Vec<ChainComplex> {
    let mut out = Vec::new();
    for &n in degrees {
        for m in modules {
            out.push(ChainComplex::sphere(n, m));
            out.push(ChainComplex::disc(n, m));
        }
    }
    out
}

fn pick(rng: &mut Rng, pool: &[FPModule]) -> Result<FPModule> {
    pool.choose(rng)
        .cloned()
        .ok_or_else(|| Error::InvalidArgument("empty module pool".into()))
}

/// An exact complex `X⁰ → … → X^{len−1}` in degrees `0..len` spliced from
/// random extensions `0 → Zᵏ → Xᵏ → Zᵏ⁺¹ → 0` with every cycle module drawn
/// from `pool`.
pub fn spliced_exact(rng: &mut Rng, pool: &[FPModule], len: usize) -> Result<ChainComplex> {
    if !(2..=4).contains(&len) {
        return Err(Error::InvalidArgument(format!("spliced length {len} outside 2..=4")));
    }
    let zs = (0..len - 1).map(|_| pick(rng, pool)).collect::<Result<Vec<_>>>()?;
    if len == 2 {
        return Ok(ChainComplex::disc(0, &zs[0]));
    }
    let ses: Vec<ShortExactSequence> = (1..len - 1)
        .map(|k| random_extension(rng, &zs[k], &zs[k - 1]))
        .collect::<Result<_>>()?;
    let mut maps = vec![ses[0].inj().clone()];
    for w in ses.windows(2) {
        maps.push(w[0].surj().then(w[1].inj())?);
    }
    maps.push(ses.last().unwrap().surj().clone());
    ChainComplex::from_maps(0, maps)
}

/// A complex of length `len ≤ 3` in degrees `0..len` with entries from
/// `pool` and random differentials; the second one factors through the
/// cokernel of the first.
pub fn random_entrywise(rng: &mut Rng, pool: &[FPModule], len: usize) -> Result<ChainComplex> {
    if !(1..=3).contains(&len) {
        return Err(Error::InvalidArgument(format!("entrywise length {len} outside 1..=3")));
    }
    let ms = (0..len).map(|_| pick(rng, pool)).collect::<Result<Vec<_>>>()?;
    if len == 1 {
        return Ok(ChainComplex::sphere(0, &ms[0]));
    }
    let d0 = random_morphism(rng, &ms[0], &ms[1])?;
    let mut maps = vec![d0.clone()];
    if len == 3 {
        let (c, proj) = d0.cokernel();
        let g = random_morphism(rng, &c, &ms[2])?;
        maps.push(proj.then(&g)?);
    }
    ChainComplex::from_maps(0, maps)
}

/// `0 → Sⁿ(A) → Sⁿ(B) → Sⁿ(C) → 0` for each module sequence.
pub fn sphere_extensions(seqs: &[ShortExactSequence], n: i64) -> Result<Vec<ComplexSes>> {
    seqs.iter()
        .map(|s| {
            ComplexSes::new(
                ChainMap::on_spheres(n, s.inj()),
                ChainMap::on_spheres(n, s.surj()),
            )
        })
        .collect()
}

/// `0 → Dⁿ(A) → Dⁿ(B) → Dⁿ(C) → 0` for each module sequence.
pub fn disc_extensions(seqs: &[ShortExactSequence], n: i64) -> Result<Vec<ComplexSes>> {
    seqs.iter()
        .map(|s| {
            ComplexSes::new(ChainMap::on_discs(n, s.inj()), ChainMap::on_discs(n, s.surj()))
        })
        .collect()
}

/// A reproducible bundle of finitely supported complexes.
#[derive(Clone, Debug)]
pub struct SampleSet {
    /// Spheres and discs on universe modules.
    pub elementary: Vec<ChainComplex>,
    /// Exact complexes with every cycle in `𝒟`.
    pub tilde: Vec<ChainComplex>,
    /// Exact complexes with arbitrary cycles.
    pub exact: Vec<ChainComplex>,
    /// Random complexes with entries in `𝒟`.
    pub entrywise: Vec<ChainComplex>,
}

impl SampleSet {
    pub fn all(&self) -> Vec<ChainComplex> {
        let mut v = self.elementary.clone();
        v.extend(self.tilde.iter().cloned());
        v.extend(self.exact.iter().cloned());
        v.extend(self.entrywise.iter().cloned());
        v
    }

    pub fn len(&self) -> usize {
        self.elementary.len() + self.tilde.len() + self.exact.len() + self.entrywise.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Spheres and discs in degrees 0 and 1 on every module of `u`, plus
/// `random` spliced exact complexes with cycles in `𝒟`, `random` with
/// arbitrary cycles and `random` entrywise-`𝒟` complexes.
pub fn sample_set(u: &Universe, d: &ClassSpec, seed: u64, random: usize) -> Result<SampleSet> {
    let mut g = rng(seed);
    let ds = d.members(u)?;
    let elementary = spheres_and_discs(u.modules(), &[0, 1]);
    let mut tilde = Vec::with_capacity(random);
    let mut exact = Vec::with_capacity(random);
    let mut entrywise = Vec::with_capacity(random);
    for _ in 0..random {
        let len = g.gen_range(2..=4);
        tilde.push(spliced_exact(&mut g, &ds, len)?);
        let len = g.gen_range(2..=4);
        exact.push(spliced_exact(&mut g, u.modules(), len)?);
        let len = g.gen_range(1..=3);
        entrywise.push(random_entrywise(&mut g, &ds, len)?);
    }
    Ok(SampleSet {
        elementary,
        tilde,
        exact,
        entrywise,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    #[test]
    fn samples_are_deterministic_and_valid() {
        let r = Ring::new(4).unwrap();
        let u = Universe::enumerate(r, 2);
        let a = sample_set(&u, &ClassSpec::Flat, 3, 10).unwrap();
        let b = sample_set(&u, &ClassSpec::Flat, 3, 10).unwrap();
        let da: Vec<String> = a.all().iter().map(ChainComplex::describe).collect();
        let db: Vec<String> = b.all().iter().map(ChainComplex::describe).collect();
        assert_eq!(da, db);
        assert!(a.tilde.iter().all(ChainComplex::is_exact));
        assert!(a.exact.iter().all(ChainComplex::is_exact));
        assert_eq!(a.len(), 24 + 30);
    }
}
