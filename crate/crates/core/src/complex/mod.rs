//! Finitely supported cochain complexes `… → Aⁿ → Aⁿ⁺¹ → …` over Z/n.
//!
//! Differentials raise degree. Every constructed complex satisfies
//! `dⁿ⁺¹ ∘ dⁿ = 0` and is zero outside its support.

mod classify;
mod maps;
mod samples;
mod total;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::module::{homology, FPModule, Morphism};
use crate::ring::{Matrix, Ring};

pub use classify::{classify, tilde_criterion_check, ComplexClassification, TildeCriterion};
pub use maps::{chain_maps, null_homotopy, ChainMap, ComplexSes};
pub use samples::{
    disc_extensions, random_entrywise, sample_set, sphere_extensions, spheres_and_discs,
    spliced_exact, SampleSet,
};
pub use total::{lift_functor, lift_functor_map, total_complex, MultiComplex, TotalFlavor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Elementary {
    Sphere,
    Disc,
}

/// Cycles, boundaries and homology at one degree.
#[derive(Clone, Debug)]
pub struct DegreeHomology {
    pub cycles: FPModule,
    pub boundaries: FPModule,
    pub homology: FPModule,
}

#[derive(Clone)]
pub struct ChainComplex {
    ring: Ring,
    lo: i64,
    modules: Vec<FPModule>,
    /// `diffs[i]: modules[i] → modules[i + 1]`.
    diffs: Vec<Morphism>,
}

impl ChainComplex {
    pub fn new(ring: Ring, lo: i64, modules: Vec<FPModule>, diffs: Vec<Morphism>) -> Result<Self> {
        if diffs.len() + 1 != modules.len().max(1) {
            return Err(Error::Shape(format!(
                "{} modules need {} differentials, got {}",
                modules.len(),
                modules.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for m in &modules {
            if m.ring() != ring {
                return Err(Error::ring_mismatch(ring, m.ring()));
            }
        }
        for (i, d) in diffs.iter().enumerate() {
            if !d.source().same(&modules[i]) || !d.target().same(&modules[i + 1]) {
                return Err(Error::Shape(format!(
                    "differential in degree {} does not connect its modules",
                    lo + i as i64
                )));
            }
        }
        for (i, w) in diffs.windows(2).enumerate() {
            if !w[0].then(&w[1])?.is_zero() {
                return Err(Error::NotAComplex(format!(
                    "d∘d ≠ 0 at degree {}",
                    lo + i as i64
                )));
            }
        }
        Ok(ChainComplex {
            ring,
            lo,
            modules,
            diffs,
        })
    }

    /// `A⁰ → A¹ → …` from consecutive maps, the first in degree `lo`.
    pub fn from_maps(lo: i64, maps: Vec<Morphism>) -> Result<Self> {
        let first = maps
            .first()
            .ok_or_else(|| Error::InvalidArgument("no maps given".into()))?;
        let ring = first.source().ring();
        let mut modules: Vec<FPModule> = maps.iter().map(|f| f.source().clone()).collect();
        modules.push(maps.last().unwrap().target().clone());
        ChainComplex::new(ring, lo, modules, maps)
    }

    pub fn zero(ring: Ring) -> Self {
        ChainComplex {
            ring,
            lo: 0,
            modules: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// `Sⁿ(A)`: `A` in degree `n`.
    pub fn sphere(n: i64, a: &FPModule) -> Self {
        ChainComplex {
            ring: a.ring(),
            lo: n,
            modules: vec![a.clone()],
            diffs: Vec::new(),
        }
    }

    /// `Dⁿ(A)`: `A → A` in degrees `n`, `n + 1` with identity differential.
    pub fn disc(n: i64, a: &FPModule) -> Self {
        ChainComplex {
            ring: a.ring(),
            lo: n,
            modules: vec![a.clone(), a.clone()],
            diffs: vec![Morphism::identity(a)],
        }
    }

    pub fn elementary(kind: Elementary, n: i64, a: &FPModule) -> Self {
        match kind {
            Elementary::Sphere => ChainComplex::sphere(n, a),
            Elementary::Disc => ChainComplex::disc(n, a),
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Last stored degree; `lo - 1` for the empty complex.
    pub fn hi(&self) -> i64 {
        self.lo + self.modules.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.modules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modules.is_empty()
    }

    pub fn modules(&self) -> &[FPModule] {
        &self.modules
    }

    pub fn differentials(&self) -> &[Morphism] {
        &self.diffs
    }

    fn slot(&self, n: i64) -> Option<usize> {
        (n >= self.lo && n <= self.hi()).then(|| (n - self.lo) as usize)
    }

    /// `Aⁿ`, zero outside the support.
    pub fn module(&self, n: i64) -> FPModule {
        match self.slot(n) {
            Some(i) => self.modules[i].clone(),
            None => FPModule::zero(self.ring),
        }
    }

    /// `dⁿ: Aⁿ → Aⁿ⁺¹`, zero outside the support.
    pub fn differential(&self, n: i64) -> Morphism {
        match self.slot(n) {
            Some(i) if i < self.diffs.len() => self.diffs[i].clone(),
            _ => Morphism::zero(&self.module(n), &self.module(n + 1)),
        }
    }

    /// The same complex stored over `[lo, hi]`, padding with zero modules.
    pub fn padded(&self, lo: i64, hi: i64) -> Result<Self> {
        if !self.is_empty() && (lo > self.lo || hi < self.hi()) {
            return Err(Error::InvalidArgument(format!(
                "[{lo}, {hi}] does not cover the support [{}, {}]",
                self.lo,
                self.hi()
            )));
        }
        let modules: Vec<FPModule> = (lo..=hi).map(|n| self.module(n)).collect();
        let diffs: Vec<Morphism> = (lo..hi).map(|n| self.differential(n)).collect();
        Ok(ChainComplex {
            ring: self.ring,
            lo,
            modules,
            diffs,
        })
    }

    /// `A[k]` with `A[k]ⁿ = Aⁿ⁺ᵏ` and differential `(−1)ᵏ d`.
    pub fn shift(&self, k: i64) -> Self {
        let sign = if k.rem_euclid(2) == 0 { 1 } else { self.ring.neg(1) };
        ChainComplex {
            ring: self.ring,
            lo: self.lo - k,
            modules: self.modules.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(sign)).collect(),
        }
    }

    /// Degreewise direct sum.
    pub fn direct_sum(&self, other: &ChainComplex) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::ring_mismatch(self.ring, other.ring));
        }
        if self.is_empty() {
            return Ok(other.clone());
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let modules: Vec<FPModule> = (lo..=hi)
            .map(|n| self.module(n).oplus(&other.module(n)))
            .collect::<Result<_>>()?;
        let diffs = (lo..hi)
            .map(|n| {
                let (a, b) = (self.differential(n), other.differential(n));
                let m = Matrix::block_diag(&[a.matrix(), b.matrix()], self.ring);
                let i = (n - lo) as usize;
                Morphism::new(modules[i].clone(), modules[i + 1].clone(), m)
            })
            .collect::<Result<_>>()?;
        ChainComplex::new(self.ring, lo, modules, diffs)
    }

    /// `Zⁿ = ker dⁿ`, `Bⁿ = im dⁿ⁻¹` and `Hⁿ = Zⁿ / Bⁿ`.
    pub fn homology_at(&self, n: i64) -> DegreeHomology {
        let (inc, out) = (self.differential(n - 1), self.differential(n));
        let h = homology(&inc, &out).expect("complexes compose to zero");
        DegreeHomology {
            cycles: out.kernel().0,
            boundaries: inc.image().0,
            homology: h.module,
        }
    }

    pub fn is_exact_at(&self, n: i64) -> bool {
        self.homology_at(n).homology.is_zero()
    }

    pub fn is_exact(&self) -> bool {
        (self.lo..=self.hi()).all(|n| self.is_exact_at(n))
    }

    /// `Aⁿ / Bⁿ`, the cokernel of `dⁿ⁻¹`.
    pub fn cokernel_at(&self, n: i64) -> FPModule {
        self.differential(n - 1).cokernel().0
    }

    /// Short description like `[Z/4 -> Z/4]@0`.
    pub fn describe(&self) -> String {
        if self.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self.modules.iter().map(FPModule::describe).collect();
        format!("[{}]@{}", parts.join(" -> "), self.lo)
    }
}

impl fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainComplex(Z/{}, {})", self.ring.modulus(), self.describe())
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    ring: u64,
    lo: i64,
    modules: Vec<FPModule>,
    differentials: Vec<Matrix>,
}

impl Serialize for ChainComplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexRepr {
            ring: self.ring.modulus(),
            lo: self.lo,
            modules: self.modules.clone(),
            differentials: self.diffs.iter().map(|d| d.matrix().clone()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChainComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = ComplexRepr::deserialize(d)?;
        let ring = Ring::new(r.ring).map_err(D::Error::custom)?;
        if r.differentials.len() + 1 != r.modules.len().max(1) {
            return Err(D::Error::custom("differential count does not match the modules"));
        }
        let diffs = r
            .differentials
            .into_iter()
            .enumerate()
            .map(|(i, m)| Morphism::new(r.modules[i].clone(), r.modules[i + 1].clone(), m))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        ChainComplex::new(ring, r.lo, r.modules, diffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> Ring {
        Ring::new(n).unwrap()
    }

    pub(crate) fn doubling_z4() -> ChainComplex {
        let r = z(4);
        let m = FPModule::free(r, 1);
        ChainComplex::from_maps(0, vec![Morphism::scalar(&m, 2)]).unwrap()
    }

    #[test]
    fn spheres_and_discs() {
        let r = z(4);
        let z2 = FPModule::cyclic(r, 2).unwrap();
        let s = ChainComplex::sphere(0, &z2);
        assert_eq!(s.len(), 1);
        assert_eq!(s.homology_at(0).homology.invariants(), &[2]);
        let d = ChainComplex::disc(3, &FPModule::free(r, 1));
        assert!(d.is_exact());
        assert!((0..6).all(|n| d.homology_at(n).homology.is_zero()));
        let zero = ChainComplex::sphere(5, &FPModule::zero(r));
        assert!(zero.is_exact());
    }

    #[test]
    fn doubling_complex_homology() {
        let c = doubling_z4();
        assert_eq!(c.homology_at(0).homology.invariants(), &[2]);
        assert_eq!(c.homology_at(1).homology.invariants(), &[2]);
        assert_eq!(c.homology_at(0).cycles.invariants(), &[2]);
        assert_eq!(c.homology_at(1).boundaries.invariants(), &[2]);
        assert!(!c.is_exact());
    }

    #[test]
    fn non_complexes_are_rejected() {
        let r = z(4);
        let m = FPModule::free(r, 1);
        let one = Morphism::identity(&m);
        assert!(matches!(
            ChainComplex::from_maps(0, vec![one.clone(), one]),
            Err(Error::NotAComplex(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let c = doubling_z4();
        let s = serde_json::to_string(&c).unwrap();
        let back: ChainComplex = serde_json::from_str(&s).unwrap();
        assert_eq!(back.describe(), c.describe());
        let bad = r#"{"ring":4,"lo":0,"modules":[{"ring":4,"invariants":[4]},{"ring":4,"invariants":[4]},{"ring":4,"invariants":[4]}],"differentials":[{"ring":4,"rows":1,"cols":1,"entries":[1]},{"ring":4,"rows":1,"cols":1,"entries":[1]}]}"#;
        assert!(serde_json::from_str::<ChainComplex>(bad).is_err());
    }

    #[test]
    fn padding_and_sums() {
        let c = doubling_z4();
        let p = c.padded(-1, 2).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.padded(0, 0).is_err());
        let d = ChainComplex::disc(1, &FPModule::free(z(4), 1));
        let s = c.direct_sum(&d).unwrap();
        assert_eq!((s.lo(), s.hi()), (0, 2));
        assert_eq!(s.homology_at(1).homology.invariants(), &[2]);
        assert_eq!(c.shift(1).lo(), -1);
    }
}
