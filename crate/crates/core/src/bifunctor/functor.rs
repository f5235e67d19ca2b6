use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::hom::hom_map;
use super::tensor::{tensor_all, tensor_map_all};
use crate::error::{Error, Result};
use crate::module::{FPModule, Morphism};
use crate::ring::{Matrix, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Covariant,
    Contravariant,
}

/// An additive functor `𝒜₁ × … × 𝒜ₙ → 𝒜₀`, each `𝒜ᵢ` finitely presented
/// modules over `slot_ring(i)`, contravariant in some slots.
///
/// `apply` must be deterministic: equal inputs give modules with equal
/// presentations, so outputs compose with [`FPModule::same`].
pub trait MultiFunctor: fmt::Debug + Send + Sync {
    fn name(&self) -> String;
    fn arity(&self) -> usize;
    fn variance(&self, slot: usize) -> Variance;
    fn slot_ring(&self, slot: usize) -> Ring;
    fn target_ring(&self) -> Ring;
    fn apply(&self, objs: &[FPModule]) -> Result<FPModule>;
    /// `F(X) → F(Y)`, where `maps[i]: Xᵢ → Yᵢ` in a covariant slot and
    /// `maps[i]: Yᵢ → Xᵢ` in a contravariant one.
    fn apply_morphism(&self, maps: &[Morphism]) -> Result<Morphism>;
}

pub type FunctorRef = Arc<dyn MultiFunctor>;

/// Checks arity and slot rings of an argument list.
pub fn check_objects(f: &dyn MultiFunctor, objs: &[FPModule]) -> Result<()> {
    if objs.len() != f.arity() {
        return Err(Error::InvalidArgument(format!(
            "{} takes {} arguments, got {}",
            f.name(),
            f.arity(),
            objs.len()
        )));
    }
    for (i, o) in objs.iter().enumerate() {
        if o.ring() != f.slot_ring(i) {
            return Err(Error::ring_mismatch(f.slot_ring(i), o.ring()));
        }
    }
    Ok(())
}

fn check_maps(f: &dyn MultiFunctor, maps: &[Morphism]) -> Result<()> {
    let sources: Vec<FPModule> = maps.iter().map(|m| m.source().clone()).collect();
    check_objects(f, &sources)
}

/// The domain objects of `apply_morphism(maps)`.
pub fn morphism_domain(f: &dyn MultiFunctor, maps: &[Morphism]) -> Vec<FPModule> {
    maps.iter()
        .enumerate()
        .map(|(i, m)| match f.variance(i) {
            Variance::Covariant => m.source().clone(),
            Variance::Contravariant => m.target().clone(),
        })
        .collect()
}

/// Identity morphisms on `objs`, valid input to `apply_morphism`.
pub fn identities(objs: &[FPModule]) -> Vec<Morphism> {
    objs.iter().map(Morphism::identity).collect()
}

/// `a₁ ⊗ … ⊗ aₙ`.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub ring: Ring,
    pub arity: usize,
}

impl MultiFunctor for Tensor {
    fn name(&self) -> String {
        format!("tensor{}", self.arity)
    }

    fn arity(&self) -> usize {
        self.arity
    }

    fn variance(&self, _: usize) -> Variance {
        Variance::Covariant
    }

    fn slot_ring(&self, _: usize) -> Ring {
        self.ring
    }

    fn target_ring(&self) -> Ring {
        self.ring
    }

    fn apply(&self, objs: &[FPModule]) -> Result<FPModule> {
        check_objects(self, objs)?;
        let refs: Vec<&FPModule> = objs.iter().collect();
        tensor_all(&refs)
    }

    fn apply_morphism(&self, maps: &[Morphism]) -> Result<Morphism> {
        check_maps(self, maps)?;
        let refs: Vec<&Morphism> = maps.iter().collect();
        tensor_map_all(&refs)
    }
}

/// `Hom(a₁ ⊗ … ⊗ aₖ, a₀)` with slots `(a₁, …, aₖ, a₀)`: the right adjoint
/// of an `(k+1)`-fold tensor. With `k = 0` the source is the free module of
/// rank one.
#[derive(Clone, Debug)]
pub struct TensorHom {
    pub ring: Ring,
    /// Number of contravariant slots.
    pub contra: usize,
}

impl TensorHom {
    /// Internal Hom, `(a, b) ↦ Hom(a, b)`.
    pub fn hom(ring: Ring) -> TensorHom {
        TensorHom { ring, contra: 1 }
    }

    pub(crate) fn source_of(&self, objs: &[FPModule]) -> Result<FPModule> {
        if objs.is_empty() {
            return Ok(FPModule::free(self.ring, 1));
        }
        let refs: Vec<&FPModule> = objs.iter().collect();
        tensor_all(&refs)
    }
}

impl MultiFunctor for TensorHom {
    fn name(&self) -> String {
        if self.contra == 1 {
            "hom".into()
        } else {
            format!("tensor_hom{}", self.contra)
        }
    }

    fn arity(&self) -> usize {
        self.contra + 1
    }

    fn variance(&self, slot: usize) -> Variance {
        if slot < self.contra {
            Variance::Contravariant
        } else {
            Variance::Covariant
        }
    }

    fn slot_ring(&self, _: usize) -> Ring {
        self.ring
    }

    fn target_ring(&self) -> Ring {
        self.ring
    }

    fn apply(&self, objs: &[FPModule]) -> Result<FPModule> {
        check_objects(self, objs)?;
        let src = self.source_of(&objs[..self.contra])?;
        super::hom::hom_module(&src, &objs[self.contra])
    }

    fn apply_morphism(&self, maps: &[Morphism]) -> Result<Morphism> {
        check_maps(self, maps)?;
        let post = &maps[self.contra];
        let pre = if self.contra == 0 {
            Morphism::identity(&FPModule::free(self.ring, 1))
        } else {
            let refs: Vec<&Morphism> = maps[..self.contra].iter().collect();
            tensor_map_all(&refs)?
        };
        hom_map(&pre, post)
    }
}

/// `F` with slot `slot` held at `fixed`.
#[derive(Clone, Debug)]
pub struct Restricted {
    pub inner: FunctorRef,
    pub slot: usize,
    pub fixed: FPModule,
}

impl Restricted {
    pub fn new(inner: FunctorRef, slot: usize, fixed: FPModule) -> Result<Restricted> {
        if inner.arity() < 2 {
            return Err(Error::InvalidArgument("cannot restrict a one-variable functor".into()));
        }
        if slot >= inner.arity() {
            return Err(Error::InvalidArgument(format!("slot {slot} out of range")));
        }
        if fixed.ring() != inner.slot_ring(slot) {
            return Err(Error::ring_mismatch(inner.slot_ring(slot), fixed.ring()));
        }
        Ok(Restricted { inner, slot, fixed })
    }

    fn outer(&self, i: usize) -> usize {
        if i < self.slot {
            i
        } else {
            i + 1
        }
    }

    fn insert<T: Clone>(&self, xs: &[T], x: T) -> Vec<T> {
        let mut v = xs.to_vec();
        v.insert(self.slot, x);
        v
    }
}

impl MultiFunctor for Restricted {
    fn name(&self) -> String {
        format!("{}[{}={}]", self.inner.name(), self.slot, self.fixed.describe())
    }

    fn arity(&self) -> usize {
        self.inner.arity() - 1
    }

    fn variance(&self, slot: usize) -> Variance {
        self.inner.variance(self.outer(slot))
    }

    fn slot_ring(&self, slot: usize) -> Ring {
        self.inner.slot_ring(self.outer(slot))
    }

    fn target_ring(&self) -> Ring {
        self.inner.target_ring()
    }

    fn apply(&self, objs: &[FPModule]) -> Result<FPModule> {
        check_objects(self, objs)?;
        self.inner.apply(&self.insert(objs, self.fixed.clone()))
    }

    fn apply_morphism(&self, maps: &[Morphism]) -> Result<Morphism> {
        check_maps(self, maps)?;
        self.inner
            .apply_morphism(&self.insert(maps, Morphism::identity(&self.fixed)))
    }
}

#[derive(Clone, Debug)]
pub struct Identity {
    pub ring: Ring,
}

impl MultiFunctor for Identity {
    fn name(&self) -> String {
        "id".into()
    }

    fn arity(&self) -> usize {
        1
    }

    fn variance(&self, _: usize) -> Variance {
        Variance::Covariant
    }

    fn slot_ring(&self, _: usize) -> Ring {
        self.ring
    }

    fn target_ring(&self) -> Ring {
        self.ring
    }

    fn apply(&self, objs: &[FPModule]) -> Result<FPModule> {
        check_objects(self, objs)?;
        Ok(objs[0].clone())
    }

    fn apply_morphism(&self, maps: &[Morphism]) -> Result<Morphism> {
        check_maps(self, maps)?;
        Ok(maps[0].clone())
    }
}

/// `M ↦ M ⊗ Z/n` from `Z/m`-modules to `Z/n`-modules, `n | m`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub from: Ring,
    pub to: Ring,
}

impl MultiFunctor for Extension {
    fn name(&self) -> String {
        format!("extend{}to{}", self.from.modulus(), self.to.modulus())
    }

    fn arity(&self) -> usize {
        1
    }

    fn variance(&self, _: usize) -> Variance {
        Variance::Covariant
    }

    fn slot_ring(&self, _: usize) -> Ring {
        self.from
    }

    fn target_ring(&self) -> Ring {
        self.to
    }

    fn apply(&self, objs: &[FPModule]) -> Result<FPModule> {
        check_objects(self, objs)?;
        Ok(FPModule::new(objs[0].presentation().lift_to(self.to)))
    }

    fn apply_morphism(&self, maps: &[Morphism]) -> Result<Morphism> {
        check_maps(self, maps)?;
        let f = &maps[0];
        Morphism::new(
            self.apply(&[f.source().clone()])?,
            self.apply(&[f.target().clone()])?,
            f.matrix().lift_to(self.to),
        )
    }
}

/// A `Z/n`-module viewed as a `Z/m`-module, `n | m`.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub from: Ring,
    pub to: Ring,
}

impl MultiFunctor for Restriction {
    fn name(&self) -> String {
        format!("restrict{}to{}", self.from.modulus(), self.to.modulus())
    }

    fn arity(&self) -> usize {
        1
    }

    fn variance(&self, _: usize) -> Variance {
        Variance::Covariant
    }

    fn slot_ring(&self, _: usize) -> Ring {
        self.from
    }

    fn target_ring(&self) -> Ring {
        self.to
    }

    fn apply(&self, objs: &[FPModule]) -> Result<FPModule> {
        check_objects(self, objs)?;
        let m = &objs[0];
        let torsion = Matrix::scalar(self.to, m.num_gens(), self.from.modulus());
        Ok(FPModule::new(m.presentation().lift_to(self.to).vstack(&torsion)?))
    }

    fn apply_morphism(&self, maps: &[Morphism]) -> Result<Morphism> {
        check_maps(self, maps)?;
        let f = &maps[0];
        Morphism::new(
            self.apply(&[f.source().clone()])?,
            self.apply(&[f.target().clone()])?,
            f.matrix().lift_to(self.to),
        )
    }
}
