use std::sync::Arc;

use super::functor::{
    check_objects, Extension, FunctorRef, Identity, MultiFunctor, Restricted, Restriction,
    Tensor, TensorHom,
};
use super::hom::HomModule;
use crate::error::{Error, Result};
use crate::module::{ElementTable, FPModule, Morphism, MAX_ARITY};
use crate::ring::{Matrix, Ring};

/// A left functor `F: 𝒜₁ × … × 𝒜ₙ → 𝒜₀` with right adjoints `Gʲ` and
/// explicit transpose bijections
/// `Hom(F(a₁, …, aₙ), a₀) ≅ Hom(aⱼ, Gʲ(a₁, …, âⱼ, …, aₙ, a₀))`.
///
/// Slots are 0-based. `Gʲ` takes the remaining `aᵢ` in order, then `a₀`.
#[derive(Clone, Debug)]
pub struct MultiAdjunction {
    kind: Kind,
}

#[derive(Clone, Debug)]
enum Kind {
    Tensor { ring: Ring, arity: usize },
    BaseChange(BaseChangePair),
    Identity(Ring),
    Restricted { base: Box<MultiAdjunction>, slot: usize, fixed: FPModule },
}

/// Extension and restriction of scalars along `Z/m → Z/n`, `n | m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaseChangePair {
    pub big: Ring,
    pub small: Ring,
}

impl BaseChangePair {
    pub fn extension(&self) -> Extension {
        Extension {
            from: self.big,
            to: self.small,
        }
    }

    pub fn restriction(&self) -> Restriction {
        Restriction {
            from: self.small,
            to: self.big,
        }
    }

    pub fn adjunction(&self) -> MultiAdjunction {
        MultiAdjunction {
            kind: Kind::BaseChange(*self),
        }
    }
}

pub fn base_change(m: u64, n: u64) -> Result<BaseChangePair> {
    if m < 2 || n < 2 {
        return Err(Error::InvalidArgument("base change needs moduli ≥ 2".into()));
    }
    if !m.is_multiple_of(n) {
        return Err(Error::InvalidArgument(format!("{n} does not divide {m}")));
    }
    Ok(BaseChangePair {
        big: Ring::new(m)?,
        small: Ring::new(n)?,
    })
}

/// Mixed-radix digits of `idx`, first radix most significant.
fn split_index(mut idx: usize, radices: &[usize]) -> Vec<usize> {
    let mut d = vec![0; radices.len()];
    for i in (0..radices.len()).rev() {
        d[i] = idx % radices[i];
        idx /= radices[i];
    }
    d
}

fn join_index(digits: &[usize], radices: &[usize]) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (d, r)| acc * r + d)
}

fn without<T: Clone>(xs: &[T], j: usize) -> Vec<T> {
    xs.iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, x)| x.clone())
        .collect()
}

/// Outcome of [`MultiAdjunction::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionCheck {
    pub left_hom: u128,
    pub right_hom: u128,
    pub round_trips: bool,
}

impl AdjunctionCheck {
    pub fn holds(&self) -> bool {
        self.left_hom == self.right_hom && self.round_trips
    }
}

impl MultiAdjunction {
    /// The `arity`-fold tensor over `ring` with its Hom right adjoints.
    pub fn tensor(ring: Ring, arity: usize) -> Result<MultiAdjunction> {
        if arity == 0 || arity > MAX_ARITY {
            return Err(Error::InvalidArgument(format!(
                "tensor arity must be in 1..={MAX_ARITY}"
            )));
        }
        Ok(MultiAdjunction {
            kind: Kind::Tensor { ring, arity },
        })
    }

    pub fn identity(ring: Ring) -> MultiAdjunction {
        MultiAdjunction {
            kind: Kind::Identity(ring),
        }
    }

    pub fn arity(&self) -> usize {
        match &self.kind {
            Kind::Tensor { arity, .. } => *arity,
            Kind::BaseChange(_) | Kind::Identity(_) => 1,
            Kind::Restricted { base, .. } => base.arity() - 1,
        }
    }

    pub fn name(&self) -> String {
        self.left().name()
    }

    pub fn left(&self) -> FunctorRef {
        match &self.kind {
            Kind::Tensor { ring, arity } => Arc::new(Tensor {
                ring: *ring,
                arity: *arity,
            }),
            Kind::BaseChange(p) => Arc::new(p.extension()),
            Kind::Identity(ring) => Arc::new(Identity { ring: *ring }),
            Kind::Restricted { base, slot, fixed } => Arc::new(Restricted {
                inner: base.left(),
                slot: *slot,
                fixed: fixed.clone(),
            }),
        }
    }

    fn check_slot(&self, j: usize) -> Result<()> {
        if j >= self.arity() {
            return Err(Error::InvalidArgument(format!(
                "adjoint index {j} out of range for arity {}",
                self.arity()
            )));
        }
        Ok(())
    }

    /// `Gʲ`, with slots `(a₁, …, âⱼ, …, aₙ, a₀)`.
    pub fn right(&self, j: usize) -> Result<FunctorRef> {
        self.check_slot(j)?;
        Ok(match &self.kind {
            Kind::Tensor { ring, arity } => Arc::new(TensorHom {
                ring: *ring,
                contra: arity - 1,
            }),
            Kind::BaseChange(p) => Arc::new(p.restriction()),
            Kind::Identity(ring) => Arc::new(Identity { ring: *ring }),
            Kind::Restricted { base, slot, fixed } => {
                let bj = Self::outer(*slot, j);
                let pos = if *slot < bj { *slot } else { *slot - 1 };
                Arc::new(Restricted {
                    inner: base.right(bj)?,
                    slot: pos,
                    fixed: fixed.clone(),
                })
            }
        })
    }

    fn outer(slot: usize, j: usize) -> usize {
        if j < slot {
            j
        } else {
            j + 1
        }
    }

    /// The arguments `(a₁, …, âⱼ, …, aₙ, a₀)` of `Gʲ`.
    pub fn right_args(objs: &[FPModule], j: usize, a0: &FPModule) -> Vec<FPModule> {
        let mut v = without(objs, j);
        v.push(a0.clone());
        v
    }

    /// `Gʲ(a₁, …, âⱼ, …, aₙ, a₀)`.
    pub fn right_object(&self, j: usize, objs: &[FPModule], a0: &FPModule) -> Result<FPModule> {
        self.right(j)?.apply(&Self::right_args(objs, j, a0))
    }

    fn check_left(&self, objs: &[FPModule], a0: &FPModule, phi: &Morphism) -> Result<FPModule> {
        let left = self.left();
        check_objects(left.as_ref(), objs)?;
        let fa = left.apply(objs)?;
        if !phi.source().same(&fa) || !phi.target().same(a0) {
            return Err(Error::Shape("morphism is not in Hom(F(a), a0)".into()));
        }
        Ok(fa)
    }

    /// `φ: F(a₁, …, aₙ) → a₀` to `aⱼ → Gʲ(…, a₀)`.
    pub fn transpose(
        &self,
        j: usize,
        objs: &[FPModule],
        a0: &FPModule,
        phi: &Morphism,
    ) -> Result<Morphism> {
        self.check_slot(j)?;
        self.check_left(objs, a0, phi)?;
        match &self.kind {
            Kind::Tensor { ring, .. } => {
                let others = without(objs, j);
                let g = TensorHom {
                    ring: *ring,
                    contra: others.len(),
                };
                let t = g.source_of(&others)?;
                let hom = HomModule::new(&t, a0)?;
                let radices: Vec<usize> = objs.iter().map(FPModule::num_gens).collect();
                let other_radices = without(&radices, j);
                let mut rows = Vec::with_capacity(radices[j]);
                for x in 0..radices[j] {
                    let mut m = Matrix::zeros(*ring, t.num_gens(), a0.num_gens());
                    for ti in 0..t.num_gens() {
                        let mut digits = split_index(ti, &other_radices);
                        digits.insert(j, x);
                        let src = join_index(&digits, &radices);
                        for c in 0..a0.num_gens() {
                            m.set(ti, c, phi.matrix().get(src, c));
                        }
                    }
                    let curried = Morphism::new(t.clone(), a0.clone(), m)?;
                    rows.push(hom.from_morphism(&curried)?);
                }
                let m = Matrix::from_residue_rows(*ring, hom.module().num_gens(), &rows);
                Morphism::new(objs[j].clone(), hom.module().clone(), m)
            }
            Kind::BaseChange(p) => {
                let target = p.restriction().apply(std::slice::from_ref(a0))?;
                Morphism::new(objs[0].clone(), target, phi.matrix().lift_to(p.big))
            }
            Kind::Identity(_) => Ok(phi.clone()),
            Kind::Restricted { base, slot, fixed } => {
                let mut full = objs.to_vec();
                full.insert(*slot, fixed.clone());
                base.transpose(Self::outer(*slot, j), &full, a0, phi)
            }
        }
    }

    /// `ψ: aⱼ → Gʲ(…, a₀)` to `F(a₁, …, aₙ) → a₀`.
    pub fn untranspose(
        &self,
        j: usize,
        objs: &[FPModule],
        a0: &FPModule,
        psi: &Morphism,
    ) -> Result<Morphism> {
        self.check_slot(j)?;
        let left = self.left();
        check_objects(left.as_ref(), objs)?;
        let g = self.right_object(j, objs, a0)?;
        if !psi.source().same(&objs[j]) || !psi.target().same(&g) {
            return Err(Error::Shape("morphism is not in Hom(a_j, G^j)".into()));
        }
        match &self.kind {
            Kind::Tensor { ring, .. } => {
                let others = without(objs, j);
                let t = TensorHom {
                    ring: *ring,
                    contra: others.len(),
                }
                .source_of(&others)?;
                let hom = HomModule::new(&t, a0)?;
                let radices: Vec<usize> = objs.iter().map(FPModule::num_gens).collect();
                let other_radices = without(&radices, j);
                let curried: Vec<Morphism> = (0..radices[j])
                    .map(|x| hom.to_morphism(psi.matrix().row(x)))
                    .collect();
                let fa = left.apply(objs)?;
                let mut m = Matrix::zeros(*ring, fa.num_gens(), a0.num_gens());
                for src in 0..fa.num_gens() {
                    let mut digits = split_index(src, &radices);
                    let x = digits.remove(j);
                    let ti = join_index(&digits, &other_radices);
                    for c in 0..a0.num_gens() {
                        m.set(src, c, curried[x].matrix().get(ti, c));
                    }
                }
                Morphism::new(fa, a0.clone(), m)
            }
            Kind::BaseChange(p) => {
                let fa = left.apply(objs)?;
                Morphism::new(fa, a0.clone(), psi.matrix().lift_to(p.small))
            }
            Kind::Identity(_) => Ok(psi.clone()),
            Kind::Restricted { base, slot, fixed } => {
                let mut full = objs.to_vec();
                full.insert(*slot, fixed.clone());
                base.untranspose(Self::outer(*slot, j), &full, a0, psi)
            }
        }
    }

    /// Compares `|Hom(F(a), a₀)|` with `|Hom(aⱼ, Gʲ)|` and checks that the
    /// transposes are mutually inverse on every element of both sides.
    pub fn validate(
        &self,
        j: usize,
        objs: &[FPModule],
        a0: &FPModule,
        cap: u128,
    ) -> Result<AdjunctionCheck> {
        let fa = self.left().apply(objs)?;
        let g = self.right_object(j, objs, a0)?;
        let lhs = HomModule::new(&fa, a0)?;
        let rhs = HomModule::new(&objs[j], &g)?;
        let mut round_trips = true;
        let lt = ElementTable::new(lhs.module(), cap)?;
        for h in lt.elements() {
            let phi = lhs.to_morphism(h);
            let back = self.untranspose(j, objs, a0, &self.transpose(j, objs, a0, &phi)?)?;
            round_trips &= back.equals(&phi)?;
        }
        let rt = ElementTable::new(rhs.module(), cap)?;
        for h in rt.elements() {
            let psi = rhs.to_morphism(h);
            let back = self.transpose(j, objs, a0, &self.untranspose(j, objs, a0, &psi)?)?;
            round_trips &= back.equals(&psi)?;
        }
        Ok(AdjunctionCheck {
            left_hom: lhs.module().cardinality(),
            right_hom: rhs.module().cardinality(),
            round_trips,
        })
    }
}

/// Holds slot `slot` of `ma` at `fixed`, giving an adjunction of arity `n − 1`.
pub fn restrict_adjunction(
    ma: &MultiAdjunction,
    slot: usize,
    fixed: &FPModule,
) -> Result<MultiAdjunction> {
    if ma.arity() < 2 {
        return Err(Error::InvalidArgument("cannot restrict a one-variable adjunction".into()));
    }
    ma.check_slot(slot)?;
    let left = ma.left();
    if fixed.ring() != left.slot_ring(slot) {
        return Err(Error::ring_mismatch(left.slot_ring(slot), fixed.ring()));
    }
    Ok(MultiAdjunction {
        kind: Kind::Restricted {
            base: Box::new(ma.clone()),
            slot,
            fixed: fixed.clone(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> Ring {
        Ring::new(n).unwrap()
    }

    #[test]
    fn currying_identity_of_z2_tensor_z2() {
        let r = z(4);
        let z2 = FPModule::cyclic(r, 2).unwrap();
        let ma = MultiAdjunction::tensor(r, 2).unwrap();
        let objs = [z2.clone(), z2.clone()];
        let t = ma.left().apply(&objs).unwrap();
        let id = Morphism::identity(&t);
        let tr = ma.transpose(0, &objs, &t, &id).unwrap();
        assert!(!tr.is_zero());
        assert!(tr.is_monic());
        let zero = Morphism::zero(&t, &z2);
        assert!(ma.transpose(1, &objs, &z2, &zero).unwrap().is_zero());
        for j in 0..2 {
            let check = ma.validate(j, &objs, &z2, 4096).unwrap();
            assert_eq!(check.left_hom, 2);
            assert!(check.holds());
        }
    }

    #[test]
    fn three_fold_tensor_transposes() {
        let r = z(12);
        let objs = [
            FPModule::cyclic(r, 6).unwrap(),
            FPModule::from_invariants(r, &[2, 4]).unwrap(),
            FPModule::cyclic(r, 3).unwrap(),
        ];
        let a0 = FPModule::cyclic(r, 6).unwrap();
        let ma = MultiAdjunction::tensor(r, 3).unwrap();
        for j in 0..3 {
            assert!(ma.validate(j, &objs, &a0, 4096).unwrap().holds());
        }
        assert!(ma.transpose(3, &objs, &a0, &Morphism::zero(&a0, &a0)).is_err());
    }

    #[test]
    fn restriction_of_binary_tensor() {
        let r = z(4);
        let z2 = FPModule::cyclic(r, 2).unwrap();
        let ma = MultiAdjunction::tensor(r, 2).unwrap();
        let one = restrict_adjunction(&ma, 0, &z2).unwrap();
        assert_eq!(one.arity(), 1);
        let m = FPModule::from_invariants(r, &[2, 4]).unwrap();
        let a0 = FPModule::free(r, 1);
        assert!(one.validate(0, std::slice::from_ref(&m), &a0, 4096).unwrap().holds());
        assert!(one.right(0).unwrap().apply(&[a0]).unwrap().invariants() == [2]);
        assert!(restrict_adjunction(&one, 0, &z2).is_err());
        let unit = restrict_adjunction(&ma, 1, &FPModule::free(r, 1)).unwrap();
        assert!(unit.left().apply(std::slice::from_ref(&m)).unwrap().is_isomorphic(&m).unwrap());
    }

    #[test]
    fn restricting_twice_commutes() {
        let r = z(6);
        let ma = MultiAdjunction::tensor(r, 3).unwrap();
        let (x, y) = (FPModule::cyclic(r, 2).unwrap(), FPModule::cyclic(r, 3).unwrap());
        let a = restrict_adjunction(&restrict_adjunction(&ma, 0, &x).unwrap(), 1, &y).unwrap();
        let b = restrict_adjunction(&restrict_adjunction(&ma, 2, &y).unwrap(), 0, &x).unwrap();
        let m = FPModule::free(r, 1);
        let fa = a.left().apply(std::slice::from_ref(&m)).unwrap();
        let fb = b.left().apply(std::slice::from_ref(&m)).unwrap();
        assert_eq!(fa.presentation(), fb.presentation());
        assert!(a.validate(0, std::slice::from_ref(&m), &m, 4096).unwrap().holds());
    }

    #[test]
    fn base_change_adjunction() {
        let p = base_change(12, 4).unwrap();
        assert!(base_change(12, 5).is_err());
        assert!(base_change(1, 1).is_err());
        let ma = p.adjunction();
        let m = FPModule::from_invariants(p.big, &[6, 12]).unwrap();
        let n = FPModule::from_invariants(p.small, &[2, 4]).unwrap();
        let check = ma.validate(0, &[m], &n, 4096).unwrap();
        assert!(check.holds());
        assert!(check.left_hom > 1);
    }
}
