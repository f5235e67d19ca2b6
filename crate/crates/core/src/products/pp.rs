use serde::{Deserialize, Serialize};

use crate::bifunctor::{MultiAdjunction, MultiFunctor, Variance};
use crate::error::{Error, Result};
use crate::module::{is_exact, CubeCone, CubeDiagram, FPModule, Morphism, Puncture};

fn check_arity(f: &dyn MultiFunctor, maps: &[Morphism]) -> Result<()> {
    if maps.len() != f.arity() {
        return Err(Error::InvalidArgument(format!(
            "arity mismatch: {} takes {} morphisms, got {}",
            f.name(),
            f.arity(),
            maps.len()
        )));
    }
    Ok(())
}

/// Object of slot `i` at cube coordinate `bit`: the source at 0 and target
/// at 1 in a covariant slot, reversed in a contravariant one.
fn slot_object(f: &dyn MultiFunctor, i: usize, m: &Morphism, bit: bool) -> FPModule {
    let covariant = f.variance(i) == Variance::Covariant;
    if bit == covariant {
        m.target().clone()
    } else {
        m.source().clone()
    }
}

/// The cube `F(f₁, …, fₙ)` on `Δ₁ⁿ`.
pub fn functor_cube(f: &dyn MultiFunctor, maps: &[Morphism], puncture: Puncture) -> Result<CubeDiagram> {
    check_arity(f, maps)?;
    let n = maps.len();
    let objs = |v: usize| -> Vec<FPModule> {
        (0..n)
            .map(|i| slot_object(f, i, &maps[i], v >> i & 1 == 1))
            .collect()
    };
    CubeDiagram::from_fn(
        n,
        puncture,
        |v| f.apply(&objs(v)),
        |v, i| {
            let mut ms: Vec<Morphism> = objs(v).iter().map(Morphism::identity).collect();
            ms[i] = maps[i].clone();
            f.apply_morphism(&ms)
        },
    )
}

/// `□_F(f₁, …, fₙ): colim_{Δ₁ⁿ ∖ (1,…,1)} F(fᵢ) → F(B₁, …, Bₙ)`.
#[derive(Clone, Debug)]
pub struct PushoutProduct {
    pub cube: CubeDiagram,
    pub colimit: CubeCone,
    pub map: Morphism,
}

pub fn pushout_product(f: &dyn MultiFunctor, fs: &[Morphism]) -> Result<PushoutProduct> {
    let cube = functor_cube(f, fs, Puncture::None)?;
    let colimit = cube.punctured_colimit()?;
    let map = colimit.comparison.clone().expect("apex present");
    Ok(PushoutProduct { cube, colimit, map })
}

/// `■_G(g₁, …, gₙ): G(all-zeros vertex) → lim_{Δ₁ⁿ ∖ (0,…,0)} G(gᵢ)`.
#[derive(Clone, Debug)]
pub struct PullbackProduct {
    pub cube: CubeDiagram,
    pub limit: CubeCone,
    pub map: Morphism,
}

pub fn pullback_product(g: &dyn MultiFunctor, gs: &[Morphism]) -> Result<PullbackProduct> {
    let cube = functor_cube(g, gs, Puncture::None)?;
    let limit = cube.punctured_limit()?;
    let map = limit.comparison.clone().expect("base vertex present");
    Ok(PullbackProduct { cube, limit, map })
}

/// `■` for the right adjoint `Gʲ`: the maps of the other slots, then a
/// morphism `h` of the target category.
pub fn adjoint_pullback_product(
    ma: &MultiAdjunction,
    j: usize,
    fs: &[Morphism],
    h: &Morphism,
) -> Result<PullbackProduct> {
    let g = ma.right(j)?;
    let mut gs = fs.to_vec();
    gs.push(h.clone());
    pullback_product(g.as_ref(), &gs)
}

/// The map out of a punctured colimit given on each vertex.
pub(crate) fn out_of_colimit(cone: &CubeCone, maps: &[Morphism], target: &FPModule) -> Result<Morphism> {
    let ring = target.ring();
    let mut rows = crate::ring::Matrix::zeros(ring, 0, target.num_gens());
    for (leg, m) in cone.legs.iter().flatten().zip(maps) {
        if !m.source().same(leg.source()) || !m.target().same(target) {
            return Err(Error::Shape("vertex map does not fit the colimit".into()));
        }
        rows = rows.vstack(m.matrix())?;
    }
    Morphism::new(cone.module.clone(), target.clone(), rows)
}

/// `0 → C` for a module `C`.
pub fn zero_into(c: &FPModule) -> Morphism {
    Morphism::zero(&FPModule::zero(c.ring()), c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CokerFormula {
    /// `coker(□_F fᵢ) ≅ F(C₁, …, Cₙ)`.
    pub coker_iso: bool,
    /// `F(B₁, …, Bₙ₋₁, Aₙ) → colim F(fᵢ) → colim F(f₁, …, 0 → Cₙ) → 0`.
    pub tail_exact: bool,
    pub coker: String,
    pub expected: String,
}

impl CokerFormula {
    pub fn holds(&self) -> bool {
        self.coker_iso && self.tail_exact
    }
}

/// Both sides of the cokernel formula computed independently, plus the
/// exact tail it is derived from.
pub fn verify_coker_formula(f: &dyn MultiFunctor, fs: &[Morphism]) -> Result<CokerFormula> {
    check_arity(f, fs)?;
    if (0..f.arity()).any(|i| f.variance(i) == Variance::Contravariant) {
        return Err(Error::InvalidArgument("cokernel formula needs a covariant functor".into()));
    }
    let n = fs.len();
    let pp = pushout_product(f, fs)?;
    let coker = pp.map.cokernel().0;
    let projections: Vec<Morphism> = fs.iter().map(|m| m.cokernel().1).collect();
    let cs: Vec<FPModule> = projections.iter().map(|p| p.target().clone()).collect();
    let expected = f.apply(&cs)?;
    let coker_iso = coker.is_isomorphic(&expected)?;

    let last = n - 1;
    let a_vertex = ((1usize << n) - 1) ^ (1 << last);
    let first = pp.colimit.legs[a_vertex].clone().expect("present vertex");
    let mut reduced = fs.to_vec();
    reduced[last] = zero_into(&cs[last]);
    let cube2 = functor_cube(f, &reduced, Puncture::AllOnes)?;
    let colim2 = cube2.punctured_colimit()?;
    let zero_n = Morphism::zero(fs[last].source(), &FPModule::zero(fs[last].source().ring()));
    let mut vertex_maps = Vec::new();
    for v in 0..(1usize << n) - 1 {
        let mut ms: Vec<Morphism> = (0..n)
            .map(|i| Morphism::identity(&slot_object(f, i, &fs[i], v >> i & 1 == 1)))
            .collect();
        ms[last] = if v >> last & 1 == 1 {
            projections[last].clone()
        } else {
            zero_n.clone()
        };
        let m = f.apply_morphism(&ms)?;
        vertex_maps.push(m.then(colim2.legs[v].as_ref().expect("present vertex"))?);
    }
    let second = out_of_colimit(&pp.colimit, &vertex_maps, &colim2.module)?;
    let tail_exact = is_exact(&first, &second)? && second.is_epic();
    Ok(CokerFormula {
        coker_iso,
        tail_exact,
        coker: coker.describe(),
        expected: expected.describe(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bifunctor::{Tensor, TensorHom};
    use crate::ring::{Matrix, Ring};

    fn z4() -> Ring {
        Ring::new(4).unwrap()
    }

    fn doubling_inclusion() -> Morphism {
        let r = z4();
        Morphism::new(
            FPModule::cyclic(r, 2).unwrap(),
            FPModule::free(r, 1),
            Matrix::from_rows(r, &[vec![2]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn zero_sources_give_the_target() {
        let r = z4();
        let t = Tensor { ring: r, arity: 2 };
        let f = zero_into(&FPModule::free(r, 1));
        let pp = pushout_product(&t, &[f.clone(), f.clone()]).unwrap();
        assert!(pp.map.is_monic());
        assert_eq!(pp.map.cokernel().0.invariants(), &[4]);
        assert!(verify_coker_formula(&t, &[f.clone(), f]).unwrap().holds());
    }

    #[test]
    fn doubling_corner_map_is_not_monic() {
        let r = z4();
        let t = Tensor { ring: r, arity: 2 };
        let f = doubling_inclusion();
        let pp = pushout_product(&t, &[f.clone(), f.clone()]).unwrap();
        assert_eq!(pp.colimit.module.invariants(), &[2, 2]);
        assert_eq!(pp.map.kernel().0.invariants(), &[2]);
        let c = verify_coker_formula(&t, &[f.clone(), f]).unwrap();
        assert!(c.holds());
        assert_eq!(c.coker, "Z/2");
    }

    #[test]
    fn identities_have_zero_cokernel() {
        let r = Ring::new(6).unwrap();
        let t = Tensor { ring: r, arity: 3 };
        let id = Morphism::identity(&FPModule::from_invariants(r, &[2, 6]).unwrap());
        let c = verify_coker_formula(&t, &[id.clone(), id.clone(), id]).unwrap();
        assert!(c.holds());
        assert_eq!(c.coker, "0");
    }

    #[test]
    fn pullback_product_of_identities_is_identity_like() {
        let r = z4();
        let h = TensorHom::hom(r);
        let m = FPModule::from_invariants(r, &[2, 4]).unwrap();
        let id = Morphism::identity(&m);
        let pb = pullback_product(&h, &[id.clone(), id]).unwrap();
        assert!(pb.map.is_iso());
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let r = z4();
        let t = Tensor { ring: r, arity: 2 };
        assert!(pushout_product(&t, &[doubling_inclusion()]).is_err());
    }
}
