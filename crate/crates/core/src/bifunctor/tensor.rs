use crate::error::{Error, Result};
use crate::module::{FPModule, Morphism};
use crate::ring::Matrix;

/// `a ⊗ b` on the Kronecker presentation.
///
/// Generator `(i, k)` has index `i · gens(b) + k`; relations are
/// `rel(a) ⊗ gens(b)` followed by `gens(a) ⊗ rel(b)`.
pub fn tensor(a: &FPModule, b: &FPModule) -> Result<FPModule> {
    a.check_ring(b)?;
    let ring = a.ring();
    let ia = Matrix::identity(ring, a.num_gens());
    let ib = Matrix::identity(ring, b.num_gens());
    let left = a.presentation().kronecker(&ib)?;
    let right = ia.kronecker(b.presentation())?;
    Ok(FPModule::new(left.vstack(&right)?))
}

/// Left-associated `((m₁ ⊗ m₂) ⊗ …) ⊗ mₖ`; generators in mixed radix with
/// the first factor most significant.
pub fn tensor_all(ms: &[&FPModule]) -> Result<FPModule> {
    let (first, rest) = ms
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("empty tensor product".into()))?;
    let mut acc = (*first).clone();
    for m in rest {
        acc = tensor(&acc, m)?;
    }
    Ok(acc)
}

/// `f ⊗ g : A ⊗ C → B ⊗ D`.
pub fn tensor_map(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    tensor_map_all(&[f, g])
}

/// `f₁ ⊗ … ⊗ fₖ`, associated like [`tensor_all`].
pub fn tensor_map_all(fs: &[&Morphism]) -> Result<Morphism> {
    let sources: Vec<&FPModule> = fs.iter().map(|f| f.source()).collect();
    let targets: Vec<&FPModule> = fs.iter().map(|f| f.target()).collect();
    let src = tensor_all(&sources)?;
    let tgt = tensor_all(&targets)?;
    let mut m = fs[0].matrix().clone();
    for f in &fs[1..] {
        m = m.kronecker(f.matrix())?;
    }
    Morphism::new(src, tgt, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn z(n: u64) -> Ring {
        Ring::new(n).unwrap()
    }

    #[test]
    fn small_tensors() {
        let r = z(4);
        let z2 = FPModule::cyclic(r, 2).unwrap();
        let z4 = FPModule::free(r, 1);
        assert_eq!(tensor(&z2, &z2).unwrap().invariants(), &[2]);
        assert_eq!(tensor(&z2, &z4).unwrap().invariants(), &[2]);
        let m = FPModule::from_invariants(r, &[2, 4]).unwrap();
        assert!(tensor(&z4, &m).unwrap().is_isomorphic(&m).unwrap());
    }

    #[test]
    fn coprime_factors_vanish() {
        let r = z(12);
        let a = FPModule::cyclic(r, 3).unwrap();
        let b = FPModule::cyclic(r, 4).unwrap();
        assert!(tensor(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn tensor_of_maps_is_functorial() {
        let r = z(12);
        let m = FPModule::from_invariants(r, &[6, 12]).unwrap();
        let f = Morphism::scalar(&m, 5);
        let g = Morphism::scalar(&m, 7);
        let fg = tensor_map(&f, &g).unwrap();
        let expected = Morphism::scalar(fg.source(), 35);
        assert!(fg.equals(&expected).unwrap());
        let id = tensor_map(&Morphism::identity(&m), &Morphism::identity(&m)).unwrap();
        assert!(id.equals(&Morphism::identity(id.source())).unwrap());
    }
}
