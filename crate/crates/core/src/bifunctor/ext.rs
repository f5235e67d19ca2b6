use super::hom::{hom_map_between, HomModule};
use crate::error::{Error, Result};
use crate::module::{
    homology, realize_extension, ElementTable, FPModule, Morphism, ShortExactSequence,
};
use crate::ring::{HowellBasis, Matrix};

/// `Hom(F•, b)` for the cached resolution `F•` of `a`, degrees 0 to 3.
///
/// Every `Hom(Fᵢ, b)` is `b^k` with `k` the rank of the resolution;
/// precomposition with a diagonal differential scales each copy.
pub fn hom_cochain(a: &FPModule, b: &FPModule) -> Result<Vec<Morphism>> {
    a.check_ring(b)?;
    let ring = a.ring();
    let res = a.resolution();
    let k = res.rank();
    let copies: Vec<&FPModule> = vec![b; k];
    let power = FPModule::direct_sum(ring, &copies)?.module;
    let g = b.num_gens();
    res.differentials
        .iter()
        .map(|d| {
            let blocks: Vec<Matrix> = (0..k).map(|i| Matrix::scalar(ring, g, d.get(i, i))).collect();
            let refs: Vec<&Matrix> = blocks.iter().collect();
            Morphism::new(power.clone(), power.clone(), Matrix::block_diag(&refs, ring))
        })
        .collect()
}

/// `Extᵏ(a, b)` for `k ∈ {1, 2}` as the `k`-th cohomology of [`hom_cochain`].
pub fn ext(k: usize, a: &FPModule, b: &FPModule) -> Result<FPModule> {
    if !(1..=2).contains(&k) {
        return Err(Error::InvalidArgument(format!("Ext degree {k} is not 1 or 2")));
    }
    let cochain = hom_cochain(a, b)?;
    Ok(homology(&cochain[k - 1], &cochain[k])?.module)
}

/// `Ext¹(d, x)` as `coker(Hom(F₀, x) → Hom(K, x))` for the cached syzygy
/// `K` of `d`, so that classes are morphisms `K → x`.
///
/// Coset representatives are canonical: the Howell basis of the subgroup
/// (relations of `Hom(K, x)` plus the restricted maps) reduces any
/// representative to a unique vector.
#[derive(Clone, Debug)]
pub struct ExtGroup {
    d: FPModule,
    x: FPModule,
    hom: HomModule,
    module: FPModule,
    subgroup: HowellBasis,
}

impl ExtGroup {
    pub fn new(d: &FPModule, x: &FPModule) -> Result<ExtGroup> {
        d.check_ring(x)?;
        let res = d.resolution();
        let from = HomModule::new(&res.free, x)?;
        let hom = HomModule::new(&res.syzygy, x)?;
        let restriction = hom_map_between(
            &from,
            &hom,
            &res.syzygy_inclusion,
            &Morphism::identity(x),
        )?;
        let (module, _) = restriction.cokernel();
        let subgroup = HowellBasis::new(module.presentation());
        Ok(ExtGroup {
            d: d.clone(),
            x: x.clone(),
            hom,
            module,
            subgroup,
        })
    }

    /// The quotient module, presented on the generators of `Hom(K, x)`.
    pub fn module(&self) -> &FPModule {
        &self.module
    }

    pub fn cardinality(&self) -> u128 {
        self.module.cardinality()
    }

    pub fn is_zero(&self) -> bool {
        self.module.is_zero()
    }

    /// Canonical coordinates of the class of `cls: K → x`.
    pub fn class_of(&self, cls: &Morphism) -> Result<Vec<u64>> {
        Ok(self.subgroup.reduce(&self.hom.from_morphism(cls)?))
    }

    pub fn same_class(&self, a: &Morphism, b: &Morphism) -> Result<bool> {
        Ok(self.class_of(a)? == self.class_of(b)?)
    }

    /// The canonical representative of the class of `cls`.
    pub fn canonical_representative(&self, cls: &Morphism) -> Result<Morphism> {
        Ok(self.hom.to_morphism(&self.class_of(cls)?))
    }

    /// The canonical representative of the class with quotient-module
    /// coordinates `h`.
    pub fn representative(&self, h: &[u64]) -> Morphism {
        self.hom.to_morphism(&self.subgroup.reduce(h))
    }

    /// One canonical representative per class, the zero class first.
    pub fn representatives(&self, cap: u128) -> Result<Vec<Morphism>> {
        let table = ElementTable::new(&self.module, cap)?;
        Ok(table
            .elements()
            .iter()
            .map(|h| self.representative(h))
            .collect())
    }

    /// One extension `0 → x → Y → d → 0` per class.
    pub fn realize_all(&self, cap: u128) -> Result<Vec<ShortExactSequence>> {
        self.representatives(cap)?
            .iter()
            .map(|cls| realize_extension(&self.d, &self.x, cls))
            .collect()
    }

    /// Canonical class coordinates of an extension of `d` by `x`.
    pub fn class_of_sequence(&self, ses: &ShortExactSequence) -> Result<Vec<u64>> {
        if !ses.right().same(&self.d) || !ses.left().same(&self.x) {
            return Err(Error::Shape("sequence ends differ from this Ext group".into()));
        }
        self.class_of(&ses.class_representative()?)
    }
}
