use crate::error::{Error, Result};
use crate::module::{ElementTable, FPModule, Morphism};
use crate::ring::{gcd, Matrix};

/// `Hom(a, b)` as a module, with conversions to and from morphisms.
///
/// With `a ≅ ⊕ Z/aᵢ` and `b ≅ ⊕ Z/bⱼ`, `Hom(a, b) = ⊕ Z/gcd(aᵢ, bⱼ)`. The
/// generator `(i, j)` has index `i · len(b) + j` and sends the `i`-th normal
/// generator of `a` to `(bⱼ / gcd)` times the `j`-th normal generator of `b`.
#[derive(Clone, Debug)]
pub struct HomModule {
    source: FPModule,
    target: FPModule,
    module: FPModule,
    orders: Vec<u64>,
}

impl HomModule {
    pub fn new(a: &FPModule, b: &FPModule) -> Result<HomModule> {
        a.check_ring(b)?;
        let ring = a.ring();
        let n = ring.modulus();
        let (ai, bi) = (a.invariants(), b.invariants());
        let orders: Vec<u64> = ai
            .iter()
            .flat_map(|&x| bi.iter().map(move |&y| gcd(x, y)))
            .collect();
        let rel_idx: Vec<usize> = (0..orders.len()).filter(|&k| orders[k] != n).collect();
        let mut p = Matrix::zeros(ring, rel_idx.len(), orders.len());
        for (r, &k) in rel_idx.iter().enumerate() {
            p.set(r, k, orders[k]);
        }
        Ok(HomModule {
            source: a.clone(),
            target: b.clone(),
            module: FPModule::new(p),
            orders,
        })
    }

    pub fn module(&self) -> &FPModule {
        &self.module
    }

    pub fn source(&self) -> &FPModule {
        &self.source
    }

    pub fn target(&self) -> &FPModule {
        &self.target
    }

    fn step(&self, j: usize, k: usize) -> u64 {
        self.target.invariants()[j] / self.orders[k]
    }

    /// The morphism named by an element of the Hom module.
    pub fn to_morphism(&self, h: &[u64]) -> Morphism {
        let ring = self.source.ring();
        let (ka, kb) = (self.source.invariants().len(), self.target.invariants().len());
        let mut nm = Matrix::zeros(ring, ka, kb);
        for i in 0..ka {
            for j in 0..kb {
                let k = i * kb + j;
                nm.set(i, j, ring.mul(h[k] % self.orders[k], self.step(j, k)));
            }
        }
        let (_, to_a, _) = self.source.normalized();
        let (_, _, from_b) = self.target.normalized();
        let m = to_a
            .matrix()
            .mul(&nm)
            .and_then(|x| x.mul(from_b.matrix()))
            .expect("shapes agree");
        Morphism::new(self.source.clone(), self.target.clone(), m)
            .expect("Hom generators are well defined")
    }

    /// Hom-module coordinates of `f`, reduced modulo each generator order.
    pub fn from_morphism(&self, f: &Morphism) -> Result<Vec<u64>> {
        if !f.source().same(&self.source) || !f.target().same(&self.target) {
            return Err(Error::Shape("morphism is not in this Hom set".into()));
        }
        let (_, _, from_a) = self.source.normalized();
        let (_, to_b, _) = self.target.normalized();
        let nm = from_a.matrix().mul(f.matrix())?.mul(to_b.matrix())?;
        let bi = self.target.invariants();
        let kb = bi.len();
        let mut h = vec![0u64; self.orders.len()];
        for (k, slot) in h.iter_mut().enumerate() {
            let (i, j) = (k / kb, k % kb);
            let v = nm.get(i, j) % bi[j];
            let s = self.step(j, k);
            if !v.is_multiple_of(s) {
                return Err(Error::NotWellDefined(
                    "morphism does not respect the normal forms".into(),
                ));
            }
            *slot = v / s;
        }
        Ok(h)
    }

    /// Every morphism `source → target`.
    pub fn morphisms(&self, cap: u128) -> Result<Vec<Morphism>> {
        let table = ElementTable::new(&self.module, cap)?;
        Ok(table.elements().iter().map(|h| self.to_morphism(h)).collect())
    }
}

pub fn hom_module(a: &FPModule, b: &FPModule) -> Result<FPModule> {
    Ok(HomModule::new(a, b)?.module)
}

/// `Hom(A, B) → Hom(A', B')`, `φ ↦ post ∘ φ ∘ pre` for `pre: A' → A` and
/// `post: B → B'`.
pub fn hom_map(pre: &Morphism, post: &Morphism) -> Result<Morphism> {
    let from = HomModule::new(pre.target(), post.source())?;
    let to = HomModule::new(pre.source(), post.target())?;
    hom_map_between(&from, &to, pre, post)
}

pub(crate) fn hom_map_between(
    from: &HomModule,
    to: &HomModule,
    pre: &Morphism,
    post: &Morphism,
) -> Result<Morphism> {
    let ring = pre.source().ring();
    let g = from.module.num_gens();
    let mut rows = Vec::with_capacity(g);
    for k in 0..g {
        let mut e = vec![0u64; g];
        e[k] = 1;
        let phi = from.to_morphism(&e);
        let composite = pre.then(&phi)?.then(post)?;
        rows.push(to.from_morphism(&composite)?);
    }
    let m = Matrix::from_residue_rows(ring, to.module.num_gens(), &rows);
    Morphism::new(from.module.clone(), to.module.clone(), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn z(n: u64) -> Ring {
        Ring::new(n).unwrap()
    }

    /// Number of well-defined generator matrices, by exhaustive search.
    fn brute_hom_count(a: &FPModule, b: &FPModule) -> usize {
        let ring = a.ring();
        let n = ring.modulus();
        let cells = a.num_gens() * b.num_gens();
        let bt = b.elements().unwrap();
        let mut seen = std::collections::HashSet::new();
        let total = (n as usize).pow(cells as u32);
        for code in 0..total {
            let mut c = code;
            let mut entries = Vec::with_capacity(cells);
            for _ in 0..cells {
                entries.push((c % n as usize) as u64);
                c /= n as usize;
            }
            let m = Matrix::from_vec(ring, a.num_gens(), b.num_gens(), entries).unwrap();
            if let Ok(f) = Morphism::new(a.clone(), b.clone(), m) {
                let key: Vec<usize> = (0..a.num_gens())
                    .map(|i| bt.index_of(f.matrix().row(i)))
                    .collect();
                seen.insert(key);
            }
        }
        seen.len()
    }

    #[test]
    fn hom_examples() {
        let r = z(4);
        let z2 = FPModule::cyclic(r, 2).unwrap();
        let z4 = FPModule::free(r, 1);
        assert_eq!(hom_module(&z2, &z4).unwrap().invariants(), &[2]);
        let m = FPModule::from_invariants(r, &[2, 4]).unwrap();
        assert!(hom_module(&z4, &m).unwrap().is_isomorphic(&m).unwrap());
        let r12 = z(12);
        let a = FPModule::cyclic(r12, 3).unwrap();
        let b = FPModule::cyclic(r12, 4).unwrap();
        assert!(hom_module(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn hom_counts_match_brute_force() {
        let r = z(4);
        let ms = [
            FPModule::zero(r),
            FPModule::cyclic(r, 2).unwrap(),
            FPModule::free(r, 1),
            FPModule::from_invariants(r, &[2, 2]).unwrap(),
        ];
        for a in &ms {
            for b in &ms {
                let h = hom_module(a, b).unwrap();
                assert_eq!(h.cardinality() as usize, brute_hom_count(a, b), "{a} {b}");
            }
        }
    }

    #[test]
    fn round_trip_on_raw_presentations() {
        let r = z(12);
        let a = FPModule::new(Matrix::from_rows(r, &[vec![4, 6], vec![2, 3]]).unwrap());
        let b = FPModule::new(Matrix::from_rows(r, &[vec![3, 3, 0]]).unwrap());
        let hm = HomModule::new(&a, &b).unwrap();
        let t = hm.module().elements().unwrap();
        for h in t.elements() {
            let f = hm.to_morphism(h);
            let back = hm.from_morphism(&f).unwrap();
            assert_eq!(t.index_of(&back), t.index_of(h));
        }
    }

    #[test]
    fn hom_map_composes() {
        let r = z(12);
        let a = FPModule::from_invariants(r, &[6, 12]).unwrap();
        let b = FPModule::from_invariants(r, &[4]).unwrap();
        let pre = Morphism::scalar(&a, 5);
        let post = Morphism::scalar(&b, 3);
        let h = hom_map(&pre, &post).unwrap();
        assert!(h.equals(&Morphism::scalar(h.source(), 15)).unwrap());
    }
}
