use super::{FPModule, Morphism};
use crate::error::{Error, Result};
use crate::ring::{left_kernel, Matrix, Ring};

/// Pushout of `f: A → B` and `g: A → C` with legs `B → P` and `C → P`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub module: FPModule,
    pub left: Morphism,
    pub right: Morphism,
}

/// Pullback of `f: B → A` and `g: C → A` with legs `P → B` and `P → C`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub module: FPModule,
    pub left: Morphism,
    pub right: Morphism,
}

/// The submodule of `m` generated by the rows of `gens`, presented on those
/// rows, with its inclusion.
pub(crate) fn image_submodule(m: &FPModule, gens: &Matrix) -> (FPModule, Morphism) {
    let ring = m.ring();
    let k = gens.rows();
    let stacked = gens.vstack(m.presentation()).expect("generator rows fit the module");
    let syz = left_kernel(&stacked);
    let idx: Vec<usize> = (0..k).collect();
    let relations = syz.select_cols(&idx).nonzero_rows();
    let relations = if relations.rows() == 0 {
        Matrix::zeros(ring, 0, k)
    } else {
        relations
    };
    let sub = FPModule::new(relations);
    let incl = Morphism::new_unchecked(sub.clone(), m.clone(), gens.clone());
    (sub, incl)
}

/// Replaces the source of `f` by its normal form.
fn simplify_source(sub: FPModule, f: Morphism) -> (FPModule, Morphism) {
    let (d, _, from) = sub.normalized();
    let g = from.then(&f).expect("normal form maps into the submodule");
    (d, g)
}

impl Morphism {
    /// `ker f` in normal form with its inclusion into the source.
    pub fn kernel(&self) -> (FPModule, Morphism) {
        let src = self.source();
        let g = src.num_gens();
        let stacked = self
            .matrix()
            .vstack(self.target().presentation())
            .expect("shapes agree");
        let lk = left_kernel(&stacked);
        let idx: Vec<usize> = (0..g).collect();
        let gens = lk.select_cols(&idx).nonzero_rows();
        let gens = if gens.rows() == 0 {
            Matrix::zeros(src.ring(), 0, g)
        } else {
            gens
        };
        let (sub, incl) = image_submodule(src, &gens);
        simplify_source(sub, incl)
    }

    /// `coker f` presented by the target's relations plus the image rows,
    /// with the projection from the target.
    pub fn cokernel(&self) -> (FPModule, Morphism) {
        let tgt = self.target();
        let pres = tgt
            .presentation()
            .vstack(self.matrix())
            .expect("shapes agree");
        let coker = FPModule::new(pres);
        let proj = Morphism::new_unchecked(
            tgt.clone(),
            coker.clone(),
            Matrix::identity(tgt.ring(), tgt.num_gens()),
        );
        (coker, proj)
    }

    /// `im f` in normal form, with the corestriction `source → im` and the
    /// inclusion `im → target`.
    pub fn image(&self) -> (FPModule, Morphism, Morphism) {
        let (sub, incl) = image_submodule(self.target(), self.matrix());
        let onto = Morphism::new_unchecked(
            self.source().clone(),
            sub.clone(),
            Matrix::identity(self.source().ring(), self.source().num_gens()),
        );
        let (d, to, from) = sub.normalized();
        let onto = onto.then(&to).expect("composable");
        let incl = from.then(&incl).expect("composable");
        (d, onto, incl)
    }
}

/// `coker(A → B ⊕ C, a ↦ (f a, −g a))`.
pub fn pushout(f: &Morphism, g: &Morphism) -> Result<Pushout> {
    if !f.source().same(g.source()) {
        return Err(Error::Shape("pushout legs need a common source".into()));
    }
    let ring = f.source().ring();
    let b = f.target();
    let c = g.target();
    let rel = f.matrix().hstack(&g.matrix().neg())?;
    let blocks = Matrix::block_diag(&[b.presentation(), c.presentation()], ring);
    let module = FPModule::new(blocks.vstack(&rel)?);
    let (gb, gc) = (b.num_gens(), c.num_gens());
    let left = Morphism::new_unchecked(b.clone(), module.clone(), embed(ring, gb, gb + gc, 0));
    let right = Morphism::new_unchecked(c.clone(), module.clone(), embed(ring, gc, gb + gc, gb));
    Ok(Pushout {
        module,
        left,
        right,
    })
}

/// `ker(B ⊕ C → A, (b, c) ↦ f b − g c)`.
pub fn pullback(f: &Morphism, g: &Morphism) -> Result<Pullback> {
    if !f.target().same(g.target()) {
        return Err(Error::Shape("pullback legs need a common target".into()));
    }
    let ring = f.target().ring();
    let b = f.source();
    let c = g.source();
    let sum = FPModule::direct_sum(ring, &[b, c])?;
    let diff = Morphism::new_unchecked(
        sum.module.clone(),
        f.target().clone(),
        f.matrix().vstack(&g.matrix().neg())?,
    );
    let (module, incl) = diff.kernel();
    let left = incl.then(&sum.projections[0])?;
    let right = incl.then(&sum.projections[1])?;
    Ok(Pullback {
        module,
        left,
        right,
    })
}

/// `ker(out) / im(inc)` at the middle of `X --inc--> Y --out--> Z`.
#[derive(Clone, Debug)]
pub struct Homology {
    /// The homology module, presented on the cycle generators.
    pub module: FPModule,
    pub cycles: FPModule,
    /// `cycles → Y`.
    pub inclusion: Morphism,
    /// `cycles → module`.
    pub projection: Morphism,
}

pub fn homology(inc: &Morphism, out: &Morphism) -> Result<Homology> {
    if !inc.target().same(out.source()) {
        return Err(Error::Shape("homology needs composable maps".into()));
    }
    if !inc.then(out)?.is_zero() {
        return Err(Error::NotAComplex("consecutive maps do not compose to zero".into()));
    }
    let (cycles, inclusion) = out.kernel();
    let solver = inclusion.preimage_solver();
    let ring = cycles.ring();
    let rows: Vec<Vec<u64>> = (0..inc.matrix().rows())
        .map(|i| solver.solve(inc.matrix().row(i)).expect("boundaries are cycles"))
        .collect();
    let lifted = Morphism::new_unchecked(
        inc.source().clone(),
        cycles.clone(),
        Matrix::from_residue_rows(ring, cycles.num_gens(), &rows),
    );
    let (module, projection) = lifted.cokernel();
    Ok(Homology {
        module,
        cycles,
        inclusion,
        projection,
    })
}

/// `rows × cols` matrix with an identity block starting at column `offset`.
pub(crate) fn embed(ring: Ring, rows: usize, cols: usize, offset: usize) -> Matrix {
    let mut m = Matrix::zeros(ring, rows, cols);
    for i in 0..rows {
        m.set(i, offset + i, 1);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn z(n: u64) -> Ring {
        Ring::new(n).unwrap()
    }

    fn brute_kernel_size(f: &Morphism) -> usize {
        let t = f.source().elements().unwrap();
        t.elements()
            .iter()
            .filter(|v| f.target().is_zero_element(&f.apply(v)))
            .count()
    }

    #[test]
    fn kernel_of_doubling() {
        let m = FPModule::free(z(4), 1);
        let f = Morphism::scalar(&m, 2);
        let (k, incl) = f.kernel();
        assert_eq!(k.invariants(), &[2]);
        assert!(incl.then(&f).unwrap().is_zero());
        assert!(incl.is_monic());
        assert_eq!(brute_kernel_size(&f), 2);
    }

    #[test]
    fn kernel_edge_cases() {
        let a = FPModule::from_invariants(z(12), &[2, 6]).unwrap();
        assert!(Morphism::identity(&a).kernel().0.is_zero());
        let b = FPModule::cyclic(z(12), 4).unwrap();
        let (k, _) = Morphism::zero(&a, &b).kernel();
        assert!(k.is_isomorphic(&a).unwrap());
    }

    #[test]
    fn cokernel_examples() {
        let m = FPModule::free(z(4), 1);
        assert_eq!(Morphism::scalar(&m, 2).cokernel().0.invariants(), &[2]);
        assert!(Morphism::identity(&m).cokernel().0.is_zero());
        let a = FPModule::from_invariants(z(4), &[2, 4]).unwrap();
        let zero = FPModule::zero(z(4));
        let (c, _) = Morphism::zero(&zero, &a).cokernel();
        assert!(c.is_isomorphic(&a).unwrap());
    }

    #[test]
    fn image_factorization() {
        let r = z(12);
        let a = FPModule::free(r, 2);
        let b = FPModule::from_invariants(r, &[6, 12]).unwrap();
        let f = Morphism::new(a, b, Matrix::from_rows(r, &[vec![2, 4], vec![3, 6]]).unwrap())
            .unwrap();
        let (im, onto, incl) = f.image();
        assert!(onto.then(&incl).unwrap().equals(&f).unwrap());
        assert!(incl.is_monic());
        assert!(onto.is_epic());
        let images: HashSet<Vec<u64>> = f
            .source()
            .elements()
            .unwrap()
            .elements()
            .iter()
            .map(|v| f.target().canonical(&f.apply(v)))
            .collect();
        assert_eq!(im.cardinality(), images.len() as u128);
    }

    #[test]
    fn pushout_glues_into_cyclic() {
        let r = z(4);
        let a = FPModule::cyclic(r, 2).unwrap();
        let z4 = FPModule::free(r, 1);
        let f = Morphism::new(a.clone(), z4, Matrix::from_rows(r, &[vec![2]]).unwrap()).unwrap();
        let g = Morphism::identity(&a);
        let p = pushout(&f, &g).unwrap();
        assert_eq!(p.module.invariants(), &[4]);
        assert!(f.then(&p.left).unwrap().equals(&g.then(&p.right).unwrap()).unwrap());
    }

    #[test]
    fn pushout_along_identities() {
        let r = z(6);
        let b = FPModule::from_invariants(r, &[3, 6]).unwrap();
        let id = Morphism::identity(&b);
        let p = pushout(&id, &id).unwrap();
        assert!(p.module.is_isomorphic(&b).unwrap());
    }

    #[test]
    fn homology_of_doubling_twice() {
        let m = FPModule::free(z(4), 1);
        let two = Morphism::scalar(&m, 2);
        let h = homology(&two, &two).unwrap();
        assert!(h.module.is_zero());
        let z8 = FPModule::free(z(8), 1);
        let (a, b) = (Morphism::scalar(&z8, 2), Morphism::scalar(&z8, 4));
        assert!(homology(&a, &b).unwrap().module.is_zero());
        let b = a.scale(2);
        assert_eq!(homology(&b, &b).unwrap().module.invariants(), &[2]);
        assert!(homology(&a, &a).is_err());
    }

    #[test]
    fn pullback_of_two_reductions() {
        let r = z(4);
        let z4 = FPModule::free(r, 1);
        let z2 = FPModule::cyclic(r, 2).unwrap();
        let red = Morphism::new(z4, z2, Matrix::from_rows(r, &[vec![1]]).unwrap()).unwrap();
        let p = pullback(&red, &red).unwrap();
        assert_eq!(p.module.cardinality(), 8);
        assert_eq!(p.module.invariants(), &[2, 4]);
        assert!(p.left.then(&red).unwrap().equals(&p.right.then(&red).unwrap()).unwrap());
    }
}
