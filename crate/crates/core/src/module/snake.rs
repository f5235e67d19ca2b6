use super::{homology, FPModule, Morphism, ShortExactSequence};
use crate::error::{Error, Result};
use crate::ring::Matrix;

/// `f` then `g` is exact at the middle term.
pub fn is_exact(f: &Morphism, g: &Morphism) -> Result<bool> {
    Ok(homology(f, g)?.module.is_zero())
}

/// A map of short exact sequences `top → bottom` given by vertical maps
/// `a`, `b`, `c` on the left, middle and right terms.
#[derive(Clone, Debug)]
pub struct SesMap {
    pub top: ShortExactSequence,
    pub bottom: ShortExactSequence,
    pub a: Morphism,
    pub b: Morphism,
    pub c: Morphism,
}

/// `ker a → ker b → ker c --δ--> coker a → coker b → coker c`.
#[derive(Clone, Debug)]
pub struct SnakeSequence {
    pub maps: [Morphism; 5],
}

impl SnakeSequence {
    pub fn connecting(&self) -> &Morphism {
        &self.maps[2]
    }

    /// Exactness at the four interior terms.
    pub fn is_exact(&self) -> Result<bool> {
        for w in self.maps.windows(2) {
            if !is_exact(&w[0], &w[1])? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn endpoints_match(f: &Morphism, src: &FPModule, tgt: &FPModule) -> bool {
    f.source().same(src) && f.target().same(tgt)
}

impl SesMap {
    pub fn new(
        top: ShortExactSequence,
        bottom: ShortExactSequence,
        a: Morphism,
        b: Morphism,
        c: Morphism,
    ) -> Result<SesMap> {
        if !endpoints_match(&a, top.left(), bottom.left())
            || !endpoints_match(&b, top.mid(), bottom.mid())
            || !endpoints_match(&c, top.right(), bottom.right())
        {
            return Err(Error::Shape("vertical maps do not connect the sequences".into()));
        }
        if !top.inj().then(&b)?.equals(&a.then(bottom.inj())?)?
            || !top.surj().then(&c)?.equals(&b.then(bottom.surj())?)?
        {
            return Err(Error::NonCommuting("map of short exact sequences".into()));
        }
        Ok(SesMap {
            top,
            bottom,
            a,
            b,
            c,
        })
    }

    pub fn snake(&self) -> Result<SnakeSequence> {
        let (ka, ia) = self.a.kernel();
        let (kb, ib) = self.b.kernel();
        let (kc, ic) = self.c.kernel();
        let (ca, pa) = self.a.cokernel();
        let (cb, _) = self.b.cokernel();
        let (cc, _) = self.c.cokernel();
        let ring = ka.ring();
        let lift = |f: &Morphism, incl: &Morphism, sub: &FPModule| -> Result<Morphism> {
            let solver = incl.preimage_solver();
            let rows = (0..f.matrix().rows())
                .map(|i| {
                    solver
                        .solve(f.matrix().row(i))
                        .ok_or_else(|| Error::PreconditionFailed("kernel map does not lift".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            Morphism::new(
                f.source().clone(),
                sub.clone(),
                Matrix::from_residue_rows(ring, sub.num_gens(), &rows),
            )
        };
        let k1 = lift(&ia.then(self.top.inj())?, &ib, &kb)?;
        let k2 = lift(&ib.then(self.top.surj())?, &ic, &kc)?;
        // δ: lift along the top surjection, push down by b, pull back along
        // the bottom injection, project to coker a.
        let up = self.top.surj().preimage_solver();
        let back = self.bottom.inj().preimage_solver();
        let mut rows = Vec::with_capacity(kc.num_gens());
        for i in 0..kc.num_gens() {
            let x = up
                .solve(ic.matrix().row(i))
                .ok_or_else(|| Error::PreconditionFailed("top sequence is not epic".into()))?;
            let y = self.b.apply(&x);
            let z = back
                .solve(&y)
                .ok_or_else(|| Error::PreconditionFailed("bottom sequence is not exact".into()))?;
            rows.push(pa.apply(&z));
        }
        let delta = Morphism::new(
            kc.clone(),
            ca.clone(),
            Matrix::from_residue_rows(ring, ca.num_gens(), &rows),
        )?;
        let c1 = Morphism::new(ca, cb.clone(), self.bottom.inj().matrix().clone())?;
        let c2 = Morphism::new(cb, cc, self.bottom.surj().matrix().clone())?;
        Ok(SnakeSequence {
            maps: [k1, k2, delta, c1, c2],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    #[test]
    fn doubling_on_the_cyclic_extension() {
        // 0 → Z/2 → Z/4 → Z/2 → 0 mapped to itself by ×2.
        let r = Ring::new(4).unwrap();
        let z2 = FPModule::cyclic(r, 2).unwrap();
        let z4 = FPModule::free(r, 1);
        let inj = Morphism::new(z2.clone(), z4.clone(), Matrix::from_rows(r, &[vec![2]]).unwrap())
            .unwrap();
        let surj = Morphism::new(z4.clone(), z2.clone(), Matrix::from_rows(r, &[vec![1]]).unwrap())
            .unwrap();
        let ses = ShortExactSequence::new(inj, surj).unwrap();
        let map = SesMap::new(
            ses.clone(),
            ses,
            Morphism::scalar(&z2, 2),
            Morphism::scalar(&z4, 2),
            Morphism::scalar(&z2, 2),
        )
        .unwrap();
        let s = map.snake().unwrap();
        assert!(s.is_exact().unwrap());
        // ker c = Z/2 maps isomorphically onto coker a = Z/2.
        assert!(s.connecting().is_iso());
    }
}
