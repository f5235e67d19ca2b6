use super::ChainComplex;
use crate::bifunctor::{hom_map, HomModule};
use crate::error::{Error, Result};
use crate::module::{homology, ElementTable, FPModule, Morphism, ShortExactSequence};
use crate::ring::Matrix;

/// Degrees covered by either complex.
fn span(a: &ChainComplex, b: &ChainComplex) -> (i64, i64) {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => (0, -1),
        (true, false) => (b.lo(), b.hi()),
        (false, true) => (a.lo(), a.hi()),
        (false, false) => (a.lo().min(b.lo()), a.hi().max(b.hi())),
    }
}

/// A chain map `fⁿ: Cⁿ → Dⁿ` with `d_D ∘ f = f ∘ d_C`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    lo: i64,
    components: Vec<Morphism>,
}

impl ChainMap {
    /// `components[i]` is the map in degree `lo + i`, where `[lo, hi]` spans
    /// both supports.
    pub fn new(source: ChainComplex, target: ChainComplex, components: Vec<Morphism>) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::ring_mismatch(source.ring(), target.ring()));
        }
        let (lo, hi) = span(&source, &target);
        if components.len() as i64 != hi - lo + 1 {
            return Err(Error::Shape(format!(
                "chain map needs {} components, got {}",
                hi - lo + 1,
                components.len()
            )));
        }
        for (i, f) in components.iter().enumerate() {
            let n = lo + i as i64;
            if !f.source().same(&source.module(n)) || !f.target().same(&target.module(n)) {
                return Err(Error::Shape(format!("component in degree {n} has wrong endpoints")));
            }
        }
        let map = ChainMap {
            source,
            target,
            lo,
            components,
        };
        for n in lo - 1..=hi {
            let left = map.source.differential(n).then(&map.component(n + 1))?;
            let right = map.component(n).then(&map.target.differential(n))?;
            if !left.equals(&right)? {
                return Err(Error::NonCommuting(format!("chain map square at degree {n}")));
            }
        }
        Ok(map)
    }

    pub fn identity(c: &ChainComplex) -> Self {
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            lo: c.lo(),
            components: c.modules().iter().map(Morphism::identity).collect(),
        }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        let (lo, hi) = span(source, target);
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            lo,
            components: (lo..=hi)
                .map(|n| Morphism::zero(&source.module(n), &target.module(n)))
                .collect(),
        }
    }

    /// `f` applied degreewise as the same module map, for sphere inputs.
    pub fn on_spheres(n: i64, f: &Morphism) -> Self {
        ChainMap {
            source: ChainComplex::sphere(n, f.source()),
            target: ChainComplex::sphere(n, f.target()),
            lo: n,
            components: vec![f.clone()],
        }
    }

    /// `Dⁿ(f)`.
    pub fn on_discs(n: i64, f: &Morphism) -> Self {
        ChainMap {
            source: ChainComplex::disc(n, f.source()),
            target: ChainComplex::disc(n, f.target()),
            lo: n,
            components: vec![f.clone(), f.clone()],
        }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.components.len() as i64 - 1
    }

    pub fn component(&self, n: i64) -> Morphism {
        if n >= self.lo && n <= self.hi() {
            self.components[(n - self.lo) as usize].clone()
        } else {
            Morphism::zero(&self.source.module(n), &self.target.module(n))
        }
    }

    /// The same map between both complexes stored over `[lo, hi]`.
    pub fn padded(&self, lo: i64, hi: i64) -> Result<Self> {
        let source = self.source.padded(lo, hi)?;
        let target = self.target.padded(lo, hi)?;
        let components = (lo..=hi).map(|n| self.component(n)).collect();
        ChainMap::new(source, target, components)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Morphism::is_zero)
    }

    pub fn then(&self, next: &ChainMap) -> Result<ChainMap> {
        let (lo, hi) = span(&self.source, &next.target);
        let (lo, hi) = (lo.min(self.lo).min(next.lo), hi.max(self.hi()).max(next.hi()));
        let comps = (lo..=hi)
            .map(|n| self.component(n).then(&next.component(n)))
            .collect::<Result<Vec<_>>>()?;
        let (slo, shi) = span(&self.source, &next.target);
        let keep: Vec<Morphism> = comps
            .into_iter()
            .zip(lo..=hi)
            .filter(|(_, n)| *n >= slo && *n <= shi)
            .map(|(f, _)| f)
            .collect();
        ChainMap::new(self.source.clone(), next.target.clone(), keep)
    }

    /// Degreewise monic.
    pub fn is_monic(&self) -> bool {
        self.components.iter().all(Morphism::is_monic)
    }

    /// Degreewise epic.
    pub fn is_epic(&self) -> bool {
        self.components.iter().all(Morphism::is_epic)
    }

    /// `Hⁿ(f): Hⁿ(C) → Hⁿ(D)`.
    pub fn on_homology(&self, n: i64) -> Result<Morphism> {
        let hc = homology(&self.source.differential(n - 1), &self.source.differential(n))?;
        let hd = homology(&self.target.differential(n - 1), &self.target.differential(n))?;
        let image = hc.inclusion.then(&self.component(n))?;
        let solver = hd.inclusion.preimage_solver();
        let rows = (0..image.matrix().rows())
            .map(|i| solver.solve(image.matrix().row(i)).expect("cycles map to cycles"))
            .collect::<Vec<_>>();
        let m = Matrix::from_residue_rows(self.source.ring(), hd.module.num_gens(), &rows);
        Morphism::new(hc.module, hd.module, m)
    }
}

/// Hom modules of a degree range with the linear map `φ` between their sums.
struct Stacked {
    homs: Vec<HomModule>,
    offsets: Vec<usize>,
    module: FPModule,
}

impl Stacked {
    fn new(homs: Vec<HomModule>) -> Result<Self> {
        let ring = homs[0].source().ring();
        let mut offsets = vec![0];
        for h in &homs {
            offsets.push(offsets.last().unwrap() + h.module().num_gens());
        }
        let mods: Vec<&FPModule> = homs.iter().map(HomModule::module).collect();
        let module = FPModule::direct_sum(ring, &mods)?.module;
        Ok(Stacked {
            homs,
            offsets,
            module,
        })
    }

    fn split(&self, v: &[u64]) -> Vec<Morphism> {
        self.homs
            .iter()
            .enumerate()
            .map(|(k, h)| h.to_morphism(&v[self.offsets[k]..self.offsets[k + 1]]))
            .collect()
    }

    fn join(&self, fs: &[Morphism]) -> Result<Vec<u64>> {
        let mut v = Vec::with_capacity(*self.offsets.last().unwrap());
        for (h, f) in self.homs.iter().zip(fs) {
            v.extend(h.from_morphism(f)?);
        }
        Ok(v)
    }
}

/// Places `block: from.homs[i] → to.homs[j]` into the big matrix.
fn place(m: &mut Matrix, from: &Stacked, i: usize, to: &Stacked, j: usize, block: &Morphism) {
    m.set_block(from.offsets[i], to.offsets[j], block.matrix());
}

/// Every chain map `c → d`, by solving `d_D f − f d_C = 0` on
/// `⊕ Hom(Cⁿ, Dⁿ)`.
pub fn chain_maps(c: &ChainComplex, d: &ChainComplex, cap: u128) -> Result<Vec<ChainMap>> {
    if c.ring() != d.ring() {
        return Err(Error::ring_mismatch(c.ring(), d.ring()));
    }
    let (lo, hi) = span(c, d);
    if hi < lo {
        return Ok(vec![ChainMap::zero(c, d)]);
    }
    let degrees: Vec<i64> = (lo..=hi).collect();
    let dom = Stacked::new(
        degrees
            .iter()
            .map(|&n| HomModule::new(&c.module(n), &d.module(n)))
            .collect::<Result<_>>()?,
    )?;
    let cod = Stacked::new(
        degrees
            .iter()
            .map(|&n| HomModule::new(&c.module(n), &d.module(n + 1)))
            .collect::<Result<_>>()?,
    )?;
    let ring = c.ring();
    let mut m = Matrix::zeros(ring, dom.module.num_gens(), cod.module.num_gens());
    for (k, &n) in degrees.iter().enumerate() {
        let post = hom_map(&Morphism::identity(&c.module(n)), &d.differential(n))?;
        place(&mut m, &dom, k, &cod, k, &post);
        if k + 1 < degrees.len() {
            let pre = hom_map(&c.differential(n), &Morphism::identity(&d.module(n + 1)))?;
            place(&mut m, &dom, k + 1, &cod, k, &pre.neg());
        }
    }
    let phi = Morphism::new(dom.module.clone(), cod.module.clone(), m)?;
    let (kernel, incl) = phi.kernel();
    let table = ElementTable::new(&kernel, cap)?;
    table
        .elements()
        .iter()
        .map(|x| ChainMap::new(c.clone(), d.clone(), dom.split(&incl.apply(x))))
        .collect()
}

/// A homotopy `sⁿ: Cⁿ → Dⁿ⁻¹` with `fⁿ = d_D sⁿ + sⁿ⁺¹ d_C`, or `None` when
/// no homotopy exists. The system is linear over a finite ring, so `None`
/// is a certificate.
pub fn null_homotopy(f: &ChainMap) -> Result<Option<Vec<Morphism>>> {
    let (c, d) = (f.source(), f.target());
    let (lo, hi) = (f.lo(), f.hi());
    if hi < lo {
        return Ok(Some(Vec::new()));
    }
    let degrees: Vec<i64> = (lo..=hi).collect();
    let dom = Stacked::new(
        degrees
            .iter()
            .map(|&n| HomModule::new(&c.module(n), &d.module(n - 1)))
            .collect::<Result<_>>()?,
    )?;
    let cod = Stacked::new(
        degrees
            .iter()
            .map(|&n| HomModule::new(&c.module(n), &d.module(n)))
            .collect::<Result<_>>()?,
    )?;
    let ring = c.ring();
    let mut m = Matrix::zeros(ring, dom.module.num_gens(), cod.module.num_gens());
    for (k, &n) in degrees.iter().enumerate() {
        let post = hom_map(&Morphism::identity(&c.module(n)), &d.differential(n - 1))?;
        place(&mut m, &dom, k, &cod, k, &post);
        if k + 1 < degrees.len() {
            let pre = hom_map(&c.differential(n), &Morphism::identity(&d.module(n)))?;
            place(&mut m, &dom, k + 1, &cod, k, &pre);
        }
    }
    let phi = Morphism::new(dom.module.clone(), cod.module.clone(), m)?;
    let comps: Vec<Morphism> = degrees.iter().map(|&n| f.component(n)).collect();
    let target = cod.join(&comps)?;
    let Some(x) = phi.preimage(&target) else {
        return Ok(None);
    };
    let s = dom.split(&x);
    for (k, &n) in degrees.iter().enumerate() {
        let mut sum = s[k].then(&d.differential(n - 1))?;
        if k + 1 < degrees.len() {
            sum = sum.add(&c.differential(n).then(&s[k + 1])?)?;
        }
        debug_assert!(sum.equals(&f.component(n))?);
    }
    Ok(Some(s))
}

/// `0 → A → B → C → 0`, exact in every degree.
#[derive(Clone, Debug)]
pub struct ComplexSes {
    pub inj: ChainMap,
    pub surj: ChainMap,
}

impl ComplexSes {
    pub fn new(inj: ChainMap, surj: ChainMap) -> Result<Self> {
        let (lo, hi) = span(inj.source(), surj.target());
        let (lo, hi) = (lo.min(inj.target().lo()), hi.max(inj.target().hi()));
        for n in lo..=hi {
            ShortExactSequence::new(inj.component(n), surj.component(n)).map_err(|e| {
                Error::InvalidArgument(format!("not exact in degree {n}: {e}"))
            })?;
        }
        Ok(ComplexSes { inj, surj })
    }

    /// The sequence with all three complexes stored over one common range.
    pub fn padded(&self) -> Result<Self> {
        let (lo, hi) = span(self.inj.source(), self.surj.target());
        let mid = self.inj.target();
        let (lo, hi) = if mid.is_empty() {
            (lo, hi)
        } else {
            (lo.min(mid.lo()), hi.max(mid.hi()))
        };
        Ok(ComplexSes {
            inj: self.inj.padded(lo, hi)?,
            surj: self.surj.padded(lo, hi)?,
        })
    }

    /// `Hⁿ(C) → Hⁿ⁺¹(A)`: lift a cycle to `Bⁿ`, apply `d`, pull back to `Aⁿ⁺¹`.
    pub fn connecting(&self, n: i64) -> Result<Morphism> {
        let (a, b, c) = (self.inj.source(), self.inj.target(), self.surj.target());
        let hc = homology(&c.differential(n - 1), &c.differential(n))?;
        let ha = homology(&a.differential(n), &a.differential(n + 1))?;
        let up = self.surj.component(n).preimage_solver();
        let back = self.inj.component(n + 1).preimage_solver();
        let into_cycles = ha.inclusion.preimage_solver();
        let dn = b.differential(n);
        let mut rows = Vec::new();
        for i in 0..hc.inclusion.matrix().rows() {
            let lift = up
                .solve(hc.inclusion.matrix().row(i))
                .ok_or_else(|| Error::PreconditionFailed("surjection does not lift".into()))?;
            let pulled = back
                .solve(&dn.apply(&lift))
                .ok_or_else(|| Error::PreconditionFailed("boundary leaves A".into()))?;
            rows.push(
                into_cycles
                    .solve(&pulled)
                    .ok_or_else(|| Error::PreconditionFailed("pulled back element is no cycle".into()))?,
            );
        }
        let m = Matrix::from_residue_rows(a.ring(), ha.module.num_gens(), &rows);
        Morphism::new(hc.module, ha.module, m)
    }

    /// `Hⁿ(A) → Hⁿ(B) → Hⁿ(C) → Hⁿ⁺¹(A) → Hⁿ⁺¹(B) → Hⁿ⁺¹(C)`.
    pub fn long_exact_segment(&self, n: i64) -> Result<[Morphism; 5]> {
        Ok([
            self.inj.on_homology(n)?,
            self.surj.on_homology(n)?,
            self.connecting(n)?,
            self.inj.on_homology(n + 1)?,
            self.surj.on_homology(n + 1)?,
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::doubling_z4;
    use super::*;
    use crate::module::is_exact;
    use crate::ring::Ring;

    #[test]
    fn identity_on_doubling_complex_is_not_null_homotopic() {
        let c = doubling_z4();
        assert!(null_homotopy(&ChainMap::identity(&c)).unwrap().is_none());
        assert!(null_homotopy(&ChainMap::zero(&c, &c)).unwrap().is_some());
    }

    #[test]
    fn disc_is_contractible() {
        let r = Ring::new(4).unwrap();
        let d = ChainComplex::disc(0, &FPModule::free(r, 1));
        let s = null_homotopy(&ChainMap::identity(&d)).unwrap().unwrap();
        assert!(s[1].matrix().get(0, 0) == 1);
    }

    #[test]
    fn chain_maps_of_doubling_complex() {
        let c = doubling_z4();
        // Pairs (a, b) in Z/4 with 2a = 2b.
        let maps = chain_maps(&c, &c, 4096).unwrap();
        assert_eq!(maps.len(), 8);
        let homotopic = maps
            .iter()
            .filter(|f| null_homotopy(f).unwrap().is_some())
            .count();
        // Null homotopic maps are 2s⁰ + 2s¹ style: a = 2s¹, b = 2s¹.
        assert_eq!(homotopic, 2);
    }

    #[test]
    fn sphere_inclusion_into_disc_gives_long_exact_sequence() {
        let r = Ring::new(4).unwrap();
        let m = FPModule::free(r, 1);
        let s1 = ChainComplex::sphere(1, &m).padded(0, 1).unwrap();
        let d0 = ChainComplex::disc(0, &m);
        let s0 = ChainComplex::sphere(0, &m).padded(0, 1).unwrap();
        let id = Morphism::identity(&m);
        let zero = Morphism::zero(&FPModule::zero(r), &m);
        let inj = ChainMap::new(s1.clone(), d0.clone(), vec![zero, id.clone()]).unwrap();
        let zero = Morphism::zero(&m, &FPModule::zero(r));
        let surj = ChainMap::new(d0, s0, vec![id, zero]).unwrap();
        let ses = ComplexSes::new(inj, surj).unwrap();
        let delta = ses.connecting(0).unwrap();
        assert!(delta.is_iso());
        let seg = ses.long_exact_segment(0).unwrap();
        for w in seg.windows(2) {
            assert!(is_exact(&w[0], &w[1]).unwrap());
        }
    }
}
