use serde::{Deserialize, Serialize};

use super::{ChainComplex, ChainMap};
use crate::bifunctor::{MultiFunctor, Variance};
use crate::error::{Error, Result};
use crate::module::{FPModule, Morphism, MAX_ARITY};
use crate::ring::{Matrix, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TotalFlavor {
    Sum,
    Product,
}

/// An `n`-complex on a finite box of `Zⁿ`.
///
/// Vertices are stored in mixed radix with the first axis most
/// significant. Directional differentials commute and square to zero; the
/// signs are introduced only when totalizing.
#[derive(Clone, Debug)]
pub struct MultiComplex {
    ring: Ring,
    lo: Vec<i64>,
    shape: Vec<usize>,
    modules: Vec<FPModule>,
    /// `diffs[v][i]` goes from `v` to `v + eᵢ`, absent on the upper face.
    diffs: Vec<Vec<Option<Morphism>>>,
}

impl MultiComplex {
    fn coords(&self, mut v: usize) -> Vec<usize> {
        let mut c = vec![0; self.shape.len()];
        for i in (0..self.shape.len()).rev() {
            c[i] = v % self.shape[i];
            v /= self.shape[i];
        }
        c
    }

    fn index(&self, c: &[usize]) -> usize {
        c.iter().zip(&self.shape).fold(0, |acc, (&x, &s)| acc * s + x)
    }

    fn degrees(&self, v: usize) -> Vec<i64> {
        self.coords(v)
            .iter()
            .zip(&self.lo)
            .map(|(&x, &l)| l + x as i64)
            .collect()
    }

    fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn arity(&self) -> usize {
        self.shape.len()
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Checks endpoints, `dᵢ ∘ dᵢ = 0` and `dᵢ dⱼ = dⱼ dᵢ`.
    pub fn new(
        ring: Ring,
        lo: Vec<i64>,
        shape: Vec<usize>,
        modules: Vec<FPModule>,
        diffs: Vec<Vec<Option<Morphism>>>,
    ) -> Result<Self> {
        if lo.len() != shape.len() || shape.is_empty() || shape.len() > MAX_ARITY {
            return Err(Error::Shape("multicomplex axes are inconsistent".into()));
        }
        let mc = MultiComplex {
            ring,
            lo,
            shape,
            modules,
            diffs,
        };
        if mc.modules.len() != mc.len() || mc.diffs.len() != mc.len() {
            return Err(Error::Shape("multicomplex box size mismatch".into()));
        }
        for v in 0..mc.len() {
            let c = mc.coords(v);
            for i in 0..mc.arity() {
                let w = mc.step(&c, i);
                match (&mc.diffs[v][i], w) {
                    (None, None) => {}
                    (Some(d), Some(w)) => {
                        if !d.source().same(&mc.modules[v]) || !d.target().same(&mc.modules[w]) {
                            return Err(Error::Shape(format!("differential {i} at {c:?} misplaced")));
                        }
                    }
                    _ => return Err(Error::Shape(format!("differential {i} at {c:?} missing"))),
                }
            }
        }
        for v in 0..mc.len() {
            let c = mc.coords(v);
            for i in 0..mc.arity() {
                for j in 0..mc.arity() {
                    let Some(w) = mc.step(&c, i) else { continue };
                    let Some(x) = mc.step(&mc.coords(w), j) else { continue };
                    let ij = mc.diffs[v][i].as_ref().unwrap().then(mc.diffs[w][j].as_ref().unwrap())?;
                    if i == j {
                        if !ij.is_zero() {
                            return Err(Error::NotAComplex(format!("d{i}∘d{i} ≠ 0 at {c:?}")));
                        }
                        continue;
                    }
                    let y = mc.step(&c, j).unwrap();
                    let ji = mc.diffs[v][j].as_ref().unwrap().then(mc.diffs[y][i].as_ref().unwrap())?;
                    debug_assert_eq!(mc.step(&mc.coords(y), i), Some(x));
                    if !ij.equals(&ji)? {
                        return Err(Error::NonCommuting(format!("d{i} and d{j} at {c:?}")));
                    }
                }
            }
        }
        Ok(mc)
    }

    fn step(&self, c: &[usize], i: usize) -> Option<usize> {
        if c[i] + 1 >= self.shape[i] {
            return None;
        }
        let mut d = c.to_vec();
        d[i] += 1;
        Some(self.index(&d))
    }

    /// `F(A₁^{α₁}, …, Aₙ^{αₙ})`, with contravariant slots read at `−αᵢ`.
    pub fn from_functor(f: &dyn MultiFunctor, complexes: &[ChainComplex]) -> Result<Self> {
        if complexes.len() != f.arity() {
            return Err(Error::InvalidArgument(format!(
                "{} takes {} complexes, got {}",
                f.name(),
                f.arity(),
                complexes.len()
            )));
        }
        let n = complexes.len();
        let contra: Vec<bool> = (0..n).map(|i| f.variance(i) == Variance::Contravariant).collect();
        let lo: Vec<i64> = complexes
            .iter()
            .zip(&contra)
            .map(|(c, &k)| if k { -c.hi() } else { c.lo() })
            .collect();
        let shape: Vec<usize> = complexes.iter().map(ChainComplex::len).collect();
        let mut mc = MultiComplex {
            ring: f.target_ring(),
            lo,
            shape,
            modules: Vec::new(),
            diffs: Vec::new(),
        };
        let slot_module = |i: usize, deg: i64| {
            if contra[i] {
                complexes[i].module(-deg)
            } else {
                complexes[i].module(deg)
            }
        };
        let mut objs_at = Vec::with_capacity(mc.len());
        for v in 0..mc.len() {
            let degs = mc.degrees(v);
            let objs: Vec<FPModule> = (0..n).map(|i| slot_module(i, degs[i])).collect();
            mc.modules.push(f.apply(&objs)?);
            objs_at.push(objs);
        }
        for (v, objs) in objs_at.iter().enumerate() {
            let c = mc.coords(v);
            let degs = mc.degrees(v);
            let mut row = Vec::with_capacity(n);
            for i in 0..n {
                if mc.step(&c, i).is_none() {
                    row.push(None);
                    continue;
                }
                let mut maps: Vec<Morphism> = objs.iter().map(Morphism::identity).collect();
                maps[i] = if contra[i] {
                    complexes[i].differential(-degs[i] - 1)
                } else {
                    complexes[i].differential(degs[i])
                };
                row.push(Some(f.apply_morphism(&maps)?));
            }
            mc.diffs.push(row);
        }
        MultiComplex::new(mc.ring, mc.lo, mc.shape, mc.modules, mc.diffs)
    }

    /// Vertices of total degree `k`, in storage order.
    fn layer(&self, k: i64) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| self.degrees(v).iter().sum::<i64>() == k)
            .collect()
    }

    /// `(−1)^(α₁ + … + αᵢ₋₁)` at vertex `v` for axis `i`.
    fn sign(&self, v: usize, i: usize) -> u64 {
        let s: i64 = self.degrees(v)[..i].iter().sum();
        if s.rem_euclid(2) == 0 {
            1
        } else {
            self.ring.neg(1)
        }
    }
}

struct Layer {
    vertices: Vec<usize>,
    offsets: Vec<usize>,
    module: FPModule,
}

fn layer(mc: &MultiComplex, k: i64) -> Result<Layer> {
    let vertices = mc.layer(k);
    let mut offsets = vec![0];
    for &v in &vertices {
        offsets.push(offsets.last().unwrap() + mc.modules[v].num_gens());
    }
    let mods: Vec<&FPModule> = vertices.iter().map(|&v| &mc.modules[v]).collect();
    let module = if mods.is_empty() {
        FPModule::zero(mc.ring)
    } else {
        FPModule::direct_sum(mc.ring, &mods)?.module
    };
    Ok(Layer {
        vertices,
        offsets,
        module,
    })
}

impl Layer {
    fn position(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }
}

/// `Totᵏ = ⊕_{|α| = k} M_α` with `d = Σᵢ (−1)^(α₁+…+αᵢ₋₁) dᵢ`.
///
/// The sum flavor assembles the differential row by row from each source
/// vertex; the product flavor assembles it column by column from each
/// target vertex. Over a finite box both give the same complex.
pub fn total_complex(mc: &MultiComplex, flavor: TotalFlavor) -> Result<ChainComplex> {
    if mc.len() == 0 {
        return Ok(ChainComplex::zero(mc.ring));
    }
    let lo: i64 = mc.lo.iter().sum();
    let hi: i64 = mc
        .lo
        .iter()
        .zip(&mc.shape)
        .map(|(&l, &s)| l + s as i64 - 1)
        .sum();
    let layers = (lo..=hi).map(|k| layer(mc, k)).collect::<Result<Vec<_>>>()?;
    let mut diffs = Vec::new();
    for k in 0..layers.len().saturating_sub(1) {
        let (src, tgt) = (&layers[k], &layers[k + 1]);
        let mut m = Matrix::zeros(mc.ring, src.module.num_gens(), tgt.module.num_gens());
        let mut put = |v: usize, i: usize, w: usize| {
            let (a, b) = (src.position(v).unwrap(), tgt.position(w).unwrap());
            let d = mc.diffs[v][i].as_ref().unwrap().matrix().scale(mc.sign(v, i));
            m.set_block(src.offsets[a], tgt.offsets[b], &d);
        };
        match flavor {
            TotalFlavor::Sum => {
                for &v in &src.vertices {
                    let c = mc.coords(v);
                    for i in 0..mc.arity() {
                        if let Some(w) = mc.step(&c, i) {
                            put(v, i, w);
                        }
                    }
                }
            }
            TotalFlavor::Product => {
                for &w in &tgt.vertices {
                    let c = mc.coords(w);
                    for i in 0..mc.arity() {
                        if c[i] > 0 {
                            let mut s = c.clone();
                            s[i] -= 1;
                            put(mc.index(&s), i, w);
                        }
                    }
                }
            }
        }
        diffs.push(Morphism::new(src.module.clone(), tgt.module.clone(), m)?);
    }
    let modules = layers.into_iter().map(|l| l.module).collect();
    ChainComplex::new(mc.ring, lo, modules, diffs)
}

/// `Ch(F)(A₁•, …, Aₙ•)`.
pub fn lift_functor(f: &dyn MultiFunctor, complexes: &[ChainComplex]) -> Result<ChainComplex> {
    total_complex(&MultiComplex::from_functor(f, complexes)?, TotalFlavor::Sum)
}

/// `Ch(F)(f₁, …, fₙ)` for chain maps whose source and target share a
/// stored support; contravariant slots reverse the direction as for
/// modules.
pub fn lift_functor_map(f: &dyn MultiFunctor, maps: &[ChainMap]) -> Result<ChainMap> {
    for m in maps {
        if m.source().lo() != m.target().lo() || m.source().len() != m.target().len() {
            return Err(Error::InvalidArgument(
                "lifting a chain map needs equal stored supports; pad first".into(),
            ));
        }
    }
    let contra: Vec<bool> = (0..maps.len())
        .map(|i| f.variance(i) == Variance::Contravariant)
        .collect();
    let pick = |from_source: bool| -> Vec<ChainComplex> {
        maps.iter()
            .zip(&contra)
            .map(|(m, &k)| {
                if k != from_source {
                    m.source().clone()
                } else {
                    m.target().clone()
                }
            })
            .collect()
    };
    let src_mc = MultiComplex::from_functor(f, &pick(true))?;
    let tgt_mc = MultiComplex::from_functor(f, &pick(false))?;
    let src = total_complex(&src_mc, TotalFlavor::Sum)?;
    let tgt = total_complex(&tgt_mc, TotalFlavor::Sum)?;
    let mut comps = Vec::new();
    for k in src.lo()..=src.hi() {
        let (ls, lt) = (layer(&src_mc, k)?, layer(&tgt_mc, k)?);
        let mut m = Matrix::zeros(src_mc.ring, ls.module.num_gens(), lt.module.num_gens());
        for (a, &v) in ls.vertices.iter().enumerate() {
            let degs = src_mc.degrees(v);
            let args: Vec<Morphism> = maps
                .iter()
                .enumerate()
                .map(|(i, g)| g.component(if contra[i] { -degs[i] } else { degs[i] }))
                .collect();
            let b = lt.position(v).expect("equal supports give equal layers");
            m.set_block(ls.offsets[a], lt.offsets[b], f.apply_morphism(&args)?.matrix());
        }
        comps.push(Morphism::new(ls.module, lt.module, m)?);
    }
    ChainMap::new(src, tgt, comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bifunctor::{Identity, Tensor, TensorHom};

    fn z4() -> Ring {
        Ring::new(4).unwrap()
    }

    #[test]
    fn tensor_of_spheres_is_a_sphere() {
        let r = z4();
        let t = Tensor { ring: r, arity: 2 };
        let a = FPModule::cyclic(r, 2).unwrap();
        let b = FPModule::free(r, 1);
        let c = lift_functor(&t, &[ChainComplex::sphere(1, &a), ChainComplex::sphere(2, &b)]).unwrap();
        assert_eq!((c.lo(), c.len()), (3, 1));
        assert_eq!(c.module(3).invariants(), &[2]);
    }

    #[test]
    fn tensor_of_sphere_and_disc_is_a_disc() {
        let r = z4();
        let t = Tensor { ring: r, arity: 2 };
        let z2 = FPModule::cyclic(r, 2).unwrap();
        let c = lift_functor(
            &t,
            &[ChainComplex::sphere(0, &z2), ChainComplex::disc(0, &FPModule::free(r, 1))],
        )
        .unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.module(0).invariants(), &[2]);
        assert!(c.differential(0).is_iso());
        assert!(c.is_exact());
    }

    #[test]
    fn flavors_agree_and_square_to_zero() {
        let r = z4();
        let t = Tensor { ring: r, arity: 3 };
        let m = FPModule::free(r, 1);
        let two = ChainComplex::from_maps(0, vec![Morphism::scalar(&m, 2)]).unwrap();
        let disc = ChainComplex::disc(-1, &m);
        let mc = MultiComplex::from_functor(&t, &[two.clone(), disc, two]).unwrap();
        let a = total_complex(&mc, TotalFlavor::Sum).unwrap();
        let b = total_complex(&mc, TotalFlavor::Product).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.differentials().iter().zip(b.differentials()) {
            assert_eq!(x.matrix(), y.matrix());
        }
    }

    #[test]
    fn identity_lift_is_identity() {
        let r = z4();
        let c = super::super::tests::doubling_z4();
        let l = lift_functor(&Identity { ring: r }, std::slice::from_ref(&c)).unwrap();
        assert_eq!(l.describe(), c.describe());
        assert_eq!(l.differential(0).matrix(), c.differential(0).matrix());
    }

    #[test]
    fn hom_complex_reverses_degrees() {
        let r = z4();
        let h = TensorHom::hom(r);
        let m = FPModule::free(r, 1);
        let c = ChainComplex::disc(0, &m);
        let l = lift_functor(&h, &[c, ChainComplex::sphere(0, &m)]).unwrap();
        assert_eq!((l.lo(), l.hi()), (-1, 0));
        assert!(l.is_exact());
    }

    #[test]
    fn lifted_maps_are_chain_maps() {
        let r = z4();
        let t = Tensor { ring: r, arity: 2 };
        let m = FPModule::free(r, 1);
        let z2 = FPModule::cyclic(r, 2).unwrap();
        let inc = Morphism::new(z2, m.clone(), Matrix::from_rows(r, &[vec![2]]).unwrap()).unwrap();
        let f = ChainMap::on_spheres(0, &inc);
        let g = ChainMap::identity(&ChainComplex::disc(0, &m));
        let l = lift_functor_map(&t, &[f, g]).unwrap();
        assert!(l.is_monic());
    }
}
