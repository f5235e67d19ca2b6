use super::limits::embed;
use super::{FPModule, Morphism};
use crate::error::{Error, Result};
use crate::ring::Matrix;

/// The periodic free resolution of `D ≅ ⊕ Z/eᵢ`:
///
/// `… → R^k --diag(e)--> R^k --diag(n/e)--> R^k --diag(e)--> R^k → D → 0`.
///
/// All free terms are the same module `free`. The first syzygy is
/// `K = ⊕ Z/(n/eᵢ)` included into `free` by `diag(e)`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub invariants: Vec<u64>,
    pub free: FPModule,
    /// `d1: F1 → F0`, `d2: F2 → F1`, `d3: F3 → F2`.
    pub differentials: [Matrix; 3],
    pub syzygy: FPModule,
    pub syzygy_inclusion: Morphism,
    /// `k × g`: the free generators written in the generators of `D`.
    pub cover_matrix: Matrix,
}

impl Resolution {
    pub(crate) fn build(d: &FPModule) -> Resolution {
        let ring = d.ring();
        let n = ring.modulus();
        let e: Vec<u64> = d.invariants().to_vec();
        let k = e.len();
        let free = FPModule::free(ring, k);
        let de = Matrix::diagonal(ring, &e);
        let co: Vec<u64> = e.iter().map(|&x| n / x).collect();
        let dco = Matrix::diagonal(ring, &co);
        let syzygy = FPModule::new(dco.clone());
        let syzygy_inclusion = Morphism::new_unchecked(syzygy.clone(), free.clone(), de.clone());
        let (_, _, from) = d.normalized();
        Resolution {
            invariants: e,
            free,
            differentials: [de.clone(), dco, de],
            syzygy,
            syzygy_inclusion,
            cover_matrix: from.matrix().clone(),
        }
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }
}

impl FPModule {
    /// The free cover `F0 → self` of the cached resolution.
    pub fn free_cover(&self) -> Morphism {
        let res = self.resolution();
        Morphism::new_unchecked(res.free.clone(), self.clone(), res.cover_matrix.clone())
    }

    /// The first syzygy `K` of the cached resolution.
    pub fn syzygy(&self) -> &FPModule {
        &self.resolution().syzygy
    }
}

/// `0 → left → mid → right → 0`, validated at construction.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    inj: Morphism,
    surj: Morphism,
}

impl ShortExactSequence {
    pub fn new(inj: Morphism, surj: Morphism) -> Result<ShortExactSequence> {
        if !inj.target().same(surj.source()) {
            return Err(Error::Shape("inj and surj do not share the middle term".into()));
        }
        if !inj.then(&surj)?.is_zero() {
            return Err(Error::NotAComplex("surj ∘ inj is not zero".into()));
        }
        if !inj.is_monic() {
            return Err(Error::InvalidArgument("inj is not monic".into()));
        }
        if !surj.is_epic() {
            return Err(Error::InvalidArgument("surj is not epic".into()));
        }
        // With inj monic, surj epic and surj ∘ inj = 0, equal orders force
        // im(inj) = ker(surj).
        let (l, m, r) = (inj.source(), inj.target(), surj.target());
        if l.cardinality() * r.cardinality() != m.cardinality() {
            return Err(Error::InvalidArgument("image of inj is not the kernel of surj".into()));
        }
        Ok(ShortExactSequence { inj, surj })
    }

    /// `0 → a → a ⊕ b → b → 0`.
    pub fn split(a: &FPModule, b: &FPModule) -> Result<ShortExactSequence> {
        let s = FPModule::direct_sum(a.ring(), &[a, b])?;
        ShortExactSequence::new(s.injections[0].clone(), s.projections[1].clone())
    }

    pub fn left(&self) -> &FPModule {
        self.inj.source()
    }

    pub fn mid(&self) -> &FPModule {
        self.inj.target()
    }

    pub fn right(&self) -> &FPModule {
        self.surj.target()
    }

    pub fn inj(&self) -> &Morphism {
        &self.inj
    }

    pub fn surj(&self) -> &Morphism {
        &self.surj
    }

    /// A representative `K → left` of the extension class, `K` the syzygy of
    /// `right`: lift the free cover through `surj`, restrict to `K`, and pull
    /// back along `inj`.
    pub fn class_representative(&self) -> Result<Morphism> {
        let d = self.right();
        let res = d.resolution();
        let ring = d.ring();
        let lift_solver = self.surj.preimage_solver();
        let mut phi_rows = Vec::with_capacity(res.rank());
        for i in 0..res.rank() {
            phi_rows.push(
                lift_solver
                    .solve(res.cover_matrix.row(i))
                    .ok_or_else(|| Error::InvalidArgument("surj is not epic".into()))?,
            );
        }
        let phi = Matrix::from_residue_rows(ring, self.mid().num_gens(), &phi_rows);
        let on_k = res.syzygy_inclusion.matrix().mul(&phi)?;
        let back = self.inj.preimage_solver();
        let mut rows = Vec::with_capacity(on_k.rows());
        for i in 0..on_k.rows() {
            rows.push(back.solve(on_k.row(i)).ok_or_else(|| {
                Error::InvalidArgument("sequence is not exact at the middle".into())
            })?);
        }
        let m = Matrix::from_residue_rows(ring, self.left().num_gens(), &rows);
        Morphism::new(res.syzygy.clone(), self.left().clone(), m)
    }
}

/// Realizes the extension `0 → x → Y → d → 0` whose class is represented by
/// `cls: K → x`, `K` the registered syzygy of `d`. `Y` is the pushout of the
/// syzygy inclusion along `cls`.
pub fn realize_extension(d: &FPModule, x: &FPModule, cls: &Morphism) -> Result<ShortExactSequence> {
    d.check_ring(x)?;
    let res = d.resolution();
    if !cls.source().same(&res.syzygy) {
        return Err(Error::InvalidArgument(format!(
            "class source is not the registered syzygy of {d}"
        )));
    }
    if !cls.target().same(x) {
        return Err(Error::InvalidArgument("class target differs from x".into()));
    }
    let ring = d.ring();
    let (gx, k) = (x.num_gens(), res.rank());
    let mut pres = Matrix::zeros(ring, x.num_relations(), gx + k);
    pres.set_block(0, 0, x.presentation());
    let mut glue = Matrix::zeros(ring, k, gx + k);
    glue.set_block(0, 0, &cls.matrix().neg());
    glue.set_block(0, gx, res.syzygy_inclusion.matrix());
    let y = FPModule::new(pres.vstack(&glue)?);
    let inj = Morphism::new_unchecked(x.clone(), y.clone(), embed(ring, gx, gx + k, 0));
    let mut surj_m = Matrix::zeros(ring, gx + k, d.num_gens());
    surj_m.set_block(gx, 0, &res.cover_matrix);
    let surj = Morphism::new(y, d.clone(), surj_m)?;
    ShortExactSequence::new(inj, surj)
}
