//! Finitely presented `Z/nZ`-modules and the abelian-category operations on
//! them.
//!
//! A module is the cokernel of its presentation matrix: generators are the
//! columns, relations the rows. Presentations are not unique, so anything
//! that asks "are these equal" goes through the cached normal form, a
//! Smith-form change of generators onto `⊕ Z/eᵢ` with `1 < eᵢ | n` and
//! `e₁ | e₂ | …`. A free summand has `eᵢ = n`.

mod cube;
mod elements;
mod extension;
mod limits;
mod morphism;
mod snake;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ring::{smith_form, Matrix, Ring};

pub use cube::{CubeCone, CubeDiagram, Puncture, MAX_ARITY};
pub use elements::{max_card, ElementTable, DEFAULT_MAX_CARD};
pub use extension::{realize_extension, Resolution, ShortExactSequence};
pub use limits::{homology, pullback, pushout, Homology, Pullback, Pushout};
pub use morphism::{Morphism, PreimageSolver};
pub use snake::{is_exact, SesMap, SnakeSequence};

#[derive(Clone)]
pub struct FPModule(Arc<Inner>);

struct Inner {
    ring: Ring,
    presentation: Matrix,
    normal: OnceLock<Normal>,
    resolution: OnceLock<Resolution>,
}

/// Change of generators onto the invariant-factor form.
struct Normal {
    invariants: Vec<u64>,
    /// `g × k`: generator coordinates to normal coordinates.
    to_normal: Matrix,
    /// `k × g`: normal generators written in the original generators.
    from_normal: Matrix,
}

impl FPModule {
    /// The cokernel of `presentation` (relations × generators).
    pub fn new(presentation: Matrix) -> FPModule {
        FPModule(Arc::new(Inner {
            ring: presentation.ring(),
            presentation,
            normal: OnceLock::new(),
            resolution: OnceLock::new(),
        }))
    }

    pub fn zero(ring: Ring) -> FPModule {
        FPModule::new(Matrix::zeros(ring, 0, 0))
    }

    pub fn free(ring: Ring, rank: usize) -> FPModule {
        FPModule::new(Matrix::zeros(ring, 0, rank))
    }

    /// `Z/d` viewed as a `Z/n`-module; `d` must divide `n`.
    pub fn cyclic(ring: Ring, d: u64) -> Result<FPModule> {
        FPModule::from_invariants(ring, &[d])
    }

    /// `⊕ Z/dᵢ`. Each `dᵢ` must divide `n`; `dᵢ = 1` contributes nothing.
    pub fn from_invariants(ring: Ring, ds: &[u64]) -> Result<FPModule> {
        let n = ring.modulus();
        if let Some(&d) = ds.iter().find(|&&d| d == 0 || !n.is_multiple_of(d)) {
            return Err(Error::InvalidArgument(format!("{d} does not divide {n}")));
        }
        let ds: Vec<u64> = ds.iter().copied().filter(|&d| d != 1).collect();
        let rel_idx: Vec<usize> = (0..ds.len()).filter(|&i| ds[i] != n).collect();
        let mut p = Matrix::zeros(ring, rel_idx.len(), ds.len());
        for (r, &i) in rel_idx.iter().enumerate() {
            p.set(r, i, ds[i]);
        }
        Ok(FPModule::new(p))
    }

    pub fn ring(&self) -> Ring {
        self.0.ring
    }

    pub fn presentation(&self) -> &Matrix {
        &self.0.presentation
    }

    pub fn num_gens(&self) -> usize {
        self.0.presentation.cols()
    }

    pub fn num_relations(&self) -> usize {
        self.0.presentation.rows()
    }

    fn normal(&self) -> &Normal {
        self.0.normal.get_or_init(|| {
            let ring = self.ring();
            let n = ring.modulus();
            let g = self.num_gens();
            let s = smith_form(&self.0.presentation);
            let mut keep = Vec::new();
            let mut invariants = Vec::new();
            for j in 0..g {
                let e = match s.diag.get(j) {
                    Some(&d) => ring.ideal_divisor(d),
                    None => n,
                };
                if e > 1 {
                    keep.push(j);
                    invariants.push(e);
                }
            }
            Normal {
                invariants,
                to_normal: s.right.select_cols(&keep),
                from_normal: s.right_inv.select_rows(&keep),
            }
        })
    }

    /// Canonical invariant factors `e₁ | e₂ | …`, each `1 < eᵢ | n`.
    pub fn invariants(&self) -> &[u64] {
        &self.normal().invariants
    }

    pub fn cardinality(&self) -> u128 {
        self.invariants().iter().map(|&e| e as u128).product()
    }

    pub fn is_zero(&self) -> bool {
        self.invariants().is_empty()
    }

    /// Every summand is `Z/n`. Projectives need not be free when `n` has
    /// several prime factors.
    pub fn is_free(&self) -> bool {
        let n = self.ring().modulus();
        self.invariants().iter().all(|&e| e == n)
    }

    pub fn is_isomorphic(&self, other: &FPModule) -> Result<bool> {
        self.check_ring(other)?;
        Ok(self.invariants() == other.invariants())
    }

    pub(crate) fn check_ring(&self, other: &FPModule) -> Result<()> {
        if self.ring() != other.ring() {
            return Err(Error::ring_mismatch(self.ring(), other.ring()));
        }
        Ok(())
    }

    /// Same presentation, hence literally the same module.
    pub fn same(&self, other: &FPModule) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.presentation == other.0.presentation
    }

    /// Normal coordinates of an element, each reduced modulo its order.
    /// Two generator vectors define the same element iff these agree.
    pub fn canonical(&self, v: &[u64]) -> Vec<u64> {
        let nf = self.normal();
        let mut y = nf.to_normal.apply_row(v);
        for (x, &e) in y.iter_mut().zip(&nf.invariants) {
            *x %= e;
        }
        y
    }

    pub fn is_zero_element(&self, v: &[u64]) -> bool {
        self.canonical(v).iter().all(|&x| x == 0)
    }

    /// Generator coordinates of the element with the given normal coordinates.
    pub fn from_canonical(&self, y: &[u64]) -> Vec<u64> {
        self.normal().from_normal.apply_row(y)
    }

    /// The diagonal module `⊕ Z/eᵢ` with mutually inverse isomorphisms
    /// `self → normal` and `normal → self`.
    pub fn normalized(&self) -> (FPModule, Morphism, Morphism) {
        let nf = self.normal();
        let d = FPModule::from_invariants(self.ring(), &nf.invariants)
            .expect("invariants divide the modulus");
        let to = Morphism::new_unchecked(self.clone(), d.clone(), nf.to_normal.clone());
        let from = Morphism::new_unchecked(d.clone(), self.clone(), nf.from_normal.clone());
        (d, to, from)
    }

    /// True when the presentation is already the diagonal invariant form.
    pub fn is_normalized(&self) -> bool {
        match FPModule::from_invariants(self.ring(), self.invariants()) {
            Ok(d) => d.presentation() == self.presentation(),
            Err(_) => false,
        }
    }

    /// The cached periodic free resolution of the normal form.
    pub fn resolution(&self) -> &Resolution {
        self.0.resolution.get_or_init(|| Resolution::build(self))
    }

    /// `⊕ modules` with injections and projections, block-diagonal.
    pub fn direct_sum(ring: Ring, modules: &[&FPModule]) -> Result<DirectSum> {
        for m in modules {
            if m.ring() != ring {
                return Err(Error::ring_mismatch(ring, m.ring()));
            }
        }
        let blocks: Vec<&Matrix> = modules.iter().map(|m| m.presentation()).collect();
        let sum = FPModule::new(Matrix::block_diag(&blocks, ring));
        let total = sum.num_gens();
        let mut offset = 0;
        let mut injections = Vec::new();
        let mut projections = Vec::new();
        for m in modules {
            let g = m.num_gens();
            let mut inj = Matrix::zeros(ring, g, total);
            let mut proj = Matrix::zeros(ring, total, g);
            for i in 0..g {
                inj.set(i, offset + i, 1);
                proj.set(offset + i, i, 1);
            }
            injections.push(Morphism::new_unchecked((*m).clone(), sum.clone(), inj));
            projections.push(Morphism::new_unchecked(sum.clone(), (*m).clone(), proj));
            offset += g;
        }
        Ok(DirectSum {
            module: sum,
            injections,
            projections,
        })
    }

    /// Binary direct sum without the structure maps.
    pub fn oplus(&self, other: &FPModule) -> Result<FPModule> {
        Ok(FPModule::direct_sum(self.ring(), &[self, other])?.module)
    }

    pub fn elements(&self) -> Result<ElementTable> {
        ElementTable::new(self, max_card())
    }

    /// Short human-readable name such as `Z/2+Z/4` or `0`.
    pub fn describe(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.invariants()
            .iter()
            .map(|e| format!("Z/{e}"))
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// A finite direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: FPModule,
    pub injections: Vec<Morphism>,
    pub projections: Vec<Morphism>,
}

impl PartialEq for FPModule {
    fn eq(&self, other: &FPModule) -> bool {
        self.same(other)
    }
}

impl Eq for FPModule {}

impl fmt::Debug for FPModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FPModule<{}>[{}]", self.ring(), self.describe())
    }
}

impl fmt::Display for FPModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ModuleRepr {
    Presentation { ring: u64, presentation: Matrix },
    Invariants { ring: u64, invariants: Vec<u64> },
}

impl Serialize for FPModule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModuleRepr::Presentation {
            ring: self.ring().modulus(),
            presentation: self.presentation().clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FPModule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<FPModule, D::Error> {
        use serde::de::Error as _;
        match ModuleRepr::deserialize(d)? {
            ModuleRepr::Presentation { ring, presentation } => {
                if presentation.ring().modulus() != ring {
                    return Err(D::Error::custom("presentation ring differs from module ring"));
                }
                Ok(FPModule::new(presentation))
            }
            ModuleRepr::Invariants { ring, invariants } => {
                let ring = Ring::new(ring).map_err(D::Error::custom)?;
                FPModule::from_invariants(ring, &invariants).map_err(D::Error::custom)
            }
        }
    }
}
