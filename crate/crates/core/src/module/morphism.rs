use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{max_card, ElementTable, FPModule};
use crate::error::{Error, Result};
use crate::ring::{LeftSolver, Matrix};

/// A module homomorphism given by the images of the source generators.
///
/// Row `i` of `matrix` holds the target coordinates of source generator `i`.
/// Construction checks that every source relation maps into the target's
/// relations.
#[derive(Clone)]
pub struct Morphism {
    source: FPModule,
    target: FPModule,
    matrix: Matrix,
}

impl Morphism {
    pub fn new(source: FPModule, target: FPModule, matrix: Matrix) -> Result<Morphism> {
        source.check_ring(&target)?;
        if matrix.ring() != source.ring() {
            return Err(Error::ring_mismatch(source.ring(), matrix.ring()));
        }
        if matrix.rows() != source.num_gens() || matrix.cols() != target.num_gens() {
            return Err(Error::Shape(format!(
                "morphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                source.num_gens(),
                target.num_gens()
            )));
        }
        let images = source.presentation().mul(&matrix)?;
        for i in 0..images.rows() {
            if !target.is_zero_element(images.row(i)) {
                return Err(Error::NotWellDefined(format!(
                    "relation {i} of {source} maps to a nonzero element of {target}"
                )));
            }
        }
        Ok(Morphism {
            source,
            target,
            matrix,
        })
    }

    pub(crate) fn new_unchecked(source: FPModule, target: FPModule, matrix: Matrix) -> Morphism {
        debug_assert_eq!(matrix.rows(), source.num_gens());
        debug_assert_eq!(matrix.cols(), target.num_gens());
        Morphism {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(m: &FPModule) -> Morphism {
        Morphism::new_unchecked(m.clone(), m.clone(), Matrix::identity(m.ring(), m.num_gens()))
    }

    pub fn zero(source: &FPModule, target: &FPModule) -> Morphism {
        Morphism::new_unchecked(
            source.clone(),
            target.clone(),
            Matrix::zeros(source.ring(), source.num_gens(), target.num_gens()),
        )
    }

    /// Multiplication by `c` on `m`.
    pub fn scalar(m: &FPModule, c: u64) -> Morphism {
        Morphism::new_unchecked(m.clone(), m.clone(), Matrix::scalar(m.ring(), m.num_gens(), c))
    }

    pub fn source(&self) -> &FPModule {
        &self.source
    }

    pub fn target(&self) -> &FPModule {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Image of an element given in source generator coordinates.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        self.matrix.apply_row(v)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Morphism) -> Result<Morphism> {
        other.then(self)
    }

    /// `next ∘ self`: first `self`, then `next`.
    pub fn then(&self, next: &Morphism) -> Result<Morphism> {
        if !self.target.same(&next.source) {
            return Err(Error::Shape(format!(
                "cannot compose: {} is not the source {}",
                self.target, next.source
            )));
        }
        Ok(Morphism::new_unchecked(
            self.source.clone(),
            next.target.clone(),
            self.matrix.mul(&next.matrix)?,
        ))
    }

    fn check_parallel(&self, other: &Morphism) -> Result<()> {
        if !self.source.same(&other.source) || !self.target.same(&other.target) {
            return Err(Error::Shape("morphisms are not parallel".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        self.check_parallel(other)?;
        Ok(Morphism::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            self.matrix.add(&other.matrix)?,
        ))
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism> {
        self.check_parallel(other)?;
        Ok(Morphism::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            self.matrix.sub(&other.matrix)?,
        ))
    }

    pub fn neg(&self) -> Morphism {
        Morphism::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.neg())
    }

    pub fn scale(&self, c: u64) -> Morphism {
        Morphism::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.scale(c))
    }

    /// Sends every generator to zero in the target.
    pub fn is_zero(&self) -> bool {
        (0..self.matrix.rows()).all(|i| self.target.is_zero_element(self.matrix.row(i)))
    }

    /// Equality as maps, independent of the chosen matrix.
    pub fn equals(&self, other: &Morphism) -> Result<bool> {
        Ok(self.sub(other)?.is_zero())
    }

    /// One `x` with `self(x) = y`, if any.
    pub fn preimage(&self, y: &[u64]) -> Option<Vec<u64>> {
        self.preimage_solver().solve(y)
    }

    /// Reusable solver for repeated preimage queries.
    pub fn preimage_solver(&self) -> PreimageSolver {
        let stacked = self
            .matrix
            .vstack(self.target.presentation())
            .expect("shapes agree by construction");
        PreimageSolver {
            gens: self.source.num_gens(),
            solver: LeftSolver::new(&stacked),
        }
    }

    /// Injectivity through the kernel's invariants.
    pub fn is_monic_structural(&self) -> bool {
        self.kernel().0.is_zero()
    }

    /// Surjectivity through the cokernel's invariants.
    pub fn is_epic_structural(&self) -> bool {
        self.cokernel().0.is_zero()
    }

    /// Injectivity by enumerating the source.
    pub fn is_monic_elementwise(&self, cap: u128) -> Result<bool> {
        let table = ElementTable::new(&self.source, cap)?;
        let mut seen = HashSet::with_capacity(table.len());
        Ok(table
            .elements()
            .iter()
            .all(|v| seen.insert(self.target.canonical(&self.apply(v)))))
    }

    /// Surjectivity by enumerating the source and counting distinct images.
    pub fn is_epic_elementwise(&self, cap: u128) -> Result<bool> {
        let table = ElementTable::new(&self.source, cap)?;
        let images: HashSet<Vec<u64>> = table
            .elements()
            .iter()
            .map(|v| self.target.canonical(&self.apply(v)))
            .collect();
        Ok(images.len() as u128 == self.target.cardinality())
    }

    /// Elementwise below the enumeration cap, structural above it.
    pub fn is_monic(&self) -> bool {
        match self.is_monic_elementwise(max_card()) {
            Ok(b) => b,
            Err(_) => self.is_monic_structural(),
        }
    }

    /// Elementwise below the enumeration cap, structural above it.
    pub fn is_epic(&self) -> bool {
        match self.is_epic_elementwise(max_card()) {
            Ok(b) => b,
            Err(_) => self.is_epic_structural(),
        }
    }

    pub fn is_iso(&self) -> bool {
        self.is_monic_structural() && self.is_epic_structural()
    }
}

/// Solver for `f(x) = y` with `f` fixed.
pub struct PreimageSolver {
    gens: usize,
    solver: LeftSolver,
}

impl PreimageSolver {
    pub fn solve(&self, y: &[u64]) -> Option<Vec<u64>> {
        let mut x = self.solver.solve(y)?;
        x.truncate(self.gens);
        Some(x)
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Morphism({} -> {}, {:?})",
            self.source,
            self.target,
            self.matrix.row_vecs()
        )
    }
}

#[derive(Serialize, Deserialize)]
struct MorphismRepr {
    source: FPModule,
    target: FPModule,
    matrix: Matrix,
}

impl Serialize for Morphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MorphismRepr {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Morphism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Morphism, D::Error> {
        let r = MorphismRepr::deserialize(d)?;
        Morphism::new(r.source, r.target, r.matrix).map_err(serde::de::Error::custom)
    }
}
