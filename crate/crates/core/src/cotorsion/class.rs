use serde::{Deserialize, Serialize};

use super::universe::Universe;
use crate::bifunctor::{ext, tensor_map};
use crate::error::{Error, Result};
use crate::module::{FPModule, Morphism};
use crate::ring::{gcd, Matrix, Ring};

/// A class of modules with decidable membership.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassSpec {
    All,
    Zero,
    Projective,
    Flat,
    Injective,
    /// `{X : Ext¹(D, X) = 0 for every listed D}`.
    PerpOf(Vec<FPModule>),
    /// `{X : Ext¹(X, E) = 0 for every listed E}`.
    LeftPerpOf(Vec<FPModule>),
    /// Modules isomorphic to a listed one.
    Explicit(Vec<FPModule>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Direct summand of a free module: every invariant factor `e` satisfies
/// `gcd(e, n/e) = 1`.
pub fn is_projective(m: &FPModule) -> bool {
    let n = m.ring().modulus();
    m.invariants().iter().all(|&e| gcd(e, n / e) == 1)
}

/// Ideal criterion: `I ⊗ M → M` is monic for every ideal `I = (d)`.
pub fn is_flat(m: &FPModule) -> Result<bool> {
    let ring = m.ring();
    let n = ring.modulus();
    let id = Morphism::identity(m);
    for d in ring.divisors() {
        if d == 1 || d == n {
            continue;
        }
        let ideal = FPModule::cyclic(ring, n / d)?;
        let incl = Morphism::new(ideal, FPModule::free(ring, 1), Matrix::scalar(ring, 1, d))?;
        if !tensor_map(&incl, &id)?.is_monic() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Baer's criterion: `Ext¹(Z/d, M) = 0` for every `d | n`.
pub fn is_injective(m: &FPModule) -> Result<bool> {
    let ring = m.ring();
    for d in ring.divisors() {
        if d == 1 {
            continue;
        }
        if !ext(1, &FPModule::cyclic(ring, d)?, m)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

impl ClassSpec {
    pub fn name(&self) -> String {
        let list = |ms: &[FPModule]| ms.iter().map(FPModule::describe).collect::<Vec<_>>().join(", ");
        match self {
            ClassSpec::All => "all".into(),
            ClassSpec::Zero => "zero".into(),
            ClassSpec::Projective => "projective".into(),
            ClassSpec::Flat => "flat".into(),
            ClassSpec::Injective => "injective".into(),
            ClassSpec::PerpOf(ms) => format!("perp{{{}}}", list(ms)),
            ClassSpec::LeftPerpOf(ms) => format!("leftperp{{{}}}", list(ms)),
            ClassSpec::Explicit(ms) => format!("{{{}}}", list(ms)),
        }
    }

    /// Parses `all | zero | projective | flat | injective`.
    pub fn parse_simple(s: &str) -> Result<ClassSpec> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "all" => ClassSpec::All,
            "zero" => ClassSpec::Zero,
            "projective" => ClassSpec::Projective,
            "flat" => ClassSpec::Flat,
            "injective" => ClassSpec::Injective,
            other => return Err(Error::Parse(format!("unknown class {other:?}"))),
        })
    }

    fn listed(&self) -> &[FPModule] {
        match self {
            ClassSpec::PerpOf(ms) | ClassSpec::LeftPerpOf(ms) | ClassSpec::Explicit(ms) => ms,
            _ => &[],
        }
    }

    pub fn contains(&self, m: &FPModule) -> Result<bool> {
        for x in self.listed() {
            m.check_ring(x)?;
        }
        Ok(match self {
            ClassSpec::All => true,
            ClassSpec::Zero => m.is_zero(),
            ClassSpec::Projective => is_projective(m),
            ClassSpec::Flat => is_flat(m)?,
            ClassSpec::Injective => is_injective(m)?,
            ClassSpec::PerpOf(ds) => {
                for d in ds {
                    if !ext(1, d, m)?.is_zero() {
                        return Ok(false);
                    }
                }
                true
            }
            ClassSpec::LeftPerpOf(es) => {
                for e in es {
                    if !ext(1, m, e)?.is_zero() {
                        return Ok(false);
                    }
                }
                true
            }
            ClassSpec::Explicit(ms) => ms.iter().any(|x| x.invariants() == m.invariants()),
        })
    }

    /// Members of `u`, in universe order.
    pub fn members(&self, u: &Universe) -> Result<Vec<FPModule>> {
        let mut out = Vec::new();
        for m in u.modules() {
            if self.contains(m)? {
                out.push(m.clone());
            }
        }
        Ok(out)
    }

    /// Checks that listed modules live over `ring`.
    pub fn check_ring(&self, ring: Ring) -> Result<()> {
        for x in self.listed() {
            if x.ring() != ring {
                return Err(Error::ring_mismatch(ring, x.ring()));
            }
        }
        Ok(())
    }
}

/// The right perp `{X ∈ u : Ext¹(D, X) = 0 ∀ D ∈ cls}` or the left perp
/// `{X ∈ u : Ext¹(X, E) = 0 ∀ E ∈ cls}`, as an explicit class.
pub fn perp(cls: &[FPModule], side: Side, u: &Universe) -> Result<ClassSpec> {
    let spec = match side {
        Side::Right => ClassSpec::PerpOf(cls.to_vec()),
        Side::Left => ClassSpec::LeftPerpOf(cls.to_vec()),
    };
    Ok(ClassSpec::Explicit(spec.members(u)?))
}
