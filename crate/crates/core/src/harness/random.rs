use rand::Rng as _;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complex::{random_entrywise, spliced_exact};
use crate::cotorsion::{ClassSpec, Universe};
use crate::error::{Error, Result};
use crate::gen::{random_extension_from, random_morphism, rng};
use crate::ring::Ring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RandomKind {
    Module,
    Morphism,
    Ses,
    Complex,
}

impl RandomKind {
    pub fn parse(s: &str) -> Result<RandomKind> {
        Ok(match s {
            "module" => RandomKind::Module,
            "morphism" => RandomKind::Morphism,
            "ses" => RandomKind::Ses,
            "complex" => RandomKind::Complex,
            other => return Err(Error::Parse(format!("unknown random kind {other:?}"))),
        })
    }
}

/// Universe bounds and the class random values are drawn from.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RandomParams {
    pub ring: Ring,
    pub max_factors: usize,
    /// Cokernels of sequences and entries of complexes come from this class.
    pub class: ClassSpec,
}

/// A random value as JSON; identical for identical `(kind, params, seed)`.
///
/// Modules are drawn from the enumerated universe, sequences pick `D` from
/// the class and an Ext¹ class uniformly before realizing it. Complexes are
/// either spliced from such sequences or random with entries in the class;
/// `d ∘ d = 0` is checked on construction.
pub fn gen_random(kind: RandomKind, params: &RandomParams, seed: u64) -> Result<Value> {
    let u = Universe::enumerate(params.ring, params.max_factors);
    let mut g = rng(seed);
    let members = params.class.members(&u)?;
    if members.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "class {} has no members with at most {} factors over {}",
            params.class.name(),
            params.max_factors,
            params.ring
        )));
    }
    let pick = |g: &mut crate::gen::Rng| members[g.gen_range(0..members.len())].clone();
    Ok(match kind {
        RandomKind::Module => serde_json::to_value(pick(&mut g))?,
        RandomKind::Morphism => {
            let a = pick(&mut g);
            let b = pick(&mut g);
            serde_json::to_value(random_morphism(&mut g, &a, &b)?)?
        }
        RandomKind::Ses => {
            let s = random_extension_from(&mut g, &members, u.modules())?;
            json!({ "inj": s.inj(), "surj": s.surj() })
        }
        RandomKind::Complex => {
            let c = if g.gen_bool(0.5) {
                let len = g.gen_range(2..=4);
                spliced_exact(&mut g, &members, len)?
            } else {
                let len = g.gen_range(1..=3);
                random_entrywise(&mut g, &members, len)?
            };
            serde_json::to_value(c)?
        }
    })
}
