//! Scenario files, suite orchestration and reports.
//!
//! A [`Scenario`] fully determines a run: every check derives its random
//! stream from the scenario seed and its own id, so the deterministic part
//! of a [`RunReport`] is byte-identical across runs and execution modes.

mod random;
mod run;
mod suites;

use serde::{Deserialize, Serialize};

use crate::bifunctor::{base_change, restrict_adjunction, MultiAdjunction};
use crate::cotorsion::{ClassSpec, Universe};
use crate::error::{Error, Result};
use crate::module::{FPModule, Morphism};
use crate::products::{LemmaKind, PairSetting, Status};
use crate::ring::Ring;

pub use random::{gen_random, RandomKind, RandomParams};
pub use run::{run_check, run_suite, CheckResult, Counts, RunReport, Timing};
pub use suites::{bundled, bundled_names};

pub const TOOL: &str = "cotlab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A candidate pair `(𝒟, ℰ)` on the modules with at most `max_factors`
/// invariant factors.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairSpec {
    pub ring: Ring,
    pub max_factors: usize,
    pub d: ClassSpec,
    pub e: ClassSpec,
}

impl PairSpec {
    pub fn new(n: u64, max_factors: usize, d: ClassSpec, e: ClassSpec) -> Result<PairSpec> {
        Ok(PairSpec {
            ring: Ring::new(n)?,
            max_factors,
            d,
            e,
        })
    }

    pub fn setting(&self) -> PairSetting {
        PairSetting::new(
            self.d.clone(),
            self.e.clone(),
            Universe::enumerate(self.ring, self.max_factors),
        )
    }
}

/// An adjunction of several variables, addressed by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctorSpec {
    Tensor { ring: Ring, arity: usize },
    /// `M ⊗ −` for the module with the given invariant factors.
    TensorWith { ring: Ring, fixed: Vec<u64> },
    /// Extension of scalars `Z/from → Z/to`.
    BaseChange { from: u64, to: u64 },
    Identity { ring: Ring },
}

impl FunctorSpec {
    /// Parses `tensor`, `identity`, `tensor-with:d1,d2,…` or
    /// `basechange:m:n`; `ring` and `arity` fill in what the name omits.
    pub fn parse(s: &str, ring: Ring, arity: usize) -> Result<FunctorSpec> {
        let bad = || Error::Parse(format!("unknown functor {s:?}"));
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        Ok(match head {
            "tensor" if rest.is_empty() => FunctorSpec::Tensor { ring, arity },
            "identity" if rest.is_empty() => FunctorSpec::Identity { ring },
            "tensor-with" => FunctorSpec::TensorWith {
                ring,
                fixed: rest.split(',').map(num).collect::<Result<_>>()?,
            },
            "basechange" | "base_change" => {
                let (m, n) = rest.split_once(':').ok_or_else(bad)?;
                FunctorSpec::BaseChange { from: num(m)?, to: num(n)? }
            }
            _ => return Err(bad()),
        })
    }

    pub fn adjunction(&self) -> Result<MultiAdjunction> {
        match self {
            FunctorSpec::Tensor { ring, arity } => MultiAdjunction::tensor(*ring, *arity),
            FunctorSpec::TensorWith { ring, fixed } => {
                let m = FPModule::from_invariants(*ring, fixed)?;
                restrict_adjunction(&MultiAdjunction::tensor(*ring, 2)?, 0, &m)
            }
            FunctorSpec::BaseChange { from, to } => Ok(base_change(*from, *to)?.adjunction()),
            FunctorSpec::Identity { ring } => Ok(MultiAdjunction::identity(*ring)),
        }
    }
}

/// Where the inputs of a monicity check come from.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HoveyInputs {
    /// Monomorphisms with cokernel in each `𝒟ᵢ`, one tuple per trial.
    Random,
    /// One fixed tuple.
    Explicit(Vec<Morphism>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum CheckKind {
    /// Pair, completeness and heredity on the universe.
    Cotorsion { pair: PairSpec },
    /// Completeness, enough `𝒟`-quotients and heredity.
    Assumptions { pair: PairSpec },
    /// The one-variable split conditions and their equivalence.
    Split1 {
        functor: FunctorSpec,
        source: PairSpec,
        target: PairSpec,
    },
    /// The n-variable split conditions; `pairs[0]` is the target.
    Nsplit { functor: FunctorSpec, pairs: Vec<PairSpec> },
    /// Monicity and cokernel of pushout products.
    Hovey {
        functor: FunctorSpec,
        pairs: Vec<PairSpec>,
        inputs: HoveyInputs,
    },
    /// The lifted conditions for a one-variable adjunction.
    Quillen {
        functor: FunctorSpec,
        source: PairSpec,
        target: PairSpec,
        /// Random complexes of each flavor added to spheres and discs.
        random: usize,
    },
    /// The lifted conditions for an adjunction of several variables.
    /// `force` evaluates them even when the module-level conditions fail.
    CotMain {
        functor: FunctorSpec,
        pairs: Vec<PairSpec>,
        random: usize,
        #[serde(default)]
        force: bool,
    },
    Lemma {
        lemma: LemmaKind,
        ring: Ring,
        arity: usize,
        #[serde(default)]
        pair: Option<PairSpec>,
    },
    /// The identity of `Z/n --×factor--> Z/n` admits no null-homotopy.
    NonNullHomotopic { ring: Ring, factor: u64 },
}

impl CheckKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::Cotorsion { .. } => "cotorsion",
            CheckKind::Assumptions { .. } => "assumptions",
            CheckKind::Split1 { .. } => "split1",
            CheckKind::Nsplit { .. } => "nsplit",
            CheckKind::Hovey { .. } => "hovey",
            CheckKind::Quillen { .. } => "quillen",
            CheckKind::CotMain { .. } => "cot_main",
            CheckKind::Lemma { .. } => "lemma",
            CheckKind::NonNullHomotopic { .. } => "non_null_homotopic",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckSpec {
    pub id: String,
    #[serde(flatten)]
    pub kind: CheckKind,
    /// Overrides the scenario trial count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Negative controls expect a failure of a specific kind.
    #[serde(default = "pass")]
    pub expect: Status,
}

fn pass() -> Status {
    Status::Pass
}

impl CheckSpec {
    pub fn new(id: impl Into<String>, kind: CheckKind) -> CheckSpec {
        CheckSpec {
            id: id.into(),
            kind,
            trials: None,
            expect: Status::Pass,
        }
    }

    pub fn trials(mut self, t: usize) -> CheckSpec {
        self.trials = Some(t);
        self
    }

    pub fn expect(mut self, s: Status) -> CheckSpec {
        self.expect = s;
        self
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    /// Random trials per sampled check.
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

fn default_trials() -> usize {
    100
}

impl Scenario {
    pub fn new(name: impl Into<String>, checks: Vec<CheckSpec>) -> Scenario {
        Scenario {
            name: name.into(),
            seed: 0,
            trials: default_trials(),
            checks,
        }
    }

    /// Parses a scenario file; errors carry the line and column.
    pub fn from_json(s: &str) -> Result<Scenario> {
        let sc: Scenario = serde_json::from_str(s)?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenarios serialize")
    }

    /// Check ids are non-empty and unique.
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.checks {
            if c.id.is_empty() {
                return Err(Error::Parse("check with an empty id".into()));
            }
            if !seen.insert(c.id.as_str()) {
                return Err(Error::Parse(format!("duplicate check id {:?}", c.id)));
            }
        }
        Ok(())
    }
}
