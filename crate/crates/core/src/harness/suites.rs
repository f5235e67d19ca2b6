//! Bundled scenarios. Trial counts keep `full` well under five minutes on a
//! laptop.

use super::{CheckKind, CheckSpec, FunctorSpec, HoveyInputs, PairSpec, Scenario};
use crate::cotorsion::ClassSpec;
use crate::error::{Error, Result};
use crate::module::{FPModule, Morphism};
use crate::products::{LemmaKind, Status};
use crate::ring::{Matrix, Ring};

const NAMES: [&str; 5] = ["paper-core-z4", "paper-core-z6", "paper-core-z12", "negative-controls", "full"];

/// Random complexes of each flavor per slot; with spheres and discs the
/// pools hold well over 200 complexes.
const RANDOM_COMPLEXES: usize = 60;

pub fn bundled_names() -> &'static [&'static str] {
    &NAMES
}

pub fn bundled(name: &str) -> Result<Scenario> {
    let checks = match name {
        "paper-core-z4" => core_z4(),
        "paper-core-z6" => core_z6(),
        "paper-core-z12" => core_z12(),
        "negative-controls" => negative_controls(),
        "full" => {
            let mut v = core_z4();
            v.extend(core_z6());
            v.extend(core_z12());
            v.extend(negative_controls());
            v
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown suite {name:?}; bundled suites: {}",
                NAMES.join(", ")
            )))
        }
    };
    Ok(Scenario {
        name: name.into(),
        seed: 1,
        trials: 100,
        checks,
    })
}

fn z(n: u64) -> Ring {
    Ring::new(n).expect("bundled moduli are in range")
}

fn pair(n: u64, max_factors: usize, d: ClassSpec, e: ClassSpec) -> PairSpec {
    PairSpec {
        ring: z(n),
        max_factors,
        d,
        e,
    }
}

fn flat_all(n: u64, max_factors: usize) -> PairSpec {
    pair(n, max_factors, ClassSpec::Flat, ClassSpec::All)
}

fn all_injective(n: u64, max_factors: usize) -> PairSpec {
    pair(n, max_factors, ClassSpec::All, ClassSpec::Injective)
}

fn tensor(n: u64, arity: usize) -> FunctorSpec {
    FunctorSpec::Tensor { ring: z(n), arity }
}

fn cyclic(n: u64, d: u64) -> FPModule {
    FPModule::cyclic(z(n), d).expect("divisor")
}

/// `Z/2 → Z/4`, `1 ↦ 2`: monic with cokernel `Z/2`, which is not flat.
fn doubling_z4() -> Morphism {
    Morphism::new(
        cyclic(4, 2),
        FPModule::free(z(4), 1),
        Matrix::from_rows(z(4), &[vec![2]]).expect("1 × 1"),
    )
    .expect("well defined")
}

fn lemma(id: &str, kind: LemmaKind, n: u64, arity: usize) -> CheckSpec {
    CheckSpec::new(
        id,
        CheckKind::Lemma {
            lemma: kind,
            ring: z(n),
            arity,
            pair: None,
        },
    )
}

/// The coker formula at 100 trials and the cube lemmas at 50, for n = 2, 3.
fn lemma_checks(n: u64) -> Vec<CheckSpec> {
    let mut v = Vec::new();
    for arity in [2, 3] {
        v.push(lemma(&format!("coker-pushout-z{n}-n{arity}"), LemmaKind::CokerPushout, n, arity));
        for kind in [LemmaKind::PpRestriction, LemmaKind::PpSquare, LemmaKind::PpAdjunction] {
            v.push(lemma(&format!("{}-z{n}-n{arity}", kind.name()), kind, n, arity).trials(50));
        }
    }
    v
}

fn core_z4() -> Vec<CheckSpec> {
    let mut v = vec![
        CheckSpec::new("cotorsion-flat-all-z4", CheckKind::Cotorsion { pair: flat_all(4, 2) }),
        CheckSpec::new("assumptions-flat-all-z4", CheckKind::Assumptions { pair: flat_all(4, 2) }),
        CheckSpec::new(
            "split1-identity-z4",
            CheckKind::Split1 {
                functor: FunctorSpec::Identity { ring: z(4) },
                source: flat_all(4, 2),
                target: flat_all(4, 2),
            },
        ),
        // Both collections fail here; the equivalence still has to hold.
        CheckSpec::new(
            "split1-z2-tensor-z4",
            CheckKind::Split1 {
                functor: FunctorSpec::TensorWith { ring: z(4), fixed: vec![2] },
                source: flat_all(4, 2),
                target: flat_all(4, 2),
            },
        ),
        CheckSpec::new(
            "nsplit-tensor-z4",
            CheckKind::Nsplit {
                functor: tensor(4, 2),
                pairs: vec![flat_all(4, 2); 3],
            },
        ),
        CheckSpec::new(
            "nsplit-both-fail-z4",
            CheckKind::Nsplit {
                functor: tensor(4, 2),
                pairs: vec![flat_all(4, 1), all_injective(4, 1), all_injective(4, 1)],
            },
        ),
        CheckSpec::new(
            "hovey-tensor-z4",
            CheckKind::Hovey {
                functor: tensor(4, 2),
                pairs: vec![flat_all(4, 2); 3],
                inputs: HoveyInputs::Random,
            },
        ),
        CheckSpec::new(
            "cot-main-tensor-z4",
            CheckKind::CotMain {
                functor: tensor(4, 2),
                pairs: vec![flat_all(4, 1); 3],
                random: RANDOM_COMPLEXES,
                force: false,
            },
        ),
        CheckSpec::new("non-null-homotopic-z4", CheckKind::NonNullHomotopic { ring: z(4), factor: 2 }),
    ];
    for kind in [LemmaKind::HomLeftSplit, LemmaKind::FlatSplit, LemmaKind::ExactSums] {
        v.push(lemma(&format!("{}-z4", kind.name()), kind, 4, 2));
    }
    v.extend(lemma_checks(4));
    v
}

fn core_z6() -> Vec<CheckSpec> {
    let mut v = vec![CheckSpec::new("cotorsion-flat-all-z6", CheckKind::Cotorsion { pair: flat_all(6, 2) })];
    v.extend(lemma_checks(6));
    v
}

fn core_z12() -> Vec<CheckSpec> {
    let mut v = vec![
        CheckSpec::new("cotorsion-all-injective-z12", CheckKind::Cotorsion { pair: all_injective(12, 2) }),
        CheckSpec::new("assumptions-all-injective-z12", CheckKind::Assumptions { pair: all_injective(12, 2) }),
        CheckSpec::new(
            "split1-basechange-z12-z4",
            CheckKind::Split1 {
                functor: FunctorSpec::BaseChange { from: 12, to: 4 },
                source: flat_all(12, 2),
                target: flat_all(4, 2),
            },
        ),
        CheckSpec::new(
            "quillen-basechange-z12-z4",
            CheckKind::Quillen {
                functor: FunctorSpec::BaseChange { from: 12, to: 4 },
                source: flat_all(12, 1),
                target: flat_all(4, 1),
                random: RANDOM_COMPLEXES,
            },
        ),
        CheckSpec::new(
            "nsplit-tensor-z12",
            CheckKind::Nsplit {
                functor: tensor(12, 2),
                pairs: vec![flat_all(12, 1); 3],
            },
        ),
        CheckSpec::new(
            "hovey-tensor-z12",
            CheckKind::Hovey {
                functor: tensor(12, 2),
                pairs: vec![flat_all(12, 1); 3],
                inputs: HoveyInputs::Random,
            },
        ),
        CheckSpec::new(
            "cot-main-tensor-z12",
            CheckKind::CotMain {
                functor: tensor(12, 2),
                pairs: vec![flat_all(12, 1); 3],
                random: RANDOM_COMPLEXES,
                force: false,
            },
        ),
    ];
    v.extend(lemma_checks(12));
    v
}

fn negative_controls() -> Vec<CheckSpec> {
    use Status::{ConclusionFailed, HypothesisFailed};
    let z2 = || ClassSpec::Explicit(vec![cyclic(4, 2)]);
    let broken_slots = vec![flat_all(4, 1), all_injective(4, 1), all_injective(4, 1)];
    vec![
        CheckSpec::new(
            "neg-cotorsion-z2-all-z4",
            CheckKind::Cotorsion {
                pair: pair(4, 2, z2(), ClassSpec::All),
            },
        )
        .expect(ConclusionFailed),
        CheckSpec::new(
            "neg-assumptions-zero-all-z4",
            CheckKind::Assumptions {
                pair: pair(4, 2, ClassSpec::Zero, ClassSpec::All),
            },
        )
        .expect(ConclusionFailed),
        CheckSpec::new(
            "neg-split1-z2-source-z4",
            CheckKind::Split1 {
                functor: FunctorSpec::Identity { ring: z(4) },
                source: pair(4, 2, z2(), ClassSpec::All),
                target: flat_all(4, 2),
            },
        )
        .expect(HypothesisFailed),
        CheckSpec::new(
            "neg-nsplit-z2-target-z4",
            CheckKind::Nsplit {
                functor: tensor(4, 2),
                pairs: vec![pair(4, 2, z2(), ClassSpec::All), flat_all(4, 2), flat_all(4, 2)],
            },
        )
        .expect(HypothesisFailed),
        // Non-flat cokernels: the pushout product has kernel Z/2.
        CheckSpec::new(
            "neg-hovey-nonflat-z4",
            CheckKind::Hovey {
                functor: tensor(4, 2),
                pairs: vec![flat_all(4, 2); 3],
                inputs: HoveyInputs::Explicit(vec![doubling_z4(), doubling_z4()]),
            },
        )
        .expect(HypothesisFailed),
        CheckSpec::new(
            "neg-hovey-broken-slots-z4",
            CheckKind::Hovey {
                functor: tensor(4, 2),
                pairs: broken_slots.clone(),
                inputs: HoveyInputs::Random,
            },
        )
        .trials(20)
        .expect(HypothesisFailed),
        CheckSpec::new(
            "neg-quillen-z2-tensor-z4",
            CheckKind::Quillen {
                functor: FunctorSpec::TensorWith { ring: z(4), fixed: vec![2] },
                source: flat_all(4, 1),
                target: flat_all(4, 1),
                random: 5,
            },
        )
        .expect(HypothesisFailed),
        CheckSpec::new(
            "neg-cot-main-broken-z4",
            CheckKind::CotMain {
                functor: tensor(4, 2),
                pairs: broken_slots.clone(),
                random: 5,
                force: false,
            },
        )
        .trials(20)
        .expect(HypothesisFailed),
        // The converse direction: with the module-level conditions broken,
        // a lifted condition fails on the samples.
        CheckSpec::new(
            "neg-cot-main-forced-z4",
            CheckKind::CotMain {
                functor: tensor(4, 2),
                pairs: broken_slots,
                random: 5,
                force: true,
            },
        )
        .trials(20)
        .expect(ConclusionFailed),
        CheckSpec::new(
            "neg-flat-split-all-z4",
            CheckKind::Lemma {
                lemma: LemmaKind::FlatSplit,
                ring: z(4),
                arity: 2,
                pair: Some(pair(4, 1, ClassSpec::All, ClassSpec::All)),
            },
        )
        .expect(ConclusionFailed),
        CheckSpec::new(
            "neg-hom-left-split-all-z4",
            CheckKind::Lemma {
                lemma: LemmaKind::HomLeftSplit,
                ring: z(4),
                arity: 2,
                pair: Some(pair(4, 1, ClassSpec::All, ClassSpec::All)),
            },
        )
        .expect(ConclusionFailed),
        CheckSpec::new(
            "neg-exact-sums-z2-z4",
            CheckKind::Lemma {
                lemma: LemmaKind::ExactSums,
                ring: z(4),
                arity: 2,
                pair: Some(pair(
                    4,
                    2,
                    ClassSpec::Explicit(vec![FPModule::zero(z(4)), cyclic(4, 2)]),
                    ClassSpec::All,
                )),
            },
        )
        .expect(ConclusionFailed),
        CheckSpec::new(
            "neg-null-homotopic-unit-z4",
            CheckKind::NonNullHomotopic { ring: z(4), factor: 1 },
        )
        .expect(ConclusionFailed),
    ]
}
