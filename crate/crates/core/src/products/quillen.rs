use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::split::{extensions, short_exact, NSplitReport, PairSetting, Split1Report};
use super::Status;
use crate::bifunctor::{MultiAdjunction, MultiFunctor};
use crate::complex::{
    classify, disc_extensions, lift_functor, lift_functor_map, sphere_extensions, ChainComplex,
    ChainMap, ComplexClassification, ComplexSes, SampleSet,
};
use crate::config::CheckConfig;
use crate::error::{Error, Result};
use crate::gen::rng;

/// One of the three complex-level conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuillenCondition {
    pub id: String,
    pub pass: bool,
    /// Instances examined.
    pub samples: usize,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuillenReport {
    /// The module-level split conditions hold; otherwise nothing was run.
    pub precondition: bool,
    /// Complexes in the sample pools.
    pub pool: usize,
    pub conditions: Vec<QuillenCondition>,
}

impl QuillenReport {
    fn refused() -> QuillenReport {
        QuillenReport {
            precondition: false,
            pool: 0,
            conditions: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.status() == Status::Pass
    }

    pub fn status(&self) -> Status {
        if !self.precondition {
            Status::HypothesisFailed
        } else if self.conditions.iter().all(|c| c.pass) {
            Status::Pass
        } else {
            Status::ConclusionFailed
        }
    }

    pub fn condition(&self, id: &str) -> Option<&QuillenCondition> {
        self.conditions.iter().find(|c| c.id == id)
    }
}

/// Sphere and disc sequences in degrees 0 and 1 built from one sequence
/// per Ext class with cokernel in `𝒟`.
pub fn complex_extensions(s: &PairSetting, cfg: &CheckConfig) -> Result<Vec<ComplexSes>> {
    let seqs = extensions(&s.d_members()?, s.universe.modules(), cfg)?;
    let mut out = Vec::new();
    for n in [0, 1] {
        out.extend(sphere_extensions(&seqs, n)?);
        out.extend(disc_extensions(&seqs, n)?);
    }
    Ok(out)
}

fn classify_all(cs: &[ChainComplex], s: &PairSetting, cfg: &CheckConfig) -> Result<Vec<ComplexClassification>> {
    cfg.exec
        .map(cs, |c| classify(c, &s.d, &s.e, &s.universe))
        .into_iter()
        .collect()
}

/// `Ch(F)` applied to a sequence of complexes in slot `k`, the other slots
/// held at `fixed`; checks the image is short exact in every degree.
fn lifted_short_exact(
    f: &dyn MultiFunctor,
    fixed: &[ChainComplex],
    k: usize,
    ses: &ComplexSes,
) -> Result<bool> {
    let ses = ses.padded()?;
    let lift = |m: &ChainMap| -> Result<ChainMap> {
        let mut ms: Vec<ChainMap> = fixed.iter().map(ChainMap::identity).collect();
        ms.insert(k, m.clone());
        lift_functor_map(f, &ms)
    };
    let (a, b) = (lift(&ses.inj)?, lift(&ses.surj)?);
    let lo = a.lo().min(b.lo());
    let hi = a.hi().max(b.hi());
    for n in lo..=hi {
        if !short_exact(&a.component(n), &b.component(n))? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn condition(id: &str, results: Vec<Result<Option<String>>>) -> Result<QuillenCondition> {
    let samples = results.len();
    let mut counterexample = None;
    for r in results {
        if let Some(w) = r? {
            counterexample.get_or_insert(w);
        }
    }
    Ok(QuillenCondition {
        id: id.to_string(),
        pass: counterexample.is_none(),
        samples,
        counterexample,
    })
}

/// The three complex-level conditions for a one-variable adjunction:
/// lifted exactness on sequences with cokernel in `𝒟̃`, preservation of
/// `𝒟̃` and preservation of `dg𝒟̃`.
pub fn check_quillen_1var(
    ma: &MultiAdjunction,
    source: &PairSetting,
    target: &PairSetting,
    split: &Split1Report,
    samples: &SampleSet,
    seqs: &[ComplexSes],
    cfg: &CheckConfig,
) -> Result<QuillenReport> {
    if ma.arity() != 1 {
        return Err(Error::InvalidArgument("one-variable check needs arity 1".into()));
    }
    if !split.all_pass() {
        return Ok(QuillenReport::refused());
    }
    let f = ma.left();
    let pool = samples.all();
    let cls = classify_all(&pool, source, cfg)?;

    let cokernels: Vec<ChainComplex> = seqs.iter().map(|s| s.surj.target().clone()).collect();
    let ccls = classify_all(&cokernels, source, cfg)?;
    let eligible: Vec<&ComplexSes> = seqs.iter().zip(&ccls).filter(|(_, c)| c.is_tilde_d).map(|(s, _)| s).collect();
    let c1 = condition(
        "lifted-exactness",
        cfg.exec.map(&eligible, |s| {
            Ok((!lifted_short_exact(f.as_ref(), &[], 0, s)?)
                .then(|| format!("image of the sequence ending in {} is not exact", s.surj.target().describe())))
        }),
    )?;

    let tilde: Vec<&ChainComplex> = pool.iter().zip(&cls).filter(|(_, c)| c.is_tilde_d).map(|(c, _)| c).collect();
    let c2 = condition(
        "tilde",
        cfg.exec.map(&tilde, |c| {
            let out = lift_functor(f.as_ref(), std::slice::from_ref(*c))?;
            let k = classify(&out, &target.d, &target.e, &target.universe)?;
            Ok((!k.is_tilde_d).then(|| format!("{} maps to {}", c.describe(), out.describe())))
        }),
    )?;

    let dg: Vec<&ChainComplex> = pool.iter().zip(&cls).filter(|(_, c)| c.is_dg_d).map(|(c, _)| c).collect();
    let c3 = condition(
        "dg",
        cfg.exec.map(&dg, |c| {
            let out = lift_functor(f.as_ref(), std::slice::from_ref(*c))?;
            let k = classify(&out, &target.d, &target.e, &target.universe)?;
            Ok((!k.is_dg_d).then(|| format!("{} maps to {}", c.describe(), out.describe())))
        }),
    )?;
    Ok(QuillenReport {
        precondition: true,
        pool: pool.len(),
        conditions: vec![c1, c2, c3],
    })
}

fn describe_tuple(cs: &[ChainComplex]) -> String {
    cs.iter().map(ChainComplex::describe).collect::<Vec<_>>().join(", ")
}

/// The three conditions from the proof that `Ch(F)` is an `n`-variable left
/// Quillen functor, on `cfg.trials` seeded draws each: lifted
/// right-splitness of `dg𝒟̃ⱼ`, preservation of `dg𝒟̃`, and `𝒟̃₀` output
/// when one input lies in `𝒟̃ₖ` and the others in `dg𝒟̃ᵢ`.
///
/// `samples[i]` and `seqs[i]` belong to slot `i + 1`.
pub fn check_cot_main(
    ma: &MultiAdjunction,
    settings: &[PairSetting],
    nsplit: &NSplitReport,
    samples: &[SampleSet],
    seqs: &[Vec<ComplexSes>],
    cfg: &CheckConfig,
) -> Result<QuillenReport> {
    let n = ma.arity();
    if settings.len() != n + 1 || samples.len() != n || seqs.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{n}-variable check needs {} settings and {n} sample pools",
            n + 1
        )));
    }
    if !nsplit.left_holds() {
        return Ok(QuillenReport::refused());
    }
    cot_main_conditions(ma, settings, samples, seqs, cfg)
}

/// The conditions of [`check_cot_main`] without the precondition guard,
/// for checking the converse: when the module-level conditions fail, some
/// sampled condition must fail as well.
pub fn cot_main_conditions(
    ma: &MultiAdjunction,
    settings: &[PairSetting],
    samples: &[SampleSet],
    seqs: &[Vec<ComplexSes>],
    cfg: &CheckConfig,
) -> Result<QuillenReport> {
    let n = ma.arity();
    if settings.len() != n + 1 || samples.len() != n || seqs.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{n}-variable check needs {} settings and {n} sample pools",
            n + 1
        )));
    }
    let f = ma.left();
    let target = &settings[0];
    let pools: Vec<Vec<ChainComplex>> = samples.iter().map(SampleSet::all).collect();
    let mut dg = Vec::new();
    let mut tilde = Vec::new();
    let mut dg_seqs = Vec::new();
    for i in 0..n {
        let cls = classify_all(&pools[i], &settings[i + 1], cfg)?;
        let pick = |want: fn(&ComplexClassification) -> bool| -> Vec<ChainComplex> {
            pools[i].iter().zip(&cls).filter(|(_, c)| want(c)).map(|(c, _)| c.clone()).collect()
        };
        dg.push(pick(|c| c.is_dg_d));
        tilde.push(pick(|c| c.is_tilde_d));
        let cokernels: Vec<ChainComplex> = seqs[i].iter().map(|s| s.surj.target().clone()).collect();
        let ccls = classify_all(&cokernels, &settings[i + 1], cfg)?;
        dg_seqs.push(
            seqs[i].iter().zip(&ccls).filter(|(_, c)| c.is_dg_d).map(|(s, _)| s.clone()).collect::<Vec<_>>(),
        );
    }
    if dg.iter().any(Vec::is_empty) {
        return Err(Error::InvalidArgument("a slot has no dg samples".into()));
    }
    let mut g = rng(cfg.stream(0x5eed));
    let draw = |g: &mut crate::gen::Rng, skip: usize| -> Vec<ChainComplex> {
        (0..n)
            .filter(|&i| i != skip)
            .map(|i| dg[i].choose(g).expect("non-empty").clone())
            .collect()
    };

    let mut split_items = Vec::new();
    for _ in 0..cfg.trials {
        let j = g.gen_range(0..n);
        if let Some(s) = dg_seqs[j].choose(&mut g) {
            split_items.push((j, s.clone(), draw(&mut g, j)));
        }
    }
    let c1 = condition(
        "lifted-split",
        cfg.exec.map(&split_items, |(j, s, others)| {
            Ok((!lifted_short_exact(f.as_ref(), others, *j, s)?).then(|| {
                format!(
                    "slot {}: sequence ending in {} with [{}]",
                    j + 1,
                    s.surj.target().describe(),
                    describe_tuple(others)
                )
            }))
        }),
    )?;

    let dg_items: Vec<Vec<ChainComplex>> = (0..cfg.trials).map(|_| draw(&mut g, n)).collect();
    let c2 = condition(
        "dg",
        cfg.exec.map(&dg_items, |cs| {
            let out = lift_functor(f.as_ref(), cs)?;
            let k = classify(&out, &target.d, &target.e, &target.universe)?;
            Ok((!k.is_dg_d).then(|| format!("[{}] maps to {}", describe_tuple(cs), out.describe())))
        }),
    )?;

    let mut tilde_items = Vec::new();
    for _ in 0..cfg.trials {
        let k = g.gen_range(0..n);
        if let Some(t) = tilde[k].choose(&mut g) {
            let mut cs = draw(&mut g, k);
            cs.insert(k, t.clone());
            tilde_items.push(cs);
        }
    }
    let c3 = condition(
        "tilde",
        cfg.exec.map(&tilde_items, |cs| {
            let out = lift_functor(f.as_ref(), cs)?;
            let k = classify(&out, &target.d, &target.e, &target.universe)?;
            Ok((!k.is_tilde_d).then(|| format!("[{}] maps to {}", describe_tuple(cs), out.describe())))
        }),
    )?;
    Ok(QuillenReport {
        precondition: true,
        pool: pools.iter().map(Vec::len).sum(),
        conditions: vec![c1, c2, c3],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bifunctor::base_change;
    use crate::complex::sample_set;
    use crate::cotorsion::{ClassSpec, Universe};
    use crate::products::{check_nsplit_duality, check_split_1var};
    use crate::ring::Ring;

    fn flat_all(n: u64, factors: usize) -> PairSetting {
        PairSetting::new(
            ClassSpec::Flat,
            ClassSpec::All,
            Universe::enumerate(Ring::new(n).unwrap(), factors),
        )
    }

    #[test]
    fn base_change_is_quillen_on_samples() {
        let cfg = CheckConfig::default();
        let ma = base_change(12, 4).unwrap().adjunction();
        let (src, tgt) = (flat_all(12, 1), flat_all(4, 1));
        let split = check_split_1var(&ma, &src, &tgt, &cfg).unwrap();
        let samples = sample_set(&src.universe, &src.d, 1, 5).unwrap();
        let seqs = complex_extensions(&src, &cfg).unwrap();
        let rep = check_quillen_1var(&ma, &src, &tgt, &split, &samples, &seqs, &cfg).unwrap();
        assert!(rep.pass(), "{rep:?}");
        assert!(rep.conditions.iter().all(|c| c.samples > 0));
    }

    #[test]
    fn tensor_over_z4_on_samples() {
        let cfg = CheckConfig::default().with_trials(20);
        let ma = MultiAdjunction::tensor(Ring::new(4).unwrap(), 2).unwrap();
        let s = flat_all(4, 1);
        let settings = [s.clone(), s.clone(), s.clone()];
        let nsplit = check_nsplit_duality(&ma, &settings, &cfg).unwrap();
        let samples = [sample_set(&s.universe, &s.d, 1, 3).unwrap(), sample_set(&s.universe, &s.d, 2, 3).unwrap()];
        let seqs = complex_extensions(&s, &cfg).unwrap();
        let rep = check_cot_main(&ma, &settings, &nsplit, &samples, &[seqs.clone(), seqs], &cfg).unwrap();
        assert!(rep.pass(), "{rep:?}");
        assert!(rep.conditions.iter().all(|c| c.samples > 0));
    }

    #[test]
    fn broken_tensor_target_fails_the_dg_condition() {
        // With 𝒟 = All on the inputs, (0b) fails for Flat on the target and
        // the lifted conditions must fail too.
        let cfg = CheckConfig::default().with_trials(20);
        let r = Ring::new(4).unwrap();
        let ma = MultiAdjunction::tensor(r, 2).unwrap();
        let u = Universe::enumerate(r, 1);
        let inj = PairSetting::new(ClassSpec::All, ClassSpec::Injective, u.clone());
        let settings = [flat_all(4, 1), inj.clone(), inj.clone()];
        let nsplit = check_nsplit_duality(&ma, &settings, &cfg).unwrap();
        assert!(!nsplit.left);
        let samples = [sample_set(&u, &inj.d, 1, 3).unwrap(), sample_set(&u, &inj.d, 2, 3).unwrap()];
        let seqs = complex_extensions(&inj, &cfg).unwrap();
        let rep = check_cot_main(&ma, &settings, &nsplit, &samples, &[seqs.clone(), seqs.clone()], &cfg).unwrap();
        assert_eq!(rep.status(), Status::HypothesisFailed);
        assert!(rep.conditions.is_empty());
        let forced = cot_main_conditions(&ma, &settings, &samples, &[seqs.clone(), seqs], &cfg).unwrap();
        assert!(!forced.condition("dg").unwrap().pass);
    }
}
