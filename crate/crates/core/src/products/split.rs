use serde::{Deserialize, Serialize};

use crate::bifunctor::{ExtGroup, HomModule, MultiAdjunction, MultiFunctor};
use crate::config::CheckConfig;
use crate::cotorsion::{check_cotorsion_pair, ClassSpec, Universe, Witness};
use crate::error::{Error, Result};
use crate::module::{is_exact, FPModule, Morphism, ShortExactSequence};
use crate::ring::Matrix;

/// A cotorsion-pair candidate `(𝒟, ℰ)` on a finite universe.
#[derive(Clone, Debug)]
pub struct PairSetting {
    pub d: ClassSpec,
    pub e: ClassSpec,
    pub universe: Universe,
}

impl PairSetting {
    pub fn new(d: ClassSpec, e: ClassSpec, universe: Universe) -> PairSetting {
        PairSetting { d, e, universe }
    }

    pub fn describe(&self) -> String {
        format!(
            "({}, {}) over Z/{}",
            self.d.name(),
            self.e.name(),
            self.universe.ring().modulus()
        )
    }

    pub fn d_members(&self) -> Result<Vec<FPModule>> {
        self.d.members(&self.universe)
    }

    pub fn e_members(&self) -> Result<Vec<FPModule>> {
        self.e.members(&self.universe)
    }
}

/// Outcome of one labeled condition.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplitReport {
    pub id: String,
    pub pass: bool,
    /// Instances examined.
    pub checked: usize,
    /// Present exactly when the condition fails.
    pub counterexample: Option<Witness>,
}

/// Whether the standing assumptions of the split propositions hold.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Split1Report {
    pub hypotheses: HypothesisReport,
    /// `1a`, `1b`, `2a`, `2b` in that order.
    pub conditions: Vec<SplitReport>,
    pub left: bool,
    pub right: bool,
    /// `left == right`, or `None` when the hypotheses fail.
    pub equivalence: Option<bool>,
}

impl Split1Report {
    pub fn condition(&self, id: &str) -> Option<&SplitReport> {
        self.conditions.iter().find(|c| c.id == id)
    }

    pub fn all_pass(&self) -> bool {
        self.hypotheses.holds && self.conditions.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NSplitReport {
    pub hypotheses: HypothesisReport,
    /// `0a_k` for every k, then `0b`.
    pub left_conditions: Vec<SplitReport>,
    /// `ja_0`, `ja_k` for k ≠ j and `jb`, grouped by j.
    pub right_conditions: Vec<SplitReport>,
    pub left: bool,
    pub right: bool,
    pub equivalence: Option<bool>,
}

impl NSplitReport {
    pub fn condition(&self, id: &str) -> Option<&SplitReport> {
        self.left_conditions
            .iter()
            .chain(&self.right_conditions)
            .find(|c| c.id == id)
    }

    /// The hypotheses and the `(0a_k)`, `(0b)` collection hold.
    pub fn left_holds(&self) -> bool {
        self.hypotheses.holds && self.left
    }
}

/// Runs `test` on every item; the first failure in input order becomes the
/// counterexample.
pub(crate) fn run_condition<T, F>(id: &str, items: &[T], cfg: &CheckConfig, test: F) -> Result<SplitReport>
where
    T: Sync,
    F: Fn(&T) -> Result<Option<Witness>> + Sync + Send,
{
    let results = cfg.exec.map(items, test);
    let mut counterexample = None;
    for r in results {
        if let Some(w) = r? {
            counterexample = Some(w);
            break;
        }
    }
    Ok(SplitReport {
        id: id.to_string(),
        pass: counterexample.is_none(),
        checked: items.len(),
        counterexample,
    })
}

/// One sequence `0 → X → Y → D → 0` per Ext class, for `D ∈ rights` and
/// `X ∈ lefts`.
pub fn extensions(
    rights: &[FPModule],
    lefts: &[FPModule],
    cfg: &CheckConfig,
) -> Result<Vec<ShortExactSequence>> {
    let pairs: Vec<(&FPModule, &FPModule)> = rights
        .iter()
        .flat_map(|d| lefts.iter().map(move |x| (d, x)))
        .collect();
    let batches = cfg.exec.map(&pairs, |(d, x)| ExtGroup::new(d, x)?.realize_all(cfg.max_card));
    let mut out = Vec::new();
    for b in batches {
        out.extend(b?);
    }
    Ok(out)
}

/// Every tuple with one entry from each list.
pub(crate) fn tuples(lists: &[Vec<FPModule>]) -> Vec<Vec<FPModule>> {
    let mut acc: Vec<Vec<FPModule>> = vec![Vec::new()];
    for list in lists {
        acc = acc
            .iter()
            .flat_map(|t| {
                list.iter().map(move |m| {
                    let mut t = t.clone();
                    t.push(m.clone());
                    t
                })
            })
            .collect();
    }
    acc
}

/// `first` monic, exact at the middle, `second` epic.
pub(crate) fn short_exact(first: &Morphism, second: &Morphism) -> Result<bool> {
    Ok(first.is_monic() && second.is_epic() && is_exact(first, second)?)
}

fn describe_all(ms: &[FPModule]) -> String {
    ms.iter().map(FPModule::describe).collect::<Vec<_>>().join(", ")
}

/// `F(…, Xₖ, …)` applied to the sequence `ses` in slot `k`, all other slots
/// held at `fixed`; checks the image is short exact. In a contravariant
/// slot the image runs backwards.
fn image_is_short_exact(
    f: &dyn MultiFunctor,
    fixed: &[FPModule],
    k: usize,
    ses: &ShortExactSequence,
) -> Result<bool> {
    let with = |m: &Morphism| -> Result<Morphism> {
        let mut ms: Vec<Morphism> = fixed.iter().map(Morphism::identity).collect();
        ms.insert(k, m.clone());
        f.apply_morphism(&ms)
    };
    let (a, b) = (with(ses.inj())?, with(ses.surj())?);
    match f.variance(k) {
        crate::bifunctor::Variance::Covariant => short_exact(&a, &b),
        crate::bifunctor::Variance::Contravariant => short_exact(&b, &a),
    }
}

fn split_witness(name: &str, fixed: &[FPModule], ses: &ShortExactSequence) -> Witness {
    let refs: Vec<&FPModule> = fixed.iter().collect();
    Witness::new(format!(
        "{name} does not keep 0 → {} → {} → {} → 0 short exact (other arguments: [{}])",
        ses.left().describe(),
        ses.mid().describe(),
        ses.right().describe(),
        describe_all(fixed)
    ))
    .with_modules(&refs)
    .with_morphisms(&[ses.inj(), ses.surj()])
}

fn membership_witness(name: &str, args: &[FPModule], value: &FPModule, cls: &ClassSpec) -> Witness {
    let refs: Vec<&FPModule> = args.iter().collect();
    Witness::new(format!(
        "{name}({}) = {} is not in {}",
        describe_all(args),
        value.describe(),
        cls.name()
    ))
    .with_modules(&refs)
}

/// The canonical embedding of `x` into a free module of rank equal to its
/// number of invariant factors.
fn free_envelope(x: &FPModule) -> Result<Morphism> {
    let (nf, to, _) = x.normalized();
    let ring = x.ring();
    let n = ring.modulus();
    let k = nf.invariants().len();
    let mut m = Matrix::zeros(ring, nf.num_gens(), k);
    for (i, d) in nf.invariants().iter().enumerate() {
        m.set(i, i, n / d);
    }
    to.then(&Morphism::new(nf, FPModule::free(ring, k), m)?)
}

/// The canonical surjection onto `x` from a free module.
fn free_cover(x: &FPModule) -> Result<Morphism> {
    let (nf, _, from) = x.normalized();
    let ring = x.ring();
    let k = nf.num_gens();
    Morphism::new(FPModule::free(ring, k), nf, Matrix::identity(ring, k))?.then(&from)
}

/// Searches `Hom(src, tgt)` for a map passing `accept`, enumerating at most
/// `cap` elements.
fn find_map(src: &FPModule, tgt: &FPModule, cap: u128, accept: fn(&Morphism) -> bool) -> Result<bool> {
    let hom = HomModule::new(src, tgt)?;
    if hom.module().cardinality() > cap {
        return Ok(false);
    }
    Ok(hom.morphisms(cap)?.iter().any(accept))
}

/// Every object of `u` is a subobject of some `E ∈ ℰ ∩ u`.
fn enough_subobjects(s: &PairSetting, cfg: &CheckConfig, witnesses: &mut Vec<Witness>) -> Result<bool> {
    let es = s.e_members()?;
    let mut ok = true;
    for x in s.universe.modules() {
        let env = free_envelope(x)?;
        let mut found = s.e.contains(env.target())?;
        for e in &es {
            if found {
                break;
            }
            found = find_map(x, e, cfg.max_card, Morphism::is_monic)?;
        }
        if !found {
            ok = false;
            witnesses.push(
                Witness::new(format!(
                    "{} embeds in no member of {} over Z/{}",
                    x.describe(),
                    s.e.name(),
                    x.ring().modulus()
                ))
                .with_modules(&[x]),
            );
        }
    }
    Ok(ok)
}

/// Every object of `u` is a quotient of some `D ∈ 𝒟 ∩ u`.
fn enough_quotients(s: &PairSetting, cfg: &CheckConfig, witnesses: &mut Vec<Witness>) -> Result<bool> {
    let ds = s.d_members()?;
    let mut ok = true;
    for x in s.universe.modules() {
        let cover = free_cover(x)?;
        let mut found = s.d.contains(cover.source())?;
        for d in &ds {
            if found {
                break;
            }
            found = find_map(d, x, cfg.max_card, Morphism::is_epic)?;
        }
        if !found {
            ok = false;
            witnesses.push(
                Witness::new(format!(
                    "{} is a quotient of no member of {} over Z/{}",
                    x.describe(),
                    s.d.name(),
                    x.ring().modulus()
                ))
                .with_modules(&[x]),
            );
        }
    }
    Ok(ok)
}

/// The pair axioms plus the requested richness conditions on one setting.
fn setting_hypotheses(
    s: &PairSetting,
    quotients: bool,
    subobjects: bool,
    cfg: &CheckConfig,
    witnesses: &mut Vec<Witness>,
) -> Result<bool> {
    if let Err(msg) = s.universe.validate() {
        witnesses.push(Witness::new(format!("malformed universe: {msg}")));
        return Ok(false);
    }
    let pair = check_cotorsion_pair(&s.d, &s.e, &s.universe, cfg)?;
    let mut ok = pair.is_pair;
    for w in pair.witnesses {
        witnesses.push(Witness {
            message: format!("{}: {}", s.describe(), w.message),
            ..w
        });
    }
    if quotients {
        ok &= enough_quotients(s, cfg, witnesses)?;
    }
    if subobjects {
        ok &= enough_subobjects(s, cfg, witnesses)?;
    }
    Ok(ok)
}

fn check_rings(f: &dyn MultiFunctor, slot_settings: &[&PairSetting], target: &PairSetting) -> Result<()> {
    for (i, s) in slot_settings.iter().enumerate() {
        if s.universe.ring() != f.slot_ring(i) {
            return Err(Error::ring_mismatch(f.slot_ring(i), s.universe.ring()));
        }
    }
    if target.universe.ring() != f.target_ring() {
        return Err(Error::ring_mismatch(f.target_ring(), target.universe.ring()));
    }
    Ok(())
}

/// The four conditions for a one-variable adjunction `F ⊣ G` between
/// `source` on the domain of `F` and `target` on its codomain.
pub fn check_split_1var(
    ma: &MultiAdjunction,
    source: &PairSetting,
    target: &PairSetting,
    cfg: &CheckConfig,
) -> Result<Split1Report> {
    if ma.arity() != 1 {
        return Err(Error::InvalidArgument(format!(
            "one-variable check needs arity 1, got {}",
            ma.arity()
        )));
    }
    let f = ma.left();
    let g = ma.right(0)?;
    check_rings(f.as_ref(), &[source], target)?;
    let mut witnesses = Vec::new();
    let holds = setting_hypotheses(source, false, true, cfg, &mut witnesses)?
        & setting_hypotheses(target, true, false, cfg, &mut witnesses)?;
    let hypotheses = HypothesisReport { holds, witnesses };

    let ds = source.d_members()?;
    let es2 = target.e_members()?;
    let fname = f.name();
    let gname = g.name();

    let seqs = extensions(&ds, source.universe.modules(), cfg)?;
    let c1a = run_condition("1a", &seqs, cfg, |s| {
        Ok((!image_is_short_exact(f.as_ref(), &[], 0, s)?).then(|| split_witness(&fname, &[], s)))
    })?;
    let c1b = run_condition("1b", &ds, cfg, |d| {
        let v = f.apply(std::slice::from_ref(d))?;
        Ok((!target.d.contains(&v)?)
            .then(|| membership_witness(&fname, std::slice::from_ref(d), &v, &target.d)))
    })?;
    let seqs = extensions(target.universe.modules(), &es2, cfg)?;
    let c2a = run_condition("2a", &seqs, cfg, |s| {
        Ok((!image_is_short_exact(g.as_ref(), &[], 0, s)?).then(|| split_witness(&gname, &[], s)))
    })?;
    let c2b = run_condition("2b", &es2, cfg, |e| {
        let v = g.apply(std::slice::from_ref(e))?;
        Ok((!source.e.contains(&v)?)
            .then(|| membership_witness(&gname, std::slice::from_ref(e), &v, &source.e)))
    })?;
    let left = c1a.pass && c1b.pass;
    let right = c2a.pass && c2b.pass;
    Ok(Split1Report {
        equivalence: hypotheses.holds.then_some(left == right),
        hypotheses,
        conditions: vec![c1a, c1b, c2a, c2b],
        left,
        right,
    })
}

/// The two collections of conditions for an `n`-variable adjunction.
/// `settings[0]` lives on the target category and `settings[i]` on slot
/// `i`, so labels are 1-based as in the conditions' names.
pub fn check_nsplit_duality(
    ma: &MultiAdjunction,
    settings: &[PairSetting],
    cfg: &CheckConfig,
) -> Result<NSplitReport> {
    let n = ma.arity();
    if settings.len() != n + 1 {
        return Err(Error::InvalidArgument(format!(
            "{n}-variable adjunction needs {} pair settings, got {}",
            n + 1,
            settings.len()
        )));
    }
    let f = ma.left();
    let slots: Vec<&PairSetting> = settings[1..].iter().collect();
    check_rings(f.as_ref(), &slots, &settings[0])?;
    let mut witnesses = Vec::new();
    let mut holds = true;
    for s in settings {
        holds &= setting_hypotheses(s, true, true, cfg, &mut witnesses)?;
    }
    let hypotheses = HypothesisReport { holds, witnesses };

    let ds: Vec<Vec<FPModule>> = settings
        .iter()
        .map(PairSetting::d_members)
        .collect::<Result<_>>()?;
    let e0 = settings[0].e_members()?;
    let fname = f.name();
    let others = |skip: &[usize]| -> Vec<Vec<FPModule>> {
        (1..=n).filter(|i| !skip.contains(i)).map(|i| ds[i].clone()).collect()
    };

    let mut left_conditions = Vec::new();
    for k in 1..=n {
        let seqs = extensions(&ds[k], settings[k].universe.modules(), cfg)?;
        let items: Vec<(Vec<FPModule>, &ShortExactSequence)> = tuples(&others(&[k]))
            .into_iter()
            .flat_map(|t| seqs.iter().map(move |s| (t.clone(), s)))
            .collect();
        left_conditions.push(run_condition(&format!("0a_{k}"), &items, cfg, |(t, s)| {
            Ok((!image_is_short_exact(f.as_ref(), t, k - 1, s)?).then(|| split_witness(&fname, t, s)))
        })?);
    }
    let all = tuples(&ds[1..]);
    left_conditions.push(run_condition("0b", &all, cfg, |t| {
        let v = f.apply(t)?;
        Ok((!settings[0].d.contains(&v)?).then(|| membership_witness(&fname, t, &v, &settings[0].d)))
    })?);

    let mut right_conditions = Vec::new();
    let seqs0 = extensions(settings[0].universe.modules(), &e0, cfg)?;
    for j in 1..=n {
        let g = ma.right(j - 1)?;
        let gname = g.name();
        let items: Vec<(Vec<FPModule>, &ShortExactSequence)> = tuples(&others(&[j]))
            .into_iter()
            .flat_map(|t| seqs0.iter().map(move |s| (t.clone(), s)))
            .collect();
        right_conditions.push(run_condition(&format!("{j}a_0"), &items, cfg, |(t, s)| {
            Ok((!image_is_short_exact(g.as_ref(), t, n - 1, s)?).then(|| split_witness(&gname, t, s)))
        })?);
        for k in (1..=n).filter(|&k| k != j) {
            // Position of slot k among the arguments of Gʲ.
            let pos = if k < j { k - 1 } else { k - 2 };
            let seqs = extensions(&ds[k], settings[k].universe.modules(), cfg)?;
            let mut lists = others(&[j, k]);
            lists.push(e0.clone());
            let items: Vec<(Vec<FPModule>, &ShortExactSequence)> = tuples(&lists)
                .into_iter()
                .flat_map(|t| seqs.iter().map(move |s| (t.clone(), s)))
                .collect();
            right_conditions.push(run_condition(&format!("{j}a_{k}"), &items, cfg, |(t, s)| {
                Ok((!image_is_short_exact(g.as_ref(), t, pos, s)?).then(|| split_witness(&gname, t, s)))
            })?);
        }
        let mut lists = others(&[j]);
        lists.push(e0.clone());
        let items = tuples(&lists);
        right_conditions.push(run_condition(&format!("{j}b"), &items, cfg, |t| {
            let v = g.apply(t)?;
            Ok((!settings[j].e.contains(&v)?)
                .then(|| membership_witness(&gname, t, &v, &settings[j].e)))
        })?);
    }
    let left = left_conditions.iter().all(|c| c.pass);
    let right = right_conditions.iter().all(|c| c.pass);
    Ok(NSplitReport {
        equivalence: hypotheses.holds.then_some(left == right),
        hypotheses,
        left_conditions,
        right_conditions,
        left,
        right,
    })
}
