use serde::{Deserialize, Serialize};

use super::class::ClassSpec;
use super::universe::{Universe, UniverseInfo};
use crate::bifunctor::{ext, ExtGroup, HomModule};
use crate::config::CheckConfig;
use crate::error::Result;
use crate::gen::{random_element, rng};
use crate::module::{ElementTable, FPModule, Morphism, ShortExactSequence};

/// A counterexample or noteworthy instance, with the objects involved.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub message: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modules: Vec<FPModule>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<Morphism>,
}

impl Witness {
    pub fn new(message: impl Into<String>) -> Witness {
        Witness {
            message: message.into(),
            modules: Vec::new(),
            morphisms: Vec::new(),
        }
    }

    pub fn with_modules(mut self, ms: &[&FPModule]) -> Witness {
        self.modules = ms.iter().map(|m| (*m).clone()).collect();
        self
    }

    pub fn with_morphisms(mut self, fs: &[&Morphism]) -> Witness {
        self.morphisms = fs.iter().map(|f| (*f).clone()).collect();
        self
    }
}

/// An approximation sequence found for `x`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Approximation {
    pub x: String,
    pub left: String,
    pub mid: String,
    pub right: String,
    pub inj: Morphism,
    pub surj: Morphism,
}

impl Approximation {
    fn of(x: &FPModule, s: &ShortExactSequence) -> Approximation {
        Approximation {
            x: x.describe(),
            left: s.left().describe(),
            mid: s.mid().describe(),
            right: s.right().describe(),
            inj: s.inj().clone(),
            surj: s.surj().clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairCheck {
    pub is_pair: bool,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompletenessReport {
    pub enough_injectives: bool,
    pub enough_projectives: bool,
    /// `0 → X → E → D → 0` per `X`, in universe order.
    pub injective_side: Vec<Approximation>,
    /// `0 → E → D → X → 0` per `X`, in universe order.
    pub projective_side: Vec<Approximation>,
    pub witnesses: Vec<Witness>,
}

impl CompletenessReport {
    pub fn complete(&self) -> bool {
        self.enough_injectives && self.enough_projectives
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HereditaryReport {
    pub ext2_vanishes: bool,
    pub resolving: bool,
    pub coresolving: bool,
    pub witnesses: Vec<Witness>,
}

impl HereditaryReport {
    pub fn hereditary(&self) -> bool {
        self.ext2_vanishes
    }

    /// Ext² vanishing forces both closure properties.
    pub fn consistent(&self) -> bool {
        !self.ext2_vanishes || (self.resolving && self.coresolving)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CotorsionReport {
    pub left: String,
    pub right: String,
    pub universe: UniverseInfo,
    pub is_pair: bool,
    pub has_enough_injectives: bool,
    pub has_enough_projectives: bool,
    pub complete: bool,
    pub hereditary: bool,
    pub resolving: bool,
    pub coresolving: bool,
    pub witnesses: Vec<Witness>,
}

/// `𝒟 ∩ u = ⊥(ℰ ∩ u)` and `ℰ ∩ u = (𝒟 ∩ u)⊥` inside `u`.
pub fn check_cotorsion_pair(
    d: &ClassSpec,
    e: &ClassSpec,
    u: &Universe,
    cfg: &CheckConfig,
) -> Result<PairCheck> {
    d.check_ring(u.ring())?;
    e.check_ring(u.ring())?;
    let tables = u.ext_tables(cfg.exec)?;
    let ms = u.modules();
    let in_d = cfg.exec.map(ms, |m| d.contains(m)).into_iter().collect::<Result<Vec<_>>>()?;
    let in_e = cfg.exec.map(ms, |m| e.contains(m)).into_iter().collect::<Result<Vec<_>>>()?;
    let mut witnesses = Vec::new();
    for (x, m) in ms.iter().enumerate() {
        // X ∈ (𝒟 ∩ u)⊥ iff Ext¹(D, X) = 0 for every D.
        let blocker = (0..ms.len()).find(|&i| in_d[i] && tables.ext1[i][x] > 1);
        match (blocker, in_e[x]) {
            (None, false) => witnesses.push(
                Witness::new(format!("{} is in the right perp of 𝒟 but not in ℰ", m.describe()))
                    .with_modules(&[m]),
            ),
            (Some(i), true) => witnesses.push(
                Witness::new(format!(
                    "{} is in ℰ but Ext¹({}, {}) ≠ 0",
                    m.describe(),
                    ms[i].describe(),
                    m.describe()
                ))
                .with_modules(&[&ms[i], m]),
            ),
            _ => {}
        }
        let blocker = (0..ms.len()).find(|&j| in_e[j] && tables.ext1[x][j] > 1);
        match (blocker, in_d[x]) {
            (None, false) => witnesses.push(
                Witness::new(format!("{} is in the left perp of ℰ but not in 𝒟", m.describe()))
                    .with_modules(&[m]),
            ),
            (Some(j), true) => witnesses.push(
                Witness::new(format!(
                    "{} is in 𝒟 but Ext¹({}, {}) ≠ 0",
                    m.describe(),
                    m.describe(),
                    ms[j].describe()
                ))
                .with_modules(&[m, &ms[j]]),
            ),
            _ => {}
        }
    }
    Ok(PairCheck {
        is_pair: witnesses.is_empty(),
        witnesses,
    })
}

/// First extension `0 → left → Y → right → 0` over all Ext classes whose
/// middle satisfies `accept`.
fn search_extension(
    right: &FPModule,
    left: &FPModule,
    cap: u128,
    accept: &dyn Fn(&FPModule) -> Result<bool>,
) -> Result<Option<ShortExactSequence>> {
    let g = ExtGroup::new(right, left)?;
    for s in g.realize_all(cap)? {
        if accept(s.mid())? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Searches approximation sequences for every `X ∈ u` by realizing every
/// Ext class with ends in `𝒟 ∩ u` and `ℰ ∩ u`.
pub fn check_completeness(
    d: &ClassSpec,
    e: &ClassSpec,
    u: &Universe,
    cfg: &CheckConfig,
) -> Result<CompletenessReport> {
    let ds = d.members(u)?;
    let es = e.members(u)?;
    let cap = cfg.max_card;
    let per_x = cfg.exec.map(u.modules(), |x| -> Result<(Option<Approximation>, Option<Approximation>)> {
        let mut inj = None;
        for dm in &ds {
            if let Some(s) = search_extension(dm, x, cap, &|y| e.contains(y))? {
                inj = Some(Approximation::of(x, &s));
                break;
            }
        }
        let mut proj = None;
        for em in &es {
            if let Some(s) = search_extension(x, em, cap, &|y| d.contains(y))? {
                proj = Some(Approximation::of(x, &s));
                break;
            }
        }
        Ok((inj, proj))
    });
    let mut report = CompletenessReport {
        enough_injectives: true,
        enough_projectives: true,
        injective_side: Vec::new(),
        projective_side: Vec::new(),
        witnesses: Vec::new(),
    };
    for (x, found) in u.modules().iter().zip(per_x) {
        let (inj, proj) = found?;
        match inj {
            Some(a) => report.injective_side.push(a),
            None => {
                report.enough_injectives = false;
                report.witnesses.push(
                    Witness::new(format!("no 0 → {} → E → D → 0 within the universe", x.describe()))
                        .with_modules(&[x]),
                );
            }
        }
        match proj {
            Some(a) => report.projective_side.push(a),
            None => {
                report.enough_projectives = false;
                report.witnesses.push(
                    Witness::new(format!("no 0 → E → D → {} → 0 within the universe", x.describe()))
                        .with_modules(&[x]),
                );
            }
        }
    }
    Ok(report)
}

/// Morphisms `a → b`: all of them when the Hom set is small, otherwise
/// `cfg.trials` seeded samples.
fn morphism_batch(a: &FPModule, b: &FPModule, cfg: &CheckConfig, stream: u64) -> Result<Vec<Morphism>> {
    let hom = HomModule::new(a, b)?;
    if hom.module().cardinality() <= cfg.exhaustive_hom {
        let t = ElementTable::new(hom.module(), cfg.exhaustive_hom)?;
        return Ok(t.elements().iter().map(|h| hom.to_morphism(h)).collect());
    }
    let mut g = rng(cfg.stream(stream));
    Ok((0..cfg.trials)
        .map(|_| hom.to_morphism(&random_element(&mut g, hom.module())))
        .collect())
}

/// Ext² vanishing on `𝒟 ∩ u × ℰ ∩ u`, plus closure of `𝒟` under kernels of
/// epimorphisms and of `ℰ` under cokernels of monomorphisms, exhaustive on
/// small Hom sets and sampled on large ones.
pub fn check_hereditary(
    d: &ClassSpec,
    e: &ClassSpec,
    u: &Universe,
    cfg: &CheckConfig,
) -> Result<HereditaryReport> {
    let ds = d.members(u)?;
    let es = e.members(u)?;
    let mut witnesses = Vec::new();
    let mut ext2_vanishes = true;
    for dm in &ds {
        for em in &es {
            let x = ext(2, dm, em)?;
            if !x.is_zero() {
                ext2_vanishes = false;
                witnesses.push(
                    Witness::new(format!(
                        "Ext²({}, {}) = {}",
                        dm.describe(),
                        em.describe(),
                        x.describe()
                    ))
                    .with_modules(&[dm, em]),
                );
            }
        }
    }
    let pairs = |xs: &[FPModule]| -> Vec<(FPModule, FPModule)> {
        xs.iter()
            .flat_map(|a| xs.iter().map(move |b| (a.clone(), b.clone())))
            .collect()
    };
    let d_pairs = pairs(&ds);
    let kernel_failures = cfg.exec.map_range(d_pairs.len(), |i| -> Result<Option<Witness>> {
        let (a, b) = &d_pairs[i];
        for f in morphism_batch(a, b, cfg, i as u64)? {
            if f.is_epic() {
                let (k, _) = f.kernel();
                if !d.contains(&k)? {
                    return Ok(Some(
                        Witness::new(format!("kernel {} of an epimorphism leaves 𝒟", k.describe()))
                            .with_morphisms(&[&f]),
                    ));
                }
            }
        }
        Ok(None)
    });
    let e_pairs = pairs(&es);
    let cokernel_failures = cfg.exec.map_range(e_pairs.len(), |i| -> Result<Option<Witness>> {
        let (a, b) = &e_pairs[i];
        for f in morphism_batch(a, b, cfg, (1 << 32) + i as u64)? {
            if f.is_monic() {
                let (c, _) = f.cokernel();
                if !e.contains(&c)? {
                    return Ok(Some(
                        Witness::new(format!("cokernel {} of a monomorphism leaves ℰ", c.describe()))
                            .with_morphisms(&[&f]),
                    ));
                }
            }
        }
        Ok(None)
    });
    let mut resolving = true;
    for w in kernel_failures {
        if let Some(w) = w? {
            resolving = false;
            witnesses.push(w);
        }
    }
    let mut coresolving = true;
    for w in cokernel_failures {
        if let Some(w) = w? {
            coresolving = false;
            witnesses.push(w);
        }
    }
    Ok(HereditaryReport {
        ext2_vanishes,
        resolving,
        coresolving,
        witnesses,
    })
}

/// The full report for a candidate pair.
pub fn cotorsion_report(
    d: &ClassSpec,
    e: &ClassSpec,
    u: &Universe,
    cfg: &CheckConfig,
) -> Result<CotorsionReport> {
    let pair = check_cotorsion_pair(d, e, u, cfg)?;
    let comp = check_completeness(d, e, u, cfg)?;
    let her = check_hereditary(d, e, u, cfg)?;
    let mut witnesses = pair.witnesses;
    witnesses.extend(comp.witnesses.iter().cloned());
    witnesses.extend(her.witnesses.iter().cloned());
    Ok(CotorsionReport {
        left: d.name(),
        right: e.name(),
        universe: u.info(),
        is_pair: pair.is_pair,
        has_enough_injectives: comp.enough_injectives,
        has_enough_projectives: comp.enough_projectives,
        complete: comp.complete(),
        hereditary: her.hereditary(),
        resolving: her.resolving,
        coresolving: her.coresolving,
        witnesses,
    })
}

/// Conclusions of a pair that induces a model structure: completeness,
/// every object a quotient of a `𝒟`-object, and heredity. A malformed
/// universe is reported as such and establishes nothing.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AssumptionsReport {
    pub universe: UniverseInfo,
    pub universe_error: Option<String>,
    pub complete: bool,
    pub quotients: bool,
    pub hereditary: bool,
    pub witnesses: Vec<Witness>,
}

impl AssumptionsReport {
    pub fn holds(&self) -> bool {
        self.universe_error.is_none() && self.complete && self.quotients && self.hereditary
    }
}

pub fn check_thm_assumptions(
    d: &ClassSpec,
    e: &ClassSpec,
    u: &Universe,
    cfg: &CheckConfig,
) -> Result<AssumptionsReport> {
    if let Err(msg) = u.validate() {
        return Ok(AssumptionsReport {
            universe: u.info(),
            universe_error: Some(msg.clone()),
            complete: false,
            quotients: false,
            hereditary: false,
            witnesses: vec![Witness::new(format!("universe error: {msg}"))],
        });
    }
    let comp = check_completeness(d, e, u, cfg)?;
    let her = check_hereditary(d, e, u, cfg)?;
    let ds = d.members(u)?;
    let mut witnesses = comp.witnesses.clone();
    witnesses.extend(her.witnesses.iter().cloned());
    let mut quotients = true;
    for x in u.modules() {
        let mut found = false;
        for dm in &ds {
            if morphism_batch(dm, x, cfg, 0)?.iter().any(Morphism::is_epic) {
                found = true;
                break;
            }
        }
        if !found {
            quotients = false;
            witnesses.push(
                Witness::new(format!("{} is not a quotient of a 𝒟-object in the universe", x.describe()))
                    .with_modules(&[x]),
            );
        }
    }
    Ok(AssumptionsReport {
        universe: u.info(),
        universe_error: None,
        complete: comp.complete(),
        quotients,
        hereditary: her.hereditary(),
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn z(n: u64) -> Ring {
        Ring::new(n).unwrap()
    }

    fn cfg() -> CheckConfig {
        CheckConfig::default().with_trials(8)
    }

    #[test]
    fn flat_all_over_z4() {
        let u = Universe::enumerate(z(4), 2);
        let r = cotorsion_report(&ClassSpec::Flat, &ClassSpec::All, &u, &cfg()).unwrap();
        assert!(r.is_pair && r.complete && r.hereditary && r.resolving && r.coresolving, "{r:?}");
    }

    #[test]
    fn flat_flat_over_z12_fails_at_z2() {
        let u = Universe::enumerate(z(12), 2);
        let p = check_cotorsion_pair(&ClassSpec::Flat, &ClassSpec::Flat, &u, &cfg()).unwrap();
        assert!(!p.is_pair);
        assert!(p.witnesses.iter().any(|w| w.message.starts_with("Z/2 is in the right perp")));
    }

    #[test]
    fn approximations_of_z2() {
        let r = z(4);
        let u = Universe::enumerate(r, 2);
        let c = check_completeness(&ClassSpec::Flat, &ClassSpec::All, &u, &cfg()).unwrap();
        let x = c.injective_side.iter().find(|a| a.x == "Z/2").unwrap();
        assert_eq!((x.mid.as_str(), x.right.as_str()), ("Z/2", "0"));
        let x = c.projective_side.iter().find(|a| a.x == "Z/2").unwrap();
        assert_eq!((x.left.as_str(), x.mid.as_str()), ("Z/2", "Z/4"));
        let c = check_completeness(&ClassSpec::All, &ClassSpec::Injective, &u, &cfg()).unwrap();
        let x = c.injective_side.iter().find(|a| a.x == "Z/2").unwrap();
        assert_eq!((x.mid.as_str(), x.right.as_str()), ("Z/4", "Z/2"));
        let zero = c.injective_side.iter().find(|a| a.x == "0").unwrap();
        assert_eq!(zero.mid, "0");
    }

    #[test]
    fn fabricated_pair_has_nonzero_ext2() {
        let r = z(4);
        let u = Universe::enumerate(r, 2);
        let z2 = ClassSpec::Explicit(vec![FPModule::cyclic(r, 2).unwrap()]);
        let h = check_hereditary(&z2, &z2, &u, &cfg()).unwrap();
        assert!(!h.ext2_vanishes);
        assert!(h.witnesses[0].message.starts_with("Ext²(Z/2, Z/2)"));
    }

    #[test]
    fn malformed_universe_is_flagged() {
        let r = z(12);
        let u = Universe::from_modules(r, vec![FPModule::zero(r), FPModule::cyclic(r, 2).unwrap()]);
        let a = check_thm_assumptions(&ClassSpec::All, &ClassSpec::Injective, &u, &cfg()).unwrap();
        assert!(!a.holds());
        assert!(!a.quotients);
        assert!(a.universe_error.unwrap().contains("free"));
    }
}
