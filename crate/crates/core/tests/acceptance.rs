//! End-to-end acceptance run: one line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use cotlab_core::bifunctor::{base_change, ext, restrict_adjunction, MultiAdjunction};
use cotlab_core::cotorsion::{cotorsion_report, is_injective, is_projective, ClassSpec, Universe};
use cotlab_core::gen::rng;
use cotlab_core::harness::{bundled, run_check, run_suite};
use cotlab_core::products::{
    check_nsplit_duality, check_split_1var, lemma_battery, random_d_monic, HoveyChecker, LemmaKind, PairSetting,
    Status,
};
use cotlab_core::{CheckConfig, Exec, FPModule, Matrix, Morphism, Result, Ring};

use common::{ext1_count, small_z4_groups, Group};

/// `Ok(detail)` on success, `Err(detail)` on a failed criterion.
type Verdict = std::result::Result<String, String>;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Result<Verdict> + 'a>);

fn ring(n: u64) -> Ring {
    Ring::new(n).unwrap()
}

fn setting(n: u64, factors: usize, d: ClassSpec, e: ClassSpec) -> PairSetting {
    PairSetting::new(d, e, Universe::enumerate(ring(n), factors))
}

fn flat_all(n: u64, factors: usize) -> PairSetting {
    setting(n, factors, ClassSpec::Flat, ClassSpec::All)
}

fn ensure(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ext_oracle() -> Result<Verdict> {
    let r = ring(4);
    let mut pairs = 0;
    for a in small_z4_groups() {
        for b in small_z4_groups() {
            let got = ext(1, &FPModule::from_invariants(r, &a)?, &FPModule::from_invariants(r, &b)?)?;
            let want = ext1_count(4, &Group::new(&a), &Group::new(&b));
            if got.cardinality() != want as u128 {
                return Ok(Err(format!("|Ext¹({a:?}, {b:?})| = {} but the oracle counts {want}", got.cardinality())));
            }
            pairs += 1;
        }
    }
    let z2 = FPModule::cyclic(r, 2)?;
    let e = ext(1, &z2, &z2)?;
    Ok(ensure(
        e.invariants() == [2],
        format!("{pairs} pairs of modules with ≤4 elements agree; Ext¹(Z/2, Z/2) = {}", e.describe()),
    ))
}

fn cotorsion_axioms(cfg: &CheckConfig) -> Result<Verdict> {
    for (n, d, e) in [(4, ClassSpec::Flat, ClassSpec::All), (12, ClassSpec::All, ClassSpec::Injective)] {
        let u = Universe::enumerate(ring(n), 2);
        let r = cotorsion_report(&d, &e, &u, cfg)?;
        if !(r.is_pair && r.complete && r.hereditary) {
            return Ok(Err(format!("({}, {}) over Z/{n}: {r:?}", d.name(), e.name())));
        }
    }
    let mut tested = 0;
    for n in 2..=24 {
        for m in Universe::enumerate(ring(n), 2).modules() {
            if is_injective(m)? != is_projective(m) {
                return Ok(Err(format!("{m} over Z/{n}: injective and projective disagree")));
            }
            tested += 1;
        }
    }
    Ok(Ok(format!(
        "(flat, all) over Z/4 and (all, injective) over Z/12 are complete hereditary pairs; \
         injective = projective on {tested} modules over Z/2..Z/24"
    )))
}

fn batteries(kinds: &[LemmaKind], rings: &[u64], trials: usize, cfg: &CheckConfig) -> Result<Verdict> {
    let mut runs = 0;
    for &kind in kinds {
        for &n in rings {
            for arity in [2, 3] {
                let b = lemma_battery(kind, ring(n), arity, None, &cfg.with_trials(trials))?;
                if !b.pass() || b.instances != trials {
                    return Ok(Err(format!("{b:?}")));
                }
                runs += 1;
            }
        }
    }
    let names: Vec<&str> = kinds.iter().map(|k| k.name()).collect();
    let rings: Vec<String> = rings.iter().map(|n| format!("Z/{n}")).collect();
    Ok(Ok(format!(
        "{} over {}, n = 2, 3: {runs} batteries of {trials} trials, no failures",
        names.join(", "),
        rings.join(", ")
    )))
}

fn monicity(cfg: &CheckConfig) -> Result<Verdict> {
    let s = flat_all(12, 1);
    let h = HoveyChecker::new(&MultiAdjunction::tensor(ring(12), 2)?, &[s.clone(), s.clone(), s.clone()], cfg)?;
    let mut monic = 0;
    for t in 0..100 {
        let mut g = rng(cfg.stream(t));
        let fs = [random_d_monic(&mut g, &s)?, random_d_monic(&mut g, &s)?];
        let rep = h.check(&fs)?;
        if rep.status() != Status::Pass {
            return Ok(Err(format!("trial {t}: {rep:?}")));
        }
        monic += 1;
    }
    let r = ring(4);
    let s4 = flat_all(4, 2);
    let h4 = HoveyChecker::new(&MultiAdjunction::tensor(r, 2)?, &[s4.clone(), s4.clone(), s4], cfg)?;
    let f = Morphism::new(FPModule::cyclic(r, 2)?, FPModule::free(r, 1), Matrix::from_rows(r, &[vec![2]])?)?;
    let rep = h4.check(&[f.clone(), f])?;
    let ok = rep.monic == Some(false) && rep.kernel.as_deref() == Some("Z/2") && rep.coker_iso == Some(true);
    Ok(ensure(
        ok,
        format!(
            "{monic}/100 flat-cokernel trials over Z/12 monic; Z/2 -> Z/4 over Z/4 gives kernel {} with coker formula {}",
            rep.kernel.as_deref().unwrap_or("?"),
            if rep.coker_iso == Some(true) { "holding" } else { "failing" }
        ),
    ))
}

fn hom_left_split(cfg: &CheckConfig) -> Result<Verdict> {
    let b = lemma_battery(LemmaKind::HomLeftSplit, ring(4), 2, None, cfg)?;
    Ok(ensure(
        b.pass() && b.instances > 0,
        format!("{} sequence pairs over Z/4 at max_factors 2, {} failures", b.instances, b.failures),
    ))
}

fn split_equivalences(cfg: &CheckConfig) -> Result<Verdict> {
    let mut configs = 0;
    let mut both_fail = 0;
    let mut record = |name: String, hyp: bool, left: bool, right: bool, eq: Option<bool>| -> Option<String> {
        configs += 1;
        if !left && !right {
            both_fail += 1;
        }
        (!hyp || eq != Some(true)).then(|| format!("{name}: left {left}, right {right}, equivalence {eq:?}"))
    };
    let z4 = ring(4);
    let mut one_var: Vec<(String, MultiAdjunction, PairSetting, PairSetting)> = vec![
        ("identity over Z/4".into(), MultiAdjunction::identity(z4), flat_all(4, 2), flat_all(4, 2)),
        ("base change Z/12 -> Z/4".into(), base_change(12, 4)?.adjunction(), flat_all(12, 2), flat_all(4, 2)),
    ];
    for n in [4u64, 6, 8, 12] {
        let t = MultiAdjunction::tensor(ring(n), 2)?;
        for d in ring(n).divisors() {
            let m = FPModule::cyclic(ring(n), d)?;
            one_var.push((format!("Z/{d} ⊗ − over Z/{n}"), restrict_adjunction(&t, 0, &m)?, flat_all(n, 1), flat_all(n, 1)));
        }
    }
    for (name, ma, src, tgt) in &one_var {
        let r = check_split_1var(ma, src, tgt, cfg)?;
        if let Some(e) = record(name.clone(), r.hypotheses.holds, r.left, r.right, r.equivalence) {
            return Ok(Err(e));
        }
    }
    let inj = |n| setting(n, 1, ClassSpec::All, ClassSpec::Injective);
    let n_var = [
        ("tensor over Z/4".to_string(), 4u64, vec![flat_all(4, 2); 3]),
        ("tensor over Z/12".into(), 12, vec![flat_all(12, 1); 3]),
        ("tensor over Z/4, (all, injective) slots".into(), 4, vec![flat_all(4, 1), inj(4), inj(4)]),
        ("tensor over Z/6, (all, injective) slots".into(), 6, vec![flat_all(6, 1), inj(6), inj(6)]),
        ("tensor over Z/6, (all, injective) target".into(), 6, vec![inj(6), flat_all(6, 1), flat_all(6, 1)]),
    ];
    for (name, n, settings) in &n_var {
        let r = check_nsplit_duality(&MultiAdjunction::tensor(ring(*n), 2)?, settings, cfg)?;
        if let Some(e) = record(name.clone(), r.hypotheses.holds, r.left, r.right, r.equivalence) {
            return Ok(Err(e));
        }
    }
    Ok(ensure(
        both_fail > 0,
        format!("left iff right on {configs} configurations, {both_fail} of them with both collections failing"),
    ))
}

fn quillen(cfg: &CheckConfig) -> Result<Verdict> {
    let full = bundled("full")?;
    let base = cfg.with_seed(full.seed).with_trials(full.trials);
    let mut parts = Vec::new();
    for id in ["quillen-basechange-z12-z4", "cot-main-tensor-z4", "cot-main-tensor-z12", "non-null-homotopic-z4"] {
        let spec = full.checks.iter().find(|c| c.id == id).expect("bundled check");
        let r = run_check(spec, &base);
        if !r.pass || r.status != Some(Status::Pass) {
            return Ok(Err(format!("{id}: {} {:?}", r.summary, r.error)));
        }
        let pool = r.payload.get("pool").or_else(|| r.payload.pointer("/report/pool")).and_then(|p| p.as_u64());
        if let Some(pool) = pool {
            if pool < 200 {
                return Ok(Err(format!("{id}: only {pool} sample complexes")));
            }
            parts.push(format!("{id} on {pool} complexes"));
        } else {
            parts.push(id.to_string());
        }
    }
    Ok(Ok(format!("{} pass; the Z/4 ×2 complex is certified non-null-homotopic", parts.join(", "))))
}

fn determinism() -> Result<Verdict> {
    let sc = bundled("full")?;
    let a = run_suite(&sc, Exec::Parallel)?;
    let b = run_suite(&sc, Exec::Parallel)?;
    let c = run_suite(&sc, Exec::Sequential)?;
    let (ja, jb, jc) = (a.deterministic().to_json(), b.deterministic().to_json(), c.deterministic().to_json());
    Ok(ensure(
        a.pass && ja == jb && ja == jc,
        format!(
            "three runs of the full suite ({} checks, {} expected failures) give identical {}-byte reports",
            a.counts.total,
            a.counts.expected_failures,
            ja.len()
        ),
    ))
}

fn main() -> ExitCode {
    let cfg = CheckConfig::default().with_seed(1);
    let criteria: Vec<Criterion> = vec![
        ("Ext oracle equivalence", Box::new(ext_oracle)),
        ("cotorsion axioms", Box::new(|| cotorsion_axioms(&cfg))),
        ("cokernel formula", Box::new(|| batteries(&[LemmaKind::CokerPushout], &[4, 6, 12], 100, &cfg))),
        ("monicity under hypotheses", Box::new(|| monicity(&cfg))),
        ("Hom-left-splitness", Box::new(|| hom_left_split(&cfg))),
        ("split-condition equivalences", Box::new(|| split_equivalences(&cfg))),
        ("Quillen criteria", Box::new(|| quillen(&cfg))),
        (
            "cube lemma battery",
            Box::new(|| {
                batteries(
                    &[LemmaKind::PpRestriction, LemmaKind::PpSquare, LemmaKind::PpAdjunction],
                    &[4, 6, 12],
                    50,
                    &cfg,
                )
            }),
        ),
        ("determinism", Box::new(determinism)),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (tag, detail) = match run() {
            Ok(Ok(d)) => ("PASS", d),
            Ok(Err(d)) => ("FAIL", d),
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("criterion {} [{tag}] {name}: {detail} ({:.1}s)", i + 1, t.elapsed().as_secs_f64());
    }
    println!(
        "acceptance: {}/{} criteria pass in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
