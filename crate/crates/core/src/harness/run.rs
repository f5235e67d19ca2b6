use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{CheckKind, CheckSpec, HoveyInputs, PairSpec, Scenario, TOOL, VERSION};
use crate::complex::{null_homotopy, sample_set, ChainComplex, ChainMap};
use crate::config::CheckConfig;
use crate::cotorsion::{check_thm_assumptions, cotorsion_report};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gen::rng;
use crate::module::{FPModule, Morphism};
use crate::products::{
    check_cot_main, check_nsplit_duality, check_quillen_1var, check_split_1var, complex_extensions,
    cot_main_conditions, lemma_battery, random_d_monic, HoveyChecker, HoveyReport, PairSetting, Status,
};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub check: String,
    /// `None` when the check could not be evaluated.
    pub status: Option<Status>,
    pub expected: Status,
    /// The status matches the expectation.
    pub pass: bool,
    pub summary: String,
    /// The full report of the underlying checker, with counterexamples.
    pub payload: Value,
    pub error: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub total: usize,
    pub passed: usize,
    /// Negative controls that failed as expected; included in `passed`.
    pub expected_failures: usize,
    pub failed: usize,
    pub errors: usize,
}

/// Wall-clock times in milliseconds; the only nondeterministic part of a
/// report.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: u64,
    pub checks: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub scenario: String,
    pub seed: u64,
    pub trials: usize,
    pub pass: bool,
    pub counts: Counts,
    /// Sorted by id.
    pub checks: Vec<CheckResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl RunReport {
    /// The report without timing.
    pub fn deterministic(&self) -> RunReport {
        RunReport {
            timing: None,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{TOOL} {VERSION}  scenario {}  seed {}  trials {}",
            self.scenario, self.seed, self.trials
        );
        for c in &self.checks {
            let tag = match (c.pass, c.expected) {
                (true, Status::Pass) => "PASS",
                (true, _) => "XFAIL",
                (false, _) => "FAIL",
            };
            let ms = self
                .timing
                .as_ref()
                .and_then(|t| t.checks.get(&c.id))
                .map(|ms| format!("  ({ms} ms)"))
                .unwrap_or_default();
            let _ = writeln!(out, "[{tag}] {}: {}{ms}", c.id, c.summary);
            if let Some(e) = &c.error {
                let _ = writeln!(out, "       error: {e}");
            } else if !c.pass {
                let _ = writeln!(
                    out,
                    "       expected {}, got {}",
                    status_name(Some(c.expected)),
                    status_name(c.status)
                );
            }
        }
        let k = &self.counts;
        let _ = writeln!(
            out,
            "{}: {} checks, {} passed ({} expected failures), {} failed, {} errors",
            if self.pass { "ok" } else { "FAILED" },
            k.total,
            k.passed,
            k.expected_failures,
            k.failed,
            k.errors
        );
        if let Some(t) = &self.timing {
            let _ = writeln!(out, "total {} ms", t.total_ms);
        }
        out
    }
}

fn status_name(s: Option<Status>) -> &'static str {
    match s {
        Some(Status::Pass) => "pass",
        Some(Status::HypothesisFailed) => "hypothesis failed",
        Some(Status::ConclusionFailed) => "conclusion failed",
        None => "error",
    }
}

/// Runs every check of the scenario. Checks run concurrently under
/// [`Exec::Parallel`]; results are ordered by id either way.
pub fn run_suite(sc: &Scenario, exec: Exec) -> Result<RunReport> {
    sc.validate()?;
    let start = Instant::now();
    let base = CheckConfig::default().with_exec(exec).with_seed(sc.seed);
    let mut results = exec.map(&sc.checks, |spec| {
        let t = Instant::now();
        let r = run_check(spec, &base.with_trials(spec.trials.unwrap_or(sc.trials)));
        (r, t.elapsed().as_millis() as u64)
    });
    results.sort_by(|a, b| a.0.id.cmp(&b.0.id));
    let mut counts = Counts {
        total: results.len(),
        ..Counts::default()
    };
    let mut timing = Timing::default();
    let mut checks = Vec::with_capacity(results.len());
    for (r, ms) in results {
        if r.error.is_some() {
            counts.errors += 1;
        } else if r.pass {
            counts.passed += 1;
            if r.expected != Status::Pass {
                counts.expected_failures += 1;
            }
        } else {
            counts.failed += 1;
        }
        timing.checks.insert(r.id.clone(), ms);
        checks.push(r);
    }
    timing.total_ms = start.elapsed().as_millis() as u64;
    Ok(RunReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        scenario: sc.name.clone(),
        seed: sc.seed,
        trials: sc.trials,
        pass: counts.passed == counts.total,
        counts,
        checks,
        timing: Some(timing),
    })
}

/// FNV-1a, so the per-check stream depends only on the id.
fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Evaluates one check. `cfg.seed` is the scenario seed; the check draws
/// from its own stream derived from it and the id.
pub fn run_check(spec: &CheckSpec, cfg: &CheckConfig) -> CheckResult {
    let cfg = cfg.with_seed(cfg.stream(fnv1a(&spec.id)));
    let (status, summary, payload, error) = match evaluate(&spec.kind, &cfg) {
        Ok((s, summary, payload)) => (Some(s), summary, payload, None),
        Err(e) => (None, "not evaluated".to_string(), Value::Null, Some(e.to_string())),
    };
    CheckResult {
        id: spec.id.clone(),
        check: spec.kind.name().into(),
        status,
        expected: spec.expect,
        pass: status == Some(spec.expect),
        summary,
        payload,
        error,
    }
}

type Outcome = (Status, String, Value);

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn settings(pairs: &[PairSpec]) -> Vec<PairSetting> {
    pairs.iter().map(PairSpec::setting).collect()
}

fn describe_pair(p: &PairSpec) -> String {
    format!("({}, {}) over {} with ≤{} factors", p.d.name(), p.e.name(), p.ring, p.max_factors)
}

fn evaluate(kind: &CheckKind, cfg: &CheckConfig) -> Result<Outcome> {
    match kind {
        CheckKind::Cotorsion { pair } => {
            let s = pair.setting();
            let rep = cotorsion_report(&s.d, &s.e, &s.universe, cfg)?;
            let status = if s.universe.validate().is_err() {
                Status::HypothesisFailed
            } else if rep.is_pair && rep.complete && rep.hereditary {
                Status::Pass
            } else {
                Status::ConclusionFailed
            };
            let summary = format!(
                "{}: pair {}, complete {}, hereditary {}",
                describe_pair(pair),
                yes(rep.is_pair),
                yes(rep.complete),
                yes(rep.hereditary)
            );
            Ok((status, summary, serde_json::to_value(rep)?))
        }
        CheckKind::Assumptions { pair } => {
            let s = pair.setting();
            let rep = check_thm_assumptions(&s.d, &s.e, &s.universe, cfg)?;
            let status = if rep.universe_error.is_some() {
                Status::HypothesisFailed
            } else if rep.holds() {
                Status::Pass
            } else {
                Status::ConclusionFailed
            };
            let summary = format!(
                "{}: complete {}, quotients {}, hereditary {}",
                describe_pair(pair),
                yes(rep.complete),
                yes(rep.quotients),
                yes(rep.hereditary)
            );
            Ok((status, summary, serde_json::to_value(rep)?))
        }
        CheckKind::Split1 { functor, source, target } => {
            let ma = functor.adjunction()?;
            let rep = check_split_1var(&ma, &source.setting(), &target.setting(), cfg)?;
            let status = split_status(rep.hypotheses.holds, rep.equivalence);
            let summary = format!(
                "{}: left {}, right {}, equivalence {}",
                ma.name(),
                yes(rep.left),
                yes(rep.right),
                equivalence_name(rep.equivalence)
            );
            Ok((status, summary, serde_json::to_value(rep)?))
        }
        CheckKind::Nsplit { functor, pairs } => {
            let ma = functor.adjunction()?;
            let rep = check_nsplit_duality(&ma, &settings(pairs), cfg)?;
            let status = split_status(rep.hypotheses.holds, rep.equivalence);
            let summary = format!(
                "{}: left {}, right {}, equivalence {}",
                ma.name(),
                yes(rep.left),
                yes(rep.right),
                equivalence_name(rep.equivalence)
            );
            Ok((status, summary, serde_json::to_value(rep)?))
        }
        CheckKind::Hovey { functor, pairs, inputs } => {
            let ma = functor.adjunction()?;
            let ss = settings(pairs);
            let h = HoveyChecker::new(&ma, &ss, cfg)?;
            match inputs {
                HoveyInputs::Explicit(fs) => {
                    let rep = h.check(fs)?;
                    let summary = format!(
                        "{}: kernel {}, cokernel {} (formula holds: {})",
                        ma.name(),
                        rep.kernel.as_deref().unwrap_or("-"),
                        rep.cokernel.as_deref().unwrap_or("-"),
                        rep.coker_iso.map_or("-", yes)
                    );
                    Ok((rep.status(), summary, serde_json::to_value(rep)?))
                }
                HoveyInputs::Random => {
                    let reps: Vec<Result<HoveyReport>> = cfg.exec.map_range(cfg.trials, |t| {
                        let mut g = rng(cfg.stream(t as u64));
                        let fs = ss[1..]
                            .iter()
                            .map(|s| random_d_monic(&mut g, s))
                            .collect::<Result<Vec<Morphism>>>()?;
                        h.check(&fs)
                    });
                    let reps = reps.into_iter().collect::<Result<Vec<_>>>()?;
                    let worst = |s: Status| reps.iter().find(|r| r.status() == s);
                    let first_bad = worst(Status::HypothesisFailed).or_else(|| worst(Status::ConclusionFailed));
                    let status = first_bad.map_or(Status::Pass, HoveyReport::status);
                    let monic = reps.iter().filter(|r| r.monic == Some(true)).count();
                    let summary = format!("{}: {monic}/{} pushout products monic", ma.name(), reps.len());
                    let payload = json!({
                        "precondition": h.precondition().left_holds(),
                        "trials": reps.len(),
                        "monic": monic,
                        "first_failure": first_bad,
                    });
                    Ok((status, summary, payload))
                }
            }
        }
        CheckKind::Quillen { functor, source, target, random } => {
            let ma = functor.adjunction()?;
            let (src, tgt) = (source.setting(), target.setting());
            let split = check_split_1var(&ma, &src, &tgt, cfg)?;
            let samples = sample_set(&src.universe, &src.d, cfg.stream(1), *random)?;
            let seqs = complex_extensions(&src, cfg)?;
            let rep = check_quillen_1var(&ma, &src, &tgt, &split, &samples, &seqs, cfg)?;
            let summary = quillen_summary(&ma.name(), rep.pool, &rep.conditions, rep.precondition);
            Ok((rep.status(), summary, serde_json::to_value(rep)?))
        }
        CheckKind::CotMain { functor, pairs, random, force } => {
            let ma = functor.adjunction()?;
            let ss = settings(pairs);
            let n = ma.arity();
            if ss.len() != n + 1 {
                return Err(Error::InvalidArgument(format!("{} needs {} pairs", ma.name(), n + 1)));
            }
            let nsplit = check_nsplit_duality(&ma, &ss, cfg)?;
            let samples = (0..n)
                .map(|i| sample_set(&ss[i + 1].universe, &ss[i + 1].d, cfg.stream(i as u64 + 1), *random))
                .collect::<Result<Vec<_>>>()?;
            let seqs = ss[1..]
                .iter()
                .map(|s| complex_extensions(s, cfg))
                .collect::<Result<Vec<_>>>()?;
            let (status, rep) = if *force {
                let rep = cot_main_conditions(&ma, &ss, &samples, &seqs, cfg)?;
                let ok = rep.conditions.iter().all(|c| c.pass);
                (if ok { Status::Pass } else { Status::ConclusionFailed }, rep)
            } else {
                let rep = check_cot_main(&ma, &ss, &nsplit, &samples, &seqs, cfg)?;
                (rep.status(), rep)
            };
            let summary = quillen_summary(&ma.name(), rep.pool, &rep.conditions, rep.precondition);
            let payload = json!({
                "module_conditions": nsplit.left_holds(),
                "report": rep,
            });
            Ok((status, summary, payload))
        }
        CheckKind::Lemma { lemma, ring, arity, pair } => {
            let setting = pair.as_ref().map(PairSpec::setting);
            let rep = lemma_battery(*lemma, *ring, *arity, setting.as_ref(), cfg)?;
            let status = if rep.pass() { Status::Pass } else { Status::ConclusionFailed };
            let summary = format!(
                "{} over {ring}, n = {arity}: {}/{} instances hold",
                rep.lemma,
                rep.instances - rep.failures,
                rep.instances
            );
            Ok((status, summary, serde_json::to_value(rep)?))
        }
        CheckKind::NonNullHomotopic { ring, factor } => {
            let a = FPModule::free(*ring, 1);
            let c = ChainComplex::from_maps(0, vec![Morphism::scalar(&a, *factor)])?;
            let h = null_homotopy(&ChainMap::identity(&c))?;
            let status = if h.is_none() { Status::Pass } else { Status::ConclusionFailed };
            let summary = format!(
                "identity of {}: {}",
                c.describe(),
                if h.is_none() { "no null-homotopy exists" } else { "null-homotopic" }
            );
            Ok((status, summary, json!({ "complex": c, "homotopy": h })))
        }
    }
}

fn split_status(hypotheses: bool, equivalence: Option<bool>) -> Status {
    match (hypotheses, equivalence) {
        (false, _) => Status::HypothesisFailed,
        (true, Some(true)) => Status::Pass,
        _ => Status::ConclusionFailed,
    }
}

fn equivalence_name(e: Option<bool>) -> &'static str {
    match e {
        Some(true) => "holds",
        Some(false) => "fails",
        None => "not applicable",
    }
}

fn quillen_summary(name: &str, pool: usize, conds: &[crate::products::QuillenCondition], pre: bool) -> String {
    if !pre {
        return format!("{name}: refused, the module-level conditions fail");
    }
    let parts: Vec<String> = conds
        .iter()
        .map(|c| format!("{} {} ({} samples)", c.id, if c.pass { "ok" } else { "fails" }, c.samples))
        .collect();
    format!("{name} on {pool} complexes: {}", parts.join(", "))
}
