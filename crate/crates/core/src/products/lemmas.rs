use serde::{Deserialize, Serialize};

use super::pp::{functor_cube, out_of_colimit, pullback_product, pushout_product, verify_coker_formula, zero_into};
use super::split::{extensions, run_condition, short_exact, PairSetting, SplitReport};
use crate::bifunctor::{
    FunctorRef, HomModule, MultiAdjunction, MultiFunctor, Restricted, Tensor, TensorHom,
};
use crate::config::CheckConfig;
use crate::cotorsion::{ClassSpec, Universe, Witness};
use crate::error::{Error, Result};
use crate::gen::{random_module, random_morphism, rng};
use crate::module::{pushout, FPModule, Morphism, Puncture, ShortExactSequence};
use crate::ring::{Matrix, Ring};

/// Outcome of one lemma instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub pass: bool,
    pub detail: String,
}

impl LemmaCheck {
    fn new(pass: bool, detail: impl Into<String>) -> LemmaCheck {
        LemmaCheck {
            pass,
            detail: detail.into(),
        }
    }
}

/// `□_{F(−, X)}(f₁, …, fₙ₋₁)` against `□_F(f₁, …, fₙ₋₁, 0 → X)`: the
/// canonical map between the colimits is an isomorphism and both pushout
/// products agree through it.
pub fn verify_pp_restriction(f: &FunctorRef, fs: &[Morphism], x: &FPModule) -> Result<LemmaCheck> {
    let n = f.arity();
    let restricted = Restricted::new(f.clone(), n - 1, x.clone())?;
    let small = pushout_product(&restricted, fs)?;
    let mut all = fs.to_vec();
    all.push(zero_into(x));
    let big = pushout_product(f.as_ref(), &all)?;
    let top = 1usize << (n - 1);
    let maps: Vec<Morphism> = (0..top - 1)
        .map(|v| big.colimit.legs[v | top].clone().expect("present vertex"))
        .collect();
    let phi = out_of_colimit(&small.colimit, &maps, &big.colimit.module)?;
    let iso = phi.is_iso();
    let agree = phi.then(&big.map)?.equals(&small.map)?;
    Ok(LemmaCheck::new(
        iso && agree,
        format!(
            "sources {} and {}, comparison iso: {iso}, composites equal: {agree}",
            small.colimit.module.describe(),
            big.colimit.module.describe()
        ),
    ))
}

/// The square with corners `c F(f₁, …, 0 → Aₙ)`, `c F(f₁, …, 0 → Bₙ)`,
/// `F(B₁, …, Bₙ₋₁, Aₙ)` and `c F(f₁, …, fₙ)` is a pushout: the computed
/// pushout maps isomorphically onto the punctured colimit.
pub fn verify_pp_square(f: &dyn MultiFunctor, fs: &[Morphism]) -> Result<LemmaCheck> {
    let n = fs.len();
    if n < 2 {
        return Err(Error::InvalidArgument("the pushout square needs n ≥ 2".into()));
    }
    let last = n - 1;
    let top = 1usize << last;
    let full = (1usize << n) - 1;
    let with_last = |m: Morphism| {
        let mut v = fs.to_vec();
        v[last] = m;
        v
    };
    let (a_n, b_n) = (fs[last].source(), fs[last].target());
    let cube_a = functor_cube(f, &with_last(zero_into(a_n)), Puncture::None)?;
    let colim_a = cube_a.punctured_colimit()?;
    let colim_b = functor_cube(f, &with_last(zero_into(b_n)), Puncture::AllOnes)?.punctured_colimit()?;
    let main = pushout_product(f, fs)?;

    let slot_objects = |v: usize, bit_last: Option<&FPModule>| -> Vec<FPModule> {
        (0..n)
            .map(|i| {
                if i == last {
                    bit_last.cloned().unwrap_or_else(|| FPModule::zero(a_n.ring()))
                } else if v >> i & 1 == 1 {
                    fs[i].target().clone()
                } else {
                    fs[i].source().clone()
                }
            })
            .collect()
    };
    let mut across = Vec::new();
    for v in 0..full {
        let m = if v & top != 0 {
            let mut ms: Vec<Morphism> = slot_objects(v, Some(a_n)).iter().map(Morphism::identity).collect();
            ms[last] = fs[last].clone();
            f.apply_morphism(&ms)?
        } else {
            let ms: Vec<Morphism> = slot_objects(v, None).iter().map(Morphism::identity).collect();
            f.apply_morphism(&ms)?
        };
        across.push(m.then(colim_b.legs[v].as_ref().expect("present vertex"))?);
    }
    let top_map = out_of_colimit(&colim_a, &across, &colim_b.module)?;
    let left = colim_a.comparison.clone().expect("apex present");
    let p = pushout(&left, &top_map)?;

    let corner = main.colimit.legs[full ^ top].clone().expect("present vertex");
    let into_main: Vec<Morphism> = (0..full)
        .map(|v| {
            let src = colim_b.legs[v].as_ref().expect("present vertex").source();
            if v & top != 0 {
                main.colimit.legs[v].clone().expect("present vertex")
            } else {
                Morphism::zero(src, &main.colimit.module)
            }
        })
        .collect();
    let from_b = out_of_colimit(&colim_b, &into_main, &main.colimit.module)?;
    let m = corner.matrix().vstack(from_b.matrix())?;
    let detail = format!(
        "pushout {} against colimit {}",
        p.module.describe(),
        main.colimit.module.describe()
    );
    match Morphism::new(p.module.clone(), main.colimit.module.clone(), m) {
        Ok(phi) => Ok(LemmaCheck::new(phi.is_iso(), detail)),
        Err(Error::NotWellDefined(_)) => Ok(LemmaCheck::new(false, format!("{detail}: square does not commute"))),
        Err(e) => Err(e),
    }
}

/// `Hom(colim F(f₁, …, 0 → Bⱼ, …, fₙ), A₀) ≅ Hom(Bⱼ, lim Gʲ(f₁, …, fₙ, A₀ → 0))`.
///
/// `fs` holds the maps of the slots other than `j` in order. Each generator
/// of the left Hom module is restricted to the cube vertices, transposed
/// vertex by vertex and lifted into the limit; the resulting map of Hom
/// modules must be an isomorphism.
pub fn verify_pp_adjunction(
    ma: &MultiAdjunction,
    j: usize,
    fs: &[Morphism],
    b_j: &FPModule,
    a0: &FPModule,
) -> Result<LemmaCheck> {
    let n = ma.arity();
    if fs.len() + 1 != n {
        return Err(Error::InvalidArgument(format!(
            "expected {} maps besides slot {j}, got {}",
            n - 1,
            fs.len()
        )));
    }
    let f = ma.left();
    let g = ma.right(j)?;
    let mut left_maps = fs.to_vec();
    left_maps.insert(j, zero_into(b_j));
    let colim = functor_cube(f.as_ref(), &left_maps, Puncture::AllOnes)?.punctured_colimit()?;
    let mut right_maps = fs.to_vec();
    right_maps.push(Morphism::zero(a0, &FPModule::zero(a0.ring())));
    let gcube = functor_cube(g.as_ref(), &right_maps, Puncture::AllZeros)?;
    let lim = gcube.punctured_limit()?;

    let lhs = HomModule::new(&colim.module, a0)?;
    let rhs = HomModule::new(b_j, &lim.module)?;
    let (lc, rc) = (lhs.module().cardinality(), rhs.module().cardinality());

    // lim → ⊕_{w ≠ 0} G_w, the kernel inclusion.
    let full_g = (1usize << n) - 1;
    let ring = a0.ring();
    let mut incl = Matrix::zeros(ring, lim.module.num_gens(), 0);
    let mut vs = Vec::new();
    for w in 1..=full_g {
        let leg = lim.legs[w].as_ref().expect("present vertex");
        incl = incl.hstack(leg.matrix())?;
        vs.push(leg.target());
    }
    let sum = FPModule::direct_sum(ring, &vs)?;
    let solver = Morphism::new(lim.module.clone(), sum.module.clone(), incl)?.preimage_solver();

    let full_f = (1usize << n) - 1;
    let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
    let mut rows = Vec::new();
    for gi in 0..lhs.module().num_gens() {
        let mut e = vec![0u64; lhs.module().num_gens()];
        e[gi] = 1;
        let phi = lhs.to_morphism(&e);
        let mut blocks: Vec<Matrix> = (1..=full_g)
            .map(|w| Matrix::zeros(ring, b_j.num_gens(), gcube.vertex(w).unwrap().num_gens()))
            .collect();
        for v in (0..full_f).filter(|v| v >> j & 1 == 1) {
            let leg = colim.legs[v].as_ref().expect("present vertex");
            let objs: Vec<FPModule> = (0..n)
                .map(|i| {
                    if i == j {
                        b_j.clone()
                    } else if v >> i & 1 == 1 {
                        left_maps[i].target().clone()
                    } else {
                        left_maps[i].source().clone()
                    }
                })
                .collect();
            let t = ma.transpose(j, &objs, a0, &leg.then(&phi)?)?;
            let w = others
                .iter()
                .enumerate()
                .filter(|(_, &i)| v >> i & 1 == 0)
                .fold(0usize, |acc, (p, _)| acc | 1 << p);
            if !t.target().same(gcube.vertex(w).unwrap()) {
                return Err(Error::Shape(format!("transpose at vertex {v} misses the limit cube")));
            }
            blocks[w - 1] = t.matrix().clone();
        }
        let mut joined = Matrix::zeros(ring, b_j.num_gens(), 0);
        for b in &blocks {
            joined = joined.hstack(b)?;
        }
        let mut psi = Vec::new();
        for r in 0..b_j.num_gens() {
            match solver.solve(joined.row(r)) {
                Some(x) => psi.push(x),
                None => {
                    return Ok(LemmaCheck::new(
                        false,
                        format!("transpose of generator {gi} is not compatible with the limit"),
                    ))
                }
            }
        }
        let psi = Morphism::new(
            b_j.clone(),
            lim.module.clone(),
            Matrix::from_residue_rows(ring, lim.module.num_gens(), &psi),
        )?;
        rows.push(rhs.from_morphism(&psi)?);
    }
    let m = Matrix::from_residue_rows(ring, rhs.module().num_gens(), &rows);
    let iso = match Morphism::new(lhs.module().clone(), rhs.module().clone(), m) {
        Ok(t) => t.is_iso(),
        Err(Error::NotWellDefined(_)) => false,
        Err(e) => return Err(e),
    };
    Ok(LemmaCheck::new(
        lc == rc && iso,
        format!("|Hom| {lc} and {rc}, transpose on generators iso: {iso}"),
    ))
}

/// Surjectivity of `Hom(B, F) → Hom(B, G) ×_{Hom(A, G)} Hom(A, F)` for
/// every `0 → A → B → D → 0` with `D ∈ 𝒟` and `0 → E → F → G → 0` with
/// `E ∈ ℰ`, one sequence per Ext class.
pub fn verify_hom_left_split(s: &PairSetting, cfg: &CheckConfig) -> Result<SplitReport> {
    let ring = s.universe.ring();
    let us = s.universe.modules();
    let left = extensions(&s.d_members()?, us, cfg)?;
    let right = extensions(us, &s.e_members()?, cfg)?;
    let items: Vec<(&ShortExactSequence, &ShortExactSequence)> = left
        .iter()
        .flat_map(|a| right.iter().map(move |b| (a, b)))
        .collect();
    let hom = TensorHom::hom(ring);
    run_condition("hom-left-split", &items, cfg, |(a, b)| {
        let pb = pullback_product(&hom, &[a.inj().clone(), b.surj().clone()])?;
        Ok((!pb.map.is_epic()).then(|| {
            Witness::new(format!(
                "pullback product of Hom is not epic for {} → {} and {} → {}",
                a.left().describe(),
                a.mid().describe(),
                b.mid().describe(),
                b.right().describe()
            ))
            .with_morphisms(&[a.inj(), b.surj()])
        }))
    })
}

/// Tensoring a sequence ending in a member of `𝒟` with any `X` stays short
/// exact; with `𝒟` the flat modules this always holds.
pub fn verify_flat_split(s: &PairSetting, cfg: &CheckConfig) -> Result<SplitReport> {
    let u = &s.universe;
    let ring = u.ring();
    let seqs = extensions(&s.d_members()?, u.modules(), cfg)?;
    let items: Vec<(&ShortExactSequence, &FPModule)> = seqs
        .iter()
        .flat_map(|s| u.modules().iter().map(move |x| (s, x)))
        .collect();
    let t = Tensor { ring, arity: 2 };
    run_condition("flat-split", &items, cfg, |(s, x)| {
        let id = Morphism::identity(x);
        let a = t.apply_morphism(&[s.inj().clone(), id.clone()])?;
        let b = t.apply_morphism(&[s.surj().clone(), id])?;
        Ok((!short_exact(&a, &b)?).then(|| {
            Witness::new(format!(
                "− ⊗ {} breaks 0 → {} → {} → {} → 0",
                x.describe(),
                s.left().describe(),
                s.mid().describe(),
                s.right().describe()
            ))
            .with_modules(&[x])
            .with_morphisms(&[s.inj(), s.surj()])
        }))
    })
}

fn sum_of(a: &ShortExactSequence, b: &ShortExactSequence) -> Result<(Morphism, Morphism)> {
    let ring = a.left().ring();
    let block = |f: &Morphism, g: &Morphism| -> Result<Morphism> {
        Morphism::new(
            f.source().oplus(g.source())?,
            f.target().oplus(g.target())?,
            Matrix::block_diag(&[f.matrix(), g.matrix()], ring),
        )
    };
    Ok((block(a.inj(), b.inj())?, block(a.surj(), b.surj())?))
}

/// Finite direct sums of sequences with cokernel in `𝒟` are short exact
/// with cokernel in `𝒟`, and dually for kernels in `ℰ`.
pub fn verify_exact_sums(s: &PairSetting, cfg: &CheckConfig) -> Result<SplitReport> {
    let us = s.universe.modules();
    let with_d = extensions(&s.d_members()?, us, cfg)?;
    let with_e = extensions(us, &s.e_members()?, cfg)?;
    let mut items: Vec<(bool, &ShortExactSequence, &ShortExactSequence)> = Vec::new();
    for (flag, seqs) in [(true, &with_d), (false, &with_e)] {
        for (i, a) in seqs.iter().enumerate() {
            for b in &seqs[i..] {
                items.push((flag, a, b));
            }
        }
    }
    run_condition("exact-sums", &items, cfg, |(cokernel_side, a, b)| {
        let (inj, surj) = sum_of(a, b)?;
        let ok = short_exact(&inj, &surj)?
            && if *cokernel_side {
                s.d.contains(surj.target())?
            } else {
                s.e.contains(inj.source())?
            };
        Ok((!ok).then(|| {
            Witness::new(format!(
                "sum of sequences ending in {} and {} fails",
                a.right().describe(),
                b.right().describe()
            ))
            .with_morphisms(&[a.inj(), a.surj(), b.inj(), b.surj()])
        }))
    })
}

/// The lemmas exposed through the `verify` command.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaKind {
    CokerPushout,
    PpRestriction,
    PpSquare,
    PpAdjunction,
    HomLeftSplit,
    FlatSplit,
    ExactSums,
}

impl LemmaKind {
    pub const ALL: [LemmaKind; 7] = [
        LemmaKind::CokerPushout,
        LemmaKind::PpRestriction,
        LemmaKind::PpSquare,
        LemmaKind::PpAdjunction,
        LemmaKind::HomLeftSplit,
        LemmaKind::FlatSplit,
        LemmaKind::ExactSums,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaKind::CokerPushout => "coker-pushout",
            LemmaKind::PpRestriction => "pp-restriction",
            LemmaKind::PpSquare => "pp-square",
            LemmaKind::PpAdjunction => "pp-adjunction",
            LemmaKind::HomLeftSplit => "hom-left-split",
            LemmaKind::FlatSplit => "flat-split",
            LemmaKind::ExactSums => "exact-sums",
        }
    }

    pub fn parse(s: &str) -> Result<LemmaKind> {
        LemmaKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown lemma {s:?}")))
    }

    /// Whether the lemma is checked on random cube inputs rather than by
    /// enumeration over a universe.
    pub fn is_sampled(self) -> bool {
        matches!(
            self,
            LemmaKind::CokerPushout | LemmaKind::PpRestriction | LemmaKind::PpSquare | LemmaKind::PpAdjunction
        )
    }
}

/// Aggregate of a lemma run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaBattery {
    pub lemma: String,
    pub modulus: u64,
    pub arity: usize,
    pub instances: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl LemmaBattery {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }
}

/// Zero modules make the cube lemmas trivial; they are covered by the unit
/// tests, so sampled instances use nonzero modules.
fn nonzero_module(g: &mut crate::gen::Rng, ring: Ring, factors: usize) -> FPModule {
    loop {
        let m = random_module(g, ring, factors);
        if !m.is_zero() {
            return m;
        }
    }
}

fn random_maps(g: &mut crate::gen::Rng, ring: Ring, count: usize, factors: usize) -> Result<Vec<Morphism>> {
    (0..count)
        .map(|_| {
            let a = nonzero_module(g, ring, factors);
            let b = nonzero_module(g, ring, factors);
            random_morphism(g, &a, &b)
        })
        .collect()
}

/// One random instance of a sampled lemma for the `arity`-fold tensor.
fn sampled_instance(kind: LemmaKind, ring: Ring, arity: usize, seed: u64) -> Result<LemmaCheck> {
    let mut g = rng(seed);
    let factors = if arity <= 2 { 2 } else { 1 };
    let ma = MultiAdjunction::tensor(ring, arity)?;
    let f = ma.left();
    match kind {
        LemmaKind::CokerPushout => {
            let fs = random_maps(&mut g, ring, arity, factors)?;
            let c = verify_coker_formula(f.as_ref(), &fs)?;
            Ok(LemmaCheck::new(c.holds(), format!("coker {} vs {}", c.coker, c.expected)))
        }
        LemmaKind::PpRestriction => {
            let fs = random_maps(&mut g, ring, arity - 1, factors)?;
            let x = nonzero_module(&mut g, ring, factors);
            verify_pp_restriction(&f, &fs, &x)
        }
        LemmaKind::PpSquare => {
            let fs = random_maps(&mut g, ring, arity, factors)?;
            verify_pp_square(f.as_ref(), &fs)
        }
        LemmaKind::PpAdjunction => {
            let fs = random_maps(&mut g, ring, arity - 1, 1)?;
            let b = nonzero_module(&mut g, ring, 1);
            let a0 = nonzero_module(&mut g, ring, 1);
            let j = rand::Rng::gen_range(&mut g, 0..arity);
            verify_pp_adjunction(&ma, j, &fs, &b, &a0)
        }
        _ => unreachable!("enumerated lemmas are not sampled"),
    }
}

/// Runs `cfg.trials` seeded instances of a sampled lemma, or the full
/// enumeration of an enumerated one over `pair`, by default `(Flat, All)`
/// on modules with at most two invariant factors.
pub fn lemma_battery(
    kind: LemmaKind,
    ring: Ring,
    arity: usize,
    pair: Option<&PairSetting>,
    cfg: &CheckConfig,
) -> Result<LemmaBattery> {
    let (instances, failures, first_failure) = if kind.is_sampled() {
        if arity < 2 && kind != LemmaKind::CokerPushout {
            return Err(Error::InvalidArgument(format!("{} needs arity ≥ 2", kind.name())));
        }
        let results = cfg
            .exec
            .map_range(cfg.trials, |t| sampled_instance(kind, ring, arity, cfg.stream(t as u64)));
        let mut failures = 0;
        let mut first = None;
        for (t, r) in results.into_iter().enumerate() {
            let r = r?;
            if !r.pass {
                failures += 1;
                first.get_or_insert(format!("trial {t}: {}", r.detail));
            }
        }
        (cfg.trials, failures, first)
    } else {
        let default;
        let s = match pair {
            Some(p) => p,
            None => {
                default = PairSetting::new(ClassSpec::Flat, ClassSpec::All, Universe::enumerate(ring, 2));
                &default
            }
        };
        let rep = match kind {
            LemmaKind::HomLeftSplit => verify_hom_left_split(s, cfg)?,
            LemmaKind::FlatSplit => verify_flat_split(s, cfg)?,
            _ => verify_exact_sums(s, cfg)?,
        };
        let failures = usize::from(!rep.pass);
        (rep.checked, failures, rep.counterexample.map(|w| w.message))
    };
    Ok(LemmaBattery {
        lemma: kind.name().to_string(),
        modulus: ring.modulus(),
        arity,
        instances,
        failures,
        first_failure,
    })
}
