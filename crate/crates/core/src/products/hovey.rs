use serde::{Deserialize, Serialize};

use super::pp::{pushout_product, verify_coker_formula};
use super::split::{check_nsplit_duality, NSplitReport, PairSetting};
use super::Status;
use crate::bifunctor::MultiAdjunction;
use crate::config::CheckConfig;
use crate::cotorsion::Witness;
use crate::error::{Error, Result};
use crate::gen::{random_extension_from, Rng};
use crate::module::Morphism;

/// Monicity and cokernel of `□_F(f₁, …, fₙ)` for monomorphisms with
/// cokernels in the `𝒟ᵢ`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HoveyReport {
    /// The `(0a_k)`, `(0b)` collection and its standing assumptions hold.
    pub precondition: bool,
    /// Every `fᵢ` is monic with cokernel in `𝒟ᵢ`.
    pub inputs_valid: bool,
    /// `None` when the checker refused to run.
    pub monic: Option<bool>,
    pub coker_iso: Option<bool>,
    pub kernel: Option<String>,
    pub cokernel: Option<String>,
    pub witness: Option<Witness>,
}

impl HoveyReport {
    pub fn status(&self) -> Status {
        if !self.precondition || !self.inputs_valid {
            Status::HypothesisFailed
        } else if self.monic == Some(true) && self.coker_iso == Some(true) {
            Status::Pass
        } else {
            Status::ConclusionFailed
        }
    }
}

/// Evaluates the module-level conditions once, then checks pushout
/// products against them.
#[derive(Clone, Debug)]
pub struct HoveyChecker {
    ma: MultiAdjunction,
    settings: Vec<PairSetting>,
    precondition: NSplitReport,
}

impl HoveyChecker {
    pub fn new(ma: &MultiAdjunction, settings: &[PairSetting], cfg: &CheckConfig) -> Result<Self> {
        let precondition = check_nsplit_duality(ma, settings, cfg)?;
        Ok(HoveyChecker {
            ma: ma.clone(),
            settings: settings.to_vec(),
            precondition,
        })
    }

    pub fn precondition(&self) -> &NSplitReport {
        &self.precondition
    }

    /// Refuses when the module-level conditions fail. With valid conditions
    /// but inputs outside the hypotheses the conclusion is still computed,
    /// for information, and the status reports the failed hypothesis.
    pub fn check(&self, fs: &[Morphism]) -> Result<HoveyReport> {
        let n = self.ma.arity();
        if fs.len() != n {
            return Err(Error::InvalidArgument(format!(
                "arity mismatch: expected {n} morphisms, got {}",
                fs.len()
            )));
        }
        if !self.precondition.left_holds() {
            return Ok(HoveyReport {
                precondition: false,
                inputs_valid: false,
                monic: None,
                coker_iso: None,
                kernel: None,
                cokernel: None,
                witness: Some(Witness::new(
                    "refused: the module-level split conditions do not hold",
                )),
            });
        }
        let mut inputs_valid = true;
        let mut witness = None;
        for (i, f) in fs.iter().enumerate() {
            let c = f.cokernel().0;
            if !f.is_monic() || !self.settings[i + 1].d.contains(&c)? {
                inputs_valid = false;
                witness.get_or_insert_with(|| {
                    Witness::new(format!(
                        "input {} is not a monomorphism with cokernel in {} (cokernel {})",
                        i + 1,
                        self.settings[i + 1].d.name(),
                        c.describe()
                    ))
                    .with_morphisms(&[f])
                });
            }
        }
        let f = self.ma.left();
        let pp = pushout_product(f.as_ref(), fs)?;
        let formula = verify_coker_formula(f.as_ref(), fs)?;
        let monic = pp.map.is_monic();
        if inputs_valid && !(monic && formula.coker_iso) {
            let refs: Vec<&Morphism> = fs.iter().collect();
            witness = Some(
                Witness::new(format!(
                    "pushout product has kernel {} and cokernel {} (expected {})",
                    pp.map.kernel().0.describe(),
                    formula.coker,
                    formula.expected
                ))
                .with_morphisms(&refs),
            );
        }
        Ok(HoveyReport {
            precondition: true,
            inputs_valid,
            monic: Some(monic),
            coker_iso: Some(formula.coker_iso),
            kernel: Some(pp.map.kernel().0.describe()),
            cokernel: Some(formula.coker),
            witness,
        })
    }
}

/// A monomorphism `X → Y` with cokernel in `𝒟`, realized from a random Ext
/// class of a random `D ∈ 𝒟 ∩ u` by a random `X ∈ u`.
pub fn random_d_monic(rng: &mut Rng, s: &PairSetting) -> Result<Morphism> {
    let ds = s.d_members()?;
    if ds.is_empty() {
        return Err(Error::InvalidArgument(format!("{} has no members", s.d.name())));
    }
    Ok(random_extension_from(rng, &ds, s.universe.modules())?.inj().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cotorsion::{ClassSpec, Universe};
    use crate::gen::rng;
    use crate::module::FPModule;
    use crate::products::zero_into;
    use crate::ring::{Matrix, Ring};

    fn flat_all(n: u64, factors: usize) -> PairSetting {
        PairSetting::new(
            ClassSpec::Flat,
            ClassSpec::All,
            Universe::enumerate(Ring::new(n).unwrap(), factors),
        )
    }

    #[test]
    fn zero_sources_into_free() {
        let r = Ring::new(4).unwrap();
        let s = flat_all(4, 2);
        let ma = MultiAdjunction::tensor(r, 2).unwrap();
        let h = HoveyChecker::new(&ma, &[s.clone(), s.clone(), s], &CheckConfig::default()).unwrap();
        let f = zero_into(&FPModule::free(r, 1));
        let rep = h.check(&[f.clone(), f]).unwrap();
        assert_eq!(rep.status(), Status::Pass);
        assert_eq!(rep.cokernel.as_deref(), Some("Z/4"));
    }

    #[test]
    fn non_flat_cokernel_gives_kernel_z2() {
        let r = Ring::new(4).unwrap();
        let s = flat_all(4, 2);
        let ma = MultiAdjunction::tensor(r, 2).unwrap();
        let h = HoveyChecker::new(&ma, &[s.clone(), s.clone(), s], &CheckConfig::default()).unwrap();
        let f = Morphism::new(
            FPModule::cyclic(r, 2).unwrap(),
            FPModule::free(r, 1),
            Matrix::from_rows(r, &[vec![2]]).unwrap(),
        )
        .unwrap();
        let rep = h.check(&[f.clone(), f]).unwrap();
        assert_eq!(rep.status(), Status::HypothesisFailed);
        assert_eq!(rep.monic, Some(false));
        assert_eq!(rep.kernel.as_deref(), Some("Z/2"));
        assert_eq!(rep.coker_iso, Some(true));
    }

    #[test]
    fn random_flat_monics_over_z12() {
        let r = Ring::new(12).unwrap();
        let s = flat_all(12, 1);
        let ma = MultiAdjunction::tensor(r, 2).unwrap();
        let h = HoveyChecker::new(&ma, &[s.clone(), s.clone(), s.clone()], &CheckConfig::default()).unwrap();
        let mut g = rng(5);
        for _ in 0..10 {
            let fs = [random_d_monic(&mut g, &s).unwrap(), random_d_monic(&mut g, &s).unwrap()];
            assert_eq!(h.check(&fs).unwrap().status(), Status::Pass);
        }
    }

    #[test]
    fn broken_precondition_refuses() {
        let r = Ring::new(4).unwrap();
        let s = flat_all(4, 2);
        let broken = PairSetting::new(
            ClassSpec::Explicit(vec![FPModule::cyclic(r, 2).unwrap()]),
            ClassSpec::All,
            s.universe.clone(),
        );
        let ma = MultiAdjunction::tensor(r, 2).unwrap();
        let h = HoveyChecker::new(&ma, &[broken, s.clone(), s], &CheckConfig::default()).unwrap();
        let f = zero_into(&FPModule::free(r, 1));
        let rep = h.check(&[f.clone(), f]).unwrap();
        assert_eq!(rep.status(), Status::HypothesisFailed);
        assert_eq!(rep.monic, None);
    }
}
