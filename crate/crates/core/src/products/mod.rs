//! Pushout and pullback products, split conditions in one and several
//! variables, and checkers for the Quillen criteria built on them.

mod hovey;
mod lemmas;
mod pp;
mod quillen;
mod split;

use serde::{Deserialize, Serialize};

pub use hovey::{random_d_monic, HoveyChecker, HoveyReport};
pub use lemmas::{
    lemma_battery, verify_exact_sums, verify_flat_split, verify_hom_left_split,
    verify_pp_adjunction, verify_pp_restriction, verify_pp_square, LemmaBattery, LemmaCheck,
    LemmaKind,
};
pub use pp::{
    adjoint_pullback_product, functor_cube, pullback_product, pushout_product,
    verify_coker_formula, zero_into, CokerFormula, PullbackProduct, PushoutProduct,
};
pub use quillen::{
    check_cot_main, check_quillen_1var, complex_extensions, cot_main_conditions, QuillenCondition, QuillenReport,
};
pub use split::{
    check_nsplit_duality, check_split_1var, extensions, HypothesisReport, NSplitReport,
    PairSetting, Split1Report, SplitReport,
};

/// Outcome of a checker whose statement is an implication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    /// The hypotheses do not hold; the conclusion was not asserted.
    HypothesisFailed,
    ConclusionFailed,
}
